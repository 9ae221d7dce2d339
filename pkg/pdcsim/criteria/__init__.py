# Separability criterion and n-particle correlators
