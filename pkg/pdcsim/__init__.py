# Polarization-entangled PDC light: moments, criteria and oracles
