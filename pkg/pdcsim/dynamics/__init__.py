# Lossless and cavity (Langevin) moment dynamics
