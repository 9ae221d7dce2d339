# Brute-force verifiers: truncated Fock space and Monte Carlo
