# Mode bookkeeping, Gaussian second moments and the Wick engine
