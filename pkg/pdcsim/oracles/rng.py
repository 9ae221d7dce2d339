"""Seeded sample streams for the Monte Carlo oracle.

Each stream is a PCG64 generator keyed by (seed, block), so a block's draws do not
depend on how many workers share the run. Complex Gaussians use the polar
Box-Muller transform z = sqrt(-2 ln u1) exp(2 pi i u2), for which <|z|^2> = 2.
"""
import numpy as np


class SampleStream:
    """PCG64 stream for one block of samples."""

    def __init__(self, seed: int, block: int = 0):
        self.seed = seed
        self.block = block
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))

    def uniform(self, size) -> np.ndarray:
        """Uniform draws on (0, 1]."""
        return 1.0 - self._rng.random(size)

    def complex_gaussian(self, size) -> np.ndarray:
        """Circular complex Gaussians with <|z|^2> = 2."""
        radius = np.sqrt(-2.0 * np.log(self.uniform(size)))
        phase = 2.0 * np.pi * self.uniform(size)
        return radius * np.exp(1j * phase)

    def thermal_amplitudes(self, samples: int, occupation: float, modes: int) -> np.ndarray:
        """Amplitudes with <|a|^2> = occupation in every mode."""
        return np.sqrt(0.5 * occupation) * self.complex_gaussian((samples, modes))


def block_streams(seed: int, n_blocks: int):
    return [SampleStream(seed, block) for block in range(n_blocks)]
