import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from apfunc import Spectrum


@pytest.fixture
def res123() -> Spectrum:
    """The resonance-rich integer spectrum {1, 2, 3} with unit coefficients."""
    return Spectrum(np.array([1.0, 2.0, 3.0]),
                    np.array([1.0, 1.0, 1.0], dtype=complex))


@pytest.fixture
def single_cosine() -> Spectrum:
    """lambda = 1, c = 1, so S(y) = 2 cos y."""
    return Spectrum(np.array([1.0]), np.array([1.0 + 0.0j]))


def random_spectrum(rng, size: int, integer_freqs: bool = False) -> Spectrum:
    if integer_freqs:
        freqs = np.sort(rng.choice(np.arange(1, 4 * size + 1), size=size,
                                   replace=False)).astype(float)
    else:
        freqs = np.sort(rng.uniform(0.5, 20.0, size=size))
        while len(np.unique(freqs)) < size:
            freqs = np.sort(rng.uniform(0.5, 20.0, size=size))
    coefs = rng.normal(size=size) + 1j * rng.normal(size=size)
    return Spectrum(freqs, coefs)
