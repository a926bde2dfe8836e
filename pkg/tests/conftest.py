'''
Shared fixtures: a seeded generator, small grids and band-limited fields.
'''

import logging

import numpy as np
import pytest

from hardyspec.clifford_core import Multivector
from hardyspec.generators import RandomBandlimitedSpec, random_bandlimited
from hardyspec.spectral import FieldHeader

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[1, 2], ids=['n1', 'n2'])
def header(request):
    return FieldHeader.cube(request.param, 32)


@pytest.fixture
def header2():
    return FieldHeader.cube(2, 32)


@pytest.fixture
def random_multivector(rng):
    def make(n):
        size = 1 << n
        return Multivector(n, rng.standard_normal(size) + 1j * rng.standard_normal(size))

    return make


@pytest.fixture
def band_field(rng):
    '''Factory for DC-free, Nyquist-free random fields on a header'''

    def make(header, scalar_only=False):
        spec = RandomBandlimitedSpec(seed=int(rng.integers(2**31)), scalar_only=scalar_only)
        return random_bandlimited(header, spec)

    return make
