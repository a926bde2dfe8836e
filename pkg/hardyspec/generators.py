'''
Synthetic boundary fields for the gen command and the verification suite.

Each generator is a pydantic spec; synthesize() dispatches on its `generator` tag.
Random fields draw from numpy.random.default_rng(seed), so a seed fixes the output bit
for bit.
'''

import logging
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from hardyspec.clifford_core import Multivector
from hardyspec.errors import DomainError, UnknownGeneratorError
from hardyspec.numerics_config import GENERATOR_DEFAULTS
from hardyspec.spectral import GridField, SpectralField, dft_inverse, plane_wave

logger = logging.getLogger(__name__)


class ConstantSpec(BaseModel):
    generator: Literal['constant'] = 'constant'
    value: complex = 1.0


class PlaneWaveSpec(BaseModel):
    generator: Literal['plane-wave'] = 'plane-wave'
    m: tuple[int, ...]
    value: complex = 1.0


class GaussianRingSpec(BaseModel):
    '''Radial Gaussian ring in frequency; radius and width are fractions of Nyquist'''

    generator: Literal['gaussian-ring'] = 'gaussian-ring'
    radius_fraction: float = Field(GENERATOR_DEFAULTS['ring_radius_fraction'], gt=0, lt=1)
    width_fraction: float = Field(GENERATOR_DEFAULTS['ring_width_fraction'], gt=0)
    value: complex = 1.0
    seed: int | None = None  # random complex modulation of the ring


class RandomBandlimitedSpec(BaseModel):
    '''Random coefficients on |m_k| <= band * d_k/2, zero at DC and on Nyquist rows'''

    generator: Literal['random-bandlimited'] = 'random-bandlimited'
    seed: int = 0
    band_fraction: float = Field(GENERATOR_DEFAULTS['band_fraction'], gt=0, le=1)
    scalar_only: bool = False


GeneratorSpec = Annotated[
    Union[ConstantSpec, PlaneWaveSpec, GaussianRingSpec, RandomBandlimitedSpec],
    Field(discriminator='generator'),
]

GENERATOR_NAMES = ('constant', 'plane-wave', 'gaussian-ring', 'random-bandlimited')


def parse_spec(params):
    '''Validate a dict with a `generator` key into its spec model'''
    if params.get('generator') not in GENERATOR_NAMES:
        raise UnknownGeneratorError(
            f'Unknown generator {params.get("generator")!r}; choose one of {", ".join(GENERATOR_NAMES)}'
        )
    try:
        return TypeAdapter(GeneratorSpec).validate_python(params)
    except ValidationError as e:
        raise DomainError(f'Invalid generator parameters: {e}') from e


def _nyquist_free_mask(header, band_fraction):
    mask = np.ones(header.dims, dtype=bool)
    for axis, m in enumerate(header.lattice_axes()):
        d = header.dims[axis]
        keep = (np.abs(m) <= band_fraction * d / 2) & (m != -d // 2)
        shape = [1] * header.n
        shape[axis] = d
        mask &= keep.reshape(shape)
    mask[(0,) * header.n] = False
    return mask


def ring_profile(header, radius_fraction, width_fraction):
    '''Gaussian ring in |xi| scaled to Nyquist, with DC and Nyquist rows zeroed'''
    nyquist = header.nyquist_radius
    radius, width = radius_fraction * nyquist, width_fraction * nyquist
    profile = np.exp(-((header.frequency_magnitude() - radius) ** 2) / (2 * width**2))
    return profile * _nyquist_free_mask(header, 1.0)


def constant(header, spec):
    return GridField.constant(header, spec.value)


def plane_wave_field(header, spec):
    if len(spec.m) != header.n:
        raise DomainError(f'Plane-wave frequency {spec.m} needs {header.n} components')
    return plane_wave(header, spec.m, Multivector.scalar(spec.value, header.n))


def gaussian_ring(header, spec):
    profile = spec.value * ring_profile(header, spec.radius_fraction, spec.width_fraction)
    if spec.seed is not None:
        rng = np.random.default_rng(spec.seed)
        profile = profile * np.exp(2j * np.pi * rng.random(header.dims))
    coeffs = np.zeros(header.shape, dtype=np.complex128)
    coeffs[0] = profile * header.box_volume
    return dft_inverse(SpectralField(header, coeffs))


def random_bandlimited(header, spec):
    rng = np.random.default_rng(spec.seed)
    channels = 1 if spec.scalar_only else header.n_blades
    coeffs = np.zeros(header.shape, dtype=np.complex128)
    noise = rng.standard_normal((channels, *header.dims)) + 1j * rng.standard_normal(
        (channels, *header.dims)
    )
    coeffs[:channels] = noise * _nyquist_free_mask(header, spec.band_fraction)
    return dft_inverse(SpectralField(header, coeffs * header.box_volume / np.sqrt(header.n_points)))


SYNTHESIZERS = {
    'constant': constant,
    'plane-wave': plane_wave_field,
    'gaussian-ring': gaussian_ring,
    'random-bandlimited': random_bandlimited,
}


def synthesize(header, spec):
    '''Sample the field described by spec on the header's grid'''
    if isinstance(spec, dict):
        spec = parse_spec(spec)
    field = SYNTHESIZERS[spec.generator](header, spec)
    logger.debug(f'Generated {spec.generator} on {header.dims}')
    return field


def mode_sum(header, modes, values):
    '''sum_m e^{2 pi i <x, xi_m>} value_m for a few lattice frequencies m'''
    coeffs = np.zeros(header.shape, dtype=np.complex128)
    for m, value in zip(modes, values):
        coeffs[(slice(None), *header.lattice_position(m))] += value.coeffs * header.box_volume
    return dft_inverse(SpectralField(header, coeffs))
