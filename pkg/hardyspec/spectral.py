'''
Discrete Fourier analysis of Clifford-valued grid fields.

Conventions used throughout the package:

- A FieldHeader describes a periodic box [-L_k/2, L_k/2) sampled with d_k (even)
  points per axis, spacing h_k = L_k/d_k.
- Field samples are stored blade-major: an array of shape (2^n, d_1, ..., d_n).
- Spectral coefficients live on the signed integer lattice m_k in [-d_k/2, d_k/2),
  stored in FFT order (numpy.fft.fftfreq); the Nyquist row m_k = -d_k/2 counts as a
  negative frequency. The physical frequency is xi_k = m_k / L_k.
- The forward transform emulates the continuous one, f^(xi) = int e^{-2 pi i <x,xi>} f(x) dx,
  by a Riemann sum scaled by prod h_k; the inverse is the lattice sum scaled by
  prod 1/L_k. The complex unit commutes with every blade, so transforms act channel by
  channel.
- Spectral multipliers act by LEFT Clifford multiplication on the coefficients.
- DC policy: chi_+(0) = chi_-(0) = 1/2 (scalar), and every xi/|xi| multiplier is 0 at xi = 0.
'''

import logging
import math
from dataclasses import dataclass
from enum import Enum
from numbers import Number
from typing import Literal

import numpy as np
import scipy.fft
from pydantic import BaseModel, model_validator

from hardyspec.clifford_core import (
    Multivector,
    Paravector,
    check_dimension,
    conjugation_signs,
    multiply_arrays,
    pairing,
)
from hardyspec.errors import (
    DimensionMismatchError,
    DomainError,
    HeaderMismatchError,
    InvalidEnvelopeError,
)
from hardyspec.numerics_config import BLADE_ORDER, FFT_WORKERS

logger = logging.getLogger(__name__)


class Side(str, Enum):
    '''Upper (+) or lower (-) Hardy side'''

    PLUS = '+'
    MINUS = '-'

    @property
    def factor(self):
        return 1 if self is Side.PLUS else -1


class FieldHeader(BaseModel):
    '''Grid metadata shared by every field on the same periodic box'''

    n: int
    dims: tuple[int, ...]
    extent: tuple[float, ...]
    blade_order: Literal['bitmask-v1'] = BLADE_ORDER

    model_config = {'frozen': True}

    @model_validator(mode='after')
    def _check_grid(self):
        check_dimension(self.n)
        if len(self.dims) != self.n or len(self.extent) != self.n:
            raise ValueError(
                f'n={self.n} needs {self.n} dims and extents, got {self.dims} and {self.extent}'
            )
        if any(d < 2 or d % 2 for d in self.dims):
            raise ValueError(f'Sample counts must be even and >= 2, got {self.dims}')
        if any(not (np.isfinite(length) and length > 0) for length in self.extent):
            raise ValueError(f'Box lengths must be finite and positive, got {self.extent}')
        return self

    @classmethod
    def cube(cls, n, points, length=1.0):
        '''Header with the same sample count and box length on every axis'''
        return cls(n=n, dims=(points,) * n, extent=(float(length),) * n)

    @property
    def n_blades(self):
        return 1 << self.n

    @property
    def shape(self):
        '''Shape of a blade-major sample array'''
        return (self.n_blades, *self.dims)

    @property
    def n_points(self):
        return math.prod(self.dims)

    @property
    def spacing(self):
        return tuple(length / d for length, d in zip(self.extent, self.dims))

    @property
    def cell_volume(self):
        '''prod h_k, the quadrature weight of one sample'''
        return float(np.prod(self.spacing))

    @property
    def box_volume(self):
        '''prod L_k'''
        return float(np.prod(self.extent))

    @property
    def grid_axes(self):
        '''Axes of the array dimensions that run over grid points'''
        return tuple(range(1, self.n + 1))

    @property
    def nyquist_radius(self):
        '''Radius of the largest frequency ball free of Nyquist rows'''
        return min(d / (2 * length) for d, length in zip(self.dims, self.extent))

    def check_compatible(self, other):
        if self != other:
            raise HeaderMismatchError(f'Incompatible grids: {self} vs {other}')

    def coordinates(self):
        '''Per-axis sample positions x_k = -L_k/2 + i h_k'''
        return [
            -length / 2 + np.arange(d) * length / d
            for d, length in zip(self.dims, self.extent)
        ]

    def coordinate_grid(self):
        '''Array (n, d_1, ..., d_n) of sample positions'''
        return np.stack(np.meshgrid(*self.coordinates(), indexing='ij'))

    def lattice_axes(self):
        '''Per-axis signed integer frequencies in FFT order'''
        return [np.fft.fftfreq(d, 1 / d).astype(np.int64) for d in self.dims]

    def lattice(self):
        '''Array (n, d_1, ..., d_n) of integer frequency vectors m'''
        return np.stack(np.meshgrid(*self.lattice_axes(), indexing='ij'))

    def frequency_grid(self):
        '''Array (n, d_1, ..., d_n) of physical frequencies xi_k = m_k / L_k'''
        return np.stack(
            np.meshgrid(
                *[m / length for m, length in zip(self.lattice_axes(), self.extent)],
                indexing='ij',
            )
        )

    def frequency_magnitude(self):
        return np.sqrt(np.sum(self.frequency_grid() ** 2, axis=0))

    def lattice_position(self, m):
        '''Array index of the signed integer frequency m'''
        if len(m) != self.n:
            raise DimensionMismatchError(f'Frequency {m} does not have {self.n} components')
        index = []
        for mk, d in zip(m, self.dims):
            if not -d // 2 <= mk < d // 2:
                raise DomainError(f'Frequency {tuple(m)} is outside the lattice {self.dims}')
            index.append(mk % d)
        return tuple(index)

    def origin_phase(self):
        '''prod_k (-1)^{m_k}: shift of the DFT from index 0 to the box corner -L/2'''
        return np.prod(
            np.meshgrid(
                *[np.where(m % 2, -1.0, 1.0) for m in self.lattice_axes()], indexing='ij'
            ),
            axis=0,
        )


def _as_channels(header, array, name):
    array = np.array(array, dtype=np.complex128)
    if array.shape != header.shape:
        raise DimensionMismatchError(
            f'{name} must have shape {header.shape} for this header, got {array.shape}'
        )
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class GridField:
    '''
    A Clifford-valued function sampled on the grid of its header.

    samples[T, i_1, ..., i_n] is the coefficient of e_T at the grid point with indices i.
    '''

    header: FieldHeader
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, 'samples', _as_channels(self.header, self.samples, 'samples')
        )

    @classmethod
    def zeros(cls, header):
        return cls(header, np.zeros(header.shape))

    @classmethod
    def from_scalar(cls, header, values):
        '''Embed a complex array of shape dims as the scalar component'''
        samples = np.zeros(header.shape, dtype=np.complex128)
        samples[0] = values
        return cls(header, samples)

    @classmethod
    def constant(cls, header, value):
        '''Field equal to one Multivector (or scalar) everywhere'''
        if isinstance(value, Number):
            value = Multivector.scalar(value, header.n)
        samples = np.broadcast_to(
            value.coeffs.reshape((-1,) + (1,) * header.n), header.shape
        )
        return cls(header, samples)

    def at(self, index):
        '''Sample at a grid index as a Multivector'''
        return Multivector(self.header.n, self.samples[(slice(None), *index)])

    def component(self, mask):
        return self.samples[mask]

    def __add__(self, other):
        self.header.check_compatible(other.header)
        return GridField(self.header, self.samples + other.samples)

    def __sub__(self, other):
        self.header.check_compatible(other.header)
        return GridField(self.header, self.samples - other.samples)

    def __neg__(self):
        return GridField(self.header, -self.samples)

    def __mul__(self, scalar):
        return GridField(self.header, self.samples * scalar)

    __rmul__ = __mul__

    def left_multiply(self, value):
        '''value * F(x) at every point, value a Multivector'''
        coeffs = value.coeffs.reshape((-1,) + (1,) * self.header.n)
        return GridField(self.header, multiply_arrays(coeffs, self.samples, self.header.n))

    def pointwise_norm(self):
        '''|F(x)| at every grid point'''
        return np.sqrt(np.sum(np.abs(self.samples) ** 2, axis=0))

    def l2_norm(self):
        return lp_norm(self, 2)

    def max_norm(self):
        return float(self.pointwise_norm().max())

    def is_scalar(self):
        return not np.any(self.samples[1:])


@dataclass(frozen=True, eq=False)
class SpectralField:
    '''
    Lattice Fourier coefficients of a GridField, blade-major and in FFT order.
    '''

    header: FieldHeader
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _as_channels(self.header, self.coeffs, 'coeffs'))

    @classmethod
    def zeros(cls, header):
        return cls(header, np.zeros(header.shape))

    @classmethod
    def single_mode(cls, header, m, value):
        '''Coefficient value (Multivector) at the lattice frequency m, zero elsewhere'''
        coeffs = np.zeros(header.shape, dtype=np.complex128)
        coeffs[(slice(None), *header.lattice_position(m))] = value.coeffs
        return cls(header, coeffs)

    def at(self, m):
        '''Coefficient at the signed integer frequency m'''
        return Multivector(
            self.header.n, self.coeffs[(slice(None), *self.header.lattice_position(m))]
        )

    def __add__(self, other):
        self.header.check_compatible(other.header)
        return SpectralField(self.header, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self.header.check_compatible(other.header)
        return SpectralField(self.header, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return SpectralField(self.header, self.coeffs * scalar)

    __rmul__ = __mul__

    def left_multiply(self, multiplier):
        '''
        Apply a multiplier field by left Clifford multiplication.

        multiplier is either a real/complex array of shape dims (a scalar multiplier)
        or a blade-major array of shape (2^n, *dims).
        '''
        multiplier = np.asarray(multiplier)
        if multiplier.shape == self.header.dims:
            return SpectralField(self.header, multiplier * self.coeffs)
        return SpectralField(
            self.header, multiply_arrays(multiplier, self.coeffs, self.header.n)
        )

    def pointwise_norm(self):
        return np.sqrt(np.sum(np.abs(self.coeffs) ** 2, axis=0))

    def l2_norm(self):
        '''(sum_m |F(m)|^2 prod 1/L_k)^{1/2}, equal to the L^2 norm of the field'''
        return float(
            np.sqrt(np.sum(np.abs(self.coeffs) ** 2) / self.header.box_volume)
        )


def lp_norm(field, p):
    '''(sum_x |F(x)|^p prod h_k)^{1/p}, or the max norm for p = inf'''
    if p == np.inf:
        return field.max_norm()
    if p < 1:
        raise DomainError(f'Need p >= 1, got {p}')
    return float(
        (np.sum(field.pointwise_norm() ** p) * field.header.cell_volume) ** (1 / p)
    )


def dft_forward(f):
    '''Riemann-sum emulation of the continuous Fourier transform, channel by channel'''
    header = f.header
    coeffs = scipy.fft.fftn(f.samples, axes=header.grid_axes, workers=FFT_WORKERS)
    return SpectralField(header, coeffs * (header.origin_phase() * header.cell_volume))


def dft_inverse(spectrum):
    '''Lattice sum g(x) = sum_m e^{2 pi i <x, xi_m>} g(m) prod 1/L_k'''
    header = spectrum.header
    shifted = spectrum.coeffs * header.origin_phase()
    samples = scipy.fft.ifftn(shifted, axes=header.grid_axes, workers=FFT_WORKERS)
    return GridField(header, samples / header.cell_volume)


def apply_multiplier(f, multiplier):
    '''dft_inverse(multiplier * dft_forward(f)) with left multiplication'''
    return dft_inverse(dft_forward(f).left_multiply(multiplier))


def unit_frequency(header):
    '''xi/|xi| on the lattice, shape (n, *dims), with the DC value set to 0'''
    xi = header.frequency_grid()
    magnitude = np.sqrt(np.sum(xi**2, axis=0))
    safe = np.where(magnitude > 0, magnitude, 1.0)
    return np.where(magnitude > 0, xi / safe, 0.0)


def chi_projector(sign, xi):
    '''chi_+-(xi) = 1/2 (1 +- i xi/|xi|); the scalar 1/2 at xi = 0'''
    side = Side(sign)
    xi = np.asarray(xi, dtype=np.float64)
    n = xi.size
    coeffs = np.zeros(1 << n, dtype=np.complex128)
    coeffs[0] = 0.5
    magnitude = float(np.sqrt(np.sum(xi**2)))
    if magnitude > 0:
        for k in range(n):
            coeffs[1 << k] = side.factor * 0.5j * xi[k] / magnitude
    return Multivector(n, coeffs)


def chi_field(header, sign):
    '''chi_+- sampled on the whole lattice as a blade-major multiplier array'''
    side = Side(sign)
    unit = unit_frequency(header)
    channels = np.zeros(header.shape, dtype=np.complex128)
    channels[0] = 0.5
    for k in range(header.n):
        channels[1 << k] = side.factor * 0.5j * unit[k]
    return channels


def e_kernel(sign, x, xi):
    '''
    e^+-(x, xi) = e^{2 pi i <x_, xi>} e^{-+ 2 pi x0 |xi|} chi_+-(xi).

    Only the decaying direction is accepted: x0 >= 0 for '+', x0 <= 0 for '-'.
    '''
    side = Side(sign)
    xi = np.asarray(xi, dtype=np.float64)
    if len(x.vec) != xi.size:
        raise DimensionMismatchError(
            f'Point in R^{len(x.vec) + 1} does not match frequency in R^{xi.size}'
        )
    if side.factor * x.x0 < 0:
        raise DomainError(
            f'e^{side.value} grows for x0 = {x.x0}; it is only defined on its decaying half-space'
        )
    magnitude = float(np.sqrt(np.sum(xi**2)))
    phase = np.exp(2j * np.pi * np.dot(x.vec, xi)) * np.exp(
        -side.factor * 2 * np.pi * x.x0 * magnitude
    )
    return chi_projector(side, xi) * complex(phase)


def plancherel_defect(f, g):
    '''
    |sum_x f(x) g-bar(x) prod h - sum_m f^(m) g^-bar(m) prod 1/L|.

    Both pairings are Clifford products summed over the grid or the lattice; with the
    transform normalization used here they agree exactly in exact arithmetic.
    '''
    f.header.check_compatible(g.header)
    header = f.header
    n = header.n
    conj_signs = _conjugation_broadcast(header, g.samples.ndim)
    spatial = pairing(f.samples, conj_signs * np.conj(g.samples), n) * header.cell_volume
    f_hat, g_hat = dft_forward(f), dft_forward(g)
    spectral = pairing(
        f_hat.coeffs, conj_signs * np.conj(g_hat.coeffs), n
    ) / header.box_volume
    return (spatial - spectral).norm()


def _conjugation_broadcast(header, ndim):
    return conjugation_signs(header.n).reshape((-1,) + (1,) * (ndim - 1))


def conjugate_field(f):
    '''Pointwise Clifford conjugate of a GridField'''
    return GridField(
        f.header, _conjugation_broadcast(f.header, f.samples.ndim) * np.conj(f.samples)
    )


class PsiEnvelope(BaseModel):
    '''
    Smooth radial bump supported in the annulus inner_radius < |xi| < outer_radius.

    The profile is exp(4 - 1/(t(1-t))) in t = (|xi| - r0)/(r1 - r0), which peaks at 1.
    A seed adds a random complex scalar modulation, still vanishing outside the annulus.
    '''

    inner_radius: float
    outer_radius: float
    amplitude: complex = 1.0
    seed: int | None = None

    model_config = {'frozen': True}

    def profile(self, magnitude):
        width = self.outer_radius - self.inner_radius
        t = (magnitude - self.inner_radius) / width
        inside = (t > 0) & (t < 1)
        safe = np.where(inside, t, 0.5)
        return np.where(inside, np.exp(4 - 1 / (safe * (1 - safe))), 0.0)


def make_psi_minus(header, envelope):
    '''
    Lattice test function psi = phi chi_- with scalar phi from the envelope.

    psi vanishes for |xi| <= inner_radius and beyond outer_radius, and psi chi_+ = 0
    at every lattice frequency.
    '''
    if not envelope.inner_radius > 0:
        raise InvalidEnvelopeError(
            f'Envelope must vanish near the origin, inner radius {envelope.inner_radius}'
        )
    if envelope.outer_radius <= envelope.inner_radius:
        raise InvalidEnvelopeError(
            f'Outer radius {envelope.outer_radius} must exceed inner radius {envelope.inner_radius}'
        )
    if envelope.outer_radius > header.nyquist_radius:
        raise InvalidEnvelopeError(
            f'Outer radius {envelope.outer_radius} exceeds the Nyquist radius {header.nyquist_radius}'
        )
    phi = envelope.amplitude * envelope.profile(header.frequency_magnitude())
    if envelope.seed is not None:
        rng = np.random.default_rng(envelope.seed)
        phi = phi * (
            rng.standard_normal(header.dims) + 1j * rng.standard_normal(header.dims)
        )
    logger.debug(
        f'psi_minus on {header.dims}: annulus ({envelope.inner_radius}, {envelope.outer_radius})'
    )
    return SpectralField(header, phi * chi_field(header, Side.MINUS))


def plane_wave(header, m, value=1.0):
    '''e^{2 pi i <x, xi_m>} value sampled on the grid'''
    if isinstance(value, Number):
        value = Multivector.scalar(value, header.n)
    xi = np.array([mk / length for mk, length in zip(m, header.extent)])
    phase = np.exp(2j * np.pi * np.tensordot(xi, header.coordinate_grid(), axes=1))
    return GridField(header, value.coeffs.reshape((-1,) + (1,) * header.n) * phase)


def e_kernel_field(sign, header, x0, m):
    '''x_ -> e^+-(x0 + x_, xi_m) sampled on the horizontal grid'''
    xi = np.array([mk / length for mk, length in zip(m, header.extent)])
    value = e_kernel(sign, Paravector(x0=x0, vec=(0.0,) * header.n), xi)
    return plane_wave(header, m, value)
