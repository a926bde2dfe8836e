'''
Bergman-space representation F(x) = int e^+(x, xi) G(xi) dxi and the weighted spectral
norm inequality

    (int |chi_+(xi) G(xi)|^q / (2 pi p |xi|)^{q/p} dxi)^{1/q} <= ||F||_{A^p},   1 < p <= 2,
    sup_xi |chi_+(xi) G(xi)| / (2 pi |xi|) <= ||F||_{A^1}.

Densities live on the frequency lattice of a FieldHeader; integrals over xi are lattice
sums weighted by prod 1/L_k, and the x0 integral of the A^p norm runs over a geometric
grid with exponential end corrections.
'''

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.integrate
from pydantic import BaseModel

from hardyspec.clifford_core import Multivector, multiply_arrays
from hardyspec.errors import (
    DimensionMismatchError,
    DomainError,
    SingularWeightError,
    SlabError,
)
from hardyspec.extension import SlabField
from hardyspec.numerics_config import BERGMAN_TAIL, BERGMAN_X0_NODES
from hardyspec.spectral import (
    FieldHeader,
    Side,
    SpectralField,
    chi_field,
    dft_inverse,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BergmanDensity:
    '''
    The function G on the frequency lattice: values[T, m_1, ..., m_n] in FFT order.
    '''

    header: FieldHeader
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != self.header.shape:
            raise DimensionMismatchError(
                f'Density must have shape {self.header.shape}, got {values.shape}'
            )
        if not np.all(np.isfinite(values)):
            raise DomainError('Density values must be finite')
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    def hardy_part(self):
        '''chi_+(xi) G(xi) at every lattice frequency'''
        return multiply_arrays(chi_field(self.header, Side.PLUS), self.values, self.header.n)

    def support_radius(self):
        '''Smallest |xi| at which G is nonzero, or None for the zero density'''
        magnitude = self.header.frequency_magnitude()
        nonzero = np.any(self.values != 0, axis=0)
        return float(magnitude[nonzero].min()) if nonzero.any() else None


class NormEstimate(BaseModel):
    '''A^p norm with the pieces of its x0 integral'''

    p: float
    value: float
    interior: float  # integral over [x0_min, x0_max]
    head: float  # fitted exponential over (0, x0_min)
    tail: float  # fitted exponential over (x0_max, inf)
    truncation_bound: float  # relative size of head + tail in the p-th power

    model_config = {'frozen': True}


def single_mode_density(header, m, value=1.0):
    '''G equal to value at the lattice frequency m and zero elsewhere'''
    if isinstance(value, (int, float, complex)):
        value = Multivector.scalar(value, header.n)
    return BergmanDensity(header, SpectralField.single_mode(header, m, value).coeffs)


def gaussian_ring_density(header, radius, width, value=1.0):
    '''
    G(xi) = exp(-(|xi| - radius)^2 / (2 width^2)) value with G = 0 at DC and Nyquist rows.
    '''
    if not radius > 0 or not width > 0:
        raise DomainError(f'Ring radius and width must be positive, got {radius}, {width}')
    if isinstance(value, (int, float, complex)):
        value = Multivector.scalar(value, header.n)
    profile = np.exp(-((header.frequency_magnitude() - radius) ** 2) / (2 * width**2))
    profile[(0,) * header.n] = 0
    for axis, d in enumerate(header.dims):
        index = [slice(None)] * header.n
        index[axis] = d // 2
        profile[tuple(index)] = 0
    return BergmanDensity(
        header, value.coeffs.reshape((-1,) + (1,) * header.n) * profile[None]
    )


def _decay(header, x0):
    return np.exp(-2 * np.pi * x0 * header.frequency_magnitude())


def bergman_from_density(density, x):
    '''
    F(x) = sum_m e^+(x, xi_m) G(xi_m) prod 1/L_k at one point x of the upper half-space.
    '''
    header = density.header
    if len(x.vec) != header.n:
        raise DimensionMismatchError(
            f'Point in R^{len(x.vec) + 1} does not match the density dimension {header.n}'
        )
    if not x.x0 > 0:
        raise DomainError(f'Bergman representation needs x0 > 0, got {x.x0}')
    xi = header.frequency_grid()
    phase = np.exp(2j * np.pi * np.tensordot(np.array(x.vec), xi, axes=1))
    weights = phase * _decay(header, x.x0)
    total = np.sum(density.hardy_part() * weights, axis=header.grid_axes)
    return Multivector(header.n, total / header.box_volume)


def bergman_slice(density, x0):
    '''The representation on the whole horizontal grid at height x0'''
    if not x0 > 0:
        raise DomainError(f'Bergman representation needs x0 > 0, got {x0}')
    header = density.header
    return dft_inverse(SpectralField(header, _decay(header, x0) * density.hardy_part()))


def bergman_slab(density, x0_values):
    header = density.header
    hardy_part = density.hardy_part()
    slices = tuple(
        dft_inverse(SpectralField(header, _decay(header, x0) * hardy_part))
        for x0 in x0_values
    )
    return SlabField(header, x0_values, slices)


def geometric_x0_grid(density, num=BERGMAN_X0_NODES, tail=BERGMAN_TAIL):
    '''
    Geometric heights from min(h)/4 to x0_max = ln(1/tail) / (2 pi xi_min).

    Past x0_max every mode of the density has decayed by at least the factor tail.
    '''
    header = density.header
    x0_min = min(header.spacing) / 4
    xi_min = density.support_radius()
    if xi_min is None:
        return np.geomspace(x0_min, 1.0, num)
    if xi_min == 0:
        raise SingularWeightError('Density has a DC component; F does not decay in x0')
    x0_max = np.log(1 / tail) / (2 * np.pi * xi_min)
    return np.geomspace(x0_min, max(x0_max, 2 * x0_min), num)


def _decay_rate(near, far, gap):
    '''Exponent beta of I(x0) ~ e^{-beta x0} through two slice integrals'''
    if near <= 0 or far <= 0:
        return None
    return float(np.log(near / far) / gap)


def bergman_norm(slab, p, rule: Literal['trapezoid', 'simpson'] = 'trapezoid'):
    '''
    ||F||_{A^p} over the periodic box: (int_0^inf sum_x |F(x0 + x_)|^p prod h_k dx0)^{1/p}.

    The x0 integral uses the chosen rule on the slab heights; the ranges (0, x0_min) and
    (x0_max, inf) are closed with exponentials fitted through the two end slices.
    '''
    if p < 1:
        raise DomainError(f'Bergman norm needs p >= 1, got {p}')
    if p == np.inf:
        raise DomainError('Bergman norm is defined for finite p')
    x0 = slab.x0_values
    if x0.size < 2:
        raise SlabError(f'Bergman norm needs at least 2 slices, got {x0.size}')
    cell = slab.header.cell_volume
    integrals = np.array([np.sum(s.pointwise_norm() ** p) * cell for s in slab.slices])
    if rule == 'trapezoid':
        interior = float(scipy.integrate.trapezoid(integrals, x0))
    elif rule == 'simpson':
        interior = float(scipy.integrate.simpson(integrals, x=x0))
    else:
        raise DomainError(f'Unknown x0 quadrature rule {rule!r}')

    head = 0.0
    beta = _decay_rate(integrals[0], integrals[1], x0[1] - x0[0])
    if beta is not None:
        head = float(
            integrals[0] * (np.expm1(beta * x0[0]) / beta if beta != 0 else x0[0])
        )
    tail = 0.0
    if integrals[-1] > 0:
        beta = _decay_rate(integrals[-2], integrals[-1], x0[-1] - x0[-2])
        if beta is None or beta <= 0:
            raise SlabError(
                f'Slab does not decay at x0 = {x0[-1]}; the A^{p} norm is not finite there'
            )
        tail = float(integrals[-1] / beta)

    total = interior + head + tail
    estimate = NormEstimate(
        p=p,
        value=total ** (1 / p),
        interior=interior,
        head=head,
        tail=tail,
        truncation_bound=(head + tail) / total if total > 0 else 0.0,
    )
    logger.debug(f'bergman_norm: {estimate}')
    return estimate


def weighted_spectral_norm(density, p, sup_form=False):
    '''
    Left side of the A^p inequality as a lattice sum.

    With sup_form (p = 1 only) this is max |chi_+ G| / (2 pi |xi|); otherwise
    (sum_m |chi_+ G|^q / (2 pi p |xi|)^{q/p} prod 1/L_k)^{1/q} with q = p/(p-1).
    '''
    header = density.header
    if sup_form:
        if p != 1:
            raise DomainError(f'The sup form belongs to p = 1, got p = {p}')
    elif not 1 < p <= 2:
        raise DomainError(f'Weighted spectral norm needs 1 < p <= 2 (or sup_form), got {p}')
    if np.any(density.values[(slice(None),) + (0,) * header.n] != 0):
        raise SingularWeightError('The weight 1/|xi| is singular at DC; G(0) must vanish')

    magnitude = header.frequency_magnitude()
    nonzero = magnitude > 0
    hardy = np.sqrt(np.sum(np.abs(density.hardy_part()) ** 2, axis=0))[nonzero]
    radius = magnitude[nonzero]
    if sup_form:
        return float(np.max(hardy / (2 * np.pi * radius)))
    q = p / (p - 1)
    weighted = hardy / (2 * np.pi * p * radius) ** (1 / p)
    peak = np.max(weighted)
    if peak == 0:
        return 0.0
    # scaled by the peak so q -> infinity as p -> 1 cannot overflow
    total = np.sum((weighted / peak) ** q) / header.box_volume
    return float(peak * total ** (1 / q))
