'''
Riesz transforms, the Clifford Hilbert transformation, Hardy projections and
conjugate-harmonic-system residuals on grid fields.

All transforms are Fourier multipliers applied by left multiplication (see spectral).
The singular multipliers xi/|xi| vanish at the DC frequency, so H^2 = I and the Riesz
identities hold modulo constants; the constant of a field is its DC coefficient.

Residuals of differential systems use second-order centred differences: periodic in
the horizontal variables and across stored x0-slices, which must be evenly spaced.
'''

import logging

import numpy as np

from hardyspec.clifford_core import blade_sign_l, pairing
from hardyspec.errors import DimensionMismatchError, DomainError
from hardyspec.spectral import (
    Side,
    apply_multiplier,
    chi_field,
    dft_forward,
    unit_frequency,
)

logger = logging.getLogger(__name__)


def _check_axis(header, j):
    if not 1 <= j <= header.n:
        raise DomainError(f'Riesz axis must be in 1..{header.n}, got {j}')


def riesz_multiplier(header, j):
    '''-i xi_j/|xi| on the lattice, 0 at DC'''
    _check_axis(header, j)
    return -1j * unit_frequency(header)[j - 1]


def riesz(j, f):
    '''R_j f, the j-th Riesz transform'''
    return apply_multiplier(f, riesz_multiplier(f.header, j))


def hilbert_multiplier(header):
    '''
    Multiplier of H = -sum_k e_k R_k as a blade-major array.

    Assembled from riesz_multiplier so both transforms share one sign convention;
    the result is i xi_/|xi|, a vector-valued multiplier.
    '''
    channels = np.zeros(header.shape, dtype=np.complex128)
    for k in range(1, header.n + 1):
        channels[1 << (k - 1)] = -riesz_multiplier(header, k)
    return channels


def hilbert(f):
    '''H f with e_k acting from the left'''
    return apply_multiplier(f, hilbert_multiplier(f.header))


def hardy_project(sign, f):
    '''(I +- H)/2 f, the multiplier chi_+- applied on the left'''
    return apply_multiplier(f, chi_field(f.header, Side(sign)))


def spectrum_pairing(f, psi):
    '''
    sum_m psi(m) f^(m) prod 1/L_k with psi on the left.

    The lattice analogue of (F^, psi) = int psi^(x) F(x) dx; it vanishes when f lies
    in the range of hardy_project('+') and psi = phi chi_-.
    '''
    f.header.check_compatible(psi.header)
    f_hat = dft_forward(f)
    return pairing(psi.coeffs, f_hat.coeffs, f.header.n) / f.header.box_volume


def hilbert_fixed_point_residual(f):
    '''||H f - f||_2, zero exactly for boundary values of the upper Hardy space (DC-free)'''
    return (hilbert(f) - f).l2_norm()


def riesz_system_residual(f):
    '''
    max_T max_x |f_T + sum_j (-1)^{l_j} R_j f_{T_j}|.

    The boundary form of the generalized Cauchy-Riemann system; it vanishes iff F = H F.
    '''
    header = f.header
    transformed = [riesz(j, f).samples for j in range(1, header.n + 1)]
    worst = 0.0
    for t in range(header.n_blades):
        value = f.samples[t].copy()
        for j in range(1, header.n + 1):
            l, t_j = blade_sign_l(j, t, header.n)
            value += (-1) ** l * transformed[j - 1][t_j]
        worst = max(worst, float(np.abs(value).max()))
    return worst


def spatial_derivative(array, axis, h, periodic=True):
    '''
    Second-order centred difference along one array axis.

    Periodic wraps around the box; otherwise the edges use the one-sided second-order
    stencil, which is exact on linear data.
    '''
    if periodic:
        return (np.roll(array, -1, axis) - np.roll(array, 1, axis)) / (2 * h)
    return np.gradient(array, h, axis=axis, edge_order=2)


def x0_derivative(stack, h0):
    '''Centred difference across slices of a stack (S, ...): values on slices 1..S-2'''
    return (stack[2:] - stack[:-2]) / (2 * h0)


def gcr_residual(components, periodic=True):
    '''
    Largest centred-difference residual of the generalized Cauchy-Riemann system

        sum_{j=0}^n d u_j / d x_j = 0,    d u_j / d x_k = d u_k / d x_j  (j != k),

    for n+1 scalar slabs u_0, ..., u_n on the same x0-slices.
    '''
    header = components[0].header
    n = header.n
    if len(components) != n + 1:
        raise DimensionMismatchError(
            f'A conjugate harmonic system in R^{n + 1} has {n + 1} components, got {len(components)}'
        )
    for slab in components[1:]:
        slab.check_compatible(components[0])
    h0 = components[0].uniform_spacing()
    spacing = header.spacing
    u = [slab.stack()[:, 0] for slab in components]

    def derivative(k, values):
        if k == 0:
            return x0_derivative(values, h0)
        return spatial_derivative(values[1:-1], k, spacing[k - 1], periodic)

    residuals = [np.abs(sum(derivative(j, u[j]) for j in range(n + 1)))]
    residuals += [
        np.abs(derivative(k, u[j]) - derivative(j, u[k]))
        for j in range(n + 1)
        for k in range(j + 1, n + 1)
    ]
    worst = float(max(r.max() for r in residuals))
    logger.debug(f'gcr_residual over {len(residuals)} equations: {worst:.3e}')
    return worst


def generalized_cr_residual(slab, periodic=True):
    '''
    Largest centred-difference residual over all blades T of the system

        d_0 f_T + sum_{j=1}^n (-1)^{l_j} d_j f_{T_j} = 0,

    the component form of D F = 0 with l_j and T_j from blade_sign_l.
    '''
    header = slab.header
    h0 = slab.uniform_spacing()
    stack = slab.stack()
    d0 = x0_derivative(stack, h0)
    inner = stack[1:-1]
    dj = [
        spatial_derivative(inner, k + 1, h, periodic)
        for k, h in enumerate(header.spacing, start=1)
    ]
    worst = 0.0
    for t in range(header.n_blades):
        value = d0[:, t].copy()
        for j in range(1, header.n + 1):
            l, t_j = blade_sign_l(j, t, header.n)
            value += (-1) ** l * dj[j - 1][:, t_j]
        worst = max(worst, float(np.abs(value).max()))
    return worst
