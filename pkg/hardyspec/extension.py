'''
Monogenic extension of boundary data into the upper half-space, plus monogenicity
diagnostics.

Three routes extend a boundary field f to height x0 > 0 on the same horizontal grid:

- poisson_extend: the Poisson multiplier e^{-2 pi x0 |xi|}, componentwise harmonic;
- spectral_extend: e^{-2 pi x0 |xi|} chi_+(xi), i.e. the lattice sum of e^+(x, xi) f^(xi);
- cauchy_extend: quadrature of the Cauchy kernel E(x - y) f(y) over the grid box.

Slabs stack extensions at increasing heights and feed the Dirac and mean-value checks.
'''

import logging
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.special
from scipy.interpolate import RegularGridInterpolator

from hardyspec.clifford_core import Multivector, multiply_arrays, product_table
from hardyspec.errors import DimensionMismatchError, DomainError, SlabError
from hardyspec.numerics_config import (
    BALL_INTERPOLATION,
    BALL_QUADRATURE_ORDER,
    FFT_WORKERS,
)
from hardyspec.spectral import (
    FieldHeader,
    GridField,
    Side,
    apply_multiplier,
    chi_field,
    lp_norm,
)
from hardyspec.transforms import riesz, spatial_derivative, x0_derivative

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SlabField:
    '''
    A field on a stack of horizontal slices x0_values[0] < x0_values[1] < ...
    '''

    header: FieldHeader
    x0_values: np.ndarray
    slices: tuple

    def __post_init__(self):
        x0_values = np.array(self.x0_values, dtype=np.float64).reshape(-1)
        slices = tuple(self.slices)
        if x0_values.size == 0 or x0_values.size != len(slices):
            raise SlabError(
                f'Slab needs one slice per height, got {x0_values.size} heights and {len(slices)} slices'
            )
        if np.any(x0_values <= 0) or np.any(np.diff(x0_values) <= 0):
            raise SlabError(f'Heights must be positive and increasing, got {x0_values}')
        for grid_slice in slices:
            self.header.check_compatible(grid_slice.header)
        x0_values.flags.writeable = False
        object.__setattr__(self, 'x0_values', x0_values)
        object.__setattr__(self, 'slices', slices)

    @classmethod
    def from_stack(cls, header, x0_values, stack):
        return cls(header, x0_values, tuple(GridField(header, s) for s in stack))

    def stack(self):
        '''Samples of all slices, shape (S, 2^n, *dims)'''
        return np.stack([s.samples for s in self.slices])

    def uniform_spacing(self):
        '''Common x0 step; centred differences need at least three even slices'''
        if self.x0_values.size < 3:
            raise SlabError(f'Need at least 3 slices, got {self.x0_values.size}')
        steps = np.diff(self.x0_values)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise SlabError(f'Slices are not evenly spaced in x0: steps {steps}')
        return float(steps[0])

    def check_compatible(self, other):
        self.header.check_compatible(other.header)
        if not np.array_equal(self.x0_values, other.x0_values):
            raise SlabError('Slabs are sampled at different heights')

    def __mul__(self, scalar):
        return SlabField(self.header, self.x0_values, tuple(s * scalar for s in self.slices))

    __rmul__ = __mul__


def _check_height(x0):
    if not x0 > 0:
        raise DomainError(f'Extension height must be positive, got x0 = {x0}')


def poisson_multiplier(header, x0):
    return np.exp(-2 * np.pi * x0 * header.frequency_magnitude())


def poisson_extend(f, x0):
    '''Harmonic extension: multiplier e^{-2 pi x0 |xi|}, 1 at DC'''
    _check_height(x0)
    return apply_multiplier(f, poisson_multiplier(f.header, x0))


def spectral_extend(f, x0):
    '''Hardy-part extension: multiplier e^{-2 pi x0 |xi|} chi_+(xi)'''
    _check_height(x0)
    header = f.header
    multiplier = poisson_multiplier(header, x0) * chi_field(header, Side.PLUS)
    return apply_multiplier(f, multiplier)


def sigma(n):
    '''sigma_n = pi^{(n+1)/2} / Gamma((n+1)/2), half the area of the unit sphere in R^{n+1}'''
    return float(np.pi ** ((n + 1) / 2) / scipy.special.gamma((n + 1) / 2))


def cauchy_kernel(x):
    '''E(x) = x-bar / (2 sigma_n |x|^{n+1}) at a nonzero paravector x'''
    size = x.norm()
    if size == 0:
        raise DomainError('The Cauchy kernel is singular at the origin')
    scale = 1 / (2 * sigma(x.n) * size ** (x.n + 1))
    coeffs = np.zeros(1 << x.n, dtype=np.complex128)
    coeffs[0] = x.x0 * scale
    for k, v in enumerate(x.vec):
        coeffs[1 << k] = -v * scale
    return Multivector(x.n, coeffs)


def cauchy_kernel_samples(header, x0):
    '''
    E(x0 + z_) for every grid displacement z_ = m h, -d_k <= m_k < d_k, in FFT order.

    Shape (2^n, 2 d_1, ..., 2 d_n): every difference x_ - y_ of two grid points appears
    exactly once, unwrapped.
    '''
    n = header.n
    displacements = np.stack(
        np.meshgrid(
            *[np.fft.fftfreq(2 * d, 1 / (2 * d)) * h for d, h in zip(header.dims, header.spacing)],
            indexing='ij',
        )
    )
    radius = np.sqrt(x0**2 + np.sum(displacements**2, axis=0))
    scale = 1 / (2 * sigma(n) * radius ** (n + 1))
    channels = np.zeros((header.n_blades, *radius.shape), dtype=np.complex128)
    channels[0] = x0 * scale
    for k in range(n):
        channels[1 << k] = -displacements[k] * scale
    return channels


def cauchy_extend(f, x0):
    '''
    F(x0 + x_) = sum_y E(x0 + x_ - y_) f(y_) prod h_k with y_ over the grid box.

    The samples count as zero outside the box, so data should be localized inside it;
    periodic copies are not summed. The sum is a linear convolution (kernel on the
    left) evaluated with zero-padded FFTs, the same finite sum as the direct double loop.
    '''
    _check_height(x0)
    header = f.header
    axes = header.grid_axes
    padded = [2 * d for d in header.dims]
    kernel_hat = scipy.fft.fftn(
        cauchy_kernel_samples(header, x0), axes=axes, workers=FFT_WORKERS
    )
    samples_hat = scipy.fft.fftn(f.samples, s=padded, axes=axes, workers=FFT_WORKERS)
    product = multiply_arrays(kernel_hat, samples_hat, header.n)
    samples = scipy.fft.ifftn(product, axes=axes, workers=FFT_WORKERS)
    window = (slice(None),) + tuple(slice(0, d) for d in header.dims)
    return GridField(header, samples[window] * header.cell_volume)


def conjugate_harmonic_extend(f0, x0):
    '''
    Conjugate harmonic system (u_0, ..., u_n) = (P f0, P R_1 f0, ..., P R_n f0) at x0.

    U = u_0 - sum_j u_j e_j equals 2 spectral_extend(f0, x0) for scalar f0.
    '''
    if not f0.is_scalar():
        raise DomainError('Conjugate harmonic systems extend scalar boundary data')
    _check_height(x0)
    return [poisson_extend(f0, x0)] + [
        poisson_extend(riesz(j, f0), x0) for j in range(1, f0.header.n + 1)
    ]


def build_slab(extend, f, x0_values):
    '''Stack extend(f, x0) over the given heights'''
    return SlabField(f.header, x0_values, tuple(extend(f, x0) for x0 in x0_values))


def paravector_to_gcr(slab):
    '''Split a vector-valued slab U = u_0 - sum_j u_j e_j into scalar slabs u_0, ..., u_n'''
    header = slab.header
    stack = slab.stack()
    components = [stack[:, 0]] + [-stack[:, 1 << (j - 1)] for j in range(1, header.n + 1)]
    return [
        SlabField.from_stack(header, slab.x0_values, _scalar_stack(header, values))
        for values in components
    ]


def gcr_to_paravector(components):
    '''Assemble U = u_0 - sum_j u_j e_j from scalar slabs'''
    header = components[0].header
    if len(components) != header.n + 1:
        raise DimensionMismatchError(
            f'Expected {header.n + 1} components, got {len(components)}'
        )
    stack = np.zeros((components[0].x0_values.size, *header.shape), dtype=np.complex128)
    stack[:, 0] = components[0].stack()[:, 0]
    for j, slab in enumerate(components[1:], start=1):
        components[0].check_compatible(slab)
        stack[:, 1 << (j - 1)] = -slab.stack()[:, 0]
    return SlabField.from_stack(header, components[0].x0_values, stack)


def _scalar_stack(header, values):
    stack = np.zeros((values.shape[0], *header.shape), dtype=np.complex128)
    stack[:, 0] = values
    return stack


def dirac_residual(slab, periodic=True):
    '''
    max over interior slices and grid points of |sum_{k=0}^n e_k d_k F|.

    d_0 uses the neighbouring slices, d_k (k >= 1) the horizontal grid; e_k multiplies
    from the left.
    '''
    header = slab.header
    h0 = slab.uniform_spacing()
    stack = slab.stack()
    result = x0_derivative(stack, h0)
    inner = stack[1:-1]
    signs, results = product_table(header.n)
    for k, h in enumerate(header.spacing, start=1):
        derivative = spatial_derivative(inner, k + 1, h, periodic)
        bit = 1 << (k - 1)
        for t in range(header.n_blades):
            result[:, results[bit, t]] += signs[bit, t] * derivative[:, t]
    worst = float(np.sqrt(np.sum(np.abs(result) ** 2, axis=1)).max())
    logger.debug(f'dirac_residual on {slab.x0_values.size} slices: {worst:.3e}')
    return worst


def sphere_quadrature(dimension, order):
    '''
    Product rule on the unit sphere of R^dimension, weights summing to 1.

    The first coordinate t runs over Gauss-Jacobi nodes for the weight
    (1 - t^2)^{(dimension-3)/2}; the remaining directions recurse down to an
    equispaced circle.
    '''
    if dimension == 1:
        return np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    if dimension == 2:
        angles = np.pi * np.arange(2 * order) / order
        return np.stack([np.cos(angles), np.sin(angles)], axis=1), np.full(
            2 * order, 1 / (2 * order)
        )
    alpha = (dimension - 3) / 2
    t, w = scipy.special.roots_jacobi(order, alpha, alpha)
    sub_nodes, sub_weights = sphere_quadrature(dimension - 1, order)
    nodes = np.concatenate(
        [
            np.column_stack(
                [np.full(len(sub_nodes), ti), np.sqrt(1 - ti**2) * sub_nodes]
            )
            for ti in t
        ]
    )
    weights = np.outer(w, sub_weights).ravel()
    return nodes, weights / weights.sum()


def ball_quadrature(dimension, order=BALL_QUADRATURE_ORDER):
    '''Product Gauss rule for the average over the unit ball of R^dimension'''
    t, w = scipy.special.roots_jacobi(order, 0.0, dimension - 1.0)
    radii = (1 + t) / 2
    directions, direction_weights = sphere_quadrature(dimension, order)
    nodes = (radii[:, None, None] * directions[None]).reshape(-1, dimension)
    weights = np.outer(w / w.sum(), direction_weights).ravel()
    return nodes, weights


def slab_interpolator(slab, method=BALL_INTERPOLATION, pad=3):
    '''
    Interpolator over (x0, x_1, ..., x_n) returning blade coefficients.

    Horizontal axes are padded periodically so points near the box edge interpolate
    across the wrap.
    '''
    header = slab.header
    stack = np.moveaxis(slab.stack(), 1, -1)  # (S, *dims, 2^n)
    widths = [(0, 0)] + [(pad, pad)] * header.n + [(0, 0)]
    padded = np.pad(stack, widths, mode='wrap')
    axes = [slab.x0_values] + [
        -length / 2 + h * np.arange(-pad, d + pad)
        for d, length, h in zip(header.dims, header.extent, header.spacing)
    ]
    values = np.concatenate([padded.real, padded.imag], axis=-1)
    interpolator = RegularGridInterpolator(axes, values, method=method)
    size = header.n_blades

    def evaluate(points):
        wrapped = points.copy()
        for k, length in enumerate(header.extent, start=1):
            wrapped[:, k] = (wrapped[:, k] + length / 2) % length - length / 2
        raw = interpolator(wrapped)
        return raw[:, :size] + 1j * raw[:, size:]

    return evaluate


def mean_value_defect(
    slab,
    center,
    radius,
    order=BALL_QUADRATURE_ORDER,
    interpolation=BALL_INTERPOLATION,
):
    '''
    |ball average of F - F(center)| over the ball of given radius in R^{n+1}.

    Vanishes (up to quadrature and interpolation error) for componentwise harmonic F,
    the mean-value property behind the subharmonicity of |F|^p.
    '''
    header = slab.header
    if len(center.vec) != header.n:
        raise DimensionMismatchError(
            f'Centre in R^{len(center.vec) + 1} does not match the slab dimension {header.n}'
        )
    spacings = [*header.spacing]
    if slab.x0_values.size > 1:
        spacings.append(float(np.max(np.diff(slab.x0_values))))
    if radius < 2 * max(spacings):
        raise DomainError(
            f'Radius {radius} is below two grid spacings ({2 * max(spacings)})'
        )
    if (
        center.x0 - radius < slab.x0_values[0]
        or center.x0 + radius > slab.x0_values[-1]
        or radius >= min(header.extent) / 2
    ):
        raise SlabError(
            f'Ball of radius {radius} around {center} leaves the slab '
            f'[{slab.x0_values[0]}, {slab.x0_values[-1]}] x box {header.extent}'
        )
    evaluate = slab_interpolator(slab, method=interpolation)
    origin = np.array([center.x0, *center.vec])
    nodes, weights = ball_quadrature(header.n + 1, order)
    average = weights @ evaluate(origin + radius * nodes)
    centre_value = evaluate(origin[None])[0]
    defect = float(np.sqrt(np.sum(np.abs(average - centre_value) ** 2)))
    logger.debug(f'mean_value_defect r={radius}: {defect:.3e} ({len(weights)} nodes)')
    return defect


def hardy_norm(slab, p):
    '''sup over slices of the slice L^p norm, the Hardy-space norm restricted to the slab'''
    return max(lp_norm(s, p) for s in slab.slices)
