'''
Exact arithmetic of the complex Clifford algebra C^(n).

The algebra is generated by e_1, ..., e_n with e_j e_k + e_k e_j = -2 delta_jk.
A blade e_T is identified by its bitmask (bit j-1 set iff j in T), so the scalar
blade e_0 = 1 is mask 0 and a multivector is a dense vector of 2^n complex
coefficients in mask order. Products of blades are signed by integer arithmetic only.

Fields sampled on grids store the same coefficients blade-major, as arrays of shape
(2^n, ...); multiply_arrays and pairing are the array forms of the product.
'''

import logging
from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import numpy as np
from pydantic import BaseModel, field_validator

from hardyspec.errors import (
    DimensionMismatchError,
    InvalidBladeError,
    ParavectorInverseError,
)
from hardyspec.numerics_config import MAX_DIMENSION

logger = logging.getLogger(__name__)

# A blade is its generator bitmask: bit j-1 set iff e_j is a factor.
BladeIndex = int


def check_dimension(n):
    '''Raise unless 1 <= n <= MAX_DIMENSION'''
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIMENSION:
        raise InvalidBladeError(
            f'Algebra dimension must be an integer in [1, {MAX_DIMENSION}], got {n!r}'
        )


def check_blade(mask, n):
    '''Raise unless mask is a valid blade of C^(n)'''
    check_dimension(n)
    if not isinstance(mask, (int, np.integer)) or mask < 0 or mask >> n:
        raise InvalidBladeError(f'Blade mask {mask!r} is not a blade of C^({n})')


def blade_index(generators, n):
    '''Bitmask of the blade e_{j1} ... e_{jl} for a set of generator indices'''
    mask = 0
    for j in generators:
        if not 1 <= j <= n:
            raise InvalidBladeError(f'Generator e_{j} does not exist in C^({n})')
        mask |= 1 << (j - 1)
    return mask


def blade_generators(mask):
    '''Sorted generator indices of a blade'''
    return tuple(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def grade(mask):
    return bin(mask).count('1')


def blade_name(mask):
    '''Readable label, e.g. 1, e1, e12'''
    return 'e' + ''.join(str(j) for j in blade_generators(mask)) if mask else '1'


def blade_product(s, t, n):
    '''
    Product of two blades: e_S e_T = sign * e_{S xor T}.

    The sign counts the transpositions that interleave the ordered generator sequences
    plus one factor -1 for every generator the blades share (e_j e_j = -1).
    '''
    check_blade(s, n)
    check_blade(t, n)
    swaps = 0
    higher = s >> 1
    while higher:
        swaps += grade(higher & t)
        higher >>= 1
    negatives = grade(s & t)
    return (-1 if (swaps + negatives) % 2 else 1), s ^ t


@lru_cache(maxsize=None)
def product_table(n):
    '''
    Cached Cayley table of C^(n).

    Returns (signs, results), both (2^n, 2^n) integer arrays with
    e_i e_j = signs[i, j] * e_{results[i, j]}.
    '''
    check_dimension(n)
    size = 1 << n
    signs = np.empty((size, size), dtype=np.int8)
    results = np.empty((size, size), dtype=np.intp)
    for i in range(size):
        for j in range(size):
            signs[i, j], results[i, j] = blade_product(i, j, n)
    signs.flags.writeable = False
    results.flags.writeable = False
    return signs, results


@lru_cache(maxsize=None)
def conjugation_signs(n):
    '''(-1)^{k(k+1)/2} per blade of grade k: sign of the bar-conjugate of e_T'''
    check_dimension(n)
    signs = np.array(
        [-1 if (grade(m) * (grade(m) + 1) // 2) % 2 else 1 for m in range(1 << n)],
        dtype=np.int8,
    )
    signs.flags.writeable = False
    return signs


def multiply_arrays(a, b, n):
    '''
    Pointwise Clifford product of two blade-major arrays, a on the left.

    a and b have shape (2^n, ...) and broadcast over the trailing axes. Channels of a
    that are identically zero are skipped, so paravector-valued multipliers cost
    (n+1) * 2^n channel products instead of 4^n.
    '''
    size = 1 << n
    if a.shape[0] != size or b.shape[0] != size:
        raise DimensionMismatchError(
            f'Expected {size} blade channels, got {a.shape[0]} and {b.shape[0]}'
        )
    signs, results = product_table(n)
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.complex128)
    for i in range(size):
        if not np.any(a[i]):
            continue
        for j in range(size):
            out[results[i, j]] += signs[i, j] * (a[i] * b[j])
    return out


def pairing(a, b, n):
    '''
    Sum over all sample points of the Clifford product a(point) b(point).

    Computed through the Gram matrix of the channels, so the cost is one matrix product
    regardless of the Clifford dimension.
    '''
    size = 1 << n
    if a.shape != b.shape or a.shape[0] != size:
        raise DimensionMismatchError(
            f'Cannot pair arrays of shapes {a.shape} and {b.shape} in C^({n})'
        )
    gram = a.reshape(size, -1) @ b.reshape(size, -1).T
    signs, results = product_table(n)
    coeffs = np.zeros(size, dtype=np.complex128)
    np.add.at(coeffs, results.ravel(), (signs * gram).ravel())
    return Multivector(n, coeffs)


@dataclass(frozen=True, eq=False)
class Multivector:
    '''
    A Clifford number x = sum_T x_T e_T of C^(n) with complex coefficients.

    coeffs holds the 2^n coefficients in bitmask order; it is copied and frozen on
    construction, so instances are immutable and can be shared freely.
    '''

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_dimension(self.n)
        coeffs = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if coeffs.shape != (1 << self.n,):
            raise DimensionMismatchError(
                f'C^({self.n}) needs {1 << self.n} coefficients, got {coeffs.size}'
            )
        coeffs.flags.writeable = False
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def zero(cls, n):
        return cls(n, np.zeros(1 << n))

    @classmethod
    def scalar(cls, value, n):
        coeffs = np.zeros(1 << n, dtype=np.complex128)
        coeffs[0] = value
        return cls(n, coeffs)

    @classmethod
    def basis(cls, mask, n):
        '''The blade e_T itself'''
        check_blade(mask, n)
        coeffs = np.zeros(1 << n, dtype=np.complex128)
        coeffs[mask] = 1
        return cls(n, coeffs)

    @classmethod
    def from_blades(cls, blades, n):
        '''Build from {mask: coefficient}; absent blades are zero'''
        coeffs = np.zeros(1 << n, dtype=np.complex128)
        for mask, value in blades.items():
            check_blade(mask, n)
            coeffs[mask] = value
        return cls(n, coeffs)

    def __getitem__(self, mask):
        check_blade(mask, self.n)
        return complex(self.coeffs[mask])

    @property
    def sc(self):
        '''Scalar part Sc x'''
        return complex(self.coeffs[0])

    def nsc(self):
        '''Non-scalar part NSc x = x - Sc x'''
        coeffs = self.coeffs.copy()
        coeffs[0] = 0
        return Multivector(self.n, coeffs)

    def _check_same_algebra(self, other):
        if other.n != self.n:
            raise DimensionMismatchError(
                f'Cannot combine elements of C^({self.n}) and C^({other.n})'
            )

    def __add__(self, other):
        if isinstance(other, Number):
            return self + Multivector.scalar(other, self.n)
        self._check_same_algebra(other)
        return Multivector(self.n, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Number):
            return Multivector(self.n, self.coeffs * other)
        return multiply(self, other)

    def __rmul__(self, other):
        # Only scalars reach here; complex scalars commute with every blade
        return Multivector(self.n, self.coeffs * other)

    def __truediv__(self, other):
        return Multivector(self.n, self.coeffs / other)

    def conjugate(self):
        return conjugate(self)

    def norm(self):
        return norm(self)

    def allclose(self, other, atol=1e-12):
        if isinstance(other, Number):
            other = Multivector.scalar(other, self.n)
        self._check_same_algebra(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def __repr__(self):
        terms = [
            f'({c:.6g}){blade_name(mask)}'
            for mask, c in enumerate(self.coeffs)
            if c != 0
        ]
        return f'Multivector(n={self.n}: {" + ".join(terms) or "0"})'


class Paravector(BaseModel):
    '''
    A point x0 + x_1 e_1 + ... + x_n e_n of R^{n+1}.
    '''

    x0: float
    vec: tuple[float, ...]

    model_config = {'frozen': True}

    @field_validator('vec')
    @classmethod
    def _vec_dimension(cls, vec):
        check_dimension(len(vec))
        return vec

    @property
    def n(self):
        return len(self.vec)

    def norm_squared(self):
        return self.x0**2 + sum(v**2 for v in self.vec)

    def norm(self):
        return float(np.sqrt(self.norm_squared()))

    def to_multivector(self):
        coeffs = np.zeros(1 << self.n, dtype=np.complex128)
        coeffs[0] = self.x0
        for j, v in enumerate(self.vec):
            coeffs[1 << j] = v
        return Multivector(self.n, coeffs)


def multiply(a, b):
    '''Clifford product a b, the bilinear extension of blade_product'''
    if a.n != b.n:
        raise DimensionMismatchError(f'Cannot multiply C^({a.n}) by C^({b.n})')
    signs, results = product_table(a.n)
    coeffs = np.zeros(1 << a.n, dtype=np.complex128)
    np.add.at(coeffs, results.ravel(), (signs * np.outer(a.coeffs, b.coeffs)).ravel())
    return Multivector(a.n, coeffs)


def conjugate(a):
    '''
    Clifford conjugate x-bar: complex-conjugates the coefficients and reverses each
    blade with every generator negated, an anti-automorphism.
    '''
    return Multivector(a.n, conjugation_signs(a.n) * np.conj(a.coeffs))


def norm(a):
    '''|x| = (sum_T |x_T|^2)^{1/2}'''
    return float(np.sqrt(np.sum(np.abs(a.coeffs) ** 2)))


def scalar_norm(a):
    '''|x| = (Sc x-bar x)^{1/2}; agrees with norm to rounding'''
    return float(np.sqrt(max(multiply(conjugate(a), a).sc.real, 0.0)))


def paravector_inverse(x):
    '''x^{-1} = x-bar / |x|^2 for a nonzero paravector'''
    size = x.norm_squared()
    if size == 0:
        raise ParavectorInverseError('The zero paravector has no inverse')
    return conjugate(x.to_multivector()) / size


def blade_sign_l(j, t, n):
    '''
    Sign exponent of the generalized Cauchy-Riemann system.

    Returns (l, T_j) with T_j = T xor {j} and (-1)^l e_j e_{T_j} = e_T, where
    l = N(j & T_j) + P(j, T_j) and P counts the generators of T_j below j.
    '''
    check_blade(t, n)
    if not 1 <= j <= n:
        raise InvalidBladeError(f'Generator e_{j} does not exist in C^({n})')
    bit = 1 << (j - 1)
    t_j = t ^ bit
    shared = 1 if t_j & bit else 0
    below = grade(t_j & (bit - 1))
    return shared + below, t_j
