from pathlib import Path

import numpy as np
import pytest

from hardyspec.clifford_core import (
    Multivector,
    Paravector,
    blade_index,
    blade_name,
    blade_product,
    blade_sign_l,
    check_blade,
    conjugate,
    conjugation_signs,
    grade,
    multiply,
    multiply_arrays,
    norm,
    pairing,
    paravector_inverse,
    product_table,
    scalar_norm,
)
from hardyspec.errors import (
    DimensionMismatchError,
    InvalidBladeError,
    ParavectorInverseError,
)
from hardyspec.utils.yaml_utils import from_yaml_file

CASES = from_yaml_file(Path(__file__).parent / 'clifford_cases.yaml')


@pytest.mark.parametrize('case', CASES['products'], ids=lambda c: c['name'])
def test_blade_product_cases(case):
    n = case['n']
    sign, result = blade_product(blade_index(case['left'], n), blade_index(case['right'], n), n)
    assert sign == case['expectation']['sign'], case['description']
    assert result == blade_index(case['expectation']['result'], n)


@pytest.mark.parametrize('case', CASES['conjugation'], ids=lambda c: f'grade{c["grade"]}')
def test_conjugation_sign_per_grade(case):
    n = 5
    signs = conjugation_signs(n)
    for mask in range(1 << n):
        if grade(mask) == case['grade']:
            assert signs[mask] == case['sign']


@pytest.mark.parametrize('case', CASES['sign_l'], ids=lambda c: c['name'])
def test_blade_sign_l_cases(case):
    n = case['n']
    l, t_j = blade_sign_l(case['j'], blade_index(case['blade'], n), n)
    assert l == case['expectation']['l']
    assert t_j == blade_index(case['expectation']['t_j'], n)


@pytest.mark.parametrize('n', range(1, 6))
def test_blade_sign_l_reconstructs_every_blade(n):
    for j in range(1, n + 1):
        for t in range(1 << n):
            l, t_j = blade_sign_l(j, t, n)
            sign, result = blade_product(1 << (j - 1), t_j, n)
            assert result == t
            assert (-1) ** l * sign == 1


@pytest.mark.parametrize('n', range(1, 6))
def test_generators_anticommute_and_square_to_minus_one(n):
    signs, results = product_table(n)
    for j in range(n):
        a = 1 << j
        assert (signs[a, a], results[a, a]) == (-1, 0)
        for k in range(j + 1, n):
            b = 1 << k
            assert results[a, b] == results[b, a] == a | b
            assert signs[a, b] == -signs[b, a]


@pytest.mark.parametrize('n', range(1, 6))
def test_product_is_associative(n, random_multivector):
    for _ in range(10):
        a, b, c = random_multivector(n), random_multivector(n), random_multivector(n)
        assert (a * b * c).allclose(a * (b * c), atol=1e-12 * norm(a) * norm(b) * norm(c))


@pytest.mark.parametrize('n', range(1, 6))
def test_conjugation_reverses_products(n, random_multivector):
    a, b = random_multivector(n), random_multivector(n)
    assert conjugate(a * b).allclose(conjugate(b) * conjugate(a), atol=1e-12 * norm(a) * norm(b))
    assert conjugate(conjugate(a)).allclose(a)


@pytest.mark.parametrize('n', range(1, 6))
def test_norm_formulas_agree(n, random_multivector):
    a = random_multivector(n)
    assert scalar_norm(a) == pytest.approx(norm(a), rel=1e-12)


def test_norm_is_submultiplicative_with_paravector_equality(random_multivector):
    a, b = random_multivector(3), random_multivector(3)
    assert norm(a * b) <= 2 ** (3 / 2) * norm(a) * norm(b)
    x = Paravector(x0=0.3, vec=(1.0, -2.0, 0.5)).to_multivector()
    assert norm(x * b) == pytest.approx(norm(x) * norm(b), rel=1e-12)


@pytest.mark.parametrize('n', [1, 2, 4])
def test_paravector_inverse(n, rng):
    x = Paravector(x0=rng.standard_normal(), vec=tuple(rng.standard_normal(n)))
    inverse = paravector_inverse(x)
    assert multiply(x.to_multivector(), inverse).allclose(1)
    assert multiply(inverse, x.to_multivector()).allclose(1)


def test_zero_paravector_has_no_inverse():
    with pytest.raises(ParavectorInverseError):
        paravector_inverse(Paravector(x0=0.0, vec=(0.0, 0.0)))
    with pytest.raises(ZeroDivisionError):
        paravector_inverse(Paravector(x0=0.0, vec=(0.0,)))


def test_invalid_blades_are_rejected():
    with pytest.raises(InvalidBladeError):
        check_blade(4, 2)
    with pytest.raises(InvalidBladeError):
        Multivector.basis(-1, 2)
    with pytest.raises(InvalidBladeError):
        blade_index([3], 2)
    with pytest.raises(InvalidBladeError):
        Multivector.zero(9)


def test_mixed_algebras_do_not_combine():
    with pytest.raises(DimensionMismatchError):
        Multivector.zero(2) + Multivector.zero(3)
    with pytest.raises(DimensionMismatchError):
        multiply(Multivector.scalar(1, 1), Multivector.scalar(1, 2))
    with pytest.raises(DimensionMismatchError):
        Multivector(2, np.zeros(3))


def test_multivectors_are_immutable():
    a = Multivector.basis(1, 2)
    with pytest.raises(ValueError):
        a.coeffs[0] = 5


def test_scalar_and_nonscalar_parts():
    a = Multivector.from_blades({0: 2.0, 3: 1j}, 2)
    assert a.sc == 2.0
    assert a.nsc().allclose(Multivector.from_blades({3: 1j}, 2))
    assert blade_name(3) == 'e12'
    assert blade_name(0) == '1'


def test_multiply_arrays_matches_pointwise_products(random_multivector):
    n = 3
    left = [random_multivector(n) for _ in range(4)]
    right = [random_multivector(n) for _ in range(4)]
    a = np.stack([x.coeffs for x in left], axis=1)
    b = np.stack([x.coeffs for x in right], axis=1)
    out = multiply_arrays(a, b, n)
    for k in range(4):
        assert Multivector(n, out[:, k]).allclose(left[k] * right[k])


def test_pairing_is_the_summed_product(random_multivector):
    n = 2
    left = [random_multivector(n) for _ in range(5)]
    right = [random_multivector(n) for _ in range(5)]
    a = np.stack([x.coeffs for x in left], axis=1)
    b = np.stack([x.coeffs for x in right], axis=1)
    expected = Multivector.zero(n)
    for x, y in zip(left, right):
        expected = expected + x * y
    assert pairing(a, b, n).allclose(expected)
