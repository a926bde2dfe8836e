import numpy as np
import pytest

from hardyspec.clifford_core import Multivector, Paravector
from hardyspec.errors import DimensionMismatchError, DomainError, SlabError
from hardyspec.extension import (
    SlabField,
    ball_quadrature,
    build_slab,
    cauchy_extend,
    cauchy_kernel,
    conjugate_harmonic_extend,
    dirac_residual,
    gcr_to_paravector,
    hardy_norm,
    mean_value_defect,
    paravector_to_gcr,
    poisson_extend,
    sigma,
    spectral_extend,
    sphere_quadrature,
)
from hardyspec.generators import GaussianRingSpec, gaussian_ring, mode_sum
from hardyspec.spectral import FieldHeader, GridField, Side, lp_norm, plane_wave
from hardyspec.transforms import gcr_residual, generalized_cr_residual, hardy_project


def relative(a, b):
    return (a - b).l2_norm() / b.l2_norm()


def test_sigma_is_half_the_sphere_area():
    assert sigma(1) == pytest.approx(np.pi)
    assert sigma(2) == pytest.approx(2 * np.pi)
    assert sigma(3) == pytest.approx(np.pi**2)


def test_cauchy_kernel_values():
    value = cauchy_kernel(Paravector(x0=1.0, vec=(0.0,)))
    assert value.allclose(Multivector.scalar(1 / (2 * np.pi), 1))
    value = cauchy_kernel(Paravector(x0=0.0, vec=(0.0, 2.0)))
    assert value.allclose(Multivector.from_blades({2: -2 / (2 * 2 * np.pi * 8)}, 2))
    with pytest.raises(DomainError):
        cauchy_kernel(Paravector(x0=0.0, vec=(0.0, 0.0)))


def test_poisson_extension_damps_each_mode(header2):
    f = plane_wave(header2, (3, 4), 2.0)
    expected = f * np.exp(-2 * np.pi * 0.05 * 5)
    assert relative(poisson_extend(f, 0.05), expected) < 1e-12


def test_spectral_route_is_poisson_of_hardy_part(header, band_field):
    f = band_field(header)
    for x0 in (0.01, 0.1):
        assert relative(spectral_extend(f, x0), poisson_extend(hardy_project('+', f), x0)) < 1e-12


def test_spectral_route_tends_to_the_hardy_part(header, band_field):
    f = band_field(header)
    assert relative(spectral_extend(f, 1e-9), hardy_project(Side.PLUS, f)) < 1e-6


@pytest.mark.parametrize('route', [poisson_extend, spectral_extend, cauchy_extend])
@pytest.mark.parametrize('x0', [0.0, -0.1])
def test_extension_height_must_be_positive(header2, route, x0):
    with pytest.raises(DomainError):
        route(GridField.zeros(header2), x0)


@pytest.mark.parametrize('n', [1, 2])
def test_cauchy_route_agrees_with_spectral_route(n):
    header = FieldHeader.cube(n, 64)
    f = hardy_project(
        Side.PLUS,
        gaussian_ring(header, GaussianRingSpec(radius_fraction=8 / 32, width_fraction=1.5 / 32)),
    )
    x0 = 4 * header.spacing[0]
    spectral = spectral_extend(f, x0)
    assert relative(cauchy_extend(f, x0), spectral) < 1e-3


def test_conjugate_harmonic_system_is_twice_the_spectral_extension(header, band_field):
    f0 = band_field(header, scalar_only=True)
    system = conjugate_harmonic_extend(f0, 0.05)
    assert len(system) == header.n + 1
    assembled = system[0]
    for j, u in enumerate(system[1:], start=1):
        assembled = assembled - u.left_multiply(Multivector.basis(1 << (j - 1), header.n))
    assert relative(assembled, spectral_extend(f0, 0.05) * 2) < 1e-12


def test_conjugate_harmonic_system_needs_scalar_data(header2):
    with pytest.raises(DomainError):
        conjugate_harmonic_extend(GridField.constant(header2, Multivector.basis(1, 2)), 0.1)


def test_paravector_and_gcr_forms_round_trip(header2, band_field):
    f0 = band_field(header2, scalar_only=True)
    slab = build_slab(spectral_extend, f0, [0.05, 0.1, 0.15])
    components = paravector_to_gcr(slab)
    assert len(components) == 3
    restored = gcr_to_paravector(components)
    for a, b in zip(restored.slices, slab.slices):
        assert (a - b).max_norm() < 1e-15 * slab.slices[0].max_norm()


def slabs_for_single_mode(side):
    '''A mode with chi_+ or chi_- weight extended by the Poisson multiplier'''
    header = FieldHeader.cube(1, 64)
    h = header.spacing[0]
    f = hardy_project(side, plane_wave(header, (3,)))
    return build_slab(poisson_extend, f, 0.1 + h * np.array([-1.0, 0.0, 1.0]))


def test_dirac_residual_separates_monogenic_from_antimonogenic():
    monogenic = dirac_residual(slabs_for_single_mode(Side.PLUS))
    anti = dirac_residual(slabs_for_single_mode(Side.MINUS))
    assert monogenic < 0.05 * anti


def test_generalized_cr_residual_separates_monogenic_from_antimonogenic():
    monogenic = generalized_cr_residual(slabs_for_single_mode(Side.PLUS))
    anti = generalized_cr_residual(slabs_for_single_mode(Side.MINUS))
    assert monogenic < 0.05 * anti


def test_dirac_residual_converges_at_second_order(rng):
    modes = [(1,), (-2,), (3,)]
    values = [Multivector(1, rng.standard_normal(2) + 1j * rng.standard_normal(2)) for _ in modes]
    residuals = []
    for points in (32, 64):
        header = FieldHeader.cube(1, points)
        h = header.spacing[0]
        f = mode_sum(header, modes, values)
        residuals.append(dirac_residual(build_slab(spectral_extend, f, 0.1 + h * np.array([-1.0, 0.0, 1.0]))))
    assert 3.0 < residuals[0] / residuals[1] < 5.0


def test_gcr_residual_of_conjugate_system(header2):
    values = [Multivector.scalar(v, 2) for v in (1.0, 0.5j, -0.7)]
    f0 = mode_sum(header2, [(1, 0), (0, 1), (1, 1)], values)
    h = header2.spacing[0]
    heights = 0.1 + h * np.array([-1.0, 0.0, 1.0])
    systems = [conjugate_harmonic_extend(f0, x0) for x0 in heights]
    components = [
        SlabField(header2, heights, tuple(system[j] for system in systems)) for j in range(3)
    ]
    flipped = [components[0], components[1] * -1, components[2]]
    assert gcr_residual(components) < 0.2 * gcr_residual(flipped)
    with pytest.raises(DimensionMismatchError):
        gcr_residual(components[:2])


def test_slab_validation(header2):
    zero = GridField.zeros(header2)
    with pytest.raises(SlabError):
        SlabField(header2, [0.2, 0.1], (zero, zero))
    with pytest.raises(SlabError):
        SlabField(header2, [0.0, 0.1], (zero, zero))
    with pytest.raises(SlabError):
        SlabField(header2, [0.1], (zero, zero))
    with pytest.raises(SlabError):
        SlabField(header2, [0.1, 0.2], (zero, zero)).uniform_spacing()
    with pytest.raises(SlabError):
        SlabField(header2, [0.1, 0.2, 0.4], (zero, zero, zero)).uniform_spacing()


@pytest.mark.parametrize('dimension', [2, 3, 4])
def test_sphere_and_ball_rules(dimension):
    nodes, weights = sphere_quadrature(dimension, 6)
    assert weights.sum() == pytest.approx(1.0)
    assert np.allclose(np.linalg.norm(nodes, axis=1), 1.0)
    assert weights @ nodes[:, 0] ** 2 == pytest.approx(1 / dimension)
    nodes, weights = ball_quadrature(dimension, 6)
    assert weights.sum() == pytest.approx(1.0)
    squared = np.sum(nodes**2, axis=1)
    assert weights @ squared == pytest.approx(dimension / (dimension + 2))


def mean_value_slab(header, values):
    h = header.spacing[0]
    heights = 0.3 + h * np.arange(-6, 7)
    return build_slab(spectral_extend, mode_sum(header, [(1, 0), (0, 1), (1, 1)], values), heights)


def test_mean_value_property_of_extensions(header2, random_multivector):
    slab = mean_value_slab(header2, [random_multivector(2) for _ in range(3)])
    centre = Paravector(x0=0.3, vec=(0.1, -0.2))
    radius = 4 * header2.spacing[0]
    scale = max(s.max_norm() for s in slab.slices)
    assert mean_value_defect(slab, centre, radius) < 1e-3 * scale


def test_mean_value_defect_of_a_non_harmonic_field(header2):
    h = header2.spacing[0]
    heights = 0.3 + h * np.arange(-6, 7)
    square = np.sum(header2.coordinate_grid() ** 2, axis=0)
    slab = SlabField(
        header2, heights, tuple(GridField.from_scalar(header2, square) for _ in heights)
    )
    radius = 4 * h
    defect = mean_value_defect(slab, Paravector(x0=0.3, vec=(0.0, 0.0)), radius)
    assert defect == pytest.approx(2 * radius**2 / 5, rel=1e-2)


def test_mean_value_preconditions(header2, random_multivector):
    slab = mean_value_slab(header2, [random_multivector(2) for _ in range(3)])
    h = header2.spacing[0]
    with pytest.raises(DimensionMismatchError):
        mean_value_defect(slab, Paravector(x0=0.3, vec=(0.0,)), 4 * h)
    with pytest.raises(DomainError):
        mean_value_defect(slab, Paravector(x0=0.3, vec=(0.0, 0.0)), h)
    with pytest.raises(SlabError):
        mean_value_defect(slab, Paravector(x0=0.2, vec=(0.0, 0.0)), 4 * h)


def test_hardy_norm_is_the_largest_slice_norm(header2, band_field):
    f = band_field(header2)
    slab = build_slab(poisson_extend, f, [0.01, 0.05, 0.2])
    assert hardy_norm(slab, 2) == pytest.approx(lp_norm(slab.slices[0], 2))
    assert hardy_norm(slab, 2) <= f.l2_norm()


def test_poisson_extension_is_a_semigroup(header, band_field):
    f = band_field(header)
    twice = poisson_extend(poisson_extend(f, 0.02), 0.05)
    assert relative(twice, poisson_extend(f, 0.07)) < 1e-12


def test_poisson_extension_keeps_constants(header, random_multivector):
    f = GridField.constant(header, random_multivector(header.n))
    assert relative(poisson_extend(f, 0.3), f) < 1e-12


def test_spectral_extension_norm_does_not_grow(header, band_field):
    f = band_field(header)
    norms = [spectral_extend(f, x0).l2_norm() for x0 in (1e-3, 0.01, 0.05, 0.1, 0.5)]
    assert all(later <= earlier for earlier, later in zip(norms, norms[1:]))


def even_heights(header):
    return 0.1 + header.spacing[0] * np.arange(5)


def test_dirac_residual_of_the_height_function(header):
    heights = even_heights(header)
    stack = np.zeros((heights.size, *header.shape))
    stack[:, 0] = heights.reshape((-1,) + (1,) * header.n)
    slab = SlabField.from_stack(header, heights, stack)
    assert dirac_residual(slab) == pytest.approx(1.0, rel=1e-12)


def test_constant_slabs_have_no_residual(header, random_multivector):
    heights = even_heights(header)
    constant = build_slab(lambda f, x0: f, GridField.constant(header, random_multivector(header.n)), heights)
    assert dirac_residual(constant) == 0.0
    assert generalized_cr_residual(constant) == 0.0
    assert gcr_residual(paravector_to_gcr(constant)) == 0.0


def test_gcr_residual_of_a_linear_potential(header2):
    heights = even_heights(header2)
    x1 = GridField.from_scalar(header2, header2.coordinate_grid()[0])
    zero = GridField.zeros(header2)
    components = [
        SlabField(header2, heights, (x1,) * heights.size),
        SlabField(header2, heights, (zero,) * heights.size),
        SlabField(header2, heights, (zero,) * heights.size),
    ]
    assert gcr_residual(components, periodic=False) == pytest.approx(1.0, rel=1e-12)


def test_both_residual_forms_agree_on_vector_valued_slabs(header, band_field):
    heights = even_heights(header)
    components = [
        build_slab(poisson_extend, band_field(header, scalar_only=True), heights)
        for _ in range(header.n + 1)
    ]
    slab = gcr_to_paravector(components)
    expected = gcr_residual(paravector_to_gcr(slab))
    assert expected > 0
    assert generalized_cr_residual(slab) == pytest.approx(expected, rel=1e-12)
    assert gcr_residual(components) == pytest.approx(expected, rel=1e-12)
