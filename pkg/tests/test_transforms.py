import numpy as np
import pytest

from hardyspec import transforms
from hardyspec.clifford_core import Multivector
from hardyspec.errors import DomainError
from hardyspec.spectral import FieldHeader, GridField, PsiEnvelope, Side, make_psi_minus, plane_wave
from hardyspec.transforms import (
    hardy_project,
    hilbert,
    hilbert_fixed_point_residual,
    riesz,
    riesz_system_residual,
    spatial_derivative,
    spectrum_pairing,
)


def relative(a, b):
    return (a - b).l2_norm() / b.l2_norm()


def test_riesz_of_plane_wave(header2):
    m = (3, -4)
    f = plane_wave(header2, m)
    for j in (1, 2):
        expected = f * (-1j * m[j - 1] / 5)
        assert relative(riesz(j, f), expected) < 1e-12


def test_riesz_axis_must_exist(header2):
    with pytest.raises(DomainError):
        riesz(3, GridField.zeros(header2))


@pytest.mark.parametrize('n', [1, 2, 3])
def test_hilbert_is_an_involution_off_dc(n, band_field):
    f = band_field(FieldHeader.cube(n, 32))
    assert relative(hilbert(hilbert(f)), f) < 1e-10


@pytest.mark.parametrize('n', [1, 2, 3])
def test_riesz_squares_sum_to_minus_identity(n, band_field):
    f = band_field(FieldHeader.cube(n, 32))
    total = riesz(1, riesz(1, f))
    for j in range(2, n + 1):
        total = total + riesz(j, riesz(j, f))
    assert relative(total, f * -1) < 1e-12


def test_hilbert_kills_constants(header):
    assert hilbert(GridField.constant(header, 3.0)).max_norm() < 1e-12


def test_hilbert_matches_projectors(header, band_field):
    f = band_field(header)
    assert relative(hilbert(f), hardy_project(Side.PLUS, f) * 2 - f) < 1e-12


def test_projections_split_the_field(header, band_field):
    f = band_field(header)
    plus, minus = hardy_project('+', f), hardy_project('-', f)
    assert relative(plus + minus, f) < 1e-14
    assert hardy_project('-', plus).l2_norm() < 1e-13 * f.l2_norm()
    assert relative(hardy_project('+', plus), plus) < 1e-13


def test_hardy_boundary_values_are_fixed_points(header, band_field):
    plus = hardy_project(Side.PLUS, band_field(header))
    assert hilbert_fixed_point_residual(plus) < 1e-12 * plus.l2_norm()
    assert riesz_system_residual(plus) < 1e-12 * plus.max_norm()


def test_lower_hardy_part_is_not_a_fixed_point(header2, band_field):
    minus = hardy_project(Side.MINUS, band_field(header2))
    assert hilbert_fixed_point_residual(minus) == pytest.approx(2 * minus.l2_norm(), rel=1e-10)


def test_spectrum_pairing_vanishes_on_hardy_fields(header, band_field):
    f = hardy_project(Side.PLUS, band_field(header))
    psi = make_psi_minus(header, PsiEnvelope(inner_radius=2.0, outer_radius=12.0, seed=5))
    assert spectrum_pairing(f, psi).norm() < 1e-10 * f.l2_norm() * psi.l2_norm()


def test_spectrum_pairing_detects_lower_part(header2, band_field):
    f = hardy_project(Side.MINUS, band_field(header2))
    psi = make_psi_minus(header2, PsiEnvelope(inner_radius=2.0, outer_radius=12.0, seed=5))
    assert spectrum_pairing(f, psi).norm() > 1e-3 * f.l2_norm() * psi.l2_norm()


def test_flipped_riesz_sign_keeps_involution_but_breaks_projectors(
    monkeypatch, header2, band_field
):
    f = band_field(header2)
    original = transforms.riesz_multiplier
    monkeypatch.setattr(
        transforms, 'riesz_multiplier', lambda header, j: -original(header, j)
    )
    assert relative(hilbert(hilbert(f)), f) < 1e-10
    assert relative(hilbert(f), hardy_project(Side.PLUS, f) * 2 - f) > 1


def test_vector_valued_correspondence(header, band_field):
    f0 = band_field(header, scalar_only=True)
    rhs = f0
    for j in range(1, header.n + 1):
        rhs = rhs - riesz(j, f0).left_multiply(Multivector.basis(1 << (j - 1), header.n))
    assert relative(hardy_project(Side.PLUS, f0) * 2, rhs) < 1e-12


@pytest.mark.parametrize('periodic', [True, False])
def test_spatial_derivative_of_smooth_data(periodic):
    h = 1 / 64
    x = -0.5 + h * np.arange(64)
    values = np.sin(2 * np.pi * x)
    derivative = spatial_derivative(values, 0, h, periodic)
    assert np.abs(derivative - 2 * np.pi * np.cos(2 * np.pi * x)).max() < 5e-2


def test_one_sided_stencil_is_exact_on_linear_data():
    h = 0.1
    values = 3.0 * np.arange(10) * h + 1.0
    assert np.allclose(spatial_derivative(values, 0, h, periodic=False), 3.0)
