'''
The acceptance suite behind `hardyspec verify`.

Every check measures one discrete identity or convergence rate and compares it with its
entry in tolerances.yaml. Checks register themselves with @check(criterion) and run in
registration order; each draws its random data from default_rng([seed, stream]), so a
report depends only on profile and seed. A check that raises is reported as failed,
never propagated.
'''

import logging
from dataclasses import dataclass

import numpy as np

from hardyspec.bergman import (
    bergman_norm,
    bergman_slab,
    bergman_slice,
    gaussian_ring_density,
    geometric_x0_grid,
    single_mode_density,
    weighted_spectral_norm,
)
from hardyspec.clifford_core import (
    Multivector,
    Paravector,
    blade_product,
    blade_sign_l,
    conjugate,
    multiply,
    multiply_arrays,
    norm,
    paravector_inverse,
    product_table,
    scalar_norm,
)
from hardyspec.errors import DomainError
from hardyspec.extension import (
    SlabField,
    build_slab,
    cauchy_extend,
    conjugate_harmonic_extend,
    dirac_residual,
    mean_value_defect,
    poisson_extend,
    spectral_extend,
)
from hardyspec.field_io import decode_field, encode_field
from hardyspec.generators import (
    GaussianRingSpec,
    RandomBandlimitedSpec,
    gaussian_ring,
    mode_sum,
    random_bandlimited,
)
from hardyspec.numerics_config import (
    CONVERGENCE_HEIGHT,
    CONVERGENCE_MODES,
    MEAN_VALUE_HEIGHT,
    MEAN_VALUE_MODES,
    PROFILES,
    RING_RADIUS_MODES,
    RING_WIDTH_MODES,
    ROUTE_POINTS,
    TOLERANCES_PATH,
)
from hardyspec.Reports import CheckResult, VerifyReport
from hardyspec.spectral import (
    FieldHeader,
    GridField,
    PsiEnvelope,
    Side,
    apply_multiplier,
    chi_field,
    chi_projector,
    dft_forward,
    make_psi_minus,
    plancherel_defect,
)
from hardyspec.transforms import (
    gcr_residual,
    generalized_cr_residual,
    hardy_project,
    hilbert,
    hilbert_multiplier,
    riesz,
    spectrum_pairing,
)
from hardyspec.utils.yaml_utils import from_yaml_file

logger = logging.getLogger(__name__)

CHECKS = []


def check(criterion):
    '''Register a check function under its acceptance criterion'''

    def register(fn):
        fn.criterion = criterion
        CHECKS.append(fn)
        return fn

    return register


def load_tolerances(path=TOLERANCES_PATH):
    table = from_yaml_file(path)
    if 'version' not in table or 'checks' not in table:
        raise DomainError(f'{path} is not a tolerance table (needs version and checks)')
    return table


@dataclass(frozen=True)
class VerifyContext:
    profile: str
    seed: int
    tolerances: dict

    @property
    def dimensions(self):
        return PROFILES[self.profile]['dimensions']

    def header(self, n, points=None):
        return FieldHeader.cube(n, points or PROFILES[self.profile]['points'][n])

    def rng(self, *stream):
        return np.random.default_rng([self.seed, *stream])

    def result(self, name, values, detail=''):
        '''
        Reduce per-case measurements to one CheckResult: the worst case against the bound.
        '''
        entry = self.tolerances['checks'][name]
        kind = entry.get('kind', 'max')
        measured = max(values.values()) if kind == 'max' else min(values.values())
        detail = detail or ', '.join(f'{key}: {value:.3e}' for key, value in values.items())
        return CheckResult.compare(
            name, entry['criterion'], measured, entry['tolerance'], kind, detail
        )


def random_multivector(rng, n):
    size = 1 << n
    return Multivector(n, rng.standard_normal(size) + 1j * rng.standard_normal(size))


def random_field(header, rng, scalar_only=False):
    spec = RandomBandlimitedSpec(seed=int(rng.integers(2**31)), scalar_only=scalar_only)
    return random_bandlimited(header, spec)


def relative(difference, reference):
    return difference.l2_norm() / reference.l2_norm()


def random_envelopes(header, rng, count):
    nyquist = header.nyquist_radius
    envelopes = []
    for _ in range(count):
        inner = nyquist * rng.uniform(0.05, 0.4)
        outer = min(inner + nyquist * rng.uniform(0.2, 0.55), 0.95 * nyquist)
        amplitude = complex(rng.standard_normal(), rng.standard_normal())
        envelopes.append(
            PsiEnvelope(
                inner_radius=inner,
                outer_radius=outer,
                amplitude=amplitude,
                seed=int(rng.integers(2**31)),
            )
        )
    return envelopes


@check(criterion=1)
def check_algebra(ctx):
    rng = ctx.rng(1)
    mismatches = 0
    associativity, conjugation, norms = 0.0, 0.0, 0.0
    for n in range(1, 6):
        signs, results = product_table(n)
        for j in range(1, n + 1):
            bit = 1 << (j - 1)
            mismatches += int(signs[bit, bit] != -1 or results[bit, bit] != 0)
            for k in range(j + 1, n + 1):
                other = 1 << (k - 1)
                mismatches += int(signs[bit, other] != -signs[other, bit])
            for t in range(1 << n):
                l, t_j = blade_sign_l(j, t, n)
                sign, result = blade_product(bit, t_j, n)
                mismatches += int(result != t or (-1) ** l * sign != 1)
        for _ in range(20):
            a, b, c = (random_multivector(rng, n) for _ in range(3))
            scale = norm(a) * norm(b) * norm(c)
            associativity = max(
                associativity, norm(multiply(multiply(a, b), c) - multiply(a, multiply(b, c))) / scale
            )
            conjugation = max(
                conjugation,
                norm(conjugate(multiply(a, b)) - multiply(conjugate(b), conjugate(a)))
                / (norm(a) * norm(b)),
            )
            norms = max(norms, abs(scalar_norm(a) ** 2 - norm(a) ** 2) / norm(a) ** 2)
            x = Paravector(x0=rng.standard_normal(), vec=tuple(rng.standard_normal(n)))
            inverse = paravector_inverse(x)
            for product in (multiply(x.to_multivector(), inverse), multiply(inverse, x.to_multivector())):
                norms = max(norms, norm(product - 1))
    return [
        ctx.result('algebra_signs', {'n<=5': mismatches}),
        ctx.result('algebra_associativity', {'n<=5': associativity}),
        ctx.result('algebra_conjugation', {'n<=5': conjugation}),
        ctx.result('algebra_norm', {'n<=5': norms}),
    ]


@check(criterion=2)
def check_projectors(ctx):
    header = FieldHeader.cube(2, 64)
    plus, minus = chi_field(header, Side.PLUS), chi_field(header, Side.MINUS)
    one = np.zeros(header.shape)
    one[0] = 1
    nonzero = header.frequency_magnitude() > 0

    def worst(array):
        return float(np.abs(array[:, nonzero]).max())

    return [
        ctx.result('projector_completeness', {'64x64': float(np.abs(plus + minus - one).max())}),
        ctx.result(
            'projector_idempotence',
            {
                '+': worst(multiply_arrays(plus, plus, 2) - plus),
                '-': worst(multiply_arrays(minus, minus, 2) - minus),
            },
        ),
        ctx.result(
            'projector_annihilation',
            {
                '+-': worst(multiply_arrays(plus, minus, 2)),
                '-+': worst(multiply_arrays(minus, plus, 2)),
            },
        ),
    ]


@check(criterion=3)
def check_hilbert(ctx):
    involution, consistency, mutated = {}, {}, {}
    for n in ctx.dimensions:
        header = ctx.header(n)
        f = random_field(header, ctx.rng(3, n))
        hf = hilbert(f)
        from_projector = hardy_project(Side.PLUS, f) * 2 - f
        involution[f'n={n}'] = relative(hilbert(hf) - f, f)
        consistency[f'n={n}'] = relative(hf - from_projector, f)
        flipped = apply_multiplier(f, -hilbert_multiplier(header))
        mutated[f'n={n}'] = relative(flipped - from_projector, f)
    return [
        ctx.result('hilbert_involution', involution),
        ctx.result('hilbert_projector_consistency', consistency),
        ctx.result('mutation_detection', mutated),
    ]


@check(criterion=4)
def check_spectrum_support(ctx):
    values = {}
    for n in ctx.dimensions:
        header = ctx.header(n)
        rng = ctx.rng(4, n)
        minus = chi_field(header, Side.MINUS)
        nonzero = header.frequency_magnitude() > 0
        worst = 0.0
        for _ in range(20):
            coeffs = dft_forward(hardy_project(Side.PLUS, random_field(header, rng))).coeffs
            leak = np.sum(np.abs(multiply_arrays(minus, coeffs, n)) ** 2, axis=0)
            worst = max(worst, float(leak[nonzero].max() / np.sum(np.abs(coeffs) ** 2)))
        values[f'n={n}'] = worst
    return [ctx.result('hardy_spectrum_support', values)]


@check(criterion=5)
def check_spectrum_pairing(ctx):
    values = {}
    for n in ctx.dimensions:
        header = ctx.header(n)
        rng = ctx.rng(5, n)
        psis = [make_psi_minus(header, e) for e in random_envelopes(header, rng, 10)]
        worst = 0.0
        for _ in range(10):
            f = hardy_project(Side.PLUS, random_field(header, rng))
            for psi in psis:
                ratio = spectrum_pairing(f, psi).norm() / (f.l2_norm() * psi.l2_norm())
                worst = max(worst, ratio)
        values[f'n={n}'] = worst
    return [ctx.result('spectrum_pairing', values)]


def localized_ring(header):
    '''Hardy-projected Gaussian ring whose spatial envelope sits well inside the box'''
    nyquist_modes = header.dims[0] / 2
    spec = GaussianRingSpec(
        radius_fraction=RING_RADIUS_MODES / nyquist_modes,
        width_fraction=RING_WIDTH_MODES / nyquist_modes,
    )
    return hardy_project(Side.PLUS, gaussian_ring(header, spec))


@check(criterion=6)
def check_routes(ctx):
    cauchy, factorization = {}, {}
    for n in [n for n in ctx.dimensions if n <= 2]:
        header = ctx.header(n, ROUTE_POINTS)
        h = header.spacing[0]
        f = localized_ring(header)
        g = random_field(header, ctx.rng(6, n))
        for steps in (2, 4, 8):
            x0 = steps * h
            spectral = spectral_extend(f, x0)
            cauchy[f'n={n} x0={steps}h'] = relative(spectral - cauchy_extend(f, x0), spectral)
            expected = spectral_extend(g, x0)
            factorization[f'n={n} x0={steps}h'] = relative(
                expected - poisson_extend(hardy_project(Side.PLUS, g), x0), expected
            )
    return [
        ctx.result('route_cauchy', cauchy),
        ctx.result('route_poisson_factorization', factorization),
    ]


def convergence_slabs(ctx, n, scalar=False):
    '''
    Slabs of one fixed mode sum on a grid and on its refinement, both at heights
    a - h, a, a + h with h the horizontal spacing.
    '''
    rng = ctx.rng(7, n)
    modes = CONVERGENCE_MODES[n]
    values = [random_multivector(rng, n) for _ in modes]
    if scalar:
        values = [Multivector.scalar(v.sc, n) for v in values]
    slabs = []
    for refinement in (1, 2):
        header = ctx.header(n, PROFILES[ctx.profile]['points'][n] * refinement)
        h = header.spacing[0]
        heights = CONVERGENCE_HEIGHT + h * np.array([-1.0, 0.0, 1.0])
        slabs.append((mode_sum(header, modes, values), heights))
    return slabs


def observed_order_gap(coarse, fine):
    '''|coarse / fine - 4|: distance of the observed halving ratio from second order'''
    return abs(coarse / fine - 4)


@check(criterion=7)
def check_monogenicity(ctx):
    dirac, generalized = {}, {}
    for n in [n for n in ctx.dimensions if n <= 2]:
        residuals = []
        for f, heights in convergence_slabs(ctx, n):
            slab = build_slab(spectral_extend, f, heights)
            residuals.append((dirac_residual(slab), generalized_cr_residual(slab)))
        (d_coarse, g_coarse), (d_fine, g_fine) = residuals
        dirac[f'n={n}'] = observed_order_gap(d_coarse, d_fine)
        generalized[f'n={n}'] = observed_order_gap(g_coarse, g_fine)
        logger.debug(f'n={n}: dirac {d_coarse:.3e} -> {d_fine:.3e}')
    return [
        ctx.result('dirac_convergence', dirac),
        ctx.result('generalized_cr_convergence', generalized),
    ]


def conjugate_system_slabs(f0, heights):
    systems = [conjugate_harmonic_extend(f0, x0) for x0 in heights]
    return [
        SlabField(f0.header, heights, tuple(system[j] for system in systems))
        for j in range(f0.header.n + 1)
    ]


@check(criterion=8)
def check_vector_correspondence(ctx):
    correspondence, convergence = {}, {}
    for n in ctx.dimensions:
        header = ctx.header(n)
        f0 = random_field(header, ctx.rng(8, n), scalar_only=True)
        rhs = f0
        for j in range(1, n + 1):
            rhs = rhs - riesz(j, f0).left_multiply(Multivector.basis(1 << (j - 1), n))
        correspondence[f'n={n}'] = relative(hardy_project(Side.PLUS, f0) * 2 - rhs, f0)
        if n <= 2:
            coarse, fine = (
                gcr_residual(conjugate_system_slabs(f, heights))
                for f, heights in convergence_slabs(ctx, n, scalar=True)
            )
            convergence[f'n={n}'] = observed_order_gap(coarse, fine)
    return [
        ctx.result('vector_correspondence', correspondence),
        ctx.result('gcr_convergence', convergence),
    ]


@check(criterion=9)
def check_plancherel(ctx):
    values = {}
    for n in ctx.dimensions:
        header = ctx.header(n)
        rng = ctx.rng(9, n)
        worst = 0.0
        for _ in range(20):
            f, g = random_field(header, rng), random_field(header, rng)
            worst = max(worst, plancherel_defect(f, g) / (f.l2_norm() * g.l2_norm()))
        values[f'n={n}'] = worst
    return [ctx.result('plancherel', values)]


def density_battery(header, rng):
    '''Gaussian rings of a few radii and widths (lattice units) with random values'''
    length = header.extent[0]
    return [
        gaussian_ring_density(header, radius / length, width / length, value)
        for radius, width, value in [
            (3.0, 0.7, Multivector.scalar(1.0, header.n)),
            (4.0, 1.0, random_multivector(rng, header.n)),
            (5.0, 1.5, random_multivector(rng, header.n)),
        ]
    ]


@check(criterion=10)
def check_bergman(ctx):
    single, inequality, pairing, semigroup, support = {}, {}, {}, {}, {}
    for n in [n for n in ctx.dimensions if n <= 2]:
        header = ctx.header(n)
        rng = ctx.rng(10, n)
        box = header.box_volume

        m = (3,) + (1,) * (n - 1)
        g = random_multivector(rng, n)
        density = single_mode_density(header, m, g)
        xi = np.array([mk / length for mk, length in zip(m, header.extent)])
        radius = float(np.linalg.norm(xi))
        hardy = norm(multiply(chi_projector(Side.PLUS, xi), g))
        slab = bergman_slab(density, geometric_x0_grid(density))
        for p in (1.0, 1.5, 2.0):
            closed = box ** (1 / p - 1) * hardy * (2 * np.pi * p * radius) ** (-1 / p)
            estimate = bergman_norm(slab, p, rule='simpson').value
            single[f'n={n} p={p}'] = abs(estimate - closed) / closed

        psis = [make_psi_minus(header, e) for e in random_envelopes(header, rng, 5)]
        minus = chi_field(header, Side.MINUS)
        h = header.spacing[0]
        for index, density in enumerate(density_battery(header, rng)):
            slab = bergman_slab(density, geometric_x0_grid(density))
            for p in (1.0, 1.5, 2.0):
                left = weighted_spectral_norm(density, p, sup_form=p == 1.0)
                inequality[f'n={n} ring={index} p={p}'] = left / bergman_norm(slab, p).value
            for x0 in (h, 4 * h):
                grid_slice = bergman_slice(density, x0)
                pairing[f'n={n} ring={index} x0={x0:.3g}'] = max(
                    spectrum_pairing(grid_slice, psi).norm()
                    / (grid_slice.l2_norm() * psi.l2_norm())
                    for psi in psis
                )
                later = bergman_slice(density, x0 + 2 * h)
                semigroup[f'n={n} ring={index} x0={x0:.3g}'] = relative(
                    later - poisson_extend(grid_slice, 2 * h), later
                )
                coeffs = dft_forward(grid_slice).coeffs
                support[f'n={n} ring={index} x0={x0:.3g}'] = float(
                    np.sqrt(
                        np.sum(np.abs(multiply_arrays(minus, coeffs, n)) ** 2)
                        / np.sum(np.abs(coeffs) ** 2)
                    )
                )
    return [
        ctx.result('bergman_single_mode', single),
        ctx.result('bergman_inequality', inequality),
        ctx.result('bergman_slice_pairing', pairing),
        ctx.result('bergman_semigroup', semigroup),
        ctx.result('bergman_spectrum_support', support),
    ]


@check(criterion=11)
def check_mean_value(ctx):
    header = ctx.header(2)
    h = header.spacing[0]
    radius = 4 * h
    heights = MEAN_VALUE_HEIGHT + h * np.arange(-6, 7)
    centre = Paravector(x0=MEAN_VALUE_HEIGHT, vec=(0.0, 0.0))
    rng = ctx.rng(11)
    values = [random_multivector(rng, 2) for _ in MEAN_VALUE_MODES]
    slab = build_slab(spectral_extend, mode_sum(header, MEAN_VALUE_MODES, values), heights)
    scale = max(s.max_norm() for s in slab.slices)
    harmonic = mean_value_defect(slab, centre, radius) / scale

    # |x_|^2 on a box four radii wide, so its max norm is 8 R^2 on every grid
    box = FieldHeader.cube(2, 16, length=16 * h)
    square = np.sum(box.coordinate_grid() ** 2, axis=0)
    control = SlabField(box, heights, tuple(GridField.from_scalar(box, square) for _ in heights))
    control_scale = max(s.max_norm() for s in control.slices)
    control_defect = mean_value_defect(control, centre, radius) / control_scale
    return [
        ctx.result('mean_value_harmonic', {'n=2 r=4h': harmonic}),
        ctx.result('mean_value_control', {'n=2 r=4h': control_defect}),
    ]


def differing_bytes(a, b):
    if len(a) != len(b):
        return max(len(a), len(b))
    return int(np.count_nonzero(np.frombuffer(a, np.uint8) != np.frombuffer(b, np.uint8)))


@check(criterion=12)
def check_file_format(ctx):
    rng = ctx.rng(12)
    roundtrip = {}
    for n in range(1, 5):
        header = FieldHeader.cube(n, 8 if n < 4 else 4, length=rng.uniform(0.5, 2.0))
        shape = header.shape
        field = GridField(header, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        data = encode_field(field)
        restored = decode_field(data)
        roundtrip[f'n={n}'] = differing_bytes(data, encode_field(restored)) + int(
            not np.array_equal(restored.samples.view(np.uint8), field.samples.view(np.uint8))
        )
    header = ctx.header(ctx.dimensions[-1])
    spec = RandomBandlimitedSpec(seed=int(rng.integers(2**31)))
    determinism = differing_bytes(
        encode_field(random_bandlimited(header, spec)),
        encode_field(random_bandlimited(header, spec)),
    )
    return [
        ctx.result('field_roundtrip', roundtrip),
        ctx.result('generator_determinism', {f'n={header.n}': determinism}),
    ]


def failed_check(fn, error):
    return CheckResult(
        name=fn.__name__,
        criterion=fn.criterion,
        measured=float('nan'),
        tolerance=0.0,
        passed=False,
        detail=f'{type(error).__name__}: {error}',
    )


def run_verify(profile='quick', seed=0, tolerances=None):
    '''Run every registered check and collect the results'''
    if profile not in PROFILES:
        raise DomainError(f'Unknown profile {profile!r}; choose one of {", ".join(PROFILES)}')
    if seed < 0:
        raise DomainError(f'Seed must be nonnegative, got {seed}')
    tolerances = tolerances or load_tolerances()
    ctx = VerifyContext(profile=profile, seed=seed, tolerances=tolerances)
    report = VerifyReport(profile=profile, seed=seed, tolerance_version=tolerances['version'])
    for fn in CHECKS:
        logger.info(f'Running {fn.__name__} (criterion {fn.criterion})')
        try:
            results = fn(ctx)
        except Exception as e:
            logger.error(f'{fn.__name__} raised {type(e).__name__}: {e}')
            results = [failed_check(fn, e)]
        for result in results:
            if not result.passed:
                logger.warning(f'{result.name} failed: {result.measured:.3e} ({result.detail})')
        report.checks.extend(results)
    return report
