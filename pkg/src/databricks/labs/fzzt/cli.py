"""Command-line front end: ``fzzt <group> <command> [flags]``.

Every command writes one table (CSV or JSON) and a run manifest, and exits with 0 on success,
2 on configuration errors, 3 on numerical non-convergence and 4 on domain errors. Failures are
reported on stderr as one JSON line ``{"error": code, "category": ..., "message": ...}``."""

import argparse
import dataclasses
import json
import logging
import platform
import sys
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import mpmath
import numpy as np

from databricks.labs.blueprint.logger import install_logger
from databricks.labs.blueprint.parallel import ManyError

from databricks.labs.fzzt.__about__ import __version__
from databricks.labs.fzzt.airy import Airy
from databricks.labs.fzzt.branes import BraneConfig, brane_brute_check, brane_partition
from databricks.labs.fzzt.cache import ZeroCache
from databricks.labs.fzzt.config import RunConfig, parse_config
from databricks.labs.fzzt.ensemble import (
    DetShift,
    Resolvent,
    TracePower,
    edge_profile,
    empirical_resolvent_inverse,
    expect_observable,
    sample_ensemble,
    variance_scaling,
)
from databricks.labs.fzzt.errors import (
    ConfigError,
    ConfigValueError,
    DomainError,
    FzztError,
    NumericalError,
)
from databricks.labs.fzzt.gamma import liouville_fourier, recfact_eval, shift_residual
from databricks.labs.fzzt.kernels import KernelSpec, airy_kernel, gaussian_kernel, xi_kernel
from databricks.labs.fzzt.pq import (
    extract_sk,
    gen_airy_residual,
    orth_poly,
    truncated_potential,
    xi_p_sweep,
)
from databricks.labs.fzzt.precision import Numerics, context_for
from databricks.labs.fzzt.primes import euler_log_zeta, explicit_check, prime_side
from databricks.labs.fzzt.series import PowerSeries
from databricks.labs.fzzt.writers import ArtifactWriter, Dataclass, DataclassInstance, FileWriter
from databricks.labs.fzzt.xi import XiFunction, compare_kernels, xi_function

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_DOMAIN = 4
EXIT_INTERNAL = 1

_EXIT_CODES: dict[type[FzztError], int] = {
    ConfigError: EXIT_CONFIG,
    NumericalError: EXIT_NUMERICAL,
    DomainError: EXIT_DOMAIN,
}

DEFAULT_SAMPLES = 10_000


# artifact rows


@dataclass
class ValueRow:
    z_re: str
    z_im: str
    value_re: str
    value_im: str
    route: str
    error_estimate: str | None = None


@dataclass
class GridRow:
    x: str
    value: str
    magnitude: str


@dataclass
class ZeroRow:
    index: int
    zero: str
    bracket_lo: str
    bracket_hi: str
    residual: str


@dataclass
class CoefficientRow:
    index: int
    value_re: str
    value_im: str


@dataclass
class ProductRow:
    z: str
    cutoff: float
    zeros_used: int
    product: str
    reference: str
    relative_error: str


@dataclass
class BraneRow:
    kernel: str
    eigenvalues: str
    value_re: str
    value_im: str


@dataclass
class BraneCheckRow:
    kernel: str
    eigenvalues: str
    reduced: str
    direct: str
    discrepancy: str


@dataclass
class CouplingRow:
    p: int
    k: int
    s_k: str
    s_k_derivative: str


@dataclass
class SweepRow:
    p: int
    max_gap: str


@dataclass
class ResidualRow:
    p: int
    z: str
    residual: str
    error_estimate: str
    boundary: str


@dataclass
class PrimeCountRow:
    ell: str
    strict: str
    weak: str
    average: str


@dataclass
class ExplicitRow:
    ell: str
    zeros_used: int
    loop_integral: str
    prime_average: str
    lower_limit: str
    gap: str
    corrected_gap: str
    warnings: str


@dataclass
class EulerRow:
    s_re: str
    s_im: str
    value_re: str
    value_im: str
    tail_bound: str
    primes_used: int


@dataclass
class RecFactRow:
    z_re: str
    z_im: str
    value_re: str
    value_im: str
    route: str
    shift_residual: str
    tail_bound: str | None = None


@dataclass
class LiouvilleRow:
    z_re: str
    z_im: str
    transform_re: str
    transform_im: str
    gamma_re: str
    gamma_im: str
    recfact_re: str
    recfact_im: str
    discrepancy: str
    route: str


@dataclass
class MatrixRow:
    i: int
    j: int
    re: float
    im: float


@dataclass
class EstimateRow:
    N: int
    observable: str
    mean_re: float
    mean_im: float
    std_error: float
    samples: int
    seed: int


@dataclass
class VarianceRow:
    N: int
    variance: float
    covariance: float
    slope: float
    slope_lo: float
    slope_hi: float


@dataclass
class ResolventRow:
    z: float
    r: float
    max_inversion_gap: float


@dataclass
class EdgeRow:
    s: float
    z: float
    mean_re: float
    mean_im: float
    std_error: float
    exact: float
    airy: float


@dataclass
class ComparisonRow:
    quantity: str
    point: str
    left_re: str
    left_im: str
    right_re: str
    right_im: str
    gap: str


# dispatch


@dataclass
class Run:
    config: RunConfig
    writer: ArtifactWriter
    cache: ZeroCache
    artifacts: list[str] = dataclasses.field(default_factory=list)

    @property
    def numerics(self) -> Numerics:
        return Numerics(self.config.precision_digits)

    @property
    def xi(self) -> XiFunction:
        return xi_function(
            self.config.precision_digits,
            self.config.theta_window,
            self.config.theta_tail_margin,
            repr(self.config.quadrature_tol),
        )

    def zeros(self, T: float | None = None):
        scan = self.config.zero_scan
        return self.cache.zeros(scan.T if T is None else T, scan.step, self.numerics, xi=self.xi)

    def emit(self, name: str, rows: Sequence[DataclassInstance], klass: Dataclass) -> None:
        self.writer.save_rows(name, rows, klass)
        self.artifacts.append(name)

    def text(self, x: Any) -> str:
        ctx = context_for(self.config.precision_digits)
        return ctx.nstr(ctx.convert(x), self.config.precision_digits)

    def parts(self, x: Any) -> tuple[str, str]:
        ctx = context_for(self.config.precision_digits)
        value = ctx.mpc(ctx.convert(x))
        return self.text(value.real), self.text(value.imag)


Handler = Callable[[Run, argparse.Namespace], None]


@dataclass(frozen=True)
class Command:
    group: str
    name: str
    help: str
    arguments: tuple[tuple[tuple[str, ...], dict[str, Any]], ...]
    handler: Handler


_COMMANDS: dict[tuple[str, str], Command] = {}


def _arg(*flags: str, **kwargs: Any) -> tuple[tuple[str, ...], dict[str, Any]]:
    return flags, kwargs


def command(group: str, name: str, help_text: str, *arguments: tuple[tuple[str, ...], dict[str, Any]]):
    def register(handler: Handler) -> Handler:
        _COMMANDS[(group, name)] = Command(group, name, help_text, arguments, handler)
        return handler

    return register


_GRID = (
    _arg("--from", dest="start", type=float, required=True),
    _arg("--to", dest="stop", type=float, required=True),
    _arg("--points", type=int, required=True),
)
_SAMPLES = _arg("--samples", type=int, default=DEFAULT_SAMPLES)


def _kernel(name: str, numerics: Numerics) -> KernelSpec:
    match name:
        case "airy":
            return airy_kernel()
        case "xi":
            return xi_kernel(numerics)
        case "gaussian":
            return gaussian_kernel()
    msg = f"unknown kernel: {name}"
    raise DomainError(msg)


@command(
    "xi",
    "eval",
    "Ξ(z) by the reference, fourier or series route",
    _arg("--z", nargs="+", required=True),
    _arg("--route", choices=["reference", "fourier", "series"], default="reference"),
    _arg("--order", type=int),
)
def xi_eval_command(run: Run, args: argparse.Namespace) -> None:
    rows = []
    for z in args.z:
        result = run.xi.evaluate(z, args.route, args.order)
        estimate = None if result.error_estimate is None else run.text(result.error_estimate.value)
        rows.append(ValueRow(*run.parts(result.z.value), *run.parts(result.value.value), result.route, estimate))
    run.emit("xi_eval", rows, ValueRow)


@command("xi", "grid", "Ξ on a real grid, for plotting its magnitude", *_GRID)
def xi_grid_command(run: Run, args: argparse.Namespace) -> None:
    grid = run.xi.grid(args.start, args.stop, args.points)
    run.emit("xi_grid", [GridRow(run.text(x), run.text(v), run.text(abs(v))) for x, v in grid], GridRow)


def _zero_rows(run: Run, zeros) -> list[ZeroRow]:
    return [
        ZeroRow(n, run.text(z.value), run.text(lo.value), run.text(hi.value), run.text(r.value))
        for n, (z, (lo, hi), r) in enumerate(zip(zeros.zeros, zeros.brackets, zeros.residuals), start=1)
    ]


@command("xi", "zeros", "zeros of Ξ on [0, T], read from or written to the zero cache", _arg("--T", type=float))
def xi_zeros_command(run: Run, args: argparse.Namespace) -> None:
    run.emit("xi_zeros", _zero_rows(run, run.zeros(args.T)), ZeroRow)


@command("xi", "coeffs", "moments a₂ₙ of the theta kernel", _arg("--max-n", dest="max_n", type=int, default=10))
def xi_coeffs_command(run: Run, args: argparse.Namespace) -> None:
    xi = run.xi
    rows = [CoefficientRow(n, run.text(xi.a2n(n).value), "0") for n in range(args.max_n + 1)]
    run.emit("xi_coeffs", rows, CoefficientRow)


@command(
    "xi",
    "product",
    "Ξ(0)Π(1 − z²/λₙ²) over zeros below each cutoff, next to the reference Ξ",
    _arg("--z", nargs="+", required=True),
    _arg("--cutoffs", nargs="+", type=float),
)
def xi_product_command(run: Run, args: argparse.Namespace) -> None:
    xi = run.xi
    ctx = run.numerics.ctx
    cutoffs = args.cutoffs or [run.config.zero_scan.T]
    zeros = run.zeros(max(cutoffs))
    rows = []
    for z in args.z:
        reference = ctx.re(xi.reference(z))
        for cutoff in cutoffs:
            head = zeros.below(cutoff)
            product = xi.product(z, head)
            error = abs(product - reference) / abs(reference)
            rows.append(ProductRow(z, cutoff, len(head), run.text(product), run.text(reference), run.text(error)))
    run.emit("xi_product", rows, ProductRow)


@command(
    "airy",
    "eval",
    "Ai(z) by the reference or kontsevich route",
    _arg("--z", nargs="+", required=True),
    _arg("--route", choices=["reference", "kontsevich"], default="reference"),
)
def airy_eval_command(run: Run, args: argparse.Namespace) -> None:
    airy = Airy(run.numerics)
    rows = []
    for z in args.z:
        result = airy.evaluate(z, args.route)
        estimate = None if result.error_estimate is None else run.text(result.error_estimate.value)
        rows.append(ValueRow(*run.parts(result.z.value), *run.parts(result.value.value), result.route, estimate))
    run.emit("airy_eval", rows, ValueRow)


@command("airy", "grid", "Ai on a real grid, for plotting its magnitude", *_GRID)
def airy_grid_command(run: Run, args: argparse.Namespace) -> None:
    grid = Airy(run.numerics).grid(args.start, args.stop, args.points)
    run.emit("airy_grid", [GridRow(run.text(x), run.text(v), run.text(abs(v))) for x, v in grid], GridRow)


@command("airy", "zeros", "the first zeros of Ai on the negative axis", _arg("--count", type=int, default=10))
def airy_zeros_command(run: Run, args: argparse.Namespace) -> None:
    run.emit("airy_zeros", _zero_rows(run, Airy(run.numerics).zeros(args.count)), ZeroRow)


@command(
    "brane",
    "eval",
    "det[G_{j−1}(z_i)]/Δ(z) for up to four branes",
    _arg("--kernel", choices=["airy", "xi", "gaussian"], default="airy"),
    _arg("--z", nargs="+", required=True),
)
def brane_eval_command(run: Run, args: argparse.Namespace) -> None:
    numerics = run.numerics
    config = BraneConfig(tuple(numerics.number(z) for z in args.z))
    value = brane_partition(_kernel(args.kernel, numerics), config, numerics)
    run.emit("brane_eval", [BraneRow(args.kernel, " ".join(args.z), *run.parts(value.value))], BraneRow)


@command(
    "brane",
    "check",
    "two branes by direct double integration against the determinant reduction",
    _arg("--kernel", choices=["xi", "gaussian"], default="gaussian"),
    _arg("--z", nargs=2, required=True),
)
def brane_check_command(run: Run, args: argparse.Namespace) -> None:
    numerics = run.numerics
    config = BraneConfig(tuple(numerics.number(z) for z in args.z))
    check = brane_brute_check(_kernel(args.kernel, numerics), config, numerics)
    row = BraneCheckRow(
        args.kernel,
        " ".join(args.z),
        run.text(check.reduced.value),
        run.text(check.direct.value),
        run.text(check.discrepancy.value),
    )
    run.emit("brane_check", [row], BraneCheckRow)


@command(
    "pq",
    "sk",
    "(p,1) couplings s_k read off the log kernel series",
    _arg("--p", type=int, required=True),
    _arg("--kernel", choices=["xi", "liouville"], default="xi"),
)
def pq_sk_command(run: Run, args: argparse.Namespace) -> None:
    couplings = extract_sk(args.p, run.numerics, args.kernel)
    rows = [
        CouplingRow(args.p, k, run.text(s.value), run.text(couplings.s_derivative[k].value))
        for k, s in sorted(couplings.s.items())
    ]
    run.emit("pq_sk", rows, CouplingRow)


@command(
    "pq",
    "xi-p",
    "largest gap between Ξ_p and Ξ on a grid, per truncation order",
    _arg("--orders", nargs="+", type=int, default=[1, 5, 9]),
    _arg("--from", dest="start", type=float, default=0.0),
    _arg("--to", dest="stop", type=float, default=5.0),
    _arg("--points", type=int, default=11),
)
def pq_xi_p_command(run: Run, args: argparse.Namespace) -> None:
    numerics = run.numerics
    points = numerics.ctx.linspace(args.start, args.stop, args.points)
    gaps = xi_p_sweep(args.orders, points, numerics)
    run.emit("pq_xi_p", [SweepRow(p, run.text(gap.value)) for p, gap in gaps.items()], SweepRow)


@command(
    "pq",
    "residual",
    "residual of the generalized Airy equation QΞ_p = zΞ_p",
    _arg("--p", type=int, required=True),
    _arg("--z", nargs="+", required=True),
)
def pq_residual_command(run: Run, args: argparse.Namespace) -> None:
    rows = []
    for z in args.z:
        result = gen_airy_residual(z, args.p, run.numerics)
        rows.append(
            ResidualRow(
                args.p,
                z,
                run.text(result.residual.value),
                run.text(result.error_estimate.value),
                run.text(abs(result.boundary.value)),
            )
        )
    run.emit("pq_residual", rows, ResidualRow)


@command(
    "pq",
    "orthpoly",
    "coefficients of the orthogonal polynomial Bₙ; the Gaussian potential y² without --p",
    _arg("--n", type=int, required=True),
    _arg("--p", type=int),
)
def pq_orthpoly_command(run: Run, args: argparse.Namespace) -> None:
    numerics = run.numerics
    if args.p is None:
        potential = PowerSeries.from_coefficients([0, 0, 1], numerics)
    else:
        potential = truncated_potential(extract_sk(args.p, numerics), numerics, order=max(args.n, args.p))
    poly = orth_poly(args.n, potential, numerics)
    rows = [CoefficientRow(m, *run.parts(c)) for m, c in enumerate(poly.coeffs)]
    run.emit("pq_orthpoly", rows, CoefficientRow)


@command("primes", "count", "weighted prime-power counts Σ_{pⁿ<ℓ} 1/n", _arg("--ell", nargs="+", required=True))
def primes_count_command(run: Run, args: argparse.Namespace) -> None:
    rows = []
    for ell in args.ell:
        count = prime_side(ell, run.numerics)
        values = (count.ell, count.strict, count.weak, count.average)
        rows.append(PrimeCountRow(*(run.text(v.value) for v in values)))
    run.emit("primes_count", rows, PrimeCountRow)


@command(
    "primes",
    "explicit",
    "∫₂^ℓ W over the first zeros against the prime-power count",
    _arg("--ell", nargs="+", required=True),
    _arg("--zeros", type=int, default=100),
    _arg("--cesaro", type=int, default=10, help="Cesàro order; 0 sums the zeros without smoothing"),
)
def primes_explicit_command(run: Run, args: argparse.Namespace) -> None:
    zeros = run.zeros()
    if len(zeros) < args.zeros:
        logger.warning(f"only {len(zeros)} zeros below {run.config.zero_scan.T}, asked for {args.zeros}")
    head = zeros.head(args.zeros)
    smoothing = "none" if args.cesaro == 0 else ("cesaro", args.cesaro)
    rows = []
    for ell in args.ell:
        check = explicit_check(ell, head, run.numerics, smoothing)
        rows.append(
            ExplicitRow(
                run.text(check.ell.value),
                check.zeros_used,
                run.text(check.loop_integral.value),
                run.text(check.prime_average.value),
                run.text(check.lower_limit.value),
                run.text(check.gap.value),
                run.text(check.corrected_gap.value),
                "; ".join(check.warnings),
            )
        )
    run.emit("primes_explicit", rows, ExplicitRow)


@command(
    "primes",
    "euler",
    "log ζ(s) from the Euler product, at s or at s = iz + ½",
    _arg("--s", nargs="+"),
    _arg("--z", nargs="+"),
    _arg("--p-max", dest="p_max", type=int, default=10_000),
)
def primes_euler_command(run: Run, args: argparse.Namespace) -> None:
    numerics = run.numerics
    ctx = numerics.ctx
    points = [numerics.number(z) for z in args.z or []]
    points += [-ctx.mpc(0, 1) * (numerics.number(s) - ctx.mpf(0.5)) for s in args.s or []]
    if not points:
        msg = "primes euler needs --s or --z"
        raise ConfigValueError(msg)
    rows = []
    for z in points:
        result = euler_log_zeta(z, args.p_max, numerics)
        s = ctx.mpc(0, 1) * z + ctx.mpf(0.5)
        bound = run.text(result.tail_bound.value)
        rows.append(EulerRow(*run.parts(s), *run.parts(result.value.value), bound, result.primes_used))
    run.emit("primes_euler", rows, EulerRow)


@command(
    "gamma",
    "recfact",
    "1/Π(z) by the Weierstrass product or the reference, with the shift identity residual",
    _arg("--z", nargs="+", required=True),
    _arg("--route", choices=["product", "reference"], default="product"),
    _arg("--factors", type=int, default=1000),
)
def gamma_recfact_command(run: Run, args: argparse.Namespace) -> None:
    numerics = run.numerics
    rows = []
    for z in args.z:
        if args.route == "product":
            result = recfact_eval(z, numerics, factors=args.factors)
        else:
            result = recfact_eval(z, numerics, route="reference")
        residual = shift_residual(z, numerics, args.factors)
        bound = None if result.tail_bound is None else run.text(result.tail_bound.value)
        value = (*run.parts(result.z.value), *run.parts(result.value.value))
        rows.append(RecFactRow(*value, result.route, run.text(residual.value), bound))
    run.emit("gamma_recfact", rows, RecFactRow)


def _liouville_rows(run: Run, points: Sequence[str]) -> list[LiouvilleRow]:
    numerics = run.numerics
    rows = []
    for z in points:
        result = liouville_fourier(z, numerics)
        recfact = recfact_eval(z, numerics, route="reference")
        rows.append(
            LiouvilleRow(
                *run.parts(result.z.value),
                *run.parts(result.value.value),
                *run.parts(result.reference.value),
                *run.parts(recfact.value.value),
                run.text(result.discrepancy.value),
                result.route,
            )
        )
    return rows


@command(
    "gamma",
    "liouville",
    "∫e^{izφ − e^φ}dφ next to Γ(iz)",
    _arg("--z", nargs="+", required=True),
)
def gamma_liouville_command(run: Run, args: argparse.Namespace) -> None:
    run.emit("gamma_liouville", _liouville_rows(run, args.z), LiouvilleRow)


@command("mc", "sample", "one matrix from the Gaussian Hermitian ensemble", _arg("--N", type=int, required=True))
def mc_sample_command(run: Run, args: argparse.Namespace) -> None:
    sample = sample_ensemble(args.N, run.config.seed)
    rows = [
        MatrixRow(i, j, float(sample.matrix[i, j].real), float(sample.matrix[i, j].imag))
        for i in range(args.N)
        for j in range(args.N)
    ]
    run.emit("mc_sample", rows, MatrixRow)


@command(
    "mc",
    "expect",
    "Monte Carlo expectation of det(z − M), Tr Mᵏ or Tr(z − M)⁻¹",
    _arg("--N", type=int, required=True),
    _arg("--observable", choices=["det", "trace", "resolvent"], default="det"),
    _arg("--z", type=complex, default=0j),
    _arg("--k", type=int, default=2),
    _SAMPLES,
)
def mc_expect_command(run: Run, args: argparse.Namespace) -> None:
    match args.observable:
        case "det":
            obs: Any = DetShift(args.z)
        case "trace":
            obs = TracePower(args.k)
        case _:
            obs = Resolvent(args.z)
    estimate = expect_observable(args.N, obs, args.samples, run.config.seed)
    row = EstimateRow(
        args.N,
        str(obs),
        estimate.mean.real,
        estimate.mean.imag,
        estimate.std_error,
        estimate.samples,
        estimate.seed,
    )
    run.emit("mc_expect", [row], EstimateRow)


@command(
    "mc",
    "variance",
    "scaling of Var(Tr M²/N²) with N",
    _arg("--sizes", nargs="+", type=int, default=[4, 8, 16, 32]),
    _SAMPLES,
)
def mc_variance_command(run: Run, args: argparse.Namespace) -> None:
    scaling = variance_scaling(args.sizes, args.samples, run.config.seed)
    low, high = scaling.slope_ci
    rows = [
        VarianceRow(N, scaling.variances[N], scaling.covariances[N], scaling.slope, low, high) for N in args.sizes
    ]
    run.emit("mc_variance", rows, VarianceRow)


@command(
    "mc",
    "resolvent",
    "empirical resolvent outside the spectrum and its inversion gap",
    _arg("--N", type=int, required=True),
    *_GRID,
    _SAMPLES,
)
def mc_resolvent_command(run: Run, args: argparse.Namespace) -> None:
    grid = np.linspace(args.start, args.stop, args.points).tolist()
    inversion = empirical_resolvent_inverse(args.N, grid, args.samples, run.config.seed)
    rows = [ResolventRow(z, r, inversion.max_inversion_gap) for z, r in zip(inversion.grid, inversion.values)]
    run.emit("mc_resolvent", rows, ResolventRow)


@command(
    "mc",
    "edge",
    "⟨det(z − M)⟩ near the spectral edge next to Ai(s)",
    _arg("--N", type=int, required=True),
    *_GRID,
    _SAMPLES,
)
def mc_edge_command(run: Run, args: argparse.Namespace) -> None:
    s_grid = np.linspace(args.start, args.stop, args.points).tolist()
    profile = edge_profile(args.N, s_grid, args.samples, run.config.seed, run.numerics)
    rows = [EdgeRow(p.s, p.z, p.mean.real, p.mean.imag, p.std_error, p.exact, p.airy) for p in profile]
    run.emit("mc_edge", rows, EdgeRow)


@command("compare", "kernels", "derived against literal theta kernel, and the transform identity between them")
def compare_kernels_command(run: Run, _: argparse.Namespace) -> None:
    report = compare_kernels(run.numerics)
    rows = [
        ComparisonRow(
            "max_gap",
            run.text(report.argmax.value),
            run.text(report.derived_at_zero.value),
            "0",
            run.text(report.literal_at_zero.value),
            "0",
            run.text(report.max_gap.value),
        )
    ]
    for z, transform, expected, gap in report.identity:
        sides = (*run.parts(transform.value), *run.parts(expected.value))
        rows.append(ComparisonRow("transform_identity", run.text(z.value), *sides, run.text(gap.value)))
    run.emit("compare_kernels", rows, ComparisonRow)


@command(
    "compare",
    "liouville",
    "Γ(iz) from the Liouville transform against 1/Π(z)",
    _arg("--z", nargs="+", default=["-0.5j", "0.5-0.5j", "1-0.25j"]),
)
def compare_liouville_command(run: Run, args: argparse.Namespace) -> None:
    run.emit("compare_liouville", _liouville_rows(run, args.z), LiouvilleRow)


# entry points


_OVERRIDES = {
    "config": None,
    "digits": "precision_digits",
    "tol": "quadrature_tol",
    "window": "theta_window",
    "margin": "theta_tail_margin",
    "scan_height": "zero_scan.T",
    "scan_step": "zero_scan.step",
    "format": "output.format",
    "output": "output.path",
    "seed": "seed",
    "zero_cache": "zero_cache",
    "log_level": "log_level",
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or key=value configuration file")
    common.add_argument("--digits", type=int, help="working precision in decimal digits")
    common.add_argument("--tol", type=float, help="quadrature tolerance")
    common.add_argument("--window", type=float, help="theta kernel window")
    common.add_argument("--margin", type=int, help="theta tail margin")
    common.add_argument("--scan-height", dest="scan_height", type=float, help="zero scan height T")
    common.add_argument("--scan-step", dest="scan_step", type=float, help="zero scan step")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--output", help="artifact path; stdout when omitted")
    common.add_argument("--seed", type=int)
    common.add_argument("--zero-cache", dest="zero_cache", help="JSON file of cached zeros")
    common.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser = argparse.ArgumentParser(prog="fzzt", description="High-precision FZZT brane toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)
    sub: dict[str, Any] = {}
    for cmd in _COMMANDS.values():
        if cmd.group not in sub:
            sub[cmd.group] = groups.add_parser(cmd.group).add_subparsers(dest="command", required=True)
        leaf = sub[cmd.group].add_parser(cmd.name, help=cmd.help, description=cmd.help, parents=[common])
        for flags, kwargs in cmd.arguments:
            leaf.add_argument(*flags, **kwargs)
    return parser


def _contained(error: ManyError) -> list[BaseException]:
    errs = error.errs
    return list(errs() if callable(errs) else errs)


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, ManyError):
        return max((exit_code_for(e) for e in _contained(error)), default=EXIT_INTERNAL)
    for klass, code in _EXIT_CODES.items():
        if isinstance(error, klass):
            return code
    return EXIT_INTERNAL


def error_record(error: BaseException) -> dict[str, str]:
    if isinstance(error, ManyError):
        errs = _contained(error)
        record = error_record(max(errs, key=exit_code_for))
        record["message"] = f"{len(errs)} task(s) failed; most severe: {record['message']}"
        return record
    if isinstance(error, FzztError):
        return {"error": error.code, "category": error.category, "message": str(error)}
    return {"error": f"internal.{type(error).__name__}", "category": "internal", "message": str(error)}


def _manifest(run: Run, group: str, name: str, started: float, status: int) -> dict[str, Any]:
    return {
        "command": f"{group} {name}",
        "status": status,
        "config": run.config.as_dict(),
        "precision_digits": run.config.precision_digits,
        "quadrature_tol": run.config.quadrature_tol,
        "artifacts": run.artifacts,
        "versions": {
            "fzzt": __version__,
            "mpmath": mpmath.__version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "wall_time_s": round(time.monotonic() - started, 3),
    }


def dispatch(group: str, name: str, args: argparse.Namespace, config: RunConfig, writer: ArtifactWriter) -> int:
    """Runs one command and writes its artifact and manifest; errors propagate to the caller."""
    cmd = _COMMANDS.get((group, name))
    if cmd is None:
        msg = f"unknown command: {group} {name}"
        raise ConfigValueError(msg)
    run = Run(config, writer, ZeroCache(config.zero_cache))
    started = time.monotonic()
    logger.info(f"Running {group} {name} at {config.precision_digits} digits")
    cmd.handler(run, args)
    writer.save_manifest(_manifest(run, group, name, started, EXIT_OK))
    return EXIT_OK


def run_command(argv: Sequence[str], *, writer: ArtifactWriter | None = None, stderr=None) -> int:
    args = _parser().parse_args(list(argv))
    stderr = stderr or sys.stderr
    try:
        overrides = {key: getattr(args, flag) for flag, key in _OVERRIDES.items() if key is not None}
        config = parse_config(args.config, overrides)
        logging.getLogger("databricks").setLevel(config.log_level)
        if writer is None:
            writer = FileWriter(config.output.path, config.output.format)
        return dispatch(args.group, args.command, args, config, writer)
    except Exception as e:  # pylint: disable=broad-exception-caught
        status = exit_code_for(e)
        if status == EXIT_INTERNAL:
            logger.exception(f"{args.group} {args.command} failed")
        else:
            logger.debug(f"{args.group} {args.command} failed", exc_info=e)
        stderr.write(json.dumps(error_record(e), ensure_ascii=False) + "\n")
        return status


def main(argv: Sequence[str] | None = None) -> None:
    install_logger()
    logging.getLogger("databricks").setLevel("INFO")
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
