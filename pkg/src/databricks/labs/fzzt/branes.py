"""n FZZT branes: the matrix integral ∫dΦ e^{iTr(ZΦ)}e^{−U(Φ)} reduced to eigenvalues of Z.

For a unitarily invariant integrand the matrix integral collapses to
``det[G_{j−1}(z_i)] / Δ(z)`` with the one-dimensional moments ``G_m(z) = ∫φ^m g(φ)e^{izφ}dφ``
and the Vandermonde ``Δ(z) = Π_{i<j}(z_j − z_i)``. The overall constant is fixed so that a
single brane is the scalar transform G₀(z)."""

import functools
import logging
import math
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from databricks.labs.blueprint.parallel import Threads

from databricks.labs.fzzt.errors import ConfluenceUnstable, DomainError
from databricks.labs.fzzt.kernels import KernelSpec
from databricks.labs.fzzt.precision import Numerics, PrecisionNumber, PrecisionScalar
from databricks.labs.fzzt.quadrature import Window, choose_window, fourier_transform, integrate_nd
from databricks.labs.fzzt.xi import central_difference

logger = logging.getLogger(__name__)

MAX_BRANES = 4
MAX_MOMENT = 12
CONFLUENCE_TOL = 1e-6
NEAR_CONFLUENCE = 1e-3
ACCEPTABLE_ERROR = 1e-8


@dataclass(frozen=True)
class BraneConfig:
    eigenvalues: tuple[Any, ...]
    confluence_tol: float = CONFLUENCE_TOL

    def __post_init__(self):
        if len(self.eigenvalues) < 1:
            msg = "a brane configuration needs at least one eigenvalue"
            raise DomainError(msg)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class BruteCheck:
    reduced: PrecisionNumber
    direct: PrecisionNumber
    discrepancy: PrecisionScalar


def moment_transform(kernel: KernelSpec, m: int, z: Any, numerics: Numerics) -> Any:
    """G_m(z) = ∫ φ^m g(φ) e^{izφ} dφ in the working context."""
    if not 0 <= m <= MAX_MOMENT:
        msg = f"moment order must be in [0, {MAX_MOMENT}], got {m}"
        raise DomainError(msg)
    return fourier_transform(kernel, z, numerics, power=m).value.value


class MomentTable:
    """Memo of G_m(z) for one kernel; concurrent population of the same key stores one value."""

    def __init__(self, kernel: KernelSpec, numerics: Numerics):
        self._kernel = kernel
        self._numerics = numerics
        self._entries: dict[tuple[int, str], Any] = {}
        self._lock = threading.Lock()

    @property
    def kernel_id(self) -> str:
        return self._kernel.id

    @property
    def max_m(self) -> int:
        return max((m for m, _ in self._entries), default=-1)

    def __len__(self):
        return len(self._entries)

    def _key(self, m: int, z: Any) -> tuple[int, str]:
        return m, self._numerics.ctx.nstr(self._numerics.complex(z), self._numerics.digits)

    def get(self, m: int, z: Any) -> Any:
        key = self._key(m, z)
        with self._lock:
            if key in self._entries:
                return self._entries[key]
        value = moment_transform(self._kernel, m, z, self._numerics)
        with self._lock:
            return self._entries.setdefault(key, value)

    def populate(self, max_m: int, points: Sequence[Any]) -> "MomentTable":
        tasks = [functools.partial(self.get, m, z) for m in range(max_m + 1) for z in points]
        logger.info(f"Populating {len(tasks)} moments of the {self._kernel.id} kernel")
        Threads.strict(f"moments of {self._kernel.id}", tasks)
        return self

    def derivative_gap(self, m: int, z: Any) -> PrecisionScalar:
        """|G_m(z) − (−i d/dz) G_{m−1}(z)| with the derivative by central differences."""
        if m < 1:
            msg = f"the derivative check needs m ≥ 1, got {m}"
            raise DomainError(msg)
        ctx = self._numerics.ctx
        z = self._numerics.number(z)
        derivative = central_difference(lambda w: self.get(m - 1, w), z, self._numerics)
        return self._numerics.scalar(abs(self.get(m, z) + ctx.mpc(0, 1) * derivative))


def _groups(eigenvalues: Sequence[Any], threshold: Any) -> list[list[Any]]:
    """Clusters eigenvalues linked by chains of spacings below ``threshold``."""
    groups: list[list[Any]] = []
    for z in eigenvalues:
        touching = [g for g in groups if any(abs(z - w) < threshold for w in g)]
        merged = [z]
        for g in touching:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def _spread(group: Sequence[Any]) -> Any:
    return max((abs(a - b) for a in group for b in group), default=0)


def _confluent_ratio(groups: list[list[Any]], n: int, table: MomentTable, numerics: Numerics) -> Any:
    """det[G]/det[V] with each group of size k replaced by its mean and k derivative rows.

    Row r of a group holds (1/r!)·dʳ/dzʳ of the generic row, so G rows become iʳG_{j−1+r}/r!
    and Vandermonde rows become C(j−1, r)·z^{j−1−r}."""
    ctx = numerics.ctx
    moments = ctx.matrix(n, n)
    vandermonde = ctx.matrix(n, n)
    row = 0
    for group in groups:
        centre = ctx.fsum(group) / len(group)
        for r in range(len(group)):
            for j in range(n):
                moments[row, j] = ctx.mpc(0, 1) ** r * table.get(j + r, centre) / math.factorial(r)
                vandermonde[row, j] = math.comb(j, r) * centre ** (j - r) if j >= r else 0
            row += 1
    return ctx.det(moments) / ctx.det(vandermonde)


def _direct_loss(groups: list[list[Any]], ctx) -> Any:
    """Digits lost to the Δ cancellation between distinct representatives closer than NEAR_CONFLUENCE."""
    centres = [ctx.fsum(g) / len(g) for g in groups]
    loss = ctx.zero
    for i, a in enumerate(centres):
        for b in centres[i + 1 :]:
            if abs(a - b) < NEAR_CONFLUENCE:
                loss += -ctx.log10(abs(a - b))
    return loss


def brane_partition(
    kernel: KernelSpec, config: BraneConfig, numerics: Numerics, table: MomentTable | None = None
) -> PrecisionNumber:
    """det[G_{j−1}(z_i)] / Δ(z) for up to four branes.

    Eigenvalues closer than ``confluence_tol`` always use derivative rows. When some spacing
    falls between that and 10⁻³, the distinct-row and derivative-row branches are both
    computed and the one with the smaller error estimate is returned."""
    n = config.n
    if n > MAX_BRANES:
        msg = f"brane_partition supports up to {MAX_BRANES} branes, got {n}"
        raise DomainError(msg)
    if table is None:
        table = MomentTable(kernel, numerics)
    elif table.kernel_id != kernel.id:
        msg = f"moment table holds {table.kernel_id}, not {kernel.id}"
        raise DomainError(msg)
    ctx = numerics.ctx
    zs = [numerics.number(z) for z in config.eigenvalues]
    tight = _groups(zs, ctx.mpf(config.confluence_tol))
    loose = _groups(zs, ctx.mpf(NEAR_CONFLUENCE))
    floor = numerics.tolerance()
    tight_error = max(_spread(g) for g in tight) + floor * ctx.power(10, _direct_loss(tight, ctx))
    if len(loose) == len(tight):
        return numerics.wrap(_confluent_ratio(tight, n, table, numerics))
    loose_error = max(_spread(g) for g in loose) + floor * ctx.power(10, _direct_loss(loose, ctx))
    logger.debug(
        f"near-confluent branes: distinct-row error {ctx.nstr(tight_error, 3)}, "
        f"derivative-row error {ctx.nstr(loose_error, 3)}"
    )
    if min(tight_error, loose_error) > ACCEPTABLE_ERROR:
        msg = (
            f"near-coincident eigenvalues defeat both branches: errors {ctx.nstr(tight_error, 3)} "
            f"and {ctx.nstr(loose_error, 3)}"
        )
        raise ConfluenceUnstable(msg)
    groups = tight if tight_error <= loose_error else loose
    return numerics.wrap(_confluent_ratio(groups, n, table, numerics))


def brane_brute_check(
    kernel: KernelSpec, config: BraneConfig, numerics: Numerics, *, tol: Any | None = None
) -> BruteCheck:
    """Two branes by direct double integration over the eigenvalues of Φ.

    ``direct = (1/2Δ)∫∫(φ₂ − φ₁)·det[e^{iz_iφ_j}]·g(φ₁)g(φ₂)``, where ½ = 1/n! matches the
    normalization of :func:`brane_partition`."""
    if config.n != 2:
        msg = f"the brute-force check integrates two branes, got {config.n}"
        raise DomainError(msg)
    if kernel.rays:
        msg = f"{kernel.id} is not integrable on the real line"
        raise DomainError(msg)
    ctx = numerics.ctx
    tol = numerics.tolerance(slack=numerics.digits - 20) if tol is None else numerics.real(tol)
    z1, z2 = (numerics.number(z) for z in config.eigenvalues)
    growth = 2 * max(abs(ctx.im(z1)), abs(ctx.im(z2)))
    radius, truncation = choose_window(kernel, numerics, growth, 1, tol / 100)
    factors: dict[Any, tuple[Any, Any, Any]] = {}

    def factor(phi):
        if phi not in factors:
            g = kernel.eval(phi, ctx)
            factors[phi] = (g, ctx.expj(z1 * phi), ctx.expj(z2 * phi))
        return factors[phi]

    def integrand(p1, p2):
        g1, a1, b1 = factor(p1)
        g2, a2, b2 = factor(p2)
        return (p2 - p1) * (a1 * b2 - b1 * a2) * g1 * g2

    frequency = max(abs(ctx.re(z1)), abs(ctx.re(z2)))
    period = 2 * ctx.pi / frequency if frequency > ctx.mpf("1e-3") else None
    breakpoints = (*[-b for b in kernel.breakpoints], 0, *kernel.breakpoints)
    window = Window(-radius, radius, breakpoints)
    result = integrate_nd(integrand, [window, window], tol, numerics, periods=[period, period])
    logger.debug(f"brute-force brane integral: {result.nodes_used} nodes, truncation {ctx.nstr(truncation, 3)}")
    direct = ctx.mpc(result.value.value) / (2 * (z2 - z1))
    reduced = brane_partition(kernel, config, numerics).value
    return BruteCheck(
        reduced=numerics.wrap(reduced),
        direct=numerics.wrap(direct),
        discrepancy=numerics.scalar(abs(reduced - direct)),
    )
