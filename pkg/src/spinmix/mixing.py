"""Marginal ratios, Taylor-coefficient locality, decay profiling, Weitz trees.

The marginal ratio P = Z+_v / Z is computed exactly; its truncated Taylor
series in the field variable (around 0) or in the edge activity (around a
chosen center) are built from exact polynomials and formal series division,
so coefficient comparisons are bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PinningError, ZeroPartitionError
from .graphs import (Graph, MINUS, PLUS, Pinning, build_saw_tree,
                     build_saw_tree_truncated, disagreement_distance, is_proper)
from .numerics import (ONE, ZERO, ExactComplex, Polynomial, PowerSeries,
                       series_div)
from .partition import Params, z_auto, z_poly_lambda, z_tree

_BINOM_CACHE: dict[tuple[ExactComplex, int], tuple[ExactComplex, ...]] = {}


@dataclass(frozen=True)
class MarginalSeries:
    """Truncated Taylor series of a marginal ratio at a named center."""

    series: PowerSeries
    variable: str
    center: ExactComplex
    vertex: int

    @property
    def order(self) -> int:
        return self.series.order


@dataclass(frozen=True)
class LdcReport:
    """Coefficientwise comparison of two marginal series.

    ``first_difference`` is the first index where the coefficients differ,
    or ``order`` when they agree throughout. The locality contract asks for
    agreement on indices 0..d-1, i.e. first_difference >= min(d, order).
    """

    first_difference: int
    order: int
    distance: int | float
    satisfied: bool


def marginal(g: Graph, p: Pinning, v: int, params: Params) -> ExactComplex:
    """Exact marginal ratio Z+_v / Z; v must be proper and Z nonzero."""
    if not is_proper(g, p, v, params.beta_is_zero, params.gamma_is_zero):
        raise PinningError(f"vertex {v} is not proper to the pinning")
    z = z_auto(g, p, params)
    if z.is_zero():
        raise ZeroPartitionError("partition value is zero at these parameters")
    zp = z_auto(g, p.with_pin(v, PLUS), params)
    return zp / z


def saw_tree_marginal(g: Graph, p: Pinning, v: int, params: Params
                      ) -> ExactComplex:
    """Marginal of v computed on the SAW tree of g rooted at v."""
    st = build_saw_tree(g, v, p, params.beta_is_zero, params.gamma_is_zero)
    lams = params.field_vector(g.n)
    tree_params = Params(params.beta, params.gamma,
                         tuple(lams[o] for o in st.origin))
    _, msgs = z_tree(st.tree, st.pinning, tree_params, root=st.root)
    zp, zm = msgs.at(st.root)
    z = zp + zm
    if z.is_zero():
        raise ZeroPartitionError("SAW tree partition value is zero")
    return zp / z


def verify_saw_marginal(g: Graph, p: Pinning, v: int, params: Params) -> bool:
    """True iff the marginal on g equals the SAW-tree marginal, exactly."""
    return marginal(g, p, v, params) == saw_tree_marginal(g, p, v, params)


# ---------------------------------------------------------------------------
# Series in the field variable around 0
# ---------------------------------------------------------------------------


def _default_order(g: Graph) -> int:
    return g.diameter() + 2


def marginal_series_lambda(g: Graph, p: Pinning, v: int, beta, gamma,
                           order: int | None = None,
                           scale: Sequence[ExactComplex] | None = None
                           ) -> MarginalSeries:
    """Series of Z+_v(lambda) / Z(lambda) around lambda = 0.

    Any shared lambda-valuation of numerator and denominator is cancelled
    before dividing (this implements the P(0) = 0 convention when the
    all-minus term anchors Z(0) != 0, i.e. when gamma != 0). ``scale``
    passes through to the polynomial builder for non-uniform fields scanned
    along a single scaling variable.
    """
    # Properness of v is not required here: a hard constraint may zero the
    # numerator (e.g. v adjacent to a + pin at beta=0), and the coefficient
    # comparisons still need that identically-zero series.
    if v in p:
        raise PinningError(f"vertex {v} is pinned")
    beta = ExactComplex._coerce(beta)
    gamma = ExactComplex._coerce(gamma)
    if order is None:
        order = _default_order(g)
    num = z_poly_lambda(g, p.with_pin(v, PLUS), beta, gamma, scale=scale)
    den = z_poly_lambda(g, p, beta, gamma, scale=scale)
    k = den.valuation()
    if k is None:
        raise ZeroPartitionError("partition polynomial is identically zero")
    series = series_div(num.to_series(order + k), den.to_series(order + k))
    return MarginalSeries(series=series, variable="lambda", center=ZERO, vertex=v)


def _compare_series(a: PowerSeries, b: PowerSeries, distance: int | float
                    ) -> LdcReport:
    order = min(a.order, b.order)
    first = order
    for i in range(order):
        if a.coefficients[i] != b.coefficients[i]:
            first = i
            break
    required = min(distance, order)
    return LdcReport(first_difference=first, order=order, distance=distance,
                     satisfied=first >= required)


def ldc_report(g: Graph, s: Pinning, t: Pinning, v: int, beta, gamma,
               order: int | None = None) -> LdcReport:
    """Compare the field-variable series of P under two pinnings.

    The coefficients must agree on indices 0..d-1 where d is the distance
    from v to the set on which the pinnings disagree.
    """
    a = marginal_series_lambda(g, s, v, beta, gamma, order)
    b = marginal_series_lambda(g, t, v, beta, gamma, order)
    d = disagreement_distance(g, v, s, t)
    return _compare_series(a.series, b.series, d)


# ---------------------------------------------------------------------------
# Series in the edge activity around a center
# ---------------------------------------------------------------------------


def _shifted_power(center: ExactComplex, m: int) -> tuple[ExactComplex, ...]:
    """Coefficients of (center + t)^m as a polynomial in t."""
    key = (center, m)
    cached = _BINOM_CACHE.get(key)
    if cached is not None:
        return cached
    if m == 0:
        out: tuple[ExactComplex, ...] = (ONE,)
    else:
        prev = _shifted_power(center, m - 1)
        coeffs = [ZERO] * (m + 1)
        for i, c in enumerate(prev):
            coeffs[i] = coeffs[i] + c * center
            coeffs[i + 1] = coeffs[i + 1] + c
        out = tuple(coeffs)
    _BINOM_CACHE[key] = out
    return out


def _edge_activity_poly(g: Graph, p: Pinning, gamma: ExactComplex | None,
                        lam: ExactComplex, center: ExactComplex) -> Polynomial:
    """Z as an exact polynomial in t where the edge activity is center + t.

    With ``gamma`` given, only the (+,+) activity varies; with gamma None
    the instance is Ising and both activities are tied to center + t.
    """
    from .partition import _powers  # shared helper

    free = [v for v in range(g.n) if v not in p]
    spin = [0] * g.n
    for v, s in p.items():
        spin[v] = 1 if s == PLUS else 0
    m = len(g.edges)
    pow_g = _powers(gamma, m) if gamma is not None else None
    pow_l = _powers(lam, g.n)
    degree = m
    coeffs = [ZERO] * (degree + 1)
    edges = g.edges
    for mask in range(1 << len(free)):
        for i, v in enumerate(free):
            spin[v] = (mask >> i) & 1
        mp = mm = 0
        for a, b in edges:
            sa, sb = spin[a], spin[b]
            if sa and sb:
                mp += 1
            elif not sa and not sb:
                mm += 1
        np_ = sum(spin)
        if gamma is None:
            base = pow_l[np_]
            expansion = _shifted_power(center, mp + mm)
        else:
            base = pow_g[mm] * pow_l[np_]
            expansion = _shifted_power(center, mp)
        for i, c in enumerate(expansion):
            coeffs[i] = coeffs[i] + c * base
    return Polynomial(coeffs)


def marginal_series_beta(g: Graph, p: Pinning, v: int, gamma, lam,
                         center, order: int | None = None) -> MarginalSeries:
    """Series of P in t = beta - center.

    With ``gamma`` a scalar, the center must be 1/gamma (the locality
    center); with gamma None the edge activities are tied (Ising) and the
    center must be 1 or -1. Raises ZeroPartitionError when Z vanishes at
    the center; such singular instances are surfaced, never skipped.
    """
    if v in p:
        raise PinningError(f"vertex {v} is pinned")
    center = ExactComplex._coerce(center)
    lam = ExactComplex._coerce(lam)
    if lam.is_zero():
        raise ValueError("the field value must be nonzero")
    if gamma is not None:
        gamma = ExactComplex._coerce(gamma)
        if gamma.is_zero():
            raise ValueError("gamma must be nonzero")
        if center != ONE / gamma:
            raise ValueError("center must equal 1/gamma")
    elif center != ONE and center != -ONE:
        raise ValueError("tied (Ising) activities need center 1 or -1")
    if order is None:
        order = _default_order(g)
    num = _edge_activity_poly(g, p.with_pin(v, PLUS), gamma, lam, center)
    den = _edge_activity_poly(g, p, gamma, lam, center)
    if not den.coefficients or den.coefficients[0].is_zero():
        raise ZeroPartitionError("partition value is zero at the expansion center")
    series = series_div(num.to_series(order), den.to_series(order))
    return MarginalSeries(series=series, variable="beta", center=center, vertex=v)


def ldc_report_beta(g: Graph, s: Pinning, t: Pinning, v: int, gamma, lam,
                    center, order: int | None = None) -> LdcReport:
    """Edge-activity analogue of ldc_report at the given center."""
    a = marginal_series_beta(g, s, v, gamma, lam, center, order)
    b = marginal_series_beta(g, t, v, gamma, lam, center, order)
    d = disagreement_distance(g, v, s, t)
    return _compare_series(a.series, b.series, d)


# ---------------------------------------------------------------------------
# Decay profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayInstance:
    """One row of a decay experiment: a graph with two boundary pinnings at
    disagreement distance k from the probe vertex."""

    k: int
    graph: Graph
    vertex: int
    boundary_a: Pinning
    boundary_b: Pinning


@dataclass(frozen=True)
class DecayRow:
    k: int
    gap: float
    log_gap: float | None


@dataclass(frozen=True)
class DecayProfile:
    """Gap-vs-distance table with a least-squares exponential fit.

    The fit runs on log gaps over rows with nonzero gap: log gap ~ log C -
    k log r. ``rate`` is r (> 1 means exponential decay); both are None
    when fewer than two usable rows exist.
    """

    rows: tuple[DecayRow, ...]
    rate: float | None
    constant: float | None

    def __post_init__(self):
        ks = [r.k for r in self.rows]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("distances must be strictly increasing")

    def predicted_gap(self, k: int) -> float | None:
        """Fitted-curve value C * r^-k, the overlay to plot against the data."""
        if self.rate is None or self.constant is None:
            return None
        return self.constant * self.rate ** (-k)

    def to_csv_rows(self) -> list[list]:
        out = [["k", "gap", "log_gap"]]
        for r in self.rows:
            out.append([r.k, repr(r.gap), "" if r.log_gap is None else repr(r.log_gap)])
        return out

    def sidecar(self) -> dict:
        return {"rate": self.rate, "constant": self.constant}


def fit_decay(rows: Iterable[DecayRow]) -> tuple[float | None, float | None]:
    pts = [(r.k, r.log_gap) for r in rows if r.log_gap is not None]
    if len(pts) < 2:
        return None, None
    n = len(pts)
    mean_x = sum(k for k, _ in pts) / n
    mean_y = sum(y for _, y in pts) / n
    var = sum((k - mean_x) ** 2 for k, _ in pts)
    if var == 0:
        return None, None
    cov = sum((k - mean_x) * (y - mean_y) for k, y in pts)
    slope = cov / var
    intercept = mean_y - slope * mean_x
    return math.exp(-slope), math.exp(intercept)


def decay_profile(instances: Iterable[DecayInstance], params: Params) -> DecayProfile:
    """Evaluate |P^a - P^b| for every instance and fit the decay rate.

    Marginals are computed exactly and only the gap is floated; exact zero
    gaps are recorded with an empty log column and excluded from the fit.
    Raises ZeroPartitionError (tagged with k) when either boundary makes
    the partition value vanish.
    """
    rows = []
    for inst in sorted(instances, key=lambda i: i.k):
        try:
            pa = marginal(inst.graph, inst.boundary_a, inst.vertex, params)
            pb = marginal(inst.graph, inst.boundary_b, inst.vertex, params)
        except ZeroPartitionError as exc:
            raise ZeroPartitionError(f"zero partition value at k={inst.k}: {exc}") from exc
        diff = pa - pb
        gap = abs(diff.to_complex())
        if diff.is_zero():
            rows.append(DecayRow(k=inst.k, gap=0.0, log_gap=None))
        else:
            rows.append(DecayRow(k=inst.k, gap=gap, log_gap=math.log(gap)))
    rate, constant = fit_decay(rows)
    return DecayProfile(rows=tuple(rows), rate=rate, constant=constant)


def path_decay_instances(k_max: int, mode: str = "ssm",
                         k_min: int = 1) -> list[DecayInstance]:
    """Path graphs probed at one end with boundaries at the other.

    Modes: "ssm" pins the far end to + versus -; "psm" compares the far end
    pinned + against the empty pinning (both all-plus); "msm" mirrors psm
    with -. Pass k_min=2 for hard-core boundaries with a + pin, where the
    probe vertex must keep its distance to stay proper.
    """
    if mode not in ("ssm", "psm", "msm"):
        raise ValueError(f"unknown decay mode {mode!r}")
    out = []
    for k in range(k_min, k_max + 1):
        g = Graph(k + 1, tuple((i, i + 1) for i in range(k)))
        if mode == "ssm":
            a, b = Pinning.of({k: PLUS}), Pinning.of({k: MINUS})
        elif mode == "psm":
            a, b = Pinning.of({k: PLUS}), Pinning()
        else:
            a, b = Pinning.of({k: MINUS}), Pinning()
        out.append(DecayInstance(k=k, graph=g, vertex=0, boundary_a=a, boundary_b=b))
    return out


# ---------------------------------------------------------------------------
# Weitz truncated-SAW approximation
# ---------------------------------------------------------------------------


def weitz_approx_marginal(g: Graph, v: int, p: Pinning, params: Params,
                          depth: int) -> tuple[ExactComplex, bool]:
    """Marginal of v on the depth-truncated SAW tree.

    Walk vertices cut at the depth bound are pinned to "-" (always feasible
    for hard-core instances, and irrelevant once nothing is truncated).
    Returns (value, exact); exact is True when no truncation occurred, and
    the value then equals the true marginal.
    """
    bz, gz = params.beta_is_zero, params.gamma_is_zero
    if not is_proper(g, p, v, bz, gz):
        raise PinningError(f"vertex {v} is not proper to the pinning")
    st, cuts = build_saw_tree_truncated(g, v, p, depth, bz, gz)
    pins = st.pinning
    for x in cuts:
        pins = pins.with_pin(x, MINUS)
    lams = params.field_vector(g.n)
    tree_params = Params(params.beta, params.gamma,
                         tuple(lams[o] for o in st.origin))
    _, msgs = z_tree(st.tree, pins, tree_params, root=st.root)
    zp, zm = msgs.at(st.root)
    z = zp + zm
    if z.is_zero():
        raise ZeroPartitionError("truncated tree partition value is zero")
    return zp / z, not cuts
