"""Exact partition functions: brute force, tree message passing, polynomials.

Weight conventions: a full configuration sigma has weight
beta^{m+} * gamma^{m-} * prod_{sigma(v)=+} lambda_v, where m+ and m- count
(+,+) and (-,-) edges. Exponents are plain counts and x^0 = 1 even when
x = 0, so infeasible configurations contribute zero weight without any case
analysis.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import CapExceededError, NotATreeError, PinningError
from .graphs import Graph, MINUS, PLUS, Pinning, is_feasible
from .numerics import ONE, ZERO, ExactComplex, Polynomial

ENUMERATION_CAP = 24


@dataclass(frozen=True)
class Params:
    """Edge activities (beta, gamma) and a vertex activity.

    ``field`` is either one scalar (uniform) or a per-vertex tuple; every
    field value must be nonzero and (beta, gamma) != (0, 0).
    """

    beta: ExactComplex
    gamma: ExactComplex
    field: ExactComplex | tuple[ExactComplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", ExactComplex._coerce(self.beta))
        object.__setattr__(self, "gamma", ExactComplex._coerce(self.gamma))
        if isinstance(self.field, (tuple, list)):
            flds = tuple(ExactComplex._coerce(x) for x in self.field)
            if any(x.is_zero() for x in flds):
                raise ValueError("field values must be nonzero")
            object.__setattr__(self, "field", flds)
        else:
            lam = ExactComplex._coerce(self.field)
            if lam.is_zero():
                raise ValueError("field values must be nonzero")
            object.__setattr__(self, "field", lam)
        if self.beta.is_zero() and self.gamma.is_zero():
            raise ValueError("(beta, gamma) must not both be zero")

    @property
    def uniform(self) -> bool:
        return isinstance(self.field, ExactComplex)

    def field_vector(self, n: int) -> tuple[ExactComplex, ...]:
        if self.uniform:
            return (self.field,) * n
        if len(self.field) != n:
            raise ValueError(f"field vector has length {len(self.field)}, graph has {n}")
        return self.field

    @property
    def beta_is_zero(self) -> bool:
        return self.beta.is_zero()

    @property
    def gamma_is_zero(self) -> bool:
        return self.gamma.is_zero()

    @property
    def is_ising(self) -> bool:
        return self.beta == self.gamma

    def to_json(self) -> dict:
        fld = (self.field.to_json() if self.uniform
               else [x.to_json() for x in self.field])
        return {"beta": self.beta.to_json(), "gamma": self.gamma.to_json(),
                "field": fld}

    @classmethod
    def from_json(cls, doc: dict) -> "Params":
        fld = doc["field"]
        if isinstance(fld, list):
            field = tuple(ExactComplex.from_json(x) for x in fld)
        else:
            field = ExactComplex.from_json(fld)
        return cls(ExactComplex.from_json(doc["beta"]),
                   ExactComplex.from_json(doc["gamma"]), field)


def hardcore_params(lam) -> Params:
    """The independence-polynomial instance: beta=0, gamma=1."""
    return Params(ZERO, ONE, ExactComplex._coerce(lam))


@dataclass(frozen=True)
class QSpinParams:
    """Symmetric q x q edge-activity matrix plus a length-q field vector."""

    matrix: tuple[tuple[ExactComplex, ...], ...]
    lambdas: tuple[ExactComplex, ...]

    def __post_init__(self):
        m = tuple(tuple(ExactComplex._coerce(x) for x in row) for row in self.matrix)
        lams = tuple(ExactComplex._coerce(x) for x in self.lambdas)
        q = len(lams)
        if q < 2:
            raise ValueError("q must be at least 2")
        if len(m) != q or any(len(row) != q for row in m):
            raise ValueError("matrix must be q x q")
        for i in range(q):
            for j in range(q):
                if m[i][j] != m[j][i]:
                    raise ValueError("matrix must be symmetric")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "lambdas", lams)

    @property
    def q(self) -> int:
        return len(self.lambdas)

    def to_json(self) -> dict:
        return {"matrix": [[x.to_json() for x in row] for row in self.matrix],
                "lambdas": [x.to_json() for x in self.lambdas]}

    @classmethod
    def from_json(cls, doc: dict) -> "QSpinParams":
        return cls(tuple(tuple(ExactComplex.from_json(x) for x in row)
                         for row in doc["matrix"]),
                   tuple(ExactComplex.from_json(x) for x in doc["lambdas"]))


def two_spin_embedding(params: Params) -> QSpinParams:
    """q=2 instance that coincides with the 2-spin system (spin 1 <-> +)."""
    if not params.uniform:
        raise ValueError("the q-spin embedding uses a uniform field")
    return QSpinParams(((params.beta, ONE), (ONE, params.gamma)),
                       (params.field, ONE))


def _powers(x: ExactComplex, n: int) -> list[ExactComplex]:
    out = [ONE]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _check_cap(g: Graph):
    if g.n > ENUMERATION_CAP:
        raise CapExceededError(
            f"{g.n} vertices exceeds the enumeration cap {ENUMERATION_CAP}")


def _check_feasible(g: Graph, p: Pinning, params: Params):
    if not is_feasible(g, p, params.beta_is_zero, params.gamma_is_zero):
        raise PinningError("infeasible pinning for these parameters")


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------


def z_brute(g: Graph, p: Pinning, params: Params,
            check_feasibility: bool = True) -> ExactComplex:
    """Partition value by explicit enumeration of all extensions of p.

    ``check_feasibility`` guards the caller-supplied pinning; pass False
    when evaluating programmatic pin extensions whose infeasible cases must
    contribute zero instead of erroring (the weight semantics already give
    every infeasible configuration weight zero).
    """
    _check_cap(g)
    if check_feasibility:
        _check_feasible(g, p, params)
    lams = params.field_vector(g.n)
    free = [v for v in range(g.n) if v not in p]
    spin = [0] * g.n
    for v, s in p.items():
        spin[v] = 1 if s == PLUS else 0
    pow_b = _powers(params.beta, len(g.edges))
    pow_g = _powers(params.gamma, len(g.edges))
    edges = g.edges
    total = ZERO
    for mask in range(1 << len(free)):
        for i, v in enumerate(free):
            spin[v] = (mask >> i) & 1
        mp = mm = 0
        for u, v in edges:
            su, sv = spin[u], spin[v]
            if su and sv:
                mp += 1
            elif not su and not sv:
                mm += 1
        w = pow_b[mp] * pow_g[mm]
        for v in range(g.n):
            if spin[v]:
                w = w * lams[v]
        total = total + w
    return total


def z_qspin(g: Graph, p: Pinning, qp: QSpinParams) -> ExactComplex:
    """q-spin partition value: sum of prod lambda_{s(v)} * prod a_{s(u),s(v)}.

    Pins assign spins in 1..q.
    """
    _check_cap(g)
    q = qp.q
    for v, s in p.items():
        if not (isinstance(s, int) and 1 <= s <= q):
            raise PinningError(f"spin {s!r} at vertex {v} is out of range 1..{q}")
        if not (0 <= v < g.n):
            raise PinningError(f"pinned vertex {v} out of range")
    free = [v for v in range(g.n) if v not in p]
    if q ** len(free) > (1 << ENUMERATION_CAP):
        raise CapExceededError("q-spin enumeration too large")
    spin = [0] * g.n
    for v, s in p.items():
        spin[v] = s - 1
    lams = qp.lambdas
    mat = qp.matrix
    total = ZERO
    for combo in itertools.product(range(q), repeat=len(free)):
        for i, v in enumerate(free):
            spin[v] = combo[i]
        w = ONE
        for v in range(g.n):
            w = w * lams[spin[v]]
        for u, v in g.edges:
            w = w * mat[spin[u]][spin[v]]
        total = total + w
    return total


# ---------------------------------------------------------------------------
# Tree message passing
# ---------------------------------------------------------------------------


@dataclass
class TreeMessages:
    """Subtree partition values (Z+_w, Z-_w) for every vertex of a forest.

    The pair at w is the partition value of the subtree rooted at w (under
    the chosen roots) with w pinned to + and to -.
    """

    pairs: dict[int, tuple[ExactComplex, ExactComplex]]
    roots: tuple[int, ...]

    def at(self, v: int) -> tuple[ExactComplex, ExactComplex]:
        return self.pairs[v]


def _forest_order(g: Graph, root: int | None):
    """(roots, processing order, parent map); raises on cyclic input."""
    if not g.is_forest():
        raise NotATreeError("input graph contains a cycle")
    parent: dict[int, int | None] = {}
    roots = []
    order = []
    seen = [False] * g.n
    starts = []
    if root is not None:
        if not (0 <= root < g.n):
            raise ValueError(f"root {root} out of range")
        starts.append(root)
    starts.extend(range(g.n))
    for s in starts:
        if seen[s]:
            continue
        roots.append(s)
        seen[s] = True
        parent[s] = None
        q = deque([s])
        while q:
            x = q.popleft()
            order.append(x)
            for y in g.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    q.append(y)
    return roots, order, parent


def z_tree(t: Graph, p: Pinning, params: Params,
           root: int | None = None,
           check_feasibility: bool = True) -> tuple[ExactComplex, TreeMessages]:
    """Partition value of an acyclic graph by bottom-up message passing.

    Components are rooted at their lowest-index vertex (or at ``root`` for
    its component); children are processed in ascending order. The scalar
    equals z_brute on the same inputs; the messages expose every pinned
    subtree value needed by the identity right-hand sides.
    """
    if check_feasibility:
        _check_feasible(t, p, params)
    lams = params.field_vector(t.n)
    beta, gamma = params.beta, params.gamma
    roots, order, parent = _forest_order(t, root)
    pairs: dict[int, tuple[ExactComplex, ExactComplex]] = {}
    for x in reversed(order):
        zp, zm = lams[x], ONE
        for y in sorted(t.neighbors(x)):
            if parent.get(y) != x:
                continue
            cp, cm = pairs[y]
            zp = zp * (beta * cp + cm)
            zm = zm * (cp + gamma * cm)
        s = p.get(x)
        if s == PLUS:
            zm = ZERO
        elif s == MINUS:
            zp = ZERO
        pairs[x] = (zp, zm)
    total = ONE
    for r in roots:
        zp, zm = pairs[r]
        total = total * (zp + zm)
    return total, TreeMessages(pairs=pairs, roots=tuple(roots))


def z_qspin_tree(t: Graph, p: Pinning, qp: QSpinParams,
                 root: int | None = None
                 ) -> tuple[ExactComplex, dict[int, tuple[ExactComplex, ...]]]:
    """q-spin analogue of z_tree; messages are length-q vectors per vertex."""
    q = qp.q
    roots, order, parent = _forest_order(t, root)
    lams, mat = qp.lambdas, qp.matrix
    msgs: dict[int, tuple[ExactComplex, ...]] = {}
    for x in reversed(order):
        vec = list(lams)
        for y in sorted(t.neighbors(x)):
            if parent.get(y) != x:
                continue
            child = msgs[y]
            for k in range(q):
                acc = ZERO
                for j in range(q):
                    acc = acc + mat[k][j] * child[j]
                vec[k] = vec[k] * acc
        s = p.get(x)
        if s is not None:
            if not (isinstance(s, int) and 1 <= s <= q):
                raise PinningError(f"spin {s!r} at vertex {x} is out of range 1..{q}")
            vec = [vec[k] if k == s - 1 else ZERO for k in range(q)]
        msgs[x] = tuple(vec)
    total = ONE
    for r in roots:
        acc = ZERO
        for k in range(q):
            acc = acc + msgs[r][k]
        total = total * acc
    return total, msgs


def z_auto(g: Graph, p: Pinning, params: Params,
           check_feasibility: bool = True) -> ExactComplex:
    """Tree message passing when the graph is acyclic, brute force otherwise."""
    if g.is_forest():
        return z_tree(g, p, params, check_feasibility=check_feasibility)[0]
    return z_brute(g, p, params, check_feasibility=check_feasibility)


def z_pair(g: Graph, p: Pinning, u: int, su: str, v: int, sv: str,
           params: Params) -> ExactComplex:
    """Partition value with p extended by {u -> su, v -> sv}.

    The base pinning must be feasible; an extension that violates a hard
    constraint yields the value zero, so the four pair values always sum to
    the unextended partition value.
    """
    if u == v:
        raise ValueError("z_pair needs two distinct vertices")
    _check_feasible(g, p, params)
    extended = p.with_pin(u, su).with_pin(v, sv)
    return z_auto(g, extended, params, check_feasibility=False)


# ---------------------------------------------------------------------------
# Polynomial in the uniform field
# ---------------------------------------------------------------------------


def z_poly_lambda(g: Graph, p: Pinning, beta, gamma,
                  scale: Sequence[ExactComplex] | None = None) -> Polynomial:
    """Z as a polynomial in the uniform field variable.

    The coefficient of lambda^k sums beta^{m+} gamma^{m-} over configurations
    (extending p) with exactly k plus vertices, pins included. ``scale``
    optionally weights each + vertex v by an extra constant factor scale[v],
    which turns the polynomial into Z evaluated at the field vector
    (scale_v * lambda)_v; this serves pin elimination and the single-variable
    scan of non-uniform fields.
    """
    _check_cap(g)
    beta = ExactComplex._coerce(beta)
    gamma = ExactComplex._coerce(gamma)
    if scale is not None and len(scale) != g.n:
        raise ValueError("scale vector length must equal vertex count")
    free = [v for v in range(g.n) if v not in p]
    spin = [0] * g.n
    for v, s in p.items():
        spin[v] = 1 if s == PLUS else 0
    pow_b = _powers(beta, len(g.edges))
    pow_g = _powers(gamma, len(g.edges))
    coeffs = [ZERO] * (g.n + 1)
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
        w = pow_b[mp] * pow_g[mm]
        k = 0
        if scale is None:
            k = sum(spin)
        else:
            for v in range(g.n):
                if spin[v]:
                    k += 1
                    w = w * scale[v]
        coeffs[k] = coeffs[k] + w
    return Polynomial(coeffs)


# ---------------------------------------------------------------------------
# Pin elimination and spin reversal
# ---------------------------------------------------------------------------


def eliminate_pins(g: Graph, p: Pinning, beta,
                   fields: Sequence[ExactComplex]
                   ) -> tuple[Graph, tuple[ExactComplex, ...], ExactComplex]:
    """Remove pinned vertices from an Ising instance by rescaling fields.

    Returns (G minus pinned vertices, rescaled fields for the surviving
    vertices in their induced order, prefactor) with
    Z^p_G(beta, fields) = prefactor * Z_{G-pins}(beta, rescaled). Each
    surviving field is multiplied by beta^{(# + pinned neighbors) - (# -
    pinned neighbors)}; the prefactor collects beta powers from edges inside
    the pinned set and from (-)-pin boundary edges, times the fields of +
    pins. Edge weights are (beta, beta); beta must be nonzero.
    """
    beta = ExactComplex._coerce(beta)
    if beta.is_zero():
        raise ValueError("pin elimination needs a nonzero Ising edge weight")
    fields = tuple(ExactComplex._coerce(x) for x in fields)
    if len(fields) != g.n:
        raise ValueError("field vector length must equal vertex count")
    assigned = p.as_dict()
    for v in assigned:
        if not (0 <= v < g.n):
            raise PinningError(f"pinned vertex {v} out of range")
    inside_agree = 0
    minus_boundary = 0
    shift = [0] * g.n
    for u, v in g.edges:
        su, sv = assigned.get(u), assigned.get(v)
        if su is not None and sv is not None:
            if su == sv:
                inside_agree += 1
        elif su is not None:
            shift[v] += 1 if su == PLUS else -1
            if su == MINUS:
                minus_boundary += 1
        elif sv is not None:
            shift[u] += 1 if sv == PLUS else -1
            if sv == MINUS:
                minus_boundary += 1
    prefactor = beta ** (inside_agree + minus_boundary)
    for v, s in p.items():
        if s == PLUS:
            prefactor = prefactor * fields[v]
    reduced, remap = g.delete_vertices(assigned)
    keep = sorted(remap, key=remap.get)
    new_fields = tuple(fields[v] * beta ** shift[v] for v in keep)
    return reduced, new_fields, prefactor


def spin_reversal(g: Graph, p: Pinning, params: Params
                  ) -> tuple[Pinning, Params, ExactComplex]:
    """Swap the roles of + and -.

    Returns (flipped pinning, Params with (beta, gamma) swapped and fields
    inverted, prefactor = product of all fields) satisfying
    Z^p_G(beta, gamma, fields) = prefactor * Z^flipped_G(gamma, beta, 1/fields).
    """
    lams = params.field_vector(g.n)
    prefactor = ONE
    for lam in lams:
        prefactor = prefactor * lam
    if params.uniform:
        new_field: ExactComplex | tuple[ExactComplex, ...] = ONE / params.field
    else:
        new_field = tuple(ONE / lam for lam in lams)
    return p.flipped(), Params(params.gamma, params.beta, new_field), prefactor
