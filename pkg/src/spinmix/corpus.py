"""Seeded random instance generation for identity corpora and sweeps.

Everything here is a pure function of the supplied random.Random stream, so
a run seed fully determines every generated instance. Graphs are
Erdos-Renyi with edge probability 1/2 conditioned on connectivity; trees
are uniform spanning trees of such graphs drawn with Wilson's algorithm;
rational parameters keep numerators and denominators within 10 so exact
arithmetic stays small.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .graphs import Graph, MINUS, PLUS, Pinning, flip_spin, is_feasible
from .numerics import ExactComplex, ONE, ZERO
from .partition import Params, QSpinParams

PARAM_MODES = ("generic", "beta0", "gamma0", "bg1", "fields", "complex")


def rand_fraction(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        f = Fraction(rng.randint(-10, 10), rng.randint(1, 10))
        if not nonzero or f != 0:
            return f


def rand_scalar(rng: random.Random, nonzero: bool = False,
                complex_prob: float = 0.0) -> ExactComplex:
    while True:
        if rng.random() < complex_prob:
            x = ExactComplex(rand_fraction(rng), rand_fraction(rng))
        else:
            x = ExactComplex(rand_fraction(rng))
        if not nonzero or not x.is_zero():
            return x


def rand_connected_graph(rng: random.Random, n: int, attempts: int = 1000) -> Graph:
    if n <= 1:
        return Graph(n, ())
    for _ in range(attempts):
        edges = tuple((i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < 0.5)
        g = Graph(n, edges)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected graph on {n} vertices after {attempts} draws")


def rand_bounded_degree_graph(rng: random.Random, n: int, dmax: int,
                              attempts: int = 20000) -> Graph:
    """Connected Erdos-Renyi draw conditioned on maximum degree <= dmax."""
    if n <= 1:
        return Graph(n, ())
    for _ in range(attempts):
        edges = tuple((i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < 0.5)
        g = Graph(n, edges)
        if g.is_connected() and g.max_degree() <= dmax:
            return g
    raise RuntimeError(f"no degree-{dmax} connected graph on {n} vertices")


def rand_tree(rng: random.Random, n: int) -> Graph:
    """Uniform spanning tree of a connected Erdos-Renyi draw (Wilson walk)."""
    g = rand_connected_graph(rng, n)
    if n <= 1:
        return g
    in_tree = {0}
    edges: list[tuple[int, int]] = []
    for start in range(1, n):
        if start in in_tree:
            continue
        path = [start]
        while path[-1] not in in_tree:
            nxt = rng.choice(g.neighbors(path[-1]))
            if nxt in path:
                path = path[: path.index(nxt) + 1]
            else:
                path.append(nxt)
        for a, b in zip(path, path[1:]):
            edges.append((a, b))
            in_tree.add(a)
        in_tree.add(path[-1])
    return Graph(n, tuple(edges))


def rand_params(rng: random.Random, mode: str, n: int) -> Params:
    """Random parameters in one of the regimes the identities must cover."""
    if mode == "beta0":
        return Params(ZERO, rand_scalar(rng, nonzero=True), rand_scalar(rng, nonzero=True))
    if mode == "gamma0":
        return Params(rand_scalar(rng, nonzero=True), ZERO, rand_scalar(rng, nonzero=True))
    if mode == "bg1":
        beta = rand_scalar(rng, nonzero=True, complex_prob=0.3)
        return Params(beta, ONE / beta, rand_scalar(rng, nonzero=True))
    if mode == "fields":
        beta, gamma = _nontrivial_edge_pair(rng, 0.0)
        flds = tuple(rand_scalar(rng, nonzero=True, complex_prob=0.2) for _ in range(n))
        return Params(beta, gamma, flds)
    if mode == "complex":
        beta, gamma = _nontrivial_edge_pair(rng, 0.6)
        return Params(beta, gamma, rand_scalar(rng, nonzero=True, complex_prob=0.6))
    if mode == "generic":
        beta, gamma = _nontrivial_edge_pair(rng, 0.0)
        return Params(beta, gamma, rand_scalar(rng, nonzero=True))
    raise ValueError(f"unknown parameter mode {mode!r}")


def _nontrivial_edge_pair(rng, complex_prob):
    while True:
        beta = rand_scalar(rng, complex_prob=complex_prob)
        gamma = rand_scalar(rng, complex_prob=complex_prob)
        if not (beta.is_zero() and gamma.is_zero()):
            return beta, gamma


def rand_feasible_pinning(rng: random.Random, g: Graph, beta_is_zero: bool,
                          gamma_is_zero: bool, exclude: tuple[int, ...] = (),
                          pin_prob: float = 0.3) -> Pinning:
    """Feasible by construction: spins honor hard constraints as assigned."""
    pins: dict[int, str] = {}
    for v in range(g.n):
        if v in exclude or rng.random() >= pin_prob:
            continue
        allowed = [PLUS, MINUS]
        if beta_is_zero and any(pins.get(w) == PLUS for w in g.neighbors(v)):
            allowed.remove(PLUS)
        if gamma_is_zero and any(pins.get(w) == MINUS for w in g.neighbors(v)):
            allowed.remove(MINUS)
        if allowed:
            pins[v] = rng.choice(allowed)
    return Pinning.of(pins)


def rand_pinning_pair(rng: random.Random, g: Graph, beta_is_zero: bool,
                      gamma_is_zero: bool, exclude: tuple[int, ...] = ()
                      ) -> tuple[Pinning, Pinning]:
    """Two feasible pinnings, alternating equal-domain and unequal-domain
    disagreement sets."""
    s = rand_feasible_pinning(rng, g, beta_is_zero, gamma_is_zero, exclude)
    if rng.random() < 0.5:
        for _ in range(50):
            flipped = {v: (flip_spin(sp) if rng.random() < 0.5 else sp)
                       for v, sp in s.items()}
            t = Pinning.of(flipped)
            if is_feasible(g, t, beta_is_zero, gamma_is_zero):
                return s, t
        return s, s
    return s, rand_feasible_pinning(rng, g, beta_is_zero, gamma_is_zero, exclude)


def rand_unpinned_pair(rng: random.Random, g: Graph, p: Pinning) -> tuple[int, int]:
    free = [v for v in range(g.n) if v not in p]
    u, v = rng.sample(free, 2)
    return u, v


def rand_qspin_params(rng: random.Random, q: int) -> QSpinParams:
    entries = {}
    for i in range(q):
        for j in range(i, q):
            entries[(i, j)] = rand_scalar(rng, complex_prob=0.2)
    matrix = tuple(tuple(entries[(min(i, j), max(i, j))] for j in range(q))
                   for i in range(q))
    lams = tuple(rand_scalar(rng, nonzero=True, complex_prob=0.2) for _ in range(q))
    return QSpinParams(matrix, lams)


def rand_qspin_pinning(rng: random.Random, g: Graph, q: int,
                       exclude: tuple[int, ...] = (),
                       pin_prob: float = 0.25) -> Pinning:
    pins = {v: rng.randint(1, q) for v in range(g.n)
            if v not in exclude and rng.random() < pin_prob}
    return Pinning.of(pins)
