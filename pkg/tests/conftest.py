"""Shared oracles and seeded instance helpers.

``z_naive`` is the independent enumeration oracle: it walks full spin
assignments with itertools and recomputes every weight from scratch, sharing
no code with the library's bitmask enumeration or tree recursion.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from spinmix.graphs import Graph, MINUS, PLUS, Pinning
from spinmix.numerics import ExactComplex
from spinmix.partition import Params


def z_naive(g: Graph, p: Pinning, params: Params) -> ExactComplex:
    lams = params.field_vector(g.n)
    total = ExactComplex(0)
    for combo in itertools.product((PLUS, MINUS), repeat=g.n):
        if any(combo[v] != s for v, s in p.items()):
            continue
        w = ExactComplex(1)
        for u, v in g.edges:
            if combo[u] == PLUS and combo[v] == PLUS:
                w = w * params.beta
            elif combo[u] == MINUS and combo[v] == MINUS:
                w = w * params.gamma
        for v in range(g.n):
            if combo[v] == PLUS:
                w = w * lams[v]
        total = total + w
    return total


def z_naive_qspin(g, p, qp):
    total = ExactComplex(0)
    for combo in itertools.product(range(1, qp.q + 1), repeat=g.n):
        if any(combo[v] != s for v, s in p.items()):
            continue
        w = ExactComplex(1)
        for v in range(g.n):
            w = w * qp.lambdas[combo[v] - 1]
        for u, v in g.edges:
            w = w * qp.matrix[combo[u] - 1][combo[v] - 1]
        total = total + w
    return total


def rational(rng: random.Random, nonzero=False) -> Fraction:
    while True:
        f = Fraction(rng.randint(-10, 10), rng.randint(1, 10))
        if not nonzero or f != 0:
            return f


def scalar(rng: random.Random, nonzero=False, complex_prob=0.0) -> ExactComplex:
    while True:
        if rng.random() < complex_prob:
            x = ExactComplex(rational(rng), rational(rng))
        else:
            x = ExactComplex(rational(rng))
        if not nonzero or not x.is_zero():
            return x


def random_graph(rng: random.Random, n: int, connected=True) -> Graph:
    while True:
        edges = tuple((i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < 0.5)
        g = Graph(n, edges)
        if not connected or g.is_connected():
            return g
