import cmath
import math
import random
from fractions import Fraction

import pytest

from conftest import random_graph
from spinmix.corpus import rand_bounded_degree_graph, rand_feasible_pinning
from spinmix.errors import PinningError
from spinmix.graphs import Graph, MINUS, PLUS, Pinning
from spinmix.numerics import match_roots
from spinmix.partition import z_poly_lambda
from spinmix.zerofree import (lambda_root_scan, pinned_annulus_check,
                              region_min_modulus, single_pin_check)

K2 = Graph(2, ((0, 1),))


class TestLambdaRootScan:
    def test_ising_edge_quadratic(self):
        # 2l^2 + 2l + 2: quadratic-formula roots (-1 +- i sqrt(3))/2
        rep = lambda_root_scan(K2, Pinning(), 2, 2)
        expected = [complex(-0.5, -math.sqrt(3) / 2), complex(-0.5, math.sqrt(3) / 2)]
        assert match_roots(list(rep.roots), expected) < 1e-12
        assert all(abs(m - 1.0) < 1e-12 for m in rep.moduli)

    def test_hardcore_edge_linear(self):
        rep = lambda_root_scan(K2, Pinning(), 0, 1)
        assert len(rep.roots) == 1 and abs(rep.roots[0] + 0.5) < 1e-12

    def test_plus_pins_give_exact_zero_roots(self):
        rep = lambda_root_scan(K2, Pinning.of({0: PLUS}), 2, 2)
        assert 0j in rep.roots and rep.min_modulus == 0.0

    def test_constant_polynomial_rejected(self):
        g = Graph(1, ())
        with pytest.raises(ValueError):
            lambda_root_scan(g, Pinning.of({0: MINUS}), 2, 2)

    def test_unpinned_ising_circle(self):
        # Lee-Yang circle: every root modulus within 1e-9 of 1
        rng = random.Random(112)
        for trial in range(60):
            n = rng.randint(2, 8)
            g = random_graph(rng, n)
            beta = (Fraction(3, 2), Fraction(2), Fraction(3))[trial % 3]
            rep = lambda_root_scan(g, Pinning(), beta, beta)
            assert all(abs(m - 1.0) < 1e-9 for m in rep.moduli), (g, beta)

    def test_root_finder_consistency(self):
        rng = random.Random(113)
        for _ in range(30):
            n = rng.randint(2, 8)
            g = random_graph(rng, n, connected=False)
            beta = Fraction(rng.randint(1, 6), rng.randint(1, 4))
            gamma = Fraction(rng.randint(1, 6), rng.randint(1, 4))
            pins = rand_feasible_pinning(rng, g, False, False)
            poly = z_poly_lambda(g, pins, beta, gamma)
            if poly.degree < 1:
                continue
            rep = lambda_root_scan(g, pins, beta, gamma)
            bound = 1e-8 * (1 + poly.one_norm())
            for root in rep.roots:
                assert abs(poly.evaluate_complex(root)) < bound


class TestPinnedAnnulus:
    def test_pinned_edge(self):
        rep = pinned_annulus_check(K2, Pinning.of({0: PLUS}), 2)
        assert rep.band == (0.25, 4.0)
        assert rep.annulus_violations == 0
        nonzero = [m for m in rep.moduli if m > 1e-9]
        assert all(0.25 - 1e-9 <= m <= 4 + 1e-9 for m in nonzero)

    def test_unpinned_circle_inside_band(self):
        rep = pinned_annulus_check(K2, Pinning(), 2)
        assert rep.annulus_violations == 0
        assert all(abs(m - 1.0) < 1e-9 for m in rep.moduli)

    def test_corpus_no_violations(self):
        rng = random.Random(200)
        for _ in range(50):
            n = rng.randint(2, 8)
            g = rand_bounded_degree_graph(rng, n, 3)
            free = rng.randrange(n)
            pins = rand_feasible_pinning(rng, g, False, False, exclude=(free,))
            rep = pinned_annulus_check(g, pins, Fraction(3, 2))
            assert rep.annulus_violations == 0
            assert rep.cross_check_mismatch < 1e-9

    def test_beta_at_most_one_rejected(self):
        with pytest.raises(ValueError):
            pinned_annulus_check(K2, Pinning(), 1)

    def test_degree_bound_enforced(self):
        star = Graph(4, ((0, 1), (0, 2), (0, 3)))
        with pytest.raises(ValueError):
            pinned_annulus_check(star, Pinning(), 2, d=2)


class TestSinglePin:
    P4 = Graph(4, ((0, 1), (1, 2), (2, 3)))

    def test_internal_plus_pin(self):
        rep = single_pin_check(self.P4, Pinning.of({1: PLUS}), 2)
        assert rep.ok and rep.min_abs > 0 and rep.samples == 32

    def test_all_minus_qualifies(self):
        rep = single_pin_check(self.P4, Pinning.of({0: MINUS, 2: MINUS}), 2,
                               side="small")
        assert rep.ok

    def test_large_side_mirror(self):
        rep = single_pin_check(self.P4, Pinning.of({1: MINUS}), 2, side="large")
        assert rep.ok

    def test_two_plus_pins_rejected(self):
        with pytest.raises(PinningError):
            single_pin_check(self.P4, Pinning.of({0: PLUS, 2: PLUS}), 2,
                             side="small")

    def test_custom_grid(self):
        rep = single_pin_check(self.P4, Pinning.of({1: PLUS}), 2,
                               moduli=(0.1, 0.2, 0.3, 0.45), angles=8)
        assert rep.ok and rep.samples == 32


class TestRegionMinModulus:
    def test_hardcore_paths_inside_safe_disk(self):
        instances = [(Graph(n, tuple((i, i + 1) for i in range(n - 1))), Pinning())
                     for n in range(2, 11)]
        grid = [0.12 * cmath.exp(2j * math.pi * a / 8) for a in range(8)]
        rows = region_min_modulus(instances, 0, 1, grid)
        # |lambda| = 0.12 < 4/27: no zeros for this path family
        assert all(m > 0.05 for _, m in rows)

    def test_grid_point_on_exact_root(self):
        rows = region_min_modulus([(K2, Pinning())], 0, 1, [complex(-0.5, 0)])
        assert rows[0][1] == 0.0

    def test_empty_family(self):
        assert region_min_modulus([], 0, 1, []) == []


def test_single_pin_root_scan_strengthening():
    # contrapositive via roots: with at most one + pin, nonzero roots of
    # the pinned field polynomial stay out of 0 < |root| < 1/beta
    rng = random.Random(303)
    for _ in range(40):
        n = rng.randint(2, 8)
        g = random_graph(rng, n)
        beta = Fraction(rng.randint(3, 6), 2)
        pins = {}
        minus_candidates = [v for v in range(n) if rng.random() < 0.3]
        for v in minus_candidates[: n - 1]:
            pins[v] = MINUS
        free = [v for v in range(n) if v not in pins]
        if rng.random() < 0.5 and free:
            pins[free[0]] = PLUS
        if len(pins) == n:
            continue
        rep = lambda_root_scan(g, Pinning.of(pins), beta, beta)
        for m in rep.moduli:
            assert not (1e-9 < m < 1 / float(beta) - 1e-9), (g, pins, beta, m)
