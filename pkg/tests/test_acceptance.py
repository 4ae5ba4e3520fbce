"""Acceptance suite: one test per release criterion, one verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
and timings. Every randomized corpus is seeded, and every equality below is
bit-exact rational arithmetic unless a float tolerance is stated inline.
"""

import contextlib
import math
import random
import time
from fractions import Fraction

from conftest import random_graph, scalar, z_naive_qspin
from spinmix.corpus import (PARAM_MODES, rand_bounded_degree_graph,
                            rand_feasible_pinning, rand_params,
                            rand_pinning_pair, rand_qspin_params,
                            rand_qspin_pinning, rand_tree, rand_unpinned_pair)
from spinmix.errors import ZeroPartitionError
from spinmix.graphs import Graph, Pinning, build_saw_tree, is_proper
from spinmix.identities import (cd_equivalent_forms, cd_sides,
                                exact_determinant, gutman_sides,
                                qspin_det_sides)
from spinmix.mixing import (decay_profile, ldc_report, ldc_report_beta,
                            marginal, path_decay_instances,
                            verify_saw_marginal, weitz_approx_marginal)
from spinmix.numerics import ExactComplex
from spinmix.partition import (Params, eliminate_pins, hardcore_params,
                               spin_reversal, two_spin_embedding, z_brute)
from spinmix.zerofree import lambda_root_scan, pinned_annulus_check
from spinmix import cli


@contextlib.contextmanager
def criterion(number, name):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({name}): FAIL "
              f"after {time.monotonic() - start:.1f}s")
        raise
    print(f"ACCEPTANCE {number} ({name}): PASS "
          f"in {time.monotonic() - start:.1f}s")


def test_01_pair_difference_identity():
    with criterion(1, "pair-difference identity, 200 trees <= 14"):
        rng = random.Random(10_001)
        for trial in range(200):
            n = rng.randint(2, 14)
            t = rand_tree(rng, n)
            params = rand_params(rng, PARAM_MODES[trial % len(PARAM_MODES)], n)
            u, v = rand_unpinned_pair(rng, t, Pinning())
            pins = rand_feasible_pinning(rng, t, params.beta_is_zero,
                                         params.gamma_is_zero, exclude=(u, v))
            rep = cd_sides(t, pins, u, v, params)
            assert rep.equal, (trial, t, pins, params, u, v)
            assert cd_equivalent_forms(t, pins, u, v, params), trial


def test_02_hardcore_deletion_identity():
    with criterion(2, "hard-core deletion identity, 200 trees"):
        # the hand-derived three-vertex path case: both sides are lambda^3
        lam = ExactComplex(Fraction(7, 3))
        rep = gutman_sides(Graph(3, ((0, 1), (1, 2))), 0, 2, lam)
        assert rep.equal and rep.lhs == lam ** 3
        rng = random.Random(10_002)
        for trial in range(200):
            n = rng.randint(2, 12)
            t = rand_tree(rng, n)
            u, v = rng.sample(range(n), 2)
            lam = scalar(rng, nonzero=True, complex_prob=0.25)
            rep = gutman_sides(t, u, v, lam)
            assert rep.equal, (trial, t, u, v, lam)


def test_03_qspin_determinant_identity():
    with criterion(3, "q-spin determinant identity, 100 trees <= 8"):
        rng = random.Random(10_003)
        for trial in range(100):
            n = rng.randint(2, 8)
            t = rand_tree(rng, n)
            q = 2 if trial % 2 == 0 else 3
            u, v = rng.sample(range(n), 2)
            if q == 2 and trial % 4 == 0:
                # embedding form: the determinant must coincide with the
                # two-spin pair-difference sides
                params = rand_params(rng, "generic", n)
                qp = two_spin_embedding(params)
                rep = qspin_det_sides(t, Pinning(), u, v, qp)
                two = cd_sides(t, Pinning(), u, v, params)
                assert rep.lhs == two.lhs and rep.rhs == two.rhs
                assert rep.equal, trial
                continue
            qp = rand_qspin_params(rng, q)
            pins = rand_qspin_pinning(rng, t, q, exclude=(u, v))
            rep = qspin_det_sides(t, pins, u, v, qp)
            assert rep.equal, (trial, t, pins, u, v, qp)
            if n <= 6:
                # brute-force determinant oracle validates the field-power
                # reading on every small instance
                matrix = [[z_naive_qspin(t, pins.with_pin(u, i + 1).with_pin(v, j + 1), qp)
                           for j in range(q)] for i in range(q)]
                assert rep.lhs == exact_determinant(matrix), trial


def test_04_saw_marginal_equality():
    with criterion(4, "SAW marginal equality + structure, 100 graphs <= 9"):
        rng = random.Random(10_004)
        done = 0
        while done < 100:
            n = rng.randint(2, 9)
            g = random_graph(rng, n)
            mode = ("generic", "beta0", "gamma0", "complex", "fields")[done % 5]
            params = rand_params(rng, mode, n)
            pins = rand_feasible_pinning(rng, g, params.beta_is_zero,
                                         params.gamma_is_zero)
            proper = [v for v in range(n)
                      if is_proper(g, pins, v, params.beta_is_zero,
                                   params.gamma_is_zero)]
            if not proper:
                continue
            v = rng.choice(proper)
            try:
                assert verify_saw_marginal(g, pins, v, params), (done, g, pins, v)
            except ZeroPartitionError:
                continue
            bare = build_saw_tree(g, v, Pinning())
            assert bare.tree.max_degree() == g.max_degree(), done
            dist_g = g.distances_from(v)
            dist_t = bare.tree.distances_from(bare.root)
            for w in range(n):
                best = min((dist_t[x] for x in bare.copies_of(w)),
                           default=math.inf)
                assert best == dist_g[w], (done, w)
            done += 1


def test_05_coefficient_locality_contracts():
    with criterion(5, "coefficient locality, 60 field + 40 activity series"):
        rng = random.Random(10_005)
        for trial in range(60):
            n = rng.randint(2, 8)
            g = random_graph(rng, n)
            beta = ExactComplex(0) if trial % 4 == 0 else scalar(rng, complex_prob=0.2)
            gamma = scalar(rng, nonzero=True, complex_prob=0.2)
            v = rng.randrange(n)
            s, t = rand_pinning_pair(rng, g, beta.is_zero(), False, exclude=(v,))
            rep = ldc_report(g, s, t, v, beta, gamma)
            assert rep.satisfied, (trial, g, s, t, v, beta, gamma)
        done = 0
        while done < 40:
            n = rng.randint(2, 7)
            g = random_graph(rng, n)
            gamma = scalar(rng, nonzero=True, complex_prob=0.2)
            lam = scalar(rng, nonzero=True, complex_prob=0.2)
            v = rng.randrange(n)
            s, t = rand_pinning_pair(rng, g, False, False, exclude=(v,))
            try:
                rep = ldc_report_beta(g, s, t, v, gamma, lam,
                                      ExactComplex(1) / gamma)
            except ZeroPartitionError:
                continue
            assert rep.satisfied, (done, g, s, t, v, gamma, lam)
            done += 1


def test_06_circle_and_annulus():
    with criterion(6, "root circle (100) and pinned band (50)"):
        rng = random.Random(10_006)
        for trial in range(100):
            n = rng.randint(2, 8)
            g = random_graph(rng, n)
            beta = (Fraction(3, 2), Fraction(2), Fraction(3))[trial % 3]
            rep = lambda_root_scan(g, Pinning(), beta, beta)
            assert all(abs(m - 1.0) < 1e-9 for m in rep.moduli), (trial, g, beta)
        for trial in range(50):
            n = rng.randint(2, 8)
            g = rand_bounded_degree_graph(rng, n, 3)
            free = rng.randrange(n)
            pins = rand_feasible_pinning(rng, g, False, False, exclude=(free,))
            rep = pinned_annulus_check(g, pins, Fraction(3, 2))
            assert rep.annulus_violations == 0, (trial, g, pins)
            assert rep.cross_check_mismatch < 1e-9, trial


def test_07_pin_elimination_and_spin_reversal():
    with criterion(7, "pin elimination + spin reversal vs brute force, 100"):
        rng = random.Random(10_007)
        for _ in range(50):
            n = rng.randint(1, 9)
            g = random_graph(rng, n, connected=False)
            beta = scalar(rng, nonzero=True, complex_prob=0.2)
            fields = tuple(scalar(rng, nonzero=True, complex_prob=0.2)
                           for _ in range(n))
            pins = rand_feasible_pinning(rng, g, False, False, pin_prob=0.4)
            reduced, rescaled, pre = eliminate_pins(g, pins, beta, fields)
            lhs = z_brute(g, pins, Params(beta, beta, fields))
            rhs = pre if reduced.n == 0 else \
                pre * z_brute(reduced, Pinning(), Params(beta, beta, rescaled))
            assert lhs == rhs
        for trial in range(50):
            n = rng.randint(1, 9)
            g = random_graph(rng, n, connected=False)
            params = rand_params(rng, ("generic", "fields", "complex",
                                       "beta0", "gamma0")[trial % 5], n)
            pins = rand_feasible_pinning(rng, g, params.beta_is_zero,
                                         params.gamma_is_zero)
            flipped, swapped, pre = spin_reversal(g, pins, params)
            assert z_brute(g, pins, params) == pre * z_brute(g, flipped, swapped)


def test_08_decay_regimes():
    with criterion(8, "decay regimes: rate > 1.05 and exact zero gaps"):
        hc = decay_profile(path_decay_instances(10, "ssm", k_min=2),
                           hardcore_params(Fraction(1, 10)))
        assert hc.rate is not None and hc.rate - 1 > 0.05, hc.rate
        psm = decay_profile(path_decay_instances(10, "psm"), Params(2, 2, 3))
        assert psm.rate is not None and psm.rate - 1 > 0.05, psm.rate
        flat = decay_profile(path_decay_instances(8, "ssm"),
                             Params(2, Fraction(1, 2), 1))
        assert all(r.gap == 0.0 for r in flat.rows)


def test_09_weitz_full_depth():
    with criterion(9, "truncated-SAW approximator, 50 graphs <= 9"):
        rng = random.Random(10_009)
        done = 0
        findings = 0
        while done < 50:
            n = rng.randint(2, 9)
            g = random_graph(rng, n)
            mode = ("generic", "beta0", "complex")[done % 3]
            params = rand_params(rng, mode, n)
            pins = rand_feasible_pinning(rng, g, params.beta_is_zero,
                                         params.gamma_is_zero)
            proper = [v for v in range(n)
                      if is_proper(g, pins, v, params.beta_is_zero,
                                   params.gamma_is_zero)]
            if not proper:
                continue
            v = rng.choice(proper)
            try:
                truth = marginal(g, pins, v, params)
                value, exact = weitz_approx_marginal(g, v, pins, params, n)
            except ZeroPartitionError:
                continue
            assert exact and value == truth, done
            # informational: hard-core depth sweep, monotone-looking or not
            if params.beta_is_zero and done % 10 == 0:
                errs = []
                for depth in range(1, n + 1):
                    try:
                        approx, _ = weitz_approx_marginal(g, v, pins, params, depth)
                    except ZeroPartitionError:
                        errs = []
                        break
                    errs.append(math.sqrt(float((approx - truth).abs2())))
                if any(b > a + 1e-15 for a, b in zip(errs, errs[1:])):
                    findings += 1
                    print(f"finding: non-monotone depth sweep on trial {done}")
            done += 1
        print(f"weitz informational findings: {findings}")


def test_10_determinism(tmp_path):
    with criterion(10, "byte-identical reports for identical runs"):
        for args in (
            ["cd-check", "--trials", "20", "--seed", "77"],
            ["saw-check", "--trials", "10", "--seed", "78", "--format", "json"],
            ["annulus", "--trials", "10", "--seed", "79"],
            ["decay", "--mode", "psm", "--beta", "2/1", "--gamma", "2/1",
             "--lambda", "3/1", "--kmax", "6"],
        ):
            a = tmp_path / ("a_" + args[0] + ".out")
            b = tmp_path / ("b_" + args[0] + ".out")
            assert cli.main(args + ["--out", str(a)]) == 0
            assert cli.main(args + ["--out", str(b)]) == 0
            assert a.read_bytes() == b.read_bytes(), args[0]
