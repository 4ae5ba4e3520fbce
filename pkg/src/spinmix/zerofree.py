"""Zero-location experiments: root scans, annulus checks, modulus sweeps.

These are contrapositive tests: a zero-free statement about a region is
checked by locating every root of the exact field polynomial and verifying
none falls inside the region (up to the root-finder tolerance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PinningError
from .graphs import Graph, MINUS, PLUS, Pinning
from .numerics import ExactComplex, ONE, Polynomial, match_roots, poly_roots
from .partition import eliminate_pins, z_poly_lambda

MODULUS_TOL = 1e-9


@dataclass(frozen=True)
class RootReport:
    """Roots of a scanned field polynomial with modulus statistics.

    ``roots`` carries the full multiset including exact zeros from a forced
    lambda power (one per + pin); ``band`` and ``annulus_violations`` are
    populated by checks that query a zero-free modulus band, counting the
    nonzero roots whose modulus escapes [band[0] - tol, band[1] + tol].
    """

    roots: tuple[complex, ...]
    moduli: tuple[float, ...]
    min_modulus: float
    max_modulus: float
    band: tuple[float, float] | None = None
    annulus_violations: int | None = None
    cross_check_mismatch: float | None = None

    def to_json(self) -> dict:
        doc = {
            "roots": [[r.real, r.imag] for r in self.roots],
            "moduli": list(self.moduli),
            "min_modulus": self.min_modulus,
            "max_modulus": self.max_modulus,
        }
        if self.band is not None:
            doc["band"] = list(self.band)
            doc["annulus_violations"] = self.annulus_violations
        if self.cross_check_mismatch is not None:
            doc["cross_check_mismatch"] = self.cross_check_mismatch
        return doc


def _report(roots: list[complex], band: tuple[float, float] | None = None,
            tol: float = MODULUS_TOL,
            cross_check_mismatch: float | None = None) -> RootReport:
    roots = sorted(roots, key=lambda z: (z.real, z.imag))
    moduli = tuple(sorted(abs(r) for r in roots))
    violations = None
    if band is not None:
        lo, hi = band
        violations = sum(1 for m in moduli
                         if m > tol and (m < lo - tol or m > hi + tol))
    return RootReport(roots=tuple(roots), moduli=moduli,
                      min_modulus=moduli[0], max_modulus=moduli[-1],
                      band=band, annulus_violations=violations,
                      cross_check_mismatch=cross_check_mismatch)


def _poly_root_multiset(poly: Polynomial, tol: float) -> list[complex]:
    """Roots with multiplicity; a forced lambda^k factor yields k exact zeros."""
    if poly.degree < 1:
        raise ValueError("the field polynomial must have degree >= 1")
    k = poly.valuation()
    roots: list[complex] = [0j] * k
    reduced = poly.shifted_down(k)
    if reduced.degree >= 1:
        roots.extend(poly_roots(reduced, tol))
    return roots


def lambda_root_scan(g: Graph, p: Pinning, beta, gamma,
                     tol: float = 1e-12) -> RootReport:
    """All roots of the pinned partition polynomial in the uniform field."""
    poly = z_poly_lambda(g, p, beta, gamma)
    return _report(_poly_root_multiset(poly, tol))


def pinned_annulus_check(g: Graph, p: Pinning, beta, d: int | None = None,
                         tol: float = MODULUS_TOL) -> RootReport:
    """Root-modulus band check for pinned ferromagnetic Ising instances.

    For edge activity beta > 1 on a graph of maximum degree <= d, every
    nonzero root of the pinned field polynomial must have modulus inside
    [beta^-d, beta^d]. The same roots are recomputed through the
    pin-elimination route and matched; the report records the violation
    count and the worst cross-check mismatch.
    """
    beta = ExactComplex._coerce(beta)
    if not beta.is_real() or beta.re <= 1:
        raise ValueError("the annulus statement needs a real edge activity > 1")
    if d is None:
        d = max(2, g.max_degree())
    elif g.max_degree() > d:
        raise ValueError(f"graph degree {g.max_degree()} exceeds the bound {d}")
    poly = z_poly_lambda(g, p, beta, beta)
    direct = _poly_root_multiset(poly, 1e-12)

    ones = (ONE,) * g.n
    reduced, rescaled, _prefactor = eliminate_pins(g, p, beta, ones)
    plus_pins = sum(1 for _, s in p.items() if s == PLUS)
    via_elimination: list[complex] = [0j] * plus_pins
    reduced_poly = z_poly_lambda(reduced, Pinning(), beta, beta, scale=rescaled)
    if reduced_poly.degree >= 1:
        via_elimination.extend(_poly_root_multiset(reduced_poly, 1e-12))
    mismatch = match_roots(direct, via_elimination)

    b = float(beta.re)
    return _report(direct, band=(b ** (-d), b ** d), tol=tol,
                   cross_check_mismatch=mismatch)


@dataclass(frozen=True)
class SinglePinReport:
    """Grid evaluation of |Z| inside a zero-free field disk or its inverse."""

    ok: bool
    witness: complex | None
    min_abs: float
    samples: int

    def __bool__(self):
        return self.ok


def single_pin_check(g: Graph, p: Pinning, beta, side: str = "auto",
                     moduli: tuple[float, ...] | None = None,
                     angles: int = 8) -> SinglePinReport:
    """Sample |Z| on a modulus/angle grid in the single-pin zero-free region.

    With at most one + pin the region is 0 < |lambda| < 1/beta; mirrored,
    with at most one - pin it is |lambda| > beta (ferromagnetic Ising,
    beta > 1). Returns ok=False with the witness sample if a zero shows up,
    which would falsify the implementation rather than the statement.
    """
    beta = ExactComplex._coerce(beta)
    if not beta.is_real() or beta.re <= 1:
        raise ValueError("the single-pin statement needs a real edge activity > 1")
    n_plus = sum(1 for _, s in p.items() if s == PLUS)
    n_minus = sum(1 for _, s in p.items() if s == MINUS)
    if side == "auto":
        side = "small" if n_plus <= 1 else "large"
    if side == "small" and n_plus > 1:
        raise PinningError("the small-field region allows at most one + pin")
    if side == "large" and n_minus > 1:
        raise PinningError("the large-field region allows at most one - pin")
    if side not in ("small", "large"):
        raise ValueError(f"unknown side {side!r}")

    b = float(beta.re)
    if moduli is None:
        fractions_of_disk = (0.2, 0.4, 0.6, 0.9)
        if side == "small":
            moduli = tuple(f / b for f in fractions_of_disk)
        else:
            moduli = tuple(b / f for f in fractions_of_disk)
    poly = z_poly_lambda(g, p, beta, beta)
    threshold = 1e-12 * (1.0 + poly.one_norm())
    min_abs = math.inf
    count = 0
    witness = None
    for r in moduli:
        for a in range(angles):
            lam = r * complex(math.cos(2 * math.pi * a / angles),
                              math.sin(2 * math.pi * a / angles))
            val = abs(poly.evaluate_complex(lam))
            count += 1
            if val < min_abs:
                min_abs = val
                if val <= threshold:
                    witness = lam
    return SinglePinReport(ok=witness is None, witness=witness,
                           min_abs=min_abs, samples=count)


def region_min_modulus(instances: list[tuple[Graph, Pinning]], beta, gamma,
                       grid: list[complex]) -> list[tuple[complex, float]]:
    """Minimum |Z| over a finite instance family at every grid field value.

    Zeros are data here: the table maps out where the family's partition
    values get small, with no pass/fail judgement.
    """
    polys = [z_poly_lambda(g, p, beta, gamma) for g, p in instances]
    out = []
    for lam in grid:
        if polys:
            m = min(abs(poly.evaluate_complex(lam)) for poly in polys)
        else:
            m = math.inf
        out.append((lam, m))
    return out
