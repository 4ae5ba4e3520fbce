"""Exact Gaussian-rational scalars, truncated power series, polynomials, roots.

All identity verification in this package runs on :class:`ExactComplex`
(pairs of arbitrary-precision rationals), so equalities are bit-exact.
Floating point appears only in root finding and decay fitting.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RootConvergenceError, SeriesDivisionError


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


class ExactComplex:
    """A complex number with exact rational real and imaginary parts.

    Field operations are exact; floats are rejected by the constructor so
    inexactness cannot sneak into an identity check.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, ExactComplex):
            if im != 0:
                raise TypeError("cannot combine an ExactComplex with an imaginary part")
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        return ExactComplex(x)

    def __add__(self, other):
        o = self._coerce(other)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return ExactComplex(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex((self.re * o.re + self.im * o.im) / d,
                            (o.re * self.im - o.im * self.re) / d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return (ExactComplex(1) / self) ** (-k)
        out = ExactComplex(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates and conversions -----------------------------------------

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_zero(self) -> bool:
        return not self

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __complex__(self):
        return self.to_complex()

    def __repr__(self):
        if self.im == 0:
            return f"ExactComplex({str(self.re)!r})"
        return f"ExactComplex({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else ''}{self.im}i"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, doc) -> "ExactComplex":
        """Parse 'p/q', a bare int, or {'re': 'p/q', 'im': 'p/q'}."""
        if isinstance(doc, dict):
            return cls(Fraction(str(doc.get("re", 0))), Fraction(str(doc.get("im", 0))))
        if isinstance(doc, (int, str, Fraction)):
            return cls(doc)
        raise TypeError(f"cannot parse complex rational from {doc!r}")


ZERO = ExactComplex(0)
ONE = ExactComplex(1)


def parse_scalar(text: str) -> ExactComplex:
    """Parse a CLI scalar literal: 'p/q' or 'p/q,p/q' (real,imaginary)."""
    parts = text.split(",")
    if len(parts) == 1:
        return ExactComplex(Fraction(parts[0]))
    if len(parts) == 2:
        return ExactComplex(Fraction(parts[0]), Fraction(parts[1]))
    raise ValueError(f"bad rational literal: {text!r}")


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


class PowerSeries:
    """Dense truncated power series with ExactComplex coefficients.

    ``coefficients[i]`` is the coefficient of x^i; ``order`` (= len) is the
    exclusive truncation order. Binary operations truncate to the shorter
    operand.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        self.coefficients = tuple(ExactComplex._coerce(c) for c in coefficients)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls([ZERO] * order)

    @classmethod
    def constant(cls, value, order: int) -> "PowerSeries":
        return cls([value] + [ZERO] * (order - 1))

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"PowerSeries([{', '.join(str(c) for c in self.coefficients)}])"

    def __add__(self, other):
        n = min(self.order, other.order)
        return PowerSeries(a + b for a, b in zip(self.coefficients[:n], other.coefficients[:n]))

    def __sub__(self, other):
        n = min(self.order, other.order)
        return PowerSeries(a - b for a, b in zip(self.coefficients[:n], other.coefficients[:n]))

    def __mul__(self, other):
        if isinstance(other, ExactComplex):
            return PowerSeries(c * other for c in self.coefficients)
        n = min(self.order, other.order)
        out = [ZERO] * n
        for i, a in enumerate(self.coefficients[:n]):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coefficients[: n - i]):
                out[i + j] = out[i + j] + a * b
        return PowerSeries(out)

    def truncated(self, order: int) -> "PowerSeries":
        if order > self.order:
            return PowerSeries(self.coefficients + (ZERO,) * (order - self.order))
        return PowerSeries(self.coefficients[:order])

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all zero."""
        for i, c in enumerate(self.coefficients):
            if not c.is_zero():
                return i
        return None

    def shifted_down(self, k: int) -> "PowerSeries":
        """Divide by x^k; the first k coefficients must be zero."""
        if any(not c.is_zero() for c in self.coefficients[:k]):
            raise SeriesDivisionError("cannot shift down across nonzero coefficients")
        return PowerSeries(self.coefficients[k:])

    def evaluate(self, x: ExactComplex) -> ExactComplex:
        out = ZERO
        for c in reversed(self.coefficients):
            out = out * x + c
        return out


def series_invert(s: PowerSeries) -> PowerSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    if s.order == 0 or s.coefficients[0].is_zero():
        raise SeriesDivisionError("series has zero constant term")
    c0 = s.coefficients[0]
    inv0 = ONE / c0
    out = [inv0]
    for k in range(1, s.order):
        acc = ZERO
        for i in range(1, k + 1):
            acc = acc + s.coefficients[i] * out[k - i]
        out.append(-acc / c0)
    return PowerSeries(out)


def series_div(num: PowerSeries, den: PowerSeries) -> PowerSeries:
    """Formal quotient num/den, cancelling a shared leading x^k factor first.

    The result order shrinks by the cancelled valuation. Raises
    SeriesDivisionError when den vanishes through its order or when num has
    a smaller valuation than den (the quotient would not be a power series).
    """
    k = den.valuation()
    if k is None:
        raise SeriesDivisionError("denominator is zero through the truncation order")
    if k > 0:
        vn = num.valuation()
        if vn is not None and vn < k:
            raise SeriesDivisionError(
                f"valuation mismatch: numerator x^{vn} vs denominator x^{k}")
        num = num.shifted_down(k) if vn is not None else PowerSeries(num.coefficients[k:])
        den = den.shifted_down(k)
    return num * series_invert(den)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Exact polynomial in one variable; trailing zero coefficients trimmed."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        coeffs = [ExactComplex._coerce(c) for c in coefficients]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"Polynomial([{', '.join(str(c) for c in self.coefficients)}])"

    def evaluate(self, x: ExactComplex) -> ExactComplex:
        out = ZERO
        for c in reversed(self.coefficients):
            out = out * x + c
        return out

    def evaluate_complex(self, x: complex) -> complex:
        out = 0j
        for c in reversed(self.coefficients):
            out = out * x + c.to_complex()
        return out

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coefficients):
            if not c.is_zero():
                return i
        return None

    def shifted_down(self, k: int) -> "Polynomial":
        return Polynomial(self.coefficients[k:])

    def scaled(self, factor: ExactComplex) -> "Polynomial":
        return Polynomial(c * factor for c in self.coefficients)

    def to_series(self, order: int) -> PowerSeries:
        coeffs = list(self.coefficients[:order])
        coeffs += [ZERO] * (order - len(coeffs))
        return PowerSeries(coeffs)

    def one_norm(self) -> float:
        return sum(math.sqrt(float(c.abs2())) for c in self.coefficients)


# ---------------------------------------------------------------------------
# Exact polynomial algebra for the square-free step
# ---------------------------------------------------------------------------


def _poly_trim(c: list[ExactComplex]) -> list[ExactComplex]:
    while c and c[-1].is_zero():
        c.pop()
    return c


def _poly_divmod(a: list[ExactComplex], b: list[ExactComplex]
                 ) -> tuple[list[ExactComplex], list[ExactComplex]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    dq = len(a) - len(b)
    if dq < 0:
        return [], _poly_trim(rem)
    quot = [ZERO] * (dq + 1)
    lead = b[-1]
    for k in range(dq, -1, -1):
        coef = rem[k + len(b) - 1] / lead
        quot[k] = coef
        if not coef.is_zero():
            for i in range(len(b)):
                rem[k + i] = rem[k + i] - coef * b[i]
    return _poly_trim(quot), _poly_trim(rem[: len(b) - 1])


def _poly_gcd(a: list[ExactComplex], b: list[ExactComplex]) -> list[ExactComplex]:
    a, b = list(a), list(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_derivative(a: list[ExactComplex]) -> list[ExactComplex]:
    return _poly_trim([ExactComplex(i) * c for i, c in enumerate(a)][1:])


def _poly_sub(a: list[ExactComplex], b: list[ExactComplex]) -> list[ExactComplex]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else ZERO) - (b[i] if i < len(b) else ZERO)
           for i in range(n)]
    return _poly_trim(out)


def square_free_factors(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun decomposition p = prod f_i^i with each monic f_i square-free.

    Exact over the Gaussian rationals, so multiplicities are certain.
    """
    coeffs = list(p.coefficients)
    if len(coeffs) <= 1:
        return []
    lead = coeffs[-1]
    coeffs = [c / lead for c in coeffs]
    deriv = _poly_derivative(coeffs)
    g = _poly_gcd(coeffs, deriv)
    if len(g) <= 1:
        return [(Polynomial(coeffs), 1)]
    w, _ = _poly_divmod(coeffs, g)
    y, _ = _poly_divmod(deriv, g)
    z = _poly_sub(y, _poly_derivative(w))
    out = []
    i = 1
    while len(w) > 1:
        f = _poly_gcd(w, z)
        if len(f) > 1:
            out.append((Polynomial(f), i))
        w, _ = _poly_divmod(w, f)
        y, _ = _poly_divmod(z, f)
        z = _poly_sub(y, _poly_derivative(w))
        i += 1
    return out


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

# Fixed irrational angular offset for the initial root configuration; breaks
# the symmetry that would otherwise stall polynomials like x^n - c.
_START_ANGLE = 1.0 / math.sqrt(2.0)

_MAX_SWEEPS = 1000


def _horner_with_derivative(coeffs: Sequence[complex], x: complex) -> tuple[complex, complex]:
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def poly_roots(p: Polynomial, tol: float = 1e-12) -> list[complex]:
    """All complex roots (with multiplicity) by simultaneous Aberth iteration.

    The polynomial is first split into exact square-free factors, so the
    iteration only ever chases simple roots; multiplicities come from the
    exact decomposition, never from float clustering. Each factor starts
    from a deterministic circle of radius 1 + max|c_i|/|lead| and refines
    until every residual |p(z)| / (1 + |lead| |z|^deg) drops below ``tol``.
    Raises RootConvergenceError after the sweep cap instead of silently
    returning unconverged values. Output is sorted by (re, im).
    """
    if p.degree < 1:
        raise ValueError("poly_roots requires degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not all(cmath.isfinite(c.to_complex()) for c in p.coefficients):
        raise ValueError("coefficients overflow double precision")
    roots: list[complex] = []
    for factor, multiplicity in square_free_factors(p):
        roots.extend(_aberth_simple(factor, tol) * multiplicity)
    return sorted(roots, key=lambda w: (w.real, w.imag))


def _aberth_simple(p: Polynomial, tol: float) -> list[complex]:
    """Aberth iteration on a polynomial known to have simple roots.

    Coefficients are rescaled by their largest magnitude first (roots are
    unchanged), so the residual criterion is relative to the coefficient
    norm and stays reachable for ill-scaled inputs.
    """
    coeffs = [c.to_complex() for c in p.coefficients]
    deg = len(coeffs) - 1
    lead = coeffs[-1]
    if lead == 0 or not all(cmath.isfinite(c) for c in coeffs):
        raise ValueError("coefficients overflow double precision")
    if deg == 1:
        return [-coeffs[0] / coeffs[1]]

    radius = 1.0 + max(abs(c) for c in coeffs) / abs(lead)
    biggest = max(abs(c) for c in coeffs)
    coeffs = [c / biggest for c in coeffs]
    lead = coeffs[-1]
    z = [radius * cmath.exp(1j * (2.0 * math.pi * k / deg + _START_ANGLE))
         for k in range(deg)]
    alead = abs(lead)

    def residual(zi: complex, pz: complex) -> float:
        return abs(pz) / (1.0 + alead * abs(zi) ** deg)

    polish_left = 25
    converged = False
    for _ in range(_MAX_SWEEPS + polish_left):
        done = True
        max_step = 0.0
        for i in range(deg):
            pz, dpz = _horner_with_derivative(coeffs, z[i])
            if residual(z[i], pz) >= tol:
                done = False
            if pz == 0:
                continue
            if dpz == 0:
                # nudge off the critical point, deterministically
                z[i] *= 1.0 + 1e-8
                pz, dpz = _horner_with_derivative(coeffs, z[i])
                if dpz == 0:
                    z[i] += 1e-8
                    continue
            newton = pz / dpz
            s = 0j
            for j in range(deg):
                if j != i:
                    d = z[i] - z[j]
                    if d == 0:
                        d = 1e-14
                    s += 1.0 / d
            denom = 1.0 - newton * s
            step = newton if denom == 0 else newton / denom
            z[i] -= step
            rel = abs(step) / (1.0 + abs(z[i]))
            if rel > max_step:
                max_step = rel
        if done:
            converged = True
            # a few extra sweeps polish simple roots toward machine
            # precision; the residual criterion alone can leave larger
            # position error where the derivative is small
            if max_step < 1e-14 or polish_left == 0:
                return z
            polish_left -= 1
    if converged:
        return z
    worst = max(residual(zi, _horner_with_derivative(coeffs, zi)[0]) for zi in z)
    raise RootConvergenceError(
        f"root iteration did not reach tol={tol} after {_MAX_SWEEPS} sweeps "
        f"(worst residual {worst:.3e})")


def match_roots(found: Sequence[complex], expected: Sequence[complex]) -> float:
    """Minimum over pairings of the largest |found_i - expected_sigma(i)|.

    Exact assignment by bitmask DP; intended for the small root multisets
    produced here (degree <= ~20).
    """
    n = len(expected)
    if len(found) != n:
        raise ValueError("root multisets differ in size")
    if n == 0:
        return 0.0
    dist = [[abs(f - e) for e in expected] for f in found]
    full = (1 << n) - 1
    best = {0: 0.0}
    for i in range(n):
        nxt: dict[int, float] = {}
        for mask, cost in best.items():
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                m2 = mask | bit
                c2 = max(cost, dist[i][j])
                if c2 < nxt.get(m2, math.inf):
                    nxt[m2] = c2
        best = nxt
    return best[full]
