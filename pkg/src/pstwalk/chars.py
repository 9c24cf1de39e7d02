"""Multiplicative characters and exact sums of roots of unity.

Spectra downstream are integer linear combinations of n-th roots of
unity, and the certificates need them *exactly* -- floating point only
serves as a fast prefilter.  :class:`CycSum` is a sparse element of
Z[zeta_n] (exponent -> integer coefficient); recognizing integers is an
exact polynomial reduction modulo the n-th cyclotomic polynomial.

:class:`MultChar` is a character of a cyclic group of order n presented
through a fixed generator: callers hand it discrete logs, it hands back
monomial :class:`CycSum` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import cos, gcd, lcm, pi, sin

__all__ = [
    "CycSum",
    "MultChar",
    "NonIntegralError",
    "char_sum",
    "integer_part",
    "cyclotomic_polynomial",
    "quadratic_gauss_sum",
    "residue_periods",
]


class NonIntegralError(ValueError):
    """Raised when a cyclotomic sum expected to be an integer is not."""


# ---------------------------------------------------------------------------
# cyclotomic polynomials (exact integer coefficients, low degree first)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Exact division of integer polynomials, denominator monic."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert all(c == 0 for c in num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial (constant first)."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


# ---------------------------------------------------------------------------


class CycSum:
    """An exact integer combination of n-th roots of unity."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs: dict[int, int] | None = None):
        self.n = n
        self.c: dict[int, int] = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    e %= n
                    nv = self.c.get(e, 0) + v
                    if nv:
                        self.c[e] = nv
                    else:
                        self.c.pop(e, None)

    @classmethod
    def zero(cls, n: int) -> "CycSum":
        return cls(n)

    @classmethod
    def from_int(cls, n: int, v: int) -> "CycSum":
        return cls(n, {0: v})

    @classmethod
    def monomial(cls, n: int, e: int, coeff: int = 1) -> "CycSum":
        return cls(n, {e: coeff})

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other: "CycSum | int") -> "CycSum":
        if isinstance(other, int):
            return CycSum.from_int(self.n, other)
        if other.n != self.n:
            raise ValueError(f"mixed root orders {self.n} and {other.n}")
        return other

    def __add__(self, other: "CycSum | int") -> "CycSum":
        o = self._coerce(other)
        out = dict(self.c)
        for e, v in o.c.items():
            nv = out.get(e, 0) + v
            if nv:
                out[e] = nv
            else:
                out.pop(e, None)
        s = CycSum(self.n)
        s.c = out
        return s

    __radd__ = __add__

    def __neg__(self) -> "CycSum":
        s = CycSum(self.n)
        s.c = {e: -v for e, v in self.c.items()}
        return s

    def __sub__(self, other: "CycSum | int") -> "CycSum":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "CycSum":
        return (-self) + other

    def __mul__(self, other: "CycSum | int") -> "CycSum":
        if isinstance(other, int):
            s = CycSum(self.n)
            if other:
                s.c = {e: v * other for e, v in self.c.items()}
            return s
        o = self._coerce(other)
        n = self.n
        out: dict[int, int] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in o.c.items():
                e = e1 + e2
                if e >= n:
                    e -= n
                nv = out.get(e, 0) + v1 * v2
                if nv:
                    out[e] = nv
                else:
                    out.pop(e, None)
        s = CycSum(n)
        s.c = out
        return s

    __rmul__ = __mul__

    def conjugate(self) -> "CycSum":
        s = CycSum(self.n)
        s.c = {(-e) % self.n: v for e, v in self.c.items()}
        return s

    def rescale_to(self, m: int) -> "CycSum":
        """Rewrite over Z[zeta_m] where n | m."""
        if m % self.n:
            raise ValueError(f"cannot embed root order {self.n} into {m}")
        f = m // self.n
        s = CycSum(m)
        s.c = {e * f: v for e, v in self.c.items()}
        return s

    # -- evaluation and exact reduction --------------------------------------

    def evaluate(self) -> complex:
        n = self.n
        re = sum(v * cos(2 * pi * e / n) for e, v in self.c.items())
        im = sum(v * sin(2 * pi * e / n) for e, v in self.c.items())
        return complex(re, im)

    def _dense(self) -> list[int]:
        out = [0] * self.n
        for e, v in self.c.items():
            out[e] = v
        return out

    def reduced(self) -> tuple[int, ...]:
        """Canonical coefficients modulo the n-th cyclotomic polynomial."""
        phi = cyclotomic_polynomial(self.n)
        deg = len(phi) - 1
        a = self._dense()
        for i in range(len(a) - 1, deg - 1, -1):
            c = a[i]
            if c:
                a[i] = 0
                for j in range(deg):
                    a[i - deg + j] -= c * phi[j]
        return tuple(a[:deg])

    def is_zero(self) -> bool:
        if not self.c:
            return True
        return all(c == 0 for c in self.reduced())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return (self - other).is_zero()
        if not isinstance(other, CycSum):
            return NotImplemented
        m = lcm(self.n, other.n)
        return (self.rescale_to(m) - other.rescale_to(m)).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:  # pragma: no cover
        if not self.c:
            return f"CycSum({self.n}, 0)"
        terms = " + ".join(f"{v}*z{self.n}^{e}" for e, v in sorted(self.c.items()))
        return f"CycSum({self.n}, {terms})"


def integer_part(v: CycSum) -> int:
    """The integer a cyclotomic sum equals, established exactly.

    A float evaluation prefilters (tolerance 1e-6), then the claim
    v == c is checked by exact reduction modulo the cyclotomic
    polynomial.  Raises :class:`NonIntegralError` otherwise.
    """
    z = v.evaluate()
    c = round(z.real)
    if abs(z.real - c) > 1e-6 or abs(z.imag) > 1e-6:
        raise NonIntegralError(f"sum evaluates to {z}, not an integer")
    if not (v - c).is_zero():
        raise NonIntegralError("float value near an integer but reduction is nonzero")
    return c


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultChar:
    """Character a -> zeta_n^(j a) of a cyclic group written in dlogs."""

    n: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % self.n)

    def __call__(self, a: int) -> CycSum:
        return CycSum.monomial(self.n, self.j * a)

    def at(self, a: int, root_order: int | None = None) -> CycSum:
        """Value as a CycSum, optionally over a larger root order."""
        if root_order is None or root_order == self.n:
            return self(a)
        if root_order % self.n:
            raise ValueError("root order must be a multiple of the character order group")
        return CycSum.monomial(root_order, self.j * a * (root_order // self.n))

    @property
    def order(self) -> int:
        return self.n // gcd(self.n, self.j)

    @property
    def is_trivial(self) -> bool:
        return self.j == 0

    def inverse(self) -> "MultChar":
        return MultChar(self.n, -self.j)

    def is_trivial_on_power_subgroup(self, d: int) -> bool:
        """True iff the character kills the subgroup generated by g^d."""
        return (self.j * d) % self.n == 0


def char_sum(chi: MultChar, exponents, root_order: int | None = None) -> CycSum:
    """Sum of character values over a subset given by discrete logs."""
    m = root_order or chi.n
    f = m // chi.n
    if m % chi.n:
        raise ValueError("root order must be a multiple of the character group order")
    out = CycSum(m)
    acc: dict[int, int] = {}
    for a in exponents:
        e = (chi.j * a * f) % m
        acc[e] = acc.get(e, 0) + 1
    out.c = {e: v for e, v in acc.items() if v}
    return out


# ---------------------------------------------------------------------------
# quadratic Gauss sums (exact, used for the half-discrete-series values)


@lru_cache(maxsize=None)
def residue_periods(p: int) -> tuple[CycSum, CycSum]:
    """The two Gaussian periods: sums of zeta_p over squares / non-squares."""
    squares = {pow(a, 2, p) for a in range(1, p)}
    eta0 = CycSum(p, {e: 1 for e in squares})
    eta1 = CycSum(p, {e: 1 for e in range(1, p) if e not in squares})
    return eta0, eta1


def quadratic_gauss_sum(p: int) -> CycSum:
    """sum_a legendre(a) zeta_p^a; squares to (-1)^((p-1)/2) p."""
    eta0, eta1 = residue_periods(p)
    return eta0 - eta1
