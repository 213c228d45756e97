"""Exact roots of unity and exact cyclotomic sums.

A ``Phase`` is exp(2*pi*i * k/N) stored as the reduced fraction k/N of a full
turn. All phase arithmetic is additive in the exponent; nothing here ever
touches floating point except the explicit ``complex()`` conversion.

Sums of phases (partition functions) live in ``CyclotomicSum``: a formal
rational combination of N-th roots of unity, canonicalized by reduction mod
the N-th cyclotomic polynomial so that equality and zero tests are exact.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = ["Phase", "ONE", "MINUS_ONE", "CyclotomicSum", "cyclotomic_polynomial"]


class Phase:
    """exp(2*pi*i * k/N), kept as the reduced fraction k/N.

    >>> Phase(1, 4) * Phase(1, 4)
    Phase(1, 2)
    >>> Phase(3, 6)
    Phase(1, 2)
    >>> Phase(1, 3).inverse()
    Phase(2, 3)
    >>> str(Phase(0, 5)), str(Phase(5, 20))
    ('0/1', '1/4')
    """

    __slots__ = ("k", "n")

    def __init__(self, k: int, n: int):
        if n <= 0:
            raise ValueError("phase modulus must be positive")
        k %= n
        g = gcd(k, n)
        if k == 0:
            self.k, self.n = 0, 1
        else:
            self.k, self.n = k // g, n // g

    def __mul__(self, other: "Phase") -> "Phase":
        m = self.n * other.n // gcd(self.n, other.n)
        return Phase(self.k * (m // self.n) + other.k * (m // other.n), m)

    def inverse(self) -> "Phase":
        return Phase(-self.k, self.n)

    def __truediv__(self, other: "Phase") -> "Phase":
        return self * other.inverse()

    def __pow__(self, e: int) -> "Phase":
        return Phase(self.k * e, self.n)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Phase) and self.k == other.k and self.n == other.n

    def __hash__(self):
        return hash((self.k, self.n))

    @property
    def is_one(self) -> bool:
        return self.k == 0

    def exponent(self) -> Fraction:
        """The fraction k/N of a full turn."""
        return Fraction(self.k, self.n)

    def numerator_mod(self, n: int) -> int:
        """The exponent rescaled to modulus n; n must be a multiple of the order.

        >>> Phase(1, 2).numerator_mod(4)
        2
        """
        if n % self.n:
            raise ValueError(f"phase of order {self.n} has no exponent mod {n}")
        return self.k * (n // self.n) % n

    def __complex__(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.k / self.n)

    def __str__(self) -> str:
        return f"{self.k}/{self.n}"

    def __repr__(self) -> str:
        return f"Phase({self.k}, {self.n})"


ONE = Phase(0, 1)
MINUS_ONE = Phase(1, 2)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first.

    Computed by exact division of x^n - 1 by Phi_d for proper divisors d.

    >>> cyclotomic_polynomial(1), cyclotomic_polynomial(2)
    ((-1, 1), (1, 1))
    >>> cyclotomic_polynomial(4)
    (1, 0, 1)
    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d:
            continue
        phi_d = cyclotomic_polynomial(d)
        poly = _poly_divide_exact(poly, list(phi_d))
    return tuple(poly)


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, constant term first.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q, r = divmod(c, den[-1])
        if r:
            raise ArithmeticError("division is not exact")
        out[i] = q
        for j, dc in enumerate(den):
            num[i + j] -= q * dc
    if any(num):
        raise ArithmeticError("division is not exact")
    return out


class CyclotomicSum:
    """Exact element of Q(zeta_n): rational coefficients on 1, x, .., x^(phi(n)-1)
    with x = exp(2*pi*i/n), reduced mod the n-th cyclotomic polynomial.

    >>> s = CyclotomicSum.from_phase(Phase(1, 3)) + CyclotomicSum.from_phase(Phase(2, 3))
    >>> s == CyclotomicSum.rational(-1)
    True
    >>> (CyclotomicSum.rational(Fraction(1, 2)) * 4).rational_value()
    Fraction(2, 1)
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        self.order = order
        phi = len(cyclotomic_polynomial(order)) - 1
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > phi:
            cs = _reduce_mod_cyclotomic(cs, order)
        cs += [Fraction(0)] * (phi - len(cs))
        self.coeffs = tuple(cs)

    @classmethod
    def rational(cls, value) -> "CyclotomicSum":
        return cls(1, [Fraction(value)])

    @classmethod
    def zero(cls) -> "CyclotomicSum":
        return cls.rational(0)

    @classmethod
    def from_phase(cls, p: Phase) -> "CyclotomicSum":
        coeffs = [Fraction(0)] * (p.k + 1)
        coeffs[p.k] = Fraction(1)
        return cls(p.n, coeffs)

    def _to_order(self, order: int) -> list[Fraction]:
        # Re-express on the n-th roots for a multiple n of self.order.
        step = order // self.order
        out = [Fraction(0)] * order
        for i, c in enumerate(self.coeffs):
            out[i * step] += c
        return out

    def _pair(self, other: "CyclotomicSum"):
        n = self.order * other.order // gcd(self.order, other.order)
        return n, self._to_order(n), other._to_order(n)

    def __add__(self, other) -> "CyclotomicSum":
        if not isinstance(other, CyclotomicSum):
            other = CyclotomicSum.rational(other)
        n, a, b = self._pair(other)
        return CyclotomicSum(n, [x + y for x, y in zip(a, b)])

    def __sub__(self, other) -> "CyclotomicSum":
        return self + (other * -1 if isinstance(other, CyclotomicSum) else CyclotomicSum.rational(-Fraction(other)))

    def __mul__(self, other) -> "CyclotomicSum":
        if isinstance(other, Phase):
            other = CyclotomicSum.from_phase(other)
        if not isinstance(other, CyclotomicSum):
            f = Fraction(other)
            return CyclotomicSum(self.order, [c * f for c in self.coeffs])
        n, a, b = self._pair(other)
        prod = [Fraction(0)] * (2 * n)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicSum(n, prod)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicSum.rational(other)
        if not isinstance(other, CyclotomicSum):
            return NotImplemented
        n, a, b = self._pair(other)
        return _reduce_mod_cyclotomic(a, n) == _reduce_mod_cyclotomic(b, n)

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("sum is irrational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __complex__(self) -> complex:
        x = cmath.exp(2j * cmath.pi / self.order)
        return sum((complex(c) * x**i for i, c in enumerate(self.coeffs)), 0j)

    def __repr__(self):
        return f"CyclotomicSum(order={self.order}, coeffs={[str(c) for c in self.coeffs]})"


def _reduce_mod_cyclotomic(coeffs: list[Fraction], n: int) -> list[Fraction]:
    phi = list(cyclotomic_polynomial(n))
    deg = len(phi) - 1
    cs = list(coeffs)
    # First fold exponents mod n (x^n = 1), then divide by Phi_n.
    if len(cs) > n:
        folded = [Fraction(0)] * n
        for i, c in enumerate(cs):
            folded[i % n] += c
        cs = folded
    for i in range(len(cs) - 1, deg - 1, -1):
        c = cs[i]
        if c:
            for j in range(deg + 1):
                cs[i - deg + j] -= c * phi[j]
    cs = cs[:deg]
    cs += [Fraction(0)] * (deg - len(cs))
    return cs
