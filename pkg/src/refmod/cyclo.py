"""Exact arithmetic in cyclotomic fields Q(zeta_M).

CycNum is the single scalar type used everywhere in this package: roots of
unity e(a/b), square roots of positive integers (via quadratic Gauss sums),
Legendre/Kronecker symbols and the various unitary multipliers all live in
some Q(zeta_M).  Values are stored as sparse rational coefficient maps over
the power basis 1, z, ..., z^(phi(M)-1) reduced modulo the M-th cyclotomic
polynomial, so equality of reduced forms at a common order decides equality
exactly.

Also hosts the small number-theory helpers (factorization, divisors, totient,
Kronecker symbol) shared by the rest of the package.  Everything here is pure
and stdlib-only.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

__all__ = [
    "CycNum",
    "root_of_unity",
    "sqrt_pos",
    "kronecker",
    "cyc",
    "factorize",
    "divisors",
    "euler_phi",
    "prime_factors",
    "is_prime",
    "squarefree_part",
]


# ---------------------------------------------------------------------------
# elementary number theory


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {p: exponent}. Trial division."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    phi = n
    for p in factorize(n):
        phi = phi // p * (p - 1)
    return phi


def squarefree_part(n: int) -> int:
    """The squarefree kernel m with n = s^2 * m (n >= 1)."""
    m = 1
    for p, e in factorize(n).items():
        if e % 2:
            m *= p
    return m


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extending the Jacobi symbol to all integers.

    Conventions: (a/0) = 1 iff a = +-1 else 0; (a/-1) = -1 iff a < 0;
    (a/2) = 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # peel off factors of 2 from n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    # Jacobi symbol (a/n) for odd n >= 1 by quadratic reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


# ---------------------------------------------------------------------------
# cyclotomic polynomials and reduction tables


def _polydiv_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division of integer polynomials, den monic; remainder must vanish.
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        quot[i - dd] = c
        for k in range(dd + 1):
            num[i - dd + k] -= c * den[k]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_phi) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in divisors(n):
        if d < n:
            num = _polydiv_exact(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _power_rows(n: int) -> tuple[tuple[int, ...], ...]:
    # rows[j] = coefficients of x^j reduced mod Phi_n, for 0 <= j < n.
    phi = len(cyclotomic_poly(n)) - 1
    rows: list[tuple[int, ...]] = []
    for j in range(min(phi, n)):
        row = [0] * phi
        row[j] = 1
        rows.append(tuple(row))
    c = cyclotomic_poly(n)
    for _ in range(phi, n):
        prev = rows[-1]
        top = prev[phi - 1]
        row = [0] + list(prev[: phi - 1])
        if top:
            for t in range(phi):
                row[t] -= top * c[t]
        rows.append(tuple(row))
    return tuple(rows)


_ZERO = Fraction(0)


def _reduce(order: int, raw: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    """Reduce exponent->coefficient data mod Phi_order, then demote the order.

    Demotion: if every surviving exponent shares a factor g with the order,
    the value lies in Q(zeta_{order/g}); rewrite there.  This is a sufficient
    condition only — equality testing promotes to a common order first.
    """
    while True:
        phi = euler_phi(order)
        rows = None
        acc: list[Fraction] = [_ZERO] * phi
        for j, v in raw.items():
            if not v:
                continue
            j %= order
            if j < phi:
                acc[j] += v
            else:
                if rows is None:
                    rows = _power_rows(order)
                for t, r in enumerate(rows[j]):
                    if r:
                        acc[t] += r * v
        coeffs = {j: v for j, v in enumerate(acc) if v}
        if not coeffs:
            return 1, {}
        g = order
        for j in coeffs:
            g = gcd(g, j)
            if g == 1:
                return order, coeffs
        order //= g
        raw = {j // g: v for j, v in coeffs.items()}


# ---------------------------------------------------------------------------
# CycNum


class CycNum:
    """An exact element of Q(zeta_order), zeta_order = e(1/order).

    Immutable.  coeffs maps basis exponents (0 <= j < phi(order)) to nonzero
    Fractions.  Arithmetic promotes operands to the lcm order; results are
    reduced and (when cheap) demoted, so rationals always carry order 1.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: dict[int, Fraction], *, _reduced: bool = False):
        if order < 1:
            raise ValueError(f"order must be positive, got {order}")
        if not _reduced:
            order, coeffs = _reduce(order, {j: Fraction(v) for j, v in coeffs.items()})
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(x) -> "CycNum":
        v = Fraction(x)
        return CycNum(1, {0: v} if v else {}, _reduced=True)

    # -- predicates & conversions -------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.order == 1

    def rational_value(self) -> Fraction:
        if self.order != 1:
            raise ValueError(f"not rational: {self}")
        return self.coeffs.get(0, _ZERO)

    def is_integer(self) -> bool:
        return self.order == 1 and self.coeffs.get(0, _ZERO).denominator == 1

    def complex_value(self) -> complex:
        """Numeric embedding zeta_order -> exp(2*pi*i/order). Diagnostics only."""
        z = 0j
        for j, v in self.coeffs.items():
            z += float(v) * cmath.exp(2j * cmath.pi * j / self.order)
        return z

    def approx_str(self, digits: int = 12) -> str:
        z = self.complex_value()
        if abs(z.imag) < 10 ** (-digits):
            return f"{z.real:.{digits}g}"
        return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"

    # -- arithmetic ----------------------------------------------------------

    def _promoted_raw(self, n: int) -> dict[int, Fraction]:
        k = n // self.order
        if k == 1:
            return dict(self.coeffs)
        return {j * k: v for j, v in self.coeffs.items()}

    @staticmethod
    def _coerce(x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNum.from_rational(x)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "CycNum":
        other = CycNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        n = lcm(self.order, other.order)
        raw = self._promoted_raw(n)
        for j, v in other._promoted_raw(n).items():
            raw[j] = raw.get(j, _ZERO) + v
        return CycNum(n, raw)

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum(self.order, {j: -v for j, v in self.coeffs.items()}, _reduced=True)

    def __sub__(self, other) -> "CycNum":
        other = CycNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CycNum":
        return (-self) + other

    def __mul__(self, other) -> "CycNum":
        other = CycNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return CycNum.from_rational(0)
        if self.order == 1:
            c = self.coeffs[0]
            return CycNum(
                other.order, {j: c * v for j, v in other.coeffs.items()}, _reduced=True
            )
        if other.order == 1:
            c = other.coeffs[0]
            return CycNum(
                self.order, {j: c * v for j, v in self.coeffs.items()}, _reduced=True
            )
        n = lcm(self.order, other.order)
        a = self._promoted_raw(n)
        b = other._promoted_raw(n)
        raw: dict[int, Fraction] = {}
        for j1, v1 in a.items():
            for j2, v2 in b.items():
                j = (j1 + j2) % n
                raw[j] = raw.get(j, _ZERO) + v1 * v2
        return CycNum(n, raw)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic value")
        if self.order == 1:
            return CycNum.from_rational(1 / self.coeffs[0])
        n = self.order
        phi = euler_phi(n)
        f = [Fraction(c) for c in cyclotomic_poly(n)]
        g = [self.coeffs.get(j, _ZERO) for j in range(phi)]
        # extended Euclid in Q[x]: maintain u with u*g = r mod Phi_n
        r0, r1 = f, g
        u0, u1 = [_ZERO], [Fraction(1)]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, u0, u1 = r1, r0, u1, u0
                continue
            c = r0[d0] / r1[d1]
            shift = d0 - d1
            for k in range(d1 + 1):
                r0[k + shift] -= c * r1[k]
            if len(u0) < len(u1) + shift:
                u0 = u0 + [_ZERO] * (len(u1) + shift - len(u0))
            for k in range(len(u1)):
                u0[k + shift] -= c * u1[k]
        if deg(r1) != 0:
            raise ZeroDivisionError("value is a zero divisor mod Phi_n (not reduced?)")
        scale = 1 / r1[0]
        return CycNum(n, {j: scale * v for j, v in enumerate(u1) if v})

    def __truediv__(self, other) -> "CycNum":
        other = CycNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.order == 1:
            if other.is_zero():
                raise ZeroDivisionError("division by zero")
            c = 1 / other.coeffs[0]
            return CycNum(self.order, {j: c * v for j, v in self.coeffs.items()}, _reduced=True)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CycNum":
        return CycNum._coerce(other) / self

    def __pow__(self, k: int) -> "CycNum":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def galois(self, a: int) -> "CycNum":
        """Apply the automorphism zeta -> zeta^a (requires gcd(a, order) = 1)."""
        n = self.order
        if gcd(a, n) != 1:
            raise ValueError(f"galois exponent {a} not coprime to order {n}")
        return CycNum(n, {(j * a) % n: v for j, v in self.coeffs.items()})

    def conj(self) -> "CycNum":
        """Complex conjugation zeta -> zeta^{-1}."""
        if self.order == 1:
            return self
        return self.galois(self.order - 1)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = CycNum._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        return (self - other).is_zero()

    __hash__ = None  # equality crosses orders; hashing would be inconsistent

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- display -------------------------------------------------------------

    def __str__(self) -> str:
        if self.order == 1:
            return str(self.coeffs.get(0, _ZERO))
        parts = []
        for j in sorted(self.coeffs):
            v = self.coeffs[j]
            if j == 0:
                body = str(abs(v))
            else:
                zn = f"z{self.order}" if j == 1 else f"z{self.order}^{j}"
                body = zn if abs(v) == 1 else f"{abs(v)}*{zn}"
            if not parts:
                parts.append(body if v > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if v > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"CycNum({self})"


# ---------------------------------------------------------------------------
# public constructors


def cyc(x) -> CycNum:
    """Coerce an int or Fraction to CycNum."""
    if isinstance(x, CycNum):
        return x
    return CycNum.from_rational(x)


ZERO = CycNum.from_rational(0)
ONE = CycNum.from_rational(1)


def root_of_unity(a: int, b: int) -> CycNum:
    """e(a/b) = exp(2*pi*i*a/b); depends only on a mod b."""
    if b < 1:
        raise ValueError(f"denominator must be positive, got {b}")
    a %= b
    g = gcd(a, b)
    if g:
        a, b = a // g, b // g
    if b == 1:
        return ONE
    return CycNum(b, {a: Fraction(1)})


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CycNum:
    if p == 2:
        # z8 + z8^-1
        return CycNum(8, {1: Fraction(1), 7: Fraction(1)})
    # quadratic Gauss sum: sum (h/p) e(h/p) = sqrt(p) for p=1(4), i*sqrt(p) for p=3(4)
    g = CycNum(p, {h: Fraction(kronecker(h, p)) for h in range(1, p)})
    if p % 4 == 1:
        return g
    return root_of_unity(-1, 4) * g


@lru_cache(maxsize=None)
def sqrt_pos(n: int) -> CycNum:
    """The positive square root of n >= 1, exactly (lives in Q(zeta_{4n}))."""
    if n < 1:
        raise ValueError(f"sqrt_pos expects n >= 1, got {n}")
    s = 1
    root = ONE
    for p, e in factorize(n).items():
        s *= p ** (e // 2)
        if e % 2:
            root = root * _sqrt_prime(p)
    return cyc(s) * root
