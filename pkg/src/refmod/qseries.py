"""Truncated formal q-expansions with fractional exponents.

QExp represents sums  sum_x  c_x * q^x  with exact rational exponents x and
cyclotomic coefficients c_x, together with an explicit precision bound: the
expansion is exact for all exponents < prec, and asking for a coefficient at
or beyond prec raises PrecisionError rather than silently returning 0.

Exponents are arbitrary Fractions (the "width" — the lcm of their
denominators — is derived, not stored).  prec may be math.inf for exactly
known Laurent polynomials.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .cyclo import CycNum, cyc, root_of_unity

__all__ = ["QExp", "PrecisionError"]

_INF = math.inf


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


class PrecisionError(Exception):
    """Requested a coefficient at an exponent >= the tracked precision."""


def _as_coeff(v) -> CycNum:
    if isinstance(v, CycNum):
        return v
    return cyc(v)


def _as_exp(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QExp:
    """Immutable sparse q-expansion, exact below `prec`."""

    __slots__ = ("terms", "prec")

    def __init__(self, terms: dict | Iterable = (), prec=_INF):
        data: dict[Fraction, CycNum] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for x, v in items:
            x = _as_exp(x)
            v = _as_coeff(v)
            if v.is_zero():
                continue
            if x in data:
                v = data[x] + v
                if v.is_zero():
                    del data[x]
                    continue
            data[x] = v
        if not _is_inf(prec):
            prec = _as_exp(prec)
            data = {x: v for x, v in data.items() if x < prec}
        object.__setattr__(self, "terms", data)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("QExp is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(prec=_INF) -> "QExp":
        return QExp((), prec)

    @staticmethod
    def one(prec=_INF) -> "QExp":
        return QExp({Fraction(0): cyc(1)}, prec)

    @staticmethod
    def monomial(coeff, exponent, prec=_INF) -> "QExp":
        return QExp({_as_exp(exponent): _as_coeff(coeff)}, prec)

    # -- inspection -----------------------------------------------------------

    def coeff(self, x) -> CycNum:
        """Coefficient at q^x; exact (0 if absent) only for x < prec."""
        x = _as_exp(x)
        if x >= self.prec:
            raise PrecisionError(f"coefficient at q^{x} requested, prec is {self.prec}")
        return self.terms.get(x, cyc(0))

    def exponents(self) -> list[Fraction]:
        return sorted(self.terms)

    def valuation(self):
        """Least exponent with nonzero coefficient (prec if none is stored)."""
        return min(self.terms) if self.terms else self.prec

    def leading(self) -> tuple[Fraction, CycNum]:
        if not self.terms:
            raise ValueError("zero expansion has no leading term")
        x = min(self.terms)
        return x, self.terms[x]

    def width(self) -> int:
        w = 1
        for x in self.terms:
            w = w * x.denominator // math.gcd(w, x.denominator)
        return w

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, prec) -> "QExp":
        prec = prec if _is_inf(prec) else _as_exp(prec)
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return QExp(self.terms, prec)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "QExp":
        if not isinstance(other, QExp):
            other = QExp.monomial(other, 0)
        data = dict(self.terms)
        for x, v in other.terms.items():
            data[x] = data[x] + v if x in data else v
        return QExp(data.items(), min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self) -> "QExp":
        return QExp({x: -v for x, v in self.terms.items()}, self.prec)

    def __sub__(self, other) -> "QExp":
        if not isinstance(other, QExp):
            other = QExp.monomial(other, 0)
        return self + (-other)

    def __rsub__(self, other) -> "QExp":
        return (-self) + other

    def __mul__(self, other) -> "QExp":
        if not isinstance(other, QExp):
            c = _as_coeff(other)
            return QExp({x: c * v for x, v in self.terms.items()}, self.prec)
        # exactness: f known below P_f, g below P_g  =>  fg known below
        # min(P_f + val(g), P_g + val(f)); val of an empty expansion is its prec.
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        data: dict[Fraction, CycNum] = {}
        for x1, v1 in self.terms.items():
            for x2, v2 in other.terms.items():
                x = x1 + x2
                if x >= prec:
                    continue
                v = v1 * v2
                data[x] = data[x] + v if x in data else v
        return QExp(data.items(), prec)

    __rmul__ = __mul__

    def shift(self, delta) -> "QExp":
        """Multiply by q^delta."""
        delta = _as_exp(delta)
        return QExp({x + delta: v for x, v in self.terms.items()},
                    self.prec if _is_inf(self.prec) else self.prec + delta)

    def inverse(self) -> "QExp":
        """Multiplicative inverse; requires an invertible leading coefficient."""
        if not self.terms:
            raise ZeroDivisionError("inverse of zero expansion")
        v0, a0 = self.leading()
        prec = self.prec if _is_inf(self.prec) else self.prec - 2 * v0
        # normalize to 1 + u with val(u) > 0
        a0inv = a0.inverse()
        u = {x - v0: a0inv * v for x, v in self.terms.items() if x != v0}
        if not u:
            return QExp.monomial(a0inv, -v0, prec)
        target = prec + v0 if not _is_inf(prec) else None
        if target is None:
            # exact inverse of a polynomial only terminates for monomials
            raise PrecisionError("inverse of a multi-term expansion needs finite prec")
        # b * (1+u) = 1 : b[e] = -sum_{0 < d <= e} u[d] b[e-d]
        b: dict[Fraction, CycNum] = {Fraction(0): cyc(1)}
        grid = sorted(u)
        frontier = [Fraction(0)]
        known = {Fraction(0)}
        idx = 0
        while idx < len(frontier):
            e = frontier[idx]
            idx += 1
            for d in grid:
                x = e + d
                if x >= target or x in known:
                    continue
                known.add(x)
                frontier.append(x)
        for e in sorted(known):
            if e == 0:
                continue
            acc = cyc(0)
            for d in grid:
                rest = e - d
                if rest < 0:
                    break
                if rest in b:
                    acc = acc + u[d] * b[rest]
            acc = -acc
            if not acc.is_zero():
                b[e] = acc
        return QExp({x - v0: a0inv * v for x, v in b.items()}, prec)

    def __truediv__(self, other) -> "QExp":
        if not isinstance(other, QExp):
            c = _as_coeff(other)
            return self * c.inverse()
        return self * other.inverse()

    def __pow__(self, k: int) -> "QExp":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QExp.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def rescale_shift(self, r: int, s: int, t: int) -> "QExp":
        """Substitute tau -> (r*tau + s)/t:  a q^e  ->  a e(es/t) q^(er/t)."""
        if r < 1 or t < 1:
            raise ValueError("r and t must be positive")
        ratio = Fraction(r, t)
        data = {}
        for x, v in self.terms.items():
            phase = x * s / t
            data[x * ratio] = v * root_of_unity(phase.numerator, phase.denominator)
        prec = self.prec if _is_inf(self.prec) else self.prec * ratio
        return QExp(data.items(), prec)

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExp):
            other = QExp.monomial(other, 0)
        if self.prec != other.prec:
            return False
        return self.same_terms(other)

    __hash__ = None

    def same_terms(self, other: "QExp") -> bool:
        """Term-by-term equality, ignoring the precision bounds."""
        if set(self.terms) != set(other.terms):
            return False
        return all(v == other.terms[x] for x, v in self.terms.items())

    def agrees_below(self, other: "QExp", bound) -> bool:
        """Equality of all coefficients at exponents < bound (must be known)."""
        bound = bound if _is_inf(bound) else _as_exp(bound)
        if bound > self.prec or bound > other.prec:
            raise PrecisionError("agreement bound exceeds tracked precision")
        for x in set(self.terms) | set(other.terms):
            if x < bound and not (self.terms.get(x, cyc(0)) == other.terms.get(x, cyc(0))):
                return False
        return True

    # -- display ----------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for x in sorted(self.terms):
                c = str(self.terms[x])
                if " " in c:
                    c = f"({c})"
                if x == 0:
                    term = c
                else:
                    qp = "q" if x == 1 else (f"q^{x}" if x.denominator == 1 and x >= 0 else f"q^({x})")
                    term = qp if c == "1" else (f"-{qp}" if c == "-1" else f"{c} * {qp}")
                if parts and not term.startswith("-"):
                    parts.append(f"+ {term}")
                elif parts:
                    parts.append(f"- {term[1:]}")
                else:
                    parts.append(term)
            body = " ".join(parts)
        if _is_inf(self.prec):
            return body
        p = self.prec
        op = f"O(q^{p})" if p.denominator == 1 and p >= 0 else f"O(q^({p}))"
        return f"{body} + {op}" if body != "0" else op

    def __repr__(self) -> str:
        return f"QExp({self})"
