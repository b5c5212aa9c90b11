"""Eta quotients: expansions at infinity and at arbitrary cusps.

An eta quotient prod_{delta | N} eta(delta*tau)^(r_delta) is specified by a
level N and an exponent map.  Besides the expansion at infinity, the module
computes the exact expansion of the quotient slashed by any integral matrix
whose lower row is admissible for the level: the result splits into a
cyclotomic prefactor and a q-series with rational exponents.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .cyclo import CycNum, cyc, divisors, kronecker, root_of_unity, sqrt_pos
from .qseries import QExp

__all__ = [
    "EtaQuotient",
    "eta_series",
    "multiplier",
    "expand_at_cusp",
    "character_check",
    "cusp_orders",
    "is_cusp_form",
]


def _entries(M) -> tuple[int, int, int, int]:
    """Accept a flat (a, b, c, d) or nested ((a, b), (c, d)) integer matrix."""
    seq = list(M)
    if len(seq) == 2:
        (a, b), (c, d) = seq
    else:
        a, b, c, d = seq
    a, b, c, d = int(a), int(b), int(c), int(d)
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    return a, b, c, d


def _pentagonal(depth: Fraction, alpha: Fraction):
    """Exponent/sign pairs of prod (1 - q^(alpha n)) with exponent < depth."""
    yield Fraction(0), 1
    k = 1
    while True:
        emitted = False
        for m in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            x = alpha * m
            if x < depth:
                yield x, -1 if k % 2 else 1
                emitted = True
        if not emitted:
            return
        k += 1


def eta_series(alpha: Fraction, depth: Fraction) -> QExp:
    """Expansion of eta(alpha*tau) with depth terms beyond the leading one."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lead = alpha / 24
    terms = {lead + x: cyc(s) for x, s in _pentagonal(depth, alpha)}
    return QExp(terms.items(), lead + depth)


class EtaQuotient:
    """prod_{delta | N} eta(delta*tau)^(r_delta), delta running over level divisors."""

    __slots__ = ("level", "exps")

    def __init__(self, level: int, exps):
        level = int(level)
        if level < 1:
            raise ValueError("level must be positive")
        clean = {}
        for d, r in dict(exps).items():
            d, r = int(d), int(r)
            if level % d:
                raise ValueError(f"{d} does not divide the level {level}")
            if r:
                clean[d] = r
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "exps", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("EtaQuotient is immutable")

    @staticmethod
    def parse(text: str, level: int | None = None) -> "EtaQuotient":
        body = text.strip()
        m = re.fullmatch(r"eta\{(.*)\}", body)
        if m:
            body = m.group(1).strip()
        exps = {}
        for tok in body.split():
            m = re.fullmatch(r"(\d+)\^(-?\d+)", tok)
            if not m:
                raise ValueError(f"bad eta-quotient token {tok!r}")
            d = int(m.group(1))
            if d in exps:
                raise ValueError(f"repeated base {d}")
            exps[d] = int(m.group(2))
        if not exps:
            raise ValueError("empty eta quotient")
        if level is None:
            level = math.lcm(*exps)
        return EtaQuotient(level, exps)

    def __str__(self) -> str:
        return " ".join(f"{d}^{r}" for d, r in self.exps.items())

    def __repr__(self) -> str:
        return f"EtaQuotient({self.level}, {self.exps})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EtaQuotient)
            and self.level == other.level
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.level, tuple(self.exps.items())))

    def weight(self) -> Fraction:
        return Fraction(sum(self.exps.values()), 2)

    def expand(self, prec) -> QExp:
        """Expansion at infinity; leading exponent (1/24) sum delta r_delta."""
        prec = Fraction(prec)
        val = sum(Fraction(d * r, 24) for d, r in self.exps.items())
        depth = prec - val
        if depth <= 0:
            return QExp((), prec)
        out = QExp.one()
        for d, r in self.exps.items():
            out = out * eta_series(Fraction(d), depth) ** r
        return out


def multiplier(M) -> CycNum:
    """eta(M tau) = multiplier(M) * sqrt(c tau + d) * eta(tau), principal branch."""
    a, b, c, d = _entries(M)
    if c < 0:
        raise ValueError("lower-left entry must be nonnegative; pass -M instead")
    if c == 0:
        # translation: M tau = tau + b*d, sqrt(d) = 1 or i
        eps = root_of_unity(b * d, 24)
        return eps if d == 1 else eps * root_of_unity(-1, 4)
    if c % 2:
        return kronecker(d, c) * root_of_unity(
            -3 * c + b * d * (1 - c * c) + c * (a + d), 24
        )
    return kronecker(c, d) * root_of_unity(
        3 * d - 3 + a * c * (1 - d * d) + d * (b - c), 24
    )


def expand_at_cusp(E: EtaQuotient, M, prec) -> tuple[CycNum, QExp]:
    """E|_k M as (prefactor, series) for M = (a,b;c,d), c > 0, N/(c,N) | d.

    Requires even sum of exponents (integer weight), so the sqrt(c tau + d)
    automorphy factors cancel exactly against the weight-k slash.
    """
    a, b, c, d = _entries(M)
    N = E.level
    if c <= 0:
        raise ValueError("need c > 0")
    cp = N // math.gcd(c, N)
    if d % cp:
        raise ValueError(f"need d divisible by {cp} for level {N}")
    if sum(E.exps.values()) % 2:
        raise ValueError("odd exponent sum: weight is not an integer")
    prec = Fraction(prec)
    val = Fraction(0)
    plan = []
    for delta, r in E.exps.items():
        g = math.gcd(delta, c)
        t = math.gcd(delta, cp)
        if g * t != delta:
            raise ValueError(f"cannot split eta({delta} tau) over c={c} at level {N}")
        plan.append((delta, r, g, t))
        val += Fraction(g, t) * Fraction(r, 24)
    depth = prec - val
    prefactor = cyc(1)
    series = QExp.one()
    for delta, r, g, t in plan:
        A = (a * t, b * g, c // g, d * g // delta)
        prefactor = prefactor * multiplier(A) ** r * sqrt_pos(t) ** (-r)
        if depth > 0:
            series = series * eta_series(Fraction(g, t), depth) ** r
    if depth <= 0:
        series = QExp((), prec)
    return prefactor, series


def cusp_orders(E: EtaQuotient) -> dict[int, Fraction]:
    """Vanishing order of E|_k M_{a/c} per cusp class c | N (squarefree N)."""
    N = E.level
    if any(N % (p * p) == 0 for p in range(2, int(N**0.5) + 1)):
        raise ValueError("cusp classification requires squarefree level")
    out = {}
    for c in divisors(N):
        cp = N // c
        out[c] = sum(
            Fraction(math.gcd(delta, c), math.gcd(delta, cp)) * Fraction(r, 24)
            for delta, r in E.exps.items()
        )
    return out


def is_cusp_form(E: EtaQuotient) -> bool:
    return all(v > 0 for v in cusp_orders(E).values())


def character_check(E: EtaQuotient):
    """(modular on Gamma_1(N), weight, character exponent x with chi(M) = e(b x)).

    Modularity needs (N/24) sum delta r_delta and (N/24) sum r_delta/delta
    integral and an even exponent sum.
    """
    N = E.level
    s1 = sum(Fraction(N * d, 24) * r for d, r in E.exps.items())
    s2 = sum(Fraction(N, 24 * d) * r for d, r in E.exps.items())
    ok = (
        s1.denominator == 1
        and s2.denominator == 1
        and sum(E.exps.values()) % 2 == 0
    )
    x = sum(Fraction(d * r, 24) for d, r in E.exps.items()) % 1
    return ok, E.weight(), x
