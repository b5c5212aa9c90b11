"""Discriminant forms of squarefree level.

A squarefree-level discriminant form decomposes as an orthogonal sum of
Jordan components p^(+-n) over distinct primes, with the 2-adic part (if any)
of even type 2_II^(+-2n).  This module provides:

  * the symbol algebra (parsing "2_II^+10 3^-4", signatures, |D|, level),
  * a fixed explicit realization of each component as a quadratic form on
    (Z/p)^n, making elements enumerable with exact Q/Z-valued norms,
  * exact norm/order counting, both in closed form and by enumeration,
  * subgroup structure: D_c / D^c, isotropic subgroups, quotients H^perp/H,
  * root classes and the rank/sign constraints for lattices of signature
    (n, 2) that split two hyperbolic planes (one rescaled by the level).

Conventions fixed here and relied on elsewhere: an odd indecomposable p^(e1)
is generated by gamma with gamma^2/2 = a/p where (2a/p) = e, realized with
the smallest positive such a; 2_II^(+2) is the block u with q(x, y) = xy/2,
2_II^(-2) the block v with q(x, y) = (x^2 + xy + y^2)/2.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from .cyclo import (
    CycNum,
    cyc,
    divisors,
    factorize,
    is_prime,
    kronecker,
    root_of_unity,
    sqrt_pos,
)

__all__ = [
    "JordanSymbol",
    "DiscriminantForm",
    "DFElement",
    "component_count",
    "count_norm",
    "corresponds_to_roots",
    "splitting_constraints",
    "isotropic_subgroups",
    "quotient",
    "enumerate_symbols",
    "parse_lattice",
    "format_lattice",
]


# ---------------------------------------------------------------------------
# symbols


_COMP_RE = re.compile(r"^(\d+)(_II)?\^([+-])(\d+)$")


class JordanSymbol:
    """Jordan symbol of squarefree level: {prime: (rank, sign)}.

    The 2-adic component, when present, is implicitly of even type
    2_II^(+-n) with n even; odd 2-adic components do not occur at
    squarefree level.
    """

    __slots__ = ("components",)

    def __init__(self, components: dict[int, tuple[int, int]]):
        comps = {}
        for p in sorted(components):
            n, eps = components[p]
            if not is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
            if n < 1:
                raise ValueError(f"rank must be positive at p={p}")
            if eps not in (1, -1):
                raise ValueError(f"sign must be +-1 at p={p}")
            if p == 2 and n % 2:
                raise ValueError("even 2-adic components have even rank")
            comps[p] = (n, eps)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("JordanSymbol is immutable")

    @staticmethod
    def parse(text: str) -> "JordanSymbol":
        text = text.strip()
        if text in ("", "1"):
            return JordanSymbol({})
        comps: dict[int, tuple[int, int]] = {}
        for tok in text.split():
            m = _COMP_RE.match(tok)
            if not m:
                raise ValueError(f"bad Jordan component {tok!r}")
            p = int(m.group(1))
            if (p == 2) != bool(m.group(2)):
                raise ValueError(f"component {tok!r}: '_II' is for p=2 exactly")
            if p in comps:
                raise ValueError(f"repeated prime {p}")
            comps[p] = (int(m.group(4)), 1 if m.group(3) == "+" else -1)
        return JordanSymbol(comps)

    def __str__(self) -> str:
        if not self.components:
            return "1"
        parts = []
        for p, (n, eps) in self.components.items():
            tag = "_II" if p == 2 else ""
            parts.append(f"{p}{tag}^{'+' if eps == 1 else '-'}{n}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"JordanSymbol({self})"

    def __eq__(self, other) -> bool:
        return isinstance(other, JordanSymbol) and self.components == other.components

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.components.items())))

    def order(self) -> int:
        out = 1
        for p, (n, _) in self.components.items():
            out *= p**n
        return out

    def level(self) -> int:
        out = 1
        for p in self.components:
            out *= p
        return out

    def signature(self) -> int:
        """Signature mod 8; odd p^(en): -n(p-1) + 4[e=-1], 2_II^(en): 4[e=-1]."""
        s = 0
        for p, (n, eps) in self.components.items():
            k = 1 if eps == -1 else 0
            s += 4 * k if p == 2 else -n * (p - 1) + 4 * k
        return s % 8


def parse_lattice(text: str) -> tuple[int, JordanSymbol]:
    """Parse "II_{n,2}(<symbol>)"; bare "II_{n,2}" has trivial symbol."""
    m = re.match(r"^II_\{(\d+),2\}(?:\((.*)\))?$", text.strip())
    if not m:
        raise ValueError(f"bad lattice descriptor {text!r}")
    return int(m.group(1)), JordanSymbol.parse(m.group(2) or "")


def format_lattice(n: int, symbol: JordanSymbol) -> str:
    if not symbol.components:
        return f"II_{{{n},2}}"
    return f"II_{{{n},2}}({symbol})"


# ---------------------------------------------------------------------------
# closed-form norm counting


@lru_cache(maxsize=None)
def _smallest_gen(p: int, eps: int) -> int:
    # smallest a >= 1 with (2a/p) = eps
    a = 1
    while kronecker(2 * a, p) != eps:
        a += 1
    return a


def component_count(p: int, n: int, eps: int, j: int) -> int:
    """Number of elements of norm j/p mod 1 in the component p^(eps*n)."""
    if p == 2:
        j %= 2
        half = 2 ** (n - 1)
        corr = eps * 2 ** ((n - 2) // 2)
        return half + corr if j == 0 else half - corr
    j %= p
    if n % 2 == 0:
        sgn = eps * kronecker(-1, p) ** (n // 2)
        if j == 0:
            return p ** (n - 1) + sgn * (p ** (n // 2) - p ** ((n - 2) // 2))
        return p ** (n - 1) - sgn * p ** ((n - 2) // 2)
    if j == 0:
        return p ** (n - 1)
    sgn = eps * kronecker(-1, p) ** ((n - 1) // 2) * kronecker(2, p) * kronecker(j, p)
    return p ** (n - 1) + sgn * p ** ((n - 1) // 2)


# ---------------------------------------------------------------------------
# elements


class DFElement:
    """Element of a discriminant form: per-prime coordinate vectors."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent: "DiscriminantForm", coords: tuple[tuple[int, ...], ...]):
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("DFElement is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DFElement)
            and self.coords == other.coords
            and self.parent.symbol == other.parent.symbol
        )

    def __hash__(self) -> int:
        return hash(self.coords)

    def __add__(self, other: "DFElement") -> "DFElement":
        D = self.parent
        coords = tuple(
            tuple((a + b) % p for a, b in zip(xs, ys))
            for p, xs, ys in zip(D.primes, self.coords, other.coords)
        )
        return DFElement(D, coords)

    def __neg__(self) -> "DFElement":
        D = self.parent
        coords = tuple(
            tuple((-a) % p for a in xs) for p, xs in zip(D.primes, self.coords)
        )
        return DFElement(D, coords)

    def __sub__(self, other: "DFElement") -> "DFElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "DFElement":
        D = self.parent
        coords = tuple(
            tuple((k * a) % p for a in xs) for p, xs in zip(D.primes, self.coords)
        )
        return DFElement(D, coords)

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in xs) for xs in self.coords)

    def order(self) -> int:
        out = 1
        for p, xs in zip(self.parent.primes, self.coords):
            if any(xs):
                out *= p
        return out

    def norm(self) -> Fraction:
        """gamma^2/2 mod 1, in [0, 1)."""
        return self.parent.norm_of(self.coords)

    def bilin(self, other: "DFElement") -> Fraction:
        """The bilinear pairing (gamma, delta) mod 1, in [0, 1)."""
        return self.parent.bilin_of(self.coords, other.coords)

    def project(self, d: int) -> "DFElement":
        """Kill all components at primes not dividing d (projection D -> D_d)."""
        D = self.parent
        coords = tuple(
            xs if d % p == 0 else tuple(0 for _ in xs)
            for p, xs in zip(D.primes, self.coords)
        )
        return DFElement(D, coords)

    def __repr__(self) -> str:
        parts = []
        for p, xs in zip(self.parent.primes, self.coords):
            if any(xs):
                parts.append(f"{p}:{','.join(map(str, xs))}")
        return "DF(" + ("0" if not parts else " ".join(parts)) + ")"


class DiscriminantForm:
    """A realized discriminant form of squarefree level."""

    def __init__(self, symbol):
        if isinstance(symbol, str):
            symbol = JordanSymbol.parse(symbol)
        elif isinstance(symbol, dict):
            symbol = JordanSymbol(symbol)
        self.symbol: JordanSymbol = symbol
        self.primes: list[int] = sorted(symbol.components)
        self.ranks: dict[int, int] = {p: symbol.components[p][0] for p in self.primes}
        self.signs: dict[int, int] = {p: symbol.components[p][1] for p in self.primes}
        # realization: diagonal coefficients for odd p, u/v blocks for p=2
        self._diag: dict[int, tuple[int, ...]] = {}
        self._blocks: tuple[str, ...] = ()
        for p in self.primes:
            n, eps = symbol.components[p]
            if p == 2:
                self._blocks = ("u",) * (n // 2 - 1) + (("u",) if eps == 1 else ("v",))
            else:
                a_plus = _smallest_gen(p, 1)
                a_last = _smallest_gen(p, eps)
                self._diag[p] = (a_plus,) * (n - 1) + (a_last,)

    # -- basics ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscriminantForm) and self.symbol == other.symbol

    def __hash__(self) -> int:
        return hash(self.symbol)

    def __repr__(self) -> str:
        return f"DiscriminantForm({self.symbol})"

    def order(self) -> int:
        return self.symbol.order()

    def level(self) -> int:
        return self.symbol.level()

    def signature(self) -> int:
        return self.symbol.signature()

    def character(self, a: int) -> int:
        """chi_D(a) = (a / |D|): the character of the scalar forms feeding lifts."""
        return kronecker(a, self.order())

    # -- quadratic form on coordinates -----------------------------------------

    def _norm_num(self, p: int, xs: tuple[int, ...]) -> int:
        # numerator of q_p(xs) in units of 1/p, reduced mod p
        if p == 2:
            acc = 0
            for b, blk in enumerate(self._blocks):
                x, y = xs[2 * b], xs[2 * b + 1]
                acc += x * y if blk == "u" else x * x + x * y + y * y
            return acc % 2
        return sum(a * x * x for a, x in zip(self._diag[p], xs)) % p

    def _bilin_num(self, p: int, xs, ys) -> int:
        if p == 2:
            acc = 0
            for b in range(len(self._blocks)):
                acc += xs[2 * b] * ys[2 * b + 1] + xs[2 * b + 1] * ys[2 * b]
            return acc % 2
        return sum(2 * a * x * y for a, x, y in zip(self._diag[p], xs, ys)) % p

    def norm_of(self, coords) -> Fraction:
        N = self.level()
        num = 0
        for p, xs in zip(self.primes, coords):
            num += self._norm_num(p, xs) * (N // p)
        return Fraction(num % N, N)

    def bilin_of(self, c1, c2) -> Fraction:
        N = self.level()
        num = 0
        for p, xs, ys in zip(self.primes, c1, c2):
            num += self._bilin_num(p, xs, ys) * (N // p)
        return Fraction(num % N, N)

    # -- elements ----------------------------------------------------------------

    def zero(self) -> DFElement:
        return DFElement(self, tuple(tuple(0 for _ in range(self.ranks[p])) for p in self.primes))

    def element(self, coords) -> DFElement:
        coords = tuple(
            tuple(a % p for a in xs) for p, xs in zip(self.primes, coords)
        )
        if len(coords) != len(self.primes) or any(
            len(xs) != self.ranks[p] for p, xs in zip(self.primes, coords)
        ):
            raise ValueError("coordinate shape mismatch")
        return DFElement(self, coords)

    def elements(self, support: int | None = None):
        """Iterate elements in lexicographic coordinate order, primes ascending.

        With support = c | level, iterates the subgroup D_c (components away
        from c frozen at zero).
        """
        if support is not None and self.level() % support != 0:
            raise ValueError(f"support {support} does not divide level {self.level()}")
        spaces = []
        for p in self.primes:
            if support is None or support % p == 0:
                spaces.append(list(iproduct(range(p), repeat=self.ranks[p])))
            else:
                spaces.append([tuple(0 for _ in range(self.ranks[p]))])
        for combo in iproduct(*spaces):
            yield DFElement(self, combo)

    # -- counting -------------------------------------------------------------------

    def count_norm(self, c: int, j: int) -> int:
        """Number of elements of D_c with norm j/c mod 1 (closed form)."""
        if self.level() % c != 0:
            raise ValueError(f"c={c} does not divide the level {self.level()}")
        if c == 1:
            return 1
        out = 1
        for p in factorize(c):
            n, eps = self.symbol.components[p]
            out *= component_count(p, n, eps, (c // p) * j % p)
        return out

    def component_class_vector(self, p: int) -> list[int]:
        """Counts of elements of the p-component by norm residue (closed form)."""
        n, eps = self.symbol.components[p]
        return [component_count(p, n, eps, j) for j in range(2 if p == 2 else p)]

    def class_map(self, support: int | None = None) -> dict[tuple[int, Fraction], int]:
        """{(order, norm mod 1): count} over D (or D_support), closed form."""
        classes: dict[tuple[int, Fraction], int] = {(1, Fraction(0)): 1}
        for p in self.primes:
            if support is not None and support % p != 0:
                continue
            modulus = 2 if p == 2 else p
            vec = self.component_class_vector(p)
            comp: list[tuple[int, Fraction, int]] = [(1, Fraction(0), 1)]
            for j in range(modulus):
                cnt = vec[j] - (1 if j == 0 else 0)
                if cnt:
                    comp.append((p, Fraction(j, modulus), cnt))
            new: dict[tuple[int, Fraction], int] = {}
            for (d, nu), cnt in classes.items():
                for dp, nup, cp in comp:
                    key = (d * dp, (nu + nup) % 1)
                    new[key] = new.get(key, 0) + cnt * cp
            classes = new
        return classes

    def gauss_milgram_sum(self, support: int | None = None) -> CycNum:
        """sum_gamma e(gamma^2/2) over D (or D_support), component-factorized."""
        total = cyc(1)
        for p in self.primes:
            if support is not None and support % p != 0:
                continue
            modulus = 2 if p == 2 else p
            vec = self.component_class_vector(p)
            comp_sum = sum(
                (cyc(vec[j]) * root_of_unity(j, modulus) for j in range(modulus)),
                cyc(0),
            )
            total = total * comp_sum
        return total

    def class_of(self, gamma: DFElement) -> tuple[int, Fraction]:
        return (gamma.order(), gamma.norm())


# ---------------------------------------------------------------------------
# free-function forms of the core predicates


def count_norm(D: DiscriminantForm, c: int, j: int) -> int:
    return D.count_norm(c, j)


def corresponds_to_roots(gamma: DFElement) -> bool:
    """True iff gamma has order k | N and norm 1/k mod 1 (a root class)."""
    k = gamma.order()
    return gamma.norm() == Fraction(1, k) % 1


def splitting_constraints(n: int, D: DiscriminantForm) -> bool:
    """Rank/sign conditions for a signature-(n, 2) lattice with discriminant
    form D to split both hyperbolic planes: 2 <= n_p <= n, with the sign
    forced at either boundary."""
    order = D.order()
    for p in D.primes:
        n_p, eps_p = D.symbol.components[p]
        if not 2 <= n_p <= n:
            return False
        if n_p == 2 and eps_p != kronecker(-1, p):
            return False
        if n_p == n and eps_p != kronecker(order // p**n_p, p) * kronecker(-1, p):
            return False
    return True


# ---------------------------------------------------------------------------
# isotropic subgroups and quotients


def _subgroup_closure(D: DiscriminantForm, gens: list[DFElement]) -> set[DFElement]:
    group = {D.zero()}
    frontier = [D.zero()]
    while frontier:
        g = frontier.pop()
        for h in gens:
            nxt = g + h
            if nxt not in group:
                group.add(nxt)
                frontier.append(nxt)
    return group


def isotropic_subgroups(D: DiscriminantForm, max_size: int | None = None) -> list[list[DFElement]]:
    """All isotropic subgroups of D (norm 0 on every element), as sorted
    element lists; the trivial subgroup comes first.  Exponential in |D| —
    intended for the small forms where quotient lifts are taken."""
    iso = [g for g in D.elements() if g.norm() == 0 and not g.is_zero()]
    seen: set[frozenset] = set()
    out: list[list[DFElement]] = []
    stack = [frozenset([D.zero()])]
    while stack:
        grp = stack.pop()
        if grp in seen:
            continue
        seen.add(grp)
        out.append(grp)
        for v in iso:
            if v in grp:
                continue
            if any(g.bilin(v) != 0 for g in grp):
                continue
            bigger = frozenset(_subgroup_closure(D, list(grp) + [v]))
            if max_size is not None and len(bigger) > max_size:
                continue
            if all(g.norm() == 0 for g in bigger):
                stack.append(bigger)
    def key(grp):
        return (len(grp), sorted(g.coords for g in grp))
    return [sorted(g, key=lambda e: e.coords) for g in sorted(set(out), key=key)]


class QuotientForm:
    """The quotient H^perp / H of D by an isotropic subgroup, with the data
    needed to lift forms back to D: membership of H^perp, and the (order,
    norm) class of each coset."""

    def __init__(self, D: DiscriminantForm, H: list[DFElement]):
        hset = set(H)
        if D.zero() not in hset:
            raise ValueError("H must contain 0")
        for a in H:
            if a.norm() != 0:
                raise ValueError("H is not isotropic")
            for b in H:
                if a + b not in hset:
                    raise ValueError("H is not a subgroup")
        self.parent = D
        self.subgroup = sorted(hset, key=lambda e: e.coords)
        self._hset = hset
        self.form = self._recognize()

    def in_hperp(self, gamma: DFElement) -> bool:
        return all(gamma.bilin(h) == 0 for h in self.subgroup)

    def hperp_elements(self) -> list[DFElement]:
        return [g for g in self.parent.elements() if self.in_hperp(g)]

    def coset_order(self, gamma: DFElement) -> int:
        for k in divisors(self.parent.level()):
            if (k * gamma) in self._hset:
                return k
        raise ValueError("element order does not divide the level")

    def coset_norm(self, gamma: DFElement) -> Fraction:
        return gamma.norm()

    def coset_class(self, gamma: DFElement) -> tuple[int, Fraction]:
        return (self.coset_order(gamma), gamma.norm())

    def _recognize(self) -> DiscriminantForm:
        D = self.parent
        comps: dict[int, tuple[int, int]] = {}
        for i, p in enumerate(D.primes):
            n_p = D.ranks[p]
            h_p = [h for h in self.subgroup if all(
                not any(xs) for q, xs in zip(D.primes, h.coords) if q != p)]
            dim_h = 0
            size = len(h_p)
            while p**dim_h < size:
                dim_h += 1
            if p**dim_h != size:
                raise ValueError("H does not split over the primes")
            m_p = n_p - 2 * dim_h
            if m_p < 0:
                raise ValueError("H too large to be isotropic")
            if m_p == 0:
                continue
            # Gauss sum of the quotient p-part from the H_p-orthogonal part
            # of the p-component: (1/|H_p|) sum over H_p^perp of e(q)
            acc = cyc(0)
            for g in D.elements(support=p):
                if all(g.bilin(h) == 0 for h in h_p):
                    nrm = g.norm()
                    acc = acc + root_of_unity(nrm.numerator, nrm.denominator)
            acc = acc / size
            s_p = None
            mag = sqrt_pos(p**m_p)
            for j in range(8):
                if acc == mag * root_of_unity(j, 8):
                    s_p = j
                    break
            if s_p is None:
                raise ValueError("quotient Gauss sum is not of Milgram shape")
            if p == 2:
                if s_p not in (0, 4):
                    raise ValueError("bad 2-adic quotient signature")
                eps = 1 if s_p == 0 else -1
            else:
                k4 = (s_p + m_p * (p - 1)) % 8
                if k4 not in (0, 4):
                    raise ValueError("bad odd quotient signature")
                eps = 1 if k4 == 0 else -1
            comps[p] = (m_p, eps)
        return DiscriminantForm(JordanSymbol(comps))


def quotient(D: DiscriminantForm, H: list[DFElement]) -> QuotientForm:
    return QuotientForm(D, H)


# ---------------------------------------------------------------------------
# symbol enumeration


def enumerate_symbols(bound: int) -> list[JordanSymbol]:
    """All Jordan symbols of squarefree level with |D| <= bound, sorted by
    (|D|, level, symbol string); includes the trivial symbol."""
    partial: list[dict[int, tuple[int, int]]] = [{}]
    p = 2
    while (4 if p == 2 else p) <= bound:
        if is_prime(p):
            grown = []
            for sym in partial:
                size = 1
                for q, (n, _) in sym.items():
                    size *= q**n
                power = p * p if p == 2 else p
                n = 2 if p == 2 else 1
                while size * power <= bound:
                    for eps in (1, -1):
                        grown.append({**sym, p: (n, eps)})
                    power *= p * p if p == 2 else p
                    n += 2 if p == 2 else 1
            partial.extend(grown)
        p += 1
    syms = [JordanSymbol(c) for c in partial]
    return sorted(syms, key=lambda s: (s.order(), s.level(), str(s)))
