"""Dirichlet characters, Gauss sums, Bernoulli numbers, and newform expansions.

Newform Hecke eigenvalues are ingested from data files, never computed here.
Given the coefficients, the expansion of a newform at any cusp of Gamma_0(N)
follows from its Atkin-Lehner images: the pseudo-eigenvalue and the twisted
coefficients are explicit.  Forms of level M | N embed into level N two ways
(directly and rescaled by N/M); both expansions are computed by reducing to
the level-M cusp data.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cyclo import (
    CycNum,
    cyc,
    is_prime,
    kronecker,
    prime_factors,
    root_of_unity,
    sqrt_pos,
)
from .qseries import QExp

__all__ = [
    "DirichletCharacter",
    "NewformData",
    "gauss_sum",
    "atkin_lehner_expansion",
    "expansion_at_cusp",
    "oldform_expansion",
    "rescaled_oldform_expansion",
    "bernoulli_number",
    "bernoulli_polynomial",
    "bernoulli_generalized",
    "l_ratio",
    "load_newform",
    "dump_newform",
]


class DirichletCharacter:
    """Real character of squarefree modulus, a product of prime-modulus factors.

    Each factor is either the Legendre symbol (a/p) or the principal character
    mod p; that covers every character a quadratic discriminant form induces.
    """

    __slots__ = ("modulus", "components")

    def __init__(self, components: dict[int, str]):
        mod = 1
        comps = {}
        for p, tag in sorted(components.items()):
            if tag not in ("legendre", "trivial"):
                raise ValueError(f"unknown component tag {tag!r}")
            if not is_prime(p):
                raise ValueError(f"component modulus {p} is not prime")
            mod *= p
            comps[p] = tag
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("DirichletCharacter is immutable")

    @staticmethod
    def induced_quadratic(kernel: int, modulus: int) -> "DirichletCharacter":
        """The character mod `modulus` induced by (./kernel), kernel | modulus."""
        if modulus % kernel:
            raise ValueError("kernel must divide the modulus")
        return DirichletCharacter(
            {p: "legendre" if kernel % p == 0 else "trivial"
             for p in prime_factors(modulus)}
        )

    def sign_value(self, a: int) -> int:
        v = 1
        for p, tag in self.components.items():
            if a % p == 0:
                return 0
            if tag == "legendre":
                v *= kronecker(a, p)
        return v

    def __call__(self, a: int) -> CycNum:
        return cyc(self.sign_value(int(a)))

    def decompose(self, c: int) -> tuple["DirichletCharacter", "DirichletCharacter"]:
        """The unique factorization chi = chi_c * chi_c' for c | modulus."""
        if c < 1 or self.modulus % c:
            raise ValueError(f"{c} does not divide the modulus {self.modulus}")
        left = {p: t for p, t in self.components.items() if c % p == 0}
        right = {p: t for p, t in self.components.items() if c % p != 0}
        return DirichletCharacter(left), DirichletCharacter(right)

    def conductor(self) -> int:
        return math.prod(p for p, t in self.components.items() if t == "legendre")

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive_part(self) -> "DirichletCharacter":
        return DirichletCharacter(
            {p: "legendre" for p, t in self.components.items() if t == "legendre"}
        )

    def parity(self) -> int:
        """chi(-1)."""
        return self.sign_value(-1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.components.items())))

    def __repr__(self) -> str:
        if not self.components:
            return "DirichletCharacter(1)"
        body = " ".join(f"{p}:{t}" for p, t in sorted(self.components.items()))
        return f"DirichletCharacter({body})"


def gauss_sum(chi: DirichletCharacter) -> CycNum:
    """G(chi) = sum_h chi(h) e(h/p) for prime modulus; 1 for modulus 1.

    The empty-modulus value 1 is a convention: it makes the pseudo-eigenvalue
    of the trivial Atkin-Lehner operator come out as 1.
    """
    p = chi.modulus
    if p == 1:
        return cyc(1)
    if len(chi.components) != 1:
        raise ValueError("Gauss sums are taken per prime component")
    total = cyc(0)
    for h in range(1, p):
        s = chi.sign_value(h)
        if s:
            total = total + s * root_of_unity(h, p)
    return total


# -- newform data -----------------------------------------------------------------


class NewformData:
    """A normalized Hecke eigenform given by its level, weight, character, and
    an initial segment of Fourier coefficients (a_1 = 1)."""

    __slots__ = ("level", "weight", "character", "coeffs", "bound")

    def __init__(self, level: int, weight: int, character: DirichletCharacter,
                 coeffs: dict[int, CycNum], bound: int):
        if character.modulus != level:
            raise ValueError("character modulus must equal the level")
        if bound < 1 or coeffs.get(1) != cyc(1):
            raise ValueError("normalized eigenform needs a_1 = 1 within bound")
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "weight", int(weight))
        object.__setattr__(self, "character", character)
        object.__setattr__(self, "coeffs", dict(coeffs))
        object.__setattr__(self, "bound", int(bound))

    def __setattr__(self, name, value):
        raise AttributeError("NewformData is immutable")

    def a(self, n: int) -> CycNum:
        if n < 1 or n > self.bound:
            raise ValueError(f"coefficient a_{n} beyond declared bound {self.bound}")
        return self.coeffs.get(n, cyc(0))

    def expansion(self, prec) -> QExp:
        prec = Fraction(prec)
        if prec > self.bound + 1:
            raise ValueError(f"precision {prec} beyond declared bound {self.bound}")
        return QExp(
            {Fraction(n): v for n, v in self.coeffs.items() if n < prec}.items(),
            prec,
        )

    def twisted_coefficient(self, cprime: int, n: int) -> CycNum:
        """a_n^(c'): the coefficient of q^n in g|W_c' after removing lambda.

        Split n = u*v with u supported on the primes of c and v coprime to c;
        then a_u^(c') = conj(chi_c')(u) a_u (u is coprime to c') and
        a_v^(c') = chi_c(v) conj(a_v), glued by multiplicativity.
        """
        if cprime < 1 or self.level % cprime:
            raise ValueError(f"{cprime} does not divide the level {self.level}")
        c = self.level // cprime
        u, v = 1, n
        for p in prime_factors(c):
            while v % p == 0:
                u, v = u * p, v // p
        chi_c, chi_cp = self.character.decompose(c)
        out = chi_cp(u).conj() * self.a(u)
        return out * chi_c(v) * self.a(v).conj()

    def pseudo_eigenvalue(self, cprime: int) -> CycNum:
        """lambda with g|W_c' = lambda sum a_n^(c') q^n."""
        if cprime < 1 or self.level % cprime:
            raise ValueError(f"{cprime} does not divide the level {self.level}")
        c = self.level // cprime
        k = self.weight
        chi_c, chi_cp = self.character.decompose(c)
        lam = chi_cp(c) * chi_c(cprime)
        for p in prime_factors(cprime):
            chi_p = DirichletCharacter({p: self.character.components[p]})
            # p^(-k/2) built multiplicatively: (sqrt(p)/p)^k
            root = (sqrt_pos(p) * Fraction(1, p)) ** k
            if chi_p.is_primitive():
                lam_p = gauss_sum(chi_p) * root * self.a(p).conj()
            else:
                lam_p = -(p * root) * self.a(p).conj()
            lam = lam * chi_p(cprime // p) * lam_p
        return lam

    def __repr__(self) -> str:
        return (f"NewformData(level={self.level}, weight={self.weight}, "
                f"bound={self.bound})")


def atkin_lehner_expansion(g: NewformData, cprime: int, prec) -> QExp:
    """Expansion of g|_k W_c' at infinity: lambda * sum a_n^(c') q^n."""
    prec = Fraction(prec)
    if prec > g.bound + 1:
        raise ValueError(f"precision {prec} beyond declared bound {g.bound}")
    lam = g.pseudo_eigenvalue(cprime)
    terms = {}
    for n in range(1, math.ceil(prec)):
        if Fraction(n) >= prec:
            break
        v = g.twisted_coefficient(cprime, n)
        if not v.is_zero():
            terms[Fraction(n)] = lam * v
    return QExp(terms.items(), prec)


def expansion_at_cusp(g: NewformData, c: int, prec) -> QExp:
    """Expansion of g|_k M_c in powers of q^(1/c'), c' = level/c.

    g|_k M_c(tau) = chi_c'(-1) chi_c^(-1)(c') c'^(-k/2) * (g|_k W_c')(tau/c').
    """
    if c < 1 or g.level % c:
        raise ValueError(f"{c} does not divide the level {g.level}")
    cprime = g.level // c
    chi_c, chi_cp = g.character.decompose(c)
    w = atkin_lehner_expansion(g, cprime, Fraction(prec) * cprime)
    pref = chi_cp(-1) * chi_c(cprime)  # real characters: chi_c^(-1) = chi_c
    pref = pref * (sqrt_pos(cprime) * Fraction(1, cprime)) ** g.weight
    return pref * w.rescale_shift(1, 0, cprime)


def oldform_expansion(g: NewformData, N: int, c: int, prec) -> QExp:
    """Expansion of g|_k M_c where g has level M | N but M_c is taken in level N.

    With m = (c, M): g|_k M_c = chi_(M/m)(c) chi_(M/m)^(-1)(m) g|_k M_m, and the
    right side is level-M cusp data (an expansion in q^(1/(M/m)), which lies on
    the q^(1/c') grid).
    """
    M = g.level
    if N % M or N % c:
        raise ValueError("need level M | N and c | N")
    m = math.gcd(c, M)
    _, chi_Mm = g.character.decompose(m)
    pref = chi_Mm(c) * chi_Mm(m)  # real: chi^(-1) = chi
    return pref * expansion_at_cusp(g, m, prec)


def rescaled_oldform_expansion(g: NewformData, N: int, c: int, prec) -> QExp:
    """Expansion of h|_k M_c for h = g|_k (N/M, 0; 0, 1) = (N/M)^(-k/2) g(N tau/M).

    With m = (c, M), r1 = (c, N/M), r2 = (c', N/M):
    h|_k M_c(tau) = chi_m^(-1)(r2) (N/M)^(-k/2) r2^(-k) * (g|_k M_m)(r1 tau / r2).

    The r2^(-k) is the automorphy factor of the diagonal part in the
    decomposition (N/M, 0; 0, 1) M_c = gamma_M M_m (r1, 0; 0, r2): slashing by
    (r1, 0; 0, r2) contributes det^(-k/2) j^(-k) = (r1 r2)^(-k/2) r2^(-k).
    Pinned by the numeric modularity oracle in the tests: without it the
    cusp-0 expansion of a level-7 form rescaled into level 14 comes out
    r2^k = 8 times too large.
    """
    M = g.level
    if N % M or N % c:
        raise ValueError("need level M | N and c | N")
    nm = N // M
    m = math.gcd(c, M)
    r1 = math.gcd(c, nm)
    r2 = math.gcd(N // c, nm)
    inner = expansion_at_cusp(g, m, Fraction(prec) * r2 / r1)
    chi_m, _ = g.character.decompose(m)
    pref = chi_m(r2) * (sqrt_pos(nm) * Fraction(1, nm)) ** g.weight
    pref = pref * Fraction(1, r2**g.weight)
    return pref * inner.rescale_shift(r1, 0, r2)


# -- Bernoulli numbers and L-values ------------------------------------------------


def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2, by the defining recursion."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    B = [Fraction(1)]
    for n in range(1, k + 1):
        # sum_{j<=n} binom(n+1, j) B_j = 0
        s = sum(Fraction(math.comb(n + 1, j)) * B[j] for j in range(n))
        B.append(-s / (n + 1))
    return B[k]


def bernoulli_polynomial(k: int, x) -> Fraction:
    """B_k(x) = sum_j binom(k, j) B_j x^(k-j)."""
    x = Fraction(x)
    return sum(
        Fraction(math.comb(k, j)) * bernoulli_number(j) * x ** (k - j)
        for j in range(k + 1)
    )


def bernoulli_generalized(k: int, psi: DirichletCharacter) -> Fraction:
    """B_(k, psi) = m^(k-1) sum_(a=1)^m psi(a) B_k(a/m) for primitive psi."""
    if not psi.is_primitive():
        raise ValueError("generalized Bernoulli numbers need a primitive character")
    m = psi.modulus
    total = Fraction(0)
    for a in range(1, m + 1):
        s = psi.sign_value(a)
        if s:
            total += s * bernoulli_polynomial(k, Fraction(a, m))
    return Fraction(m) ** (k - 1) * total


def l_ratio(k: int, psi: DirichletCharacter, N: int) -> Fraction:
    """L(k, psi) / L(k, chi) for chi the mod-N character induced by psi.

    The quotient is the finite Euler product prod_(p | N, p exc. m)
    (1 - psi(p) p^(-k))^(-1).
    """
    if not psi.is_primitive():
        raise ValueError("induction needs a primitive character")
    if N % psi.modulus:
        raise ValueError("the conductor must divide N")
    out = Fraction(1)
    for p in prime_factors(N):
        if psi.modulus % p == 0:
            continue
        out *= Fraction(p**k, p**k - psi.sign_value(p))
    return out


# -- newform file format -----------------------------------------------------------
#
# Line-oriented text.  Header fields one per line, then one coefficient per
# line.  Coefficient values are exact: either a rational "p/q" or a cyclotomic
# "z{M}:n1/d1@e1,n2/d2@e2,..." listing the coefficients of zeta_M^e.
#
#   level 3
#   weight 7
#   character 3:legendre
#   bound 40
#   1 1
#   3 -27
#   ...


def _dump_cyc(v: CycNum) -> str:
    if v.order == 1:
        return str(v.coeffs.get(0, Fraction(0)))
    body = ",".join(f"{v.coeffs[e]}@{e}" for e in sorted(v.coeffs))
    return f"z{v.order}:{body}"


def _parse_cyc(text: str) -> CycNum:
    text = text.strip()
    if not text.startswith("z"):
        return cyc(Fraction(text))
    head, _, body = text.partition(":")
    order = int(head[1:])
    coeffs = {}
    for part in body.split(","):
        val, _, exp = part.partition("@")
        coeffs[int(exp)] = Fraction(val)
    return CycNum(order, coeffs)


def dump_newform(g: NewformData) -> str:
    lines = [f"level {g.level}", f"weight {g.weight}"]
    if g.character.components:
        body = " ".join(f"{p}:{t}" for p, t in sorted(g.character.components.items()))
    else:
        body = "1"
    lines.append(f"character {body}")
    lines.append(f"bound {g.bound}")
    for n in sorted(g.coeffs):
        if not g.coeffs[n].is_zero():
            lines.append(f"{n} {_dump_cyc(g.coeffs[n])}")
    return "\n".join(lines) + "\n"


def load_newform(text: str) -> NewformData:
    header: dict[str, str] = {}
    coeffs: dict[int, CycNum] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key in ("level", "weight", "character", "bound"):
            header[key] = rest.strip()
        else:
            coeffs[int(key)] = _parse_cyc(rest)
    for field in ("level", "weight", "character", "bound"):
        if field not in header:
            raise ValueError(f"newform file is missing the {field} header")
    if header["character"] == "1":
        chi = DirichletCharacter({})
    else:
        comps = {}
        for item in header["character"].split():
            p, _, tag = item.partition(":")
            comps[int(p)] = tag
        chi = DirichletCharacter(comps)
    return NewformData(
        int(header["level"]), int(header["weight"]), chi, coeffs,
        int(header["bound"]),
    )
