"""Obstructions on the pole data of reflective forms of singular weight.

A candidate lattice of signature (n, 2) and squarefree level N fixes the
shape such a form F can have: simple poles q^(-1/d) on the order-d,
norm-1/d classes, with multiplicity 1 on an unknown subset M_d of size c_d.
Three exact conditions constrain the vector (c_d):

  A.  box constraints: 0 <= c_d <= N(D_d, 1), and c_d even for d > 2
      because the components of F come in equal pairs F_gamma = F_-gamma;
  B.  one linear residue constraint per cusp form of weight 1 + n/2 and
      character chi_D on Gamma_0(N);
  C.  an exact normalization identity (the Eisenstein part of the input
      is pinned by the singular weight of the lift).

Pairing single components F_gamma against Gamma_1(N) cusp forms refines B
below Gamma_0-level: the resulting constraints live on one unknown x_{mu,d}
per pole element and separate quantities like a_gamma^d = |M_d ∩ gamma^perp|
that the c_d only see in aggregate.

`solve` decides the c_d vectors by exact linear elimination over the
cyclotomic coefficients followed by enumeration of the remaining boxes.
The refined per-element constraints are offered as a feasibility checker
on explicit assignments, not as a general search.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from .arithforms import (
    DirichletCharacter,
    NewformData,
    bernoulli_generalized,
    expansion_at_cusp,
    l_ratio,
    load_newform,
)
from .cyclo import CycNum, cyc, divisors, kronecker, prime_factors, sqrt_pos
from .discforms import DFElement, DiscriminantForm, count_norm, splitting_constraints
from .eta import EtaQuotient, character_check, expand_at_cusp, is_cusp_form
from .qseries import QExp
from .weil import _xi_c as xi_c
from .weil import lift_matrix, transform_coefficients


class DataError(Exception):
    """Required bundled data is missing or inconsistent (CLI exit code 2)."""


def default_data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


# ---------------------------------------------------------------------------
# domain types


class CandidateLattice:
    """A lattice candidate (n, N, D) for carrying a singular-weight form."""

    __slots__ = ("n", "N", "D")

    def __init__(self, n: int, D: DiscriminantForm, N: int | None = None):
        if n % 2 or n < 4:
            raise ValueError(f"signature (n, 2) needs even n >= 4, got n={n}")
        level = D.level()
        if N is None:
            N = level
        if N != level:
            raise ValueError(f"level mismatch: N={N}, form has level {level}")
        if (D.signature() - (n - 2)) % 8:
            raise ValueError(
                f"signature {D.signature()} mod 8 incompatible with n={n}"
            )
        if not splitting_constraints(n, D):
            raise ValueError(f"{D!r} admits no splitting lattice of signature ({n},2)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("CandidateLattice is immutable")

    @classmethod
    def from_symbol(cls, n: int, symbol: str) -> "CandidateLattice":
        return cls(n, DiscriminantForm(symbol))

    @property
    def weight(self) -> int:
        """Weight 1 + n/2 of the pairing cusp forms (the input f has 1 - n/2)."""
        return 1 + self.n // 2

    @property
    def divisors(self) -> list[int]:
        return divisors(self.N)

    def character(self) -> DirichletCharacter:
        return character_of(self.D)

    def __repr__(self) -> str:
        return f"CandidateLattice(n={self.n}, N={self.N}, {self.D!r})"


def character_of(D: DiscriminantForm) -> DirichletCharacter:
    """chi_D(a) = (a / |D|) as a character of modulus level(D)."""
    comps = {}
    for p in D.primes:
        comps[p] = "legendre" if D.ranks[p] % 2 else "trivial"
    return DirichletCharacter(comps)


class CVector:
    """Pole multiplicities {d | N: c_d}, validated against condition A."""

    __slots__ = ("cand", "c")

    def __init__(self, cand: CandidateLattice, c: dict[int, int]):
        divs = cand.divisors
        if sorted(c) != divs:
            raise ValueError(f"need one value per divisor of {cand.N}, got {sorted(c)}")
        for d in divs:
            v = c[d]
            if v != int(v) or v < 0 or v > count_norm(cand.D, d, 1):
                raise ValueError(f"c_{d}={v} outside [0, N(D_{d},1)]")
            if d > 2 and v % 2:
                raise ValueError(f"c_{d}={v} must be even for d > 2")
        object.__setattr__(self, "cand", cand)
        object.__setattr__(self, "c", {d: int(c[d]) for d in divs})

    def __setattr__(self, name, value):
        raise AttributeError("CVector is immutable")

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.c[d] for d in self.cand.divisors)

    def __eq__(self, other) -> bool:
        return isinstance(other, CVector) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __repr__(self) -> str:
        body = ", ".join(f"c_{d}={v}" for d, v in sorted(self.c.items()))
        return f"CVector({body})"


class LinearConstraint:
    """An exact linear form sum coeff_u * u + constant required to vanish."""

    __slots__ = ("coeffs", "constant", "label")

    def __init__(self, coeffs: dict[str, CycNum], constant=0, label: str = ""):
        clean = {}
        for key, v in coeffs.items():
            v = _as_cyc(v)
            if not v.is_zero():
                clean[key] = v
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "constant", _as_cyc(constant))
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("LinearConstraint is immutable")

    def is_trivial(self) -> bool:
        return not self.coeffs and self.constant.is_zero()

    def unknowns(self) -> list[str]:
        return sorted(self.coeffs)

    def evaluate(self, values) -> CycNum:
        """Value of the form at a full assignment (unknown id -> number)."""
        total = self.constant
        for key, coeff in self.coeffs.items():
            total = total + coeff * _as_cyc(values[key])
        return total

    def substitute(self, values) -> "LinearConstraint":
        """Fold the given unknowns into the constant; keep the rest symbolic."""
        coeffs = {}
        constant = self.constant
        for key, coeff in self.coeffs.items():
            if key in values:
                constant = constant + coeff * _as_cyc(values[key])
            else:
                coeffs[key] = coeff
        return LinearConstraint(coeffs, constant, self.label)

    def scaled(self, factor) -> "LinearConstraint":
        factor = _as_cyc(factor)
        return LinearConstraint(
            {k: v * factor for k, v in self.coeffs.items()},
            self.constant * factor,
            self.label,
        )

    def dump(self) -> str:
        """One line: label, then `coeff * unknown` terms and the constant."""
        parts = [f"({coeff}) * {key}" for key, coeff in sorted(self.coeffs.items())]
        if not self.constant.is_zero() or not parts:
            parts.append(f"({self.constant})")
        head = f"{self.label}: " if self.label else ""
        return head + " + ".join(parts) + " = 0"

    def __repr__(self) -> str:
        return f"LinearConstraint({self.dump()!r})"


def _as_cyc(v) -> CycNum:
    if isinstance(v, CycNum):
        return v
    return cyc(v)


def proportional(a: LinearConstraint, b: LinearConstraint) -> bool:
    """True when a = lambda * b for some nonzero scalar lambda."""
    keys = sorted(set(a.coeffs) | set(b.coeffs))
    pairs = [(a.coeffs.get(k, cyc(0)), b.coeffs.get(k, cyc(0))) for k in keys]
    pairs.append((a.constant, b.constant))
    ratio = None
    for va, vb in pairs:
        if vb.is_zero():
            if not va.is_zero():
                return False
            continue
        if ratio is None:
            ratio = va / vb
            if ratio.is_zero():
                return False
        elif not (va - ratio * vb).is_zero():
            return False
    return ratio is not None


# ---------------------------------------------------------------------------
# condition A


def condition_A(cand: CandidateLattice) -> dict[int, range]:
    """Allowed values per divisor: 0..N(D_d,1), even for d > 2."""
    boxes = {}
    for d in cand.divisors:
        hi = count_norm(cand.D, d, 1)
        boxes[d] = range(0, hi + 1, 2 if d > 2 else 1)
    return boxes


# ---------------------------------------------------------------------------
# condition B


class CuspFormDatum:
    """A cusp form of the dual weight, reduced to the residue data b_d.

    b_d is the coefficient of q^(1/d') in g|_k M_d with d' = N/d; that is all
    condition B sees of g.
    """

    __slots__ = ("label", "weight", "character", "b")

    def __init__(self, label: str, weight: int, character: DirichletCharacter,
                 b: dict[int, CycNum]):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "character", character)
        object.__setattr__(self, "b", dict(b))

    def __setattr__(self, name, value):
        raise AttributeError("CuspFormDatum is immutable")

    def __repr__(self) -> str:
        return f"CuspFormDatum({self.label}, k={self.weight})"


_B_PREC = Fraction(3, 2)


def eta_cusp_datum(E: EtaQuotient, character: DirichletCharacter) -> CuspFormDatum:
    """Residue data of an eta quotient: b_d from its expansion at M_d."""
    N = E.level
    b = {}
    for d in divisors(N):
        pref, series = expand_at_cusp(E, lift_matrix(N, d), _B_PREC)
        b[d] = pref * series.coeff(Fraction(1, N // d))
    k = E.weight()
    if k.denominator != 1:
        raise ValueError(f"{E!r} has non-integral weight {k}")
    return CuspFormDatum(str(E), int(k), character, b)


def newform_cusp_datum(g: NewformData) -> CuspFormDatum:
    N = g.level
    b = {}
    for d in divisors(N):
        series = expansion_at_cusp(g, d, _B_PREC)
        b[d] = series.coeff(Fraction(1, N // d))
    label = f"newform({N},{g.weight})"
    return CuspFormDatum(label, g.weight, g.character, b)


def condition_B(cand: CandidateLattice, g: CuspFormDatum) -> LinearConstraint:
    """The residue constraint of one cusp form, linear in the c_d.

    The coefficient of c_{d'} collects xi_d^(-1) sqrt(|D|/|D_d|) b_d / N(D_{d'},1)
    over d | N; the constant term of the pairing at infinity must vanish.
    """
    if g.weight != cand.weight:
        raise ValueError(f"weight {g.weight} != 1 + n/2 = {cand.weight}")
    if g.character != cand.character():
        raise ValueError(f"character {g.character!r} is not chi_D")
    D, N = cand.D, cand.N
    coeffs: dict[str, CycNum] = {}
    for d in cand.divisors:
        bd = g.b.get(d, cyc(0))
        if bd.is_zero():
            continue
        dprime = N // d
        co_order = math.prod(p ** D.ranks[p] for p in D.primes if d % p != 0)
        coeff = (
            xi_c(D, d).conj()
            * sqrt_pos(co_order)
            * Fraction(1, count_norm(D, dprime, 1))
            * bd
        )
        key = f"c_{dprime}"
        coeffs[key] = coeffs.get(key, cyc(0)) + coeff
    return LinearConstraint(coeffs, 0, label=f"B[{g.label}]")


def load_space(N: int, weight: int, character: DirichletCharacter,
               data_dir: Path | None = None) -> tuple[list[CuspFormDatum], bool]:
    """Basis of the cusp space from the bundled manifest.

    Returns (basis, complete).  A space absent from the manifest is only
    tolerated when the parity chi(-1) != (-1)^weight forces dimension 0;
    otherwise the missing file/record is an error.
    """
    if character.parity() != (-1) ** weight:
        return [], True
    data_dir = Path(data_dir) if data_dir is not None else default_data_dir()
    manifest = data_dir / "newforms" / "spaces.json"
    if not manifest.is_file():
        raise DataError(f"missing cusp-space manifest: {manifest}")
    records = json.loads(manifest.read_text())
    for rec in records:
        rec_char = DirichletCharacter(
            {int(p): tag for p, tag in rec["character"].items()}
        )
        if rec["level"] == N and rec["weight"] == weight and rec_char == character:
            break
    else:
        raise DataError(
            f"no record for level={N} weight={weight} {character!r} in {manifest}"
        )
    basis = []
    for entry in rec["basis"]:
        if entry["type"] == "eta":
            E = EtaQuotient(N, {int(d): r for d, r in entry["exps"].items()})
            basis.append(eta_cusp_datum(E, character))
        elif entry["type"] == "newform":
            path = data_dir / "newforms" / entry["file"]
            if not path.is_file():
                raise DataError(f"missing newform file: {path}")
            basis.append(newform_cusp_datum(load_newform(path.read_text())))
        else:
            raise DataError(f"unknown basis entry type {entry['type']!r} in {manifest}")
    if len(basis) < rec["dim"] and rec.get("complete", True):
        raise DataError(
            f"manifest record ({N},{weight}) claims dim {rec['dim']} "
            f"but lists {len(basis)} basis forms"
        )
    return basis, bool(rec.get("complete", True))


def basis_constraints(cand: CandidateLattice,
                      data_dir: Path | None = None) -> tuple[list[LinearConstraint], bool]:
    """All condition-B constraints the bundled data supports for cand."""
    basis, complete = load_space(cand.N, cand.weight, cand.character(), data_dir)
    return [condition_B(cand, g) for g in basis], complete


# ---------------------------------------------------------------------------
# condition C


def _epsilon_c(D: DiscriminantForm, c: int, m_c: int) -> int:
    sign = 1
    for p in prime_factors(c):
        n_p, eps_p = D.symbol.components[p]
        if m_c % p == 0:
            sign *= eps_p * kronecker(m_c // p, p) * kronecker(-1, p) ** ((n_p + 1) // 2)
        else:
            sign *= eps_p * kronecker(-1, p) ** (n_p // 2)
    return sign


def condition_C_constraint(cand: CandidateLattice) -> LinearConstraint:
    """The normalization identity as a linear form in the c_d (minus 1).

    The left-hand side is (k/(k-2)) (1/B_{k,psi}) (L(k,psi)/L(k,chi)) (m/N)^k
    times a sum over pairs c*d | N of signed surd terms, each linear in c_d.
    """
    D, N, k = cand.D, cand.N, cand.weight
    chi = cand.character()
    m = chi.conductor()
    psi = chi.primitive_part()
    pref = (
        Fraction(k, k - 2)
        / bernoulli_generalized(k, psi)
        * l_ratio(k, psi, N)
        * Fraction(m ** k, N ** k)
    )
    inv_sqrt = sqrt_pos(m * D.order()) * Fraction(1, m * D.order())
    eps_N = _epsilon_c(D, N, m) if N > 1 else 1
    coeffs: dict[str, CycNum] = {}
    for d in cand.divisors:
        total = cyc(0)
        for c in divisors(N // d):
            m_c = math.gcd(m, c)
            # psi = psi_c * psi_c' with conductors m_c and m/m_c; the factors
            # are evaluated through their primitive representatives, so no
            # term vanishes (every argument below is coprime to them).
            psi_c = DirichletCharacter({p: "legendre" for p in prime_factors(m_c)})
            psi_cp = DirichletCharacter(
                {p: "legendre" for p in prime_factors(m // m_c)}
            )
            sign = (
                psi_c.sign_value(N * N // (c * d * m_c))
                * psi_cp.sign_value(-c)
                * psi_c.sign_value(2)
                * psi.sign_value(2)
                * _epsilon_c(D, c, m_c)
                * eps_N
                * (-1) ** len(prime_factors(c // m_c))
            )
            if sign == 0:
                continue
            dc_order = math.prod(p ** D.ranks[p] for p in D.primes if c % p == 0)
            total = total + sign * sqrt_pos(m_c * dc_order) * Fraction(
                N ** k, c ** k * d ** (k - 1)
            )
        coeffs[f"c_{d}"] = total * inv_sqrt * pref
    return LinearConstraint(coeffs, -1, label="C")


def condition_C(cand: CandidateLattice, cv: CVector) -> bool:
    """Exact test of the normalization identity at a concrete vector."""
    values = {f"c_{d}": v for d, v in cv.c.items()}
    return condition_C_constraint(cand).evaluate(values).is_zero()


# ---------------------------------------------------------------------------
# Gamma_1(N) pairings


def element_key(mu: DFElement) -> str:
    return ";".join(",".join(str(x) for x in comp) for comp in mu.coords)


class SymbolicPoles:
    """One unknown x per +-orbit of potential pole elements.

    Eligible elements have order d and norm 1/d mod 1 for some d | N; the tie
    x_mu = x_(-mu) reflects F_gamma = F_(-gamma), so both signs share an id.
    """

    __slots__ = ("D", "by_d", "ids", "_id_of")

    def __init__(self, D: DiscriminantForm, support: list[int] | None = None):
        by_d: dict[int, list[DFElement]] = {}
        id_of: dict[DFElement, str] = {}
        for d in support if support is not None else divisors(D.level()):
            reps = []
            for mu in D.elements(support=d):
                if mu.order() != d or (mu.norm() - Fraction(1, d)) % 1 != 0:
                    continue
                rep = min(mu, -mu, key=lambda e: e.coords)
                if rep == mu:
                    reps.append(mu)
                    id_of[mu] = f"x[{element_key(mu)}]_{d}"
            for mu in reps:
                id_of[-mu] = id_of[mu]
            by_d[d] = reps
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "by_d", by_d)
        object.__setattr__(self, "ids", sorted(set(id_of.values())))
        object.__setattr__(self, "_id_of", id_of)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolicPoles is immutable")

    def __contains__(self, mu: DFElement) -> bool:
        return mu in self._id_of

    def id_of(self, mu: DFElement) -> str:
        return self._id_of[mu]

    def orbit_size(self, mu: DFElement) -> int:
        return 1 if mu == -mu else 2

    def assignment_from(self, membership) -> dict[str, int]:
        """{unknown: 0/1} from a predicate or container of pole elements."""
        test = membership if callable(membership) else (lambda e: e in membership)
        values = {}
        for reps in self.by_d.values():
            for mu in reps:
                values[self.id_of(mu)] = 1 if (test(mu) or test(-mu)) else 0
        return values


def gamma1_rep(N: int, c: int) -> tuple[int, int, int, int]:
    """Cusp representative (1, b; c, 1 + bc) for 1/c with N/c | lower right.

    For squarefree N the cusps of Gamma_1(N) are classified by c | N with
    width t = N/c; taking d = 1 + bc = 0 mod t pins the expansions used in
    the pairings up to a full-width translation, which they do not see.
    """
    if N % c:
        raise ValueError(f"c={c} must divide N={N}")
    t = N // c
    b = (-pow(c, -1, t)) % t if t > 1 else 0
    return (1, b, c, 1 + b * c)


def gamma1_pairing(D: DiscriminantForm, gamma: DFElement, h: EtaQuotient,
                   P: SymbolicPoles) -> LinearConstraint:
    """Constant term of the pairing of F_gamma with h over Gamma_1(N) cusps.

    The pairing sum_cusps t_c (F_gamma|M)(h|M) is weight 2 and character-free,
    so its constant term vanishes; expanding F_gamma|M by the transformation
    rule leaves an exact linear form in the unknown pole coefficients x.
    h must be a cusp form of character conj(chi_gamma), i.e. with multiplier
    exponent q(gamma) mod 1.
    """
    N = D.level()
    if h.level != N:
        raise ValueError(f"{h!r} has level {h.level}, lattice has {N}")
    ok, weight, x = character_check(h)
    if not ok or weight.denominator != 1:
        raise ValueError(f"{h!r} does not transform under a character of Gamma_1({N})")
    if (x - gamma.norm()) % 1 != 0:
        raise ValueError(
            f"multiplier exponent {x} of {h!r} does not match q(gamma) = {gamma.norm()}"
        )
    if not is_cusp_form(h):
        raise ValueError(f"{h!r} is not a cusp form")
    coeffs: dict[str, CycNum] = {}
    for c in divisors(N):
        t_c = N // c
        M = gamma1_rep(N, c)
        pref, series = expand_at_cusp(h, M, _B_PREC)
        h_at = {}
        for d in divisors(N):
            v = pref * series.coeff(Fraction(1, d))
            if not v.is_zero():
                h_at[d] = v
        if not h_at:
            continue
        for delta, t in transform_coefficients(D, gamma, M).items():
            if delta not in P:
                continue
            hv = h_at.get(delta.order())
            if hv is None:
                continue
            key = P.id_of(delta)
            coeffs[key] = coeffs.get(key, cyc(0)) + t_c * t * hv
    return LinearConstraint(coeffs, 0, label=f"pair[{h}|{element_key(gamma)}]")


def expand_grouped(D: DiscriminantForm, gamma: DFElement, P: SymbolicPoles,
                   named) -> LinearConstraint:
    """Expand a constraint over grouped unknowns into per-orbit unknowns.

    Recognized names: "c_d"; "a^d" for |M_d ∩ gamma^perp|; "delta^d" for the
    indicator of gamma in M_d; "N^{d,e}" for the number of elements of M_e
    projecting onto gamma in D_d; "const".  This is the bridge between the
    per-element pairing constraints and their grouped classical shapes.
    """
    coeffs: dict[str, CycNum] = {}
    constant = _as_cyc(named.get("const", 0))

    def add(mu: DFElement, v) -> None:
        key = P.id_of(mu)
        coeffs[key] = coeffs.get(key, cyc(0)) + _as_cyc(v)

    for name, scale in named.items():
        if name == "const":
            continue
        if name.startswith("c_"):
            d = int(name[2:])
            for mu in P.by_d[d]:
                add(mu, P.orbit_size(mu) * _as_cyc(scale))
        elif name.startswith("a^"):
            d = int(name[2:])
            for mu in P.by_d[d]:
                if mu.bilin(gamma) % 1 == 0:
                    add(mu, P.orbit_size(mu) * _as_cyc(scale))
        elif name.startswith("delta^"):
            # indicator of the order-d multiple of gamma (e.g. 3*alpha in M_2
            # for alpha of order 6), which is gamma itself when d = order
            d = int(name[6:])
            if gamma.order() % d == 0:
                mu = (gamma.order() // d) * gamma
                if mu in P:
                    add(mu, scale)
        elif name.startswith("N^{"):
            d, e = (int(s) for s in name[3:-1].split(","))
            for mu in P.by_d[e]:
                hits = sum(1 for nu in (mu, -mu) if nu.project(d) == gamma)
                if mu == -mu:
                    hits = 1 if mu.project(d) == gamma else 0
                if hits:
                    add(mu, hits * _as_cyc(scale))
        else:
            raise ValueError(f"unknown grouped name {name!r}")
    return LinearConstraint(coeffs, constant, label="grouped")


def satisfies(constraints, values) -> bool:
    """Exact feasibility of a full assignment against a constraint family."""
    return all(con.evaluate(values).is_zero() for con in constraints)


# ---------------------------------------------------------------------------
# the solver


def solve(cand: CandidateLattice, constraints) -> list[CVector]:
    """All condition-A vectors satisfying every constraint and condition C.

    The linear system over the c_d is reduced by exact Gaussian elimination
    (the coefficients are cyclotomic); free unknowns are then enumerated over
    their boxes, largest boxes eliminated first.  Survivors are re-verified
    against the original constraints, so the elimination is only a pruning
    device.  The result is sorted by the tuple (c_d), divisors ascending.
    """
    boxes = condition_A(cand)
    divs = cand.divisors
    keys = [f"c_{d}" for d in divs]
    all_constraints = list(constraints) + [condition_C_constraint(cand)]

    rows = []
    for con in all_constraints:
        unknown = set(con.coeffs) - set(keys)
        if unknown:
            raise ValueError(f"constraint {con.label!r} has non-c unknowns {unknown}")
        vec = [con.coeffs.get(k, cyc(0)) for k in keys]
        rows.append((vec, con.constant))

    # Echelonize, eliminating the largest boxes first so the enumeration
    # runs over the small ones.
    order = sorted(range(len(divs)), key=lambda i: (-len(boxes[divs[i]]), -divs[i]))
    pivots: list[tuple[int, list[CycNum], CycNum]] = []
    for col in order:
        pick = None
        for ri, (vec, const) in enumerate(rows):
            if not vec[col].is_zero():
                if pick is None or (
                    vec[col].is_rational() and not rows[pick][0][col].is_rational()
                ):
                    pick = ri
            if pick is not None and rows[pick][0][col].is_rational():
                break
        if pick is None:
            continue
        vec, const = rows.pop(pick)
        inv = vec[col].inverse()
        vec = [v * inv for v in vec]
        const = const * inv
        reduced = []
        for ovec, oconst in rows:
            f = ovec[col]
            if f.is_zero():
                reduced.append((ovec, oconst))
            else:
                reduced.append(
                    (
                        [ov - f * v for ov, v in zip(ovec, vec)],
                        oconst - f * const,
                    )
                )
        rows = reduced
        pivots.append((col, vec, const))

    for vec, const in rows:
        if all(v.is_zero() for v in vec) and not const.is_zero():
            return []

    pivot_cols = {col for col, _, _ in pivots}
    free_cols = [i for i in range(len(divs)) if i not in pivot_cols]
    free_cols.sort(key=lambda i: divs[i])

    def admissible(col: int, value) -> bool:
        d = divs[col]
        return (
            value == int(value)
            and 0 <= value <= boxes[d].stop - 1
            and (d <= 2 or int(value) % 2 == 0)
        )

    out = []
    stack = [(0, {})]
    while stack:
        idx, partial = stack.pop()
        if idx < len(free_cols):
            col = free_cols[idx]
            for v in reversed(boxes[divs[col]]):
                nxt = dict(partial)
                nxt[col] = v
                stack.append((idx + 1, nxt))
            continue
        values = dict(partial)
        ok = True
        # Back-substitute in reverse pivot order: later pivots only involve
        # columns that were still unresolved when they were created.
        for col, vec, const in reversed(pivots):
            acc = const
            for j, coeff in enumerate(vec):
                if j != col and not coeff.is_zero():
                    acc = acc + coeff * values[j]
            val = -acc
            if not val.is_rational():
                ok = False
                break
            r = val.rational_value()
            if r.denominator != 1 or not admissible(col, r):
                ok = False
                break
            values[col] = int(r)
        if not ok:
            continue
        cv = CVector(cand, {divs[i]: int(values[i]) for i in range(len(divs))})
        assignment = {f"c_{d}": v for d, v in cv.c.items()}
        if satisfies(all_constraints, assignment):
            out.append(cv)
    out.sort(key=lambda cv: cv.as_tuple())
    return out


def nontrivial(cand: CandidateLattice, cv: CVector) -> bool:
    """True when some 0 < c_d < N(D_d,1): the pole data cannot come from a
    form with full class multiplicities (those lift from a smaller input)."""
    return any(
        0 < cv.c[d] < count_norm(cand.D, d, 1) for d in cand.divisors
    )
