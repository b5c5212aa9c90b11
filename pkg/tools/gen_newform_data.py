"""Generate the bundled cusp-form data (data/newforms/).

The obstruction pipeline consumes, per space S_k(Gamma_0(N), chi), either a
certified dimension-zero record or an explicit basis. Basis entries are eta
quotients wherever eta quotients span the space (the generic squarefree-level
case) and CM theta series for the two spaces where the mod-24 lattice
conditions forbid any eta quotient (levels 3 and 7, odd weight).

This script
 1. certifies each dimension with tools/dimensions.py (itself cross-checked
    against the classical trivial-character formula),
 2. enumerates holomorphic cusp eta quotients with the right nebentypus and
    certifies linear independence by exact rank over the rationals,
 3. builds the two imaginary-quadratic theta newforms by summing mu^(k-1)
    q^(N(mu)) over the ring of integers, verifying Hecke multiplicativity,
 4. writes data/newforms/spaces.json plus one .nf file per theta newform.

Spaces whose eta search comes up short are recorded with complete=false and
whatever partial basis was found; the pipeline then emits the constraints it
can and marks the report. Deterministic output, safe to re-run.
"""

import itertools
import json
import math
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.dirname(__file__))

from dimensions import dim_cusp_forms
from refmod.arithforms import DirichletCharacter, NewformData, dump_newform, load_newform
from refmod.cyclo import cyc, divisors, kronecker, prime_factors
from refmod.eta import EtaQuotient, is_cusp_form

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "newforms")
BOUND = 120  # coefficients a_1 .. a_BOUND stored per theta newform


# ------------------------------------------------------------- eta searches

def eta_nebentypus(exps, k, N):
    """Character components mod N of an even-weight eta quotient, else None.

    The nebentypus is d -> kronecker((-1)^k s, d) with s = prod delta^r.
    Writing t for the squarefree kernel of (-1)^k s, the symbol (t|.) is a
    character of squarefree modulus iff t is odd and t = 1 mod 4, and then
    it factors into Legendre components at the primes dividing t.
    """
    par = {}
    for d, r in exps.items():
        for p in prime_factors(d):
            e, x = 0, d
            while x % p == 0:
                x //= p
                e += 1
            par[p] = (par.get(p, 0) + e * r) % 2
    t = (-1) ** k
    for p, v in par.items():
        if v:
            t *= p
    if t % 2 == 0 or t % 4 != 1:
        return None
    comp = {p: "trivial" for p in prime_factors(N)}
    for p in prime_factors(abs(t)):
        if N % p:
            return None
        comp[p] = "legendre"
    return comp


def eta_search(N, k, comp, cap):
    """Holomorphic cusp eta quotients of weight k, level N, nebentypus comp.

    Exponents are enumerated with the weight equation eliminating the last
    divisor; for level 30 the two mod-24 conditions also eliminate two more,
    which keeps the eight-divisor search enumerable.
    """
    divs = divisors(N)
    out = []

    def push(vec):
        if sum(d * r for d, r in vec.items()) % 24:
            return
        if sum((N // d) * r for d, r in vec.items()) % 24:
            return
        if eta_nebentypus(vec, k, N) != comp:
            return
        E = EtaQuotient(N, {d: r for d, r in vec.items() if r})
        if not E.exps:
            return
        if is_cusp_form(E):
            out.append(E)

    if len(divs) <= 4:
        for rs in itertools.product(range(-cap, cap + 1), repeat=len(divs) - 1):
            r_last = 2 * k - sum(rs)
            if abs(r_last) > 2 * cap:
                continue
            vec = dict(zip(divs[:-1], rs))
            vec[divs[-1]] = r_last
            push(vec)
        return out

    assert N == 30
    free5 = [1, 2, 3, 5, 6]
    for rs in itertools.product(range(-cap, cap + 1), repeat=5):
        S0 = 2 * k - sum(rs)
        A0 = -sum(d * r for d, r in zip(free5, rs)) % 24
        B0 = -sum((30 // d) * r for d, r in zip(free5, rs)) % 24
        # with a, b, c = r_10, r_15, r_30: a+b+c = S0, 10a+15b+30c = A0 (24),
        # 3a+2b+c = B0 (24); eliminating c gives b = B0-S0-2a (24) and
        # 14a = 9(B0-S0) - A0 + 30 S0 (24).
        RHS = (9 * (B0 - S0) - A0 + 30 * S0) % 24
        for a0 in range(24):
            if (14 * a0 - RHS) % 24:
                continue
            a = a0 - 24 * ((a0 + 2 * cap) // 24)
            while a <= 2 * cap:
                bmod = (B0 - S0 - 2 * a) % 24
                b = bmod - 24 * ((bmod + 2 * cap) // 24)
                while b <= 2 * cap:
                    c = S0 - a - b
                    if abs(c) <= 2 * cap:
                        vec = dict(zip(free5, rs))
                        vec[10], vec[15], vec[30] = a, b, c
                        push(vec)
                    b += 24
                a += 24
    return out


def integer_coeff_rows(forms, prec):
    rows = []
    for E in forms:
        f = E.expand(Fraction(prec + 1))
        row = []
        for n in range(1, prec + 1):
            c = f.coeff(Fraction(n))
            assert c.is_rational()
            row.append(c.coeffs.get(0, Fraction(0)))
        rows.append(row)
    return rows


def greedy_basis(forms, dim, prec):
    """Pick an independent subset of size <= dim, smallest quotients first."""
    order = sorted(range(len(forms)),
                   key=lambda i: (sum(abs(r) for r in forms[i].exps.values()),
                                  str(forms[i])))
    rows = integer_coeff_rows([forms[i] for i in order], prec)
    reduced = []
    picked = []
    for idx, row in zip(order, rows):
        v = list(row)
        for b in reduced:
            j = next(i for i, x in enumerate(b) if x)
            if v[j]:
                f = v[j] / b[j]
                v = [x - f * y for x, y in zip(v, b)]
        if any(v):
            reduced.append(v)
            picked.append(idx)
        if len(picked) == dim:
            break
    return [forms[i] for i in picked]


# ----------------------------------------------------------- CM theta forms

def cm_theta(disc, weight, bound):
    """Sum of mu^(weight-1) q^(N mu) over the integers of Q(sqrt(disc)),
    divided by the unit count — a normalized newform of level |disc| and
    nebentypus (disc|.). Only disc = -3 and disc = -7 arise; both rings are
    Z[phi] with phi = (1+sqrt(disc))/2, phi^2 = phi + (disc-1)/4."""
    assert disc in (-3, -7)
    units = 6 if disc == -3 else 2
    t = (disc - 1) // 4
    acc = {}
    omega = {}
    R = int(math.isqrt(-4 * bound // disc)) + 2
    for a in range(-2 * R, 2 * R + 1):
        for b in range(-2 * R, 2 * R + 1):
            n = a * a + a * b - t * b * b
            if n <= 0 or n > bound:
                continue
            x, y = 1, 0  # x + y*phi = mu^m along the loop
            for _ in range(weight - 1):
                x, y = x * a + y * b * t, x * b + y * a + y * b
            acc[n] = acc.get(n, 0) + x
            omega[n] = omega.get(n, 0) + y
    coeffs = {}
    for n in sorted(acc):
        assert omega[n] == 0, (disc, n)
        assert acc[n] % units == 0
        if acc[n]:
            coeffs[n] = cyc(Fraction(acc[n], units))
    chi = DirichletCharacter({-disc: "legendre"})
    return NewformData(-disc, weight, chi, coeffs, bound)


def verify_hecke(g: NewformData):
    """a_{mn} = a_m a_n for coprime m, n and the p-power recursion."""
    for m in range(2, g.bound + 1):
        for n in range(2, g.bound // m + 1):
            if math.gcd(m, n) == 1:
                assert g.a(m * n) == g.a(m) * g.a(n), (g.level, m, n)
    for p in (2, 3, 5, 7):
        e = 2
        while p ** e <= g.bound:
            lhs = g.a(p ** e)
            rhs = g.a(p) * g.a(p ** (e - 1))
            if g.level % p:
                rhs = rhs - g.character(p) * Fraction(p ** (g.weight - 1)) * g.a(p ** (e - 2))
            assert lhs == rhs, (g.level, p, e)
            e += 1


# --------------------------------------------------------------------- main

L, T = "legendre", "trivial"

# dimension-zero spaces the pipeline may be asked for
ZERO_SPACES = [
    (1, 14, {}),
    (2, 6, {}),
    (3, 4, {}),
    (3, 5, {3: L}),
    (5, 4, {5: L}),
    (6, 3, {2: T, 3: L}),
]

# spaces to span by eta quotients: (N, k, comp, search cap)
ETA_SPACES = [
    (1, 12, {}, 24),
    (2, 10, {}, 24),
    (3, 6, {}, 24),
    (3, 8, {}, 24),
    (5, 4, {}, 24),
    (5, 6, {}, 24),
    (5, 6, {5: L}, 24),
    (6, 4, {2: T, 3: T}, 12),
    (6, 5, {2: T, 3: L}, 12),
    (6, 6, {2: T, 3: T}, 12),
    (7, 4, {7: T}, 24),
    (10, 4, {2: T, 5: T}, 12),
    (10, 4, {2: T, 5: L}, 16),
    (11, 4, {11: T}, 24),
    (14, 3, {2: T, 7: L}, 12),
    (15, 3, {3: L, 5: L}, 12),
    (15, 3, {3: L, 5: T}, 16),
    (30, 3, {2: T, 3: L, 5: L}, 5),
    (30, 3, {2: T, 3: L, 5: T}, 5),
]

# one-dimensional spaces spanned by an imaginary-quadratic theta series
THETA_SPACES = [
    (-3, 3, 7),
    (-7, 7, 5),
]


def normalize_comp(N, comp):
    return {p: comp.get(p, "trivial") for p in prime_factors(N)}


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    spaces = []

    def record(N, k, comp, dim, basis, complete):
        spaces.append({
            "level": N,
            "weight": k,
            "character": {str(p): t for p, t in sorted(normalize_comp(N, comp).items())},
            "dim": dim,
            "complete": complete,
            "basis": basis,
        })

    for N, k, comp in ZERO_SPACES:
        dim = dim_cusp_forms(N, k, comp)
        assert dim == 0, (N, k, comp, dim)
        record(N, k, comp, 0, [], True)
        print(f"S_{k}({N}, {comp or 'trivial'}) = 0")

    for N, k, comp, cap in ETA_SPACES:
        full = normalize_comp(N, comp)
        dim = dim_cusp_forms(N, k, comp)
        found = eta_search(N, k, full, cap)
        prec = max(3 * dim + 12, 24)
        basis = greedy_basis(found, dim, prec)
        complete = len(basis) == dim
        record(N, k, comp, dim,
               [{"type": "eta", "exps": {str(d): r for d, r in E.exps.items()}}
                for E in basis],
               complete)
        tag = "complete" if complete else f"PARTIAL {len(basis)}/{dim}"
        print(f"S_{k}({N}, {comp or 'trivial'}): dim {dim}, "
              f"{len(found)} quotients, {tag}")
        for E in basis:
            print(f"    {E}")

    for disc, N, k in THETA_SPACES:
        comp = {N: L}
        dim = dim_cusp_forms(N, k, comp)
        assert dim == 1, (disc, dim)
        g = cm_theta(disc, k, BOUND)
        verify_hecke(g)
        for p in (2, 3, 5, 7, 11, 13):
            if p != N and kronecker(disc, p) == -1:
                assert g.a(p).is_zero(), (disc, p)
        fname = f"nf_{N}_{k}_cm.nf"
        with open(os.path.join(OUT_DIR, fname), "w") as fh:
            fh.write(dump_newform(g))
        with open(os.path.join(OUT_DIR, fname)) as fh:
            g2 = load_newform(fh.read())
        assert g2.coeffs == g.coeffs and g2.level == g.level
        record(N, k, comp, 1, [{"type": "newform", "file": fname, "embed": 1}], True)
        print(f"S_{k}({N}, {comp}): CM theta newform -> {fname}")

    with open(os.path.join(OUT_DIR, "spaces.json"), "w") as fh:
        json.dump(spaces, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote spaces.json with {len(spaces)} space records")


if __name__ == "__main__":
    main()
