"""Exactness and embedding checks for the cyclotomic scalar type."""

import cmath
import random
from fractions import Fraction

import pytest
import sympy

from refmod.cyclo import (
    CycNum,
    cyc,
    cyclotomic_poly,
    divisors,
    euler_phi,
    factorize,
    kronecker,
    root_of_unity,
    sqrt_pos,
)


def embed(x: CycNum) -> complex:
    return x.complex_value()


class TestRootsOfUnity:
    def test_identity(self):
        assert root_of_unity(0, 1) == cyc(1)

    def test_half(self):
        assert root_of_unity(1, 2) == cyc(-1)

    def test_quarter_is_i(self):
        i = root_of_unity(1, 4)
        assert abs(embed(i) - 1j) < 1e-12
        assert i * i == cyc(-1)

    def test_depends_only_on_residue(self):
        assert root_of_unity(7, 5) == root_of_unity(2, 5)
        assert root_of_unity(-1, 5) == root_of_unity(4, 5)

    @pytest.mark.parametrize("b", range(1, 31))
    def test_power_collapses(self, b):
        for a in (1, b - 1, b // 2):
            assert root_of_unity(a, b) ** b == cyc(1)

    def test_embedding_grid(self):
        for b in range(1, 25):
            for a in range(b):
                z = embed(root_of_unity(a, b))
                assert abs(z - cmath.exp(2j * cmath.pi * a / b)) < 1e-12


class TestSqrt:
    def test_trivial(self):
        assert sqrt_pos(1) == cyc(1)
        assert sqrt_pos(4) == cyc(2)

    def test_sqrt2_form(self):
        r = sqrt_pos(2)
        assert r.order == 8
        assert r.coeffs == {1: Fraction(1), 7: Fraction(1)} or str(r) == "z8 - z8^3"
        assert abs(embed(r) - 1.4142135623730951) < 1e-12

    def test_display_example(self):
        assert str(sqrt_pos(2) / 2) == "1/2*z8 - 1/2*z8^3"

    @pytest.mark.parametrize("n", list(range(1, 26)) + [30, 47, 60, 97, 100])
    def test_square_is_n(self, n):
        assert sqrt_pos(n) * sqrt_pos(n) == cyc(n)
        assert abs(embed(sqrt_pos(n)) - n**0.5) < 1e-10

    def test_multiplicative(self):
        for m in range(1, 101):
            for n in (2, 3, 7, 50):
                assert sqrt_pos(m) * sqrt_pos(n) == sqrt_pos(m * n)

    def test_gauss_sum_identity(self):
        i = root_of_unity(1, 4)
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            g = sum(
                (root_of_unity(h, p) * kronecker(h, p) for h in range(1, p)),
                cyc(0),
            )
            expected = sqrt_pos(p) if p % 4 == 1 else i * sqrt_pos(p)
            assert g == expected


class TestKronecker:
    def test_zero_cases(self):
        assert kronecker(0, 3) == 0
        assert kronecker(6, 3) == 0
        assert kronecker(1, 0) == 1
        assert kronecker(-1, 0) == 1
        assert kronecker(5, 0) == 0

    def test_small_values(self):
        assert kronecker(2, 7) == 1  # 2 = 4^2 mod 7
        assert kronecker(3, 5) == -1  # squares mod 5 are {1, 4}
        assert kronecker(2, 2) == 0
        assert kronecker(3, 2) == -1
        assert kronecker(7, 2) == 1
        assert kronecker(-1, -1) == -1

    def test_against_jacobi(self):
        for n in range(1, 60, 2):
            for a in range(-20, 60):
                assert kronecker(a, n) == int(sympy.jacobi_symbol(a, n))

    def test_multiplicative(self):
        rng = random.Random(7)
        for _ in range(300):
            a, b = rng.randint(-30, 30), rng.randint(-30, 30)
            n, m = rng.randint(-30, 30), rng.randint(-30, 30)
            assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)
            if n != 0 and m != 0:
                assert kronecker(a, n * m) == kronecker(a, n) * kronecker(a, m)


class TestCyclotomicPolys:
    @pytest.mark.parametrize("n", list(range(1, 61)) + [105])
    def test_against_sympy(self, n):
        x = sympy.symbols("x")
        ours = cyclotomic_poly(n)
        theirs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(ours) == [int(c) for c in theirs]

    def test_helpers(self):
        assert divisors(12) == [1, 2, 3, 4, 6, 12]
        assert euler_phi(1) == 1
        assert euler_phi(24) == 8
        assert factorize(360) == {2: 3, 3: 2, 5: 1}


class TestFieldArithmetic:
    def test_equality_across_orders(self):
        assert sqrt_pos(2) * sqrt_pos(3) == sqrt_pos(6)
        assert root_of_unity(1, 2) + 1 == cyc(0)
        assert root_of_unity(1, 3) + root_of_unity(2, 3) == cyc(-1)

    def test_closure_order_divides_lcm(self):
        a = root_of_unity(1, 8)
        b = root_of_unity(1, 3)
        assert 24 % (a * b).order == 0
        assert 24 % (a + b).order == 0

    def test_rational_demotion(self):
        v = root_of_unity(1, 5)
        total = sum((v**k for k in range(5)), cyc(0))
        assert total.is_zero()
        assert total.order == 1
        w = root_of_unity(1, 7) * root_of_unity(6, 7)
        assert w.is_rational() and w.rational_value() == 1

    def test_inverse(self):
        rng = random.Random(11)
        atoms = [sqrt_pos(2), sqrt_pos(3), root_of_unity(1, 8), root_of_unity(1, 3), cyc(Fraction(3, 7))]
        for _ in range(40):
            v = cyc(0)
            while v.is_zero():
                v = sum((rng.choice(atoms) * rng.randint(-3, 3) for _ in range(3)), cyc(0))
            assert v * v.inverse() == cyc(1)
            assert v / v == cyc(1)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            cyc(1) / cyc(0)
        with pytest.raises(ZeroDivisionError):
            cyc(0).inverse()

    def test_conjugation(self):
        for v in (sqrt_pos(5), root_of_unity(2, 7), sqrt_pos(3) + root_of_unity(1, 12)):
            assert abs(embed(v.conj()) - embed(v).conjugate()) < 1e-12
        g = sum((root_of_unity(h, 7) * kronecker(h, 7) for h in range(1, 7)), cyc(0))
        assert g * g.conj() == cyc(7)  # |Gauss sum|^2 = p

    def test_pow_negative(self):
        z = root_of_unity(1, 12)
        assert z**-1 == root_of_unity(-1, 12)
        assert z**-5 == z.conj() ** 5

    def test_immutability(self):
        v = sqrt_pos(2)
        with pytest.raises(AttributeError):
            v.order = 3


class TestRandomChains:
    def test_embedding_agreement(self):
        """Exact arithmetic tracks the complex embedding on random chains."""
        rng = random.Random(20260817)
        atoms = [
            cyc(1),
            cyc(-2),
            cyc(Fraction(1, 2)),
            root_of_unity(1, 8),
            root_of_unity(1, 12),
            root_of_unity(1, 5),
            sqrt_pos(2),
            sqrt_pos(3),
        ]
        for _ in range(1000):
            exact = rng.choice(atoms)
            approx = embed(exact)
            depth = rng.randint(1, 20)
            for _ in range(depth):
                a = rng.choice(atoms)
                if rng.random() < 0.6 or abs(approx) > 1e4:
                    exact = exact + a
                    approx = approx + embed(a)
                else:
                    exact = exact * a
                    approx = approx * embed(a)
            assert abs(embed(exact) - approx) < 1e-10
            # canonical-form equality agrees with embedding equality
            assert exact.is_zero() == (abs(approx) < 1e-10)
