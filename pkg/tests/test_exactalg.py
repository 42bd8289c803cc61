"""Tests for the exact arithmetic backbone, against brute-force oracles."""

from fractions import Fraction
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, settings, strategies as st

from slfoam.exactalg import (
    DomainError,
    LaurentPoly,
    Partition,
    Scalar,
    SymFunc,
    dual_complement,
    lr_coeff,
    partitions_in_box,
    partitions_of,
    qbinom,
    qfact,
    qint,
    schur_expand_eh,
    schur_multiply,
)

# ---------------------------------------------------------------------------
# Oracles (written independently of the implementation)
# ---------------------------------------------------------------------------


def oracle_qbinom(n, k):
    """q-Pascal recursion: [n k] = q^k [n-1 k] + q^{k-n} [n-1 k-1]."""
    if k < 0 or k > n:
        return LaurentPoly.zero()
    if k == 0 or k == n:
        return LaurentPoly.one()
    return oracle_qbinom(n - 1, k).shifted(k) + oracle_qbinom(n - 1, k - 1).shifted(k - n)


def oracle_dual_complement(alpha, a, b):
    """Box-complement-then-transpose by explicit cell enumeration."""
    cells = {(r, c) for r in range(a) for c in range(b)
             if c >= alpha.part(r)}
    # rotate 180 degrees: (r, c) -> (a-1-r, b-1-c), then transpose
    rot = {(a - 1 - r, b - 1 - c) for (r, c) in cells}
    cols = [sum(1 for (r, c) in rot if c == j and r < a) for j in range(b)]
    # column lengths of the rotated diagram = parts of the transpose
    parts = []
    for j in range(b):
        parts.append(sum(1 for (r, c) in rot if c >= 0 and r >= 0 and (r, c) in rot and c < b and r < a and c == j))
    del parts
    # row lengths of rotated diagram:
    rows = [sum(1 for (r, c) in rot if r == i) for i in range(a)]
    # transpose of the partition with those row lengths
    rows = sorted((x for x in rows if x), reverse=True)
    transpose = [sum(1 for x in rows if x > j) for j in range(rows[0])] if rows else []
    assert cols is not None
    return Partition(transpose)


def monomials(alpha, nvars):
    """
    Monomial expansion of the Schur polynomial pi_alpha in ``nvars``
    variables via semistandard Young tableaux: returns a dict mapping
    exponent tuples to multiplicities.
    """
    if len(alpha) > nvars:
        return {}
    rows = len(alpha)
    out = {}

    def fill(r, c, tab):
        if r == rows:
            expo = [0] * nvars
            for row in tab:
                for v in row:
                    expo[v] += 1
            key = tuple(expo)
            out[key] = out.get(key, 0) + 1
            return
        if c == alpha[r]:
            fill(r + 1, 0, tab + [[]])
            return
        lo = tab[r][c - 1] if c > 0 else 0
        if r > 0 and c < alpha[r - 1]:
            lo = max(lo, tab[r - 1][c] + 1)
        for v in range(lo, nvars):
            tab[r].append(v)
            fill(r, c + 1, tab)
            tab[r].pop()

    fill(0, 0, [[]])
    return out


def symfunc_monomials(f):
    """Expand a SymFunc into monomials for brute-force comparison."""
    out = {}
    for alpha, c in f.terms.items():
        for expo, mult in monomials(alpha, f.nvars).items():
            out[expo] = out.get(expo, Fraction(0)) + c * mult
    return {k: v for k, v in out.items() if v != 0}


def multiply_monomials(m1, m2):
    out = {}
    for e1, c1 in m1.items():
        for e2, c2 in m2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# Scalars and Laurent polynomials
# ---------------------------------------------------------------------------


class TestScalar:
    def test_exact_arithmetic(self):
        a = Scalar(Fraction(1, 3))
        b = Scalar(Fraction(1, 6))
        assert (a + b).value == Fraction(1, 2)
        assert (a - b).value == Fraction(1, 6)
        assert (a * b).value == Fraction(1, 18)
        assert (a / b).value == 2

    def test_integral_mode_rejects_fraction(self):
        with pytest.raises(DomainError):
            Scalar(Fraction(1, 2), integral=True)

    def test_integral_mode_division_by_nonunit(self):
        a = Scalar(4, integral=True)
        b = Scalar(2, integral=True)
        with pytest.raises(DomainError):
            a / b
        assert (a / Scalar(-1, integral=True)).value == -4


class TestLaurentPoly:
    def test_qint_trivial(self):
        assert qint(1) == LaurentPoly.one()
        assert qint(0) == LaurentPoly.zero()
        assert qint(2) == LaurentPoly({1: 1, -1: 1})
        assert qint(-3) == -qint(3)

    def test_qbinom_trivial(self):
        assert qbinom(2, 1) == LaurentPoly({1: 1, -1: 1})

    def test_qbinom_derived(self):
        assert qbinom(4, 2) == LaurentPoly({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})

    def test_qbinom_out_of_range(self):
        with pytest.raises(DomainError):
            qbinom(2, 3)
        with pytest.raises(DomainError):
            qbinom(2, -1)

    def test_qbinom_against_pascal_oracle(self):
        for n in range(9):
            for k in range(n + 1):
                assert qbinom(n, k) == oracle_qbinom(n, k)

    def test_qbinom_symmetry_and_specialization(self):
        import math
        for n in range(5):
            for k in range(n + 1):
                b = qbinom(n, k)
                assert b == qbinom(n, n - k)
                assert b == b.bar()
                assert b.at_one() == math.comb(n, k)

    def test_divexact_remainder(self):
        with pytest.raises(DomainError):
            (qint(2) + 1).divexact(qint(2))

    @given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)), max_size=5),
           st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)), max_size=5),
           st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)), max_size=5))
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, t1, t2, t3):
        def build(t):
            p = LaurentPoly.zero()
            for e, c in t:
                p = p + LaurentPoly({e: c})
            return p

        f, g, h = build(t1), build(t2), build(t3)
        assert f + g == g + f
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h

    def test_no_stored_zeros(self):
        p = LaurentPoly({1: 1}) - LaurentPoly({1: 1})
        assert p.coeffs == {}
        assert p.is_zero()


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


class TestPartition:
    def test_validation(self):
        with pytest.raises(DomainError):
            Partition((1, 2))
        assert Partition((3, 1)).parts == (3, 1)
        assert Partition(()).parts == ()

    def test_box_membership(self):
        assert Partition((2, 2)).in_box(2, 2)
        assert not Partition((3,)).in_box(2, 2)
        assert not Partition((1, 1, 1)).in_box(2, 3)

    def test_conjugate(self):
        assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))
        assert Partition(()).conjugate() == Partition(())

    def test_dual_complement_trivial(self):
        assert dual_complement(Partition(()), 2, 3) == Partition((2, 2, 2))
        assert dual_complement(Partition((3, 3)), 2, 3) == Partition(())
        assert dual_complement(Partition((1,)), 1, 2) == Partition((1,))

    def test_dual_complement_outside_box(self):
        with pytest.raises(DomainError):
            dual_complement(Partition((3,)), 1, 2)

    def test_dual_complement_involution_exhaustive(self):
        for a in range(5):
            for b in range(5):
                for alpha in partitions_in_box(a, b):
                    image = dual_complement(alpha, a, b)
                    assert image.in_box(b, a)
                    assert image == oracle_dual_complement(alpha, a, b)
                    assert dual_complement(image, b, a) == alpha

    def test_partitions_in_box_count(self):
        import math
        for a in range(5):
            for b in range(5):
                count = sum(1 for _ in partitions_in_box(a, b))
                assert count == math.comb(a + b, a)

    def test_partitions_of(self):
        assert sorted(p.parts for p in partitions_of(4)) == sorted(
            [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])
        assert [p.parts for p in partitions_of(3, max_parts=1)] == [(3,)]


# ---------------------------------------------------------------------------
# Littlewood-Richardson and Schur arithmetic
# ---------------------------------------------------------------------------


class TestLR:
    def test_trivial_cases(self):
        e = Partition(())
        assert lr_coeff(e, Partition((1,)), Partition((1,))) == 1
        assert lr_coeff(Partition((1,)), Partition((1,)), Partition((2,))) == 1
        assert lr_coeff(Partition((1,)), Partition((1,)), Partition((1, 1))) == 1
        assert lr_coeff(Partition((1,)), Partition((1,)), Partition((3,))) == 0

    def test_pieri_rule(self):
        # s_alpha * s_(k) : gamma/alpha must be a horizontal strip.
        for alpha in partitions_in_box(3, 3):
            for k in range(1, 4):
                for gamma in partitions_of(alpha.size + k, max_parts=4):
                    horiz = (gamma.contains(alpha)
                             and all(gamma.part(r + 1) <= alpha.part(r)
                                     for r in range(len(gamma))))
                    expected = 1 if horiz else 0
                    assert lr_coeff(alpha, Partition((k,)), gamma) == expected

    def test_symmetry_in_first_two_arguments(self):
        parts = list(partitions_in_box(2, 2))
        for alpha, beta in product(parts, parts):
            for gamma in partitions_of(alpha.size + beta.size, max_parts=4):
                assert lr_coeff(alpha, beta, gamma) == lr_coeff(beta, alpha, gamma)

    def test_known_value_with_multiplicity(self):
        # c_{(2,1),(2,1)}^{(3,2,1)} = 2, the classic multiplicity-2 case.
        a = Partition((2, 1))
        assert lr_coeff(a, a, Partition((3, 2, 1))) == 2


class TestSymFunc:
    def test_expand_eh(self):
        assert schur_expand_eh("e", 2, 3) == SymFunc.schur(3, (1, 1))
        assert schur_expand_eh("h", 2, 3) == SymFunc.schur(3, (2,))
        assert schur_expand_eh("e", 0, 2) == SymFunc.one(2)
        # e_2 in one variable vanishes
        assert schur_expand_eh("e", 2, 1).is_zero()

    def test_unit_law(self):
        f = SymFunc(3, {Partition((2, 1)): 2, Partition((1,)): -1})
        assert schur_multiply(f, SymFunc.one(3)) == f

    def test_simple_product(self):
        f = SymFunc.schur(2, (1,))
        assert schur_multiply(f, f) == SymFunc(2, {Partition((2,)): 1,
                                                   Partition((1, 1)): 1})

    def test_truncation_by_variable_count(self):
        f = SymFunc.schur(1, (1,))
        # s_1 * s_1 = s_2 + s_11, but s_11 = 0 in one variable
        assert schur_multiply(f, f) == SymFunc.schur(1, (2,))

    def test_variable_count_mismatch(self):
        with pytest.raises(DomainError):
            schur_multiply(SymFunc.one(1), SymFunc.one(2))

    def test_products_against_monomial_oracle(self):
        shapes = [p for p in partitions_in_box(3, 3) if p.size <= 4]
        for nvars in (1, 2, 3, 4):
            for alpha, beta in combinations_with_replacement(shapes, 2):
                f = SymFunc.schur(nvars, alpha)
                g = SymFunc.schur(nvars, beta)
                lhs = symfunc_monomials(schur_multiply(f, g))
                rhs = multiply_monomials(symfunc_monomials(f),
                                         symfunc_monomials(g))
                assert lhs == rhs, (nvars, alpha, beta)

    @given(st.integers(1, 4), st.data())
    @settings(max_examples=30, deadline=None)
    def test_commutative_associative(self, nvars, data):
        shapes = [p for p in partitions_in_box(2, 2)]
        pick = lambda: SymFunc.schur(nvars, data.draw(st.sampled_from(shapes)))
        f, g, h = pick(), pick(), pick()
        assert schur_multiply(f, g) == schur_multiply(g, f)
        assert schur_multiply(schur_multiply(f, g), h) == \
            schur_multiply(f, schur_multiply(g, h))


class TestQfact:
    def test_small(self):
        assert qfact(0) == LaurentPoly.one()
        assert qfact(2) == qint(2)
        assert qfact(3) == qint(3) * qint(2)
