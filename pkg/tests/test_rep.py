"""Tests for the decategorified skew Howe oracle."""

import math
from itertools import product

import pytest

from slfoam.exactalg import DomainError, LaurentPoly, qbinom, qint
from slfoam.rep import (
    GlWeight,
    LMatrix,
    act_divided,
    decat_invariant,
    weight_basis,
)
from slfoam.web import LadderWeb, Rung, TangleDiagram


def admissible_weights(n, m):
    for entries in product(range(n + 1), repeat=m):
        yield GlWeight(n, entries)


class TestWeightBasis:
    def test_cardinality(self):
        for n in (2, 3):
            for w in admissible_weights(n, 2):
                expect = math.prod(math.comb(n, a) for a in w.entries)
                assert len(weight_basis(w)) == expect

    def test_deterministic_lex_order(self):
        w = GlWeight(2, (1, 1))
        basis = weight_basis(w)
        assert basis[0] == ((1,), (1,))
        assert basis == tuple(sorted(basis))

    def test_inadmissible_empty(self):
        assert weight_basis(GlWeight(2, (3, 0))) == ()


class TestActDivided:
    def test_one_dimensional_transition(self):
        w = GlWeight(2, (0, 1))
        mat = act_divided("E", 1, 1, w)
        assert len(mat.source) == 2 and len(mat.target) == 2
        # E_1 moves the single vector from slot 2 to slot 1; each of the
        # two states maps to the corresponding target state with
        # coefficient 1.
        for c, state in enumerate(mat.source):
            col = [mat.rows[r][c] for r in range(len(mat.target))]
            nonzero = [x for x in col if not x.is_zero()]
            assert nonzero == [LaurentPoly.one()]

    def test_sl2_triple_exhaustive(self):
        # (E_i F_i - F_i E_i) = [lambda_i] id on every admissible weight,
        # n <= 4, m <= 3.
        for n in range(2, 5):
            for m in (2, 3):
                for w in admissible_weights(n, m):
                    for i in range(1, m):
                        lam = w.lam(i)
                        basis = weight_basis(w)
                        dn = w.apply("F", i, 1)
                        up = w.apply("E", i, 1)
                        ef = LMatrix.zero(basis, basis)
                        fe = LMatrix.zero(basis, basis)
                        if dn is not None:
                            ef = act_divided("E", i, 1, dn) @ act_divided("F", i, 1, w)
                        if up is not None:
                            fe = act_divided("F", i, 1, up) @ act_divided("E", i, 1, w)
                        diff = ef - fe
                        expect = LMatrix.identity(basis).scaled(qint(lam))
                        assert diff == expect, (n, w, i)

    def test_distant_commutation(self):
        n, m = 3, 4
        for w in admissible_weights(n, m):
            w1 = w.apply("E", 1, 1)
            w3 = w.apply("E", 3, 1)
            if w1 is None or w3 is None:
                continue
            lhs = act_divided("E", 3, 1, w1) @ act_divided("E", 1, 1, w)
            rhs = act_divided("E", 1, 1, w3) @ act_divided("E", 3, 1, w)
            assert lhs.rows == rhs.rows

    def test_serre_relation(self):
        # E_1^{(2)} E_2 - E_1 E_2 E_1 + E_2 E_1^{(2)} = 0 on small weights.
        n, m = 3, 3
        for w in admissible_weights(n, m):
            def comp(ops):
                cur = w
                mats = []
                for side, i, k in ops:
                    nxt = cur.apply(side, i, k)
                    if nxt is None:
                        return None
                    mats.append(act_divided(side, i, k, cur))
                    cur = nxt
                out = mats[0]
                for mmat in mats[1:]:
                    out = mmat @ out
                return out

            t1 = comp([("E", 2, 1), ("E", 1, 2)])
            t2 = comp([("E", 1, 1), ("E", 2, 1), ("E", 1, 1)])
            t3 = comp([("E", 1, 2), ("E", 2, 1)])
            terms = [t for t in (t1, t2, t3) if t is not None]
            if not terms:
                continue
            # All defined terms share source/target; sum with signs.
            total = None
            for t, sgn in ((t1, 1), (t2, -1), (t3, 1)):
                if t is None:
                    continue
                tt = t.scaled(LaurentPoly.const(sgn))
                total = tt if total is None else total + tt
            assert total.is_zero(), w

    def test_divided_power_factorization(self):
        # E_i o E_i = [2] E_i^{(2)} on a random admissible weight, n=3, m=2.
        w = GlWeight(3, (1, 2))
        mid = w.apply("E", 1, 1)
        lhs = act_divided("E", 1, 1, mid) @ act_divided("E", 1, 1, w)
        rhs = act_divided("E", 1, 2, w).scaled(qint(2))
        assert lhs.rows == rhs.rows

    def test_bad_index(self):
        with pytest.raises(DomainError):
            act_divided("E", 5, 1, GlWeight(2, (1, 1)))


class TestEvalClosedWeb:
    def test_identity_web(self):
        from slfoam.rep import eval_closed_web
        w = LadderWeb(2, GlWeight(2, (2, 0)), ())
        assert eval_closed_web(w) == LaurentPoly.one()

    def test_circle_is_quantum_binomial(self):
        from slfoam.rep import eval_closed_web
        # F_1^(a) then E_1^(a) on [n, 0]: a colored circle fused to an
        # n-line; evaluates to [n choose a] up to a recorded sign.
        for n in (2, 3, 4):
            for a in range(1, n):
                w = LadderWeb(n, GlWeight(n, (n, 0)),
                              (Rung("F", 1, a), Rung("E", 1, a)))
                val = eval_closed_web(w)
                expect = qbinom(n, a)
                assert val == expect or val == -expect, (n, a, val)

    def test_inadmissible_midweight_is_zero(self):
        from slfoam.rep import eval_closed_web
        w = LadderWeb(2, GlWeight(2, (2, 0)),
                      (Rung("E", 1, 1),))
        assert eval_closed_web(w) == LaurentPoly.zero()

    def test_nontrivial_endpoint_rejected(self):
        from slfoam.rep import eval_closed_web
        w = LadderWeb(2, GlWeight(2, (1, 1)), ())
        with pytest.raises(DomainError):
            eval_closed_web(w)


class TestDecatInvariant:
    def test_unknot_all_colors(self):
        for n in (2, 3, 4):
            for a in range(1, n):
                d = TangleDiagram(1, (), (a,))
                val = decat_invariant(d, (a,), n)
                expect = qbinom(n, a)
                assert val == expect or val == -expect, (n, a, val)

    def test_uncolored_unknot_is_qint_n(self):
        for n in (2, 3, 4):
            d = TangleDiagram(1, ())
            val = decat_invariant(d, (1,), n)
            assert val == qint(n) or val == -qint(n)

    def test_unlink_two_components(self):
        n = 2
        d = TangleDiagram(2, ())
        val = decat_invariant(d, (1, 1), n)
        sq = qint(2) * qint(2)
        assert val == sq or val == -sq

    def test_r2_invariance(self):
        # sigma_1^3 closure vs the 5-crossing diagram with an inserted
        # R2 pair (same strands, same writhe and framing).
        for n in (2, 3):
            d1 = TangleDiagram(2, (1, 1, 1))
            d2 = TangleDiagram(2, (1, 1, 1, 1, -1))
            v1 = decat_invariant(d1, (1, 1), n)
            v2 = decat_invariant(d2, (1, 1), n)
            assert v1 == v2, (n, v1, v2)

    def test_conjugation_invariance(self):
        for n in (2, 3):
            d1 = TangleDiagram(3, (1, -2, 1, -2))
            d2 = TangleDiagram(3, (-2, 1, -2, 1))
            v1 = decat_invariant(d1, (1, 1, 1), n)
            v2 = decat_invariant(d2, (1, 1, 1), n)
            assert v1 == v2, (n, v1, v2)

    def test_mirror_bar_symmetry(self):
        # The invariant of the mirror is the bar involution, up to the
        # same global unit convention.
        n = 2
        v_left = decat_invariant(TangleDiagram(2, (-1, -1, -1)), (1, 1), n)
        v_right = decat_invariant(TangleDiagram(2, (1, 1, 1)), (1, 1), n)
        assert v_left == v_right.bar() or v_left == -v_right.bar()

    def test_trefoil_value_is_kauffman_bracket_like(self):
        # n=2 left trefoil: must agree with the Jones polynomial of the
        # trefoil up to a global unit +-q^k.  Jones (unnormalized, with
        # unknot -> q + q^{-1}) of the left trefoil:
        # q^{-1} + q^{-3} + q^{-5} - q^{-9} up to convention; we check
        # unit-equivalence by dividing out.
        n = 2
        val = decat_invariant(TangleDiagram(2, (-1, -1, -1)), (1, 1), n)
        jones = LaurentPoly({-1: 1, -3: 1, -5: 1, -9: -1})
        ok = False
        for sign in (1, -1):
            for shift in range(-12, 13):
                cand = LaurentPoly({e + shift: sign * c
                                    for e, c in jones.coeffs.items()})
                if val == cand:
                    ok = True
        assert ok, val
