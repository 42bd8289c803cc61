"""Tests for ladder webs, the tangle compiler and the input parsers."""

import pytest

from slfoam.exactalg import DomainError, LaurentPoly
from slfoam.rep import GlWeight, LMatrix, act_divided, weight_basis
from slfoam.web import (
    CubeSkeleton,
    LadderWeb,
    ParseError,
    Rung,
    TangleDiagram,
    apply_rung,
    compile_tangle,
    framing_normalization,
    ladder_events,
    parse_braid,
    parse_pd,
)


class TestApplyRung:
    def test_basic(self):
        w = GlWeight(2, (1, 1))
        assert apply_rung(w, Rung("E", 1, 1)) == GlWeight(2, (2, 0))
        assert apply_rung(w, Rung("E", 1, 2)) is None

    def test_round_trip(self):
        w = GlWeight(3, (0, 1))
        mid = apply_rung(w, Rung("F", 1, 1))
        assert mid is None  # F out of a 0 entry is inadmissible
        w2 = GlWeight(3, (1, 0))
        mid = apply_rung(w2, Rung("F", 1, 1))
        assert mid == GlWeight(3, (0, 1))
        assert apply_rung(mid, Rung("E", 1, 1)) == w2


class TestLadderWeb:
    def test_zero_flag_and_codomain(self):
        w = LadderWeb(2, GlWeight(2, (1, 1)), (Rung("E", 1, 1),))
        assert not w.zero
        assert w.codomain == GlWeight(2, (2, 0))
        bad = LadderWeb(2, GlWeight(2, (1, 1)), (Rung("E", 1, 2),))
        assert bad.zero

    def test_word_key_exact_equality(self):
        w1 = LadderWeb(2, GlWeight(2, (1, 1)), (Rung("E", 1, 1),))
        w2 = LadderWeb(2, GlWeight(2, (1, 1)), (Rung("E", 1, 1),))
        assert w1.word_key() == w2.word_key()


class TestCompile:
    def test_uncolored_positive_crossing_complex(self):
        # closure of sigma_1 on 2 strands: each crossing is a two-term
        # complex q^{-1} (parallel) -> (dumbbell), dumbbell in degree 0.
        cube = compile_tangle(TangleDiagram(2, (1,)), 2)
        assert len(cube.crossings) == 1
        site = cube.crossings[0]
        assert site.lam == 0 and len(site.terms) == 2
        t0, t1 = site.terms
        assert (t0.h, t0.q) == (-1, -1)  # parallel with q^{-1}
        assert (t1.h, t1.q) == (0, 0)  # dumbbell in degree 0
        assert [r.k for r in t0.rungs] == [0, 0]
        assert [(r.kind, r.k) for r in t1.rungs] == [("E", 1), ("F", 1)]

    def test_uncolored_negative_crossing_complex(self):
        cube = compile_tangle(TangleDiagram(2, (-1,)), 2)
        site = cube.crossings[0]
        t0, t1 = site.terms
        assert (t1.h, t1.q) == (0, 0)  # dumbbell in degree 0
        assert (t0.h, t0.q) == (1, 1)  # parallel with q^{+1}
        # differential direction: from the dumbbell (h=0) to parallel (h=1)
        assert all(cube.vertices[a][1] + 1 == cube.vertices[b][1]
                   for a, b, _ in cube.edges)

    def test_colored_crossing_truncation_and_shift(self):
        # colors (2, 1) with n = 3: lam = 1 >= 0, global shift
        # [min]{-(min)} = [1]{-1}.
        cube = compile_tangle(TangleDiagram(2, (1,)), 3)
        # reuse machinery directly for the colored case
        from slfoam.web import _rickard_terms
        amb = GlWeight(3, (2, 1))
        terms = _rickard_terms(3, amb, 1, 1, 2, 1)
        assert [t.s for t in terms] == [0, 1]
        assert (terms[0].h, terms[0].q) == (-1, -1)
        assert (terms[1].h, terms[1].q) == (0, 0)
        assert [(r.kind, r.k) for r in terms[1].rungs] == [("E", 1), ("F", 2)]

    def test_identity_tangle_compiles_to_identity_web(self):
        cube = compile_tangle(TangleDiagram(1, ()), 3)
        assert len(cube.vertices) == 1
        web, h, q = cube.vertices[()]
        assert (h, q) == (0, 0)
        assert not web.zero
        assert web.codomain.trivial

    def test_all_vertices_share_codomain(self):
        for word, n in [((1, 1, 1), 2), ((1, -2, 1, -2), 2)]:
            r = max(abs(g) for g in word) + 1
            cube = compile_tangle(TangleDiagram(r, word), n)
            cods = {v[0].codomain for v in cube.vertices.values()}
            assert len(cods) == 1
            assert not any(v[0].zero for v in cube.vertices.values())

    def test_edge_bidegrees(self):
        cube = compile_tangle(TangleDiagram(2, (1, 1, 1)), 2)
        for a, b, ci in cube.edges:
            wa, ha, qa = cube.vertices[a]
            wb, hb, qb = cube.vertices[b]
            assert hb == ha + 1
            assert qb == qa + 1


class TestFraming:
    def test_positive_curl(self):
        assert framing_normalization(1, 2, 1) == (-2, 1)

    def test_negative_curl_general_n(self):
        for n in (2, 3, 5):
            assert framing_normalization(1, n, -1) == (n, -1)

    def test_zero_writhe(self):
        assert framing_normalization(2, 3, 0) == (0, 0)


class TestParsers:
    def test_parse_braid(self):
        assert parse_braid("1 1 1") == (2, (1, 1, 1))
        assert parse_braid("") == (1, ())
        assert parse_braid("1 -2 1 -2") == (3, (1, -2, 1, -2))

    def test_parse_braid_errors(self):
        with pytest.raises(ParseError):
            parse_braid("1 x 2")
        with pytest.raises(ParseError):
            parse_braid("0")

    def test_parse_pd_trefoil(self):
        # right trefoil in the standard edge-numbering convention
        text = "X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n"
        d = parse_pd(text)
        assert len(d.word) == 3
        assert all(abs(g) == 1 for g in d.word) and d.strands == 2
        signs = {1 if g > 0 else -1 for g in d.word}
        assert len(signs) == 1  # all three crossings same sign

    def test_parse_pd_matches_braid_invariant(self):
        from slfoam.rep import decat_invariant
        text = "X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n"
        d = parse_pd(text)
        v_pd = decat_invariant(d, d.colors, 2)
        v_pos = decat_invariant(TangleDiagram(2, (1, 1, 1)), (1, 1), 2)
        v_neg = decat_invariant(TangleDiagram(2, (-1, -1, -1)), (1, 1), 2)
        assert v_pd in (v_pos, v_neg)

    def test_parse_pd_malformed(self):
        with pytest.raises(ParseError) as ei:
            parse_pd("X 1 4 2\n")
        assert "line 1" in str(ei.value)
        with pytest.raises(ParseError):
            parse_pd("Y 1 4 2 5\n")
        with pytest.raises(ParseError):
            parse_pd("X 1 4 2 9\n")
        with pytest.raises(ParseError):
            parse_pd("")

    def test_diagram_validation(self):
        with pytest.raises(DomainError):
            TangleDiagram(2, (3,))
        with pytest.raises(DomainError):
            TangleDiagram(2, (1,), (1, 2))  # crossing merges components


class TestForkSlideDecat:
    def test_fork_slide_up_to_unit(self):
        # Sliding a merge vertex through a crossing: merge o T =
        # (+-q^{+-ab}) merge, as matrices, for a, b <= 2, n <= 3.
        from itertools import product as iproduct
        from slfoam.web import _rickard_terms
        from slfoam.rep import apply_divided

        for n in (2, 3):
            for a, b in iproduct(range(1, 3), repeat=2):
                if a + b > n:
                    continue
                amb = GlWeight(n, (a, b))
                basis = weight_basis(amb)
                if not basis:
                    continue
                terms = _rickard_terms(n, amb, 1, 1, a, b)
                ok_units = []
                # columns of both composites
                direct_cols = {}
                slid_cols = {}
                for state in basis:
                    vec = {state: LaurentPoly.one()}
                    direct_cols[state] = apply_divided("E", 1, b, dict(vec))
                    acc = {}
                    for t in terms:
                        tv = dict(vec)
                        for rung in t.rungs:
                            tv = apply_divided(rung.kind, rung.i, rung.k, tv)
                        coeff = LaurentPoly({t.q: (-1) ** t.h})
                        for st, c in tv.items():
                            prev = acc.get(st, LaurentPoly.zero())
                            acc[st] = prev + coeff * c
                    # then merge the swapped colors: E^{(a)} on [b, a]
                    acc = apply_divided("E", 1, a, acc)
                    slid_cols[state] = {s: c for s, c in acc.items()
                                        if not c.is_zero()}
                for sign in (1, -1):
                    for shift in (a * b, -a * b):
                        unit = LaurentPoly({shift: sign})
                        if all(
                            {s: (unit * c) for s, c in direct_cols[st].items()
                             if not (unit * c).is_zero()} == slid_cols[st]
                            for st in basis
                        ):
                            ok_units.append((sign, shift))
                assert ok_units, (n, a, b)
