"""Tests for foam movies: replay, degrees, Euler validation, serialization."""

import random

import pytest

from slfoam.exactalg import DomainError, Partition, Scalar, SymFunc
from slfoam.foam import (
    FoamMove,
    FoamWord,
    apply_move,
    foam_degree,
    migrate_decorations,
    parse_foam,
    swap_moves,
    weighted_euler_validate,
)
from slfoam.rep import GlWeight
from slfoam.web import LadderWeb, Rung


def web(n, entries, rungs=()):
    return LadderWeb(n, GlWeight(n, tuple(entries)), tuple(rungs))


def _applicable_moves(w: LadderWeb, rng: random.Random):
    """All moves that legally apply to ``w`` (by trial replay)."""
    n, m = w.n, w.domain.m
    out = []
    cands = []
    for pos in range(len(w.rungs) + 1):
        for slot in range(1, m):
            for k in range(1, n + 1):
                cands.append(FoamMove("CUP_FE", pos, slot=slot, k=k))
                cands.append(FoamMove("CUP_EF", pos, slot=slot, k=k))
            wt = w.weights[pos]
            a, b = wt.entries[slot - 1], wt.entries[slot]
            if b >= 1:
                cands.append(FoamMove("ZIP", pos, slot=slot, a=a, b=b))
    for pos in range(len(w.rungs)):
        cands.append(FoamMove("CAP_FE", pos))
        cands.append(FoamMove("CAP_EF", pos))
        cands.append(FoamMove("ISOTOPY", pos))
        r = w.rungs[pos]
        for a in range(1, r.k):
            cands.append(FoamMove("SEAM_SPLIT", pos, a=a, b=r.k - a))
        if pos + 1 < len(w.rungs):
            r2 = w.rungs[pos + 1]
            if r2.kind == r.kind and r2.i == r.i:
                cands.append(FoamMove("SEAM_MERGE", pos, a=r.k, b=r2.k))
        wt = w.weights[pos]
        if r.kind == "E":
            a, b = wt.entries[r.i - 1], wt.entries[r.i]
            if (a, b) == (0, r.k) or True:
                cands.append(FoamMove("UNZIP", pos, slot=r.i, a=a, b=b))
        alpha = Partition(tuple(sorted(
            (rng.randrange(0, 3) for _ in range(min(2, r.k))), reverse=True)))
        deco = SymFunc.schur(r.k, alpha) if all(
            p <= 4 for p in alpha.parts) else None
        if deco is not None and not deco.is_zero():
            cands.append(FoamMove("DECORATE", pos, deco=deco))
    for mv in cands:
        try:
            apply_move(w, mv)
        except DomainError:
            continue
        out.append(mv)
    return out


def random_foams(count, max_moves=6, seed=7):
    rng = random.Random(seed)
    made = []
    attempts = 0
    while len(made) < count and attempts < count * 50:
        attempts += 1
        n = rng.choice([2, 3])
        m = rng.choice([2, 3])
        dom = tuple(rng.randrange(0, n + 1) for _ in range(m))
        w = web(n, dom)
        moves = []
        for _ in range(rng.randrange(1, max_moves + 1)):
            opts = _applicable_moves(w, rng)
            if not opts:
                break
            mv = rng.choice(opts)
            moves.append(mv)
            w = apply_move(w, mv)
        if moves:
            made.append(FoamWord(web(n, dom), tuple(moves)))
    assert len(made) == count
    return made


class TestReplay:
    def test_cup_and_cap_round_trip(self):
        w = web(2, (1, 1))
        f = FoamWord(w, (FoamMove("CUP_FE", 0, slot=1, k=1),
                         FoamMove("CAP_FE", 0)))
        assert f.target.word_key() == w.word_key()

    def test_cap_pattern_mismatch(self):
        w = web(2, (1, 1), (Rung("E", 1, 1), Rung("E", 1, 1)))
        assert w.zero  # replay refuses zero webs outright
        w2 = web(3, (1, 1), (Rung("E", 1, 1), Rung("F", 1, 1)))
        with pytest.raises(DomainError):
            apply_move(w2, FoamMove("CAP_EF", 0))  # order is (F, E)
        out = apply_move(w2, FoamMove("CAP_FE", 0))
        assert out.rungs == ()

    def test_zip_unzip(self):
        w = web(3, (1, 2))
        z = apply_move(w, FoamMove("ZIP", 0, slot=1, a=1, b=2))
        assert [(r.kind, r.k) for r in z.rungs] == [("E", 2), ("F", 2)]
        back = apply_move(z, FoamMove("UNZIP", 0, slot=1, a=1, b=2))
        assert back.word_key() == w.word_key()

    def test_split_merge(self):
        w = web(3, (3, 0), (Rung("F", 1, 2),))
        s = apply_move(w, FoamMove("SEAM_SPLIT", 0, a=1, b=1))
        assert [(r.kind, r.k) for r in s.rungs] == [("F", 1), ("F", 1)]
        back = apply_move(s, FoamMove("SEAM_MERGE", 0, a=1, b=1))
        assert back.word_key() == w.word_key()

    def test_isotopy_requires_distant_slots(self):
        w = web(2, (1, 1, 1, 1), (Rung("E", 1, 1), Rung("E", 3, 1)))
        out = apply_move(w, FoamMove("ISOTOPY", 0))
        assert [r.i for r in out.rungs] == [3, 1]
        w2 = web(3, (1, 1, 1), (Rung("E", 1, 1), Rung("E", 2, 1)))
        with pytest.raises(DomainError):
            apply_move(w2, FoamMove("ISOTOPY", 0))

    def test_decorate_checks_variable_count(self):
        w = web(3, (2, 1), (Rung("E", 1, 1),))
        with pytest.raises(DomainError):
            apply_move(w, FoamMove("DECORATE", 0, deco=SymFunc.one(2)))
        out = apply_move(w, FoamMove("DECORATE", 0,
                                     deco=SymFunc.schur(1, Partition((3,)))))
        assert out.word_key() == w.word_key()

    def test_zero_web_rejected(self):
        w = web(2, (2, 0))
        with pytest.raises(DomainError):
            apply_move(w, FoamMove("CUP_FE", 0, slot=1, k=1))


class TestDegrees:
    def test_cup_degrees_match_weight_formula(self):
        # At outside weights (A, B): CUP_FE(k) has degree k(k + A - B),
        # CUP_EF(k) degree k(k - A + B); caps agree with their cups.
        for n, A, B, k in [(2, 1, 1, 1), (3, 2, 1, 1), (4, 2, 2, 2),
                           (4, 3, 1, 1), (3, 0, 2, 1)]:
            w = web(n, (A, B))
            fe = FoamMove("CUP_FE", 0, slot=1, k=k)
            ef = FoamMove("CUP_EF", 0, slot=1, k=k)
            for mv, expect in ((fe, k * (k + A - B)), (ef, k * (k - A + B))):
                try:
                    up = apply_move(w, mv)
                except DomainError:
                    continue
                f = FoamWord(w, (mv,))
                assert foam_degree(f) == expect
                cap = "CAP_FE" if mv.kind == "CUP_FE" else "CAP_EF"
                g = FoamWord(up, (FoamMove(cap, 0),))
                assert foam_degree(g) == expect

    def test_zip_degree_is_ab(self):
        f = FoamWord(web(3, (1, 2)), (FoamMove("ZIP", 0, slot=1, a=1, b=2),))
        assert foam_degree(f) == 2

    def test_split_merge_degree(self):
        w = web(4, (4, 0), (Rung("F", 1, 3),))
        f = FoamWord(w, (FoamMove("SEAM_SPLIT", 0, a=1, b=2),))
        assert foam_degree(f) == -2
        s = f.target
        g = FoamWord(s, (FoamMove("SEAM_MERGE", 0, a=1, b=2),))
        assert foam_degree(g) == -2

    def test_decoration_degree(self):
        w = web(3, (2, 1), (Rung("E", 1, 1),))
        deco = SymFunc.schur(1, Partition((2,)))
        f = FoamWord(w, (FoamMove("DECORATE", 0, deco=deco),))
        assert foam_degree(f) == 4

    def test_degree_additive_under_composition(self):
        for f in random_foams(10, max_moves=4, seed=3):
            mid = len(f.moves) // 2
            webs = f.webs()
            f1 = FoamWord(f.source, f.moves[:mid])
            f2 = FoamWord(webs[mid], f.moves[mid:])
            assert foam_degree(f1) + foam_degree(f2) == foam_degree(f)
            assert foam_degree(f1.then(f2)) == foam_degree(f)

    def test_swap_composite_has_degree_zero(self):
        cases = [
            (3, (1, 2), (Rung("E", 1, 1), Rung("F", 1, 1))),
            (4, (2, 2), (Rung("E", 1, 2), Rung("F", 1, 1))),
            (4, (1, 3), (Rung("F", 1, 1), Rung("E", 1, 2))),
            (3, (2, 1), (Rung("F", 1, 2), Rung("E", 1, 1))),
        ]
        for n, dom, rungs in cases:
            w = web(n, dom, rungs)
            if w.zero:
                continue
            moves = swap_moves(w, 0)
            f = FoamWord(w, moves)
            r1, r2 = rungs
            assert f.target.rungs == (r2, r1)
            assert foam_degree(f) == 0
            assert weighted_euler_validate(f) == 0


class TestWeightedEuler:
    def test_identity_prism_degree_zero(self):
        w = web(3, (2, 1), (Rung("E", 1, 1),))
        f = FoamWord(w, ())
        assert weighted_euler_validate(f) == 0
        g = FoamWord(w, (FoamMove("DECORATE", 0, deco=SymFunc.one(1)),))
        assert weighted_euler_validate(g) == foam_degree(g) == 0

    def test_matches_local_degree_on_random_foams(self):
        for f in random_foams(60, max_moves=6, seed=11):
            assert weighted_euler_validate(f) == foam_degree(f), f.serialize()

    def test_move_cap(self):
        w = web(2, (1, 1))
        moves = []
        for _ in range(7):
            moves.append(FoamMove("CUP_FE", 0, slot=1, k=1))
            moves.append(FoamMove("CAP_FE", 0))
        f = FoamWord(w, tuple(moves))
        with pytest.raises(DomainError):
            weighted_euler_validate(f)


class TestSerialization:
    def test_round_trip(self):
        for f in random_foams(15, max_moves=5, seed=23):
            g = parse_foam(f.serialize())
            assert g.source.word_key() == f.source.word_key()
            assert g.moves == f.moves
            assert g.coefficient == f.coefficient
            assert g.serialize() == f.serialize()

    def test_deterministic(self):
        (f,) = random_foams(1, max_moves=6, seed=5)
        assert f.serialize() == f.serialize()

    def test_coefficient_round_trip(self):
        w = web(2, (1, 1))
        f = FoamWord(w, (FoamMove("CUP_FE", 0, slot=1, k=1),),
                     Scalar(-3) / Scalar(7))
        g = parse_foam(f.serialize())
        assert g.coefficient == f.coefficient


class TestMigrateDecorations:
    def test_preserves_target_and_degree(self):
        w = web(3, (1, 2))
        deco = SymFunc.schur(1, Partition((1,)))
        f = FoamWord(w, (
            FoamMove("CUP_FE", 0, slot=1, k=1),
            FoamMove("DECORATE", 0, deco=deco),
            FoamMove("CUP_FE", 0, slot=1, k=1),
        ))
        g = migrate_decorations(f)
        assert g.target.word_key() == f.target.word_key()
        assert foam_degree(g) == foam_degree(f)
        # the decoration moved past the later cup (now tracked at pos 2)
        kinds = [mv.kind for mv in g.moves]
        assert kinds == ["CUP_FE", "CUP_FE", "DECORATE"]
        assert g.moves[-1].pos == 2

    def test_blocked_when_facet_dies(self):
        w = web(3, (1, 2))
        deco = SymFunc.schur(1, Partition((1,)))
        f = FoamWord(w, (
            FoamMove("CUP_FE", 0, slot=1, k=1),
            FoamMove("DECORATE", 0, deco=deco),
            FoamMove("CAP_FE", 0),
        ))
        g = migrate_decorations(f)
        assert [mv.kind for mv in g.moves] == [mv.kind for mv in f.moves]
