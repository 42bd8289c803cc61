"""
Chain complexes over the foam category and bigraded homology.

The pipeline: a compiled cube of resolutions becomes a :class:`Complex`
whose objects are q-shifted ladder webs and whose differentials are
foam words.  Every closed web is decomposed into q-shifted trivial
(empty) webs (:func:`decompose_web`); conjugating each differential
entry by the inclusion/projection foams and evaluating the resulting
closed diagrams turns the complex into exact scalar matrices
(:func:`scalarize`).  Gaussian elimination then shrinks the complex
without changing its homology, and :func:`homology` reads off the
bigraded ranks (plus torsion in integral mode).

Decomposition strategy: repeatedly rewrite the rung word by
  * merging adjacent same-slot same-direction rungs
    X^(a) X^(b) -> a q-binomial family of X^(a+b), and
  * swapping adjacent same-slot opposite pairs with the square
    isomorphisms (multiplicity summands indexed by partitions in a
    j x (N-j) box, N the weight margin),
dropping zero webs, until no rungs remain.  Distant rungs are commuted
as needed.  The inclusion/projection foams are accumulated move by
move; at the end the Gram matrix of proj o inc evaluations is inverted
so that proj_j o inc_k = delta_jk holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import DomainError, LaurentPoly, Partition, Scalar, SymFunc
from .foam import FoamMove, FoamWord, apply_move, foam_degree, foam_to_klr, \
    swap_moves
from .klr import ScalarCache, evaluate_closed
from .web import CubeSkeleton, LadderWeb, Rung


class DecompositionError(DomainError):
    """A closed web could not be reduced to trivial summands."""


class InvariantBreach(DomainError):
    """An internal consistency guarantee failed (degree or d^2)."""


# ---------------------------------------------------------------------------
# Web decomposition into trivial summands
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """A closed web as a direct sum of q-shifted trivial webs."""

    web: LadderWeb
    shifts: tuple[int, ...]
    # inc[j]: formal sum of foams trivial -> web; proj[j]: web -> trivial
    inc: tuple[tuple[FoamWord, ...], ...]
    proj: tuple[tuple[FoamWord, ...], ...]

    def __len__(self):
        return len(self.shifts)


def _box_partitions(rows: int, cols: int) -> list[Partition]:
    """All partitions fitting in a rows x cols box."""
    if rows < 0 or cols < 0:
        return []
    seen: set[tuple[int, ...]] = set()
    out: list[Partition] = []

    def rec(prefix: list[int], maxpart: int):
        parts = tuple(p for p in prefix if p)
        if parts not in seen:
            seen.add(parts)
            out.append(Partition(parts))
        if len(prefix) == rows:
            return
        for p in range(min(maxpart, cols), 0, -1):
            rec(prefix + [p], p)

    rec([], cols)
    return out


def _complement(alpha: Partition, rows: int, cols: int) -> Partition:
    """Complementary partition in the rows x cols box (rotated)."""
    parts = list(alpha.parts) + [0] * (rows - len(alpha.parts))
    comp = tuple(cols - p for p in reversed(parts))
    return Partition(tuple(p for p in comp if p))


def _merge_summands(w: LadderWeb, pos: int):
    """Digon family for adjacent same-kind same-slot rungs at pos."""
    r1, r2 = w.rungs[pos], w.rungs[pos + 1]
    a, b = r1.k, r2.k
    merged = LadderWeb(w.n, w.domain, w.rungs[:pos]
                       + (Rung(r1.kind, r1.i, a + b),) + w.rungs[pos + 2:])
    if merged.zero:
        return []
    out = []
    for alpha in _box_partitions(a, b):
        inc_moves = [FoamMove("DIGON_CUP", pos, a=a, b=b)]
        if alpha.parts:
            inc_moves.append(FoamMove(
                "DECORATE", pos, deco=SymFunc.schur(a, alpha)))
        ahat = _complement(alpha, a, b)
        proj_moves = []
        if ahat.parts:
            proj_moves.append(FoamMove(
                "DECORATE", pos, deco=SymFunc.schur(a, ahat)))
        proj_moves.append(FoamMove("DIGON_CAP", pos, a=a, b=b))
        sign = Scalar((-1) ** ahat.size)
        inc = FoamWord(merged, tuple(inc_moves))
        proj = FoamWord(w, tuple(proj_moves), sign)
        out.append((merged, inc, proj))
    return out


def _swap_params(w: LadderWeb, pos: int):
    """(margin N, case) for an adjacent same-slot opposite pair."""
    r1, r2 = w.rungs[pos], w.rungs[pos + 1]
    wt = w.weights[pos]
    lam = wt.entries[r1.i - 1] - wt.entries[r1.i]
    if r1.kind == "F":  # composite E^(k) F^(l) with l = r1.k, k = r2.k
        return lam + r2.k - r1.k, "A"
    return -lam + r2.k - r1.k, "B"


def _swap_summands(w: LadderWeb, pos: int):
    """Square-isomorphism family for the opposite pair at pos."""
    r1, r2 = w.rungs[pos], w.rungs[pos + 1]
    i = r1.i
    N, case = _swap_params(w, pos)
    if case == "A":
        l, k = r1.k, r2.k
    else:
        k, l = r1.k, r2.k
    out = []
    for j in range(min(k, l) + 1):
        if N - j < 0:
            continue
        if case == "A":
            mid = tuple(Rung(kd, i, t) for kd, t in
                        (("E", k - j), ("F", l - j)) if t)
        else:
            mid = tuple(Rung(kd, i, t) for kd, t in
                        (("F", l - j), ("E", k - j)) if t)
        wj = LadderWeb(w.n, w.domain, w.rungs[:pos] + mid + w.rungs[pos + 2:])
        if wj.zero:
            continue
        for alpha in _box_partitions(j, N - j):
            inc = _swap_inc(wj, pos, case, i, j, k, l, alpha)
            ahat = _complement(alpha, j, N - j)
            proj = _swap_proj(w, pos, case, i, j, k, l, ahat)
            out.append((wj, inc, proj))
    return out


def _swap_inc(wj: LadderWeb, pos: int, case: str, i: int, j: int,
              k: int, l: int, alpha: Partition) -> FoamWord:
    """Inclusion foam: summand web -> original pair web."""
    moves: list[FoamMove] = []
    cur = wj

    def do(mv: FoamMove):
        nonlocal cur
        cur = apply_move(cur, mv)
        moves.append(mv)

    if j == 0:
        for mv in swap_moves(cur, pos):
            do(mv)
        return FoamWord(wj, tuple(moves))
    if case == "B":
        # summand (F^{l-j}, E^{k-j}) -> (E^k, F^l)
        do(FoamMove("CUP_FE", pos, slot=i, k=j))  # (E^j, F^j, ...)
        if alpha.parts:
            do(FoamMove("DECORATE", pos, deco=SymFunc.schur(j, alpha)))
        if l > j:
            do(FoamMove("SEAM_MERGE", pos + 1, a=j, b=l - j))
        if k > j:
            for mv in swap_moves(cur, pos + 1):
                do(mv)
            do(FoamMove("SEAM_MERGE", pos, a=j, b=k - j))
    else:
        # summand (E^{k-j}, F^{l-j}) -> (F^l, E^k)
        at = len([t for t in (k - j, l - j) if t])
        do(FoamMove("CUP_EF", pos + at, slot=i, k=j))  # (..., F^j, E^j)
        if alpha.parts:
            do(FoamMove("DECORATE", pos + at + 1,
                        deco=SymFunc.schur(j, alpha)))
        if l > j:
            do(FoamMove("SEAM_MERGE", pos + (1 if k > j else 0),
                        a=l - j, b=j))
        if k > j:
            for mv in swap_moves(cur, pos):
                do(mv)
            do(FoamMove("SEAM_MERGE", pos + 1, a=k - j, b=j))
    return FoamWord(wj, tuple(moves))


def _swap_proj(w: LadderWeb, pos: int, case: str, i: int, j: int,
               k: int, l: int, ahat: Partition) -> FoamWord:
    """Projection foam: original pair web -> summand web."""
    moves: list[FoamMove] = []
    cur = w

    def do(mv: FoamMove):
        nonlocal cur
        cur = apply_move(cur, mv)
        moves.append(mv)

    if j == 0:
        for mv in swap_moves(cur, pos):
            do(mv)
        return FoamWord(w, tuple(moves))
    sign = Scalar((-1) ** ahat.size)
    if case == "B":
        # (E^k, F^l) -> (F^{l-j}, E^{k-j})
        if k > j:
            do(FoamMove("SEAM_SPLIT", pos, a=j, b=k - j))
            for mv in swap_moves(cur, pos + 1):
                do(mv)
        if l > j:
            do(FoamMove("SEAM_SPLIT", pos + 1, a=j, b=l - j))
        if ahat.parts:
            do(FoamMove("DECORATE", pos, deco=SymFunc.schur(j, ahat)))
        do(FoamMove("CAP_FE", pos))
    else:
        # (F^l, E^k) -> (E^{k-j}, F^{l-j})
        if k > j:
            do(FoamMove("SEAM_SPLIT", pos + 1, a=k - j, b=j))
            for mv in swap_moves(cur, pos):
                do(mv)
        if l > j:
            do(FoamMove("SEAM_SPLIT", pos + (1 if k > j else 0),
                        a=l - j, b=j))
        at = len([t for t in (k - j, l - j) if t])
        if ahat.parts:
            do(FoamMove("DECORATE", pos + at + 1,
                        deco=SymFunc.schur(j, ahat)))
        do(FoamMove("CAP_EF", pos + at))
    return FoamWord(w, tuple(moves), sign)


def _find_local_rule(w: LadderWeb):
    """First position admitting a strict local rewrite, with its kind."""
    for pos in range(len(w.rungs) - 1):
        r1, r2 = w.rungs[pos], w.rungs[pos + 1]
        if r1.i != r2.i:
            continue
        if r1.kind == r2.kind:
            return pos, "merge"
        N, _case = _swap_params(w, pos)
        if N >= 1:
            return pos, "swap"
    return None


def _neutral_neighbors(w: LadderWeb):
    """(web', moves w->web', moves web'->w) for degree-0 rearrangements."""
    out = []
    for pos in range(len(w.rungs) - 1):
        r1, r2 = w.rungs[pos], w.rungs[pos + 1]
        gap = abs(r1.i - r2.i)
        if gap >= 2 or (gap == 1 and r1.kind != r2.kind):
            try:
                w2 = apply_move(w, FoamMove("ISOTOPY", pos))
            except DomainError:
                continue
            mv = (FoamMove("ISOTOPY", pos),)
            out.append((w2, mv, mv))
        elif r1.i == r2.i and r1.kind != r2.kind:
            N, _case = _swap_params(w, pos)
            if N == 0:
                fam = _swap_summands(w, pos)
                if len(fam) == 1:
                    w2, inc, proj = fam[0]
                    out.append((w2, proj.moves, inc.moves))
    return out


def _reduction_step(w: LadderWeb):
    """
    One strict decomposition step, commuting rungs as needed: a list of
    (summand web, inc FoamWord on the summand, proj FoamWord on w).
    Raises DecompositionError when no rule is reachable.
    """
    from collections import deque
    seen = {w.word_key()}
    queue = deque([(w, (), ())])  # (web, moves w->web, moves web->w)
    budget = 4000
    while queue and budget > 0:
        cur, fwd, back = queue.popleft()
        hit = _find_local_rule(cur)
        if hit is not None:
            pos, kind = hit
            fam = _merge_summands(cur, pos) if kind == "merge" \
                else _swap_summands(cur, pos)
            out = []
            for wj, inc, proj in fam:
                inc_full = FoamWord(wj, inc.moves + back, inc.coefficient)
                proj_full = FoamWord(w, fwd + proj.moves, proj.coefficient)
                out.append((wj, inc_full, proj_full))
            return out
        for w2, mvs, inv in _neutral_neighbors(cur):
            budget -= 1
            key = w2.word_key()
            if key in seen:
                continue
            seen.add(key)
            queue.append((w2, fwd + mvs, inv + back))
    raise DecompositionError(f"stuck web: {w!r}")


_DECOMP_CACHE: dict[tuple, Decomposition] = {}


def _eval_pairing(proj_sum, inc_sum, cache: ScalarCache | None) -> Scalar:
    """evaluate_closed of (sum of proj) composed after (sum of inc)."""
    total = Scalar(0)
    for p in proj_sum:
        for i in inc_sum:
            comp = i.then(p)
            for word in foam_to_klr(comp):
                total = total + evaluate_closed(word, cache)
    return total


def decompose_web(w: LadderWeb, cache: ScalarCache | None = None
                  ) -> Decomposition:
    """
    Decompose a closed web into q-shifted trivial summands with
    inclusion/projection foams satisfying proj_j o inc_k = delta_jk
    (enforced exactly by Gram normalization).
    """
    if not w.closed:
        raise DomainError("decompose_web needs a closed web")
    if w.zero:
        raise DomainError("decompose_web on a zero web")
    key = w.word_key()
    hit = _DECOMP_CACHE.get(key)
    if hit is not None:
        return hit
    pieces = _decompose_raw(w)
    # Gram normalization: proj <- G^{-1} proj
    shifts = tuple(-foam_degree(inc) for _w, inc, _p in pieces)
    incs = tuple((inc,) for _w, inc, _p in pieces)
    projs = [[p] for _w, _i, p in pieces]
    m = len(pieces)
    gram = [[_eval_pairing(projs[a], incs[b], cache) for b in range(m)]
            for a in range(m)]
    inv = _invert(gram)
    if inv is None:
        raise DecompositionError(
            f"decomposition Gram matrix singular for {w!r}")
    new_projs = []
    for a in range(m):
        row: list[FoamWord] = []
        for b in range(m):
            c = inv[a][b]
            if c:
                row.extend(p.scaled(c) for p in projs[b])
        new_projs.append(tuple(row))
    out = Decomposition(w, shifts, incs, tuple(new_projs))
    _DECOMP_CACHE[key] = out
    return out


def _decompose_raw(w: LadderWeb, _depth: int = 0):
    """Recursive reduction: list of (trivial web, inc, proj) pieces."""
    if _depth > 120:
        raise DecompositionError("decomposition recursion too deep")
    if not w.rungs:
        ident = FoamWord(w, ())
        return [(w, ident, ident)]
    out = []
    for wj, inc, proj in _reduction_step(w):
        for wt, inc2, proj2 in _decompose_raw(wj, _depth + 1):
            out.append((wt, inc2.then(inc), proj.then(proj2)))
    return out


def _invert(g: list[list[Scalar]]):
    """Exact inverse of a square Scalar matrix, or None if singular."""
    m = len(g)
    a = [[Fraction(g[r][c].value) for c in range(m)] for r in range(m)]
    inv = [[Fraction(1) if r == c else Fraction(0) for c in range(m)]
           for r in range(m)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(m):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return [[Scalar(x) for x in row] for row in inv]


# ---------------------------------------------------------------------------
# The cube as a foam-valued complex
# ---------------------------------------------------------------------------


@dataclass
class Complex:
    """
    A bounded complex.  Foam stage: objects are (LadderWeb, q) pairs and
    differential entries are lists of FoamWord.  Scalar stage: objects
    are bare q-shifts of the trivial web and entries are Scalars.
    ``diffs[h]`` maps degree h to h+1; rows index targets, columns
    sources.
    """

    n: int
    objects: dict[int, list]
    diffs: dict[int, list[list]]
    scalar: bool = False

    def degrees(self):
        return sorted(self.objects)


def cube_complex(cube: CubeSkeleton) -> Complex:
    """Assemble the cube of resolutions into a foam-valued complex."""
    byh: dict[int, list] = {}
    index: dict[tuple, tuple[int, int]] = {}
    for choice, (web, h, q) in sorted(cube.vertices.items()):
        byh.setdefault(h, [])
        index[choice] = (h, len(byh[h]))
        byh[h].append((web, q))
    diffs: dict[int, list[list]] = {}
    for h in byh:
        if h + 1 in byh:
            diffs[h] = [[[] for _ in byh[h]] for _ in byh[h + 1]]
    for a, b, ci in cube.edges:
        ha, ia = index[a]
        hb, ib = index[b]
        if hb != ha + 1:  # pragma: no cover
            raise InvariantBreach("cube edge does not raise h by one")
        f = _edge_foam(cube, a, ci)
        sgn = (-1) ** sum(cube.crossings[cj].terms[a[cj]].h
                          for cj in range(ci))
        diffs[ha][ib][ia].append(f.scaled(sgn))
    objects = {h: lst for h, lst in byh.items()}
    return Complex(cube.n, objects, diffs, scalar=False)


def _crossing_pos(cube: CubeSkeleton, choice: tuple, ci: int) -> int:
    """Rung index where crossing ci's term starts in the vertex web."""
    pos = 0
    cj = 0
    for ev in cube.events:
        if ev[0] == "rung":
            pos += 1
        else:
            if cj == ci:
                return pos
            pos += sum(1 for r in cube.crossings[cj].terms[choice[cj]].rungs
                       if r.k > 0)
            cj += 1
    raise InvariantBreach("crossing index out of range")  # pragma: no cover


def _edge_foam(cube: CubeSkeleton, a: tuple, ci: int) -> FoamWord:
    """
    The Rickard differential foam stepping crossing ci of vertex a: a
    thin pair is born between the crossing's E and F rungs and merged in
    (positive crossings), or split off and capped (negative crossings).
    Both composites have foam degree 1.
    """
    web_a = cube.vertices[a][0]
    site = cube.crossings[ci]
    term = site.terms[a[ci]]
    s = term.s
    lam = site.lam
    p = site.slot
    pos = _crossing_pos(cube, a, ci)
    first, second = term.rungs  # E,F if lam >= 0 else F,E (k may be 0)
    moves: list[FoamMove] = []
    if site.sign > 0:  # growing: s -> s+1
        cup = "CUP_FE" if lam >= 0 else "CUP_EF"
        cp = pos + (1 if first.k else 0)
        moves.append(FoamMove(cup, cp, slot=p, k=1))
        if first.k:
            moves.append(FoamMove("SEAM_MERGE", pos, a=first.k, b=1))
        if second.k:
            moves.append(FoamMove("SEAM_MERGE", pos + 1, a=1, b=second.k))
    else:  # shrinking: s -> s-1 (s >= 1, so first.k = s >= 1)
        if first.k > 1:
            moves.append(FoamMove("SEAM_SPLIT", pos, a=first.k - 1, b=1))
        t = pos + (1 if first.k > 1 else 0)
        if second.k > 1:
            moves.append(FoamMove("SEAM_SPLIT", t + 1, a=1, b=second.k - 1))
        cap = "CAP_FE" if lam >= 0 else "CAP_EF"
        moves.append(FoamMove(cap, t))
    f = FoamWord(web_a, tuple(moves))
    if foam_degree(f) != 1:  # pragma: no cover
        raise InvariantBreach("differential foam degree != 1")
    return f


# ---------------------------------------------------------------------------
# Scalarization and elimination
# ---------------------------------------------------------------------------


def scalarize(cx: Complex, cache: ScalarCache | None = None,
              integral: bool = False) -> Complex:
    """
    Replace every web object by its trivial summands and every foam
    differential by the exact matrix of closed evaluations
    proj_target o f o inc_source.  Entries whose bidegrees disagree
    must evaluate to zero; d^2 = 0 is verified and enforced.
    """
    if cx.scalar:
        return cx
    # decompose every object
    summands: dict[int, list[int]] = {}
    spans: dict[int, list[tuple[int, Decomposition, int]]] = {}
    for h, objs in cx.objects.items():
        summands[h] = []
        spans[h] = []
        for oi, (web, q) in enumerate(objs):
            dec = decompose_web(web, cache)
            for si in range(len(dec)):
                spans[h].append((oi, dec, si))
                summands[h].append(q + dec.shifts[si])
    diffs: dict[int, list[list]] = {}
    for h, mat in cx.diffs.items():
        src, tgt = spans[h], spans.get(h + 1, [])
        out = [[Scalar(0, integral) for _ in src] for _ in tgt]
        for bi, (ob, decb, sb) in enumerate(tgt):
            qb = summands[h + 1][bi]
            for ai, (oa, deca, sa) in enumerate(src):
                qa = summands[h][ai]
                foams = mat[ob][oa]
                if not foams:
                    continue
                val = Scalar(0)
                for f in foams:
                    for inc in deca.inc[sa]:
                        for proj in decb.proj[sb]:
                            comp = inc.then(f).then(proj)
                            for word in foam_to_klr(comp):
                                val = val + evaluate_closed(word, cache)
                if val and qb != qa:
                    raise InvariantBreach(
                        f"nonzero differential entry across q {qa}->{qb}")
                if val:
                    out[bi][ai] = Scalar(val.value, integral)
        diffs[h] = out
    out_cx = Complex(cx.n, {h: list(qs) for h, qs in summands.items()},
                     diffs, scalar=True)
    _check_d_squared(out_cx)
    return out_cx


def _check_d_squared(cx: Complex):
    for h in cx.diffs:
        if h + 1 not in cx.diffs:
            continue
        d1, d2 = cx.diffs[h], cx.diffs[h + 1]
        if not d1 or not d2 or not d1[0]:
            continue
        for r in range(len(d2)):
            for c in range(len(d1[0])):
                tot = Scalar(0)
                for m in range(len(d1)):
                    tot = tot + d2[r][m] * d1[m][c]
                if tot:
                    raise InvariantBreach(f"d^2 != 0 at h={h} ({r},{c})")


def gaussian_eliminate(cx: Complex, pivot_order: str = "first"
                       ) -> Complex:
    """
    Remove acyclic two-term pieces: repeatedly pick a unit entry of some
    differential (same q on both sides), cancel its row/column pair, and
    update the neighbouring differentials.  ``pivot_order`` is "first"
    (row-major) or "last" (reverse scan); the homology of the result is
    independent of the choice.
    """
    if not cx.scalar:
        raise DomainError("gaussian elimination needs a scalar complex")
    objs = {h: list(v) for h, v in cx.objects.items()}
    diffs = {h: [row[:] for row in m] for h, m in cx.diffs.items()}

    def find_pivot(h):
        mat = diffs[h]
        rows = range(len(mat))
        if pivot_order == "last":
            rows = reversed(rows)
        for r in rows:
            cols = range(len(mat[r]))
            if pivot_order == "last":
                cols = reversed(cols)
            for c in cols:
                v = mat[r][c]
                if v and abs(v.value) == 1 \
                        and objs[h + 1][r] == objs[h][c]:
                    return r, c
        return None

    changed = True
    while changed:
        changed = False
        for h in sorted(diffs):
            hit = find_pivot(h)
            if hit is None:
                continue
            r, c = hit
            mat = diffs[h]
            piv = mat[r][c]
            # d' = d - (col c of d) piv^{-1} (row r of d) on the rest
            for rr in range(len(mat)):
                if rr == r or not mat[rr][c]:
                    continue
                f = mat[rr][c] / piv
                for cc in range(len(mat[rr])):
                    mat[rr][cc] = mat[rr][cc] - f * mat[r][cc]
            # delete row r (target side) and column c (source side)
            diffs[h] = [row[:c] + row[c + 1:]
                        for i, row in enumerate(mat) if i != r]
            del objs[h + 1][r]
            del objs[h][c]
            # incoming differential into h: drop row c
            if h - 1 in diffs:
                diffs[h - 1] = [row for i, row in enumerate(diffs[h - 1])
                                if i != c]
            # outgoing differential from h+1: drop column r
            if h + 1 in diffs:
                diffs[h + 1] = [row[:r] + row[r + 1:]
                                for row in diffs[h + 1]]
            changed = True
            break
    return Complex(cx.n, objs, diffs, scalar=True)


def _smith_normal_form(mat: list[list[int]]):
    """Diagonal entries of the Smith normal form of an integer matrix."""
    a = [row[:] for row in mat]
    rows, cols = len(a), len(a[0]) if a else 0
    diag = []
    r = c = 0
    while r < rows and c < cols:
        # find a nonzero entry of least absolute value
        best = None
        for i in range(r, rows):
            for j in range(c, cols):
                if a[i][j] and (best is None
                                or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[r], a[bi] = a[bi], a[r]
        for row in a:
            row[c], row[bj] = row[bj], row[c]
        done = True
        for i in range(r + 1, rows):
            if a[i][c] % a[r][c]:
                done = False
            f = a[i][c] // a[r][c]
            if f:
                for j in range(c, cols):
                    a[i][j] -= f * a[r][j]
        for j in range(c + 1, cols):
            if a[r][j] % a[r][c]:
                done = False
            f = a[r][j] // a[r][c]
            if f:
                for i in range(r, rows):
                    a[i][j] -= f * a[i][c]
        if not done or any(a[i][c] for i in range(r + 1, rows)) \
                or any(a[r][j] for j in range(c + 1, cols)):
            continue
        diag.append(abs(a[r][c]))
        r += 1
        c += 1
    return diag


def _rank(mat: list[list[Scalar]]) -> int:
    a = [[Fraction(x.value) for x in row] for row in mat]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        d = a[rank][c]
        a[rank] = [x / d for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class HomologyResult:
    """Bigraded ranks (and torsion orders in integral mode)."""

    ranks: dict[tuple[int, int], int]
    torsion: dict[tuple[int, int], tuple[int, ...]]

    def poincare(self) -> dict[tuple[int, int], int]:
        return dict(self.ranks)

    def euler(self) -> LaurentPoly:
        total = LaurentPoly({})
        for (h, q), r in self.ranks.items():
            total = total + LaurentPoly({q: Fraction((-1) ** h * r)})
        return total


def homology(cx: Complex, integral: bool = False) -> HomologyResult:
    """
    Bigraded homology of a scalar complex: ranks per (h, q), and in
    integral mode the torsion orders from Smith normal forms.
    """
    if not cx.scalar:
        raise DomainError("homology needs a scalar complex")
    # split objects by q: the differential preserves q-blocks by
    # construction (entries only connect q -> q+... checked at scalarize)
    ranks: dict[tuple[int, int], int] = {}
    torsion: dict[tuple[int, int], tuple[int, ...]] = {}
    degs = cx.degrees()
    for h in degs:
        qs = sorted(set(cx.objects[h]))
        for q in qs:
            src_idx = [i for i, qq in enumerate(cx.objects[h]) if qq == q]
            dim = len(src_idx)
            dout = cx.diffs.get(h)
            din = cx.diffs.get(h - 1)
            rk_out = rk_in = 0
            out_mat = in_mat = None
            if dout and cx.objects.get(h + 1):
                tgt_idx = [i for i, qq in enumerate(cx.objects[h + 1])
                           if qq == q]
                out_mat = [[dout[r][c] for c in src_idx] for r in tgt_idx]
                rk_out = _rank(out_mat) if tgt_idx else 0
            if din and cx.objects.get(h - 1):
                pre_idx = [i for i, qq in enumerate(cx.objects[h - 1])
                           if qq == q]
                in_mat = [[din[r][c] for c in pre_idx] for r in src_idx]
                rk_in = _rank(in_mat) if pre_idx else 0
            betti = dim - rk_out - rk_in
            if betti:
                ranks[(h, q)] = betti
            if integral and in_mat:
                sn = _smith_normal_form(
                    [[int(x.value) for x in row] for row in in_mat])
                tors = tuple(d for d in sn if d > 1)
                if tors:
                    torsion[(h, q)] = tors
    return HomologyResult(ranks, torsion)
