"""
Foam 2-morphisms as movies of elementary moves on ladder webs.

A :class:`FoamWord` is a source web, an ordered list of :class:`FoamMove`
and an exact coefficient.  Replaying the moves yields the target web; the
target is always derived, never stored.  Degrees are computed in two
independent ways: per-move local formulas (:func:`foam_degree`) and an
explicit weighted-Euler-characteristic cell count
(:func:`weighted_euler_validate`).

Move vocabulary (all positions are indices into the rung word; ``slot``
is the 1-based ladder slot i, so a move touches horizontal lines i and
i+1):

========================  ====================================================
CUP_FE(pos, slot, k)      insert the rung pair (E_i^{(k)}, F_i^{(k)})
CUP_EF(pos, slot, k)      insert the rung pair (F_i^{(k)}, E_i^{(k)})
CAP_FE(pos) / CAP_EF(pos) remove a matching adjacent pair
ZIP(pos, slot, a, b)      pinch parallel (a, b) lines into a dumbbell
UNZIP(pos, slot, a, b)    remove the dumbbell pinch
SEAM_SPLIT(pos, a, b)     split a rung X^{(a+b)} into (X^{(a)}, X^{(b)})
SEAM_MERGE(pos, a, b)     merge adjacent (X^{(a)}, X^{(b)}) into X^{(a+b)}
DIGON_CUP / DIGON_CAP     same web action as SEAM_SPLIT / SEAM_MERGE, but the
                          digon-creating/annihilating foam (decoration carrier)
DECORATE(pos, deco)       multiply a rung facet (or, with pos = -1 and
                          ``line`` set, a horizontal facet) by a symmetric
                          function
ISOTOPY(pos)              swap two adjacent rungs at distant slots
                          (|i-j| >= 2) or an E/F pair at adjacent slots
                          (|i-j| = 1), both degree-0 isomorphisms
========================  ====================================================

Same-slot rung reordering is NOT a single move: the degree-0 isomorphism
exchanging E^{(k)} and F^{(l)} at one slot is the 4-move composite built
by :func:`swap_moves` (cup, merge, split, cap), whose degree vanishes
identically; the naive tube-crossing movie has degree 2kl and is a
different 2-morphism.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import DomainError, Scalar, SymFunc, Partition
from .rep import GlWeight
from .web import LadderWeb, Rung

_KINDS = ("CUP_FE", "CUP_EF", "CAP_FE", "CAP_EF", "ZIP", "UNZIP",
          "SEAM_SPLIT", "SEAM_MERGE", "DIGON_CUP", "DIGON_CAP",
          "DECORATE", "ISOTOPY")


@dataclass(frozen=True)
class FoamMove:
    """One elementary foam generator, located in the rung word."""

    kind: str
    pos: int
    slot: int = 0
    k: int = 0
    a: int = 0
    b: int = 0
    line: int = 0
    deco: SymFunc | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown foam move kind {self.kind!r}")
        if self.kind.startswith("CUP") and (self.k < 1 or self.slot < 1):
            raise DomainError("cup needs slot >= 1 and thickness >= 1")
        if self.kind in ("ZIP", "UNZIP") and (self.slot < 1 or self.b < 1):
            raise DomainError("zip needs slot >= 1 and b >= 1")
        if self.kind in ("SEAM_SPLIT", "SEAM_MERGE", "DIGON_CUP",
                         "DIGON_CAP") and (self.a < 1 or self.b < 1):
            raise DomainError("split/merge parts must be positive")
        if self.kind == "DECORATE":
            if self.deco is None:
                raise DomainError("DECORATE needs a symmetric function")
            if not self.deco.is_homogeneous():
                raise DomainError("decorations must be homogeneous")

    def __repr__(self):
        bits = [self.kind, str(self.pos)]
        if self.slot:
            bits.append(f"i={self.slot}")
        if self.k:
            bits.append(f"k={self.k}")
        if self.a or self.b:
            bits.append(f"({self.a},{self.b})")
        if self.deco is not None:
            bits.append(repr(self.deco))
        return "<" + " ".join(bits) + ">"


def _pair_kinds(kind: str) -> tuple[str, str]:
    """Rung kinds of the inserted/removed pair, in word order."""
    # CUP_FE inserts (E, F): read left-to-right in the strand picture the
    # down (F) strand sits left of the up (E) strand.
    return ("E", "F") if kind.endswith("FE") else ("F", "E")


def apply_move(web: LadderWeb, mv: FoamMove) -> LadderWeb:
    """Replay one move on a web; raises DomainError on pattern mismatch."""
    rungs = list(web.rungs)
    weights = web.weights
    if any(w is None for w in weights):
        raise DomainError("move applied to a zero web")

    def wt(pos: int) -> GlWeight:
        if not 0 <= pos <= len(rungs):
            raise DomainError(f"move position {pos} out of range")
        return weights[pos]

    k = mv.kind
    if k in ("CUP_FE", "CUP_EF"):
        k1, k2 = _pair_kinds(k)
        wt(mv.pos)
        rungs[mv.pos:mv.pos] = [Rung(k1, mv.slot, mv.k), Rung(k2, mv.slot, mv.k)]
    elif k in ("CAP_FE", "CAP_EF"):
        k1, k2 = _pair_kinds(k)
        if mv.pos + 1 >= len(rungs):
            raise DomainError("cap position out of range")
        r1, r2 = rungs[mv.pos], rungs[mv.pos + 1]
        if not (r1.kind == k1 and r2.kind == k2 and r1.i == r2.i
                and r1.k == r2.k):
            raise DomainError(f"cap pattern mismatch at {mv.pos}: {r1}, {r2}")
        del rungs[mv.pos:mv.pos + 2]
    elif k in ("ZIP", "UNZIP"):
        w = wt(mv.pos)
        A, B = w.entries[mv.slot - 1], w.entries[mv.slot]
        if (A, B) != (mv.a, mv.b):
            raise DomainError(f"zip weights {(A, B)} != {(mv.a, mv.b)}")
        if k == "ZIP":
            rungs[mv.pos:mv.pos] = [Rung("E", mv.slot, mv.b),
                                    Rung("F", mv.slot, mv.b)]
        else:
            if mv.pos + 1 >= len(rungs):
                raise DomainError("unzip position out of range")
            r1, r2 = rungs[mv.pos], rungs[mv.pos + 1]
            if not (r1 == Rung("E", mv.slot, mv.b)
                    and r2 == Rung("F", mv.slot, mv.b)):
                raise DomainError("unzip pattern mismatch")
            del rungs[mv.pos:mv.pos + 2]
    elif k in ("SEAM_SPLIT", "DIGON_CUP"):
        if mv.pos >= len(rungs):
            raise DomainError("split position out of range")
        r = rungs[mv.pos]
        if r.k != mv.a + mv.b:
            raise DomainError(f"split thickness mismatch at {mv.pos}")
        rungs[mv.pos:mv.pos + 1] = [Rung(r.kind, r.i, mv.a),
                                    Rung(r.kind, r.i, mv.b)]
    elif k in ("SEAM_MERGE", "DIGON_CAP"):
        if mv.pos + 1 >= len(rungs):
            raise DomainError("merge position out of range")
        r1, r2 = rungs[mv.pos], rungs[mv.pos + 1]
        if not (r1.kind == r2.kind and r1.i == r2.i and r1.k == mv.a
                and r2.k == mv.b):
            raise DomainError(f"merge pattern mismatch at {mv.pos}")
        rungs[mv.pos:mv.pos + 2] = [Rung(r1.kind, r1.i, mv.a + mv.b)]
    elif k == "DECORATE":
        if mv.pos >= 0:
            if mv.pos >= len(rungs):
                raise DomainError("decoration position out of range")
            if mv.deco.nvars != rungs[mv.pos].k:
                raise DomainError("decoration variable count != facet label")
        else:
            if not 1 <= mv.line <= web.domain.m:
                raise DomainError("decoration line out of range")
            if mv.deco.nvars != web.domain.entries[mv.line - 1]:
                raise DomainError("decoration variable count != facet label")
    elif k == "ISOTOPY":
        if mv.pos + 1 >= len(rungs):
            raise DomainError("isotopy position out of range")
        r1, r2 = rungs[mv.pos], rungs[mv.pos + 1]
        gap = abs(r1.i - r2.i)
        if gap < 2 and not (gap == 1 and r1.kind != r2.kind):
            raise DomainError(
                "isotopy swap needs distant slots or an adjacent-slot "
                "E/F pair")
        rungs[mv.pos], rungs[mv.pos + 1] = r2, r1
    else:  # pragma: no cover
        raise DomainError(f"unhandled move {k}")
    out = LadderWeb(web.n, web.domain, tuple(rungs))
    if out.zero:
        raise DomainError(f"move {mv} leaves the admissible weight range")
    return out


@dataclass(frozen=True)
class FoamWord:
    """A movie of foam moves with an exact coefficient."""

    source: LadderWeb
    moves: tuple[FoamMove, ...] = ()
    coefficient: Scalar = field(default_factory=lambda: Scalar(1))

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def webs(self) -> list[LadderWeb]:
        """All intermediate webs, source first (deterministic replay)."""
        out = [self.source]
        for mv in self.moves:
            out.append(apply_move(out[-1], mv))
        return out

    @property
    def target(self) -> LadderWeb:
        return self.webs()[-1]

    def then(self, other: "FoamWord") -> "FoamWord":
        """Vertical composition: self first, then other."""
        if other.source.word_key() != self.target.word_key():
            raise DomainError("vertical composition boundary mismatch")
        return FoamWord(self.source, self.moves + other.moves,
                        self.coefficient * other.coefficient)

    def scaled(self, c: Scalar | int | Fraction) -> "FoamWord":
        if not isinstance(c, Scalar):
            c = Scalar(Fraction(c), self.coefficient.integral)
        return FoamWord(self.source, self.moves, self.coefficient * c)

    def serialize(self) -> str:
        """Debug text, one move per line; stable across versions."""
        lines = [f"SOURCE n={self.source.n} "
                 f"domain={','.join(map(str, self.source.domain.entries))} "
                 f"rungs={_word_str(self.source.rungs)}",
                 f"COEFF {self.coefficient.value}"]
        for mv in self.moves:
            bits = [mv.kind, str(mv.pos), str(mv.slot), str(mv.k),
                    str(mv.a), str(mv.b), str(mv.line)]
            if mv.deco is not None:
                bits.append(_deco_str(mv.deco))
            lines.append(" ".join(bits))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return (f"FoamWord({self.coefficient.value} * {len(self.moves)} moves"
                f" on {self.source!r})")


def _word_str(rungs) -> str:
    return ";".join(f"{r.kind}{r.i}.{r.k}" for r in rungs) or "-"


def _deco_str(deco: SymFunc) -> str:
    bits = [str(deco.nvars)]
    for alpha, c in sorted(deco.terms.items()):
        bits.append("%s:%s" % (".".join(map(str, alpha.parts)) or "-", c))
    return "|".join(bits)


def parse_foam(text: str) -> FoamWord:
    """Inverse of :meth:`FoamWord.serialize`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("SOURCE"):
        raise DomainError("bad foam serialization header")
    fields = dict(p.split("=", 1) for p in lines[0].split()[1:])
    n = int(fields["n"])
    domain = GlWeight(n, tuple(int(x) for x in fields["domain"].split(",")))
    rungs = []
    if fields["rungs"] != "-":
        for tok in fields["rungs"].split(";"):
            kind = tok[0]
            i, k = tok[1:].split(".")
            rungs.append(Rung(kind, int(i), int(k)))
    coeff = Scalar(Fraction(lines[1].split()[1]))
    moves = []
    for ln in lines[2:]:
        bits = ln.split()
        kind, pos, slot, k, a, b, line = bits[0], *map(int, bits[1:7])
        deco = None
        if len(bits) > 7:
            parts = bits[7].split("|")
            nvars = int(parts[0])
            terms = {}
            for t in parts[1:]:
                al, c = t.rsplit(":", 1)
                alpha = () if al == "-" else tuple(int(x) for x in al.split("."))
                terms[Partition(alpha)] = Fraction(c)
            deco = SymFunc(nvars, terms)
        moves.append(FoamMove(kind, pos, slot, k, a, b, line, deco))
    return FoamWord(LadderWeb(n, domain, tuple(rungs)), tuple(moves), coeff)


# ---------------------------------------------------------------------------
# Degrees
# ---------------------------------------------------------------------------


def _move_degree(web: LadderWeb, mv: FoamMove) -> int:
    """Local degree of one move applied to ``web``."""
    weights = web.weights
    k = mv.kind
    if k in ("CUP_FE", "CUP_EF", "CAP_FE", "CAP_EF"):
        w = weights[mv.pos]
        slot = mv.slot if k.startswith("CUP") else web.rungs[mv.pos].i
        t = mv.k if k.startswith("CUP") else web.rungs[mv.pos].k
        A, B = w.entries[slot - 1], w.entries[slot]
        lam = A - B
        return t * (t + lam) if k.endswith("FE") else t * (t - lam)
    if k in ("ZIP", "UNZIP"):
        return mv.a * mv.b
    if k in ("SEAM_SPLIT", "SEAM_MERGE", "DIGON_CUP", "DIGON_CAP"):
        return -mv.a * mv.b
    if k == "DECORATE":
        return 2 * mv.deco.degree()
    if k == "ISOTOPY":
        return 0
    raise DomainError(f"unhandled move {k}")  # pragma: no cover


def foam_degree(f: FoamWord) -> int:
    """Degree of a foam word: sum of per-move local degrees."""
    deg = 0
    web = f.source
    for mv in f.moves:
        deg += _move_degree(web, mv)
        web = apply_move(web, mv)
    return deg


# ---------------------------------------------------------------------------
# Weighted Euler characteristic validation
# ---------------------------------------------------------------------------
#
# The degree of an (undecorated) foam F between webs W_bot and W_top is
#     deg(F) = -chi_n(F) + (chi_n(W_top) + chi_n(W_bot)) / 2,
# where chi_n is the weighted Euler characteristic: every cell c carries a
# weight gamma(c) (facet/edge with label k: k(n-k); seam/vertex where k and
# l merge: (k+l)(n-k-l)+kl; triple point with labels k,l,m:
# (k+l+m)(n-k-l-m)+kl+km+lm) and chi_n = sum over cells of (-1)^dim gamma.
#
# The movie is validated slab by slab: the foam of one move is a cell
# complex glued from the identity prism over the untouched part of the web
# plus an explicit local inventory at the move site; chi_n is additive
# under gluing along interface webs (which are counted once).


def _gam(n: int, w: int) -> int:
    return w * (n - w)


def _vtx(n: int, x: int, y: int) -> int:
    return (x + y) * (n - x - y) + x * y


def _triple(n: int, a: int, b: int, m: int) -> int:
    return (a + b + m) * (n - a - b - m) + a * b + a * m + b * m


def _chi_web(web: LadderWeb) -> int:
    """Weighted Euler characteristic of a ladder web (with endpoints)."""
    n = web.n
    m = web.domain.m
    weights = web.weights
    profiles: list[list[int]] = [[web.domain.entries[i]] for i in range(m)]
    verts = 0
    redges = 0
    for r, w in zip(web.rungs, weights):
        A, B = w.entries[r.i - 1], w.entries[r.i]
        nA = A + r.k if r.kind == "E" else A - r.k
        nB = B - r.k if r.kind == "E" else B + r.k
        profiles[r.i - 1].append(nA)
        profiles[r.i].append(nB)
        verts += _vtx(n, min(A, nA), r.k) + _vtx(n, min(B, nB), r.k)
        redges += _gam(n, r.k)
    chi = 0
    for prof in profiles:
        chi += _gam(n, prof[0]) + _gam(n, prof[-1])  # endpoint 0-cells
        chi -= sum(_gam(n, w) for w in prof)  # horizontal segments
    return chi + verts - redges


def _slab_interior(web_below: LadderWeb, mv: FoamMove,
                   web_above: LadderWeb) -> int:
    """chi_n of the open interior of the one-move slab."""
    n = web_below.n
    k = mv.kind
    if k in ("ISOTOPY", "DECORATE"):
        # identity prism (the geometric web is unchanged)
        return -_chi_web(web_below)
    if k in ("CUP_FE", "CUP_EF", "CAP_FE", "CAP_EF", "ZIP", "UNZIP"):
        birth = k in ("CUP_FE", "CUP_EF", "ZIP")
        plain = web_below if birth else web_above
        paired = web_above if birth else web_below
        slot = mv.slot if k in ("ZIP", "UNZIP", "CUP_FE", "CUP_EF") \
            else web_below.rungs[mv.pos].i
        t = mv.b if k in ("ZIP", "UNZIP") else (
            mv.k if birth else web_below.rungs[mv.pos].k)
        A, B = plain.weights[mv.pos].entries[slot - 1:slot + 1]
        Ai, Bi = paired.weights[mv.pos + 1].entries[slot - 1:slot + 1]
        # interior: sheets A and B with bites Ai, Bi, the tube t, and the
        # two seam arcs; accounting folds the site sheets into -chi(plain).
        return (-_chi_web(plain) + _gam(n, Ai) + _gam(n, Bi) + _gam(n, t)
                - _vtx(n, min(A, Ai), t) - _vtx(n, min(B, Bi), t))
    if k in ("SEAM_SPLIT", "SEAM_MERGE", "DIGON_CUP", "DIGON_CAP"):
        birth = k in ("SEAM_SPLIT", "DIGON_CUP")  # one rung below, two above
        plain = web_below if birth else web_above
        paired = web_above if birth else web_below
        slot = plain.rungs[mv.pos].i
        a, b, c = mv.a, mv.b, mv.a + mv.b
        w0 = paired.weights[mv.pos].entries[slot - 1]
        w1 = paired.weights[mv.pos + 1].entries[slot - 1]
        w2 = paired.weights[mv.pos + 2].entries[slot - 1]
        y0 = paired.weights[mv.pos].entries[slot]
        y1 = paired.weights[mv.pos + 1].entries[slot]
        y2 = paired.weights[mv.pos + 2].entries[slot]
        site = (_gam(n, a) + _gam(n, b) + _gam(n, c)
                + _gam(n, w0) + _gam(n, w1) + _gam(n, w2)
                + _gam(n, y0) + _gam(n, y1) + _gam(n, y2)
                - _vtx(n, min(w0, w1), a) - _vtx(n, min(w1, w2), b)
                - _vtx(n, min(w0, w2), c)
                - _vtx(n, min(y0, y1), a) - _vtx(n, min(y1, y2), b)
                - _vtx(n, min(y0, y2), c)
                - _vtx(n, a, b)
                + _triple(n, a, b, min(w0, w2))
                + _triple(n, a, b, min(y0, y2)))
        site_plain = (-_gam(n, w0) - _gam(n, w2) - _gam(n, y0) - _gam(n, y2)
                      - _gam(n, c) + _vtx(n, min(w0, w2), c)
                      + _vtx(n, min(y0, y2), c))
        return -(_chi_web(plain) - site_plain) + site
    raise DomainError(f"unhandled move {k}")  # pragma: no cover


def weighted_euler_validate(f: FoamWord) -> int:
    """
    Independent degree computation from an explicit cell decomposition.

    Builds the movie's CW complex slab by slab and returns
    -chi_n(F) + (chi_n(top)+chi_n(bottom))/2 plus decoration degrees.
    """
    if len(f.moves) > 12:
        raise DomainError("weighted_euler_validate caps at 12 moves")
    webs = f.webs()
    chis = [_chi_web(w) for w in webs]
    if not f.moves:
        return 0
    interior = sum(_slab_interior(wb, mv, wa)
                   for wb, mv, wa in zip(webs, f.moves, webs[1:]))
    chi_f = chis[0] + chis[-1] + sum(chis[1:-1]) + interior
    twice = -2 * chi_f + chis[0] + chis[-1]
    if twice % 2:  # pragma: no cover - integrality guard
        raise DomainError("non-integral weighted Euler degree")
    deco = sum(2 * mv.deco.degree() for mv in f.moves
               if mv.kind == "DECORATE")
    return twice // 2 + deco


# ---------------------------------------------------------------------------
# Composite builders
# ---------------------------------------------------------------------------


def swap_moves(web: LadderWeb, pos: int) -> tuple[FoamMove, ...]:
    """
    The degree-0 move composite exchanging the adjacent same-slot rung
    pair at ``pos`` (an E and an F rung, in either order): cup on the
    second rung's thickness, merge, split, cap.
    """
    r1, r2 = web.rungs[pos], web.rungs[pos + 1]
    if r1.i != r2.i or r1.kind == r2.kind:
        raise DomainError("swap needs an adjacent same-slot E/F pair")
    i = r1.i
    if r1.kind == "E":
        # (E^k, F^l) -> (F^l, E^k): insert (F^l, E^l) below, merge the E's,
        # re-split and cap the (E^l, F^l) pair above.
        l = r2.k
        return (FoamMove("CUP_EF", pos, slot=i, k=l),
                FoamMove("SEAM_MERGE", pos + 1, a=l, b=r1.k),
                FoamMove("SEAM_SPLIT", pos + 1, a=r1.k, b=l),
                FoamMove("CAP_FE", pos + 2))
    # (F^k, E^l) -> (E^l, F^k)
    l = r2.k
    return (FoamMove("CUP_FE", pos, slot=i, k=l),
            FoamMove("SEAM_MERGE", pos + 1, a=l, b=r1.k),
            FoamMove("SEAM_SPLIT", pos + 1, a=r1.k, b=l),
            FoamMove("CAP_EF", pos + 2))


def migrate_decorations(f: FoamWord) -> FoamWord:
    """
    Canonicalize by migrating decorations as late as possible: a
    DECORATE move commutes upward past any later move that does not
    touch its facet (position bookkeeping included).  Decorations that
    would have to cross a move consuming their facet stay put.
    """
    moves = list(f.moves)
    changed = True
    while changed:
        changed = False
        for j in range(len(moves) - 1):
            mv, nxt = moves[j], moves[j + 1]
            if mv.kind != "DECORATE" or mv.pos < 0:
                continue
            newpos = _track_position(mv.pos, nxt)
            if newpos is None:
                continue
            moves[j], moves[j + 1] = nxt, FoamMove(
                "DECORATE", newpos, deco=mv.deco)
            changed = True
    out = FoamWord(f.source, tuple(moves), f.coefficient)
    out.webs()  # replay to assert well-formedness
    return out


def _thin_pos(rungs, pos: int) -> int:
    """Leftmost thin-strand index of the block of rung ``pos``.

    Rung index 0 is drawn rightmost, so the strands left of word
    position ``pos`` are the blocks of all rungs with index >= pos.
    """
    return sum(r.k for r in rungs[pos:])


def _block_swap_slices(klr, q: int, left: int, right: int) -> list:
    """Braid moving a ``right``-block left past a ``left``-block at q."""
    out = []
    for j in range(right):
        for p in range(q + left - 1 + j, q + j - 1, -1):
            out.append(klr.X(p))
    return out


def _braid_slices(klr, q: int, c: int) -> list:
    """The longest-braid-word part of e_c (no dots)."""
    return [s for s in klr.e_idempotent_slices(q, c) if s.kind == "X"]


# Thin images of seam splits/mergers, keyed by (operation, rung kind).
# Values: "none" (idempotent absorbed from below), "braid" (the longest
# braid word), "e" (the full e_c idempotent), "rev" (ascending dot
# staircase then the braid).  Pinned by tools/calibrate_foam.py.
FOAM_CAL = {
    ("split", "E"): "braid", ("split", "F"): "none",
    ("merge", "E"): "none", ("merge", "F"): "braid",
    # which newborn/dying block carries the explicit e_t idempotent
    "cup_e": "E", "cap_e": "E",
}


def _cup_block(which: str, q: int, t: int, e_left: bool) -> int:
    """Strand index of the configured block of a cup/cap pair."""
    if which == "left":
        return q
    if which == "right":
        return q + t
    return q if (which == "E") == e_left else q + t


def _block_op_slices(klr, op: str, kind: str, q: int, c: int):
    """Slices for a split/merge on the c-block at q, plus the slice
    degree they carry (compensated in the word shift so each move's
    degree equals its foam degree)."""
    mode = FOAM_CAL[(op, kind)]
    if mode == "none":
        return [], 0
    if mode == "braid":
        return _braid_slices(klr, q, c), c * (c - 1)
    if mode == "e":
        return klr.e_idempotent_slices(q, c), 0
    if mode == "rev":
        return ([klr.DOT(q + j, j) for j in range(1, c)]
                + _braid_slices(klr, q, c), 0)
    raise DomainError(f"unknown block-op mode {mode}")  # pragma: no cover


def foam_to_klr(f: FoamWord) -> list:
    """
    Thin string-diagram image of a foam word: a list of KLRWords (a
    formal sum; decorations expand into dotted monomials).

    Conventions: the word's ambient weight is the source domain; rung
    index 0 acts first and is drawn rightmost; each thickness-k rung is
    a block of k thin strands sandwiched by the e_k idempotent.  Thick
    cup/cap moves become nested thin cups/caps with their rescaling
    signs; zips/unzips are plain (unit) thin cups/caps; seam splits and
    mergers become idempotent splitters/mergers with a -ab shift; rung
    decorations expand by :func:`slfoam.klr.decoration_words`.

    The degree invariant ``word.degree() - base.degree() ==
    foam_degree(f)`` holds for every output word, where ``base`` is the
    exploded identity of the source web.
    """
    from . import klr

    web = f.source
    divided = [(r.kind, r.i, r.k) for r in web.rungs]
    base = klr.explode_thick(divided, web.domain)
    words = [base.scaled(f.coefficient)]
    cur = web

    def extend(sign: int, slices: list, dshift: int = 0) -> None:
        nonlocal words
        sc = Scalar(sign)
        out = []
        for w in words:
            out.append(dataclasses.replace(
                w, slices=w.slices + tuple(slices),
                coefficient=w.coefficient * sc, shift=w.shift + dshift))
        words = out

    for mv in f.moves:
        k = mv.kind
        rungs = cur.rungs
        if k in ("CUP_FE", "CUP_EF", "ZIP"):
            t = mv.b if k == "ZIP" else mv.k
            i = mv.slot
            q = _thin_pos(rungs, mv.pos)
            left_up = k == "CUP_EF"  # EF pair puts the up (E) leg left
            # one idempotent on a single block; its mirror image on the
            # other block is the same map transported through the cup
            sls = [klr.CUP(q + j, i, left_up) for j in range(t)]
            sls += klr.e_idempotent_slices(
                _cup_block(FOAM_CAL["cup_e"], q, t, left_up), t)
            sign = 1
            if k == "CUP_FE":
                b_ent = cur.weights[mv.pos].entries[i]
                sign = (-1) ** (t * (t - 1) // 2 + t * (b_ent + 1))
            extend(sign, sls)
        elif k in ("CAP_FE", "CAP_EF", "UNZIP"):
            r = rungs[mv.pos]
            t, i = r.k, r.i
            q = _thin_pos(rungs, mv.pos + 2)
            left_up = k == "CAP_EF"
            sls = klr.e_idempotent_slices(
                _cup_block(FOAM_CAL["cap_e"], q, t, left_up), t)
            sls += [klr.CAP(q + t - 1 - j, left_up) for j in range(t)]
            sign = 1
            if k == "CAP_EF":
                b_ent = cur.weights[mv.pos].entries[i]
                sign = (-1) ** (t * (t - 1) // 2 + t * b_ent)
            extend(sign, sls)
        elif k in ("SEAM_SPLIT", "DIGON_CUP"):
            a, b = mv.a, mv.b
            q = _thin_pos(rungs, mv.pos + 1)
            sls, extra = _block_op_slices(
                klr, "split", rungs[mv.pos].kind, q, a + b)
            extend(1, sls, dshift=-a * b + extra)
        elif k in ("SEAM_MERGE", "DIGON_CAP"):
            a, b = mv.a, mv.b
            q = _thin_pos(rungs, mv.pos + 2)
            sls, extra = _block_op_slices(
                klr, "merge", rungs[mv.pos].kind, q, a + b)
            extend(1, sls, dshift=-a * b + extra)
        elif k == "DECORATE":
            if mv.pos < 0:
                raise DomainError(
                    "horizontal-facet decorations have no thin image")
            r = rungs[mv.pos]
            q = _thin_pos(rungs, mv.pos + 1)
            out = []
            for w in words:
                out.extend(klr.decoration_words(w, q, r.k, mv.deco))
            words = out
        elif k == "ISOTOPY":
            r1, r2 = rungs[mv.pos], rungs[mv.pos + 1]
            q = _thin_pos(rungs, mv.pos + 2)
            # left block is rung pos+1 (size r2.k), right is rung pos
            extend(1, _block_swap_slices(klr, q, r2.k, r1.k))
        else:  # pragma: no cover
            raise DomainError(f"unhandled move {k}")
        cur = apply_move(cur, mv)
    return words


def _track_position(pos: int, mv: FoamMove) -> int | None:
    """Where rung ``pos`` sits after ``mv``; None when the move eats it."""
    k = mv.kind
    if k in ("CUP_FE", "CUP_EF", "ZIP"):
        return pos + 2 if pos >= mv.pos else pos
    if k in ("CAP_FE", "CAP_EF", "UNZIP"):
        if pos in (mv.pos, mv.pos + 1):
            return None
        return pos - 2 if pos > mv.pos + 1 else pos
    if k in ("SEAM_SPLIT", "DIGON_CUP"):
        if pos == mv.pos:
            return None
        return pos + 1 if pos > mv.pos else pos
    if k in ("SEAM_MERGE", "DIGON_CAP"):
        if pos in (mv.pos, mv.pos + 1):
            return None
        return pos - 1 if pos > mv.pos + 1 else pos
    if k == "ISOTOPY":
        if pos == mv.pos:
            return pos + 1
        if pos == mv.pos + 1:
            return pos - 1
        return pos
    if k == "DECORATE":
        return pos
    raise DomainError(f"unhandled move {k}")  # pragma: no cover
