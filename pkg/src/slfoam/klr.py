"""
Thin string diagrams of the signed categorified quantum group in the
n-bounded quotient, reduction to bubble normal form, and exact scalar
evaluation of closed diagrams.

Diagram model
-------------
A :class:`KLRWord` is a vertical movie read bottom-to-top.  The bottom
boundary is a list of thin strands (color, orientation), left to right;
``ambient`` is the gl weight of the region to the RIGHT of all strands.
Crossing an upward strand of color i from right to left adds the simple
root alpha_i to the region weight; a downward strand subtracts it.  Any
region whose weight leaves [0, n] kills the word (n-bounded quotient).

Slices:

=====================  ====================================================
X(pos)                 crossing of strands pos, pos+1 (any orientations)
DOT(pos, mult)         mult dots on strand pos
CUP(pos, color, l_up)  birth of two strands at pos, pos+1; ``left_up``
                       tells the orientation of the left leg
CAP(pos, l_up)         death of strands pos, pos+1 (same color, opposite
                       orientations, left leg up iff ``left_up``)
BUB(pos, color, ccw,   a closed dotted circle token living in the region
    mult)              left of strand pos; ``mult`` may be negative (a
                       "fake" bubble)
=====================  ====================================================

Bubble conventions (frozen): a *counterclockwise* bubble is the circle
whose left side points up (cup/cap pair with left leg up); with d dots
at region sl-weight lambda it has degree 2(d - lambda + 1), vanishes for
d < lambda - 1 and equals the identity at d = lambda - 1.  *Clockwise*
is the mirror: degree 2(d + lambda + 1), unit at d = -lambda - 1.  The
degree index k = deg/2 is used internally; the infinite Grassmannian
relation says the two generating functions are mutually inverse.

Thick strands never appear here: divided powers are exploded through the
e_a idempotents (:func:`explode_thick`).
"""

from __future__ import annotations

import hashlib
import os
import sys
import threading
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from .exactalg import DomainError, Partition, Scalar, SymFunc
from .rep import GlWeight

# The fixed sign choice for the KLR parameters.
def t_coeff(i: int, j: int) -> int:
    """t_{ij} for distinct colors: -1 if j = i+1, +1 otherwise."""
    if i == j:
        raise DomainError("t_coeff needs distinct colors")
    return -1 if j == i + 1 else 1


def cartan(i: int, j: int) -> int:
    """(alpha_i, alpha_j) for sl_m simple roots."""
    if i == j:
        return 2
    if abs(i - j) == 1:
        return -1
    return 0


Strand = tuple[int, bool]  # (color, up)


@dataclass(frozen=True)
class KLRSlice:
    kind: str  # "X", "DOT", "CUP", "CAP", "BUB"
    pos: int
    color: int = 0
    left_up: bool = True
    mult: int = 1
    ccw: bool = True

    def __repr__(self):
        if self.kind == "X":
            return f"X{self.pos}"
        if self.kind == "DOT":
            return f"D{self.pos}^{self.mult}"
        if self.kind == "CUP":
            return f"U{self.pos}({self.color},{'EF' if self.left_up else 'FE'})"
        if self.kind == "CAP":
            return f"A{self.pos}({'EF' if self.left_up else 'FE'})"
        return (f"B{self.pos}({self.color},"
                f"{'ccw' if self.ccw else 'cw'},{self.mult})")


def X(pos: int) -> KLRSlice:
    return KLRSlice("X", pos)


def DOT(pos: int, mult: int = 1) -> KLRSlice:
    return KLRSlice("DOT", pos, mult=mult)


def CUP(pos: int, color: int, left_up: bool) -> KLRSlice:
    return KLRSlice("CUP", pos, color=color, left_up=left_up)


def CAP(pos: int, left_up: bool) -> KLRSlice:
    return KLRSlice("CAP", pos, left_up=left_up)


def BUB(pos: int, color: int, ccw: bool, dots: int) -> KLRSlice:
    return KLRSlice("BUB", pos, color=color, ccw=ccw, mult=dots)


def apply_slice(strands: tuple[Strand, ...], sl: KLRSlice) -> tuple[Strand, ...]:
    """Strand list above the slice; DomainError on pattern mismatch."""
    k = sl.kind
    if k == "X":
        if not 0 <= sl.pos <= len(strands) - 2:
            raise DomainError(f"crossing {sl.pos} out of range")
        out = list(strands)
        out[sl.pos], out[sl.pos + 1] = out[sl.pos + 1], out[sl.pos]
        return tuple(out)
    if k == "DOT":
        if not 0 <= sl.pos < len(strands):
            raise DomainError(f"dot {sl.pos} out of range")
        return strands
    if k == "CUP":
        if not 0 <= sl.pos <= len(strands):
            raise DomainError(f"cup {sl.pos} out of range")
        pair = ((sl.color, sl.left_up), (sl.color, not sl.left_up))
        return strands[: sl.pos] + pair + strands[sl.pos:]
    if k == "CAP":
        if not 0 <= sl.pos <= len(strands) - 2:
            raise DomainError(f"cap {sl.pos} out of range")
        (c1, u1), (c2, u2) = strands[sl.pos], strands[sl.pos + 1]
        if c1 != c2 or u1 == u2 or u1 != sl.left_up:
            raise DomainError(f"cap mismatch at {sl.pos}")
        return strands[: sl.pos] + strands[sl.pos + 2:]
    if k == "BUB":
        if not 0 <= sl.pos <= len(strands):
            raise DomainError(f"bubble region {sl.pos} out of range")
        return strands
    raise DomainError(f"unknown slice kind {k}")  # pragma: no cover


def _add_root(entries: list[int], i: int, sign: int) -> None:
    entries[i - 1] += sign
    entries[i] -= sign


@dataclass(frozen=True)
class KLRWord:
    """A thin diagram with an exact coefficient and a formal shift."""

    n: int
    ambient: GlWeight
    bottom: tuple[Strand, ...]
    slices: tuple[KLRSlice, ...]
    coefficient: Scalar = field(default_factory=lambda: Scalar(1))
    shift: int = 0
    ambient_bubs: tuple[tuple[int, bool, int], ...] = ()  # (color, ccw, dots)

    def __post_init__(self):
        object.__setattr__(self, "bottom", tuple(self.bottom))
        object.__setattr__(self, "slices", tuple(self.slices))
        object.__setattr__(self, "ambient_bubs", tuple(self.ambient_bubs))

    @cached_property
    def levels(self) -> tuple[tuple[Strand, ...], ...]:
        """Strand lists: levels[t] is below slice t; last entry is the top."""
        out = [self.bottom]
        for sl in self.slices:
            out.append(apply_slice(out[-1], sl))
        return tuple(out)

    @property
    def top(self) -> tuple[Strand, ...]:
        return self.levels[-1]

    @property
    def closed(self) -> bool:
        return not self.bottom and not self.top

    def region_weight(self, level: int, pos: int) -> GlWeight:
        """Weight of the region left of strand ``pos`` at ``level``."""
        strands = self.levels[level]
        e = list(self.ambient.entries)
        for c, up in strands[pos:]:
            _add_root(e, c, 1 if up else -1)
        return GlWeight(self.n, tuple(e))

    @cached_property
    def zero(self) -> bool:
        """True when some region weight entry leaves [0, n]."""
        n = self.n
        try:
            levels = self.levels
        except DomainError:
            return True
        for strands in levels:
            e = list(self.ambient.entries)
            if any(not 0 <= a <= n for a in e):
                return True
            for c, up in reversed(strands):
                _add_root(e, c, 1 if up else -1)
                if not 0 <= e[c - 1] <= n or not 0 <= e[c] <= n:
                    return True
        return False

    def slice_degree(self, t: int) -> int:
        """Degree of slice t from the frozen grading conventions."""
        sl = self.slices[t]
        strands = self.levels[t]
        if sl.kind == "DOT":
            return 2 * sl.mult
        if sl.kind == "X":
            (c1, u1), (c2, u2) = strands[sl.pos], strands[sl.pos + 1]
            if u1 != u2:
                return 0
            return -cartan(c1, c2)
        if sl.kind == "CUP":
            lam = self.region_weight(t, sl.pos).lam(sl.color)
            return 1 - lam if sl.left_up else 1 + lam
        if sl.kind == "CAP":
            c = strands[sl.pos][0]
            lam = self.region_weight(t, sl.pos + 2).lam(c)
            return 1 - lam if sl.left_up else 1 + lam
        if sl.kind == "BUB":
            lam = self.region_weight(t, sl.pos).lam(sl.color)
            return 2 * (sl.mult - lam + 1) if sl.ccw else 2 * (sl.mult + lam + 1)
        raise DomainError(f"unknown slice kind {sl.kind}")  # pragma: no cover

    def degree(self) -> int:
        """Total degree: slices plus ambient bubbles plus the shift."""
        deg = self.shift
        for t in range(len(self.slices)):
            deg += self.slice_degree(t)
        for color, ccw, dots in self.ambient_bubs:
            lam = self.ambient.lam(color)
            deg += 2 * (dots - lam + 1) if ccw else 2 * (dots + lam + 1)
        return deg

    def canonical_key(self) -> tuple:
        return (self.n, self.ambient.entries, self.bottom,
                tuple((s.kind, s.pos, s.color, s.left_up, s.mult, s.ccw)
                      for s in self.slices),
                tuple(sorted(self.ambient_bubs)), self.shift)

    def word_hash(self) -> str:
        """Stable content hash of the diagram (coefficient excluded)."""
        text = repr(("v1", self.canonical_key()))
        return hashlib.sha256(text.encode()).hexdigest()

    def scaled(self, c: Scalar | int | Fraction) -> "KLRWord":
        if not isinstance(c, Scalar):
            c = Scalar(Fraction(c))
        return replace(self, coefficient=self.coefficient * c)

    def __repr__(self):
        body = " ".join(repr(s) for s in self.slices) or "id"
        return (f"KLRWord({self.coefficient.value} * [{body}] on "
                f"{list(self.bottom)} | {list(self.ambient.entries)})")


@dataclass(frozen=True)
class Bubble:
    """A dotted bubble with its region's sl weight frozen in."""

    color: int
    ccw: bool
    dots: int  # may be negative: a fake bubble
    lam: int  # sl weight lambda_i of the region the bubble sits in

    @property
    def index(self) -> int:
        """Degree index k = deg/2."""
        return (self.dots - self.lam + 1) if self.ccw \
            else (self.dots + self.lam + 1)

    @property
    def fake(self) -> bool:
        return self.dots < 0


def bubble_value(b: Bubble, weight: GlWeight) -> Scalar | None:
    """
    Scalar value of a bubble at ``weight`` (whose lam must match ``b``).

    Negative degree: 0.  Degree zero (real or fake): 1.  Positive degree
    at a trivial-object weight: 0 (fake ones expand by the Grassmannian
    recursion into products each containing a vanishing real bubble).
    Positive degree at a non-trivial weight: symbolic — returns None.
    """
    if not weight.admissible:
        raise DomainError("bubble at inadmissible weight")
    if weight.lam(b.color) != b.lam:
        raise DomainError("bubble weight mismatch")
    k = b.index
    if k < 0:
        return Scalar(0)
    if k == 0:
        return Scalar(1)
    if weight.trivial:
        return Scalar(0)
    return None


# ---------------------------------------------------------------------------
# Thick calculus: e_a idempotents and divided-power explosion
# ---------------------------------------------------------------------------


def e_idempotent_slices(pos: int, a: int) -> list[KLRSlice]:
    """
    The e_a idempotent on thin strands pos..pos+a-1 (same color, same
    orientation): the longest braid word followed by the staircase dot
    pattern on top (strand pos+j carries a-1-j dots).
    """
    out: list[KLRSlice] = []
    for rnd in range(a - 1):
        for p in range(pos + a - 2, pos + rnd - 1, -1):
            out.append(X(p))
    for j in range(a):
        if a - 1 - j > 0:
            out.append(DOT(pos + j, a - 1 - j))
    return out


def explode_thick(divided: list[tuple[str, int, int]],
                  ambient: GlWeight) -> KLRWord:
    """
    Explode a divided-power word into a thin identity-shaped KLRWord.

    ``divided`` lists (kind, color, thickness) with index 0 acting first
    on ``ambient``; strands are drawn with index 0 rightmost.  Each
    X^{(a)} becomes a parallel thin strands sandwiched by e_a, with the
    grading shift a(a-1)/2.
    """
    bottom: list[Strand] = []
    for kind, color, a in reversed(divided):
        if a < 1:
            raise DomainError("thickness must be positive")
        bottom.extend([(color, kind == "E")] * a)
    slices: list[KLRSlice] = []
    shift = 0
    pos = 0
    for kind, color, a in reversed(divided):
        slices.extend(e_idempotent_slices(pos, a))
        shift += a * (a - 1) // 2
        pos += a
    return KLRWord(ambient.n, ambient, tuple(bottom), tuple(slices),
                   Scalar(1), shift)


def schur_monomials(alpha: Partition, k: int) -> list[tuple[int, ...]]:
    """
    The monomial expansion of the Schur polynomial s_alpha(x_1..x_k):
    one exponent vector per semistandard tableau of shape alpha with
    entries in {1..k} (weights listed with multiplicity).
    """
    if not alpha.in_box(k, 10 ** 9):
        return []
    rows = list(alpha.parts)
    out: list[tuple[int, ...]] = []

    def fill(r: int, c: int, tab: list[list[int]]):
        if r == len(rows):
            w = [0] * k
            for row in tab:
                for v in row:
                    w[v - 1] += 1
            out.append(tuple(w))
            return
        if c == rows[r]:
            fill(r + 1, 0, tab)
            return
        lo = 1
        if c > 0:
            lo = max(lo, tab[r][c - 1])  # weakly increasing rows
        if r > 0:
            lo = max(lo, tab[r - 1][c] + 1)  # strictly increasing columns
        for v in range(lo, k + 1):
            tab[r].append(v)
            fill(r, c + 1, tab)
            tab[r].pop()

    fill(0, 0, [[] for _ in rows])
    return out


def decoration_words(base: KLRWord, pos: int, k: int,
                     deco: SymFunc) -> list[KLRWord]:
    """
    Expand a symmetric-function decoration on the thin strands
    pos..pos+k-1 of ``base`` into a sum of dotted words (valid inside
    e_k sandwiches, where dot monomials symmetrize).
    """
    out = []
    for alpha, c in sorted(deco.terms.items()):
        for expo in schur_monomials(alpha, k):
            sls = list(base.slices)
            sls.extend(DOT(pos + j, e) for j, e in enumerate(expo) if e)
            out.append(replace(base, slices=tuple(sls),
                               coefficient=base.coefficient * Scalar(c)))
    return out


# ---------------------------------------------------------------------------
# Persistent scalar cache
# ---------------------------------------------------------------------------


class ScalarCache:
    """
    Append-only persistent map word-hash -> Scalar.

    File format: one record per line, ``hash<TAB>value`` with the value a
    Fraction literal.  Corrupt lines are skipped with a warning.  Safe
    for concurrent reads; insertions are serialized by a lock.
    """

    def __init__(self, path: str | None = None):
        self.path = path
        self._data: dict[str, Scalar] = {}
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                for ln, line in enumerate(fh, 1):
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    parts = line.split("\t")
                    try:
                        if len(parts) != 2:
                            raise ValueError("wrong field count")
                        h, v = parts
                        int(h, 16)
                        self._data[h] = Scalar(Fraction(v))
                    except (ValueError, ZeroDivisionError):
                        print(f"warning: skipping corrupt cache line {ln} "
                              f"in {path}", file=sys.stderr)

    def get(self, key: str) -> Scalar | None:
        return self._data.get(key)

    def put(self, key: str, value: Scalar) -> None:
        with self._lock:
            if key in self._data:
                return
            self._data[key] = value
            if self.path:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(f"{key}\t{value.value}\n")

    def __len__(self):
        return len(self._data)


# ---------------------------------------------------------------------------
# Calibrated sign constants
# ---------------------------------------------------------------------------
#
# A handful of generator-normalization signs are not forced pointwise by
# the defining relations: flipping some of them together is a gauge
# change (rescaling cups/caps) that leaves every closed evaluation
# fixed.  The values below were selected by an exhaustive dev-time
# search (tools/calibrate_klr.py): the unique sign assignment, up to
# gauge, for which a corpus of closed probe diagrams evaluates to equal
# scalars along independent reduction paths.  Tests re-verify the probe
# corpus on every run.

CAL = {
    # mixed same-color crossing dot slides: sign of the eye correction,
    # keyed by (crossing bottom pattern up-at-left, dot on left leg)
    "mix_dot": {(True, True): 1, (True, False): 1,
                (False, True): 1, (False, False): 1},
    # nilHecke dot-slide correction sign for down-down crossings
    # (up-up is fixed by the relations)
    "down_dot_sign": 1,
    # bubble slides: exponent sign keyed by (strand up, bubble ccw);
    # the series is (1 + s_inner x t)^(sign * cartan)
    "slide_sign": {(True, True): 1, (True, False): -1,
                   (False, True): -1, (False, False): 1},
    "slide_inner": 1,
    # curl elimination: base sign keyed by (pattern, left_up of the
    # crossed cup/cap), a weight-parity sign g^lambda, and a dot-parity
    # sign h^{f1} inside the bubble sum
    "curl_base": {("cup", True): 1, ("cup", False): -1,
                  ("cap", True): 1, ("cap", False): 1},
    "curl_g": 1,
    "curl_h": -1,
}


class ReductionError(DomainError):
    """Raised when a closed diagram cannot be driven to bubbles."""


# ---------------------------------------------------------------------------
# Slice support / commutation bookkeeping
# ---------------------------------------------------------------------------


def _support(sl: KLRSlice) -> tuple[int, int]:
    """Support interval in doubled coordinates (strand p at 2p)."""
    if sl.kind == "BUB":
        return (2 * sl.pos - 1, 2 * sl.pos - 1)
    if sl.kind == "DOT":
        return (2 * sl.pos, 2 * sl.pos)
    return (2 * sl.pos, 2 * sl.pos + 2)


def _delta(sl: KLRSlice) -> int:
    """Strand count change of a slice."""
    if sl.kind == "CUP":
        return 2
    if sl.kind == "CAP":
        return -2
    return 0


def _shifted(sl: KLRSlice, by: int) -> KLRSlice:
    return replace(sl, pos=sl.pos + by) if by else sl


def _try_swap(a: KLRSlice, b: KLRSlice) -> tuple[KLRSlice, KLRSlice] | None:
    """
    If slice ``b`` (directly above ``a``) commutes with it, return the
    swapped pair (b', a') with positions reindexed; else None.
    """
    alo, ahi = _support(a)
    blo, bhi = _support(b)
    da, db = _delta(a), _delta(b)
    if bhi < alo:  # b entirely left of a
        return b, _shifted(a, db)
    if blo > ahi + da:  # b entirely right of a (above-a coordinates)
        return _shifted(b, -da), a
    return None


def _sort_key(sl: KLRSlice) -> tuple:
    rank = {"BUB": 0, "CAP": 1, "DOT": 2, "X": 3, "CUP": 4}[sl.kind]
    return (_support(sl)[0], rank, sl.color, sl.left_up, sl.mult, sl.ccw)


# ---------------------------------------------------------------------------
# Cheap canonicalization (single word, coefficient-preserving)
# ---------------------------------------------------------------------------


def canonicalize(w: KLRWord) -> KLRWord | None:
    """
    Deterministic cheap normalization: drop zero words, merge dots,
    normalize dots to left legs of cups/caps, commute-sort disjoint
    slices, remove snake zigzags, convert bare circles to bubble
    tokens, migrate trivial-index bubbles out.

    Returns None when the word is zero.
    """
    if not w.coefficient:
        return None
    if w.zero:
        return None
    slices = list(w.slices)
    bubs = list(w.ambient_bubs)
    coeff = w.coefficient
    changed = True
    guard = 0
    while changed:
        guard += 1
        if guard > 60 + 10 * len(slices):  # pragma: no cover
            raise ReductionError("canonicalize failed to stabilize")
        changed = False
        # drop empty dots
        kept = [s for s in slices if not (s.kind == "DOT" and s.mult == 0)]
        if len(kept) != len(slices):
            slices, changed = kept, True
        # strand lists per level for local pattern checks
        try:
            levels = [tuple(w.bottom)]
            for s in slices:
                levels.append(apply_slice(levels[-1], s))
        except DomainError:
            return None
        # bubble index bookkeeping: index 0 -> drop, index < 0 -> zero,
        # ambient position -> move out
        for t, s in enumerate(slices):
            if s.kind != "BUB":
                continue
            e = list(w.ambient.entries)
            for c, up in levels[t][s.pos:]:
                _add_root(e, c, 1 if up else -1)
            lam = e[s.color - 1] - e[s.color]
            idx = (s.mult - lam + 1) if s.ccw else (s.mult + lam + 1)
            if idx < 0:
                return None
            if idx == 0:
                del slices[t]
                changed = True
                break
            if s.pos == len(levels[t]):
                bubs.append((s.color, s.ccw, s.mult))
                del slices[t]
                changed = True
                break
        if changed:
            continue
        # pairwise local moves
        for t in range(len(slices) - 1):
            a, b = slices[t], slices[t + 1]
            # merge dots
            if (a.kind == "DOT" and b.kind == "DOT" and a.pos == b.pos):
                slices[t:t + 2] = [DOT(a.pos, a.mult + b.mult)]
                changed = True
                break
            # dot on right leg of a cup -> left leg
            if (a.kind == "CUP" and b.kind == "DOT" and b.pos == a.pos + 1):
                slices[t + 1] = DOT(a.pos, b.mult)
                changed = True
                break
            # dot on right leg of a cap -> left leg
            if (a.kind == "DOT" and b.kind == "CAP" and a.pos == b.pos + 1):
                slices[t] = DOT(b.pos, a.mult)
                changed = True
                break
            # snake zigzags
            if (a.kind == "CUP" and b.kind == "CAP"
                    and b.pos in (a.pos + 1, a.pos - 1)):
                del slices[t:t + 2]
                changed = True
                break
            # snake zigzag with dots on its legs: dots slide around the
            # bend exactly, so migrate them to the surviving strand
            if a.kind == "CUP":
                t2 = t + 1
                dtot = 0
                while (t2 < len(slices) and slices[t2].kind == "DOT"
                       and slices[t2].pos in (a.pos, a.pos + 1)):
                    dtot += slices[t2].mult
                    t2 += 1
                if (dtot and t2 < len(slices)
                        and slices[t2].kind == "CAP"
                        and slices[t2].pos in (a.pos + 1, a.pos - 1)):
                    surv = a.pos if slices[t2].pos == a.pos + 1 \
                        else a.pos - 1
                    slices[t:t2 + 1] = [DOT(surv, dtot)]
                    changed = True
                    break
            # bare circle -> bubble token (dots already on the left leg)
            if (a.kind == "CUP" and b.kind == "CAP" and b.pos == a.pos):
                slices[t:t + 2] = [BUB(a.pos, a.color, a.left_up, 0)]
                changed = True
                break
            if (a.kind == "CUP" and b.kind == "DOT" and b.pos == a.pos
                    and t + 2 < len(slices)
                    and slices[t + 2].kind == "CAP"
                    and slices[t + 2].pos == a.pos):
                slices[t:t + 3] = [BUB(a.pos, a.color, a.left_up, b.mult)]
                changed = True
                break
            # deterministic commute-sort
            swapped = _try_swap(a, b)
            if swapped is not None:
                b2, a2 = swapped
                if _sort_key(b2) < _sort_key(a):
                    slices[t], slices[t + 1] = b2, a2
                    changed = True
                    break
    out = replace(w, slices=tuple(slices), coefficient=coeff,
                  ambient_bubs=tuple(sorted(bubs)))
    return None if out.zero else out


# ---------------------------------------------------------------------------
# Rewrite rules (one step; returns list of replacement words or None)
# ---------------------------------------------------------------------------


def _splice(w: KLRWord, t0: int, t1: int,
            pieces: list[tuple[Fraction | int, list[KLRSlice]]]
            ) -> list[KLRWord]:
    """Replace slices [t0, t1) by each (coefficient, slice list)."""
    out = []
    for c, sls in pieces:
        out.append(replace(
            w,
            slices=w.slices[:t0] + tuple(sls) + w.slices[t1:],
            coefficient=w.coefficient * Scalar(Fraction(c))))
    return out


def _double_rule(w: KLRWord, t: int) -> list[KLRWord] | None:
    """Two adjacent crossings of the same strand pair."""
    a, b = w.slices[t], w.slices[t + 1]
    if not (a.kind == "X" and b.kind == "X" and a.pos == b.pos):
        return None
    p = a.pos
    (c1, u1), (c2, u2) = w.levels[t][p], w.levels[t][p + 1]
    if c1 == c2 and u1 == u2:
        return []
    if c1 != c2:
        if u1 == u2:
            if abs(c1 - c2) >= 2:
                return _splice(w, t, t + 2, [(1, [])])
            return _splice(w, t, t + 2, [
                (t_coeff(c1, c2), [DOT(p, 1)]),
                (t_coeff(c2, c1), [DOT(p + 1, 1)]),
            ])
        coeff = t_coeff(c2, c1) if u1 else t_coeff(c1, c2)
        return _splice(w, t, t + 2, [(coeff, [])])
    # same color, opposite orientations: identity decompositions
    lam = w.region_weight(t, p + 2).lam(c1)
    pieces: list[tuple[int, list[KLRSlice]]] = [(-1, [])]
    if u1 and lam >= 1:  # (up, down) pair
        for f1 in range(lam):
            for f2 in range(lam - f1):
                f3 = lam - 1 - f1 - f2
                sls = ([DOT(p, f3)] if f3 else []) + [
                    CAP(p, True), BUB(p, c1, False, -lam - 1 + f2),
                    CUP(p, c1, True)] + ([DOT(p, f1)] if f1 else [])
                pieces.append((1, sls))
    if not u1 and lam <= -1:  # (down, up) pair
        for g1 in range(-lam):
            for g2 in range(-lam - g1):
                g3 = -lam - 1 - g1 - g2
                sls = ([DOT(p, g3)] if g3 else []) + [
                    CAP(p, False), BUB(p, c1, True, lam - 1 + g2),
                    CUP(p, c1, False)] + ([DOT(p, g1)] if g1 else [])
                pieces.append((1, sls))
    return _splice(w, t, t + 2, pieces)


def _dot_slide_rule(w: KLRWord, t: int) -> list[KLRWord] | None:
    """Dot directly below a crossing on one of its strands."""
    a, b = w.slices[t], w.slices[t + 1]
    if not (a.kind == "DOT" and b.kind == "X"
            and a.pos in (b.pos, b.pos + 1)):
        return None
    p = b.pos
    (c1, u1), (c2, u2) = w.levels[t][p], w.levels[t][p + 1]
    on_left = a.pos == p
    other = p + 1 if on_left else p
    if c1 != c2:
        # distinct colors: free slide
        return _splice(w, t, t + 2, [(1, [X(p), DOT(other, a.mult)])])
    if u1 == u2:
        # nilHecke: psi x_p = x_{p+1} psi + 1, psi x_{p+1} = x_p psi - 1
        sgn = (1 if on_left else -1)
        if not u1:
            sgn *= CAL["down_dot_sign"]
        rest = [DOT(a.pos, a.mult - 1)] if a.mult > 1 else []
        return _splice(w, t, t + 2, [
            (1, rest + [X(p), DOT(other, 1)]),
            (sgn, rest.copy()),
        ])
    # same color, mixed orientations: slide with an eye correction
    eye_lu = u1  # the cap matches the bottom pair orientation
    sgn = CAL["mix_dot"][(u1, on_left)]
    rest = [DOT(a.pos, a.mult - 1)] if a.mult > 1 else []
    return _splice(w, t, t + 2, [
        (1, rest + [X(p), DOT(other, 1)]),
        (sgn, rest.copy() + [CAP(p, eye_lu), CUP(p, c1, not eye_lu)]),
    ])


def _curl_rule(w: KLRWord, t: int) -> list[KLRWord] | None:
    """
    Kink elimination: a crossing joining both legs of a cup (or both
    strands that die in a cap), with dots on the loop in between.

    A crossed EF cup is an FE cup with a kink (and vice versa); the kink
    unwinds into a sum of dotted strands times bubbles in the loop
    region.  The number of terms D follows from degree conservation
    (D = loop dots -/+ lambda); D < 0 kills the word, which reproduces
    the one-sided vanishing of undotted curls.
    """
    sl = w.slices
    a = sl[t]
    nsl = len(sl)
    if a.kind not in ("CUP", "X"):
        return None
    p = a.pos
    d = 0
    t2 = t + 1
    while t2 < nsl and sl[t2].kind == "DOT" and sl[t2].pos in (p, p + 1):
        d += sl[t2].mult
        t2 += 1
    if t2 >= nsl:
        return None
    b = sl[t2]
    if a.kind == "CUP":
        if not (b.kind == "X" and b.pos == p):
            return None
        i, lu = a.color, a.left_up
        lam = w.region_weight(t, p).lam(i)  # right of the newborn pair
        # loop region of the *output* (flipped) cup: crossing its right
        # leg shifts lam by +2 (up leg) or -2 (down leg)
        lam_in = lam + (2 if lu else -2)
        keep: list[KLRSlice] = [CUP(p, i, not lu)]
        tail: list[KLRSlice] = []
    else:
        if not (b.kind == "CAP" and b.pos == p):
            return None
        (c1, u1), (c2, u2) = w.levels[t][p], w.levels[t][p + 1]
        if c1 != c2 or u1 == u2:
            return None
        i, lu = c1, b.left_up
        lam = w.region_weight(t, p + 2).lam(i)  # right of the dying pair
        lam_in = w.region_weight(t, p + 1).lam(i)  # loop region
        keep = []
        tail = [CAP(p, u1)]
    D = (d - lam) if lu else (d + lam)
    if D < 0:
        return _splice(w, t, t2 + 1, [])
    kind = "cup" if a.kind == "CUP" else "cap"
    base = CAL["curl_base"][(kind, lu)]
    if lam % 2:
        base *= CAL["curl_g"]
    h = CAL["curl_h"]
    pieces: list[tuple[int, list[KLRSlice]]] = []
    for f1 in range(D + 1):
        f2 = D - f1
        dts = (f2 + lam_in - 1) if lu else (f2 - lam_in - 1)
        sls = list(keep)
        if f1:
            sls.append(DOT(p, f1))
        sls.append(BUB(p + 1, i, lu, dts))
        sls.extend(tail)
        pieces.append((base * (h if f1 % 2 else 1), sls))
    return _splice(w, t, t2 + 1, pieces)


def _bubble_slide_rule(w: KLRWord, t: int) -> list[KLRWord] | None:
    """Slide a blocked bubble token right across one strand."""
    s = w.slices[t]
    if s.kind != "BUB":
        return None
    strands = w.levels[t]
    if s.pos >= len(strands):
        return None  # ambient; canonicalize extracts it
    j, up = strands[s.pos]
    i = s.color
    lam_in = w.region_weight(t, s.pos).lam(i)
    lam_out = w.region_weight(t, s.pos + 1).lam(i)
    k_in = (s.mult - lam_in + 1) if s.ccw else (s.mult + lam_in + 1)
    ca = cartan(i, j)
    if ca == 0:
        return _splice(w, t, t + 1, [(1, [BUB(s.pos + 1, i, s.ccw,
                                              s.mult)])])
    e = CAL["slide_sign"][(up, s.ccw)] * ca
    s2 = CAL["slide_inner"]
    pieces = []
    from math import comb
    for f in range(k_in + 1):
        if e >= 0:
            if f > e:
                break
            cf = comb(e, f) * (s2 ** f)
        else:
            cf = comb(-e + f - 1, f) * ((-s2) ** f)
        if cf == 0:
            continue
        k_out = k_in - f
        d_out = (k_out + lam_out - 1) if s.ccw else (k_out - lam_out - 1)
        sls: list[KLRSlice] = []
        if f:
            sls.append(DOT(s.pos, f))
        sls.append(BUB(s.pos + 1, i, s.ccw, d_out))
        pieces.append((cf, sls))
    return _splice(w, t, t + 1, pieces)


_RULES = (_double_rule, _dot_slide_rule, _curl_rule, _bubble_slide_rule)


def _bring_down(slices: tuple[KLRSlice, ...], t_from: int,
                t_to: int) -> list[KLRSlice] | None:
    """
    Commute the slice at ``t_from`` down to index ``t_to`` past
    independent slices (exact moves only); None when blocked.
    """
    out = list(slices)
    cur = out[t_from]
    for t in range(t_from - 1, t_to - 1, -1):
        swapped = _try_swap(out[t], cur)
        if swapped is None:
            return None
        cur, out[t + 1] = swapped
    out[t_to] = cur
    return out


def _find_rewrite(w: KLRWord) -> list[KLRWord] | None:
    nsl = len(w.slices)
    for t in range(nsl):
        out = _bubble_slide_rule(w, t)
        if out is not None:
            return out
        out = _curl_rule(w, t)
        if out is not None:
            return out
        for t2 in range(t + 1, nsl):
            if t2 == t + 1:
                wc = w
            else:
                cand = _bring_down(w.slices, t2, t + 1)
                if cand is None:
                    continue
                wc = replace(w, slices=tuple(cand))
            for rule in (_double_rule, _dot_slide_rule):
                out = rule(wc, t)
                if out is not None:
                    return out
    return None


# ---------------------------------------------------------------------------
# Stuck-diagram isotopy search (bend slides, R3)
# ---------------------------------------------------------------------------


def _r3_triples(w: KLRWord):
    """
    Yield (word, t, hard) for braid triples [X@p, X@q, X@p] with
    |p - q| = 1 made adjacent by exact commutations; ``hard`` marks the
    (i, j, i) adjacent-color same-orientation case with its correction.
    """
    sl = w.slices
    xs = [t for t, s in enumerate(sl) if s.kind == "X"]
    for a_i, t in enumerate(xs):
        for t2 in xs[a_i + 1:]:
            for t3 in xs:
                if t3 <= t2:
                    continue
                cand = _bring_down(sl, t2, t + 1)
                if cand is None:
                    continue
                cand = _bring_down(tuple(cand), t3, t + 2)
                if cand is None:
                    continue
                a, b, c = cand[t], cand[t + 1], cand[t + 2]
                if not (a.pos == c.pos and abs(b.pos - a.pos) == 1):
                    continue
                wc = replace(w, slices=tuple(cand))
                try:
                    strands = wc.levels[t]
                except DomainError:
                    continue
                lo = min(a.pos, b.pos)
                trip = strands[lo:lo + 3]
                cols = [s[0] for s in trip]
                oris = [s[1] for s in trip]
                hard = (cols[0] == cols[2] and abs(cols[0] - cols[1]) == 1
                        and len(set(oris)) == 1)
                yield wc, t, hard
                break
            else:
                continue
            break


def _isotopy_neighbors(w: KLRWord) -> list[KLRWord]:
    """Coefficient-preserving isotopy moves: bend slides and exact R3."""
    out = []
    sl = w.slices

    def _exact_bend(level: int, xpos: int) -> bool:
        # crossing rotations around bends are exact only for equal or
        # distant colors (adjacent colors pick up t factors)
        try:
            strands = w.levels[level]
        except DomainError:
            return False
        c1, c2 = strands[xpos][0], strands[xpos + 1][0]
        return c1 == c2 or abs(c1 - c2) >= 2

    for t in range(len(sl) - 1):
        a, b = sl[t], sl[t + 1]
        if (a.kind == "CUP" and b.kind == "X"
                and b.pos in (a.pos - 1, a.pos + 1)
                and _exact_bend(t + 1, b.pos)):
            # [CUP@p, X@p+-1] <-> [CUP@p+-1, X@p]
            q = b.pos
            cand = sl[:t] + (replace(a, pos=q), X(a.pos)) + sl[t + 2:]
            out.append(replace(w, slices=cand))
        if (a.kind == "X" and b.kind == "CAP"
                and b.pos in (a.pos - 1, a.pos + 1)
                and _exact_bend(t, a.pos)):
            q = b.pos
            cand = sl[:t] + (X(q), replace(b, pos=a.pos)) + sl[t + 2:]
            out.append(replace(w, slices=cand))
    for wc, t, hard in _r3_triples(w):
        if hard:
            continue
        a, b = wc.slices[t], wc.slices[t + 1]
        cand = wc.slices[:t] + (X(b.pos), X(a.pos), X(b.pos)) \
            + wc.slices[t + 3:]
        out.append(replace(w, slices=cand))
    valid = []
    for cand in out:
        try:
            cand.levels
        except DomainError:
            continue
        valid.append(cand)
    return valid


def _hard_r3(w: KLRWord) -> list[KLRWord] | None:
    """The correction-term R3 for (i, j, i) with adjacent colors."""
    for wc, t, hard in _r3_triples(w):
        if not hard:
            continue
        a, b = wc.slices[t], wc.slices[t + 1]
        strands = wc.levels[t]
        lo = min(a.pos, b.pos)
        i, j = strands[lo][0], strands[lo + 1][0]
        # psi_lo psi_{lo+1} psi_lo = psi_{lo+1} psi_lo psi_{lo+1} + t_ij
        sign = 1 if a.pos == lo else -1
        return _splice(wc, t, t + 3, [
            (1, [X(b.pos), X(a.pos), X(b.pos)]),
            (sign * t_coeff(i, j), []),
        ])
    return None


def _unstick(w: KLRWord, limit: int = 4000) -> list[KLRWord] | None:
    """BFS over isotopy representatives until a strict rule applies."""
    from collections import deque
    seen = {w.canonical_key()}
    queue = deque([w])
    budget = limit
    while queue and budget > 0:
        cur = queue.popleft()
        hard = _hard_r3(cur)
        if hard is not None:
            return hard
        for nb in _isotopy_neighbors(cur):
            budget -= 1
            nb2 = canonicalize(nb)
            if nb2 is None:
                return []  # the word is zero
            key = nb2.canonical_key()
            if key in seen:
                continue
            seen.add(key)
            found = _find_rewrite(nb2)
            if found is not None:
                return found
            queue.append(nb2)
    return None


def _orbit_rep(w: KLRWord, limit: int = 300) -> KLRWord:
    """
    Lexicographically least representative of the exact-isotopy orbit
    of a normal form (bend slides and exact R3), for stable merging.
    """
    from collections import deque
    best = w
    best_key = w.canonical_key()
    seen = {best_key}
    queue = deque([w])
    while queue and len(seen) < limit:
        cur = queue.popleft()
        for nb in _isotopy_neighbors(cur):
            nb2 = canonicalize(nb)
            if nb2 is None:
                continue
            key = nb2.canonical_key()
            if key in seen:
                continue
            seen.add(key)
            if key < best_key:
                best, best_key = nb2, key
            queue.append(nb2)
    return best


# ---------------------------------------------------------------------------
# Reduction driver and closed evaluation
# ---------------------------------------------------------------------------

ASSERT_DEGREES = True


def reduce(word: KLRWord, max_steps: int = 2_000_000) -> list[KLRWord]:
    """
    Rewrite to a linear combination of bubble-normal-form words.

    Termination measure (each strict rule strictly decreases it in
    lexicographic order): (crossing count; total weight of dots lying
    below a crossing on their strand pair; bubble tokens not yet in the
    ambient region; cup count).  Double rules and twists drop crossings;
    dot slides move dot weight above a crossing or drop a crossing;
    bubble slides decrease blocked-token distance to the ambient region;
    snake/circle canonicalization drops cups.  The isotopy search used
    for stuck diagrams is bounded and memoized.
    """
    merged: dict[tuple, KLRWord] = {}
    start = canonicalize(word)
    deg0 = None if start is None else start.degree()
    stack = [start] if start is not None else []
    steps = 0
    while stack:
        steps += 1
        if steps > max_steps:
            raise ReductionError("reduction step budget exceeded")
        w = stack.pop()
        children = _find_rewrite(w)
        if children is None and w.slices:
            children = _unstick(w)
        if children is None:
            if ASSERT_DEGREES and deg0 is not None and w.degree() != deg0:
                raise ReductionError(
                    f"degree drift: {w.degree()} != {deg0}")
            if w.slices:
                w = _orbit_rep(w)
            key = w.canonical_key()
            if key in merged:
                prev = merged[key]
                tot = prev.coefficient + w.coefficient
                if tot:
                    merged[key] = replace(prev, coefficient=tot)
                else:
                    del merged[key]
            else:
                merged[key] = w
            continue
        for child in children:
            c = canonicalize(child)
            if c is not None:
                stack.append(c)
    return [merged[k] for k in sorted(merged)]


def evaluate_closed(word: KLRWord, cache: ScalarCache | None = None) -> Scalar:
    """
    Exact scalar value of a closed diagram at a trivial-object weight.
    """
    if word.bottom or word.top:
        raise DomainError("evaluate_closed needs a closed diagram")
    if not word.ambient.trivial:
        raise DomainError("evaluate_closed needs a trivial-object weight")
    bare = replace(word, coefficient=Scalar(1))
    key = bare.word_hash()
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit * word.coefficient
    total = Scalar(0)
    for nf in reduce(bare):
        if nf.slices:
            raise ReductionError(
                f"closed diagram did not reduce to bubbles: {nf!r}")
        val = nf.coefficient
        for color, ccw, dots in nf.ambient_bubs:
            bv = bubble_value(
                Bubble(color, ccw, dots, word.ambient.lam(color)),
                word.ambient)
            val = val * bv
        total = total + val
    if cache is not None:
        cache.put(key, total)
    return total * word.coefficient
