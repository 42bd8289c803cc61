"""
Ladder webs and the tangle-to-web compiler.

A ladder web is a gl_m weight plus a word of divided-power rungs
E_i^{(k)}, F_i^{(k)} applied right-to-left (the first rung in the word
acts first on the domain weight).  Links enter as colored braid closures
(or PD codes reconstructed into braid form); the compiler ladders the
closure on 2r slots and expands every crossing into its shifted Rickard
complex, producing a cube of resolutions.

Closure layout
--------------
For a braid on r strands the domain weight is [n,...,n, 0,...,0] (r of
each).  Return arcs are nested outermost-first: each cup is realized as
a full-thickness split F^{(n-c)} of an n-line at slots (r, r+1), and the
two legs are transported to their final slots by full-thickness
transport rungs ([c,0]->[0,c] via F^{(c)}, [n,c]->[c,n] via F^{(n-c)},
and the E-mirrors).  All crossings are then adjacent up-up crossings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .exactalg import DomainError
from .rep import GlWeight


class ParseError(ValueError):
    """Input text could not be parsed; carries line/column info."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Core web data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rung:
    """A ladder rung E_i^{(k)} or F_i^{(k)} (kind "E" or "F", i 1-based)."""

    kind: str
    i: int
    k: int

    def __post_init__(self):
        if self.kind not in ("E", "F"):
            raise DomainError(f"bad rung kind {self.kind!r}")
        if self.k < 0:
            raise DomainError("negative rung thickness")

    def __repr__(self):
        return f"{self.kind}{self.i}^({self.k})"


def apply_rung(w: GlWeight, r: Rung) -> GlWeight | None:
    """Apply a rung to a weight; None marks the zero object."""
    return w.apply(r.kind, r.i, r.k)


@dataclass(frozen=True)
class LadderWeb:
    """A ladder web: n, a domain weight, and a rung word (right-to-left)."""

    n: int
    domain: GlWeight
    rungs: tuple[Rung, ...]

    def __post_init__(self):
        if self.domain.n != self.n:
            raise DomainError("weight n mismatch")
        object.__setattr__(self, "rungs", tuple(self.rungs))

    @property
    def weights(self) -> list[GlWeight | None]:
        """Intermediate weights, domain first; None after a zero rung."""
        out = [self.domain]
        cur: GlWeight | None = self.domain
        for r in self.rungs:
            cur = apply_rung(cur, r) if cur is not None else None
            out.append(cur)
        return out

    @property
    def zero(self) -> bool:
        """True when some intermediate weight leaves [0, n]."""
        return any(w is None for w in self.weights)

    @property
    def codomain(self) -> GlWeight | None:
        return self.weights[-1]

    @property
    def closed(self) -> bool:
        cod = self.codomain
        return (self.domain.trivial and cod is not None and cod.trivial)

    def word_key(self) -> tuple:
        """A hashable exact-equality key (rung word plus domain)."""
        return (self.n, self.domain.entries,
                tuple((r.kind, r.i, r.k) for r in self.rungs))

    def __repr__(self):
        word = " ".join(repr(r) for r in self.rungs) or "id"
        return f"LadderWeb({list(self.domain.entries)}; {word})"


@dataclass(frozen=True)
class WebSum:
    """A formal direct sum of q-shifted ladder webs."""

    terms: tuple[tuple[LadderWeb, int], ...]

    def normalized(self) -> "WebSum":
        return WebSum(tuple((w, s) for (w, s) in self.terms if not w.zero))


# ---------------------------------------------------------------------------
# Tangle diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TangleDiagram:
    """
    A closed link diagram: a braid word (signed 1-based generator
    indices, trace-closed) with per-strand colors, or a PD crossing
    list already reconstructed to braid form by :func:`parse_pd`.

    ``colors`` are per braid strand (bottom position); they must be
    constant on the components of the closure.  ``framing`` holds one
    integer per component (components ordered by their smallest strand
    index); the default is the zero framing.
    """

    strands: int
    word: tuple[int, ...]
    colors: tuple[int, ...] = ()
    framing: tuple[int, ...] = ()

    def __post_init__(self):
        r = self.strands
        if r < 1:
            raise DomainError("braid needs at least one strand")
        for g in self.word:
            if g == 0 or abs(g) > r - 1:
                raise DomainError(f"braid generator {g} out of range")
        colors = self.colors or (1,) * r
        if len(colors) != r:
            raise DomainError("one color per strand required")
        object.__setattr__(self, "colors", tuple(colors))
        # colors must be constant on closure components
        for cycle in self.components():
            vals = {self.colors[s - 1] for s in cycle}
            if len(vals) > 1:
                raise DomainError(f"component {sorted(cycle)} has mixed colors")
        framing = self.framing or (0,) * len(self.components())
        if len(framing) != len(self.components()):
            raise DomainError("one framing integer per component required")
        object.__setattr__(self, "framing", tuple(framing))

    def permutation(self) -> list[int]:
        """perm[j-1] = final position of the strand starting at j."""
        pos = list(range(1, self.strands + 1))
        for g in self.word:
            j = abs(g)
            pos[j - 1], pos[j] = pos[j], pos[j - 1]
        # pos maps current slot -> starting strand; invert
        perm = [0] * self.strands
        for slot, start in enumerate(pos, start=1):
            perm[start - 1] = slot
        return perm

    def components(self) -> list[tuple[int, ...]]:
        """Cycles of the closure permutation, ordered by smallest strand."""
        perm = self.permutation()
        seen: set[int] = set()
        cycles = []
        for start in range(1, self.strands + 1):
            if start in seen:
                continue
            cyc = []
            s = start
            while s not in seen:
                seen.add(s)
                cyc.append(s)
                s = perm[s - 1]
            cycles.append(tuple(cyc))
        return cycles

    def writhe(self) -> int:
        return sum(1 if g > 0 else -1 for g in self.word)


def framing_normalization(a: int, n: int, w: int) -> tuple[int, int]:
    """
    The cumulative (q-shift exponent, homological shift) for a framing
    change by ``w`` positive curls on an a-colored strand:
    (-w*a*(n-a+1), w*a).
    """
    return (-w * a * (n - a + 1), w * a)


# ---------------------------------------------------------------------------
# Laddering the closure
# ---------------------------------------------------------------------------


def ladder_events(diagram: TangleDiagram, colors=None, n: int | None = None):
    """
    Produce the Morse event list of the laddered trace closure and its
    domain weight.

    Events are ``("rung", kind, i, k)`` and
    ``("crossing", p, sign, (a, b))`` where p is the slot of the upper
    strand and (a, b) the colors at (p, p+1) when the crossing happens.
    """
    if n is None:
        raise DomainError("n is required")
    if colors is not None:
        diagram = TangleDiagram(diagram.strands, diagram.word, tuple(colors),
                                diagram.framing)
    r = diagram.strands
    for c in diagram.colors:
        if not 1 <= c <= n - 1:
            raise DomainError(f"color {c} out of range 1..{n - 1}")
    events: list[tuple] = []
    domain = GlWeight(n, (n,) * r + (0,) * r)

    def rung(kind, i, k):
        if k > 0:
            events.append(("rung", kind, i, k))

    # Cups, outermost (k=1) first.  Before step k the free n-lines sit at
    # slots k..r and the free 0s at slots r+1..2r-k+1; split at (r, r+1),
    # then transport the up leg to slot k and the down leg to slot
    # 2r+1-k.
    for k in range(1, r + 1):
        c = diagram.colors[k - 1]
        d = n - c
        rung("F", r, d)  # [n,0] -> [c,d] at (r, r+1)
        for p in range(r - 1, k - 1, -1):  # up leg past n-lines
            rung("F", p, d)  # [n,c] -> [c,n]
        for p in range(r + 1, 2 * r + 1 - k):  # down leg past 0s
            rung("F", p, d)  # [d,0] -> [0,d]
    # Braid crossings on slots 1..r.
    col = list(diagram.colors)
    for g in diagram.word:
        j = abs(g)
        sign = 1 if g > 0 else -1
        events.append(("crossing", j, sign, (col[j - 1], col[j])))
        col[j - 1], col[j] = col[j], col[j - 1]
    # Caps, innermost (k=r) first.  The strand at slot k transports down
    # to slot 2r-k and caps with its return at 2r+1-k.  After the braid,
    # slot k holds the color of the loop k return (closure consistency).
    for k in range(r, 0, -1):
        c = diagram.colors[k - 1]
        if col[k - 1] != c:
            raise DomainError("closure color mismatch")  # pragma: no cover
        # Between slot k and its cap position the slots hold only trivial
        # debris (n/0 from the already-capped inner loops); emit
        # placeholder transports and resolve their rung kind by replay.
        for p in range(k, 2 * r - k):
            events.append(("transport", p, c))
        events.append(("cap", 2 * r - k, c))
    # Replay to resolve transport/cap placeholders into concrete rungs.
    resolved: list[tuple] = []
    cur = domain
    for ev in events:
        if ev[0] == "rung":
            _, kind, i, k = ev
            nxt = cur.apply(kind, i, k)
            assert nxt is not None, (ev, cur)
            cur = nxt
            resolved.append(ev)
        elif ev[0] == "crossing":
            _, p, sign, (a, b) = ev
            assert cur.entries[p - 1] == a and cur.entries[p] == b, (ev, cur)
            # crossing maps [a,b] -> [b,a]
            e = list(cur.entries)
            e[p - 1], e[p] = b, a
            cur = GlWeight(n, tuple(e))
            resolved.append(ev)
        elif ev[0] == "transport":
            _, p, c = ev
            assert cur.entries[p - 1] == c, (ev, cur)
            below = cur.entries[p]
            if below == 0:
                kind, k = "F", c  # [c,0] -> [0,c]
            elif below == n:
                kind, k = "E", n - c  # [c,n] -> [n,c]
            else:  # pragma: no cover
                raise DomainError(f"transport through occupied slot {p + 1}")
            nxt = cur.apply(kind, p, k)
            assert nxt is not None
            cur = nxt
            if k > 0:
                resolved.append(("rung", kind, p, k))
        elif ev[0] == "cap":
            _, p, c = ev
            assert cur.entries[p - 1] == c and cur.entries[p] == n - c, (ev, cur)
            nxt = cur.apply("E", p, n - c)
            if n - c > 0:
                assert nxt is not None
                cur = nxt
                resolved.append(("rung", "E", p, n - c))
        else:  # pragma: no cover
            raise DomainError(f"unknown event {ev[0]!r}")
    assert cur.trivial, cur
    return resolved, domain


# ---------------------------------------------------------------------------
# Rickard crossing complexes and the cube
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RickardTerm:
    """One term of a (shifted) crossing complex."""

    s: int
    rungs: tuple[Rung, ...]  # applied right-to-left
    h: int  # homological degree after the global shift
    q: int  # q-shift after the global shift


@dataclass(frozen=True)
class CrossingSite:
    """A crossing in the event list, with its expanded term list."""

    slot: int
    sign: int
    colors: tuple[int, int]
    lam: int
    terms: tuple[RickardTerm, ...]


@dataclass
class CubeSkeleton:
    """
    The cube of resolutions: one vertex per choice of Rickard term at
    each crossing.  Vertices carry the full ladder web and its (h, q)
    bidegree; edges connect vertices whose choice vectors differ by one
    Rickard step.
    """

    n: int
    domain: GlWeight
    diagram: TangleDiagram
    events: list[tuple]
    crossings: list[CrossingSite]
    vertices: dict[tuple[int, ...], tuple[LadderWeb, int, int]] = field(
        default_factory=dict)
    edges: list[tuple[tuple[int, ...], tuple[int, ...], int]] = field(
        default_factory=list)


def _rickard_terms(n: int, ambient: GlWeight, p: int, sign: int,
                   a: int, b: int) -> tuple[RickardTerm, ...]:
    """
    Terms of the shifted Rickard complex for an up-up crossing at slots
    (p, p+1) with colors (a, b), truncated at the first inadmissible
    weight in the given ambient.
    """
    lam = a - b
    mn = min(a, b)
    terms = []
    s = 0
    while True:
        if lam >= 0:
            word = (Rung("E", p, s), Rung("F", p, lam + s))
        else:
            word = (Rung("F", p, s), Rung("E", p, -lam + s))
        cur: GlWeight | None = ambient
        for rg in word:
            cur = apply_rung(cur, rg) if cur is not None else None
        if cur is None:
            break
        if sign > 0:
            h, q = s - mn, s - mn
        else:
            h, q = mn - s, mn - s
        terms.append(RickardTerm(s, word, h, q))
        s += 1
    if not terms:  # pragma: no cover
        raise DomainError("empty crossing complex")
    return tuple(terms)


def compile_tangle(diagram: TangleDiagram, n: int) -> CubeSkeleton:
    """
    Compile a closed colored diagram into its cube of resolutions.

    Vertices are ladder webs with homological degree and q-shift from
    the shifted Rickard complexes; zero-flagged webs are dropped.  The
    edge differential steps the s-index of one crossing in the direction
    of increasing homological degree.
    """
    if n < 2:
        raise DomainError("n must be at least 2")
    events, domain = ladder_events(diagram, None, n)
    # Weight profile before each event (crossings always swap [a,b]).
    crossings: list[CrossingSite] = []
    cur = domain
    for ev in events:
        if ev[0] == "rung":
            cur = cur.apply(ev[1], ev[2], ev[3])
        else:
            _, p, sign, (a, b) = ev
            terms = _rickard_terms(n, cur, p, sign, a, b)
            crossings.append(CrossingSite(p, sign, (a, b), a - b, terms))
            e = list(cur.entries)
            e[p - 1], e[p] = b, a
            cur = GlWeight(n, tuple(e))
    cube = CubeSkeleton(n, domain, diagram, events, crossings)

    ranges = [range(len(c.terms)) for c in crossings]
    for choice in iproduct(*ranges):
        rungs: list[Rung] = []
        ci = 0
        for ev in events:
            if ev[0] == "rung":
                rungs.append(Rung(ev[1], ev[2], ev[3]))
            else:
                term = crossings[ci].terms[choice[ci]]
                rungs.extend(rg for rg in term.rungs if rg.k > 0)
                ci += 1
        web = LadderWeb(n, domain, tuple(rungs))
        if web.zero:
            continue
        h = sum(crossings[ci].terms[choice[ci]].h for ci in range(len(choice)))
        q = sum(crossings[ci].terms[choice[ci]].q for ci in range(len(choice)))
        cube.vertices[choice] = (web, h, q)

    edges = []
    for choice in cube.vertices:
        for ci, c in enumerate(crossings):
            step = 1 if c.sign > 0 else -1
            nxt = list(choice)
            nxt[ci] += step
            nxt = tuple(nxt)
            if nxt in cube.vertices:
                edges.append((choice, nxt, ci))
    cube.edges = edges
    return cube


# ---------------------------------------------------------------------------
# Text input: braid words and PD codes
# ---------------------------------------------------------------------------


def parse_braid(text: str, strands: int | None = None) -> tuple[int, tuple[int, ...]]:
    """
    Parse a whitespace-separated signed braid word ("1 1 1" is sigma_1
    cubed).  Returns (strand count, word); the strand count is inferred
    as max |generator| + 1 (at least 1, or ``strands`` if given).
    """
    word = []
    col = 1
    for tok in text.split():
        col = text.find(tok, col - 1) + 1
        try:
            g = int(tok)
        except ValueError:
            raise ParseError(f"bad braid generator {tok!r}", 1, col) from None
        if g == 0:
            raise ParseError("braid generator 0 is not allowed", 1, col)
        word.append(g)
    inferred = max((abs(g) for g in word), default=0) + 1
    r = strands if strands is not None else inferred
    if r < inferred:
        raise ParseError(f"braid word needs at least {inferred} strands")
    return r, tuple(word)


def parse_pd(text: str) -> TangleDiagram:
    """
    Parse a PD code and reconstruct a braid presentation.

    Format: one crossing per line, ``X a b c d`` with ``a`` the incoming
    under-edge and b, c, d counterclockwise; edges are numbered
    sequentially along each component.  A crossing is positive when
    (b - d) mod (2N) == 1.  Only diagrams whose Seifert smoothing is
    already in braid form (Seifert circles forming a chain, with a
    consistent cyclic crossing order) are accepted; otherwise a
    :class:`ParseError` asks for braid input.
    """
    crossings = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "X":
            raise ParseError(f"expected 'X', got {parts[0]!r}", lineno, 1)
        if len(parts) != 5:
            raise ParseError("expected 'X a b c d'", lineno, len(line))
        try:
            edges = tuple(int(x) for x in parts[1:])
        except ValueError:
            raise ParseError("edge labels must be integers", lineno, 3) from None
        crossings.append((lineno, edges))
    if not crossings:
        raise ParseError("empty PD code")
    ncross = len(crossings)
    nedges = 2 * ncross
    counts: dict[int, int] = {}
    for lineno, edges in crossings:
        for e in edges:
            if not 1 <= e <= nedges:
                raise ParseError(f"edge label {e} out of range 1..{nedges}",
                                 lineno, 1)
            counts[e] = counts.get(e, 0) + 1
    for e in range(1, nedges + 1):
        if counts.get(e, 0) != 2:
            raise ParseError(f"edge {e} appears {counts.get(e, 0)} times "
                             "(each edge must appear exactly twice)")
    return _pd_to_braid(crossings, nedges)


def _pd_to_braid(crossings, nedges) -> TangleDiagram:
    """Reconstruct a braid word from a braided PD code."""
    # Seifert smoothing: positive (over d->b): pair (a,b) and (d,c);
    # negative (over b->d): pair (a,d) and (b,c).  Successor along the
    # Seifert circle: in-edge -> out-edge of the pairing.
    succ: dict[int, int] = {}
    signs = []
    site: dict[int, tuple[int, int]] = {}  # in-edge -> (crossing idx, which)
    for idx, (lineno, (a, b, c, d)) in enumerate(crossings):
        pos = (b - d) % nedges == 1
        signs.append(1 if pos else -1)
        if pos:
            succ[a], succ[d] = b, c
            site[a], site[d] = (idx, 0), (idx, 1)
        else:
            succ[a], succ[b] = d, c
            site[a], site[b] = (idx, 0), (idx, 1)
    # Seifert circles = cycles of succ.
    circle_of: dict[int, int] = {}
    circles: list[list[int]] = []
    for e in sorted(succ):
        if e in circle_of:
            continue
        cyc = []
        x = e
        while x not in circle_of:
            circle_of[x] = len(circles)
            cyc.append(x)
            x = succ[x]
        circles.append(cyc)
    # Crossing joins the circles of its two in-edges; must be adjacent in
    # a chain for a braided diagram.
    adj: dict[int, set[int]] = {i: set() for i in range(len(circles))}
    cross_circ = []
    for idx, (lineno, (a, b, c, d)) in enumerate(crossings):
        e1 = a
        e2 = d if signs[idx] > 0 else b
        c1, c2 = circle_of[e1], circle_of[e2]
        if c1 == c2:
            raise ParseError("PD code has a reducible (self-paired) crossing; "
                             "supply braid input instead", crossings[idx][0])
        adj[c1].add(c2)
        adj[c2].add(c1)
        cross_circ.append((c1, c2))
    # The circle graph must be a path; order it.
    ends = [c for c, nb in adj.items() if len(nb) <= 1]
    if len(circles) == 1:
        order = [0]
    else:
        if len(ends) != 2 or any(len(nb) > 2 for nb in adj.values()):
            raise ParseError("PD code is not in braid form "
                             "(Seifert circles do not form a chain); "
                             "supply braid input instead")
        order = [min(ends)]
        while len(order) < len(circles):
            nxt = [c for c in adj[order[-1]] if c not in order]
            if not nxt:
                raise ParseError("PD code is not in braid form; "
                                 "supply braid input instead")
            order.append(nxt[0])
    strand_of = {c: i + 1 for i, c in enumerate(order)}
    r = len(circles)
    # Per-circle cyclic crossing sequences, in circle traversal order.
    seqs: list[list[int]] = []
    for cyc in circles:
        seq = [site[e][0] for e in cyc if e in site]
        seqs.append(seq)
    # Find a simultaneous linearization: brute-force the rotation of each
    # circle's cyclic sequence (desk scale), then greedily merge.
    from itertools import product as _prod

    def try_rotations(rots):
        queues = []
        for seq, rot in zip(seqs, rots):
            queues.append(list(seq[rot:] + seq[:rot]))
        word = []
        remaining = sum(len(q) for q in queues) // 2
        for _ in range(remaining):
            for idx in range(len(crossings)):
                c1, c2 = cross_circ[idx]
                q1, q2 = queues[c1], queues[c2]
                if q1 and q2 and q1[0] == idx and q2[0] == idx:
                    q1.pop(0)
                    q2.pop(0)
                    j = min(strand_of[c1], strand_of[c2])
                    word.append(j * signs[idx])
                    break
            else:
                return None
        return word

    rot_ranges = [range(max(1, len(s))) for s in seqs]
    for rots in _prod(*rot_ranges):
        word = try_rotations(rots)
        if word is not None:
            # verify adjacency: strands of each crossing differ by 1
            if all(abs(strand_of[c1] - strand_of[c2]) == 1
                   for c1, c2 in cross_circ):
                return TangleDiagram(r, tuple(word))
    raise ParseError("PD code is not in braid form (no consistent crossing "
                     "order); supply braid input instead")
