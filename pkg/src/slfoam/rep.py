"""
Decategorified skew Howe oracle.

Exact matrices of divided powers E_i^{(k)}, F_i^{(k)} acting on the
quantum exterior power of C_q^n tensor C_q^m, evaluation of closed
ladder webs to Laurent polynomials, and the decategorified colored link
invariant via quantum Weyl group elements.

Weight-space model
------------------
A gl_m weight [a_1, ..., a_m] (each a_i in [0, n]) indexes the weight
space with basis given by one subset S_i of {1..n} with |S_i| = a_i per
tensor slot, ordered lexicographically.  The action is the standard
quantum coproduct action on the n-fold tensor product of exterior
algebras of C_q^m (grouping by the C^n index); the resulting q-power
conventions are certified by the sl_2-triple, distant-commutation and
Serre relation tests rather than by matching a particular reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .exactalg import DomainError, LaurentPoly, qfact, qint


@dataclass(frozen=True)
class GlWeight:
    """A gl_m weight for fixed n: entries a_1..a_m with sum preserved."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(a) for a in self.entries))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def admissible(self) -> bool:
        return all(0 <= a <= self.n for a in self.entries)

    @property
    def trivial(self) -> bool:
        """All entries in {0, n}: the weight of a trivial (unit) object."""
        return all(a in (0, self.n) for a in self.entries)

    def lam(self, i: int) -> int:
        """The sl_m weight lambda_i = a_i - a_{i+1} (i is 1-based)."""
        return self.entries[i - 1] - self.entries[i]

    def apply(self, kind: str, i: int, k: int) -> "GlWeight | None":
        """
        Apply E_i^{(k)} (kind "E") or F_i^{(k)} (kind "F"); returns None
        when the target weight leaves [0, n].
        """
        if not 1 <= i <= self.m - 1:
            raise DomainError(f"rung index {i} out of range for m={self.m}")
        delta = k if kind == "E" else -k
        e = list(self.entries)
        e[i - 1] += delta
        e[i] -= delta
        if not (0 <= e[i - 1] <= self.n and 0 <= e[i] <= self.n):
            return None
        return GlWeight(self.n, tuple(e))

    def __repr__(self):
        return f"GlWeight(n={self.n}, {list(self.entries)})"


State = tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def weight_basis(w: GlWeight) -> tuple[State, ...]:
    """
    The ordered basis of the weight space of ``w``: tuples of sorted
    subsets S_i of {1..n} with |S_i| = a_i, in lexicographic order.
    """
    if not w.admissible:
        return ()
    slot_choices = [
        tuple(combinations(range(1, w.n + 1), a)) for a in w.entries
    ]
    return tuple(product(*slot_choices))


# ---------------------------------------------------------------------------
# Single-step actions on states
# ---------------------------------------------------------------------------


def _act_E_state(state: State, i: int) -> list[tuple[State, int]]:
    """
    E_i on a basis state: moves one element j from slot i+1 to slot i
    (1-based i), with coefficient q^{-(#S_i<j - #S_{i+1}<j)}.

    Returns a list of (new state, q exponent).
    """
    si, sj = state[i - 1], state[i]
    out = []
    for j in sj:
        if j in si:
            continue
        exp = -(sum(1 for x in si if x < j) - sum(1 for x in sj if x < j))
        new_si = tuple(sorted(si + (j,)))
        new_sj = tuple(x for x in sj if x != j)
        new = state[: i - 1] + (new_si, new_sj) + state[i + 1:]
        out.append((new, exp))
    return out


def _act_F_state(state: State, i: int) -> list[tuple[State, int]]:
    """
    F_i on a basis state: moves one element j from slot i to slot i+1,
    with coefficient q^{+(#S_i>j - #S_{i+1}>j)}.
    """
    si, sj = state[i - 1], state[i]
    out = []
    for j in si:
        if j in sj:
            continue
        exp = sum(1 for x in si if x > j) - sum(1 for x in sj if x > j)
        new_si = tuple(x for x in si if x != j)
        new_sj = tuple(sorted(sj + (j,)))
        new = state[: i - 1] + (new_si, new_sj) + state[i + 1:]
        out.append((new, exp))
    return out


Vector = dict[State, LaurentPoly]


def apply_single(side: str, i: int, vec: Vector) -> Vector:
    """Apply one E_i or F_i to a sparse vector of basis states."""
    act = _act_E_state if side == "E" else _act_F_state
    out: Vector = {}
    for state, coeff in vec.items():
        for new, exp in act(state, i):
            c = out.get(new, LaurentPoly.zero()) + coeff.shifted(exp)
            if c.is_zero():
                out.pop(new, None)
            else:
                out[new] = c
    return out


def apply_divided(side: str, i: int, k: int, vec: Vector) -> Vector:
    """Apply E_i^{(k)} or F_i^{(k)} = (E_i or F_i)^k / [k]!."""
    for _ in range(k):
        vec = apply_single(side, i, vec)
    fact = qfact(k)
    return {s: c.divexact(fact) for s, c in vec.items() if not c.is_zero()}


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class LMatrix:
    """
    A dense matrix of LaurentPoly entries with explicit source/target
    bases (used at desk scale by the relation tests).
    """

    __slots__ = ("source", "target", "rows")

    def __init__(self, source: tuple[State, ...], target: tuple[State, ...],
                 rows: list[list[LaurentPoly]]):
        self.source = source
        self.target = target
        self.rows = rows

    @staticmethod
    def zero(source, target) -> "LMatrix":
        z = LaurentPoly.zero()
        return LMatrix(source, target,
                       [[z] * len(source) for _ in range(len(target))])

    @staticmethod
    def identity(basis) -> "LMatrix":
        z, o = LaurentPoly.zero(), LaurentPoly.one()
        return LMatrix(basis, basis,
                       [[o if r == c else z for c in range(len(basis))]
                        for r in range(len(basis))])

    def __matmul__(self, other: "LMatrix") -> "LMatrix":
        if other.target != self.source:
            raise DomainError("matrix composition basis mismatch")
        rows = []
        for r in range(len(self.target)):
            row = []
            for c in range(len(other.source)):
                acc = LaurentPoly.zero()
                for k in range(len(self.source)):
                    e = self.rows[r][k]
                    if not e.is_zero():
                        f = other.rows[k][c]
                        if not f.is_zero():
                            acc = acc + e * f
                row.append(acc)
            rows.append(row)
        return LMatrix(other.source, self.target, rows)

    def __add__(self, other: "LMatrix") -> "LMatrix":
        if self.source != other.source or self.target != other.target:
            raise DomainError("matrix addition basis mismatch")
        return LMatrix(self.source, self.target,
                       [[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + other.scaled(LaurentPoly.const(-1))

    def scaled(self, c: LaurentPoly) -> "LMatrix":
        return LMatrix(self.source, self.target,
                       [[c * e for e in row] for row in self.rows])

    def __eq__(self, other):
        if not isinstance(other, LMatrix):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.rows == other.rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def __repr__(self):
        return f"LMatrix({len(self.target)}x{len(self.source)})"


def act_divided(side: str, i: int, k: int, w: GlWeight) -> LMatrix:
    """
    The matrix of E_i^{(k)} (side "E") or F_i^{(k)} (side "F") from the
    weight space of ``w`` to its target; the empty matrix when the
    target weight is inadmissible.
    """
    if side not in ("E", "F"):
        raise DomainError(f"unknown side {side!r}")
    if not 1 <= i <= w.m - 1:
        raise DomainError(f"strand index {i} out of range")
    target_w = w.apply(side, i, k)
    source = weight_basis(w)
    if target_w is None or not w.admissible:
        return LMatrix(source, (), [])
    target = weight_basis(target_w)
    index = {s: r for r, s in enumerate(target)}
    mat = LMatrix.zero(source, target)
    for c, state in enumerate(source):
        image = apply_divided(side, i, k, {state: LaurentPoly.one()})
        for new, coeff in image.items():
            mat.rows[index[new]][c] = coeff
    return mat


# ---------------------------------------------------------------------------
# Closed web evaluation
# ---------------------------------------------------------------------------


def eval_closed_web(web) -> LaurentPoly:
    """
    Evaluate a closed ladder web (trivial domain and codomain weights)
    to the unique entry of its composite rung matrix.

    ``web`` provides ``domain`` (a GlWeight), ``rungs`` (a word applied
    right-to-left, i.e. first element acts first) with fields ``kind``,
    ``i``, ``k``.
    """
    w = web.domain
    if not isinstance(w, GlWeight):
        w = GlWeight(*w)
    if not w.trivial:
        raise DomainError("eval_closed_web requires a trivial domain weight")
    basis = weight_basis(w)
    if len(basis) != 1:
        raise DomainError("trivial weight space is not one-dimensional")
    vec: Vector = {basis[0]: LaurentPoly.one()}
    cur = w
    for r in web.rungs:
        cur = cur.apply(r.kind, r.i, r.k) if cur is not None else None
        if cur is None:
            return LaurentPoly.zero()
        vec = apply_divided(r.kind, r.i, r.k, vec)
        if not vec:
            return LaurentPoly.zero()
    if not cur.trivial:
        raise DomainError("eval_closed_web requires a trivial codomain weight")
    if not vec:
        return LaurentPoly.zero()
    (state, value), = vec.items()
    return value


# ---------------------------------------------------------------------------
# Decategorified invariant
# ---------------------------------------------------------------------------


def decat_invariant(diagram, colors, n: int) -> LaurentPoly:
    """
    The decategorified quantum invariant of a closed colored link
    diagram, by expanding each crossing via the quantum Weyl group
    elements with the crossing-complex shift factors and composing rung
    matrices through the closure webs.

    ``diagram`` is a TangleDiagram (see the web module); the events are
    produced by the web module's ladder compiler.
    """
    from . import web as webmod

    events, domain = webmod.ladder_events(diagram, colors, n)
    basis = weight_basis(domain)
    if len(basis) != 1:
        raise DomainError("closure domain is not a trivial weight")
    # Each state: (weight, vector); crossings produce scalar-weighted sums
    # but every term maps a weight space to the same target weight space,
    # so a single (weight, vector) pair suffices throughout.
    cur = domain
    vec: Vector = {basis[0]: LaurentPoly.one()}

    def rung(kind, i, k):
        nonlocal cur, vec
        cur = cur.apply(kind, i, k) if cur is not None else None
        if cur is None:
            vec = {}
            return
        vec = apply_divided(kind, i, k, vec)

    for ev in events:
        if not vec:
            return LaurentPoly.zero()
        if ev[0] == "rung":
            _, kind, i, k = ev
            rung(kind, i, k)
        elif ev[0] == "crossing":
            _, p, sign, (a, b) = ev
            lam = cur.entries[p - 1] - cur.entries[p]
            if lam != a - b:
                raise DomainError("crossing weight mismatch")
            mn = min(a, b)
            acc: Vector = {}
            target = None
            s = 0
            while True:
                if lam >= 0:
                    lo_kind, lo_k, hi_kind, hi_k = "E", s, "F", lam + s
                else:
                    lo_kind, lo_k, hi_kind, hi_k = "F", s, "E", -lam + s
                w1 = cur.apply(lo_kind, p, lo_k)
                w2 = w1.apply(hi_kind, p, hi_k) if w1 is not None else None
                if w1 is None or w2 is None:
                    break
                term = apply_divided(lo_kind, p, lo_k, vec)
                term = apply_divided(hi_kind, p, hi_k, term)
                coeff = LaurentPoly({s if sign > 0 else -s: (-1) ** s})
                for st, c in term.items():
                    acc[st] = acc.get(st, LaurentPoly.zero()) + coeff * c
                target = w2
                s += 1
            shift = LaurentPoly({-mn if sign > 0 else mn: (-1) ** mn})
            vec = {st: shift * c for st, c in acc.items()
                   if not c.is_zero()}
            cur = target
        else:  # pragma: no cover
            raise DomainError(f"unknown event {ev[0]!r}")
    if cur is None or not vec:
        return LaurentPoly.zero()
    if not cur.trivial:
        raise DomainError("closure codomain is not a trivial weight")
    (state, value), = vec.items()
    return value
