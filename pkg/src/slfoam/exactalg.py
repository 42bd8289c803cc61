"""
Exact arithmetic backbone.

Laurent polynomials in q over exact rationals, quantum integers and
binomials, partitions in a box, Littlewood-Richardson coefficients and
Schur-basis symmetric function arithmetic.

Everything here is immutable and pure: values are safe to share between
threads and to use as dictionary keys.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping


class DomainError(ValueError):
    """Raised when an operation is called outside its domain."""


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


class Scalar:
    """
    An exact rational scalar, optionally restricted to integral mode.

    In integral mode the value must be an integer and division by a
    non-unit raises :class:`DomainError`.  Arithmetic never rounds.
    """

    __slots__ = ("value", "integral")

    def __init__(self, value: int | Fraction, integral: bool = False):
        value = Fraction(value)
        if integral and value.denominator != 1:
            raise DomainError(f"non-integer value {value} in integral mode")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "integral", integral)

    def __setattr__(self, name, val):  # pragma: no cover - immutability guard
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other: "Scalar | int | Fraction") -> "Scalar":
        if isinstance(other, Scalar):
            return other
        return Scalar(other, self.integral)

    def __add__(self, other):
        o = self._coerce(other)
        return Scalar(self.value + o.value, self.integral and o.integral)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Scalar(self.value - o.value, self.integral and o.integral)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return Scalar(self.value * o.value, self.integral and o.integral)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.value == 0:
            raise ZeroDivisionError("scalar division by zero")
        integral = self.integral and o.integral
        if integral and abs(o.value) != 1:
            raise DomainError(f"division by non-unit {o.value} in integral mode")
        return Scalar(self.value / o.value, integral)

    def __neg__(self):
        return Scalar(-self.value, self.integral)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        tag = "Z" if self.integral else "Q"
        return f"Scalar({self.value}, {tag})"


# ---------------------------------------------------------------------------
# Laurent polynomials in q
# ---------------------------------------------------------------------------


class LaurentPoly:
    """
    A sparse Laurent polynomial in q with exact rational coefficients.

    Stored as a map from integer exponent to nonzero Fraction; zero
    coefficients are stripped on construction so equality is structural.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int | Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for exp, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    clean[int(exp)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, val):  # pragma: no cover
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    @staticmethod
    def q(exp: int = 1) -> "LaurentPoly":
        """The monomial q**exp."""
        return LaurentPoly({exp: 1})

    @staticmethod
    def const(c: int | Fraction) -> "LaurentPoly":
        return LaurentPoly({0: c})

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        if isinstance(other, Scalar):
            return LaurentPoly.const(other.value)
        raise TypeError(f"cannot coerce {other!r} to LaurentPoly")

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.coeffs)
        for exp, c in o.coeffs.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by q**k."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """
        Exact division; raises :class:`DomainError` if the division
        leaves a remainder.
        """
        o = self._coerce(other)
        if not o.coeffs:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if not self.coeffs:
            return LaurentPoly.zero()
        rem = dict(self.coeffs)
        omax = max(o.coeffs)
        olead = o.coeffs[omax]
        # If the division is exact, the lowest quotient exponent is
        # min(self) - min(o); going below that means a remainder.
        qmin = min(self.coeffs) - min(o.coeffs)
        quot: dict[int, Fraction] = {}
        while rem:
            rmax = max(rem)
            exp = rmax - omax
            if exp < qmin:
                raise DomainError("inexact Laurent division")
            factor = rem[rmax] / olead
            quot[exp] = factor
            for e, c in o.coeffs.items():
                e2 = e + exp
                nc = rem.get(e2, Fraction(0)) - factor * c
                if nc == 0:
                    rem.pop(e2, None)
                else:
                    rem[e2] = nc
        return LaurentPoly(quot)

    # -- queries -----------------------------------------------------------

    def bar(self) -> "LaurentPoly":
        """The bar involution q -> q**-1."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def at_one(self) -> Fraction:
        """Evaluate at q = 1."""
        return sum(self.coeffs.values(), Fraction(0))

    def coeff(self, exp: int) -> Fraction:
        return self.coeffs.get(exp, Fraction(0))

    def exponents(self) -> list[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar, LaurentPoly)):
            return self.coeffs == self._coerce(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                terms.append(f"{c}")
            elif c == 1:
                terms.append(f"q^{e}" if e != 1 else "q")
            else:
                terms.append(f"{c}*q^{e}" if e != 1 else f"{c}*q")
        return " + ".join(terms)


def qint(k: int) -> LaurentPoly:
    """
    The balanced quantum integer [k] = q^{k-1} + q^{k-3} + ... + q^{1-k}.

    [0] = 0 and [-k] = -[k].
    """
    if k < 0:
        return -qint(-k)
    return LaurentPoly({k - 1 - 2 * j: 1 for j in range(k)})


def qfact(k: int) -> LaurentPoly:
    """The quantum factorial [k]! = [k][k-1]...[1]."""
    if k < 0:
        raise DomainError("qfact of a negative integer")
    out = LaurentPoly.one()
    for j in range(2, k + 1):
        out = out * qint(j)
    return out


def qbinom(n: int, k: int) -> LaurentPoly:
    """
    The balanced quantum binomial coefficient [n choose k].

    Computed by exact division [n]!/([k]![n-k]!); bar-invariant.
    """
    if not 0 <= k <= n:
        raise DomainError(f"qbinom({n}, {k}) out of range")
    return qfact(n).divexact(qfact(k) * qfact(n - k))


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


class Partition:
    """
    An integer partition: weakly decreasing tuple of positive parts.

    ``Partition([2, 1])`` or ``Partition((2, 1))``; the empty partition
    is ``Partition(())``.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts if p != 0)
        if any(p < 0 for p in parts):
            raise DomainError(f"negative part in {parts}")
        if any(parts[j] < parts[j + 1] for j in range(len(parts) - 1)):
            raise DomainError(f"parts not weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, val):  # pragma: no cover
        raise AttributeError("Partition is immutable")

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, j):
        return self.parts[j]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        return self.parts < other.parts

    def __repr__(self):
        return f"Partition{self.parts}"

    @property
    def size(self) -> int:
        return sum(self.parts)

    def part(self, j: int) -> int:
        """The j-th part (0-based), zero beyond the length."""
        return self.parts[j] if j < len(self.parts) else 0

    def in_box(self, a: int, b: int) -> bool:
        """Membership in P(a, b): at most a parts, each at most b."""
        return len(self.parts) <= a and all(p <= b for p in self.parts)

    def conjugate(self) -> "Partition":
        """The transposed partition."""
        if not self.parts:
            return Partition(())
        return Partition(
            sum(1 for p in self.parts if p > j) for j in range(self.parts[0])
        )

    def contains(self, other: "Partition") -> bool:
        return all(self.part(j) >= other.part(j) for j in range(len(other)))


def partitions_in_box(a: int, b: int) -> Iterator[Partition]:
    """Iterate over P(a, b), all partitions with <= a parts each <= b."""

    def gen(rows: int, maxpart: int):
        yield ()
        if rows == 0:
            return
        for first in range(1, maxpart + 1):
            for rest in gen(rows - 1, first):
                yield (first,) + rest

    for parts in gen(a, b):
        yield Partition(parts)


def partitions_of(size: int, max_parts: int | None = None,
                  max_part: int | None = None) -> Iterator[Partition]:
    """Iterate over partitions of ``size`` with the given bounds."""
    mp = size if max_part is None else min(max_part, size)
    rows = size if max_parts is None else max_parts

    def gen(remaining: int, rows_left: int, cap: int):
        if remaining == 0:
            yield ()
            return
        if rows_left == 0:
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in gen(remaining - first, rows_left - 1, first):
                yield (first,) + rest

    for parts in gen(size, rows, mp):
        yield Partition(parts)


def dual_complement(alpha: Partition, a: int, b: int) -> Partition:
    """
    The transpose of the complement of ``alpha`` in the a x b box.

    Maps P(a, b) to P(b, a); applying it twice (with the box swapped)
    is the identity.
    """
    if not alpha.in_box(a, b):
        raise DomainError(f"{alpha} is not in P({a}, {b})")
    complement = Partition(b - alpha.part(a - 1 - j) for j in range(a))
    return complement.conjugate()


# ---------------------------------------------------------------------------
# Littlewood-Richardson coefficients
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _lr_cached(alpha: tuple, beta: tuple, gamma: tuple) -> int:
    alpha_p, beta_p, gamma_p = Partition(alpha), Partition(beta), Partition(gamma)
    if alpha_p.size + beta_p.size != gamma_p.size:
        return 0
    if not gamma_p.contains(alpha_p):
        return 0
    rows = len(gamma_p)
    # Fill the skew shape gamma/alpha row by row, left to right, with
    # entries 1..len(beta); count semistandard fillings whose reverse
    # reading word is a lattice word with content beta.
    target = [beta_p.part(j) for j in range(len(beta_p))]
    nletters = len(target)

    filling: dict[tuple[int, int], int] = {}

    # Visit rows top to bottom; within a row, fill left to right (for the
    # semistandard checks) and then verify the lattice condition right to
    # left, carrying letter counts across rows.
    def fill_row(r: int, counts: list[int]) -> int:
        if r == rows:
            return 1 if [counts[j] for j in range(nletters)] == target else 0
        start, end = alpha_p.part(r), gamma_p.part(r)
        width = end - start
        if width == 0:
            return fill_row(r + 1, counts)
        total = 0

        def place(c: int, row_vals: list[int]) -> None:
            nonlocal total
            if c == end:
                # lattice check right-to-left over this row
                ok = True
                newcounts = list(counts)
                for cc in range(end - 1, start - 1, -1):
                    letter = row_vals[cc - start]
                    newcounts[letter] += 1
                    if letter > 0 and newcounts[letter] > newcounts[letter - 1]:
                        ok = False
                        break
                    if newcounts[letter] > target[letter]:
                        ok = False
                        break
                if ok:
                    for cc in range(start, end):
                        filling[(r, cc)] = row_vals[cc - start]
                    total += fill_row(r + 1, newcounts)
                    for cc in range(start, end):
                        del filling[(r, cc)]
                return
            lo = 0
            if c > start:
                lo = row_vals[c - start - 1]
            for letter in range(lo, nletters):
                up = None
                if r > 0 and alpha_p.part(r - 1) <= c < gamma_p.part(r - 1):
                    up = filling.get((r - 1, c))
                    if up is None or up >= letter:
                        continue
                row_vals.append(letter)
                place(c + 1, row_vals)
                row_vals.pop()

        place(start, [])
        return total

    return fill_row(0, [0] * nletters)


def lr_coeff(alpha: Partition, beta: Partition, gamma: Partition) -> int:
    """
    The Littlewood-Richardson coefficient c_{alpha,beta}^{gamma}.

    Counts Littlewood-Richardson skew tableaux of shape gamma/alpha and
    content beta; zero whenever sizes mismatch.
    """
    return _lr_cached(alpha.parts, beta.parts, gamma.parts)


# ---------------------------------------------------------------------------
# Symmetric functions in the Schur basis
# ---------------------------------------------------------------------------


class SymFunc:
    """
    A finite linear combination of Schur polynomials pi_alpha in a fixed
    number of variables.

    Any pi_alpha with more than ``nvars`` parts is normalized to zero.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int,
                 terms: Mapping[Partition, int | Fraction] | None = None):
        clean: dict[Partition, Fraction] = {}
        if terms:
            for alpha, c in terms.items():
                if not isinstance(alpha, Partition):
                    alpha = Partition(alpha)
                c = Fraction(c)
                if c != 0 and len(alpha) <= nvars:
                    clean[alpha] = clean.get(alpha, Fraction(0)) + c
        clean = {a: c for a, c in clean.items() if c != 0}
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, val):  # pragma: no cover
        raise AttributeError("SymFunc is immutable")

    @staticmethod
    def one(nvars: int) -> "SymFunc":
        return SymFunc(nvars, {Partition(()): 1})

    @staticmethod
    def schur(nvars: int, alpha: Partition | tuple) -> "SymFunc":
        if not isinstance(alpha, Partition):
            alpha = Partition(alpha)
        return SymFunc(nvars, {alpha: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, SymFunc):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "SymFunc") -> "SymFunc":
        if self.nvars != other.nvars:
            raise DomainError("variable-count mismatch")
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return SymFunc(self.nvars, out)

    def __neg__(self):
        return SymFunc(self.nvars, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c: int | Fraction) -> "SymFunc":
        return SymFunc(self.nvars, {a: cc * c for a, cc in self.terms.items()})

    def degree(self) -> int:
        """Maximum polynomial degree among the terms (0 for the zero func)."""
        if not self.terms:
            return 0
        return max(a.size for a in self.terms)

    def is_homogeneous(self) -> bool:
        return len({a.size for a in self.terms}) <= 1

    def __repr__(self):
        if not self.terms:
            return "SymFunc(0)"
        bits = [f"{c}*pi{a.parts}" for a, c in sorted(self.terms.items())]
        return f"SymFunc[{self.nvars}]({' + '.join(bits)})"


def schur_multiply(f: SymFunc, g: SymFunc) -> SymFunc:
    """Product of Schur expansions via Littlewood-Richardson coefficients."""
    if f.nvars != g.nvars:
        raise DomainError("variable-count mismatch")
    out: dict[Partition, Fraction] = {}
    for alpha, ca in f.terms.items():
        for beta, cb in g.terms.items():
            size = alpha.size + beta.size
            for gamma in partitions_of(size, max_parts=f.nvars):
                c = lr_coeff(alpha, beta, gamma)
                if c:
                    out[gamma] = out.get(gamma, Fraction(0)) + ca * cb * c
    return SymFunc(f.nvars, out)


def schur_expand_eh(kind: str, i: int, a: int) -> SymFunc:
    """
    The elementary (kind="e") or complete (kind="h") symmetric
    polynomial of degree i in ``a`` variables, in the Schur basis:
    e_i = pi_{(1^i)} and h_i = pi_{(i)}.
    """
    if i < 0:
        raise DomainError("negative degree")
    if i == 0:
        return SymFunc.one(a)
    if kind == "e":
        return SymFunc(a, {Partition((1,) * i): 1})
    if kind == "h":
        return SymFunc(a, {Partition((i,)): 1})
    raise DomainError(f"unknown kind {kind!r}")
