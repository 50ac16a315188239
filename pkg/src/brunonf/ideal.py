"""Ideals of the truncated ring O / m^N, handled by linear algebra.

Modulo ``m^N`` an ideal is the finite-dimensional span of the truncated
multiples ``x^a g`` of its generators.  We keep that span in semi-echelon
form with columns ordered graded-lex (pivot = first nonzero column), which
answers membership, equality and normal-form reduction.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DimensionMismatch
from .series import Series, grlex_key, monomials_of_degree, monomials_upto


@lru_cache(maxsize=64)
def _mono_index(n, N):
    monos = tuple(monomials_upto(n, N - 1))
    return monos, {m: i for i, m in enumerate(monos)}


class _Echelon:
    """Semi-echelon basis keyed by pivot column; rows are {column: coeff}."""

    def __init__(self, field, tol=0.0):
        self.field = field
        self.exact = field.exact
        self.tol = tol
        self.rows = {}

    def _clean(self, row):
        if self.exact:
            return {k: v for k, v in row.items() if v}
        tol = self.tol
        return {k: v for k, v in row.items() if abs(v) > tol}

    def _lead(self, row):
        return min(row) if row else None

    def insert(self, row) -> bool:
        row = self._clean(row)
        rows = self.rows
        while row:
            lead = min(row)
            piv = rows.get(lead)
            if piv is None:
                inv = self.field.one / row[lead]
                rows[lead] = {k: v * inv for k, v in row.items()}
                return True
            c = row[lead]
            for k, v in piv.items():
                if k in row:
                    row[k] = row[k] - c * v
                else:
                    row[k] = -c * v
            row.pop(lead, None)
            row = self._clean(row)
        return False

    def reduces_to_zero(self, row) -> bool:
        row = self._clean(row)
        rows = self.rows
        while row:
            lead = min(row)
            piv = rows.get(lead)
            if piv is None:
                return False
            c = row[lead]
            for k, v in piv.items():
                if k in row:
                    row[k] = row[k] - c * v
                else:
                    row[k] = -c * v
            row.pop(lead, None)
            row = self._clean(row)
        return True

    def remainder(self, row):
        """Full reduction: the part of ``row`` supported off the pivot columns."""
        row = self._clean(row)
        rows = self.rows
        rem = {}
        while row:
            lead = min(row)
            piv = rows.get(lead)
            if piv is None:
                rem[lead] = row.pop(lead)
                continue
            c = row[lead]
            for k, v in piv.items():
                if k in row:
                    row[k] = row[k] - c * v
                else:
                    row[k] = -c * v
            row.pop(lead, None)
            row = self._clean(row)
        return rem

    def rref(self):
        """Reduced rows sorted by pivot column."""
        piv_cols = sorted(self.rows)
        red = {}
        for p in reversed(piv_cols):
            row = dict(self.rows[p])
            for q in sorted(k for k in row if k != p and k in red):
                c = row.get(q)
                if c is None:
                    continue
                for k, v in red[q].items():
                    if k in row:
                        row[k] = row[k] - c * v
                    else:
                        row[k] = -c * v
                row.pop(q, None)
            red[p] = self._clean(row)
        return [red[p] for p in piv_cols]


class TruncatedIdeal:
    """Ideal generated by finitely many series, considered modulo m^N.

    A pulled-back ideal remembers the ideal and map it came from and answers
    membership there: pullback is a ring automorphism of O / m^N, so
    ``f in phi^* B`` iff ``f o phi^-1 in B``.  This keeps the linear algebra
    on the (usually sparse) generators of B.
    """

    def __init__(self, generators, N, n=None, field=None, chart=None):
        generators = list(generators)
        if n is None or field is None:
            if not generators:
                raise ValueError("an empty ideal needs explicit n and field")
            n = generators[0].n if n is None else n
            field = generators[0].field if field is None else field
        gens = []
        for g in generators:
            if g.n != n:
                raise DimensionMismatch("generators live in different rings")
            field.check_same(g.field)
            g = g.truncate(N)
            if not g.is_zero():
                gens.append(g)
        gens.sort(key=lambda g: [(grlex_key(m), str(c)) for m, c in g.sorted_terms()])
        self.n = n
        self.N = N
        self.field = field
        self.generators = gens
        self._cache = {}
        self._chart = chart  # (base ideal, map) with self = map^* base

    @property
    def heuristic(self) -> bool:
        """True when rank decisions depend on a float threshold."""
        return not self.field.exact

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other):
        if self.n != other.n:
            raise DimensionMismatch("ideals live in different rings")
        return TruncatedIdeal(self.generators + other.generators, min(self.N, other.N),
                              self.n, self.field)

    def truncate(self, N):
        return TruncatedIdeal(self.generators, min(N, self.N), self.n, self.field, self._chart)

    def _to_base(self, f, N):
        base, phi = self._chart
        return base, f.truncate(N).substitute(phi.inverse(N), N)

    def _echelon(self, N):
        ech = self._cache.get(N)
        if ech is not None:
            return ech
        monos, index = _mono_index(self.n, N)
        rows = []
        for g in self.generators:
            g = g.truncate(N)
            if g.is_zero():
                continue
            og = g.ord
            for d in range(0, N - og):
                for a in monomials_of_degree(self.n, d):
                    row = {}
                    for m, c in g.terms.items():
                        if sum(m) + d < N:
                            row[index[tuple(x + y for x, y in zip(m, a))]] = c
                    if row:
                        rows.append(row)
        tol = 0.0
        if not self.field.exact:
            scale = max((math.sqrt(sum(abs(v) ** 2 for v in r.values())) for r in rows), default=0.0)
            tol = 1e-9 * scale
        ech = _Echelon(self.field, tol)
        rows.sort(key=min)
        for row in rows:
            ech.insert(row)
        self._cache[N] = ech
        return ech

    def _vector(self, f: Series, N):
        _, index = _mono_index(self.n, N)
        return {index[m]: c for m, c in f.terms.items() if sum(m) < N}

    def dimension(self, N=None) -> int:
        """Dimension of (I + m^N) / m^N."""
        N = self.N if N is None else N
        if self._chart is not None:
            return self._chart[0].dimension(N)
        return len(self._echelon(N).rows)

    def contains(self, f: Series, N=None) -> bool:
        N = min(self.N, f.N) if N is None else N
        if f.n != self.n:
            raise DimensionMismatch("series and ideal dimensions differ")
        self.field.check_same(f.field)
        if self._chart is not None:
            base, g = self._to_base(f, N)
            return base.contains(g, N)
        return self._echelon(N).reduces_to_zero(self._vector(f, N))

    def reduce(self, f: Series, N=None) -> Series:
        """Canonical representative of f modulo the ideal.

        Without a chart the representative has no pivot monomials; for a
        pulled-back ideal it is the pullback of the base representative.
        """
        N = min(self.N, f.N) if N is None else N
        if self._chart is not None:
            base, g = self._to_base(f, N)
            return base.reduce(g, N).substitute(self._chart[1], N)
        monos, _ = _mono_index(self.n, N)
        rem = self._echelon(N).remainder(self._vector(f, N))
        return Series(self.n, N, self.field, {monos[k]: v for k, v in rem.items()})

    def slice_basis(self, d):
        """Reduced echelon basis of (I + m^(d+1)) / m^(d+1) as Series."""
        N = d + 1
        monos, _ = _mono_index(self.n, N)
        return [Series(self.n, N, self.field, {monos[k]: v for k, v in row.items()})
                for row in self._echelon(N).rref()]

    def equals(self, other, N=None) -> bool:
        N = min(self.N, other.N) if N is None else N
        return (all(self.contains(g, N) for g in other.generators)
                and all(other.contains(g, N) for g in self.generators))

    def pullback(self, phi, N=None):
        N = min(self.N, phi.N) if N is None else N
        return TruncatedIdeal([g.substitute(phi, N) for g in self.generators], N,
                              self.n, self.field, chart=(self.truncate(N), phi.truncate(N)))

    def minimal_generators(self, N=None):
        """A generating subset with redundant members dropped, each scaled so
        its graded-lex lowest term has coefficient one."""
        N = self.N if N is None else N
        if self._chart is not None:
            base, phi = self._chart
            out = []
            for g in base.minimal_generators(N):
                g = g.substitute(phi, N)
                if not g.is_zero():
                    out.append(g.scale(self.field.one / g.sorted_terms()[0][1]))
            return out
        cands = sorted(self.generators, key=lambda g: (g.ord, len(g.terms)))
        kept = []
        for g in cands:
            g = g.truncate(N)
            if g.is_zero():
                continue
            if kept and TruncatedIdeal(kept, N, self.n, self.field).contains(g, N):
                continue
            lead = g.sorted_terms()[0][1]
            kept.append(g.scale(self.field.one / lead))
        return kept

    def to_json(self):
        return {"order": self.N, "n": self.n, "scalars": self.field.name,
                "generators": [g.to_json()["terms"] for g in self.generators],
                "heuristic": self.heuristic}

    def to_strs(self, names=None):
        return [g.to_str(names) for g in self.minimal_generators()]

    def __repr__(self):
        return f"TruncatedIdeal(<{', '.join(self.to_strs())}>, N={self.N})"


def graded_slice_basis(I: TruncatedIdeal, d: int):
    return I.slice_basis(d)


def contains(I: TruncatedIdeal, f: Series, N=None) -> bool:
    return I.contains(f, N)


def ideal_equal(I: TruncatedIdeal, J: TruncatedIdeal, N=None) -> bool:
    return I.equals(J, N)


def pullback_ideal(I: TruncatedIdeal, phi, N=None) -> TruncatedIdeal:
    return I.pullback(phi, N)


def differential_closure(I: TruncatedIdeal, d, N=None) -> TruncatedIdeal:
    """Smallest ideal containing I and stable under d, modulo m^N."""
    N = I.N if N is None else min(N, I.N)
    cur = I.truncate(N)
    frontier = list(cur.generators)
    while frontier:
        new = []
        for g in frontier:
            h = d.apply(g, N)
            if not h.is_zero() and not cur.contains(h, N):
                new.append(h)
                cur = TruncatedIdeal(cur.generators + [h], N, cur.n, cur.field)
        frontier = new
    return cur


__all__ = ["TruncatedIdeal", "graded_slice_basis", "contains", "ideal_equal",
           "pullback_ideal", "differential_closure"]
