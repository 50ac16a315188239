"""Logarithmic derivations in monomial form.

A logarithmic derivation is stored as its monomial expansion
``sum_m x^m L(lambda_m)`` where ``L(mu) = sum_j mu_j x_j d/dx_j``.  The
truncation order ``N`` keeps the terms with ``||m|| < N``; the vector
components ``x_i f_i`` are then known modulo ``m^(N+1)``.
"""

from __future__ import annotations

import math

from . import kernels, linalg
from .errors import DimensionMismatch, NotInvertible, NotLogarithmic, SingularBasis
from .scalars import Field, dot
from .series import Norm, Series, default_names, grlex_key


def _vec_zero(field, v):
    return all(field.is_zero(x) for x in v)


class LogDerivation:
    __slots__ = ("n", "N", "field", "terms")

    def __init__(self, n: int, N: int, field: Field, terms=None, clean: bool = True):
        self.n = n
        self.N = N
        self.field = field
        terms = terms or {}
        if clean:
            terms = {m: tuple(v) for m, v in terms.items()
                     if sum(m) < N and not _vec_zero(field, v)}
        self.terms = terms

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, n, N, field):
        return cls(n, N, field, {}, clean=False)

    @classmethod
    def diagonal(cls, lam, N, field):
        """The linear field L(lam)."""
        lam = tuple(field.coerce(x) for x in lam)
        return cls(len(lam), N, field, {(0,) * len(lam): lam})

    @classmethod
    def monomial(cls, m, lam, N, field):
        return cls(len(m), N, field, {tuple(m): tuple(field.coerce(x) for x in lam)})

    @classmethod
    def from_terms(cls, terms, n, N, field):
        return cls(n, N, field, {tuple(m): tuple(field.coerce(x) for x in v)
                                 for m, v in terms.items()})

    @classmethod
    def from_log_components(cls, comps, N=None):
        """Build sum_i f_i x_i d/dx_i from the series f_i."""
        comps = list(comps)
        n = len(comps)
        field = comps[0].field
        N = min(c.N for c in comps) if N is None else N
        terms = {}
        for i, f in enumerate(comps):
            field.check_same(f.field)
            for m, c in f.terms.items():
                vec = terms.setdefault(m, [field.zero] * n)
                vec[i] = c
        return cls(n, N, field, terms)

    @classmethod
    def from_vector_components(cls, coeffs, N=None):
        """Build sum_i a_i d/dx_i, checking that x_i divides a_i.

        The components must be known modulo m^(N+1); by default N is one less
        than the smallest input order.
        """
        coeffs = list(coeffs)
        n = len(coeffs)
        for a in coeffs:
            if a.n != n:
                raise DimensionMismatch("need one component per variable")
        comps = []
        for i, a in enumerate(coeffs):
            q, bad = a.divide_var(i)
            if bad:
                m, c = min(bad, key=lambda t: grlex_key(t[0]))
                term = Series(n, a.N, a.field, {m: c}).to_str()
                raise NotLogarithmic(i, f"{term} d/d{default_names(n)[i]}")
            comps.append(q)
        if N is None:
            N = min(a.N for a in coeffs) - 1
        return cls.from_log_components(comps, N)

    # inspection -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def ord(self):
        if not self.terms:
            return math.inf
        return min(sum(m) for m in self.terms)

    @property
    def deg(self):
        if not self.terms:
            return -math.inf
        return max(sum(m) for m in self.terms)

    def linear_part(self):
        """Eigenvalue vector lambda_0 of the linear (diagonal) part."""
        return self.terms.get((0,) * self.n, tuple([self.field.zero] * self.n))

    def nonlinear_part(self):
        z = (0,) * self.n
        return LogDerivation(self.n, self.N, self.field,
                             {m: v for m, v in self.terms.items() if m != z}, clean=False)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def __eq__(self, other):
        if not isinstance(other, LogDerivation):
            return NotImplemented
        return (self.n == other.n and self.N == other.N and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, self.N, frozenset(self.terms.items())))

    def equals_mod(self, other, N=None):
        N = min(self.N, other.N) if N is None else N
        return (self - other).truncate(N).is_zero()

    def log_components(self):
        """Series f_i with self = sum_i f_i x_i d/dx_i."""
        out = []
        for i in range(self.n):
            out.append(Series(self.n, self.N, self.field,
                              {m: v[i] for m, v in self.terms.items()}))
        return out

    def vector_components(self):
        """Series a_i = x_i f_i with self = sum_i a_i d/dx_i (known mod m^(N+1))."""
        return [f.mul_var(i) for i, f in enumerate(self.log_components())]

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LogDerivation):
            raise TypeError(f"expected LogDerivation, got {type(other).__name__}")
        if self.n != other.n:
            raise DimensionMismatch(f"derivations in {self.n} and {other.n} variables")
        self.field.check_same(other.field)

    def truncate(self, N):
        if N >= self.N:
            return LogDerivation(self.n, self.N, self.field, self.terms, clean=False)
        return LogDerivation(self.n, N, self.field,
                             {m: v for m, v in self.terms.items() if sum(m) < N}, clean=False)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, v in other.terms.items():
            if m in out:
                out[m] = tuple(a + b for a, b in zip(out[m], v))
            else:
                out[m] = v
        return LogDerivation(self.n, min(self.N, other.N), self.field, out)

    def __neg__(self):
        return LogDerivation(self.n, self.N, self.field,
                             {m: tuple(-x for x in v) for m, v in self.terms.items()},
                             clean=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field.coerce(c)
        return LogDerivation(self.n, self.N, self.field,
                             {m: tuple(c * x for x in v) for m, v in self.terms.items()})

    def smul(self, f: Series, N=None):
        """The derivation f * self."""
        if f.n != self.n:
            raise DimensionMismatch("series and derivation dimensions differ")
        self.field.check_same(f.field)
        N = min(self.N, f.N) if N is None else N
        return LogDerivation(self.n, N, self.field, kernels.smul_terms(f.terms, self.terms, N))

    def apply(self, f: Series, N=None) -> Series:
        """self(f); exact modulo m^min(N_self + 1, N_f)."""
        if f.n != self.n:
            raise DimensionMismatch("series and derivation dimensions differ")
        self.field.check_same(f.field)
        N = min(self.N + 1, f.N) if N is None else N
        return Series(self.n, N, self.field,
                      kernels.apply_terms(self.terms, f.terms, N, self.field.zero))

    def bracket(self, other, N=None):
        """[self, other] = self o other - other o self."""
        self._check(other)
        N = min(self.N, other.N) if N is None else N
        return LogDerivation(self.n, N, self.field,
                             kernels.bracket_terms(self.terms, other.terms, N, self.field.zero))

    # gradings -------------------------------------------------------------

    def graded_split(self, lam):
        """(resonant part, nonresonant part) relative to S = L(lam)."""
        lam = [self.field.coerce(x) for x in lam]
        res, non = {}, {}
        for m, v in self.terms.items():
            if self.field.is_resonant(dot(self.field, lam, m), sum(m)):
                res[m] = v
            else:
                non[m] = v
        return (LogDerivation(self.n, self.N, self.field, res, clean=False),
                LogDerivation(self.n, self.N, self.field, non, clean=False))

    def rnorm(self, r) -> Norm:
        """Truncated majorant norm sum_m r^||m|| ||lambda_m||_1 (a lower bound)."""
        if r <= 0:
            raise ValueError("radius must be positive")
        mod = self.field.modulus
        r = float(r)
        total = math.fsum(r ** sum(m) * math.fsum(mod(x) for x in v)
                          for m, v in self.terms.items())
        return Norm(total, lower_bound=True)

    def rescale(self, t):
        """Field in the coordinates x = t*y: x^m L(mu) becomes t^||m|| y^m L(mu)."""
        t = self.field.coerce(t)
        return LogDerivation(self.n, self.N, self.field,
                             {m: tuple(x * t ** sum(m) for x in v)
                              for m, v in self.terms.items()})

    # serialization ----------------------------------------------------------

    def to_json(self):
        fmt = self.field.format
        return {"n": self.n, "order": self.N, "scalars": self.field.name,
                "terms": [{"m": list(m), "lambda": [fmt(x) for x in v]}
                          for m, v in self.sorted_terms()]}

    @classmethod
    def from_json(cls, obj, field):
        return cls(obj["n"], obj["order"], field,
                   {tuple(t["m"]): tuple(field.parse(x) for x in t["lambda"])
                    for t in obj["terms"]})

    def to_expr(self, names=None):
        """Text form in the input grammar; reparses to the same derivation."""
        names = names or default_names(self.n)
        parts = []
        for i, a in enumerate(self.vector_components()):
            if a.is_zero():
                continue
            parts.append(f"({a.to_str(names)})*d{names[i]}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        body = " + ".join(
            "x^(" + ",".join(map(str, m)) + ")L(" + ", ".join(self.field.format(x) for x in v) + ")"
            for m, v in self.sorted_terms()) or "0"
        return f"LogDerivation[{self.field}, n={self.n}, N={self.N}]({body})"


def from_vector_components(coeffs, N=None):
    return LogDerivation.from_vector_components(coeffs, N)


def apply(d: LogDerivation, f: Series, N=None) -> Series:
    return d.apply(f, N)


def lie_bracket(d1: LogDerivation, d2: LogDerivation, N=None) -> LogDerivation:
    return d1.bracket(d2, N)


def graded_split(d: LogDerivation, lam):
    return d.graded_split(lam)


def rnorm_derivation(d: LogDerivation, r) -> Norm:
    return d.rnorm(r)


class LogBasis:
    """Eigenvalue vectors mu_0..mu_{n-1} with change-of-basis matrix T.

    Column j of ``T`` is ``mu_j``; ``T_inv`` maps an eigenvalue vector to its
    coordinates.  ``c`` and ``d`` satisfy
    ``c ||D||_r <= sum_j ||g_j||_r ||mu_j||_1 <= d ||D||_r``.
    """

    def __init__(self, vectors, field: Field):
        vectors = [tuple(field.coerce(x) for x in v) for v in vectors]
        n = len(vectors)
        if any(len(v) != n for v in vectors):
            raise DimensionMismatch("a logarithmic basis needs n vectors of length n")
        self.field = field
        self.n = n
        self.vectors = vectors
        self.T = [[vectors[j][i] for j in range(n)] for i in range(n)]
        try:
            self.T_inv = linalg.inverse(field, self.T)
        except NotInvertible:
            raise SingularBasis("basis vectors are linearly dependent") from None
        mod = field.modulus
        norms = [sum(mod(x) for x in v) for v in vectors]
        col_sums = [sum(mod(self.T_inv[i][j]) for i in range(n)) for j in range(n)]
        self.c = 1.0
        self.d = max(norms) * max(col_sums)

    @classmethod
    def canonical(cls, lam, field: Field):
        """{lam} completed by standard vectors, skipping the first nonzero slot of lam."""
        lam = [field.coerce(x) for x in lam]
        pivot = next((i for i, x in enumerate(lam) if not field.is_zero(x)), None)
        if pivot is None:
            raise SingularBasis("cannot complete the zero vector to a basis")
        n = len(lam)
        vecs = [lam]
        for i in range(n):
            if i != pivot:
                vecs.append([field.one if j == i else field.zero for j in range(n)])
        return cls(vecs, field)

    def coords(self, lam):
        return linalg.matvec(self.field, self.T_inv, lam)

    def expand(self, d: LogDerivation):
        """Series g_0..g_{n-1} with d = sum_j g_j L(mu_j)."""
        if d.n != self.n:
            raise DimensionMismatch("basis and derivation dimensions differ")
        self.field.check_same(d.field)
        per = [{} for _ in range(self.n)]
        for m, v in d.terms.items():
            for j, c in enumerate(self.coords(v)):
                per[j][m] = c
        return [Series(d.n, d.N, d.field, t) for t in per]

    def assemble(self, gs, N=None):
        """Inverse of :meth:`expand`."""
        n = self.n
        field = self.field
        N = min(g.N for g in gs) if N is None else N
        out = LogDerivation.zero(n, N, field)
        for g, mu in zip(gs, self.vectors):
            out = out + LogDerivation.diagonal(mu, N, field).smul(g, N)
        return out

    def to_json(self):
        fmt = self.field.format
        return [[fmt(x) for x in v] for v in self.vectors]


def log_basis_expand(d: LogDerivation, basis: LogBasis):
    return basis.expand(d)


def wedge_coefficients(d1: LogDerivation, d2: LogDerivation, N=None):
    """Coefficients f_i g_j - f_j g_i (i < j) of d1 ^ d2 in the x_i d/dx_i basis."""
    d1._check(d2)
    N = min(d1.N, d2.N) if N is None else N
    f = [s.truncate(N) for s in d1.log_components()]
    g = [s.truncate(N) for s in d2.log_components()]
    out = []
    for i in range(d1.n):
        for j in range(i + 1, d1.n):
            out.append((f[i] * g[j] - f[j] * g[i]).truncate(N))
    return out


def wedge_coeff_ideal(d1: LogDerivation, d2: LogDerivation, N=None):
    from .ideal import TruncatedIdeal

    N = min(d1.N, d2.N) if N is None else N
    return TruncatedIdeal(wedge_coefficients(d1, d2, N), N, n=d1.n, field=d1.field)


def coefficient_ideal(d: LogDerivation, N=None):
    """Ideal generated by the logarithmic components of d."""
    from .ideal import TruncatedIdeal

    N = d.N if N is None else N
    return TruncatedIdeal([c.truncate(N) for c in d.log_components()], N, n=d.n, field=d.field)


def random_log_derivation(rng, n, N, field, degree, density=0.5, coeff_range=3, min_degree=1,
                          imag=False, resonant_lam=None):
    """Random polynomial logarithmic derivation with small integer coefficients.

    With ``resonant_lam`` only monomials resonant for that eigenvalue vector
    are used.
    """
    from .series import monomials_upto

    terms = {}
    for m in monomials_upto(n, min(degree, N - 1)):
        if sum(m) < min_degree or rng.random() > density:
            continue
        if resonant_lam is not None and not field.is_resonant(dot(field, resonant_lam, m), sum(m)):
            continue
        vec = []
        for _ in range(n):
            a = rng.randint(-coeff_range, coeff_range)
            if imag:
                b = rng.randint(-coeff_range, coeff_range)
                vec.append(field.coerce((a, b)) if field.exact else complex(a, b))
            else:
                vec.append(field.coerce(a))
        terms[m] = vec
    return LogDerivation(n, N, field, terms)


__all__ = ["LogDerivation", "LogBasis", "from_vector_components", "apply", "lie_bracket",
           "log_basis_expand", "graded_split", "wedge_coeff_ideal", "wedge_coefficients",
           "coefficient_ideal", "rnorm_derivation", "random_log_derivation"]
