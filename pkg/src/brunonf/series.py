"""Truncated sparse multivariate power series and coordinate changes.

A :class:`Series` in ``n`` variables with truncation order ``N`` stores the
coefficients of all monomials of total degree ``< N`` (it is an element of
``O / m^N``).  Every operation returns the tightest truncation order it can
guarantee, so combining series of different orders silently drops to the
smaller one.
"""

from __future__ import annotations

import math

import gmpy2

from . import kernels, linalg
from .errors import DimensionMismatch, NotAUnit, NotInvertible
from .scalars import Field, dot


def grlex_key(m):
    """Canonical order: total degree first, then lexicographically largest."""
    return (sum(abs(e) for e in m), tuple(-e for e in m))


def monomials_upto(n, d):
    """All exponent vectors of total degree <= d, in graded-lex order."""
    out = []
    for deg in range(d + 1):
        out.extend(monomials_of_degree(n, deg))
    return out


def monomials_of_degree(n, deg):
    if n == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in monomials_of_degree(n - 1, deg - first):
            out.append((first,) + rest)
    return out


class Norm(float):
    """A float carrying a ``lower_bound`` flag.

    Norms of truncated objects omit the unknown tail, so they only bound the
    germ's norm from below.
    """

    lower_bound: bool

    def __new__(cls, value, lower_bound=True):
        obj = super().__new__(cls, value)
        obj.lower_bound = lower_bound
        return obj


class Series:
    __slots__ = ("n", "N", "field", "terms")

    def __init__(self, n: int, N: int, field: Field, terms=None, clean: bool = True):
        self.n = n
        self.N = N
        self.field = field
        if terms is None:
            terms = {}
        if clean:
            is_zero = field.is_zero
            terms = {m: c for m, c in terms.items() if sum(m) < N and not is_zero(c)}
        self.terms = terms

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, n, N, field):
        return cls(n, N, field, {}, clean=False)

    @classmethod
    def const(cls, c, n, N, field):
        return cls(n, N, field, {(0,) * n: field.coerce(c)})

    @classmethod
    def one(cls, n, N, field):
        return cls.const(1, n, N, field)

    @classmethod
    def var(cls, i, n, N, field):
        m = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, N, field, {m: field.one})

    @classmethod
    def monomial(cls, m, c, N, field):
        return cls(len(m), N, field, {tuple(m): field.coerce(c)})

    @classmethod
    def from_dict(cls, d, n, N, field):
        return cls(n, N, field, {tuple(m): field.coerce(c) for m, c in d.items()})

    # inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
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

    def coeff(self, m):
        return self.terms.get(tuple(m), self.field.zero)

    def constant(self):
        return self.coeff((0,) * self.n)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def __iter__(self):
        return iter(self.sorted_terms())

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.n == other.n and self.N == other.N and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, self.N, frozenset(self.terms.items())))

    def equals_mod(self, other, N=None) -> bool:
        N = min(self.N, other.N) if N is None else N
        return (self - other).truncate(N).is_zero()

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if self.n != other.n:
            raise DimensionMismatch(f"series in {self.n} and {other.n} variables")
        self.field.check_same(other.field)

    def truncate(self, N):
        if N >= self.N:
            return Series(self.n, self.N, self.field, self.terms, clean=False)
        return Series(self.n, N, self.field, {m: c for m, c in self.terms.items() if sum(m) < N},
                      clean=False)

    def with_order(self, N):
        """Same terms, declared truncation order N (must not exceed what is known)."""
        return Series(self.n, N, self.field, self.terms)

    def __add__(self, other):
        if not isinstance(other, Series):
            return self + Series.const(other, self.n, self.N, self.field)
        self._check(other)
        N = min(self.N, other.N)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Series(self.n, N, self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.n, self.N, self.field, {m: -c for m, c in self.terms.items()},
                      clean=False)

    def __sub__(self, other):
        if not isinstance(other, Series):
            return self + (-self.field.coerce(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        N = min(self.N, other.N)
        return Series(self.n, N, self.field, kernels.mul_terms(self.terms, other.terms, N))

    __rmul__ = __mul__

    def scale(self, c):
        c = self.field.coerce(c)
        return Series(self.n, self.N, self.field, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Series.one(self.n, self.N, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_var(self, i, power=1):
        out = {}
        for m, c in self.terms.items():
            m2 = list(m)
            m2[i] += power
            out[tuple(m2)] = c
        return Series(self.n, self.N + power, self.field, out, clean=False)

    def divide_var(self, i):
        """Exact division by x_i; returns (quotient, offending terms)."""
        out, bad = {}, []
        for m, c in self.terms.items():
            if m[i] == 0:
                bad.append((m, c))
                continue
            m2 = list(m)
            m2[i] -= 1
            out[tuple(m2)] = c
        return Series(self.n, max(self.N - 1, 1), self.field, out, clean=False), bad

    def invert_unit(self, N=None):
        """Multiplicative inverse modulo m^N (Newton iteration g <- g(2 - fg))."""
        N = self.N if N is None else min(N, self.N)
        c0 = self.constant()
        if self.field.is_zero(c0):
            raise NotAUnit("series has vanishing constant term")
        f = self.truncate(N)
        g = Series.const(self.field.one / c0, self.n, N, self.field)
        two = Series.const(2, self.n, N, self.field)
        prec = 1
        while prec < N:
            prec = min(2 * prec, N)
            g = (g * (two - f * g)).truncate(N)
        return g

    def substitute(self, phi, N=None):
        """f(phi_1, ..., phi_n) modulo m^N for an Automorphism or image list."""
        images = phi.images if isinstance(phi, Automorphism) else list(phi)
        if len(images) != self.n:
            raise DimensionMismatch("substitution needs one image per variable")
        for im in images:
            self.field.check_same(im.field)
        N = min([self.N] + [im.N for im in images]) if N is None else N
        if isinstance(phi, Automorphism) and phi._action is not None and N <= phi.N:
            return phi._action(self, N)
        images = [im.truncate(N) for im in images]
        if any(im.constant() for im in images):
            raise ValueError("substituted images must vanish at the origin")
        m_out = images[0].n
        powers = [[Series.one(m_out, N, self.field)] for _ in range(self.n)]

        def power(i, k):
            pw = powers[i]
            while len(pw) <= k:
                pw.append((pw[-1] * images[i]).truncate(N))
            return pw[k]

        acc = {}
        for m, c in self.sorted_terms():
            if sum(m) >= N:
                continue
            term = None
            for i, e in enumerate(m):
                if e:
                    p = power(i, e)
                    term = p if term is None else term * p
            if term is None:
                term_terms = {(0,) * m_out: c}
            else:
                term_terms = {k: c * v for k, v in term.terms.items()}
            for k, v in term_terms.items():
                acc[k] = acc[k] + v if k in acc else v
        return Series(m_out, N, self.field, acc)

    # gradings and norms -----------------------------------------------------

    def graded_component(self, lam, alpha):
        """Sub-series of terms with <lam, m> = alpha."""
        lam = [self.field.coerce(x) for x in lam]
        alpha = self.field.coerce(alpha)
        keep = {m: c for m, c in self.terms.items()
                if self.field.is_resonant(dot(self.field, lam, m) - alpha, sum(m))}
        return Series(self.n, self.N, self.field, keep, clean=False)

    def graded_decomposition(self, lam):
        """Map alpha -> graded component; components sum back to the series."""
        lam = [self.field.coerce(x) for x in lam]
        groups = {}
        reps = []
        for m, c in self.sorted_terms():
            a = dot(self.field, lam, m)
            key = None
            if self.field.exact:
                key = a
            else:
                for r in reps:
                    if self.field.is_resonant(a - r, sum(m)):
                        key = r
                        break
                if key is None:
                    reps.append(a)
                    key = a
            groups.setdefault(key, {})[m] = c
        return {a: Series(self.n, self.N, self.field, t, clean=False) for a, t in groups.items()}

    def rnorm(self, r) -> Norm:
        """Truncated r-majorant norm sum |a_m| r^||m||; a lower bound for the germ."""
        if r <= 0:
            raise ValueError("radius must be positive")
        mod = self.field.modulus
        total = math.fsum(mod(c) * float(r) ** sum(m) for m, c in self.terms.items())
        return Norm(total, lower_bound=True)

    # serialization ----------------------------------------------------------

    def to_json(self):
        fmt = self.field.format
        return {"n": self.n, "order": self.N, "scalars": self.field.name,
                "terms": [{"m": list(m), "c": fmt(c)} for m, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, obj, field):
        return cls(obj["n"], obj["order"], field,
                   {tuple(t["m"]): field.parse(t["c"]) for t in obj["terms"]})

    def to_str(self, names=None):
        """Readable text in the input grammar, e.g. ``x*y - 1/2*i*z^2``."""
        names = names or default_names(self.n)
        if not self.terms:
            return "0"
        out = ""
        for m, c in self.sorted_terms():
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(names, m) if e)
            neg, body = _coef_text(self.field, c)
            if body is None:
                text = mono or "1"
            else:
                text = f"{body}*{mono}" if mono else body
            if not out:
                out = ("-" if neg else "") + text
            else:
                out += (" - " if neg else " + ") + text
        return out

    def __repr__(self):
        return f"Series[{self.field}, n={self.n}, N={self.N}]({self.to_str()})"


def _coef_text(field, c):
    """(negative, text) for a coefficient; text is None for a unit coefficient."""
    if field.exact:
        re_, im = (c.re, c.im) if hasattr(c, "im") else (c, 0)
        fmt = _rat_text
    else:
        re_, im = c.real, c.imag
        fmt = _float_text
    if im == 0 or re_ == 0:
        x = re_ if im == 0 else im
        neg = x < 0
        mag = fmt(-x if neg else x)
        if im == 0:
            return neg, None if mag == "1" else mag
        return neg, "i" if mag == "1" else f"{mag}*i"
    sign = "-" if im < 0 else "+"
    return False, f"({fmt(re_)} {sign} {fmt(abs(im))}*i)"


def _rat_text(q):
    q = gmpy2.mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _float_text(x):
    return "1" if x == 1.0 else f"{x:.17g}"


def default_names(n):
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


class Automorphism:
    """Coordinate change x -> (phi_1(x), ..., phi_n(x)) modulo m^N.

    ``f.substitute(phi)`` is the pullback ``f o phi``.  Images need not be
    logarithmic (linear changes such as (x+iy, x-iy, z) are allowed);
    :attr:`is_logarithmic` reports whether ``phi_i = x_i * unit``.
    """

    __slots__ = ("n", "N", "field", "images", "_inverse_fn", "_action")

    def __init__(self, images, N=None, inverse_fn=None, action=None):
        images = list(images)
        if not images:
            raise ValueError("automorphism needs at least one image")
        n = images[0].n
        if len(images) != n:
            raise DimensionMismatch("need one image per variable")
        field = images[0].field
        for im in images:
            field.check_same(im.field)
            if im.n != n:
                raise DimensionMismatch("images live in different rings")
        self.N = min(im.N for im in images) if N is None else N
        self.n = n
        self.field = field
        self.images = tuple(im.truncate(self.N) for im in images)
        self._inverse_fn = inverse_fn  # N -> inverse map, when a closed form is known
        self._action = action  # (f, N) -> f o self, when cheaper than substitution
        for im in self.images:
            if not field.is_zero(im.constant()):
                raise ValueError("automorphism images must vanish at the origin")
        if field.exact:
            try:
                linalg.inverse(field, self.linear_part())
            except NotInvertible:
                raise NotInvertible("linear part of automorphism is singular") from None

    @classmethod
    def identity(cls, n, N, field):
        return cls([Series.var(i, n, N, field) for i in range(n)], N)

    @classmethod
    def logarithmic(cls, units):
        """phi_i = x_i * u_i for unit series u_i."""
        units = list(units)
        n = len(units)
        imgs = []
        for i, u in enumerate(units):
            if u.field.is_zero(u.constant()):
                raise NotAUnit(f"u_{i} is not a unit")
            imgs.append((Series.var(i, n, u.N, u.field) * u))
        return cls(imgs)

    def linear_part(self):
        n = self.n
        return [[im.coeff(tuple(1 if j == k else 0 for k in range(n))) for j in range(n)]
                for im in self.images]

    @property
    def is_logarithmic(self) -> bool:
        for i, im in enumerate(self.images):
            q, bad = im.divide_var(i)
            if bad or self.field.is_zero(q.constant()):
                return False
        return True

    def is_identity(self) -> bool:
        return all(im == Series.var(i, self.n, self.N, self.field)
                   for i, im in enumerate(self.images))

    def units(self):
        out = []
        for i, im in enumerate(self.images):
            q, bad = im.divide_var(i)
            if bad:
                raise ValueError("automorphism is not logarithmic")
            out.append(q)
        return out

    def truncate(self, N):
        return Automorphism([im.truncate(N) for im in self.images], min(N, self.N),
                            self._inverse_fn, self._action)

    def compose(self, other, N=None):
        """The map self o other: x -> self(other(x))."""
        N = min(self.N, other.N) if N is None else N
        return Automorphism([im.substitute(other, N) for im in self.images], N)

    def __call__(self, f, N=None):
        return f.substitute(self, N)

    def inverse(self, N=None):
        """Inverse map modulo m^N by fixed-point iteration on the nonlinear part
        (or the closed form supplied at construction)."""
        N = self.N if N is None else min(N, self.N)
        if self._inverse_fn is not None:
            return self._inverse_fn(N)
        n, field = self.n, self.field
        A = self.linear_part()
        Ainv = linalg.inverse(field, A)
        lin = [Series(n, N, field, {m: c for m, c in im.terms.items() if sum(m) == 1})
               for im in self.images]
        nonlin = [im.truncate(N) - l for im, l in zip(self.images, lin)]
        xs = [Series.var(i, n, N, field) for i in range(n)]

        def apply_ainv(vec):
            return [sum((v.scale(Ainv[i][j]) for j, v in enumerate(vec)), Series.zero(n, N, field))
                    for i in range(n)]

        psi = apply_ainv(xs)
        for _ in range(max(N - 1, 1)):
            h = [g.substitute(psi, N) for g in nonlin]
            new = apply_ainv([x - hh for x, hh in zip(xs, h)])
            if all(a == b for a, b in zip(new, psi)):
                break
            psi = new
        fwd = self.truncate(N)
        return Automorphism(psi, N, lambda M: fwd.truncate(M))

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def to_json(self):
        return {"n": self.n, "order": self.N, "scalars": self.field.name,
                "images": [im.to_json()["terms"] for im in self.images]}

    def __repr__(self):
        return "Automorphism(" + ", ".join(im.to_str() for im in self.images) + ")"


def series_ring_ops(f, g, op, N=None, c=None):
    """Dispatch for the basic ring operations (add, sub, mul, scale)."""
    if op == "scale":
        out = f.scale(c)
    elif op == "add":
        out = f + g
    elif op == "sub":
        out = f - g
    elif op == "mul":
        out = f * g
    else:
        raise ValueError(f"unknown op {op!r}")
    return out.truncate(N) if N is not None else out


def random_series(rng, n, N, field, degree, density=0.5, coeff_range=3, min_degree=0, imag=False):
    """Random polynomial with small integer (or Gaussian integer) coefficients."""
    terms = {}
    for m in monomials_upto(n, min(degree, N - 1)):
        if sum(m) < min_degree or rng.random() > density:
            continue
        a = rng.randint(-coeff_range, coeff_range)
        if imag:
            b = rng.randint(-coeff_range, coeff_range)
            terms[m] = field.coerce((a, b)) if field.exact else complex(a, b)
        else:
            terms[m] = field.coerce(a)
    return Series(n, N, field, terms)


__all__ = ["Series", "Automorphism", "Norm", "grlex_key", "monomials_upto",
           "monomials_of_degree", "series_ring_ops", "random_series", "default_names"]
