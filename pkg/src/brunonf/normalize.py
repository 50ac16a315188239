"""Homological solver, conjugation and the two normalization schemes.

Orientation conventions used throughout:

* ``exp_automorphism(U)`` has images ``phi_i = sum_j U^j(x_i)/j!`` so that
  ``f.substitute(phi) == exp(U) f``.
* ``conjugate(D, U) = sum_j ad_U^j(D)/j!`` with ``ad_U(E) = [E, U]``.  As an
  operator this is ``exp(-U) D exp(U)``, hence for ``phi = exp(U)``:
  ``conjugate(D, U)(g o phi^-1) == D(g) o phi^-1``.
* ``conjugate_by(D, phi)`` is the field ``E`` with ``E(f o phi) = D(f) o phi``.
  For it the Bruno ideal transforms as ``B(E) = pullback(B(D), phi)``.
* The normalizers return ``phi`` with ``D(f o phi) = delta(f) o phi``, i.e. the
  original field is ``conjugate_by(delta, phi)`` and
  ``B(original) = pullback(B(delta), phi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .derivation import LogBasis, LogDerivation
from .errors import DimensionMismatch, NonDegenerate, NotGradedZero, ResonantInput
from .scalars import dot
from .series import Automorphism, Series


class SPerturbation:
    """A logarithmic field S + R with S = L(lam), lam != 0 and ord(R) >= 1."""

    def __init__(self, d: LogDerivation):
        lam = d.linear_part()
        if all(d.field.is_zero(x) for x in lam):
            raise NonDegenerate("the linear part vanishes; a nonzero semisimple part is required")
        self.d = d
        self.lam = tuple(lam)
        self.n = d.n
        self.N = d.N
        self.field = d.field
        self.S = LogDerivation.diagonal(lam, d.N, d.field)
        self.R = d.nonlinear_part()

    @classmethod
    def wrap(cls, d):
        return d if isinstance(d, SPerturbation) else cls(d)

    def basis(self):
        return LogBasis.canonical(self.lam, self.field)


@dataclass
class NormalizationStep:
    k: int
    U: LogDerivation
    f0: Series
    ord_U: float
    deg_U: float
    passes: int = 1
    diagnostics: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {"k": self.k, "U": self.U.to_json(), "f0": self.f0.to_json(),
                "ord_U": _num(self.ord_U), "deg_U": _num(self.deg_U), "passes": self.passes,
                "diagnostics": self.diagnostics}


def _num(x):
    if x == float("inf"):
        return "inf"
    if x == float("-inf"):
        return "-inf"
    return int(x)


@dataclass
class NormalizationTrace:
    method: str
    flavor: str
    steps: list = dc_field(default_factory=list)

    def to_json(self):
        return {"method": self.method, "flavor": self.flavor,
                "steps": [s.to_json() for s in self.steps]}

    def is_trivial(self):
        return all(s.U.is_zero() for s in self.steps)


def _lam_of(S, field):
    if isinstance(S, LogDerivation):
        return tuple(S.linear_part())
    return tuple(field.coerce(x) for x in S)


def ad_s_inverse(lam, V: LogDerivation, power: int = 1) -> LogDerivation:
    """Divide each monomial term of V by alpha^power, alpha = <lam, m>."""
    field = V.field
    out = {}
    for m, mu in V.terms.items():
        a = dot(field, lam, m)
        if field.is_resonant(a, sum(m)):
            raise ResonantInput(f"resonant term at exponent {m} cannot be inverted")
        inv = field.one / a ** power
        out[m] = tuple(x * inv for x in mu)
    return LogDerivation(V.n, V.N, field, out)


def inverse_adjoint(lam, f0: Series, V: LogDerivation, N) -> LogDerivation:
    """Preimage of V under U -> [(1+f0)S, U] for nonresonant V, modulo degree N.

    Termwise: x^m L(mu) -> x^m/(a(1+f0)) L(mu) + x^m L(mu)(f0)/(a^2(1+f0)^2) S.
    """
    field = V.field
    n = V.n
    V = V.truncate(N)
    A1 = ad_s_inverse(lam, V, 1)
    if f0.is_zero():
        return A1
    A2 = ad_s_inverse(lam, V, 2)
    unit = (Series.one(n, N, field) + f0.truncate(N)).invert_unit(N)
    part1 = A1.smul(unit, N)
    coef = A2.apply(f0.truncate(N), N) * unit * unit
    part2 = LogDerivation.diagonal(lam, N, field).smul(coef.truncate(N), N)
    return part1 + part2


def _check_f0(lam, f0: Series):
    field = f0.field
    if not field.is_zero(f0.constant()):
        raise NotGradedZero("f0 must vanish at the origin")
    S = LogDerivation.diagonal(lam, f0.N, field)
    if not S.apply(f0, f0.N).is_zero():
        raise NotGradedZero("f0 is not annihilated by S")


def solve_truncated_bracket(S, f0: Series, W: LogDerivation, k: int, N=None) -> LogDerivation:
    """U = U_* with [(1+f0)S, U] = -W_* modulo m^(2^(k+1)) (or modulo m^N if given)."""
    lam = _lam_of(S, W.field)
    if len(lam) != W.n or f0.n != W.n:
        raise DimensionMismatch("S, f0 and W must have the same dimension")
    W.field.check_same(f0.field)
    _check_f0(lam, f0)
    hi = 2 ** (k + 1) if N is None else N
    _, W_star = W.graded_split(lam)
    U = inverse_adjoint(lam, f0, W_star.truncate(hi), hi)
    return -U


def exp_action(U: LogDerivation, f: Series, N) -> Series:
    """exp(U) f = sum_j U^j(f)/j! modulo m^N, i.e. f o exp_automorphism(U)."""
    field = U.field
    acc = f.truncate(N)
    if U.is_zero():
        return acc
    if U.ord < 1:
        raise ValueError("exp needs a derivation of order >= 1")
    term = acc
    j = 1
    while True:
        term = U.apply(term, N).scale(field.one / j)
        if term.is_zero():
            return acc
        acc = acc + term
        j += 1


def exp_automorphism(U: LogDerivation, N=None) -> Automorphism:
    """Images phi_i = sum_j U^j(x_i)/j! modulo m^N."""
    N = U.N + 1 if N is None else N
    n, field = U.n, U.field
    if U.is_zero():
        return Automorphism.identity(n, N, field)
    return Automorphism([exp_action(U, Series.var(i, n, N, field), N) for i in range(n)], N)


def exp_chain(Us, n, N, field) -> Automorphism:
    """exp(U_last) o ... o exp(U_first) as a map, without series substitution.

    Pulling back by it is ``f -> exp(U_first) ... exp(U_last) f`` (innermost
    last), which is also how the images are built.
    """
    Us = list(Us)

    def action(f, M):
        g = f.truncate(M)
        for U in reversed(Us):
            g = exp_action(U, g, M)
        return g

    images = [action(Series.var(i, n, N, field), N) for i in range(n)]
    # exp(U)^-1 = exp(-U), so the inverse is the reversed chain of negatives
    return Automorphism(images, N,
                        lambda M: exp_chain([-U for U in reversed(Us)], n, M, field), action)


def polynomial_automorphism(U: LogDerivation, N=None) -> Automorphism:
    """The coordinate change phi(x) = x + U(x)."""
    N = U.N + 1 if N is None else N
    n, field = U.n, U.field
    return Automorphism([Series.var(i, n, N, field) + U.apply(Series.var(i, n, N, field), N)
                         for i in range(n)], N)


def conjugate(d: LogDerivation, U: LogDerivation, N=None) -> LogDerivation:
    """sum_j ad_U^j(d)/j! with ad_U(E) = [E, U], modulo ||m|| < N."""
    N = min(d.N, U.N) if N is None else N
    field = d.field
    acc = d.truncate(N)
    if U.is_zero():
        return acc
    if U.ord < 1:
        raise ValueError("conjugation needs a derivation of order >= 1")
    term = acc
    j = 1
    while True:
        term = term.bracket(U, N).scale(field.one / j)
        if term.is_zero():
            break
        acc = acc + term
        j += 1
    return acc


def conjugate_by(d: LogDerivation, phi: Automorphism, N=None) -> LogDerivation:
    """The field E with E(f o phi) = d(f) o phi.

    ``phi`` must be known one order beyond the requested N.
    """
    N = min(d.N, phi.N - 1) if N is None else N
    if phi.N < N + 1:
        raise ValueError("automorphism must be known modulo m^(N+1)")
    psi = phi.inverse(N + 1)
    comps = [d.apply(p, N + 1).substitute(phi, N + 1) for p in psi.images]
    return LogDerivation.from_vector_components(comps, N)


def _s_coefficient(d: LogDerivation, basis: LogBasis, lam, below: int, order: int):
    """S-coefficient of the resonant part of d - S, keeping degrees < below."""
    S = LogDerivation.diagonal(lam, d.N, d.field)
    res, _ = (d - S).graded_split(lam)
    f = basis.expand(res.truncate(below))[0]
    return Series(d.n, order, d.field, f.terms)


def newton_normalize(d, N=None, flavor: str = "exp", max_passes=None):
    """Newton doubling: step k clears nonresonant terms with 2^k <= ||m|| < 2^(k+1).

    Returns (delta, phi, trace) with d(f o phi) = delta(f) o phi.
    """
    sp = SPerturbation.wrap(d)
    d = sp.d
    N = d.N if N is None else N
    if N < 1 or N & (N - 1):
        raise ValueError("the Newton scheme needs a power-of-two truncation order")
    if flavor not in ("exp", "polynomial"):
        raise ValueError(f"unknown coordinate-change flavor {flavor!r}")
    n, field, lam = sp.n, sp.field, sp.lam
    basis = sp.basis()
    delta = d.truncate(N)
    total = Automorphism.identity(n, N, field)
    applied = []  # step fields, in order, for the exp flavor
    trace = NormalizationTrace("newton", flavor)
    k = 0
    while 2 ** k < N:
        lo, hi = 2 ** k, 2 ** (k + 1)
        hi_eff = min(hi, N)
        f0 = _s_coefficient(delta, basis, lam, lo, hi_eff)
        U = LogDerivation.zero(n, hi_eff, field)
        cur = delta.truncate(hi_eff)
        passes = 0
        limit = max_passes if max_passes is not None else lo + 1
        while True:
            _, non = cur.truncate(hi_eff).graded_split(lam)
            if non.is_zero():
                break
            if non.ord < lo:
                raise RuntimeError(f"step {k}: nonresonant term below order {lo}")
            if passes >= limit:
                raise RuntimeError(f"step {k}: refinement did not converge")
            U = U + solve_truncated_bracket(lam, f0, non, k).truncate(hi_eff)
            cur = _change(delta, U, hi_eff, flavor)
            passes += 1
        if not U.is_zero():
            delta = _change(delta, U, N, flavor)
            if flavor == "exp":
                applied.append(U)
            else:
                total = polynomial_automorphism(U, N).compose(total, N)
        if not U.is_zero() and (U.ord < lo or U.deg >= hi):
            raise RuntimeError(f"step {k}: U violates the order/degree window")
        f0_after = _s_coefficient(delta, basis, lam, hi_eff, hi_eff)
        trace.steps.append(NormalizationStep(k, U, f0_after, U.ord, U.deg, passes))
        k += 1
    _, rest = delta.graded_split(lam)
    if not rest.is_zero():
        raise RuntimeError("normalization left nonresonant terms")
    if flavor == "exp":
        total = exp_chain(applied, n, N, field)
    return delta, total, trace


def _change(delta, U, N, flavor):
    if flavor == "exp":
        return conjugate(delta, U, N)
    phi = polynomial_automorphism(U, N + 1)
    return conjugate_by(delta.truncate(N), phi.inverse(N + 1), N)


def graded_normalize(d, N=None):
    """Degree-by-degree elimination with ad_S^-1; returns (delta, phi, trace)."""
    sp = SPerturbation.wrap(d)
    d = sp.d
    N = d.N if N is None else N
    n, field, lam = sp.n, sp.field, sp.lam
    delta = d.truncate(N)
    applied = []
    trace = NormalizationTrace("graded", "exp")
    basis = sp.basis()
    for deg in range(1, N):
        _, non = delta.graded_split(lam)
        W = LogDerivation(n, N, field, {m: v for m, v in non.terms.items() if sum(m) == deg},
                          clean=False)
        V = -ad_s_inverse(lam, W, 1) if not W.is_zero() else W
        if not V.is_zero():
            delta = conjugate(delta, V, N)
            applied.append(V)
        f0 = _s_coefficient(delta, basis, lam, deg + 1, N)
        trace.steps.append(NormalizationStep(deg, V, f0, V.ord, V.deg))
    _, rest = delta.graded_split(lam)
    if not rest.is_zero():
        raise RuntimeError("normalization left nonresonant terms")
    return delta, exp_chain(applied, n, N, field), trace


def normalize(d, N=None, method: str = "newton", flavor: str = "exp"):
    if method == "newton":
        return newton_normalize(d, N, flavor)
    if method == "graded":
        return graded_normalize(d, N)
    raise ValueError(f"unknown method {method!r}")


__all__ = ["SPerturbation", "NormalizationTrace", "NormalizationStep", "solve_truncated_bracket",
           "inverse_adjoint", "ad_s_inverse", "exp_action", "exp_automorphism", "exp_chain", "polynomial_automorphism",
           "conjugate", "conjugate_by", "newton_normalize", "graded_normalize", "normalize"]
