"""Bruno ideals: normal-form route, pullback route and a Jordan-Chevalley oracle."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .derivation import LogBasis, LogDerivation, coefficient_ideal, wedge_coeff_ideal
from .errors import NonSplitSpectrum, NotADerivation, NotInNormalForm, NotLogarithmic
from .ideal import TruncatedIdeal, differential_closure
from .normalize import SPerturbation, normalize
from .scalars import dot
from .series import Automorphism, Series, monomials_upto

ORIENTATION = "original(f o phi) = normalized(f) o phi; B(original) = pullback(B(normalized), phi)"


def bruno_decomposition(delta: LogDerivation, basis: LogBasis = None, N=None):
    """Split delta - S = f S + sum_j g_j T_j for a field in normal form.

    Returns (f, [g_1, ..., g_{n-1}]).
    """
    sp = SPerturbation.wrap(delta)
    N = sp.N if N is None else N
    d = sp.d.truncate(N)
    lam = sp.lam
    basis = basis or sp.basis()
    if not all(d.field.is_zero(a - b) for a, b in zip(basis.vectors[0], lam)):
        raise ValueError("the first basis vector must be the eigenvalue vector of S")
    R = d - LogDerivation.diagonal(lam, N, d.field)
    _, non = R.graded_split(lam)
    if not non.is_zero():
        m, _ = non.sorted_terms()[0]
        raise NotInNormalForm(f"nonresonant term at exponent {m}")
    gs = basis.expand(R)
    return gs[0], gs[1:]


def bruno_ideal_normal_form(delta: LogDerivation, basis: LogBasis = None, N=None) -> TruncatedIdeal:
    sp = SPerturbation.wrap(delta)
    N = sp.N if N is None else N
    _, gs = bruno_decomposition(sp, basis, N)
    return TruncatedIdeal(gs, N, sp.n, sp.field)


@dataclass
class BrunoReport:
    original: LogDerivation
    delta: LogDerivation
    phi: Automorphism
    ideal_normalized: TruncatedIdeal
    ideal_original: TruncatedIdeal
    f: Series
    f0: Series
    g: list
    memberships: dict
    a_condition: bool
    method: str
    order: int
    trace: object = None
    oracle: dict = dc_field(default=None)

    @property
    def orientation(self):
        return ORIENTATION

    def to_json(self, names=None):
        return {
            "method": self.method,
            "order": self.order,
            "orientation": ORIENTATION,
            "normalized_field": self.delta.to_json(),
            "automorphism": self.phi.to_json(),
            "automorphism_is_identity": self.phi.is_identity(),
            "bruno_generators_normalized": self.ideal_normalized.to_strs(names),
            "bruno_generators_original": self.ideal_original.to_strs(names),
            "bruno_ideal_normalized": self.ideal_normalized.to_json(),
            "bruno_ideal_original": self.ideal_original.to_json(),
            "f": self.f.to_str(names),
            "f0": self.f0.to_str(names),
            "g": [s.to_str(names) for s in self.g],
            "memberships": self.memberships,
            "a_condition": {"holds_mod_order": self.a_condition, "order": self.order},
            "trace": self.trace.to_json() if self.trace is not None else None,
            "oracle": self.oracle,
        }


def bruno_ideal(d, N=None, method: str = "newton", flavor: str = "exp") -> BrunoReport:
    """Normalize, read off the generators and pull them back to original coordinates."""
    sp = SPerturbation.wrap(d)
    N = sp.N if N is None else N
    delta, phi, trace = normalize(sp, N, method, flavor)
    f, gs = bruno_decomposition(delta, sp.basis(), N)
    B_delta = TruncatedIdeal(gs, N, sp.n, sp.field)
    B_orig = B_delta.pullback(phi, N)
    f0 = B_delta.reduce(f, N)
    memberships = {
        "f_minus_f0": B_orig.contains((f - f0).substitute(phi, N), N),
        "g": [B_orig.contains(g.substitute(phi, N), N) for g in gs],
    }
    return BrunoReport(sp.d, delta, phi, B_delta, B_orig, f, f0, gs, memberships,
                       all(g.truncate(N).is_zero() for g in gs), method, N, trace)


# Jordan-Chevalley oracle -----------------------------------------------------

def _poly_trim(p, field):
    while p and field.is_zero(p[-1]):
        p.pop()
    return p


def _poly_mul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _poly_trim(out, field)


def _poly_sub(a, b, field):
    out = [field.zero] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = out[i] + x
    for i, x in enumerate(b):
        out[i] = out[i] - x
    return _poly_trim(out, field)


def _poly_divmod(a, b, field):
    a = list(a)
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    inv = field.one / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = a[s + i] - c * y
        a.pop()
        _poly_trim(a, field)
    return _poly_trim(q, field), a


def _poly_inverse_mod(a, m, field):
    """a^-1 modulo m via the extended Euclidean algorithm."""
    r0, r1 = list(m), _poly_divmod(a, m, field)[1]
    s0, s1 = [], [field.one]
    while r1:
        q, r = _poly_divmod(r0, r1, field)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, field), field)
    if len(r0) != 1:
        raise NonSplitSpectrum("interpolation moduli are not coprime")
    inv = field.one / r0[0]
    return [c * inv for c in s0]


def _hermite_semisimple_poly(nu, field):
    """q with q = alpha mod (t - alpha)^nu_alpha for every eigenvalue alpha."""
    mods = {}
    for a, k in nu.items():
        p = [field.one]
        for _ in range(k):
            p = _poly_mul(p, [-a, field.one], field)
        mods[a] = p
    P = [field.one]
    for p in mods.values():
        P = _poly_mul(P, p, field)
    q = []
    for a, p in mods.items():
        cof = _poly_divmod(P, p, field)[0]
        e = _poly_mul(cof, _poly_inverse_mod(cof, p, field), field)
        q = _poly_sub(q, [-(a * c) for c in e], field)
    return _poly_divmod(q, P, field)[1]


class _JetMatrix:
    """Matrix of a logarithmic derivation on the monomials of degree 1..N."""

    def __init__(self, d: LogDerivation, N: int):
        self.n, self.N, self.field = d.n, N, d.field
        self.monos = [m for m in monomials_upto(d.n, N) if sum(m)]
        self.index = {m: i for i, m in enumerate(self.monos)}
        self.cols = []
        for m in self.monos:
            img = d.apply(Series.monomial(m, 1, N + 1, d.field), N + 1)
            self.cols.append({self.index[k]: v for k, v in img.terms.items()})

    def matvec(self, v):
        out = {}
        for j, c in v.items():
            for i, a in self.cols[j].items():
                out[i] = out[i] + a * c if i in out else a * c
        return {i: c for i, c in out.items() if c}

    def poly_apply(self, q, v):
        """q(M) v by Horner's rule."""
        if not q:
            return {}
        acc = {i: q[-1] * c for i, c in v.items()}
        for c in reversed(q[:-1]):
            acc = self.matvec(acc)
            for i, x in v.items():
                acc[i] = acc[i] + c * x if i in acc else c * x
            acc = {i: y for i, y in acc.items() if y}
        return acc

    def to_series(self, v):
        return Series(self.n, self.N + 1, self.field, {self.monos[i]: c for i, c in v.items()})


def chevalley_jet(d, N=None, verify: bool = True):
    """Additive Jordan decomposition of d acting on O / m^(N+1).

    Returns (d_ss, d_nilp) as derivations truncated at ||m|| < N.
    """
    d = d.d if isinstance(d, SPerturbation) else d
    N = d.N if N is None else N
    field = d.field
    if not field.exact:
        raise NonSplitSpectrum("the Jordan-Chevalley oracle needs exact scalars")
    d = d.truncate(N)
    lam = d.linear_part()
    M = _JetMatrix(d, N)
    degrees = {}
    for m in M.monos:
        degrees.setdefault(dot(field, lam, m), set()).add(sum(m))
    nu = {a: len(ds) for a, ds in degrees.items()}
    q = _hermite_semisimple_poly(nu, field)
    n = d.n
    comps = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        comps.append(M.to_series(M.poly_apply(q, {M.index[e]: field.one})))
    try:
        ss = LogDerivation.from_vector_components(comps, N)
    except NotLogarithmic as exc:
        raise NotADerivation(f"semisimple part is not logarithmic: {exc}") from None
    nilp = d - ss
    if verify:
        _verify_chevalley(d, ss, nilp, M, q, degrees, N)
    return ss, nilp


def _verify_chevalley(d, ss, nilp, M, q, degrees, N):
    field = d.field
    n = d.n
    # Leibniz rule of q(M) on products of coordinates
    for i in range(n):
        for j in range(i, n):
            m = tuple((k == i) + (k == j) for k in range(n))
            if sum(m) > N:
                continue
            lhs = M.to_series(M.poly_apply(q, {M.index[m]: field.one}))
            xi = Series.var(i, n, N + 1, field)
            xj = Series.var(j, n, N + 1, field)
            rhs = ss.apply(xi * xj, N + 1)
            if not lhs.equals_mod(rhs, N + 1):
                raise NotADerivation("semisimple part fails the Leibniz rule")
    if not ss.bracket(nilp, N).is_zero():
        raise NotADerivation("semisimple and nilpotent parts do not commute")
    # ss is diagonalizable: its squarefree spectral polynomial kills it
    S = _JetMatrix(ss, N)
    alphas = sorted(degrees, key=lambda a: (field.modulus(a), str(a)))
    for b in range(len(S.monos)):
        v = {b: field.one}
        for a in alphas:
            w = S.matvec(v)
            for k, x in v.items():
                w[k] = w[k] - a * x if k in w else -a * x
            v = {k: y for k, y in w.items() if y}
            if not v:
                break
        if v:
            raise NotADerivation("semisimple part is not diagonalizable")


def bruno_oracle_compare(d, N=None, method: str = "newton"):
    """Compare the Chevalley-wedge ideal with the normalize-and-pullback ideal."""
    sp = SPerturbation.wrap(d)
    N = sp.N if N is None else N
    ss, nilp = chevalley_jet(sp.d, N)
    I_chev = wedge_coeff_ideal(ss, nilp, N)
    rep = bruno_ideal(sp, N, method)
    I_pull = rep.ideal_original
    equal = I_chev.equals(I_pull, N)
    return {
        "order": N,
        "equal": equal,
        "chevalley_generators": I_chev.to_strs(),
        "pullback_generators": I_pull.to_strs(),
        "chevalley_dimension": I_chev.dimension(N),
        "pullback_dimension": I_pull.dimension(N),
        "semisimple": ss.to_json(),
        "nilpotent": nilp.to_json(),
    }


def analyticity_certificate(d, N=None):
    """I = S[Gamma(S ^ R) + Gamma([S, R])] and whether it equals B(d) mod m^N."""
    sp = SPerturbation.wrap(d)
    N = sp.N if N is None else N
    S = sp.S.truncate(N)
    R = sp.R.truncate(N)
    I1 = wedge_coeff_ideal(S, R, N)
    I2 = coefficient_ideal(S.bracket(R, N), N)
    I = differential_closure(I1 + I2, S, N)
    _, non = R.graded_split(sp.lam)
    verdict = {"order": N, "normal_form": non.is_zero(), "commutator_ideal_zero": I2.is_zero()}
    if non.is_zero():
        B = bruno_ideal_normal_form(sp, None, N)
        verdict["equals_bruno_ideal"] = I.equals(B, N)
    else:
        verdict["equals_bruno_ideal"] = None
    return I, verdict


def a_condition(d, N=None):
    """True when the field is collinear to its semisimple part modulo m^N."""
    return bruno_ideal(d, N).a_condition


__all__ = ["bruno_decomposition", "bruno_ideal_normal_form", "bruno_ideal", "BrunoReport",
           "chevalley_jet", "bruno_oracle_compare", "analyticity_certificate", "a_condition"]
