"""Small divisors: the omega_k sequence, Bruno sums, radius schedules and
majorant-norm diagnostics for a normalization run.

``omega_k`` is the smallest nonzero ``|<lam, m>|`` over exponent vectors with
``||m|| <= 2^k``.  In ``paper`` mode a vector may carry a single entry equal
to -1; in ``nonneg`` mode all entries are nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import gmpy2

from . import kernels
from .errors import BudgetExceeded, ZeroLambda
from .scalars import GaussQ, _MPQ, format_rational

DEFAULT_CAP = 4096
MODES = ("paper", "nonneg")


def _exact_parts(x):
    """(re, im) as mpq for an exact scalar, or None for a float."""
    if isinstance(x, GaussQ):
        return x.re, x.im
    if isinstance(x, (int, Fraction, _MPQ)) and not isinstance(x, bool):
        return gmpy2.mpq(x), gmpy2.mpq(0)
    return None


@dataclass
class OmegaEntry:
    k: int
    value: float
    argmin: tuple
    exact: bool
    squared: object = None  # exact squared modulus (mpq) when exact

    def to_json(self):
        d = {"k": self.k, "omega": repr(float(self.value)), "argmin": list(self.argmin),
             "exact": self.exact}
        if self.exact:
            d["omega_squared"] = format_rational(self.squared)
            r = gmpy2.mpq(self.squared)
            if gmpy2.is_square(r.numerator) and gmpy2.is_square(r.denominator):
                d["omega_exact"] = format_rational(
                    gmpy2.mpq(gmpy2.isqrt(r.numerator), gmpy2.isqrt(r.denominator)))
        return d


@dataclass
class OmegaReport:
    lam: tuple
    mode: str
    entries: list
    exact: bool
    partial_sums: list = dc_field(default_factory=list)
    verdict: str = ""

    @property
    def omegas(self):
        return [e.value for e in self.entries]

    def to_json(self):
        fmt = []
        for x in self.lam:
            fmt.append(str(x) if not isinstance(x, _MPQ) else format_rational(x))
        return {"lambda": fmt, "mode": self.mode, "exact": self.exact,
                "table": [e.to_json() for e in self.entries],
                "partial_sums": [repr(float(s)) for s in self.partial_sums],
                "verdict": self.verdict}


def omega_sequence(lam, K: int, mode: str = "paper", cap: int = DEFAULT_CAP, eps: float = 1e-12):
    """omega_k for k = 0..K together with graded-lex smallest minimizers."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if K < 0:
        raise ValueError("K must be nonnegative")
    max_norm = 2 ** K
    if max_norm > cap:
        raise BudgetExceeded(f"enumeration up to ||m|| = {max_norm} exceeds the cap {cap}")
    lam = tuple(lam)
    allow_neg = mode == "paper"
    parts = [_exact_parts(x) for x in lam]
    if all(p is not None for p in parts):
        return _omega_exact(lam, parts, K, mode, allow_neg)
    return _omega_float(lam, K, mode, allow_neg, eps)


def _cumulative(shells, K, better):
    entries = []
    best = None
    for k in range(K + 1):
        lo = 1 if k == 0 else 2 ** (k - 1) + 1
        for s in range(lo, 2 ** k + 1):
            v, arg = shells[s - 1]
            if arg is None:
                continue
            if best is None or better(v, best[0]):
                best = (v, arg)
        entries.append(best)
    return entries


def _omega_exact(lam, parts, K, mode, allow_neg):
    den = 1
    for re, im in parts:
        den = gmpy2.lcm(den, gmpy2.lcm(re.denominator, im.denominator))
    re_i = [int(re * den) for re, _ in parts]
    im_i = [int(im * den) for _, im in parts]
    if not any(re_i) and not any(im_i):
        raise ZeroLambda("lambda must be nonzero")
    shells = kernels.omega_shells_int(re_i, im_i, 2 ** K, allow_neg)
    shells = [(v, a) if v >= 0 else (None, None) for v, a in shells]
    best = _cumulative(shells, K, lambda a, b: a < b)
    entries = []
    d2 = gmpy2.mpq(int(den) ** 2)
    for k, b in enumerate(best):
        if b is None:
            raise ZeroLambda("every vector in the search ball is resonant")
        sq = gmpy2.mpq(b[0]) / d2
        entries.append(OmegaEntry(k, math.sqrt(b[0]) / int(den), tuple(b[1]), True, sq))
    return OmegaReport(lam, mode, entries, True)


def _omega_float(lam, K, mode, allow_neg, eps):
    z = [complex(x) for x in lam]
    if all(abs(x) <= eps for x in z):
        raise ZeroLambda("lambda must be nonzero")
    shells = kernels.omega_shells_float([x.real for x in z], [x.imag for x in z], 2 ** K,
                                        allow_neg, eps)
    best = _cumulative(shells, K, lambda a, b: a < b)
    entries = []
    for k, b in enumerate(best):
        if b is None:
            raise ZeroLambda("every vector in the search ball is resonant")
        entries.append(OmegaEntry(k, b[0], tuple(b[1]), False))
    return OmegaReport(lam, mode, entries, False)


def bruno_sum(report: OmegaReport, slope_ratio: float = 0.75):
    """Partial sums sigma_K = sum_k -log(omega_k)/2^k and a verdict.

    Exact Gaussian-rational eigenvalues give values in a discrete set, so
    omega_k is bounded below by 1/D (D a common denominator) and the tail is
    at most log(D)/2^K: SatisfiedCertified.  Float eigenvalues get
    SatisfiedHeuristic when the last increments shrink geometrically and
    Undetermined otherwise.  No verdict ever claims a violation.
    """
    sums = []
    acc = 0.0
    incs = []
    for e in report.entries:
        inc = -math.log(e.value) / 2 ** e.k
        incs.append(inc)
        acc += inc
        sums.append(acc)
    report.partial_sums = sums
    if report.exact:
        verdict = "SatisfiedCertified"
    elif len(incs) >= 2 and incs[-1] >= 0 and incs[-2] > 0 and incs[-1] / incs[-2] < slope_ratio:
        verdict = "SatisfiedHeuristic"
    elif len(incs) >= 2 and all(abs(i) == 0.0 for i in incs[-2:]):
        verdict = "SatisfiedHeuristic"
    else:
        verdict = "Undetermined"
    report.verdict = verdict
    return verdict, sums


@dataclass
class RadiusSchedule:
    radii: list
    factors: list
    limit_estimate: float
    positive_limit: bool
    C: float
    k0: int
    rho: float

    def ratios(self):
        return [b / a for a, b in zip(self.radii, self.radii[1:])]

    def to_json(self):
        return {"C": self.C, "k0": self.k0, "rho": self.rho,
                "radii": [repr(r) for r in self.radii],
                "factors": [repr(f) for f in self.factors],
                "limit_estimate": repr(self.limit_estimate),
                "positive_limit": self.positive_limit}


def radius_schedule(omegas, C: float = 3.0, k0: int = 1, rho: float = 1.0, steps=None,
                    omega_summable=None):
    """rho_s = rho * prod_{k=k0}^{k0+s} (omega_k / (C 4^k))^(C/2^k).

    ``omegas[k]`` is omega_k; values past the table are taken equal to the
    last entry (omega_k is nonincreasing, so this is the optimistic
    extrapolation).  The limit estimate adds the extrapolated log tail.
    """
    if C < 3:
        raise ValueError("C must be at least 3")
    omegas = list(omegas)
    if steps is None:
        steps = max(len(omegas) - k0, 1)

    def om(k):
        if k < len(omegas):
            return float(omegas[k])
        return float(omegas[-1])

    radii, factors = [], []
    log_rho = math.log(rho) if rho > 0 else -math.inf
    for s in range(steps):
        k = k0 + s
        w = om(k)
        if w <= 0:
            raise ValueError("omega_k must be positive")
        lf = (C / 2 ** k) * (math.log(w) - math.log(C) - 2 * k * math.log(2))
        factors.append(math.exp(lf))
        log_rho += lf
        radii.append(math.exp(log_rho) if rho > 0 else 0.0)
    tail = 0.0
    w_last = om(k0 + steps)
    k = k0 + steps
    while True:
        term = (C / 2 ** k) * (math.log(w_last) - math.log(C) - 2 * k * math.log(2))
        tail += term
        if abs(term) < 1e-18 or k > 2000:
            break
        k += 1
    limit = math.exp(log_rho + tail) if rho > 0 else 0.0
    positive = rho > 0 and (omega_summable if omega_summable is not None else limit > 0)
    return RadiusSchedule(radii, factors, limit, bool(positive), C, k0, rho)


def _scaled_radius(R, rho, delta_bound):
    """Largest t <= 1 with ||R||_{t rho} <= delta_bound (bisection)."""
    if R.is_zero() or R.rnorm(rho) <= delta_bound:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid == 0 or R.rnorm(mid * rho) <= delta_bound:
            lo = mid
        else:
            hi = mid
    return lo


def estimate_diagnostics(d, trace, C: float = 3.0, k0: int = 1, rho: float = 1.0, omegas=None,
                         mode: str = "paper"):
    """Evaluate the majorant-norm inequalities of the convergence argument
    on a finished Newton trace.  All norms are truncated lower bounds.
    """
    from .normalize import SPerturbation

    sp = SPerturbation.wrap(d)
    basis = sp.basis()
    dconst = basis.d
    Delta = min(1.0, 1.0 / (2 * dconst))
    K = len(trace.steps)
    if omegas is None:
        try:
            omegas = omega_sequence(sp.lam, max(K + k0 + 1, 1), mode).omegas
        except BudgetExceeded:
            omegas = [1.0]
    R = sp.R
    t = _scaled_radius(R, rho, Delta)
    eff_rho = t * rho
    sched = radius_schedule(omegas, C, k0, eff_rho, steps=max(K, 1))
    steps = []
    r = eff_rho
    for i, st in enumerate(trace.steps):
        r_next = sched.radii[i] if i < len(sched.radii) else sched.radii[-1]
        nU = st.U.rnorm(r)
        bound_U = 1.0 / 2 ** st.k
        steps.append({
            "k": st.k,
            "radius": repr(r),
            "next_radius": repr(r_next),
            "norm_U": repr(float(nU)),
            "bound_U": repr(bound_U),
            "U_bound_holds": float(nU) <= bound_U * (1 + 1e-12),
            "order_window_holds": (st.U.is_zero()
                                   or (st.U.ord >= 2 ** st.k and st.U.deg < 2 ** (st.k + 1))),
        })
        r = r_next
    return {
        "C": C, "k0": k0, "rho": rho, "Delta": repr(Delta), "basis_d": repr(dconst),
        "scale_factor": repr(t), "scaled_rho": repr(eff_rho),
        "scaled_norm_R": repr(float(R.rnorm(eff_rho))) if not R.is_zero() else "0.0",
        "scaling_honored": R.is_zero() or float(R.rnorm(eff_rho)) <= Delta * (1 + 1e-12),
        "lower_bounds_only": True,
        "steps": steps,
        "schedule": sched.to_json(),
    }


__all__ = ["omega_sequence", "bruno_sum", "radius_schedule", "estimate_diagnostics",
           "OmegaReport", "OmegaEntry", "RadiusSchedule", "DEFAULT_CAP"]
