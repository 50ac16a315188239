"""Pure-Python kernels.  ``_ckernels.pyx`` mirrors these loop for loop.

Series terms are dicts ``exponent tuple -> coefficient``; derivation terms
are dicts ``exponent tuple -> list of n coefficients``.  Kernels never drop
zero coefficients: callers clean up with the field's zero test.  Iteration
order is fixed (insertion order of the left operand, degree order of the
right operand) so float results are reproducible bit for bit.
"""

import math

BACKEND = "python"


def _by_degree(terms):
    items = [(sum(k), k, v) for k, v in terms.items()]
    items.sort(key=lambda t: t[0])
    return items


def mul_terms(a, b, N):
    out = {}
    bl = _by_degree(b)
    for ka, va in a.items():
        lim = N - sum(ka)
        if lim <= 0:
            continue
        for db, kb, vb in bl:
            if db >= lim:
                break
            k = tuple([x + y for x, y in zip(ka, kb)])
            p = va * vb
            if k in out:
                out[k] = out[k] + p
            else:
                out[k] = p
    return out


def apply_terms(d, f, N, zero):
    out = {}
    fl = _by_degree(f)
    for m, lam in d.items():
        lim = N - sum(m)
        if lim <= 0:
            continue
        for dn, n, a in fl:
            if dn >= lim:
                break
            if dn == 0:
                continue
            c = zero
            for li, ni in zip(lam, n):
                if ni:
                    c = c + li * ni
            if not c:
                continue
            k = tuple([x + y for x, y in zip(m, n)])
            p = c * a
            if k in out:
                out[k] = out[k] + p
            else:
                out[k] = p
    return out


def bracket_terms(d1, d2, N, zero):
    out = {}
    dl = _by_degree(d2)
    for m, lam in d1.items():
        dm = sum(m)
        lim = N - dm
        if lim <= 0:
            continue
        for dn, n, mu in dl:
            if dn >= lim:
                break
            a = zero
            for li, ni in zip(lam, n):
                if ni:
                    a = a + li * ni
            b = zero
            for mi_, mm in zip(mu, m):
                if mm:
                    b = b + mi_ * mm
            if not a and not b:
                continue
            k = tuple([x + y for x, y in zip(m, n)])
            vec = [a * u - b * l for u, l in zip(mu, lam)]
            if k in out:
                cur = out[k]
                out[k] = [x + y for x, y in zip(cur, vec)]
            else:
                out[k] = vec
    return out


def smul_terms(f, d, N):
    out = {}
    dl = _by_degree(d)
    for k0, a in f.items():
        lim = N - sum(k0)
        if lim <= 0:
            continue
        for dm, m, lam in dl:
            if dm >= lim:
                break
            k = tuple([x + y for x, y in zip(k0, m)])
            vec = [a * l for l in lam]
            if k in out:
                cur = out[k]
                out[k] = [x + y for x, y in zip(cur, vec)]
            else:
                out[k] = vec
    return out


def _compositions(s, k):
    """All k-tuples of nonnegative ints summing to s, lex-descending."""
    if k == 0:
        if s == 0:
            yield ()
        return
    if k == 1:
        yield (s,)
        return
    for first in range(s, -1, -1):
        for rest in _compositions(s - first, k - 1):
            yield (first,) + rest


def shell_vectors(s, n, allow_neg):
    """Exponent vectors with sum |m_i| = s; optionally one entry equal to -1."""
    for c in _compositions(s, n):
        yield c
    if allow_neg and s >= 1:
        for p in range(n):
            for c in _compositions(s - 1, n - 1):
                yield c[:p] + (-1,) + c[p:]


def omega_shells_float(re, im, max_norm, allow_neg, eps):
    """Per shell s = 1..max_norm: (min |<lam,m>| over nonresonant m, argmin).

    Resonance is |<lam,m>| <= eps * (1 + s).  Ties keep the lex-largest m,
    which is the graded-lex smallest inside a shell.  Shells without a
    nonresonant vector give (inf, None).
    """
    n = len(re)
    out = []
    for s in range(1, max_norm + 1):
        tol = eps * (1 + s)
        best = float("inf")
        arg = None
        for m in shell_vectors(s, n, allow_neg):
            x = 0.0
            y = 0.0
            for i in range(n):
                if m[i]:
                    x += m[i] * re[i]
                    y += m[i] * im[i]
            v = math.sqrt(x * x + y * y)
            if v <= tol:
                continue
            if v < best or (v == best and m > arg):
                best = v
                arg = m
        out.append((best, arg))
    return out


def omega_shells_int(re, im, max_norm, allow_neg):
    """Exact analogue for integer (Gaussian-integer) lambda.

    Returns per shell (min squared modulus as int, argmin); resonant means 0.
    """
    n = len(re)
    out = []
    for s in range(1, max_norm + 1):
        best = -1
        arg = None
        for m in shell_vectors(s, n, allow_neg):
            x = 0
            y = 0
            for i in range(n):
                if m[i]:
                    x += m[i] * re[i]
                    y += m[i] * im[i]
            v = x * x + y * y
            if v == 0:
                continue
            if best < 0 or v < best or (v == best and m > arg):
                best = v
                arg = m
        out.append((best, arg))
    return out
