# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; loop order matches ``_pykernels`` exactly."""

from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef list _by_degree(dict terms):
    cdef list items = []
    cdef tuple k
    cdef long s
    for k, v in terms.items():
        s = 0
        for e in k:
            s += <long>e
        items.append((s, k, v))
    items.sort(key=lambda t: t[0])
    return items


cdef inline long _deg(tuple k):
    cdef long s = 0
    for e in k:
        s += <long>e
    return s


cdef inline tuple _add(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [None] * n
    for i in range(n):
        out[i] = <long>a[i] + <long>b[i]
    return tuple(out)


def mul_terms(dict a, dict b, long N):
    cdef dict out = {}
    cdef list bl = _by_degree(b)
    cdef long lim, db
    cdef tuple ka, kb, k
    for ka, va in a.items():
        lim = N - _deg(ka)
        if lim <= 0:
            continue
        for item in bl:
            db = item[0]
            if db >= lim:
                break
            kb = item[1]
            k = _add(ka, kb)
            p = va * item[2]
            cur = out.get(k)
            if cur is not None:
                out[k] = cur + p
            else:
                out[k] = p
    return out


def apply_terms(dict d, dict f, long N, zero):
    cdef dict out = {}
    cdef list fl = _by_degree(f)
    cdef long lim, dn, ni
    cdef tuple m, n, k
    cdef Py_ssize_t i, nv
    for m, lam in d.items():
        lim = N - _deg(m)
        if lim <= 0:
            continue
        nv = len(m)
        for item in fl:
            dn = item[0]
            if dn >= lim:
                break
            if dn == 0:
                continue
            n = item[1]
            c = zero
            for i in range(nv):
                ni = n[i]
                if ni:
                    c = c + lam[i] * ni
            if not c:
                continue
            k = _add(m, n)
            p = c * item[2]
            cur = out.get(k)
            if cur is not None:
                out[k] = cur + p
            else:
                out[k] = p
    return out


def bracket_terms(dict d1, dict d2, long N, zero):
    cdef dict out = {}
    cdef list dl = _by_degree(d2)
    cdef long lim, dn, ni, mm
    cdef tuple m, n, k
    cdef list vec, cur
    cdef Py_ssize_t i, nv
    for m, lam in d1.items():
        lim = N - _deg(m)
        if lim <= 0:
            continue
        nv = len(m)
        for item in dl:
            dn = item[0]
            if dn >= lim:
                break
            n = item[1]
            mu = item[2]
            a = zero
            for i in range(nv):
                ni = n[i]
                if ni:
                    a = a + lam[i] * ni
            b = zero
            for i in range(nv):
                mm = m[i]
                if mm:
                    b = b + mu[i] * mm
            if not a and not b:
                continue
            k = _add(m, n)
            vec = [a * mu[i] - b * lam[i] for i in range(nv)]
            cur = out.get(k)
            if cur is not None:
                out[k] = [cur[i] + vec[i] for i in range(nv)]
            else:
                out[k] = vec
    return out


def smul_terms(dict f, dict d, long N):
    cdef dict out = {}
    cdef list dl = _by_degree(d)
    cdef long lim, dm
    cdef tuple k0, m, k
    cdef list vec, cur
    cdef Py_ssize_t i, nv
    for k0, a in f.items():
        lim = N - _deg(k0)
        if lim <= 0:
            continue
        nv = len(k0)
        for item in dl:
            dm = item[0]
            if dm >= lim:
                break
            m = item[1]
            lam = item[2]
            k = _add(k0, m)
            vec = [a * lam[i] for i in range(nv)]
            cur = out.get(k)
            if cur is not None:
                out[k] = [cur[i] + vec[i] for i in range(nv)]
            else:
                out[k] = vec
    return out


cdef bint _first_comp(long *c, int k, long s):
    cdef int i
    if k == 0:
        return s == 0
    c[0] = s
    for i in range(1, k):
        c[i] = 0
    return True


cdef bint _next_comp(long *c, int k):
    """Advance to the next composition in lex-descending order."""
    cdef int j, i
    cdef long tail
    if k <= 1:
        return False
    j = k - 2
    while j >= 0 and c[j] == 0:
        j -= 1
    if j < 0:
        return False
    tail = 0
    for i in range(j + 1, k):
        tail += c[i]
        c[i] = 0
    c[j] -= 1
    c[j + 1] = tail + 1
    return True


cdef inline bint _lex_gt(long *a, long *b, int n):
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return a[i] > b[i]
    return False


cdef class _Scan:
    """Shell scanner shared by the float and integer searches."""

    cdef int n
    cdef long *comp
    cdef long *m
    cdef long *arg

    def __cinit__(self, int n):
        self.n = n
        self.comp = <long *>malloc(sizeof(long) * (n + 1))
        self.m = <long *>malloc(sizeof(long) * (n + 1))
        self.arg = <long *>malloc(sizeof(long) * (n + 1))

    def __dealloc__(self):
        free(self.comp)
        free(self.m)
        free(self.arg)


def omega_shells_float(re, im, long max_norm, bint allow_neg, double eps):
    cdef int n = len(re)
    cdef int i, p, q, k
    cdef long s
    cdef double x, y, v, best, tol
    cdef bint have, ok
    cdef double *cre = <double *>malloc(sizeof(double) * n)
    cdef double *cim = <double *>malloc(sizeof(double) * n)
    cdef _Scan sc = _Scan(n)
    cdef list out = []
    for i in range(n):
        cre[i] = re[i]
        cim[i] = im[i]
    try:
        for s in range(1, max_norm + 1):
            tol = eps * (1 + s)
            best = INFINITY
            have = False
            # p == -1: all entries nonnegative; p >= 0: entry p equals -1
            for p in range(-1, n if allow_neg else 0):
                if p < 0:
                    k = n
                    ok = _first_comp(sc.comp, k, s)
                else:
                    k = n - 1
                    ok = _first_comp(sc.comp, k, s - 1)
                while ok:
                    if p < 0:
                        for i in range(n):
                            sc.m[i] = sc.comp[i]
                    else:
                        q = 0
                        for i in range(n):
                            if i == p:
                                sc.m[i] = -1
                            else:
                                sc.m[i] = sc.comp[q]
                                q += 1
                    x = 0.0
                    y = 0.0
                    for i in range(n):
                        if sc.m[i]:
                            x += sc.m[i] * cre[i]
                            y += sc.m[i] * cim[i]
                    v = sqrt(x * x + y * y)
                    if v > tol:
                        if (not have) or v < best or (v == best and _lex_gt(sc.m, sc.arg, n)):
                            best = v
                            have = True
                            for i in range(n):
                                sc.arg[i] = sc.m[i]
                    ok = _next_comp(sc.comp, k)
            if have:
                out.append((best, tuple([sc.arg[i] for i in range(n)])))
            else:
                out.append((float("inf"), None))
    finally:
        free(cre)
        free(cim)
    return out


def omega_shells_int(re, im, long max_norm, bint allow_neg):
    """Caller guarantees max_norm * max|coefficient| < 2**31."""
    cdef int n = len(re)
    cdef int i, p, q, k
    cdef long s
    cdef long long x, y, v, best
    cdef bint ok
    cdef long long *cre = <long long *>malloc(sizeof(long long) * n)
    cdef long long *cim = <long long *>malloc(sizeof(long long) * n)
    cdef _Scan sc = _Scan(n)
    cdef list out = []
    for i in range(n):
        cre[i] = re[i]
        cim[i] = im[i]
    try:
        for s in range(1, max_norm + 1):
            best = -1
            for p in range(-1, n if allow_neg else 0):
                if p < 0:
                    k = n
                    ok = _first_comp(sc.comp, k, s)
                else:
                    k = n - 1
                    ok = _first_comp(sc.comp, k, s - 1)
                while ok:
                    if p < 0:
                        for i in range(n):
                            sc.m[i] = sc.comp[i]
                    else:
                        q = 0
                        for i in range(n):
                            if i == p:
                                sc.m[i] = -1
                            else:
                                sc.m[i] = sc.comp[q]
                                q += 1
                    x = 0
                    y = 0
                    for i in range(n):
                        if sc.m[i]:
                            x += sc.m[i] * cre[i]
                            y += sc.m[i] * cim[i]
                    v = x * x + y * y
                    if v != 0:
                        if best < 0 or v < best or (v == best and _lex_gt(sc.m, sc.arg, n)):
                            best = v
                            for i in range(n):
                                sc.arg[i] = sc.m[i]
                    ok = _next_comp(sc.comp, k)
            if best >= 0:
                out.append((int(best), tuple([sc.arg[i] for i in range(n)])))
            else:
                out.append((-1, None))
    finally:
        free(cre)
        free(cim)
    return out
