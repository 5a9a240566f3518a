# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernels on packed base-p field elements.

Mirrors rackrs._kernels_py exactly; see that module for the contract.
Packed values stay below 2**20 so 64-bit locals cover every intermediate.
"""

BACKEND_NAME = "cython"


cdef void _digits_c(unsigned long long v, int p, int n, long long *out):
    cdef int i
    for i in range(n):
        out[i] = v % p
        v //= p


cdef unsigned long long _pack_c(long long *digits, int p, int n):
    cdef unsigned long long v = 0
    cdef int i
    for i in range(n - 1, -1, -1):
        v = v * p + digits[i]
    return v


cpdef unsigned long long pp_add(unsigned long long a, unsigned long long b, int p):
    if p == 2:
        return a ^ b
    cdef unsigned long long out = 0, mult = 1
    while a or b:
        out += ((a + b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return out


cpdef unsigned long long pp_neg(unsigned long long a, int p):
    if p == 2:
        return a
    cdef unsigned long long out = 0, mult = 1
    cdef unsigned long long d
    while a:
        d = a % p
        if d:
            out += (p - d) * mult
        a //= p
        mult *= p
    return out


cpdef unsigned long long pp_sub(unsigned long long a, unsigned long long b, int p):
    if p == 2:
        return a ^ b
    return pp_add(a, pp_neg(b, p), p)


cpdef unsigned long long pp_mul(unsigned long long a, unsigned long long b, int p,
                                unsigned long long mod, int t):
    if a == 0 or b == 0:
        return 0
    cdef unsigned long long acc, aa
    cdef int d, i, bl
    cdef long long da[24]
    cdef long long db[24]
    cdef long long dm[25]
    cdef long long conv[48]
    cdef long long lead
    if p == 2:
        acc = 0
        aa = a
        while b:
            if b & 1:
                acc ^= aa
            b >>= 1
            aa <<= 1
        bl = 0
        aa = acc
        while aa:
            bl += 1
            aa >>= 1
        for d in range(bl - 1, t - 1, -1):
            if (acc >> d) & 1:
                acc ^= mod << (d - t)
        return acc
    _digits_c(a, p, t, da)
    _digits_c(b, p, t, db)
    for i in range(2 * t - 1):
        conv[i] = 0
    for i in range(t):
        if da[i]:
            for d in range(t):
                conv[i + d] += da[i] * db[d]
    _digits_c(mod, p, t + 1, dm)
    for d in range(2 * t - 2, t - 1, -1):
        lead = conv[d] % p
        if lead:
            for i in range(t + 1):
                conv[d - t + i] -= lead * dm[i]
    for i in range(t):
        conv[i] = conv[i] % p
        if conv[i] < 0:
            conv[i] += p
    return _pack_c(conv, p, t)


cpdef unsigned long long pp_pow(unsigned long long a, unsigned long long e, int p,
                                unsigned long long mod, int t):
    if e == 0:
        return 1
    if a == 0:
        return 0
    cdef unsigned long long acc = 1, base = a
    while e:
        if e & 1:
            acc = pp_mul(acc, base, p, mod, t)
        e >>= 1
        if e:
            base = pp_mul(base, base, p, mod, t)
    return acc


def build_exp_log(int p, int t, unsigned long long mod, unsigned long long gen):
    """Power and discrete-log tables; ValueError if gen is not primitive."""
    cdef unsigned long long size = 1
    cdef int i
    for i in range(t):
        size *= p
    cdef unsigned long long order = size - 1
    cdef list exp = [0] * order
    cdef list log = [-1] * size
    cdef bint gen_is_x = gen == p
    cdef unsigned long long cur = 1, lead, red, scaled
    cdef unsigned long long j
    cdef long long rd[24]
    for j in range(order):
        exp[j] = cur
        if log[cur] != -1:
            raise ValueError("generator is not primitive")
        log[cur] = j
        if gen_is_x:
            cur *= p
            if cur >= size:
                lead = cur // size
                cur -= lead * size
                red = mod - size
                if p == 2:
                    cur ^= red
                else:
                    if lead != 1:
                        _digits_c(red, p, t, rd)
                        for i in range(t):
                            rd[i] = (rd[i] * lead) % p
                        red = _pack_c(rd, p, t)
                    cur = pp_sub(cur, red, p)
        else:
            cur = pp_mul(cur, gen, p, mod, t)
    return exp, log


def horner(coeffs, unsigned long long x, int p, unsigned long long mod, int t):
    cdef unsigned long long acc = 0
    cdef Py_ssize_t i
    for i in range(len(coeffs) - 1, -1, -1):
        acc = pp_add(pp_mul(acc, x, p, mod, t), coeffs[i], p)
    return acc


def horner_tab(coeffs, unsigned long long x, int p, list exp, list log):
    cdef unsigned long long order = len(exp)
    cdef long long lx = log[x]
    cdef unsigned long long acc = 0
    cdef unsigned long long c
    cdef Py_ssize_t i
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if acc and x:
            acc = exp[(log[acc] + lx) % order]
        else:
            acc = 0
        if p == 2:
            acc ^= c
        else:
            acc = pp_add(acc, c, p)
    return acc
