"""Pure-Python arithmetic kernels on packed base-p field elements.

An element of F_{p^t} is one unsigned integer whose base-p digits are the
coefficients of its polynomial representation, constant term least
significant.  `mod` arguments are the field modulus packed the same way,
leading monic term included.  These functions are the hot inner loops;
rackrs._kernels_cy is a compiled twin with identical behavior and
rackrs.kernels picks one at import time.
"""

BACKEND_NAME = "pure"


def _digits(v, p, n):
    out = [0] * n
    i = 0
    while v:
        out[i] = v % p
        v //= p
        i += 1
    return out


def _pack(digits, p):
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def pp_add(a, b, p):
    if p == 2:
        return a ^ b
    out = 0
    mult = 1
    while a or b:
        out += ((a + b) % p) * mult
        a //= p
        b //= p
        mult *= p
    return out


def pp_neg(a, p):
    if p == 2:
        return a
    out = 0
    mult = 1
    while a:
        d = a % p
        if d:
            out += (p - d) * mult
        a //= p
        mult *= p
    return out


def pp_sub(a, b, p):
    if p == 2:
        return a ^ b
    return pp_add(a, pp_neg(b, p), p)


def pp_mul(a, b, p, mod, t):
    if a == 0 or b == 0:
        return 0
    if p == 2:
        acc = 0
        aa = a
        while b:
            if b & 1:
                acc ^= aa
            b >>= 1
            aa <<= 1
        for d in range(acc.bit_length() - 1, t - 1, -1):
            if (acc >> d) & 1:
                acc ^= mod << (d - t)
        return acc
    da = _digits(a, p, t)
    db = _digits(b, p, t)
    conv = [0] * (2 * t - 1)
    for i, ca in enumerate(da):
        if ca:
            for j, cb in enumerate(db):
                conv[i + j] += ca * cb
    dm = _digits(mod, p, t + 1)
    for d in range(2 * t - 2, t - 1, -1):
        lead = conv[d] % p
        if lead:
            for i in range(t + 1):
                conv[d - t + i] -= lead * dm[i]
    return _pack([c % p for c in conv[:t]], p)


def pp_pow(a, e, p, mod, t):
    if e == 0:
        return 1
    if a == 0:
        return 0
    acc = 1
    base = a
    while e:
        if e & 1:
            acc = pp_mul(acc, base, p, mod, t)
        e >>= 1
        if e:
            base = pp_mul(base, base, p, mod, t)
    return acc


def build_exp_log(p, t, mod, gen):
    """Power and discrete-log tables for the cyclic group generated by gen.

    Returns (exp, log): exp[i] = gen^i for i in [0, p^t - 1), log[v] is the
    exponent of v (log[0] = -1).  Raises ValueError if gen does not reach
    every nonzero element, i.e. is not primitive.
    """
    size = p ** t
    order = size - 1
    exp = [0] * order
    log = [-1] * size
    gen_is_x = gen == p
    cur = 1
    for i in range(order):
        exp[i] = cur
        if log[cur] != -1:
            raise ValueError("generator is not primitive")
        log[cur] = i
        if gen_is_x:
            # multiply by x: digit shift then one reduction step
            cur *= p
            if cur >= size:
                lead = cur // size
                cur -= lead * size
                red = mod - size  # low digits of the modulus
                if p == 2:
                    cur ^= red
                else:
                    if lead != 1:
                        red = _pack([(d * lead) % p
                                     for d in _digits(red, p, t)], p)
                    cur = pp_sub(cur, red, p)
        else:
            cur = pp_mul(cur, gen, p, mod, t)
    return exp, log


def horner(coeffs, x, p, mod, t):
    acc = 0
    for c in reversed(coeffs):
        acc = pp_add(pp_mul(acc, x, p, mod, t), c, p)
    return acc


def horner_tab(coeffs, x, p, exp, log):
    order = len(exp)
    lx = log[x]
    acc = 0
    if p == 2:
        for c in reversed(coeffs):
            if acc and x:
                acc = exp[(log[acc] + lx) % order]
            else:
                acc = 0
            acc ^= c
        return acc
    for c in reversed(coeffs):
        if acc and x:
            acc = exp[(log[acc] + lx) % order]
        else:
            acc = 0
        acc = pp_add(acc, c, p)
    return acc
