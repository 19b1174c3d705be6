"""Univariate polynomial arithmetic over a prime field F_p.

Two layers live here.  Small helpers on plain Python lists (ascending
coefficients, reduced into ``range(p)``, no trailing zeros) serve the
finite-field contexts of the point counter.  The numba kernels at the bottom
run distinct-degree factorization on int64 arrays and back the degree-pattern
sieve of :func:`hypercm.polycore.irreducible_over_Q`, where degrees reach the
low hundreds.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def normalize(a, p):
    out = [c % p for c in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(a):
    return len(a) - 1


def add(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def sub(a, b, p):
    return add(a, [-c for c in b], p)


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return normalize(out, p)


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero mod p")
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        while a and a[-1] == 0:
            a.pop()
    return normalize(q, p), a


def rem(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def gcd(a, b, p):
    a, b = normalize(a, p), normalize(b, p)
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p) if a else []


def derivative(a, p):
    return normalize([i * a[i] for i in range(1, len(a))], p)


def powmod(base, e, mod, p):
    result = [1]
    base = rem(base, mod, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), mod, p)
        base = rem(mul(base, base, p), mod, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p):
    """Rabin's test for a monic polynomial ``f`` over F_p."""
    f = normalize(f, p)
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in _prime_factors(n):
        h = powmod(x, p ** (n // r), f, p)
        if len(gcd(sub(h, x, p), f, p)) > 1:
            return False
    return not sub(powmod(x, p**n, f, p), x, p)


def smallest_irreducible(p, k):
    """Lexicographically smallest monic irreducible of degree ``k`` over F_p.

    Candidates ``x^k + c_{k-1}x^{k-1} + ... + c_0`` are ordered by the integer
    ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.
    """
    if k == 1:
        return [0, 1]
    for code in range(p**k):
        coeffs = []
        for _ in range(k):
            coeffs.append(code % p)
            code //= p
        cand = coeffs + [1]
        if cand[0] and is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


# numba kernels: arrays hold ascending coefficients, ``n`` tracks length


@njit(cache=True)
def _trim(a, n):
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return n


@njit(cache=True)
def _polrem(a, na, b, nb, p):
    # in place: a <- a mod b, b monic-able; returns new length of a
    inv = 1
    lc = b[nb - 1]
    # modular inverse by Fermat
    e = p - 2
    base = lc % p
    while e > 0:
        if e & 1:
            inv = inv * base % p
        base = base * base % p
        e >>= 1
    while na >= nb:
        c = a[na - 1] * inv % p
        shift = na - nb
        if c != 0:
            for j in range(nb):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
        a[na - 1] = 0
        na = _trim(a, na - 1)
    return na


@njit(cache=True)
def _mulmod(a, na, b, nb, f, nf, p, out):
    tmp = np.zeros(na + nb, dtype=np.int64)
    for i in range(na):
        ai = a[i]
        if ai != 0:
            for j in range(nb):
                tmp[i + j] = (tmp[i + j] + ai * b[j]) % p
    nt = _trim(tmp, na + nb - 1 if na + nb > 0 else 0)
    nt = _polrem(tmp, nt, f, nf, p)
    for i in range(out.shape[0]):
        out[i] = 0
    for i in range(nt):
        out[i] = tmp[i]
    return nt


@njit(cache=True)
def _powmod(base, nbase, e, f, nf, p):
    size = max(nf, nbase) + 1
    result = np.zeros(size, dtype=np.int64)
    result[0] = 1
    nr = 1
    b = np.zeros(size, dtype=np.int64)
    for i in range(nbase):
        b[i] = base[i]
    nb = _polrem(b, nbase, f, nf, p)
    tmp = np.zeros(size, dtype=np.int64)
    while e > 0:
        if e & 1:
            nr = _mulmod(result, nr, b, nb, f, nf, p, tmp)
            for i in range(size):
                result[i] = tmp[i]
        e >>= 1
        if e > 0:
            nb = _mulmod(b, nb, b, nb, f, nf, p, tmp)
            for i in range(size):
                b[i] = tmp[i]
    return result, nr


@njit(cache=True)
def _gcd(a, na, b, nb, p):
    x = a.copy()
    y = b.copy()
    nx, ny = na, nb
    while ny > 0:
        nx = _polrem(x, nx, y, ny, p)
        x, y = y, x
        nx, ny = ny, nx
    return x, nx


@njit(cache=True)
def _divexact(a, na, b, nb, p):
    lc = b[nb - 1]
    inv = 1
    e = p - 2
    base = lc % p
    while e > 0:
        if e & 1:
            inv = inv * base % p
        base = base * base % p
        e >>= 1
    rem = a.copy()
    nq = na - nb + 1
    q = np.zeros(a.shape[0], dtype=np.int64)
    nr = na
    while nr >= nb:
        c = rem[nr - 1] * inv % p
        shift = nr - nb
        q[shift] = c
        for j in range(nb):
            rem[shift + j] = (rem[shift + j] - c * b[j]) % p
        nr = _trim(rem, nr - 1)
    return q, _trim(q, nq)


@njit(cache=True)
def _ddf_degrees(f, p):
    """Degrees of the irreducible factors of a squarefree monic ``f`` mod p.

    Returns an array ``counts`` with ``counts[d]`` factors of degree ``d``.
    """
    nf = f.shape[0]
    n = nf - 1
    counts = np.zeros(n + 1, dtype=np.int64)
    rem = f.copy()
    nrem = nf
    h = np.zeros(nf + 1, dtype=np.int64)
    h[1] = 1
    nh = 2
    d = 1
    while 2 * d <= nrem - 1:
        h, nh = _powmod(h, nh, p, rem, nrem, p)
        # g = gcd(rem, h - x)
        hx = np.zeros(max(nh, 2) + 1, dtype=np.int64)
        for i in range(nh):
            hx[i] = h[i]
        hx[1] = (hx[1] - 1) % p
        nhx = _trim(hx, max(nh, 2))
        g, ng = _gcd(rem, nrem, hx, nhx, p)
        if ng > 1:
            counts[d] += (ng - 1) // d
            q, nq = _divexact(rem, nrem, g, ng, p)
            rem = np.zeros(nq, dtype=np.int64)
            for i in range(nq):
                rem[i] = q[i]
            nrem = nq
            h2 = h.copy()
            nh = _polrem(h2, nh, rem, nrem, p)
            h = h2
        d += 1
    if nrem > 1:
        counts[nrem - 1] += 1
    return counts


def factor_degrees(f, p):
    """Multiset of irreducible-factor degrees of squarefree ``f`` (list of ints) mod p."""
    f = monic(normalize(f, p), p)
    counts = _ddf_degrees(np.array(f, dtype=np.int64), p)
    out = []
    for d, c in enumerate(counts):
        out.extend([d] * int(c))
    return out
