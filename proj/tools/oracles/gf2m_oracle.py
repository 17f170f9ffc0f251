"""Unoptimized reference arithmetic for binary fields and curves.

Polynomials are plain Python integers (bit i is the coefficient of z^i).
Nothing here shares code with the C++ library; the scripts in this
directory use it to produce frozen test vectors.
"""

import hashlib


class Field:
    def __init__(self, m, poly):
        self.m = m
        self.poly = poly
        self.mask = (1 << m) - 1

    def reduce(self, v):
        m = self.m
        while v.bit_length() > m:
            v ^= self.poly << (v.bit_length() - 1 - m)
        return v

    def mul(self, a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        return self.reduce(r)

    def sq(self, a):
        return self.mul(a, a)

    def pow2k(self, a, k):
        for _ in range(k):
            a = self.sq(a)
        return a

    def inv(self, a):
        # extended Euclid over GF(2)[z]
        if a == 0:
            raise ZeroDivisionError
        r0, r1 = self.poly, a
        s0, s1 = 0, 1
        while r1:
            q = 0
            while r0.bit_length() >= r1.bit_length() and r0:
                sh = r0.bit_length() - r1.bit_length()
                q ^= 1 << sh
                r0 ^= r1 << sh
            r0, r1 = r1, r0
            s0, s1 = s1, s0 ^ clmul(q, s1)
        assert r0 == 1
        return self.reduce(s0)

    def sqrt(self, a):
        return self.pow2k(a, self.m - 1)

    def trace(self, a):
        t, x = 0, a
        for _ in range(self.m):
            t ^= x
            x = self.sq(x)
        assert t in (0, 1)
        return t

    def qs(self, c):
        """Root r of r^2 + r = c with coefficient 0 cleared (odd m)."""
        assert self.m % 2 == 1
        if self.trace(c):
            raise ValueError("trace 1")
        r, x = 0, c
        for _ in range((self.m - 1) // 2 + 1):
            r ^= x
            x = self.sq(self.sq(x))
        if r & 1:
            r ^= 1
        assert self.sq(r) ^ r == c
        return r


def clmul(a, b):
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


class Curve:
    """y^2 + xy = x^3 + a x^2 + b in plain (x, y) affine coordinates."""

    INF = None

    def __init__(self, F, a, b):
        self.F, self.a, self.b = F, a, b

    def on_curve(self, P):
        if P is None:
            return True
        F = self.F
        x, y = P
        return F.sq(y) ^ F.mul(x, y) == F.mul(F.sq(x), x) ^ F.mul(self.a, F.sq(x)) ^ self.b

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        return (x, x ^ y)

    def add(self, P, Q):
        F = self.F
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 ^ y2 == x2:  # Q = -P
                return None
            if x1 == 0:
                return None
            s = x1 ^ F.mul(y1, F.inv(x1))
            x3 = F.sq(s) ^ s ^ self.a
            y3 = F.sq(x1) ^ F.mul(s ^ 1, x3)
            return (x3, y3)
        s = F.mul(y1 ^ y2, F.inv(x1 ^ x2))
        x3 = F.sq(s) ^ s ^ x1 ^ x2 ^ self.a
        y3 = F.mul(s, x1 ^ x3) ^ x3 ^ y1
        return (x3, y3)

    def mul(self, P, k):
        if k < 0:
            return self.mul(self.neg(P), -k)
        R = None
        while k:
            if k & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            k >>= 1
        return R

    def points(self):
        F = self.F
        pts = [None, (0, F.sqrt(self.b))]
        for x in range(1, 1 << F.m):
            rhs = F.sq(x) ^ self.a ^ F.mul(self.b, F.sq(F.inv(x)))
            if F.trace(rhs):
                continue
            lam = F.qs(rhs)
            for l in (lam, lam ^ 1):
                pts.append((x, F.mul(l ^ x, x)))
        return pts

    def compress(self, P):
        F = self.F
        nbytes = (F.m + 1 + 7) // 8
        if P is None:
            v = 1 << F.m
        else:
            x, y = P
            if x == 0:
                v = 0
            else:
                lam = x ^ F.mul(y, F.inv(x))
                v = x | ((lam & 1) << F.m)
        return v.to_bytes(nbytes, "little")[::-1].hex()


def sw_encode(C, w, t):
    """Direct transliteration of the optimized characteristic-2 SW map,
    returning an (x, y) point."""
    F, a, b = C.F, C.a, C.b
    d = F.sq(t) ^ t ^ 1
    dinv = F.inv(d)
    ts = [F.mul(t, dinv), F.mul(1 ^ t, dinv), F.mul(F.mul(t, 1 ^ t), dinv)]
    tinv = [F.inv(v) for v in ts]
    c = F.sq(w) ^ w ^ a
    if c == 0:
        return (0, F.sqrt(b))
    cinv = F.inv(c)
    for j in range(3):
        x = F.mul(ts[j], c)
        xinv = F.mul(tinv[j], cinv)
        h = F.mul(F.sq(xinv), b) ^ x ^ a
        if F.trace(h) == 0:
            lam = F.qs(h) ^ x ^ (w & 1)
            y = F.mul(lam ^ x, x)
            assert C.on_curve((x, y))
            return (x, y)
    raise AssertionError("no branch satisfied")


def element_hash(F, key, data):
    m = F.m
    if m <= 256:
        h = hashlib.blake2s(data, key=key).digest()
    else:
        h = hashlib.blake2b(data, key=key).digest()
    v = int.from_bytes(h, "little")
    return v & F.mask


FIELDS = {
    13: (1 << 13) | (1 << 4) | (1 << 3) | (1 << 1) | 1,
    163: (1 << 163) | (1 << 7) | (1 << 6) | (1 << 3) | 1,
    233: (1 << 233) | (1 << 74) | 1,
}
