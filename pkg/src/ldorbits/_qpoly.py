# Dense univariate polynomials over Q.  Coefficient lists are ascending
# (index = degree) and hold Fractions; the zero polynomial is [].
from fractions import Fraction
from math import gcd, isqrt


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def scale(a, c):
    return trim([c * x for x in a])


def divmod_(a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in trim(a)]
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] -= c * y
        r = trim(r)
    return trim(q), r


def monic(a):
    a = trim(a)
    return [x / a[-1] for x in a] if a else []


def pgcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    lead = r0[-1]
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)


def derivative(a):
    return trim([i * a[i] for i in range(1, len(a))])


def to_monic_integer(a):
    """Substitute x = y/D so a monic rational polynomial becomes monic in Z[y].

    Returns (coeffs, D) with integer ascending coefficients.
    """
    a = monic(a)
    D = 1
    for c in a:
        D = D * c.denominator // gcd(D, c.denominator)
    d = deg(a)
    out = [a[k] * D ** (d - k) for k in range(d + 1)]
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out], D


def _divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _ieval(c, x):
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def rational_roots(a):
    coeffs, D = to_monic_integer(a)
    if coeffs[0] == 0:
        roots = {Fraction(0)}
        # strip the factor y and continue on the cofactor
        k = 0
        while coeffs[k] == 0:
            k += 1
        coeffs = coeffs[k:]
    else:
        roots = set()
    if len(coeffs) > 1:
        for dv in _divisors(coeffs[0]):
            for y in (dv, -dv):
                if _ieval(coeffs, y) == 0:
                    roots.add(Fraction(y, D))
    return sorted(roots)


def has_quadratic_factor(a):
    """Exact test for a monic quadratic factor of a quartic with no rational root."""
    c, _ = to_monic_integer(a)
    assert len(c) == 5
    a0, a1, a2, a3 = c[0], c[1], c[2], c[3]
    if a0 == 0:
        return True
    for b in _divisors(a0):
        for b in (b, -b):
            e = a0 // b
            if e != b:
                num = a1 - b * a3
                if num % (e - b):
                    continue
                x = num // (e - b)
                cc = a3 - x
                if b + e + x * cc == a2:
                    return True
            elif a1 == b * a3:
                disc = a3 * a3 - 4 * (a2 - 2 * b)
                if disc >= 0 and isqrt(disc) ** 2 == disc:
                    return True
    return False


def is_squarefree(a):
    return deg(pgcd(a, derivative(a))) == 0


def irreducible_small(a):
    """Exact irreducibility over Q for degree <= 4; None above that."""
    d = deg(a)
    if d <= 1:
        return True
    if rational_roots(a):
        return False
    if d <= 3:
        return True
    if d == 4:
        return not has_quadratic_factor(a)
    return None
