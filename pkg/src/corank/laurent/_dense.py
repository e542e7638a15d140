"""Ordinary (nonnegative-exponent) polynomials as ``{exponent tuple: coeff}`` dicts.

These helpers back division, gcd and rank computations for Laurent
polynomials once negative exponents have been cleared by a monomial shift.
A ``modulus`` of 0 means integer coefficients.
"""

from __future__ import annotations

from math import gcd as igcd


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _clean(d, modulus):
    if modulus:
        return {e: c % modulus for e, c in d.items() if c % modulus}
    return {e: c for e, c in d.items() if c}


def add(p, q, modulus=0):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return _clean(out, modulus)


def sub(p, q, modulus=0):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) - c
    return _clean(out, modulus)


def scale(p, c, modulus=0):
    return _clean({e: c * v for e, v in p.items()}, modulus)


def mul(p, q, modulus=0):
    if len(p) > len(q):
        p, q = q, p
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return _clean(out, modulus)


def power(p, n, nvars, modulus=0):
    result = {(0,) * nvars: 1}
    base = p
    while n:
        if n & 1:
            result = mul(result, base, modulus)
        n >>= 1
        if n:
            base = mul(base, base, modulus)
    return result


def const(c, nvars):
    return {(0,) * nvars: c} if c else {}


def _coeff_div(a, b, modulus):
    if modulus:
        return a * pow(b, -1, modulus) % modulus
    q, r = divmod(a, b)
    if r:
        raise NotDivisible(f"{a} is not divisible by {b}")
    return q


def exact_div(p, q, modulus=0):
    """Return ``p / q``; raise :class:`NotDivisible` if ``q`` does not divide ``p``."""
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    lq = max(q)
    cq = q[lq]
    r = dict(p)
    quot = {}
    while r:
        lr = max(r)
        shift = tuple(a - b for a, b in zip(lr, lq))
        if any(s < 0 for s in shift):
            raise NotDivisible("leading monomial not divisible")
        c = _coeff_div(r[lr], cq, modulus)
        quot[shift] = c
        for e, v in q.items():
            k = tuple(a + b for a, b in zip(e, shift))
            r[k] = r.get(k, 0) - c * v
            if modulus:
                r[k] %= modulus
            if not r[k]:
                del r[k]
    return quot


def divides(q, p, modulus=0):
    try:
        exact_div(p, q, modulus)
    except NotDivisible:
        return False
    return True


# -- multivariate gcd over Z ------------------------------------------------


def _used(p):
    used = set()
    for e in p:
        used.update(i for i, x in enumerate(e) if x)
    return used


def _int_content(p):
    g = 0
    for c in p.values():
        g = igcd(g, c)
    return g


def normalize_sign(p):
    if p and p[max(p, key=grevlex_key)] < 0:
        return {e: -c for e, c in p.items()}
    return p


def _split(p, k):
    """View ``p`` as univariate in variable ``k``: ``{degree: coefficient poly}``."""
    out = {}
    for e, c in p.items():
        d = e[k]
        base = e[:k] + (0,) + e[k + 1:]
        out.setdefault(d, {})[base] = c
    return out


def _join(u, k):
    out = {}
    for d, coeff in u.items():
        for e, c in coeff.items():
            out[e[:k] + (d,) + e[k + 1:]] = c
    return out


def content_wrt(p, k, nvars):
    g = {}
    for coeff in _split(p, k).values():
        g = poly_gcd(g, coeff, nvars)
        if len(g) == 1 and abs(next(iter(g.values()))) == 1 and not any(next(iter(g))):
            break
    return g


def _udeg(u):
    return max(u)


def _prem(a, b, k, nvars):
    db = _udeg(b)
    lcb = b[db]
    r = dict(a)
    steps = _udeg(a) - db + 1
    while r and _udeg(r) >= db:
        dr = _udeg(r)
        lcr = r[dr]
        s = dr - db
        new = {d: mul(lcb, c) for d, c in r.items()}
        for d, c in b.items():
            t = mul(lcr, c)
            new[d + s] = sub(new.get(d + s, {}), t)
        r = {d: c for d, c in new.items() if c}
        steps -= 1
    if steps > 0:
        f = power(lcb, steps, nvars)
        r = {d: mul(f, c) for d, c in r.items()}
    return r


def _subresultant_gcd(p, q, k, nvars):
    """Primitive gcd of two polynomials primitive with respect to variable ``k``."""
    a, b = _split(p, k), _split(q, k)
    if _udeg(a) < _udeg(b):
        a, b = b, a
    one = const(1, nvars)
    g = h = one
    while True:
        delta = _udeg(a) - _udeg(b)
        r = _prem(a, b, k, nvars)
        if not r:
            break
        if _udeg(r) == 0:
            return one
        denom = mul(g, power(h, delta, nvars))
        a, b = b, {d: exact_div(c, denom) for d, c in r.items()}
        g = a[_udeg(a)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exact_div(power(g, delta, nvars), power(h, delta - 1, nvars))
    res = _join(b, k)
    return exact_div(res, content_wrt(res, k, nvars))


def poly_gcd(p, q, nvars):
    """gcd over Z[x_1..x_n] with positive grevlex-leading coefficient."""
    if not p:
        return normalize_sign(dict(q))
    if not q:
        return normalize_sign(dict(p))
    up, uq = _used(p), _used(q)
    if not up and not uq:
        return const(igcd(_int_content(p), _int_content(q)), nvars)
    k = max(up | uq)
    if k not in up:
        return poly_gcd(p, content_wrt(q, k, nvars), nvars)
    if k not in uq:
        return poly_gcd(content_wrt(p, k, nvars), q, nvars)
    cp, cq = content_wrt(p, k, nvars), content_wrt(q, k, nvars)
    pp, qq = exact_div(p, cp), exact_div(q, cq)
    c = poly_gcd(cp, cq, nvars)
    return normalize_sign(mul(c, _subresultant_gcd(pp, qq, k, nvars)))
