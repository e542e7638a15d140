"""Buchberger's algorithm over GF(p) and QQ, and Laurent ideal tests.

A Laurent ideal ``I`` in ``k[x^{±1}]`` is handled by clearing generators to
ordinary polynomials and saturating with one auxiliary variable ``u``:
``I k[x^{±1}] ∩ k[x] = (I, 1 - u x_1 ... x_n) ∩ k[x]``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .laurent import LaurentPoly
from .laurent._dense import grevlex_key

AUX = "u_"


def field_name(modulus: int) -> str:
    return f"GF({modulus})" if modulus else "QQ"


@dataclass(frozen=True)
class Ideal:
    """Ideal of a Laurent ring over GF(p) (``modulus = p``) or QQ (``modulus = 0``)."""

    variables: tuple[str, ...]
    modulus: int
    generators: tuple[LaurentPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        gens = []
        for g in self.generators:
            if g.variables != self.variables:
                g = g.with_variables(self.variables)
            if g.modulus != self.modulus:
                g = g.reduce_mod(self.modulus) if self.modulus else g.lift()
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def field(self):
        return field_name(self.modulus)

    def nonzero_generators(self):
        return [g for g in self.generators if g]

    def to_json(self):
        return {"field": self.field, "variables": list(self.variables),
                "generators": [str(g) for g in self.generators]}


class _Field:
    def __init__(self, modulus):
        self.p = modulus

    def conv(self, c):
        return c % self.p if self.p else Fraction(c)

    def inv(self, c):
        return pow(c, -1, self.p) if self.p else 1 / c

    def norm(self, c):
        return c % self.p if self.p else c


def _monic(f, F):
    lm = max(f, key=grevlex_key)
    inv = F.inv(f[lm])
    return {e: F.norm(c * inv) for e, c in f.items()}


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_mul(f, c, shift, g, F):
    """``f - c * x^shift * g`` in place."""
    for e, v in g.items():
        k = tuple(a + b for a, b in zip(e, shift))
        val = F.norm(f.get(k, 0) - c * v)
        if val:
            f[k] = val
        else:
            f.pop(k, None)


def _reduce(f, basis, lms, F):
    """Full reduction of ``f`` modulo monic ``basis`` (with leading monomials ``lms``)."""
    f = dict(f)
    rem = {}
    while f:
        lm = max(f, key=grevlex_key)
        c = f[lm]
        for g, glm in zip(basis, lms):
            if _divides(glm, lm):
                _sub_mul(f, c, tuple(a - b for a, b in zip(lm, glm)), g, F)
                break
        else:
            rem[lm] = c
            del f[lm]
    return rem


def _spoly(f, fl, g, gl, F):
    l = _lcm(fl, gl)
    out = {}
    for e, c in f.items():
        out[tuple(a + b - x for a, b, x in zip(e, l, fl))] = c
    _sub_mul(out, 1, tuple(a - b for a, b in zip(l, gl)), g, F)
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    variables: tuple[str, ...]
    modulus: int
    basis: tuple[dict, ...]
    order: str = "grevlex"
    saturated: bool = False

    @property
    def leading_monomials(self):
        return [max(g, key=grevlex_key) for g in self.basis]

    def is_whole_ring(self) -> bool:
        return any(len(g) == 1 and not any(next(iter(g))) for g in self.basis)

    def reduce(self, f: dict) -> dict:
        return _reduce(f, list(self.basis), self.leading_monomials, _Field(self.modulus))

    def to_strings(self):
        return [format_dense(g, self.variables, self.modulus) for g in self.basis]

    def to_json(self):
        return {"field": field_name(self.modulus), "order": self.order,
                "variables": list(self.variables), "basis": self.to_strings(),
                "contains_one": self.is_whole_ring()}


def format_dense(f: dict, variables, modulus=0) -> str:
    if not f:
        return "0"
    if not modulus:
        den = 1
        for c in f.values():
            den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
        ints = {e: int(Fraction(c) * den) for e, c in f.items()}
        text = str(LaurentPoly(ints, variables))
        return text if den == 1 else f"({text})/{den}"
    return str(LaurentPoly({e: int(c) for e, c in f.items()}, variables, modulus))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def buchberger(polys: Sequence[dict], nvars: int, modulus: int) -> list[dict]:
    """Reduced Groebner basis (grevlex) of the ideal generated by ``polys``.

    Pairs are processed by lcm degree, ties broken by index; pairs with
    coprime leading monomials are skipped. Stops early with ``[1]`` once a
    nonzero constant appears.
    """
    F = _Field(modulus)
    one = {(0,) * nvars: F.conv(1)}
    G: list[dict] = []
    lms: list[tuple] = []
    pairs: list = []

    def add(h):
        h = _monic(h, F)
        lm = max(h, key=grevlex_key)
        if not any(lm):
            return True
        idx = len(G)
        G.append(h)
        lms.append(lm)
        for i in range(idx):
            l = _lcm(lms[i], lm)
            heapq.heappush(pairs, (sum(l), idx, i))
        return False

    for p in polys:
        f = {e: F.conv(c) for e, c in p.items()}
        f = {e: c for e, c in f.items() if c}
        if f:
            f = _reduce(f, G, lms, F)
            if f and add(f):
                return [one]
    while pairs:
        _, j, i = heapq.heappop(pairs)
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            continue
        s = _spoly(G[i], lms[i], G[j], lms[j], F)
        h = _reduce(s, G, lms, F)
        if h and add(h):
            return [one]
    # minimize, then interreduce
    keep = []
    for i, lm in enumerate(lms):
        if any(_divides(lms[j], lm) and (lms[j] != lm or j < i)
               for j in range(len(G)) if j != i):
            continue
        keep.append(i)
    minimal = [G[i] for i in keep]
    mlms = [lms[i] for i in keep]
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        olms = mlms[:k] + mlms[k + 1:]
        tail = dict(g)
        lm = mlms[k]
        head = tail.pop(lm)
        r = _reduce(tail, others, olms, F)
        r[lm] = head
        reduced.append(_monic(r, F))
    reduced.sort(key=lambda g: grevlex_key(max(g, key=grevlex_key)), reverse=True)
    return reduced


def clear_denominators(p: LaurentPoly) -> dict:
    """Multiply by the smallest monomial making every exponent nonnegative."""
    m = p.min_exponents()
    shift = tuple(min(x, 0) for x in m)
    return {tuple(a - b for a, b in zip(e, shift)): c for e, c in p.terms.items()}


def _strip_monomial(p: LaurentPoly) -> dict:
    return p.to_polynomial()[1]


def _aux_name(variables):
    name = AUX
    while name in variables:
        name += "_"
    return name


def _saturated_input(I: Ideal):
    n = len(I.variables)
    polys = [tuple_extend(_strip_monomial(g), 0) for g in I.nonzero_generators()]
    rab = {(0,) * (n + 1): 1, (1,) * (n + 1): -1}
    return polys + [rab]


def tuple_extend(f: dict, value=0) -> dict:
    return {e + (value,): c for e, c in f.items()}


def groebner_basis(I: Ideal, saturate: bool = False) -> GroebnerBasis:
    """Reduced grevlex basis of ``I`` (cleared to ordinary polynomials).

    With ``saturate`` the auxiliary variable (ordered last) makes the basis
    describe the Laurent ideal.
    """
    if saturate:
        variables = I.variables + (_aux_name(I.variables),)
        polys = _saturated_input(I) if I.nonzero_generators() else []
    else:
        variables = I.variables
        polys = [clear_denominators(g) for g in I.nonzero_generators()]
    basis = buchberger(polys, len(variables), I.modulus)
    return GroebnerBasis(variables, I.modulus, tuple(basis), saturated=saturate)


def normal_form(p: LaurentPoly, B: GroebnerBasis) -> dict:
    """Remainder of ``p`` (cleared of negative exponents) modulo ``B``."""
    f = clear_denominators(p)
    if B.saturated:
        f = tuple_extend(f, 0)
    F = _Field(B.modulus)
    f = {e: F.conv(c) for e, c in f.items()}
    return B.reduce({e: c for e, c in f.items() if c})


def ideal_is_proper_laurent(I: Ideal) -> bool:
    """True iff ``I`` is not the whole Laurent ring."""
    return not groebner_basis(I, saturate=True).is_whole_ring()


def laurent_contains(I_basis: GroebnerBasis, p: LaurentPoly) -> bool:
    return not normal_form(p, I_basis)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    """Equality of the Laurent ideals generated by ``I`` and ``J``."""
    if I.variables != J.variables or I.modulus != J.modulus:
        raise TypeError("ideals live in different rings")
    BI = groebner_basis(I, saturate=True)
    BJ = groebner_basis(J, saturate=True)
    return (all(laurent_contains(BJ, g) for g in I.nonzero_generators())
            and all(laurent_contains(BI, g) for g in J.nonzero_generators()))
