"""Multivariate Laurent polynomials with exact integer or GF(p) coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from . import _dense
from ._dense import NotDivisible, grevlex_key


class RingMismatch(TypeError):
    """Operands live in different coefficient rings or variable sets."""


def ring_name(modulus: int) -> str:
    return f"GF({modulus})" if modulus else "ZZ"


class LaurentPoly:
    """Element of ``R[t_1^{±1}, ..., t_n^{±1}]`` with ``R = Z`` or ``GF(p)``.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    coefficients. Instances are treated as immutable.
    """

    __slots__ = ("variables", "modulus", "terms")

    def __init__(self, terms: Mapping[tuple, int] | None = None,
                 variables: Sequence[str] = (), modulus: int = 0):
        self.variables = tuple(variables)
        self.modulus = modulus
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {self.variables}")
            if modulus:
                c %= modulus
            if c:
                clean[e] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c, variables=(), modulus=0):
        return cls({(0,) * len(variables): c}, variables, modulus)

    @classmethod
    def var(cls, name, variables, modulus=0):
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls({e: 1}, variables, modulus)

    @classmethod
    def monomial(cls, exps, coeff=1, variables=(), modulus=0):
        if isinstance(exps, Mapping):
            unknown = set(exps) - set(variables)
            if unknown:
                raise ValueError(f"unknown variables {sorted(unknown)}")
            exps = tuple(exps.get(v, 0) for v in variables)
        return cls({tuple(exps): coeff}, variables, modulus)

    def _like(self, terms):
        return LaurentPoly(terms, self.variables, self.modulus)

    @property
    def ring(self) -> str:
        return ring_name(self.modulus)

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def is_unit(self):
        """Units are signed monomials (any nonzero scalar times a monomial mod p)."""
        if len(self.terms) != 1:
            return False
        c = next(iter(self.terms.values()))
        return bool(self.modulus) or c in (1, -1)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.variables != self.variables or other.modulus != self.modulus:
                raise RingMismatch(
                    f"{self.ring}{list(self.variables)} vs {other.ring}{list(other.variables)}")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other, self.variables, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._like(_dense.add(self.terms, other.terms, self.modulus))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._like(_dense.sub(self.terms, other.terms, self.modulus))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._like(_dense.mul(self.terms, other.terms, self.modulus))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError(f"cannot invert non-unit {self}")
            return self.unit_inverse() ** (-n)
        result = LaurentPoly.const(1, self.variables, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def unit_inverse(self):
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        (e, c), = self.terms.items()
        inv = pow(c, -1, self.modulus) if self.modulus else c
        return self._like({tuple(-x for x in e): inv})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other, self.variables, self.modulus)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.variables == other.variables and self.modulus == other.modulus
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, self.modulus, frozenset(self.terms.items())))

    # -- structure ------------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending graded reverse lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def leading_coefficient(self):
        return self.sorted_terms()[0][1] if self.terms else 0

    def min_exponents(self):
        n = len(self.variables)
        if not self.terms:
            return (0,) * n
        return tuple(min(e[i] for e in self.terms) for i in range(n))

    def shift(self, exps):
        """Multiply by the monomial with exponent vector ``exps``."""
        return self._like({tuple(a + b for a, b in zip(e, exps)): c
                           for e, c in self.terms.items()})

    def to_polynomial(self):
        """Return ``(shift, dense)`` with ``self = x^shift * dense`` and no variable dividing ``dense``."""
        m = self.min_exponents()
        return m, {tuple(a - b for a, b in zip(e, m)): c for e, c in self.terms.items()}

    def reduce_mod(self, p: int):
        if self.modulus and self.modulus != p:
            raise RingMismatch(f"cannot reduce {self.ring} element mod {p}")
        return LaurentPoly(self.terms, self.variables, p)

    def lift(self):
        """Integer representatives of a GF(p) element, in ``[0, p)``."""
        return LaurentPoly(self.terms, self.variables, 0)

    def with_variables(self, variables):
        """Re-embed into a ring over ``variables`` (must contain every variable used)."""
        variables = tuple(variables)
        idx = []
        for i, v in enumerate(self.variables):
            if v in variables:
                idx.append(variables.index(v))
            elif any(e[i] for e in self.terms):
                raise ValueError(f"variable {v!r} is used but missing from {variables}")
            else:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for i, j in enumerate(idx):
                if j is not None:
                    new[j] = e[i]
            out[tuple(new)] = c
        return LaurentPoly(out, variables, self.modulus)

    def substitute(self, images: Mapping[str, "LaurentPoly"]):
        """Apply the ring map sending each variable to a unit in a common target ring."""
        targets = [images[v] for v in self.variables]
        if not targets:
            return self
        tv, tm = targets[0].variables, targets[0].modulus
        for img in targets:
            if not img.is_unit():
                raise ValueError(f"image {img} is not a Laurent unit")
        result = LaurentPoly({}, tv, tm)
        for e, c in self.terms.items():
            term = LaurentPoly.const(c, tv, tm)
            for img, k in zip(targets, e):
                if k:
                    term = term * img ** k
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Fraction | int]) -> Fraction:
        """Exact value at a point with nonzero rational coordinates (integer ring only)."""
        vals = []
        for v in self.variables:
            if v not in point:
                raise KeyError(f"no value assigned to {v!r}")
            x = Fraction(point[v])
            if x == 0:
                raise ZeroDivisionError(f"{v} = 0 is not allowed in a Laurent ring")
            vals.append(x)
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for x, k in zip(vals, e):
                term *= x ** k
            total += term
        return total

    # -- printing -------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}"
                            for v, k in zip(self.variables, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r}, {self.variables}, {self.ring})"


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


class PolySyntaxError(ValueError):
    pass


def parse_poly(text: str, variables: Sequence[str], modulus: int = 0) -> LaurentPoly:
    """Parse text like ``-2*a^2*c + a - 1`` or ``a^-1*(c - 1)``."""
    variables = tuple(variables)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character at column {pos + 1}: {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        sign = 1
        if peek() in (("op", "-"), ("op", "+")):
            sign = -1 if take()[1] == "-" else 1
        result = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            result = result + t if op == "+" else result - t
        return result

    def term():
        result = factor()
        while peek() == ("op", "*"):
            take()
            result = result * factor()
        return result

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            neg = False
            if peek() == ("op", "-"):
                take()
                neg = True
            paren = peek() == ("op", "(")
            if paren:
                take()
                if peek() == ("op", "-"):
                    take()
                    neg = not neg
            kind, k = take()
            if kind != "num":
                raise PolySyntaxError(f"expected integer exponent in {text!r}")
            if paren and take() != ("op", ")"):
                raise PolySyntaxError(f"unbalanced parenthesis in {text!r}")
            base = base ** (-k if neg else k)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return LaurentPoly.const(val, variables, modulus)
        if kind == "var":
            if val not in variables:
                raise PolySyntaxError(f"unknown variable {val!r} (ring variables {list(variables)})")
            return LaurentPoly.var(val, variables, modulus)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise PolySyntaxError(f"unbalanced parenthesis in {text!r}")
            return inner
        raise PolySyntaxError(f"unexpected token {val!r} in {text!r}")

    if tokens[0][0] == "end":
        raise PolySyntaxError("empty polynomial")
    result = expr()
    if peek()[0] != "end":
        raise PolySyntaxError(f"trailing input in {text!r}")
    return result


# -- unit normalization, division, gcd ------------------------------------------


def unit_normalize(p: LaurentPoly):
    """Split ``p = unit * primitive``.

    ``primitive`` is an ordinary polynomial that no variable divides, with
    positive leading coefficient in grevlex order (monic over GF(p)).
    Integer content is left in the primitive part.
    """
    if not p:
        raise ValueError("cannot unit-normalize zero")
    shift, dense = p.to_polynomial()
    lc = dense[max(dense, key=grevlex_key)]
    if p.modulus:
        scalar = lc
        inv = pow(lc, -1, p.modulus)
        dense = {e: c * inv for e, c in dense.items()}
    else:
        scalar = -1 if lc < 0 else 1
        dense = {e: c * scalar for e, c in dense.items()}
    unit = LaurentPoly({shift: scalar}, p.variables, p.modulus)
    return unit, LaurentPoly(dense, p.variables, p.modulus)


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return ``r`` with ``q * r == p``; raise :class:`NotDivisible` otherwise."""
    if q.variables != p.variables or q.modulus != p.modulus:
        raise RingMismatch("exact_divide across rings")
    if not q:
        raise ZeroDivisionError("division by zero")
    if not p:
        return p
    sp, dp = p.to_polynomial()
    sq, dq = q.to_polynomial()
    quot = _dense.exact_div(dp, dq, p.modulus)
    return p._like(quot).shift(tuple(a - b for a, b in zip(sp, sq)))


def divides(q: LaurentPoly, p: LaurentPoly) -> bool:
    try:
        exact_divide(p, q)
    except NotDivisible:
        return False
    return True


def laurent_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Unit-normalized gcd in ``Z[t^{±1}]``; returns 1 exactly when ``p`` and ``q`` are coprime."""
    if p.variables != q.variables or p.modulus != q.modulus:
        raise RingMismatch("laurent_gcd across rings")
    if p.modulus:
        raise ValueError("laurent_gcd is defined over the integers only")
    if not p and not q:
        raise ValueError("gcd(0, 0) is undefined")
    n = len(p.variables)
    dp = unit_normalize(p)[1].terms if p else {}
    dq = unit_normalize(q)[1].terms if q else {}
    g = _dense.poly_gcd(dp, dq, n)
    return unit_normalize(LaurentPoly(g, p.variables))[1]


def evaluate(p: LaurentPoly, point) -> Fraction:
    return p.evaluate(point)


__all__ = [
    "LaurentPoly", "NotDivisible", "PolySyntaxError", "RingMismatch",
    "divides", "evaluate", "exact_divide", "laurent_gcd", "parse_poly", "poly_arith",
    "ring_name", "unit_normalize",
]


def poly_arith(op: str, p: LaurentPoly, q: LaurentPoly | None = None) -> LaurentPoly:
    """Named entry point for ``add``, ``sub``, ``mul`` and ``negate``."""
    if op == "negate":
        return -p
    if q is None:
        raise TypeError(f"{op} needs two operands")
    for name, fn in (("add", LaurentPoly.__add__), ("sub", LaurentPoly.__sub__),
                     ("mul", LaurentPoly.__mul__)):
        if op == name:
            return fn(p, q)
    raise ValueError(f"unknown operation {op!r}")
