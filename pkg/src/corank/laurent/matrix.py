"""Matrices of Laurent polynomials: determinants and fraction-free rank."""

from __future__ import annotations

import logging
import os
import random
from fractions import Fraction
from typing import Sequence

from . import _dense
from .poly import LaurentPoly, RingMismatch, exact_divide, parse_poly

log = logging.getLogger(__name__)


class RankInconsistency(AssertionError):
    """An evaluation rank exceeded the symbolic rank: a bug, not a math outcome."""


def default_seed() -> int:
    return int(os.environ.get("CORANK_SEED", "0"))


class LaurentMatrix:
    """Rectangular matrix over one Laurent ring (rows may be empty)."""

    __slots__ = ("rows", "nrows", "ncols", "variables", "modulus")

    def __init__(self, rows, ncols=None, variables=(), modulus=0):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self.variables = tuple(variables)
        self.modulus = modulus
        for r in rows:
            if len(r) != ncols:
                raise ValueError("matrix is not rectangular")
            for p in r:
                if p.variables != self.variables or p.modulus != modulus:
                    raise RingMismatch(f"entry {p!r} outside {self.variables} mod {modulus}")

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], variables, modulus=0, ncols=None):
        variables = tuple(variables)
        return cls([[parse_poly(s, variables, modulus) for s in r] for r in rows],
                   ncols=ncols, variables=variables, modulus=modulus)

    @classmethod
    def zeros(cls, nrows, ncols, variables=(), modulus=0):
        z = LaurentPoly({}, variables, modulus)
        return cls([[z] * ncols for _ in range(nrows)], ncols, variables, modulus)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return (self.ncols == other.ncols and self.rows == other.rows
                and self.variables == other.variables and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.rows, self.ncols, self.variables, self.modulus))

    def like(self, rows, ncols=None):
        return LaurentMatrix(rows, self.ncols if ncols is None else ncols,
                             self.variables, self.modulus)

    def map(self, fn, variables=None, modulus=None):
        rows = [[fn(p) for p in r] for r in self.rows]
        return LaurentMatrix(rows, self.ncols,
                             self.variables if variables is None else variables,
                             self.modulus if modulus is None else modulus)

    def submatrix(self, rows, cols):
        return LaurentMatrix([[self.rows[i][j] for j in cols] for i in rows], len(cols),
                             self.variables, self.modulus)

    def transpose(self):
        return LaurentMatrix([[self.rows[i][j] for i in range(self.nrows)]
                              for j in range(self.ncols)], self.nrows,
                             self.variables, self.modulus)

    def reduce_mod(self, p):
        return self.map(lambda e: e.reduce_mod(p), modulus=p)

    def to_strings(self):
        return [[str(p) for p in r] for r in self.rows]

    def __str__(self):
        if not self.rows:
            return f"[0 x {self.ncols}]"
        cells = self.to_strings()
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self):
        return f"LaurentMatrix({self.to_strings()!r}, ncols={self.ncols}, variables={self.variables})"


def _dense_rows(m: LaurentMatrix):
    """Clear negative exponents row by row (row scaling by units keeps rank)."""
    out = []
    n = len(m.variables)
    for r in m.rows:
        shift = [0] * n
        for p in r:
            if p:
                mins = p.min_exponents()
                shift = [min(a, b) for a, b in zip(shift, mins)]
        out.append([{tuple(a - b for a, b in zip(e, shift)): c for e, c in p.terms.items()}
                    for p in r])
    return out


def _fraction_free_rank(rows, ncols, nvars, modulus):
    a = [list(r) for r in rows]
    nrows = len(a)
    prev = _dense.const(1, nvars)
    rank = 0
    for k in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i][k]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][k]
        for i in range(rank + 1, nrows):
            lead = a[i][k]
            for j in range(k + 1, ncols):
                num = _dense.sub(_dense.mul(p, a[i][j], modulus),
                                 _dense.mul(lead, a[rank][j], modulus), modulus)
                a[i][j] = _dense.exact_div(num, prev, modulus) if num else {}
            a[i][k] = {}
        prev = p
        rank += 1
    return rank


def _rational_rank(rows):
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for k in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][k] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            f = a[i][k] / a[rank][k]
            if f:
                for j in range(k, ncols):
                    a[i][j] -= f * a[rank][j]
        rank += 1
    return rank


def evaluation_rank(m: LaurentMatrix, point) -> int:
    return _rational_rank([[p.evaluate(point) for p in r] for r in m.rows])


def bareiss_rank(m: LaurentMatrix, seed: int | None = None, samples: int = 3) -> int:
    """Rank over the fraction field, by fraction-free elimination.

    Over the integers the result is cross-checked against the rank at a few
    random nonzero rational points; those ranks can only be smaller.
    """
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rank = _fraction_free_rank(_dense_rows(m), m.ncols, len(m.variables), m.modulus)
    if m.modulus == 0 and samples:
        rng = random.Random(default_seed() if seed is None else seed)
        seen = []
        for _ in range(samples):
            point = {v: Fraction(rng.choice([-1, 1]) * rng.randint(2, 97), rng.randint(1, 13))
                     for v in m.variables}
            r = evaluation_rank(m, point)
            if r > rank:
                raise RankInconsistency(f"evaluation rank {r} exceeds symbolic rank {rank}")
            seen.append(r)
        if rank not in seen:
            log.warning("no random evaluation attained symbolic rank %d (saw %s)", rank, seen)
    return rank


def determinant(m: LaurentMatrix) -> LaurentPoly:
    """Determinant via Bareiss elimination with exact Laurent division."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    one = LaurentPoly.const(1, m.variables, m.modulus)
    if n == 0:
        return one
    a = [list(r) for r in m.rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return LaurentPoly({}, m.variables, m.modulus)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = exact_divide(num, prev) if num else num
        prev = a[k][k]
    return a[n - 1][n - 1] * sign
