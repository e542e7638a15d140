"""Integer Smith normal form and abelianization onto a free abelian group."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .words import GroupPresentation, PresentationError

IntMatrix = list[list[int]]


class AbelianizationError(PresentationError):
    pass


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: IntMatrix, b: IntMatrix, inner: int | None = None) -> IntMatrix:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def int_det(a: IntMatrix) -> int:
    """Bareiss determinant over Z."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None) -> SNFResult:
    """Return unimodular ``U``, ``V`` and diagonal ``D`` with ``U A V = D``.

    Diagonal entries are nonnegative and each divides the next.
    """
    m = [list(map(int, r)) for r in a]
    rows = len(m)
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for r in m:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % m[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SNFResult(U, m, V)


@dataclass(frozen=True)
class AbelianizationMap:
    """Surjection of a presentation onto ``Z^rank``, basis variables named by ``basis``."""

    source: GroupPresentation
    rank: int
    basis: tuple[str, ...]
    images: dict

    def image(self, gen: str) -> tuple[int, ...]:
        return self.images[gen]

    def word_image(self, word) -> tuple[int, ...]:
        v = [0] * self.rank
        for g, e in word:
            for k, x in enumerate(self.images[g]):
                v[k] += e * x
        return tuple(v)

    def to_json(self):
        return {"rank": self.rank, "basis": list(self.basis),
                "images": {g: list(v) for g, v in self.images.items()}}


def relator_matrix(pres: GroupPresentation) -> IntMatrix:
    return [[r.exponent_sum(g) for g in pres.generators] for r in pres.relators]


def _solve_unimodular(q: IntMatrix, rhs: list[int]) -> tuple[int, ...]:
    """Solve ``y q = rhs`` for integer row vector ``y`` (``q`` unimodular) via Cramer."""
    n = len(q)
    det = int_det(q)
    out = []
    for k in range(n):
        qk = [list(r) for r in q]
        qk[k] = list(rhs)
        num = int_det(qk)
        assert num % det == 0
        out.append(num // det)
    return tuple(out)


def abelianize(pres: GroupPresentation, requested_basis: Sequence[str] | None = None) -> AbelianizationMap:
    """Abelianization ``G -> H_1 = Z^g``; raises if ``H_1`` has torsion.

    The basis consists of images of generators: ``requested_basis`` if given,
    otherwise the first generator subset (in declared order) forming a basis.
    """
    gens = pres.generators
    n = len(gens)
    snf = smith_normal_form(relator_matrix(pres), ncols=n)
    factors = snf.invariant_factors
    torsion = [d for d in factors if d != 1]
    if torsion:
        raise AbelianizationError(f"H_1 has torsion (invariant factors {torsion})")
    r = len(factors)
    g = n - r
    raw = {gen: tuple(snf.V[i][r:]) for i, gen in enumerate(gens)}

    if requested_basis is not None:
        requested_basis = tuple(requested_basis)
        unknown = set(requested_basis) - set(gens)
        if unknown:
            raise AbelianizationError(f"unknown basis generators {sorted(unknown)}")
        if len(requested_basis) != g:
            raise AbelianizationError(f"H_1 has rank {g}, got {len(requested_basis)} basis generators")
        chosen = requested_basis
        q = [list(raw[b]) for b in chosen]
        if abs(int_det(q)) != 1:
            raise AbelianizationError(f"images of {list(chosen)} do not form a basis of H_1")
    else:
        chosen = None
        for combo in combinations(gens, g):
            q = [list(raw[b]) for b in combo]
            if abs(int_det(q)) == 1:
                chosen = combo
                break
        if chosen is None:
            raise AbelianizationError("no subset of generators maps to a basis of H_1")
    q = [list(raw[b]) for b in chosen]
    images = {gen: _solve_unimodular(q, list(raw[gen])) if g else () for gen in gens}
    return AbelianizationMap(pres, g, tuple(chosen), images)
