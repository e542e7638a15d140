"""Row/column reductions, rank, elementary ideals and torsion/freeness verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .fox import ModulePresentation
from .groebner import GroebnerBasis, Ideal, groebner_basis
from .laurent import (LaurentMatrix, LaurentPoly, NotDivisible, bareiss_rank, determinant,
                      exact_divide, laurent_gcd, parse_poly, unit_normalize)


class ReductionError(ValueError):
    pass


# -- reduction scripts -----------------------------------------------------------

MOVES = {
    "swap_rows": ("i", "j"),
    "swap_cols": ("i", "j"),
    "scale_row": ("i", "unit"),
    "scale_col": ("j", "unit"),
    "add_row": ("target", "source", "poly"),
    "add_col": ("target", "source", "poly"),
    "delete_pivot": ("i", "j"),
    "delete_zero_row": ("i",),
}


@dataclass(frozen=True)
class Move:
    """One elementary operation.

    ``add_row``: row[target] += poly * row[source]; ``add_col`` likewise on
    columns. ``delete_pivot(i, j)`` needs a unit at (i, j): it clears column
    ``j`` with row operations and removes row ``i`` and column ``j``.
    Indices are 0-based; polynomials are kept as text.
    """

    kind: str
    args: tuple

    def __post_init__(self):
        if self.kind not in MOVES:
            raise ReductionError(f"unknown move {self.kind!r}")
        if len(self.args) != len(MOVES[self.kind]):
            raise ReductionError(f"{self.kind} takes {MOVES[self.kind]}")

    @classmethod
    def from_json(cls, d):
        kind = d["move"]
        if kind not in MOVES:
            raise ReductionError(f"unknown move {kind!r}")
        missing = [k for k in MOVES[kind] if k not in d]
        if missing:
            raise ReductionError(f"{kind} is missing {', '.join(missing)}")
        return cls(kind, tuple(d[k] for k in MOVES[kind]))

    def to_json(self):
        return {"move": self.kind, **dict(zip(MOVES[self.kind], self.args))}

    def __str__(self):
        return f"{self.kind}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class ReductionScript:
    moves: tuple[Move, ...] = ()

    @classmethod
    def from_json(cls, data):
        if isinstance(data, Mapping):
            data = data["moves"]
        return cls(tuple(Move.from_json(m) for m in data))

    def to_json(self):
        return [m.to_json() for m in self.moves]

    def __add__(self, other):
        return ReductionScript(self.moves + other.moves)

    def __len__(self):
        return len(self.moves)


def _poly(m: ModulePresentation, value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    return parse_poly(str(value), m.variables, m.modulus)


def _check_index(k, n, what):
    if not isinstance(k, int) or not 0 <= k < n:
        raise ReductionError(f"{what} index {k} out of range (size {n})")


def apply_move(m: ModulePresentation, move: Move) -> ModulePresentation:
    rows = [list(r) for r in m.matrix.rows]
    labels = list(m.generator_labels)
    nr, nc = m.nrels, m.ngens
    kind, a = move.kind, move.args
    if kind == "swap_rows":
        _check_index(a[0], nr, "row"), _check_index(a[1], nr, "row")
        rows[a[0]], rows[a[1]] = rows[a[1]], rows[a[0]]
    elif kind == "swap_cols":
        _check_index(a[0], nc, "column"), _check_index(a[1], nc, "column")
        for r in rows:
            r[a[0]], r[a[1]] = r[a[1]], r[a[0]]
        labels[a[0]], labels[a[1]] = labels[a[1]], labels[a[0]]
    elif kind == "scale_row":
        _check_index(a[0], nr, "row")
        u = _poly(m, a[1])
        if not u.is_unit():
            raise ReductionError(f"scale_row by non-unit {u}")
        rows[a[0]] = [u * p for p in rows[a[0]]]
    elif kind == "scale_col":
        _check_index(a[0], nc, "column")
        u = _poly(m, a[1])
        if not u.is_unit():
            raise ReductionError(f"scale_col by non-unit {u}")
        for r in rows:
            r[a[0]] = u * r[a[0]]
    elif kind == "add_row":
        t, s = a[0], a[1]
        _check_index(t, nr, "row"), _check_index(s, nr, "row")
        if t == s:
            raise ReductionError("add_row needs distinct rows")
        q = _poly(m, a[2])
        rows[t] = [x + q * y for x, y in zip(rows[t], rows[s])]
    elif kind == "add_col":
        t, s = a[0], a[1]
        _check_index(t, nc, "column"), _check_index(s, nc, "column")
        if t == s:
            raise ReductionError("add_col needs distinct columns")
        q = _poly(m, a[2])
        for r in rows:
            r[t] = r[t] + q * r[s]
    elif kind == "delete_pivot":
        i, j = a
        _check_index(i, nr, "row"), _check_index(j, nc, "column")
        piv = rows[i][j]
        if not piv.is_unit():
            raise ReductionError(f"pivot ({i}, {j}) = {piv} is not a unit")
        inv = piv.unit_inverse()
        for k in range(nr):
            if k != i and rows[k][j]:
                f = rows[k][j] * inv
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[i])]
        rows = [[p for c, p in enumerate(r) if c != j] for k, r in enumerate(rows) if k != i]
        del labels[j]
    elif kind == "delete_zero_row":
        _check_index(a[0], nr, "row")
        if any(rows[a[0]]):
            raise ReductionError(f"row {a[0]} is not zero")
        del rows[a[0]]
    ncols = len(labels)
    return ModulePresentation(labels, m.matrix.like(rows, ncols=ncols), m.provenance)


def apply_reduction(m: ModulePresentation, script: ReductionScript) -> ModulePresentation:
    for move in script.moves:
        m = apply_move(m, move)
    if script.moves:
        m = m.with_matrix(m.matrix, note=f"reduction script of {len(script)} moves")
    return m


def _row_multiple(row, base):
    """Return ``q`` with ``row == q * base`` or None."""
    k = next((c for c, p in enumerate(base) if p), None)
    if k is None:
        return None
    try:
        q = exact_divide(row[k], base[k])
    except NotDivisible:
        return None
    if all(x == q * y for x, y in zip(row, base)):
        return q
    return None


def auto_reduce(m: ModulePresentation):
    """Greedy simplification; returns ``(module, script)``.

    Repeats until stable: delete zero rows, pivot on the first unit entry
    (row-major scan), and clear a row that is a polynomial multiple of an
    earlier row.
    """
    moves: list[Move] = []
    cur = m
    while True:
        rows = cur.matrix.rows
        zero = next((i for i, r in enumerate(rows) if not any(r)), None)
        if zero is not None:
            move = Move("delete_zero_row", (zero,))
        else:
            move = None
            for i, r in enumerate(rows):
                j = next((j for j, p in enumerate(r) if p.is_unit()), None)
                if j is not None:
                    move = Move("delete_pivot", (i, j))
                    break
            if move is None:
                for i, j in combinations(range(len(rows)), 2):
                    q = _row_multiple(rows[j], rows[i])
                    if q is not None:
                        move = Move("add_row", (j, i, str(-q)))
                        break
        if move is None:
            script = ReductionScript(tuple(moves))
            if moves:
                cur = cur.with_matrix(cur.matrix, note=f"auto_reduce: {len(moves)} moves")
            return cur, script
        moves.append(move)
        cur = apply_move(cur, move)


# -- rank and ideals ---------------------------------------------------------------


@dataclass(frozen=True)
class RankCertificate:
    module: ModulePresentation
    matrix_rank: int
    module_rank: int

    def to_json(self):
        return {"generators": self.module.ngens, "matrix_rank": self.matrix_rank,
                "module_rank": self.module_rank}


def module_rank(m: ModulePresentation) -> RankCertificate:
    r = bareiss_rank(m.matrix)
    return RankCertificate(m, r, m.ngens - r)


def minors(matrix: LaurentMatrix, size: int):
    """All ``size x size`` minors, ordered by (row tuple, column tuple)."""
    return [determinant(matrix.submatrix(rs, cs))
            for rs in combinations(range(matrix.nrows), size)
            for cs in combinations(range(matrix.ncols), size)]


def elementary_ideal(m: ModulePresentation, k: int) -> Ideal:
    """``E_k``: ideal of the ``(n-k)``-minors, ``n`` the number of generators.

    Over the integers the ideal is returned with rational coefficients.
    """
    if k < 0:
        raise ValueError("elementary ideal index must be nonnegative")
    size = m.ngens - k
    one = LaurentPoly.const(1, m.variables, m.modulus)
    if size <= 0:
        gens = (one,)
    elif size > m.nrels:
        gens = ()
    else:
        gens = tuple(minors(m.matrix, size))
    return Ideal(m.variables, m.modulus, gens)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def base_change_mod_p(m: ModulePresentation, p: int) -> ModulePresentation:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return ModulePresentation(m.generator_labels, m.matrix.reduce_mod(p),
                              m.provenance + (f"coefficients reduced mod {p}",))


def base_change_substitute(m: ModulePresentation, image: Mapping[str, str | LaurentPoly],
                           target_variables: Sequence[str] | None = None) -> ModulePresentation:
    """Push entries through the ring map sending each variable to a signed monomial."""
    if target_variables is None:
        target_variables = []
        for v in m.variables:
            val = image[v]
            names = val.variables if isinstance(val, LaurentPoly) else None
            if names:
                target_variables = list(names)
                break
            for tok in str(val).replace("*", " ").replace("^", " ").replace("-", " ").split():
                if tok[0].isalpha() and tok not in target_variables:
                    target_variables.append(tok)
    target_variables = tuple(target_variables)
    imgs = {}
    for v in m.variables:
        if v not in image:
            raise ValueError(f"no image for variable {v!r}")
        val = image[v]
        p = val if isinstance(val, LaurentPoly) else parse_poly(str(val), target_variables, m.modulus)
        if not p.is_unit():
            raise ValueError(f"image of {v} is {p}, not a unit")
        imgs[v] = p
    matrix = m.matrix.map(lambda e: e.substitute(imgs), variables=target_variables)
    desc = ", ".join(f"{v}->{imgs[v]}" for v in m.variables)
    return ModulePresentation(m.generator_labels, matrix, m.provenance + (f"substitution {desc}",))


def rows_equal_up_to_units(a: LaurentMatrix, b: LaurentMatrix) -> bool:
    """Same shape and each row of ``a`` is a unit multiple of the matching row of ``b``."""
    if (a.nrows, a.ncols) != (b.nrows, b.ncols):
        return False
    for ra, rb in zip(a.rows, b.rows):
        if not any(rb):
            if any(ra):
                return False
            continue
        q = _row_multiple(ra, rb)
        if q is None or not q.is_unit():
            return False
    return True


def entries_equal_up_to_units(a: LaurentMatrix, b: LaurentMatrix) -> bool:
    if (a.nrows, a.ncols) != (b.nrows, b.ncols):
        return False
    for ra, rb in zip(a.rows, b.rows):
        for x, y in zip(ra, rb):
            if bool(x) != bool(y):
                return False
            if x and unit_normalize(x)[1] != unit_normalize(y)[1]:
                return False
    return True


# -- verdicts -------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionVerdict:
    kind: str  # "torsion_free" | "has_torsion" | "inconclusive"
    witness: tuple[int, int] | None = None
    common_factor: LaurentPoly | None = None
    pair_gcds: dict = field(default_factory=dict)

    @property
    def torsion_free(self):
        return self.kind == "torsion_free"

    def to_json(self):
        d = {"verdict": self.kind}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.common_factor is not None:
            d["common_factor"] = str(self.common_factor)
        d["pair_gcds"] = {f"{i},{j}": str(g) for (i, j), g in self.pair_gcds.items()}
        return d


def torsion_verdict(m: ModulePresentation) -> TorsionVerdict:
    """Torsion test for a one-relation module over a UFD.

    Some coprime pair of coefficients makes the module torsion-free; a
    non-unit common factor of all coefficients gives torsion.
    """
    if m.nrels != 1:
        raise ReductionError(f"torsion test needs exactly one relation, got {m.nrels}")
    if m.modulus:
        raise ValueError("torsion test is implemented over the integers")
    row = m.matrix.rows[0]
    gcds = {}
    witness = None
    for i, j in combinations(range(len(row)), 2):
        if not row[i] and not row[j]:
            continue
        g = laurent_gcd(row[i], row[j])
        gcds[(i, j)] = g
        if witness is None and g == 1:
            witness = (i, j)
    if witness is not None:
        return TorsionVerdict("torsion_free", witness=witness, pair_gcds=gcds)
    nonzero = [p for p in row if p]
    if nonzero:
        g = nonzero[0]
        for p in nonzero[1:]:
            g = laurent_gcd(g, p)
        g = unit_normalize(g)[1]
        if g != 1:
            return TorsionVerdict("has_torsion", common_factor=g, pair_gcds=gcds)
    return TorsionVerdict("inconclusive", pair_gcds=gcds)


@dataclass(frozen=True)
class FreenessVerdict:
    kind: str  # "not_free" | "free_unknown"
    prime: int | None = None
    ideal: Ideal | None = None
    basis: GroebnerBasis | None = None
    tried: tuple[int, ...] = ()

    @property
    def not_free(self):
        return self.kind == "not_free"

    def to_json(self):
        d = {"verdict": self.kind, "tried": list(self.tried)}
        if self.prime is not None:
            d.update(prime=self.prime, ideal=[str(g) for g in self.ideal.generators],
                     groebner_basis=self.basis.to_strings())
        return d


def freeness_verdict(m: ModulePresentation, rank: int, primes: Sequence[int]) -> FreenessVerdict:
    """One-sided freeness test: ``E_rank`` mod p proper implies not free."""
    actual = module_rank(m).module_rank
    if rank != actual:
        raise ValueError(f"rank {rank} does not match module rank {actual}")
    tried = []
    for p in primes:
        mp = base_change_mod_p(m, p)
        ideal = elementary_ideal(mp, rank)
        basis = groebner_basis(ideal, saturate=True)
        tried.append(p)
        if not basis.is_whole_ring():
            return FreenessVerdict("not_free", p, ideal, basis, tuple(tried))
    return FreenessVerdict("free_unknown", tried=tuple(tried))
