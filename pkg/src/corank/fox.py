"""Fox free differential calculus and Alexander module presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .abelianization import AbelianizationError, AbelianizationMap, abelianize
from .laurent import LaurentMatrix, LaurentPoly, NotDivisible, exact_divide, unit_normalize
from .laurent.poly import ring_name
from .words import GroupPresentation, PresentationError, Word, substitute_generators

THETA = "Theta"


@dataclass(frozen=True)
class ModulePresentation:
    """Finitely presented module: rows are relations, columns are generators."""

    generator_labels: tuple[str, ...]
    matrix: LaurentMatrix
    provenance: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generator_labels", tuple(self.generator_labels))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        if self.matrix.ncols != len(self.generator_labels):
            raise ValueError(f"{self.matrix.ncols} columns but {len(self.generator_labels)} labels")

    @property
    def variables(self):
        return self.matrix.variables

    @property
    def modulus(self):
        return self.matrix.modulus

    @property
    def ring(self):
        return ring_name(self.modulus)

    @property
    def ngens(self):
        return self.matrix.ncols

    @property
    def nrels(self):
        return self.matrix.nrows

    def with_matrix(self, matrix, labels=None, note=None):
        prov = self.provenance + ((note,) if note else ())
        return ModulePresentation(self.generator_labels if labels is None else labels,
                                  matrix, prov)

    def to_json(self):
        return {"ring": self.ring, "variables": list(self.variables),
                "generators": list(self.generator_labels),
                "matrix": self.matrix.to_strings(),
                "provenance": list(self.provenance)}

    @classmethod
    def from_json(cls, data) -> "ModulePresentation":
        ring = data.get("ring", "ZZ")
        modulus = 0 if ring == "ZZ" else int(ring[3:-1])
        labels = tuple(data["generators"])
        matrix = LaurentMatrix.from_strings(data["matrix"], data["variables"], modulus,
                                            ncols=len(labels))
        return cls(labels, matrix, tuple(data.get("provenance", ())))

    def normalized_rows(self) -> "ModulePresentation":
        """Divide each row by the unit making its first nonzero entry unit-normalized."""
        rows = []
        for r in self.matrix.rows:
            lead = next((p for p in r if p), None)
            if lead is None:
                rows.append(r)
                continue
            inv = unit_normalize(lead)[0].unit_inverse()
            rows.append([p * inv for p in r])
        return self.with_matrix(self.matrix.like(rows), note="per-row unit normalization")

    def __str__(self):
        head = "  ".join(self.generator_labels)
        return f"module over {self.ring}[{', '.join(v + '^±1' for v in self.variables)}]\n" \
               f"generators: {head}\n{self.matrix}"


def _unit_of(ab: AbelianizationMap, vec) -> LaurentPoly:
    return LaurentPoly.monomial(tuple(vec), 1, ab.basis)


def fox_derivative(w: Word, gen: str, ab: AbelianizationMap) -> LaurentPoly:
    """Fox derivative of ``w`` with respect to ``gen``, pushed into ``Z[H_1]``."""
    if gen not in ab.source.generators:
        raise PresentationError(f"unknown generator {gen!r}")
    g = ab.rank
    terms: dict = {}
    prefix = [0] * g
    for h, e in w:
        if h not in ab.images:
            raise PresentationError(f"unknown generator {h!r}")
        img = ab.images[h]
        if h == gen:
            if e == 1:
                key = tuple(prefix)
                terms[key] = terms.get(key, 0) + 1
            else:
                key = tuple(p - x for p, x in zip(prefix, img))
                terms[key] = terms.get(key, 0) - 1
        for k in range(g):
            prefix[k] += e * img[k]
    return LaurentPoly(terms, ab.basis)


def relative_module(pres: GroupPresentation, ab: AbelianizationMap) -> ModulePresentation:
    """Fox Jacobian presenting ``H_1(X_phi, p_phi)``: rows relators, columns generators."""
    rows = [[fox_derivative(r, g, ab) for g in pres.generators] for r in pres.relators]
    matrix = LaurentMatrix(rows, len(pres.generators), ab.basis)
    return ModulePresentation(pres.generators, matrix,
                              (f"Fox Jacobian of {len(pres.relators)} relators over basis {list(ab.basis)}",))


def _new_name(old: str, taken: set[str]) -> str:
    cand = old.upper() if old.upper() != old else old + "_n"
    k = 1
    while cand in taken:
        cand = f"{old}_n{k}"
        k += 1
    return cand


def normalize_generating_set(pres: GroupPresentation, ab: AbelianizationMap,
                             basis_gens: Sequence[str]):
    """Replace each non-basis generator ``x`` by ``X = x w(x)^-1`` so that it maps to 0.

    ``w(x)`` is the product of basis generators (in basis order) with
    exponents the coordinates of ``x``. Returns the new presentation and map.
    """
    basis_gens = tuple(basis_gens)
    if tuple(ab.basis) != basis_gens:
        ab = abelianize(pres, basis_gens)
    taken = set(pres.generators)
    table: dict[str, Word] = {}
    inverse: dict[str, Word] = {}
    renamed = {}
    for x in pres.generators:
        vec = ab.images[x]
        if x in basis_gens or not any(vec):
            table[x] = Word.letter(x)
            inverse[x] = Word.letter(x)
            continue
        w = Word()
        for b, n in zip(basis_gens, vec):
            w = w * Word.letter(b, n)
        name = _new_name(x, taken)
        taken.add(name)
        renamed[x] = name
        table[x] = Word.letter(name) * w
        inverse[name] = Word.letter(x) * w.inverse()
    new_pres = substitute_generators(pres, table, inverse)
    zero = (0,) * ab.rank
    images = {renamed.get(x, x): ab.images[x] if x in basis_gens else zero
              for x in pres.generators}
    new_ab = AbelianizationMap(new_pres, ab.rank, ab.basis, images)
    return new_pres, new_ab, {"table": {k: str(v) for k, v in table.items()},
                              "inverse": {k: str(v) for k, v in inverse.items()}}


def absolute_module(pres: GroupPresentation, ab: AbelianizationMap, basis_gens: Sequence[str],
                    normalize: bool = True) -> ModulePresentation:
    """Presentation of ``H_1(X_phi)`` over ``Z[Z^g]`` for ``g`` in {1, 2}.

    Columns are the null generators (those mapping to 0), plus for ``g = 2``
    the commutator ``Theta = g1 g2 g1^-1 g2^-1`` of the basis generators.
    """
    basis_gens = tuple(basis_gens)
    g = len(basis_gens)
    if g not in (1, 2):
        raise AbelianizationError("absolute module needs one or two basis generators")
    if ab.rank != g:
        raise AbelianizationError(f"H_1 has rank {ab.rank}, basis has {g} generators")
    note = []
    if tuple(ab.basis) != basis_gens:
        ab = abelianize(pres, basis_gens)
    std = [tuple(int(i == k) for i in range(g)) for k in range(g)]
    for k, b in enumerate(basis_gens):
        if ab.images[b] != std[k]:
            raise AbelianizationError(f"{b} does not map to basis vector {k}")
    if any(any(ab.images[x]) for x in pres.generators if x not in basis_gens):
        if not normalize:
            bad = [x for x in pres.generators if x not in basis_gens and any(ab.images[x])]
            raise AbelianizationError(f"non-basis generators {bad} have nonzero image")
        pres, ab, tables = normalize_generating_set(pres, ab, basis_gens)
        note.append(f"generating set normalized: {tables['inverse']}")
    null = [x for x in pres.generators if x not in basis_gens]
    rows = []
    for r in pres.relators:
        row = [fox_derivative(r, x, ab) for x in null]
        if g == 2:
            d1 = fox_derivative(r, basis_gens[0], ab)
            t2 = LaurentPoly.var(ab.basis[1], ab.basis)
            try:
                theta = exact_divide(d1, 1 - t2)
            except NotDivisible:
                raise AbelianizationError(f"relator {r} is not null-homologous") from None
            row.append(theta)
        rows.append(row)
    labels = tuple(null) + ((THETA,) if g == 2 else ())
    matrix = LaurentMatrix(rows, len(labels), ab.basis)
    prov = tuple(note) + (f"absolute module over basis {list(basis_gens)}, columns {list(labels)}",)
    return ModulePresentation(labels, matrix, prov)
