"""Certified co-rank bounds assembled from module verdicts.

The co-rank of a group is the largest ``n`` with an epimorphism onto the
free group ``F(n)``; for a compact 3-manifold it equals the cut number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .modules import FreenessVerdict, RankCertificate, TorsionVerdict
from .words import FreeQuotientCertificate, GroupPresentation, verify_free_quotient


class PremiseError(ValueError):
    """A lemma was asked to conclude something its hypotheses do not support."""


@dataclass(frozen=True)
class CorankBounds:
    lower: int
    upper: Optional[int]  # None means unbounded
    lower_reason: str = ""
    upper_reason: str = ""

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.upper < 0):
            raise ValueError("bounds must be nonnegative")
        if self.upper is not None and self.lower > self.upper:
            raise AssertionError(f"inconsistent bounds: lower {self.lower} > upper {self.upper}")

    @property
    def exact(self):
        return self.upper is not None and self.lower == self.upper

    def to_json(self):
        return {"lower": self.lower, "upper": self.upper,
                "lower_reason": self.lower_reason, "upper_reason": self.upper_reason}

    def __str__(self):
        up = "inf" if self.upper is None else str(self.upper)
        return f"{self.lower} <= corank <= {up}"


def r_of_g(g: int) -> int:
    """Co-rank realized by the genus-``g`` examples: ``g/2`` (even), ``(g+1)/2`` (odd)."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    return g // 2 if g % 2 == 0 else (g + 1) // 2


def check_betti(betti: int, n: int):
    """The lemmas need ``H_1`` free of rank exactly ``n`` so the ``Z^n`` cover is unique."""
    if betti != n:
        raise PremiseError(f"beta_1 = {betti}, need exactly {n} (unique Z^{n} cover)")


def _check_common(betti, n, rank_cert, torsion, freeness, expected_rank):
    check_betti(betti, n)
    if rank_cert.module_rank != expected_rank:
        raise PremiseError(f"module rank {rank_cert.module_rank}, need {expected_rank}")
    if not torsion.torsion_free:
        raise PremiseError(f"torsion verdict is {torsion.kind}, need torsion_free")
    if not freeness.not_free:
        raise PremiseError(f"freeness verdict is {freeness.kind}, need not_free")


def upper_bound_summand(betti: int, rank_cert: RankCertificate, torsion: TorsionVerdict,
                        freeness: FreenessVerdict) -> CorankBounds:
    """Not very large: co-rank at most 1, from the absolute module of the Z^2 cover."""
    _check_common(betti, 2, rank_cert, torsion, freeness, 1)
    reason = ("a surjection onto F(2) would make H_1 of the Z^2 cover = Z[Z^2] + A; "
              "rank 1 forces A torsion, torsion-freeness forces A = 0, so the module "
              f"would be free, but E_1 mod {freeness.prime} is proper; so co-rank <= 1")
    return CorankBounds(0, 1, upper_reason=reason)


def upper_bound_relative(n: int, betti: int, rank_cert: RankCertificate, torsion: TorsionVerdict,
                         freeness: FreenessVerdict) -> CorankBounds:
    """No surjection onto ``F(n)``: co-rank at most ``n - 1``, from the relative module."""
    if n < 1:
        raise PremiseError("n must be positive")
    _check_common(betti, n, rank_cert, torsion, freeness, n)
    reason = (f"a surjection onto F({n}) would make H_1(cover, fibre) = Z[Z^{n}]^{n} + A; "
              f"rank {n} forces A torsion, torsion-freeness forces A = 0, so the module would "
              f"be free, but E_{n} mod {freeness.prime} is proper; so co-rank <= {n - 1}")
    return CorankBounds(0, n - 1, upper_reason=reason)


def lower_bound(betti: int, cert: FreeQuotientCertificate | None = None,
                pres: GroupPresentation | None = None) -> CorankBounds:
    """Lower bound from ``beta_1`` and an optional checked free-quotient certificate."""
    lower, reason = (1, f"beta_1 = {betti} >= 1 gives a Z quotient") if betti >= 1 else (0, "trivial")
    if cert is not None:
        if pres is None:
            raise PremiseError("a certificate needs the presentation it refers to")
        verdict = verify_free_quotient(pres, cert)
        if not verdict:
            raise PremiseError(f"invalid free-quotient certificate: {verdict.reason}")
        if cert.target_rank >= lower:
            lower = cert.target_rank
            reason = f"verified epimorphism onto F({cert.target_rank})"
    return CorankBounds(lower, None, lower_reason=reason)


def betti_upper(betti: int) -> CorankBounds:
    return CorankBounds(0, betti, upper_reason=f"a free quotient of rank n abelianizes onto Z^n, so n <= beta_1 = {betti}")


def meet(*bounds: CorankBounds) -> CorankBounds:
    """Intersect bounds: largest lower, smallest upper."""
    lower = max(bounds, key=lambda b: b.lower)
    finite = [b for b in bounds if b.upper is not None]
    upper = min(finite, key=lambda b: b.upper) if finite else None
    return CorankBounds(lower.lower, upper.upper if upper else None,
                        lower.lower_reason, upper.upper_reason if upper else "")


def combine_boundary_sum(b1: CorankBounds, b2: CorankBounds) -> CorankBounds:
    """Bounds for a boundary connected sum; cut number is additive."""
    upper = None if b1.upper is None or b2.upper is None else b1.upper + b2.upper
    return CorankBounds(b1.lower + b2.lower, upper,
                        "additivity of cut number under boundary connected sum",
                        "additivity of cut number under boundary connected sum" if upper is not None else "")


@dataclass
class ObstructionReport:
    source: str
    betti: int
    lemma: Optional[str]
    bounds: CorankBounds
    rank: Optional[RankCertificate] = None
    torsion: Optional[TorsionVerdict] = None
    freeness: Optional[FreenessVerdict] = None
    scripts: dict = field(default_factory=dict)
    narrative: list = field(default_factory=list)

    def to_json(self):
        fr = None
        if self.freeness is not None:
            fr = {"verdict": self.freeness.kind, "prime": self.freeness.prime,
                  "ideal": [str(g) for g in self.freeness.ideal.generators] if self.freeness.ideal else None}
        return {"source": self.source, "betti": self.betti, "lemma": self.lemma,
                "rank": self.rank.to_json() if self.rank else None,
                "torsion": self.torsion.to_json() if self.torsion else None,
                "freeness": fr,
                "bounds": {"lower": self.bounds.lower, "upper": self.bounds.upper},
                "narrative": list(self.narrative), "scripts": self.scripts}

    def text(self):
        lines = [f"source: {self.source}", f"beta_1: {self.betti}",
                 f"lemma: {self.lemma or 'none'}"]
        if self.rank:
            lines.append(f"module rank: {self.rank.module_rank} "
                         f"({self.rank.module.ngens} generators - matrix rank {self.rank.matrix_rank})")
        if self.torsion:
            lines.append(f"torsion: {self.torsion.kind}"
                         + (f" (coprime entries {self.torsion.witness})" if self.torsion.witness else ""))
        if self.freeness:
            lines.append(f"freeness: {self.freeness.kind}"
                         + (f" (proper elementary ideal mod {self.freeness.prime})" if self.freeness.prime else ""))
        lines.append(f"bounds: {self.bounds}")
        lines += ["  " + s for s in self.narrative]
        return "\n".join(lines)


def build_report(source: str, betti: int, lemma: str | None = None, *,
                 rank: RankCertificate | None = None, torsion: TorsionVerdict | None = None,
                 freeness: FreenessVerdict | None = None, n: int | None = None,
                 certificate: FreeQuotientCertificate | None = None,
                 presentation: GroupPresentation | None = None,
                 scripts: dict | None = None, notes=()) -> ObstructionReport:
    """Chain verdicts through the chosen lemma into bounds and a premise trail."""
    parts = [betti_upper(betti), lower_bound(betti, certificate, presentation)]
    narrative = list(notes)
    if lemma == "summand":
        if None in (rank, torsion, freeness):
            raise PremiseError("summand lemma needs rank, torsion and freeness verdicts")
        parts.append(upper_bound_summand(betti, rank, torsion, freeness))
    elif lemma == "relative":
        if None in (rank, torsion, freeness) or n is None:
            raise PremiseError("relative lemma needs n, rank, torsion and freeness verdicts")
        parts.append(upper_bound_relative(n, betti, rank, torsion, freeness))
    elif lemma is not None:
        raise ValueError(f"unknown lemma {lemma!r}")
    bounds = meet(*parts)
    narrative.append(f"lower bound {bounds.lower}: {bounds.lower_reason}")
    if bounds.upper is not None:
        narrative.append(f"upper bound {bounds.upper}: {bounds.upper_reason}")
    if lemma == "summand" and bounds.upper == 1:
        narrative.append("group is not very large (no epimorphism onto a non-abelian free group)")
    return ObstructionReport(source, betti, lemma, bounds, rank, torsion, freeness,
                             dict(scripts or {}), narrative)
