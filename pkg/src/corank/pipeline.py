"""End-to-end pipelines for the bundled examples.

Each pipeline runs the full chain (presentation, abelianization, Fox
module, reductions, verdicts, bounds) and compares every intermediate
result with the expected values stored in the fixture bundle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .abelianization import abelianize
from .fox import ModulePresentation, absolute_module, relative_module
from .groebner import ideal_equal
from .laurent import LaurentMatrix, laurent_gcd
from .modules import (ReductionScript, apply_reduction, auto_reduce, base_change_mod_p,
                      base_change_substitute, elementary_ideal, entries_equal_up_to_units,
                      freeness_verdict, module_rank, rows_equal_up_to_units, torsion_verdict)
from .obstruction import (CorankBounds, ObstructionReport, betti_upper, build_report,
                          combine_boundary_sum, lower_bound, meet, r_of_g)
from .words import FreeQuotientCertificate, GroupPresentation, auto_simplify, parse_presentation

TRUST_MARKER = "--trust-redundant"


def fixture_text(name: str) -> str:
    return resources.files("corank.fixtures").joinpath(name).read_text()


def load_bundle(name: str) -> dict:
    bundle = json.loads(fixture_text(f"{name}.json"))
    for key in ("presentation", "reduction", "certificate"):
        fixture_text(bundle[key])  # fail early on a missing file
    return bundle


def load_presentation(name: str) -> GroupPresentation:
    return parse_presentation(fixture_text(name))


def load_script(name: str) -> ReductionScript:
    return ReductionScript.from_json(json.loads(fixture_text(name)))


def load_certificate(name: str) -> FreeQuotientCertificate:
    return FreeQuotientCertificate.from_json(json.loads(fixture_text(name)))


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self):
        return f"[{'ok' if self.ok else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class PipelineResult:
    name: str
    report: ObstructionReport
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def check(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))

    def to_json(self):
        return {"name": self.name, "ok": self.ok,
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
                "report": self.report.to_json()}


def _matrix(rows, variables, modulus=0):
    return LaurentMatrix.from_strings(rows, variables, modulus)


def _fitting_agree(m: ModulePresentation, expected: LaurentMatrix, moduli=(2, 3, 5, 0)):
    ref = ModulePresentation(m.generator_labels, expected)
    for p in moduli:
        a, b = (m, ref) if p == 0 else (base_change_mod_p(m, p), base_change_mod_p(ref, p))
        for k in range(m.ngens + 1):
            if not ideal_equal(elementary_ideal(a, k), elementary_ideal(b, k)):
                return False, f"E_{k} differs over {'QQ' if p == 0 else f'GF({p})'}"
    return True, "E_0..E_%d agree over GF(2), GF(3), GF(5), QQ" % m.ngens


def tripus_module(trust_redundant: bool = True):
    """Absolute module of the tripus over the basis (a, c)."""
    bundle = load_bundle("tripus")
    pres = load_presentation(bundle["presentation"])
    if trust_redundant:
        pres = pres.drop_redundant()
    ab = abelianize(pres, bundle["basis"])
    return pres, ab, absolute_module(pres, ab, bundle["basis"])


def run_tripus(trust_redundant: bool = True) -> PipelineResult:
    bundle = load_bundle("tripus")
    exp = bundle["expected"]
    pres, ab, m = tripus_module(trust_redundant)
    V = m.variables
    notes = []
    if trust_redundant:
        notes.append(f"{TRUST_MARKER}: relator(s) {sorted(load_presentation(bundle['presentation']).redundant)} "
                     "dropped as derivable from the others (taken on trust, not verified)")
    rank = module_rank(m)
    primes = bundle["primes"]
    freeness = freeness_verdict(m, rank.module_rank, primes)
    scripts = {}
    if trust_redundant:
        script = load_script(bundle["reduction"])
        reduced = apply_reduction(m, script)
    else:
        reduced, script = auto_reduce(m)
    scripts["reduction"] = script.to_json()
    torsion = torsion_verdict(reduced)
    cert = load_certificate(bundle["certificate"])
    report = build_report(f"tripus{'' if trust_redundant else ' (all relators)'}", ab.rank, "summand",
                          rank=rank, torsion=torsion, freeness=freeness, certificate=cert,
                          presentation=pres, scripts=scripts, notes=notes)
    if report.bounds.upper == 1 and report.bounds.lower == 1:
        report.narrative.append("large but not very large: co-rank of the tripus is 1")

    res = PipelineResult("tripus", report, data={"module": m, "reduced": reduced})
    res.check("betti", ab.rank == exp["betti"], f"beta_1 = {ab.rank}")
    paper = _matrix(exp["absolute_matrix"], V)
    if trust_redundant:
        res.check("absolute matrix", rows_equal_up_to_units(m.matrix, paper),
                  "rows agree with the displayed matrix up to Laurent units")
    ok, detail = _fitting_agree(m, paper)
    res.check("fitting ideals", ok, detail)
    res.check("module rank", rank.module_rank == exp["module_rank"], f"rank {rank.module_rank}")
    if trust_redundant:
        want = _matrix(exp["reduced"], V)
        res.check("scripted reduction", entries_equal_up_to_units(reduced.matrix, want), str(reduced.matrix))
        g = laurent_gcd(*reduced.matrix.rows[0])
        res.check("gcd", str(g) == exp["gcd"], f"gcd = {g}")
        auto, _ = auto_reduce(m)
        res.check("auto reduction", auto.nrels == 1 and torsion_verdict(auto).torsion_free,
                  f"{auto.nrels}x{auto.ngens}, {torsion_verdict(auto).kind}")
        mod2 = base_change_mod_p(reduced, 2)
        res.check("mod 2 row", entries_equal_up_to_units(mod2.matrix, _matrix(exp["mod2"], V, 2)),
                  str(mod2.matrix))
    res.check("torsion", torsion.kind == exp["torsion"], torsion.kind)
    res.check("freeness", freeness.kind == exp["freeness"] and freeness.prime == exp["freeness_prime"],
              f"{freeness.kind} at p = {freeness.prime}")
    res.check("bounds", [report.bounds.lower, report.bounds.upper] == exp["bounds"], str(report.bounds))
    return res


def same_relators(got, want) -> bool:
    from .words import Word
    want = [Word.parse(w) for w in want]
    if len(got) != len(want):
        return False
    pool = list(want)
    for r in got:
        hit = next((w for w in pool if r.cyclically_equal(w) or r.cyclically_equal(w.inverse())), None)
        if hit is None:
            return False
        pool.remove(hit)
    return True


def genus3_module():
    bundle = load_bundle("genus3")
    full = load_presentation(bundle["presentation"])
    pres, trace = auto_simplify(full, keep=bundle["keep"])
    ab = abelianize(pres, bundle["basis"])
    return full, pres, trace, ab, relative_module(pres, ab)


def run_genus3() -> PipelineResult:
    bundle = load_bundle("genus3")
    exp = bundle["expected"]
    full, pres, trace, ab, m = genus3_module()
    V = m.variables
    rank = module_rank(m)
    freeness = freeness_verdict(m, rank.module_rank, bundle["primes"])
    script = load_script(bundle["reduction"])
    reduced = apply_reduction(m, script)
    torsion = torsion_verdict(reduced)
    SV = tuple(bundle["specialized_variables"])
    special = base_change_substitute(reduced, bundle["specialization"], SV)
    special_torsion = torsion_verdict(special)
    cert = load_certificate(bundle["certificate"])
    report = build_report("genus3", ab.rank, "relative", n=ab.rank, rank=rank, torsion=torsion,
                          freeness=freeness, certificate=cert, presentation=full,
                          scripts={"simplify": trace, "reduction": script.to_json()})

    res = PipelineResult("genus3", report, data={"presentation": pres, "module": m,
                                                 "reduced": reduced, "specialized": special})
    res.check("simplification", len(pres.generators) == 5 and same_relators(pres.relators, exp["simplified_relators"]),
              str(pres))
    res.check("betti", ab.rank == exp["betti"], f"beta_1 = {ab.rank}")
    res.check("relative matrix", rows_equal_up_to_units(m.matrix, _matrix(exp["relative_matrix"], V)),
              "rows agree with the displayed Jacobian up to Laurent units")
    res.check("module rank", rank.module_rank == exp["module_rank"], f"rank {rank.module_rank}")
    res.check("freeness", freeness.kind == exp["freeness"] and freeness.prime == exp["freeness_prime"],
              f"{freeness.kind} at p = {freeness.prime}")
    res.check("scripted reduction", entries_equal_up_to_units(reduced.matrix, _matrix(exp["reduced"], V)),
              "matches the displayed 1x4 row up to per-entry units")
    res.check("specialization", entries_equal_up_to_units(special.matrix, _matrix(exp["specialized"], SV)),
              "b -> t gives the displayed row up to per-entry units")
    gcds = {k: str(v) for k, v in special_torsion.pair_gcds.items()}
    want = {tuple(map(int, k.split(","))): str(_matrix([[v]], SV)[0, 0])
            for k, v in exp["specialized_pair_gcds"].items()}
    res.check("specialized pair gcds", gcds == want, str(gcds))
    res.check("torsion", torsion.kind == exp["torsion"], f"{torsion.kind}, coprime pair {torsion.witness}")
    res.check("bounds", [report.bounds.lower, report.bounds.upper] == exp["bounds"], str(report.bounds))
    return res


def handlebody_report(pres: GroupPresentation) -> ObstructionReport:
    """A free group on ``n`` letters has co-rank exactly ``n`` (identity certificate)."""
    if pres.relators:
        raise ValueError("handlebody presentations have no relators")
    from .words import Word
    n = len(pres.generators)
    cert = FreeQuotientCertificate(n, {g: Word.letter(f"f{i + 1}") for i, g in enumerate(pres.generators)},
                                   tuple(Word.letter(g) for g in pres.generators))
    return build_report("handlebody", n, None, certificate=cert, presentation=pres)


def tower(G: int, y2: CorankBounds | None = None, y3: CorankBounds | None = None):
    """Bounds for ``Y_1 .. Y_G`` with ``Y_g`` the boundary sum of ``Y_{g-2}`` and ``Y_2``.

    ``y2`` and ``y3`` default to the bounds certified by the tripus and
    genus-3 pipelines; ``Y_1`` is a solid torus.
    """
    if G < 1:
        raise ValueError("genus must be at least 1")
    y1 = meet(lower_bound(1), betti_upper(1))
    y2 = y2 or CorankBounds(1, 1, "tripus pipeline", "tripus pipeline")
    y3 = y3 or CorankBounds(2, 2, "genus-3 pipeline", "genus-3 pipeline")
    out = {1: y1, 2: y2, 3: y3}
    for g in range(4, G + 1):
        out[g] = combine_boundary_sum(out[g - 2], y2)
    return [(g, out[g], r_of_g(g)) for g in range(1, G + 1)]
