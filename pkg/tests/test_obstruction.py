import json

import pytest
from hypothesis import given, strategies as st

from corank.fox import ModulePresentation
from corank.laurent import LaurentMatrix
from corank.modules import FreenessVerdict, RankCertificate, TorsionVerdict, freeness_verdict, module_rank, torsion_verdict
from corank.obstruction import (CorankBounds, PremiseError, build_report, combine_boundary_sum,
                                lower_bound, meet, r_of_g, upper_bound_relative, upper_bound_summand)
from corank.pipeline import handlebody_report, load_certificate, tower
from corank.words import FreeQuotientCertificate, Word, parse_presentation

from .conftest import M


def fake_rank(r, ngens=2):
    m = ModulePresentation(tuple(f"g{k}" for k in range(ngens)), LaurentMatrix([], ngens, ("a", "c")))
    return RankCertificate(m, ngens - r, r)


TF = TorsionVerdict("torsion_free", witness=(0, 1))
TORSION = TorsionVerdict("has_torsion")
NOT_FREE = FreenessVerdict("not_free", prime=2, tried=(2,))
UNKNOWN = FreenessVerdict("free_unknown", tried=(2, 3))


def test_r_of_g():
    assert [r_of_g(g) for g in range(1, 9)] == [1, 1, 2, 2, 3, 3, 4, 4]
    assert r_of_g(7) == 4
    with pytest.raises(ValueError):
        r_of_g(0)


def test_bounds_validation():
    with pytest.raises(AssertionError):
        CorankBounds(2, 1)
    with pytest.raises(ValueError):
        CorankBounds(-1, None)
    assert str(CorankBounds(1, None)) == "1 <= corank <= inf"
    assert CorankBounds(1, 1).exact and not CorankBounds(1, None).exact


def test_summand_lemma():
    b = upper_bound_summand(2, fake_rank(1), TF, NOT_FREE)
    assert (b.lower, b.upper) == (0, 1)
    assert "mod 2" in b.upper_reason


@pytest.mark.parametrize("args", [
    (3, fake_rank(1), TF, NOT_FREE),
    (2, fake_rank(2), TF, NOT_FREE),
    (2, fake_rank(1), TORSION, NOT_FREE),
    (2, fake_rank(1), TF, UNKNOWN),
])
def test_summand_premises(args):
    with pytest.raises(PremiseError):
        upper_bound_summand(*args)


def test_relative_lemma():
    b = upper_bound_relative(3, 3, fake_rank(3, 5), TF, NOT_FREE)
    assert b.upper == 2
    with pytest.raises(PremiseError):
        upper_bound_relative(2, 3, fake_rank(3, 5), TF, NOT_FREE)
    with pytest.raises(PremiseError):
        upper_bound_relative(3, 3, fake_rank(2, 5), TF, NOT_FREE)
    with pytest.raises(PremiseError):
        upper_bound_relative(0, 0, fake_rank(0, 1), TF, NOT_FREE)


def test_lower_bound(tripus):
    assert lower_bound(0).lower == 0
    assert lower_bound(2).lower == 1
    cert = load_certificate("tripus_certificate.json")
    assert lower_bound(2, cert, tripus).lower == 1
    with pytest.raises(PremiseError):
        lower_bound(2, cert)
    bad = FreeQuotientCertificate(1, {"a": Word.parse("f1"), "b": Word(), "c": Word(), "d": Word()},
                                  (Word.parse("a"),))
    with pytest.raises(PremiseError):
        lower_bound(2, bad, tripus)


def test_genus3_certificate(genus3):
    b = lower_bound(3, load_certificate("genus3_certificate.json"), genus3)
    assert b.lower == 2 and "F(2)" in b.lower_reason


def test_meet():
    b = meet(CorankBounds(1, None, "x"), CorankBounds(0, 3, "", "y"), CorankBounds(0, 2, "", "z"))
    assert (b.lower, b.upper, b.lower_reason, b.upper_reason) == (1, 2, "x", "z")
    assert meet(CorankBounds(1, None)).upper is None
    with pytest.raises(AssertionError):
        meet(CorankBounds(3, None), CorankBounds(0, 1))


bounds_st = st.tuples(st.integers(0, 5), st.one_of(st.none(), st.integers(0, 5))).filter(
    lambda t: t[1] is None or t[0] <= t[1]).map(lambda t: CorankBounds(*t))


def pair(b):
    return (b.lower, b.upper)


@given(bounds_st, bounds_st, bounds_st)
def test_combine_laws(x, y, z):
    assert pair(combine_boundary_sum(x, y)) == pair(combine_boundary_sum(y, x))
    assert pair(combine_boundary_sum(combine_boundary_sum(x, y), z)) == \
        pair(combine_boundary_sum(x, combine_boundary_sum(y, z)))


@given(bounds_st, bounds_st, bounds_st)
def test_combine_monotone(x, y, z):
    # tightening one summand never loosens the sum
    tight = meet(x, y) if (y.upper is None or x.lower <= y.upper) and (x.upper is None or y.lower <= x.upper) else None
    if tight is None:
        return
    loose = combine_boundary_sum(x, z)
    t = combine_boundary_sum(tight, z)
    assert t.lower >= loose.lower
    assert loose.upper is None or (t.upper is not None and t.upper <= loose.upper)


def test_combine_none_absorbs():
    assert combine_boundary_sum(CorankBounds(1, None), CorankBounds(1, 1)).upper is None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_handlebody(n):
    gens = "xyz"[:n]
    rep = handlebody_report(parse_presentation(f"gens: {' '.join(gens)}\nrels:"))
    assert (rep.bounds.lower, rep.bounds.upper) == (n, n)
    with pytest.raises(ValueError):
        handlebody_report(parse_presentation("gens: x\nrels: x x"))


def test_tower():
    rows = tower(20)
    assert [g for g, _, _ in rows] == list(range(1, 21))
    for g, b, r in rows:
        assert b.exact and b.lower == r
    assert tower(7)[-1][1].lower == 4


def test_tower_with_loose_inputs():
    rows = tower(6, y2=CorankBounds(1, None))
    for g, b, r in rows:
        assert b.lower <= r and (b.upper is None or b.upper >= r)


def tripus_reduced():
    return ModulePresentation(("B", "Theta"), M([["a*c+a-1", "2*a^2*c"]]))


def test_build_report_summand():
    m = ModulePresentation(("B", "D", "Theta"), M([["a+c-1", "a*(a-1)", "a-1"], ["c*(1-c)", "1", "c-1"]]))
    rank = module_rank(m)
    rep = build_report("tripus", 2, "summand", rank=rank, torsion=torsion_verdict(tripus_reduced()),
                       freeness=freeness_verdict(m, 1, [2]))
    assert (rep.bounds.lower, rep.bounds.upper) == (1, 1)
    assert any("not very large" in s for s in rep.narrative)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["bounds"] == {"lower": 1, "upper": 1}
    assert data["freeness"]["prime"] == 2 and data["torsion"]["verdict"] == "torsion_free"
    assert "1 <= corank <= 1" in rep.text()


def test_build_report_errors():
    with pytest.raises(PremiseError):
        build_report("x", 2, "summand")
    with pytest.raises(PremiseError):
        build_report("x", 2, "relative", rank=fake_rank(2), torsion=TF, freeness=NOT_FREE)
    with pytest.raises(ValueError):
        build_report("x", 2, "other")


def test_no_lemma_report():
    rep = build_report("free", 3)
    assert (rep.bounds.lower, rep.bounds.upper) == (1, 3)
