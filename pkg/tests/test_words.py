import json

import pytest
from hypothesis import given, strategies as st

from corank.abelianization import relator_matrix, smith_normal_form
from corank.pipeline import fixture_text, load_certificate
from corank.words import (FreeQuotientCertificate, GroupPresentation, PresentationError,
                          PresentationSyntaxError, Word, auto_simplify, eliminate_generator,
                          free_reduce, invert, kill_generators, parse_presentation, replay_trace,
                          substitute_generators, verify_free_quotient, word_multiply)

GENS = "abcd"


def naive_reduce(letters):
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for k in range(len(letters) - 1):
            if letters[k][0] == letters[k + 1][0] and letters[k][1] == -letters[k + 1][1]:
                del letters[k:k + 2]
                changed = True
                break
    return tuple(letters)


def random_letters(rng, n, gens=GENS):
    return tuple((rng.choice(gens), rng.choice((1, -1))) for _ in range(n))


letters_st = st.lists(st.tuples(st.sampled_from(GENS), st.sampled_from((1, -1))), max_size=30)


# -- words ----------------------------------------------------------------------


def test_multiply_cancels():
    assert word_multiply(Word.parse("a b"), Word.parse("b' c")) == Word.parse("a c")


def test_square_is_two_letters():
    w = word_multiply(Word.parse("a"), Word.parse("a"))
    assert w.letters == (("a", 1), ("a", 1))
    assert w == Word.parse("a^2")


def test_times_inverse_is_empty(rng):
    for _ in range(1000):
        u = Word(random_letters(rng, rng.randint(0, 20)))
        assert not word_multiply(u, invert(u))
        assert naive_reduce(u.letters + invert(u).letters) == ()


def test_free_reduce_matches_naive(rng):
    for _ in range(500):
        raw = random_letters(rng, rng.randint(0, 25), "ab")
        assert free_reduce(raw) == naive_reduce(raw)


@given(letters_st)
def test_free_reduce_idempotent_and_shrinking(raw):
    once = free_reduce(raw)
    assert free_reduce(once) == once
    assert len(once) <= len(raw)


def test_word_parse_and_print():
    w = Word.parse("a b' c^2 d^-2")
    assert str(w) == "a b' c c d' d'"
    assert str(Word()) == "1"
    with pytest.raises(PresentationError):
        Word.parse("a^0")


def test_cyclic_equality():
    w = Word.parse("a b c")
    assert w.cyclically_equal(Word.parse("b c a"))
    assert w.cyclically_equal(Word.parse("c' b' a'"))
    assert not w.cyclically_equal(Word.parse("a c b"))


# -- parsing ---------------------------------------------------------------------


def test_parse_commutator():
    p = parse_presentation("gens: a c\nrels: a c a' c'")
    assert p.generators == ("a", "c")
    assert len(p.relators) == 1 and len(p.relators[0]) == 4


def test_parse_wirtinger(tripus):
    p = parse_presentation(fixture_text("tripus_wirtinger.pres"))
    assert len(p.generators) == 6 and len(p.relators) == 5
    assert p.relators[0] == Word.parse("a c e")
    assert p.relators[1] == Word.parse("b d f")


def test_parse_reduces_to_empty():
    p = parse_presentation("gens: a\nrels: a a'")
    assert len(p.relators) == 1 and not p.relators[0]


def test_parse_comments_and_commas():
    text = "# header\ngens: x y  # two\nrels: x y, y x'\n x^3\n"
    p = parse_presentation(text)
    assert [str(r) for r in p.relators] == ["x y", "y x'", "x x x"]


@pytest.mark.parametrize("text, line, column", [
    ("gens: a b\nrels: a c", 2, 9),
    ("gens: a a", 1, 9),
    ("rels: a", 1, 1),
    ("gens: a\nrels: a b^x", 2, 9),
    ("gens: a\nrels: a\nredundant: z", 3, 12),
])
def test_parse_errors_carry_location(text, line, column):
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_dsl_round_trip(tripus):
    again = parse_presentation(tripus.to_dsl())
    assert again == tripus
    assert tripus.redundant == {2}
    assert len(tripus.drop_redundant().relators) == 2


# -- Tietze moves -----------------------------------------------------------------


def test_eliminate_from_ace():
    p = parse_presentation("gens: a c e\nrels: a c e")
    q = eliminate_generator(p, 0, "e")
    assert q.generators == ("a", "c") and q.relators == ()


def test_eliminate_simple():
    q = eliminate_generator(parse_presentation("gens: x y\nrels: x y"), 0, "y")
    assert q.generators == ("x",) and q.relators == ()


def test_eliminate_errors():
    p = parse_presentation("gens: x y\nrels: x y x")
    with pytest.raises(PresentationError):
        eliminate_generator(p, 0, "x")
    with pytest.raises(PresentationError):
        eliminate_generator(p, 3, "y")


def test_genus3_first_eliminations(genus3):
    cur = genus3
    for g in "agru":
        idx = [i for i, r in enumerate(cur.relators) if r.occurrences(g) == 1]
        assert len(idx) == 1, g
        cur = eliminate_generator(cur, idx[0], g)
    assert len(cur.generators) == 11 and len(cur.relators) == 8
    display = ["b x b' y'", "x z x' y'", "e z e' w'", "t e t' f'",
               "s b s' c'", "f s f' t'", "b d b' c'", "w d w' e'"]
    assert sorted(cur.generators) == sorted("bcdefstxyzw")
    pool = [Word.parse(d) for d in display]
    for r in cur.relators:
        hit = [w for w in pool if r.cyclically_equal(w)]
        assert hit, str(r)
        pool.remove(hit[0])


def test_substitute_tripus(tripus):
    table = {"a": Word.parse("a"), "b": Word.parse("B a"), "c": Word.parse("c"), "d": Word.parse("D c")}
    inverse = {"a": Word.parse("a"), "B": Word.parse("b a'"), "c": Word.parse("c"), "D": Word.parse("d c'")}
    q = substitute_generators(tripus, table, inverse)
    assert q.generators == ("a", "B", "c", "D")
    back = substitute_generators(q, inverse, table)
    assert back.relators == tripus.relators


def test_substitute_identity(tripus):
    ident = {g: Word.letter(g) for g in tripus.generators}
    assert substitute_generators(tripus, ident, ident).relators == tripus.relators


def test_substitute_rejects_non_inverse(tripus):
    table = {g: Word.letter(g) for g in tripus.generators}
    bad = dict(table, b=Word.parse("b a"))
    with pytest.raises(PresentationError):
        substitute_generators(tripus, table, bad)
    with pytest.raises(PresentationError):
        substitute_generators(tripus, {"a": Word.parse("a")}, table)


def _invariants(p):
    return smith_normal_form(relator_matrix(p), len(p.generators)).invariant_factors


def test_substitute_round_trip_random(rng):
    # Nielsen-type tables x -> x y^k keep the group and the abelianization
    for _ in range(100):
        gens = ("a", "b", "c")
        rels = [Word(random_letters(rng, 8, "abc")) for _ in range(2)]
        p = GroupPresentation(gens, [r for r in rels if r])
        x, y = rng.sample(gens, 2)
        k = rng.choice((1, -1, 2))
        table = {g: Word.letter(g) for g in gens}
        inverse = dict(table)
        table[x] = Word.letter(x) * Word.letter(y, k)
        inverse[x] = Word.letter(x) * Word.letter(y, -k)
        q = substitute_generators(p, table, inverse)
        assert substitute_generators(q, inverse, table).relators == p.relators
        assert _invariants(q) == _invariants(p)


def test_eliminate_preserves_abelianization(rng):
    checked = 0
    while checked < 100:
        gens = ("a", "b", "c", "d")
        rels = [Word(random_letters(rng, rng.randint(3, 9))) for _ in range(3)]
        p = GroupPresentation(gens, [r for r in rels if r])
        cand = [(i, g) for i, r in enumerate(p.relators) for g in gens if r.occurrences(g) == 1]
        if not cand:
            continue
        i, g = rng.choice(cand)
        q = eliminate_generator(p, i, g)
        a, b = _invariants(p), _invariants(q)
        # free rank drops with the generator count only through the removed pair
        assert [d for d in a if d != 1] == [d for d in b if d != 1]
        assert len(p.generators) - len(a) == len(q.generators) - len(b)
        checked += 1


def test_kill(genus3):
    assert kill_generators(genus3, ()) == genus3
    p = parse_presentation("gens: a b\nrels: a b a' b'")
    q = kill_generators(p, {"b"})
    assert q.generators == ("a",) and q.relators == ()
    with pytest.raises(PresentationError):
        kill_generators(p, {"z"})


def test_strand_kill_brute_force(genus3):
    strands = {"xyzuw": False, "abcdefg": True, "rst": False}
    for strand, free in strands.items():
        q, _ = auto_simplify(kill_generators(genus3, strand))
        assert (not q.relators) == free, strand
        if free:
            assert len(q.generators) == 2


def test_auto_simplify_free_unchanged():
    p = parse_presentation("gens: a b\nrels:")
    q, trace = auto_simplify(p)
    assert q == p and trace == []


def test_auto_simplify_trivial_group():
    p = parse_presentation("gens: a b\nrels: a b, b")
    q, trace = auto_simplify(p)
    assert q.generators == () and q.relators == ()
    assert [m["gen"] for m in trace] == ["a", "b"]


def test_auto_simplify_genus3(genus3):
    q, trace = auto_simplify(genus3, keep="bftxw")
    assert q.generators == tuple("bftxw") and len(q.relators) == 2
    paper = [Word.parse("b' x t' f' t w t' f t x' b x'"),
             Word.parse("f' t' f b w' t' f t w b' f' t f b'")]
    assert all(any(r.cyclically_equal(w) for w in paper) for r in q.relators)
    assert replay_trace(genus3, trace) == q
    json.dumps(trace)


def test_auto_simplify_unrestricted_fixed_point(genus3):
    q, trace = auto_simplify(genus3)
    assert (len(q.generators), len(q.relators)) == (4, 1)
    assert replay_trace(genus3, trace) == q
    for r in q.relators:
        assert all(r.occurrences(g) != 1 for g in q.generators)


def test_tripus_from_wirtinger(tripus):
    w = parse_presentation(fixture_text("tripus_wirtinger.pres"))
    q, _ = auto_simplify(w, keep="abcd")
    assert q.generators == tuple("abcd") and len(q.relators) == 3
    assert _invariants(q) == _invariants(tripus)


# -- certificates -----------------------------------------------------------------


def test_tripus_certificate(tripus):
    cert = load_certificate("tripus_certificate.json")
    assert verify_free_quotient(tripus, cert)


def test_genus3_certificate(genus3):
    cert = load_certificate("genus3_certificate.json")
    assert verify_free_quotient(genus3, cert)
    assert cert.to_json()["witnesses"] == ["x", "r"]
    # independent check with the naive reducer
    for r in genus3.relators:
        pushed = [l for g, e in r for l in (cert.images[g].letters if e == 1 else cert.images[g].inverse().letters)]
        assert naive_reduce(pushed) == ()


def test_certificate_all_empty_invalid(tripus):
    cert = FreeQuotientCertificate(1, {g: Word() for g in tripus.generators}, (Word.parse("a"),))
    v = verify_free_quotient(tripus, cert)
    assert not v and "witness" in v.reason


def test_certificate_relator_failure():
    p = parse_presentation("gens: a b\nrels: a b a' b'")
    cert = FreeQuotientCertificate(2, {"a": Word.parse("f1"), "b": Word.parse("f2")},
                                   (Word.parse("a"), Word.parse("b")))
    v = verify_free_quotient(p, cert)
    assert not v and "relator 0" in v.reason


def test_certificate_json_round_trip():
    cert = load_certificate("genus3_certificate.json")
    assert FreeQuotientCertificate.from_json(cert.to_json()) == cert
