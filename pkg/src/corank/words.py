"""Free-group words, group presentations and Tietze moves."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

Letter = tuple[str, int]

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_LETTER = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:(')|\^(-?\d+))?\Z")


class PresentationError(ValueError):
    """Invalid presentation or inapplicable Tietze move."""


class PresentationSyntaxError(PresentationError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; letters are ``(generator, ±1)`` pairs."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, e in self.letters:
            if not g or e not in (1, -1):
                raise PresentationError(f"bad letter {(g, e)!r}")
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"a b' c^2"``; whitespace separated letters."""
        letters: list[Letter] = []
        for tok in text.split():
            letters.extend(_parse_letter(tok))
        return cls(tuple(letters))

    @classmethod
    def letter(cls, name: str, exp: int = 1) -> "Word":
        return cls(((name, 1 if exp > 0 else -1),) * abs(exp))

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def occurrences(self, gen: str) -> int:
        return sum(1 for g, _ in self.letters if g == gen)

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.letters if g == gen)

    def substitute(self, table: Mapping[str, "Word"]) -> "Word":
        out: list[Letter] = []
        for g, e in self.letters:
            if g in table:
                w = table[g] if e == 1 else table[g].inverse()
                out.extend(w.letters)
            else:
                out.append((g, e))
        return Word(tuple(out))

    def cyclic_reduce(self) -> "Word":
        letters = self.letters
        while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
            letters = letters[1:-1]
        return Word(letters)

    def cyclically_equal(self, other: "Word") -> bool:
        """Equal up to cyclic permutation and inversion."""
        a = self.cyclic_reduce().letters
        for cand in (other.cyclic_reduce(), other.inverse().cyclic_reduce()):
            b = cand.letters
            if len(a) == len(b) and (not a or any(b[k:] + b[:k] == a for k in range(len(b)))):
                return True
        return False

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else g + "'" for g, e in self.letters)


def _parse_letter(tok: str) -> list[Letter]:
    m = _LETTER.match(tok)
    if not m:
        raise PresentationError(f"bad letter {tok!r}")
    name, prime, power = m.groups()
    if prime:
        return [(name, -1)]
    if power is None:
        return [(name, 1)]
    k = int(power)
    if k == 0:
        raise PresentationError(f"zero exponent in {tok!r}")
    return [(name, 1 if k > 0 else -1)] * abs(k)


def word_multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    redundant: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(self.relators))
        object.__setattr__(self, "redundant", frozenset(self.redundant))
        if len(set(gens)) != len(gens):
            dup = sorted({g for g in gens if gens.count(g) > 1})
            raise PresentationError(f"duplicate generators {dup}")
        for g in gens:
            if not _NAME.match(g):
                raise PresentationError(f"bad generator name {g!r}")
        known = set(gens)
        for i, r in enumerate(self.relators):
            extra = r.generators() - known
            if extra:
                raise PresentationError(f"relator {i} uses undeclared generators {sorted(extra)}")
        for i in self.redundant:
            if not 0 <= i < len(self.relators):
                raise PresentationError(f"redundant relator index {i} out of range")

    def __str__(self):
        rels = ", ".join(str(r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"

    def to_dsl(self) -> str:
        lines = ["gens: " + " ".join(self.generators), "rels:"]
        lines += [str(r) if r else "" for r in self.relators]
        if self.redundant:
            lines.append("redundant: " + " ".join(str(i) for i in sorted(self.redundant)))
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {"generators": list(self.generators),
                "relators": [str(r) for r in self.relators]}

    def drop_redundant(self) -> "GroupPresentation":
        """Delete the relators flagged ``redundant:`` (only ever done on explicit trust)."""
        keep = [r for i, r in enumerate(self.relators) if i not in self.redundant]
        return GroupPresentation(self.generators, keep)


def parse_presentation(text: str) -> GroupPresentation:
    """Parse the presentation DSL.

    ``gens:`` names the generators; ``rels:`` is followed by relators, one
    per line or comma separated. An optional ``redundant:`` line lists
    0-based relator indices that may be dropped under explicit trust.
    ``#`` starts a comment.
    """
    gens: list[str] | None = None
    rels: list[Word] = []
    redundant: list[int] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        if gens is None:
            if not stripped.startswith("gens:"):
                raise PresentationSyntaxError("expected 'gens:'", lineno, col)
            gens = stripped[5:].split()
            seen = set()
            for g in gens:
                if not _NAME.match(g):
                    raise PresentationSyntaxError(f"bad generator name {g!r}", lineno,
                                                  line.index(g) + 1)
                if g in seen:
                    raise PresentationSyntaxError(f"duplicate generator {g!r}", lineno,
                                                  line.rindex(g) + 1)
                seen.add(g)
            section = "gens"
            continue
        if stripped.startswith("rels:"):
            if section != "gens":
                raise PresentationSyntaxError("unexpected 'rels:'", lineno, col)
            section = "rels"
            offset = line.index("rels:") + 5
            body = line[offset:]
        elif stripped.startswith("redundant:"):
            if section != "rels":
                raise PresentationSyntaxError("'redundant:' must follow 'rels:'", lineno, col)
            section = "redundant"
            for tok in stripped[10:].replace(",", " ").split():
                if not tok.isdigit():
                    raise PresentationSyntaxError(f"bad relator index {tok!r}", lineno,
                                                  line.index(tok) + 1)
                redundant.append(int(tok))
            continue
        elif section == "rels":
            offset = 0
            body = line
        else:
            raise PresentationSyntaxError("text outside a section", lineno, col)
        start = offset
        for chunk in body.split(","):
            letters: list[Letter] = []
            pos = 0
            for tok in chunk.split():
                pos = chunk.index(tok, pos)
                column = start + pos + 1
                try:
                    parsed = _parse_letter(tok)
                except PresentationError as exc:
                    raise PresentationSyntaxError(str(exc), lineno, column) from None
                if parsed[0][0] not in gens:
                    raise PresentationSyntaxError(f"undeclared generator {parsed[0][0]!r}",
                                                  lineno, column)
                letters.extend(parsed)
                pos += len(tok)
            if chunk.strip():
                rels.append(Word(tuple(letters)))
            start += len(chunk) + 1
    if gens is None:
        raise PresentationSyntaxError("missing 'gens:' line", 1, 1)
    try:
        return GroupPresentation(tuple(gens), tuple(rels), frozenset(redundant))
    except PresentationError as exc:
        raise PresentationSyntaxError(str(exc), 1, 1) from None


# -- Tietze moves ------------------------------------------------------------


def _without_empty(rels):
    return tuple(r for r in rels if r)


def solve_for(relator: Word, gen: str) -> Word:
    """Solve ``relator = 1`` for ``gen`` (which must occur exactly once)."""
    pos = [k for k, (g, _) in enumerate(relator.letters) if g == gen]
    if len(pos) != 1:
        raise PresentationError(f"{gen!r} occurs {len(pos)} times in {relator}, need exactly 1")
    k = pos[0]
    e = relator.letters[k][1]
    u = Word(relator.letters[:k])
    v = Word(relator.letters[k + 1:])
    sol = u.inverse() * v.inverse()
    return sol if e == 1 else sol.inverse()


def eliminate_generator(pres: GroupPresentation, relator_index: int, gen: str) -> GroupPresentation:
    if not 0 <= relator_index < len(pres.relators):
        raise PresentationError(f"relator index {relator_index} out of range")
    if gen not in pres.generators:
        raise PresentationError(f"unknown generator {gen!r}")
    sol = solve_for(pres.relators[relator_index], gen)
    table = {gen: sol}
    rels = [r.substitute(table) for i, r in enumerate(pres.relators) if i != relator_index]
    return GroupPresentation(tuple(g for g in pres.generators if g != gen), _without_empty(rels))


def substitute_generators(pres: GroupPresentation, table: Mapping[str, Word],
                          inverse_table: Mapping[str, Word]) -> GroupPresentation:
    """Rewrite relators over new generators.

    ``table`` writes each old generator in the new ones; ``inverse_table``
    writes each new generator in the old ones. The tables must be mutually
    inverse.
    """
    missing = set(pres.generators) - set(table)
    if missing:
        raise PresentationError(f"table is missing generators {sorted(missing)}")
    new_gens = tuple(inverse_table)
    for g in pres.generators:
        back = table[g].substitute(inverse_table)
        if back != Word.letter(g):
            raise PresentationError(f"tables are not mutually inverse on {g!r}: {back}")
    for h in new_gens:
        back = inverse_table[h].substitute(table)
        if back != Word.letter(h):
            raise PresentationError(f"tables are not mutually inverse on {h!r}: {back}")
    rels = [r.substitute(table) for r in pres.relators]
    return GroupPresentation(new_gens, _without_empty(rels))


def kill_generators(pres: GroupPresentation, gens: Iterable[str]) -> GroupPresentation:
    gens = set(gens)
    unknown = gens - set(pres.generators)
    if unknown:
        raise PresentationError(f"unknown generators {sorted(unknown)}")
    table = {g: Word() for g in gens}
    rels = [r.substitute(table) for r in pres.relators]
    return GroupPresentation(tuple(g for g in pres.generators if g not in gens),
                             _without_empty(rels))


def auto_simplify(pres: GroupPresentation, keep: Iterable[str] = ()):
    """Eliminate generators occurring exactly once in some relator until none remain.

    The scan takes the lowest relator index, then the lowest generator index;
    generators in ``keep`` are never eliminated. Returns the simplified
    presentation and a replayable trace of moves.
    """
    keep = set(keep)
    unknown = keep - set(pres.generators)
    if unknown:
        raise PresentationError(f"unknown generators in keep: {sorted(unknown)}")
    trace = []
    cur = GroupPresentation(pres.generators, _without_empty(pres.relators))
    while True:
        move = None
        for i, r in enumerate(cur.relators):
            for g in cur.generators:
                if g not in keep and r.occurrences(g) == 1:
                    move = (i, g)
                    break
            if move:
                break
        if move is None:
            return cur, trace
        i, g = move
        trace.append({"move": "eliminate", "relator": i, "gen": g,
                      "solution": str(solve_for(cur.relators[i], g))})
        cur = eliminate_generator(cur, i, g)


def replay_trace(pres: GroupPresentation, trace) -> GroupPresentation:
    cur = GroupPresentation(pres.generators, _without_empty(pres.relators))
    for move in trace:
        if move["move"] != "eliminate":
            raise PresentationError(f"unknown move {move['move']!r}")
        cur = eliminate_generator(cur, move["relator"], move["gen"])
    return cur


# -- free quotient certificates ------------------------------------------------


@dataclass(frozen=True)
class FreeQuotientCertificate:
    """An epimorphism onto the free group on ``f1..fn``, with explicit preimages."""

    target_rank: int
    images: Mapping[str, Word]
    witnesses: tuple[Word, ...]

    def __post_init__(self):
        if self.target_rank < 1:
            raise PresentationError("target rank must be positive")
        if len(self.witnesses) != self.target_rank:
            raise PresentationError("need one witness per free generator")
        object.__setattr__(self, "images", dict(self.images))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    @property
    def free_letters(self) -> tuple[str, ...]:
        return tuple(f"f{i + 1}" for i in range(self.target_rank))

    @classmethod
    def from_json(cls, data) -> "FreeQuotientCertificate":
        return cls(int(data["target_rank"]),
                   {g: Word.parse(w) for g, w in data["images"].items()},
                   tuple(Word.parse(w) for w in data["witnesses"]))

    def to_json(self):
        return {"target_rank": self.target_rank,
                "images": {g: str(w) if w else "" for g, w in self.images.items()},
                "witnesses": [str(w) for w in self.witnesses]}


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str = ""

    def __bool__(self):
        return self.valid


def verify_free_quotient(pres: GroupPresentation, cert: FreeQuotientCertificate) -> Verdict:
    missing = set(pres.generators) - set(cert.images)
    if missing:
        return Verdict(False, f"images missing for {sorted(missing)}")
    letters = set(cert.free_letters)
    for g, w in cert.images.items():
        extra = w.generators() - letters
        if extra:
            return Verdict(False, f"image of {g} uses letters {sorted(extra)} outside F({cert.target_rank})")
    for i, r in enumerate(pres.relators):
        img = r.substitute(cert.images)
        if img:
            return Verdict(False, f"relator {i} maps to {img}, not 1")
    for i, w in enumerate(cert.witnesses):
        extra = w.generators() - set(pres.generators)
        if extra:
            return Verdict(False, f"witness {i} uses unknown generators {sorted(extra)}")
        img = w.substitute(cert.images)
        if img != Word.letter(f"f{i + 1}"):
            return Verdict(False, f"witness {i} maps to {img}, not f{i + 1}")
    return Verdict(True)
