"""Quivers with monomial relations and their path-basis combinatorics.

A finite-dimensional monomial algebra is presented by a quiver and a set of
paths of length >= 2 declared zero.  Paths compose left to right: in the word
``a b`` the arrow ``a`` is traversed first, so the word is a path from
``source(a)`` to ``target(b)``.  A word is zero exactly when it contains a
declared relation as a contiguous subword, so the nonzero paths form a basis
of the algebra.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .gf import DEFAULT_PRIME

Word = tuple[str, ...]


class QuiverError(ValueError):
    """Malformed quiver text or inconsistent presentation data."""


class InfiniteDimensionalError(QuiverError):
    """The presentation admits arbitrarily long nonzero paths."""

    def __init__(self, cycle: Word):
        self.cycle = cycle
        super().__init__(
            "algebra is infinite dimensional: the cycle "
            f"{' '.join(cycle)} repeats without meeting a relation"
        )


class BPath(NamedTuple):
    """A basis path: a source vertex and a possibly empty arrow word."""

    src: str
    word: Word


@dataclass(frozen=True)
class SerialClass:
    right_serial: bool
    left_serial: bool
    nakayama: bool
    cyclic_part: frozenset[str]
    tree_part: frozenset[str]


@dataclass
class MonomialAlgebra:
    vertices: tuple[str, ...]
    arrows: dict[str, tuple[str, str]]
    relations: tuple[Word, ...]
    prime: int = DEFAULT_PRIME
    name: str = "algebra"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self) -> None:
        if self.prime < 2 or any(
            self.prime % k == 0 for k in range(2, int(self.prime**0.5) + 1)
        ):
            raise QuiverError(f"coefficient field needs a prime, got {self.prime}")
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise QuiverError(f"duplicate vertex {v!r}")
            seen.add(v)
        for a, (s, t) in self.arrows.items():
            if s not in seen or t not in seen:
                raise QuiverError(f"arrow {a!r} uses undeclared vertex")
        for rel in self.relations:
            if len(rel) < 2:
                raise QuiverError(f"relation {' '.join(rel)!r} shorter than 2")
            self._check_word(rel)
        self._check_finite()

    def _check_word(self, word: Word) -> None:
        for a in word:
            if a not in self.arrows:
                raise QuiverError(f"unknown arrow {a!r} in {' '.join(word)!r}")
        for a, b in zip(word, word[1:]):
            if self.arrows[a][1] != self.arrows[b][0]:
                raise QuiverError(f"word {' '.join(word)!r} is not composable")

    def source(self, arrow: str) -> str:
        return self.arrows[arrow][0]

    def target(self, arrow: str) -> str:
        return self.arrows[arrow][1]

    def word_source(self, word: Word) -> str:
        return self.arrows[word[0]][0]

    def word_target(self, word: Word) -> str:
        return self.arrows[word[-1]][1]

    def path_target(self, path: BPath) -> str:
        return path.src if not path.word else self.word_target(path.word)

    def arrows_from(self, v: str) -> list[str]:
        return [a for a, (s, _) in self.arrows.items() if s == v]

    def arrows_into(self, v: str) -> list[str]:
        return [a for a, (_, t) in self.arrows.items() if t == v]

    def is_zero(self, word: Word) -> bool:
        """True when the composable word contains a relation as a subword."""
        n = len(word)
        for rel in self.relations:
            k = len(rel)
            if k > n:
                continue
            for i in range(n - k + 1):
                if word[i : i + k] == rel:
                    return True
        return False

    # -- basis enumeration ---------------------------------------------------

    def _prefix_states(self) -> set[Word]:
        states = {()}
        for rel in self.relations:
            for i in range(1, len(rel)):
                states.add(rel[:i])
        return states

    def _step(self, suffix: Word, arrow: str) -> Word | None:
        """Longest relation-prefix suffix after appending ``arrow``; None if zero.

        ``suffix`` is the longest suffix of the word so far that is a proper
        prefix of some relation; any relation completed by ``arrow`` must be
        ``s + (arrow,)`` for a suffix ``s`` of it.
        """
        grown = suffix + (arrow,)
        for i in range(len(grown)):
            if grown[i:] in self._relset:
                return None
        prefixes = self._cache["prefix_states"]
        for i in range(len(grown)):
            if grown[i:] in prefixes:
                return grown[i:]
        return ()

    @property
    def _relset(self) -> frozenset[Word]:
        if "relset" not in self._cache:
            self._cache["relset"] = frozenset(self.relations)
        return self._cache["relset"]

    def _check_finite(self) -> None:
        self._cache["prefix_states"] = self._prefix_states()
        # DFS over (vertex, suffix) states; a state on the current stack seen
        # again means a repeatable nonzero cycle, hence infinite dimension.
        color: dict[tuple[str, Word], int] = {}
        trail: list[str] = []

        def visit(state: tuple[str, Word]) -> Word | None:
            color[state] = 1
            v, suffix = state
            for a in self.arrows_from(v):
                nxt_suffix = self._step(suffix, a)
                if nxt_suffix is None:
                    continue
                nxt = (self.arrows[a][1], nxt_suffix)
                if color.get(nxt, 0) == 1:
                    return (a,)
                if color.get(nxt, 0) == 0:
                    trail.append(a)
                    wit = visit(nxt)
                    trail.pop()
                    if wit is not None:
                        return (a,) + wit
            color[state] = 2
            return None

        for v in self.vertices:
            state = (v, ())
            if color.get(state, 0) == 0:
                wit = visit(state)
                if wit is not None:
                    raise InfiniteDimensionalError(wit)

    def basis(self) -> list[BPath]:
        """All nonzero paths, trivial ones included, in DFS order."""
        if "basis" in self._cache:
            return self._cache["basis"]
        out: list[BPath] = []

        def grow(src: str, word: Word, vertex: str, suffix: Word) -> None:
            out.append(BPath(src, word))
            for a in self.arrows_from(vertex):
                nxt = self._step(suffix, a)
                if nxt is not None:
                    grow(src, word + (a,), self.arrows[a][1], nxt)

        for v in self.vertices:
            grow(v, (), v, ())
        self._cache["basis"] = out
        return out

    def dim(self) -> int:
        return len(self.basis())

    def nonzero_words(self) -> list[Word]:
        """Basis paths of length >= 1."""
        return [bp.word for bp in self.basis() if bp.word]

    def paths_from(self, p: Word) -> Iterator[Word]:
        """Words w, trivial included, with p + w nonzero."""
        for w in self.right_extensions(self.word_target(p), p):
            yield w

    def right_extensions(self, vertex: str, prefix: Word) -> Iterator[Word]:
        suffix = ()
        prefixes = self._cache["prefix_states"]
        for i in range(len(prefix)):
            if prefix[i:] in prefixes:
                suffix = prefix[i:]
                break

        def grow(word: Word, v: str, suf: Word) -> Iterator[Word]:
            yield word
            for a in self.arrows_from(v):
                nxt = self._step(suf, a)
                if nxt is not None:
                    yield from grow(word + (a,), self.arrows[a][1], nxt)

        yield from grow((), vertex, suffix)

    # -- derived presentations ----------------------------------------------

    def opposite(self) -> "MonomialAlgebra":
        arrows = {a: (t, s) for a, (s, t) in self.arrows.items()}
        rels = tuple(tuple(reversed(r)) for r in self.relations)
        name = self.name[:-3] if self.name.endswith("^op") else self.name + "^op"
        return MonomialAlgebra(self.vertices, arrows, rels, self.prime, name)

    def classify(self) -> SerialClass:
        out = {v: 0 for v in self.vertices}
        inn = {v: 0 for v in self.vertices}
        for s, t in self.arrows.values():
            out[s] += 1
            inn[t] += 1
        right = all(c <= 1 for c in out.values())
        left = all(c <= 1 for c in inn.values())
        reach: dict[str, set[str]] = {v: set() for v in self.vertices}
        for s, t in self.arrows.values():
            reach[s].add(t)
        changed = True
        while changed:
            changed = False
            for v in self.vertices:
                grown = set().union(*(reach[w] for w in reach[v])) if reach[v] else set()
                if not grown <= reach[v]:
                    reach[v] |= grown
                    changed = True
        cyclic = frozenset(v for v in self.vertices if v in reach[v])
        tree = frozenset(v for v in self.vertices if v not in cyclic)
        return SerialClass(right, left, right and left, cyclic, tree)


def _normalize_relations(relations: list[Word]) -> tuple[Word, ...]:
    """Drop duplicates and words containing another relation, with a warning."""
    kept: list[Word] = []
    for rel in relations:
        if rel in kept:
            warnings.warn(f"duplicate relation {' '.join(rel)} dropped")
            continue
        kept.append(rel)
    minimal: list[Word] = []
    for rel in kept:
        redundant = False
        for other in kept:
            if other is rel or len(other) > len(rel):
                continue
            k = len(other)
            for i in range(len(rel) - k + 1):
                if rel[i : i + k] == other and rel != other:
                    redundant = True
                    break
            if redundant:
                break
        if redundant:
            warnings.warn(
                f"relation {' '.join(rel)} contains a shorter relation; dropped"
            )
        else:
            minimal.append(rel)
    return tuple(minimal)


def parse_algebra(text: str, name: str = "algebra", prime: int = DEFAULT_PRIME) -> MonomialAlgebra:
    """Parse the plain-text quiver format.

    Three sections, each introduced by a keyword and repeatable::

        vertices: 1 2
        arrows: a: 1 -> 1, b: 1 -> 2
        relations: a a; b c a

    ``#`` starts a comment.  Relation groups are separated by ``;``.
    """
    vertices: list[str] = []
    arrows: dict[str, tuple[str, str]] = {}
    relations: list[Word] = []
    section = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for key in ("vertices", "arrows", "relations"):
            if line.startswith(key + ":"):
                section = key
                line = line[len(key) + 1 :].strip()
                break
        else:
            if section is None:
                raise QuiverError(f"unexpected line before any section: {raw!r}")
        if not line:
            continue
        if section == "vertices":
            vertices.extend(line.split())
        elif section == "arrows":
            for chunk in line.split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                try:
                    aname, rest = chunk.split(":", 1)
                    src, tgt = rest.split("->")
                except ValueError:
                    raise QuiverError(f"bad arrow declaration {chunk!r}") from None
                aname = aname.strip()
                if aname in arrows:
                    raise QuiverError(f"duplicate arrow {aname!r}")
                arrows[aname] = (src.strip(), tgt.strip())
        elif section == "relations":
            for chunk in line.split(";"):
                word = tuple(chunk.split())
                if word:
                    relations.append(word)
        else:
            raise QuiverError(f"unexpected line {raw!r}")
    if not vertices:
        raise QuiverError("no vertices declared")
    alg = MonomialAlgebra(
        tuple(vertices), arrows, _normalize_relations(relations), prime, name
    )
    return alg


def serialize_algebra(alg: MonomialAlgebra) -> str:
    """Canonical text form; parsing it back gives an equal presentation."""
    lines = ["vertices: " + " ".join(alg.vertices)]
    if alg.arrows:
        decls = [f"{a}: {s} -> {t}" for a, (s, t) in alg.arrows.items()]
        lines.append("arrows: " + ", ".join(decls))
    if alg.relations:
        lines.append("relations: " + "; ".join(" ".join(r) for r in alg.relations))
    return "\n".join(lines) + "\n"


def enumerate_basis(alg: MonomialAlgebra) -> list[BPath]:
    return alg.basis()


def opposite(alg: MonomialAlgebra) -> MonomialAlgebra:
    return alg.opposite()


def classify_serial(alg: MonomialAlgebra) -> SerialClass:
    return alg.classify()
