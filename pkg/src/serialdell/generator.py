"""Seeded random algebras and modules for the property suites.

Shapes constrain the quiver only: "any" places arrows freely, "acyclic"
orients them along a vertex order, "right-serial" caps out-degrees at one,
"left-serial" caps in-degrees, and the two nakayama shapes are the line and
the cycle.  Relations are random composable walks.  Whenever the quotient
comes out infinite dimensional, the witness cycle reported by the check is
truncated to length at most four and added as a relation; a radical square
zero fallback guarantees termination.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterator

from . import rep as R
from .gf import DEFAULT_PRIME
from .quiver import InfiniteDimensionalError, MonomialAlgebra, Word


@dataclass(frozen=True)
class GeneratorConfig:
    shape: str = "any"
    vertices: tuple[int, int] = (2, 6)
    arrows: tuple[int, int] = (2, 8)
    relations: tuple[int, int] = (2, 6)
    relation_length: tuple[int, int] = (2, 4)
    prime: int = DEFAULT_PRIME
    max_dim: int | None = None  # add relations until the algebra fits


SHAPES = (
    "any",
    "acyclic",
    "right-serial",
    "left-serial",
    "nakayama-line",
    "nakayama-cycle",
)


def _quiver(rng: random.Random, cfg: GeneratorConfig):
    nv = rng.randint(*cfg.vertices)
    vertices = tuple(str(i) for i in range(1, nv + 1))
    arrows: dict[str, tuple[str, str]] = {}

    def add(src: str, tgt: str):
        arrows[f"x{len(arrows) + 1}"] = (src, tgt)

    if cfg.shape == "nakayama-line":
        for i in range(nv - 1):
            add(vertices[i], vertices[i + 1])
    elif cfg.shape == "nakayama-cycle":
        for i in range(nv):
            add(vertices[i], vertices[(i + 1) % nv])
    elif cfg.shape == "right-serial":
        na = min(rng.randint(*cfg.arrows), nv)
        for src in rng.sample(vertices, na):
            add(src, rng.choice(vertices))
    elif cfg.shape == "left-serial":
        na = min(rng.randint(*cfg.arrows), nv)
        for tgt in rng.sample(vertices, na):
            add(rng.choice(vertices), tgt)
    elif cfg.shape == "acyclic":
        na = rng.randint(*cfg.arrows)
        if nv >= 2:
            for _ in range(na):
                i = rng.randrange(nv - 1)
                j = rng.randrange(i + 1, nv)
                add(vertices[i], vertices[j])
    elif cfg.shape == "any":
        na = rng.randint(*cfg.arrows)
        for _ in range(na):
            add(rng.choice(vertices), rng.choice(vertices))
    else:
        raise ValueError(f"unknown shape {cfg.shape!r}")
    return vertices, arrows


def _walks(rng: random.Random, arrows, cfg: GeneratorConfig) -> list[Word]:
    by_src: dict[str, list[str]] = {}
    for name, (src, _) in arrows.items():
        by_src.setdefault(src, []).append(name)
    for outs in by_src.values():
        outs.sort()
    names = sorted(arrows)
    if not names:
        return []
    want = rng.randint(*cfg.relations)
    found: list[Word] = []
    for _ in range(want * 4):
        if len(found) >= want:
            break
        length = rng.randint(*cfg.relation_length)
        word = [rng.choice(names)]
        while len(word) < length:
            outs = by_src.get(arrows[word[-1]][1])
            if not outs:
                break
            word.append(rng.choice(outs))
        if len(word) >= 2 and tuple(word) not in found:
            found.append(tuple(word))
    return found


def _prune(relations: list[Word]) -> tuple[Word, ...]:
    # quietly drop any relation containing a shorter one as a subword
    kept: list[Word] = []
    for w in sorted(set(relations), key=lambda w: (len(w), w)):
        if not any(
            w[i : i + len(r)] == r for r in kept for i in range(len(w) - len(r) + 1)
        ):
            kept.append(w)
    return tuple(kept)


def random_algebra(
    seed: int, config: GeneratorConfig | None = None, **overrides
) -> MonomialAlgebra:
    """Deterministic: the same seed and config give the same algebra."""
    cfg = replace(config or GeneratorConfig(), **overrides)
    rng = random.Random(("algebra", cfg.shape, seed).__repr__())
    vertices, arrows = _quiver(rng, cfg)
    relations = _walks(rng, arrows, cfg)
    name = f"{cfg.shape}-{seed}"
    for _ in range(50):
        try:
            alg = MonomialAlgebra(
                vertices, arrows, _prune(relations), prime=cfg.prime, name=name
            )
        except InfiniteDimensionalError as e:
            w = e.cycle if len(e.cycle) >= 2 else (e.cycle[0], e.cycle[0])
            relations.append(w[: max(2, min(len(w), 4))])
            continue
        if cfg.max_dim is None or alg.dim() <= cfg.max_dim:
            return alg
        longest = max(alg.basis(), key=lambda b: len(b.word)).word
        if len(longest) < 2:
            return alg
        relations.append(longest[: max(2, min(len(longest), 4))])
    pairs = [
        (a, b)
        for a, (_, tgt) in arrows.items()
        for b, (src, _) in arrows.items()
        if tgt == src
    ]
    return MonomialAlgebra(
        vertices, arrows, _prune([(a, b) for a, b in pairs]), prime=cfg.prime, name=name
    )


def suite(
    config: GeneratorConfig, count: int, start_seed: int = 0
) -> Iterator[MonomialAlgebra]:
    for seed in range(start_seed, start_seed + count):
        yield random_algebra(seed, config)


def random_module(alg: MonomialAlgebra, seed: int, pieces: tuple[int, int] = (1, 2)):
    """Random direct sum of cyclic quotients of projectives."""
    rng = random.Random(("module", alg.name, seed).__repr__())
    parts = []
    for _ in range(rng.randint(*pieces)):
        v = rng.choice(alg.vertices)
        paths = [b.word for b in alg.basis() if b.src == v and len(b.word) >= 1]
        kill = [w for w in paths if rng.random() < 0.4]
        parts.append(R.quotient_by_paths(alg, v, kill))
    return R.direct_sum(parts)
