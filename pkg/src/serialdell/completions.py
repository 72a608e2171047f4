"""Right completions of paths and the derived syzygy combinatorics.

For a nonzero path p, a right completion is a path b with pb zero, b nonzero,
and pb' nonzero for every proper prefix b' of b.  Over a monomial algebra the
first syzygy of pA is the direct sum of bA over the right completions b of p,
so iterating completions computes projective dimensions of the path modules
and everything built from them, without any linear algebra.

Completions are always tails of minimal relations: pb contains a relation r
ending inside b and reaching back into p, and minimality of b forces r to end
exactly at the end of b.  That makes the completion graph finite even when
projective dimensions are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quiver import MonomialAlgebra, Word

INF = math.inf


class FactorizationError(RuntimeError):
    """A completion sequence failed to factor; indicates an internal bug."""


def right_completions(alg: MonomialAlgebra, p: Word) -> list[Word]:
    """All right completions of the nonzero path p, deterministically ordered."""
    if not p:
        raise ValueError("completions are defined for paths of length >= 1")
    if alg.is_zero(p):
        raise ValueError(f"path {' '.join(p)} is zero")
    candidates: set[Word] = set()
    for rel in alg.relations:
        # rel = s + t with s a nonempty suffix of p and t nonempty.
        for cut in range(1, len(rel)):
            s, t = rel[:cut], rel[cut:]
            if len(s) <= len(p) and p[len(p) - len(s) :] == s:
                candidates.add(t)
    # p + prefix(t) is zero iff some candidate is a prefix of it, so the
    # prefix-minimal candidates are exactly the completions.
    out = [
        t
        for t in candidates
        if not any(u != t and t[: len(u)] == u for u in candidates)
    ]
    out.sort(key=lambda w: (len(w), w))
    return out


def syzygy_path_module(alg: MonomialAlgebra, p: Word) -> list[Word]:
    """Words b with Omega(pA) = direct sum of bA, one summand each."""
    return right_completions(alg, p)


def syzygy_simple(alg: MonomialAlgebra, v: str) -> list[Word]:
    """Omega(S_v) = direct sum of aA over arrows a leaving v."""
    if v not in alg.vertices:
        raise ValueError(f"unknown vertex {v!r}")
    return [(a,) for a in alg.arrows_from(v)]


class CompletionGraph:
    """Arrows of the quiver closed under taking right completions."""

    def __init__(self, alg: MonomialAlgebra):
        self.alg = alg
        self.edges: dict[Word, tuple[Word, ...]] = {}
        queue: list[Word] = [(a,) for a in alg.arrows]
        while queue:
            p = queue.pop(0)
            if p in self.edges:
                continue
            comps = tuple(right_completions(alg, p))
            self.edges[p] = comps
            queue.extend(c for c in comps if c not in self.edges)
        self.nodes: list[Word] = sorted(self.edges, key=lambda w: (len(w), w))
        self._pd: dict[Word, float] = {}

    def predecessors(self, p: Word) -> list[Word]:
        return [q for q in self.nodes if p in self.edges[q]]

    def cycle_nodes(self) -> set[Word]:
        """Nodes lying on a directed cycle of the completion graph."""
        reach: dict[Word, set[Word]] = {p: set(self.edges[p]) for p in self.nodes}
        changed = True
        while changed:
            changed = False
            for p in self.nodes:
                grown = set()
                for q in reach[p]:
                    grown |= reach[q]
                if not grown <= reach[p]:
                    reach[p] |= grown
                    changed = True
        self._reach = reach
        return {p for p in self.nodes if p in reach[p]}

    def certified_nodes(self) -> set[Word]:
        """Nodes q some cycle reaches: deloop_depth(q) is infinite."""
        if not hasattr(self, "_certified"):
            cyc = self.cycle_nodes()
            out = set(cyc)
            for p in cyc:
                out |= self._reach[p]
            self._certified = out
        return self._certified

    def pd(self, p: Word) -> float:
        """Projective dimension of pA for any nonzero path p; may be inf."""
        if p in self._pd:
            return self._pd[p]
        onstack: set[Word] = set()

        def rec(q: Word) -> float:
            if q in self._pd:
                return self._pd[q]
            if q in onstack:
                return INF
            onstack.add(q)
            comps = self.edges.get(q)
            if comps is None:
                comps = tuple(right_completions(self.alg, q))
            val = 0 if not comps else 1 + max(rec(c) for c in comps)
            onstack.discard(q)
            # A value computed while the stack is nonempty may rest on a
            # provisional inf from an on-stack node; only cache at the root.
            if not onstack:
                self._pd[q] = val
            return val

        val = rec(p)
        self._pd[p] = val
        return val

    def deloop_depth(self, p: Word) -> float:
        """Certified count of deloops of pA: 1 + longest backward walk.

        Backward chains q_l -> ... -> q_1 -> p exhibit pA as a direct summand
        of an (l+1)-st syzygy; a cycle reaching p makes the depth infinite.
        Paths outside the graph closure get the unconditional value 1.
        """
        if p not in self.edges:
            if self.alg.is_zero(p):
                raise ValueError(f"path {' '.join(p)} is zero")
            return 1
        if p in self.certified_nodes():
            return INF
        memo: dict[Word, float] = {}

        def rec(q: Word) -> float:
            if q in memo:
                return memo[q]
            preds = self.predecessors(q)
            val = 1.0 if not preds else 1 + max(rec(r) for r in preds)
            memo[q] = val
            return val

        return rec(p)

    def to_dot(self) -> str:
        lines = ["digraph completions {"]
        for p in self.nodes:
            label = " ".join(p)
            extra = ", peripheries=2" if not self.edges[p] else ""
            lines.append(f'  "{label}" [label="{label}"{extra}];')
        for p in self.nodes:
            for q in self.edges[p]:
                lines.append(f'  "{" ".join(p)}" -> "{" ".join(q)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def completion_graph(alg: MonomialAlgebra) -> CompletionGraph:
    if "completion_graph" not in alg._cache:
        alg._cache["completion_graph"] = CompletionGraph(alg)
    return alg._cache["completion_graph"]


def pd_path_module(alg: MonomialAlgebra, p: Word) -> float:
    return completion_graph(alg).pd(p)


def pd_simple(alg: MonomialAlgebra, v: str) -> float:
    arrows = alg.arrows_from(v)
    if not arrows:
        return 0
    return 1 + max(pd_path_module(alg, (a,)) for a in arrows)


def pd_cyclic_quotient(alg: MonomialAlgebra, p: Word) -> float:
    """Projective dimension of A/pA; its first syzygy is pA itself."""
    comps = right_completions(alg, p)
    if not comps:
        return 1
    return 1 + pd_path_module(alg, p)


def deloop_depth(alg: MonomialAlgebra, p: Word) -> float:
    return completion_graph(alg).deloop_depth(p)


def gldim_acyclic(alg: MonomialAlgebra) -> int:
    if alg.classify().cyclic_part:
        raise ValueError("global dimension route requires an acyclic quiver")
    val = max((pd_simple(alg, v) for v in alg.vertices), default=0)
    assert val != INF
    return int(val)


@dataclass(frozen=True)
class CompSequence:
    """A chain p_0, ..., p_n with each p_{i+1} a right completion of p_i."""

    paths: tuple[Word, ...]
    right_maximal: bool

    @property
    def n(self) -> int:
        return len(self.paths) - 1


def maximal_sequences(
    alg: MonomialAlgebra, start: str | None = None, bound: int = 8
) -> list[CompSequence]:
    """Completion sequences from arrows, extended up to ``bound`` completions.

    ``start`` restricts to sequences whose first path is the given arrow.
    Sequences stop early only when right maximal; a cycle keeps extending
    until the bound cuts it.
    """
    graph = completion_graph(alg)
    roots: list[tuple[Word, ...]] = [
        ((a,),) for a in ([start] if start else list(alg.arrows))
    ]
    out: list[CompSequence] = []

    def grow(chain: tuple[Word, ...]) -> None:
        comps = graph.edges[chain[-1]]
        if not comps:
            out.append(CompSequence(chain, True))
            return
        if len(chain) - 1 >= bound:
            out.append(CompSequence(chain, False))
            return
        for c in comps:
            grow(chain + (c,))

    for r in roots:
        if r[0][0] not in alg.arrows:
            raise ValueError(f"unknown arrow {r[0][0]!r}")
        grow(r)
    return out


@dataclass(frozen=True)
class ReversedSequence:
    word: Word  # the reversed concatenation, a path over the opposite algebra
    generator: Word  # reverse of the last path; generates the cyclic quotient
    n: int
    relation_occurrences: int
    factors: tuple[tuple[Word, Word], ...]  # (x_i, y_i) with p_i = x_i y_i


def factor_and_reverse(alg: MonomialAlgebra, paths: tuple[Word, ...]) -> ReversedSequence:
    """Factor a completion sequence and reverse it over the opposite algebra.

    Each p_i with a successor splits uniquely as x_i y_i where y_i is the
    suffix with y_i p_{i+1} a relation; uniqueness holds because two such
    suffixes would give relations one containing the other.  The reversed
    concatenation carries at least n relation occurrences, which forces the
    cyclic quotient by the reversed last path to have projective dimension
    at least n+1 over the opposite algebra.
    """
    n = len(paths) - 1
    relset = set(alg.relations)
    factors: list[tuple[Word, Word]] = []
    for i in range(n):
        p, nxt = paths[i], paths[i + 1]
        hits = [cut for cut in range(len(p)) if p[cut:] + nxt in relset]
        if len(hits) != 1:
            raise FactorizationError(
                f"expected one factorization of {' '.join(p)} against "
                f"{' '.join(nxt)}, found {len(hits)}"
            )
        cut = hits[0]
        factors.append((p[:cut], p[cut:]))
    glued: Word = tuple(a for p in paths for a in p)
    word = tuple(reversed(glued))
    generator = tuple(reversed(paths[-1]))
    op = alg.opposite()
    occurrences = 0
    for rel in op.relations:
        k = len(rel)
        occurrences += sum(
            1 for i in range(len(word) - k + 1) if word[i : i + k] == rel
        )
    if occurrences < n:
        raise FactorizationError(
            f"reversed word carries {occurrences} relations, expected >= {n}"
        )
    return ReversedSequence(word, generator, n, occurrences, tuple(factors))


@dataclass(frozen=True)
class FindimResult:
    value: float
    status: str  # "exact" or "lower"
    route: str
    certificate: str


def _finite_pd_supremum(alg: MonomialAlgebra) -> tuple[float, str]:
    """max(0, 1 + pd(pA)) over nonzero paths p with pA of finite dimension.

    Every A/pA with pA of finite projective dimension witnesses
    findim A >= 1 + pd(pA), and for serial algebras the supremum is attained
    on such quotients.
    """
    graph = completion_graph(alg)
    best: float = 0
    witness = "zero: no nonzero path has finite positive bound"
    for p in alg.nonzero_words():
        val = graph.pd(p)
        if not math.isinf(val) and 1 + val > best:
            best = 1 + val
            witness = f"quotient by the path {' '.join(p)}"
    return best, witness


def findim_serial(
    alg: MonomialAlgebra,
    dell_op_value: float | None = None,
    dell_op_exact: bool = False,
    dell_op_per_simple: dict[str, float] | None = None,
) -> FindimResult:
    """Finitistic dimension by the serial-shape routes.

    Right serial and Nakayama presentations give the exact value from the
    completion graph alone.  Left serial presentations additionally need the
    delooping data of the opposite algebra: when every simple achieving
    dell(A^op) has its completion sequence supported entirely in the cyclic
    part or entirely in the tree part, the value is dell(A^op); otherwise the
    route is inconclusive and only the graph lower bound is returned.
    """
    cls = alg.classify()
    sup, witness = _finite_pd_supremum(alg)
    if cls.nakayama:
        return FindimResult(sup, "exact", "nakayama", witness)
    if cls.right_serial:
        return FindimResult(sup, "exact", "right-serial", witness)
    if not cls.cyclic_part:
        return FindimResult(sup, "exact", "acyclic", witness)
    if cls.left_serial and dell_op_value is not None and dell_op_exact:
        if dell_op_value <= 1:
            return FindimResult(
                dell_op_value, "exact", "left-serial",
                "delooping level of the opposite algebra is at most one",
            )
        assert dell_op_per_simple is not None
        op = alg.opposite()
        opgraph = completion_graph(op)
        nsteps = int(dell_op_value) - 1
        for v, dv in dell_op_per_simple.items():
            if dv != dell_op_value:
                continue
            arrows = op.arrows_from(v)
            if len(arrows) != 1:
                return FindimResult(
                    sup, "lower", "not-applicable",
                    f"no unique completion sequence at vertex {v}",
                )
            chain = [(arrows[0],)]
            while len(chain) - 1 < nsteps:
                comps = opgraph.edges[chain[-1]]
                if len(comps) != 1:
                    return FindimResult(
                        sup, "lower", "not-applicable",
                        f"completion sequence at vertex {v} is not unique",
                    )
                chain.append(comps[0])
            support = {op.word_source(w) for w in chain}
            support |= {op.word_target(w[: i + 1]) for w in chain for i in range(len(w))}
            if not (support <= cls.cyclic_part or support <= cls.tree_part):
                return FindimResult(
                    sup, "lower", "not-applicable",
                    f"sequence at vertex {v} mixes the cyclic and tree parts",
                )
        assert sup == dell_op_value, "graph supremum must attain the opposite dell"
        return FindimResult(
            dell_op_value, "exact", "left-serial",
            "every achieving sequence stays in one part",
        )
    return FindimResult(sup, "lower", "not-applicable", witness)
