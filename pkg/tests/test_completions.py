"""Right completions, the completion graph, and the derived path invariants."""

import math

import pytest

from serialdell.completions import (
    CompSequence,
    FactorizationError,
    completion_graph,
    deloop_depth,
    factor_and_reverse,
    findim_serial,
    gldim_acyclic,
    maximal_sequences,
    pd_cyclic_quotient,
    pd_path_module,
    pd_simple,
    right_completions,
)
from serialdell.generator import random_algebra
from serialdell.quiver import parse_algebra

INF = math.inf


def naive_completions(alg, p):
    """Direct enumeration straight from the defining property.

    beta completes alpha when alpha*beta vanishes, beta itself does not,
    and no proper prefix of beta already kills alpha.
    """
    out = []
    longest = max((len(r) for r in alg.relations), default=0)
    stack = [(alg.word_target(p), ())]
    while stack:
        v, beta = stack.pop()
        if beta:
            if alg.is_zero(p + beta):
                out.append(beta)
                continue  # prefix-minimality: stop extending
        if len(beta) < longest:
            for a in alg.arrows_from(v):
                if not alg.is_zero(beta + (a,)):
                    stack.append((alg.target(a), beta + (a,)))
    return sorted(out, key=lambda w: (len(w), w))


TWO_LOOPS_TABLE = {
    ("a",): [("a",)],
    ("b",): [("d",), ("c", "a")],
    ("c",): [("b",), ("a", "b")],
    ("d",): [("d",), ("c", "a")],
    ("c", "a"): [("a",), ("b",)],
    ("a", "b"): [("d",), ("c", "a")],
}


@pytest.mark.parametrize("path", sorted(TWO_LOOPS_TABLE))
def test_two_loops_completion_table(two_loops, path):
    assert right_completions(two_loops, path) == TWO_LOOPS_TABLE[path]


@pytest.mark.parametrize("seed", range(15))
def test_completions_match_naive_enumeration(seed):
    alg = random_algebra(seed, shape="any", max_dim=40)
    g = completion_graph(alg)
    for node in g.nodes:
        assert right_completions(alg, node) == naive_completions(alg, node)


def test_completions_match_naive_on_corpus(two_loops, pentagon):
    for alg in (two_loops, pentagon, pentagon.opposite()):
        for node in completion_graph(alg).nodes:
            assert right_completions(alg, node) == naive_completions(alg, node)


def test_graph_node_counts(two_loops, pentagon, pentagon_op):
    assert len(completion_graph(two_loops).nodes) == 6
    assert len(completion_graph(pentagon).nodes) == 12
    assert len(completion_graph(pentagon_op).nodes) == 12


def test_certified_nodes_two_loops(two_loops):
    g = completion_graph(two_loops)
    certified = {" ".join(n) for n in g.certified_nodes()}
    assert certified == {"a", "b", "c a", "d"}
    # both remaining nodes feed the cycles but are never reached from them
    assert {" ".join(n) for n in g.nodes} - certified == {"c", "a b"}


def test_certified_nodes_lie_on_or_after_cycles(pentagon):
    g = completion_graph(pentagon)
    cyc = g.cycle_nodes()
    cert = g.certified_nodes()
    assert cyc <= cert
    for node in cert - cyc:
        assert any(node in g.edges[c] for c in cert if c in g.edges) or any(
            node in g.edges.get(c, ()) for c in cyc
        )


def test_pd_examples_pentagon(pentagon, pentagon_op):
    assert pd_path_module(pentagon, ("a5",)) == 0  # no completions at all
    assert pd_simple(pentagon, "5") == 1
    assert pd_simple(pentagon, "7") == INF
    assert pd_simple(pentagon_op, "1") == 2
    assert pd_simple(pentagon_op, "2") == INF
    assert pd_cyclic_quotient(pentagon_op, ("b1",)) == 2


def test_pd_of_projective_path_module_is_zero(pentagon):
    assert pd_cyclic_quotient(pentagon, ("a5",)) == 1


def test_deloop_depth(pentagon):
    g = completion_graph(pentagon)
    assert g.deloop_depth(("a2", "a3")) == INF  # sits on the cycle
    # the tail feeds the cycle but is never reached from it
    assert g.deloop_depth(("b2",)) == 1
    assert g.deloop_depth(("b1",)) == 2
    assert g.deloop_depth(("a1",)) == 3


def test_deloop_depth_off_graph_path_is_one(pentagon):
    assert deloop_depth(pentagon, ("a3", "a4", "a5")) == 1


def test_deloop_depth_rejects_zero_words(pentagon):
    with pytest.raises(ValueError):
        deloop_depth(pentagon, ("b1", "a1"))


def test_sequences_from_tail_run_into_the_cycle(pentagon):
    seqs = list(maximal_sequences(pentagon, start="b2", bound=8))
    assert len(seqs) == 1
    (seq,) = seqs
    # each step has a unique completion, but the cycle never terminates,
    # so the sequence is cut at the bound instead of ending right maximal
    assert not seq.right_maximal
    assert seq.n == 8
    words = [" ".join(p) for p in seq.paths]
    assert words[:7] == ["b2", "b1", "a1", "a2 a3", "a4", "a5 a1 a2", "a3"]


def test_right_maximal_sequence_exists_where_completions_die(pentagon):
    # a4 completes to a5 a1 a2, which completes to a3, and so on around
    # the cycle; starting from a5 there are no completions at all
    seqs = list(maximal_sequences(pentagon, start="a5", bound=8))
    assert len(seqs) == 1
    assert seqs[0].right_maximal
    assert seqs[0].paths == (("a5",),)


def test_sequences_chain_through_completions(two_loops):
    for seq in maximal_sequences(two_loops, bound=4):
        for left, right in zip(seq.paths, seq.paths[1:]):
            assert right in right_completions(two_loops, left)


def test_factor_and_reverse_tail_sequence(pentagon):
    rev = factor_and_reverse(pentagon, [("b2",), ("b1",), ("a1",)])
    assert rev.word == ("a1", "b1", "b2")
    assert rev.generator == ("a1",)
    assert rev.n == 2
    assert rev.relation_occurrences >= 2


def test_factor_and_reverse_rejects_non_sequences(pentagon):
    # a3 does not complete b2, so the factorization cannot exist
    with pytest.raises(FactorizationError):
        factor_and_reverse(pentagon, [("b2",), ("a3",)])


def test_findim_routes(two_loops, pentagon, pentagon_op):
    fin = findim_serial(pentagon)
    assert (fin.value, fin.status, fin.route) == (1, "exact", "right-serial")
    low = findim_serial(pentagon_op)
    assert (low.value, low.status) == (2, "lower")
    none = findim_serial(two_loops)
    assert none.status == "lower"
    assert none.value == 0


def test_findim_nakayama_route():
    alg = parse_algebra(
        "vertices: 1 2 3\narrows: a: 1 -> 2, b: 2 -> 3\nrelations: a b"
    )
    fin = findim_serial(alg)
    assert fin.route == "nakayama"
    assert fin.status == "exact"
    assert fin.value == gldim_acyclic(alg)


@pytest.mark.parametrize("seed", range(6))
def test_gldim_bounds_every_path_pd(seed):
    alg = random_algebra(seed, shape="acyclic", max_dim=30)
    g = gldim_acyclic(alg)
    assert math.isfinite(g)
    for node in completion_graph(alg).nodes:
        assert pd_path_module(alg, node) <= g
