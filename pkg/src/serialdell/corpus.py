"""Bundled example algebras and their frozen homological data.

Each .quiv file is a small monomial algebra whose invariants were worked out
by hand; expected.json freezes the numbers together with the witness
constructions in a small module-expression language.  verify_corpus
recomputes everything from scratch and reports mismatches, so it serves both
as a regression gate and as a worked demonstration.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import NamedTuple

from . import invariants as IV
from . import rep as R
from .completions import (
    _finite_pd_supremum,
    completion_graph,
    factor_and_reverse,
    pd_cyclic_quotient,
    pd_simple,
    right_completions,
)
from .quiver import MonomialAlgebra, parse_algebra

CORPUS_NAMES = ("two_loops", "pentagon_tail")


class CorpusError(Exception):
    pass


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def _data(rel: str) -> str:
    return resources.files("serialdell").joinpath(f"corpus/{rel}").read_text()


def load_algebra(name: str) -> MonomialAlgebra:
    if name not in CORPUS_NAMES:
        raise CorpusError(f"unknown corpus algebra {name!r}")
    return parse_algebra(_data(f"{name}.quiv"), name=name)


def expected() -> dict:
    return json.loads(_data("expected.json"))


def build_module(alg: MonomialAlgebra, spec: dict) -> R.Rep:
    """Interpret a module expression from expected.json."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise CorpusError(f"malformed module spec {spec!r}")
    kind, arg = next(iter(spec.items()))
    if kind == "simple":
        return R.simple(alg, arg)
    if kind == "projective":
        return R.projective(alg, arg)
    if kind == "injective":
        return R.injective(alg, arg)
    if kind == "path":
        return R.path_module(alg, tuple(arg))
    if kind == "cyclic_quotient":
        return R.cyclic_quotient(alg, tuple(arg))
    if kind == "quotient_by_paths":
        return R.quotient_by_paths(
            alg, arg["vertex"], [tuple(w) for w in arg["paths"]]
        )
    if kind == "glue_socle":
        return R.glue_socle(
            build_module(alg, arg["left"]),
            build_module(alg, arg["right"]),
            arg["vertex"],
        )
    if kind == "sum":
        return R.direct_sum([build_module(alg, s) for s in arg])
    raise CorpusError(f"unknown module spec kind {kind!r}")


def build_ddell_witness(alg: MonomialAlgebra, spec: dict) -> IV.DdellWitness:
    chain = [build_module(alg, s) for s in spec["chain"]]
    return IV.DdellWitness(m=spec["m"], chain=chain)


def _named(reg: IV.ClassRegistry, counter) -> dict[str, int]:
    return {reg.names[cid]: mult for cid, mult in counter.items() if mult}


def _fmt(value) -> str:
    return "inf" if isinstance(value, float) and math.isinf(value) else str(value)


def verify_corpus(names=None, budget: int = 10) -> list[CheckResult]:
    out: list[CheckResult] = []
    exp_all = expected()

    def check(label: str, got, want):
        same = got == want
        out.append(
            CheckResult(label, same, "" if same else f"got {got!r}, want {want!r}")
        )

    for name in names or CORPUS_NAMES:
        exp = exp_all[name]
        alg = load_algebra(name)
        pre = f"{name}: "
        check(pre + "dimension", alg.dim(), exp["dim"])

        g = completion_graph(alg)
        check(
            pre + "graph nodes",
            sorted(" ".join(n) for n in g.nodes),
            exp["graph_nodes"],
        )
        if "certified_nodes" in exp:
            check(
                pre + "certified nodes",
                sorted(" ".join(n) for n in g.certified_nodes()),
                exp["certified_nodes"],
            )
        if "completions" in exp:
            for word, comps in exp["completions"].items():
                check(
                    pre + f"completions of {word}",
                    right_completions(alg, tuple(word.split())),
                    [tuple(w) for w in comps],
                )
        if "opposite_graph_nodes" in exp:
            gop = completion_graph(alg.opposite())
            check(
                pre + "opposite graph nodes",
                sorted(" ".join(n) for n in gop.nodes),
                exp["opposite_graph_nodes"],
            )
        if "projective_dims" in exp:
            for v, d in exp["projective_dims"].items():
                check(pre + f"dim of projective {v}", R.projective(alg, v).total_dim(), d)
        if "projective_loewy" in exp:
            for v, s in exp["projective_loewy"].items():
                check(
                    pre + f"layers of projective {v}",
                    R.loewy_string(R.projective(alg, v)),
                    s,
                )
        if "opposite_projective_loewy" in exp:
            for v, s in exp["opposite_projective_loewy"].items():
                check(
                    pre + f"layers of opposite projective {v}",
                    R.loewy_string(R.projective(alg.opposite(), v)),
                    s,
                )

        reg = IV.registry_for(alg)
        dell_val, dell_per = IV.dell_algebra(alg, budget)
        check(pre + "dell", (dell_val.value, dell_val.status), (exp["dell"]["value"], "exact"))
        for v, want in exp["dell"]["per_simple"].items():
            check(pre + f"dell of simple {v}", dell_per[v].value, want)
        if "dell_op" in exp:
            oval, oper = IV.dell_algebra(alg.opposite(), budget)
            check(
                pre + "opposite dell",
                (oval.value, oval.status),
                (exp["dell_op"]["value"], "exact"),
            )
            for v, want in exp["dell_op"]["per_simple"].items():
                check(pre + f"opposite dell of simple {v}", oper[v].value, want)

        if "orbit_of_2" in exp:
            steps = dell_per["2"].steps
            o = exp["orbit_of_2"]
            check(pre + "orbit syzygy at n=1", _named(reg, steps[1].arrived), o["syzygy_n1"])
            check(pre + "orbit kept at n=1", _named(reg, steps[1].orbit), o["orbit_n1"])
            check(pre + "candidate at n=1", _named(reg, steps[1].candidate), o["candidate_n1"])
            check(pre + "orbit syzygy at n=2", _named(reg, steps[2].arrived), o["syzygy_n2"])
        if "orbit_of_7" in exp:
            steps = dell_per["7"].steps
            o = exp["orbit_of_7"]
            check(pre + "candidate at n=1", _named(reg, steps[1].candidate), o["candidate_n1"])
            check(pre + "candidate at n=2", _named(reg, steps[2].candidate), o["candidate_n2"])
            check(pre + "orbit syzygy at n=3", _named(reg, steps[3].arrived), o["syzygy_n3"])
            check(pre + "orbit passes at n=3", steps[3].passed, True)

        if "ddell" in exp:
            wspec = exp["ddell"]["witness"]
            witness = build_ddell_witness(alg, wspec)
            svert = wspec["simple"]
            ok, why = IV.verify_ddell_witness(
                R.simple(alg, svert), witness, budget, reg
            )
            out.append(CheckResult(pre + "ddell witness verifies", ok, why if not ok else ""))
            dd_val, dd_per = IV.ddell_algebra(alg, budget, {svert: [witness]})
            check(
                pre + "ddell",
                (dd_val.value, dd_val.status),
                (exp["ddell"]["value"], "exact"),
            )
            if "per_simple" in exp["ddell"]:
                for v, want in exp["ddell"]["per_simple"].items():
                    check(pre + f"ddell of simple {v}", dd_per[v].value, want)
            if "per_simple_7" in exp["ddell"]:
                check(pre + "ddell of simple 7", dd_per["7"].value, exp["ddell"]["per_simple_7"])

        if "subddell" in exp:
            wspec = exp["subddell"]["witness"]
            nrep = build_module(alg, wspec["module"])
            svert = wspec["simple"]
            sw = IV.SubddellWitness(module=nrep)
            sd_val, _ = IV.subddell_algebra(alg, budget, {svert: [sw]})
            check(
                pre + "sub-ddell",
                (sd_val.value, sd_val.status),
                (exp["subddell"]["value"], "exact"),
            )

        fin = IV.findim_serial_full(alg, budget)
        want_fin = exp["findim"]
        check(
            pre + "serial findim",
            (fin.value, fin.status, fin.route),
            (want_fin["value"], want_fin["status"], want_fin["route"]),
        )
        if "findim_op" in exp:
            finop = IV.findim_serial_full(alg.opposite(), budget)
            wo = exp["findim_op"]
            check(
                pre + "opposite serial findim",
                (finop.value, finop.status, finop.route),
                (wo["value"], wo["status"], wo["route"]),
            )
        if "finite_pd_supremum_op" in exp:
            floor, _ = _finite_pd_supremum(alg.opposite())
            check(pre + "opposite finite pd supremum", floor, exp["finite_pd_supremum_op"])

        if "pd_examples" in exp:
            op = alg.opposite()
            pe = exp["pd_examples"]
            check(
                pre + "pd of opposite quotient by b1",
                _fmt(pd_cyclic_quotient(op, ("b1",))),
                _fmt(pe["opposite_cyclic_quotient_b1"]),
            )
            check(
                pre + "pd of opposite simple 2",
                _fmt(pd_simple(op, "2")),
                _fmt(pe["opposite_simple_2"]),
            )

        if "reversal_example" in exp:
            re_ = exp["reversal_example"]
            rev = factor_and_reverse(alg, [tuple(p) for p in re_["paths"]])
            check(pre + "reversed word", list(rev.word), re_["word"])
            check(pre + "reversed generator", list(rev.generator), re_["generator"])
            out.append(
                CheckResult(
                    pre + "relation occurrences",
                    rev.relation_occurrences >= re_["min_relation_occurrences"],
                    f"found {rev.relation_occurrences}",
                )
            )
            op = alg.opposite()
            cur = R.drop_projectives(R.cyclic_quotient(op, rev.generator))
            for _ in range(re_["pd_at_least"] - 1):
                cur = R.syzygy(cur)
            out.append(
                CheckResult(
                    pre + "reversed quotient pd lower bound",
                    not cur.is_zero(),
                    "",
                )
            )
    return out
