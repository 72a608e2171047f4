"""Delooping level and its derived invariants, computed over a class registry.

dell M is the least n with Omega^n M a direct summand of Omega^{n+1} N for
some N, and the adjoint chain makes the per-step test decidable: the summand
relation holds for some N exactly when it holds for the canonical candidate
N = nabla^{n+1} Omega^n M.  The orbit engine iterates stable syzygies at the
level of isomorphism classes, memoizing syzygy and deloop per class.

Classes certified infinitely deloopable (their path tags sit on or after a
cycle of the completion graph) may be dropped from the orbit: they are
k-deloopable for every k, so the per-step test is unchanged.  The dropped
summands are recorded so the orbit doubles as a human-readable trace.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from . import rep as R
from .completions import completion_graph, findim_serial, _finite_pd_supremum
from .quiver import MonomialAlgebra, Word

INF = math.inf


@dataclass(frozen=True)
class InvariantValue:
    value: float
    status: str  # "exact" | "upper" | "lower"
    route: str = ""
    certificate: str = ""

    def exact(self) -> bool:
        return self.status == "exact"


class ClassRegistry:
    """Isomorphism classes of indecomposables with memoized functors."""

    def __init__(self, alg: MonomialAlgebra, seed: int = 0):
        self.alg = alg
        self.seed = seed
        self.graph = completion_graph(alg)
        self.reps: list[R.Rep] = []
        self.keys: list[tuple] = []
        self.names: list[str] = []
        self.tags: list[frozenset[Word]] = []
        self.certified: list[bool] = []
        self._omega: dict[int, Counter] = {}
        self._nabla: dict[int, Counter] = {}
        # tag against every nonzero path, not just graph nodes: second
        # syzygies can land on path modules outside the completion closure
        self._word_mods = [(w, R.path_module(alg, w)) for w in alg.nonzero_words()]
        self._cert_nodes = self.graph.certified_nodes()

    def _key(self, rep: R.Rep) -> tuple:
        return (rep.dim_vector(), R.loewy_string(rep))

    def classify_indec(self, rep: R.Rep) -> int:
        """Identify an indecomposable (registry reps all have local End)."""
        key = self._key(rep)
        for cid, k in enumerate(self.keys):
            if k == key and R._iso_local(self.reps[cid], rep):
                return cid
        cid = len(self.reps)
        self.reps.append(rep)
        self.keys.append(key)
        tags = frozenset(
            node
            for node, mod in self._word_mods
            if mod.dim_vector() == key[0] and R._iso_local(mod, rep)
        )
        self.tags.append(tags)
        self.certified.append(any(t in self._cert_nodes for t in tags))
        base = R.loewy_string(rep)
        taken = sum(1 for n in self.names if n == base or n.startswith(base + "#"))
        self.names.append(base if not taken else f"{base}#{taken + 1}")
        return cid

    def classify(self, rep: R.Rep) -> Counter:
        out: Counter = Counter()
        for part in R.decompose(rep, self.seed):
            out[self.classify_indec(part)] += 1
        return out

    def omega(self, cid: int) -> Counter:
        if cid not in self._omega:
            self._omega[cid] = self.classify(R.syzygy(self.reps[cid]))
        return self._omega[cid]

    def nabla(self, cid: int) -> Counter:
        if cid not in self._nabla:
            self._nabla[cid] = self.classify(R.deloop(self.reps[cid]))
        return self._nabla[cid]

    def omega_multi(self, ms: Counter) -> Counter:
        out: Counter = Counter()
        for cid, mult in ms.items():
            for did, d in self.omega(cid).items():
                out[did] += d * mult
        return out

    def nabla_multi(self, ms: Counter) -> Counter:
        out: Counter = Counter()
        for cid, mult in ms.items():
            for did, d in self.nabla(cid).items():
                out[did] += d * mult
        return out

    def reduce(self, ms: Counter) -> tuple[Counter, Counter]:
        kept: Counter = Counter()
        dropped: Counter = Counter()
        for cid, mult in ms.items():
            (dropped if self.certified[cid] else kept)[cid] += mult
        return kept, dropped

    def contains(self, small: Counter, big: Counter) -> bool:
        return all(big.get(cid, 0) >= mult for cid, mult in small.items())

    def show(self, ms: Counter) -> str:
        if not ms:
            return "0"
        parts = []
        for cid in sorted(ms):
            mult = ms[cid]
            parts.append(self.names[cid] + (f"^{mult}" if mult > 1 else ""))
        return " + ".join(parts)


def registry_for(alg: MonomialAlgebra, seed: int = 0) -> ClassRegistry:
    key = ("registry", seed)
    if key not in alg._cache:
        alg._cache[key] = ClassRegistry(alg, seed)
    return alg._cache[key]


@dataclass
class DellStep:
    n: int
    arrived: Counter  # stable syzygy multiset reaching this level
    dropped: Counter  # certified summands removed from the orbit
    orbit: Counter  # what remains and gets tested
    candidate: Counter | None
    passed: bool


@dataclass
class DellResult:
    value: float
    status: str  # "exact" | "lower"
    steps: list[DellStep] = field(default_factory=list)
    registry: ClassRegistry | None = None

    def exact(self) -> bool:
        return self.status == "exact"

    def as_value(self, route: str = "orbit") -> InvariantValue:
        return InvariantValue(self.value, self.status, route, self.trace())

    def trace(self) -> str:
        reg = self.registry
        if reg is None:
            return ""
        lines = []
        for s in self.steps:
            cand = "-" if s.candidate is None else reg.show(s.candidate)
            lines.append(
                f"n={s.n}: syzygy {reg.show(s.arrived)}; dropped {reg.show(s.dropped)};"
                f" orbit {reg.show(s.orbit)}; candidate {cand};"
                f" {'pass' if s.passed else 'fail'}"
            )
        return "\n".join(lines)


def _candidate(reg: ClassRegistry, orbit: Counter, steps: int) -> Counter:
    out = orbit
    for _ in range(steps):
        out = reg.nabla_multi(out)
    for _ in range(steps):
        out = reg.omega_multi(out)
    return out


def dell_module(
    m: R.Rep, budget: int = 10, registry: ClassRegistry | None = None, seed: int = 0
) -> DellResult:
    """Delooping level by the orbit engine; conclusive at every step."""
    reg = registry if registry is not None else registry_for(m.alg, seed)
    arrived = reg.classify(R.drop_projectives(m))
    result = DellResult(0, "exact", [], reg)
    orbit, dropped = reg.reduce(arrived)
    for n in range(budget + 1):
        if not orbit:
            result.steps.append(DellStep(n, arrived, dropped, orbit, None, True))
            result.value = n
            return result
        cand = _candidate(reg, orbit, n + 1)
        passed = reg.contains(orbit, cand)
        result.steps.append(DellStep(n, arrived, dropped, orbit, cand, passed))
        if passed:
            result.value = n
            return result
        arrived = reg.omega_multi(orbit)
        orbit, dropped = reg.reduce(arrived)
    result.value = budget + 1
    result.status = "lower"
    return result


def dell_algebra(
    alg: MonomialAlgebra, budget: int = 10, seed: int = 0
) -> tuple[InvariantValue, dict[str, DellResult]]:
    reg = registry_for(alg, seed)
    per: dict[str, DellResult] = {}
    for v in alg.vertices:
        per[v] = dell_module(R.simple(alg, v), budget, reg, seed)
    value = max(r.value for r in per.values())
    status = "exact" if all(r.exact() for r in per.values()) else "lower"
    achieving = [v for v, r in per.items() if r.value == value]
    return (
        InvariantValue(value, status, "orbit", f"achieved at {' '.join(achieving)}"),
        per,
    )


@dataclass
class KdellWitness:
    n: int
    module: R.Rep


def k_dell(
    m: R.Rep,
    k: int,
    budget: int = 10,
    witnesses: list[KdellWitness] | None = None,
    registry: ClassRegistry | None = None,
    seed: int = 0,
) -> InvariantValue:
    """Least n found with Omega^n M a summand of Omega^{n+k} N.

    For k = 1 the canonical candidate is conclusive both ways, so the result
    is exact.  For k >= 2 a candidate failure proves nothing, so the first
    success is only an upper bound (exact when it happens at n = 0), and a
    fruitless sweep reports the trivial upper bound infinity.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    reg = registry if registry is not None else registry_for(m.alg, seed)
    wit = witnesses or []
    arrived = reg.classify(R.drop_projectives(m))
    orbit, _ = reg.reduce(arrived)
    failed_before = False
    for n in range(budget + 1):
        if not orbit:
            status = "exact" if (k == 1 or not failed_before) else "upper"
            return InvariantValue(n, status, "orbit", "stable orbit vanished")
        cand = _candidate(reg, orbit, n + k)
        if reg.contains(orbit, cand):
            status = "exact" if (k == 1 or not failed_before) else "upper"
            return InvariantValue(n, status, "orbit", "canonical candidate")
        for w in wit:
            if w.n != n:
                continue
            target = reg.classify(R.drop_projectives(w.module))
            for _ in range(n + k):
                target = reg.omega_multi(target)
            if reg.contains(orbit, target):
                status = "exact" if (k == 1 or not failed_before) else "upper"
                return InvariantValue(n, status, "witness", f"witness module at n={n}")
        failed_before = True
        orbit, _ = reg.reduce(reg.omega_multi(orbit))
    if k == 1:
        return InvariantValue(budget + 1, "lower", "orbit", "budget exhausted")
    return InvariantValue(INF, "upper", "orbit", "budget exhausted, no bound found")


@dataclass
class DdellWitness:
    """An exact sequence 0 -> C_n -> ... -> C_0 -> M -> 0 with a claimed m.

    ``chain`` lists C_n first.  ``kdell`` optionally supplies helper modules
    for the (i+1)-dell bounds, keyed by the chain index i (0 = rightmost).
    """

    m: int
    chain: list[R.Rep]
    kdell: dict[int, list[KdellWitness]] = field(default_factory=dict)


def verify_exact_chain(m: R.Rep, chain: list[R.Rep], seed: int = 0) -> bool:
    """Check the chain admits maps making 0 -> C_n -> ... -> C_0 -> M -> 0 exact."""
    target = m
    cs = list(reversed(chain))  # C_0 first
    for i, c in enumerate(cs):
        last = i == len(cs) - 1
        if last:
            return R.is_isomorphic(c, target, seed)
        f = R.find_epi(c, target, seed)
        if f is None:
            return False
        target, _ = R.kernel_rep(f)
    return True


def verify_ddell_witness(
    m: R.Rep,
    w: DdellWitness,
    budget: int = 10,
    registry: ClassRegistry | None = None,
    seed: int = 0,
) -> tuple[bool, str]:
    reg = registry if registry is not None else registry_for(m.alg, seed)
    n = len(w.chain) - 1
    if n > w.m:
        return False, f"chain length {n} exceeds m={w.m}"
    if not verify_exact_chain(m, w.chain, seed):
        return False, "chain is not exact"
    for i, c in enumerate(reversed(w.chain)):  # i = 0 at C_0
        bound = w.m - i
        kv = k_dell(c, i + 1, min(budget, bound), w.kdell.get(i), reg, seed)
        if math.isinf(kv.value) or kv.value > bound:
            return False, f"({i + 1})-dell of chain entry {i} not within {bound}"
    return True, "verified"


def ddell_module(
    m: R.Rep,
    budget: int = 10,
    witnesses: list[DdellWitness] | None = None,
    search: bool = True,
    registry: ClassRegistry | None = None,
    seed: int = 0,
    dell: DellResult | None = None,
) -> InvariantValue:
    """Derived delooping level: certified upper bounds plus the zero test.

    Exactness beyond the easy cases (value 0, or dell exactly 1) needs the
    algebra-level redistribution done in ddell_algebra.
    """
    reg = registry if registry is not None else registry_for(m.alg, seed)
    d = dell if dell is not None else dell_module(m, budget, reg, seed)
    upper: float = d.value if d.exact() else INF
    route = "dell upper" if d.exact() else "none"
    cert = ""
    if d.exact() and d.value == 0:
        return InvariantValue(0, "exact", "dell zero", "delooping level is zero")
    if d.exact() and d.value == 1:
        # positive dell forces ddell >= 1, and dell is always an upper bound
        return InvariantValue(1, "exact", "dell upper", "sandwiched at one")
    if search:
        # truncated resolutions 0 -> Omega^j M -> P_{j-1} -> ... -> P_0 -> M
        # give ddell <= j + (j+1)-dell(Omega^j M)
        orbit = reg.classify(R.drop_projectives(m))
        for j in range(1, min(budget, 4) + 1):
            orbit = reg.omega_multi(orbit)
            if not any(orbit.values()):
                break
            probe_rep = R.direct_sum(
                [reg.reps[cid] for cid in sorted(orbit) for _ in range(orbit[cid])]
            )
            kv = k_dell(probe_rep, j + 1, budget, None, reg, seed)
            if not math.isinf(kv.value) and j + kv.value < upper:
                upper = j + kv.value
                route = "truncated resolution"
                cert = f"resolution truncated at step {j}"
    for w in witnesses or []:
        ok, why = verify_ddell_witness(m, w, budget, reg, seed)
        if ok and w.m < upper:
            upper = w.m
            route = "witness sequence"
            cert = f"exact sequence of length {len(w.chain)}"
        elif not ok:
            raise ValueError(f"ddell witness rejected: {why}")
    lower = 1 if (d.exact() and d.value > 0) or d.status == "lower" else 0
    if upper == lower:
        return InvariantValue(upper, "exact", route, cert)
    if math.isinf(upper):
        return InvariantValue(lower, "lower", route, cert)
    return InvariantValue(upper, "upper", route, cert)


def ddell_algebra(
    alg: MonomialAlgebra,
    budget: int = 10,
    witnesses: dict[str, list[DdellWitness]] | None = None,
    seed: int = 0,
) -> tuple[InvariantValue, dict[str, InvariantValue]]:
    """Max over simples, with the finitistic lower bound redistributed.

    Findim of the opposite algebra bounds ddell from below.  When every
    simple but one has a verified upper bound under that lower bound, the
    remaining simple must achieve it, which upgrades both bounds to exact.
    """
    reg = registry_for(alg, seed)
    wits = witnesses or {}
    per: dict[str, InvariantValue] = {}
    dells: dict[str, DellResult] = {}
    for v in alg.vertices:
        s = R.simple(alg, v)
        dells[v] = dell_module(s, budget, reg, seed)
        per[v] = ddell_module(s, budget, wits.get(v), True, reg, seed, dells[v])
    floor, _ = _finite_pd_supremum(alg.opposite())
    uppers = {
        v: (iv.value if iv.status in ("exact", "upper") else INF)
        for v, iv in per.items()
    }
    for v in alg.vertices:
        if uppers[v] >= floor and all(
            uppers[w] < floor for w in alg.vertices if w != v
        ):
            iv = per[v]
            if iv.status in ("exact", "upper") and iv.value == floor:
                per[v] = InvariantValue(
                    floor, "exact", iv.route,
                    (iv.certificate + "; " if iv.certificate else "")
                    + "forced by the opposite finitistic lower bound",
                )
    value_upper = max(uppers.values(), default=0)
    value_lower = max(
        [floor] + [iv.value for iv in per.values() if iv.status in ("exact", "lower")]
    )
    if all(iv.exact() for iv in per.values()):
        return (
            InvariantValue(
                max(iv.value for iv in per.values()), "exact", "per-simple max", ""
            ),
            per,
        )
    if value_upper == value_lower:
        return InvariantValue(value_upper, "exact", "sandwich", ""), per
    if math.isinf(value_upper):
        return InvariantValue(value_lower, "lower", "per-simple max", ""), per
    return InvariantValue(value_upper, "upper", "per-simple max", ""), per


@dataclass
class SubddellWitness:
    module: R.Rep


def subddell_module(
    m: R.Rep,
    budget: int = 10,
    witnesses: list[SubddellWitness] | None = None,
    registry: ClassRegistry | None = None,
    seed: int = 0,
    dell: DellResult | None = None,
) -> InvariantValue:
    """Least dell over verified embeddings of M; M itself always embeds."""
    reg = registry if registry is not None else registry_for(m.alg, seed)
    d = dell if dell is not None else dell_module(m, budget, reg, seed)
    upper: float = d.value if d.exact() else INF
    route = "identity embedding"
    for w in witnesses or []:
        mono = R.find_mono(m, w.module, seed)
        if mono is None:
            raise ValueError("sub-ddell witness rejected: no embedding found")
        dn = dell_module(w.module, budget, reg, seed)
        if dn.exact() and dn.value < upper:
            upper = dn.value
            route = "witness embedding"
    if upper == 0:
        return InvariantValue(0, "exact", route, "")
    if math.isinf(upper):
        return InvariantValue(0, "lower", route, "no exact upper bound found")
    return InvariantValue(upper, "upper", route, "")


def subddell_algebra(
    alg: MonomialAlgebra,
    budget: int = 10,
    witnesses: dict[str, list[SubddellWitness]] | None = None,
    seed: int = 0,
) -> tuple[InvariantValue, dict[str, InvariantValue]]:
    reg = registry_for(alg, seed)
    wits = witnesses or {}
    per: dict[str, InvariantValue] = {}
    for v in alg.vertices:
        per[v] = subddell_module(
            R.simple(alg, v), budget, wits.get(v), reg, seed
        )
    floor, _ = _finite_pd_supremum(alg.opposite())
    uppers = {
        v: (iv.value if iv.status in ("exact", "upper") else INF)
        for v, iv in per.items()
    }
    for v in alg.vertices:
        if uppers[v] >= floor and all(
            uppers[w] < floor for w in alg.vertices if w != v
        ):
            iv = per[v]
            if iv.status in ("exact", "upper") and iv.value == floor:
                per[v] = InvariantValue(
                    floor, "exact", iv.route,
                    "forced by the opposite finitistic lower bound",
                )
    value_upper = max(uppers.values(), default=0)
    value_lower = max(
        [floor] + [iv.value for iv in per.values() if iv.status in ("exact", "lower")]
    )
    if all(iv.exact() for iv in per.values()):
        return (
            InvariantValue(
                max(iv.value for iv in per.values()), "exact", "per-simple max", ""
            ),
            per,
        )
    if value_upper == value_lower:
        return InvariantValue(value_upper, "exact", "sandwich", ""), per
    if math.isinf(value_upper):
        return InvariantValue(value_lower, "lower", "per-simple max", ""), per
    return InvariantValue(value_upper, "upper", "per-simple max", ""), per


def findim_serial_full(alg: MonomialAlgebra, budget: int = 10, seed: int = 0):
    """findim_serial with the opposite delooping data supplied when needed."""
    cls = alg.classify()
    if cls.right_serial or not cls.cyclic_part:
        return findim_serial(alg)
    if cls.left_serial:
        op = alg.opposite()
        value, per = dell_algebra(op, budget, seed)
        return findim_serial(
            alg,
            dell_op_value=value.value,
            dell_op_exact=value.exact(),
            dell_op_per_simple={v: r.value for v, r in per.items()},
        )
    return findim_serial(alg)


def inequality_suite(alg: MonomialAlgebra, budget: int = 10, seed: int = 0) -> dict:
    """Cross-checks between the graph and representation routes.

    Returns the computed invariants plus a list of violated relations; the
    list is empty on every algebra unless something is genuinely wrong.
    """
    op = alg.opposite()
    dell_a, _ = dell_algebra(alg, budget, seed)
    dell_op, _ = dell_algebra(op, budget, seed)
    ddell_a, _ = ddell_algebra(alg, budget, None, seed)
    sub_a, _ = subddell_algebra(alg, budget, None, seed)
    fin = findim_serial_full(alg, budget, seed)
    floor_op, _ = _finite_pd_supremum(op)
    violations: list[str] = []
    if ddell_a.status in ("exact", "upper") and dell_a.exact():
        if ddell_a.value > dell_a.value:
            violations.append("ddell exceeds dell")
    if sub_a.status in ("exact", "upper") and dell_a.exact():
        if sub_a.value > dell_a.value:
            violations.append("sub-ddell exceeds dell")
    if ddell_a.status in ("exact", "upper") and floor_op > ddell_a.value:
        violations.append("opposite finitistic bound exceeds ddell")
    if sub_a.status in ("exact", "upper") and floor_op > sub_a.value:
        violations.append("opposite finitistic bound exceeds sub-ddell")
    cls = alg.classify()
    if cls.right_serial and fin.status == "exact" and dell_op.exact():
        if fin.value != dell_op.value:
            violations.append("serial finitistic value differs from opposite dell")
    return {
        "dell": dell_a,
        "dell_op": dell_op,
        "ddell": ddell_a,
        "subddell": sub_a,
        "findim": fin,
        "floor_op": floor_op,
        "violations": violations,
    }
