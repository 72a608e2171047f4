"""Quiver representations over F_p and the stable-module operations.

A representation assigns to each vertex a row space F_p^d and to each arrow
a matrix acting on the right, so a path acts by the left-to-right product of
its arrow matrices.  All modules are right modules presented this way.

The operations that define the invariants all reduce to four builders:
projective covers through radical complements, kernels of morphisms,
quotients by submodules, and hom spaces solved as one linear system.  The
transpose uses the path-valued entries of a minimal presentation, reversed
over the opposite algebra, so no part of the engine ever needs a basis of
the algebra beyond the path basis itself.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass

import numpy as np
import sympy

from . import gf
from .quiver import BPath, MonomialAlgebra, Word

SPLIT_TRIALS = 60
ISO_TRIALS = 40


class EngineError(RuntimeError):
    """A randomized search stayed inconclusive past its retry budget."""


Label = tuple[int, BPath]


@dataclass
class Rep:
    alg: MonomialAlgebra
    dims: dict[str, int]
    mats: dict[str, np.ndarray]
    labels: dict[str, list[Label]] | None = None  # set on path-indexed builds

    def d(self, v: str) -> int:
        return self.dims.get(v, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.d(v) for v in self.alg.vertices)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def mat(self, a: str) -> np.ndarray:
        return self.mats[a]

    def check(self) -> None:
        p = self.alg.prime
        for a, (s, t) in self.alg.arrows.items():
            if self.mats[a].shape != (self.d(s), self.d(t)):
                raise ValueError(f"arrow {a} has matrix of wrong shape")
        for rel in self.alg.relations:
            prod = gf.eye(self.d(self.alg.word_source(rel)))
            for a in rel:
                prod = gf.matmul(prod, self.mats[a], p)
            if np.any(prod):
                raise ValueError(f"relation {' '.join(rel)} does not act by zero")

    def act(self, rows: np.ndarray, word: Word) -> np.ndarray:
        out = rows
        for a in word:
            out = gf.matmul(out, self.mats[a], self.alg.prime)
        return out


@dataclass
class Mor:
    src: Rep
    tgt: Rep
    blocks: dict[str, np.ndarray]  # vertex -> (src.d(v), tgt.d(v))

    def block(self, v: str) -> np.ndarray:
        return self.blocks[v]

    def then(self, other: "Mor") -> "Mor":
        p = self.src.alg.prime
        blocks = {
            v: gf.matmul(self.blocks[v], other.blocks[v], p)
            for v in self.src.alg.vertices
        }
        return Mor(self.src, other.tgt, blocks)

    def is_epi(self) -> bool:
        p = self.src.alg.prime
        return all(
            gf.rank(self.blocks[v], p) == self.tgt.d(v)
            for v in self.src.alg.vertices
        )

    def is_mono(self) -> bool:
        p = self.src.alg.prime
        return all(
            gf.rank(self.blocks[v], p) == self.src.d(v)
            for v in self.src.alg.vertices
        )

    def is_iso(self) -> bool:
        return self.src.dim_vector() == self.tgt.dim_vector() and self.is_mono()


def zero_rep(alg: MonomialAlgebra) -> Rep:
    dims = {v: 0 for v in alg.vertices}
    mats = {a: gf.zeros(0, 0) for a in alg.arrows}
    return Rep(alg, dims, mats)


def _path_indexed(alg: MonomialAlgebra, paths: list[Label]) -> Rep:
    """Representation with the given (copy, path) basis; arrows append."""
    by_vertex: dict[str, list[Label]] = {v: [] for v in alg.vertices}
    for lab in paths:
        by_vertex[alg.path_target(lab[1])].append(lab)
    index = {lab: i for v in alg.vertices for i, lab in enumerate(by_vertex[v])}
    dims = {v: len(by_vertex[v]) for v in alg.vertices}
    mats = {}
    for a, (s, t) in alg.arrows.items():
        m = gf.zeros(dims[s], dims[t])
        for i, (copy, bp) in enumerate(by_vertex[s]):
            grown = BPath(bp.src, bp.word + (a,))
            j = index.get((copy, grown))
            if j is not None:
                m[i, j] = 1
        mats[a] = m
    return Rep(alg, dims, mats, labels=by_vertex)


def projective(alg: MonomialAlgebra, v: str) -> Rep:
    return projective_sum(alg, [v])


def projective_sum(alg: MonomialAlgebra, tops: list[str]) -> Rep:
    labels = [
        (i, bp)
        for i, v in enumerate(tops)
        for bp in alg.basis()
        if bp.src == v
    ]
    return _path_indexed(alg, labels)


def simple(alg: MonomialAlgebra, v: str) -> Rep:
    if v not in alg.vertices:
        raise ValueError(f"unknown vertex {v!r}")
    dims = {w: (1 if w == v else 0) for w in alg.vertices}
    mats = {a: gf.zeros(dims[s], dims[t]) for a, (s, t) in alg.arrows.items()}
    return Rep(alg, dims, mats)


def path_module(alg: MonomialAlgebra, p: Word) -> Rep:
    """The right module pA, with basis the extensions of p."""
    if not p or alg.is_zero(p):
        raise ValueError("path module needs a nonzero path of length >= 1")
    exts = list(alg.right_extensions(alg.word_target(p), p))
    labels = [(0, BPath(alg.word_target(p), w)) for w in exts]
    return _path_indexed_rel(alg, labels, prefix=p)


def _path_indexed_rel(alg: MonomialAlgebra, labels: list[Label], prefix: Word) -> Rep:
    """Like _path_indexed but words extend ``prefix`` for the zero test."""
    by_vertex: dict[str, list[Label]] = {v: [] for v in alg.vertices}
    start = alg.word_target(prefix)
    for lab in labels:
        tgt = start if not lab[1].word else alg.word_target(lab[1].word)
        by_vertex[tgt].append(lab)
    index = {lab: i for v in alg.vertices for i, lab in enumerate(by_vertex[v])}
    dims = {v: len(by_vertex[v]) for v in alg.vertices}
    mats = {}
    for a, (s, t) in alg.arrows.items():
        m = gf.zeros(dims[s], dims[t])
        for i, (copy, bp) in enumerate(by_vertex[s]):
            if alg.is_zero(prefix + bp.word + (a,)):
                continue
            j = index.get((copy, BPath(bp.src, bp.word + (a,))))
            if j is not None:
                m[i, j] = 1
        mats[a] = m
    return Rep(alg, dims, mats, labels=by_vertex)


def injective(alg: MonomialAlgebra, v: str) -> Rep:
    """Dual of the opposite projective: basis the nonzero paths into v."""
    into = [bp for bp in alg.basis() if alg.path_target(bp) == v]
    by_vertex: dict[str, list[BPath]] = {w: [] for w in alg.vertices}
    for bp in into:
        by_vertex[bp.src].append(bp)
    index = {bp: i for w in alg.vertices for i, bp in enumerate(by_vertex[w])}
    dims = {w: len(by_vertex[w]) for w in alg.vertices}
    mats = {}
    for a, (s, t) in alg.arrows.items():
        m = gf.zeros(dims[s], dims[t])
        for i, bp in enumerate(by_vertex[s]):
            if bp.word and bp.word[0] == a:
                j = index[BPath(t, bp.word[1:])]
                m[i, j] = 1
        mats[a] = m
    return Rep(alg, dims, mats)


def direct_sum(reps: list[Rep]) -> Rep:
    if not reps:
        raise ValueError("empty direct sum needs an algebra; use zero_rep")
    alg = reps[0].alg
    dims = {v: sum(r.d(v) for r in reps) for v in alg.vertices}
    mats = {}
    for a, (s, t) in alg.arrows.items():
        m = gf.zeros(dims[s], dims[t])
        ro = co = 0
        for r in reps:
            m[ro : ro + r.d(s), co : co + r.d(t)] = r.mats[a]
            ro += r.d(s)
            co += r.d(t)
        mats[a] = m
    return Rep(alg, dims, mats)


def sub_rep(amb: Rep, rows: dict[str, np.ndarray]) -> tuple[Rep, Mor]:
    """The subrepresentation spanned by arrow-stable row sets."""
    p = amb.alg.prime
    basis = {v: gf.row_basis(rows.get(v, gf.zeros(0, amb.d(v))), p) for v in amb.alg.vertices}
    dims = {v: basis[v].shape[0] for v in amb.alg.vertices}
    mats = {}
    for a, (s, t) in amb.alg.arrows.items():
        image = gf.matmul(basis[s], amb.mats[a], p)
        sol = gf.solve_left(basis[t], image, p)
        if sol is None:
            raise ValueError("row sets are not arrow stable")
        mats[a] = sol
    sub = Rep(amb.alg, dims, mats)
    incl = Mor(sub, amb, {v: basis[v] for v in amb.alg.vertices})
    return sub, incl


def quotient_rep(amb: Rep, rows: dict[str, np.ndarray]) -> tuple[Rep, Mor]:
    """The quotient by the submodule spanned by arrow-stable row sets."""
    p = amb.alg.prime
    sub = {v: gf.row_basis(rows.get(v, gf.zeros(0, amb.d(v))), p) for v in amb.alg.vertices}
    comp = {v: gf.complete_basis(sub[v], amb.d(v), p) for v in amb.alg.vertices}
    dims = {v: comp[v].shape[0] for v in amb.alg.vertices}
    mats = {}
    for a, (s, t) in amb.alg.arrows.items():
        image = gf.matmul(comp[s], amb.mats[a], p)
        full = gf.stack([sub[t], comp[t]], amb.d(t))
        sol = gf.solve_left(full, image, p)
        if sol is None:
            raise ValueError("submodule rows are not arrow stable")
        mats[a] = sol[:, sub[t].shape[0] :]
    quot = Rep(amb.alg, dims, mats)
    proj_blocks = {}
    for v in amb.alg.vertices:
        full = gf.stack([sub[v], comp[v]], amb.d(v))
        sol = gf.solve_left(full, gf.eye(amb.d(v)), p)
        proj_blocks[v] = sol[:, sub[v].shape[0] :]
    proj = Mor(amb, quot, proj_blocks)
    return quot, proj


def submodule_closure(amb: Rep, seeds: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Arrow-stable row spaces generated by the seed vectors."""
    p = amb.alg.prime
    rows = {v: gf.row_basis(seeds.get(v, gf.zeros(0, amb.d(v))), p) for v in amb.alg.vertices}
    changed = True
    while changed:
        changed = False
        for a, (s, t) in amb.alg.arrows.items():
            if rows[s].shape[0] == 0:
                continue
            img = gf.matmul(rows[s], amb.mats[a], p)
            combined = gf.row_basis(gf.stack([rows[t], img], amb.d(t)), p)
            if combined.shape[0] != rows[t].shape[0]:
                rows[t] = combined
                changed = True
    return rows


def quotient_by_paths(alg: MonomialAlgebra, v: str, words: list[Word]) -> Rep:
    """P_v modulo the submodule generated by the given paths from v."""
    amb = projective(alg, v)
    assert amb.labels is not None
    seeds: dict[str, np.ndarray] = {}
    for w in alg.vertices:
        picks = []
        for i, (_, bp) in enumerate(amb.labels[w]):
            if any(bp.word[: len(p)] == p for p in words):
                vec = gf.zeros(1, amb.d(w))
                vec[0, i] = 1
                picks.append(vec)
        if picks:
            seeds[w] = np.vstack(picks)
    for p in words:
        if alg.word_source(p) != v:
            raise ValueError(f"path {' '.join(p)} does not start at {v}")
    quot, _ = quotient_rep(amb, seeds)
    return quot


def cyclic_quotient(alg: MonomialAlgebra, p: Word) -> Rep:
    """A/pA assembled vertexwise; only the summand at source(p) is cut."""
    if not p or alg.is_zero(p):
        raise ValueError("cyclic quotient needs a nonzero path of length >= 1")
    src = alg.word_source(p)
    parts = []
    for v in alg.vertices:
        parts.append(quotient_by_paths(alg, v, [p]) if v == src else projective(alg, v))
    return direct_sum(parts)


def socle_at(rep: Rep, v: str) -> np.ndarray:
    """Rows of M_v killed by every arrow leaving v."""
    p = rep.alg.prime
    outs = rep.alg.arrows_from(v)
    if not outs:
        return gf.eye(rep.d(v))
    stacked = np.hstack([rep.mats[a] for a in outs]) if rep.d(v) else gf.zeros(0, 0)
    return gf.left_nullspace(stacked, p)


def glue_socle(a: Rep, b: Rep, v: str) -> Rep:
    """Pushout of two modules along a one-dimensional socle at v."""
    p = a.alg.prime
    sa, sb = socle_at(a, v), socle_at(b, v)
    if sa.shape[0] != 1 or sb.shape[0] != 1:
        raise ValueError(f"gluing needs one-dimensional socles at {v}")
    amb = direct_sum([a, b])
    vec = gf.zeros(1, amb.d(v))
    vec[0, : a.d(v)] = sa[0]
    vec[0, a.d(v) :] = (-sb[0]) % p
    quot, _ = quotient_rep(amb, {v: vec})
    return quot


# -- covers, syzygies, transpose --------------------------------------------


def radical_rows(rep: Rep) -> dict[str, np.ndarray]:
    p = rep.alg.prime
    out = {}
    for v in rep.alg.vertices:
        imgs = [rep.mats[a] for a in rep.alg.arrows_into(v)]
        out[v] = gf.row_basis(gf.stack(imgs, rep.d(v)), p)
    return out


def top_dims(rep: Rep) -> dict[str, int]:
    rad = radical_rows(rep)
    return {v: rep.d(v) - rad[v].shape[0] for v in rep.alg.vertices}


def projective_cover(rep: Rep) -> tuple[Rep, Mor]:
    """Minimal cover P -> M: one projective per radical complement vector."""
    p = rep.alg.prime
    rad = radical_rows(rep)
    tops: list[str] = []
    lifts: list[tuple[str, np.ndarray]] = []
    for v in rep.alg.vertices:
        comp = gf.complete_basis(rad[v], rep.d(v), p)
        for row in comp:
            tops.append(v)
            lifts.append((v, row))
    cover = projective_sum(rep.alg, tops)
    assert cover.labels is not None
    blocks = {}
    for v in rep.alg.vertices:
        m = gf.zeros(cover.d(v), rep.d(v))
        for i, (copy, bp) in enumerate(cover.labels[v]):
            src, row = lifts[copy]
            m[i] = rep.act(row.reshape(1, -1), bp.word)[0]
        blocks[v] = m
    phi = Mor(cover, rep, blocks)
    return cover, phi


def kernel_rep(mor: Mor) -> tuple[Rep, Mor]:
    p = mor.src.alg.prime
    rows = {v: gf.left_nullspace(mor.blocks[v], p) for v in mor.src.alg.vertices}
    return sub_rep(mor.src, rows)


def drop_projectives(rep: Rep) -> Rep:
    """Split off projective direct summands until none remain.

    P_v splits off exactly when some g: M -> P_v hits the generator coordinate
    on some m in M_v; then g corrected by the unit g(m) gives a retraction.
    """
    p = rep.alg.prime
    current = rep
    while not current.is_zero():
        split = False
        for v in current.alg.vertices:
            if current.d(v) == 0:
                continue
            pv = projective(current.alg, v)
            assert pv.labels is not None
            gen_idx = next(
                i for i, (_, bp) in enumerate(pv.labels[v]) if not bp.word
            )
            homs = hom_space(current, pv)
            pair = None
            for g in homs:
                col = g.blocks[v][:, gen_idx]
                nz = np.nonzero(col)[0]
                if nz.size:
                    pair = (g, int(nz[0]))
                    break
            if pair is None:
                continue
            g, i = pair
            m_row = gf.zeros(1, current.d(v))
            m_row[0, i] = 1
            f_blocks = {}
            for w in current.alg.vertices:
                mb = gf.zeros(pv.d(w), current.d(w))
                for j, (_, bp) in enumerate(pv.labels[w]):
                    mb[j] = current.act(m_row, bp.word)[0]
                f_blocks[w] = mb
            f = Mor(pv, current, f_blocks)
            h = f.then(g)
            inv_blocks = {}
            ok = True
            for w in current.alg.vertices:
                inv = gf.inverse(h.blocks[w], p) if pv.d(w) else gf.zeros(0, 0)
                if inv is None:
                    ok = False
                    break
                inv_blocks[w] = inv
            if not ok:
                continue
            retraction = g.then(Mor(pv, pv, inv_blocks))
            before = current.total_dim()
            current, _ = kernel_rep(retraction)
            assert current.total_dim() == before - pv.total_dim()
            split = True
            break
        if not split:
            break
    return current


def syzygy(rep: Rep, drop: bool = True) -> Rep:
    """Kernel of the projective cover, projective summands dropped by default."""
    stable = drop_projectives(rep) if drop else rep
    if stable.is_zero():
        return zero_rep(rep.alg)
    cover, phi = projective_cover(stable)
    ker, _ = kernel_rep(phi)
    assert ker.total_dim() == cover.total_dim() - stable.total_dim()
    return drop_projectives(ker) if drop else ker


PathElem = dict[Word, int]


def _tops_of(proj: Rep) -> list[str]:
    """Vertices of the summands of a path-indexed projective, in copy order."""
    assert proj.labels is not None
    found: dict[int, str] = {}
    for v in proj.alg.vertices:
        for copy, bp in proj.labels[v]:
            if not bp.word:
                found[copy] = v
    return [found[i] for i in range(len(found))]


def minimal_presentation(rep: Rep) -> tuple[list[str], list[str], list[list[PathElem]]]:
    """Tops of P1 and P0 and path-valued entries of the map P1 -> P0."""
    cover, phi = projective_cover(rep)
    assert cover.labels is not None
    ker, incl = kernel_rep(phi)
    kcover, kphi = projective_cover(ker)
    assert kcover.labels is not None
    p = rep.alg.prime
    tops0 = _tops_of(cover)
    tops1 = _tops_of(kcover)
    gens: dict[int, np.ndarray] = {}
    for v in rep.alg.vertices:
        for i, (copy, bp) in enumerate(kcover.labels[v]):
            if not bp.word:
                krow = kphi.blocks[v][i].reshape(1, -1)
                gens[copy] = gf.matmul(krow, incl.blocks[v], p)[0]
    entries: list[list[PathElem]] = []
    for i, u in enumerate(tops1):
        row_entries: list[PathElem] = [dict() for _ in tops0]
        for idx, (copy, bp) in enumerate(cover.labels[u]):
            c = int(gens[i][idx])
            if c:
                row_entries[copy][bp.word] = c
        entries.append(row_entries)
    return tops1, tops0, entries


def transpose(rep: Rep) -> Rep:
    """Auslander-Bryant transpose over the opposite algebra, stabilized.

    The path-valued presentation matrix is reversed entrywise; the transpose
    is the cokernel of the resulting map between opposite projectives.
    """
    stable = drop_projectives(rep)
    op = rep.alg.opposite()
    if stable.is_zero():
        return zero_rep(op)
    tops1, tops0, entries = minimal_presentation(stable)
    if not tops1:
        return zero_rep(op)
    target = projective_sum(op, tops1)
    assert target.labels is not None
    index = {
        (copy, bp): (v, i)
        for v in op.vertices
        for i, (copy, bp) in enumerate(target.labels[v])
    }
    seeds: dict[str, list[np.ndarray]] = {v: [] for v in op.vertices}
    for j, vj in enumerate(tops0):
        # a path v_j -> u_i reverses to a path u_i -> v_j, so the image of
        # the j-th generator lies entirely at the vertex v_j
        vec = gf.zeros(1, target.d(vj))
        nonzero = False
        for i in range(len(tops1)):
            for word, coeff in entries[i][j].items():
                rev = tuple(reversed(word))
                v, idx = index[(i, BPath(tops1[i], rev))]
                assert v == vj
                vec[0, idx] = coeff % op.prime
                nonzero = True
        if nonzero:
            seeds[vj].append(vec)
    seed_rows = {
        v: (np.vstack(rows) if rows else gf.zeros(0, target.d(v)))
        for v, rows in seeds.items()
    }
    image = submodule_closure(target, seed_rows)
    coker, _ = quotient_rep(target, image)
    return drop_projectives(coker)


def deloop(rep: Rep) -> Rep:
    """Left adjoint of the syzygy: transpose, syzygy over the opposite, back."""
    tr = transpose(rep)
    om = syzygy(tr)
    return transpose(om)


# -- hom spaces and decompositions -------------------------------------------


def hom_space(m: Rep, n: Rep) -> list[Mor]:
    p = m.alg.prime
    verts = list(m.alg.vertices)
    sizes = [m.d(v) * n.d(v) for v in verts]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offsets[-1])
    if total == 0:
        return []
    eq_rows = []
    for a, (s, t) in m.alg.arrows.items():
        rcount = m.d(s) * n.d(t)
        if rcount == 0:
            continue
        block = gf.zeros(rcount, total)
        si, ti = verts.index(s), verts.index(t)
        if sizes[ti]:
            block[:, offsets[ti] : offsets[ti + 1]] = np.kron(
                m.mats[a], gf.eye(n.d(t))
            )
        if sizes[si]:
            block[:, offsets[si] : offsets[si + 1]] = (
                block[:, offsets[si] : offsets[si + 1]]
                - np.kron(gf.eye(m.d(s)), n.mats[a].T)
            ) % p
        eq_rows.append(block)
    if eq_rows:
        system = np.vstack(eq_rows) % p
        sols = gf.right_nullspace(system, p)
    else:
        sols = gf.eye(total)
    out = []
    for row in sols:
        blocks = {}
        for i, v in enumerate(verts):
            seg = row[offsets[i] : offsets[i + 1]]
            blocks[v] = seg.reshape(m.d(v), n.d(v)) % p
        out.append(Mor(m, n, blocks))
    return out


def identity_mor(m: Rep) -> Mor:
    return Mor(m, m, {v: gf.eye(m.d(v)) for v in m.alg.vertices})


def _combo(homs: list[Mor], coeffs: list[int], p: int) -> Mor:
    blocks = {}
    m, n = homs[0].src, homs[0].tgt
    for v in m.alg.vertices:
        acc = gf.zeros(m.d(v), n.d(v))
        for c, h in zip(coeffs, homs):
            if c:
                acc = (acc + c * h.blocks[v]) % p
        blocks[v] = acc
    return Mor(m, n, blocks)


def _total_matrix(mor: Mor) -> np.ndarray:
    """Block-diagonal matrix of an endomorphism on the total space."""
    n = mor.src.total_dim()
    out = gf.zeros(n, n)
    off = 0
    for v in mor.src.alg.vertices:
        d = mor.src.d(v)
        out[off : off + d, off : off + d] = mor.blocks[v]
        off += d
    return out


def _poly_mult(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _eval_poly(mor: Mor, coeffs: list[int]) -> Mor:
    p = mor.src.alg.prime
    blocks = {}
    for v in mor.src.alg.vertices:
        d = mor.src.d(v)
        acc = gf.zeros(d, d)
        power = gf.eye(d)
        for c in coeffs:
            if c:
                acc = (acc + c * power) % p
            power = gf.matmul(power, mor.blocks[v], p)
        blocks[v] = acc
    return Mor(mor.src, mor.src, blocks)


def _seed_for(rep: Rep, seed: int) -> int:
    return hash((seed, rep.total_dim(), rep.dim_vector())) & 0x7FFFFFFF


def _char_poly_total(mor: Mor) -> list[int]:
    p = mor.src.alg.prime
    coeffs = [1]
    for v in mor.src.alg.vertices:
        if mor.src.d(v):
            coeffs = _poly_mult(coeffs, gf.char_poly(mor.blocks[v], p), p)
    return coeffs


def decompose(rep: Rep, seed: int = 0) -> list[Rep]:
    """Indecomposable summands, with repetition, in deterministic order.

    Splits along generalized eigenspaces of random endomorphisms; when no
    split appears, the endomorphism ring is certified local by exhibiting its
    traceless part as a nilpotent ideal of codimension one.
    """
    if rep.is_zero():
        return []
    p = rep.alg.prime
    homs = hom_space(rep, rep)
    if len(homs) == 1:
        return [rep]
    rng = random.Random(_seed_for(rep, seed))
    x = sympy.Symbol("x")
    for trial in range(SPLIT_TRIALS):
        coeffs = [rng.randrange(p) for _ in homs]
        f = _combo(homs, coeffs, p)
        cp = _char_poly_total(f)
        poly = sympy.Poly(list(reversed(cp)), x, modulus=p)
        factors = poly.factor_list()[1]
        if len(factors) < 2:
            if trial == 7 and _certify_local(rep, homs):
                return [rep]
            continue
        pieces = []
        for g, mult in factors:
            gc = [int(c) % p for c in reversed(g.all_coeffs())]
            gm = [1]
            for _ in range(mult):
                gm = _poly_mult(gm, gc, p)
            ker, _ = kernel_rep(_eval_poly(f, gm))
            if not ker.is_zero():
                pieces.append(ker)
        if len(pieces) < 2:
            continue
        assert sum(k.total_dim() for k in pieces) == rep.total_dim()
        out = []
        for piece in pieces:
            out.extend(decompose(piece, seed))
        out.sort(key=lambda r: (r.total_dim(), r.dim_vector()))
        return out
    if _certify_local(rep, homs):
        return [rep]
    raise EngineError(
        f"could not decompose a module of dimension {rep.total_dim()}"
    )


def _certify_local(rep: Rep, homs: list[Mor]) -> bool:
    """Certify End(M) local: its traceless part is a nilpotent ideal.

    A nil ideal of codimension one forces End/rad = F_p, so the certificate
    is sound; it can miss indecomposables whose residue field is a proper
    extension of F_p, which then surface as an explicit engine error.
    """
    p = rep.alg.prime
    n = rep.total_dim()
    if n % p == 0:
        return False
    totals = [_total_matrix(h) for h in homs]
    ninv = gf.inv_scalar(n, p)
    vecs = []
    for t in totals:
        c = int(np.trace(t) % p) * ninv % p
        vecs.append(((t - c * gf.eye(n)) % p).reshape(1, -1))
    basis = gf.row_basis(np.vstack(vecs), p)
    if basis.shape[0] != len(homs) - 1:
        return False
    traceless = [b.reshape(n, n) for b in basis]
    for t in totals:
        for w in traceless:
            if int(np.trace(gf.matmul(t, w, p)) % p) or int(
                np.trace(gf.matmul(w, t, p)) % p
            ):
                return False
    # W is an ideal, so its power chain descends; it must reach zero
    layer = traceless
    while layer:
        prods = [
            gf.matmul(a, w, p).reshape(1, -1) for a in layer for w in traceless
        ]
        nxt = gf.row_basis(np.vstack(prods), p)
        if nxt.shape[0] == 0:
            return True
        if nxt.shape[0] >= len(layer):
            return False
        layer = [b.reshape(n, n) for b in nxt]
    return True


def _iso_local(x: Rep, y: Rep) -> bool:
    """Exact isomorphism test for modules with local endomorphism rings.

    Non-units of End(x) form its radical, a subspace, so if no composite of
    hom basis elements is invertible then no combination is either.
    """
    fwd = hom_space(x, y)
    if not fwd:
        return False
    back = hom_space(y, x)
    return any(f.then(g).is_iso() for f in fwd for g in back)


def is_isomorphic(x: Rep, y: Rep, seed: int = 0) -> bool:
    if x.dim_vector() != y.dim_vector():
        return False
    if x.is_zero():
        return True
    xs = decompose(x, seed)
    ys = decompose(y, seed)
    if len(xs) != len(ys):
        return False
    used = [False] * len(ys)
    for xi in xs:
        found = False
        for j, yj in enumerate(ys):
            if used[j] or xi.dim_vector() != yj.dim_vector():
                continue
            if _iso_local(xi, yj):
                used[j] = True
                found = True
                break
        if not found:
            return False
    return True


def is_direct_summand(x: Rep, y: Rep, seed: int = 0) -> bool:
    """Whether x is a direct summand of y, by Krull-Schmidt multiplicities."""
    if x.is_zero():
        return True
    xs = decompose(x, seed)
    ys = decompose(y, seed)
    used = [False] * len(ys)
    for xi in xs:
        found = False
        for j, yj in enumerate(ys):
            if used[j]:
                continue
            if xi.dim_vector() == yj.dim_vector() and _iso_local(xi, yj):
                used[j] = True
                found = True
                break
        if not found:
            return False
    return True


# -- presentation helpers -----------------------------------------------------


def loewy_string(rep: Rep) -> str:
    """Radical-layer diagram like '5 6/1'; '0' for the zero module."""
    if rep.is_zero():
        return "0"
    p = rep.alg.prime
    layers = []
    rows = {v: gf.eye(rep.d(v)) for v in rep.alg.vertices}
    while any(r.shape[0] for r in rows.values()):
        nxt = {}
        for v in rep.alg.vertices:
            imgs = [
                gf.matmul(rows[s], rep.mats[a], p)
                for a, (s, t) in rep.alg.arrows.items()
                if t == v and rows[s].shape[0]
            ]
            nxt[v] = gf.row_basis(gf.stack(imgs, rep.d(v)), p)
        layer = []
        for v in rep.alg.vertices:
            mult = rows[v].shape[0] - nxt[v].shape[0]
            layer.extend([v] * mult)
        layers.append(" ".join(layer))
        rows = nxt
    return "/".join(layers)


def rep_to_json(rep: Rep) -> str:
    return json.dumps(
        {
            "dims": rep.dims,
            "mats": {a: rep.mats[a].tolist() for a in rep.alg.arrows},
        },
        sort_keys=True,
    )


def rep_from_json(alg: MonomialAlgebra, text: str) -> Rep:
    data = json.loads(text)
    dims = {v: int(data["dims"].get(v, 0)) for v in alg.vertices}
    mats = {}
    for a, (s, t) in alg.arrows.items():
        mats[a] = np.array(data["mats"][a], dtype=np.int64).reshape(dims[s], dims[t])
    rep = Rep(alg, dims, mats)
    rep.check()
    return rep


def find_epi(m: Rep, n: Rep, seed: int = 0, trials: int = ISO_TRIALS) -> Mor | None:
    homs = hom_space(m, n)
    if not homs:
        return None
    p = m.alg.prime
    rng = random.Random(_seed_for(m, seed) ^ _seed_for(n, seed + 7))
    for trial in range(trials):
        if trial < len(homs):
            coeffs = [1 if i == trial else 0 for i in range(len(homs))]
        else:
            coeffs = [rng.randrange(p) for _ in homs]
        f = _combo(homs, coeffs, p)
        if f.is_epi():
            return f
    return None


def find_mono(m: Rep, n: Rep, seed: int = 0, trials: int = ISO_TRIALS) -> Mor | None:
    homs = hom_space(m, n)
    if not homs:
        return None
    p = m.alg.prime
    rng = random.Random(_seed_for(m, seed) ^ _seed_for(n, seed + 11))
    for trial in range(trials):
        if trial < len(homs):
            coeffs = [1 if i == trial else 0 for i in range(len(homs))]
        else:
            coeffs = [rng.randrange(p) for _ in homs]
        f = _combo(homs, coeffs, p)
        if f.is_mono():
            return f
    return None
