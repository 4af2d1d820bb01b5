"""Verifiers for h-scatteredness and (h, r)-evasiveness of F_q-subspaces.

Three modes share one weight kernel:

* exhaustive - every dim-h subspace of the ambient space, in the frozen
  Grassmannian order; a completed sweep is a proof.
* witness_span - for d = 1..h, spans of d-tuples of vectors of U itself
  (first vector a scalar-class representative, extension-dependent prefixes
  skipped).  Complete for weight violations: if some dim-h subspace H meets
  U in dimension > bound, then H' = <U n H> over the extension is spanned
  by at most h extension-independent vectors of U and meets U at least as
  much, so the tuple sweep finds a violation iff one exists.  This replaces
  a Grassmannian-sized sweep by a |U|^d-sized one.
* sampled - seeded random subspaces; can only produce a witness or report
  "inconclusive", never "holds".

Violations always carry a machine-checkable witness (subspace basis plus an
F_q-basis of the offending intersection) that re-verifies independently.

Batch engines (numpy, q = 2, expanded width <= 64 bits) and scalar engines
produce identical verdicts, counts and first witnesses; tests cross-validate
them on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bitkernel
from .field import FieldTower
from .linalg import (
    FqSubspace,
    SubspaceQn,
    derive_seed,
    expand_vector,
    gaussian_binomial,
    intersection_rows,
    make_rows,
    matrix_rank,
    sample_subspace,
    subspace_at,
    subspace_fq_rows,
    unexpand_row,
    _pivot_blocks,
    _subspace_from_assignment,
)
from .construction import QSystem, system_from_desc, system_to_desc
from .runner import ChunkResult, run_sweep

TABLE_BITS = 14          # target log2 size of per-block xor tables
SPAN_TABLE_CAP = 1 << 20  # max |U| for the batched tuple sweep
DEFAULT_CHUNKS = {"exhaustive": 1 << 14, "witness_span": 512, "sampled": 1 << 14}


def scattered_dim_bound(r: int, n: int, h: int) -> int:
    """Largest possible F_q-dimension of an h-scattered subspace of F_{q^n}^r."""
    if h < 1:
        raise ValueError("h must be at least 1")
    return (r * n) // (h + 1)


def subspace_weight(U, H: SubspaceQn) -> int:
    """dim_Fq(U n H), treating H as an F_q-space of dimension n*dim(H)."""
    sub = U.subspace if isinstance(U, QSystem) else U
    if H.k != sub.k or H.tower != sub.tower:
        raise ValueError("subspace and ambient space mismatch")
    rows = subspace_fq_rows(sub.tower, H)
    added = _added_rank(sub, rows)
    return sub.tower.n * H.dim - added


def _added_rank(sub: FqSubspace, rows) -> int:
    acc = make_rows(sub.tower)
    added = 0
    for r in rows:
        r = sub.reduce_row(r)
        if acc.add(r):
            added += 1
    return added


# --- weight context shared by the sweep engines ---


class _Context:
    def __init__(self, tower: FieldTower, system: QSystem):
        self.tower = tower
        self.system = system
        self.U = system.subspace
        self.k = system.ambient
        self.n = tower.n
        self.width = self.k * tower.n
        self.q2 = tower.q == 2
        self.batch_ok = self.q2 and self.width <= bitkernel.MAX_WIDTH

    # scalar weights

    def weight_of_subspace(self, H: SubspaceQn) -> int:
        return subspace_weight(self.U, H)

    def weight_of_span(self, vectors) -> tuple[int, SubspaceQn]:
        H = SubspaceQn.from_vectors(self.tower, self.k, vectors)
        return self.weight_of_subspace(H), H

    # reduced expansion tables, q = 2 only:
    # M[l][c][v] = (expansion of b_l * v, placed at coordinate c) reduced mod U

    def m_red(self):
        if not hasattr(self, "_m_red"):
            t = self.tower
            n, k = self.n, self.k
            U = self.U
            tabs = []
            for l in range(n):
                per_c = []
                b = t.q_basis[l]
                base_tab = [0] * t.order
                for v in range(t.order):
                    e = t.expand_scalar(t.mul(b, v))
                    bits = 0
                    for j, x in enumerate(e):
                        bits |= x << j
                    base_tab[v] = bits
                for c in range(k):
                    per_c.append([U.reduce_row(x << (c * n)) for x in base_tab])
                tabs.append(per_c)
            self._m_red = tabs
        return self._m_red

    def m_red_np(self):
        if not hasattr(self, "_m_red_np"):
            self._m_red_np = [
                [np.array(col, dtype=np.uint64) for col in per_l] for per_l in self.m_red()
            ]
        return self._m_red_np

# --- exhaustive sweep over the Grassmannian ---


class ExhaustiveSweep:
    """Units are subspace indices in the frozen enumeration order."""

    def __init__(self, tower, system, dim: int, bound: int | None, engine: str):
        self.ctx = _Context(tower, system)
        self.dim = dim
        self.bound = bound
        self.engine = engine
        Q = tower.order
        self.blocks = []
        start = 0
        for pivots, cells, count in _pivot_blocks(self.ctx.k, dim, Q):
            self.blocks.append((start, pivots, cells, count))
            start += count
        self.total_units = start

    def run_units(self, lo: int, hi: int) -> ChunkResult:
        use_batch = self.engine != "scalar" and self.ctx.batch_ok and self.dim > 0
        checked = 0
        viol = None
        best = None
        for gstart, pivots, cells, count in self.blocks:
            if viol is not None:
                break
            blo = max(lo - gstart, 0)
            bhi = min(hi - gstart, count)
            if blo >= bhi:
                continue
            runner = self._block_batch if use_batch else self._block_scalar
            c, v, b = runner(gstart, pivots, cells, count, blo, bhi)
            checked += c
            best = _keep_best(best, b)
            viol = v
        return ChunkResult(lo, hi, checked, viol, best)

    def _weight_at(self, pivots, cells, a) -> tuple[int, SubspaceQn]:
        H = _subspace_from_assignment(self.ctx.tower, self.ctx.k, pivots, cells, a)
        return self.ctx.weight_of_subspace(H), H

    def _block_scalar(self, gstart, pivots, cells, count, blo, bhi):
        checked = 0
        viol = None
        best = None
        for a in range(blo, bhi):
            w, _ = self._weight_at(pivots, cells, a)
            checked += 1
            best = _keep_best(best, {"key": [gstart + a], "weight": w})
            if self.bound is not None and w > self.bound:
                viol = {"key": [gstart + a], "weight": w}
                break
        return checked, viol, best

    def _block_batch(self, gstart, pivots, cells, count, blo, bhi):
        ctx = self.ctx
        n = ctx.n
        nfree = len(cells)
        low_cells = min(nfree, max(1, TABLE_BITS // n))
        L = n * low_cells
        size = 1 << L
        m = ctx.m_red()
        R = self.dim * n
        # xor tables over the low free cells, one per expansion row
        tables = []
        for i in range(self.dim):
            for l in range(n):
                deltas = []
                for t in range(L):
                    cell_i, cell_c = cells[nfree - 1 - t // n]
                    b = t % n
                    deltas.append(m[l][cell_c][1 << b] if cell_i == i else 0)
                tables.append(bitkernel.subset_xor_table(deltas))
        high_cells = cells[: nfree - low_cells]
        checked = 0
        viol = None
        best = None
        for high in range(blo >> L, ((bhi - 1) >> L) + 1):
            sl_lo = max(blo - (high << L), 0)
            sl_hi = min(bhi - (high << L), size)
            bases = self._bases_for_high(pivots, high_cells, high, m)
            rows = [bases[r] ^ tables[r][sl_lo:sl_hi] for r in range(R)]
            ranks = bitkernel.batch_rank(rows)
            wts = R - ranks.astype(np.int64)
            g0 = gstart + (high << L) + sl_lo
            if self.bound is not None:
                over = wts > self.bound
                if over.any():
                    off = int(np.argmax(over))
                    w, _ = self._weight_at(pivots, cells, (high << L) + sl_lo + off)
                    assert w == int(wts[off]), "batch/scalar weight mismatch"
                    viol = {"key": [g0 + off], "weight": w}
                    wts = wts[: off + 1]
                    checked += off + 1
                    best = _keep_best(best, _best_of(wts, g0))
                    return checked, viol, best
            checked += sl_hi - sl_lo
            best = _keep_best(best, _best_of(wts, g0))
        return checked, viol, best

    def _bases_for_high(self, pivots, high_cells, high, m):
        ctx = self.ctx
        n = ctx.n
        Q = ctx.tower.order
        entries = {}
        for i, p in enumerate(pivots):
            entries[(i, p)] = 1
        a = high
        for (i, c) in reversed(high_cells):
            a, v = divmod(a, Q)
            if v:
                entries[(i, c)] = v
        bases = []
        for i in range(self.dim):
            for l in range(n):
                row = 0
                ml = m[l]
                for (ei, c), v in entries.items():
                    if ei == i:
                        row ^= ml[c][v]
                bases.append(np.uint64(row))
        return bases


def _keep_best(a, b):
    if b is None:
        return a
    if a is None:
        return b
    return b if b["weight"] > a["weight"] else a


def _best_of(wts, g0):
    if len(wts) == 0:
        return None
    off = int(np.argmax(wts))
    return {"key": [g0 + off], "weight": int(wts[off])}


# --- witness-span sweep over tuples of U-vectors ---


class SpanSweep:
    """Units are (d, first-index) pairs: unit = (d-1)*R + position.

    For each first vector (a scalar-class representative) the remaining
    tuple indices increase strictly; prefixes that are dependent over the
    extension field are skipped and not counted.
    """

    def __init__(self, tower, system, dmax: int, bound: int | None, engine: str):
        self.ctx = _Context(tower, system)
        self.dmax = dmax
        self.bound = bound
        self.engine = engine
        t = tower
        self.NU = t.q**self.ctx.U.dim
        if self.NU > SPAN_TABLE_CAP and engine != "scalar":
            raise ValueError(
                f"witness-span sweep over {self.NU} subspace elements exceeds the cap; "
                "use sampled mode"
            )
        if t.q == 2:
            self.reps = None  # identity: position p -> element index p+1
            self.R = self.NU - 1
        else:
            reps = []
            for idx in range(1, self.NU):
                if self._is_rep(idx):
                    reps.append(idx)
            self.reps = reps
            self.R = len(reps)
        self.total_units = self.dmax * self.R

    def _is_rep(self, idx: int) -> bool:
        # scalar-class representative: highest nonzero base-q digit equals 1
        q = self.ctx.tower.q
        digits = []
        while idx:
            idx, d = divmod(idx, q)
            digits.append(d)
        return digits[-1] == 1

    def _first_index(self, pos: int) -> int:
        return pos + 1 if self.reps is None else self.reps[pos]

    # batch tables

    def _element_tables(self):
        if not hasattr(self, "_etabs"):
            ctx = self.ctx
            gens = ctx.U.canonical_generators
            red = []
            raw = []
            for l in range(ctx.n):
                b = ctx.tower.q_basis[l]
                dr = []
                dw = []
                for g in gens:
                    vec = tuple(ctx.tower.mul(b, x) for x in g)
                    row = expand_vector(ctx.tower, vec)
                    dw.append(row)
                    dr.append(ctx.U.reduce_row(row))
                red.append(bitkernel.subset_xor_table(dr))
                raw.append(bitkernel.subset_xor_table(dw))
            self._etabs = (red, raw)
            self._elt_index = dict(zip(raw[0].tolist(), range(self.NU)))
        return self._etabs

    def run_units(self, lo: int, hi: int) -> ChunkResult:
        checked = 0
        viol = None
        best = None
        u = lo
        while u < hi and viol is None:
            d = u // self.R + 1
            pos = u % self.R
            seg_hi = min(hi, (d - 1) * self.R + self.R)
            use_batch = (
                self.engine != "scalar" and self.ctx.batch_ok and self.NU <= SPAN_TABLE_CAP
            )
            if d == 1 and use_batch:
                c, viol, b = self._phase1_batch(pos, seg_hi - (d - 1) * self.R)
                u = seg_hi if viol is None else hi
            else:
                c, viol, b = self._unit(d, pos, use_batch)
                u += 1
            checked += c
            best = _keep_best(best, b)
        return ChunkResult(lo, hi, checked, viol, best)

    def _phase1_batch(self, pos_lo: int, pos_hi: int):
        red, _ = self._element_tables()
        n = self.ctx.n
        i_lo, i_hi = self._first_index(pos_lo), self._first_index(pos_hi - 1) + 1
        rows = [red[l][i_lo:i_hi].copy() for l in range(n)]
        ranks = bitkernel.batch_rank(rows)
        wts = n - ranks.astype(np.int64)
        checked = pos_hi - pos_lo
        best = None
        off = int(np.argmax(wts))
        best = {"key": [1, i_lo + off], "weight": int(wts[off])}
        if self.bound is not None:
            over = wts > self.bound
            if over.any():
                o = int(np.argmax(over))
                w, _ = self._span_weight([i_lo + o])
                assert w == int(wts[o])
                wts = wts[: o + 1]
                return o + 1, {"key": [1, i_lo + o], "weight": w}, _span_best(wts, i_lo, 1)
        return checked, None, best

    def _span_weight(self, indices) -> tuple[int, SubspaceQn]:
        vecs = [self.ctx.U.element(i) for i in indices]
        return self.ctx.weight_of_span(vecs)

    def _unit(self, d: int, pos: int, use_batch: bool):
        i1 = self._first_index(pos)
        if d == 1:
            w, _ = self._span_weight([i1])
            best = {"key": [1, i1], "weight": w}
            if self.bound is not None and w > self.bound:
                return 1, best, best
            return 1, None, best
        if use_batch:
            return self._unit_batch(d, i1)
        return self._unit_scalar(d, i1)

    # scalar tuple walk, any q

    def _unit_scalar(self, d: int, i1: int):
        ctx = self.ctx
        U = ctx.U
        checked = 0
        viol = None
        best = None
        u1 = U.element(i1)
        base_span = SubspaceQn.from_vectors(ctx.tower, ctx.k, [u1])

        def walk(prefix_idx, prefix_span):
            nonlocal checked, viol, best
            depth = len(prefix_idx)
            start = prefix_idx[-1] + 1
            for j in range(start, self.NU):
                if viol is not None:
                    return
                v = U.element(j)
                if prefix_span.contains(v):
                    continue
                if depth + 1 == d:
                    w, _ = self.ctx.weight_of_span([U.element(i) for i in prefix_idx] + [v])
                    checked += 1
                    rec = {"key": [d, *prefix_idx, j], "weight": w}
                    best = _keep_best(best, rec)
                    if self.bound is not None and w > self.bound:
                        viol = rec
                        return
                else:
                    span = SubspaceQn.from_vectors(
                        ctx.tower, ctx.k, list(prefix_span.basis) + [v]
                    )
                    walk(prefix_idx + [j], span)

        walk([i1], base_span)
        return checked, viol, best

    # batched tuple walk, q = 2

    def _unit_batch(self, d: int, i1: int):
        red, raw = self._element_tables()
        ctx = self.ctx
        n = ctx.n
        checked = 0
        viol = None
        best = None

        def last_level(prefix):
            nonlocal checked, viol, best
            start = prefix[-1] + 1
            if start >= self.NU:
                return
            pre_red = []
            pre_raw = []
            for i in prefix:
                pre_red.extend(int(red[l][i]) for l in range(n))
                pre_raw.extend(int(raw[l][i]) for l in range(n))
            prows, pbits = bitkernel.eliminate_rows(pre_red)
            r_pre = len(prows)
            rows = [red[l][start:].copy() for l in range(n)]
            bitkernel.reduce_static(rows, prows, pbits)
            ranks = bitkernel.batch_rank(rows)
            wts = (d * n - r_pre) - ranks.astype(np.int64)
            dep = self._dependent_mask(prefix, pre_raw, start)
            wts = np.where(dep, np.int64(-1), wts)
            n_dep = int(dep.sum())
            if self.bound is not None:
                over = wts > self.bound
                if over.any():
                    o = int(np.argmax(over))
                    w, _ = self._span_weight(prefix + [start + o])
                    assert w == int(wts[o])
                    # count checked tuples up to and including the violation
                    checked += int((~dep[: o + 1]).sum())
                    best = _keep_best(best, _span_best(wts[: o + 1], start, d, prefix))
                    viol = {"key": [d, *prefix, start + o], "weight": w}
                    return
            checked += (self.NU - start) - n_dep
            best = _keep_best(best, _span_best(wts, start, d, prefix))

        def walk(prefix, prefix_raw_rows):
            nonlocal viol
            if viol is not None:
                return
            if len(prefix) == d - 1:
                last_level(prefix)
                return
            prows, pbits = bitkernel.eliminate_rows(prefix_raw_rows)
            for j in range(prefix[-1] + 1, self.NU):
                if viol is not None:
                    return
                jrows = [int(raw[l][j]) for l in range(n)]
                if all(_reduce_scalar(r, prows, pbits) == 0 for r in jrows):
                    continue  # dependent prefix
                walk(prefix + [j], prefix_raw_rows + jrows)

        walk([i1], [int(raw[l][i1]) for l in range(n)])
        return checked, viol, best

    def _dependent_mask(self, prefix, pre_raw, start):
        """Mask of elements u_j (j >= start) inside the extension span of the prefix."""
        n = self.ctx.n
        if len(prefix) == 1:
            # u_j in <u1> iff u_j = c*u1 for some scalar c.  The weight of <u1>
            # tells whether any non-scalar multiple of u1 stays inside U at all;
            # only then is the multiple scan worth running.
            dep = np.zeros(self.NU - start, dtype=bool)
            w1 = n - len(
                bitkernel.eliminate_rows(
                    [self.ctx.U.reduce_row(int(r)) for r in pre_raw]
                )[0]
            )
            if w1 <= 1:
                return dep
            t = self.ctx.tower
            u1 = self.ctx.U.element(prefix[0])
            idx_of = self._elt_index
            for c in range(2, t.order):
                vec = tuple(t.mul(c, x) for x in u1)
                j = idx_of.get(expand_vector(t, vec))
                if j is not None and j >= start:
                    dep[j - start] = True
            return dep
        # general prefix: u_j dependent iff its raw rows add no rank
        prows, pbits = bitkernel.eliminate_rows([int(r) for r in pre_raw])
        _, raw = self._element_tables()
        rows = [raw[l][start:].copy() for l in range(n)]
        bitkernel.reduce_static(rows, prows, pbits)
        added = bitkernel.batch_rank(rows)
        return added == 0


def _span_best(wts, start, d, prefix=None):
    if len(wts) == 0:
        return None
    off = int(np.argmax(wts))
    key = [d, *(prefix or []), start + off] if prefix is not None else [d, start + off]
    return {"key": key, "weight": int(wts[off])}


def _reduce_scalar(row: int, prows, pbits) -> int:
    for pr, pb in zip(prows, pbits):
        if (row >> pb) & 1:
            row ^= pr
    return row


# --- sampled sweep ---


class SampledSweep:
    """Units are sample indices; sample i is derived from (seed, i) alone,
    so chunks can run in any order and resumes are exact."""

    def __init__(self, tower, system, dim: int, bound: int | None, seed: int, engine: str, budget: int):
        self.ctx = _Context(tower, system)
        self.dim = dim
        self.bound = bound
        self.seed = seed
        self.engine = engine
        self.total_units = budget

    def sample(self, i: int) -> SubspaceQn:
        return sample_subspace(
            self.ctx.tower, self.ctx.k, self.dim, derive_seed(self.seed, "sample", i)
        )

    def run_units(self, lo: int, hi: int) -> ChunkResult:
        use_batch = self.engine != "scalar" and self.ctx.batch_ok and self.dim > 0
        if use_batch:
            return self._run_batch(lo, hi)
        checked = 0
        viol = None
        best = None
        for i in range(lo, hi):
            H = self.sample(i)
            w = self.ctx.weight_of_subspace(H)
            checked += 1
            rec = {"key": [i], "weight": w}
            best = _keep_best(best, rec)
            if self.bound is not None and w > self.bound:
                viol = rec
                break
        return ChunkResult(lo, hi, checked, viol, best)

    def _run_batch(self, lo: int, hi: int) -> ChunkResult:
        ctx = self.ctx
        n = ctx.n
        m_np = ctx.m_red_np()
        d = self.dim
        B = hi - lo
        vals = np.empty((B, d, ctx.k), dtype=np.int64)
        for off in range(B):
            H = self.sample(lo + off)
            for j, row in enumerate(H.basis):
                vals[off, j, :] = row
        rows = []
        for j in range(d):
            for l in range(n):
                acc = np.zeros(B, dtype=np.uint64)
                for c in range(ctx.k):
                    acc ^= m_np[l][c][vals[:, j, c]]
                rows.append(acc)
        ranks = bitkernel.batch_rank(rows)
        wts = d * n - ranks.astype(np.int64)
        checked = B
        viol = None
        if self.bound is not None:
            over = wts > self.bound
            if over.any():
                o = int(np.argmax(over))
                H = self.sample(lo + o)
                w = ctx.weight_of_subspace(H)
                assert w == int(wts[o])
                viol = {"key": [lo + o], "weight": w}
                wts = wts[: o + 1]
                checked = o + 1
        best = None
        if len(wts):
            off = int(np.argmax(wts))
            best = {"key": [lo + off], "weight": int(wts[off])}
        return ChunkResult(lo, hi, checked, viol, best)


# --- sweep registry for worker processes ---


def build_sweep(desc: dict):
    tower = FieldTower.from_descriptor(desc["field"])
    system = system_from_desc(tower, desc["system"])
    kind = desc["kind"]
    engine = desc.get("engine", "auto")
    bound = desc.get("bound")
    if kind == "exhaustive":
        return ExhaustiveSweep(tower, system, desc["dim"], bound, engine)
    if kind == "span":
        return SpanSweep(tower, system, desc["dmax"], bound, engine)
    if kind == "sampled":
        return SampledSweep(tower, system, desc["dim"], bound, desc["seed"], engine, desc["budget"])
    raise ValueError(f"unknown sweep kind {kind!r}")


# --- verdicts ---


@dataclass
class Witness:
    H: SubspaceQn
    weight: int
    intersection: list[tuple[int, ...]]
    tuple_index: list[int]

    def serialize(self, tower: FieldTower, mode: str, bound: int) -> dict:
        return {
            "mode": mode,
            "bound": bound,
            "weight": self.weight,
            "H_basis": self.H.serialize(),
            "intersection_basis": [
                [list(tower.coeffs(x)) for x in v] for v in self.intersection
            ],
            "tuple_index": list(self.tuple_index),
        }


@dataclass
class Verdict:
    status: str  # holds | violated | inconclusive
    mode: str
    bound: int
    dim: int
    checked: int
    witness: Witness | None = None
    seed: int | None = None
    span_defect: dict | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def serialize(self, tower: FieldTower) -> dict:
        return {
            "status": self.status,
            "mode": self.mode,
            "bound": self.bound,
            "dim": self.dim,
            "subspaces_checked": self.checked,
            "seed": self.seed,
            "span_defect": self.span_defect,
            "witness": None
            if self.witness is None
            else self.witness.serialize(tower, self.mode, self.bound),
        }


def _build_witness(system: QSystem, sweep, mode: str, key, weight: int) -> Witness:
    tower = system.tower
    U = system.subspace
    if mode == "witness_span":
        d = key[0]
        vecs = [U.element(i) for i in key[1:]]
        H = SubspaceQn.from_vectors(tower, system.ambient, vecs)
    elif mode == "sampled":
        H = sweep.sample(key[0])
    else:
        H = subspace_at(tower, system.ambient, sweep.dim, key[0])
    w = subspace_weight(U, H)
    if w != weight:
        raise AssertionError("witness does not re-verify")
    inter = intersection_rows(tower, U.width, U.fq_rows, subspace_fq_rows(tower, H))
    vectors = [unexpand_row(tower, r, system.ambient) for r in inter]
    return Witness(H, weight, vectors, list(key))


def _run_verification(
    system: QSystem,
    dim: int,
    bound: int,
    mode: str,
    budget,
    seed,
    workers,
    checkpoint,
    engine,
    chunk_size,
    stop_after_units=None,
):
    if mode not in ("exhaustive", "witness_span", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    tower = system.tower
    desc = {
        "field": tower.descriptor(),
        "system": system_to_desc(system),
        "engine": engine,
        "bound": bound,
    }
    if mode == "exhaustive":
        desc["kind"] = "exhaustive"
        desc["dim"] = dim
        total = gaussian_binomial(system.ambient, dim, tower.order)
    elif mode == "witness_span":
        desc["kind"] = "span"
        desc["dmax"] = dim
        total = build_sweep(desc).total_units
    else:
        if budget is None:
            raise ValueError("sampled mode requires a budget")
        desc["kind"] = "sampled"
        desc["dim"] = dim
        desc["seed"] = seed if seed is not None else 0
        desc["budget"] = budget
        total = budget
    chunk = chunk_size or min(DEFAULT_CHUNKS[mode], max(total, 1))
    outcome = run_sweep(
        desc,
        total,
        chunk,
        workers=workers,
        checkpoint=checkpoint,
        budget_units=budget if mode != "sampled" else None,
        stop_after_units=stop_after_units,
    )
    sweep = build_sweep(desc)
    witness = None
    if outcome.viol is not None:
        witness = _build_witness(system, sweep, mode, outcome.viol["key"], outcome.viol["weight"])
    return outcome, witness, desc


def verify_h_scattered(
    system: QSystem,
    h: int,
    mode: str = "witness_span",
    budget: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    checkpoint: str | None = None,
    engine: str = "auto",
    chunk_size: int | None = None,
    _stop_after_units: int | None = None,
) -> Verdict:
    """Decide whether the system is h-scattered.

    holds: every dim-h extension subspace meets U in F_q-dimension <= h and
    U spans the ambient space.  A subspace that fails to span cannot be
    h-scattered; the sweep still runs so the verdict carries a concrete
    weight witness whenever one exists.
    """
    if not 1 <= h < system.ambient:
        raise ValueError("need 1 <= h < ambient dimension")
    outcome, witness, _ = _run_verification(
        system, h, h, mode, budget, seed, workers, checkpoint, engine, chunk_size,
        stop_after_units=_stop_after_units,
    )
    spanning = system.spans_ambient
    seed_out = seed if mode == "sampled" else None
    if witness is not None:
        return Verdict("violated", mode, h, h, outcome.checked, witness, seed_out)
    if not spanning:
        defect = {
            "reason": "does not span the ambient space over the extension field",
            "span_dim": _span_dim(system),
        }
        return Verdict("violated", mode, h, h, outcome.checked, None, seed_out, defect)
    if mode == "sampled" or outcome.truncated_by_budget or not outcome.completed:
        return Verdict("inconclusive", mode, h, h, outcome.checked, None, seed_out)
    return Verdict("holds", mode, h, h, outcome.checked, None, seed_out)


def _span_dim(system: QSystem) -> int:
    return matrix_rank(system.tower, system.subspace.canonical_generators, system.ambient)


def verify_evasive(
    system: QSystem,
    hdim: int,
    r: int,
    mode: str = "witness_span",
    budget: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    checkpoint: str | None = None,
    engine: str = "auto",
    chunk_size: int | None = None,
) -> Verdict:
    """Decide whether the system is (hdim, r)-evasive.

    holds: every hdim-dimensional extension subspace meets U in F_q-dimension
    at most r.  No spanning requirement.
    """
    if not 0 < hdim < system.ambient:
        raise ValueError("need 0 < hdim < ambient dimension")
    if r < hdim:
        raise ValueError("need r >= hdim")
    seed_out = seed if mode == "sampled" else None
    if r >= system.t:
        # vacuous: no subspace can meet U in more than dim U
        return Verdict("holds", mode, r, hdim, 0, None, seed_out)
    outcome, witness, _ = _run_verification(
        system, hdim, r, mode, budget, seed, workers, checkpoint, engine, chunk_size
    )
    if witness is not None:
        return Verdict("violated", mode, r, hdim, outcome.checked, witness, seed_out)
    if mode == "sampled" or outcome.truncated_by_budget or not outcome.completed:
        return Verdict("inconclusive", mode, r, hdim, outcome.checked, None, seed_out)
    return Verdict("holds", mode, r, hdim, outcome.checked, None, seed_out)


def max_weight_search(
    system: QSystem,
    dim: int,
    mode: str = "exhaustive",
    budget: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    checkpoint: str | None = None,
    engine: str = "auto",
    chunk_size: int | None = None,
):
    """Max of wt_U(H) over dim-dimensional subspaces H.

    Returns (max_weight, key, checked, exact).  Exhaustive sweeps are exact;
    sampled sweeps only bound the maximum from below.
    """
    if dim == 0:
        return 0, [0], 1, True
    if mode == "witness_span":
        raise ValueError("max-weight search supports exhaustive or sampled mode")
    outcome, _, _ = _run_verification(
        system, dim, None, mode, budget, seed, workers, checkpoint, engine, chunk_size
    )
    best = outcome.best or {"weight": 0, "key": [0]}
    exact = mode == "exhaustive" and outcome.completed and not outcome.truncated_by_budget
    return best["weight"], best["key"], outcome.checked, exact
