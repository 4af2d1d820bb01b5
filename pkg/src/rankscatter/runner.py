"""Deterministic chunked execution of sweeps, with checkpoint and resume.

A sweep is described by a JSON-safe dict and owns a unit index space
[0, total_units).  Units are processed in fixed-size chunks; each chunk
reports how many tuples/subspaces it actually checked, the first violation
inside it (if any) and its max-weight record.  Merging is done in unit
order, so the outcome is independent of worker count and of how a run was
interrupted and resumed.

Checkpoint files are append-only, newline-delimited JSON: a header line
binding the sweep descriptor, then one line per completed chunk.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from functools import lru_cache


@dataclass
class ChunkResult:
    lo: int
    hi: int
    checked: int
    viol: dict | None  # {"key": [...], "weight": int} first violation in chunk
    best: dict | None  # {"key": [...], "weight": int} max weight in chunk

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "checked": self.checked, "viol": self.viol, "best": self.best}

    @classmethod
    def from_json(cls, d: dict) -> "ChunkResult":
        return cls(d["lo"], d["hi"], d["checked"], d.get("viol"), d.get("best"))


@dataclass
class SweepOutcome:
    checked: int
    viol: dict | None
    best: dict | None
    completed: bool           # every unit (or every unit up to the budget cut) ran
    truncated_by_budget: bool
    units_done: int


class Interrupted(Exception):
    """Raised by the test hook to simulate a killed run."""


def desc_hash(desc: dict) -> str:
    return hashlib.sha256(json.dumps(desc, sort_keys=True).encode()).hexdigest()[:16]


@lru_cache(maxsize=8)
def _sweep_from_json(desc_json: str):
    from . import verify

    return verify.build_sweep(json.loads(desc_json))


def _run_chunk(desc_json: str, lo: int, hi: int) -> dict:
    sweep = _sweep_from_json(desc_json)
    return sweep.run_units(lo, hi).to_json()


def _merge_best(a: dict | None, b: dict | None) -> dict | None:
    # max weight; ties broken toward the earlier key so merging is stable
    if a is None:
        return b
    if b is None:
        return a
    return b if b["weight"] > a["weight"] else a


class _Checkpoint:
    def __init__(self, path, desc, chunk_size, total_units):
        self.path = path
        self.header = {
            "schema": "rankscatter-checkpoint/1",
            "desc_hash": desc_hash(desc),
            "chunk_size": chunk_size,
            "total_units": total_units,
        }
        self.done: dict[int, ChunkResult] = {}
        if path and os.path.exists(path):
            self._load()

    def _load(self):
        with open(self.path) as f:
            lines = [line for line in f.read().splitlines() if line.strip()]
        if not lines:
            return
        head = json.loads(lines[0])
        for key in ("desc_hash", "chunk_size", "total_units"):
            if head.get(key) != self.header[key]:
                raise ValueError(
                    f"checkpoint {self.path} does not match this job ({key} differs)"
                )
        for line in lines[1:]:
            rec = ChunkResult.from_json(json.loads(line))
            self.done[rec.lo] = rec

    def open(self):
        if not self.path:
            return
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            with open(self.path, "w") as f:
                f.write(json.dumps(self.header, sort_keys=True) + "\n")

    def record(self, rec: ChunkResult):
        self.done[rec.lo] = rec
        if self.path:
            with open(self.path, "a") as f:
                f.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def run_sweep(
    desc: dict,
    total_units: int,
    chunk_size: int,
    workers: int = 1,
    checkpoint: str | None = None,
    budget_units: int | None = None,
    stop_after_units: int | None = None,
) -> SweepOutcome:
    """Run a sweep to completion (or budget), honoring a checkpoint file.

    budget_units caps the number of checked units, rounded up to a chunk
    boundary; the cut is applied in unit order during the merge, so reports
    do not depend on scheduling.  stop_after_units is a test hook that
    abandons the run (checkpoint intact) once that many units completed.
    """
    desc_json = json.dumps(desc, sort_keys=True)
    chunks = [(lo, min(lo + chunk_size, total_units)) for lo in range(0, total_units, chunk_size)]
    ckpt = _Checkpoint(checkpoint, desc, chunk_size, total_units)
    ckpt.open()

    interrupted = False
    try:
        _execute(desc_json, chunks, ckpt, workers, budget_units, stop_after_units)
    except Interrupted:
        interrupted = True

    # Merge in unit order.
    checked = 0
    units_done = 0
    viol = None
    best = None
    complete = True
    for lo, hi in chunks:
        rec = ckpt.done.get(lo)
        if rec is None:
            complete = False
            break
        checked += rec.checked
        units_done = hi
        best = _merge_best(best, rec.best)
        if rec.viol is not None:
            viol = rec.viol
            break
        if budget_units is not None and checked >= budget_units:
            return SweepOutcome(checked, None, best, True, True, units_done)
    if viol is not None:
        return SweepOutcome(checked, viol, best, True, False, units_done)
    if interrupted or not complete:
        return SweepOutcome(checked, None, best, False, False, units_done)
    return SweepOutcome(checked, None, best, True, False, units_done)


def _execute(desc_json, chunks, ckpt, workers, budget_units, stop_after_units):
    pending = [(lo, hi) for lo, hi in chunks if lo not in ckpt.done]

    def should_stop() -> bool:
        # Stop early once a violation is known and every earlier chunk is done,
        # or once the budget is exhausted on a done-prefix.
        checked = 0
        for lo, hi in chunks:
            rec = ckpt.done.get(lo)
            if rec is None:
                return False
            checked += rec.checked
            if rec.viol is not None:
                return True
            if budget_units is not None and checked >= budget_units:
                return True
        return True  # everything done

    def hook_check():
        if stop_after_units is None:
            return
        done_units = sum(r.hi - r.lo for r in ckpt.done.values())
        if done_units >= stop_after_units:
            raise Interrupted

    if should_stop():
        return
    if workers <= 1:
        for lo, hi in pending:
            rec = ChunkResult.from_json(_run_chunk(desc_json, lo, hi))
            ckpt.record(rec)
            hook_check()
            if should_stop():
                return
        return

    with ProcessPoolExecutor(max_workers=workers) as pool:
        inflight = {}
        it = iter(pending)
        stop = False

        def viol_cap():
            caps = [r.lo for r in ckpt.done.values() if r.viol is not None]
            return min(caps) if caps else None

        while True:
            cap = viol_cap()
            while not stop and len(inflight) < workers * 2:
                nxt = next(it, None)
                if nxt is None:
                    break
                if cap is not None and nxt[0] > cap:
                    continue  # later chunks cannot move the first witness
                fut = pool.submit(_run_chunk, desc_json, nxt[0], nxt[1])
                inflight[fut] = nxt
            if not inflight:
                return
            done, _ = wait(list(inflight), return_when=FIRST_COMPLETED)
            for fut in done:
                inflight.pop(fut)
                rec = ChunkResult.from_json(fut.result())
                ckpt.record(rec)
            hook_check()
            if should_stop():
                stop = True
                if not inflight:
                    return
