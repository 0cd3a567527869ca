from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import scipy.fft

from ..errors import UsageError
from .commands import DEFAULT_Y, REGISTRY, Context
from .config import ExperimentConfig
from .emit import emit_outputs
from .fit import fit_exponent
from .store import ExperimentRecord, RecordStore


@dataclass
class RunOutcome:
    records: list[ExperimentRecord] = field(default_factory=list)
    skipped: int = 0
    outputs: list[Path] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return any(r.flagged for r in self.records)


def _version() -> str:
    from .. import __version__
    return __version__


def _matches(rec: ExperimentRecord, where: dict) -> bool:
    for k, v in where.items():
        got = rec.params.get(k, rec.results.get(k))
        if got != v and not (isinstance(got, (int, float)) and isinstance(v, (int, float))
                             and abs(got - v) < 1e-12):
            return False
    return True


def _run_fit(cfg: ExperimentConfig, store: RecordStore) -> list[ExperimentRecord]:
    p = cfg.params
    src = p["source"]
    if src not in REGISTRY or REGISTRY[src].run is None:
        raise UsageError(f"params.source: cannot fit records of {src!r}")
    y = p["y"] or DEFAULT_Y.get(src)
    if not y:
        raise UsageError("params.y: no default value column for this source")
    recs = [r for r in store.read(src) if _matches(r, p["where"])]
    pairs = [(r.results["N"], r.results[y]) for r in recs]
    t0 = time.perf_counter()
    fr = fit_exponent(pairs)
    params = dict(p, inputs=sorted(r.hash for r in recs))
    results = dict(source=src, y=y, slope=fr.slope, intercept=fr.intercept, n_min=fr.n_min,
                   n_max=fr.n_max, points=fr.points, residuals=list(fr.residuals))
    flags = [f for r in recs for f in r.flags]
    return [ExperimentRecord("fit", params, results, time.perf_counter() - t0, _version(),
                             cfg.seed, sorted(set(flags)))]


def run_experiment(cfg: ExperimentConfig, force: bool = False, figures: bool = True,
                   store: RecordStore | None = None) -> RunOutcome:
    """Run every ladder point of cfg, append new records, then refresh the outputs."""
    out = Path(cfg.out)
    store = store or RecordStore(out / "records.jsonl")
    outcome = RunOutcome()
    cmd = REGISTRY[cfg.command]
    if cfg.command == "emit":
        sources = [cfg.params["source"]] if cfg.params["source"] else sorted(
            {r.command for r in store.read()})
        for src in sources:
            outcome.outputs += emit_outputs(out, src, store.read(src), figures)
        return outcome
    known = store.hashes()
    ctx = Context(cfg.seed, out, cfg.threads)
    if cfg.command == "fit":
        todo = _run_fit(cfg, store)
        new = [r for r in todo if force or r.hash not in known]
        outcome.skipped = len(todo) - len(new)
    else:
        new = []
        for params in cfg.ladder():
            probe = ExperimentRecord(cfg.command, params, {}, 0.0, "", cfg.seed)
            if probe.hash in known and not force:
                outcome.skipped += 1
                continue
            t0 = time.perf_counter()
            with scipy.fft.set_workers(cfg.threads):
                row = cmd.run(params, ctx)
            flag = row.get("flag") or ""
            new.append(ExperimentRecord(cfg.command, params, row, time.perf_counter() - t0,
                                        _version(), cfg.seed, [flag] if flag else []))
    store.append(new)
    outcome.records = new
    outcome.outputs = emit_outputs(out, cfg.command, store.read(cfg.command), figures)
    return outcome
