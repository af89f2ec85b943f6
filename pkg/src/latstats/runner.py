"""Run orchestration: dispatch a RunConfig, emit CSV artifacts and a manifest.

Every run writes its artifacts plus `<prefix>_manifest.json` containing the
config hash, tool version, timings, per-row status, artifact digests, and
the original config text.  Artifacts are byte-stable: identical config and
seeds produce identical bytes.  The one physically nondeterministic column
(wall_ms in experiment-row CSVs) is measured on fresh runs; a rerun driven
from a manifest recomputes all numerics, verifies them against the stored
row digests, and replays the recorded wall_ms, so rerun CSVs are
byte-identical to the originals.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import RunConfig
from .dos import LimitMeasureSpec, dos_grid, limit_comparison_table
from .experiments import (
    boundedness_scan,
    decay_experiment,
    martingale_trace,
    positivity_check,
    weak_coupling_experiment,
)
from .lattice import CubeSpec, realize_field
from .measures import free_measure, random_measure
from .serialize import fmt, write_csv

__all__ = ["run", "rerun_from_manifest"]


def _digest_cells(cells) -> str:
    return hashlib.sha256(",".join(fmt(c) for c in cells).encode()).hexdigest()


def _digest_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _meta(cfg: RunConfig, **over) -> dict:
    base = {
        "d": cfg.get("model.d"),
        "L": None,
        "E": cfg.get("model.E"),
        "K": cfg.get("model.K"),
        "seed": None,
        "profile": None,
        "law": None,
        "method": None,
        "config_hash": cfg.config_hash,
    }
    base.update(over)
    return base


def _experiment_csv(record, path: Path, replay_rows: dict | None, statuses: list) -> None:
    """Write experiment rows, replaying manifest wall_ms after digest checks."""
    header = ["experiment", "d", "L_or_eta", "seed", "E", "K", "X", "bound", "method", "wall_ms"]
    out_rows = []
    for r in record.rows:
        cells = [r.experiment, r.d, r.L_or_eta, r.seed, r.E, r.K, r.x, r.bound, r.method]
        digest = _digest_cells(cells)
        row_id = f"{r.experiment}:{fmt(r.L_or_eta)}:{r.seed}"
        wall = r.wall_ms
        status = "ok"
        if replay_rows is not None:
            stored = replay_rows.get(row_id)
            if stored is None:
                status = "error: row missing from manifest"
            elif stored["digest"] != digest:
                status = "mismatch: recomputed values differ from manifest"
            else:
                wall = stored["wall_ms"]
        statuses.append({"id": row_id, "status": status, "wall_ms": wall, "digest": digest})
        out_rows.append(cells + [wall])
    for idx, msg in record.errors:
        statuses.append({"id": f"{record.experiment}:row{idx}", "status": f"error: {msg}",
                         "wall_ms": 0, "digest": ""})
    write_csv(path, header, out_rows)


def _dispatch(cfg: RunConfig, out: Path, threads: int, replay_rows, statuses, outputs):
    kind = cfg.experiment
    prefix = cfg.prefix
    d = cfg.get("model.d")
    e = cfg.get("model.E")
    k = cfg.get("model.K")
    ls = cfg.ls()

    def artifact(name, writer):
        t0 = time.perf_counter()
        path = out / name
        writer(path)
        ms = int(round(1000.0 * (time.perf_counter() - t0)))
        statuses.append(
            {"id": name, "status": "ok", "wall_ms": ms, "digest": _digest_file(path)}
        )
        outputs.append(name)

    if kind == "free-measure":
        for L in ls:
            m = free_measure(d, L, e, k)
            meta = _meta(cfg, L=L, method="free")
            artifact(f"{prefix}_atoms_L{L}.csv", lambda p, m=m, meta=meta: m.to_csv(p, meta))
    elif kind == "random-measure":
        profile, law = cfg.profile(), cfg.law()
        method = cfg.get("method.kind", "dense")
        for L in ls:
            for seed in cfg.seeds():
                cube = CubeSpec(d, L)
                field = realize_field(cube, profile, law, seed)
                meta = _meta(cfg, L=L, seed=seed, profile=profile.label(),
                             law=law.label(), method=method)
                mm = random_measure(
                    cube, field, e, k, method=method,
                    grid_nodes=cfg.get("method.grid_nodes", 512),
                    inertia=cfg.get("method.inertia", "sturm"),
                )
                name = (f"{prefix}_atoms_L{L}_s{seed}.csv" if method == "dense"
                        else f"{prefix}_counting_L{L}_s{seed}.csv")
                artifact(name, lambda p, mm=mm, meta=meta: mm.to_csv(p, meta))
    elif kind == "compare":
        rec = decay_experiment(
            d, ls, e, cfg.profile(), cfg.law(), cfg.test_function(), cfg.seeds(),
            method=cfg.get("method.kind", "dense"),
            grid_nodes=cfg.get("method.grid_nodes", 512),
            threads=threads,
        )
        path = out / f"{prefix}_rows.csv"
        _experiment_csv(rec, path, replay_rows, statuses)
        outputs.append(path.name)
    elif kind == "weak-coupling":
        rec = weak_coupling_experiment(
            d, list(cfg.get("scale.etas")), cfg.scale(), e, cfg.law(),
            cfg.test_function(), cfg.seeds(),
            method=cfg.get("method.kind", "dense"),
            grid_nodes=cfg.get("method.grid_nodes", 512),
            threads=threads,
        )
        path = out / f"{prefix}_rows.csv"
        _experiment_csv(rec, path, replay_rows, statuses)
        outputs.append(path.name)
    elif kind == "martingale":
        eps = cfg.get("martingale.epsilon")
        l_max = cfg.get("martingale.L_max")
        law = cfg.law()
        rows = []
        for seed in cfg.seeds():
            tr = martingale_trace(d, eps, law, seed, l_max)
            rows.extend(
                (seed, int(L), m, nm)
                for L, m, nm in zip(tr.L.tolist(), tr.m.tolist(), tr.normalized.tolist())
            )
        artifact(
            f"{prefix}_trace.csv",
            lambda p: write_csv(p, ["seed", "L", "M", "normalized"], rows),
        )
    elif kind == "lemma2":
        f = cfg.test_function()
        gammas = cfg.get("lemma2.gammas", (-0.999, -0.9, -0.7, -0.5, -0.3, -0.1))
        i_ls = cfg.get("lemma2.i_Ls", (1000, 2000))
        scan = boundedness_scan(d, e, k, ls, f, gammas=gammas, i_Ls=i_ls, override=True)
        artifact(
            f"{prefix}_integrals.csv",
            lambda p: write_csv(p, ["L", "integral"],
                                zip(scan.Ls, scan.integrals.tolist())),
        )
        irows = [
            (g, L, scan.i_table[i, j])
            for i, g in enumerate(scan.gammas)
            for j, L in enumerate(scan.i_Ls)
        ]
        artifact(
            f"{prefix}_isum.csv",
            lambda p: write_csv(p, ["gamma", "L", "I"], irows),
        )
    elif kind == "positivity":
        delta = cfg.get("positivity.delta")
        L = ls[0]
        res = positivity_check(d, e, k, delta, L)
        artifact(
            f"{prefix}_positivity.csv",
            lambda p: write_csv(
                p,
                ["d", "E", "K", "delta", "L", "integral", "reference", "ratio"],
                [(d, e, k, delta, L, res.integral, res.reference, res.ratio)],
            ),
        )
    elif kind == "dos":
        r = cfg.get("dos.r")
        grid = dos_grid(r, cfg.get("dos.grid_size"))
        artifact(f"{prefix}_dos_r{r}.csv", lambda p: grid.to_csv(p))
    elif kind == "conjecture":
        spec = LimitMeasureSpec(
            d=d, E=e, theta_order=cfg.get("conjecture.theta_order", 128)
        )
        rows = limit_comparison_table(spec, cfg.test_function(), cfg.get("conjecture.Ls", (24, 48, 96)))
        artifact(
            f"{prefix}_comparison.csv",
            lambda p: write_csv(p, ["L_or_limit", "value", "self_convergence"], rows),
        )
    else:  # pragma: no cover - parse_config already validated
        raise ValueError(f"unknown experiment {kind!r}")


def run(
    cfg: RunConfig,
    out_dir,
    threads: int | None = None,
    verbose: bool = False,
    replay: dict | None = None,
):
    """Execute a parsed config; returns (manifest dict, exit code)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    threads = cfg.threads if threads is None else threads
    replay_rows = None
    if replay is not None:
        replay_rows = {r["id"]: r for r in replay.get("rows", []) if r.get("digest")}
    statuses: list = []
    outputs: list = []
    started = datetime.now(timezone.utc).isoformat()
    fatal = None
    try:
        _dispatch(cfg, out, threads, replay_rows, statuses, outputs)
    except Exception as exc:
        fatal = f"{type(exc).__name__}: {exc}"
        statuses.append({"id": "run", "status": f"error: {fatal}", "wall_ms": 0, "digest": ""})
    finished = datetime.now(timezone.utc).isoformat()

    manifest = {
        "config_hash": cfg.config_hash,
        "tool_version": __version__,
        "experiment": cfg.experiment,
        "started_at": started,
        "finished_at": finished,
        "outputs": outputs,
        "rows": statuses,
        "config_text": cfg.canonical_text,
    }
    man_path = out / f"{cfg.prefix}_manifest.json"
    tmp = man_path.with_suffix(".json.tmp")
    tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                   encoding="utf-8", newline="\n")
    os.replace(tmp, man_path)

    ok = all(s["status"] == "ok" for s in statuses)
    if verbose:
        for s in statuses:
            print(f"{s['id']}: {s['status']} ({s['wall_ms']} ms)")
        print(f"manifest: {man_path}")
    return manifest, (0 if ok else 1)


def rerun_from_manifest(manifest_path, out_dir, threads: int | None = None, verbose: bool = False):
    """Re-execute a completed run from its manifest.

    All numerics are recomputed and checked against the stored row digests;
    recorded wall_ms values are replayed so the artifacts come out
    byte-identical.  Any numeric mismatch fails the run.
    """
    from .config import parse_config

    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    cfg = parse_config(manifest["config_text"])
    if cfg.config_hash != manifest["config_hash"]:
        raise ValueError("manifest config hash does not match its embedded config text")
    return run(cfg, out_dir, threads=threads, verbose=verbose, replay=manifest)
