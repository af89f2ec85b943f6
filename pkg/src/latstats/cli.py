"""Command-line driver.

    latstats --config run.ini [--out-dir DIR] [--threads N] [--verbose]

The config file is the flat INI schema documented in latstats.config.
Passing a `*_manifest.json` from a previous run instead of an INI file
re-executes that run and verifies it reproduces the recorded results.

Exit status: 0 all rows succeeded, 1 row failures or reproduction
mismatches, 2 configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .runner import rerun_from_manifest, run


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="latstats", description=__doc__)
    ap.add_argument("--config", required=True, help="run config (INI) or a run manifest (JSON)")
    ap.add_argument("--out-dir", default=".", help="directory for CSV artifacts and the manifest")
    ap.add_argument("--threads", type=int, default=None, help="worker threads for row jobs")
    ap.add_argument("--verbose", action="store_true", help="print per-row status lines")
    args = ap.parse_args(argv)

    path = Path(args.config)
    if not path.exists():
        print(f"config not found: {path}", file=sys.stderr)
        return 2

    if path.suffix == ".json":
        try:
            manifest, code = rerun_from_manifest(
                path, args.out_dir, threads=args.threads, verbose=args.verbose
            )
        except (ConfigError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        if code != 0:
            _print_failures(manifest)
        return code

    try:
        cfg = parse_config(path.read_text(encoding="utf-8"))
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    for note in cfg.warnings:
        print(note, file=sys.stderr)
    manifest, code = run(cfg, args.out_dir, threads=args.threads, verbose=args.verbose)
    if code != 0:
        _print_failures(manifest)
    return code


def _print_failures(manifest: dict) -> None:
    bad = [r for r in manifest.get("rows", []) if r["status"] != "ok"]
    print(f"{len(bad)} row(s) failed:", file=sys.stderr)
    for r in bad:
        print(f"  {r['id']}: {r['status']}", file=sys.stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
