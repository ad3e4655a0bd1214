"""Command-line entry point: run the pipelines from a JSON config.

Subcommands: moments, verblunsky, scattering, baxter-check, product-check,
extend.  Outputs are machine-readable JSON (byte identical across runs for
identical configs) plus plot-ready CSV tables; every file embeds the config
hash and the truncation parameters that produced it.

Exit codes: 0 all pass, 2 any fail verdict, 3 any inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import BeurlingWeight
from .baxter import baxter_check, extend_baxter, product_check
from .engine import (WeightSpec, auto_quadrature, compute_moments, levinson)
from .errors import ConfigError, OpucError
from .scattering import error_profile, predict_alphas, scattering_data

MAX_TRUNCATION = 4096
SUBCOMMANDS = ("moments", "verblunsky", "scattering", "baxter-check",
               "product-check", "extend")


@dataclass
class RunConfig:
    """Parsed and validated run configuration."""

    weights: dict[str, WeightSpec]          # insertion ordered
    nu: BeurlingWeight
    n_max: int
    quadrature: int | str                   # power of two or "auto"
    window: tuple[int, int] | None
    out_dir: str
    pairs: list[tuple[str, str]] = field(default_factory=list)
    tol: float = 1e-6
    sha256: str = ""


def _canonical_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"),
                      allow_nan=False).encode()
    return hashlib.sha256(blob).hexdigest()


def _parse_window(value) -> tuple[int, int]:
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) != 2:
            raise ConfigError(f"window must be 'lo:hi', got {value!r}")
        value = parts
    try:
        lo, hi = int(value[0]), int(value[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad window {value!r}") from exc
    if lo < 0 or hi < lo:
        raise ConfigError(f"bad window [{lo}, {hi}]")
    return lo, hi


def load_config(path: str | Path) -> RunConfig:
    """Load and validate the JSON run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    entries = raw.get("weights")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("config field 'weights' must be a nonempty list")
    weights: dict[str, WeightSpec] = {}
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "id" not in entry:
            raise ConfigError(f"weights[{i}] must be an object with an 'id'")
        wid = str(entry["id"])
        if wid in weights:
            raise ConfigError(f"weight id {wid!r} defined more than once")
        try:
            weights[wid] = WeightSpec.from_dict(entry)
        except (OpucError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"weights[{i}] ({wid!r}): {exc}") from exc

    nu_raw = raw.get("nu", {"family": "exponential", "R": 1.0})
    try:
        nu = BeurlingWeight.from_dict(nu_raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"field 'nu': {exc}") from exc

    n_max = int(raw.get("N", 32))
    if not 1 <= n_max <= MAX_TRUNCATION:
        raise ConfigError(f"N must lie in [1, {MAX_TRUNCATION}], got {n_max}")

    quadrature = raw.get("quadrature", "auto")
    if quadrature != "auto":
        quadrature = int(quadrature)
        if quadrature & (quadrature - 1):
            raise ConfigError(f"quadrature must be a power of two, got {quadrature}")

    window = _parse_window(raw["window"]) if "window" in raw else None

    pairs: list[tuple[str, str]] = []
    for pair in raw.get("pairs", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ConfigError(f"each pair must be [id, id], got {pair!r}")
        a, b = str(pair[0]), str(pair[1])
        for wid in (a, b):
            if wid not in weights:
                raise ConfigError(f"pair references undefined weight id {wid!r}")
        pairs.append((a, b))

    return RunConfig(weights=weights, nu=nu, n_max=n_max, quadrature=quadrature,
                     window=window, out_dir=str(raw.get("out_dir", "opuc-out")),
                     pairs=pairs, tol=float(raw.get("tol", 1e-6)),
                     sha256=_canonical_hash(raw))


# -- output plumbing -----------------------------------------------------------


def _sanitize(obj):
    """Replace non-finite floats by strings so JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [_sanitize(float(np.real(obj))), _sanitize(float(np.imag(obj)))]
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    return obj


def write_json(path: Path, payload: dict) -> None:
    """Atomic write (temp file + rename) of deterministic JSON."""
    text = json.dumps(_sanitize(payload), indent=2, sort_keys=True,
                      allow_nan=False)
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    tmp.write_text(text + "\n", encoding="utf-8")
    os.replace(tmp, path)


def write_csv(path: Path, header: list[str], rows) -> None:
    """Atomic CSV write; floats use repr (shortest round trip, '.' decimal)."""
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating))
                             else v for v in row])
    os.replace(tmp, path)


def _meta(cfg: RunConfig, quadrature: int | str | None = None) -> dict:
    return {
        "config_sha256": cfg.sha256,
        "N": cfg.n_max,
        "M": quadrature if quadrature is not None else cfg.quadrature,
        "window": list(cfg.window) if cfg.window else None,
        "nu": cfg.nu.to_dict(),
    }


def exit_code_from_verdicts(verdicts) -> int:
    """0 all pass, 2 any fail, 3 any inconclusive (fail dominates)."""
    flat = [v for v in verdicts if v not in ("not_applicable",)]
    if any(v == "fail" for v in flat):
        return 2
    if any(v == "inconclusive" for v in flat):
        return 3
    return 0


def _thread_count(n_cases: int) -> int:
    env = os.environ.get("OPUC_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_cases))


def _run_cases(handler, cases) -> list:
    """Run per-weight cases, in parallel when allowed, preserving order."""
    workers = _thread_count(len(cases))
    if workers == 1:
        return [handler(c) for c in cases]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(handler, cases))


# -- subcommand handlers ---------------------------------------------------------


def _moments_for(cfg: RunConfig, spec: WeightSpec):
    if cfg.quadrature == "auto":
        return auto_quadrature(spec, cfg.n_max)
    return compute_moments(spec, cfg.n_max, cfg.quadrature)


def _cmd_moments(cfg: RunConfig, out: Path) -> tuple[list[str], list[str]]:
    def handle(item):
        wid, spec = item
        table = _moments_for(cfg, spec)
        payload = table.to_dict()
        payload["weight_id"] = wid
        payload["meta"].update(_meta(cfg, table.quadrature))
        write_json(out / f"moments_{wid}.json", payload)
        return "pass"

    verdicts = _run_cases(handle, list(cfg.weights.items()))
    return verdicts, [f"moments_{wid}.json" for wid in cfg.weights]


def _cmd_verblunsky(cfg: RunConfig, out: Path) -> tuple[list[str], list[str]]:
    def handle(item):
        wid, spec = item
        table = _moments_for(cfg, spec)
        seq = levinson(table, cfg.n_max)
        payload = seq.to_dict()
        payload["weight_id"] = wid
        payload["meta"].update(_meta(cfg, table.quadrature))
        write_json(out / f"verblunsky_{wid}.json", payload)
        rows = [(n, float(a.real), float(a.imag), float(abs(a)))
                for n, a in enumerate(seq.alpha)]
        write_csv(out / f"verblunsky_{wid}.csv", ["n", "re", "im", "abs"], rows)
        return "pass"

    verdicts = _run_cases(handle, list(cfg.weights.items()))
    return verdicts, [f"verblunsky_{wid}.json" for wid in cfg.weights]


def _cmd_scattering(cfg: RunConfig, out: Path) -> tuple[list[str], list[str]]:
    def handle(item):
        wid, spec = item
        table = _moments_for(cfg, spec)
        seq = levinson(table, cfg.n_max)
        data = scattering_data(spec, cfg.n_max, table.quadrature)
        tilde = predict_alphas(data.S, cfg.n_max)
        payload = data.to_dict()
        payload["weight_id"] = wid
        payload["meta"].update(_meta(cfg, table.quadrature))
        if cfg.window:
            payload["error_profile"] = error_profile(seq, tilde, cfg.window).to_dict()
        write_json(out / f"scattering_{wid}.json", payload)
        err = np.abs(seq.alpha - tilde)
        rows = [(n, float(abs(seq.alpha[n])), float(abs(tilde[n])), float(err[n]))
                for n in range(cfg.n_max)]
        write_csv(out / f"scattering_{wid}.csv",
                  ["n", "abs_alpha", "abs_alpha_tilde", "abs_err"], rows)
        return "pass"

    verdicts = _run_cases(handle, list(cfg.weights.items()))
    return verdicts, [f"scattering_{wid}.json" for wid in cfg.weights]


def _report_csv_rows(seq_alpha, d_minus, err):
    rows = []
    for n in range(len(seq_alpha)):
        d = float(d_minus[n + 1]) if n + 1 < len(d_minus) else 0.0
        rows.append((n, float(abs(seq_alpha[n])), d, float(err[n])))
    return rows


def _cmd_baxter(cfg: RunConfig, out: Path) -> tuple[list[str], list[str]]:
    def handle(item):
        wid, spec = item
        report = baxter_check(spec, cfg.nu, cfg.n_max, cfg.quadrature,
                              cfg.window, weight_id=wid)
        payload = report.to_dict()
        payload["meta"] = _meta(cfg, report.quadrature)
        write_json(out / f"baxter_{wid}.json", payload)
        # plot-ready table: n, |alpha_n|, |d_{-n-1}|, |e_n|
        table = _moments_for(cfg, spec)
        seq = levinson(table, cfg.n_max)
        data = scattering_data(spec, cfg.n_max, table.quadrature)
        tilde = predict_alphas(data.S, cfg.n_max)
        d_mags = np.abs(data.S.padded(-cfg.n_max - 1, 0)[::-1])
        err = np.abs(seq.alpha - tilde)
        write_csv(out / f"baxter_{wid}.csv",
                  ["n", "abs_alpha", "abs_d", "abs_err"],
                  _report_csv_rows(seq.alpha, d_mags, err))
        return report.verdicts

    results = _run_cases(handle, list(cfg.weights.items()))
    verdicts = [v for verdict_map in results for v in verdict_map.values()]
    return verdicts, [f"baxter_{wid}.json" for wid in cfg.weights]


def _cmd_product(cfg: RunConfig, out: Path) -> tuple[list[str], list[str]]:
    pairs = cfg.pairs
    if not pairs:
        raise ConfigError("product-check requires a 'pairs' list in the config")

    def handle(pair):
        a, b = pair
        report = product_check(cfg.weights[a], cfg.weights[b], cfg.nu,
                               cfg.n_max, cfg.quadrature, cfg.window,
                               weight_ids=(a, b))
        payload = report.to_dict()
        payload["meta"] = _meta(cfg, report.quadrature)
        write_json(out / f"product_{a}_{b}.json", payload)
        return report.verdicts["product"]

    verdicts = _run_cases(handle, pairs)
    return verdicts, [f"product_{a}_{b}.json" for a, b in pairs]


def _cmd_extend(cfg: RunConfig, out: Path) -> tuple[list[str], list[str]]:
    def handle(item):
        wid, spec = item
        report = extend_baxter(spec, cfg.nu, cfg.n_max, cfg.quadrature,
                               cfg.window, tol=cfg.tol, weight_id=wid)
        payload = report.to_dict()
        payload["meta"] = _meta(cfg, report.quadrature)
        write_json(out / f"extend_{wid}.json", payload)
        table = _moments_for(cfg, spec)
        seq = levinson(table, cfg.n_max)
        data = scattering_data(spec, cfg.n_max, table.quadrature)
        tilde = predict_alphas(data.S, cfg.n_max)
        d_mags = np.abs(data.S.padded(-cfg.n_max - 1, 0)[::-1])
        err = np.abs(seq.alpha - tilde)
        write_csv(out / f"extend_{wid}.csv",
                  ["n", "abs_alpha", "abs_d", "abs_err"],
                  _report_csv_rows(seq.alpha, d_mags, err))
        return report.verdicts

    results = _run_cases(handle, list(cfg.weights.items()))
    verdicts = [v for verdict_map in results for v in verdict_map.values()]
    return verdicts, [f"extend_{wid}.json" for wid in cfg.weights]


_HANDLERS = {
    "moments": _cmd_moments,
    "verblunsky": _cmd_verblunsky,
    "scattering": _cmd_scattering,
    "baxter-check": _cmd_baxter,
    "product-check": _cmd_product,
    "extend": _cmd_extend,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opuc",
        description="Orthogonal-polynomials-on-the-unit-circle numerical lab")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--n", type=int, default=None, help="truncation override")
        p.add_argument("--quadrature", default=None,
                       help="grid size (power of two) or 'auto'")
        p.add_argument("--window", default=None, help="fit window lo:hi")
    return parser


def run(argv) -> int:
    """Execute a subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args.config)
        if args.n is not None:
            if not 1 <= args.n <= MAX_TRUNCATION:
                raise ConfigError(f"--n must lie in [1, {MAX_TRUNCATION}]")
            cfg.n_max = args.n
        if args.quadrature is not None:
            cfg.quadrature = ("auto" if args.quadrature == "auto"
                              else int(args.quadrature))
            if cfg.quadrature != "auto" and cfg.quadrature & (cfg.quadrature - 1):
                raise ConfigError("--quadrature must be a power of two or 'auto'")
        if args.window is not None:
            cfg.window = _parse_window(args.window)
        out = Path(args.out) if args.out else Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        verdicts, files = _HANDLERS[args.subcommand](cfg, out)
    except ConfigError as exc:
        print(f"opuc: config error: {exc}", file=sys.stderr)
        return 1
    except OpucError as exc:
        print(f"opuc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    code = exit_code_from_verdicts(verdicts)
    write_json(out / f"summary_{args.subcommand}.json", {
        "subcommand": args.subcommand,
        "config_sha256": cfg.sha256,
        "files": files,
        "verdicts": verdicts,
        "exit_code": code,
    })
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
