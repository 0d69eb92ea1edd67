"""Command-line surface: pools, single runs, dissociation scans, comparisons.

Subcommands
-----------
pool     build a generator pool from a problem file, write pool.v1 + an eta CSV
run      execute one method (cd-adapt | adapt | dcqo | fci) and emit a report
fci      shorthand for ``run --method fci``
scan     run methods over a directory of problem files indexed by distance
compare  join run reports into a method-comparison table (CSV + text)

Exit codes: 0 success, 2 usage, 3 data error, 4 numerical failure.
Config precedence: flags > --config JSON > built-in defaults.  A report
written by ``run`` can be fed back via --config: its echoed config block is
enough to reproduce the run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time
from dataclasses import asdict
from typing import Any, Sequence

import numpy as np

from .digitize import (
    ResourceEstimate,
    estimate_resources,
    execute_plan,
    plan_dcqo,
)
from .engine import AdaptConfig, run_adapt
from .molham import (
    MolecularProblem,
    ProblemFormatError,
    build_initial_hamiltonian,
    load_problem,
)
from .pools import (
    DEFAULT_POOL_THRESHOLD,
    EmptyPoolError,
    OperatorPool,
    Schedule,
    build_fermionic_pool,
    build_nested_basis,
    dump_pool,
    extract_pool_static,
    extract_pool_time,
    load_pool,
)
from .statevector import exact_ground, expectation, prepare_basis

REPORT_SCHEMA = "run_report.v1"

# stable CSV schemas; tests pin these headers
ETA_CSV_HEADER = ["pool_kind", "l", "t_prime", "pool_threshold", "n_qubits", "eta"]
SCAN_CSV_HEADER = [
    "distance",
    "method",
    "l",
    "t_prime",
    "energy",
    "error",
    "n_params",
    "n_cnots",
    "status",
]
COMPARE_CSV_HEADER = [
    "method",
    "l",
    "t_prime",
    "molecule",
    "distance",
    "energy",
    "error",
    "n_params",
    "n_cnots",
]

METHOD_TAGS = {
    "cd-adapt": "cd_adapt",
    "adapt": "adapt_fermionic",
    "dcqo": "dcqo",
    "fci": "fci",
}

DEFAULTS: dict[str, Any] = {
    "pool_kind": "cd",
    "l": 1,
    "t_prime": None,
    "pool_threshold": DEFAULT_POOL_THRESHOLD,
    "epsilon": 1e-2,
    "max_iter": 200,
    "method": "cd-adapt",
    "trotter": 2,
    "T": 1.0,
    "seed": 0,
    "threads": 1,
    "sweep_l": False,
    "pool": None,
    "fci_qubit_limit": 24,
}


class UsageError(Exception):
    """Bad flag combination caught after argparse."""


class NumericalError(Exception):
    """Run produced a non-finite or unusable result."""


# -- config resolution ------------------------------------------------------


def _load_config_file(path: str) -> dict[str, Any]:
    with open(path) as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict):
        raise ProblemFormatError(f"{path}: config must be a JSON object")
    if payload.get("schema") == REPORT_SCHEMA:
        # a previous run's report doubles as a config file
        payload = payload.get("config", {})
    unknown = set(payload) - set(DEFAULTS) - {"method", "problem", "out"}
    if unknown:
        raise UsageError(f"{path}: unknown config keys {sorted(unknown)}")
    return payload


def resolve_config(args: argparse.Namespace, keys: Sequence[str]) -> dict[str, Any]:
    """flags > config file > defaults, for the listed keys."""
    fromfile: dict[str, Any] = {}
    if getattr(args, "config", None):
        fromfile = _load_config_file(args.config)
    cfg: dict[str, Any] = {}
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            cfg[key] = flag
        elif key in fromfile:
            cfg[key] = fromfile[key]
        else:
            cfg[key] = DEFAULTS[key]
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: dict[str, Any]) -> None:
    if "l" in cfg and int(cfg["l"]) < 1:
        raise UsageError(f"--l must be >= 1, got {cfg['l']}")
    tp = cfg.get("t_prime")
    if tp is not None and not 0.0 <= float(tp) <= 1.0:
        raise UsageError(f"--t-prime must lie in [0, 1], got {tp}")
    if "epsilon" in cfg and float(cfg["epsilon"]) <= 0:
        raise UsageError("--epsilon must be positive")
    if "max_iter" in cfg and int(cfg["max_iter"]) < 1:
        raise UsageError("--max-iter must be >= 1")
    if "trotter" in cfg and int(cfg["trotter"]) < 1:
        raise UsageError("--trotter must be >= 1")
    if "T" in cfg and float(cfg["T"]) <= 0:
        raise UsageError("--T must be positive")
    if "threads" in cfg and int(cfg["threads"]) < 1:
        raise UsageError("--threads must be >= 1")


# -- atomic output ----------------------------------------------------------


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, payload: dict[str, Any]) -> None:
    _atomic_write(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write(path, buf.getvalue())


# -- pool construction ------------------------------------------------------


def build_pool_for(problem: MolecularProblem, cfg: dict[str, Any]) -> OperatorPool:
    if cfg.get("pool"):
        pool = load_pool(cfg["pool"])
        if pool.n_qubits != problem.n_qubits:
            raise ProblemFormatError(
                f"pool on {pool.n_qubits} qubits, problem on {problem.n_qubits}"
            )
        return pool
    if cfg["pool_kind"] == "fermionic":
        return build_fermionic_pool(
            problem.n_qubits,
            problem.n_electrons,
            ordering=problem.metadata.get("ordering", "alpha_beta"),
        )
    basis = build_nested_basis(
        build_initial_hamiltonian(problem.hf_bits), problem.h_f, int(cfg["l"])
    )
    if cfg["t_prime"] is None:
        return extract_pool_static(basis, pool_threshold=float(cfg["pool_threshold"]))
    return extract_pool_time(
        basis,
        float(cfg["t_prime"]),
        schedule=Schedule(float(cfg["T"])),
        pool_threshold=float(cfg["pool_threshold"]),
    )


# -- method execution -------------------------------------------------------


def _fci_energy(problem: MolecularProblem) -> float:
    e, _ = exact_ground(problem.h_f)
    return e + problem.e_offset


def execute_method(
    problem: MolecularProblem,
    method: str,
    cfg: dict[str, Any],
    e_fci: float | None = None,
) -> dict[str, Any]:
    """Run one method on one problem; returns a report dict.

    ``e_fci`` short-circuits the reference energy (scan reuses it across
    methods at a fixed geometry).
    """
    if method not in METHOD_TAGS:
        raise UsageError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    resources: ResourceEstimate | None = None
    iterations: list[dict[str, Any]] = []
    status = "ok"
    n_params = 0

    if method == "fci":
        energy = _fci_energy(problem) if e_fci is None else e_fci
        e_fci = energy
    elif method in ("cd-adapt", "adapt"):
        run_cfg = dict(cfg)
        if method == "adapt" and not cfg.get("_pool_kind_explicit"):
            run_cfg["pool_kind"] = "fermionic"
        pool = build_pool_for(problem, run_cfg)
        adapt = run_adapt(
            problem,
            pool,
            AdaptConfig(
                epsilon=float(cfg["epsilon"]),
                max_iterations=int(cfg["max_iter"]),
            ),
        )
        energy = adapt.total_energy
        status = adapt.status
        n_params = adapt.n_params
        resources = estimate_resources(adapt)
        iterations = [asdict(rec) for rec in adapt.iterations]
    else:  # dcqo
        basis = build_nested_basis(
            build_initial_hamiltonian(problem.hf_bits), problem.h_f, int(cfg["l"])
        )
        plan = plan_dcqo(
            basis, int(cfg["trotter"]), schedule=Schedule(float(cfg["T"]))
        )
        psi = execute_plan(plan, prepare_basis(problem.hf_bits))
        energy = float(expectation(psi, problem.h_f).real) + problem.e_offset
        resources = estimate_resources(plan)

    if not math.isfinite(energy):
        raise NumericalError(f"{method}: non-finite energy {energy!r}")
    if e_fci is None and problem.n_qubits <= int(cfg.get("fci_qubit_limit", 24)):
        e_fci = _fci_energy(problem)

    report: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "method": METHOD_TAGS[method],
        "problem": {
            "n_qubits": problem.n_qubits,
            "n_electrons": problem.n_electrons,
            "e_offset": problem.e_offset,
            "hf_bits": problem.hf_bits,
            "metadata": problem.metadata,
        },
        "config": _echo_config(cfg, method),
        "energy": energy,
        "status": status,
        "n_iterations": len(iterations),
        "iterations": iterations,
        "n_params": n_params,
        "resources": asdict(resources) if resources is not None else None,
        "wall_time_s": time.perf_counter() - t0,
    }
    if e_fci is not None:
        report["e_fci"] = e_fci
        report["error"] = energy - e_fci
    return report


def _echo_config(cfg: dict[str, Any], method: str) -> dict[str, Any]:
    echo = {k: cfg[k] for k in DEFAULTS if k in cfg and not k.startswith("_")}
    echo["method"] = method
    return echo


# -- pool -------------------------------------------------------------------


def _pool_out_paths(out: str | None, problem_path: str, kind: str, l: int) -> tuple[str, str]:
    stem = re.sub(r"\.(pauli|integrals)$", "", os.path.splitext(os.path.basename(problem_path))[0])
    if out and out.endswith(".json"):
        os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
        return out, re.sub(r"\.json$", "_eta.csv", out)
    outdir = out or "."
    os.makedirs(outdir, exist_ok=True)
    base = os.path.join(outdir, f"{stem}_{kind}_l{l}")
    return f"{base}_pool.json", f"{base}_eta.csv"


def cmd_pool(args: argparse.Namespace) -> int:
    cfg = resolve_config(
        args, ["pool_kind", "l", "t_prime", "pool_threshold", "T", "sweep_l", "seed", "threads"]
    )
    problem = load_problem(args.problem)
    kind = cfg["pool_kind"]
    l_top = int(cfg["l"])
    rows: list[list[Any]] = []
    tp = cfg["t_prime"]
    tp_cell = "" if tp is None else f"{float(tp):g}"
    if kind == "fermionic":
        pool = build_fermionic_pool(
            problem.n_qubits,
            problem.n_electrons,
            ordering=problem.metadata.get("ordering", "alpha_beta"),
        )
        rows.append(["fermionic", "", "", "", problem.n_qubits, len(pool.generators)])
    else:
        basis = build_nested_basis(
            build_initial_hamiltonian(problem.hf_bits), problem.h_f, l_top
        )
        orders = range(1, l_top + 1) if cfg["sweep_l"] else [l_top]
        for l in orders:
            if tp is None:
                pool = extract_pool_static(
                    basis, order=l, pool_threshold=float(cfg["pool_threshold"])
                )
            else:
                pool = extract_pool_time(
                    basis,
                    float(tp),
                    order=l,
                    schedule=Schedule(float(cfg["T"])),
                    pool_threshold=float(cfg["pool_threshold"]),
                )
            rows.append(
                ["cd", l, tp_cell, f"{float(cfg['pool_threshold']):g}",
                 problem.n_qubits, len(pool.generators)]
            )
    pool.require_nonempty()
    pool_path, csv_path = _pool_out_paths(args.out, args.problem, kind, l_top)
    dump_pool(pool, pool_path)
    _write_csv(csv_path, ETA_CSV_HEADER, rows)
    for row in rows:
        label = f"l={row[1]}" if row[1] != "" else "singles+doubles"
        print(f"eta={row[5]} kind={row[0]} {label}" + (f" t'={tp_cell}" if tp_cell else ""))
    print(f"pool: {pool_path}")
    print(f"eta csv: {csv_path}")
    return 0


# -- run / fci --------------------------------------------------------------

RUN_KEYS = [
    "pool", "pool_kind", "l", "t_prime", "pool_threshold", "epsilon",
    "max_iter", "trotter", "T", "seed", "threads",
]


def _print_report(report: dict[str, Any]) -> None:
    res = report["resources"] or {}
    line = (
        f"method={report['method']} energy={report['energy']:.10f}"
        f" status={report['status']}"
    )
    if "error" in report:
        line += f" error={report['error']:.6e}"
    if report["method"] != "fci":
        line += (
            f" iterations={report['n_iterations']} params={report['n_params']}"
            f" cnots={res.get('n_cnots', 0)}"
        )
    print(line)


def _run_single(args: argparse.Namespace, method: str) -> int:
    cfg = resolve_config(args, RUN_KEYS)
    if getattr(args, "pool_kind", None) is not None:
        cfg["_pool_kind_explicit"] = True
    problem = load_problem(args.problem)
    report = execute_method(problem, method, cfg)
    report["problem"]["path"] = args.problem
    _print_report(report)
    if args.out:
        _write_json(args.out, report)
        print(f"report: {args.out}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    method = args.method
    if method is None and getattr(args, "config", None):
        method = _load_config_file(args.config).get("method")
    return _run_single(args, method or DEFAULTS["method"])


def cmd_fci(args: argparse.Namespace) -> int:
    return _run_single(args, "fci")


# -- scan -------------------------------------------------------------------


def _discover_problems(dirpath: str) -> tuple[list[tuple[float, str]], list[str]]:
    """(distance, path) pairs sorted by distance, plus warnings for rejects.

    When a geometry ships both integrals.v1 and pauli.v1 the pauli file wins
    (the two encode the same operator; loading the mapped one is cheaper).
    """
    if not os.path.isdir(dirpath):
        raise NotADirectoryError(f"{dirpath} is not a directory")
    warnings: list[str] = []
    by_stem: dict[str, dict[str, str]] = {}
    for name in sorted(os.listdir(dirpath)):
        if not name.endswith(".json"):
            continue
        path = os.path.join(dirpath, name)
        try:
            with open(path) as fh:
                schema = json.load(fh).get("schema")
        except (OSError, json.JSONDecodeError) as exc:
            warnings.append(f"skipped {path}: {exc}")
            continue
        if schema not in ("integrals.v1", "pauli.v1"):
            warnings.append(f"skipped {path}: schema {schema!r}")
            continue
        stem = re.sub(r"\.(pauli|integrals)$", "", os.path.splitext(name)[0])
        by_stem.setdefault(stem, {})[schema] = path
    found: list[tuple[float, str]] = []
    for stem, paths in by_stem.items():
        path = paths.get("pauli.v1") or paths["integrals.v1"]
        dist = _distance_of(path, stem)
        if dist is None:
            warnings.append(f"skipped {path}: no distance in metadata or name")
            continue
        found.append((dist, path))
    found.sort()
    return found, warnings


def _distance_of(path: str, stem: str) -> float | None:
    try:
        with open(path) as fh:
            meta = json.load(fh).get("metadata", {})
        if "distance_angstrom" in meta:
            return float(meta["distance_angstrom"])
    except (OSError, json.JSONDecodeError, ValueError):
        pass
    nums = re.findall(r"\d+\.\d+", stem)
    return float(nums[-1]) if nums else None


def _method_specs(cfg: dict[str, Any], methods: list[str]) -> list[dict[str, Any]]:
    """Expand the method list into (method, l, t') work items."""
    specs: list[dict[str, Any]] = []
    for m in methods:
        if m not in METHOD_TAGS:
            raise UsageError(f"unknown method {m!r}")
        if m in ("cd-adapt", "dcqo") and cfg["sweep_l"]:
            for l in range(1, int(cfg["l"]) + 1):
                specs.append({"method": m, "l": l})
        else:
            specs.append({"method": m, "l": int(cfg["l"])})
    return specs


def _scan_one(path: str, specs: list[dict[str, Any]], cfg: dict[str, Any]):
    """All rows for one geometry file.  Top-level so process pools can use it."""
    problem = load_problem(path)
    dist = _distance_of(path, os.path.basename(path))
    e_fci = (
        _fci_energy(problem)
        if problem.n_qubits <= int(cfg.get("fci_qubit_limit", 24))
        else None
    )
    rows: list[list[Any]] = []
    warnings: list[str] = []
    for spec in specs:
        method = spec["method"]
        sub = dict(cfg)
        sub["l"] = spec["l"]
        try:
            rep = execute_method(problem, method, sub, e_fci=e_fci)
        except (NumericalError, EmptyPoolError, RuntimeError) as exc:
            warnings.append(f"{path}: {method}: {exc}")
            continue
        res = rep["resources"] or {}
        show_l = method in ("cd-adapt", "dcqo")
        tp = sub.get("t_prime")
        rows.append(
            [
                f"{dist:g}",
                rep["method"],
                spec["l"] if show_l else "",
                "" if (tp is None or method not in ("cd-adapt",)) else f"{float(tp):g}",
                f"{rep['energy']:.12f}",
                f"{rep['error']:.6e}" if "error" in rep else "",
                rep["n_params"] if method != "fci" else "",
                res.get("n_cnots", "") if method != "fci" else "",
                rep["status"],
            ]
        )
    return rows, warnings


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = resolve_config(
        args,
        ["pool_kind", "l", "t_prime", "pool_threshold", "epsilon", "max_iter",
         "trotter", "T", "seed", "threads", "sweep_l"],
    )
    if getattr(args, "pool_kind", None) is not None:
        cfg["_pool_kind_explicit"] = True
    methods = [m.strip() for m in (args.method or "fci").split(",") if m.strip()]
    specs = _method_specs(cfg, methods)
    files, warnings = _discover_problems(args.problem)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not files:
        print(f"warning: no problem files under {args.problem}", file=sys.stderr)
        _write_csv(args.out, SCAN_CSV_HEADER, [])
        print(f"scan csv: {args.out} (0 rows)")
        return 0
    all_rows: list[list[Any]] = []
    threads = int(cfg["threads"])
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as ex:
            outputs = list(ex.map(_scan_one, [p for _, p in files],
                                  [specs] * len(files), [cfg] * len(files)))
    else:
        outputs = [_scan_one(path, specs, cfg) for _, path in files]
    for rows, warns in outputs:
        all_rows.extend(rows)
        for w in warns:
            print(f"warning: {w}", file=sys.stderr)
    all_rows.sort(key=lambda r: (float(r[0]), r[1], str(r[2]), str(r[3])))
    _write_csv(args.out, SCAN_CSV_HEADER, all_rows)
    print(f"scan csv: {args.out} ({len(all_rows)} rows)")
    return 0


# -- compare ----------------------------------------------------------------


def _molecule_of(report: dict[str, Any], path: str) -> str:
    meta = report.get("problem", {}).get("metadata", {})
    if "molecule" in meta:
        return str(meta["molecule"])
    src = report.get("problem", {}).get("path") or path
    return os.path.basename(src).split("_")[0]


def cmd_compare(args: argparse.Namespace) -> int:
    entries: dict[str, tuple[int, dict[str, Any], str]] = {}
    molecules: set[str] = set()
    for idx, path in enumerate(args.reports):
        with open(path) as fh:
            report = json.load(fh)
        if report.get("schema") != REPORT_SCHEMA:
            raise ProblemFormatError(
                f"{path}: schema {report.get('schema')!r}, expected {REPORT_SCHEMA!r}"
            )
        molecules.add(_molecule_of(report, path))
        conf = report.get("config", {})
        method = report["method"]
        # identity = the config columns shown in the table, so distinct
        # variants coexist and true duplicates keep the latest
        tag = (
            method,
            conf.get("l") if method in ("cd_adapt", "dcqo") else None,
            conf.get("t_prime") if method == "cd_adapt" else None,
        )
        if tag in entries:
            print(
                f"warning: duplicate method {method}: keeping {path}",
                file=sys.stderr,
            )
        entries[tag] = (idx, report, path)
    if len(molecules) > 1:
        raise ProblemFormatError(
            f"reports mix molecules {sorted(molecules)}; compare one system at a time"
        )
    rows: list[list[Any]] = []
    for _, report, path in sorted(entries.values()):
        res = report.get("resources") or {}
        meta = report.get("problem", {}).get("metadata", {})
        conf = report.get("config", {})
        err = report.get("error")
        dist = meta.get("distance_angstrom", "")
        tp = conf.get("t_prime") if report["method"] == "cd_adapt" else None
        rows.append(
            [
                report["method"],
                conf.get("l", "") if report["method"] in ("cd_adapt", "dcqo") else "",
                "" if tp is None else f"{float(tp):g}",
                _molecule_of(report, path),
                f"{float(dist):g}" if dist != "" else "",
                f"{report['energy']:.12f}",
                f"{err:.6e}" if err is not None else "",
                report.get("n_params", ""),
                res.get("n_cnots", ""),
            ]
        )
    # worst error first, like the comparison tables; fci (error 0) last
    rows.sort(key=lambda r: (-abs(float(r[6])) if r[6] != "" else 0.0, r[0]))
    widths = [max(len(h), max((len(str(r[i])) for r in rows), default=0))
              for i, h in enumerate(COMPARE_CSV_HEADER)]
    print("  ".join(h.ljust(w) for h, w in zip(COMPARE_CSV_HEADER, widths)))
    for r in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
    if args.out:
        _write_csv(args.out, COMPARE_CSV_HEADER, rows)
        print(f"compare csv: {args.out}")
    return 0


# -- parser -----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, *names: str) -> None:
    spec: dict[str, tuple[tuple[str, ...], dict[str, Any]]] = {
        "problem": (("--problem",), {"metavar": "PATH", "required": True}),
        "pool": (("--pool",), {"metavar": "PATH"}),
        "pool_kind": (("--pool-kind",), {"choices": ["cd", "fermionic"]}),
        "l": (("--l",), {"type": int}),
        "t_prime": (("--t-prime",), {"type": float}),
        "pool_threshold": (("--pool-threshold",), {"type": float}),
        "epsilon": (("--epsilon",), {"type": float}),
        "max_iter": (("--max-iter",), {"type": int}),
        "method": (("--method",), {}),
        "trotter": (("--trotter",), {"type": int}),
        "T": (("--T",), {"type": float}),
        "out": (("--out",), {"metavar": "PATH"}),
        "seed": (("--seed",), {"type": int}),
        "threads": (("--threads",), {"type": int}),
        "sweep_l": (("--sweep-l",), {"action": "store_true", "default": None}),
        "config": (("--config",), {"metavar": "PATH"}),
    }
    for name in names:
        flags, kwargs = spec[name]
        p.add_argument(*flags, dest=name, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdadapt",
        description=__doc__.splitlines()[0],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pool", help="build a pool and an eta CSV")
    _add_common(p, "problem", "pool_kind", "l", "t_prime", "pool_threshold",
                "T", "sweep_l", "out", "seed", "threads", "config")
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("run", help="run one method on one problem")
    _add_common(p, "problem", "method", "pool", "pool_kind", "l", "t_prime",
                "pool_threshold", "epsilon", "max_iter", "trotter", "T",
                "out", "seed", "threads", "config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fci", help="exact reference energy")
    _add_common(p, "problem", "out", "seed", "threads", "config")
    p.set_defaults(func=cmd_fci)

    p = sub.add_parser("scan", help="run methods over a directory of problems")
    _add_common(p, "problem", "method", "pool_kind", "l", "t_prime",
                "pool_threshold", "epsilon", "max_iter", "trotter", "T",
                "sweep_l", "seed", "threads", "config")
    p.add_argument("--out", metavar="PATH", required=True, help="output CSV")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("compare", help="join run reports into a table")
    p.add_argument("reports", nargs="+", metavar="REPORT")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    method = getattr(args, "method", None)
    if method is not None and args.command == "run" and method not in METHOD_TAGS:
        parser.error(f"unknown method {method!r}")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (
        FileNotFoundError,
        NotADirectoryError,
        IsADirectoryError,
        json.JSONDecodeError,
        ProblemFormatError,
        EmptyPoolError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
