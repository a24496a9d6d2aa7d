"""Command-line front end: truncated sums, reference limits, rank sweeps,
and the invariant suites, written as CSV or JSON.

Every table-producing command emits one table, to stdout or --out.  Output
is deterministic: identical resolved configs give byte-identical files, and
worker count never changes a value.  Timing columns are zero unless --timing
is passed, precisely so that the determinism guarantee covers the bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import checks, tails
from .yangmills import (
    SurfaceSpec,
    TruncationPolicy,
    _norm_group,
    partition_function,
    plane_wilson,
    sphere_wilson,
    wilson_expectation,
    wilson_variance,
)

_COMMANDS = (
    "wilson-exp",
    "wilson-var",
    "sphere",
    "plane",
    "zfun",
    "limits",
    "sweep",
    "verify",
)
_OBSERVABLES = ("wilson-exp", "wilson-var", "sphere", "zfun")

_VALUE_COLUMNS = (
    "N",
    "value",
    "tail_bound",
    "term_count",
    "class1",
    "class2",
    "class3",
    "class4",
    "wall_ms",
)

# flags a command cannot run without
_NEEDS = {
    "zfun": ("area", "ranks"),
    "wilson-exp": ("area", "loop_area", "ranks"),
    "wilson-var": ("area", "loop_area", "ranks"),
    "sphere": ("area", "loop_area", "ranks"),
    "plane": ("loop_area",),
    "limits": ("area", "loop_area"),
    "verify": (),
}
_FLAG_OF = {"area": "--area", "loop_area": "--loop-area", "ranks": "--N"}

_CONFIG_KEYS = (
    "group",
    "genus",
    "area",
    "loop_area",
    "N",
    "kmax",
    "nmax",
    "gamma",
    "tail_tol",
    "format",
    "out",
    "workers",
    "timing",
    "observable",
    "suite",
)


class UsageError(Exception):
    """Bad flags, bad config file, or missing required parameters."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    groups: tuple
    genera: tuple
    area: Optional[float]
    loop_area: Optional[float]
    ranks: tuple
    policy: TruncationPolicy
    output_format: str
    output_path: Optional[str]
    workers: int
    timing: bool
    observable: Optional[str]
    suites: tuple


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so parse_args stays a plain function
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    p = _Parser(prog="ym2d", description=__doc__, add_help=True)
    p.add_argument("command", choices=_COMMANDS)
    p.add_argument("--group", default=None,
                   help="gauge group, u or su; comma list sweeps both")
    p.add_argument("--genus", default=None,
                   help="surface genus >= 1; comma list sweeps several")
    p.add_argument("--area", type=float, default=None,
                   help="total surface area T")
    p.add_argument("--loop-area", dest="loop_area", type=float, default=None,
                   help="area t enclosed by the loop")
    p.add_argument("--N", dest="ranks", action="append", default=None,
                   metavar="N[,N...]", help="rank(s); repeatable or comma list")
    p.add_argument("--kmax", type=int, default=None,
                   help="partition size cutoff")
    p.add_argument("--nmax", type=int, default=None,
                   help="plateau cutoff for the unitary sums")
    p.add_argument("--gamma", type=float, default=None,
                   help="class threshold exponent, in (0, 1/3)")
    p.add_argument("--tail-tol", dest="tail_tol", type=float, default=None,
                   help="advisory tail tolerance recorded in the policy")
    p.add_argument("--format", dest="output_format", default=None,
                   choices=("csv", "json"))
    p.add_argument("--out", dest="output_path", default=None,
                   help="output file (default stdout)")
    p.add_argument("--config", default=None,
                   help="key=value file; flags override its values")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes for the sums")
    p.add_argument("--timing", action="store_true", default=None,
                   help="fill wall_ms columns (breaks byte determinism)")
    p.add_argument("--observable", default=None, choices=_OBSERVABLES,
                   help="what a sweep computes per rank")
    p.add_argument("--suite", action="append", default=None,
                   metavar="NAME[,NAME...]",
                   help="verify suites to run (default: all)")
    return p


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"--config {path}: {exc.strerror or exc}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(
                f"{path}:{lineno}: expected key=value, got {raw.strip()!r}"
            )
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = val.strip()
    return out


def _conv_float(label, text):
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{label}: expected a number, got {text!r}") from None


def _conv_int(label, text):
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{label}: expected an integer, got {text!r}") from None


def _conv_bool(label, text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"{label}: expected a boolean, got {text!r}")


def _split_list(value):
    """Flatten repeatable/comma-separated flag values into token strings."""
    items = value if isinstance(value, list) else [value]
    out = []
    for item in items:
        out.extend(tok.strip() for tok in str(item).split(",") if tok.strip())
    return out


def _pick(flag_value, file_map, key):
    if flag_value is not None:
        return flag_value
    return file_map.get(key)


def parse_args(argv):
    """Resolve flags and config file into a validated RunConfig."""
    ns = _build_parser().parse_args(argv)
    file_map = _load_config(ns.config) if ns.config else {}

    raw_group = _pick(ns.group, file_map, "group")
    groups = []
    for tok in _split_list(raw_group if raw_group is not None else "u"):
        try:
            name = _norm_group(tok)
        except ValueError as exc:
            raise UsageError(f"--group: {exc}") from None
        if name not in groups:
            groups.append(name)
    if not groups:
        raise UsageError("--group: empty group list")

    raw_genus = _pick(ns.genus, file_map, "genus")
    genera = []
    for tok in _split_list(raw_genus if raw_genus is not None else "1"):
        g = _conv_int("--genus", tok)
        if g < 1:
            raise UsageError(f"--genus: genus must be >= 1, got {g}")
        if g not in genera:
            genera.append(g)
    if not genera:
        raise UsageError("--genus: empty genus list")

    area = ns.area
    if area is None and "area" in file_map:
        area = _conv_float("area (config)", file_map["area"])
    loop_area = ns.loop_area
    if loop_area is None and "loop_area" in file_map:
        loop_area = _conv_float("loop_area (config)", file_map["loop_area"])

    raw_ranks = _pick(ns.ranks, file_map, "N")
    ranks = []
    if raw_ranks is not None:
        for tok in _split_list(raw_ranks):
            rank = _conv_int("--N", tok)
            if rank < 1:
                raise UsageError(f"--N: rank must be >= 1, got {rank}")
            ranks.append(rank)

    defaults = TruncationPolicy()
    k_max = ns.kmax if ns.kmax is not None else (
        _conv_int("kmax (config)", file_map["kmax"])
        if "kmax" in file_map else defaults.k_max)
    n_max = ns.nmax if ns.nmax is not None else (
        _conv_int("nmax (config)", file_map["nmax"])
        if "nmax" in file_map else defaults.n_max)
    gamma = ns.gamma if ns.gamma is not None else (
        _conv_float("gamma (config)", file_map["gamma"])
        if "gamma" in file_map else defaults.gamma)
    tail_tol = ns.tail_tol if ns.tail_tol is not None else (
        _conv_float("tail_tol (config)", file_map["tail_tol"])
        if "tail_tol" in file_map else defaults.tail_tol)
    try:
        policy = TruncationPolicy(k_max=k_max, n_max=n_max, gamma=gamma,
                                  tail_tol=tail_tol)
    except ValueError as exc:
        raise UsageError(f"--kmax/--nmax/--gamma/--tail-tol: {exc}") from None

    fmt = _pick(ns.output_format, file_map, "format") or "csv"
    if fmt not in ("csv", "json"):
        raise UsageError(f"--format: expected csv or json, got {fmt!r}")

    workers = ns.workers
    if workers is None:
        workers = (_conv_int("workers (config)", file_map["workers"])
                   if "workers" in file_map else 1)
    if workers < 1:
        raise UsageError(f"--workers: must be >= 1, got {workers}")

    timing = ns.timing
    if timing is None:
        timing = (_conv_bool("timing (config)", file_map["timing"])
                  if "timing" in file_map else False)

    observable = _pick(ns.observable, file_map, "observable")
    if ns.command == "sweep":
        observable = observable or "wilson-exp"
        if observable not in _OBSERVABLES:
            raise UsageError(
                f"--observable: expected one of {', '.join(_OBSERVABLES)}, "
                f"got {observable!r}")
    elif ns.command in _OBSERVABLES:
        observable = ns.command
    else:
        observable = None

    raw_suites = _pick(ns.suite, file_map, "suite")
    suites = tuple(_split_list(raw_suites)) if raw_suites is not None else ()
    for name in suites:
        if name not in checks.SUITES:
            raise UsageError(
                f"--suite: unknown suite {name!r}; choose from "
                f"{', '.join(sorted(checks.SUITES))}")

    needs = _NEEDS[observable] if ns.command == "sweep" else _NEEDS[ns.command]
    resolved = {"area": area, "loop_area": loop_area, "ranks": ranks}
    for field in needs:
        missing = resolved[field] is None or resolved[field] == []
        if missing:
            raise UsageError(f"{ns.command} requires {_FLAG_OF[field]}")

    return RunConfig(
        command=ns.command,
        groups=tuple(groups),
        genera=tuple(genera),
        area=area,
        loop_area=loop_area,
        ranks=tuple(ranks),
        policy=policy,
        output_format=fmt,
        output_path=ns.output_path or file_map.get("out"),
        workers=workers,
        timing=timing,
        observable=observable,
        suites=suites,
    )


# --- output rendering ---------------------------------------------------


def _cell(value):
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _render_csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(row[h]) for h in header))
    return "\n".join(lines) + "\n"


def _render_json(header, rows, meta):
    payload = {"rows": [{h: row[h] for h in header} for row in rows],
               "meta": meta}
    return json.dumps(payload, indent=2) + "\n"


def _meta(cfg):
    return {
        "command": cfg.command,
        "group": list(cfg.groups),
        "genus": list(cfg.genera),
        "area": cfg.area,
        "loop_area": cfg.loop_area,
        "N": list(cfg.ranks),
        "k_max": cfg.policy.k_max,
        "n_max": cfg.policy.n_max,
        "gamma": cfg.policy.gamma,
        "tail_tol": cfg.policy.tail_tol,
        "format": cfg.output_format,
        "out": cfg.output_path,
        "workers": cfg.workers,
        "timing": cfg.timing,
        "observable": cfg.observable,
        "suite": list(cfg.suites),
    }


def _emit(cfg, header, rows):
    if cfg.output_format == "csv":
        text = _render_csv(header, rows)
    else:
        text = _render_json(header, rows, _meta(cfg))
    if cfg.output_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(
            f"cannot write {cfg.output_path}: {exc.strerror or exc}"
        ) from None


# --- command bodies -----------------------------------------------------


def _report_row(rank, rep, wall_ms):
    return {
        "N": rank,
        "value": rep.value,
        "tail_bound": rep.tail_bound,
        "term_count": rep.term_count,
        "class1": rep.class1,
        "class2": rep.class2,
        "class3": rep.class3,
        "class4": rep.class4,
        "wall_ms": wall_ms,
    }


def _observable_rows(cfg):
    obs = cfg.observable
    if obs == "sphere":
        combos = [(None, None)]
    else:
        combos = [(g, h) for g in cfg.groups for h in cfg.genera]
    tagged = len(combos) > 1
    header = (["group", "genus"] if tagged else []) + list(_VALUE_COLUMNS)
    rows = []
    for group, genus in combos:
        surface = None
        if obs in ("wilson-exp", "wilson-var"):
            surface = SurfaceSpec(genus, cfg.area, cfg.loop_area)
        for rank in cfg.ranks:
            start = time.perf_counter()
            if obs == "zfun":
                rep = partition_function(group, genus, cfg.area, rank,
                                         cfg.policy, cfg.workers)
            elif obs == "wilson-exp":
                rep = wilson_expectation(group, surface, rank, cfg.policy,
                                         cfg.workers)
            elif obs == "wilson-var":
                rep = wilson_variance(group, surface, rank, cfg.policy,
                                      cfg.workers)
            else:
                rep = sphere_wilson(cfg.area, cfg.loop_area, rank,
                                    cfg.policy, cfg.workers)
            wall = (int(round((time.perf_counter() - start) * 1000))
                    if cfg.timing else 0)
            row = _report_row(rank, rep, wall)
            if tagged:
                row = {"group": group, "genus": genus, **row}
            rows.append(row)
    return header, rows


def _plane_rows(cfg):
    value = plane_wilson(cfg.loop_area)
    row = {
        "N": 0,
        "value": value,
        "tail_bound": 0.0,
        "term_count": 1,
        "class1": value,
        "class2": 0.0,
        "class3": 0.0,
        "class4": 0.0,
        "wall_ms": 0,
    }
    return list(_VALUE_COLUMNS), [row]


def _limits_rows(cfg):
    T, t = cfg.area, cfg.loop_area
    if not T > 0:
        raise UsageError(f"--area: must be positive, got {T}")
    if not t > 0:
        raise UsageError(f"--loop-area: must be positive, got {t}")
    phi = tails.euler_phi(math.exp(-T / 2))
    th = tails.theta(T / 2)
    row = {
        "exp_neg_half_t": math.exp(-t / 2),
        "exp_neg_t": math.exp(-t),
        "theta_half_area": th,
        "phi_half_area": phi,
        "inv_phi_sq": 1.0 / (phi * phi),
        "theta_over_phi_sq": th / (phi * phi),
    }
    return list(row), [row]


def _verify_rows(cfg):
    results = checks.run_suites(list(cfg.suites) or None)
    rows = [
        {"suite": r.suite, "check": r.name, "passed": r.passed,
         "failed": r.failed}
        for r in results
    ]
    bad = sum(1 for r in results if not r.ok)
    return ["suite", "check", "passed", "failed"], rows, bad


def run(cfg) -> int:
    """Execute a resolved config; returns the process exit code."""
    if cfg.command == "verify":
        header, rows, bad = _verify_rows(cfg)
        _emit(cfg, header, rows)
        return 1 if bad else 0
    if cfg.command == "limits":
        header, rows = _limits_rows(cfg)
    elif cfg.command == "plane":
        header, rows = _plane_rows(cfg)
    else:
        header, rows = _observable_rows(cfg)
    _emit(cfg, header, rows)
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"ym2d: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return 0 if code is None else int(code)
    try:
        return run(cfg)
    except UsageError as exc:
        print(f"ym2d: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # domain validation speaks for itself; bad parameters are usage
        print(f"ym2d: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
