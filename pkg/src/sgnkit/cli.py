"""Command-line entry point: ``info``, ``transform``, ``features``, ``benchmark``.

Examples::

    sgnkit info --dataset MUTAG
    sgnkit transform --dataset graph.txt --order 2 --out out/
    sgnkit features --dataset MUTAG --method handcrafted --orders 0,1,2 --out feats/
    sgnkit benchmark --dataset MUTAG --reps 100 --seed 0 --out results/

Bare dataset names are resolved under ``$SGN_DATA_ROOT``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .datasets import DatasetError, GraphDataset, load_dataset, load_edge_list, write_graph
from .features import ConvergenceError
from .graph import GraphError
from .pipeline import (
    HANDCRAFTED,
    METHODS,
    PipelineError,
    compute_order_blocks,
    run_experiment,
)
from .sgn import ITERATED_LINE, RULES, SgnConfig, SgnError, sgn

log = logging.getLogger("sgnkit")

FULL_GRID = ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))
PROFILES = {"quick": 100, "full": 500}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    dataset: str = ""
    method: str = HANDCRAFTED
    orders: list = field(default_factory=lambda: [list(o) for o in FULL_GRID])
    rule: str = ITERATED_LINE
    profile: str = "quick"
    reps: Optional[int] = None
    train_frac: float = 0.9
    reg: float = 1.0
    seed: int = 0
    wl_height: int = 2
    jobs: int = 1
    out: str = "results"

    def __post_init__(self):
        if self.reps is None:
            self.reps = PROFILES[self.profile]
        self.validate()

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if self.rule not in RULES:
            raise ConfigError(f"rule must be one of {RULES}")
        if self.profile not in PROFILES:
            raise ConfigError(f"profile must be one of {tuple(PROFILES)}")
        if not self.orders or any(not o for o in self.orders):
            raise ConfigError("order combinations must be non-empty")
        if any(k < 0 for o in self.orders for k in o):
            raise ConfigError("orders must be nonnegative")
        if self.rule != ITERATED_LINE and any(k > 2 for o in self.orders for k in o):
            raise ConfigError(f"rule {self.rule} supports orders up to 2")
        if self.reps < 1:
            raise ConfigError("reps must be >= 1")
        if not 0 < self.train_frac < 1:
            raise ConfigError("train_frac must lie in (0, 1)")


def parse_orders(text: str) -> list[list[int]]:
    """``"0,1,2"`` is one combination; ``;`` separates several; ``grid`` is the 7-run grid."""
    text = text.strip()
    if text in ("grid", "all"):
        return [list(o) for o in FULL_GRID]
    try:
        combos = [[int(k) for k in part.split(",") if k.strip()] for part in text.split(";") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse orders {text!r}") from exc
    if not combos or any(not c for c in combos):
        raise ConfigError(f"cannot parse orders {text!r}")
    return combos


def format_orders(orders: Sequence[int]) -> str:
    return ",".join(str(k) for k in orders)


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_CASTS = {"reps": int, "train_frac": float, "reg": float, "seed": int, "wl_height": int, "jobs": int}


def build_config(file_values: dict, overrides: dict) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    merged = {}
    for source in (file_values, overrides):
        for key, value in source.items():
            if value is None:
                continue
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = value
    for key, cast in _CASTS.items():
        if key in merged:
            try:
                merged[key] = cast(merged[key])
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {merged[key]!r}") from exc
    if isinstance(merged.get("orders"), str):
        merged["orders"] = parse_orders(merged["orders"])
    return ExperimentConfig(**merged)


# ------------------------------------------------------------------ commands


def _load(dataset: str) -> GraphDataset:
    ds = load_dataset(dataset)
    log.info("loaded %s: %d graphs", ds.name, len(ds))
    return ds


def cmd_info(args) -> int:
    stats = _load(args.dataset).stats()
    print(stats)
    return 0


def cmd_transform(args) -> int:
    if args.order is None or args.order < 0:
        raise ConfigError("--order must be a nonnegative integer")
    cfg = SgnConfig(order=args.order, rule=args.rule)
    src = Path(args.dataset)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if src.is_file():
        graphs = [(src.stem, load_edge_list(src))]
    else:
        ds = _load(args.dataset)
        graphs = [(f"{ds.name}_{i}", g) for i, g in enumerate(ds.graphs)]
    for name, g in graphs:
        s = sgn(g, cfg)
        write_graph(s, out / f"{name}.sgn{cfg.order}.txt")
        print(f"{name}\torder={cfg.order}\tnodes={s.num_nodes}\tlinks={s.num_links}")
    return 0


def write_feature_csvs(blocks, ds: GraphDataset, orders, out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k in orders:
        fm = blocks.blocks[k]
        names = [c.rsplit("@", 1)[0] for c in fm.columns]
        path = out / f"{ds.name}_order{k}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["graph_id", "order", *names])
            for gid, row in enumerate(fm.values):
                w.writerow([gid, k, *(repr(float(x)) for x in row)])
        paths.append(path)
    return paths


def cmd_features(args) -> int:
    orders = sorted({k for combo in parse_orders(args.orders or "0") for k in combo})
    ds = _load(args.dataset)
    blocks = compute_order_blocks(ds, args.method, max(orders), args.rule,
                                  wl_height=args.wl_height, n_jobs=args.jobs)
    for p in write_feature_csvs(blocks, ds, orders, Path(args.out)):
        print(p)
    return 0


RESULT_COLUMNS = ("dataset", "method", "orders", "mean_f1", "std_f1", "gain_pct", "reps", "seed")


def _round(x: float) -> float:
    return float(f"{x:.12g}")


def cmd_benchmark(args) -> int:
    cfg = args.config_obj
    ds = _load(cfg.dataset)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    max_order = max(k for o in cfg.orders for k in o)
    blocks = compute_order_blocks(ds, cfg.method, max_order, cfg.rule,
                                  wl_height=cfg.wl_height, n_jobs=cfg.jobs)
    rows = []
    importances = {}
    failures = {}
    baseline = None
    csv_path = out / "results.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        # the order-0 baseline runs first so every later row can carry its gain
        combos = sorted(cfg.orders, key=lambda o: tuple(o) != (0,))
        for combo in combos:
            try:
                res = run_experiment(ds, cfg.method, [combo], cfg.reps, cfg.train_frac,
                                     cfg.reg, cfg.seed, cfg.rule, cfg.wl_height,
                                     n_jobs=1, blocks=blocks)
            except (PipelineError, ConvergenceError) as exc:
                log.error("orders %s failed: %s", combo, exc)
                failures[format_orders(combo)] = str(exc)
                continue
            c = res.combinations[0]
            if tuple(combo) == (0,):
                baseline = c.mean_f1
            g = None
            if baseline is not None and baseline > 0:
                g = (c.mean_f1 - baseline) / baseline * 100.0
            row = {
                "dataset": ds.name,
                "method": cfg.method,
                "orders": format_orders(combo),
                "mean_f1": _round(c.mean_f1),
                "std_f1": _round(c.std_f1),
                "gain_pct": "" if g is None else _round(g),
                "reps": cfg.reps,
                "seed": cfg.seed,
            }
            rows.append(row)
            w.writerow([row[k] for k in RESULT_COLUMNS])
            fh.flush()
            importances[row["orders"]] = {
                col: _round(v) for col, v in zip(c.columns, c.importances)
            }
            print(f"{row['orders']:>8}  F1 {c.mean_f1:6.2f} +/- {c.std_f1:5.2f}"
                  + ("" if g is None else f"  gain {g:+.2f}%"))
    summary = {
        "config": asdict(cfg),
        "results": rows,
        "feature_importance_pct": importances,
        "failures": failures,
        "version": __version__,
    }
    (out / "results.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _write_timing(blocks.timings, max_order, out / "timing.json")
    return 1 if failures else 0


def _write_timing(timings: dict, max_order: int, path: Path) -> None:
    """Stage timings kept apart from the results so those stay byte-stable."""
    series = [timings.get(f"transform_order{k}", 0.0) for k in range(1, max_order + 1)]
    monotone = all(a <= b for a, b in zip(series, series[1:]))
    if not monotone:
        log.warning("transform time not monotone in order: %s", series)
    path.write_text(json.dumps({"seconds": timings, "transform_monotone": monotone},
                               indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sgnkit", description="Subgraph networks for graph classification.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    info = sub.add_parser("info", help="print #graphs #classes #positive #negative")
    info.add_argument("--dataset", required=True)
    info.set_defaults(func=cmd_info)

    tr = sub.add_parser("transform", help="build SGNs and write edge lists")
    tr.add_argument("--dataset", required=True, help="edge-list file or TU dataset")
    tr.add_argument("--order", type=int, required=True)
    tr.add_argument("--rule", choices=RULES, default=ITERATED_LINE)
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=cmd_transform)

    fe = sub.add_parser("features", help="write per-order feature CSVs")
    fe.add_argument("--dataset", required=True)
    fe.add_argument("--method", choices=METHODS, default=HANDCRAFTED)
    fe.add_argument("--orders", "--order", dest="orders", default="0")
    fe.add_argument("--rule", choices=RULES, default=ITERATED_LINE)
    fe.add_argument("--wl-height", type=int, default=2)
    fe.add_argument("--jobs", type=int, default=1)
    fe.add_argument("--out", required=True)
    fe.set_defaults(func=cmd_features)

    be = sub.add_parser("benchmark", help="repeated-split classification benchmark")
    be.add_argument("--config", help="flat key = value config file")
    be.add_argument("--dataset")
    be.add_argument("--method", choices=METHODS)
    be.add_argument("--orders")
    be.add_argument("--rule", choices=RULES)
    be.add_argument("--profile", choices=tuple(PROFILES))
    be.add_argument("--reps", type=int)
    be.add_argument("--train-frac", type=float)
    be.add_argument("--reg", type=float)
    be.add_argument("--seed", type=int)
    be.add_argument("--wl-height", type=int)
    be.add_argument("--jobs", type=int)
    be.add_argument("--out")
    be.set_defaults(func=cmd_benchmark)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "benchmark":
            file_values = read_config_file(args.config) if args.config else {}
            overrides = {k: getattr(args, k) for k in
                         ("dataset", "method", "orders", "rule", "profile", "reps", "train_frac",
                          "reg", "seed", "wl_height", "jobs", "out")}
            args.config_obj = build_config(file_values, overrides)
            if not args.config_obj.dataset:
                raise ConfigError("no dataset given (--dataset or config file)")
        return args.func(args)
    except (ConfigError, DatasetError, GraphError, SgnError, PipelineError,
            ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
