"""``lanegen`` command line: gen-map, generate, predict, evaluate, stats, plot.

Exit codes: 0 success, 1 usage error, 2 data or validation error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import io as lio
from .config import RunConfig
from .lane_graph import dumps_lane_graph, load_lane_graph, save_lane_graph
from .maps import MAP_KINDS, build_map, graph_stats
from .metrics import evaluate_files
from .plotting import render_sample_svg
from .predictor import predict
from .sample_gen import GenerationStats, generate_dataset, resolve_workers

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _stats_path(out) -> Path:
    return Path(str(out) + ".stats.json")


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if getattr(args, "config", None) else RunConfig()
    if getattr(args, "map", None):
        cfg.map = args.map
    if getattr(args, "seed", None) is not None:
        cfg.master_seed = args.seed
    if getattr(args, "num_samples", None) is not None:
        cfg.num_samples = args.num_samples
    if getattr(args, "k", None) is not None:
        cfg.k = args.k
        cfg.predictor = dataclasses.replace(cfg.predictor, k=args.k)
    if getattr(args, "miss_threshold", None) is not None:
        cfg.miss_threshold = args.miss_threshold
        cfg.miss_threshold_is_default = False
    if getattr(args, "out", None):
        cfg.output = args.out
    cfg.__post_init__()
    return cfg


def _require_map(cfg: RunConfig):
    if not cfg.map:
        raise UsageError("no map given (use --map or the config 'map' field)")
    if not Path(cfg.map).is_file():
        raise FileNotFoundError(f"map file not found: {cfg.map}")
    return load_lane_graph(cfg.map)


def cmd_gen_map(args) -> int:
    params = {k: v for k, v in vars(args).items()
              if k in {"n", "length", "n_trunk", "n_branch", "angle_deg", "rows", "cols",
                       "exits", "radius", "arm_length", "n_points"} and v is not None}
    try:
        graph = build_map(args.kind, **params)
    except TypeError as exc:
        raise UsageError(f"{args.kind}: {exc}") from None
    if args.out:
        save_lane_graph(graph, args.out)
    else:
        sys.stdout.write(dumps_lane_graph(graph))
    return 0


def cmd_generate(args) -> int:
    cfg = _load_config(args)
    graph = _require_map(cfg)
    if not cfg.output:
        raise UsageError("generate needs --out")
    stats = GenerationStats()
    samples = generate_dataset(graph, cfg.sampling, cfg.num_samples, cfg.master_seed,
                               workers=resolve_workers(args.workers), stats=stats)
    lio.write_samples(cfg.output, samples)
    _dump_json({"config": cfg.to_dict(), "stats": stats.to_dict()}, _stats_path(cfg.output))
    return 0


def cmd_predict(args) -> int:
    cfg = _load_config(args)
    graph = _require_map(cfg)
    if not cfg.output:
        raise UsageError("predict needs --out")
    samples = lio.read_samples(args.samples)
    preds = ((idx, predict(graph, samples[idx].past, cfg.predictor)) for idx in sorted(samples))
    lio.write_predictions(cfg.output, preds)
    _dump_json({"config": cfg.to_dict(), "samples": str(args.samples)}, _stats_path(cfg.output))
    return 0


def cmd_evaluate(args) -> int:
    cfg = _load_config(args)
    report = evaluate_files(args.samples, args.predictions, cfg.k, cfg.miss_threshold,
                            threshold_is_default=cfg.miss_threshold_is_default)
    doc = {"config": cfg.to_dict(), "report": report.to_dict()}
    if cfg.output:
        _dump_json(doc, cfg.output)
    _dump_json(doc)
    return 0


def cmd_stats(args) -> int:
    cfg = _load_config(args)
    _dump_json(graph_stats(_require_map(cfg)))
    return 0


def _parse_idx(text: str) -> range:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return range(int(lo), int(hi))
        i = int(text)
        return range(i, i + 1)
    except ValueError:
        raise UsageError(f"bad --idx {text!r}; use N or LO:HI") from None


def cmd_plot(args) -> int:
    cfg = _load_config(args)
    graph = _require_map(cfg)
    samples = lio.read_samples(args.samples)
    preds = lio.read_predictions(args.predictions) if args.predictions else {}
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for idx in _parse_idx(args.idx):
        if idx not in samples:
            raise IndexError(f"idx {idx} not in {args.samples}")
        svg = render_sample_svg(graph, samples[idx], preds.get(idx))
        (out / f"sample_{idx:06d}.svg").write_text(svg, encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lanegen", description="Map Trajectories sample generation and evaluation.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen-map", help="write a synthetic map")
    p.add_argument("kind", choices=MAP_KINDS)
    p.add_argument("--out")
    p.add_argument("--n", type=int, help="chain: number of lanelets")
    p.add_argument("--length", type=float, help="lanelet length (m)")
    p.add_argument("--n-trunk", type=int)
    p.add_argument("--n-branch", type=int)
    p.add_argument("--angle", dest="angle_deg", type=float)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--exits", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--arm-length", type=float)
    p.add_argument("--n-points", type=int)
    p.set_defaults(func=cmd_gen_map)

    def common(p, need_map=True):
        p.add_argument("--config")
        if need_map:
            p.add_argument("--map")
        p.add_argument("--out")

    p = sub.add_parser("generate", help="synthesize a sample file")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--num-samples", type=int)
    p.add_argument("--workers", type=int, help="defaults to $LANEGEN_THREADS or 1")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("predict", help="run the baseline predictor over a sample file")
    common(p)
    p.add_argument("--samples", required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score predictions against samples")
    common(p, need_map=False)
    p.add_argument("--samples", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--miss-threshold", type=float)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="print lane-graph statistics")
    p.add_argument("--config")
    p.add_argument("--map")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("plot", help="render samples (and predictions) as SVG")
    common(p)
    p.add_argument("--samples", required=True)
    p.add_argument("--predictions")
    p.add_argument("--idx", default="0")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"lanegen: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (OSError, ValueError, TypeError, KeyError, IndexError, RuntimeError) as exc:
        msg = str(exc).replace("\n", " ") or type(exc).__name__
        if isinstance(exc, KeyError) and exc.args:
            msg = str(exc.args[0])
        print(f"lanegen: error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
