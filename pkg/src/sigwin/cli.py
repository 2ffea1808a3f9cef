"""Command line front end: enroll, identify, verify, evaluate, synth, codebook.

Exit codes: 0 success, 2 input or usage error, 3 configuration mismatch
against an existing registry.  The environment variable SIGWIN_CONFIG may
name a JSON file whose keys equal the configuration flag names; explicit
flags override the file, which overrides the defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from pathlib import Path

from .codebook import features, load_codebook
from .config import PipelineConfig
from .errors import ConfigMismatchError, EmptyImageError, SigwinError
from .evalkit import Protocol, format_report, generate_dataset, roc_csv, run_experiment
from .identify import (
    Registry,
    enroll,
    identify_fragments,
    load_registry,
    preprocess,
    save_registry,
    verify,
)
from .imgio import binary_to_gray, read_image, write_pgm
from .skeletonize import thin
from .windowing import collect_fragments, place_windows

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG_MISMATCH = 3

_FLAG_TYPES = {
    "window_size": int,
    "cluster_theta": float,
    "min_fragment_pixels": int,
    "speck_min_size": int,
    "overlap_max": float,
    "verify_tau": float,
    "seed": int,
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline configuration")
    for name, kind in _FLAG_TYPES.items():
        group.add_argument(
            "--" + name.replace("_", "-"),
            type=kind,
            default=None,
            help=f"override {name} (default {getattr(PipelineConfig(), name)})",
        )


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    values = {}
    env_path = os.environ.get("SIGWIN_CONFIG")
    if env_path:
        with open(env_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{env_path}: config file must hold a JSON object")
        values.update(PipelineConfig.from_dict(data).to_dict())
    for name in _FLAG_TYPES:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return PipelineConfig(**values)


def _load_or_new_registry(path, config: PipelineConfig) -> Registry:
    if (Path(path) / "manifest.json").is_file():
        return load_registry(path, expected_config=config)
    return Registry(config=config)


def cmd_enroll(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    registry = _load_or_new_registry(args.registry, config)
    images = [read_image(p) for p in args.images]
    profile = enroll(args.writer, images, config)
    registry.add(profile)
    save_registry(registry, args.registry)
    fragment_total = sum(profile.codebook.frequencies)
    print(
        f"enrolled {args.writer}: {fragment_total} fragments in "
        f"{len(profile.codebook)} classes from {profile.sample_count} images"
    )
    return EXIT_OK


def _draw_window_borders(canvas, windows, value: int = 128) -> None:
    h, w = canvas.shape
    for win in windows:
        x0, y0, x1, y1 = win.rect
        cx0, cy0 = max(x0, 0), max(y0, 0)
        cx1, cy1 = min(x1, w), min(y1, h)
        if cx0 >= cx1 or cy0 >= cy1:
            continue
        if 0 <= y0 < h:
            canvas[y0, cx0:cx1] = value
        if 0 <= y1 - 1 < h:
            canvas[y1 - 1, cx0:cx1] = value
        if 0 <= x0 < w:
            canvas[cy0:cy1, x0] = value
        if 0 <= x1 - 1 < w:
            canvas[cy0:cy1, x1 - 1] = value


def _write_dumps(args: argparse.Namespace, fg, skel, windows, fragments) -> None:
    if args.dump_skeleton:
        write_pgm(binary_to_gray(skel.image), args.dump_skeleton)
    if args.dump_windows:
        canvas = binary_to_gray(fg)
        _draw_window_borders(canvas, windows)
        write_pgm(canvas, args.dump_windows)
    if args.dump_fragments:
        out = Path(args.dump_fragments)
        out.mkdir(parents=True, exist_ok=True)
        for i, frag in enumerate(fragments):
            write_pgm(binary_to_gray(frag.bits), out / f"fragment_{i:04d}.pgm")


def cmd_identify(args: argparse.Namespace) -> int:
    registry = load_registry(args.registry)
    config = registry.config
    image = read_image(args.image)
    fg = preprocess(image, config)
    if not fg.any():
        raise EmptyImageError("no ink left after preprocessing")
    skel = thin(fg)
    spec = config.to_window_spec()
    windows = place_windows(fg, skel, spec)
    fragments = collect_fragments(fg, windows, spec)
    _write_dumps(args, fg, skel, windows, fragments)
    report = identify_fragments(fragments, registry)
    if args.json:
        print(json.dumps({"ranking": [{"writer": w, "score": s} for w, s in report.ranked]}, indent=2))
    else:
        for rank, (writer, score) in enumerate(report.ranked, start=1):
            print(f"{rank:>3}. {writer}  {score:.3f}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    registry = load_registry(args.registry)
    result = verify(read_image(args.image), args.writer, registry, tau=args.tau)
    verdict = "accept" if result.accepted else "reject"
    print(f"{verdict} {result.writer_id}: score {result.score:.3f} vs tau {result.tau:.3f}")
    return EXIT_OK if result.accepted else 1


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    result = run_experiment(args.dataset, Protocol(enroll_count=args.enroll_count), config)
    report = format_report(result)
    sys.stdout.write(report)
    with open(args.roc_csv, "w", encoding="utf-8") as fh:
        fh.write(roc_csv(result.metrics))
    print(f"roc sweep written to {args.roc_csv}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    ids = generate_dataset(
        args.out_dir,
        args.writers,
        args.samples,
        base_seed=config.seed,
        jitter=args.jitter,
        canvas=(args.canvas_width, args.canvas_height),
    )
    print(f"wrote {args.writers * args.samples} images for {len(ids)} writers under {args.out_dir}")
    return EXIT_OK


def cmd_codebook_inspect(args: argparse.Namespace) -> int:
    book = load_codebook(args.path)
    print(f"classes: {len(book)} (n={book.spec.n}, theta={book.theta})")
    histogram = Counter(book.frequencies)
    print("frequency histogram:")
    for freq in sorted(histogram):
        print(f"  freq {freq:>3}: {histogram[freq]} classes")
    n = book.spec.n
    hh_names = " ".join(f"HH{i + 1}" for i in range(n))
    vh_names = " ".join(f"VH{i + 1}" for i in range(n))
    print(f"{'class':>5} {'freq':>4}  {hh_names}  {vh_names}  upper lower  rect perim")
    for idx, cls in enumerate(book.classes, start=1):
        rep = cls.representative
        if rep.ink == 0:
            print(f"{idx:>5} {cls.frequency:>4}  (empty representative)")
            continue
        fv = features(rep)
        hh = " ".join(f"{v:>3}" for v in fv.hh)
        vh = " ".join(f"{v:>3}" for v in fv.vh)
        print(
            f"{idx:>5} {cls.frequency:>4}  {hh}  {vh}  "
            f"{fv.upper:>5} {fv.lower:>5}  {fv.rect:>4.2f} {fv.perim:>5}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigwin",
        description="Offline signature identification via skeleton-guided window fragments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enroll", help="add a writer's genuine samples to a registry")
    p.add_argument("--registry", required=True, help="registry directory (created if missing)")
    p.add_argument("--writer", required=True, help="writer id to enroll")
    p.add_argument("images", nargs="+", help="genuine signature images (PNG or PGM)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("identify", help="rank enrolled writers for a test signature")
    p.add_argument("--registry", required=True)
    p.add_argument("image")
    p.add_argument("--json", action="store_true", help="machine-readable ranking")
    p.add_argument("--dump-skeleton", metavar="PGM", help="write the thinned trace")
    p.add_argument("--dump-windows", metavar="PGM", help="write the ink with window outlines")
    p.add_argument("--dump-fragments", metavar="DIR", help="write each fragment as a PGM")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("verify", help="accept or reject a claimed identity")
    p.add_argument("--registry", required=True)
    p.add_argument("--writer", required=True, help="claimed writer id")
    p.add_argument("--tau", type=float, default=None, help="acceptance threshold")
    p.add_argument("image")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evaluate", help="run the enrollment/test protocol over a dataset")
    p.add_argument("dataset", help="dataset root: <writer_id>/genuine_<k>.png")
    p.add_argument("--enroll-count", type=int, default=5)
    p.add_argument("--roc-csv", default="roc.csv", help="where to write the tau,far,frr sweep")
    p.add_argument("--report", default=None, help="also write the text report here")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic multi-writer dataset")
    p.add_argument("out_dir")
    p.add_argument("--writers", type=int, default=10)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--jitter", type=float, default=0.25, help="per-sample style jitter")
    p.add_argument("--canvas-width", type=int, default=240)
    p.add_argument("--canvas-height", type=int, default=120)
    _add_config_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("codebook", help="codebook file utilities")
    csub = p.add_subparsers(dest="codebook_command", required=True)
    ci = csub.add_parser("inspect", help="print class count, frequencies, and features")
    ci.add_argument("path")
    ci.set_defaults(func=cmd_codebook_inspect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_MISMATCH
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed stdout; not our error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (SigwinError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
