"""Command-line front end: single-image detection, method comparison,
directory benchmarking, and standalone metrics.

Exit codes: 0 success, 2 unreadable/invalid input, 3 unknown method,
4 empty batch directory, 5 image dimension mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._version import __version__
from .enhance import ThresholdParams
from .errors import InvalidInputError
from .figures import render_montage
from .image_core import (SUPPORTED_EXTENSIONS, as_image, load_image, normalize,
                         save_image, to_grayscale)
from .metrics import build_report, write_reports_csv, write_reports_json
from .operators import CannyParams
from .pipelines import METHOD_NAMES, run_comparison
from .preprocess import ScalePair
from .tropical import load_kernel_bank

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_METHOD = 3
EXIT_EMPTY = 4
EXIT_DIMENSIONS = 5

DEFAULT_METHODS = ["adapt-thresh-min", "8k-min", "4k-max"]

THREADS_ENV = "TROPEDGE_THREADS"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-i", "--input", action="append", required=True,
                        help="input image path (or directory for bench); repeatable")
    parser.add_argument("-o", "--out", default=".", help="output directory")
    parser.add_argument("-m", "--method", action="append", default=None,
                        help=f"method identifier, repeatable; one of {', '.join(METHOD_NAMES)}")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="report file format")
    parser.add_argument("--paper-protocol", action="store_true",
                        help="resize inputs to 300x400 before processing")
    parser.add_argument("--seed", type=int, default=0, help="seed for random-max")
    parser.add_argument("--threshold", type=float, default=None,
                        help="fixed binarization threshold in [0, 1] "
                             "(also sets the canny high threshold, low = 0.4 * high)")
    parser.add_argument("--window", type=int, default=None,
                        help="adaptive threshold window (odd, >= 3); selects "
                             "adaptive-mean thresholding for pipeline methods")
    parser.add_argument("--scales", type=str, default=None, metavar="S,L",
                        help="scale pair, e.g. 0.5,1.5")
    parser.add_argument("--bank-file", type=str, default=None,
                        help="plain-text kernel bank overriding the pipeline bank")
    parser.add_argument("--save-intermediates", action="store_true",
                        help="also write preprocessed/response/enhanced images")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropedge",
        description="Tropical (min-plus / max-plus) edge detection toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"tropedge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("detect", "run one method on one image"),
                       ("compare", "run several methods and render a montage"),
                       ("bench", "run methods over a directory of images"),
                       ("metrics", "score an existing edge map against its original")):
        _add_common(sub.add_parser(name, help=text))
    return parser


def _parse_scales(text: str | None) -> ScalePair:
    if text is None:
        return ScalePair()
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidInputError(f"--scales expects S,L, got {text!r}")
    return ScalePair(small=float(parts[0]), large=float(parts[1]))


def _comparison_kwargs(args) -> dict:
    threshold = None
    if args.threshold is not None or args.window is not None:
        kwargs = {}
        if args.threshold is not None:
            kwargs = {"mode": "fixed", "value": args.threshold}
        if args.window is not None:
            kwargs["window"] = args.window
        threshold = ThresholdParams(**kwargs)
    canny = CannyParams()
    if args.threshold is not None and 0.0 < args.threshold <= 1.0:
        canny = CannyParams(low=0.4 * args.threshold, high=args.threshold)
    return {
        "seed": args.seed,
        "scales": _parse_scales(args.scales),
        "threshold": threshold,
        "canny": canny,
        "fixed_threshold": args.threshold,
        "bank": load_kernel_bank(args.bank_file) if args.bank_file else None,
        "paper_protocol": args.paper_protocol,
    }


def _check_methods(methods: list[str]) -> str | None:
    for m in methods:
        if m not in METHOD_NAMES:
            return m
    return None


def _load_gray(path: str) -> np.ndarray:
    arr = load_image(path)
    return to_grayscale(arr) if arr.ndim == 3 else as_image(arr)


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _save_result_images(out_dir: str, stem: str, result, save_intermediates: bool) -> None:
    save_image(os.path.join(out_dir, f"{stem}_{result.method}.png"), result.edge_map)
    if save_intermediates:
        for key, grid in result.intermediate.items():
            save_image(os.path.join(out_dir, f"{stem}_{result.method}_{key}.png"),
                       normalize(grid))


def _write_reports(out_dir: str, stem: str, reports, fmt: str,
                   times_ms=None) -> str:
    path = os.path.join(out_dir, f"{stem}_report.{fmt}")
    if fmt == "csv":
        write_reports_csv(path, reports, times_ms)
    else:
        write_reports_json(path, reports)
    return path


def cmd_detect(args) -> int:
    methods = args.method or []
    if len(methods) != 1:
        print("detect needs exactly one --method", file=sys.stderr)
        return EXIT_INPUT
    bad = _check_methods(methods)
    if bad is not None:
        print(f"unknown method: {bad}", file=sys.stderr)
        return EXIT_METHOD
    if len(args.input) != 1:
        print("detect needs exactly one --input", file=sys.stderr)
        return EXIT_INPUT
    try:
        img = load_image(args.input[0])
        kwargs = _comparison_kwargs(args)
        results = run_comparison(img, methods, image_name=_stem(args.input[0]), **kwargs)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    os.makedirs(args.out, exist_ok=True)
    _save_result_images(args.out, _stem(args.input[0]), results[0], args.save_intermediates)
    return EXIT_OK


def cmd_compare(args) -> int:
    methods = args.method or DEFAULT_METHODS
    bad = _check_methods(methods)
    if bad is not None:
        print(f"unknown method: {bad}", file=sys.stderr)
        return EXIT_METHOD
    if len(args.input) != 1 or len(methods) < 2:
        print("compare needs one --input and at least two methods", file=sys.stderr)
        return EXIT_INPUT
    stem = _stem(args.input[0])
    try:
        img = load_image(args.input[0])
        kwargs = _comparison_kwargs(args)
        results = run_comparison(img, methods, image_name=stem, **kwargs)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    os.makedirs(args.out, exist_ok=True)
    gray = results[0].intermediate["grayscale"]
    for result in results:
        _save_result_images(args.out, stem, result, args.save_intermediates)
    render_montage(os.path.join(args.out, f"{stem}_compare.png"), gray,
                   [(r.method, r.edge_map) for r in results])
    path = _write_reports(args.out, stem, [r.report for r in results], args.format)
    print(f"wrote {path}")
    return EXIT_OK


def _max_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def cmd_bench(args) -> int:
    methods = args.method or DEFAULT_METHODS
    bad = _check_methods(methods)
    if bad is not None:
        print(f"unknown method: {bad}", file=sys.stderr)
        return EXIT_METHOD
    if len(args.input) != 1 or not os.path.isdir(args.input[0]):
        print("bench needs one --input directory", file=sys.stderr)
        return EXIT_INPUT
    paths = sorted(
        os.path.join(args.input[0], f) for f in os.listdir(args.input[0])
        if os.path.splitext(f)[1].lower() in SUPPORTED_EXTENSIONS
    )
    if not paths:
        print(f"no supported images in {args.input[0]}", file=sys.stderr)
        return EXIT_EMPTY
    try:
        kwargs = _comparison_kwargs(args)

        def _one(path: str):
            return run_comparison(load_image(path), methods,
                                  image_name=_stem(path), **kwargs)

        with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
            per_image = list(pool.map(_one, paths))
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    reports = [r.report for results in per_image for r in results]
    times = [r.elapsed_ms for results in per_image for r in results]
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "bench.csv")
    write_reports_csv(csv_path, reports, times)
    if args.format == "json":
        write_reports_json(os.path.join(args.out, "bench.json"), reports)
    print(f"wrote {csv_path} ({len(reports)} rows)")
    return EXIT_OK


def cmd_metrics(args) -> int:
    if len(args.input) != 2:
        print("metrics needs two --input paths: original, edge map", file=sys.stderr)
        return EXIT_INPUT
    try:
        original = _load_gray(args.input[0])
        edge_img = _load_gray(args.input[1])
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if original.shape != edge_img.shape:
        print(f"dimension mismatch: {original.shape} vs {edge_img.shape}", file=sys.stderr)
        return EXIT_DIMENSIONS
    edges = edge_img > 0.5
    report = build_report(_stem(args.input[0]), "external", original, edges,
                          params={"edge_source": _stem(args.input[1])})
    if report.contrast_ratio is None:
        report.params["contrast_ratio"] = "undefined"
    if args.format == "json":
        import json
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        import csv as _csv
        from .metrics import CSV_COLUMNS
        writer = _csv.writer(sys.stdout)
        writer.writerow(CSV_COLUMNS)
        writer.writerow(report.to_csv_row())
    if args.out != ".":
        os.makedirs(args.out, exist_ok=True)
        _write_reports(args.out, _stem(args.input[0]), [report], args.format)
    return EXIT_OK


_COMMANDS = {
    "detect": cmd_detect,
    "compare": cmd_compare,
    "bench": cmd_bench,
    "metrics": cmd_metrics,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
