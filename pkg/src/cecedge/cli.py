"""``cec-edge`` command line tool.

Exit codes: 0 success, 1 usage/configuration error, 2 I/O or parse error,
3 invalid image data, 4 partial failure in batch/eval runs.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path


from . import __version__
from .baselines import classic_canny, sobel_edges
from .bsds import boundary_mask, load_manifest, parse_seg
from .config import Settings, load_config, stage_alias
from .ensemble import run_pipeline
from .errors import CecError, InvalidArgumentError, ParseError
from .evaluation import evaluate_manifest, format_csv, format_jsonl, reference_rows
from .image import encode_pgm, encode_ppm, read_image

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_IMAGE, EXIT_PARTIAL = 0, 1, 2, 3, 4

INTERMEDIATE_SUFFIXES = ("cec", "pca", "fused", "nms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(kind: str, message) -> None:
    text = " ".join(str(message).split())
    print(f"cec-edge: error[{kind}]: {text}", file=sys.stderr)


def _warn(message) -> None:
    print(f"cec-edge: warning: {message}", file=sys.stderr)


def write_atomic(path, data: bytes | str) -> None:
    path = Path(path)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="key = value settings file (fallback: $CEC_CONFIG)")
    p.add_argument("--high", type=float, dest="high_frac", help="strong threshold, fraction of max magnitude")
    p.add_argument("--low", type=float, dest="low_frac", help="weak threshold, fraction of max magnitude")
    p.add_argument("--sigma", type=float, help="Gaussian pre-smoothing std-dev in pixels")
    p.add_argument("--fusion", choices=("max", "mean"), dest="fusion_rule")
    p.add_argument("--stage", choices=("cec", "pca", "fused"), dest="stage_select")
    p.add_argument("--pca-k", type=int, dest="pca_k")
    p.add_argument("--sobel-threshold", type=float, dest="sobel_threshold_frac")
    p.add_argument("--detector", choices=("cec", "sobel", "canny"), default="cec")
    p.add_argument("--tolerance", type=int, dest="tolerance_r", help="match tolerance radius in pixels")
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default: CPU count)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="cec-edge", description="Quaternion color edge detection and evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("detect", parents=[common], help="detect edges in one PPM/PGM image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--emit-intermediates", action="store_true",
                   help="also write .cec/.pca/.fused/.nms magnitude maps next to OUTPUT")

    p = sub.add_parser("batch", parents=[common], help="detect edges for every image in a manifest")
    p.add_argument("manifest")
    p.add_argument("out_dir")

    p = sub.add_parser("eval", parents=[common], help="score predicted masks against ground truth")
    p.add_argument("manifest")
    p.add_argument("--detect-first", action="store_true",
                   help="manifest lists input images; run the detector before scoring")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--reference", action="store_true", help="append the published comparison rows")

    p = sub.add_parser("convert-seg", parents=[common], help="convert a .seg file to a boundary PGM")
    p.add_argument("seg")
    p.add_argument("output")

    p = sub.add_parser("synth", help="write the seeded equal-luma synthetic suite")
    p.add_argument("out_dir")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=64)
    return parser


def resolve_settings(args) -> Settings:
    cfg_path = args.config or os.environ.get("CEC_CONFIG")
    base = Settings()
    if cfg_path:
        base = base.merged(**load_config(cfg_path))
    flags = {
        k: getattr(args, k, None)
        for k in ("high_frac", "low_frac", "sigma", "fusion_rule", "pca_k", "tolerance_r", "sobel_threshold_frac")
    }
    if getattr(args, "stage_select", None):
        flags["stage_select"] = stage_alias(args.stage_select)
    return base.merged(**flags).validate()


def detect(img, settings: Settings, detector: str = "cec"):
    """Run one detector; returns ``(edge_map, intermediates or None)``."""
    if detector == "sobel":
        return sobel_edges(img, settings.sobel_threshold_frac), None
    if detector == "canny":
        return classic_canny(img, settings.hysteresis("canny")), None
    result = run_pipeline(img.to_rgb(), settings.pipeline())
    return result.edges, result.intermediates


def _load_input(path):
    img = read_image(path)
    if img.width < 3 or img.height < 3:
        raise InvalidArgumentError(f"image must be at least 3x3, got {img.width}x{img.height}")
    return img


def _intermediate_path(output: Path, suffix: str) -> Path:
    stem = output.name[: -len(output.suffix)] if output.suffix else output.name
    return output.with_name(f"{stem}.{suffix}.pgm")


def _jobs(args) -> int:
    return args.jobs if args.jobs is not None else (os.cpu_count() or 1)


def cmd_detect(args, settings: Settings) -> int:
    img = _load_input(args.input)
    edges, inter = detect(img, settings, args.detector)
    out = Path(args.output)
    write_atomic(out, encode_pgm(edges, "binary"))
    if args.emit_intermediates:
        if inter is None:
            _warn(f"--emit-intermediates has no effect with --detector {args.detector}")
        else:
            for suffix in INTERMEDIATE_SUFFIXES:
                write_atomic(_intermediate_path(out, suffix), encode_pgm(inter[suffix], "linear"))
    return EXIT_OK


def cmd_batch(args, settings: Settings) -> int:
    pairs = load_manifest(args.manifest, allow_single=True)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not pairs:
        _warn(f"manifest {args.manifest} lists no images")
        return EXIT_OK

    def one(image_path: Path):
        try:
            edges, _ = detect(_load_input(image_path), settings, args.detector)
            target = out_dir / f"{image_path.stem}.edges.pgm"
            write_atomic(target, encode_pgm(edges, "binary"))
            return target, None
        except (OSError, CecError) as exc:
            return image_path, exc

    jobs = _jobs(args)
    images = [p for p, _ in pairs]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, images))
    else:
        results = [one(p) for p in images]

    failed = 0
    for src, (path, exc) in zip(images, results):
        if exc is None:
            print(f"{src} -> {path}", file=sys.stderr)
        else:
            failed += 1
            _warn(f"{src}: {' '.join(str(exc).split())}")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_eval(args, settings: Settings) -> int:
    pairs = load_manifest(args.manifest)
    load_pred = None
    if args.detect_first:
        def load_pred(path):
            return detect(_load_input(path), settings, args.detector)[0].mask

    rows, aggregate = evaluate_manifest(pairs, settings.tolerance_r, load_pred=load_pred, jobs=_jobs(args))
    report = rows + [aggregate]
    if args.reference:
        report += reference_rows()
    text = format_jsonl(report) if args.format == "json" else format_csv(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if r.error is not None]
    for row in failed:
        _warn(f"{row.name}: {' '.join(row.error.split())}")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_convert_seg(args, settings: Settings) -> int:
    grid = parse_seg(Path(args.seg).read_bytes())
    write_atomic(args.output, encode_pgm(boundary_mask(grid), "binary"))
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import chromatic_suite

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = []
    for i, case in enumerate(chromatic_suite(args.count, args.seed, size=args.size)):
        name = f"synth_{i:03d}"
        write_atomic(out / f"{name}.ppm", encode_ppm(case.image))
        write_atomic(out / f"{name}.gt.pgm", encode_pgm(case.ground_truth, "binary"))
        lines.append(f"{name}.ppm\t{name}.gt.pgm")
    write_atomic(out / "manifest.tsv", "".join(line + "\n" for line in lines))
    return EXIT_OK


COMMANDS = {"detect": cmd_detect, "batch": cmd_batch, "eval": cmd_eval, "convert-seg": cmd_convert_seg}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required (detect, batch, eval, convert-seg, synth)")
        if args.command == "synth":
            return cmd_synth(args)
        if args.jobs is not None and args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
        settings = resolve_settings(args)
    except UsageError as exc:
        _fail("usage", exc)
        return EXIT_USAGE
    except ParseError as exc:
        _fail("parse", exc)
        return EXIT_IO
    except InvalidArgumentError as exc:
        _fail("usage", exc)
        return EXIT_USAGE
    except OSError as exc:
        _fail("io", exc)
        return EXIT_IO

    try:
        return COMMANDS[args.command](args, settings)
    except ParseError as exc:
        _fail("parse", exc)
        return EXIT_IO
    except OSError as exc:
        _fail("io", exc)
        return EXIT_IO
    except InvalidArgumentError as exc:
        # settings were validated above, so what is left is bad image data
        _fail("image", exc)
        return EXIT_IMAGE


if __name__ == "__main__":
    sys.exit(main())
