"""``panfuse`` command line: synth, preprocess, fuse, eval, bench, convert.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import io as rio
from .dataset import SceneSpec, make_wald_triple
from .errors import PanfuseError
from .fusion import FusionMethod, cascade_label, fuse, fuse_cascade
from .metrics import MetricConfig, default_weights, evaluate
from .preprocess import CalibrationParams, apply_shift, dos_correct, estimate_shift, radiometric_calibrate, resample
from .raster import FusionInputs, Raster, to_intensity
from .report import FORMATTERS, BenchRow, metric_table

log = logging.getLogger("panfuse")


class UsageError(Exception):
    pass


def _floats(text: str, flag: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def _parse_weights(text: str) -> dict[str, float]:
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--weights entries must look like name=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--weights value for {key!r} is not a number") from None
    return out


def thread_count() -> int:
    env = os.environ.get("PANFUSE_THREADS")
    if env is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(env)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"PANFUSE_THREADS must be a positive integer, got {env!r}")
    return n


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sidecar(out) -> Path:
    return Path(str(out) + ".json")


def _on_pan_grid(ms: Raster, pan: Raster, ratio: int | None) -> tuple[Raster, int]:
    """Bilinear-upsample ``ms`` onto the pan grid when it is an integer factor smaller."""
    if ms.same_grid(pan):
        return ms, ratio or 1
    fx, rx = divmod(pan.width, ms.width)
    fy, ry = divmod(pan.height, ms.height)
    if rx or ry or fx != fy or fx < 1:
        raise UsageError(
            f"pan grid {pan.width}x{pan.height} is not an integer multiple of ms grid {ms.width}x{ms.height}"
        )
    if ratio is not None and ratio != fx:
        raise UsageError(f"--ratio {ratio} disagrees with the grid ratio {fx}")
    return resample(ms, pan.width, pan.height, "bilinear"), fx


def _single_band_pan(pan: Raster) -> Raster:
    if pan.bands != 1:
        raise UsageError(f"pan must have exactly 1 band, got {pan.bands}")
    return pan


def _method_options(args) -> dict:
    return {
        "levels": getattr(args, "levels", None),
        "mode": getattr(args, "pca_mode", None),
        "match": False if getattr(args, "no_match", False) else None,
    }


def _parse_stages(text: str, sep: str, opts: dict) -> list[FusionMethod]:
    tags = [t.strip() for t in text.split(sep) if t.strip()]
    if not tags:
        raise UsageError("a cascade needs at least one stage")
    try:
        return [FusionMethod.from_options(t, **opts) for t in tags]
    except PanfuseError as exc:
        raise UsageError(str(exc)) from None


def _run_method(token: str, inp: FusionInputs, opts: dict) -> tuple[str, Raster]:
    """``token`` is a method tag or ``cascade:<tag>+<tag>...``."""
    if token.startswith("cascade:"):
        stages = _parse_stages(token[len("cascade:"):], "+", opts)
        return cascade_label(stages), fuse_cascade(inp, stages)
    method = FusionMethod.from_options(token, **opts)
    return token, fuse(inp, method)


# -- subcommands -------------------------------------------------------------


def cmd_synth(args) -> int:
    try:
        spec = SceneSpec(args.side, args.bands, args.n_blobs, args.n_shapes, args.seed)
    except PanfuseError as exc:
        raise UsageError(str(exc)) from None
    if args.ratio < 2 or args.side % args.ratio:
        raise UsageError(f"--ratio must be >= 2 and divide --side {args.side}, got {args.ratio}")
    weights = _floats(args.pan_weights, "--pan-weights") if args.pan_weights else [1.0] * spec.bands
    if len(weights) != spec.bands:
        raise UsageError(f"--pan-weights needs {spec.bands} values, got {len(weights)}")
    triple = make_wald_triple(spec, args.ratio, weights)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "ground_truth.msi": triple.ground_truth,
        "ms_low.msi": triple.ms_low,
        "pan.msi": triple.pan,
    }
    for name, r in files.items():
        rio.write_container(r, out / name)
    manifest = {
        "spec": spec.to_dict(),
        "ratio": args.ratio,
        "weights": weights,
        "checksums": {name: rio.payload_crc32(r) for name, r in files.items()},
    }
    path = out / "manifest.json"
    _write_json(path, manifest)
    print(path)
    return 0


def cmd_preprocess(args) -> int:
    r = rio.load(args.input)
    src_crc = rio.payload_crc32(r)
    stages = []
    if args.gains is not None or args.offsets is not None:
        gains = _floats(args.gains, "--gains") if args.gains is not None else [1.0] * r.bands
        offsets = _floats(args.offsets, "--offsets") if args.offsets is not None else [0.0] * len(gains)
        if len(gains) == 1 and r.bands > 1:
            gains = gains * r.bands
        if len(offsets) == 1 and r.bands > 1:
            offsets = offsets * r.bands
        try:
            params = CalibrationParams(tuple(gains), tuple(offsets))
        except PanfuseError as exc:
            raise UsageError(str(exc)) from None
        r = radiometric_calibrate(r, params)
        stages.append({"stage": "calibrate", "gains": list(params.gains), "offsets": list(params.offsets)})
    if args.dos_percentile is not None:
        if not 0.0 <= args.dos_percentile <= 0.5:
            raise UsageError(f"--dos-percentile must lie in [0, 0.5], got {args.dos_percentile}")
        r = dos_correct(r, args.dos_percentile)
        stages.append({"stage": "dos", "percentile": args.dos_percentile})
    if args.align_to is not None:
        ref = rio.load(args.align_to)
        est = estimate_shift(to_intensity(ref), to_intensity(r), args.max_shift)
        r = apply_shift(r, -est.dx, -est.dy)
        stages.append({"stage": "align", "dx": est.dx, "dy": est.dy, "score": float(f"{est.score:.9g}"),
                       "max_shift": args.max_shift})
    rio.save(r, args.out)
    _write_json(_sidecar(args.out), {
        "stages": stages,
        "input": {"path": str(args.input), "crc32": src_crc},
        "output_crc32": rio.payload_crc32(r),
    })
    print(args.out)
    return 0


def cmd_fuse(args) -> int:
    ms = rio.load(args.ms)
    pan = _single_band_pan(rio.load(args.pan))
    ms_up, ratio = _on_pan_grid(ms, pan, args.ratio)
    opts = _method_options(args)
    inp = FusionInputs(ms_up, pan, ratio)
    if args.method == "cascade":
        if not args.cascade_stages:
            raise UsageError("--method cascade requires --cascade-stages")
        stages = _parse_stages(args.cascade_stages, ",", opts)
        label = cascade_label(stages)
        fused = fuse_cascade(inp, stages)
        options = [{"tag": s.tag, **s.options} for s in stages]
    else:
        if args.cascade_stages:
            raise UsageError("--cascade-stages is only valid with --method cascade")
        method = FusionMethod.from_options(args.method, **opts)
        label = method.tag
        fused = fuse(inp, method)
        options = dict(method.options)
    rio.save(fused, args.out)
    _write_json(_sidecar(args.out), {
        "method": label,
        "options": options,
        "ratio": ratio,
        "upsampled_ms": not ms.same_grid(pan),
        "inputs": {
            "ms": {"path": str(args.ms), "crc32": rio.payload_crc32(ms)},
            "pan": {"path": str(args.pan), "crc32": rio.payload_crc32(pan)},
        },
        "output_crc32": rio.payload_crc32(fused),
    })
    print(args.out)
    return 0


def _metric_config(args) -> MetricConfig:
    if not args.weights:
        return MetricConfig()
    weights = _parse_weights(args.weights)
    try:
        return MetricConfig(weights=weights)
    except PanfuseError as exc:
        raise UsageError(str(exc)) from None


def cmd_eval(args) -> int:
    fused = rio.load(args.fused)
    ms = rio.load(args.ms)
    pan = _single_band_pan(rio.load(args.pan))
    gt = rio.load(args.ground_truth) if args.ground_truth else None
    _, ratio = _on_pan_grid(ms, pan, args.ratio)
    cfg = _metric_config(args)
    report = evaluate(fused, ms, pan, ratio, gt, cfg)
    doc = report.to_dict()
    table = metric_table(report)
    if args.json_out:
        _write_json(args.json_out, doc)
    if args.table_out:
        Path(args.table_out).write_text(table, encoding="utf-8")
    print(json.dumps(doc, indent=2, sort_keys=True))
    print()
    print(table, end="")
    return 0


def cmd_bench(args) -> int:
    ms = rio.load(args.ms)
    pan = _single_band_pan(rio.load(args.pan))
    gt = rio.load(args.ground_truth)
    ms_up, ratio = _on_pan_grid(ms, pan, args.ratio)
    tokens = [t.strip() for t in args.methods.split(",") if t.strip()]
    if not tokens:
        raise UsageError("--methods is empty")
    cfg = _metric_config(args)
    opts = _method_options(args)
    inp = FusionInputs(ms_up, pan, ratio)

    def run(token: str) -> BenchRow:
        t0 = time.perf_counter()
        try:
            label, fused = _run_method(token, inp, opts)
            report = evaluate(fused, ms, pan, ratio, gt, cfg)
        except (PanfuseError, UsageError) as exc:
            log.error("method %s failed: %s", token, exc)
            return BenchRow(token, None, time.perf_counter() - t0, str(exc))
        return BenchRow(label, report, time.perf_counter() - t0)

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        rows = list(pool.map(run, tokens))

    text = FORMATTERS[args.format](rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
    else:
        print(text, end="")
    return 1 if all(r.report is None for r in rows) else 0


def cmd_convert(args) -> int:
    rio.save(rio.load(args.src), args.dst)
    print(args.dst)
    return 0


# -- parser ------------------------------------------------------------------


def _add_method_flags(p):
    p.add_argument("--levels", type=int, help="wavelet decomposition levels (default ceil(log2 ratio))")
    p.add_argument("--pca-mode", choices=["substitute", "paper_literal"], help="PCA fusion mode")
    p.add_argument("--no-match", action="store_true", help="disable pan moment matching")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="panfuse", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic Wald triple")
    p.add_argument("--side", type=int, default=128)
    p.add_argument("--bands", type=int, default=4)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--ratio", type=int, default=2)
    p.add_argument("--n-blobs", type=int, default=12)
    p.add_argument("--n-shapes", type=int, default=6)
    p.add_argument("--pan-weights", help="comma-separated per-band weights (default equal)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("preprocess", help="calibrate, dark-object subtract and align a raster")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gains")
    p.add_argument("--offsets")
    p.add_argument("--dos-percentile", type=float)
    p.add_argument("--align-to")
    p.add_argument("--max-shift", type=int, default=4)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("fuse", help="pan-sharpen a multispectral raster")
    p.add_argument("--ms", required=True)
    p.add_argument("--pan", required=True)
    p.add_argument("--method", required=True, choices=["brovey", "pca", "ihs", "wavelet", "cascade"])
    p.add_argument("--out", required=True)
    p.add_argument("--ratio", type=int)
    p.add_argument("--cascade-stages", help="comma-separated stage list, e.g. pca,wavelet")
    _add_method_flags(p)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", help="score a fused raster")
    p.add_argument("--fused", required=True)
    p.add_argument("--ms", required=True)
    p.add_argument("--pan", required=True)
    p.add_argument("--ground-truth")
    p.add_argument("--ratio", type=int)
    p.add_argument("--weights", help="name=value,... over " + ",".join(default_weights()))
    p.add_argument("--json-out")
    p.add_argument("--table-out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run and score several methods")
    p.add_argument("--ms", required=True)
    p.add_argument("--pan", required=True)
    p.add_argument("--ground-truth", required=True)
    p.add_argument("--ratio", type=int)
    p.add_argument("--methods", default="brovey,pca,ihs,wavelet",
                   help="comma-separated tags; cascade:<tag>+<tag> for a cascade")
    p.add_argument("--format", choices=sorted(FORMATTERS), default="csv")
    p.add_argument("--weights")
    p.add_argument("--out")
    _add_method_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", help="convert between .msi and .png")
    p.add_argument("src")
    p.add_argument("dst")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"panfuse {args.command}: usage error: {exc}", file=sys.stderr)
        return 2
    except (PanfuseError, OSError) as exc:
        print(f"panfuse {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
