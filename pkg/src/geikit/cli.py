"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 data error (missing or malformed
input, unreadable gallery), 3 processing error (a pipeline stage failed).
"""

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np
from PIL import Image

from . import bench
from .dataset import (
    SilhouetteSequence,
    SynthWalkerSpec,
    generate_walker,
    load_frames,
    load_gallery,
    load_sequence,
    save_gallery,
    walker_population,
    write_sequence,
)
from .errors import GeiKitError, InsufficientData, SpecInvalid
from .gei import NoiseParams, compute_gei
from .matching import DEFAULT_THRESHOLD, Gallery, GalleryEntry, identify
from .pipeline import DEFAULT_MAX_PERIOD, DEFAULT_MIN_PERIOD, extract_cycles
from .silhouette import NormalizationParams

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PROCESSING = 0, 1, 2, 3


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    report_path: Optional[Path] = None


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _size(text: str):
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}") from None
    return h, w


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GEIKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GEIKIT_SEED must be an integer, got {env!r}") from None


def _norm_params(args) -> NormalizationParams:
    h, w = args.target_size
    try:
        return NormalizationParams(h, w, args.centering)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _probe_sequence(args) -> SilhouetteSequence:
    if args.probe is not None:
        return SilhouetteSequence("probe", "", 0, load_frames(args.probe))
    if args.root is None or args.subject is None:
        raise UsageError("give --probe DIR or --root with --subject")
    return load_sequence(args.root, args.subject, args.condition, args.angle)


def _read_gallery(path: Path, must_exist: bool) -> Gallery:
    if not path.exists():
        if must_exist:
            raise FileNotFoundError(f"gallery {path} does not exist")
        return Gallery()
    return load_gallery(path)


def _fmt(x: float) -> str:
    return f"{x:.3f}"


# ---------------------------------------------------------------- commands


def cmd_synth(args) -> CommandOutcome:
    out_dir = args.out_dir or args.root
    if out_dir is None:
        raise UsageError("--out-dir is required")
    spec = SynthWalkerSpec(
        stride_period=args.stride_period,
        torso_width=args.torso_width,
        leg_length=args.leg_length,
        arm_swing_amplitude=args.arm_swing,
        frame_count=args.frame_count,
        canvas=args.canvas,
        seed=_seed(args),
    )
    try:
        seq = generate_walker(spec, args.subject or "001", args.condition, args.angle)
    except SpecInvalid as exc:
        raise UsageError(str(exc)) from None
    directory = write_sequence(seq, out_dir)
    print(f"wrote {len(seq)} frames to {directory}")
    return CommandOutcome(EXIT_OK, directory)


def _cycle_kwargs(args, seed_offset: int = 0) -> dict:
    kwargs = dict(
        params=_norm_params(args),
        period=args.period,
        min_period=args.min_period,
        max_period=args.max_period,
    )
    if getattr(args, "noise", 0.0):
        try:
            kwargs["noise"] = NoiseParams(args.noise, _seed(args) + seed_offset)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return kwargs


def cmd_enroll(args) -> CommandOutcome:
    if args.root is None or args.subject is None:
        raise UsageError("enroll needs --root and --subject")
    gallery_path = Path(args.gallery)
    gallery = _read_gallery(gallery_path, must_exist=False)
    seq = load_sequence(args.root, args.subject, args.condition, args.angle)
    cycles = extract_cycles(seq, **_cycle_kwargs(args))
    gei = compute_gei(cycles[0])
    entry = GalleryEntry(seq.subject_id, gei, seq.condition, seq.view_angle)
    gallery = gallery.enroll(entry)
    save_gallery(gallery, gallery_path)
    print(
        f"enrolled {entry.subject_id}: cycle of {cycles[0].length} frames, "
        f"gallery now holds {len(gallery)} entries"
    )
    return CommandOutcome(EXIT_OK, gallery_path)


def cmd_identify(args) -> CommandOutcome:
    if args.threshold < 0:
        raise UsageError("--threshold must be non-negative")
    gallery = _read_gallery(Path(args.gallery), must_exist=True)
    seq = _probe_sequence(args)
    cycles = extract_cycles(seq, **_cycle_kwargs(args))
    probe = compute_gei(cycles[0]).astype(np.float32)
    report = identify(probe, gallery, args.threshold)
    if args.format == "csv":
        print("rank,subject_id,distance,decision")
        if not report.ranked:
            print(",,,REJECTED")
        for rank, (sid, dist) in enumerate(report.ranked, 1):
            decision = ""
            if rank == 1:
                decision = "IDENTIFIED" if report.identified else "REJECTED"
            print(f"{rank},{sid},{_fmt(dist)},{decision}")
    else:
        for rank, (sid, dist) in enumerate(report.ranked, 1):
            print(f"{rank:>3}  {sid}  {_fmt(dist)}")
        print(report.decision)
    return CommandOutcome(EXIT_OK)


def cmd_gei_dump(args) -> CommandOutcome:
    if args.out is None:
        raise UsageError("gei-dump needs --out")
    seq = _probe_sequence(args)
    cycles = extract_cycles(seq, **_cycle_kwargs(args))
    gei = compute_gei(cycles[0])
    out = Path(args.out)
    Image.fromarray(np.rint(gei * 255).astype(np.uint8), mode="L").save(out)
    print(f"wrote {gei.shape[0]}x{gei.shape[1]} GEI of a {cycles[0].length}-frame cycle to {out}")
    return CommandOutcome(EXIT_OK, out)


def _bench_data(args, persons: int) -> List[SilhouetteSequence]:
    if args.root is not None:
        root = Path(args.root)
        if not root.is_dir():
            raise FileNotFoundError(f"no such dataset root: {root}")
        subjects = sorted(p.name for p in root.iterdir() if p.is_dir())
        return [load_sequence(root, s, args.condition, args.angle) for s in subjects]
    h, w = args.target_size
    specs = walker_population(persons, seed=_seed(args), canvas=(h, w))
    return [generate_walker(s, subject_id=f"{i + 1:03d}") for i, s in enumerate(specs)]


def cmd_bench(args) -> CommandOutcome:
    try:
        config = bench.BenchConfig(
            args.persons, args.images_per_sequence, args.repetitions, args.single_threaded
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        data = _bench_data(args, config.persons)
    except SpecInvalid as exc:
        raise UsageError(str(exc)) from None
    reports = bench.run_comparison(config, data, _norm_params(args))
    out = bench.emit_report(reports, args.out)
    template, gei, comparison = reports
    print(f"template: {_fmt(template.wall_time_seconds)} s, {template.images_processed} images")
    print(f"gei:      {_fmt(gei.wall_time_seconds)} s, {gei.images_processed} images")
    print(f"time reduction: {_fmt(comparison.time_reduction_percent)}%")
    if not config.single_threaded:
        print("note: multi-threaded run, ratio is indicative only")
    return CommandOutcome(EXIT_OK, out)


# ---------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--root", help="dataset root (root/subject/condition/angle/)")
    common.add_argument("--subject")
    common.add_argument("--condition", default="nm")
    common.add_argument("--angle", type=int, default=90)
    common.add_argument("--target-size", type=_size, default=(128, 88), metavar="HxW")
    common.add_argument("--centering", default="top-half-centroid",
                        choices=("top-half-centroid", "full-centroid"))
    common.add_argument("--seed", type=int, default=None, help="falls back to $GEIKIT_SEED, then 0")
    common.add_argument("--format", choices=("text", "csv"), default="text")

    cycle = argparse.ArgumentParser(add_help=False)
    cycle.add_argument("--period", type=int, default=None, help="skip period estimation")
    cycle.add_argument("--min-period", type=int, default=DEFAULT_MIN_PERIOD)
    cycle.add_argument("--max-period", type=int, default=DEFAULT_MAX_PERIOD)

    parser = _Parser(prog="geikit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", parents=[common], help="render a synthetic walker")
    p.add_argument("--out-dir")
    p.add_argument("--stride-period", type=int, default=20)
    p.add_argument("--torso-width", type=int, default=18)
    p.add_argument("--leg-length", type=int, default=60)
    p.add_argument("--arm-swing", type=int, default=8)
    p.add_argument("--frame-count", type=int, default=80)
    p.add_argument("--canvas", type=_size, default=(128, 88), metavar="HxW")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("enroll", parents=[common, cycle], help="add a sequence's GEI to a gallery")
    p.add_argument("--gallery", required=True)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("identify", parents=[common, cycle], help="match a probe against a gallery")
    p.add_argument("--gallery", required=True)
    p.add_argument("--probe", help="directory of probe frames (instead of --root/--subject)")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--noise", type=float, default=0.0, help="flip probability applied to probe frames")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("bench", parents=[common], help="time template vs GEI matching")
    p.add_argument("--persons", type=int, default=32)
    p.add_argument("--images-per-sequence", type=int, default=11)
    p.add_argument("--repetitions", type=int, default=7)
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--single-threaded", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gei-dump", parents=[common, cycle], help="write a sequence's GEI as an image")
    p.add_argument("--probe", help="directory of frames (instead of --root/--subject)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gei_dump)
    return parser


def run(argv=None) -> CommandOutcome:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)
    except GeiKitError as exc:
        print(f"{exc.stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        data_error = exc.stage == "dataset" or isinstance(exc, InsufficientData)
        return CommandOutcome(EXIT_DATA if data_error else EXIT_PROCESSING)
    except OSError as exc:
        print(f"io: {type(exc).__name__}: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_DATA)


def main(argv=None) -> int:
    try:
        return run(argv).exit_code
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
