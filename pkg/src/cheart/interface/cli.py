"""Command-line entry points for the full workflow.

Exit codes: 0 success, 2 usage error (argparse), 1 runtime failure.
The checkpoint path may come from --checkpoint or the CHEART_CHECKPOINT
environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from ..baselines.pca import make_pca_completer, pca_fit
from ..datakit.io import load_dataset, load_sequence, save_dataset, save_sequence
from ..datakit.phantom import PhantomParams, make_dataset
from ..datakit.types import ConditionProfile, Dataset
from ..engine.infer import (
    complete_sequence,
    condition_sweep,
    export_latent_trajectories,
    generate_sequences,
    make_completer,
    make_generator,
)
from ..engine.train import DEFAULT_FRAME_PERIOD_S, LR_SCHEDULES, TrainConfig, train
from ..errors import CheartError
from ..metrics.evaluate import evaluate_completion, evaluate_generation
from ..metrics.phenotypes import phenotypes
from ..model.checkpoint import load_checkpoint, save_checkpoint
from ..model.networks import ModelConfig

CHECKPOINT_ENV = "CHEART_CHECKPOINT"


def _checkpoint_path(args) -> str:
    path = args.checkpoint or os.environ.get(CHECKPOINT_ENV)
    if not path:
        raise CheartError(f"no checkpoint given (use --checkpoint or ${CHECKPOINT_ENV})")
    return path


def _add_checkpoint_flag(p: argparse.ArgumentParser):
    p.add_argument("--checkpoint", help=f"checkpoint file (default: ${CHECKPOINT_ENV})")


def _add_condition_flags(p: argparse.ArgumentParser):
    p.add_argument("--age", type=int, required=True, help="age in years, 10..79")
    p.add_argument("--gender", required=True, choices=["female", "male"])
    p.add_argument("--weight", type=float, required=True, help="weight in kg")
    p.add_argument("--height", type=float, required=True, help="height in cm")
    p.add_argument("--sbp", type=float, required=True, help="systolic blood pressure in mmHg")


def _profile_from_args(args) -> ConditionProfile:
    return ConditionProfile(age_years=args.age, gender=args.gender, weight_kg=args.weight,
                            height_cm=args.height, sbp_mmhg=args.sbp)


def _write_phenotype_report(sequences, path: Path):
    rows = []
    for i, seq in enumerate(sequences):
        try:
            rows.append({"sample": i, **phenotypes(seq).as_dict()})
        except ValueError:
            rows.append({"sample": i, "error": "no LV voxels"})
    path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")


def _cmd_make_phantoms(args) -> int:
    params = PhantomParams(dims=tuple(args.dims), t_frames=args.frames)
    dataset = make_dataset(params, args.subjects, seed=args.seed)
    save_dataset(dataset, args.out)
    counts = {s: len(dataset.split(s)) for s in ("train", "val", "test")}
    print(f"wrote {args.subjects} subjects to {args.out} (splits: {counts})")
    return 0


def _cmd_train(args) -> int:
    dataset = load_dataset(args.data)
    first = dataset.records[0].sequence
    kwargs = {"channels": tuple(args.channels)} if args.channels else {}
    model_config = ModelConfig(grid_dims=first.dims, t_frames=first.t_frames, beta=args.beta,
                               **kwargs)
    config = TrainConfig(epochs=args.epochs, patience=args.patience, lr=args.lr,
                         batch_size=args.batch_size, beta=args.beta,
                         beta_warmup_epochs=args.beta_warmup, seed=args.seed,
                         lr_schedule=args.lr_schedule, history_path=args.history)
    model, history = train(dataset, model_config, config)
    save_checkpoint(model, args.out, extra_meta={"frame_period_s": first.frame_period_s})
    best = history.best_epoch
    print(f"trained {len(history)} epochs; best epoch {best} "
          f"(val total {history.best_val_total:.4f}); checkpoint at {args.out}")
    return 0


def _cmd_complete(args) -> int:
    model, meta = load_checkpoint(_checkpoint_path(args))
    seq, profile = load_sequence(args.input)
    if profile is None:
        raise CheartError(f"{args.input} has no condition block; completion needs one")
    period = float(meta.get("frame_period_s", DEFAULT_FRAME_PERIOD_S))
    out = complete_sequence(model, seq.frames[0], profile, mode=args.mode, seed=args.seed,
                            frame_period_s=period)
    save_sequence(out, profile, args.out)
    _write_phenotype_report([out], Path(args.out) / "phenotypes.json")
    print(f"completed {out.t_frames} frames to {args.out}")
    return 0


def _cmd_generate(args) -> int:
    model, meta = load_checkpoint(_checkpoint_path(args))
    profile = _profile_from_args(args)
    period = float(meta.get("frame_period_s", DEFAULT_FRAME_PERIOD_S))
    seqs = generate_sequences(model, profile, args.n, seed=args.seed, frame_period_s=period)
    out = Path(args.out)
    for i, seq in enumerate(seqs):
        save_sequence(seq, profile, out / f"sample_{i:03d}")
    _write_phenotype_report(seqs, out / "phenotypes.json")
    print(f"generated {args.n} sequences to {out}")
    return 0


def _cmd_evaluate(args) -> int:
    model, meta = load_checkpoint(_checkpoint_path(args))
    dataset = load_dataset(args.data)
    records = dataset.split(args.split)
    period = float(meta.get("frame_period_s", DEFAULT_FRAME_PERIOD_S))
    report: dict = {"task": args.task, "split": args.split}
    if args.task == "completion":
        report["model"] = evaluate_completion(make_completer(model, frame_period_s=period), records)
        if args.pca_k is not None:
            pca = pca_fit(dataset.split("train"), args.pca_k)
            report["pca"] = evaluate_completion(make_pca_completer(pca), records)
    else:
        report["model"] = evaluate_generation(
            make_generator(model, frame_period_s=period), records, n=args.samples, seed=args.seed
        )
    text = json.dumps(report, indent=2, sort_keys=True, default=float)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote report to {args.out}")
    else:
        print(text)
    return 0


def _cmd_sweep(args) -> int:
    model, meta = load_checkpoint(_checkpoint_path(args))
    period = float(meta.get("frame_period_s", DEFAULT_FRAME_PERIOD_S))
    cast = {"age": int, "gender": str}.get(args.factor, float)
    values = [cast(v.strip()) for v in args.values.split(",") if v.strip()]
    result = condition_sweep(model, _profile_from_args(args), args.factor, values, n=args.n,
                             seed=args.seed, fix_latent=not args.free_latent,
                             frame_period_s=period)
    report = {
        "factor": result.factor,
        "values": result.values,
        "n": result.n,
        "mean": result.mean,
        "ci_half": result.ci_half,
        "defined_counts": result.defined_counts(),
    }
    text = json.dumps(report, indent=2, sort_keys=True, default=float)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"wrote sweep to {args.out}")
    else:
        print(text)
    return 0


def _cmd_export_latents(args) -> int:
    model, _ = load_checkpoint(_checkpoint_path(args))
    dataset = load_dataset(args.data)
    records = dataset.split(args.split)
    if not records:
        raise CheartError(f"split {args.split!r} of {args.data} is empty")
    items = [(r.subject_id, r.sequence, r.profile) for r in records]
    header, rows = export_latent_trajectories(model, items, projector=args.projector)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    from .server import serve

    serve(_checkpoint_path(args), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cheart",
                                     description="4-D cardiac anatomy generation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-phantoms", help="generate a synthetic dataset")
    p.add_argument("-n", "--subjects", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, nargs=3, default=[32, 32, 16], metavar=("X", "Y", "Z"))
    p.add_argument("--frames", type=int, default=8)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_make_phantoms)

    p = sub.add_parser("train", help="train the generative model on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("-o", "--out", required=True, help="checkpoint output path")
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--patience", type=int, default=25)
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--beta", type=float, default=0.001)
    p.add_argument("--beta-warmup", type=int, default=0, metavar="N",
                   help="ramp the KL weight linearly over the first N epochs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lr-schedule", choices=LR_SCHEDULES, default="constant")
    p.add_argument("--channels", type=int, nargs=4, metavar=("C1", "C2", "C3", "C4"),
                   help="conv stage widths (default 16 32 64 128)")
    p.add_argument("--history", help="write per-epoch JSONL here")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("complete", help="complete a cycle from a subject's first frame")
    _add_checkpoint_flag(p)
    p.add_argument("--input", required=True, help="subject directory with meta.json")
    p.add_argument("--mode", choices=["posterior_mean", "sample"], default="posterior_mean")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("generate", help="draw condition-matched sequences")
    _add_checkpoint_flag(p)
    _add_condition_flags(p)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("evaluate", help="score the model against a dataset split")
    _add_checkpoint_flag(p)
    p.add_argument("--data", required=True)
    p.add_argument("--task", choices=["completion", "generation"], required=True)
    p.add_argument("--split", default="test")
    p.add_argument("--samples", type=int, default=20, help="samples per subject (generation)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pca-k", type=int, help="also report a linear baseline with k components")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="vary one condition, holding the others fixed")
    _add_checkpoint_flag(p)
    _add_condition_flags(p)
    p.add_argument("--factor", required=True, choices=["age", "gender", "weight", "height", "sbp"])
    p.add_argument("--values", required=True, help="comma-separated factor values")
    p.add_argument("-n", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--free-latent", action="store_true",
                   help="redraw latents per value instead of reusing one set")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("export-latents", help="write per-frame latent codes as CSV")
    _add_checkpoint_flag(p)
    p.add_argument("--data", required=True)
    p.add_argument("--split", default="test")
    p.add_argument("--projector", choices=["none", "pca2d"], default="none")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_export_latents)

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_checkpoint_flag(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CheartError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
