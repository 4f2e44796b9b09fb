"""Command-line entry point chaining all pipeline stages.

Exit codes: 0 success, 1 domain errors (the message names the failing
error class), 2 usage/configuration errors. Flag values override config-
file values, which override defaults; every run echoes its resolved
configuration and seed. All outputs are byte-deterministic given identical
inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from urllib.parse import urlparse

import numpy as np

from . import __version__
from .align import align_all
from .errors import EegnextError, MissingTensor
from .ingest.fetch import fetch_file
from .ingest.manifest import load_manifest
from .ingest.pipeline import ingest_manifest
from .ingest.trialset import read_trialset, write_trialset
from .nn.archive import read_archive, write_archive
from .nn.fixture import read_fixture
from .nn.network import (
    build_network,
    forward,
    load_weights,
    param_report,
)
from .plot import plot_scalogram, plot_wavelet
from .train.adamw import TrainConfig
from .train.head import extract_features, train_head
from .train.pipeline import evaluate_trials
from .train.metrics import predict
from .wavelet.families import WaveletSpec
from .wavelet.scales import MODE_DYADIC, MODE_LINEAR, make_scales
from .wavelet.store import read_scalogram_set, write_scalogram_set
from .wavelet.transform import scalogram_batch

_WAVELET_KEYS = {
    "wavelet": "cmor", "B": 1.5, "C": 1.0, "m": 1,
    "scale_mode": "linear", "max_scale": 50.0, "voices": 8,
}
_TRAIN_KEYS = {
    "lr": 1e-4, "wd": 5e-4, "epochs": 10, "batch": 128,
    "folds": 5, "train_scope": "head",
}
_COMMON_KEYS = {"seed": 0, "threads": 1}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=str, default=None,
                     help="JSON file whose keys mirror the flag names")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--threads", type=int, default=None)


def _add_wavelet(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--wavelet", choices=["cmor", "cgau", "shan", "fbsp"], default=None)
    sub.add_argument("--B", type=float, default=None)
    sub.add_argument("--C", type=float, default=None)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--scale-mode", dest="scale_mode",
                     choices=["linear", "dyadic"], default=None)
    sub.add_argument("--max-scale", dest="max_scale", type=float, default=None)
    sub.add_argument("--voices", type=int, default=None)
    sub.add_argument("--power", action="store_true", default=None)


def _add_train(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--lr", type=float, default=None)
    sub.add_argument("--wd", type=float, default=None)
    sub.add_argument("--epochs", type=int, default=None)
    sub.add_argument("--batch", type=int, default=None)
    sub.add_argument("--folds", type=int, default=None)
    sub.add_argument("--train-scope", dest="train_scope", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegnext",
        description="EEG scalogram classification pipeline",
    )
    parser.add_argument("--version", action="version", version=f"eegnext {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fetch", help="download a file with sha256 verification")
    p.add_argument("--url", required=True)
    p.add_argument("--sha256", required=True)
    p.add_argument("--out", default=None,
                   help="destination path (default: EEGNEXT_CACHE dir)")
    _add_common(p)

    p = subs.add_parser("ingest", help="EDF files + label sidecars -> EEGX trials")
    p.add_argument("--manifest", required=True)
    p.add_argument("--window-s", dest="window_s", type=float, default=None)
    p.add_argument("--channels", default=None,
                   help="comma-separated channel labels (default: all)")
    p.add_argument("--out", required=True)
    _add_common(p)

    p = subs.add_parser("align", help="per-subject Euclidean-space whitening")
    p.add_argument("--trials", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--shrinkage", type=float, default=None)
    p.add_argument("--center", action="store_true", default=None)
    p.add_argument("--whitener-out", dest="whitener_out", default=None)
    _add_common(p)

    p = subs.add_parser("scalogram", help="trials -> EEGS scalogram tensors")
    p.add_argument("--trials", required=True)
    p.add_argument("--out", required=True)
    _add_wavelet(p)
    _add_common(p)

    p = subs.add_parser("infer", help="forward pass over scalograms or a fixture")
    p.add_argument("--weights", required=True)
    p.add_argument("--scalograms", default=None)
    p.add_argument("--fixture", default=None)
    p.add_argument("--n-classes", dest="n_classes", type=int, default=None)
    p.add_argument("--out", default=None)
    _add_common(p)

    p = subs.add_parser("features", help="frozen-backbone pooled features")
    p.add_argument("--scalograms", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = subs.add_parser("train-head", help="train the linear head on features")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    _add_train(p)
    _add_common(p)

    p = subs.add_parser("eval", help="cross-subject k-fold evaluation")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--trials", default=None)
    src.add_argument("--manifest", default=None)
    p.add_argument("--window-s", dest="window_s", type=float, default=None)
    p.add_argument("--channels", default=None)
    p.add_argument("--shrinkage", type=float, default=None)
    p.add_argument("--center", action="store_true", default=None)
    p.add_argument("--weights", default=None)
    p.add_argument("--out", required=True)
    _add_wavelet(p)
    _add_train(p)
    _add_common(p)

    p = subs.add_parser("plot-scalogram", help="render one scalogram channel as PPM")
    p.add_argument("--scalograms", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--channel", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = subs.add_parser("plot-wavelet", help="render wavelet traces and spectrum as PPM")
    p.add_argument("--scale", type=float, default=10.0)
    p.add_argument("--fs", type=float, default=100.0)
    p.add_argument("--out", required=True)
    _add_wavelet(p)
    _add_common(p)

    p = subs.add_parser("inspect-weights", help="list archive tensors")
    p.add_argument("--weights", required=True)
    _add_common(p)

    p = subs.add_parser("param-report", help="per-row parameter accounting")
    p.add_argument("--n-channels", dest="n_channels", type=int, default=None)
    p.add_argument("--n-scales", dest="n_scales", type=int, default=None)
    p.add_argument("--n-samples", dest="n_samples", type=int, default=None)
    p.add_argument("--n-classes", dest="n_classes", type=int, default=None)
    _add_common(p)

    return parser


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge defaults, config-file values, and explicit flags (in that order)."""
    resolved = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        overlay = json.loads(Path(config_path).read_text())
        unknown = set(overlay) - set(resolved)
        if unknown:
            raise ValueError(
                f"config file {config_path} has unknown keys: {sorted(unknown)}"
            )
        resolved.update(overlay)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    return resolved


def _echo_header(command: str, resolved: dict) -> None:
    print(f"eegnext {__version__} :: {command}")
    printable = {k: v for k, v in sorted(resolved.items())}
    print(f"config: {json.dumps(printable)}")
    print(f"seed: {resolved.get('seed', 0)}")


def _wavelet_objects(cfg: dict):
    spec = WaveletSpec(
        family=cfg["wavelet"], B=cfg["B"], C=cfg["C"], m=cfg["m"]
    )
    mode = MODE_LINEAR if cfg["scale_mode"] == "linear" else MODE_DYADIC
    scales = make_scales(mode, max_a=cfg["max_scale"], voices=cfg["voices"])
    return spec, scales


def _train_config(cfg: dict) -> TrainConfig:
    if cfg["train_scope"] != "head":
        raise ValueError(
            f"--train-scope {cfg['train_scope']!r} unsupported; only 'head' "
            f"is implemented (the backbone stays frozen)"
        )
    return TrainConfig(
        lr=cfg["lr"], weight_decay=cfg["wd"], epochs=cfg["epochs"],
        batch_size=cfg["batch"], seed=cfg["seed"],
    )


def _defaults_for(command: str) -> dict:
    d = dict(_COMMON_KEYS)
    if command in ("scalogram", "eval", "plot-wavelet"):
        d.update(_WAVELET_KEYS)
        d["power"] = False
    if command in ("train-head", "eval"):
        d.update(_TRAIN_KEYS)
    if command in ("align", "eval"):
        d.update({"shrinkage": 0.0, "center": False})
    if command in ("ingest", "eval"):
        d.update({"window_s": 30.0, "channels": None})
    return d


# --- stage runners ------------------------------------------------------------

def _run_fetch(args, cfg) -> int:
    if args.out:
        dest = Path(args.out)
    else:
        cache = Path(os.environ.get("EEGNEXT_CACHE", Path.home() / ".cache" / "eegnext"))
        name = Path(urlparse(args.url).path).name or "download"
        dest = cache / name
    path = fetch_file(args.url, args.sha256, dest)
    print(f"fetched: {path}")
    return 0


def _run_ingest(args, cfg) -> int:
    manifest = load_manifest(args.manifest)
    channels = cfg["channels"].split(",") if cfg["channels"] else None
    trials = ingest_manifest(manifest, cfg["window_s"], channels=channels)
    write_trialset(trials, args.out, n_classes=manifest.n_classes)
    print(f"ingested {len(trials)} trials from {len(manifest.entries)} files -> {args.out}")
    return 0


def _run_align(args, cfg) -> int:
    trials, n_classes = read_trialset(args.trials)
    aligned, whiteners = align_all(
        trials, shrinkage=cfg["shrinkage"], center=cfg["center"]
    )
    write_trialset(aligned, args.out, n_classes=n_classes)
    if args.whitener_out:
        tensors = {
            f"whitener/{sid}": wh.w.astype(np.float32)
            for sid, wh in sorted(whiteners.items())
        }
        write_archive(tensors, args.whitener_out)
        print(f"whiteners -> {args.whitener_out}")
    print(f"aligned {len(aligned)} trials over {len(whiteners)} subjects -> {args.out}")
    return 0


def _run_scalogram(args, cfg) -> int:
    spec, scales = _wavelet_objects(cfg)
    trials, _ = read_trialset(args.trials)
    items = scalogram_batch(
        trials, scales, spec, power=cfg["power"], threads=cfg["threads"]
    )
    write_scalogram_set(items, args.out)
    print(f"{len(items)} scalograms ({items[0].data.shape if items else 'empty'}) -> {args.out}")
    return 0


def _run_infer(args, cfg) -> int:
    archive = read_archive(args.weights)
    if args.fixture:
        fixture = read_fixture(args.fixture)
        x = fixture.tensors["input"]
        l = archive["head.w"].shape[0] if "head.w" in archive else 1000
        net = build_network(3, x.shape[2], x.shape[3], l,
                            seed=cfg["seed"], include_stem=False)
        load_weights(net, archive, strict=False)
        _, taps = forward(net, x, want_taps=True)
        got = taps["features"]
        ref = fixture.tensors["features"]
        max_err = float(np.max(np.abs(got.astype(np.float64) - ref.astype(np.float64))))
        print(f"fixture seed: {fixture.seed}")
        print(f"features max |delta|: {max_err:.3e}")
        for name, tensor in sorted(fixture.tensors.items()):
            if name.startswith("checksum/"):
                tap = name.split("/", 1)[1]
                if tap in taps:
                    ours = float(np.mean(np.abs(taps[tap], dtype=np.float64)))
                    print(f"{name}: ref {float(tensor):.6e} ours {ours:.6e}")
        if args.out:
            Path(args.out).write_text(json.dumps(
                {"features_max_abs_delta": max_err, "tolerance": 1e-3,
                 "agrees": max_err <= 1e-3}, indent=2) + "\n")
        if max_err > 1e-3:
            raise MissingTensor(
                f"fixture replay disagrees: max |delta| {max_err:.3e} > 1e-3"
            )
        return 0

    if not args.scalograms:
        raise ValueError("infer needs --scalograms or --fixture")
    items = read_scalogram_set(args.scalograms)
    c, s, t = items[0].data.shape
    l = args.n_classes or (archive["head.w"].shape[0] if "head.w" in archive else None)
    if l is None:
        raise ValueError("cannot infer class count; pass --n-classes")
    net = build_network(c, s, t, l, seed=cfg["seed"])
    load_weights(net, archive, strict=False)
    features = extract_features(net, items, batch_size=128)
    logits = features @ net.params["head.w"].T.astype(np.float64) \
        + net.params["head.b"].astype(np.float64)
    preds = predict(logits)
    doc = {
        "n": len(items),
        "predictions": preds.tolist(),
        "labels": [sg.label for sg in items],
        "logits": np.asarray(logits, dtype=float).round(6).tolist(),
    }
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    return 0


def _run_features(args, cfg) -> int:
    items = read_scalogram_set(args.scalograms)
    c, s, t = items[0].data.shape
    net = build_network(c, s, t, 2, seed=cfg["seed"])
    if args.weights:
        load_weights(net, read_archive(args.weights), strict=False)
    feats = extract_features(net, items, batch_size=128, threads=cfg["threads"])
    labels = np.array([sg.label for sg in items], dtype=np.float32)
    write_archive({"features": feats, "labels": labels}, args.out)
    sidecar = {"subjects": [sg.subject_id for sg in items]}
    Path(str(args.out) + ".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    print(f"{feats.shape[0]} x {feats.shape[1]} features -> {args.out}")
    return 0


def _run_train_head(args, cfg) -> int:
    archive = read_archive(args.features)
    feats = archive["features"]
    labels = archive["labels"].astype(np.int64)
    tc = _train_config(cfg)
    w, b, history = train_head(feats, labels, tc)
    write_archive({"head.w": w, "head.b": b}, args.out)
    print(f"loss history: {[round(h, 6) for h in history]}")
    print(f"head -> {args.out}")
    return 0


def _run_eval(args, cfg) -> int:
    spec, scales = _wavelet_objects(cfg)
    tc = _train_config(cfg)
    if args.manifest:
        manifest = load_manifest(args.manifest)
        channels = cfg["channels"].split(",") if cfg["channels"] else None
        trials = ingest_manifest(manifest, cfg["window_s"], channels=channels)
        n_classes = manifest.n_classes
    else:
        trials, n_classes = read_trialset(args.trials)
    report = evaluate_trials(
        trials, tc, spec, scales, n_classes,
        shrinkage=cfg["shrinkage"], center=cfg["center"],
        weights_path=args.weights, k=cfg["folds"],
        power=cfg["power"], threads=cfg["threads"],
    )
    Path(args.out).write_text(report.to_json() + "\n")
    for fold in report.folds:
        print(f"fold {fold.fold}: accuracy {fold.accuracy:.1f}% "
              f"auc {fold.roc_auc:.3f} test={fold.test_subjects}")
    print(f"mean accuracy: {report.mean_accuracy:.1f} +- {report.std_accuracy:.1f}")
    print(f"mean auc: {report.mean_auc:.3f} +- {report.std_auc:.3f}")
    print(f"report -> {args.out}")
    return 0


def _run_plot_scalogram(args, cfg) -> int:
    items = read_scalogram_set(args.scalograms)
    if not 0 <= args.index < len(items):
        raise ValueError(f"--index {args.index} out of range for {len(items)} items")
    plot_scalogram(items[args.index], args.channel, args.out)
    print(f"plot -> {args.out}")
    return 0


def _run_plot_wavelet(args, cfg) -> int:
    spec, _ = _wavelet_objects(cfg)
    plot_wavelet(spec, args.scale, args.fs, args.out)
    print(f"plot -> {args.out}")
    return 0


def _run_inspect_weights(args, cfg) -> int:
    tensors = read_archive(args.weights)
    total = 0
    for name, arr in tensors.items():
        count = int(np.prod(arr.shape)) if arr.ndim else 1
        total += count
        print(f"{name}  {tuple(arr.shape)}  {count}")
    print(f"total: {len(tensors)} tensors, {total} parameters")
    return 0


def _run_param_report(args, cfg) -> int:
    c = args.n_channels or 1
    s = args.n_scales or 50
    t = args.n_samples or 3000
    l = args.n_classes or 6
    net = build_network(c, s, t, l, seed=cfg["seed"])
    for row in param_report(net):
        print(f"{row['row']:<12} {row['count']:>10}")
    return 0


_RUNNERS = {
    "fetch": _run_fetch,
    "ingest": _run_ingest,
    "align": _run_align,
    "scalogram": _run_scalogram,
    "infer": _run_infer,
    "features": _run_features,
    "train-head": _run_train_head,
    "eval": _run_eval,
    "plot-scalogram": _run_plot_scalogram,
    "plot-wavelet": _run_plot_wavelet,
    "inspect-weights": _run_inspect_weights,
    "param-report": _run_param_report,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    # Configuration resolution: bad flag/config values are usage errors.
    try:
        cfg = _resolve(args, _defaults_for(args.command))
        if args.command in ("scalogram", "eval", "plot-wavelet"):
            _wavelet_objects(cfg)
        if args.command in ("train-head", "eval"):
            _train_config(cfg)
    except (EegnextError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    _echo_header(args.command, cfg)
    try:
        return _RUNNERS[args.command](args, cfg)
    except EegnextError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
