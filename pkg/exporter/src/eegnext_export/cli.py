"""Batch conversion CLI: export checkpoints, emit reference fixtures."""

from __future__ import annotations

import argparse
import json
import sys

import torch

from .export import build_model, export_weights, load_state_dict
from .fixture import emit_fixture
from .mapping import UnmappedTensor


def _model_and_state(args):
    if args.checkpoint:
        state = load_state_dict(args.checkpoint)
    elif args.pretrained:
        from torchvision.models import ConvNeXt_Tiny_Weights, convnext_tiny

        model = convnext_tiny(weights=ConvNeXt_Tiny_Weights.IMAGENET1K_V1)
        state = model.state_dict()
    else:
        torch.manual_seed(args.seed)
        state = build_model().state_dict()
    return state


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegnext-export",
        description="ConvNeXt-tiny checkpoint conversion for the EEG pipeline",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("export", "write an EEGW weight archive"),
        ("fixture", "write an EEGF reference-activation fixture"),
    ):
        p = subs.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--checkpoint", default=None,
                         help="path to a saved state dict")
        src.add_argument("--pretrained", action="store_true",
                         help="download the published pretrained weights")
        p.add_argument("--seed", type=int, default=0,
                       help="init seed (no checkpoint) / fixture input seed")
        p.add_argument("--out", required=True)
    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        state = _model_and_state(args)
        if args.command == "export":
            report = export_weights(state, args.out)
            print(json.dumps(report.to_dict(), indent=2))
        else:
            model = build_model(state)
            tensors = emit_fixture(model, args.seed, args.out)
            print(f"fixture -> {args.out} ({len(tensors)} tensors, "
                  f"input {tuple(tensors['input'].shape)})")
        return 0
    except (UnmappedTensor, OSError, ValueError, RuntimeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
