"""Command-line surface: generate, train, calibrate, parse, eval, serve.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .calibration import fit_temperature
from .errors import CateError
from .evaluation import evaluate_corpus
from .inference import ParseConfig, parse_tokens, tree_to_json
from .rnn import AnnotatedNode, load_checkpoint, save_checkpoint
from .training import TrainingConfig, train
from .embeddings import init_random_table, load_pretrained
from .trees import (
    BranchingMode,
    generate_synthetic_corpus,
    parse_treebank_file,
    tokenize,
    write_treebank_file,
)


def render_ascii(node: AnnotatedNode, indent: int = 0) -> str:
    """Indented one-node-per-line rendering for terminals."""
    pad = "  " * indent
    if node.is_leaf:
        return f"{pad}(W {node.token.text}) [{node.span[0]},{node.span[1]})"
    prob = node.scores.probs.max() if node.scores is not None else float("nan")
    lines = [f"{pad}{node.label.name} [{node.span[0]},{node.span[1]}) "
             f"p={prob:.4f}"]
    lines.append(render_ascii(node.left, indent + 1))
    lines.append(render_ascii(node.right, indent + 1))
    return "\n".join(lines)


def _branching(value: str) -> BranchingMode:
    return BranchingMode(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cate",
        description="causality tree extraction: corpus generation, "
                    "training, calibration, parsing, evaluation, serving")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic treebank file")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--mode", type=_branching, default=BranchingMode.LEFT,
                   choices=list(BranchingMode))
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train a model on a treebank file")
    p.add_argument("--treebank", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, default=25)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patience", type=int, default=300)
    p.add_argument("--branching", type=_branching,
                   default=BranchingMode.LEFT, choices=list(BranchingMode))
    p.add_argument("--embedding-file", default=None,
                   help="pretrained vector file; default is a random "
                        "trainable table")
    p.add_argument("--fine-tune", action="store_true",
                   help="fine-tune pretrained vectors during training")
    p.add_argument("--variant", default=None,
                   help="embedding variant id stored in the checkpoint")

    p = sub.add_parser("calibrate",
                       help="fit temperature on the validation split")
    p.add_argument("--model", required=True)
    p.add_argument("--treebank", required=True)
    p.add_argument("--out", default=None,
                   help="output checkpoint (default: update in place)")

    p = sub.add_parser("parse", help="parse one sentence")
    p.add_argument("--model", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--beam", type=int, default=1)
    p.add_argument("--temperature", action="store_true",
                   help="use the fitted temperature")
    p.add_argument("--format", choices=["ascii", "json"], default="ascii")

    p = sub.add_parser("eval", help="evaluate a model on a treebank split")
    p.add_argument("--model", required=True)
    p.add_argument("--treebank", required=True)
    p.add_argument("--split", choices=["train", "validation", "test"],
                   default="test")
    p.add_argument("--beam", type=int, default=1)
    p.add_argument("--temperature", action="store_true")
    p.add_argument("--format", choices=["table", "json"], default="table")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--model-dir",
                   default=os.environ.get("CATE_MODEL_DIR", "models"))
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("CATE_PORT", "8000")))
    p.add_argument("--host", default="127.0.0.1")

    return parser


def run(args: argparse.Namespace) -> int:
    if args.command == "generate":
        treebank = generate_synthetic_corpus(args.seed, args.n, args.mode)
        write_treebank_file(treebank, args.out)
        print(f"wrote {len(treebank.trees)} trees to {args.out}")
        return 0

    if args.command == "train":
        treebank = parse_treebank_file(args.treebank, mode=args.branching)
        if args.embedding_file:
            table = load_pretrained(args.embedding_file,
                                    fine_tune=args.fine_tune)
            variant = args.variant or Path(args.embedding_file).stem
        else:
            table = init_random_table(args.dim, args.seed)
            variant = args.variant or "random"
        if table.dim != args.dim:
            print(f"note: using embedding dim {table.dim} from file",
                  file=sys.stderr)
        config = TrainingConfig(epochs=args.epochs, learning_rate=args.lr,
                                l2=args.l2, seed=args.seed,
                                patience=args.patience, dim=table.dim)
        params, report = train(treebank, config, table,
                               branching=args.branching,
                               embedding_variant=variant)
        save_checkpoint(params, args.out)
        print(f"best epoch {report.best_epoch}: "
              f"val loss {report.validation_loss[report.best_epoch]:.4f}, "
              f"val node accuracy "
              f"{report.validation_accuracy[report.best_epoch]:.4f}")
        print(f"wrote checkpoint to {args.out}")
        return 0

    if args.command == "calibrate":
        params = load_checkpoint(args.model)
        treebank = parse_treebank_file(args.treebank, mode=params.branching)
        validation = treebank.split("validation") or treebank.split("train")
        calibration = fit_temperature(params, validation)
        params.temperature = calibration.T
        save_checkpoint(params, args.out or args.model)
        print(f"fitted T={calibration.T:.4f} on {calibration.fitted_on} "
              f"nodes (NLL {calibration.nll_before:.4f} -> "
              f"{calibration.nll_after:.4f})")
        return 0

    if args.command == "parse":
        params = load_checkpoint(args.model)
        tokens = tokenize(args.sentence)
        config = ParseConfig(beam_width=args.beam,
                             use_temperature=args.temperature,
                             branching=params.branching,
                             embedding_variant=params.embedding_variant)
        root = parse_tokens(params, None, tokens, config)
        if args.format == "json":
            print(json.dumps(tree_to_json(root)))
        else:
            print(render_ascii(root))
            print(f"cum_logprob: {root.cum_logprob:.4f}")
        return 0

    if args.command == "eval":
        params = load_checkpoint(args.model)
        treebank = parse_treebank_file(args.treebank, mode=params.branching)
        split = treebank.split(args.split)
        config = ParseConfig(beam_width=args.beam,
                             use_temperature=args.temperature,
                             branching=params.branching,
                             embedding_variant=params.embedding_variant)
        report = evaluate_corpus(params, None, split, config)
        print(report.to_json() if args.format == "json"
              else report.to_table())
        return 0

    if args.command == "serve":
        import uvicorn

        from .service import create_app
        app = create_app(args.model_dir)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map onto our convention
        return 0 if exc.code == 0 else 1
    try:
        return run(args)
    except (CateError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
