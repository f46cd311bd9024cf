#!/usr/bin/env python3
"""End-to-end demo: generate a synthetic treebank, train, fit the
temperature, evaluate on the held-out test split, and parse one
sentence with greedy and beam decoding.

    python3 scripts/run_pipeline.py --n 100 --epochs 200 --out-dir runs/demo
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from cate.calibration import fit_temperature
from cate.cli import render_ascii
from cate.embeddings import init_random_table
from cate.evaluation import evaluate_corpus
from cate.inference import ParseConfig, parse_tokens, tree_to_json
from cate.rnn import save_checkpoint
from cate.training import TrainingConfig, train
from cate.trees import (
    BranchingMode,
    generate_synthetic_corpus,
    tokenize,
    write_treebank_file,
)

DEMO_SENTENCE = ("If the system detects an error, "
                 "a warning window shall be shown.")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--dim", type=int, default=25)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--lr", type=float, default=0.05)
    parser.add_argument("--beam", type=int, default=8)
    parser.add_argument("--branching", type=BranchingMode,
                        default=BranchingMode.LEFT,
                        choices=list(BranchingMode))
    parser.add_argument("--sentence", default=DEMO_SENTENCE)
    parser.add_argument("--out-dir", default="runs/demo")
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    treebank = generate_synthetic_corpus(args.seed, args.n, args.branching)
    write_treebank_file(treebank, out / "treebank.txt")
    print(f"corpus: {len(treebank.trees)} trees "
          f"({len(treebank.split('train'))} train, "
          f"{len(treebank.split('validation'))} validation, "
          f"{len(treebank.split('test'))} test)")

    table = init_random_table(args.dim, args.seed)
    config = TrainingConfig(epochs=args.epochs, learning_rate=args.lr,
                            seed=args.seed, patience=args.epochs,
                            dim=args.dim)
    params, report = train(treebank, config, table,
                           branching=args.branching)
    print(f"trained {report.best_epoch + 1} best epoch "
          f"(val loss {report.validation_loss[report.best_epoch]:.4f}, "
          f"{report.wall_time_s:.1f}s)")

    validation = treebank.split("validation") or treebank.split("train")
    calibration = fit_temperature(params, validation)
    params.temperature = calibration.T
    print(f"temperature: T={calibration.T:.4f}, "
          f"NLL {calibration.nll_before:.4f} -> {calibration.nll_after:.4f}")
    save_checkpoint(params, out / "model.json")

    test = treebank.split("test") or treebank.split("train")
    parse_config = ParseConfig(beam_width=args.beam, use_temperature=True,
                               branching=args.branching)
    result = evaluate_corpus(params, calibration, test, parse_config)
    print(result.to_table())
    (out / "eval.json").write_text(result.to_json())

    tokens = tokenize(args.sentence)
    for width in (1, args.beam):
        root = parse_tokens(params, calibration, tokens,
                            ParseConfig(beam_width=width,
                                        use_temperature=True,
                                        branching=args.branching))
        print(f"\nbeam width {width} "
              f"(cum_logprob {root.cum_logprob:.4f}):")
        print(render_ascii(root))
        (out / f"parse_beam{width}.json").write_text(
            json.dumps(tree_to_json(root), indent=2))

    print(f"\nartifacts written to {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
