#!/usr/bin/env python3
"""Sweep branching direction and beam width on a shared corpus and
print a comparison table of exact match and labeled F1.

    python3 scripts/compare_variants.py --n 100 --epochs 150
"""

from __future__ import annotations

import argparse

from cate.embeddings import init_random_table
from cate.evaluation import evaluate_corpus
from cate.inference import ParseConfig
from cate.training import TrainingConfig, train
from cate.trees import BranchingMode, generate_synthetic_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--dim", type=int, default=25)
    parser.add_argument("--epochs", type=int, default=150)
    parser.add_argument("--widths", type=int, nargs="+",
                        default=[1, 2, 8, 32])
    args = parser.parse_args()

    rows = []
    for branching in (BranchingMode.LEFT, BranchingMode.RIGHT):
        treebank = generate_synthetic_corpus(args.seed, args.n, branching)
        table = init_random_table(args.dim, args.seed)
        config = TrainingConfig(epochs=args.epochs, seed=args.seed,
                                patience=args.epochs, dim=args.dim)
        params, report = train(treebank, config, table, branching=branching)
        test = treebank.split("test") or treebank.split("train")
        for width in args.widths:
            result = evaluate_corpus(params, None, test,
                                     ParseConfig(beam_width=width,
                                                 branching=branching))
            rows.append((branching.value, width, result.exact_match,
                         result.labeled_f1, result.node_accuracy))
        print(f"{branching.value}-branching trained in "
              f"{report.wall_time_s:.1f}s (best epoch {report.best_epoch})")

    print(f"\n{'branching':<10} {'beam':>5} {'exact':>7} "
          f"{'f1':>7} {'node acc':>9}")
    for branching, width, exact, f1, acc in rows:
        print(f"{branching:<10} {width:>5} {exact:>7.3f} "
              f"{f1:>7.3f} {acc:>9.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
