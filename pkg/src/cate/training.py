"""Supervised training on gold trees: per-tree SGD with L2 on the
weight matrices, shuffling, early stopping on validation loss, and a
best-epoch checkpoint."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingTable
from .errors import (
    EmptyInputError,
    EmptyTrainSplitError,
    NonFiniteLossError,
)
from .rnn import ModelParams, forward_gold_tree, gradients
from .trees import (
    SPLIT_TRAIN,
    SPLIT_VALIDATION,
    BranchingMode,
    ParseTree,
    Treebank,
)


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 100
    learning_rate: float = 0.05
    l2: float = 1e-4
    seed: int = 0
    shuffle: bool = True
    patience: int = 10
    dim: int = 25

    def __post_init__(self):
        if self.epochs < 1:
            raise EmptyInputError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise EmptyInputError("learning_rate must be positive")


@dataclass
class TrainingReport:
    train_loss: list[float] = field(default_factory=list)
    validation_loss: list[float] = field(default_factory=list)
    validation_accuracy: list[float] = field(default_factory=list)
    best_epoch: int = 0
    wall_time_s: float = 0.0


def init_params(dim: int, seed: int, table: EmbeddingTable,
                vocabulary, branching: BranchingMode,
                embedding_variant: str = "random") -> ModelParams:
    """Uniform +/- 1/sqrt(fan-in) for the weight matrices, zero biases."""
    rng = np.random.default_rng(seed)
    r_w = 1.0 / np.sqrt(2 * dim)
    r_ws = 1.0 / np.sqrt(dim)
    from .trees import NUM_LABELS
    return ModelParams(
        W=rng.uniform(-r_w, r_w, size=(dim, 2 * dim)),
        b=np.zeros(dim),
        Ws=rng.uniform(-r_ws, r_ws, size=(NUM_LABELS, dim)),
        bs=np.zeros(NUM_LABELS),
        embedding=table,
        dim=dim,
        branching=branching,
        vocabulary=tuple(vocabulary),
        embedding_variant=embedding_variant,
    )


def mean_node_loss(params: ModelParams, trees: Sequence[ParseTree]) -> float:
    """Mean per-node cross-entropy over all internal nodes."""
    total, count = 0.0, 0
    for tree in trees:
        annotated = forward_gold_tree(params, tree)
        for node in annotated.internal_nodes():
            total -= float(np.log(node.scores.probs[node.label.id]))
            count += 1
    return total / count if count else 0.0


def node_accuracy(params: ModelParams, trees: Sequence[ParseTree]) -> float:
    """Fraction of internal nodes whose predicted label equals gold,
    following gold structure."""
    if not trees:
        raise EmptyInputError("no trees to score")
    correct, count = 0, 0
    for tree in trees:
        annotated = forward_gold_tree(params, tree)
        for node in annotated.internal_nodes():
            correct += int(node.scores.predicted.id == node.label.id)
            count += 1
    return correct / count if count else 0.0


def train(treebank: Treebank, config: TrainingConfig,
          table: EmbeddingTable,
          branching: BranchingMode = BranchingMode.LEFT,
          embedding_variant: str = "random"
          ) -> tuple[ModelParams, TrainingReport]:
    """Per-tree SGD over the train split; returns the checkpoint from
    the epoch with the lowest validation loss.

    Deterministic in (treebank, config, table): shuffling uses its own
    seeded RNG and updates are applied in iteration order.
    """
    train_trees = treebank.split(SPLIT_TRAIN)
    if not train_trees:
        raise EmptyTrainSplitError("train split is empty")
    val_trees = treebank.split(SPLIT_VALIDATION)

    params = init_params(config.dim, config.seed, table,
                         treebank.vocabulary, branching,
                         embedding_variant=embedding_variant)
    report = TrainingReport()
    started = time.perf_counter()
    shuffler = random.Random(config.seed)
    order = list(range(len(train_trees)))

    best_params = params.copy()
    best_val = float("inf")
    epochs_since_best = 0

    for epoch in range(config.epochs):
        if config.shuffle:
            shuffler.shuffle(order)
        table.unfreeze()
        epoch_loss = 0.0
        for idx in order:
            loss, grads = gradients(params, train_trees[idx])
            epoch_loss += loss
            lr = config.learning_rate
            params.W -= lr * (grads.W + config.l2 * params.W)
            params.b -= lr * grads.b
            params.Ws -= lr * (grads.Ws + config.l2 * params.Ws)
            params.bs -= lr * grads.bs
            for word, grad in grads.embeddings.items():
                params.embedding.vectors[word] -= lr * grad
        table.freeze()

        if not np.isfinite(epoch_loss):
            raise NonFiniteLossError(
                f"loss diverged at epoch {epoch}; lower the learning rate")

        val_loss = (mean_node_loss(params, val_trees) if val_trees
                    else mean_node_loss(params, train_trees))
        val_acc = (node_accuracy(params, val_trees) if val_trees
                   else node_accuracy(params, train_trees))
        report.train_loss.append(epoch_loss / len(train_trees))
        report.validation_loss.append(val_loss)
        report.validation_accuracy.append(val_acc)

        if val_loss < best_val:
            best_val = val_loss
            best_params = params.copy()
            report.best_epoch = epoch
            epochs_since_best = 0
        else:
            epochs_since_best += 1
            if epochs_since_best >= config.patience:
                break

    report.wall_time_s = time.perf_counter() - started
    best_params.embedding.freeze()
    return best_params, report
