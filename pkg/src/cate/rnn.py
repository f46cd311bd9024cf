"""Recursive neural network core: binary composition, 27-way node
classification, forward pass over gold trees, exact gradients via
backpropagation through structure, and the JSON checkpoint format.

All math is float64; the gradient check against finite differences is
the module's canonical correctness oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Union

import numpy as np

from .embeddings import EmbeddingMode, EmbeddingTable, lookup
from .errors import DimensionMismatchError, UnlabeledNodeError
from .trees import (
    NUM_LABELS,
    BranchingMode,
    ParseTree,
    SegmentLabel,
    Token,
    vocabulary_from_names,
)

FORMAT_VERSION = "cate-checkpoint-1"


@dataclass
class ModelParams:
    W: np.ndarray          # (d, 2d) composition
    b: np.ndarray          # (d,)    composition bias
    Ws: np.ndarray         # (27, d) classifier
    bs: np.ndarray         # (27,)   classifier bias
    embedding: EmbeddingTable
    dim: int
    branching: BranchingMode
    vocabulary: tuple[SegmentLabel, ...]
    version: str = FORMAT_VERSION
    embedding_variant: str = "random"
    temperature: Optional[float] = None  # fitted T; None means 1.0

    def __post_init__(self):
        d = self.dim
        if self.W.shape != (d, 2 * d) or self.b.shape != (d,):
            raise DimensionMismatchError(
                f"composition shapes inconsistent with dim={d}")
        if self.Ws.shape != (NUM_LABELS, d) or self.bs.shape != (NUM_LABELS,):
            raise DimensionMismatchError(
                f"classifier shapes inconsistent with dim={d}")
        if len(self.vocabulary) != NUM_LABELS:
            raise DimensionMismatchError(
                f"vocabulary must have {NUM_LABELS} labels")

    def copy(self) -> "ModelParams":
        return ModelParams(
            W=self.W.copy(), b=self.b.copy(),
            Ws=self.Ws.copy(), bs=self.bs.copy(),
            embedding=self.embedding.copy(),
            dim=self.dim, branching=self.branching,
            vocabulary=self.vocabulary, version=self.version,
            embedding_variant=self.embedding_variant,
            temperature=self.temperature,
        )


@dataclass(frozen=True)
class ClassScores:
    logits: np.ndarray   # (27,)
    probs: np.ndarray    # (27,), sums to 1
    predicted: SegmentLabel


@dataclass
class AnnotatedNode:
    """ParseTree node carrying the hidden vector and, on internal
    nodes, classifier scores and the log-prob of the predicted class."""

    span: tuple[int, int]
    hidden: np.ndarray
    token: Optional[Token] = None
    label: Optional[SegmentLabel] = None
    left: Optional["AnnotatedNode"] = None
    right: Optional["AnnotatedNode"] = None
    scores: Optional[ClassScores] = None
    merge_logprob: Optional[float] = None
    cum_logprob: Optional[float] = None  # set on inference roots

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> Iterator["AnnotatedNode"]:
        if self.is_leaf:
            yield self
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def internal_nodes(self) -> Iterator["AnnotatedNode"]:
        if not self.is_leaf:
            yield self
            yield from self.left.internal_nodes()
            yield from self.right.internal_nodes()

    def to_parse_tree(self) -> ParseTree:
        if self.is_leaf:
            return ParseTree.leaf(self.token)
        return ParseTree.internal(self.label, self.left.to_parse_tree(),
                                  self.right.to_parse_tree(),
                                  score=self.merge_logprob)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits)
    exps = np.exp(shifted)
    return exps / np.sum(exps)


def compose(params: ModelParams, left: np.ndarray,
            right: np.ndarray) -> np.ndarray:
    """tanh(W . [left; right] + b); components bounded in (-1, 1)."""
    if left.shape != (params.dim,) or right.shape != (params.dim,):
        raise DimensionMismatchError(
            f"expected child vectors of dim {params.dim}")
    return np.tanh(params.W @ np.concatenate([left, right]) + params.b)


def classify(params: ModelParams, hidden: np.ndarray) -> ClassScores:
    """Softmax over the 27 labels; argmax ties go to the lowest id."""
    if hidden.shape != (params.dim,):
        raise DimensionMismatchError(
            f"expected hidden vector of dim {params.dim}")
    logits = params.Ws @ hidden + params.bs
    probs = softmax(logits)
    predicted = params.vocabulary[int(np.argmax(probs))]
    return ClassScores(logits=logits, probs=probs, predicted=predicted)


def forward_gold_tree(params: ModelParams, gold: ParseTree) -> AnnotatedNode:
    """Annotate a gold tree bottom-up; only internal (merge) nodes are
    classified."""
    if gold.is_leaf:
        return AnnotatedNode(span=gold.span, token=gold.token,
                             hidden=lookup(params.embedding, gold.token))
    left = forward_gold_tree(params, gold.left)
    right = forward_gold_tree(params, gold.right)
    hidden = compose(params, left.hidden, right.hidden)
    scores = classify(params, hidden)
    return AnnotatedNode(span=gold.span, label=gold.label, left=left,
                         right=right, hidden=hidden, scores=scores)


@dataclass
class Gradients:
    W: np.ndarray
    b: np.ndarray
    Ws: np.ndarray
    bs: np.ndarray
    embeddings: dict[str, np.ndarray] = field(default_factory=dict)


def zero_gradients(params: ModelParams) -> Gradients:
    return Gradients(W=np.zeros_like(params.W), b=np.zeros_like(params.b),
                     Ws=np.zeros_like(params.Ws),
                     bs=np.zeros_like(params.bs))


def tree_loss(params: ModelParams, gold: ParseTree) -> float:
    """Sum of per-merge cross-entropies against gold labels."""
    total = 0.0
    annotated = forward_gold_tree(params, gold)
    for node in annotated.internal_nodes():
        if node.label is None:
            raise UnlabeledNodeError(f"unlabeled internal node at {node.span}")
        total -= float(np.log(node.scores.probs[node.label.id]))
    return total


def gradients(params: ModelParams,
              gold: ParseTree) -> tuple[float, Gradients]:
    """Exact analytic gradients of the summed cross-entropy loss with
    respect to W, b, Ws, bs and (when trainable) leaf embeddings."""
    annotated = forward_gold_tree(params, gold)
    grads = zero_gradients(params)
    loss = 0.0
    d = params.dim
    train_embed = params.embedding.trainable

    def backward(node: AnnotatedNode, delta_from_parent: np.ndarray) -> None:
        nonlocal loss
        if node.is_leaf:
            if train_embed and node.token.text in params.embedding.vectors:
                acc = grads.embeddings.setdefault(node.token.text,
                                                  np.zeros(d))
                acc += delta_from_parent
            return
        if node.label is None:
            raise UnlabeledNodeError(f"unlabeled internal node at {node.span}")
        probs = node.scores.probs
        loss += -float(np.log(probs[node.label.id]))
        dlogits = probs.copy()
        dlogits[node.label.id] -= 1.0
        grads.Ws += np.outer(dlogits, node.hidden)
        grads.bs += dlogits
        dh = params.Ws.T @ dlogits + delta_from_parent
        dz = dh * (1.0 - node.hidden ** 2)
        child_vec = np.concatenate([node.left.hidden, node.right.hidden])
        grads.W += np.outer(dz, child_vec)
        grads.b += dz
        dchildren = params.W.T @ dz
        backward(node.left, dchildren[:d])
        backward(node.right, dchildren[d:])

    backward(annotated, np.zeros(d))
    return loss, grads


# ---------------------------------------------------------------------------
# Checkpoint format (JSON; floats round-trip exactly via repr encoding)


def save_checkpoint(params: ModelParams, path: Union[str, Path]) -> None:
    emb = params.embedding
    payload = {
        "version": params.version,
        "dim": params.dim,
        "branching": params.branching.value,
        "embedding_variant": params.embedding_variant,
        "vocabulary": [lab.name for lab in params.vocabulary],
        "W": params.W.tolist(),
        "b": params.b.tolist(),
        "Ws": params.Ws.tolist(),
        "bs": params.bs.tolist(),
        "embedding": {
            "mode": emb.mode.value,
            "dim": emb.dim,
            "vectors": {w: v.tolist() for w, v in sorted(emb.vectors.items())},
            "unk": emb.unk.tolist(),
            "trainable": emb.trainable,
        },
    }
    if params.temperature is not None:
        payload["temperature"] = params.temperature
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_checkpoint(path: Union[str, Path]) -> ModelParams:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    emb_data = data["embedding"]
    embedding = EmbeddingTable(
        dim=emb_data["dim"],
        mode=EmbeddingMode(emb_data["mode"]),
        vectors={w: np.array(v, dtype=np.float64)
                 for w, v in emb_data["vectors"].items()},
        unk=np.array(emb_data["unk"], dtype=np.float64),
        trainable=emb_data["trainable"],
        frozen=True,
    )
    return ModelParams(
        W=np.array(data["W"], dtype=np.float64),
        b=np.array(data["b"], dtype=np.float64),
        Ws=np.array(data["Ws"], dtype=np.float64),
        bs=np.array(data["bs"], dtype=np.float64),
        embedding=embedding,
        dim=data["dim"],
        branching=BranchingMode(data["branching"]),
        vocabulary=tuple(vocabulary_from_names(data["vocabulary"])),
        version=data["version"],
        embedding_variant=data.get("embedding_variant", "random"),
        temperature=data.get("temperature"),
    )
