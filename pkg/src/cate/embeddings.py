"""Token-to-vector mapping: pretrained static vector files, lazily
allocated trainable tables, and precomputed contextual vectors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyFileError,
    MalformedLineError,
)
from .trees import Token


class EmbeddingMode(Enum):
    PRETRAINED_FROZEN = "pretrained_frozen"
    PRETRAINED_FINE_TUNED = "pretrained_fine_tuned"
    RANDOM_TRAINABLE = "random_trainable"


@dataclass
class EmbeddingTable:
    dim: int
    mode: EmbeddingMode
    vectors: dict[str, np.ndarray]
    unk: np.ndarray
    trainable: bool
    # Lazy allocation is only legal while training; freeze() before inference.
    frozen: bool = True
    _rng: Optional[np.random.Generator] = field(default=None, repr=False)

    def freeze(self) -> None:
        self.frozen = True

    def unfreeze(self) -> None:
        self.frozen = False

    def copy(self) -> "EmbeddingTable":
        return EmbeddingTable(
            dim=self.dim,
            mode=self.mode,
            vectors={w: v.copy() for w, v in self.vectors.items()},
            unk=self.unk.copy(),
            trainable=self.trainable,
            frozen=self.frozen,
            _rng=self._rng,
        )


def load_pretrained(path: Union[str, Path], limit: Optional[int] = None,
                    fine_tune: bool = False) -> EmbeddingTable:
    """Read whitespace-separated `word v1 ... vd` lines (GloVe style).
    A first line of exactly two fields `count dim` (FastText style) is
    skipped; dim is inferred from the first vector line."""
    vectors: dict[str, np.ndarray] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            if len(parts) < 2:
                raise MalformedLineError("expected a word and a vector",
                                         lineno)
            word = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise MalformedLineError(str(exc), lineno) from exc
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise DimensionMismatchError(
                    f"line {lineno}: expected dim {dim}, got {vec.shape[0]}")
            if limit is None or len(vectors) < limit:
                vectors[word] = vec
            if limit is not None and len(vectors) >= limit:
                break
    if not vectors:
        raise EmptyFileError(f"no vectors in {path}")
    unk = np.mean(list(vectors.values()), axis=0)
    mode = (EmbeddingMode.PRETRAINED_FINE_TUNED if fine_tune
            else EmbeddingMode.PRETRAINED_FROZEN)
    return EmbeddingTable(dim=dim, mode=mode, vectors=vectors, unk=unk,
                          trainable=fine_tune)


def init_random_table(dim: int, seed: int) -> EmbeddingTable:
    """Empty trainable table; vectors are allocated uniform in
    [-1/sqrt(dim), 1/sqrt(dim)] on first sight of a token during
    training (call unfreeze() first)."""
    if dim <= 0:
        raise DimensionMismatchError("dim must be positive")
    rng = np.random.default_rng(seed)
    return EmbeddingTable(dim=dim, mode=EmbeddingMode.RANDOM_TRAINABLE,
                          vectors={}, unk=np.zeros(dim), trainable=True,
                          frozen=True, _rng=rng)


def lookup(table: EmbeddingTable, token: Token) -> np.ndarray:
    """Never fails: exact match, then lowercased match, then unk.
    Trainable unfrozen tables allocate a fresh vector for unseen words."""
    vec = table.vectors.get(token.text)
    if vec is None:
        vec = table.vectors.get(token.text.lower())
    if vec is None:
        if table.trainable and not table.frozen:
            r = 1.0 / np.sqrt(table.dim)
            vec = table._rng.uniform(-r, r, size=table.dim)
            table.vectors[token.text] = vec
        else:
            vec = table.unk
    return vec


@dataclass(frozen=True)
class ContextualSentenceVectors:
    tokens: tuple[Token, ...]
    vectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.vectors):
            raise DimensionMismatchError(
                "one vector per token required")
        dims = {v.shape[0] for v in self.vectors}
        if len(dims) > 1:
            raise DimensionMismatchError(f"mixed vector dims: {dims}")

    @property
    def dim(self) -> int:
        return self.vectors[0].shape[0]


def load_contextual_vectors(path: Union[str, Path]) -> ContextualSentenceVectors:
    """JSON per-sentence format: {"tokens": [...], "vectors": [[...], ...]}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    tokens = tuple(Token(text, i) for i, text in enumerate(data["tokens"]))
    vectors = tuple(np.array(v, dtype=np.float64) for v in data["vectors"])
    return ContextualSentenceVectors(tokens, vectors)
