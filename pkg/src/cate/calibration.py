"""Temperature scaling of node classifier confidences.

The standard form exp(x_i/T) / sum_j exp(x_j/T) is implemented.  A
literal variant that divides only the denominator terms by T is kept
behind `literal_denominator_only=True` for comparison; note that
variant does not produce a probability distribution for T != 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    EmptyValidationError,
    NonPositiveTemperatureError,
)
from .rnn import ModelParams, forward_gold_tree
from .trees import ParseTree


@dataclass(frozen=True)
class CalibrationParams:
    T: float
    fitted_on: int       # number of validation nodes
    nll_before: float    # mean NLL at T=1
    nll_after: float     # mean NLL at fitted T

    def __post_init__(self):
        if self.T <= 0:
            raise NonPositiveTemperatureError(f"T={self.T}")


def calibrated_softmax(logits: np.ndarray, T: float,
                       literal_denominator_only: bool = False) -> np.ndarray:
    """softmax(logits / T) with max-subtraction; preserves argmax for
    every T > 0."""
    if T <= 0:
        raise NonPositiveTemperatureError(f"T={T}")
    logits = np.asarray(logits, dtype=np.float64)
    if literal_denominator_only:
        # As-printed compatibility form: numerator unscaled.  Not a
        # probability distribution unless T == 1.
        shift = np.max(logits)
        return np.exp(logits - shift) / np.sum(np.exp((logits - shift) / T))
    scaled = logits / T
    shifted = scaled - np.max(scaled)
    exps = np.exp(shifted)
    return exps / np.sum(exps)


def mean_nll(logits: np.ndarray, labels: np.ndarray, T: float) -> float:
    """Mean negative log-likelihood of gold labels under temperature T.

    logits: (N, K); labels: (N,) integer ids.
    """
    scaled = logits / T
    shifted = scaled - scaled.max(axis=1, keepdims=True)
    logz = np.log(np.exp(shifted).sum(axis=1))
    gold = shifted[np.arange(len(labels)), labels]
    return float(np.mean(logz - gold))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def fit_temperature_on_logits(logits: np.ndarray, labels: np.ndarray,
                              lo: float = 0.05, hi: float = 10.0,
                              tol: float = 1e-4) -> CalibrationParams:
    """Golden-section minimization of mean NLL over T in [lo, hi].
    Falls back to T=1 whenever the search does not improve on it."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if logits.size == 0:
        raise EmptyInputError("no logits to fit on")

    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = mean_nll(logits, labels, c), mean_nll(logits, labels, d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = mean_nll(logits, labels, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = mean_nll(logits, labels, d)
    T = (a + b) / 2.0

    nll_before = mean_nll(logits, labels, 1.0)
    nll_after = mean_nll(logits, labels, T)
    if nll_after > nll_before:
        T, nll_after = 1.0, nll_before
    return CalibrationParams(T=T, fitted_on=len(labels),
                             nll_before=nll_before, nll_after=nll_after)


def collect_node_logits(params: ModelParams,
                        trees: Sequence[ParseTree]
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Gold-structure forward pass; returns (logits, gold label ids)
    stacked over all internal nodes."""
    logits, labels = [], []
    for tree in trees:
        annotated = forward_gold_tree(params, tree)
        for node in annotated.internal_nodes():
            logits.append(node.scores.logits)
            labels.append(node.label.id)
    return np.array(logits), np.array(labels, dtype=np.int64)


def fit_temperature(params: ModelParams,
                    validation: Sequence[ParseTree]) -> CalibrationParams:
    if not validation:
        raise EmptyValidationError("validation split is empty")
    logits, labels = collect_node_logits(params, validation)
    return fit_temperature_on_logits(logits, labels)


def expected_calibration_error(probs_and_labels: Sequence[tuple[np.ndarray, int]],
                               bins: int = 10) -> float:
    """Equal-width-bin ECE over predicted-class confidence."""
    if not probs_and_labels:
        raise EmptyInputError("no predictions")
    if bins < 1:
        raise EmptyInputError("bins must be >= 1")
    n = len(probs_and_labels)
    bin_conf = np.zeros(bins)
    bin_acc = np.zeros(bins)
    bin_count = np.zeros(bins)
    for probs, gold in probs_and_labels:
        probs = np.asarray(probs)
        pred = int(np.argmax(probs))
        conf = float(probs[pred])
        idx = min(int(conf * bins), bins - 1)
        bin_conf[idx] += conf
        bin_acc[idx] += float(pred == gold)
        bin_count[idx] += 1
    ece = 0.0
    for i in range(bins):
        if bin_count[i] == 0:
            continue
        acc = bin_acc[i] / bin_count[i]
        conf = bin_conf[i] / bin_count[i]
        ece += (bin_count[i] / n) * abs(acc - conf)
    return float(ece)
