"""Corpus-level metrics: labeled bracket F1 (micro-averaged), exact
tree match and node accuracy, plus the batch evaluation runner."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .calibration import CalibrationParams
from .errors import EmptySplitError, TokenMismatchError
from .inference import ParseConfig, parse_tokens
from .rnn import ModelParams
from .training import node_accuracy
from .trees import ParseTree


@dataclass
class SentenceRecord:
    sentence: str
    gold: str         # serialized gold tree
    predicted: str    # serialized predicted tree
    exact_match: bool
    f1: float


@dataclass
class EvalReport:
    labeled_precision: float
    labeled_recall: float
    labeled_f1: float
    exact_match: float
    node_accuracy: float
    corpus_size: int
    records: list[SentenceRecord] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "averaging": "micro",
            "labeled_precision": self.labeled_precision,
            "labeled_recall": self.labeled_recall,
            "labeled_f1": self.labeled_f1,
            "exact_match": self.exact_match,
            "node_accuracy": self.node_accuracy,
            "corpus_size": self.corpus_size,
            "sentences": [vars(r) for r in self.records],
        }
        return json.dumps(payload, indent=2)

    def to_table(self) -> str:
        rows = [
            ("labeled precision", self.labeled_precision),
            ("labeled recall", self.labeled_recall),
            ("labeled F1", self.labeled_f1),
            ("exact match", self.exact_match),
            ("node accuracy", self.node_accuracy),
        ]
        lines = [f"corpus size: {self.corpus_size}  (micro-averaged)"]
        lines += [f"{name:<20}{value:.4f}" for name, value in rows]
        return "\n".join(lines)


def labeled_brackets(tree: ParseTree) -> Counter:
    """Multiset of (label name, span) pairs, one per internal node."""
    return Counter((node.label.name, node.span)
                   for node in tree.internal_nodes())


def _prf(overlap: int, predicted: int, gold: int) -> tuple[float, float, float]:
    precision = overlap / predicted if predicted else 0.0
    recall = overlap / gold if gold else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def bracket_f1(gold: ParseTree,
               predicted: ParseTree) -> tuple[float, float, float]:
    gold_tokens = [t.text for t in gold.leaves()]
    pred_tokens = [t.text for t in predicted.leaves()]
    if gold_tokens != pred_tokens:
        raise TokenMismatchError(
            "gold and predicted trees cover different token sequences")
    gb = labeled_brackets(gold)
    pb = labeled_brackets(predicted)
    overlap = sum((gb & pb).values())
    return _prf(overlap, sum(pb.values()), sum(gb.values()))


def evaluate_corpus(params: ModelParams,
                    calibration: Optional[CalibrationParams],
                    split: Sequence[ParseTree],
                    config: ParseConfig) -> EvalReport:
    """Parse every sentence of the split (tokens taken from gold
    leaves) and aggregate micro-averaged metrics."""
    from .trees import serialize_tree  # local to avoid import noise at top

    if not split:
        raise EmptySplitError("evaluation split is empty")
    overlap = predicted_total = gold_total = 0
    exact = 0
    records = []
    for gold in split:
        tokens = list(gold.leaves())
        root = parse_tokens(params, calibration, tokens, config)
        pred = root.to_parse_tree()
        gb, pb = labeled_brackets(gold), labeled_brackets(pred)
        o = sum((gb & pb).values())
        overlap += o
        predicted_total += sum(pb.values())
        gold_total += sum(gb.values())
        is_exact = gold.structure_equal(pred)
        exact += int(is_exact)
        _, _, f1 = _prf(o, sum(pb.values()), sum(gb.values()))
        records.append(SentenceRecord(
            sentence=gold.sentence(), gold=serialize_tree(gold),
            predicted=serialize_tree(pred), exact_match=is_exact, f1=f1))
    precision, recall, f1 = _prf(overlap, predicted_total, gold_total)
    return EvalReport(
        labeled_precision=precision, labeled_recall=recall, labeled_f1=f1,
        exact_match=exact / len(split),
        node_accuracy=node_accuracy(params, split),
        corpus_size=len(split), records=records)
