"""Structure search for unseen sentences: greedy merging and beam
search over partial forests, with optional temperature calibration.

The beam objective is the sum of per-merge log posterior probabilities
(the probability of each candidate parent's argmax class); greedy is
exactly beam search with width 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .calibration import CalibrationParams, calibrated_softmax
from .embeddings import lookup
from .errors import EmptySentenceError
from .rnn import AnnotatedNode, ClassScores, ModelParams, compose
from .trees import BranchingMode, Token


@dataclass(frozen=True)
class ParseConfig:
    beam_width: int = 1
    use_temperature: bool = False
    branching: BranchingMode = BranchingMode.LEFT
    embedding_variant: str = "random"

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")


@dataclass(frozen=True)
class BeamState:
    forest: tuple[AnnotatedNode, ...]
    cum_logprob: float


def _effective_temperature(params: ModelParams,
                           calibration: Optional[CalibrationParams],
                           use_temperature: bool) -> float:
    if not use_temperature:
        return 1.0
    if calibration is not None:
        return calibration.T
    return params.temperature if params.temperature is not None else 1.0


def score_merge(params: ModelParams,
                calibration: Optional[CalibrationParams],
                left: AnnotatedNode, right: AnnotatedNode,
                use_temperature: bool) -> tuple[ClassScores, float]:
    """Score merging two adjacent forest nodes.  Returns the class
    scores of the candidate parent and log(max prob), the merge's
    contribution to the beam objective."""
    hidden = compose(params, left.hidden, right.hidden)
    logits = params.Ws @ hidden + params.bs
    T = _effective_temperature(params, calibration, use_temperature)
    probs = calibrated_softmax(logits, T)
    best = int(np.argmax(probs))
    scores = ClassScores(logits=logits, probs=probs,
                         predicted=params.vocabulary[best])
    return scores, float(np.log(probs[best]))


def _merge(params: ModelParams, calibration: Optional[CalibrationParams],
           left: AnnotatedNode, right: AnnotatedNode,
           use_temperature: bool) -> AnnotatedNode:
    scores, logprob = score_merge(params, calibration, left, right,
                                  use_temperature)
    hidden = compose(params, left.hidden, right.hidden)
    return AnnotatedNode(span=(left.span[0], right.span[1]), hidden=hidden,
                         label=scores.predicted, left=left, right=right,
                         scores=scores, merge_logprob=logprob)


def _leaf_forest(params: ModelParams, tokens: Sequence[Token],
                 leaf_vectors: Optional[Sequence[np.ndarray]] = None
                 ) -> tuple[AnnotatedNode, ...]:
    if not tokens:
        raise EmptySentenceError("cannot parse an empty token sequence")
    if leaf_vectors is not None:
        if len(leaf_vectors) != len(tokens):
            raise EmptySentenceError("one leaf vector per token required")
        return tuple(AnnotatedNode(span=(tok.index, tok.index + 1),
                                   token=tok, hidden=np.asarray(vec))
                     for tok, vec in zip(tokens, leaf_vectors))
    return tuple(AnnotatedNode(span=(tok.index, tok.index + 1), token=tok,
                               hidden=lookup(params.embedding, tok))
                 for tok in tokens)


def parse_greedy(params: ModelParams,
                 calibration: Optional[CalibrationParams],
                 tokens: Sequence[Token], config: ParseConfig,
                 trace: Optional[list] = None,
                 leaf_vectors: Optional[Sequence[np.ndarray]] = None
                 ) -> AnnotatedNode:
    """Merge the highest-posterior adjacent pair until one root is
    left; ties go to the leftmost pair.  Exactly n-1 merges.

    `trace`, when given, receives the number of pairs scored at each
    iteration.  `leaf_vectors` feeds precomputed contextual vectors in
    place of embedding lookups.
    """
    forest = list(_leaf_forest(params, tokens, leaf_vectors))
    cum = 0.0
    while len(forest) > 1:
        if trace is not None:
            trace.append(len(forest) - 1)
        best_i, best_parent = None, None
        for i in range(len(forest) - 1):
            parent = _merge(params, calibration, forest[i], forest[i + 1],
                            config.use_temperature)
            if best_parent is None or parent.merge_logprob > best_parent.merge_logprob:
                best_i, best_parent = i, parent
        cum += best_parent.merge_logprob
        forest[best_i:best_i + 2] = [best_parent]
    root = forest[0]
    root.cum_logprob = cum
    return root


def _structure_sig(node: AnnotatedNode):
    if node.is_leaf:
        return node.span
    return (_structure_sig(node.left), _structure_sig(node.right))


def parse_beam(params: ModelParams,
               calibration: Optional[CalibrationParams],
               tokens: Sequence[Token], config: ParseConfig,
               leaf_vectors: Optional[Sequence[np.ndarray]] = None
               ) -> AnnotatedNode:
    """Beam search over partial forests.  At each stage every state
    spawns one successor per adjacent pair; duplicate forests are
    merged keeping the max cumulative log-prob; the global top
    beam_width survive (ties broken by creation order)."""
    leaves = _leaf_forest(params, tokens, leaf_vectors)
    n = len(leaves)
    beam = [BeamState(forest=leaves, cum_logprob=0.0)]
    merge_cache: dict = {}

    def cached_merge(left: AnnotatedNode, right: AnnotatedNode) -> AnnotatedNode:
        key = (_structure_sig(left), _structure_sig(right))
        parent = merge_cache.get(key)
        if parent is None:
            parent = _merge(params, calibration, left, right,
                            config.use_temperature)
            merge_cache[key] = parent
        return parent

    for _ in range(n - 1):
        seen: dict = {}
        order: dict = {}
        next_order = 0
        for state in beam:
            forest = state.forest
            for i in range(len(forest) - 1):
                parent = cached_merge(forest[i], forest[i + 1])
                new_forest = forest[:i] + (parent,) + forest[i + 2:]
                new_lp = state.cum_logprob + parent.merge_logprob
                key = tuple(_structure_sig(x) for x in new_forest)
                if key not in seen:
                    seen[key] = BeamState(new_forest, new_lp)
                    order[key] = next_order
                    next_order += 1
                elif new_lp > seen[key].cum_logprob:
                    seen[key] = BeamState(new_forest, new_lp)
        ranked = sorted(seen.items(),
                        key=lambda kv: (-kv[1].cum_logprob, order[kv[0]]))
        beam = [state for _, state in ranked[:config.beam_width]]

    best = beam[0]
    root = best.forest[0]
    root.cum_logprob = best.cum_logprob
    return root


def parse_tokens(params: ModelParams,
                 calibration: Optional[CalibrationParams],
                 tokens: Sequence[Token], config: ParseConfig,
                 leaf_vectors: Optional[Sequence[np.ndarray]] = None
                 ) -> AnnotatedNode:
    if config.beam_width == 1:
        return parse_greedy(params, calibration, tokens, config,
                            leaf_vectors=leaf_vectors)
    return parse_beam(params, calibration, tokens, config,
                      leaf_vectors=leaf_vectors)


def tree_to_json(node: AnnotatedNode) -> dict:
    """Recursive JSON object; leaves {token, span}, internal nodes
    {label, span, prob, children}."""
    if node.is_leaf:
        return {"token": node.token.text, "span": list(node.span)}
    return {
        "label": node.label.name,
        "span": list(node.span),
        "prob": math.exp(node.merge_logprob) if node.merge_logprob is not None
                else None,
        "children": [tree_to_json(node.left), tree_to_json(node.right)],
    }
