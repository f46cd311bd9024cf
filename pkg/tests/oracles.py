"""Independent brute-force oracle: enumerate every binary bracketing
of a token sequence and score each with score_merge.  Used to check
beam search; deliberately ignorant of the beam implementation."""

from __future__ import annotations

from cate.inference import _leaf_forest, score_merge
from cate.rnn import AnnotatedNode, ModelParams, compose


def enumerate_trees(params: ModelParams, calibration, tokens,
                    use_temperature: bool = False):
    """Yield (root, total_logprob) for every binary bracketing."""
    leaves = _leaf_forest(params, tokens)

    def build(i: int, j: int):
        if j - i == 1:
            yield leaves[i], 0.0
            return
        for k in range(i + 1, j):
            for left, lp_l in build(i, k):
                for right, lp_r in build(k, j):
                    scores, logprob = score_merge(
                        params, calibration, left, right, use_temperature)
                    node = AnnotatedNode(
                        span=(left.span[0], right.span[1]),
                        hidden=compose(params, left.hidden, right.hidden),
                        label=scores.predicted, left=left, right=right,
                        scores=scores, merge_logprob=logprob)
                    yield node, lp_l + lp_r + logprob

    yield from build(0, len(leaves))


def best_tree(params: ModelParams, calibration, tokens,
              use_temperature: bool = False):
    """Global optimum over all bracketings; returns (root, logprob,
    unique) where unique is False if the optimum is tied."""
    best_root, best_lp = None, float("-inf")
    ties = 0
    for root, lp in enumerate_trees(params, calibration, tokens,
                                    use_temperature):
        if lp > best_lp + 1e-12:
            best_root, best_lp, ties = root, lp, 1
        elif abs(lp - best_lp) <= 1e-12:
            ties += 1
    return best_root, best_lp, ties == 1


def catalan(n: int) -> int:
    result = 1
    for i in range(n):
        result = result * 2 * (2 * i + 1) // (i + 2)
    return result
