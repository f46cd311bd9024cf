import math

import numpy as np
import pytest

from cate.embeddings import init_random_table
from cate.errors import DimensionMismatchError
from cate.rnn import (
    classify,
    compose,
    forward_gold_tree,
    gradients,
    load_checkpoint,
    save_checkpoint,
    tree_loss,
)
from cate.trees import (
    NUM_LABELS,
    BranchingMode,
    generate_synthetic_corpus,
)
from cate.training import init_params


def make_params(dim=8, seed=0, trees=()):
    """Random params with embeddings allocated for the given trees."""
    table = init_random_table(dim, seed=seed + 100)
    params = init_params(dim, seed, table,
                         generate_synthetic_corpus(0, 1).vocabulary,
                         BranchingMode.LEFT)
    table.unfreeze()
    for tree in trees:
        forward_gold_tree(params, tree)
    table.freeze()
    return params


class TestCompose:
    def test_zero_params(self):
        params = make_params(dim=4)
        params.W[:] = 0.0
        params.b[:] = 0.0
        out = compose(params, np.ones(4), -np.ones(4))
        assert np.array_equal(out, np.zeros(4))

    def test_closed_form_d1(self):
        params = make_params(dim=1)
        params.W[:] = [[1.0, 1.0]]
        params.b[:] = 0.0
        out = compose(params, np.array([0.5]), np.array([0.5]))
        assert out[0] == pytest.approx(math.tanh(1.0), abs=1e-12)

    def test_output_in_tanh_range(self):
        params = make_params(dim=8)
        rng = np.random.default_rng(0)
        for _ in range(20):
            out = compose(params, rng.normal(size=8) * 5,
                          rng.normal(size=8) * 5)
            assert np.all(out > -1.0) and np.all(out < 1.0)

    def test_dim_mismatch(self):
        params = make_params(dim=4)
        with pytest.raises(DimensionMismatchError):
            compose(params, np.zeros(3), np.zeros(4))


class TestClassify:
    def test_uniform_for_zero_classifier(self):
        params = make_params(dim=4)
        params.Ws[:] = 0.0
        params.bs[:] = 0.0
        scores = classify(params, np.ones(4))
        assert np.allclose(scores.probs, 1.0 / NUM_LABELS)
        assert scores.predicted.id == 0  # tie broken by lowest id

    def test_dominant_bias(self):
        params = make_params(dim=4)
        params.Ws[:] = 0.0
        params.bs[:] = 0.0
        params.bs[5] = 10.0
        scores = classify(params, np.zeros(4))
        assert scores.predicted.id == 5
        # independent evaluation: exp(10) / (exp(10) + 26 * exp(0))
        expected = math.exp(10.0) / (math.exp(10.0) + (NUM_LABELS - 1))
        assert scores.probs[5] == pytest.approx(expected, rel=1e-12)
        assert scores.probs[5] > 0.998

    def test_probs_normalized(self):
        params = make_params(dim=6)
        rng = np.random.default_rng(1)
        for _ in range(50):
            scores = classify(params, rng.normal(size=6))
            assert abs(scores.probs.sum() - 1.0) < 1e-9
            assert np.all(scores.probs >= 0)

    def test_argmax_shift_invariant(self):
        params = make_params(dim=4)
        hidden = np.random.default_rng(2).normal(size=4)
        before = classify(params, hidden).predicted.id
        params.bs += 3.7
        assert classify(params, hidden).predicted.id == before


class TestForward:
    def test_single_leaf(self):
        tb = generate_synthetic_corpus(0, 1)
        leaf = next(tb.trees[0].leaves())
        from cate.trees import ParseTree
        tree = ParseTree.leaf(leaf)
        params = make_params(dim=4, trees=[tree])
        annotated = forward_gold_tree(params, tree)
        assert annotated.is_leaf
        assert annotated.scores is None
        assert np.array_equal(annotated.hidden,
                              params.embedding.vectors[leaf.text])

    def test_merge_count(self):
        tb = generate_synthetic_corpus(1, 5)
        params = make_params(dim=6, trees=tb.trees)
        for tree in tb.trees:
            annotated = forward_gold_tree(params, tree)
            n = sum(1 for _ in tree.leaves())
            assert sum(1 for node in annotated.internal_nodes()
                       if node.scores is not None) == n - 1

    def test_purity(self):
        tb = generate_synthetic_corpus(2, 1)
        params = make_params(dim=4, trees=tb.trees)
        a = forward_gold_tree(params, tb.trees[0])
        b = forward_gold_tree(params, tb.trees[0])
        assert np.array_equal(a.hidden, b.hidden)


class TestGradients:
    def test_uniform_loss_is_k_ln27(self):
        tb = generate_synthetic_corpus(3, 2)
        params = make_params(dim=4, trees=tb.trees)
        params.Ws[:] = 0.0
        params.bs[:] = 0.0
        for tree in tb.trees:
            k = sum(1 for _ in tree.internal_nodes())
            loss, _ = gradients(params, tree)
            assert loss == pytest.approx(k * math.log(NUM_LABELS), rel=1e-12)

    def test_finite_differences(self):
        tb = generate_synthetic_corpus(4, 3)
        params = make_params(dim=5, trees=tb.trees)
        eps = 1e-5
        total_loss = lambda: sum(tree_loss(params, t) for t in tb.trees)
        acc = None
        for tree in tb.trees:
            _, g = gradients(params, tree)
            if acc is None:
                acc = g
            else:
                acc.W += g.W
                acc.b += g.b
                acc.Ws += g.Ws
                acc.bs += g.bs
                for w, v in g.embeddings.items():
                    acc.embeddings[w] = acc.embeddings.get(w, 0) + v
        for arr, analytic in ((params.W, acc.W), (params.b, acc.b),
                              (params.Ws, acc.Ws), (params.bs, acc.bs)):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = arr[idx]
                arr[idx] = orig + eps
                lp = total_loss()
                arr[idx] = orig - eps
                lm = total_loss()
                arr[idx] = orig
                fd = (lp - lm) / (2 * eps)
                a = analytic[idx]
                assert abs(a - fd) / max(abs(a), abs(fd), 1e-4) < 1e-4

    def test_descent_decreases_loss(self):
        tb = generate_synthetic_corpus(5, 1)
        tree = tb.trees[0]
        params = make_params(dim=6, trees=[tree])
        losses = []
        for _ in range(10):
            loss, g = gradients(params, tree)
            losses.append(loss)
            params.W -= 0.1 * g.W
            params.b -= 0.1 * g.b
            params.Ws -= 0.1 * g.Ws
            params.bs -= 0.1 * g.bs
        assert all(b < a for a, b in zip(losses, losses[1:]))


class TestCheckpoint:
    def test_roundtrip_exact(self, tmp_path):
        tb = generate_synthetic_corpus(6, 2)
        params = make_params(dim=5, trees=tb.trees)
        params.temperature = 1.3
        path = tmp_path / "model.json"
        save_checkpoint(params, path)
        loaded = load_checkpoint(path)
        assert np.array_equal(loaded.W, params.W)
        assert np.array_equal(loaded.Ws, params.Ws)
        assert loaded.temperature == params.temperature
        assert loaded.branching == params.branching
        assert [l.name for l in loaded.vocabulary] == \
               [l.name for l in params.vocabulary]
        for w, v in params.embedding.vectors.items():
            assert np.array_equal(loaded.embedding.vectors[w], v)

    def test_missing_temperature_means_unset(self, tmp_path):
        params = make_params(dim=4)
        path = tmp_path / "model.json"
        save_checkpoint(params, path)
        assert load_checkpoint(path).temperature is None
