import pytest

from cate.embeddings import init_random_table
from cate.errors import EmptyInputError, EmptyTrainSplitError
from cate.training import TrainingConfig, node_accuracy, train
from cate.trees import Treebank, generate_synthetic_corpus


def small_corpus(n=20, seed=7):
    return generate_synthetic_corpus(seed=seed, n=n)


def test_deterministic_report():
    reports = []
    for _ in range(2):
        table = init_random_table(8, seed=1)
        config = TrainingConfig(epochs=5, learning_rate=0.05, seed=1,
                                patience=5, dim=8)
        _, report = train(small_corpus(), config, table)
        reports.append(report)
    assert reports[0].train_loss == reports[1].train_loss
    assert reports[0].validation_loss == reports[1].validation_loss
    assert reports[0].best_epoch == reports[1].best_epoch


def test_single_epoch_report_length():
    table = init_random_table(8, seed=0)
    config = TrainingConfig(epochs=1, learning_rate=0.05, seed=0,
                            patience=1, dim=8)
    _, report = train(small_corpus(), config, table)
    assert len(report.train_loss) == 1
    assert len(report.validation_loss) == 1


def test_returns_best_validation_epoch():
    table = init_random_table(8, seed=0)
    config = TrainingConfig(epochs=15, learning_rate=0.05, seed=0,
                            patience=15, dim=8)
    _, report = train(small_corpus(), config, table)
    best = report.best_epoch
    assert report.validation_loss[best] == min(report.validation_loss)


def test_losses_finite():
    table = init_random_table(8, seed=0)
    config = TrainingConfig(epochs=10, learning_rate=0.05, seed=0,
                            patience=10, dim=8)
    _, report = train(small_corpus(), config, table)
    assert all(loss == loss and loss != float("inf")
               for loss in report.train_loss + report.validation_loss)


def test_empty_train_split():
    tb = small_corpus(n=4)
    empty = Treebank(tb.trees, tb.vocabulary,
                     ("test",) * len(tb.trees))
    table = init_random_table(8, seed=0)
    with pytest.raises(EmptyTrainSplitError):
        train(empty, TrainingConfig(epochs=1, dim=8), table)


def test_training_improves_node_accuracy(tiny_model, tiny_corpus):
    acc = node_accuracy(tiny_model, tiny_corpus.split("train"))
    assert acc > 0.9


class TestNodeAccuracy:
    def test_zero_classifier_predicts_label_zero(self, tiny_corpus):
        table = init_random_table(8, seed=0)
        from cate.training import init_params
        from cate.trees import BranchingMode
        params = init_params(8, 0, table, tiny_corpus.vocabulary,
                             BranchingMode.LEFT)
        params.Ws[:] = 0.0
        params.bs[:] = 0.0
        trees = tiny_corpus.split("train")
        total = correct = 0
        for tree in trees:
            for node in tree.internal_nodes():
                total += 1
                correct += int(node.label.id == 0)
        assert node_accuracy(params, trees) == pytest.approx(correct / total)

    def test_empty_input(self, tiny_model):
        with pytest.raises(EmptyInputError):
            node_accuracy(tiny_model, [])


def test_embedding_frozen_after_training(tiny_model):
    assert tiny_model.embedding.frozen
    before = set(tiny_model.embedding.vectors)
    from cate.embeddings import lookup
    from cate.trees import Token
    lookup(tiny_model.embedding, Token("neverseenword", 0))
    assert set(tiny_model.embedding.vectors) == before
