import random

import pytest

from cate.embeddings import init_random_table
from cate.trees import (
    _CONDITIONS,
    _EFFECTS,
    _VARIABLES,
    Token,
    generate_synthetic_corpus,
)
from cate.training import TrainingConfig, train

GRAMMAR_WORDS = sorted({w for phrase in _VARIABLES + _CONDITIONS + _EFFECTS
                        for w in phrase.split()} | {"If", "then", "and",
                                                    "or", ",", "."})


def random_tokens(rng: random.Random, length: int) -> list[Token]:
    return [Token(rng.choice(GRAMMAR_WORDS), i) for i in range(length)]


@pytest.fixture(scope="session")
def tiny_corpus():
    return generate_synthetic_corpus(seed=7, n=20)


@pytest.fixture(scope="session")
def tiny_model(tiny_corpus):
    """Small quickly-trained model for inference and service tests."""
    table = init_random_table(12, seed=0)
    config = TrainingConfig(epochs=40, learning_rate=0.05, seed=0,
                            patience=40, dim=12)
    params, _ = train(tiny_corpus, config, table)
    return params
