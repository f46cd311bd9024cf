"""CATE-style causality tree extraction: recursive neural network
training on binary causality treebanks, greedy/beam parsing with
temperature-calibrated confidences, evaluation, CLI and HTTP service."""

from .trees import (
    BranchingMode,
    ParseTree,
    SegmentLabel,
    Token,
    Treebank,
    binarize,
    default_vocabulary,
    generate_synthetic_corpus,
    parse_treebank,
    parse_treebank_file,
    serialize_tree,
    serialize_treebank,
    tokenize,
    write_treebank_file,
)
from .embeddings import (
    ContextualSentenceVectors,
    EmbeddingMode,
    EmbeddingTable,
    init_random_table,
    load_contextual_vectors,
    load_pretrained,
    lookup,
)
from .rnn import (
    AnnotatedNode,
    ClassScores,
    ModelParams,
    classify,
    compose,
    forward_gold_tree,
    gradients,
    load_checkpoint,
    save_checkpoint,
)
from .training import TrainingConfig, TrainingReport, node_accuracy, train
from .calibration import (
    CalibrationParams,
    calibrated_softmax,
    expected_calibration_error,
    fit_temperature,
)
from .inference import (
    BeamState,
    ParseConfig,
    parse_beam,
    parse_greedy,
    parse_tokens,
    score_merge,
    tree_to_json,
)
from .evaluation import EvalReport, bracket_f1, evaluate_corpus, labeled_brackets

__version__ = "0.1.0"
