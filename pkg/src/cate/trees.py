"""Corpus data model: tokens, labels, binary parse trees, the on-disk
treebank format, binarization and synthetic corpus generation.

All types here are immutable after construction and safe to share.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    EmptyInputError,
    EmptySegmentError,
    EmptySentenceError,
    NonBinaryNodeError,
    TreebankSyntaxError,
    VocabularyMismatchError,
)

NUM_LABELS = 27
LEAF_TAG = "W"

# The label inventory is data, not code: swap the list to match a real corpus.
DEFAULT_LABEL_NAMES = (
    "Sentence",
    "Cause1",
    "Cause2",
    "Cause3",
    "Effect1",
    "Effect2",
    "Effect3",
    "Conjunction",
    "Disjunction",
    "Variable",
    "Condition",
    "Negation",
    "Keyword",
    "Group01",
    "Group02",
    "Group03",
    "Group04",
    "Group05",
    "Group06",
    "Group07",
    "Group08",
    "Group09",
    "Group10",
    "Group11",
    "Group12",
    "Group13",
    "Group14",
)
assert len(DEFAULT_LABEL_NAMES) == NUM_LABELS

_PUNCT = ".,;:!?"


class BranchingMode(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Token:
    text: str
    index: int

    def __post_init__(self):
        if not self.text or any(c.isspace() for c in self.text):
            raise EmptySentenceError(f"invalid token text: {self.text!r}")


@dataclass(frozen=True)
class SegmentLabel:
    name: str
    id: int


def default_vocabulary() -> list[SegmentLabel]:
    return [SegmentLabel(name, i) for i, name in enumerate(DEFAULT_LABEL_NAMES)]


def vocabulary_from_names(names: Sequence[str]) -> list[SegmentLabel]:
    if len(names) != NUM_LABELS:
        raise VocabularyMismatchError(
            f"expected {NUM_LABELS} labels, got {len(names)}"
        )
    if len(set(names)) != len(names):
        raise VocabularyMismatchError("duplicate label names")
    return [SegmentLabel(name, i) for i, name in enumerate(names)]


@dataclass(frozen=True)
class ParseTree:
    """Binary tree over a token span.  Leaves carry a token, internal
    nodes a segment label and exactly two adjacent children."""

    span: tuple[int, int]
    token: Optional[Token] = None
    label: Optional[SegmentLabel] = None
    left: Optional["ParseTree"] = None
    right: Optional["ParseTree"] = None
    score: Optional[float] = None

    @staticmethod
    def leaf(token: Token) -> "ParseTree":
        return ParseTree(span=(token.index, token.index + 1), token=token)

    @staticmethod
    def internal(label: SegmentLabel, left: "ParseTree", right: "ParseTree",
                 score: Optional[float] = None) -> "ParseTree":
        if left.span[1] != right.span[0]:
            raise NonBinaryNodeError(
                f"children not adjacent: {left.span} vs {right.span}"
            )
        return ParseTree(span=(left.span[0], right.span[1]), label=label,
                         left=left, right=right, score=score)

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> Iterator[Token]:
        if self.is_leaf:
            yield self.token
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def internal_nodes(self) -> Iterator["ParseTree"]:
        if not self.is_leaf:
            yield self
            yield from self.left.internal_nodes()
            yield from self.right.internal_nodes()

    def sentence(self) -> str:
        return " ".join(tok.text for tok in self.leaves())

    def structure_equal(self, other: "ParseTree") -> bool:
        """Structural and label equality, ignoring scores."""
        if self.is_leaf != other.is_leaf or self.span != other.span:
            return False
        if self.is_leaf:
            return self.token == other.token
        if (self.label.name, self.label.id) != (other.label.name, other.label.id):
            return False
        return (self.left.structure_equal(other.left)
                and self.right.structure_equal(other.right))


SPLIT_TRAIN = "train"
SPLIT_VALIDATION = "validation"
SPLIT_TEST = "test"


def assign_splits(n: int) -> list[str]:
    """Positional 80/10/10 assignment, deterministic in n."""
    n_train = int(n * 0.8)
    n_val = int(n * 0.1)
    tags = [SPLIT_TRAIN] * n_train + [SPLIT_VALIDATION] * n_val
    tags += [SPLIT_TEST] * (n - len(tags))
    return tags


@dataclass(frozen=True)
class Treebank:
    trees: tuple[ParseTree, ...]
    vocabulary: tuple[SegmentLabel, ...]
    splits: tuple[str, ...]

    def __post_init__(self):
        if len(self.trees) != len(self.splits):
            raise VocabularyMismatchError("one split tag per tree required")
        names = {lab.name for lab in self.vocabulary}
        for tree in self.trees:
            for node in tree.internal_nodes():
                if node.label.name not in names:
                    raise VocabularyMismatchError(
                        f"label {node.label.name!r} not in vocabulary"
                    )

    def split(self, tag: str) -> list[ParseTree]:
        return [t for t, s in zip(self.trees, self.splits) if s == tag]


def tokenize(sentence: str) -> list[Token]:
    """Whitespace tokenization with leading/trailing punctuation
    (.,;:!?) detached as separate tokens.  No lowercasing."""
    texts: list[str] = []
    for chunk in sentence.split():
        lead: list[str] = []
        while chunk and chunk[0] in _PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        tail: list[str] = []
        while chunk and chunk[-1] in _PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        texts.extend(lead)
        if chunk:
            texts.append(chunk)
        texts.extend(reversed(tail))
    if not texts:
        raise EmptySentenceError("no tokens in sentence")
    return [Token(text, i) for i, text in enumerate(texts)]


def binarize(subtrees: Sequence[ParseTree], label: SegmentLabel,
             mode: BranchingMode) -> ParseTree:
    """Nest a flat list of adjacent subtrees into a binary tree.

    Left mode yields (((a b) c) d); right mode yields (a (b (c d))).
    Every introduced internal node carries `label`.  A single-element
    list is returned unchanged.
    """
    if not subtrees:
        raise EmptySegmentError("cannot binarize an empty segment")
    if mode is BranchingMode.LEFT:
        acc = subtrees[0]
        for sub in subtrees[1:]:
            acc = ParseTree.internal(label, acc, sub)
        return acc
    acc = subtrees[-1]
    for sub in reversed(subtrees[:-1]):
        acc = ParseTree.internal(label, sub, acc)
    return acc


# ---------------------------------------------------------------------------
# Bracketed text format


def serialize_tree(tree: ParseTree) -> str:
    if tree.is_leaf:
        return f"({LEAF_TAG} {tree.token.text})"
    return (f"({tree.label.name} {serialize_tree(tree.left)} "
            f"{serialize_tree(tree.right)})")


def serialize_treebank(treebank: Treebank) -> str:
    header = "#labels: " + ",".join(lab.name for lab in treebank.vocabulary)
    lines = [header] + [serialize_tree(t) for t in treebank.trees]
    return "\n".join(lines) + "\n"


class _SExprParser:
    """Single-line s-expression reader with position-aware errors."""

    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    def error(self, message: str) -> TreebankSyntaxError:
        return TreebankSyntaxError(message, self.line, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def read_atom(self) -> str:
        start = self.pos
        while (self.pos < len(self.text)
               and not self.text[self.pos].isspace()
               and self.text[self.pos] not in "()"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected an atom")
        return self.text[start:self.pos]

    def read_node(self):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != "(":
            raise self.error("expected '('")
        self.pos += 1
        self.skip_ws()
        tag = self.read_atom()
        children = []
        while True:
            self.skip_ws()
            if self.pos >= len(self.text):
                raise self.error("unbalanced parentheses")
            if self.text[self.pos] == ")":
                self.pos += 1
                return tag, children
            if self.text[self.pos] == "(":
                children.append(self.read_node())
            else:
                children.append(self.read_atom())

    def parse(self):
        node = self.read_node()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("trailing input after tree")
        return node


def _build_tree(node, labels_by_name: dict[str, SegmentLabel],
                mode: Optional[BranchingMode], counter: list[int],
                line: int) -> ParseTree:
    tag, children = node
    if tag == LEAF_TAG:
        if len(children) != 1 or not isinstance(children[0], str):
            raise TreebankSyntaxError(
                f"leaf must hold exactly one token", line, 1)
        token = Token(children[0], counter[0])
        counter[0] += 1
        return ParseTree.leaf(token)
    if tag not in labels_by_name:
        raise VocabularyMismatchError(
            f"line {line}: undeclared label {tag!r}")
    label = labels_by_name[tag]
    subtrees = []
    for child in children:
        if isinstance(child, str):
            raise TreebankSyntaxError(
                f"bare token {child!r} outside a ({LEAF_TAG} ...) leaf",
                line, 1)
        subtrees.append(_build_tree(child, labels_by_name, mode, counter, line))
    if not subtrees:
        raise TreebankSyntaxError("internal node without children", line, 1)
    if len(subtrees) == 1:
        return subtrees[0]
    if len(subtrees) > 2 and mode is None:
        raise NonBinaryNodeError(
            f"line {line}: node {tag!r} has {len(subtrees)} children "
            "and no branching mode was given for normalization")
    return binarize(subtrees, label, mode or BranchingMode.LEFT)


def parse_treebank(text: str,
                   mode: Optional[BranchingMode] = None) -> Treebank:
    """Parse the bracketed treebank format.

    `mode` controls normalization of flat n-ary nodes; with mode=None
    any node with more than two children is rejected.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#labels:"):
        raise TreebankSyntaxError("missing '#labels:' header", 1, 1)
    names = [n.strip() for n in lines[0][len("#labels:"):].split(",")]
    vocabulary = vocabulary_from_names(names)
    labels_by_name = {lab.name: lab for lab in vocabulary}

    trees = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parser = _SExprParser(line, lineno)
        node = parser.parse()
        counter = [0]
        trees.append(_build_tree(node, labels_by_name, mode, counter, lineno))
    return Treebank(tuple(trees), tuple(vocabulary),
                    tuple(assign_splits(len(trees))))


def parse_treebank_file(path: Union[str, Path],
                        mode: Optional[BranchingMode] = None) -> Treebank:
    return parse_treebank(Path(path).read_text(encoding="utf-8"), mode)


def write_treebank_file(treebank: Treebank, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_treebank(treebank), encoding="utf-8")


# ---------------------------------------------------------------------------
# Synthetic corpus (stand-in for an unpublished annotated corpus)

_VARIABLES = (
    "the system", "the user", "the application", "the sensor",
    "the network", "the database", "the controller", "the service",
)
_CONDITIONS = (
    "detects an error", "is active", "is offline", "receives a request",
    "set to true", "fails unexpectedly", "exceeds the threshold",
    "loses the connection",
)
_EFFECTS = (
    "a warning window shall be shown",
    "the process shall stop",
    "an alert shall be sent",
    "the data shall be saved",
    "the session shall close",
    "a log entry shall be written",
)


def _segment_leaves(words: Sequence[str], start: int) -> list[ParseTree]:
    return [ParseTree.leaf(Token(w, start + i)) for i, w in enumerate(words)]


def generate_synthetic_sentence(rng: random.Random,
                                mode: BranchingMode,
                                vocabulary: Sequence[SegmentLabel]) -> ParseTree:
    by_name = {lab.name: lab for lab in vocabulary}

    def cause_words():
        return (rng.choice(_VARIABLES).split(), rng.choice(_CONDITIONS).split())

    two_causes = rng.random() < 0.4
    connective = rng.choice(["and", "or"]) if two_causes else None

    words: list[str] = ["If"]
    var1, cond1 = cause_words()
    words += var1 + cond1
    if two_causes:
        var2, cond2 = cause_words()
        words += [connective] + var2 + cond2
    words += [","]
    n_cause_clause = len(words)
    effect = rng.choice(_EFFECTS).split()
    words += ["then"] + effect + ["."]

    def build_cause(var, cond, start):
        var_tree = binarize(_segment_leaves(var, start),
                            by_name["Variable"], mode)
        cond_tree = binarize(_segment_leaves(cond, start + len(var)),
                             by_name["Condition"], mode)
        return binarize([var_tree, cond_tree], by_name["Cause1"], mode)

    pos = 1
    cause_a = build_cause(var1, cond1, pos)
    pos += len(var1) + len(cond1)
    if two_causes:
        conj_leaf = ParseTree.leaf(Token(connective, pos))
        pos += 1
        cause_b = build_cause(var2, cond2, pos)
        pos += len(var2) + len(cond2)
        conn_label = by_name["Conjunction" if connective == "and"
                             else "Disjunction"]
        cause_part = binarize([cause_a, conj_leaf, cause_b], conn_label, mode)
    else:
        cause_part = cause_a

    if_leaf = ParseTree.leaf(Token("If", 0))
    comma_leaf = ParseTree.leaf(Token(",", pos))
    cause_clause = binarize([if_leaf, cause_part, comma_leaf],
                            by_name["Cause2"], mode)

    then_leaf = ParseTree.leaf(Token("then", n_cause_clause))
    effect_tree = binarize(_segment_leaves(effect, n_cause_clause + 1),
                           by_name["Effect1"], mode)
    period_leaf = ParseTree.leaf(Token(".", n_cause_clause + 1 + len(effect)))
    effect_clause = binarize([then_leaf, effect_tree, period_leaf],
                             by_name["Effect2"], mode)

    return binarize([cause_clause, effect_clause], by_name["Sentence"], mode)


def generate_synthetic_corpus(seed: int, n: int,
                              mode: BranchingMode = BranchingMode.LEFT
                              ) -> Treebank:
    """Deterministic synthetic treebank of causal requirement sentences."""
    if n < 1:
        raise EmptyInputError("n must be >= 1")
    rng = random.Random(seed)
    vocabulary = default_vocabulary()
    trees = tuple(generate_synthetic_sentence(rng, mode, vocabulary)
                  for _ in range(n))
    return Treebank(trees, tuple(vocabulary), tuple(assign_splits(n)))
