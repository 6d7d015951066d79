"""Reading, writing, and transforming pos-chunk corpora.

A pos-chunk file is UTF-8 text with one token per non-blank line, written as
``word<TAB>pos<TAB>bio``; a blank line terminates each sentence (including
the last). The BIO column is ``O`` or a ``B-``/``I-`` prefix plus a chunk
type, e.g. ``I-NP``. Two encodings are supported:

* IOB1 -- the WSJ convention: chunk-initial tokens carry ``I-`` and ``B-``
  appears only between adjacent same-type chunks.
* IOB2 -- every chunk starts with ``B-``.

POS and chunk-type vocabularies are open; only structural rules are
enforced.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ConfigError, ParseError, ValidationError


class Scheme(Enum):
    """BIO chunk encoding convention."""

    IOB1 = "iob1"
    IOB2 = "iob2"

    @classmethod
    def from_string(cls, name: str) -> "Scheme":
        try:
            return cls(name.lower())
        except ValueError:
            raise ConfigError(f"unknown BIO scheme {name!r} (expected iob1 or iob2)") from None


_BIO_RE = re.compile(r"^(O|[BI]-.+)$")
_BAD_CHARS = ("\t", "\r", "\n")


@dataclass(frozen=True, slots=True)
class Token:
    word: str
    pos: str
    bio: str

    def __post_init__(self):
        if not self.word or any(c in self.word for c in _BAD_CHARS):
            raise ValidationError(f"bad word field: {self.word!r}")
        if not self.pos or any(c in self.pos for c in _BAD_CHARS):
            raise ValidationError(f"bad pos field: {self.pos!r}")
        if not _BIO_RE.match(self.bio):
            raise ValidationError(f"bad bio tag: {self.bio!r}")

    @property
    def bio_prefix(self) -> str:
        return "O" if self.bio == "O" else self.bio[0]

    @property
    def chunk_type(self):
        """Chunk type of the BIO tag, or None for O."""
        return None if self.bio == "O" else self.bio[2:]


# A sentence is an immutable, non-empty run of tokens.
Sentence = tuple[Token, ...]


@dataclass(frozen=True, slots=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    scheme: Scheme = Scheme.IOB2

    def __post_init__(self):
        for i, sent in enumerate(self.sentences):
            if not sent:
                raise ValidationError(f"sentence {i} is empty")

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True, slots=True)
class ChunkSpan:
    sentence_index: int
    start: int  # inclusive token index
    end: int    # inclusive token index
    chunk_type: str


def make_corpus(sentences: Iterable[Iterable[Token]], scheme: Scheme = Scheme.IOB2) -> Corpus:
    """Build a Corpus from any nested iterable of tokens."""
    return Corpus(tuple(tuple(s) for s in sentences), scheme)


def parse_pos_chunk(source, scheme: Scheme | None = None) -> Corpus:
    """Parse pos-chunk text into a Corpus.

    ``source`` is a string or a text file object. When ``scheme`` is given it
    is honored as-is; otherwise the encoding is detected: IOB1 unless some
    ``B-`` tag appears where IOB1 would never place one (sentence-initial,
    after O, or after a different chunk type), in which case IOB2.

    Non-blank lines must have exactly three tab-separated fields; a
    malformed line raises ParseError carrying its line number. Empty input
    yields an empty corpus.
    """
    text = source.read() if hasattr(source, "read") else source
    sentences: list[Sentence] = []
    current: list[Token] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if line == "":
            if current:
                sentences.append(tuple(current))
                current = []
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(
                f"expected 3 tab-separated fields, got {len(fields)}", line=lineno)
        try:
            current.append(Token(fields[0], fields[1], fields[2]))
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if current:
        sentences.append(tuple(current))
    detected = scheme if scheme is not None else _detect_scheme(sentences)
    return Corpus(tuple(sentences), detected)


def _detect_scheme(sentences: Sequence[Sentence]) -> Scheme:
    for sent in sentences:
        prev = None
        for tok in sent:
            if tok.bio_prefix == "B":
                if prev is None or prev.chunk_type != tok.chunk_type:
                    return Scheme.IOB2
            prev = tok
    return Scheme.IOB1


def write_pos_chunk(corpus: Corpus) -> str:
    """Serialize a Corpus; the output re-parses to an identical corpus."""
    parts = []
    for sent in corpus.sentences:
        for tok in sent:
            parts.append(f"{tok.word}\t{tok.pos}\t{tok.bio}\n")
        parts.append("\n")
    return "".join(parts)


def extract_chunks(sentence: Sentence, scheme: Scheme, sentence_index: int = 0) -> list[ChunkSpan]:
    """Maximal, non-overlapping chunk spans of one sentence, ordered by start.

    Under IOB2 an ``I-`` tag that does not continue an open chunk of the
    same type is a validation error; under IOB1 it starts a new chunk.
    """
    spans: list[ChunkSpan] = []
    open_type = None
    open_start = -1

    def close(end: int):
        nonlocal open_type
        if open_type is not None:
            spans.append(ChunkSpan(sentence_index, open_start, end, open_type))
            open_type = None

    for i, tok in enumerate(sentence):
        prefix = tok.bio_prefix
        ctype = tok.chunk_type
        if prefix == "O":
            close(i - 1)
        elif prefix == "B":
            close(i - 1)
            open_type, open_start = ctype, i
        else:  # I-
            if open_type == ctype:
                continue
            if scheme is Scheme.IOB2:
                raise ValidationError(
                    f"I-{ctype} continues no open {ctype} chunk "
                    f"(sentence {sentence_index}, token {i})")
            close(i - 1)
            open_type, open_start = ctype, i
    close(len(sentence) - 1)
    return spans


def corpus_chunks(corpus: Corpus) -> list[ChunkSpan]:
    """All chunk spans of the corpus with sentence indices filled in."""
    spans: list[ChunkSpan] = []
    for si, sent in enumerate(corpus.sentences):
        spans.extend(extract_chunks(sent, corpus.scheme, si))
    return spans


def normalize_bio(corpus: Corpus, target: Scheme) -> Corpus:
    """Re-encode BIO tags under ``target`` without moving any chunk boundary.

    Only B/I prefixes change; the multiset of chunk spans is preserved
    exactly. A corpus already in the target scheme is returned unchanged.
    """
    if not isinstance(target, Scheme):
        raise ConfigError(f"unknown target scheme: {target!r}")
    if corpus.scheme is target:
        return corpus
    new_sentences = []
    for si, sent in enumerate(corpus.sentences):
        spans = extract_chunks(sent, corpus.scheme, si)
        bio = ["O"] * len(sent)
        prev_span = None
        for span in spans:
            for i in range(span.start, span.end + 1):
                bio[i] = "I-" + span.chunk_type
            if target is Scheme.IOB2:
                bio[span.start] = "B-" + span.chunk_type
            elif (prev_span is not None
                  and prev_span.end == span.start - 1
                  and prev_span.chunk_type == span.chunk_type):
                bio[span.start] = "B-" + span.chunk_type
            prev_span = span
        new_sentences.append(tuple(
            Token(t.word, t.pos, b) for t, b in zip(sent, bio)))
    return Corpus(tuple(new_sentences), target)


def split_indices(n_sentences: int, train_fraction: float, seed: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Deterministic sentence-index partition for train/test splits.

    The generator is pinned for reproducibility: indices 0..n-1 are shuffled
    by the Fisher-Yates shuffle of CPython's ``random.Random(seed)``
    (MT19937), the first ``round(train_fraction * n)`` shuffled indices form
    the train part, and both parts are returned in ascending order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError(
            f"train_fraction must lie strictly between 0 and 1, got {train_fraction}")
    order = list(range(n_sentences))
    random.Random(seed).shuffle(order)
    k = round(train_fraction * n_sentences)
    return tuple(sorted(order[:k])), tuple(sorted(order[k:]))


def select_sentences(corpus: Corpus, indices: Sequence[int]) -> Corpus:
    return Corpus(tuple(corpus.sentences[i] for i in indices), corpus.scheme)


def split_corpus(corpus: Corpus, train_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Sentence-level train/test partition; reproducible from (seed, fraction)."""
    if corpus.n_sentences < 2:
        raise ValidationError("need at least 2 sentences to split")
    train_idx, test_idx = split_indices(corpus.n_sentences, train_fraction, seed)
    return select_sentences(corpus, train_idx), select_sentences(corpus, test_idx)


def replace_column(corpus: Corpus, sentence_values, column: str) -> Corpus:
    """New corpus with the pos or bio column replaced.

    ``sentence_values`` holds one sequence of replacement values per
    sentence, aligned with the tokens.
    """
    if column not in ("pos", "bio"):
        raise ConfigError(f"column must be pos or bio, got {column!r}")
    new_sentences = []
    for sent, values in zip(corpus.sentences, sentence_values):
        if column == "pos":
            new_sentences.append(tuple(
                Token(t.word, v, t.bio) for t, v in zip(sent, values)))
        else:
            new_sentences.append(tuple(
                Token(t.word, t.pos, v) for t, v in zip(sent, values)))
    return Corpus(tuple(new_sentences), corpus.scheme)
