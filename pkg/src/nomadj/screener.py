"""Nominal-adjective candidate screening and relabeling transforms.

A nominal adjective is an adjective standing in for the head noun of a base
NP ("the poor", "The very rich"). Candidates are screened with a
grammatical pattern: an adjective-tagged token that sits inside an NP
chunk, ends that chunk, and is preceded (within the chunk) by an optional
short run of adverbs and then exactly one determiner. Screened positions
can then be relabeled in place, either to the dedicated tag ``JN`` or to
the corresponding noun tag (JJ2NN).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, Token, extract_chunks
from .errors import ConfigError, ParseError, ValidationError

JN_TAG = "JN"

#: Default noun mapping for the JJ2NN transform.
JJ2NN_DEFAULT = {"JJ": "NN", "JJS": "NNS"}


@dataclass(frozen=True)
class ScreenConfig:
    adjective_tags: frozenset[str] = frozenset({"JJ", "JJS"})
    include_jjr: bool = False
    determiner_tags: frozenset[str] = frozenset({"DT"})
    adverb_tags: frozenset[str] = frozenset({"RB", "RBR", "RBS"})
    max_adverbs: int = 1
    require_np_final: bool = True
    # Used only when require_np_final is off: the token directly after the
    # candidate must not carry one of these POS tags.
    forbidden_next_pos: frozenset[str] = frozenset()
    chunk_type: str = "NP"

    def __post_init__(self):
        if not self.adjective_tags:
            raise ConfigError("adjective_tags must not be empty")
        if self.max_adverbs < 0:
            raise ConfigError("max_adverbs must be >= 0")

    @property
    def effective_adjective_tags(self) -> frozenset[str]:
        if self.include_jjr:
            return self.adjective_tags | {"JJR"}
        return self.adjective_tags


@dataclass(frozen=True, slots=True)
class CandidateRef:
    """Reference to one screened occurrence: (sentence, token, original POS)."""

    sentence_index: int
    token_index: int
    original_pos: str


@dataclass(frozen=True)
class ReviewList:
    """Manual accept/reject decisions, keyed by position or by word form.

    A position-keyed decision overrides a word-keyed one for the same token.
    """

    position_decisions: dict[tuple[int, int], str] = field(default_factory=dict)
    word_decisions: dict[str, str] = field(default_factory=dict)


def screen_candidates(corpus: Corpus, config: ScreenConfig = ScreenConfig()) -> list[CandidateRef]:
    """Screen the corpus for nominal-adjective candidates.

    A token qualifies iff it is adjective-tagged, lies inside a chunk of
    ``config.chunk_type``, ends that chunk (or, with require_np_final off,
    is not followed by a forbidden POS), and is preceded within the chunk
    by 0..max_adverbs adverbs and then one determiner. Results are ordered
    by (sentence_index, token_index).
    """
    adjectives = config.effective_adjective_tags
    out: list[CandidateRef] = []
    for si, sent in enumerate(corpus.sentences):
        spans = [s for s in extract_chunks(sent, corpus.scheme, si)
                 if s.chunk_type == config.chunk_type]
        span_at = {}
        for span in spans:
            for i in range(span.start, span.end + 1):
                span_at[i] = span
        for ti, tok in enumerate(sent):
            if tok.pos not in adjectives:
                continue
            span = span_at.get(ti)
            if span is None:
                continue
            if config.require_np_final:
                if ti != span.end:
                    continue
            elif config.forbidden_next_pos:
                if ti + 1 < len(sent) and sent[ti + 1].pos in config.forbidden_next_pos:
                    continue
            j = ti - 1
            adverbs = 0
            while j >= span.start and sent[j].pos in config.adverb_tags:
                adverbs += 1
                j -= 1
            if adverbs > config.max_adverbs:
                continue
            if j < span.start or sent[j].pos not in config.determiner_tags:
                continue
            out.append(CandidateRef(si, ti, tok.pos))
    return out


def _token_at(corpus: Corpus, si: int, ti: int) -> Token:
    if si >= corpus.n_sentences or ti >= len(corpus.sentences[si]):
        raise ValidationError(f"no token at sentence {si}, position {ti}")
    return corpus.sentences[si][ti]


def apply_review(corpus: Corpus, candidates: list[CandidateRef], review: ReviewList,
                 config: ScreenConfig = ScreenConfig()) -> list[CandidateRef]:
    """Apply manual-review decisions to a screened candidate list.

    Rejected entries are dropped; position-keyed accepts may add tokens
    that screening missed, provided they carry an adjective tag.
    """
    kept = []
    present = set()
    for cand in candidates:
        key = (cand.sentence_index, cand.token_index)
        decision = review.position_decisions.get(key)
        if decision is None:
            word = _token_at(corpus, *key).word
            decision = review.word_decisions.get(word)
        if decision != "reject":
            kept.append(cand)
            present.add(key)
    for key in sorted(review.position_decisions):
        if review.position_decisions[key] != "accept" or key in present:
            continue
        tok = _token_at(corpus, *key)
        if tok.pos not in config.effective_adjective_tags:
            raise ValidationError(
                f"accept decision at sentence {key[0]} token {key[1]} "
                f"references a non-adjective token ({tok.pos})")
        kept.append(CandidateRef(key[0], key[1], tok.pos))
    kept.sort(key=lambda c: (c.sentence_index, c.token_index))
    return kept


def _relabel(corpus: Corpus, candidates: list[CandidateRef], new_pos) -> Corpus:
    by_sentence: dict[int, dict[int, CandidateRef]] = {}
    seen = set()
    for cand in candidates:
        key = (cand.sentence_index, cand.token_index)
        if key in seen:
            raise ValidationError(f"duplicate candidate reference {key}")
        seen.add(key)
        tok = _token_at(corpus, *key)
        if tok.pos != cand.original_pos:
            raise ValidationError(
                f"candidate at {key} records POS {cand.original_pos!r} "
                f"but the corpus has {tok.pos!r}")
        by_sentence.setdefault(cand.sentence_index, {})[cand.token_index] = cand
    new_sentences = []
    for si, sent in enumerate(corpus.sentences):
        hits = by_sentence.get(si)
        if not hits:
            new_sentences.append(sent)
            continue
        new_sentences.append(tuple(
            Token(t.word, new_pos(hits[ti]), t.bio) if ti in hits else t
            for ti, t in enumerate(sent)))
    return Corpus(tuple(new_sentences), corpus.scheme)


def apply_jn_relabel(corpus: Corpus, candidates: list[CandidateRef]) -> Corpus:
    """Relabel exactly the referenced tokens to POS ``JN``.

    Words and BIO tags are untouched; restoring the recorded original_pos
    values reproduces the input byte-exactly.
    """
    return _relabel(corpus, candidates, lambda cand: JN_TAG)


def apply_jj2nn_relabel(corpus: Corpus, candidates: list[CandidateRef],
                        mapping: dict[str, str] | None = None) -> Corpus:
    """Relabel referenced tokens to their noun counterparts (JJ2NN).

    ``mapping`` must cover every original_pos in the candidate list;
    defaults to JJ->NN, JJS->NNS.
    """
    table = JJ2NN_DEFAULT if mapping is None else mapping
    for cand in candidates:
        if cand.original_pos not in table:
            raise ConfigError(
                f"no JJ2NN mapping for original POS {cand.original_pos!r}")
    return _relabel(corpus, candidates, lambda cand: table[cand.original_pos])


def restore_original_pos(corpus: Corpus, candidates: list[CandidateRef]) -> Corpus:
    """Undo a relabel by writing each candidate's original_pos back."""
    refs = [CandidateRef(c.sentence_index, c.token_index,
                         corpus.sentences[c.sentence_index][c.token_index].pos)
            for c in candidates]
    by_ref = {(c.sentence_index, c.token_index): c.original_pos for c in candidates}
    return _relabel(corpus, refs,
                    lambda cand: by_ref[(cand.sentence_index, cand.token_index)])


@dataclass(frozen=True)
class ScreenStats:
    counts: dict[str, int]
    fractions: dict[str, float]
    total: int


def screening_stats(candidates: list[CandidateRef]) -> ScreenStats:
    """Histogram of original POS tags over a candidate list.

    Fractions sum to 1 whenever the list is non-empty.
    """
    counts = Counter(c.original_pos for c in candidates)
    total = sum(counts.values())
    fractions = {tag: n / total for tag, n in counts.items()} if total else {}
    return ScreenStats(dict(counts), fractions, total)


# ---------------------------------------------------------------------------
# file formats


def write_candidates(corpus: Corpus, candidates: list[CandidateRef]) -> str:
    """Candidate export: ``sentence<TAB>token<TAB>word<TAB>original_pos``."""
    lines = []
    for cand in candidates:
        word = _token_at(corpus, cand.sentence_index, cand.token_index).word
        lines.append(f"{cand.sentence_index}\t{cand.token_index}\t{word}\t{cand.original_pos}\n")
    return "".join(lines)


def read_candidates(text: str) -> list[CandidateRef]:
    out = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}",
                             line=lineno)
        try:
            out.append(CandidateRef(int(fields[0]), int(fields[1]), fields[3]))
        except ValueError:
            raise ParseError("sentence/token indices must be integers", line=lineno) from None
    return out


def parse_review_list(text: str) -> ReviewList:
    """Parse a review file: one ``accept|reject<TAB>key`` decision per line.

    Keys are ``s:<sentence>:<token>`` for positions or ``w:<word>`` for word
    forms.
    """
    positions: dict[tuple[int, int], str] = {}
    words: dict[str, str] = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.rstrip("\r").split("\t")
        if len(fields) != 2:
            raise ParseError(f"expected 2 tab-separated fields, got {len(fields)}",
                             line=lineno)
        decision, key = fields
        if decision not in ("accept", "reject"):
            raise ParseError(f"unknown decision {decision!r}", line=lineno)
        if key.startswith("s:"):
            parts = key.split(":")
            if len(parts) != 3:
                raise ParseError(f"bad position key {key!r}", line=lineno)
            try:
                positions[(int(parts[1]), int(parts[2]))] = decision
            except ValueError:
                raise ParseError(f"bad position key {key!r}", line=lineno) from None
        elif key.startswith("w:"):
            words[key[2:]] = decision
        else:
            raise ParseError(f"review key must start with 's:' or 'w:', got {key!r}",
                             line=lineno)
    return ReviewList(positions, words)
