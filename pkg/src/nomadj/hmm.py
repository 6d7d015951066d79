"""Bigram hidden-Markov POS tagger: smoothed ML training, Viterbi decoding.

All probabilities live in log space with a -inf sentinel for zero. Both
transition rows (over tags plus the stop symbol) and emission rows (over
the event space: every training word, the unknown-word suffix classes, and
a reserved fallback class) are add-k smoothed and sum to one.

Unknown words at decode time map to an event: the longest trained suffix
class in ``suffix`` mode (estimated from rare training words), or the
reserved fallback class, whose mass comes from the smoothing constant.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .corpus import Corpus
from .errors import ConfigError, ModelIOError, ValidationError

START_SYMBOL = "⟨START⟩"  # ⟨START⟩
STOP_SYMBOL = "⟨STOP⟩"    # ⟨STOP⟩

_UNK_EVENT = ("u", "")

_MODEL_MAGIC = "NOMADJ-HMM"
_MODEL_VERSION = 1

UNKNOWN_MODES = ("uniform", "suffix")


@dataclass(frozen=True)
class HmmConfig:
    transition_smoothing_k: float = 0.1
    emission_smoothing_k: float = 0.001
    unknown_word_mode: str = "suffix"
    suffix_max_len: int = 3
    rare_threshold: int = 1

    def __post_init__(self):
        if self.transition_smoothing_k < 0 or self.emission_smoothing_k < 0:
            raise ConfigError("smoothing constants must be >= 0")
        if self.suffix_max_len < 1:
            raise ConfigError("suffix_max_len must be >= 1")
        if self.unknown_word_mode not in UNKNOWN_MODES:
            raise ConfigError(
                f"unknown_word_mode must be one of {UNKNOWN_MODES}, "
                f"got {self.unknown_word_mode!r}")


@dataclass(frozen=True)
class TagSequence:
    tags: tuple[str, ...]
    score: float


class HmmModel:
    """Trained model parameters. Treat as immutable.

    ``trans_full`` is the complete smoothed log-transition matrix with row 0
    for the start symbol and the last column for the stop symbol;
    ``emissions`` maps an event to its per-tag log-probability vector, with
    ``emit_default_logp`` covering every (tag, event) pair never observed.
    """

    __slots__ = ("tags", "tag_index", "trans_full", "start_logp", "trans_logp",
                 "stop_logp", "emissions", "emit_default_logp", "vocabulary",
                 "suffixes", "unknown_word_mode", "suffix_max_len")

    def __init__(self, tags, trans_full, emissions, emit_default_logp,
                 vocabulary, suffixes, unknown_word_mode, suffix_max_len):
        self.tags = tuple(tags)
        self.tag_index = {t: i for i, t in enumerate(self.tags)}
        self.trans_full = trans_full
        n = len(self.tags)
        self.start_logp = np.ascontiguousarray(trans_full[0, :n])
        self.trans_logp = np.ascontiguousarray(trans_full[1:, :n])
        self.stop_logp = np.ascontiguousarray(trans_full[1:, n])
        self.emissions = emissions
        self.emit_default_logp = emit_default_logp
        self.vocabulary = frozenset(vocabulary)
        self.suffixes = frozenset(suffixes)
        self.unknown_word_mode = unknown_word_mode
        self.suffix_max_len = suffix_max_len

    def event_for(self, word: str) -> tuple[str, str]:
        """Resolve a word to its emission event (word, suffix class, or fallback)."""
        if word in self.vocabulary:
            return ("w", word)
        if self.unknown_word_mode == "suffix":
            for m in range(min(self.suffix_max_len, len(word)), 0, -1):
                suffix = word[-m:]
                if suffix in self.suffixes:
                    return ("s", suffix)
        return _UNK_EVENT

    def emission_logp_row(self, word: str) -> np.ndarray:
        row = self.emissions.get(self.event_for(word))
        return row if row is not None else self.emit_default_logp


def _logp(count, total, k, n_events):
    num = count + k
    if num == 0.0:
        return -math.inf
    return math.log(num) - math.log(total + k * n_events)


def train_hmm(train: Corpus, config: HmmConfig = HmmConfig()) -> HmmModel:
    """Train smoothed relative-frequency transition and emission tables.

    Words occurring at most ``rare_threshold`` times also contribute counts
    to the unknown-word suffix classes (suffix mode), so unseen words at
    decode time inherit the tag preferences of rare words that share a
    suffix.
    """
    if not train.sentences:
        raise ValidationError("cannot train on an empty corpus")
    word_counts: Counter[str] = Counter()
    for sent in train.sentences:
        for tok in sent:
            word_counts[tok.word] += 1
    rare = {w for w, c in word_counts.items() if c <= config.rare_threshold}

    tags = sorted({tok.pos for sent in train.sentences for tok in sent})
    for reserved in (START_SYMBOL, STOP_SYMBOL):
        if reserved in tags:
            raise ValidationError(f"corpus uses the reserved tag {reserved!r}")
    index = {t: i for i, t in enumerate(tags)}
    n = len(tags)

    trans_counts = np.zeros((n + 1, n + 1), dtype=np.int64)
    emit_counts: list[Counter] = [Counter() for _ in range(n)]
    suffixes: set[str] = set()
    use_suffix = config.unknown_word_mode == "suffix"
    for sent in train.sentences:
        prev_row = 0  # start row
        for tok in sent:
            ti = index[tok.pos]
            trans_counts[prev_row, ti] += 1
            prev_row = ti + 1
            emit_counts[ti][("w", tok.word)] += 1
            if use_suffix and tok.word in rare:
                for m in range(1, min(config.suffix_max_len, len(tok.word)) + 1):
                    suffix = tok.word[-m:]
                    emit_counts[ti][("s", suffix)] += 1
                    suffixes.add(suffix)
        trans_counts[prev_row, n] += 1  # stop column

    kt = config.transition_smoothing_k
    row_totals = trans_counts.sum(axis=1)
    trans_full = np.empty((n + 1, n + 1), dtype=np.float64)
    for r in range(n + 1):
        for c in range(n + 1):
            trans_full[r, c] = _logp(float(trans_counts[r, c]),
                                     float(row_totals[r]), kt, n + 1)

    ke = config.emission_smoothing_k
    n_events = len(word_counts) + len(suffixes) + 1  # vocab + suffix classes + fallback
    event_totals = [float(sum(cnt.values())) for cnt in emit_counts]
    defaults = np.array([_logp(0.0, event_totals[ti], ke, n_events)
                         for ti in range(n)])
    emissions: dict[tuple[str, str], np.ndarray] = {}
    for ti in range(n):
        for event, count in emit_counts[ti].items():
            row = emissions.get(event)
            if row is None:
                row = defaults.copy()
                emissions[event] = row
            row[ti] = _logp(float(count), event_totals[ti], ke, n_events)

    return HmmModel(tags, trans_full, emissions, defaults,
                    set(word_counts), suffixes,
                    config.unknown_word_mode, config.suffix_max_len)


def viterbi_decode(model: HmmModel, words: list[str]) -> TagSequence:
    """Argmax tag path under the bigram objective, including stop transition.

    Ties break toward the model's tag ordering at each backpointer decision.
    """
    if not words:
        raise ValidationError("cannot decode an empty word sequence")
    emit = np.stack([model.emission_logp_row(w) for w in words])
    path, score = kernels.viterbi_kernel(
        emit, model.start_logp, model.trans_logp, model.stop_logp)
    return TagSequence(tuple(model.tags[i] for i in path), float(score))


def sequence_log_prob(model: HmmModel, words: list[str], tags: list[str]) -> float:
    """Exact log-probability of one (words, tags) path under the model."""
    if len(words) != len(tags):
        raise ValidationError("words and tags must have equal length")
    if not words:
        raise ValidationError("cannot score an empty sequence")
    for tag in tags:
        if tag not in model.tag_index:
            raise ValidationError(f"tag {tag!r} not in the model tagset")
    ids = [model.tag_index[t] for t in tags]
    n = len(model.tags)
    total = model.trans_full[0, ids[0]]
    for a, b in zip(ids, ids[1:]):
        total += model.trans_full[a + 1, b]
    total += model.trans_full[ids[-1] + 1, n]
    for word, ti in zip(words, ids):
        total += model.emission_logp_row(word)[ti]
    return float(total)


# ---------------------------------------------------------------------------
# serialization: versioned line-oriented text
#
#   NOMADJ-HMM 1
#   meta<TAB>key<TAB>value
#   [TAGS]       one tag per line, in decode order
#   [TRANSITIONS]   T<TAB>prev<TAB>next<TAB>logp   (complete matrix)
#   [EMISSIONS]     D<TAB>tag<TAB>logp  then  E<TAB>tag<TAB>word<TAB>logp
#   [SUFFIXES]      S<TAB>tag<TAB>suffix<TAB>logp
#
# Only observed word/suffix entries are stored; the per-tag D default covers
# everything else. Log values use 17 significant digits and round-trip
# float64 exactly.


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_hmm(model: HmmModel) -> str:
    n = len(model.tags)
    lines = [f"{_MODEL_MAGIC} {_MODEL_VERSION}"]
    lines.append(f"meta\tunknown_mode\t{model.unknown_word_mode}")
    lines.append(f"meta\tsuffix_max_len\t{model.suffix_max_len}")
    lines.append("[TAGS]")
    lines.extend(model.tags)
    lines.append("[TRANSITIONS]")
    row_names = [START_SYMBOL] + list(model.tags)
    col_names = list(model.tags) + [STOP_SYMBOL]
    for r, rname in enumerate(row_names):
        for c, cname in enumerate(col_names):
            lines.append(f"T\t{rname}\t{cname}\t{_fmt(model.trans_full[r, c])}")
    lines.append("[EMISSIONS]")
    for ti, tag in enumerate(model.tags):
        lines.append(f"D\t{tag}\t{_fmt(model.emit_default_logp[ti])}")
    words = sorted(e[1] for e in model.emissions if e[0] == "w")
    suffix_events = sorted(e[1] for e in model.emissions if e[0] == "s")
    for word in words:
        row = model.emissions[("w", word)]
        for ti, tag in enumerate(model.tags):
            if row[ti] != model.emit_default_logp[ti]:
                lines.append(f"E\t{tag}\t{word}\t{_fmt(row[ti])}")
    lines.append("[SUFFIXES]")
    for suffix in suffix_events:
        row = model.emissions[("s", suffix)]
        for ti, tag in enumerate(model.tags):
            if row[ti] != model.emit_default_logp[ti]:
                lines.append(f"S\t{tag}\t{suffix}\t{_fmt(row[ti])}")
    return "\n".join(lines) + "\n"


def _parse_float(text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ModelIOError(f"line {lineno}: bad log value {text!r}") from None


def load_hmm(text: str) -> HmmModel:
    """Inverse of save_hmm; a loaded model decodes identically to the original."""
    lines = text.split("\n")
    if not lines or not lines[0].startswith(_MODEL_MAGIC + " "):
        raise ModelIOError("not a nomadj HMM model file")
    version = lines[0][len(_MODEL_MAGIC) + 1:]
    if version != str(_MODEL_VERSION):
        raise ModelIOError(
            f"unsupported model version {version!r} (reader expects {_MODEL_VERSION})")

    meta = {"unknown_mode": "suffix", "suffix_max_len": "3"}
    tags: list[str] = []
    trans_entries: dict[tuple[str, str], float] = {}
    defaults: dict[str, float] = {}
    word_entries: list[tuple[str, str, float]] = []
    suffix_entries: list[tuple[str, str, float]] = []
    section = None
    seen_sections = set()
    known_sections = ("[TAGS]", "[TRANSITIONS]", "[EMISSIONS]", "[SUFFIXES]")
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        if line in known_sections:
            section = line
            seen_sections.add(line)
            continue
        fields = line.split("\t")
        if section is None:
            if fields[0] != "meta" or len(fields) != 3:
                raise ModelIOError(f"line {lineno}: expected meta line, got {line!r}")
            meta[fields[1]] = fields[2]
        elif section == "[TAGS]":
            tags.append(line)
        elif section == "[TRANSITIONS]":
            if len(fields) != 4 or fields[0] != "T":
                raise ModelIOError(f"line {lineno}: bad transition entry")
            trans_entries[(fields[1], fields[2])] = _parse_float(fields[3], lineno)
        elif section == "[EMISSIONS]":
            if fields[0] == "D" and len(fields) == 3:
                defaults[fields[1]] = _parse_float(fields[2], lineno)
            elif fields[0] == "E" and len(fields) == 4:
                word_entries.append((fields[1], fields[2], _parse_float(fields[3], lineno)))
            else:
                raise ModelIOError(f"line {lineno}: bad emission entry")
        elif section == "[SUFFIXES]":
            if len(fields) != 4 or fields[0] != "S":
                raise ModelIOError(f"line {lineno}: bad suffix entry")
            suffix_entries.append((fields[1], fields[2], _parse_float(fields[3], lineno)))
        else:
            raise ModelIOError(f"line {lineno}: unknown section {section!r}")

    required = {"[TAGS]", "[TRANSITIONS]", "[EMISSIONS]", "[SUFFIXES]"}
    missing = required - seen_sections
    if missing:
        raise ModelIOError(f"truncated model file: missing {sorted(missing)}")
    if not tags:
        raise ModelIOError("model has no tags")
    n = len(tags)
    index = {t: i for i, t in enumerate(tags)}

    if len(trans_entries) != (n + 1) * (n + 1):
        raise ModelIOError("truncated model file: incomplete transition matrix")
    trans_full = np.empty((n + 1, n + 1), dtype=np.float64)
    row_names = [START_SYMBOL] + tags
    col_names = tags + [STOP_SYMBOL]
    for r, rname in enumerate(row_names):
        for c, cname in enumerate(col_names):
            try:
                trans_full[r, c] = trans_entries[(rname, cname)]
            except KeyError:
                raise ModelIOError(
                    f"missing transition {rname!r} -> {cname!r}") from None

    if set(defaults) != set(tags):
        raise ModelIOError("per-tag emission defaults incomplete")
    default_row = np.array([defaults[t] for t in tags])

    emissions: dict[tuple[str, str], np.ndarray] = {}
    vocabulary: set[str] = set()
    suffixes: set[str] = set()
    for kind, entries, pool in (("w", word_entries, vocabulary),
                                ("s", suffix_entries, suffixes)):
        for tag, name, value in entries:
            if tag not in index:
                raise ModelIOError(f"emission entry for unknown tag {tag!r}")
            event = (kind, name)
            row = emissions.get(event)
            if row is None:
                row = default_row.copy()
                emissions[event] = row
            row[index[tag]] = value
            pool.add(name)

    try:
        suffix_max_len = int(meta["suffix_max_len"])
    except ValueError:
        raise ModelIOError("bad suffix_max_len meta value") from None
    mode = meta["unknown_mode"]
    if mode not in UNKNOWN_MODES:
        raise ModelIOError(f"bad unknown_mode meta value {mode!r}")
    return HmmModel(tags, trans_full, emissions, default_row,
                    vocabulary, suffixes, mode, suffix_max_len)
