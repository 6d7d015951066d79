"""Context POS-tag distributions and their cosine similarity.

For a target class of POS tags, tally the POS of the token immediately
preceding (or following) every occurrence, normalize to probabilities, and
compare classes with cosine similarity over the union tag vocabulary.
Sentence boundaries count under a reserved symbol by default so that the
probabilities always sum to one over all occurrences.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import ConfigError, UndefinedSimilarityError

BOUNDARY = "⟨BOUNDARY⟩"  # ⟨BOUNDARY⟩

DIRECTIONS = ("preceding", "following")


@dataclass(frozen=True)
class TagDistribution:
    direction: str
    target: str
    probs: dict[str, float]
    support_count: int


@dataclass(frozen=True)
class ProfileReport:
    #: (target A, target B, direction, cosine) rows, first target vs the rest.
    pairs: tuple[tuple[str, str, str, float], ...]
    distributions: tuple[TagDistribution, ...]


def context_distribution(corpus: Corpus, target_tags: Iterable[str], direction: str,
                         include_boundary: bool = True, name: str | None = None) -> TagDistribution:
    """Distribution of context POS tags adjacent to the target tag class.

    With ``include_boundary`` (the default) sentence edges are tallied under
    the reserved boundary symbol; otherwise edge occurrences are skipped.
    Zero occurrences yield an empty distribution with support_count 0.
    """
    if direction not in DIRECTIONS:
        raise ConfigError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    targets = set(target_tags)
    counts: Counter[str] = Counter()
    total = 0
    for sent in corpus.sentences:
        for i, tok in enumerate(sent):
            if tok.pos not in targets:
                continue
            j = i - 1 if direction == "preceding" else i + 1
            if 0 <= j < len(sent):
                symbol = sent[j].pos
            elif include_boundary:
                symbol = BOUNDARY
            else:
                continue
            counts[symbol] += 1
            total += 1
    probs = {tag: n / total for tag, n in counts.items()} if total else {}
    label = name if name is not None else "/".join(sorted(targets))
    return TagDistribution(direction, label, probs, total)


def cosine_similarity(a: TagDistribution, b: TagDistribution) -> float:
    """Cosine of two distributions over the union of their tag keys.

    Missing keys count as zero; no smoothing. Both distributions must have
    positive support.
    """
    if a.support_count == 0 or b.support_count == 0:
        raise UndefinedSimilarityError(
            f"cosine undefined: empty distribution for "
            f"{a.target if a.support_count == 0 else b.target!r}")
    keys = sorted(a.probs.keys() | b.probs.keys())
    dot = sum(a.probs.get(k, 0.0) * b.probs.get(k, 0.0) for k in keys)
    norm_a = math.sqrt(sum(v * v for v in a.probs.values()))
    norm_b = math.sqrt(sum(v * v for v in b.probs.values()))
    return min(1.0, dot / (norm_a * norm_b))


def profile_report(corpus: Corpus, target_sets: Sequence[tuple[str, Iterable[str]]],
                   include_boundary: bool = True) -> ProfileReport:
    """Compare the first named tag class against every other, both directions.

    ``target_sets`` is an ordered list of (name, tags) pairs, e.g.
    ``[("JN", {"JN"}), ("NN/NNS", {"NN", "NNS"})]``.
    """
    if len(target_sets) < 2:
        raise ConfigError("profile needs at least two target sets")
    dists: dict[tuple[str, str], TagDistribution] = {}
    ordered: list[TagDistribution] = []
    for direction in DIRECTIONS:
        for name, tags in target_sets:
            dist = context_distribution(corpus, tags, direction,
                                        include_boundary=include_boundary, name=name)
            dists[(name, direction)] = dist
            ordered.append(dist)
    first = target_sets[0][0]
    pairs = []
    for direction in DIRECTIONS:
        for name, _tags in target_sets[1:]:
            value = cosine_similarity(dists[(first, direction)], dists[(name, direction)])
            pairs.append((first, name, direction, value))
    return ProfileReport(tuple(pairs), tuple(ordered))


def render_profile_report(report: ProfileReport) -> str:
    """Tab-separated report: pair table first, then one block per distribution."""
    lines = ["targetA\ttargetB\tdirection\tcosine"]
    for a, b, direction, value in report.pairs:
        lines.append(f"{a}\t{b}\t{direction}\t{value:.6f}")
    for dist in report.distributions:
        lines.append("")
        lines.append(f"# distribution\t{dist.target}\t{dist.direction}\t"
                     f"support={dist.support_count}")
        for tag in sorted(dist.probs):
            lines.append(f"{tag}\t{dist.probs[tag]:.6f}")
    return "\n".join(lines) + "\n"
