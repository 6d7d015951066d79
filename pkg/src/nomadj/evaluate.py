"""Token-, tag-, and chunk-level scoring plus baseline-vs-modified diffs.

Chunk scoring is span-exact: a predicted chunk counts as correct only when
its (sentence, start, end, type) matches a gold chunk, so the numbers are
invariant under IOB1/IOB2 re-encoding of either corpus. Degenerate 0/0
precisions or recalls report 0.0 with an explicit flag instead of being
dropped; with sparse tags like JN that case is routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Corpus, corpus_chunks
from .errors import AlignmentError, ComparisonError, ConfigError

COLUMNS = ("pos", "bio")


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False


@dataclass(frozen=True)
class ChunkScores:
    precision: float
    recall: float
    f1: float
    gold_count: int
    pred_count: int
    correct_count: int


@dataclass
class EvalReport:
    token_accuracy: float
    per_tag: dict[str, PRF]
    chunk: ChunkScores | None
    n_tokens: int
    column: str


@dataclass
class DeltaReport:
    """Per-metric (baseline, modified, modified - baseline) triples."""

    metrics: dict[str, tuple[float, float, float]]
    per_tag: dict[str, dict[str, tuple[float, float, float]]]
    added_tags: list[str] = field(default_factory=list)
    removed_tags: list[str] = field(default_factory=list)


def _check_aligned(gold: Corpus, pred: Corpus):
    if gold.n_sentences != pred.n_sentences:
        raise AlignmentError(
            f"sentence counts differ: gold {gold.n_sentences}, pred {pred.n_sentences}")
    for si, (gs, ps) in enumerate(zip(gold.sentences, pred.sentences)):
        if len(gs) != len(ps):
            raise AlignmentError(
                f"sentence {si}: lengths differ (gold {len(gs)}, pred {len(ps)})")
        for ti, (gt, pt) in enumerate(zip(gs, ps)):
            if gt.word != pt.word:
                raise AlignmentError(
                    f"sentence {si} token {ti}: words differ "
                    f"({gt.word!r} vs {pt.word!r})")


def _column_value(token, column: str) -> str:
    return token.pos if column == "pos" else token.bio


def _check_column(column: str):
    if column not in COLUMNS:
        raise ConfigError(f"column must be one of {COLUMNS}, got {column!r}")


def _iter_positions(gold: Corpus, positions):
    for si, sent in enumerate(gold.sentences):
        for ti in range(len(sent)):
            if positions is None or (si, ti) in positions:
                yield si, ti


def token_accuracy(gold: Corpus, pred: Corpus, column: str, positions=None) -> float:
    """Fraction of positions whose chosen column matches.

    ``positions`` optionally restricts scoring to a set of (sentence, token)
    pairs (used for candidate-subset evaluation).
    """
    _check_column(column)
    _check_aligned(gold, pred)
    total = correct = 0
    for si, ti in _iter_positions(gold, positions):
        total += 1
        if (_column_value(gold.sentences[si][ti], column)
                == _column_value(pred.sentences[si][ti], column)):
            correct += 1
    return correct / total if total else 0.0


def per_tag_prf(gold: Corpus, pred: Corpus, tag: str, column: str, positions=None) -> PRF:
    """Precision/recall/F1 for one tag as the positive class."""
    _check_column(column)
    _check_aligned(gold, pred)
    tp = fp = fn = 0
    for si, ti in _iter_positions(gold, positions):
        g = _column_value(gold.sentences[si][ti], column) == tag
        p = _column_value(pred.sentences[si][ti], column) == tag
        tp += g and p
        fp += p and not g
        fn += g and not p
    return _prf_from_counts(tp, fp, fn)


def _prf_from_counts(tp: int, fp: int, fn: int) -> PRF:
    degenerate = (tp + fp == 0) or (tp + fn == 0)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF(precision, recall, f1, tp + fn, degenerate)


def chunk_prf(gold: Corpus, pred: Corpus) -> ChunkScores:
    """Span-exact chunk precision/recall/F1 over the whole corpus."""
    _check_aligned(gold, pred)
    gold_spans = set(corpus_chunks(gold))
    pred_spans = set(corpus_chunks(pred))
    correct = len(gold_spans & pred_spans)
    precision = correct / len(pred_spans) if pred_spans else 0.0
    recall = correct / len(gold_spans) if gold_spans else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ChunkScores(precision, recall, f1,
                       len(gold_spans), len(pred_spans), correct)


def evaluate(gold: Corpus, pred: Corpus, column: str, positions=None) -> EvalReport:
    """Full report: token accuracy, per-tag P/R/F1 for every observed tag,
    and (for the bio column) span-level chunk scores."""
    _check_column(column)
    _check_aligned(gold, pred)
    accuracy = token_accuracy(gold, pred, column, positions)
    tags = sorted(
        {_column_value(gold.sentences[si][ti], column)
         for si, ti in _iter_positions(gold, positions)}
        | {_column_value(pred.sentences[si][ti], column)
           for si, ti in _iter_positions(gold, positions)})
    per_tag = {tag: per_tag_prf(gold, pred, tag, column, positions) for tag in tags}
    chunk = chunk_prf(gold, pred) if column == "bio" else None
    n_tokens = sum(1 for _ in _iter_positions(gold, positions))
    return EvalReport(accuracy, per_tag, chunk, n_tokens, column)


def compare_runs(baseline: EvalReport, modified: EvalReport) -> DeltaReport:
    """Exact per-metric differences (modified - baseline).

    Tags present in only one run are listed as added/removed rather than
    subtracted. Reports with different top-level metric sets (e.g. one with
    chunk scores, one without) cannot be compared.
    """
    def metric_map(report: EvalReport) -> dict[str, float]:
        out = {"token_accuracy": report.token_accuracy}
        if report.chunk is not None:
            out["chunk_precision"] = report.chunk.precision
            out["chunk_recall"] = report.chunk.recall
            out["chunk_f1"] = report.chunk.f1
        return out

    base_metrics = metric_map(baseline)
    mod_metrics = metric_map(modified)
    if set(base_metrics) != set(mod_metrics):
        raise ComparisonError(
            f"metric sets differ: {sorted(base_metrics)} vs {sorted(mod_metrics)}")
    metrics = {name: (base_metrics[name], mod_metrics[name],
                      mod_metrics[name] - base_metrics[name])
               for name in sorted(base_metrics)}

    base_tags = set(baseline.per_tag)
    mod_tags = set(modified.per_tag)
    per_tag = {}
    for tag in sorted(base_tags & mod_tags):
        b, m = baseline.per_tag[tag], modified.per_tag[tag]
        per_tag[tag] = {
            "precision": (b.precision, m.precision, m.precision - b.precision),
            "recall": (b.recall, m.recall, m.recall - b.recall),
            "f1": (b.f1, m.f1, m.f1 - b.f1),
        }
    return DeltaReport(metrics, per_tag,
                       added_tags=sorted(mod_tags - base_tags),
                       removed_tags=sorted(base_tags - mod_tags))


# ---------------------------------------------------------------------------
# rendering


def _pct(x: float) -> str:
    return f"{100.0 * x:.2f}"


def render_report_text(report: EvalReport, name: str = "Model") -> str:
    lines = [f"{name}: token accuracy {_pct(report.token_accuracy)}% "
             f"over {report.n_tokens} tokens ({report.column} column)"]
    if report.chunk is not None:
        c = report.chunk
        lines.append(
            f"chunks: P {_pct(c.precision)}%  R {_pct(c.recall)}%  "
            f"F1 {_pct(c.f1)}%  (gold {c.gold_count}, predicted {c.pred_count}, "
            f"correct {c.correct_count})")
    lines.append(f"{'tag':<12}{'P%':>8}{'R%':>8}{'F1%':>8}{'support':>9}")
    for tag in sorted(report.per_tag):
        s = report.per_tag[tag]
        flag = "  (degenerate)" if s.degenerate else ""
        lines.append(f"{tag:<12}{_pct(s.precision):>8}{_pct(s.recall):>8}"
                     f"{_pct(s.f1):>8}{s.support:>9}{flag}")
    return "\n".join(lines) + "\n"


def render_report_kv(report: EvalReport, prefix: str) -> str:
    """Machine-readable ``key: value`` lines for CI assertions."""
    lines = [f"{prefix}.token_accuracy: {report.token_accuracy:.8f}",
             f"{prefix}.n_tokens: {report.n_tokens}"]
    if report.chunk is not None:
        c = report.chunk
        lines.append(f"{prefix}.chunk_precision: {c.precision:.8f}")
        lines.append(f"{prefix}.chunk_recall: {c.recall:.8f}")
        lines.append(f"{prefix}.chunk_f1: {c.f1:.8f}")
        lines.append(f"{prefix}.chunk_counts: {c.gold_count} {c.pred_count} {c.correct_count}")
    for tag in sorted(report.per_tag):
        s = report.per_tag[tag]
        lines.append(f"{prefix}.tag.{tag}.precision: {s.precision:.8f}")
        lines.append(f"{prefix}.tag.{tag}.recall: {s.recall:.8f}")
        lines.append(f"{prefix}.tag.{tag}.f1: {s.f1:.8f}")
        lines.append(f"{prefix}.tag.{tag}.support: {s.support}")
        lines.append(f"{prefix}.tag.{tag}.degenerate: {int(s.degenerate)}")
    return "\n".join(lines) + "\n"


_TABLE_COLUMNS = ("token_accuracy", "chunk_precision", "chunk_recall", "chunk_f1")
_TABLE_HEADERS = ("Accuracy %", "Precision %", "Recall %", "F1 %")


def render_delta_table(delta: DeltaReport, baseline_name: str = "Baseline",
                       modified_name: str = "Modified") -> str:
    """Aligned comparison table (Model / Accuracy / Precision / Recall / F1)."""
    def row(name, getter):
        cells = [f"{name:<10}"]
        for metric in _TABLE_COLUMNS:
            if metric in delta.metrics:
                cells.append(f"{getter(delta.metrics[metric]):>12}")
            else:
                cells.append(f"{'-':>12}")
        return "".join(cells)

    header = f"{'Model':<10}" + "".join(f"{h:>12}" for h in _TABLE_HEADERS)
    lines = [header,
             row(baseline_name, lambda t: _pct(t[0])),
             row(modified_name, lambda t: _pct(t[1])),
             row("Diff", lambda t: f"{100.0 * t[2]:+.2f}")]
    for tag in sorted(delta.per_tag):
        triples = delta.per_tag[tag]
        lines.append(
            f"tag {tag}: "
            + "  ".join(f"{m} {_pct(t[0])}->{_pct(t[1])} ({100.0 * t[2]:+.2f})"
                        for m, t in sorted(triples.items())))
    if delta.added_tags:
        lines.append("tags only in modified: " + " ".join(delta.added_tags))
    if delta.removed_tags:
        lines.append("tags only in baseline: " + " ".join(delta.removed_tags))
    return "\n".join(lines) + "\n"


def render_delta_tsv(delta: DeltaReport, baseline_name: str = "Baseline",
                     modified_name: str = "Modified") -> str:
    lines = ["Model\tAccuracy %\tPrecision %\tRecall %\tF1 %"]

    def row(name, getter):
        cells = [name]
        for metric in _TABLE_COLUMNS:
            cells.append(getter(delta.metrics[metric]) if metric in delta.metrics else "-")
        return "\t".join(cells)

    lines.append(row(baseline_name, lambda t: _pct(t[0])))
    lines.append(row(modified_name, lambda t: _pct(t[1])))
    lines.append(row("Diff", lambda t: f"{100.0 * t[2]:+.2f}"))
    return "\n".join(lines) + "\n"


def render_delta_kv(delta: DeltaReport) -> str:
    lines = []
    for name in sorted(delta.metrics):
        b, m, d = delta.metrics[name]
        lines.append(f"delta.{name}.baseline: {b:.8f}")
        lines.append(f"delta.{name}.modified: {m:.8f}")
        lines.append(f"delta.{name}.diff: {d:.8f}")
    for tag in sorted(delta.per_tag):
        for metric in sorted(delta.per_tag[tag]):
            b, m, d = delta.per_tag[tag][metric]
            lines.append(f"delta.tag.{tag}.{metric}.baseline: {b:.8f}")
            lines.append(f"delta.tag.{tag}.{metric}.modified: {m:.8f}")
            lines.append(f"delta.tag.{tag}.{metric}.diff: {d:.8f}")
    if delta.added_tags:
        lines.append("delta.added_tags: " + " ".join(delta.added_tags))
    if delta.removed_tags:
        lines.append("delta.removed_tags: " + " ".join(delta.removed_tags))
    return "\n".join(lines) + "\n"
