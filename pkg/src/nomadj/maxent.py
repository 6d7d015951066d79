"""Log-linear (MaxEnt) BIO chunk tagger with greedy sequence decoding.

Each token position becomes one classification example: binary predicate
features drawn from word/POS context templates plus the previous label
(MEMM-style). Weights live in a (predicates x labels) matrix, trained by
full-batch gradient ascent on the L2-regularized conditional log-likelihood
with a backtracking (Armijo) line search, so the objective never decreases
across accepted steps. Decoding is greedy left-to-right followed by an IOB2
structural repair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .corpus import Corpus, Sentence
from .errors import ConfigError, ModelIOError, ValidationError

BOS = "⟨BOS⟩"  # ⟨BOS⟩
EOS = "⟨EOS⟩"  # ⟨EOS⟩

_MODEL_MAGIC = "NOMADJ-MAXENT"
_MODEL_VERSION = 1

#: Template identifiers of the default feature set, in emission order.
TEMPLATE_SETS = {
    "default": ("w0", "lw0", "w-1", "w+1", "p0", "p-1", "p-2", "p+1", "p+2",
                "pb", "pl", "plp0", "sh"),
}


@dataclass(frozen=True)
class MaxEntConfig:
    l2_lambda: float = 0.1
    max_iterations: int = 200
    convergence_tol: float = 1e-6
    optimizer_mode: str = "full_batch"
    feature_template_set: str = "default"

    def __post_init__(self):
        if self.l2_lambda < 0:
            raise ConfigError("l2_lambda must be >= 0")
        if self.max_iterations < 0:
            raise ConfigError("max_iterations must be >= 0")
        if self.optimizer_mode != "full_batch":
            raise ConfigError("only the full_batch optimizer is supported")
        if self.feature_template_set not in TEMPLATE_SETS:
            raise ConfigError(
                f"unknown feature template set {self.feature_template_set!r}")


def word_shape(word: str) -> str:
    """Capitalization/digit pattern with runs collapsed, e.g. "IBM-360" -> "X-d"."""
    out: list[str] = []
    last = None
    for ch in word:
        if ch.isupper():
            cls = "X"
        elif ch.islower():
            cls = "x"
        elif ch.isdigit():
            cls = "d"
        else:
            cls = ch
        if cls != last:
            out.append(cls)
            last = cls
    return "".join(out)


def feature_strings(sentence: Sentence, position: int, prev_label: str) -> list[str]:
    """Expand the default templates at one position.

    Out-of-range context substitutes the BOS/EOS placeholders; the first
    position receives BOS as prev_label.
    """
    n = len(sentence)
    tok = sentence[position]
    i = position

    def word(j):
        return sentence[j].word if 0 <= j < n else (BOS if j < 0 else EOS)

    def pos(j):
        return sentence[j].pos if 0 <= j < n else (BOS if j < 0 else EOS)

    return [
        "w0=" + tok.word,
        "lw0=" + tok.word.lower(),
        "w-1=" + word(i - 1),
        "w+1=" + word(i + 1),
        "p0=" + tok.pos,
        "p-1=" + pos(i - 1),
        "p-2=" + pos(i - 2),
        "p+1=" + pos(i + 1),
        "p+2=" + pos(i + 2),
        "pb=" + pos(i - 1) + "|" + tok.pos,
        "pl=" + prev_label,
        "plp0=" + prev_label + "|" + tok.pos,
        "sh=" + word_shape(tok.word),
    ]


class FeatureIndex:
    """Bijective feature-string/id map, frozen after training."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._strings: list[str] = []

    def intern(self, s: str) -> int:
        i = self._ids.get(s)
        if i is None:
            i = len(self._strings)
            self._ids[s] = i
            self._strings.append(s)
        return i

    def get(self, s: str):
        return self._ids.get(s)

    def string(self, i: int) -> str:
        return self._strings[i]

    def __len__(self) -> int:
        return len(self._strings)

    def strings(self) -> list[str]:
        return list(self._strings)


@dataclass(frozen=True)
class FeatureVector:
    ids: tuple[int, ...]


def extract_features(sentence: Sentence, position: int, prev_label: str,
                     index: FeatureIndex | None = None,
                     frozen: bool = False) -> FeatureVector:
    """Feature ids active at one position.

    With a frozen index, strings unseen at training time are dropped; with
    no index a transient one is built, so ids enumerate this position's
    features.
    """
    strings = feature_strings(sentence, position, prev_label)
    if index is None:
        index = FeatureIndex()
        frozen = False
    ids = []
    for s in strings:
        i = index.get(s) if frozen else index.intern(s)
        if i is not None:
            ids.append(i)
    return FeatureVector(tuple(ids))


@dataclass
class TrainingData:
    """Per-token examples in CSR layout over predicate ids."""

    indptr: np.ndarray
    indices: np.ndarray
    gold: np.ndarray
    n_predicates: int
    labels: tuple[str, ...]

    @property
    def n_examples(self) -> int:
        return len(self.gold)


def build_training_data(corpus: Corpus) -> tuple[TrainingData, FeatureIndex]:
    """One example per token with gold previous labels as history."""
    labels = tuple(sorted({tok.bio for sent in corpus.sentences for tok in sent}))
    label_index = {lab: i for i, lab in enumerate(labels)}
    index = FeatureIndex()
    indptr = [0]
    indices: list[int] = []
    gold: list[int] = []
    for sent in corpus.sentences:
        prev = BOS
        for i, tok in enumerate(sent):
            for s in feature_strings(sent, i, prev):
                indices.append(index.intern(s))
            indptr.append(len(indices))
            gold.append(label_index[tok.bio])
            prev = tok.bio
    data = TrainingData(
        np.asarray(indptr, dtype=np.int32),
        np.asarray(indices, dtype=np.int32),
        np.asarray(gold, dtype=np.int32),
        len(index), labels)
    return data, index


def objective_and_gradient(weights: np.ndarray, data: TrainingData,
                           l2_lambda: float) -> tuple[float, np.ndarray]:
    """Regularized conditional log-likelihood and its exact gradient.

    Objective: sum_i log P(gold_i | x_i) - l2_lambda * ||w||^2, with
    gradient (observed - expected counts) - 2 * l2_lambda * w.
    """
    w = np.ascontiguousarray(weights, dtype=np.float64)
    loglik, raw = kernels.maxent_obj_grad_kernel(
        data.indptr, data.indices, data.gold, w, True)
    penalty = l2_lambda * float((w * w).sum())
    return loglik - penalty, raw - 2.0 * l2_lambda * w


def _objective_only(weights: np.ndarray, data: TrainingData, l2_lambda: float) -> float:
    w = np.ascontiguousarray(weights, dtype=np.float64)
    loglik, _ = kernels.maxent_obj_grad_kernel(
        data.indptr, data.indices, data.gold, w, False)
    return loglik - l2_lambda * float((w * w).sum())


class MaxEntModel:
    """Trained weights plus the frozen feature index and label set."""

    __slots__ = ("labels", "label_index", "feature_index", "weights",
                 "template_set", "history", "converged", "n_iterations")

    def __init__(self, labels, feature_index, weights, template_set):
        self.labels = tuple(labels)
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.feature_index = feature_index
        self.weights = weights
        self.template_set = template_set
        self.history: list[float] = []   # accepted objectives, training only
        self.converged = False
        self.n_iterations = 0


def train_maxent(train: Corpus, config: MaxEntConfig = MaxEntConfig()) -> MaxEntModel:
    """Fit weights by monotone full-batch gradient ascent.

    The step direction is the gradient, with a Barzilai-Borwein trial step
    safeguarded by Armijo backtracking, so every accepted step increases the
    objective. Converged means the gradient max-norm fell within 10x
    convergence_tol (at which point the relative objective change is far
    below the tolerance); otherwise training stops at max_iterations.
    """
    if not train.sentences:
        raise ValidationError("cannot train on an empty corpus")
    data, index = build_training_data(train)
    n_predicates, n_labels = len(index), len(data.labels)
    weights = np.zeros((n_predicates, n_labels))
    model = MaxEntModel(data.labels, index, weights, config.feature_template_set)

    lam = config.l2_lambda
    obj, grad = objective_and_gradient(weights, data, lam)
    model.history.append(obj)
    step = 1.0
    prev_weights = prev_grad = None
    for iteration in range(config.max_iterations):
        grad_max = float(np.abs(grad).max()) if grad.size else 0.0
        if grad_max <= 10.0 * config.convergence_tol:
            model.converged = True
            break
        if prev_grad is not None:
            s = (weights - prev_weights).ravel()
            y = (prev_grad - grad).ravel()
            sy = float(s @ y)
            trial = float(s @ s) / sy if sy > 1e-300 else step * 2.0
            if not 1e-12 <= trial <= 1e12:
                trial = step * 2.0
        else:
            trial = step
        grad_norm2 = float((grad * grad).sum())
        alpha = trial
        accepted = False
        while alpha >= 1e-20:
            candidate = weights + alpha * grad
            if _objective_only(candidate, data, lam) >= obj + 1e-4 * alpha * grad_norm2:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break  # numerically stalled; gradient too noisy to improve on
        prev_weights, prev_grad = weights, grad
        weights = candidate
        step = alpha
        obj, grad = objective_and_gradient(weights, data, lam)
        model.history.append(obj)
        model.n_iterations = iteration + 1

    model.weights = weights
    return model


def label_scores(model: MaxEntModel, sentence: Sentence, position: int,
                 prev_label: str) -> np.ndarray:
    """Unnormalized label scores at one position (frozen feature lookup)."""
    ids = []
    for s in feature_strings(sentence, position, prev_label):
        j = model.feature_index.get(s)
        if j is not None:
            ids.append(j)
    if not ids:
        return np.zeros(len(model.labels))
    return model.weights[ids].sum(axis=0)


def label_probabilities(model: MaxEntModel, sentence: Sentence, position: int,
                        prev_label: str) -> np.ndarray:
    scores = label_scores(model, sentence, position, prev_label)
    scores = scores - scores.max()
    expd = np.exp(scores)
    return expd / expd.sum()


def repair_bio(labels: list[str]) -> list[str]:
    """Rewrite illegal IOB2 continuations: I-X after O, a different type, or
    sentence start becomes B-X."""
    out: list[str] = []
    for i, label in enumerate(labels):
        if label.startswith("I-"):
            ctype = label[2:]
            prev = out[i - 1] if i else "O"
            if prev not in (f"B-{ctype}", f"I-{ctype}"):
                label = "B-" + ctype
        out.append(label)
    return out


def predict_bio(model: MaxEntModel, sentence: Sentence) -> list[str]:
    """Greedy left-to-right decode; raw predictions feed the next position's
    prev_label, and the final sequence passes IOB2 structural repair."""
    prev = BOS
    raw = []
    for i in range(len(sentence)):
        scores = label_scores(model, sentence, i, prev)
        label = model.labels[int(np.argmax(scores))]
        raw.append(label)
        prev = label
    return repair_bio(raw)


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_maxent(model: MaxEntModel) -> str:
    lines = [f"{_MODEL_MAGIC} {_MODEL_VERSION}"]
    lines.append(f"meta\ttemplate_set\t{model.template_set}")
    lines.append("[LABELS]")
    lines.extend(model.labels)
    lines.append("[TEMPLATES]")
    lines.extend(TEMPLATE_SETS[model.template_set])
    lines.append("[FEATURES]")
    for i, s in enumerate(model.feature_index.strings()):
        lines.append(f"{i}\t{s}")
    lines.append("[WEIGHTS]")
    rows, cols = np.nonzero(model.weights)
    for r, c in zip(rows.tolist(), cols.tolist()):
        lines.append(f"W\t{r}\t{c}\t{_fmt(model.weights[r, c])}")
    return "\n".join(lines) + "\n"


def load_maxent(text: str) -> MaxEntModel:
    lines = text.split("\n")
    if not lines or not lines[0].startswith(_MODEL_MAGIC + " "):
        raise ModelIOError("not a nomadj MaxEnt model file")
    version = lines[0][len(_MODEL_MAGIC) + 1:]
    if version != str(_MODEL_VERSION):
        raise ModelIOError(
            f"unsupported model version {version!r} (reader expects {_MODEL_VERSION})")
    meta = {"template_set": "default"}
    labels: list[str] = []
    features: list[tuple[int, str]] = []
    weight_entries: list[tuple[int, int, float]] = []
    section = None
    seen = set()
    known_sections = ("[LABELS]", "[TEMPLATES]", "[FEATURES]", "[WEIGHTS]")
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        if line in known_sections:
            section = line
            seen.add(line)
            continue
        if section is None:
            fields = line.split("\t")
            if fields[0] != "meta" or len(fields) != 3:
                raise ModelIOError(f"line {lineno}: expected meta line")
            meta[fields[1]] = fields[2]
        elif section == "[LABELS]":
            labels.append(line)
        elif section == "[TEMPLATES]":
            pass  # informational; the set is identified by name
        elif section == "[FEATURES]":
            fields = line.split("\t")
            if len(fields) != 2:
                raise ModelIOError(f"line {lineno}: bad feature entry")
            try:
                features.append((int(fields[0]), fields[1]))
            except ValueError:
                raise ModelIOError(f"line {lineno}: bad feature id") from None
        elif section == "[WEIGHTS]":
            fields = line.split("\t")
            if len(fields) != 4 or fields[0] != "W":
                raise ModelIOError(f"line {lineno}: bad weight entry")
            try:
                weight_entries.append(
                    (int(fields[1]), int(fields[2]), float(fields[3])))
            except ValueError:
                raise ModelIOError(f"line {lineno}: bad weight value") from None
    missing = set(known_sections) - seen
    if missing:
        raise ModelIOError(f"truncated model file: missing {sorted(missing)}")
    if not labels:
        raise ModelIOError("model has no labels")
    template_set = meta["template_set"]
    if template_set not in TEMPLATE_SETS:
        raise ModelIOError(f"unknown template set {template_set!r}")

    index = FeatureIndex()
    for expected, (i, s) in enumerate(features):
        if i != expected:
            raise ModelIOError(f"feature ids must be consecutive from 0, got {i}")
        index.intern(s)
    weights = np.zeros((len(index), len(labels)))
    for r, c, value in weight_entries:
        if not (0 <= r < len(index) and 0 <= c < len(labels)):
            raise ModelIOError(f"weight entry ({r}, {c}) out of range")
        weights[r, c] = value
    model = MaxEntModel(labels, index, weights, template_set)
    return model
