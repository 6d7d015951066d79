"""End-to-end experiment pipeline: screen, relabel, split, train both arms,
evaluate, compare.

Both arms (baseline POS tags vs relabeled POS tags) consume the identical
sentence split derived from the single top-level seed, and the relabeled
arm's BIO column is byte-identical to the baseline's by construction; the
pipeline asserts both. Every run writes a manifest with the input digest,
the resolved configuration, and a digest per artifact, so identical
(input, config) pairs reproduce identical outputs byte for byte. Wall-clock
timings go to a separate file to keep the manifest deterministic.
"""

from __future__ import annotations

import hashlib
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .corpus import (Corpus, Scheme, normalize_bio, parse_pos_chunk,
                     replace_column, select_sentences, split_indices,
                     write_pos_chunk)
from .errors import ConfigError, NomadjError
from .evaluate import (EvalReport, compare_runs, evaluate, per_tag_prf,
                       render_delta_kv, render_delta_table, render_delta_tsv,
                       render_report_kv, render_report_text)
from .hmm import HmmConfig, save_hmm, train_hmm, viterbi_decode
from .kernels import backend_name
from .maxent import MaxEntConfig, predict_bio, save_maxent, train_maxent
from .screener import (ScreenConfig, apply_jj2nn_relabel, apply_jn_relabel,
                       apply_review, parse_review_list, screen_candidates,
                       screening_stats, write_candidates)

TASKS = ("pos_hmm", "bio_maxent")
TRANSFORMS = ("jn", "jj2nn")


@dataclass
class ExperimentConfig:
    input_path: str
    output_dir: str
    seed: int = 0
    train_fraction: float = 0.9
    dev_fraction: float = 0.0
    tasks: tuple[str, ...] = TASKS
    transform: str = "jn"
    review_path: str | None = None
    scheme: str = "auto"
    screen: ScreenConfig = field(default_factory=ScreenConfig)
    hmm: HmmConfig = field(default_factory=HmmConfig)
    maxent: MaxEntConfig = field(default_factory=MaxEntConfig)

    def __post_init__(self):
        if not self.tasks:
            raise ConfigError("tasks must not be empty")
        for task in self.tasks:
            if task not in TASKS:
                raise ConfigError(f"unknown task {task!r} (choose from {TASKS})")
        if self.transform not in TRANSFORMS:
            raise ConfigError(f"unknown transform {self.transform!r}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie strictly between 0 and 1")
        if not 0.0 <= self.dev_fraction < 1.0:
            raise ConfigError("dev_fraction must lie in [0, 1)")
        if self.scheme not in ("auto", "iob1", "iob2"):
            raise ConfigError(f"scheme must be auto, iob1, or iob2, got {self.scheme!r}")


@dataclass
class RunManifest:
    toolkit_version: str
    backend: str
    input_path: str
    input_digest: str
    config_items: tuple[tuple[str, str], ...]
    split_digests: tuple[tuple[str, str], ...]
    artifact_digests: tuple[tuple[str, str], ...]
    timings: tuple[tuple[str, float], ...]


def _join(values) -> str:
    return ",".join(sorted(values))


def config_items(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    """Canonical flat key=value view of the effective configuration."""
    items = [
        ("input", cfg.input_path),
        ("output_dir", cfg.output_dir),
        ("seed", str(cfg.seed)),
        ("train_fraction", repr(cfg.train_fraction)),
        ("dev_fraction", repr(cfg.dev_fraction)),
        ("tasks", ",".join(cfg.tasks)),
        ("transform", cfg.transform),
        ("review", cfg.review_path or ""),
        ("scheme", cfg.scheme),
        ("screen.adjective_tags", _join(cfg.screen.adjective_tags)),
        ("screen.include_jjr", str(cfg.screen.include_jjr).lower()),
        ("screen.determiner_tags", _join(cfg.screen.determiner_tags)),
        ("screen.adverb_tags", _join(cfg.screen.adverb_tags)),
        ("screen.max_adverbs", str(cfg.screen.max_adverbs)),
        ("screen.require_np_final", str(cfg.screen.require_np_final).lower()),
        ("screen.forbidden_next_pos", _join(cfg.screen.forbidden_next_pos)),
        ("screen.chunk_type", cfg.screen.chunk_type),
        ("hmm.transition_k", repr(cfg.hmm.transition_smoothing_k)),
        ("hmm.emission_k", repr(cfg.hmm.emission_smoothing_k)),
        ("hmm.unknown_mode", cfg.hmm.unknown_word_mode),
        ("hmm.suffix_max_len", str(cfg.hmm.suffix_max_len)),
        ("hmm.rare_threshold", str(cfg.hmm.rare_threshold)),
        ("maxent.l2_lambda", repr(cfg.maxent.l2_lambda)),
        ("maxent.max_iterations", str(cfg.maxent.max_iterations)),
        ("maxent.convergence_tol", repr(cfg.maxent.convergence_tol)),
        ("maxent.templates", cfg.maxent.feature_template_set),
    ]
    return items


def render_config(cfg: ExperimentConfig) -> str:
    return "".join(f"{k}={v}\n" for k, v in config_items(cfg))


_BOOL_VALUES = {"true": True, "1": True, "yes": True,
                "false": False, "0": False, "no": False}


def _parse_bool(value: str, key: str) -> bool:
    try:
        return _BOOL_VALUES[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"{key}: expected a boolean, got {value!r}") from None


def _parse_num(value: str, key: str, kind):
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


def _parse_set(value: str) -> frozenset[str]:
    return frozenset(v for v in (p.strip() for p in value.split(",")) if v)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse the flat ``key=value`` config format (``#`` starts a comment)."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out


def build_experiment_config(values: dict[str, str]) -> ExperimentConfig:
    """Typed ExperimentConfig from flat key/value strings; unknown keys fail."""
    values = dict(values)

    def take(key, default=None):
        return values.pop(key, default)

    screen_kwargs = {}
    for key, attr, conv in (
            ("screen.adjective_tags", "adjective_tags", _parse_set),
            ("screen.determiner_tags", "determiner_tags", _parse_set),
            ("screen.adverb_tags", "adverb_tags", _parse_set),
            ("screen.forbidden_next_pos", "forbidden_next_pos", _parse_set)):
        raw = take(key)
        if raw is not None:
            screen_kwargs[attr] = conv(raw)
    for key, attr, kind in (("screen.max_adverbs", "max_adverbs", int),):
        raw = take(key)
        if raw is not None:
            screen_kwargs[attr] = _parse_num(raw, key, kind)
    for key, attr in (("screen.include_jjr", "include_jjr"),
                      ("screen.require_np_final", "require_np_final")):
        raw = take(key)
        if raw is not None:
            screen_kwargs[attr] = _parse_bool(raw, key)
    raw = take("screen.chunk_type")
    if raw is not None:
        screen_kwargs["chunk_type"] = raw

    hmm_kwargs = {}
    for key, attr, kind in (("hmm.transition_k", "transition_smoothing_k", float),
                            ("hmm.emission_k", "emission_smoothing_k", float),
                            ("hmm.suffix_max_len", "suffix_max_len", int),
                            ("hmm.rare_threshold", "rare_threshold", int)):
        raw = take(key)
        if raw is not None:
            hmm_kwargs[attr] = _parse_num(raw, key, kind)
    raw = take("hmm.unknown_mode")
    if raw is not None:
        hmm_kwargs["unknown_word_mode"] = raw

    maxent_kwargs = {}
    for key, attr, kind in (("maxent.l2_lambda", "l2_lambda", float),
                            ("maxent.max_iterations", "max_iterations", int),
                            ("maxent.convergence_tol", "convergence_tol", float)):
        raw = take(key)
        if raw is not None:
            maxent_kwargs[attr] = _parse_num(raw, key, kind)
    raw = take("maxent.templates")
    if raw is not None:
        maxent_kwargs["feature_template_set"] = raw

    input_path = take("input")
    output_dir = take("output_dir")
    if input_path is None:
        raise ConfigError("missing required config key: input")
    if output_dir is None:
        raise ConfigError("missing required config key: output_dir")
    kwargs = dict(input_path=input_path, output_dir=output_dir)
    raw = take("seed")
    if raw is not None:
        kwargs["seed"] = _parse_num(raw, "seed", int)
    raw = take("train_fraction")
    if raw is not None:
        kwargs["train_fraction"] = _parse_num(raw, "train_fraction", float)
    raw = take("dev_fraction")
    if raw is not None:
        kwargs["dev_fraction"] = _parse_num(raw, "dev_fraction", float)
    raw = take("tasks")
    if raw is not None:
        kwargs["tasks"] = tuple(t for t in (p.strip() for p in raw.split(",")) if t)
    raw = take("transform")
    if raw is not None:
        kwargs["transform"] = raw
    raw = take("review")
    if raw:
        kwargs["review_path"] = raw
    raw = take("scheme")
    if raw is not None:
        kwargs["scheme"] = raw

    if values:
        raise ConfigError(f"unknown config keys: {sorted(values)}")
    return ExperimentConfig(screen=ScreenConfig(**screen_kwargs),
                            hmm=HmmConfig(**hmm_kwargs),
                            maxent=MaxEntConfig(**maxent_kwargs),
                            **kwargs)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class _Run:
    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.artifacts: dict[str, str] = {}
        self.timings: list[tuple[str, float]] = []

    def write(self, name: str, text: str) -> str:
        data = text.encode("utf-8")
        (self.out_dir / name).write_bytes(data)
        digest = _sha256(data)
        self.artifacts[name] = digest
        return digest

    @contextmanager
    def stage(self, name: str):
        started = time.perf_counter()
        try:
            yield
        except NomadjError as exc:
            raise type(exc)(f"[stage {name}] {exc}") from exc
        finally:
            self.timings.append((name, time.perf_counter() - started))


def _assert_bio_identical(a: Corpus, b: Corpus):
    for si, (sa, sb) in enumerate(zip(a.sentences, b.sentences)):
        for ti, (ta, tb) in enumerate(zip(sa, sb)):
            if ta.bio != tb.bio:
                raise AssertionError(
                    f"BIO columns diverged at sentence {si} token {ti}")


def _na_focus_kv(rows: dict[str, dict], arm: str) -> list[str]:
    lines = []
    for tag in sorted(rows):
        s = rows[tag]
        lines.append(f"na.{arm}.tag.{tag}.precision: {s.precision:.8f}")
        lines.append(f"na.{arm}.tag.{tag}.recall: {s.recall:.8f}")
        lines.append(f"na.{arm}.tag.{tag}.f1: {s.f1:.8f}")
        lines.append(f"na.{arm}.tag.{tag}.support: {s.support}")
    return lines


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    """Execute both arms and write all artifacts into ``cfg.output_dir``.

    Returns the manifest (also written as ``manifest.txt``); timings land in
    ``timings.txt``, which is excluded from the manifest on purpose.
    """
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run = _Run(out_dir)
    run.write("config.resolved", render_config(cfg))

    with run.stage("load"):
        raw = Path(cfg.input_path).read_bytes()
        input_digest = _sha256(raw)
        override = None if cfg.scheme == "auto" else Scheme.from_string(cfg.scheme)
        loaded = parse_pos_chunk(raw.decode("utf-8"), override)
        source_scheme = loaded.scheme
        base = normalize_bio(loaded, Scheme.IOB2)

    def denorm(corpus: Corpus) -> Corpus:
        return normalize_bio(corpus, source_scheme)

    with run.stage("screen"):
        candidates = screen_candidates(base, cfg.screen)
        if cfg.review_path:
            review = parse_review_list(Path(cfg.review_path).read_text("utf-8"))
            candidates = apply_review(base, candidates, review, cfg.screen)
        stats = screening_stats(candidates)
        run.write("candidates.tsv", write_candidates(base, candidates))
        stat_lines = [f"total\t{stats.total}"]
        for tag in sorted(stats.counts):
            stat_lines.append(
                f"{tag}\t{stats.counts[tag]}\t{stats.fractions[tag]:.6f}")
        run.write("screen-stats.txt", "\n".join(stat_lines) + "\n")

    with run.stage("transform"):
        if cfg.transform == "jn":
            modified = apply_jn_relabel(base, candidates)
        else:
            modified = apply_jj2nn_relabel(base, candidates)

    with run.stage("split"):
        n = base.n_sentences
        train_idx, test_idx = split_indices(n, cfg.train_fraction, cfg.seed)
        dev_idx: tuple[int, ...] = ()
        if cfg.dev_fraction > 0.0:
            # development carve-out from the train part; recorded but not
            # otherwise used (no early stopping is wired to it)
            n_dev = round(cfg.dev_fraction * n)
            pool = list(train_idx)
            random.Random(cfg.seed + 1).shuffle(pool)
            dev_idx = tuple(sorted(pool[:n_dev]))
            train_idx = tuple(sorted(pool[n_dev:]))
        split_digests = (
            ("train_indices", _sha256(",".join(map(str, train_idx)).encode())),
            ("test_indices", _sha256(",".join(map(str, test_idx)).encode())),
            ("dev_indices", _sha256(",".join(map(str, dev_idx)).encode())),
        )
        arms = {}
        for arm, corpus in (("baseline", base), ("modified", modified)):
            train = select_sentences(corpus, train_idx)
            test = select_sentences(corpus, test_idx)
            arms[arm] = (train, test)
            run.write(f"corpus-{arm}-train.pos-chunk", write_pos_chunk(denorm(train)))
            run.write(f"corpus-{arm}-test.pos-chunk", write_pos_chunk(denorm(test)))
            if dev_idx:
                run.write(f"corpus-{arm}-dev.pos-chunk",
                          write_pos_chunk(denorm(select_sentences(corpus, dev_idx))))
        _assert_bio_identical(arms["baseline"][0], arms["modified"][0])
        _assert_bio_identical(arms["baseline"][1], arms["modified"][1])
        test_positions = {
            (new_si, c.token_index)
            for new_si, orig in enumerate(test_idx)
            for c in candidates if c.sentence_index == orig}

    if "pos_hmm" in cfg.tasks:
        with run.stage("pos_hmm"):
            reports: dict[str, EvalReport] = {}
            na_rows: dict[str, dict] = {}
            for arm in ("baseline", "modified"):
                train, test = arms[arm]
                model = train_hmm(train, cfg.hmm)
                run.write(f"model-hmm-{arm}.txt", save_hmm(model))
                decoded = [viterbi_decode(model, [t.word for t in sent]).tags
                           for sent in test.sentences]
                pred = replace_column(test, decoded, "pos")
                run.write(f"pred-pos-{arm}.pos-chunk", write_pos_chunk(denorm(pred)))
                reports[arm] = evaluate(test, pred, "pos")
                if arm == "baseline":
                    na_rows[arm] = {
                        tag: per_tag_prf(test, pred, tag, "pos", test_positions)
                        for tag in sorted(cfg.screen.effective_adjective_tags)}
                else:
                    focus = "JN" if cfg.transform == "jn" else None
                    na_rows[arm] = (
                        {focus: reports[arm].per_tag[focus]}
                        if focus and focus in reports[arm].per_tag else {})
            delta = compare_runs(reports["baseline"], reports["modified"])
            text = [render_report_text(reports["baseline"], "Baseline"),
                    render_report_text(reports["modified"], "Modified"),
                    render_delta_table(delta)]
            for arm in ("baseline", "modified"):
                if na_rows[arm]:
                    rows = ", ".join(
                        f"{tag}: P {s.precision:.2f} R {s.recall:.2f} F1 {s.f1:.2f}"
                        for tag, s in sorted(na_rows[arm].items()))
                    text.append(f"nominal-adjective focus ({arm}): {rows}\n")
            run.write("report-pos.txt", "\n".join(text))
            run.write("report-pos.tsv", render_delta_tsv(delta))
            kv = [render_report_kv(reports["baseline"], "baseline"),
                  render_report_kv(reports["modified"], "modified"),
                  render_delta_kv(delta)]
            na_lines = _na_focus_kv(na_rows["baseline"], "baseline") + \
                _na_focus_kv(na_rows["modified"], "modified")
            if na_lines:
                kv.append("\n".join(na_lines) + "\n")
            run.write("report-pos.kv", "".join(kv))

    if "bio_maxent" in cfg.tasks:
        with run.stage("bio_maxent"):
            reports = {}
            for arm in ("baseline", "modified"):
                train, test = arms[arm]
                model = train_maxent(train, cfg.maxent)
                run.write(f"model-chunker-{arm}.txt", save_maxent(model))
                predicted = [predict_bio(model, sent) for sent in test.sentences]
                pred = replace_column(test, predicted, "bio")
                run.write(f"pred-bio-{arm}.pos-chunk", write_pos_chunk(denorm(pred)))
                reports[arm] = evaluate(test, pred, "bio")
            delta = compare_runs(reports["baseline"], reports["modified"])
            run.write("report-bio.txt",
                      render_report_text(reports["baseline"], "Baseline") + "\n"
                      + render_report_text(reports["modified"], "Modified") + "\n"
                      + render_delta_table(delta))
            run.write("report-bio.tsv", render_delta_tsv(delta))
            run.write("report-bio.kv",
                      render_report_kv(reports["baseline"], "baseline")
                      + render_report_kv(reports["modified"], "modified")
                      + render_delta_kv(delta))

    manifest = RunManifest(
        toolkit_version=__version__,
        backend=backend_name(),
        input_path=cfg.input_path,
        input_digest=input_digest,
        config_items=tuple(config_items(cfg)),
        split_digests=split_digests,
        artifact_digests=tuple(sorted(run.artifacts.items())),
        timings=tuple(run.timings),
    )
    (out_dir / "manifest.txt").write_text(render_manifest(manifest), "utf-8")
    (out_dir / "timings.txt").write_text(render_timings(manifest), "utf-8")
    return manifest


def render_manifest(manifest: RunManifest) -> str:
    """Deterministic manifest text; excludes timings by design."""
    lines = ["NOMADJ-MANIFEST 1",
             f"toolkit_version\t{manifest.toolkit_version}",
             f"backend\t{manifest.backend}",
             f"input\t{manifest.input_path}",
             f"input_sha256\t{manifest.input_digest}"]
    for key, value in manifest.config_items:
        lines.append(f"config\t{key}\t{value}")
    for name, digest in manifest.split_digests:
        lines.append(f"split\t{name}\t{digest}")
    for name, digest in manifest.artifact_digests:
        lines.append(f"artifact\t{name}\t{digest}")
    return "\n".join(lines) + "\n"


def render_timings(manifest: RunManifest) -> str:
    lines = [f"{name}\t{seconds:.3f}" for name, seconds in manifest.timings]
    return "\n".join(lines) + "\n"
