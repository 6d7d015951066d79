"""Command-line interface.

Subcommands: screen, relabel, profile, train-hmm, tag, train-chunker,
chunk, eval, experiment, plus synth for generating demo corpora. Exit
codes: 0 success, 1 usage/configuration error, 2 data error, 3 internal
error.
"""

from __future__ import annotations

import sys
import traceback
from pathlib import Path

import click

from .corpus import (Scheme, normalize_bio, parse_pos_chunk, replace_column,
                     write_pos_chunk)
from .errors import (AlignmentError, ComparisonError, ConfigError, ModelIOError,
                     NomadjError, ParseError, UndefinedSimilarityError,
                     ValidationError)
from .evaluate import evaluate, render_report_kv, render_report_text
from .experiment import (build_experiment_config, parse_config_text,
                         run_experiment)
from .hmm import HmmConfig, load_hmm, save_hmm, train_hmm, viterbi_decode
from .maxent import MaxEntConfig, load_maxent, predict_bio, save_maxent, train_maxent
from .profiler import profile_report, render_profile_report
from .screener import (ScreenConfig, apply_jj2nn_relabel, apply_jn_relabel,
                       apply_review, parse_review_list, read_candidates,
                       screen_candidates, screening_stats, write_candidates)
from .synth import generate_corpus


def _read_text(path: str) -> str:
    return Path(path).read_text("utf-8")


def _load_corpus(path: str, scheme_name: str):
    override = None if scheme_name == "auto" else Scheme.from_string(scheme_name)
    try:
        return parse_pos_chunk(_read_text(path), override)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _emit(text: str, output: str | None):
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text, "utf-8")


_scheme_option = click.option("--scheme", default="auto", show_default=True,
                              type=click.Choice(["auto", "iob1", "iob2"]),
                              help="BIO encoding of the input (auto-detected by default).")


def _screen_options(fn):
    for deco in reversed([
            click.option("--adjective-tags", default="JJ,JJS", show_default=True),
            click.option("--include-jjr", is_flag=True,
                         help="Also screen comparative adjectives (JJR)."),
            click.option("--determiner-tags", default="DT", show_default=True),
            click.option("--adverb-tags", default="RB,RBR,RBS", show_default=True),
            click.option("--max-adverbs", default=1, show_default=True, type=int),
            click.option("--np-final/--no-np-final", "require_np_final", default=True,
                         help="Require the candidate to end its NP chunk."),
            click.option("--forbidden-next-pos", default="",
                         help="POS tags that may not follow a candidate "
                              "(used with --no-np-final)."),
            click.option("--chunk-type", default="NP", show_default=True)]):
        fn = deco(fn)
    return fn


def _split_tags(text: str) -> frozenset[str]:
    return frozenset(t for t in (p.strip() for p in text.split(",")) if t)


def _make_screen_config(adjective_tags, include_jjr, determiner_tags, adverb_tags,
                        max_adverbs, require_np_final, forbidden_next_pos,
                        chunk_type) -> ScreenConfig:
    return ScreenConfig(
        adjective_tags=_split_tags(adjective_tags),
        include_jjr=include_jjr,
        determiner_tags=_split_tags(determiner_tags),
        adverb_tags=_split_tags(adverb_tags),
        max_adverbs=max_adverbs,
        require_np_final=require_np_final,
        forbidden_next_pos=_split_tags(forbidden_next_pos),
        chunk_type=chunk_type)


@click.group()
def cli():
    """Nominal-adjective corpus toolkit."""


@cli.command()
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--output", default=None, help="Candidate list file (stdout by default).")
@click.option("--stats-output", default=None, help="Tag histogram file (stderr by default).")
@click.option("--review", "review_path", default=None,
              help="Manual accept/reject decisions to apply.")
@_screen_options
def screen(input_path, scheme, output, stats_output, review_path, **screen_kwargs):
    """Screen a corpus for nominal-adjective candidates."""
    corpus = _load_corpus(input_path, scheme)
    config = _make_screen_config(**screen_kwargs)
    candidates = screen_candidates(corpus, config)
    if review_path:
        candidates = apply_review(corpus, candidates,
                                  parse_review_list(_read_text(review_path)), config)
    _emit(write_candidates(corpus, candidates), output)
    stats = screening_stats(candidates)
    lines = [f"total\t{stats.total}"]
    for tag in sorted(stats.counts):
        lines.append(f"{tag}\t{stats.counts[tag]}\t{stats.fractions[tag]:.6f}")
    text = "\n".join(lines) + "\n"
    if stats_output:
        Path(stats_output).write_text(text, "utf-8")
    else:
        click.echo(text, nl=False, err=True)


@cli.command()
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--candidates", "candidates_path", required=True)
@click.option("--transform", type=click.Choice(["jn", "jj2nn"]), default="jn",
              show_default=True)
@click.option("--map", "mappings", multiple=True, metavar="FROM=TO",
              help="Extra jj2nn tag mappings, e.g. JJR=NNS.")
@click.option("--output", default=None)
def relabel(input_path, scheme, candidates_path, transform, mappings, output):
    """Relabel screened candidates (JN tag or JJ2NN noun mapping)."""
    corpus = _load_corpus(input_path, scheme)
    candidates = read_candidates(_read_text(candidates_path))
    if transform == "jn":
        result = apply_jn_relabel(corpus, candidates)
    else:
        table = {"JJ": "NN", "JJS": "NNS"}
        for item in mappings:
            if "=" not in item:
                raise ConfigError(f"--map expects FROM=TO, got {item!r}")
            src, _, dst = item.partition("=")
            table[src] = dst
        result = apply_jj2nn_relabel(corpus, candidates, table)
    _emit(write_pos_chunk(result), output)


@cli.command()
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--target", "targets", multiple=True, metavar="NAME=TAG[,TAG...]",
              help="Named tag class; the first is compared against the rest.")
@click.option("--skip-boundary", is_flag=True,
              help="Skip sentence-boundary contexts instead of counting them.")
@click.option("--output", default=None)
def profile(input_path, scheme, targets, skip_boundary, output):
    """Context-tag distributions and cosine similarities for tag classes."""
    if len(targets) < 2:
        raise ConfigError("need at least two --target classes")
    corpus = _load_corpus(input_path, scheme)
    target_sets = []
    for item in targets:
        if "=" not in item:
            raise ConfigError(f"--target expects NAME=TAGS, got {item!r}")
        name, _, tags = item.partition("=")
        target_sets.append((name, _split_tags(tags)))
    report = profile_report(corpus, target_sets, include_boundary=not skip_boundary)
    _emit(render_profile_report(report), output)


@cli.command("train-hmm")
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--model-output", required=True)
@click.option("--transition-k", default=0.1, show_default=True, type=float)
@click.option("--emission-k", default=0.001, show_default=True, type=float)
@click.option("--unknown-mode", default="suffix", show_default=True,
              type=click.Choice(["uniform", "suffix"]))
@click.option("--suffix-max-len", default=3, show_default=True, type=int)
@click.option("--rare-threshold", default=1, show_default=True, type=int)
def train_hmm_cmd(input_path, scheme, model_output, transition_k, emission_k,
                  unknown_mode, suffix_max_len, rare_threshold):
    """Train the bigram HMM POS tagger."""
    corpus = _load_corpus(input_path, scheme)
    config = HmmConfig(transition_smoothing_k=transition_k,
                       emission_smoothing_k=emission_k,
                       unknown_word_mode=unknown_mode,
                       suffix_max_len=suffix_max_len,
                       rare_threshold=rare_threshold)
    model = train_hmm(corpus, config)
    Path(model_output).write_text(save_hmm(model), "utf-8")
    click.echo(f"trained on {corpus.n_tokens} tokens, "
               f"{len(model.tags)} tags -> {model_output}", err=True)


@cli.command()
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--model", "model_path", required=True)
@click.option("--output", default=None)
def tag(input_path, scheme, model_path, output):
    """Replace the POS column with HMM predictions."""
    corpus = _load_corpus(input_path, scheme)
    model = load_hmm(_read_text(model_path))
    decoded = [viterbi_decode(model, [t.word for t in sent]).tags
               for sent in corpus.sentences]
    _emit(write_pos_chunk(replace_column(corpus, decoded, "pos")), output)


@cli.command("train-chunker")
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--model-output", required=True)
@click.option("--l2-lambda", default=0.1, show_default=True, type=float)
@click.option("--max-iterations", default=200, show_default=True, type=int)
@click.option("--convergence-tol", default=1e-6, show_default=True, type=float)
def train_chunker(input_path, scheme, model_output, l2_lambda, max_iterations,
                  convergence_tol):
    """Train the MaxEnt BIO chunker (labels are normalized to IOB2)."""
    corpus = normalize_bio(_load_corpus(input_path, scheme), Scheme.IOB2)
    config = MaxEntConfig(l2_lambda=l2_lambda, max_iterations=max_iterations,
                          convergence_tol=convergence_tol)
    model = train_maxent(corpus, config)
    Path(model_output).write_text(save_maxent(model), "utf-8")
    status = "converged" if model.converged else "iteration limit"
    click.echo(f"trained on {corpus.n_tokens} tokens, "
               f"{len(model.feature_index)} features ({status}) -> {model_output}",
               err=True)


@cli.command()
@click.option("--input", "input_path", required=True)
@_scheme_option
@click.option("--model", "model_path", required=True)
@click.option("--output", default=None)
def chunk(input_path, scheme, model_path, output):
    """Replace the BIO column with MaxEnt chunker predictions (IOB2)."""
    corpus = normalize_bio(_load_corpus(input_path, scheme), Scheme.IOB2)
    model = load_maxent(_read_text(model_path))
    predicted = [predict_bio(model, sent) for sent in corpus.sentences]
    _emit(write_pos_chunk(replace_column(corpus, predicted, "bio")), output)


@cli.command("eval")
@click.option("--gold", "gold_path", required=True)
@click.option("--pred", "pred_path", required=True)
@_scheme_option
@click.option("--column", type=click.Choice(["pos", "bio"]), required=True)
@click.option("--output-prefix", default=None,
              help="Write PREFIX.txt and PREFIX.kv instead of printing.")
def eval_cmd(gold_path, pred_path, scheme, column, output_prefix):
    """Score a prediction file against gold."""
    gold = _load_corpus(gold_path, scheme)
    pred = _load_corpus(pred_path, scheme)
    if column == "bio":
        gold = normalize_bio(gold, Scheme.IOB2)
        pred = normalize_bio(pred, Scheme.IOB2)
    report = evaluate(gold, pred, column)
    text = render_report_text(report)
    kv = render_report_kv(report, "eval")
    if output_prefix:
        Path(output_prefix + ".txt").write_text(text, "utf-8")
        Path(output_prefix + ".kv").write_text(kv, "utf-8")
    else:
        click.echo(text, nl=False)
        click.echo(kv, nl=False)


@cli.command()
@click.option("--config", "config_path", default=None,
              help="key=value config file; CLI flags override its values.")
@click.option("--input", "input_path", default=None)
@click.option("--output-dir", default=None)
@click.option("--seed", default=None, type=int)
@click.option("--train-fraction", default=None, type=float)
@click.option("--transform", default=None, type=click.Choice(["jn", "jj2nn"]))
@click.option("--tasks", default=None, help="Comma list: pos_hmm,bio_maxent.")
@click.option("--review", "review_path", default=None)
@click.option("--scheme", default=None, type=click.Choice(["auto", "iob1", "iob2"]))
def experiment(config_path, input_path, output_dir, seed, train_fraction,
               transform, tasks, review_path, scheme):
    """Run the full baseline-vs-modified experiment pipeline."""
    values = parse_config_text(_read_text(config_path)) if config_path else {}
    overrides = {"input": input_path, "output_dir": output_dir,
                 "seed": seed, "train_fraction": train_fraction,
                 "transform": transform, "tasks": tasks,
                 "review": review_path, "scheme": scheme}
    for key, value in overrides.items():
        if value is not None:
            values[key] = str(value)
    cfg = build_experiment_config(values)
    manifest = run_experiment(cfg)
    for task in cfg.tasks:
        name = "pos" if task == "pos_hmm" else "bio"
        table = Path(cfg.output_dir, f"report-{name}.tsv").read_text("utf-8")
        click.echo(f"[{task}]")
        click.echo(table, nl=False)
    click.echo(f"manifest: {Path(cfg.output_dir, 'manifest.txt')}")
    return manifest


@cli.command()
@click.option("--tokens", default=50000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--na-rate", default=0.001, show_default=True, type=float,
              help="Approximate fraction of tokens that are nominal adjectives.")
@click.option("--scheme", default="iob2", show_default=True,
              type=click.Choice(["iob1", "iob2"]))
@click.option("--output", default=None)
def synth(tokens, seed, na_rate, scheme, output):
    """Generate a synthetic chunked corpus for demos and tests."""
    result = generate_corpus(tokens, seed, na_rate, Scheme.from_string(scheme))
    _emit(write_pos_chunk(result.corpus), output)
    click.echo(f"{result.corpus.n_sentences} sentences, "
               f"{result.corpus.n_tokens} tokens, "
               f"{len(result.planted)} nominal adjectives", err=True)


_DATA_ERRORS = (ParseError, ValidationError, AlignmentError, ModelIOError,
                ComparisonError, UndefinedSimilarityError)


def main(argv=None) -> int:
    """Run the CLI; returns the process exit code."""
    try:
        cli.main(args=argv, prog_name="nomadj", standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NomadjError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


def entry():
    sys.exit(main())
