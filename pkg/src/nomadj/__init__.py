"""nomadj: nominal-adjective screening, relabeling, and tagging experiments.

The toolkit reads pos-chunk corpora (word / POS / BIO columns), screens
nominal-adjective candidates ("the poor", "The very rich"), relabels them
(JN tag or JJ2NN noun mapping), and runs controlled baseline-vs-modified
experiments with a bigram HMM POS tagger and a MaxEnt BIO chunker.
"""

__version__ = "0.1.0"

from .corpus import (ChunkSpan, Corpus, Scheme, Sentence, Token, corpus_chunks,
                     extract_chunks, make_corpus, normalize_bio,
                     parse_pos_chunk, replace_column, select_sentences,
                     split_corpus, split_indices, write_pos_chunk)
from .errors import (AlignmentError, ComparisonError, ConfigError,
                     ModelIOError, NomadjError, ParseError,
                     UndefinedSimilarityError, ValidationError)
from .evaluate import (ChunkScores, DeltaReport, EvalReport, PRF, chunk_prf,
                       compare_runs, evaluate, per_tag_prf, token_accuracy)
from .hmm import (HmmConfig, HmmModel, TagSequence, load_hmm, save_hmm,
                  sequence_log_prob, train_hmm, viterbi_decode)
from .maxent import (FeatureIndex, FeatureVector, MaxEntConfig, MaxEntModel,
                     extract_features, feature_strings, load_maxent,
                     objective_and_gradient, predict_bio, repair_bio,
                     save_maxent, train_maxent)
from .profiler import (BOUNDARY, ProfileReport, TagDistribution,
                       context_distribution, cosine_similarity, profile_report)
from .screener import (CandidateRef, JN_TAG, ReviewList, ScreenConfig,
                       ScreenStats, apply_jj2nn_relabel, apply_jn_relabel,
                       apply_review, parse_review_list, read_candidates,
                       restore_original_pos, screen_candidates,
                       screening_stats, write_candidates)
from .synth import SynthResult, generate_corpus

__all__ = [name for name in dir() if not name.startswith("_")]
