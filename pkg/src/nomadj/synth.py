"""Seeded synthetic pos-chunk corpus generator.

Emits WSJ-flavored sentences with base-NP chunk annotations and a
controllable rate of nominal-adjective constructions ("the poor",
"the very rich", "the poorest"). Useful for demos, benchmarks, and
end-to-end tests when no licensed corpus is at hand; it is a toy grammar,
not a model of real text.

By construction the planted nominal-adjective positions are exactly the
ones the default screener finds: ordinary NPs never end in an adjective,
predicate adjectives stay outside NP chunks, and comparatives only occur
attributively.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Corpus, Scheme, Token, normalize_bio
from .screener import CandidateRef

_DETERMINERS = ["the", "a", "this", "some", "each", "that", "another"]
_ADJECTIVES = ["poor", "rich", "young", "old", "strong", "weak", "gifted",
               "quick", "bold", "unusual", "eager", "steady", "lazy", "grim",
               "untested", "foreign", "clever", "famous", "quiet", "sturdy"]
_SUPERLATIVES = ["poorest", "richest", "youngest", "oldest", "strongest",
                 "weakest", "boldest", "eldest"]
_COMPARATIVES = ["better", "stronger", "weaker", "older", "richer"]
_ADVERBS = ["very", "quite", "extremely", "rather", "truly"]
# "report", "plan", "strike", "deal", "rise", "fall" double as verbs below,
# so the POS task carries genuine noun/verb ambiguity.
_NOUNS = ["market", "report", "analyst", "house", "city", "plan", "dog",
          "fox", "bank", "price", "deal", "factory", "garden", "strike",
          "budget", "company", "river", "engine", "contract", "survey",
          "village", "farmer", "editor", "signal", "rise", "fall",
          "meadow", "whistle", "cobbler", "lantern"]
_PLURALS = [n + "s" for n in _NOUNS]
_PROPER = ["Whitfield", "Calder", "Norbrook", "Tassler", "Grennan", "Ovitz",
           "Lindqvist", "Marbury", "Quillon", "Hastings"]
_VERBS_PAST = ["rose", "fell", "said", "bought", "sold", "noticed", "pleased",
               "studied", "backed", "shunned"]
_VERBS_PL = ["rise", "fall", "say", "buy", "sell", "report", "struggle",
             "remain", "plan", "strike", "deal", "object"]
_VERBS_SG = ["rises", "falls", "says", "buys", "sells", "reports", "hurts",
             "remains", "plans", "strikes", "deals", "objects"]
_PREPOSITIONS = ["in", "on", "of", "with", "near", "from", "against"]


@dataclass(frozen=True)
class SynthResult:
    corpus: Corpus
    planted: tuple[CandidateRef, ...]


def _skewed(rng: random.Random, items: list[str]) -> str:
    # Zipf-ish: early list entries are frequent, tail entries rare.
    return items[int(len(items) * rng.random() ** 2.2)]


class _SentenceBuilder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.tokens: list[tuple[str, str, str]] = []
        self.na_positions: list[tuple[int, str]] = []

    def add(self, word: str, pos: str, bio: str):
        self.tokens.append((word, pos, bio))

    def noun_phrase(self):
        rng = self.rng
        roll = rng.random()
        first = "B-NP"
        if roll < 0.26:
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(_skewed(rng, _NOUNS), "NN", "I-NP")
        elif roll < 0.45:
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(_skewed(rng, _ADJECTIVES), "JJ", "I-NP")
            noun, pos = ((_skewed(rng, _NOUNS), "NN") if rng.random() < 0.6
                         else (_skewed(rng, _PLURALS), "NNS"))
            self.add(noun, pos, "I-NP")
        elif roll < 0.58:
            self.add(_skewed(rng, _PLURALS), "NNS", first)
        elif roll < 0.68:
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(_skewed(rng, _ADVERBS), "RB", "I-NP")
            self.add(_skewed(rng, _ADJECTIVES), "JJ", "I-NP")
            self.add(_skewed(rng, _NOUNS), "NN", "I-NP")
        elif roll < 0.76:
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(str(rng.randint(2, 9999)), "CD", "I-NP")
            self.add(_skewed(rng, _PLURALS), "NNS", "I-NP")
        elif roll < 0.83:
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(_skewed(rng, _COMPARATIVES), "JJR", "I-NP")
            self.add(_skewed(rng, _PLURALS), "NNS", "I-NP")
        elif roll < 0.88:
            self.add(_skewed(rng, _PROPER), "NNP", first)
        elif roll < 0.95:
            # noun-noun compound; its plural head collides with the verb
            # reading of the same word form ("the market reports")
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(_skewed(rng, _NOUNS), "NN", "I-NP")
            noun, pos = ((_skewed(rng, _NOUNS), "NN") if rng.random() < 0.4
                         else (_skewed(rng, _PLURALS), "NNS"))
            self.add(noun, pos, "I-NP")
        else:
            self.add(_skewed(rng, _DETERMINERS), "DT", first)
            self.add(_skewed(rng, _SUPERLATIVES), "JJS", "I-NP")
            self.add(_skewed(rng, _NOUNS), "NN", "I-NP")

    def nominal_adjective_phrase(self):
        rng = self.rng
        self.add("the", "DT", "B-NP")
        roll = rng.random()
        if roll < 0.5:
            self.na_positions.append((len(self.tokens), "JJ"))
            self.add(_skewed(rng, _ADJECTIVES), "JJ", "I-NP")
        elif roll < 0.8:
            self.add(_skewed(rng, _ADVERBS), "RB", "I-NP")
            self.na_positions.append((len(self.tokens), "JJ"))
            self.add(_skewed(rng, _ADJECTIVES), "JJ", "I-NP")
        else:
            self.na_positions.append((len(self.tokens), "JJS"))
            self.add(_skewed(rng, _SUPERLATIVES), "JJS", "I-NP")

    def verb_phrase(self, plural_subject: bool):
        rng = self.rng
        roll = rng.random()
        verb_pool = _VERBS_PAST if rng.random() < 0.5 else (
            _VERBS_PL if plural_subject else _VERBS_SG)
        pos = "VBD" if verb_pool is _VERBS_PAST else ("VBP" if plural_subject else "VBZ")
        self.add(_skewed(rng, verb_pool), pos, "O")
        if roll < 0.35:
            self.noun_phrase()
        elif roll < 0.6:
            self.add(_skewed(rng, _PREPOSITIONS), "IN", "O")
            self.noun_phrase()
        elif roll < 0.75:
            # predicate adjective, outside any chunk
            self.add(_skewed(rng, _ADJECTIVES), "JJ", "O")
        elif roll < 0.85:
            self.noun_phrase()
            self.add(_skewed(rng, _PREPOSITIONS), "IN", "O")
            self.noun_phrase()


def _build_sentence(rng: random.Random, plant_na: bool) -> _SentenceBuilder:
    b = _SentenceBuilder(rng)
    # NA subjects are grammatically plural ("the poor are ...").
    plural = True if plant_na else rng.random() < 0.5
    if plant_na:
        b.nominal_adjective_phrase()
    elif rng.random() < 0.03:
        # adjacent NPs, so IOB1 output exercises B- tags
        b.noun_phrase()
        b.noun_phrase()
    else:
        b.noun_phrase()
    b.verb_phrase(plural)
    if rng.random() < 0.25:
        b.add(_skewed(rng, _PREPOSITIONS), "IN", "O")
        b.noun_phrase()
    b.add(".", ".", "O")
    return b


def generate_corpus(n_tokens: int, seed: int, na_token_rate: float = 0.001,
                    scheme: Scheme = Scheme.IOB2) -> SynthResult:
    """Generate at least ``n_tokens`` tokens of chunked text.

    ``na_token_rate`` is the approximate fraction of tokens that are planted
    nominal adjectives (default 1 per 1000). The same (n_tokens, seed,
    na_token_rate) always yields the same corpus.
    """
    rng = random.Random(seed)
    p_sentence = min(0.9, na_token_rate * 12.0)  # ~12 tokens per sentence
    sentences = []
    planted: list[CandidateRef] = []
    total = 0
    while total < n_tokens:
        plant = rng.random() < p_sentence
        builder = _build_sentence(rng, plant)
        rows = builder.tokens
        word0 = rows[0][0]
        if word0[0].islower():
            rows[0] = (word0[0].upper() + word0[1:],) + rows[0][1:]
        si = len(sentences)
        sentences.append(tuple(Token(*row) for row in rows))
        planted.extend(CandidateRef(si, ti, pos) for ti, pos in builder.na_positions)
        total += len(rows)
    corpus = Corpus(tuple(sentences), Scheme.IOB2)
    if scheme is not Scheme.IOB2:
        corpus = normalize_bio(corpus, scheme)
    return SynthResult(corpus, tuple(planted))
