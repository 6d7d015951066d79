"""Shared test utilities: compact corpus literals and hypothesis strategies."""

import hypothesis.strategies as st

from nomadj.corpus import Corpus, Scheme, Token, normalize_bio


def corpus(text: str, scheme: Scheme = Scheme.IOB2) -> Corpus:
    """Build a corpus from ``word|pos|bio`` triples, one sentence per line."""
    sentences = []
    for line in text.strip("\n").split("\n"):
        line = line.strip()
        if not line:
            continue
        sentences.append(tuple(Token(*part.split("|")) for part in line.split()))
    return Corpus(tuple(sentences), scheme)


WORD_ALPHABET = "abcdefgXYZ-'09"
POS_TAGS = ("DT", "JJ", "JJS", "NN", "NNS", "VBD", "IN", "RB", "CD")
CHUNK_TYPES = ("NP", "VP")

words = st.text(alphabet=WORD_ALPHABET, min_size=1, max_size=6)


@st.composite
def sentences(draw):
    n = draw(st.integers(1, 10))
    bio = []
    i = 0
    while i < n:
        if draw(st.booleans()):
            length = min(n - i, draw(st.integers(1, 3)))
            ctype = draw(st.sampled_from(CHUNK_TYPES))
            bio.append("B-" + ctype)
            bio.extend(["I-" + ctype] * (length - 1))
            i += length
        else:
            bio.append("O")
            i += 1
    return tuple(Token(draw(words), draw(st.sampled_from(POS_TAGS)), b) for b in bio)


@st.composite
def corpora(draw, max_sentences=6, allow_iob1=True):
    sents = draw(st.lists(sentences(), min_size=1, max_size=max_sentences))
    built = Corpus(tuple(sents), Scheme.IOB2)
    if allow_iob1 and draw(st.booleans()):
        built = normalize_bio(built, Scheme.IOB1)
    return built
