"""Deterministic coarse part-of-speech tagging.

Ten tags: PRON VERB NOUN ADJ ADV CONJ ART DET PREP OTHER.  The default
tagger is a closed-class lexicon plus suffix rules with NOUN as the final
fallback; it exists so that feature extraction is reproducible with zero
heavyweight dependencies.  Pre-tagged input (token<TAB>TAG lines) can be
ingested instead when an external tagger's output is preferred.

Ambiguous closed-class words get one fixed, documented home:
articles {a, an, the} are ART; the wider determiner class (this, that,
possessives, quantifiers) is DET; "his"/"her" count as PRON.  Filled
pauses (uh, um, er, ah) are OTHER so they never inflate POS ratios.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol, Sequence

COARSE_TAGS = ("PRON", "VERB", "NOUN", "ADJ", "ADV", "CONJ", "ART", "DET", "PREP", "OTHER")

_ARTICLES = {"a", "an", "the"}

_PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they",
    "me", "him", "her", "us", "them",
    "his", "mine", "yours", "hers", "ours", "theirs",
    "myself", "yourself", "himself", "herself", "itself",
    "ourselves", "yourselves", "themselves",
    "who", "whom", "whose",
    "someone", "somebody", "something", "anyone", "anybody", "anything",
    "everyone", "everybody", "everything", "nobody", "nothing", "none",
    "what", "which",
}

_DETERMINERS = {
    "this", "that", "these", "those",
    "my", "your", "its", "our", "their",
    "each", "every", "either", "neither", "some", "any", "no",
    "all", "both", "few", "several", "many", "much", "more", "most",
    "another", "other", "such", "enough",
}

_PREPOSITIONS = {
    "in", "on", "at", "by", "for", "with", "about", "against", "between",
    "into", "through", "during", "before", "after", "above", "below",
    "to", "from", "up", "down", "of", "off", "over", "under", "near",
    "behind", "beside", "besides", "around", "among", "without", "within",
    "upon", "onto", "toward", "towards", "across", "along", "past",
    "since", "until", "till", "outside", "inside", "out",
}

_CONJUNCTIONS = {
    "and", "but", "or", "nor", "so", "yet",
    "because", "although", "though", "while", "if", "unless",
    "whether", "than", "as", "when", "whenever", "once",
}

_VERBS = {
    "am", "is", "are", "was", "were", "be", "been", "being",
    "do", "does", "did", "done", "doing",
    "have", "has", "had", "having",
    "will", "would", "can", "could", "shall", "should", "may", "might", "must",
    "go", "goes", "went", "gone", "going",
    "get", "gets", "got", "gotten", "getting",
    "take", "takes", "took", "taken", "taking",
    "see", "sees", "saw", "seen", "seeing",
    "look", "looks", "looked", "looking",
    "know", "knows", "knew", "known", "knowing",
    "think", "thinks", "thought", "thinking",
    "say", "says", "said", "saying",
    "tell", "tells", "told", "telling",
    "make", "makes", "made", "making",
    "come", "comes", "came", "coming",
    "want", "wants", "wanted", "wanting",
    "try", "tries", "tried", "trying",
    "fall", "falls", "fell", "fallen", "falling",
    "stand", "stands", "stood", "standing",
    "sit", "sits", "sat", "sitting",
    "run", "runs", "ran", "running",
    "reach", "reaches", "reached", "reaching",
    "wash", "washes", "washed", "washing",
    "dry", "dries", "dried", "drying",
    "eat", "eats", "ate", "eaten", "eating",
    "give", "gives", "gave", "given", "giving",
    "put", "puts", "putting",
    "let", "lets", "letting",
    "seem", "seems", "seemed",
    "happen", "happens", "happened", "happening",
    "overflow", "overflows", "overflowed", "overflowing",
    "spill", "spills", "spilled", "spilling",
    "steal", "steals", "stole", "stolen", "stealing",
    "hand", "hands", "handing", "handed",
    "ask", "asks", "asked", "asking",
    "use", "uses", "used", "using",
    "keep", "keeps", "kept", "keeping",
    "turn", "turns", "turned", "turning",
    "start", "starts", "started", "starting",
    "help", "helps", "helped", "helping",
}

_ADVERBS = {
    "very", "really", "just", "now", "then", "here", "there", "not",
    "too", "also", "again", "still", "always", "never", "often",
    "sometimes", "maybe", "perhaps", "quite", "rather", "almost",
    "already", "soon", "away", "back", "well", "only", "even",
    "ever", "instead", "anyway", "probably", "right",
}

_ADJECTIVES = {
    "little", "big", "small", "good", "bad", "high", "tall", "short",
    "long", "full", "empty", "wet", "open", "closed", "happy", "sad",
    "nice", "old", "young", "new", "hot", "cold", "busy", "same",
    "different", "wrong", "ready", "sure", "fine", "last", "first",
    "next", "left", "whole",
}

_NOUNS = {
    "boy", "girl", "mother", "mom", "mommy", "woman", "man", "father",
    "sink", "water", "cookie", "cookies", "jar", "stool", "kitchen",
    "window", "dish", "dishes", "plate", "plates", "cup", "cups",
    "curtain", "curtains", "counter", "floor", "child", "children",
    "kid", "kids", "thing", "things", "time", "day", "house", "door",
    "garden", "lady", "brother", "sister", "cabinet", "shelf", "faucet",
    "apron", "lawn", "yard", "picture", "action", "hands", "feet",
    "foot", "head", "lid", "chair", "table", "wife", "husband",
}

_FILLERS = {"uh", "um", "er", "ah", "hm", "mhm", "oh", "yeah", "yes", "okay", "ok"}

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ance", "ence", "ship", "hood", "ism", "ity")
_ADJ_SUFFIXES = ("ful", "ous", "ive", "able", "ible", "ish", "less", "ical")


class Tagger(Protocol):
    def tag(self, tokens: Sequence[str]) -> list[str]: ...


class RuleTagger:
    """Lexicon-first tagger with suffix fallbacks; deterministic by design."""

    def tag(self, tokens: Sequence[str]) -> list[str]:
        return [self.tag_word(t) for t in tokens]

    @staticmethod
    def tag_word(token: str) -> str:
        w = token.lower()
        if not w or not any(c.isalpha() for c in w):
            return "OTHER"
        if w in _FILLERS:
            return "OTHER"
        if w in _ARTICLES:
            return "ART"
        if w in _PRONOUNS:
            return "PRON"
        if w in _DETERMINERS:
            return "DET"
        if w in _CONJUNCTIONS:
            return "CONJ"
        if w in _PREPOSITIONS:
            return "PREP"
        if w in _VERBS:
            return "VERB"
        if w in _ADVERBS:
            return "ADV"
        if w in _ADJECTIVES:
            return "ADJ"
        if w in _NOUNS:
            return "NOUN"
        if w.endswith("'s"):
            return "NOUN"
        if w.endswith("n't"):
            return "VERB"
        if w.endswith("ly") and len(w) > 3:
            return "ADV"
        if w.endswith(_NOUN_SUFFIXES):
            return "NOUN"
        if w.endswith(_ADJ_SUFFIXES):
            return "ADJ"
        if (w.endswith("ing") or w.endswith("ed")) and len(w) > 4:
            return "VERB"
        return "NOUN"


class PretaggedSequence:
    """Tags ingested from a token<TAB>TAG file, validated against the
    token sequence they are applied to."""

    def __init__(self, pairs: list[tuple[str, str]]):
        for _, tag in pairs:
            if tag not in COARSE_TAGS:
                raise ValueError(f"unknown coarse tag {tag!r}")
        self._pairs = pairs

    def tag(self, tokens: Sequence[str]) -> list[str]:
        if len(tokens) != len(self._pairs):
            raise ValueError(
                f"pre-tagged length {len(self._pairs)} does not match {len(tokens)} tokens"
            )
        for got, (exp, _) in zip(tokens, self._pairs):
            if got.lower() != exp.lower():
                raise ValueError(f"pre-tagged token {exp!r} does not match {got!r}")
        return [tag for _, tag in self._pairs]


def read_tagged_tsv(path: str | Path) -> PretaggedSequence:
    pairs: list[tuple[str, str]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"expected 'token<TAB>TAG', got {line!r}")
        pairs.append((parts[0], parts[1].upper()))
    return PretaggedSequence(pairs)
