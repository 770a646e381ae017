"""Rule-based syllable counting.

Counts maximal vowel groups (a e i o u y) after dropping a silent final
'e'; a final consonant+'le' keeps its 'e' because that cluster is
syllabic (ta-ble, lit-tle).  Every word counts at least one syllable.
"""

from __future__ import annotations

_VOWELS = frozenset("aeiouy")


def count_syllables(word: str) -> int:
    """Syllables in a single word; apostrophes are ignored.

    Raises ValueError for empty or non-alphabetic input.
    """
    w = word.lower().replace("'", "")
    if not w or not w.isalpha():
        raise ValueError(f"count_syllables: not an alphabetic word: {word!r}")
    if w.endswith("e"):
        syllabic_le = len(w) >= 3 and w[-2] == "l" and w[-3] not in _VOWELS
        if not syllabic_le:
            w = w[:-1]
    groups = 0
    in_group = False
    for c in w:
        if c in _VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    return max(groups, 1)
