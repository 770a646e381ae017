"""Word-list assets and the psycholinguistic rating lexicon.

Stop words and the familiar-word list ship as versioned one-word-per-line
text assets under ``speechcue/assets``; the asset directory can be
overridden with the ``SPEECHCUE_ASSETS`` environment variable.

The psycholinguistic lexicon reader accepts two formats, sniffed per
line: the classic fixed-width dictionary records (numeric block in the
first 51 columns, then ``WORD|...``) and a simple TSV subset format
(``word  fam  conc  imag  mean  aoa``).  Fixed-width column offsets used
(0-based, end-exclusive): familiarity [25:28], concreteness [28:31],
imagability [31:34], meaningfulness [34:37], age of acquisition [40:43].
A rating of 0 means "not rated" and is excluded from downstream means.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

RATING_NAMES = ("familiarity", "concreteness", "imagability", "meaningfulness", "age_of_acquisition")

_FAM_SLICE = slice(25, 28)
_CONC_SLICE = slice(28, 31)
_IMAG_SLICE = slice(31, 34)
_MEAN_SLICE = slice(34, 37)
_AOA_SLICE = slice(40, 43)


def asset_dir() -> Path:
    override = os.environ.get("SPEECHCUE_ASSETS")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent / "assets"


def _read_word_list(path: Path) -> frozenset[str]:
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


@lru_cache(maxsize=None)
def stopwords() -> frozenset[str]:
    return _read_word_list(asset_dir() / "stopwords.txt")


@lru_cache(maxsize=None)
def familiar_words() -> frozenset[str]:
    return _read_word_list(asset_dir() / "familiar_words.txt")


def strip_inflection(word: str) -> list[str]:
    """Candidate base forms for familiar-list lookup, most specific first.

    Plain suffix stripping only (plural -s/-es/-ies, -ed, -ing with
    silent-e restoration and doubled-consonant undoubling); no morphology
    tables.  The word itself is always the first candidate.
    """
    w = word.lower().strip("'")
    candidates = [w]
    if w.endswith("'s"):
        candidates.append(w[:-2])
        w = w[:-2]
    if w.endswith("ies") and len(w) > 4:
        candidates.append(w[:-3] + "y")
    if w.endswith("es") and len(w) > 3:
        candidates.append(w[:-2])
    if w.endswith("s") and len(w) > 3:
        candidates.append(w[:-1])
    if w.endswith("ed") and len(w) > 4:
        candidates.append(w[:-2])
        candidates.append(w[:-2] + "e")
        if len(w) > 5 and w[-3] == w[-4]:
            candidates.append(w[:-3])
    if w.endswith("ing") and len(w) > 5:
        candidates.append(w[:-3])
        candidates.append(w[:-3] + "e")
        if len(w) > 6 and w[-4] == w[-5]:
            candidates.append(w[:-4])
    seen: list[str] = []
    for c in candidates:
        if c and c not in seen:
            seen.append(c)
    return seen


def is_familiar(word: str, familiar: frozenset[str]) -> bool:
    return any(c in familiar for c in strip_inflection(word))


@dataclass
class PsycholinguisticLexicon:
    """word -> (familiarity, concreteness, imagability, meaningfulness, aoa)."""

    ratings: dict[str, tuple[int, int, int, int, int]] = field(default_factory=dict)
    skipped: int = 0

    def get(self, word: str) -> tuple[int, int, int, int, int] | None:
        return self.ratings.get(word.lower())

    def __len__(self) -> int:
        return len(self.ratings)


def load_mrc(path: str | Path) -> PsycholinguisticLexicon:
    """Read a psycholinguistic dictionary file (fixed-width or TSV subset).

    Malformed records are skipped and counted in ``skipped``; an unreadable
    file raises OSError.
    """
    path = Path(path)
    lexicon = PsycholinguisticLexicon()
    for line in path.read_text(encoding="utf-8", errors="replace").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        record = _parse_fixed_width(line) if ("|" in line and len(line) >= 52) else _parse_tsv(line)
        if record is None:
            lexicon.skipped += 1
            continue
        word, ratings = record
        lexicon.ratings[word] = ratings
    return lexicon


def _parse_fixed_width(line: str) -> tuple[str, tuple[int, int, int, int, int]] | None:
    if len(line) < 52:
        return None
    try:
        ratings = tuple(
            _fw_int(line[s]) for s in (_FAM_SLICE, _CONC_SLICE, _IMAG_SLICE, _MEAN_SLICE, _AOA_SLICE)
        )
    except ValueError:
        return None
    word = line[51:].split("|")[0].strip().lower()
    if not word:
        return None
    return word, ratings  # type: ignore[return-value]


def _fw_int(chunk: str) -> int:
    chunk = chunk.strip()
    if not chunk:
        return 0
    value = int(chunk)
    if value < 0:
        raise ValueError("negative rating")
    return value


def _parse_tsv(line: str) -> tuple[str, tuple[int, int, int, int, int]] | None:
    parts = line.split()
    if len(parts) != 6:
        return None
    word = parts[0].lower()
    try:
        ratings = tuple(int(p) for p in parts[1:])
    except ValueError:
        return None
    if any(r < 0 for r in ratings):
        return None
    return word, ratings  # type: ignore[return-value]


def bundled_ratings_path() -> Path:
    return asset_dir() / "psycholinguistic_subset.tsv"


@lru_cache(maxsize=None)
def bundled_ratings() -> PsycholinguisticLexicon:
    return load_mrc(bundled_ratings_path())
