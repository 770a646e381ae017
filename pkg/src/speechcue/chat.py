"""CHAT-format transcript parsing and normalization to actual-speech tokens.

Only the surface structure of CHAT is handled: ``@`` headers are skipped,
``%`` dependent tiers are ignored, and ``*SPK:`` main lines (plus their
indented continuations) become utterances.  Normalization keeps what the
speaker actually said: filled pauses (&-uh family) survive as words,
retracing markers are dropped but the retraced material is kept, and
comments / pause marks / unintelligible stretches are removed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

FILLER_WORDS = ("uh", "um", "er", "ah")

_BULLET_RE = re.compile(r"\x15([^\x15]*)\x15\s*$|(?<![\w])(\d+)_(\d+)\s*$")
_NAK_ANY_RE = re.compile(r"\x15[^\x15]*\x15?")
_PAUSE_MARK_RE = re.compile(r"\(\.{1,3}\)")
_PAREN_RE = re.compile(r"\([^)]*\)")
_RETRACE_RE = re.compile(r"\[/{1,2}\]")
_BRACKET_RE = re.compile(r"\[[^\]]*\]")
_SENT_END = (".", "?", "!")


class ChatParseError(ValueError):
    """Malformed CHAT main line; carries the 1-based source line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class Utterance:
    speaker: str
    raw_text: str
    start_ms: int | None = None
    end_ms: int | None = None


@dataclass
class Transcript:
    sample_id: str
    utterances: list[Utterance] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def speakers(self) -> list[str]:
        seen: list[str] = []
        for u in self.utterances:
            if u.speaker not in seen:
                seen.append(u.speaker)
        return seen


@dataclass
class TokenSequence:
    """Lowercase word tokens with sentence index ranges covering [0, len)."""

    tokens: list[str]
    sentence_bounds: list[tuple[int, int]]
    unknown_codes: int = 0

    def __post_init__(self):
        pos = 0
        for start, end in self.sentence_bounds:
            if start != pos or end <= start:
                raise ValueError("sentence_bounds must partition [0, len) in order")
            pos = end
        if pos != len(self.tokens):
            raise ValueError("sentence_bounds must cover all tokens")

    def sentences(self) -> list[list[str]]:
        return [self.tokens[a:b] for a, b in self.sentence_bounds]


def parse_chat(raw: str, sample_id: str = "") -> Transcript:
    """Parse CHAT text into a Transcript.

    One Utterance per ``*SPK:`` main line (continuation lines that start
    with whitespace are folded in).  A trailing ``NNN_MMM`` time bullet,
    bare or wrapped in the CHAT NAK delimiters, becomes start/end
    milliseconds; a malformed bullet leaves the timestamps absent and
    records a warning.  A ``*`` line without a colon raises ChatParseError.
    """
    transcript = Transcript(sample_id=sample_id)
    # (kind, speaker, text, line_no); kind in {"main", "other"}
    current: list | None = None

    def flush():
        nonlocal current
        if current is not None and current[0] == "main":
            _, speaker, text, line_no = current
            transcript.utterances.append(_finish_utterance(speaker, text, line_no, transcript.warnings))
        current = None

    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        if line[0] in (" ", "\t"):
            if current is not None:
                current[2] += " " + line.strip()
            continue
        if line.startswith("*"):
            flush()
            head, sep, body = line.partition(":")
            if not sep:
                raise ChatParseError("main line has no colon", line_no)
            speaker = head[1:].strip()
            if not speaker:
                raise ChatParseError("main line has empty speaker code", line_no)
            current = ["main", speaker, body.strip(), line_no]
        elif line.startswith("@") or line.startswith("%"):
            flush()
            current = ["other", "", "", line_no]
        else:
            # Stray content outside any record: ignore but remember.
            flush()
            transcript.warnings.append(f"line {line_no}: ignored non-CHAT line")
    flush()
    return transcript


def _finish_utterance(speaker: str, text: str, line_no: int, warnings: list[str]) -> Utterance:
    start_ms = end_ms = None
    m = _BULLET_RE.search(text)
    if m:
        if m.group(2) is not None:
            start_ms, end_ms = int(m.group(2)), int(m.group(3))
            text = text[: m.start()].rstrip()
        else:
            inner = m.group(1)
            tm = re.fullmatch(r"(\d+)_(\d+)", inner.strip())
            if tm:
                start_ms, end_ms = int(tm.group(1)), int(tm.group(2))
            else:
                warnings.append(f"line {line_no}: unparseable time bullet {inner!r}")
            text = text[: m.start()].rstrip()
    if start_ms is not None and end_ms is not None and start_ms > end_ms:
        warnings.append(f"line {line_no}: time bullet start > end, timestamps dropped")
        start_ms = end_ms = None
    return Utterance(speaker=speaker, raw_text=text, start_ms=start_ms, end_ms=end_ms)


def normalize_tokens(transcript: Transcript, speaker_filter: str = "PAR") -> TokenSequence:
    """Reduce a speaker's utterances to lowercase actual-speech tokens.

    Filled pauses map to plain words (they feed the filler-pause feature),
    other ``&`` fragments are dropped, retracing markers vanish while the
    repeated material stays, and bracketed/parenthesized annotations and
    ``xxx``-style unintelligible stretches are removed.  Sentences close at
    ``. ? !`` and at utterance boundaries.  A speaker with no utterances
    yields an empty sequence.
    """
    tokens: list[str] = []
    bounds: list[tuple[int, int]] = []
    unknown = 0
    sent_start = 0

    def close_sentence(upto: int):
        nonlocal sent_start
        if upto > sent_start:
            bounds.append((sent_start, upto))
        sent_start = upto

    for utt in transcript.utterances:
        if utt.speaker != speaker_filter:
            continue
        words, n_unknown, sentence_breaks = _clean_utterance_text(utt.raw_text)
        unknown += n_unknown
        for w, is_break in zip(words, sentence_breaks):
            tokens.append(w)
            if is_break:
                close_sentence(len(tokens))
        close_sentence(len(tokens))
    return TokenSequence(tokens=tokens, sentence_bounds=bounds, unknown_codes=unknown)


def _clean_utterance_text(text: str) -> tuple[list[str], int, list[bool]]:
    """Return (words, unknown_code_count, sentence_break_after_word flags)."""
    text = _NAK_ANY_RE.sub(" ", text)
    text = _RETRACE_RE.sub(" ", text)
    text = _BRACKET_RE.sub(" ", text)
    text = text.replace("<", " ").replace(">", " ")
    text = _PAUSE_MARK_RE.sub(" ", text)
    text = _PAREN_RE.sub("", text)  # (be)cause -> cause: unspoken material removed
    text = text.lower()

    words: list[str] = []
    breaks: list[bool] = []
    unknown = 0
    for tok in text.split():
        ends_sentence = False
        core = tok
        # Sentence terminators, including the +//. interruption family.
        while core and core[-1] in _SENT_END:
            ends_sentence = True
            core = core[:-1]
        if core.startswith("+"):
            core = ""  # linking/terminator code, consumed
        elif core.startswith("&-"):
            core = core[2:] if core[2:] in FILLER_WORDS else ""
        elif core.startswith("&"):
            body = core[1:].lstrip("=+~-")
            core = body if body in FILLER_WORDS else ""
        elif core in ("xxx", "yyy", "www"):
            core = ""
        if core:
            core = core.split("@")[0]  # special-form marker suffix
            cleaned = _strip_punct(core)
            if cleaned:
                for piece in cleaned.split("_"):
                    if piece:
                        words.append(piece)
                        breaks.append(False)
            else:
                unknown += 1
        if ends_sentence and words:
            breaks[-1] = True
    return words, unknown, breaks


def _strip_punct(word: str) -> str:
    kept = [c for c in word if c.isalnum() or c in ("'", "_")]
    return "".join(kept).strip("'")


def concat_token_sequences(parts: Sequence[TokenSequence]) -> TokenSequence:
    """Concatenate token sequences, re-basing sentence bounds."""
    if not parts:
        raise ValueError("concat_token_sequences: empty parts list")
    tokens: list[str] = []
    bounds: list[tuple[int, int]] = []
    unknown = 0
    for part in parts:
        offset = len(tokens)
        tokens.extend(part.tokens)
        bounds.extend((a + offset, b + offset) for a, b in part.sentence_bounds)
        unknown += part.unknown_codes
    return TokenSequence(tokens=tokens, sentence_bounds=bounds, unknown_codes=unknown)


def tokens_from_plain_text(text: str) -> TokenSequence:
    """Normalize free text (e.g. an ASR hypothesis) with the same rules
    used for CHAT content, so WER and features see identical tokens."""
    fake = Transcript(sample_id="", utterances=[Utterance(speaker="X", raw_text=text)])
    return normalize_tokens(fake, "X")
