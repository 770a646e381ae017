"""CHAT transcript parsing and normalization, step by step.

A CHAT file has @ headers, *SPK: main lines (optionally ending in a
NNN_MMM time bullet) and % dependent tiers.  We parse one, filter to the
subject's speech and normalize to lowercase tokens.
"""

from speechcue.chat import concat_token_sequences, normalize_tokens, parse_chat

RAW = """@Begin
@Participants: PAR Participant, INV Investigator
*INV: tell me everything you see going on in that picture .
*PAR: &-uh the boy is taking cookies . 1500_4200
*PAR: the the [/] stool is (.) falling over . 4300_7900
%mor: det|the n|stool aux|be part|fall-PRESP adv|over .
*PAR: and the water xxx is running . 8000_10200
@End
"""

transcript = parse_chat(RAW, sample_id="demo-001")
print(f"parsed {len(transcript.utterances)} utterances from speakers {transcript.speakers()}")
for utt in transcript.utterances:
    span = f"{utt.start_ms}-{utt.end_ms} ms" if utt.start_ms is not None else "untimed"
    print(f"  *{utt.speaker}: {utt.raw_text!r}  [{span}]")

# Keep only the participant, apply the normalization rules:
# filled pauses survive as words, the [/] retrace marker vanishes but the
# repeated word stays, the pause mark and xxx disappear.
tokens = normalize_tokens(transcript, speaker_filter="PAR")
print("\nnormalized tokens:", tokens.tokens)
print("sentences:", tokens.sentences())

# Utterance-level sequences concatenate with re-based sentence bounds,
# which is how subject-level ASR transcripts are assembled.
part_a = normalize_tokens(parse_chat("*PAR: the boy falls ."), "PAR")
part_b = normalize_tokens(parse_chat("*PAR: the jar is full ."), "PAR")
joined = concat_token_sequences([part_a, part_b])
print("\nconcatenated:", joined.tokens)
print("bounds:", joined.sentence_bounds)
