"""Word error rate between reference and hypothesis transcripts.

The same normalizer feeds WER and feature extraction, so both see
identical tokens.
"""

from speechcue.chat import tokens_from_plain_text
from speechcue.wer import mean_wer, wer

pairs_text = [
    ("the boy is taking cookies from the jar",
     "the boy is taking cookies from jar"),          # one deletion
    ("the stool is falling over",
     "the stool is falling over"),                   # perfect
    ("the water is running over the sink",
     "a water is running over the sink today"),      # sub + insertion
]

pairs = []
for ref_text, hyp_text in pairs_text:
    ref = tokens_from_plain_text(ref_text).tokens
    hyp = tokens_from_plain_text(hyp_text).tokens
    pairs.append((ref, hyp))
    b = wer(ref, hyp)
    print(f"S={b.substitutions} D={b.deletions} I={b.insertions} "
          f"ref_len={b.ref_len}  WER={b.wer:.3f}   | {hyp_text!r}")

print(f"\nper-sample mean WER: {mean_wer(pairs):.4f}")
print(f"corpus-pooled WER:   {mean_wer(pairs, pooled=True):.4f}")
