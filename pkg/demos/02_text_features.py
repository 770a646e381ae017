"""The 35 knowledge-based text features on a picture-description sample."""

from speechcue.chat import normalize_tokens, parse_chat
from speechcue.text import TEXT_FEATURE_NAMES, extract_text_features, lexical_diversity

RAW = """*PAR: &-uh the boy is taking cookies from the the [/] cookie jar .
*PAR: he is on a stool and it is falling over .
*PAR: &-um the mother is drying dishes .
*PAR: the water is running running over the sink .
*PAR: she is not noticing it .
"""

tokens = normalize_tokens(parse_chat(RAW), "PAR")
print(f"{len(tokens.tokens)} tokens in {len(tokens.sentence_bounds)} sentences\n")

vector = extract_text_features(tokens)
for name, value in vector.as_dict().items():
    print(f"  {name:24s} {value:10.4f}")

if vector.diagnostics:
    print("\ndiagnostics:", vector.diagnostics)

# the diversity block on its own, with a custom window
scores = lexical_diversity(tokens.tokens, window=10)
print(f"\nTTR {scores.ttr:.3f}  MSTTR(10) {scores.msttr:.3f}  "
      f"MATTR(10) {scores.mattr:.3f}  MTLD {scores.mtld:.1f}")
print(f"({len(TEXT_FEATURE_NAMES)} features in canonical order)")
