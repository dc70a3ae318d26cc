"""
The statistical shape of a generated literature
===============================================

The synthetic corpus generator plants the empirical regularities of
real publication records: a few core venues carry most of the output
(concentration over cells), title-word frequencies fall off like 1/rank
(Zipf), most authors contribute a single publication (Lotka), and a
small set of classic references soaks up most citations (skewed
reference targets).  This script generates corpora and measures all
four, the same way the test suite's calibration does.
"""

import collections

import numpy as np

from specialty_approx import (
    GeneratorConfig, SpecialtyParams, build_records, tokenize_title,
)
from specialty_approx.syngen import STOP_WORDS

# ---------------------------------------------------------------------
# 1. One mid-sized specialty for author, cell, and reference structure.
# ---------------------------------------------------------------------

config = GeneratorConfig(
    rng_seed=7,
    specialties=(SpecialtyParams(label="field", n_publications=3000,
                                 n_authors=4000, lotka_exponent=2.0),),
)
records, truth = build_records(config)
print(f"{len(records)} publications generated")

# ---------------------------------------------------------------------
# 2. Author productivity (Lotka).  At exponent 2 the classic value is
#    6/pi^2 = 0.61 of authors with exactly one publication, and authors
#    with n publications should be ~1/n^2 as frequent as single-timers.
# ---------------------------------------------------------------------

per_author = collections.Counter()
for record in records:
    for entry in record["authors"]:
        per_author[(entry["surname"], entry["initials"])] += 1
productivity = collections.Counter(per_author.values())
n_authors = len(per_author)
print(f"\nauthor productivity ({n_authors} distinct authors):")
for count in (1, 2, 3, 4):
    share = productivity[count] / n_authors
    print(f"  {count} publication(s): {share:6.3f} of authors "
          f"(1/n^2 predicts {productivity[1] / n_authors / count**2:.3f})")

# ---------------------------------------------------------------------
# 3. Concentration over cells.  Publications per cell, in the pool's
#    popularity-rank order: the first few cells carry most of the
#    literature, the tail thins out geometrically.
# ---------------------------------------------------------------------

per_cell = collections.Counter()
for record in records:
    per_cell[tuple(sorted(record["subject_categories"]))] += 1
sizes = sorted(per_cell.values(), reverse=True)
total = sum(sizes)
top3 = sum(sizes[:3]) / total
print(f"\n{len(sizes)} cells; the top 3 carry {top3:.2f} "
      f"of all publications")
cumulative = 0
for rank, size in enumerate(sizes[:6], start=1):
    cumulative += size
    print(f"  cell rank {rank}: {size:>5} publications "
          f"(cumulative {cumulative / total:.2f})")

# ---------------------------------------------------------------------
# 4. Reference-target skew: the top decile of cited targets soaks up
#    the bulk of all citations.
# ---------------------------------------------------------------------

citations = collections.Counter()
for record in records:
    for ref in record["references"]:
        citations[ref] += 1
counts = np.array(sorted(citations.values(), reverse=True))
decile = max(1, len(counts) // 10)
print(f"\n{len(counts)} distinct reference targets; the top 10% "
      f"receive {counts[:decile].sum() / counts.sum():.2f} of citations")

# ---------------------------------------------------------------------
# 5. Title-word frequencies (Zipf).  A separate corpus with exponent
#    exactly 1: the log-log slope of frequency against rank should sit
#    near -1.  Injected stop words are bookkeeping noise, not draws
#    from the ranked vocabulary, so they stay out of the fit.
# ---------------------------------------------------------------------

config = GeneratorConfig(
    rng_seed=7,
    specialties=(SpecialtyParams(label="field", n_publications=1200,
                                 vocab_size=1000, zipf_exponent=1.0,
                                 title_length=(8, 12)),),
)
records, _ = build_records(config)
frequency = collections.Counter()
for record in records:
    for word in tokenize_title(record["title"]):
        if word not in STOP_WORDS:
            frequency[word] += 1
ranked = [f for f in sorted(frequency.values(), reverse=True) if f >= 5]
slope = np.polyfit(np.log(np.arange(1, len(ranked) + 1)),
                   np.log(ranked), 1)[0]
print(f"\nZipf fit over {len(ranked)} words with frequency >= 5: "
      f"log-log slope {slope:.3f} (planted exponent: -1)")
