"""Ranking attribute subsets of a table as approximate eps-keys.

A subset is an eps-key when no two rows agree to within eps on it.  In the
Poisson regime the chance of that is exp(-expected collisions), and the
expectation is driven by the subset's quadratic functional q2.  So the
subsets most likely to act as keys are exactly the low-q2 ones, and the
close-pair counter does all the work.
"""

import numpy as np

from epsentropy.core import RngStream, SeriesSample
from epsentropy.epskeys import all_subsets, rank_candidates

gen = RngStream(41, 0).generator()
n = 400

# synthetic records: column 0 is a coarse category, column 1 a noisy
# measurement, column 2 a fine-grained timestamp-like value
table = SeriesSample(np.column_stack([
    gen.integers(0, 4, size=n).astype(float),
    np.round(gen.normal(50.0, 10.0, size=n), 1),
    np.round(gen.uniform(0.0, 1e6, size=n), 2),
]))

for size in (1, 2):
    print("subsets of size", size)
    for cand in rank_candidates(table, all_subsets(3, size), eps=0.5):
        tag = "exact key" if cand.is_exact_key else "collisions"
        print("  columns %-8s  close pairs %6d  q2_hat %.3e  P(key) %.3f  %s"
              % (cand.attributes, cand.n_pairs_close, cand.q2_hat, cand.p_key, tag))
    print()

# the fine column alone is already an exact key here; the categorical one
# can never be, and pairing it with the measurement barely helps
