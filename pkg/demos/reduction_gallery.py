"""Reduce a batch of determinant +-2 matrices to their canonical forms.

Enumerates small integer matrices with |det| = 2, runs the conjugation
search on each, and tallies which of the six canonical forms they land
on.  Expansive and non-expansive inputs are listed separately — only
expansive ones admit a reduction.
"""

from collections import Counter
from itertools import product

import numpy as np

from framelet2d import NotReducible, is_expansive, reduce_to_canonical

hits = Counter()
rows = []
skipped = 0
for a, b, c, d in product(range(-2, 3), repeat=4):
    m = np.array([[a, b], [c, d]])
    if abs(a * d - b * c) != 2:
        continue
    if not is_expansive(m):
        skipped += 1
        continue
    try:
        red = reduce_to_canonical(m)
    except NotReducible:
        rows.append((m.tolist(), None, None))
        continue
    hits[red.index] += 1
    rows.append((m.tolist(), red.index, red.s.tolist()))

print(f"{len(rows)} expansive |det|=2 matrices in [-2,2]^4, "
      f"{skipped} non-expansive skipped\n")
for m, idx, s in rows[:12]:
    print(f"  {str(m):<24} -> index {idx}   S = {s}")
print(f"  ... ({len(rows) - 12} more)\n")
print("canonical index tally:", dict(sorted(hits.items())))
print("unreduced:", sum(1 for _, idx, _ in rows if idx is None))
