"""
Vanishing thetanulls on reducible strata
========================================

On a block-diagonal period matrix an even thetanull factors into thetanulls
of the blocks, so it vanishes exactly when two factors are odd.  We compare
that count with direct evaluation.
"""

from thetalocus import incidence
from thetalocus.siegel import act, random_word

for kind in ("generic", "red", "red_sing"):
    report = incidence.vanishing_set_numeric(incidence.sample_point(kind, 11))
    zero, nonzero = report.margins()
    print(f"{kind:>8}: {report.count} vanish, agrees with count: {report.agrees()}, "
          f"largest zero {zero:.1e}, smallest nonzero {nonzero:.2f}")

# Each of the nine deltas vanishing at an h_1^3 point lies on exactly two of the three [2,1] strata
for delta in sorted(incidence.vanishing_set_combinatorial(incidence.SINGLETONS)):
    groups = sorted(incidence.components_containing(delta))
    print(delta.compact(), "->", groups, " excluded:", incidence.excluded_grouping(delta))

print(incidence.local_intersection_census())

# The count is preserved by the symplectic action
point = incidence.sample_point("red_sing", 3)
for seed in range(3):
    m = random_word(3, 5, seed)
    print("count after word", seed, ":", incidence.vanishing_count(act(m, point.data)))
