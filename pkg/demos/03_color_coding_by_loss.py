"""Color coding parameterized by the acceptable diversity loss.

When the target sits close to the tree's total diversity, it is cheaper to
reason about what gets sacrificed.  Anchored tuples (taxon, anchor,
sibling edge) track the dead edges of a sacrifice; key and extra colors
make the bookkeeping exact.  The solver decides the colored instances from
seeded random palettes and re-verifies every yes.
"""

from rescuepd import (Instance, brute_force_time_pd, build_derived_index,
                      anchored_set_for_sacrifice, gen_random_instance,
                      injective_coloring, find_valid_ordering,
                      solve_time_pd_by_loss)
from rescuepd.color_loss import path_between

base = gen_random_instance(n=6, n_teams=2, max_ex=8, max_len=5,
                           max_weight=4, min_weight=2, savable_frac=0.85,
                           tree_shape="random-binary", seed=8)
idx = build_derived_index(base)
oracle = brute_force_time_pd(base)
best_loss = idx.pd_total - oracle.value
print("total diversity:", idx.pd_total, "| optimal loss:", best_loss)

for budget in range(max(0, best_loss - 1), best_loss + 2):
    instance = Instance(base.tree, base.taxa, base.teams,
                        idx.pd_total - budget)
    out = solve_time_pd_by_loss(instance, delta=1e-3, seed=4)
    print(f"loss budget {budget}: {'yes' if out.decision else 'no'}"
          f" (trials {out.trials})",
          f"sacrificed {sorted(set(base.tree.taxa) - set(out.saved))}"
          if out.decision else "")

# the anchored-set view of one concrete sacrifice
sacrificed = set(base.tree.taxa) - set(oracle.saved)
if sacrificed:
    anchored = anchored_set_for_sacrifice(base.tree, sacrificed,
                                          lambda x: base.deadline(x))
    print("\nanchored tuples for the optimal sacrifice:")
    for x, v, e in anchored:
        print(f"  lose {x}, anchored at {v}, sibling edge into {e},"
              f" dead path {path_between(base.tree, v, x)}")
    ordering = find_valid_ordering(base.tree, injective_coloring(base.tree),
                                   anchored, lambda x: base.deadline(x))
    print("insertion order by deadline:", [x for x, _, _ in ordering])
else:
    print("\nthe teams can save everything here")
