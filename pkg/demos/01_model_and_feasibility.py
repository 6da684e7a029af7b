"""Build an instance by hand, inspect the derived capacities, and schedule.

Six taxa with two deadline waves, four staggered teams.  The derived index
shows the person-hours available by each deadline and the deficit if one
insisted on saving every prefix; the greedy constructor then produces a
schedule and the verifier re-checks it bit by bit.
"""

from rescuepd import (Instance, TaxonInfo, TeamWindow,
                      build_collaborative_schedule, build_derived_index,
                      collaborative_feasible, parse_newick, pd_of_subset,
                      verify_schedule)

tree = parse_newick("((x1:2,x2:1):1,(x3:3,(x4:1,x5:1):2):1,x6:4);")
taxa = {
    "x1": TaxonInfo(10, 7), "x2": TaxonInfo(9, 7),
    "x3": TaxonInfo(13, 18), "x4": TaxonInfo(8, 12),
    "x5": TaxonInfo(7, 12), "x6": TaxonInfo(5, 18),
}
teams = (TeamWindow(0, 17), TeamWindow(2, 13),
         TeamWindow(3, 15), TeamWindow(4, 18))
instance = Instance(tree, taxa, teams, target=12)
idx = build_derived_index(instance)

print("distinct deadlines:", idx.ex_values)
print("hours available by deadline:", idx.hours)
print("deficits (need - have) per prefix:", idx.deficits)
print("total diversity:", idx.pd_total, " target:", instance.target)

everything = tree.taxa
print("\ncan we save everything?",
      collaborative_feasible(idx, everything))

schedule = build_collaborative_schedule(idx, everything)
report = verify_schedule(instance, schedule)
print("verifier says:", "pass" if report.ok else "FAIL")
for x in everything:
    print(f"  {x}: {report.hours[x]}/{report.required[x]} hours,"
          f" diversity alone = {pd_of_subset(tree, [x])}")

drop_one = [x for x in everything if x != "x1"]
print("\ndiversity without x1:", pd_of_subset(tree, drop_one))
