import itertools

import pytest

from rescuepd import (Instance, PhyloTree, TaxonInfo, TeamWindow,
                      brute_force_s_time_pd, brute_force_time_pd,
                      build_derived_index, collaborative_feasible,
                      color_edges_from_hash, pd_of_subset,
                      solve_colored_s_time_pd, solve_colored_time_pd,
                      solve_s_time_pd_by_target, solve_time_pd_by_target,
                      strict_feasible, trial_count, verify_schedule)
from rescuepd.color_target import TargetColoring
from rescuepd.errors import BadParams, TargetTooLarge
from rescuepd.generators import gen_random_instance


def mask(*colors):
    m = 0
    for c in colors:
        m |= 1 << (c - 1)
    return m


def test_color_edges_from_hash_examples():
    tree = PhyloTree.from_edges([("r", "a", 2), ("r", "b", 3)])
    identity = list(range(6))   # 1-based positions map to themselves
    col = color_edges_from_hash(tree, 5, identity)
    assert col.edge_colors["a"] == mask(1, 2)
    assert col.edge_colors["b"] == mask(3, 4, 5)

    const = lambda pos: 2
    col = color_edges_from_hash(tree, 5, const)
    assert col.edge_colors["a"] == mask(2)
    assert col.edge_colors["b"] == mask(2)

    col = color_edges_from_hash(tree, 3, [None, 1, 1, 2, 3, 3])
    assert col.edge_colors["a"] == mask(1)
    assert col.edge_colors["b"] == mask(2, 3)

    with pytest.raises(BadParams):
        color_edges_from_hash(tree, 2, [None, 1, 3, 1, 1, 1])


def test_taxon_masks_union():
    tree = PhyloTree.from_edges([("r", "v", 1), ("v", "a", 1), ("v", "b", 1),
                                 ("r", "c", 2)])
    col = TargetColoring(4, {"v": mask(1), "a": mask(2), "b": mask(3),
                             "c": mask(3, 4)})
    masks = col.taxon_masks(tree)
    assert masks == {"a": mask(1, 2), "b": mask(1, 3), "c": mask(3, 4)}


def colored_brute(idx, coloring):
    """Subsets covering the palette and passing feasibility."""
    taxa = idx.instance.tree.taxa
    masks = coloring.taxon_masks(idx.instance.tree)
    full = (1 << coloring.n_colors) - 1
    for k in range(len(taxa) + 1):
        for subset in itertools.combinations(taxa, k):
            got = 0
            for x in subset:
                got |= masks[x]
            if got & full == full and collaborative_feasible(idx, subset):
                return True
    return False


def colored_brute_strict(instance, coloring):
    taxa = instance.tree.taxa
    masks = coloring.taxon_masks(instance.tree)
    full = (1 << coloring.n_colors) - 1
    for k in range(len(taxa) + 1):
        for subset in itertools.combinations(taxa, k):
            got = 0
            for x in subset:
                got |= masks[x]
            if got & full == full and strict_feasible(instance, subset) is not None:
                return True
    return False


def test_colored_solver_trivial_cases():
    inst = gen_random_instance(n=4, seed=2)
    idx = build_derived_index(inst)
    empty = TargetColoring(0, {e: 0 for e in inst.tree.edge_order})
    assert solve_colored_time_pd(idx, empty)[0]

    # color 1 never used: unsatisfiable
    col = TargetColoring(2, {e: mask(2) for e in inst.tree.edge_order})
    assert solve_colored_time_pd(idx, col) == (False, None)


def test_colored_pair_example():
    tree = PhyloTree.from_edges([("r", "x1", 1), ("r", "x2", 1)])
    inst = Instance(tree, {"x1": TaxonInfo(2, 4), "x2": TaxonInfo(3, 6)},
                    (TeamWindow(0, 6),), target=2)
    idx = build_derived_index(inst)
    col = TargetColoring(2, {"x1": mask(1), "x2": mask(2)})
    ok, saved = solve_colored_time_pd(idx, col)
    assert ok and saved == ("x1", "x2")
    total = inst.length("x1") + inst.length("x2")
    assert total == 5 <= idx.hours[-1]


def test_colored_exactness_small_sweep():
    checked = 0
    for seed in range(12):
        inst = gen_random_instance(n=5, n_teams=2, max_ex=6, max_len=4,
                                   max_weight=3, seed=seed, target=4)
        idx = build_derived_index(inst)
        width = inst.tree.total_weight()
        for trial in range(4):
            f = [((pos * 7 + trial * 3 + seed) % inst.target) + 1
                 for pos in range(width + 1)]
            col = color_edges_from_hash(inst.tree, inst.target, f)
            got, witness = solve_colored_time_pd(idx, col)
            assert got == colored_brute(idx, col)
            if got:
                cov = 0
                for x in witness:
                    cov |= col.taxon_masks(inst.tree)[x]
                assert cov == (1 << inst.target) - 1
                assert collaborative_feasible(idx, witness)
                checked += 1
    assert checked > 5


def test_colored_strict_exactness_small_sweep():
    for seed in range(10):
        inst = gen_random_instance(n=4, n_teams=2, max_ex=5, max_len=3,
                                   max_weight=2, seed=seed, target=3,
                                   mode="strict")
        idx = build_derived_index(inst)
        width = inst.tree.total_weight()
        for trial in range(3):
            f = [((pos * 5 + trial + seed) % inst.target) + 1
                 for pos in range(width + 1)]
            col = color_edges_from_hash(inst.tree, inst.target, f)
            got, parts = solve_colored_s_time_pd(idx, col)
            assert got == colored_brute_strict(inst, col)


def test_colored_strict_one_team_matches_collaborative():
    for seed in range(8):
        inst = gen_random_instance(n=4, n_teams=1, max_ex=5, max_len=3,
                                   max_weight=2, seed=seed, target=3)
        idx = build_derived_index(inst)
        width = inst.tree.total_weight()
        f = [(pos % inst.target) + 1 for pos in range(width + 1)]
        col = color_edges_from_hash(inst.tree, inst.target, f)
        assert (solve_colored_time_pd(idx, col)[0]
                == solve_colored_s_time_pd(idx, col)[0])


def test_colored_strict_split_example():
    tree = PhyloTree.from_edges([("r", "x1", 1), ("r", "x2", 1)])
    inst = Instance(tree, {"x1": TaxonInfo(3, 3), "x2": TaxonInfo(4, 13)},
                    (TeamWindow(0, 3), TeamWindow(9, 13)), target=2,
                    mode="strict")
    idx = build_derived_index(inst)
    col = TargetColoring(2, {"x1": mask(1), "x2": mask(2)})
    ok, parts = solve_colored_s_time_pd(idx, col)
    assert ok
    assert sorted(x for part in parts for x in part) == ["x1", "x2"]
    assert "x1" in parts[0] and "x2" in parts[1]


def test_capacity_rule_variants():
    """The printed per-team bound checks the intermediate class and misses
    sets where a quick early rescue precedes a long one; the added-class
    bound matches the strict oracle.  Kept switchable so any oracle
    disagreement localizes to this choice."""
    tree = PhyloTree.from_edges([("r", "a", 1), ("r", "x", 1)])
    inst = Instance(tree, {"a": TaxonInfo(1, 1), "x": TaxonInfo(5, 10)},
                    (TeamWindow(0, 10),), target=2, mode="strict")
    idx = build_derived_index(inst)
    col = TargetColoring(2, {"a": mask(1), "x": mask(2)})
    assert strict_feasible(inst, ["a", "x"]) is not None
    ok_fixed, _ = solve_colored_s_time_pd(idx, col, "added-class")
    ok_printed, _ = solve_colored_s_time_pd(idx, col, "printed")
    assert ok_fixed and not ok_printed


def test_capacity_rules_agree_when_oracle_does():
    """added-class never claims yes where the strict oracle says no."""
    for seed in range(10):
        inst = gen_random_instance(n=4, n_teams=2, max_ex=5, max_len=3,
                                   max_weight=2, seed=300 + seed, target=3,
                                   mode="strict")
        idx = build_derived_index(inst)
        width = inst.tree.total_weight()
        f = [(pos % inst.target) + 1 for pos in range(width + 1)]
        col = color_edges_from_hash(inst.tree, inst.target, f)
        fixed, _ = solve_colored_s_time_pd(idx, col, "added-class")
        printed, _ = solve_colored_s_time_pd(idx, col, "printed")
        oracle = colored_brute_strict(inst, col)
        assert fixed == oracle
        if printed:          # the printed rule is only ever too strict
            assert oracle


def test_trial_count():
    assert trial_count(1, 0.5) == 2      # ceil(e * ln 2)
    assert trial_count(5, 1e-3) == 1026  # ceil(e^5 * ln 1000)
    with pytest.raises(BadParams):
        trial_count(3, 0.0)
    with pytest.raises(BadParams):
        trial_count(3, 1.5)


def test_target_solver_against_oracle():
    for seed in range(20):
        inst = gen_random_instance(n=6, n_teams=2, max_ex=6, max_len=4,
                                   max_weight=3, seed=seed, target=5)
        oracle = brute_force_time_pd(inst)
        out = solve_time_pd_by_target(inst, delta=0.01, seed=seed)
        if oracle.decision:
            assert out.decision
            assert pd_of_subset(inst.tree, out.saved) >= inst.target
            assert verify_schedule(inst, out.schedule).ok
        else:
            assert not out.decision   # soundness is deterministic


def test_strict_target_solver_against_oracle():
    for seed in range(15):
        inst = gen_random_instance(n=4, n_teams=2, max_ex=5, max_len=4,
                                   max_weight=2, seed=seed, target=3,
                                   mode="strict")
        oracle = brute_force_s_time_pd(inst)
        out = solve_s_time_pd_by_target(inst, delta=0.01, seed=seed)
        if oracle.decision:
            assert out.decision
            assert verify_schedule(inst, out.schedule).ok
        else:
            assert not out.decision


def test_target_monotone_in_target():
    for seed in range(8):
        base = gen_random_instance(n=5, n_teams=2, max_ex=6, max_len=4,
                                   max_weight=3, seed=seed)
        decisions = []
        for target in range(1, 7):
            inst = Instance(base.tree, base.taxa, base.teams, target)
            decisions.append(solve_time_pd_by_target(inst, delta=0.01,
                                                     seed=seed).decision)
        # once the solver fails at some target, larger targets cannot succeed
        for lo, hi in zip(decisions, decisions[1:]):
            assert lo or not hi


def test_target_one_yes_when_anything_savable():
    inst = gen_random_instance(n=4, seed=9, target=1)
    out = solve_time_pd_by_target(inst, delta=0.5, seed=0)
    assert out.decision and len(out.saved) == 1


def test_trial_order_independence():
    """The reported trial equals the first success over the trial index
    space, so any execution order (or parallel split) gives the same
    outcome for a fixed (seed, delta)."""
    from rescuepd.color_target import _trial_rng
    inst = gen_random_instance(n=5, n_teams=2, max_ex=6, max_len=4,
                               max_weight=3, seed=34, target=4)
    idx = build_derived_index(inst)
    out = solve_time_pd_by_target(inst, delta=0.05, seed=5)
    assert out.decision and out.trials >= 1
    width = inst.tree.total_weight()
    successes = []
    for trial in range(1, out.diagnostics["planned_trials"] + 1):
        f = _trial_rng(5, trial).integers(1, inst.target + 1, size=width + 1)
        col = color_edges_from_hash(inst.tree, inst.target, f)
        if solve_colored_time_pd(idx, col)[0]:
            successes.append(trial)
            if len(successes) > 3:
                break
    assert successes and successes[0] == out.trials


def test_determinism_and_guard():
    inst = gen_random_instance(n=5, seed=4, target=4)
    a = solve_time_pd_by_target(inst, delta=0.01, seed=11)
    b = solve_time_pd_by_target(inst, delta=0.01, seed=11)
    assert (a.decision, a.saved, a.trials) == (b.decision, b.saved, b.trials)
    tree = PhyloTree.from_edges([("r", "a", 20), ("r", "b", 20)])
    big = Instance(tree, {"a": TaxonInfo(1, 2), "b": TaxonInfo(1, 2)},
                   (TeamWindow(0, 2),), target=35)
    with pytest.raises(TargetTooLarge):
        solve_time_pd_by_target(big, mask_limit=30)
