import itertools

import pytest

from rescuepd import (Instance, PhyloTree, TaxonInfo, TeamWindow, brute_force,
                      brute_force_s_time_pd, brute_force_time_pd,
                      build_derived_index, collaborative_feasible,
                      exhaustive_schedule_search, strict_feasible,
                      verify_schedule)
from rescuepd.errors import InstanceTooLarge, SearchSpaceTooLarge
from rescuepd.generators import gen_random_instance


def test_star_example():
    tree = PhyloTree.from_edges([("r", "x1", 2), ("r", "x2", 3)])
    inst = Instance(tree, {"x1": TaxonInfo(2, 2), "x2": TaxonInfo(2, 4)},
                    (TeamWindow(0, 4),), target=5)
    out = brute_force_time_pd(inst)
    assert out.decision and out.saved == ("x1", "x2") and out.value == 5


def test_target_zero_yes():
    inst = gen_random_instance(n=4, seed=3, target=0)
    out = brute_force_time_pd(inst)
    assert out.decision
    # the empty set already suffices, and it is the preferred witness
    assert out.saved == () or out.value >= 0


def test_prop5_reduction(prop5_instance):
    out = brute_force_time_pd(prop5_instance)
    assert out.decision and out.value == 19
    assert out.saved == ("x2", "x3")


def test_one_team_strict_equals_collaborative():
    for seed in range(10):
        inst = gen_random_instance(n=5, n_teams=1, max_ex=6, max_len=4,
                                   max_weight=3, seed=seed)
        a = brute_force_time_pd(inst)
        b = brute_force_s_time_pd(inst)
        assert a.decision == b.decision and a.value == b.value


def test_three_team_partition_example():
    tree = PhyloTree.from_edges([("r", f"x{i}", 1) for i in range(1, 7)])
    lens = [2, 3, 5, 2, 3, 5]
    taxa = {f"x{i}": TaxonInfo(lens[i - 1], 5) for i in range(1, 7)}
    inst = Instance(tree, taxa, (TeamWindow(0, 5),) * 3, target=6, mode="strict")
    out = brute_force_s_time_pd(inst)
    partitionable = any(
        all(sum(l for l, t in zip(lens, choice) if t == team) <= 5
            for team in range(3))
        for choice in itertools.product(range(3), repeat=6))
    assert out.decision == partitionable
    assert not out.decision and out.value == 5   # 20 hours needed, 15 available


def test_strict_never_beats_collaborative():
    for seed in range(15):
        inst = gen_random_instance(n=5, n_teams=2, max_ex=5, max_len=4,
                                   max_weight=3, seed=seed)
        assert (brute_force_time_pd(inst).value
                >= brute_force_s_time_pd(inst).value)


def test_relabeling_invariance():
    for seed in range(8):
        inst = gen_random_instance(n=5, n_teams=2, max_ex=5, max_len=4,
                                   max_weight=3, seed=seed)
        mapping = {x: f"z{9 - i}" for i, x in enumerate(inst.tree.taxa)}
        edges = []
        for v in inst.tree.preorder():
            for c in inst.tree.children.get(v, ()):
                edges.append((mapping.get(v, v), mapping.get(c, c),
                              inst.tree.weight[c]))
        relabeled = Instance(PhyloTree.from_edges(edges),
                             {mapping[x]: info for x, info in inst.taxa.items()},
                             inst.teams, inst.target, inst.mode)
        a, b = brute_force_time_pd(inst), brute_force_time_pd(relabeled)
        assert a.decision == b.decision and a.value == b.value
        c, d = brute_force_s_time_pd(inst), brute_force_s_time_pd(relabeled)
        assert c.decision == d.decision and c.value == d.value


def test_exhaustive_agrees_with_feasibility_oracles():
    for seed in range(10):
        inst = gen_random_instance(n=4, n_teams=2, max_ex=4, max_len=3,
                                   max_weight=2, seed=seed)
        idx = build_derived_index(inst)
        strict_inst = Instance(inst.tree, inst.taxa, inst.teams, inst.target,
                               "strict")
        for k in range(len(inst.tree.taxa) + 1):
            for subset in itertools.combinations(inst.tree.taxa, k):
                assert (exhaustive_schedule_search(inst, subset)
                        == collaborative_feasible(idx, subset))
                assert (exhaustive_schedule_search(strict_inst, subset)
                        == (strict_feasible(strict_inst, subset) is not None))


def test_guards():
    inst = gen_random_instance(n=6, seed=0)
    with pytest.raises(InstanceTooLarge):
        brute_force_time_pd(inst, guard=5)
    with pytest.raises(InstanceTooLarge):
        brute_force_s_time_pd(inst, guard=5)
    big = gen_random_instance(n=8, n_teams=3, max_ex=9, seed=1)
    with pytest.raises(SearchSpaceTooLarge):
        exhaustive_schedule_search(big, big.tree.taxa, guard=10)


def test_witnesses_verify():
    for seed in range(10):
        inst = gen_random_instance(n=5, n_teams=2, max_ex=5, max_len=4,
                                   max_weight=3, seed=seed)
        out = brute_force(inst)
        assert verify_schedule(inst, out.schedule).ok
        strict_inst = Instance(inst.tree, inst.taxa, inst.teams,
                               inst.target, "strict")
        out = brute_force(strict_inst)
        assert verify_schedule(strict_inst, out.schedule).ok
