import pytest

from rescuepd import (Instance, PhyloTree, TaxonInfo, TeamWindow,
                      build_derived_index, classify_trivial, pd_of_subset)
from rescuepd.errors import InvalidInstance, UnknownTaxon
from rescuepd.files import instance_from_dict, instance_to_dict
from rescuepd.generators import gen_random_instance

import random


def test_fig1_derived_index(fig1_instance):
    idx = build_derived_index(fig1_instance)
    assert idx.ex_values == (7, 12, 18)
    assert idx.hours == (19, 39, 54)   # the printed 55 contradicts the sums
    assert idx.team_hours == ((7, 12, 17), (5, 10, 11), (4, 9, 12), (3, 8, 14))
    assert idx.classes == (("x1", "x2"), ("x4", "x5"), ("x3", "x6"))
    assert idx.deficits == (19 - 19, 34 - 39, 52 - 54)


def test_fig3_derived_index(fig3_instance):
    idx = build_derived_index(fig3_instance)
    assert idx.ex_values == (4, 7, 15)
    assert idx.hours == (10, 19, 39)   # the printed 49 contradicts the sums


def test_single_team_two_deadlines():
    tree = PhyloTree.from_edges([("r", "a", 1), ("r", "b", 1)])
    inst = Instance(tree, {"a": TaxonInfo(1, 2), "b": TaxonInfo(1, 4)},
                    (TeamWindow(0, 4),), target=1)
    idx = build_derived_index(inst)
    assert idx.ex_values == (2, 4)
    assert idx.hours == (2, 4)
    assert set(idx.prefix(0)) < set(idx.prefix(1))


def test_index_identities(fig1_instance):
    idx = build_derived_index(fig1_instance)
    for k in range(idx.n_classes):
        need = sum(fig1_instance.length(x) for x in idx.prefix(k))
        assert idx.deficits[k] == need - idx.hours[k]
        assert sum(t[k] for t in idx.team_hours) == idx.hours[k]
        if k:
            assert idx.hours[k] >= idx.hours[k - 1]


def test_pd_empty_full_and_path(fig2):
    tree = fig2.tree
    assert pd_of_subset(tree, []) == 0
    assert pd_of_subset(tree, tree.taxa) == tree.total_weight()
    assert pd_of_subset(tree, ["x3"]) == 3 + 2
    with pytest.raises(UnknownTaxon):
        pd_of_subset(tree, ["nope"])


def test_pd_monotone_and_submodular():
    rng = random.Random(5)
    for seed in range(20):
        inst = gen_random_instance(n=6, seed=seed,
                                   tree_shape="random-multifurcating")
        tree = inst.tree
        taxa = list(tree.taxa)
        for _ in range(10):
            a = {x for x in taxa if rng.random() < 0.4}
            b = a | {x for x in taxa if rng.random() < 0.4}
            assert pd_of_subset(tree, a) <= pd_of_subset(tree, b)
            x = rng.choice(taxa)
            if x in b:
                continue
            gain_a = pd_of_subset(tree, a | {x}) - pd_of_subset(tree, a)
            gain_b = pd_of_subset(tree, b | {x}) - pd_of_subset(tree, b)
            assert gain_a >= gain_b


def test_classify_trivial(fig1_instance):
    idx = build_derived_index(fig1_instance)
    total = idx.pd_total
    yes = Instance(fig1_instance.tree, fig1_instance.taxa,
                   fig1_instance.teams, 0)
    no = Instance(fig1_instance.tree, fig1_instance.taxa,
                  fig1_instance.teams, total + 1)
    assert classify_trivial(yes, build_derived_index(yes)).kind == "yes"
    assert classify_trivial(no, build_derived_index(no)).kind == "no"
    assert classify_trivial(fig1_instance, idx).kind == "nontrivial"


@pytest.mark.parametrize("mode", ["collaborative", "strict"])
def test_unsavable_taxon_listed(mode):
    tree = PhyloTree.from_edges([("r", "a", 1), ("r", "b", 1)])
    inst = Instance(tree, {"a": TaxonInfo(10, 3), "b": TaxonInfo(1, 5)},
                    (TeamWindow(0, 20),), target=1, mode=mode)
    check = classify_trivial(inst, build_derived_index(inst))
    assert check.unsavable == ("a",)


def test_tree_validation_errors():
    with pytest.raises(InvalidInstance):
        PhyloTree.from_edges([("r", "a", 0), ("r", "b", 1)])
    with pytest.raises(InvalidInstance):  # out-degree 1 internal vertex
        PhyloTree.from_edges([("r", "v", 1), ("r", "b", 1), ("v", "a", 1)])
    with pytest.raises(InvalidInstance):  # two parents
        PhyloTree.from_edges([("r", "a", 1), ("r", "b", 1), ("b", "a", 1)])
    with pytest.raises(InvalidInstance):  # two roots
        PhyloTree.from_edges([("r", "a", 1), ("s", "b", 1)])


def test_instance_validation_errors():
    tree = PhyloTree.from_edges([("r", "a", 1), ("r", "b", 1)])
    taxa = {"a": TaxonInfo(1, 1), "b": TaxonInfo(1, 1)}
    with pytest.raises(InvalidInstance):
        Instance(tree, {"a": taxa["a"]}, (TeamWindow(0, 1),), 0)
    with pytest.raises(InvalidInstance):
        Instance(tree, taxa, (), 0)
    with pytest.raises(InvalidInstance):
        Instance(tree, taxa, (TeamWindow(3, 3),), 0)
    with pytest.raises(InvalidInstance):
        Instance(tree, {"a": TaxonInfo(0, 1), "b": taxa["b"]},
                 (TeamWindow(0, 1),), 0)


def test_capacity_overflow_rejected():
    tree = PhyloTree.from_edges([("r", "a", 1), ("r", "b", 1)])
    huge = 2**63
    inst = Instance(tree, {"a": TaxonInfo(1, huge), "b": TaxonInfo(1, 1)},
                    (TeamWindow(0, huge), TeamWindow(0, huge)), target=1)
    with pytest.raises(InvalidInstance):
        build_derived_index(inst)


def test_reserialized_instance_same_index():
    for seed in range(10):
        inst = gen_random_instance(n=6, seed=seed,
                                   tree_shape="random-multifurcating")
        back = instance_from_dict(instance_to_dict(inst))
        a, b = build_derived_index(inst), build_derived_index(back)
        assert a.ex_values == b.ex_values
        assert a.hours == b.hours
        assert a.team_hours == b.team_hours
        assert a.deficits == b.deficits
        assert a.order == b.order
        assert a.pd_total == b.pd_total
        assert a.lengths == b.lengths
