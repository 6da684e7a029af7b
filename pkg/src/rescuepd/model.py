"""Core data model: trees, taxa, teams, and derived capacity quantities.

Conventions used throughout the package:

* Timeslots are 1-based.  A team with window (s, e) works during the slots
  j with s < j <= e, i.e. for e - s person-hours.
* Deadline classes are 0-indexed.  ``ex_values[0] < ex_values[1] < ...`` are
  the distinct extinction times; class k holds the taxa that go extinct at
  ``ex_values[k]``, and the prefix up to class k is every taxon with a
  deadline <= ``ex_values[k]``.
* A taxa set is any iterable of leaf labels; canonical form is the sorted
  tuple of labels.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInstance, UnknownTaxon

MAX_HOURS = 2**63 - 1  # capacities are kept within 64-bit range

COLLABORATIVE = "collaborative"
STRICT = "strict"
MODES = (COLLABORATIVE, STRICT)


@dataclass(frozen=True)
class TaxonInfo:
    """Per-taxon rescue data: person-hours needed and last usable timeslot."""

    rescue_length: int
    extinction_time: int


@dataclass(frozen=True)
class TeamWindow:
    """Availability window of one team: slots j with start < j <= end."""

    start: int
    end: int

    def hours_until(self, deadline: int) -> int:
        """Person-hours this team can contribute in slots <= deadline."""
        return max(0, min(self.end, deadline) - self.start)


class PhyloTree:
    """Rooted tree with positive integer edge weights and labeled leaves.

    Vertices are arbitrary strings; leaves double as taxon labels.  Child
    order is stable (source order), which fixes the canonical edge order:
    edges are listed by preorder traversal and identified by their child
    vertex.
    """

    __slots__ = ("root", "children", "parent", "weight", "taxa", "_edge_order")

    def __init__(self, root: str, children: dict[str, tuple[str, ...]],
                 weight: dict[str, int]):
        self.root = root
        self.children = {v: tuple(cs) for v, cs in children.items()}
        self.weight = dict(weight)
        self.parent = {}
        for v, cs in self.children.items():
            for c in cs:
                if c in self.parent:
                    raise InvalidInstance(f"vertex {c!r} has two parents")
                self.parent[c] = v
        self._validate()
        self.taxa = tuple(sorted(v for v in self._vertices() if self.is_leaf(v)))
        self._edge_order = tuple(v for v in self.preorder() if v != self.root)

    @classmethod
    def from_edges(cls, edges: list[tuple[str, str, int]]) -> "PhyloTree":
        """Build a tree from (parent, child, weight) triples in source order."""
        children: dict[str, list[str]] = {}
        weight: dict[str, int] = {}
        for u, v, w in edges:
            children.setdefault(u, []).append(v)
            children.setdefault(v, [])
            if v in weight:
                raise InvalidInstance(f"edge into {v!r} listed twice")
            weight[v] = w
        roots = [v for v in children
                 if not any(v in cs for cs in children.values())]
        if len(roots) != 1:
            raise InvalidInstance(f"expected one root, found {sorted(roots)}")
        return cls(roots[0], {v: tuple(cs) for v, cs in children.items()}, weight)

    def _vertices(self):
        seen = [self.root]
        out = []
        while seen:
            v = seen.pop()
            out.append(v)
            seen.extend(reversed(self.children.get(v, ())))
        return out

    def _validate(self):
        order = self._vertices()
        if len(order) != len(set(order)):
            raise InvalidInstance("tree contains a repeated vertex (cycle)")
        known = set(order)
        for v in self.children:
            if v not in known:
                raise InvalidInstance(f"vertex {v!r} unreachable from the root")
        n_leaves = sum(1 for v in order if not self.children.get(v))
        for v in order:
            cs = self.children.get(v, ())
            if v != self.root and cs and len(cs) < 2:
                raise InvalidInstance(f"internal vertex {v!r} has out-degree 1")
            if v == self.root and cs and len(cs) < 2 and n_leaves > 1:
                raise InvalidInstance("root has out-degree 1")
            if v != self.root:
                w = self.weight.get(v)
                if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                    raise InvalidInstance(f"edge into {v!r} has weight {w!r}; "
                                          "weights must be integers >= 1")
        if self.root in self.weight:
            raise InvalidInstance("root must not carry an edge weight")

    def is_leaf(self, v: str) -> bool:
        return not self.children.get(v)

    def preorder(self) -> list[str]:
        return self._vertices()

    @property
    def edge_order(self) -> tuple[str, ...]:
        """Canonical edge order; an edge is named by its child vertex."""
        return self._edge_order

    def root_path(self, label: str) -> tuple[str, ...]:
        """Edges (as child vertices) from the root down to a leaf."""
        if label not in self.parent and label != self.root:
            raise UnknownTaxon(f"unknown taxon {label!r}")
        path = []
        v = label
        while v != self.root:
            path.append(v)
            v = self.parent[v]
        return tuple(reversed(path))

    def offspring(self, v: str) -> tuple[str, ...]:
        """Leaf labels below v (v itself when it is a leaf)."""
        stack, out = [v], []
        while stack:
            u = stack.pop()
            cs = self.children.get(u, ())
            if not cs:
                out.append(u)
            stack.extend(reversed(cs))
        return tuple(out)

    def is_binary(self) -> bool:
        return all(len(cs) == 2 for cs in self.children.values() if cs)

    def is_star(self) -> bool:
        return all(self.is_leaf(c) for c in self.children.get(self.root, ()))

    def total_weight(self) -> int:
        return sum(self.weight.values())

    def __eq__(self, other):
        return (isinstance(other, PhyloTree) and self.root == other.root
                and self.children == other.children and self.weight == other.weight)

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.weight.items()))))


@dataclass(frozen=True)
class Instance:
    """One rescue-planning problem: tree, taxa data, teams, target, mode."""

    tree: PhyloTree
    taxa: dict  # label -> TaxonInfo
    teams: tuple  # of TeamWindow
    target: int
    mode: str = COLLABORATIVE

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidInstance(f"mode must be one of {MODES}, got {self.mode!r}")
        if set(self.taxa) != set(self.tree.taxa):
            missing = set(self.tree.taxa) ^ set(self.taxa)
            raise InvalidInstance(f"taxa map and tree leaves differ on {sorted(missing)}")
        if not self.teams:
            raise InvalidInstance("at least one team is required")
        for i, t in enumerate(self.teams):
            if not (0 <= t.start < t.end):
                raise InvalidInstance(f"team {i} window ({t.start}, {t.end}) "
                                      "needs 0 <= start < end")
        for x, info in self.taxa.items():
            if info.rescue_length < 1:
                raise InvalidInstance(f"taxon {x!r} has rescue length < 1")
            if info.extinction_time < 1:
                raise InvalidInstance(f"taxon {x!r} has extinction time < 1")
        if self.target < 0:
            raise InvalidInstance("target diversity must be >= 0")

    def length(self, x: str) -> int:
        return self.taxa[x].rescue_length

    def deadline(self, x: str) -> int:
        return self.taxa[x].extinction_time

    def availability(self) -> tuple[tuple[int, int], ...]:
        """All (team index, timeslot) pairs where some team can work."""
        return tuple((i, j) for i, t in enumerate(self.teams)
                     for j in range(t.start + 1, t.end + 1))


@dataclass(frozen=True)
class DerivedIndex:
    """Everything the solvers derive from an instance.

    ``hours[k]`` is the total person-hours available up to the k-th distinct
    deadline, ``team_hours[i][k]`` the same for team i alone, and
    ``deficits[k]`` the (possibly negative) shortfall between the hours
    needed to save every taxon in the k-th prefix and ``hours[k]``.
    """

    instance: Instance
    ex_values: tuple[int, ...]
    classes: tuple[tuple[str, ...], ...]
    order: tuple[str, ...]          # taxa sorted by (deadline, label)
    class_end: tuple[int, ...]      # prefix boundary into `order` per class
    class_of: dict                  # label -> class index (0-based)
    hours: tuple[int, ...]
    team_hours: tuple[tuple[int, ...], ...]
    deficits: tuple[int, ...]
    pd_total: int
    loss_budget: int                # pd_total - target; negative => trivial no
    lengths: tuple[int, ...]
    max_ex: int
    max_len: int
    max_weight: int

    @property
    def n_classes(self) -> int:
        return len(self.ex_values)

    def prefix(self, k: int) -> tuple[str, ...]:
        """Taxa whose deadline is at most the k-th distinct extinction time."""
        return self.order[: self.class_end[k]]


def build_derived_index(instance: Instance) -> DerivedIndex:
    """Populate every derived quantity; raises InvalidInstance on bad input."""
    tree, taxa = instance.tree, instance.taxa
    ex_values = tuple(sorted({info.extinction_time for info in taxa.values()}))
    order = tuple(sorted(taxa, key=lambda x: (taxa[x].extinction_time, x)))
    classes, class_end, class_of = [], [], {}
    pos = 0
    for k, ex in enumerate(ex_values):
        members = tuple(x for x in order[pos:] if taxa[x].extinction_time == ex)
        classes.append(members)
        pos += len(members)
        class_end.append(pos)
        for x in members:
            class_of[x] = k
    team_hours = tuple(tuple(t.hours_until(ex) for ex in ex_values)
                       for t in instance.teams)
    hours = tuple(sum(col) for col in zip(*team_hours))
    if hours and hours[-1] > MAX_HOURS:
        raise InvalidInstance("total person-hours overflow 64-bit range")
    need = 0
    deficits = []
    for k, members in enumerate(classes):
        need += sum(taxa[x].rescue_length for x in members)
        deficits.append(need - hours[k])
    pd_total = tree.total_weight()
    return DerivedIndex(
        instance=instance,
        ex_values=ex_values,
        classes=tuple(classes),
        order=order,
        class_end=tuple(class_end),
        class_of=class_of,
        hours=hours,
        team_hours=team_hours,
        deficits=tuple(deficits),
        pd_total=pd_total,
        loss_budget=pd_total - instance.target,
        lengths=tuple(sorted({info.rescue_length for info in taxa.values()})),
        max_ex=ex_values[-1],
        max_len=max(info.rescue_length for info in taxa.values()),
        max_weight=max(tree.weight.values()),
    )


def pd_of_subset(tree: PhyloTree, taxa_set) -> int:
    """Total weight of edges with at least one member of the set below them.

    One bottom-up traversal; empty set gives 0, the full taxa set gives the
    sum of all edge weights.
    """
    members = set(taxa_set)
    for x in members:
        if x not in tree.taxa:
            raise UnknownTaxon(f"unknown taxon {x!r}")
    total = 0
    reaches = {}
    for v in reversed(tree.preorder()):
        cs = tree.children.get(v, ())
        if not cs:
            reaches[v] = v in members
        else:
            reaches[v] = any(reaches[c] for c in cs)
        if v != tree.root and reaches[v]:
            total += tree.weight[v]
    return total


@dataclass(frozen=True)
class TrivialCheck:
    """Outcome of the pre-solver screen.

    kind is "yes" (empty set already meets the target), "no" (target exceeds
    the whole tree's diversity), or "nontrivial".  ``unsavable`` lists taxa
    that no schedule can save on their own in the instance's mode.
    """

    kind: str
    witness: tuple = ()
    unsavable: tuple = ()


def savable_alone(instance: Instance, idx: DerivedIndex, x: str) -> bool:
    """Can {x} be saved by itself (mode-aware)?"""
    info = instance.taxa[x]
    if instance.mode == STRICT:
        return any(t.hours_until(info.extinction_time) >= info.rescue_length
                   for t in instance.teams)
    return info.rescue_length <= idx.hours[idx.class_of[x]]


def classify_trivial(instance: Instance, idx: DerivedIndex) -> TrivialCheck:
    """Screen for trivial instances and list unsavable taxa."""
    unsavable = tuple(x for x in idx.order if not savable_alone(instance, idx, x))
    if instance.target > idx.pd_total:
        return TrivialCheck("no", unsavable=unsavable)
    if instance.target == 0:
        return TrivialCheck("yes", witness=(), unsavable=unsavable)
    return TrivialCheck("nontrivial", unsavable=unsavable)


def canon(taxa_set) -> tuple[str, ...]:
    """Canonical form of a taxa set: sorted tuple of labels."""
    return tuple(sorted(taxa_set))
