"""Desingularization cluster trees for unions of smooth branches.

Nodes are the blow-up centers of the minimal resolution, numbered from 1
in depth-first preorder.  Every center of a union of smooth branches is a
free point, so each non-root node has exactly one parent and the proximity
matrix has a single -1 per column.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Optional, Sequence

from .branch import UNSEPARATED, Branch, contact_order
from .errors import InputError, TreeError, UnseparatedBranchesError

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Node:
    id: int
    parent: Optional[int]
    children: tuple[int, ...]
    m: int
    n: int
    divisor_count: int


@dataclass(frozen=True)
class ClusterTree:
    nodes: tuple[Node, ...]
    # False admits centers with a single branch (blow-ups a minimal resolution would skip)
    minimal: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        _validate(self.nodes, self.minimal)

    @classmethod
    def from_parents(cls, parents: Sequence[Optional[int]], n: Sequence[int],
                     root_n_shift: int = 0, minimal: bool = True) -> "ClusterTree":
        """Assemble a tree from 1-based parent ids and attachment counts.

        ``m`` is derived bottom-up; ``root_n_shift`` is added to the root's
        ``n`` (and hence to its ``m``) before validation.
        """
        if len(parents) != len(n):
            raise TreeError("parents and n must have the same length")
        size = len(parents)
        children: list[list[int]] = [[] for _ in range(size)]
        for k, p in enumerate(parents, start=1):
            if k == 1:
                if p is not None:
                    raise TreeError("node 1 must be the root")
                continue
            if p is None or not 1 <= p < k:
                raise TreeError(f"node {k} must have a parent among nodes 1..{k - 1}, got {p}")
            children[p - 1].append(k)
        ns = list(n)
        if size:
            ns[0] += root_n_shift
        ms = [0] * size
        for k in range(size, 0, -1):
            ms[k - 1] = ns[k - 1] + sum(ms[c - 1] for c in children[k - 1])
        nodes = tuple(
            Node(k, parents[k - 1], tuple(children[k - 1]), ms[k - 1], ns[k - 1], 0 if k == 1 else 1)
            for k in range(1, size + 1)
        )
        return cls(nodes, minimal)

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, k: int) -> Node:
        if not isinstance(k, int) or not 1 <= k <= len(self.nodes):
            raise InputError(f"invalid node id {k!r} for a tree with {len(self.nodes)} nodes")
        return self.nodes[k - 1]

    @property
    def root(self) -> Node:
        return self.node(1)

    @cached_property
    def parents(self) -> tuple[Optional[int], ...]:
        return tuple(nd.parent for nd in self.nodes)

    @cached_property
    def m(self) -> tuple[int, ...]:
        return tuple(nd.m for nd in self.nodes)

    @cached_property
    def n(self) -> tuple[int, ...]:
        return tuple(nd.n for nd in self.nodes)

    def to_spec(self) -> dict[str, Any]:
        """Nested ``{"n": ..., "children": [...]}`` form (inverse of :func:`tree_from_spec`)."""
        if not self.nodes:
            return {}

        def build(k: int) -> dict[str, Any]:
            nd = self.node(k)
            return {"n": nd.n, "children": [build(c) for c in nd.children]}

        return build(1)

    def canonical(self) -> tuple:
        """Shape-and-count key that ignores the order of siblings."""
        if not self.nodes:
            return ()
        keys: dict[int, tuple] = {}
        for nd in reversed(self.nodes):
            keys[nd.id] = (nd.n, tuple(sorted(keys[c] for c in nd.children)))
        return keys[1]


def _validate(nodes: Sequence[Node], minimal: bool = True) -> None:
    by_id = {}
    for pos, nd in enumerate(nodes, start=1):
        if nd.id != pos:
            raise TreeError(f"node ids must be 1..N in order; found id {nd.id} at position {pos}")
        by_id[nd.id] = nd
    for nd in nodes:
        if nd.id == 1:
            if nd.parent is not None:
                raise TreeError("the root must not have a parent")
            if nd.divisor_count != 0:
                raise TreeError("no exceptional divisor passes through the root")
        else:
            if nd.parent is None:
                raise TreeError(f"node {nd.id} has no parent: exactly one root is allowed")
            if not 1 <= nd.parent < nd.id:
                raise TreeError(f"node {nd.id}: parent {nd.parent} does not precede it")
            if nd.id not in by_id[nd.parent].children:
                raise TreeError(f"node {nd.id} is missing from the children of {nd.parent}")
            if nd.divisor_count != 1:
                raise TreeError(f"node {nd.id}: free points lie on exactly one divisor")
        for c in nd.children:
            if c not in by_id or by_id[c].parent != nd.id:
                raise TreeError(f"node {nd.id} lists child {c} which does not point back")
        if nd.n < 0:
            raise TreeError(f"node {nd.id}: negative attachment count {nd.n}")
        if nd.m != nd.n + sum(by_id[c].m for c in nd.children):
            raise TreeError(f"node {nd.id}: m={nd.m} differs from n + sum of children m")
        lowest = 2 if minimal else 1
        if nd.m < lowest:
            raise TreeError(
                f"node {nd.id} carries m={nd.m} < {lowest} branches: not a minimal-resolution tree "
                "of a reduced smooth-union curve"
            )


EMPTY_TREE = ClusterTree(())


def build_tree(branches: Sequence[Branch]) -> ClusterTree:
    """Cluster tree of the curve made of ``branches``.

    A center at depth ``p`` is shared by branches with pairwise contact
    order ``>= p``; only centers carrying two or more branches are kept.
    """
    branches = list(branches)
    if not branches:
        raise InputError("the curve has no branches")
    count = len(branches)
    contact = [[0] * count for _ in range(count)]
    for i in range(count):
        for j in range(i + 1, count):
            c = contact_order(branches[i], branches[j])
            if c is UNSEPARATED:
                raise UnseparatedBranchesError(i + 1, j + 1)
            contact[i][j] = contact[j][i] = c
    if count == 1:
        return EMPTY_TREE

    parents: list[Optional[int]] = []
    ns: list[int] = []
    # (members, depth, parent id); popped in preorder
    stack = [(list(range(count)), 1, None)]
    while stack:
        members, depth, parent = stack.pop()
        parents.append(parent)
        me = len(parents)
        groups: list[list[int]] = []
        for b in members:
            for g in groups:
                if contact[g[0]][b] > depth:
                    g.append(b)
                    break
            else:
                groups.append([b])
        ns.append(sum(1 for g in groups if len(g) == 1))
        for g in reversed([g for g in groups if len(g) > 1]):
            stack.append((g, depth + 1, me))
    return ClusterTree.from_parents(parents, ns)


def tree_from_spec(spec: Mapping[str, Any], minimal: bool = True) -> ClusterTree:
    """Tree from a nested ``{"n": int, "children": [...]}`` description."""
    if spec == {}:
        return EMPTY_TREE
    parents: list[Optional[int]] = []
    ns: list[int] = []
    stack: list[tuple[Any, Optional[int], str]] = [(spec, None, "tree")]
    while stack:
        item, parent, path = stack.pop()
        if not isinstance(item, Mapping):
            raise TreeError(f"{path}: expected an object with 'n' and 'children'")
        extra = set(item) - {"n", "children"}
        if extra:
            raise TreeError(f"{path}: unexpected keys {sorted(extra)}")
        n = item.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise TreeError(f"{path}.n: expected a nonnegative integer, got {n!r}")
        kids = item.get("children", [])
        if not isinstance(kids, list):
            raise TreeError(f"{path}.children: expected a list")
        parents.append(parent)
        ns.append(n)
        me = len(parents)
        for i in reversed(range(len(kids))):
            stack.append((kids[i], me, f"{path}.children[{i}]"))
    return ClusterTree.from_parents(parents, ns, minimal=minimal)


def proximity_matrix(tree: ClusterTree) -> Matrix:
    size = len(tree)
    rows = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for nd in tree.nodes:
        if nd.parent is not None:
            rows[nd.parent - 1][nd.id - 1] = -1
    return tuple(tuple(r) for r in rows)


def ancestor_matrix(tree: ClusterTree) -> Matrix:
    """Inverse of the proximity matrix: entry (i, j) is 1 when i is j or an ancestor of j."""
    size = len(tree)
    rows = [[0] * size for _ in range(size)]
    for nd in tree.nodes:
        k: Optional[int] = nd.id
        while k is not None:
            rows[k - 1][nd.id - 1] = 1
            k = tree.node(k).parent
    return tuple(tuple(r) for r in rows)


def neighbors(tree: ClusterTree, k: int) -> set[int]:
    nd = tree.node(k)
    out = set(nd.children)
    if nd.parent is not None:
        out.add(nd.parent)
    return out


def local_curve(tree: ClusterTree, k: int) -> ClusterTree:
    """Tree of the total transform's germ at center ``k``.

    Each exceptional component through the center becomes one more smooth
    branch at the new root, separating after one blow-up.
    """
    nd = tree.node(k)
    keep = []
    inside = {k}
    for other in tree.nodes[k - 1:]:
        if other.id == k or other.parent in inside:
            inside.add(other.id)
            keep.append(other)
    new_id = {old.id: i for i, old in enumerate(keep, start=1)}
    parents = [None if old.id == k else new_id[old.parent] for old in keep]
    return ClusterTree.from_parents(parents, [old.n for old in keep], root_n_shift=nd.divisor_count,
                                    minimal=tree.minimal)


def random_tree(seed: int, max_nodes: int, max_extra: int = 4) -> ClusterTree:
    """Deterministic random valid tree with between 1 and ``max_nodes`` nodes."""
    if max_nodes < 1:
        raise InputError("max_nodes must be at least 1")
    rng = random.Random(seed)
    size = rng.randint(1, max_nodes)
    parent = [None] + [rng.randint(1, k - 1) for k in range(2, size + 1)]
    kids: list[list[int]] = [[] for _ in range(size + 1)]
    for k in range(2, size + 1):
        kids[parent[k - 1]].append(k)

    def n_for(k: int) -> int:
        return rng.randint(0 if kids[k] else 2, (0 if kids[k] else 2) + max_extra)

    counts = [n_for(k) for k in range(1, size + 1)]

    def spec(k: int) -> dict[str, Any]:
        return {"n": counts[k - 1], "children": [spec(c) for c in kids[k]]}

    return tree_from_spec(spec(1))
