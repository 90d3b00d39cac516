"""The integer system relating a cluster tree to the topology of a Saito foliation.

For a choice ``delta`` in {0,1}^N (1 = the divisor is invariant), each node
gets a target value

    S_k = (m_k - d_k)/2 + bracket(m_k - d_k; delta_k, 1/2)

where ``d_k`` is ``delta`` of the parent.  The unknown vector ``E`` solves
``ancestor_matrix @ E = S``, that is ``E = P @ S`` with ``P`` the proximity
matrix.  A choice is admissible when, at every node,

    delta_k = 1  =>  E_k >= n_k
    delta_k = 0  =>  E_k >= 2 - sum(delta_i for i neighbouring k)

For unions of smooth branches exactly one ``delta`` is admissible.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TypeVar, Union

from .errors import BruteForceLimitError, InputError, InvariantError, UniquenessError
from .tree import ClusterTree, neighbors

T = TypeVar("T")

DEFAULT_MAX_BRUTE = 20

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def parity_bracket(n: int, a: T, b: T) -> T:
    """``a`` when ``n`` is even, ``b`` when odd."""
    return a if n % 2 == 0 else b


@dataclass(frozen=True)
class SaitoSolution:
    delta: tuple[int, ...]
    small_delta: tuple[int, ...]
    S_vec: tuple[int, ...]
    E_vec: tuple[int, ...]
    admissible: bool
    violations: tuple[tuple[int, str], ...] = ()
    checks: tuple[str, ...] = ()

    @property
    def negative_entries(self) -> tuple[int, ...]:
        """Node ids whose entry of ``E`` is negative (allowed by the compatibility conditions)."""
        return tuple(k for k, e in enumerate(self.E_vec, start=1) if e < 0)


EMPTY_SOLUTION = SaitoSolution((), (), (), (), True)


def _check_delta(tree: ClusterTree, delta: Sequence[int]) -> tuple[int, ...]:
    if len(delta) != len(tree):
        raise InputError(f"delta has length {len(delta)}, tree has {len(tree)} nodes")
    if any(d not in (0, 1) for d in delta):
        raise InputError(f"delta entries must be 0 or 1, got {list(delta)}")
    return tuple(int(d) for d in delta)


def delta_from_parents(tree: ClusterTree, delta: Sequence[int]) -> tuple[int, ...]:
    """Number of invariant parents of each node (0 or 1 at free points)."""
    delta = _check_delta(tree, delta)
    return tuple(0 if p is None else delta[p - 1] for p in tree.parents)


def sigma_entry(m: int, d: int, delta_k: int) -> int:
    # doubled to stay in integers: 2*S = (m - d) + bracket(m - d; 2*delta, 1)
    twice = (m - d) + parity_bracket(m - d, 2 * delta_k, 1)
    if twice % 2:
        raise InvariantError(f"non-integral target value {Fraction(twice, 2)} for m={m}, d={d}, delta={delta_k}")
    return twice // 2


def sigma_vector(tree: ClusterTree, delta: Sequence[int]) -> tuple[int, ...]:
    small = delta_from_parents(tree, delta)
    return tuple(sigma_entry(m, d, dk) for m, d, dk in zip(tree.m, small, delta))


def solve_H(tree: ClusterTree, delta: Sequence[int]) -> tuple[int, ...]:
    """``E = P @ S``: each entry is the node's target minus its children's targets."""
    targets = sigma_vector(tree, delta)
    return tuple(
        targets[nd.id - 1] - sum(targets[c - 1] for c in nd.children) for nd in tree.nodes
    )


def _sub(k: int) -> str:
    return str(k).translate(_SUBSCRIPTS)


def check_admissible(tree: ClusterTree, delta: Sequence[int], E: Sequence[int],
                     require_nonnegative: bool = False) -> SaitoSolution:
    """Evaluate the compatibility conditions node by node.

    ``require_nonnegative`` additionally rejects negative entries of ``E``;
    it is off by default because the conditions themselves permit them.
    """
    delta = _check_delta(tree, delta)
    E = tuple(int(e) for e in E)
    if len(E) != len(tree):
        raise InputError(f"E has length {len(E)}, tree has {len(tree)} nodes")
    violations: list[tuple[int, str]] = []
    checks: list[str] = []
    for nd in tree.nodes:
        k, eps = nd.id, E[nd.id - 1]
        if delta[k - 1] == 1:
            ok = eps >= nd.n
            text = f"ε{_sub(k)}={eps} {'≥' if ok else '<'} n{_sub(k)}={nd.n}"
        else:
            nb = sum(delta[i - 1] for i in sorted(neighbors(tree, k)))
            ok = eps >= 2 - nb
            text = f"ε{_sub(k)}={eps} {'≥' if ok else '<'} 2−{nb}"
        checks.append(text)
        if not ok:
            violations.append((k, text))
        if require_nonnegative and eps < 0:
            violations.append((k, f"ε{_sub(k)}={eps} < 0"))
    return SaitoSolution(
        delta=delta,
        small_delta=delta_from_parents(tree, delta),
        S_vec=sigma_vector(tree, delta),
        E_vec=E,
        admissible=not violations,
        violations=tuple(violations),
        checks=tuple(checks),
    )


def evaluate(tree: ClusterTree, delta: Sequence[int], require_nonnegative: bool = False) -> SaitoSolution:
    return check_admissible(tree, delta, solve_H(tree, delta), require_nonnegative)


def max_brute_default() -> int:
    raw = os.environ.get("MODULI_MAX_BRUTE")
    if raw is None:
        return DEFAULT_MAX_BRUTE
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"MODULI_MAX_BRUTE must be an integer, got {raw!r}") from None


def find_admissible_bruteforce(tree: ClusterTree, max_nodes: Union[int, None] = None,
                               require_nonnegative: bool = False) -> list[SaitoSolution]:
    """Every admissible solution, by enumerating all 2^N choices of ``delta``."""
    bound = max_brute_default() if max_nodes is None else max_nodes
    if len(tree) > bound:
        raise BruteForceLimitError(
            f"brute force over 2^{len(tree)} assignments exceeds the bound of {bound} nodes; "
            "use the fast solver (find_admissible) or raise MODULI_MAX_BRUTE"
        )
    if not len(tree):
        return [EMPTY_SOLUTION]
    found = []
    nodes = tree.nodes
    for delta in itertools.product((0, 1), repeat=len(tree)):
        E = solve_H(tree, delta)
        for nd, dk, eps in zip(nodes, delta, E):
            if require_nonnegative and eps < 0:
                break
            if dk:
                if eps < nd.n:
                    break
            else:
                nb = sum(delta[c - 1] for c in nd.children)
                if nd.parent is not None:
                    nb += delta[nd.parent - 1]
                if eps < 2 - nb:
                    break
        else:
            found.append(check_admissible(tree, delta, E, require_nonnegative))
    return found


@dataclass(frozen=True)
class NodeChoice:
    """Outcome at one node for one value of the parent's flag."""
    node: int
    context: int
    eps_if_invariant: int
    eps_if_dicritical: int
    children_delta_if_invariant: tuple[int, ...]
    children_delta_if_dicritical: tuple[int, ...]
    delta: int
    target: int


def solve_contexts(tree: ClusterTree) -> dict[tuple[int, int], NodeChoice]:
    """Bottom-up pass deciding each node's flag under both parent contexts.

    Children of a node whose flag is 1 are solved under context 1, and under
    context 0 otherwise.  Exactly one of the two candidate flags must pass
    its compatibility condition, else :class:`UniquenessError`.
    """
    table: dict[tuple[int, int], NodeChoice] = {}
    for nd in reversed(tree.nodes):
        contexts = (0,) if nd.parent is None else (0, 1)
        for ctx in contexts:
            kids1 = [table[c, 1] for c in nd.children]
            kids0 = [table[c, 0] for c in nd.children]
            eps1 = sigma_entry(nd.m, ctx, 1) - sum(ch.target for ch in kids1)
            eps0 = sigma_entry(nd.m, ctx, 0) - sum(ch.target for ch in kids0)
            nb0 = ctx * (nd.parent is not None) + sum(ch.delta for ch in kids0)
            passing = tuple(d for d, ok in ((1, eps1 >= nd.n), (0, eps0 >= 2 - nb0)) if ok)
            if len(passing) != 1:
                raise UniquenessError(nd.id, ctx, passing)
            chosen = passing[0]
            table[nd.id, ctx] = NodeChoice(
                node=nd.id,
                context=ctx,
                eps_if_invariant=eps1,
                eps_if_dicritical=eps0,
                children_delta_if_invariant=tuple(ch.delta for ch in kids1),
                children_delta_if_dicritical=tuple(ch.delta for ch in kids0),
                delta=chosen,
                target=sigma_entry(nd.m, ctx, chosen),
            )
    return table


def find_admissible(tree: ClusterTree) -> SaitoSolution:
    """The unique admissible solution, in time linear in the tree size."""
    if not len(tree):
        return EMPTY_SOLUTION
    table = solve_contexts(tree)
    delta = [0] * len(tree)
    for nd in tree.nodes:
        ctx = 0 if nd.parent is None else delta[nd.parent - 1]
        delta[nd.id - 1] = table[nd.id, ctx].delta
    sol = evaluate(tree, delta)
    if not sol.admissible:
        raise InvariantError(f"fast solver produced an inadmissible choice: {sol.violations}")
    return sol
