import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothmoduli import (
    BruteForceLimitError,
    InputError,
    UniquenessError,
    ancestor_matrix,
    check_admissible,
    delta_from_parents,
    find_admissible,
    find_admissible_bruteforce,
    parity_bracket,
    random_tree,
    sigma_vector,
    solve_H,
    tree_from_spec,
)
from smoothmoduli.solver import EMPTY_SOLUTION, evaluate, solve_contexts
from smoothmoduli.tree import EMPTY_TREE, ClusterTree

from conftest import chain, single


def augmented(tree):
    """Adjoin a generic transverse smooth branch: root m and n go up by one."""
    return ClusterTree.from_parents(tree.parents, tree.n, root_n_shift=1)


def test_parity_bracket():
    assert parity_bracket(4, "a", "b") == "a"
    assert parity_bracket(7, "a", "b") == "b"
    assert parity_bracket(-1, 1, Fraction(1, 2)) == Fraction(1, 2)


def test_delta_from_parents(chain424, tangent_pairs_tree):
    assert delta_from_parents(chain424, (0, 1, 0)) == (0, 0, 1)
    assert delta_from_parents(tangent_pairs_tree, (1, 0, 0)) == (0, 1, 1)
    assert delta_from_parents(chain424, (0, 0, 0)) == (0, 0, 0)
    with pytest.raises(InputError):
        delta_from_parents(chain424, (0, 1))
    with pytest.raises(InputError):
        delta_from_parents(chain424, (0, 2, 0))


def test_sigma_vector_examples(chain424, chain35, tangent_pairs_tree):
    assert sigma_vector(chain424, (0, 1, 0)) == (5, 4, 2)
    assert sigma_vector(chain35, (1, 0)) == (5, 2)
    assert sigma_vector(tangent_pairs_tree, (1, 0, 0)) == (3, 1, 1)


def test_solve_H_examples(chain424, chain35, tangent_pairs_tree):
    assert solve_H(chain424, (0, 1, 0)) == (1, 2, 2)
    assert solve_H(chain35, (1, 0)) == (3, 2)
    assert solve_H(tangent_pairs_tree, (1, 0, 0)) == (1, 1, 1)


def test_check_admissible_examples(chain424, chain35):
    sol = check_admissible(chain424, (0, 1, 0), (1, 2, 2))
    assert sol.admissible and sol.violations == ()
    assert sol.checks == ("ε₁=1 ≥ 2−1", "ε₂=2 ≥ n₂=2", "ε₃=2 ≥ 2−1")

    sol = check_admissible(chain35, (1, 0), (3, 2))
    assert sol.admissible
    assert sol.checks[0] == "ε₁=3 ≥ n₁=3"

    sol = check_admissible(single(4), (1,), solve_H(single(4), (1,)))
    assert sol.E_vec == (3,)
    assert not sol.admissible
    assert sol.violations == ((1, "ε₁=3 < n₁=4"),)


def test_check_admissible_nonnegative_option():
    tree = tree_from_spec({"n": 1, "children": [{"n": 2, "children": [
        {"n": 2, "children": [{"n": 4, "children": []}, {"n": 6, "children": [{"n": 2, "children": []}]}]},
        {"n": 2, "children": []},
    ]}, {"n": 6, "children": []}]})
    sol = find_admissible(tree)
    assert sol.negative_entries == (2,)
    assert sol.admissible
    assert not check_admissible(tree, sol.delta, sol.E_vec, require_nonnegative=True).admissible


@pytest.mark.parametrize("tree, delta, E", [
    (chain(4, 2, 4), (0, 1, 0), (1, 2, 2)),
    (single(2), (1,), (2,)),
    (single(3), (0,), (2,)),
    (chain(0, 2), (1, 0), (1, 1)),
])
def test_bruteforce_unique(tree, delta, E):
    sols = find_admissible_bruteforce(tree)
    assert [(s.delta, s.E_vec) for s in sols] == [(delta, E)]
    assert find_admissible(tree) == sols[0]


def test_find_admissible_tangent_pairs(tangent_pairs_tree):
    sol = find_admissible(tangent_pairs_tree)
    assert (sol.delta, sol.E_vec, sol.S_vec) == ((1, 0, 0), (1, 1, 1), (3, 1, 1))


def test_empty_tree():
    assert find_admissible(EMPTY_TREE) == EMPTY_SOLUTION
    assert find_admissible_bruteforce(EMPTY_TREE) == [EMPTY_SOLUTION]


def test_bruteforce_bound(monkeypatch):
    tree = chain(*([0] * 5 + [2]))
    with pytest.raises(BruteForceLimitError, match="fast solver"):
        find_admissible_bruteforce(tree, max_nodes=5)
    monkeypatch.setenv("MODULI_MAX_BRUTE", "3")
    with pytest.raises(BruteForceLimitError):
        find_admissible_bruteforce(tree)
    monkeypatch.setenv("MODULI_MAX_BRUTE", "lots")
    with pytest.raises(InputError):
        find_admissible_bruteforce(tree)


def test_fast_solver_handles_deep_trees():
    tree = chain(*([1] * 3000 + [2]))
    sol = find_admissible(tree)
    assert sol.admissible and len(sol.delta) == 3001


def test_uniqueness_error_is_raised_for_out_of_domain_input(monkeypatch):
    import smoothmoduli.solver as solver

    monkeypatch.setattr(solver, "sigma_entry", lambda m, d, dk: 100)
    with pytest.raises(UniquenessError) as info:
        solve_contexts(single(2))
    assert info.value.node == 1


tree_seeds = st.integers(0, 10**9)


@settings(max_examples=300, deadline=None)
@given(tree_seeds)
def test_fast_solver_matches_bruteforce(seed):
    tree = random_tree(seed, 10)
    sols = find_admissible_bruteforce(tree)
    assert len(sols) == 1
    assert find_admissible(tree) == sols[0]


@settings(max_examples=150, deadline=None)
@given(tree_seeds)
def test_solution_satisfies_system(seed):
    tree = random_tree(seed, 12)
    sol = find_admissible(tree)
    anc = ancestor_matrix(tree)
    lhs = tuple(sum(anc[i][j] * sol.E_vec[j] for j in range(len(tree))) for i in range(len(tree)))
    assert lhs == sol.S_vec


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_sigma_integral_for_all_assignments(seed):
    tree = random_tree(seed, 8)
    for delta in itertools.product((0, 1), repeat=len(tree)):
        for value in sigma_vector(tree, delta):
            assert isinstance(value, int)


@settings(max_examples=200, deadline=None)
@given(tree_seeds)
def test_adjoining_a_transverse_branch_keeps_solution(seed):
    tree = random_tree(seed, 9)
    (sol,) = find_admissible_bruteforce(tree)
    bigger = augmented(tree)
    if sol.delta[0] == 0 or tree.root.m % 2 == 1:
        assert evaluate(bigger, sol.delta).admissible
        assert find_admissible_bruteforce(bigger)[0].delta == sol.delta


@settings(max_examples=200, deadline=None)
@given(tree_seeds)
def test_root_identity(seed):
    tree = random_tree(seed, 12)
    root = solve_contexts(tree)[1, 0]
    assert (root.eps_if_invariant + root.eps_if_dicritical
            == tree.root.n + 1 - sum(root.children_delta_if_dicritical))


@settings(max_examples=200, deadline=None)
@given(tree_seeds)
def test_context_one_matches_union_with_parent_divisor(seed):
    # a node solved under an invariant parent behaves like its subtree plus that divisor
    from smoothmoduli import local_curve

    tree = random_tree(seed, 10)
    table = solve_contexts(tree)
    for nd in tree.nodes[1:]:
        with_divisor = find_admissible(local_curve(tree, nd.id))
        assert table[nd.id, 1].delta == with_divisor.delta[0]


@pytest.mark.parametrize("m", range(1, 25))
def test_sigma_entry_matches_half_integer_formula(m):
    from smoothmoduli.solver import sigma_entry

    for d in (0, 1):
        for dk in (0, 1):
            exact = Fraction(m - d, 2) + parity_bracket(m - d, Fraction(dk), Fraction(1, 2))
            assert exact.denominator == 1
            assert sigma_entry(m, d, dk) == exact


def test_non_minimal_trees_only_on_request():
    from smoothmoduli import TreeError

    with pytest.raises(TreeError):
        tree_from_spec({"n": 1, "children": []})
    tree = tree_from_spec({"n": 1, "children": []}, minimal=False)
    assert find_admissible(tree).delta == (1,)
    with pytest.raises(TreeError):
        tree_from_spec({"n": 0, "children": []}, minimal=False)
