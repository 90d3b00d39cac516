"""Exception hierarchy.

Input problems (bad files, unseparated jets) derive from ``InputError``;
broken internal invariants derive from ``InvariantError``.  The CLI maps
the first family to exit status 1 and the second to exit status 2.
"""


class ModuliError(Exception):
    pass


class InputError(ModuliError, ValueError):
    pass


class InvariantError(ModuliError, AssertionError):
    pass


class UnseparatedBranchesError(InputError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(
            f"branches {i} and {j} agree up to their truncation degree; "
            "increase truncation degree (lengthen jets) so every pair separates"
        )


class TreeError(InputError):
    pass


class BruteForceLimitError(InputError):
    pass


class UniquenessError(InvariantError):
    def __init__(self, node: int, context: int, passing: tuple[int, ...]):
        self.node = node
        self.context = context
        self.passing = passing
        super().__init__(
            f"uniqueness violated at node {node} (parent context {context}): "
            f"candidates passing = {list(passing)}"
        )
