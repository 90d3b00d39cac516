"""Saito types, per-center cohomology dimensions and the total number of moduli.

All figures are for a curve generic in its topological class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvariantError
from .solver import SaitoSolution, find_admissible, find_admissible_bruteforce, parity_bracket
from .tree import ClusterTree, local_curve

GENERIC_CAVEAT = (
    "values are generic moduli dimensions: they hold for a curve generic "
    "among those sharing this topology"
)


class CurveType(enum.Enum):
    E = "E"
    O = "O"  # noqa: E741
    Ed = "Ed"
    Od = "Od"

    @property
    def symbol(self) -> str:
        return {"E": "(𝔈)", "O": "(𝔒)", "Ed": "(𝔈_d)", "Od": "(𝔒_d)"}[self.value]

    @property
    def dicritical(self) -> bool:
        return self in (CurveType.Ed, CurveType.Od)


def classify_type(nu: int, delta1: int) -> CurveType:
    """Type of a curve of multiplicity ``nu`` whose first divisor has flag ``delta1``."""
    if nu < 1 or delta1 not in (0, 1):
        raise ValueError(f"need nu >= 1 and delta1 in {{0,1}}, got nu={nu}, delta1={delta1}")
    if nu % 2 == 0:
        return CurveType.E if delta1 else CurveType.Ed
    return CurveType.O if delta1 else CurveType.Od


def saito_number(nu: int, delta1: int) -> int:
    """Lowest multiplicity of a vector field tangent to the curve."""
    value = Fraction(nu, 2) - parity_bracket(nu, Fraction(1 - delta1), Fraction(1, 2))
    if value.denominator != 1:
        raise InvariantError(f"non-integral Saito number {value}")
    return int(value)


def _exact_quarter(numerator: int) -> int:
    if numerator % 4:
        raise InvariantError(f"{numerator}/4 is not an integer")
    return numerator // 4


def sigma_of_curve(local: ClusterTree, sol: SaitoSolution) -> int:
    """First cohomology dimension after one blow-up of the curve described by ``local``."""
    if not len(local):
        return 0
    if not sol.admissible:
        raise InvariantError("sigma needs the admissible solution")
    nu = local.root.m
    delta1, eps1 = sol.delta[0], sol.E_vec[0]
    invariant_children = sum(sol.delta[c - 1] for c in local.root.children)
    kind = classify_type(nu, delta1)
    if kind is CurveType.E:
        value = _exact_quarter((nu - 2) * (nu - 4))
    elif kind is CurveType.O:
        value = _exact_quarter((nu - 3) ** 2)
    elif kind is CurveType.Ed:
        value = _exact_quarter((nu - 2) * (nu - 4)) - 1 + eps1 + invariant_children
    else:
        value = _exact_quarter((nu - 3) ** 2) - 2 + eps1 + invariant_children
    if value < 0:
        raise InvariantError(f"negative cohomology dimension {value} for nu={nu}, type {kind.value}")
    return value


@dataclass(frozen=True)
class CenterReport:
    center: int
    local_tree: ClusterTree
    solution: SaitoSolution
    nu: int
    curve_type: CurveType
    saito_number: int
    sigma: int


@dataclass(frozen=True)
class ModuliReport:
    centers: tuple[CenterReport, ...]
    total: int
    generic_caveat: bool = True


def center_report(tree: ClusterTree, k: int, oracle: bool = False,
                  max_brute: Optional[int] = None) -> CenterReport:
    local = local_curve(tree, k)
    sol = find_admissible(local)
    if oracle:
        brute = find_admissible_bruteforce(local, max_brute)
        if brute != [sol]:
            raise InvariantError(
                f"center {k}: brute force found {[b.delta for b in brute]}, fast solver {sol.delta}"
            )
    nu = local.root.m
    delta1 = sol.delta[0]
    return CenterReport(
        center=k,
        local_tree=local,
        solution=sol,
        nu=nu,
        curve_type=classify_type(nu, delta1),
        saito_number=saito_number(nu, delta1),
        sigma=sigma_of_curve(local, sol),
    )


def moduli_count(tree: ClusterTree, oracle: bool = False, max_brute: Optional[int] = None) -> ModuliReport:
    """Sum of the cohomology dimensions over every blow-up center.

    With ``oracle`` each local system is also solved by enumeration and the
    two answers must agree.
    """
    centers = tuple(center_report(tree, nd.id, oracle, max_brute) for nd in tree.nodes)
    return ModuliReport(centers=centers, total=sum(c.sigma for c in centers))
