"""Curve input files, report serialization and Graphviz export."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Union

from .branch import Branch, normalize_branch
from .errors import InputError
from .moduli import GENERIC_CAVEAT, CenterReport, CurveType, ModuliReport
from .solver import SaitoSolution, check_admissible
from .tree import ClusterTree, build_tree, proximity_matrix, tree_from_spec

SOLVER_MODES = ("fast", "oracle")


@dataclass(frozen=True)
class _FloatLiteral:
    text: str


@dataclass(frozen=True)
class CurveSpec:
    branches: Optional[tuple[Branch, ...]] = None
    tree: Optional[dict[str, Any]] = None
    options: dict[str, Any] = field(default_factory=dict)

    def cluster_tree(self) -> ClusterTree:
        if self.branches is not None:
            return build_tree(self.branches)
        return tree_from_spec(self.tree)


def _fail(path: str, message: str) -> InputError:
    return InputError(f"{path}: {message}")


def _check_no_floats(value: Any, path: str) -> None:
    if isinstance(value, _FloatLiteral):
        raise _fail(path, f"float literal {value.text} is not allowed; numbers must be exact "
                          "(write coefficients as strings such as \"3/2\")")
    if isinstance(value, dict):
        for k, v in value.items():
            _check_no_floats(v, f"{path}.{k}")
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _check_no_floats(v, f"{path}[{i}]")


def parse_curve_file(data: Union[bytes, str]) -> CurveSpec:
    """Validate a curve description.

    Accepted shapes::

        {"branches": [{"form": "y_of_x" | "x_of_y", "coeffs": ["1", "-1/2", ...]}, ...]}
        {"tree": {"n": 4, "children": [{"n": 2, "children": []}, ...]}}

    with an optional ``"options": {"solver": "fast" | "oracle"}``.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data, parse_float=_FloatLiteral, parse_constant=_FloatLiteral)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise _fail("$", "top level must be an object")
    unknown = set(doc) - {"branches", "tree", "options"}
    if unknown:
        raise _fail("$", f"unexpected keys {sorted(unknown)}")
    if ("branches" in doc) == ("tree" in doc):
        raise _fail("$", "exactly one of 'branches' or 'tree' is required")

    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise _fail("options", "must be an object")
    _check_no_floats(options, "options")
    if set(options) - {"solver"}:
        raise _fail("options", f"unexpected keys {sorted(set(options) - {'solver'})}")
    if options.get("solver", "fast") not in SOLVER_MODES:
        raise _fail("options.solver", f"expected one of {list(SOLVER_MODES)}")

    if "tree" in doc:
        _check_no_floats(doc["tree"], "tree")
        if not isinstance(doc["tree"], dict):
            raise _fail("tree", "must be an object")
        tree_from_spec(doc["tree"])
        return CurveSpec(tree=doc["tree"], options=options)

    raw = doc["branches"]
    if not isinstance(raw, list):
        raise _fail("branches", "must be a list")
    if not raw:
        raise _fail("branches", "the curve has no branches")
    branches = []
    for i, item in enumerate(raw):
        path = f"branches[{i}]"
        if not isinstance(item, dict):
            raise _fail(path, "must be an object with 'form' and 'coeffs'")
        if set(item) != {"form", "coeffs"}:
            raise _fail(path, "needs exactly the keys 'form' and 'coeffs'")
        coeffs = item["coeffs"]
        if not isinstance(coeffs, list) or not coeffs:
            raise _fail(f"{path}.coeffs", "must be a non-empty list of strings")
        for j, c in enumerate(coeffs):
            _check_no_floats(c, f"{path}.coeffs[{j}]")
            if not isinstance(c, str):
                raise _fail(f"{path}.coeffs[{j}]", f"coefficients must be strings, got {c!r}")
        try:
            branches.append(normalize_branch(item["form"], coeffs))
        except InputError as exc:
            raise _fail(path, str(exc)) from None
    return CurveSpec(branches=tuple(branches), options=options)


# -- reports ---------------------------------------------------------------

def solution_to_dict(sol: SaitoSolution) -> dict[str, Any]:
    return {
        "delta": list(sol.delta),
        "small_delta": list(sol.small_delta),
        "S": list(sol.S_vec),
        "E": list(sol.E_vec),
        "admissible": sol.admissible,
        "checks": list(sol.checks),
        "violations": [{"node": k, "condition": text} for k, text in sol.violations],
    }


def report_to_dict(report: ModuliReport) -> dict[str, Any]:
    centers = []
    for c in report.centers:
        centers.append({
            "center": c.center,
            "nu": c.nu,
            "type": c.curve_type.value,
            "delta": list(c.solution.delta),
            "small_delta": list(c.solution.small_delta),
            "S": list(c.solution.S_vec),
            "E": list(c.solution.E_vec),
            "saito_number": c.saito_number,
            "sigma": c.sigma,
            "local_tree": {"parents": list(c.local_tree.parents), "n": list(c.local_tree.n)},
        })
    return {"centers": centers, "total": report.total, "generic_caveat": report.generic_caveat}


def render_report_json(report: ModuliReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"


def parse_report_json(text: str) -> ModuliReport:
    """Inverse of :func:`render_report_json`; recomputes the admissibility checks."""
    doc = json.loads(text)
    centers = []
    for c in doc["centers"]:
        lt = c["local_tree"]
        local = ClusterTree.from_parents(lt["parents"], lt["n"])
        sol = check_admissible(local, c["delta"], c["E"])
        if list(sol.S_vec) != c["S"] or list(sol.small_delta) != c["small_delta"]:
            raise InputError(f"center {c['center']}: stored S / small_delta inconsistent with delta")
        centers.append(CenterReport(
            center=c["center"],
            local_tree=local,
            solution=sol,
            nu=c["nu"],
            curve_type=CurveType(c["type"]),
            saito_number=c["saito_number"],
            sigma=c["sigma"],
        ))
    return ModuliReport(centers=tuple(centers), total=doc["total"], generic_caveat=doc["generic_caveat"])


def _vec(values: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    fmt = lambda r: "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()  # noqa: E731
    return [fmt(header), *[fmt(r) for r in rows]]


def render_report_text(tree: ClusterTree, report: ModuliReport) -> str:
    """Columns per center, rows in the order Type, ν, ν(S_k), n, Δ, δ, 𝔖, ℰ, σ."""
    if not report.centers:
        lines = ["smooth curve: no blow-up needed", f"total = {report.total}"]
    else:
        header = [""]
        for c in report.centers:
            parent = tree.node(c.center).parent
            header.append(f"S_{c.center}" if parent is None else f"S_{c.center} ∪ D_{parent}")
        cols = report.centers
        rows = [
            ["Type", *[c.curve_type.symbol for c in cols]],
            ["ν", *[str(c.nu) for c in cols]],
            ["ν(S_k)", *[", ".join(map(str, c.local_tree.m)) for c in cols]],
            ["n_i", *[", ".join(map(str, c.local_tree.n)) for c in cols]],
            ["Δ", *[_vec(c.solution.delta) for c in cols]],
            ["δ", *[_vec(c.solution.small_delta) for c in cols]],
            ["𝔖", *[_vec(c.solution.S_vec) for c in cols]],
            ["ℰ", *[_vec(c.solution.E_vec) for c in cols]],
            ["Saito number", *[str(c.saito_number) for c in cols]],
            ["σ", *[str(c.sigma) for c in cols]],
        ]
        lines = _table(header, rows)
        lines.append("")
        lines.append(f"total = {report.total}")
    if report.generic_caveat:
        lines.append(f"note: {GENERIC_CAVEAT}")
    return "\n".join(lines) + "\n"


def render_solution_text(sol: SaitoSolution) -> str:
    lines = [
        f"Δ = {_vec(sol.delta)}",
        f"δ = {_vec(sol.small_delta)}",
        f"𝔖 = {_vec(sol.S_vec)}",
        f"ℰ = {_vec(sol.E_vec)}",
        f"admissible: {'yes' if sol.admissible else 'no'}",
    ]
    lines += [f"  {check}" for check in sol.checks]
    return "\n".join(lines) + "\n"


def tree_to_dict(tree: ClusterTree) -> dict[str, Any]:
    return {
        "nodes": [
            {"id": nd.id, "parent": nd.parent, "children": list(nd.children),
             "m": nd.m, "n": nd.n, "divisor_count": nd.divisor_count}
            for nd in tree.nodes
        ],
        "proximity_matrix": [list(r) for r in proximity_matrix(tree)],
        "spec": tree.to_spec(),
    }


def render_tree_text(tree: ClusterTree) -> str:
    if not len(tree):
        return "empty cluster tree (single smooth branch)\n"
    rows = [[str(nd.id), "-" if nd.parent is None else str(nd.parent), str(nd.m), str(nd.n)]
            for nd in tree.nodes]
    lines = _table(["node", "parent", "m", "n"], rows)
    lines += ["", "proximity matrix:"]
    p = proximity_matrix(tree)
    width = max(len(str(v)) for r in p for v in r)
    lines += ["  " + " ".join(str(v).rjust(width) for v in r) for r in p]
    return "\n".join(lines) + "\n"


def export_dot(tree: ClusterTree, report: ModuliReport) -> str:
    """Dual tree as a DOT digraph, invariant divisors drawn as filled boxes."""
    lines = ["digraph cluster_tree {", '  node [fontname="Helvetica"];']
    if report.centers:
        global_sol = report.centers[0].solution
        sigma = {c.center: c.sigma for c in report.centers}
        for nd in tree.nodes:
            d = global_sol.delta[nd.id - 1]
            e = global_sol.E_vec[nd.id - 1]
            label = f"D_{nd.id} | {nd.m},{nd.n} | {d},{e} | {sigma[nd.id]}"
            style = 'shape=box, style=filled, fillcolor="lightgrey"' if d else "shape=ellipse"
            lines.append(f'  D{nd.id} [label="{label}", {style}];')
        for nd in tree.nodes:
            if nd.parent is not None:
                lines.append(f"  D{nd.parent} -> D{nd.id};")
    lines.append(f'  label="total moduli = {report.total}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
