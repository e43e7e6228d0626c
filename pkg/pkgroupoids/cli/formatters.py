"""
Human-readable and JSON renderings of the report models.

Tables go through pandas so that column alignment is stable; JSON is
orjson over ``model_dump`` with sorted keys.
"""

from typing import Callable, Dict, List, Type
import logging

import orjson
import pandas as pd
from pydantic import BaseModel

from ..models.reports import (
    ActReport,
    AnalysisReport,
    BisectionGroupReport,
    DotReport,
    HomsetReport,
    NetListReport,
    NetReport,
    SubgroupoidReport,
    TrivializationReport,
    VerificationReport,
    WorkspaceReport,
    WreathIsomorphismReport,
)

logger = logging.getLogger(__name__)

RULE = "-" * 40


def dump_json(report: BaseModel) -> str:
    return orjson.dumps(
        report.model_dump(mode="json"), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
    ).decode("utf-8")


def table(rows: List[Dict[str, object]]) -> str:
    if not rows:
        return "(empty)"
    return pd.DataFrame(rows).to_string(index=False)


def _mark(flag: bool) -> str:
    return "yes" if flag else "NO"


def _net_line(net: NetReport) -> str:
    parts = [f"{obj}={','.join(points)}" for obj, points in net.phi.items()]
    return f"{net.chord_class}: " + "  ".join(parts)


def render_homset(report: HomsetReport) -> str:
    rows = [{"morphism": row.notation, **row.components} for row in report.rows]
    header = f"Hom({report.source}, {report.target}): {len(report.rows)} morphisms"
    return f"{header}\n{table(rows)}"


def render_analysis(report: AnalysisReport) -> str:
    lines = [f"Progression {report.progression}", RULE]
    lines.extend(f"{i:>2}. {_net_line(net)}" for i, net in enumerate(report.chords, start=1))
    lines.append("")
    rows = []
    for step in report.steps:
        row = {"step": f"{step.from_index}->{step.to_index}", "transport": step.notation}
        row.update(step.components)
        row["alternatives"] = len(step.alternatives)
        rows.append(row)
    lines.append(table(rows) if rows else "No steps (single chord)")
    return "\n".join(lines)


def render_act(report: ActReport) -> str:
    components = "  ".join(f"{obj}:{label}" for obj, label in report.components.items())
    return "\n".join(
        [
            f"{report.morphism}  ({components})",
            f"  source: {_net_line(report.source)}",
            f"  image:  {_net_line(report.image)}",
        ]
    )


def render_nets(report: NetListReport) -> str:
    header = f"N_{report.chord_class} over {report.form} in {report.context}: {report.count} networks"
    rows = [{"#": i, **{obj: ",".join(points) for obj, points in net.phi.items()}} for i, net in enumerate(report.nets, 1)]
    return f"{header}\n{table(rows)}"


def render_subgroupoid(report: SubgroupoidReport) -> str:
    lines = [f"Subgroupoid on {', '.join(report.objects)}: {report.morphism_count} morphisms", RULE]
    for pair, labels in report.hom.items():
        lines.append(f"{pair}: {' '.join(labels)}")
    structure = report.kernel_structure
    lines.extend(["", f"Closed: {_mark(structure.closed)}"])
    rows = [
        {"object": w.object, "|End|": w.order, "End = Z": _mark(w.isomorphic_to_kernel)}
        for w in structure.endomorphisms
    ]
    lines.append(table(rows))
    rows = [
        {"hom": f"{w.source}->{w.target}", "representative": w.representative, "coset": _mark(w.is_coset)}
        for w in structure.cosets
    ]
    lines.append(table(rows))
    lines.append(f"Kernel structure: {'PASS' if structure.passed else 'FAIL'}")
    return "\n".join(lines)


def render_bisections(report: BisectionGroupReport) -> str:
    lines = [
        f"Bis({report.groupoid}) on {', '.join(report.objects)}",
        RULE,
        f"Vertex group order: {report.vertex_group_order}",
        f"Order: {report.order} (expected {report.expected_order})",
        f"Group axioms: {_mark(report.verified)}",
        f"|N| = {report.normal_subgroup_order}, |H| = {report.complement_order}",
    ]
    if report.detail is not None:
        lines.extend(
            [
                "",
                f"Bisection: {report.detail.bisection}",
                f"Wreath element: {report.detail.wreath_element}",
                "Internal automorphism:",
                table([{"morphism": m, "image": image} for m, image in report.detail.internal_automorphism.items()]),
            ]
        )
    return "\n".join(lines)


def render_wreath(report: WreathIsomorphismReport) -> str:
    lines = [
        f"Bis({report.groupoid}) -> wreath product, base {report.base}",
        RULE,
        table([{"object": obj, "anchor": anchor} for obj, anchor in report.anchors.items()]),
        f"Order: {report.order}",
        f"Bijective: {_mark(report.bijective)}",
        f"Homomorphism: {_mark(report.homomorphism)}",
        f"Frame independent: {_mark(report.frame_independent)}",
    ]
    if report.sample:
        lines.append(table(report.sample))
    return "\n".join(lines)


def render_trivialization(report: TrivializationReport) -> str:
    return "\n".join(
        [
            f"Trivialization of {report.groupoid} at {report.base}",
            RULE,
            f"Target morphisms: {report.image_morphisms}",
            f"Functorial: {_mark(report.functorial)}",
            f"Bijective on morphisms: {_mark(report.bijective)}",
        ]
    )


def render_verification(report: VerificationReport) -> str:
    lines = []
    for suite in report.suites:
        status = "✅ PASS" if suite.passed else "❌ FAIL"
        lines.append(f"{status}  {suite.suite} ({len(suite.checks)} checks, {suite.elapsed})")
        for check in suite.checks:
            marker = "  ok  " if check.passed else "  FAIL"
            lines.append(f"{marker} {check.name}: {check.detail}")
            if not check.passed and check.witness is not None:
                lines.append(f"         witness: {check.witness}")
    lines.append("")
    lines.append(f"Overall: {'PASS' if report.passed else 'FAIL'} (seed {report.seed})")
    return "\n".join(lines)


def render_workspace(report: WorkspaceReport) -> str:
    lines = [f"Workspace: {report.source or 'built-ins only'}", RULE]
    lines.append("Groups: " + ", ".join(f"{name} ({order})" for name, order in report.groups.items()))
    lines.append("Categories: " + ", ".join(f"{name} [{' '.join(objs)}]" for name, objs in report.categories.items()))
    lines.append("Classes:")
    for name, assignments in report.classes.items():
        lines.append(f"  {name}: " + ", ".join(f"{m}->{label}" for m, label in assignments.items()))
    lines.append("Sections: " + (", ".join(report.sections) or "none"))
    lines.append("Progressions: " + (", ".join(f"{n} ({k})" for n, k in report.progressions.items()) or "none"))
    lines.append("Groupoids: " + (", ".join(report.groupoids) or "none"))
    return "\n".join(lines)


def render_dot(report: DotReport) -> str:
    return report.dot.rstrip("\n")


RENDERERS: Dict[Type[BaseModel], Callable] = {
    HomsetReport: render_homset,
    AnalysisReport: render_analysis,
    ActReport: render_act,
    NetListReport: render_nets,
    SubgroupoidReport: render_subgroupoid,
    BisectionGroupReport: render_bisections,
    WreathIsomorphismReport: render_wreath,
    TrivializationReport: render_trivialization,
    VerificationReport: render_verification,
    WorkspaceReport: render_workspace,
    DotReport: render_dot,
}


def render(report: BaseModel) -> str:
    renderer = RENDERERS.get(type(report))
    if renderer is None:
        logger.debug(f"No text renderer for {type(report).__name__}, falling back to JSON")
        return dump_json(report)
    return renderer(report)
