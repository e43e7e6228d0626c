"""
Command handlers and the argument parser.

Each handler takes the loaded workspace and the parsed arguments and returns
a CommandResult; printing and exit codes are left to ``main``.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional
import argparse
import logging
import math
import re

import numpy as np
from pydantic import BaseModel

from ..core.categories import pitch_class_gset, triad_gset
from ..core.config import get_settings
from ..core.exceptions import ClassMismatchError, InputError, PKGroupoidError, UnknownNameError
from ..core.groups import wreath_label
from ..models.descriptors import BisectionLiteral, PKNetDescriptor
from ..models.reports import (
    ActReport,
    AnalysisReport,
    AnalysisStepReport,
    BisectionDetailReport,
    BisectionGroupReport,
    DotReport,
    HomsetReport,
    HomsetRow,
    NetListReport,
    NetReport,
    SubgroupoidReport,
    WorkspaceReport,
    WreathIsomorphismReport,
)
from ..services.bisection import (
    bis_group,
    complement_part,
    default_frame,
    frame_wreath_group,
    internal_automorphism,
    normal_part,
    trivialization_report,
    twisted_frame,
    verify_bis_group,
    verify_frame_independence,
    verify_wreath_isomorphism,
    vertex_group_order,
    wreath_isomorphism,
)
from ..services.dot import net_dot, progression_dot
from ..services.functor_groupoid import find_morphism, homset
from ..services.music_analysis import (
    PitchClass,
    TransportPreference,
    component_labels,
    get_analysis_pipeline,
    notation,
    signed_label,
)
from ..services.pknet import PKNet, act, enumerate_nets, pknet_from_pitches, representable_diagram, singleton_diagram
from ..services.subgroupoid import kernel_structure_report, pullback_subgroupoid
from ..services.verification import VerificationSuite, get_verification_service
from ..services.workspace import Workspace, parse_json_literal

logger = logging.getLogger(__name__)

TI_LABEL = re.compile(r"^([TI])(-?\d+)$")
WREATH_SAMPLE_SIZE = 5


@dataclass
class CommandResult:
    report: BaseModel
    exit_code: int = 0


Handler = Callable[[Workspace, argparse.Namespace], CommandResult]


# Helpers


def _point_name(point) -> str:
    return PitchClass(point).name() if isinstance(point, int) else str(point)


def net_report(net: PKNet) -> NetReport:
    return NetReport(
        chord_class=net.F.name,
        phi={obj: [_point_name(p) for p in net.component(obj).values()] for obj in net.delta.objects},
    )


def canonical_label(text: str) -> str:
    """T-2 → T10, I14 → I2; other labels pass through"""
    match = TI_LABEL.match(text.strip())
    if not match:
        return text.strip()
    kind, amount = match.groups()
    return f"{kind}{int(amount) % 12}"


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _object(groupoid, name: Optional[str]) -> Optional[str]:
    if name is not None and name not in groupoid.objects:
        raise UnknownNameError(f"{groupoid.name} has no object {name!r} (objects: {', '.join(groupoid.objects)})")
    return name


# Commands


def cmd_homset(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    F = workspace.chord_class(args.source)
    F2 = workspace.chord_class(args.target)
    logger.info(f"Enumerating Hom({F.name}, {F2.name})")
    rows = [
        HomsetRow(notation=notation(eta), label=signed_label(eta.label), components=component_labels(eta))
        for eta in homset(F, F2)
    ]
    return CommandResult(HomsetReport(source=F.name, target=F2.name, rows=rows))


def cmd_analyze(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    progression = workspace.progression(args.progression)
    pipeline = get_analysis_pipeline()
    steps = pipeline.analyze_progression(progression, TransportPreference(args.preference))
    report = AnalysisReport(
        progression=progression.name,
        chords=[net_report(net) for net in progression.nets],
        steps=[
            AnalysisStepReport(
                from_index=step.from_index,
                to_index=step.to_index,
                notation=notation(step.morphism),
                components=component_labels(step.morphism),
                alternatives=[notation(eta) for eta in step.alternatives],
            )
            for step in steps
        ],
    )
    if args.dot:
        Path(args.dot).write_text(progression_dot(progression, steps), encoding="utf-8")
        logger.info(f"Wrote DOT diagram to {args.dot}")
    return CommandResult(report)


def _read_net(workspace: Workspace, args: argparse.Namespace, F) -> PKNet:
    if args.net:
        net = workspace.net(parse_json_literal(args.net, PKNetDescriptor))
        if net.F != F:
            raise ClassMismatchError(f"The network belongs to {net.F.name}, not {F.name}")
        return net
    if args.pitches:
        return pknet_from_pitches(F, [PitchClass.parse(p).value for p in _split(args.pitches)])
    raise InputError("Give the network with --pitches or --net")


def cmd_act(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    F = workspace.chord_class(args.source)
    F2 = workspace.chord_class(args.target)
    eta = find_morphism(F, F2, canonical_label(args.label))
    net = _read_net(workspace, args, F)
    image = act(eta, net)
    logger.info(f"Moved a network of {F.name} along {eta.id}")
    return CommandResult(
        ActReport(
            morphism=notation(eta),
            components=component_labels(eta),
            source=net_report(net),
            image=net_report(image),
        )
    )


def cmd_nf(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    F = workspace.chord_class(args.chord_class)
    if args.form == "representable":
        obj = args.object or F.delta.objects[0]
        if obj not in F.delta.objects:
            raise UnknownNameError(f"{F.delta.name} has no object {obj!r}")
        R = representable_diagram(F.delta, obj)
    else:
        R = singleton_diagram(F.delta)
    S = triad_gset() if args.context == "triads" else pitch_class_gset()
    nets = enumerate_nets(R, S, F)
    return CommandResult(
        NetListReport(
            chord_class=F.name,
            form=R.name,
            context=S.name,
            count=len(nets),
            nets=[net_report(net) for net in nets],
        )
    )


def cmd_subgroupoid(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    if args.section:
        sub = workspace.subgroupoid(args.section)
    elif args.classes:
        sub = pullback_subgroupoid([workspace.chord_class(name) for name in _split(args.classes)], workspace.extension)
    else:
        raise InputError("Give --section or --classes")
    objects = list(sub.ambient.objects)
    structure = kernel_structure_report(sub, workspace.extension)
    report = SubgroupoidReport(
        objects=objects,
        morphism_count=len(sub.kept),
        hom={f"{u}->{v}": [notation(eta) for eta in sub.hom(u, v)] for u in objects for v in objects},
        kernel_structure=structure,
    )
    return CommandResult(report, exit_code=0 if structure.passed else 1)


def cmd_bisections(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    C = workspace.groupoid(args.groupoid)
    bis = bis_group(C)
    frame = default_frame(C)
    n = len(C.objects)
    z = vertex_group_order(C)
    detail = None
    if args.bisection:
        b = workspace.bisection(C, parse_json_literal(args.bisection, BisectionLiteral))
        xi = internal_automorphism(b)
        detail = BisectionDetailReport(
            bisection=str(b),
            wreath_element=wreath_label(frame.Z, wreath_isomorphism(b, frame)),
            internal_automorphism={m.id: xi(m.id) for m in C.morphisms},
        )
    verified = verify_bis_group(bis)
    report = BisectionGroupReport(
        groupoid=C.name,
        objects=list(C.objects),
        vertex_group_order=z,
        order=bis.order,
        expected_order=z ** n * math.factorial(n),
        verified=verified,
        normal_subgroup_order=len(normal_part(bis)),
        complement_order=len(set(complement_part(bis, frame))),
        detail=detail,
    )
    return CommandResult(report, exit_code=0 if verified else 1)


def cmd_wreath_iso(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    C = workspace.groupoid(args.groupoid)
    frame = default_frame(C, _object(C, args.base))
    bis = bis_group(C)
    W = frame_wreath_group(frame)
    bijective, homomorphism = verify_wreath_isomorphism(bis, frame, W)
    independent = verify_frame_independence(bis, frame, twisted_frame(frame, get_settings().DEFAULT_SEED), W)
    picks = sorted(set(np.linspace(0, bis.order - 1, WREATH_SAMPLE_SIZE, dtype=np.int64).tolist()))
    sample = [
        {"bisection": str(bis.elements[i]), "wreath_element": wreath_label(frame.Z, wreath_isomorphism(bis.elements[i], frame))}
        for i in picks
    ]
    report = WreathIsomorphismReport(
        groupoid=C.name,
        base=frame.base,
        anchors=dict(frame.anchors),
        order=bis.order,
        bijective=bijective,
        homomorphism=homomorphism,
        frame_independent=independent,
        sample=sample,
    )
    return CommandResult(report, exit_code=0 if bijective and homomorphism and independent else 1)


def cmd_trivialize(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    C = workspace.groupoid(args.groupoid)
    report = trivialization_report(default_frame(C, _object(C, args.base)))
    return CommandResult(report, exit_code=0 if report.functorial and report.bijective else 1)


def cmd_verify(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    report = get_verification_service(workspace).run(args.suite)
    if not report.passed:
        failed = [c.name for s in report.suites for c in s.checks if not c.passed]
        logger.error(f"Verification failed: {', '.join(failed)}")
    return CommandResult(report, exit_code=0 if report.passed else 1)


def cmd_dot(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    if args.progression:
        progression = workspace.progression(args.progression)
        steps = [] if args.no_steps else get_analysis_pipeline().analyze_progression(progression)
        report = DotReport(name=progression.name, dot=progression_dot(progression, steps))
    elif args.net:
        net = workspace.net(parse_json_literal(args.net, PKNetDescriptor))
        report = DotReport(name=net.F.name, dot=net_dot(net))
    else:
        raise InputError("Give --progression or --net")
    if args.output:
        Path(args.output).write_text(report.dot, encoding="utf-8")
        logger.info(f"Wrote DOT diagram to {args.output}")
    return CommandResult(report)


def cmd_classes(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    names = workspace.names()
    return CommandResult(
        WorkspaceReport(
            source=workspace.source,
            groups={name: group.order for name, group in workspace.groups.items()},
            categories={name: list(category.objects) for name, category in workspace.categories.items()},
            classes={name: F.assignments() for name, F in workspace.classes.items()},
            sections=names["sections"],
            progressions={name: len(p.nets) for name, p in workspace.progressions.items()},
            groupoids=names["groupoids"],
        )
    )


COMMANDS: Dict[str, Handler] = {
    "homset": cmd_homset,
    "analyze": cmd_analyze,
    "act": cmd_act,
    "nf": cmd_nf,
    "subgroupoid": cmd_subgroupoid,
    "bisections": cmd_bisections,
    "wreath-iso": cmd_wreath_iso,
    "trivialize": cmd_trivialize,
    "verify": cmd_verify,
    "dot": cmd_dot,
    "classes": cmd_classes,
}


# Parser


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="Workspace descriptor (YAML or JSON)")
    common.add_argument("--json", action="store_true", help="Print the report as JSON")
    common.add_argument("--flats", action="store_true", default=None, help="Spell pitch classes with flats")
    common.add_argument(
        "--normalize-labels", action="store_true", default=None, help="Show T10 instead of T-2"
    )
    common.add_argument("--bound", type=int, metavar="N", help="Search and enumeration bound")
    common.add_argument("--seed", type=int, metavar="N", help="Seed for randomized groupoids and frames")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default from settings)",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="pkgroupoids",
        description="Groupoids of transformations acting on poly-Klumpenhouwer networks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  pkgroupoids homset --from U --to V
  pkgroupoids analyze --progression berg-part-one --dot berg.dot
  pkgroupoids act --from U0 --to U0 --label I8 --pitches F,A,C
  pkgroupoids bisections --groupoid Hook
  pkgroupoids verify --suite all --json
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homset", parents=[common], help="List Hom(F, F') with component tables")
    p.add_argument("--from", dest="source", required=True, help="Source chord class")
    p.add_argument("--to", dest="target", required=True, help="Target chord class")

    p = sub.add_parser("analyze", parents=[common], help="Solve every step of a progression")
    p.add_argument("--progression", required=True)
    p.add_argument(
        "--preference",
        choices=[pref.value for pref in TransportPreference],
        default=TransportPreference.TRANSPOSITION_FIRST.value,
        help="Which transport to report when several exist",
    )
    p.add_argument("--dot", metavar="PATH", help="Also write the analysed progression as DOT")

    p = sub.add_parser("act", parents=[common], help="Move a network along a morphism")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--label", required=True, help="Label of the morphism, e.g. T3, I8 or T-2")
    p.add_argument("--pitches", help="Comma-separated pitches in object order, e.g. F,A,C or 5,9,0")
    p.add_argument("--net", metavar="JSON", help='Network literal, e.g. {"class": "U0", "phi": {"X": 5}}')

    p = sub.add_parser("nf", parents=[common], help="Enumerate all networks of a class")
    p.add_argument("--class", dest="chord_class", required=True)
    p.add_argument("--form", choices=["singleton", "representable"], default="singleton")
    p.add_argument("--object", help="Object representing the form (representable only)")
    p.add_argument("--context", choices=["pitch-classes", "triads"], default="pitch-classes")

    p = sub.add_parser("subgroupoid", parents=[common], help="Pullback subgroupoid and its kernel structure")
    p.add_argument("--section", help="Workspace section name")
    p.add_argument("--classes", help="Comma-separated classes, default section")

    p = sub.add_parser("bisections", parents=[common], help="Enumerate the bisection group")
    p.add_argument("--groupoid", required=True)
    p.add_argument("--bisection", metavar="JSON", help='e.g. {"sigma": [2, 1], "legs": ["a->b:0", "b->a:0"]}')

    p = sub.add_parser("wreath-iso", parents=[common], help="Check Bis(C) against the wreath product")
    p.add_argument("--groupoid", required=True)
    p.add_argument("--base", help="Base object of the transport frame")

    p = sub.add_parser("trivialize", parents=[common], help="Trivialize a connected groupoid")
    p.add_argument("--groupoid", required=True)
    p.add_argument("--base", help="Base object of the transport frame")

    p = sub.add_parser("verify", parents=[common], help="Run verification suites")
    p.add_argument("--suite", choices=[suite.value for suite in VerificationSuite], default=VerificationSuite.ALL.value)

    p = sub.add_parser("dot", parents=[common], help="Render a progression or a network as DOT")
    p.add_argument("--progression")
    p.add_argument("--net", metavar="JSON")
    p.add_argument("--no-steps", action="store_true", help="Draw the chords only")
    p.add_argument("--output", metavar="PATH", help="Write to a file as well as printing")

    sub.add_parser("classes", parents=[common], help="List the workspace objects")
    return parser


def run_command(workspace: Workspace, args: argparse.Namespace) -> CommandResult:
    handler = COMMANDS[args.command]
    try:
        logger.info(f"Running {args.command}")
        return handler(workspace, args)
    except PKGroupoidError as e:
        logger.error(f"{args.command} failed: {e.message}")
        raise
