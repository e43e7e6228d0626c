"""
Verification batteries behind ``verify``.

Every check is exhaustive over a small instance and reports a CheckResult;
a failed property never raises, and a resource bound hit inside a check is
reported as that check's failure.
"""

from enum import Enum
from typing import Callable, List, Optional, Tuple, Union
import itertools
import math
import logging
import time

from ..core.categories import (
    Groupoid,
    build_gamma,
    category_defect,
    check_category,
    check_functor,
    check_groupoid,
    check_gset,
    pair_groupoid_product,
    pitch_class_gset,
    random_connected_groupoid,
    triad_gset,
)
from ..core.config import get_settings
from ..core.exceptions import PKGroupoidError, ResourceBoundError, SectionClosureError
from ..core.groups import (
    cyclic_group,
    extension_decompose,
    group_defect,
    symmetric_group,
    ti_extension,
    ti_group,
    verify_group_axioms,
    verify_wreath_multiplication,
    wreath_group,
)
from ..models.reports import CheckResult, SuiteReport, VerificationReport
from .bisection import (
    bis_group,
    check_cocycle,
    default_frame,
    frame_wreath_group,
    internal_automorphism_report,
    representable_action,
    semidirect_structure,
    trivialization_report,
    twisted_frame,
    verify_action_axioms,
    verify_bis_group,
    verify_frame_independence,
    verify_wreath_isomorphism,
)
from .functor_groupoid import (
    ChordClass,
    compose,
    find_morphism,
    homset,
    homset_brute_force,
    homset_general,
    materialize_groupoid,
)
from .music_analysis import (
    Progression,
    berg_classes,
    berg_fixture,
    c_major_fixture,
    component_labels,
    f_major_fixture,
    get_analysis_pipeline,
    hook_groupoid,
    major_triad_classes,
    notation,
    pc025_class,
    progression_from_chords,
    webern_fixture,
)
from .pknet import act, check_net_functor_laws, enumerate_nets, singleton_diagram, solve_transport, validate_pknet
from .subgroupoid import build_section, kernel_structure_report, pullback_oracle, pullback_subgroupoid
from .workspace import Workspace

logger = logging.getLogger(__name__)

Outcome = Union[bool, Tuple[bool, str], Tuple[bool, str, object]]

# (label, components at X, Y, Z) for each step of both Berg parts
BERG_STEPS = [
    ("^{UV}T-2", ("T-2", "T3", "T2")),
    ("^{VV}T-1", ("T-1", "T1", "T1")),
    ("^{VU}T2", ("T2", "T-3", "T-2")),
    ("^{UU}T1", ("T1", "T-1", "T-1")),
    ("^{U'W}T-2", ("T-2", "T3", "T2")),
    ("^{WU'}T1", ("T1", "T-2", "T-1")),
    ("^{U'U'}T1", ("T1", "T-1", "T-1")),
]


class VerificationSuite(str, Enum):
    """Batteries selectable from the command line"""
    GROUPS = "groups"
    FUNCTOR_GROUPOID = "functor-groupoid"
    SUBGROUPOID = "subgroupoid"
    BISECTIONS = "bisections"
    ALL = "all"


def run_check(name: str, check: Callable[[], Outcome]) -> CheckResult:
    """Run one check, turning library errors into a failed result with their witness"""
    try:
        outcome = check()
    except ResourceBoundError as e:
        logger.warning(f"Check {name} hit a resource bound: {e.message}")
        return CheckResult(name=name, passed=False, detail=f"resource bound: {e.message}", witness=e.witness)
    except PKGroupoidError as e:
        logger.error(f"Check {name} raised {type(e).__name__}: {e.message}")
        return CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e.message}", witness=e.witness)
    if isinstance(outcome, tuple):
        passed, detail, *rest = outcome
        witness = rest[0] if rest else None
    else:
        passed, detail, witness = outcome, "", None
    if not passed:
        logger.warning(f"Check {name} failed {detail}")
    return CheckResult(name=name, passed=bool(passed), detail=detail, witness=witness)


def _labels(classes_pair: Tuple[ChordClass, ChordClass]) -> List[Tuple[str, ...]]:
    F, F2 = classes_pair
    return [tuple(F.group.labels[c] for c in eta.components) for eta in homset(F, F2)]


def _expected_components(formula: Callable[[int], Tuple[int, int]], kind: str) -> List[Tuple[str, ...]]:
    return [(f"{kind}{p}", f"{kind}{formula(p)[0] % 12}", f"{kind}{formula(p)[1] % 12}") for p in range(12)]


def component_formula_check(
    F: ChordClass,
    F2: ChordClass,
    transposition: Callable[[int], Tuple[int, int]],
    inversion: Callable[[int], Tuple[int, int]],
) -> Tuple[bool, str, object]:
    """Hom(F, F') against closed formulas for the Y and Z components of T_p and I_p"""
    expected = _expected_components(transposition, "T") + _expected_components(inversion, "I")
    actual = _labels((F, F2))
    mismatches = [(e, a) for e, a in zip(expected, actual) if e != a]
    return not mismatches and len(actual) == 24, f"{len(actual)} morphisms in Hom({F.name}, {F2.name})", mismatches[:3] or None


class VerificationService:
    """Runs the verification batteries over the shipped fixtures and a workspace"""

    def __init__(self, workspace: Optional[Workspace] = None):
        self.workspace = workspace
        self.settings = get_settings()

    # Suites

    def groups_suite(self) -> List[CheckResult]:
        TI = ti_group()
        E = ti_extension()
        checks = [
            run_check("ti_group_axioms", lambda: (verify_group_axioms(TI) and TI.order == 24, f"|T/I| = {TI.order}")),
            run_check("symmetric_group_axioms", lambda: all(verify_group_axioms(symmetric_group(n)) for n in (1, 2, 3, 4))),
            run_check("pitch_class_action", lambda: check_gset(pitch_class_gset())),
            run_check("triad_action_simply_transitive", self._triad_action),
            run_check("ti_extension_decomposition", lambda: self._extension_decomposition(E)),
        ]
        for base, n in ((3, 2), (3, 3), (12, 2)):
            checks.append(run_check(f"wreath_Z{base}_S{n}", lambda base=base, n=n: self._wreath_table(base, n)))
        if self.workspace is not None:
            for name, group in self.workspace.groups.items():
                checks.append(
                    run_check(f"workspace_group:{name}", lambda group=group: self._group_defect(group))
                )
            for name, category in self.workspace.categories.items():
                checks.append(
                    run_check(f"workspace_category:{name}", lambda category=category: self._category_defect(category))
                )
        return checks

    def functor_groupoid_suite(self) -> List[CheckResult]:
        U0, V0 = major_triad_classes()
        berg = berg_classes()
        U, V = berg["U"], berg["V"]
        checks = [
            run_check(
                "homset_UU_major",
                lambda: component_formula_check(U0, U0, lambda p: (p, p), lambda p: (p + 8, p + 2)),
            ),
            run_check(
                "homset_UV_major",
                lambda: component_formula_check(U0, V0, lambda p: (p + 10, p + 10), lambda p: (p + 6, p)),
            ),
            run_check(
                "homset_UV_berg",
                lambda: component_formula_check(U, V, lambda p: (1 - p, -p), lambda p: (7 - p, 8 - p)),
            ),
            run_check("homset_matches_brute_force", self._homset_oracle),
            run_check("materialized_groupoid_axioms", lambda: check_groupoid(materialize_groupoid(list(berg.values())))),
            run_check("inversion_acts_on_f_major", self._inversion_on_f_major),
            run_check("two_transports_to_same_chord", self._two_transports),
            run_check("composition_of_berg_steps", self._composition_identity),
            run_check("net_functor_laws_berg", self._net_functor_laws),
            run_check("webern_nets_share_functor", self._webern),
            run_check("berg_analysis", self._berg_analysis),
            run_check("constant_progression_identity_step", self._constant_progression),
            run_check("analysis_telescopes", self._telescoping),
            run_check("fixture_nets_validate", self._fixture_nets),
        ]
        if self.workspace is not None:
            for name, F in self.workspace.classes.items():
                checks.append(run_check(f"workspace_class:{name}", lambda F=F: check_functor(F.functor)))
            for name, progression in self.workspace.progressions.items():
                checks.append(
                    run_check(f"workspace_progression:{name}", lambda p=progression: self._analyze(p))
                )
        return checks

    def subgroupoid_suite(self) -> List[CheckResult]:
        E = ti_extension()
        checks = [
            run_check("berg_kernel_structure", lambda: self._kernel_structure(list(berg_classes().values()))),
            run_check("hook_kernel_structure", lambda: self._kernel_structure(list(major_triad_classes()))),
            run_check("mixed_section_kernel_structure", self._mixed_section),
            run_check("unclosed_section_rejected", self._unclosed_section),
            run_check("pullback_matches_generic_construction", lambda: pullback_oracle(hook_groupoid())),
            run_check(
                "berg_pullback_matches_generic_construction",
                lambda: pullback_oracle(pullback_subgroupoid(list(berg_classes().values()), E)),
            ),
        ]
        if self.workspace is not None:
            for name in self.workspace.sections:
                checks.append(
                    run_check(f"workspace_section:{name}", lambda name=name: self._workspace_section(name))
                )
        return checks

    def bisections_suite(self, seed: int) -> List[CheckResult]:
        Z3 = cyclic_group(3)
        instances: List[Tuple[str, Callable[[], Groupoid]]] = [
            ("Z3_n2", lambda: pair_groupoid_product("Pair2xZ3", ["a", "b"], Z3)),
            ("Z3_n3", lambda: pair_groupoid_product("Pair3xZ3", ["a", "b", "c"], Z3)),
            ("hook_Z12_n2", lambda: hook_groupoid().as_groupoid()),
            (f"random_Z3_n2_seed{seed}", lambda: random_connected_groupoid(Z3, 2, seed)),
        ]
        checks = []
        for name, build in instances:
            checks.extend(self._bisection_instance(name, build, seed, full=name != "Z3_n3"))
        if self.workspace is not None:
            for name in self.workspace.groupoid_descriptors:
                checks.append(
                    run_check(f"workspace_groupoid:{name}", lambda name=name: self._workspace_groupoid(name))
                )
        return checks

    def run(self, suite: Union[str, VerificationSuite] = VerificationSuite.ALL, seed: Optional[int] = None) -> VerificationReport:
        suite = VerificationSuite(suite)
        seed = self.settings.DEFAULT_SEED if seed is None else seed
        selected = [s for s in VerificationSuite if s != VerificationSuite.ALL] if suite == VerificationSuite.ALL else [suite]
        reports = []
        for current in selected:
            logger.info(f"Running verification suite {current.value}")
            start_time = time.time()
            if current == VerificationSuite.GROUPS:
                checks = self.groups_suite()
            elif current == VerificationSuite.FUNCTOR_GROUPOID:
                checks = self.functor_groupoid_suite()
            elif current == VerificationSuite.SUBGROUPOID:
                checks = self.subgroupoid_suite()
            else:
                checks = self.bisections_suite(seed)
            elapsed = time.time() - start_time
            passed = all(check.passed for check in checks)
            logger.info(f"Suite {current.value}: {'passed' if passed else 'FAILED'} in {elapsed:.3f}s")
            reports.append(SuiteReport(suite=current.value, passed=passed, checks=checks, elapsed=f"{elapsed:.3f}s"))
        return VerificationReport(passed=all(r.passed for r in reports), suites=reports, seed=seed)

    # Groups

    def _triad_action(self):
        S = triad_gset()
        orbit = set(S.act_table[:, S.point_index("C")].tolist())
        return check_gset(S) and len(orbit) == 24, f"orbit of C has {len(orbit)} triads"

    def _extension_decomposition(self, E):
        G = E.G
        for g in G.elements():
            z, h = extension_decompose(E, g)
            if E.recompose(z, h) != g:
                return False, f"{G.label(g)} does not recompose", G.label(g)
        z, h = extension_decompose(E, G.by_label("I5"))
        return (z.index, h.index) == (7, 1), f"I5 = (z={z.index}, h={h.index})"

    def _wreath_table(self, base: int, n: int):
        Z = cyclic_group(base)
        W = wreath_group(Z, n)
        expected = base ** n * math.factorial(n)
        passed = W.order == expected and verify_wreath_multiplication(W, Z) and verify_group_axioms(W)
        return passed, f"|{W.name}| = {W.order}"

    def _group_defect(self, group):
        defect = group_defect(group)
        return defect is None, f"|{group.name}| = {group.order}", defect

    def _category_defect(self, category):
        defect = category_defect(category)
        passed = defect is None and check_category(category)
        if passed and isinstance(category, Groupoid):
            passed = check_groupoid(category)
            defect = None if passed else "inverse table is inconsistent"
        return passed, f"{len(category.morphisms)} morphisms", defect

    # Functor groupoid and nets

    def _homset_oracle(self):
        families = [
            list(berg_classes().values()),
            list(major_triad_classes()),
            [webern_fixture()[0], c_major_fixture()[0], pc025_class()],
        ]
        pairs = [pair for family in families for pair in itertools.product(family, repeat=2)]
        for F, F2 in pairs:
            fast, general, brute = homset(F, F2), homset_general(F, F2), homset_brute_force(F, F2)
            keys = [sorted(eta.components for eta in etas) for etas in (fast, general, brute)]
            if not (keys[0] == keys[1] == keys[2] and len(fast) == 24):
                return False, f"Hom({F.name}, {F2.name}) differs", (F.name, F2.name)
        return True, f"{len(pairs)} hom-sets agree with 24 morphisms each"

    def _inversion_on_f_major(self):
        U, _, net = f_major_fixture()
        eta = find_morphism(U, U, "I8")
        image = act(eta, net)
        components = tuple(eta.group.labels[c] for c in eta.components)
        passed = image.points() == (3, 7, 10) and components == ("I8", "I4", "I10")
        return passed, f"I8 gives {image.points()} via {components}"

    def _two_transports(self):
        U, V, net = f_major_fixture()
        results = []
        for label, expected in (("T3", ("T3", "T1", "T1")), ("I1", ("I1", "I7", "I1"))):
            eta = find_morphism(U, V, label)
            components = tuple(eta.group.labels[c] for c in eta.components)
            results.append(act(eta, net).points() == (8, 10, 1) and components == expected)
        return all(results), "T3 and I1 both reach (8, 10, 1)"

    def _composition_identity(self):
        classes = berg_classes()
        U, V, W, U2 = classes["U"], classes["V"], classes["W"], classes["U'"]
        composite = compose(find_morphism(V, U, "T2"), find_morphism(V, V, "T11"))
        reference = find_morphism(W, U2, "T1")
        same_components = composite.components == reference.components
        return composite.label == "T1" and same_components, f"composite is {composite.id}"

    def _net_functor_laws(self):
        classes = list(berg_classes().values())
        R, S = singleton_diagram(build_gamma()), pitch_class_gset()
        sizes = {F.name: len(enumerate_nets(R, S, F)) for F in classes}
        return check_net_functor_laws(classes, R, S) and set(sizes.values()) == {12}, f"net counts {sizes}"

    def _webern(self):
        F, progression = webern_fixture()
        points = [net.points() for net in progression.nets]
        valid = all(validate_pknet(net) and net.F is F for net in progression.nets)
        transports = all(solve_transport(a, b) for a, b in itertools.permutations(progression.nets, 2))
        return valid and transports and points[0] == (9, 11, 10), f"nets {points}"

    def _berg_analysis(self):
        _, part_one, part_two = berg_fixture()
        pipeline = get_analysis_pipeline()
        actual = []
        for progression in (part_one, part_two):
            for step in pipeline.analyze_progression(progression):
                components = component_labels(step.morphism, False)
                actual.append((notation(step.morphism, False), tuple(components[obj] for obj in ("X", "Y", "Z"))))
        passed = actual == BERG_STEPS
        return passed, ", ".join(label for label, _ in actual), None if passed else actual

    def _constant_progression(self):
        classes = berg_classes()
        progression = progression_from_chords("constant", classes, [("U", (3, 0, 7))] * 3)
        steps = get_analysis_pipeline().analyze_progression(progression)
        identity = ti_group().identity
        return all(step.morphism.components == (identity,) * 3 for step in steps), f"{len(steps)} identity steps"

    def _telescoping(self):
        _, part_one, _ = berg_fixture()
        pipeline = get_analysis_pipeline()
        composite = pipeline.compose_steps(pipeline.analyze_progression(part_one))
        direct = solve_transport(part_one.nets[0], part_one.nets[-1])
        return composite in direct, f"composite {composite.id} among {len(direct)} direct transports"

    def _fixture_nets(self):
        _, part_one, part_two = berg_fixture()
        _, c_major = c_major_fixture()
        nets = list(part_one.nets) + list(part_two.nets) + [c_major]
        return all(validate_pknet(net) for net in nets), f"{len(nets)} nets"

    def _analyze(self, progression: Progression):
        steps = get_analysis_pipeline().analyze_progression(progression)
        return True, ", ".join(step.notation for step in steps) or "single chord"

    # Subgroupoids

    def _kernel_structure(self, classes):
        E = ti_extension()
        report = kernel_structure_report(pullback_subgroupoid(classes, E), E)
        orders = sorted({w.order for w in report.endomorphisms})
        return report.passed, f"End orders {orders}", None if report.passed else report.model_dump()

    def _mixed_section(self):
        E = ti_extension()
        classes = list(major_triad_classes())
        section = build_section(["U", "V"], {("U", "V"): 1, ("V", "U"): 1}, E.H, default=0)
        sub = pullback_subgroupoid(classes, E, section)
        report = kernel_structure_report(sub, E)
        inversions = all(eta.label.startswith("I") for eta in sub.hom("U", "V"))
        return report.passed and inversions, f"{len(sub.kept)} morphisms kept"

    def _unclosed_section(self):
        H = ti_extension().H
        try:
            build_section(["U", "V"], {("U", "V"): 1, ("V", "U"): 0}, H, default=0)
        except SectionClosureError as e:
            return True, e.message, e.witness
        return False, "section was accepted"

    def _workspace_section(self, name: str):
        sub = self.workspace.subgroupoid(name)
        report = kernel_structure_report(sub, sub.extension)
        return report.passed, f"{len(sub.kept)} morphisms kept", None if report.passed else report.model_dump()

    # Bisections

    def _bisection_instance(self, name: str, build: Callable[[], Groupoid], seed: int, full: bool) -> List[CheckResult]:
        """Group order, wreath isomorphism and, for ``full`` instances, the structure checks"""
        state = {}

        def setup():
            C = build()
            state["bis"] = bis_group(C)
            state["frame"] = default_frame(C)
            state["W"] = frame_wreath_group(state["frame"])
            return verify_bis_group(state["bis"]) and check_cocycle(state["frame"]), f"|Bis| = {state['bis'].order}"

        checks = [run_check(f"{name}:bis_order", setup)]
        if "bis" not in state:
            return checks

        def wreath():
            bijective, homomorphism = verify_wreath_isomorphism(state["bis"], state["frame"], state["W"])
            return bijective and homomorphism, f"onto {state['W'].name} of order {state['W'].order}"

        checks.append(run_check(f"{name}:wreath_isomorphism", wreath))
        if not full:
            return checks

        def frame_independence():
            other = twisted_frame(state["frame"], seed)
            return verify_frame_independence(state["bis"], state["frame"], other, state["W"]), f"seed {seed}"

        def action():
            S = representable_action(state["bis"].groupoid)
            return verify_action_axioms(state["bis"], S), f"{len(S.points())} points"

        def internal():
            report = internal_automorphism_report(state["bis"])
            detail = (
                f"kernel {report.kernel_order}, image {report.image_order}, "
                f"claim {'holds' if report.semidirect_claim_holds else 'fails'} here"
            )
            return report.homomorphism and report.image_closed, detail, report.model_dump()

        def semidirect():
            report = semidirect_structure(state["bis"], state["frame"])
            flags = report.model_dump(exclude={"order", "normal_order", "complement_order"})
            return all(flags.values()), f"|N| = {report.normal_order}, |H| = {report.complement_order}", flags

        def trivialization():
            report = trivialization_report(state["frame"])
            return report.functorial and report.bijective, f"{report.image_morphisms} morphisms"

        checks.extend(
            [
                run_check(f"{name}:frame_independence", frame_independence),
                run_check(f"{name}:action_axioms", action),
                run_check(f"{name}:internal_automorphisms", internal),
                run_check(f"{name}:semidirect_structure", semidirect),
                run_check(f"{name}:trivialization", trivialization),
            ]
        )
        return checks

    def _workspace_groupoid(self, name: str):
        C = self.workspace.groupoid(name)
        bis = bis_group(C)
        frame = default_frame(C)
        bijective, homomorphism = verify_wreath_isomorphism(bis, frame)
        return verify_bis_group(bis) and bijective and homomorphism, f"|Bis({C.name})| = {bis.order}"


def get_verification_service(workspace: Optional[Workspace] = None) -> VerificationService:
    """Verification service bound to a workspace"""
    return VerificationService(workspace)
