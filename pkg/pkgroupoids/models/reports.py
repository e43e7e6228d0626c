from pydantic import BaseModel, ConfigDict, Field
from typing import Any, Dict, List, Optional


class CheckResult(BaseModel):
    """Outcome of one verification check"""
    name: str = Field(..., description="Check identifier")
    passed: bool = Field(..., description="Whether the property held")
    detail: str = Field("", description="Human-readable summary of what was checked")
    witness: Optional[Any] = Field(None, description="Counterexample or supporting data")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "bis_order",
                "passed": True,
                "detail": "|Bis(C)| = 288 = 12^2 * 2!",
                "witness": None,
            }
        }
    )


class SuiteReport(BaseModel):
    """All checks of one verification suite"""
    suite: str = Field(..., description="Suite name")
    passed: bool = Field(..., description="True iff every check passed")
    checks: List[CheckResult] = Field([], description="Individual check results")
    elapsed: str = Field("", description="Wall-clock time of the suite")


class VerificationReport(BaseModel):
    """Result of a verify run"""
    passed: bool = Field(..., description="True iff every suite passed")
    suites: List[SuiteReport] = Field([], description="Per-suite reports")
    seed: int = Field(0, description="Seed used for randomized groupoids")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "passed": True,
                "seed": 0,
                "suites": [{"suite": "groups", "passed": True, "checks": [], "elapsed": "0.05s"}],
            }
        }
    )


class HomsetRow(BaseModel):
    """One natural transformation of a hom-set"""
    notation: str = Field(..., description="Morphism in ^{FF'}g notation")
    label: str = Field(..., description="Component at the bottom object")
    components: Dict[str, str] = Field(..., description="Component per object of the shape")


class HomsetReport(BaseModel):
    source: str = Field(..., description="Source chord class")
    target: str = Field(..., description="Target chord class")
    rows: List[HomsetRow] = Field([], description="All morphisms, in group enumeration order")


class NetReport(BaseModel):
    """A PK-net as displayed"""
    chord_class: str = Field(..., description="Name of the class F")
    phi: Dict[str, List[str]] = Field(..., description="Points of the context per object of the shape")


class AnalysisStepReport(BaseModel):
    """One arrow of a progression analysis"""
    from_index: int = Field(..., description="1-based index of the source chord")
    to_index: int = Field(..., description="1-based index of the target chord")
    notation: str = Field(..., description="Selected transport in ^{FF'}g notation")
    components: Dict[str, str] = Field(..., description="Per-object components of the transport")
    alternatives: List[str] = Field([], description="All transports between the two chords")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "from_index": 1,
                "to_index": 2,
                "notation": "^{UV}T-2",
                "components": {"X": "T-2", "Y": "T3", "Z": "T2"},
                "alternatives": ["^{UV}T-2"],
            }
        }
    )


class AnalysisReport(BaseModel):
    progression: str = Field(..., description="Progression name")
    chords: List[NetReport] = Field([], description="The analysed chords")
    steps: List[AnalysisStepReport] = Field([], description="One step per consecutive pair")


class EndomorphismWitness(BaseModel):
    object: str = Field(..., description="Chord class")
    order: int = Field(..., description="|End(U)| in the subgroupoid")
    isomorphic_to_kernel: bool = Field(..., description="Whether End(U) is isomorphic to Z")
    isomorphism: Dict[str, str] = Field({}, description="End(U) label → Z label, when found")


class CosetWitness(BaseModel):
    source: str
    target: str
    labels: List[str] = Field(..., description="Labels of the hom-set")
    representative: str = Field(..., description="g with labels = g·Z")
    is_coset: bool


class KernelStructureReport(BaseModel):
    """Endomorphism groups and hom-set cosets of a pullback subgroupoid"""
    passed: bool
    closed: bool = Field(..., description="Closed under composition and inverse, contains identities")
    endomorphisms: List[EndomorphismWitness] = Field([])
    cosets: List[CosetWitness] = Field([])


class SubgroupoidReport(BaseModel):
    objects: List[str]
    morphism_count: int
    hom: Dict[str, List[str]] = Field(..., description="'U->V' → kept morphisms")
    kernel_structure: KernelStructureReport


class BisectionDetailReport(BaseModel):
    """One bisection with its wreath coordinates and internal automorphism"""
    bisection: str
    wreath_element: str
    internal_automorphism: Dict[str, str] = Field(..., description="Morphism → its image under the automorphism")


class BisectionGroupReport(BaseModel):
    groupoid: str
    objects: List[str]
    vertex_group_order: int
    order: int
    expected_order: int = Field(..., description="|Z|^n * n!")
    verified: bool = Field(..., description="Group axioms hold on the enumerated table")
    normal_subgroup_order: int = Field(..., description="|N|, bisections over the identity permutation")
    complement_order: int = Field(..., description="|H|, bisections built from frame transports")
    detail: Optional[BisectionDetailReport] = Field(None, description="The bisection given on the command line")


class WreathIsomorphismReport(BaseModel):
    groupoid: str
    base: str = Field(..., description="Base object of the transport frame")
    anchors: Dict[str, str] = Field(..., description="Object → anchor morphism base → object")
    order: int
    bijective: bool
    homomorphism: bool
    frame_independent: bool = Field(..., description="Changing frames gives an automorphism of the wreath product")
    sample: List[Dict[str, str]] = Field([], description="A few bisection ↦ wreath element pairs")


class InternalAutomorphismReport(BaseModel):
    bisection_order: int
    kernel_order: int
    image_order: int
    homomorphism: bool
    image_closed: bool
    injective: bool
    semidirect_claim_holds: bool = Field(
        ..., description="Whether the internal automorphisms have the order of the full bisection group here"
    )


class TrivializationReport(BaseModel):
    groupoid: str
    base: str
    image_morphisms: int
    functorial: bool
    bijective: bool


class SemidirectReport(BaseModel):
    order: int
    normal_order: int
    complement_order: int
    normal_is_product: bool
    complement_is_symmetric: bool
    trivial_intersection: bool
    normal: bool
    decomposition_bijective: bool
    action_formula: bool


class ActReport(BaseModel):
    """A net moved along a morphism of G^Δ"""
    morphism: str = Field(..., description="Transport in ^{FF'}g notation")
    components: Dict[str, str] = Field(..., description="Per-object components")
    source: NetReport
    image: NetReport


class NetListReport(BaseModel):
    chord_class: str
    form: str = Field(..., description="Name of the set-valued form R")
    context: str = Field(..., description="Name of the G-set S")
    count: int
    nets: List[NetReport] = Field([])


class WorkspaceReport(BaseModel):
    source: Optional[str] = Field(None, description="Workspace file, None for built-ins only")
    groups: Dict[str, int] = Field({}, description="Group name → order")
    categories: Dict[str, List[str]] = Field({}, description="Category name → objects")
    classes: Dict[str, Dict[str, str]] = Field({}, description="Class name → generator images")
    sections: List[str] = Field([])
    progressions: Dict[str, int] = Field({}, description="Progression name → number of chords")
    groupoids: List[str] = Field([])


class DotReport(BaseModel):
    name: str
    dot: str = Field(..., description="Graphviz source")
