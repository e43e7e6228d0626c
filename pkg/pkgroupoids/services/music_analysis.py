"""
T/I fixtures and the progression analyzer.

Chord classes here are functors into the T/I group; a progression is a list
of PK-nets with singleton forms over the pitch-class action, and analysing it
means solving for a transport between each consecutive pair.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union
import logging
import re

import pandas as pd

from ..core.categories import build_delta3, build_gamma
from ..core.config import get_settings
from ..core.exceptions import (
    DescriptorError,
    NoTransportError,
    StructuralMismatchError,
    VerificationFailure,
)
from ..core.groups import ti_extension, ti_group
from .functor_groupoid import (
    ChordClass,
    GDeltaMorphism,
    chord_class,
    compose,
    component_table,
)
from .pknet import PKNet, act, pknet_from_pitches, solve_transport, validate_pknet
from .subgroupoid import SubGroupoid, pullback_subgroupoid

logger = logging.getLogger(__name__)

SHARP_NAMES = ("C", "C♯", "D", "D♯", "E", "F", "F♯", "G", "G♯", "A", "A♯", "B")
FLAT_NAMES = ("C", "D♭", "D", "E♭", "E", "F", "G♭", "G", "A♭", "A", "B♭", "B")
NATURALS = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
NOTE_PATTERN = re.compile(r"^([A-Ga-g])([#♯b♭]*)$")


@dataclass(frozen=True)
class PitchClass:
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % 12)

    @classmethod
    def parse(cls, text: Union[str, int]) -> "PitchClass":
        """Accepts 0-11 or a note name with any number of sharps/flats (#, ♯, b, ♭)"""
        if isinstance(text, int):
            return cls(text)
        text = str(text).strip()
        if text.lstrip("-").isdigit():
            return cls(int(text))
        match = NOTE_PATTERN.match(text)
        if not match:
            raise DescriptorError(f"Cannot read {text!r} as a pitch class")
        letter, accidentals = match.groups()
        shift = sum(1 if a in "#♯" else -1 for a in accidentals)
        return cls(NATURALS[letter.upper()] + shift)

    def name(self, flats: Optional[bool] = None) -> str:
        flats = get_settings().DISPLAY_FLATS if flats is None else flats
        return (FLAT_NAMES if flats else SHARP_NAMES)[self.value]

    def __str__(self) -> str:
        return self.name()


def signed_label(label: str, normalize: Optional[bool] = None) -> str:
    """T10 → T-2 for transposition amounts above 6, unless normalizing to 0..11"""
    normalize = get_settings().NORMALIZE_LABELS if normalize is None else normalize
    if normalize or not label.startswith("T"):
        return label
    amount = int(label[1:])
    return f"T{amount - 12}" if amount > 6 else label


def notation(eta: GDeltaMorphism, normalize: Optional[bool] = None) -> str:
    return f"^{{{eta.source.name}{eta.target.name}}}{signed_label(eta.label, normalize)}"


def component_labels(eta: GDeltaMorphism, normalize: Optional[bool] = None) -> Dict[str, str]:
    return {obj: signed_label(eta.group.label(g), normalize) for obj, g in component_table(eta).items()}


def ti_class(name: str, delta_name: str, assignments: Mapping[str, str]) -> ChordClass:
    delta = {"Gamma": build_gamma, "Delta3": build_delta3}[delta_name]()
    return chord_class(name, delta, ti_group(), assignments)


# Fixtures


def major_triad_classes() -> Tuple[ChordClass, ChordClass]:
    """U (f ↦ T4, g ↦ T7) and V (f ↦ T2, g ↦ T5) over Γ"""
    return (
        ti_class("U", "Gamma", {"f": "T4", "g": "T7"}),
        ti_class("V", "Gamma", {"f": "T2", "g": "T5"}),
    )


def berg_classes() -> Dict[str, ChordClass]:
    return {
        "U": ti_class("U", "Gamma", {"f": "I3", "g": "I10"}),
        "V": ti_class("V", "Gamma", {"f": "I4", "g": "I10"}),
        "U'": ti_class("U'", "Gamma", {"f": "I7", "g": "I3"}),
        "W": ti_class("W", "Gamma", {"f": "I8", "g": "I3"}),
    }


BERG_PART_ONE = [
    ("U", ("E♭", "C", "G")),
    ("V", ("C♯", "E♭", "A")),
    ("V", ("C", "E", "B♭")),
    ("U", ("D", "C♯", "G♯")),
    ("U", ("E♭", "C", "G")),
]

BERG_PART_TWO = [
    ("U'", ("C", "G", "E♭")),
    ("W", ("B♭", "B♭", "F")),
    ("U'", ("B", "G♯", "E")),
    ("U'", ("C", "G", "E♭")),
]


@dataclass(frozen=True, eq=False)
class Progression:
    """Consecutive PK-nets sharing their shape, form and context"""

    name: str
    nets: Tuple[PKNet, ...]

    def __post_init__(self):
        object.__setattr__(self, "nets", tuple(self.nets))
        if not self.nets:
            raise DescriptorError(f"Progression {self.name} has no chords")
        first = self.nets[0]
        for i, net in enumerate(self.nets, start=1):
            if net.R is not first.R or net.S is not first.S or net.delta is not first.delta:
                raise StructuralMismatchError(f"Chord {i} of {self.name} does not share shape, form and context")
            if not validate_pknet(net):
                raise DescriptorError(f"Chord {i} of {self.name} is not a PK-net of class {net.F.name}")

    @property
    def classes(self) -> List[ChordClass]:
        seen: Dict[str, ChordClass] = {}
        for net in self.nets:
            seen.setdefault(net.F.name, net.F)
        return list(seen.values())


def progression_from_chords(
    name: str,
    classes: Mapping[str, ChordClass],
    chords: Sequence[Tuple[str, Union[Mapping[str, Union[str, int]], Sequence[Union[str, int]]]]],
) -> Progression:
    nets = []
    for class_name, pitches in chords:
        if class_name not in classes:
            raise DescriptorError(f"Progression {name} uses unknown class {class_name}")
        F = classes[class_name]
        if isinstance(pitches, Mapping):
            values = {obj: PitchClass.parse(p).value for obj, p in pitches.items()}
        else:
            values = [PitchClass.parse(p).value for p in pitches]
        nets.append(pknet_from_pitches(F, values))
    return Progression(name=name, nets=tuple(nets))


def berg_fixture() -> Tuple[Dict[str, ChordClass], Progression, Progression]:
    """The four classes and both parts of the Berg progression"""
    classes = berg_classes()
    return (
        classes,
        progression_from_chords("berg-part-one", classes, BERG_PART_ONE),
        progression_from_chords("berg-part-two", classes, BERG_PART_TWO),
    )


def berg_progression() -> Progression:
    """All nine chords as one progression"""
    classes = berg_classes()
    return progression_from_chords("berg", classes, BERG_PART_ONE + BERG_PART_TWO)


def webern_fixture() -> Tuple[ChordClass, Progression]:
    """f ↦ I8, g ↦ I9 over Δ₃ on (A, B, B♭), (C♯, G, D), (F, E♭, F♯)"""
    F = ti_class("F", "Delta3", {"f": "I8", "g": "I9"})
    chords = [("F", ("A", "B", "B♭")), ("F", ("C♯", "G", "D")), ("F", ("F", "E♭", "F♯"))]
    return F, progression_from_chords("webern", {"F": F}, chords)


def c_major_fixture() -> Tuple[ChordClass, PKNet]:
    """C major over Δ₃ with f ↦ T4, g ↦ T3"""
    F = ti_class("F", "Delta3", {"f": "T4", "g": "T3"})
    return F, pknet_from_pitches(F, (0, 4, 7))


def pc025_class() -> ChordClass:
    """The [0,2,5] class over Δ₃: f ↦ T2, g ↦ T3"""
    return ti_class("F'", "Delta3", {"f": "T2", "g": "T3"})


def f_major_fixture() -> Tuple[ChordClass, ChordClass, PKNet]:
    """U, V and the F major chord (F, A, C) as a net over U"""
    U, V = major_triad_classes()
    return U, V, pknet_from_pitches(U, (5, 9, 0))


def hook_groupoid() -> SubGroupoid:
    """Transposition-only subgroupoid on the two major-triad classes"""
    U, V = major_triad_classes()
    return pullback_subgroupoid([U, V], ti_extension())


def match_classes(pitches: Sequence[Union[str, int]], classes: Sequence[ChordClass]) -> List[str]:
    """Names of the classes admitting these pitches as a PK-net (never picks one)"""
    values = [PitchClass.parse(p).value for p in pitches]
    matches = []
    for F in classes:
        if len(values) == len(F.delta.objects) and validate_pknet(pknet_from_pitches(F, values)):
            matches.append(F.name)
    return matches


# Analysis


class TransportPreference(str, Enum):
    """How a step is chosen among several transports"""
    TRANSPOSITION_FIRST = "transposition-first"
    ALL = "all"


@dataclass(frozen=True)
class AnalysisStep:
    from_index: int
    to_index: int
    morphism: GDeltaMorphism
    alternatives: Tuple[GDeltaMorphism, ...]

    @property
    def component_display(self) -> Dict[str, str]:
        return component_labels(self.morphism)

    @property
    def notation(self) -> str:
        return notation(self.morphism)


class AnalysisPipeline:
    """Solves every step of a progression for its transport"""

    def __init__(self):
        self.extension = ti_extension()

    def analyze_progression(
        self,
        progression: Progression,
        preference: TransportPreference = TransportPreference.TRANSPOSITION_FIRST,
    ) -> List[AnalysisStep]:
        logger.info(f"Analysing {progression.name} ({len(progression.nets)} chords)")
        steps = []
        for i, (a, b) in enumerate(zip(progression.nets, progression.nets[1:]), start=1):
            transports = solve_transport(a, b)
            if not transports:
                logger.error(f"No transport from chord {i} to chord {i + 1} of {progression.name}")
                raise NoTransportError(
                    f"No morphism of Hom({a.F.name}, {b.F.name}) carries chord {i} to chord {i + 1}",
                    witness=(i, i + 1),
                )
            chosen = self._select(transports, preference, i)
            if act(chosen, a) != b:
                raise VerificationFailure(f"{chosen.id} does not carry chord {i} to chord {i + 1}")
            steps.append(AnalysisStep(i, i + 1, chosen, tuple(transports)))
            logger.debug(f"Step {i}->{i + 1}: {notation(chosen)} among {len(transports)}")
        return steps

    def _select(self, transports: List[GDeltaMorphism], preference: TransportPreference, i: int) -> GDeltaMorphism:
        if preference == TransportPreference.ALL:
            return transports[0]
        kernel = self.extension.kernel
        in_kernel = [eta for eta in transports if eta.label_index in kernel]
        if len(in_kernel) > 1:
            logger.warning(f"Step {i}: {len(in_kernel)} transposition transports, keeping the first")
        if not in_kernel:
            logger.warning(f"Step {i}: no transposition transport, keeping {notation(transports[0])}")
            return transports[0]
        return in_kernel[0]

    def compose_steps(self, steps: Sequence[AnalysisStep]) -> Optional[GDeltaMorphism]:
        """The composite of all steps, last step applied last"""
        result = None
        for step in steps:
            result = step.morphism if result is None else compose(step.morphism, result)
        return result

    def component_report(self, steps: Sequence[AnalysisStep], normalize: Optional[bool] = None) -> pd.DataFrame:
        """One row per step: the transport and its component at each object"""
        rows = []
        for step in steps:
            row = {"step": f"{step.from_index}->{step.to_index}", "transport": notation(step.morphism, normalize)}
            row.update(component_labels(step.morphism, normalize))
            rows.append(row)
        return pd.DataFrame(rows)


# Global analysis pipeline instance
analysis_pipeline = AnalysisPipeline()


def get_analysis_pipeline() -> AnalysisPipeline:
    """Get analysis pipeline instance"""
    return analysis_pipeline
