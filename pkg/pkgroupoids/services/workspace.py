"""
Workspace loading: YAML/JSON descriptors → live groups, categories, chord
classes, sections, progressions and groupoids, all looked up by name.
"""

from pathlib import Path
from typing import Dict, List, Optional, Union
import logging

import numpy as np
import orjson
import yaml
from pydantic import ValidationError

from ..core.categories import (
    FinCategory,
    Groupoid,
    Morphism,
    build_delta3,
    build_gamma,
    build_groupoid,
    build_point,
    pair_groupoid_product,
    poset_category,
)
from ..core.config import configure_settings, get_settings
from ..core.exceptions import DescriptorError, UnknownNameError
from ..core.groups import (
    FiniteGroup,
    GroupExtension,
    cyclic_group,
    symmetric_group,
    ti_extension,
    ti_group,
    wreath_group,
)
from ..models.descriptors import (
    BisectionLiteral,
    CategoryDescriptor,
    ChordClassDescriptor,
    GroupDescriptor,
    GroupoidDescriptor,
    PKNetDescriptor,
    ProgressionDescriptor,
    SectionDescriptor,
    WorkspaceConfig,
)
from .bisection import Bisection, from_map
from .functor_groupoid import ChordClass, chord_class
from .music_analysis import PitchClass, Progression, hook_groupoid, progression_from_chords
from .pknet import PKNet, pknet_from_pitches
from .subgroupoid import SectionSubcategory, SubGroupoid, build_section, pullback_subgroupoid

logger = logging.getLogger(__name__)

PACKAGE_ROOT = Path(__file__).resolve().parents[2]

BUILTIN_GROUPOIDS = {"Hook": lambda: hook_groupoid().as_groupoid()}


def read_descriptor_file(path: Union[str, Path]) -> dict:
    """YAML or JSON (a YAML subset) into a plain mapping"""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DescriptorError(f"Cannot read workspace {path}: {e}") from None
    except yaml.YAMLError as e:
        raise DescriptorError(f"Workspace {path} is not valid YAML/JSON: {e}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise DescriptorError(f"Workspace {path} must contain a mapping at top level")
    return data


def parse_workspace(data: dict) -> WorkspaceConfig:
    try:
        return WorkspaceConfig.model_validate(data)
    except ValidationError as e:
        raise DescriptorError(f"Invalid workspace descriptor: {e}") from None


def parse_json_literal(text: str, model):
    """A pydantic model from a JSON string given on the command line"""
    try:
        return model.model_validate(orjson.loads(text))
    except orjson.JSONDecodeError as e:
        raise DescriptorError(f"Not valid JSON: {e}") from None
    except ValidationError as e:
        raise DescriptorError(f"Invalid {model.__name__}: {e}") from None


def build_group(descriptor: GroupDescriptor, groups: Dict[str, FiniteGroup]) -> FiniteGroup:
    if descriptor.kind == "cyclic":
        return cyclic_group(descriptor.n)
    if descriptor.kind == "symmetric":
        return symmetric_group(descriptor.n)
    if descriptor.kind == "ti":
        return ti_group()
    if descriptor.kind == "wreath":
        if descriptor.base not in groups:
            raise UnknownNameError(f"Wreath product {descriptor.name} refers to unknown group {descriptor.base}")
        return wreath_group(groups[descriptor.base], descriptor.n)
    table = np.array(descriptor.multiply, dtype=np.int64).reshape(descriptor.order, descriptor.order)
    return FiniteGroup(
        name=descriptor.name,
        table=table,
        identity=descriptor.identity,
        labels=tuple(descriptor.labels or ()),
    )


def build_category(descriptor: CategoryDescriptor) -> FinCategory:
    """Poset block, or an extensional table where composites with identities may be left out"""
    if descriptor.poset is not None:
        generators = [(m.id, m.src, m.tgt) for m in descriptor.poset.relation]
        return poset_category(descriptor.name, descriptor.objects, generators, bottom=descriptor.poset.bottom)

    identities = {obj: descriptor.identities.get(obj, f"id_{obj}") for obj in descriptor.objects}
    morphisms = [Morphism(m.id, m.src, m.tgt) for m in descriptor.morphisms]
    listed = {m.id for m in morphisms}
    for obj, identity in identities.items():
        if identity not in listed:
            morphisms.insert(0, Morphism(identity, obj, obj))
    composition = {(entry.second, entry.first): entry.result for entry in descriptor.composition}
    for m in morphisms:
        composition.setdefault((identities[m.tgt], m.id), m.id)
        composition.setdefault((m.id, identities[m.src]), m.id)

    if descriptor.groupoid:
        return build_groupoid(descriptor.name, descriptor.objects, morphisms, composition, identities)
    return FinCategory(
        name=descriptor.name,
        objects=tuple(descriptor.objects),
        morphisms=tuple(morphisms),
        composition=composition,
        identities=identities,
    )


class Workspace:
    """Named objects built from one WorkspaceConfig, on top of the built-ins"""

    def __init__(self, config: WorkspaceConfig, source: Optional[str] = None):
        self.config = config
        self.source = source
        self.extension: GroupExtension = ti_extension()
        self.groups: Dict[str, FiniteGroup] = {"TI": ti_group()}
        self.categories: Dict[str, FinCategory] = {
            "Gamma": build_gamma(),
            "Delta3": build_delta3(),
            "Point": build_point(),
        }
        self.classes: Dict[str, ChordClass] = {}
        self.sections: Dict[str, SectionSubcategory] = {}
        self.progressions: Dict[str, Progression] = {}
        self.groupoid_descriptors: Dict[str, GroupoidDescriptor] = {}
        self._subgroupoids: Dict[str, SubGroupoid] = {}
        self._groupoids: Dict[str, Groupoid] = {}

        for descriptor in config.groups:
            self.groups[descriptor.name] = build_group(descriptor, self.groups)
        for descriptor in config.categories:
            self.categories[descriptor.name] = build_category(descriptor)
        for descriptor in config.classes:
            self.classes[descriptor.name] = self._build_class(descriptor)
        for descriptor in config.sections:
            self.sections[descriptor.name] = self._build_section(descriptor)
        for descriptor in config.progressions:
            self.progressions[descriptor.name] = self._build_progression(descriptor)
        for descriptor in config.groupoids:
            self.groupoid_descriptors[descriptor.name] = descriptor

        logger.info(
            f"Workspace loaded: {len(self.groups)} groups, {len(self.categories)} categories, "
            f"{len(self.classes)} classes, {len(self.progressions)} progressions"
        )

    # Builders

    def _build_class(self, descriptor: ChordClassDescriptor) -> ChordClass:
        delta = self.category(descriptor.delta)
        group = self.group(descriptor.group)
        return chord_class(descriptor.name, delta, group, descriptor.assignments)

    def _build_section(self, descriptor: SectionDescriptor) -> SectionSubcategory:
        for name in descriptor.classes:
            self.chord_class(name)
        choice = {(pair.source, pair.target): pair.h for pair in descriptor.pairs}
        return build_section(descriptor.classes, choice, self.extension.H, default=descriptor.default)

    def _build_progression(self, descriptor: ProgressionDescriptor) -> Progression:
        names = descriptor.classes or sorted({chord.chord_class for chord in descriptor.chords})
        classes = {name: self.chord_class(name) for name in names}
        chords = [(chord.chord_class, chord.pitches) for chord in descriptor.chords]
        return progression_from_chords(descriptor.name, classes, chords)

    # Lookups

    def _lookup(self, kind: str, table: dict, name: str):
        try:
            return table[name]
        except KeyError:
            known = ", ".join(sorted(table)) or "none"
            raise UnknownNameError(f"Unknown {kind} {name!r} (known: {known})") from None

    def group(self, name: str) -> FiniteGroup:
        return self._lookup("group", self.groups, name)

    def category(self, name: str) -> FinCategory:
        return self._lookup("category", self.categories, name)

    def chord_class(self, name: str) -> ChordClass:
        return self._lookup("chord class", self.classes, name)

    def section(self, name: str) -> SectionSubcategory:
        return self._lookup("section", self.sections, name)

    def progression(self, name: str) -> Progression:
        return self._lookup("progression", self.progressions, name)

    def subgroupoid(self, section_name: str) -> SubGroupoid:
        """Pullback subgroupoid of the section's classes along the T/I extension"""
        if section_name not in self._subgroupoids:
            section = self.section(section_name)
            classes = [self.chord_class(name) for name in section.objects]
            self._subgroupoids[section_name] = pullback_subgroupoid(classes, self.extension, section)
        return self._subgroupoids[section_name]

    def groupoid(self, name: str) -> Groupoid:
        if name in self._groupoids:
            return self._groupoids[name]
        if name in BUILTIN_GROUPOIDS and name not in self.groupoid_descriptors:
            self._groupoids[name] = BUILTIN_GROUPOIDS[name]()
            return self._groupoids[name]
        known = {**{key: None for key in BUILTIN_GROUPOIDS}, **self.groupoid_descriptors}
        descriptor = self._lookup("groupoid", known, name)
        if descriptor.kind == "pair":
            groupoid = pair_groupoid_product(descriptor.name, descriptor.objects, self.group(descriptor.group))
        elif descriptor.kind == "subgroupoid":
            groupoid = self.subgroupoid(descriptor.section).as_groupoid()
        else:
            groupoid = self.category(descriptor.category)
            if not isinstance(groupoid, Groupoid):
                raise DescriptorError(f"Category {descriptor.category} is not declared as a groupoid")
        self._groupoids[name] = groupoid
        return groupoid

    def names(self) -> Dict[str, List[str]]:
        return {
            "groups": list(self.groups),
            "categories": list(self.categories),
            "classes": list(self.classes),
            "sections": list(self.sections),
            "progressions": list(self.progressions),
            "groupoids": sorted(set(BUILTIN_GROUPOIDS) | set(self.groupoid_descriptors)),
        }

    # Literals

    def net(self, descriptor: PKNetDescriptor) -> PKNet:
        """A PK-net over the pitch-class context; singleton form when every value is a single pitch"""
        F = self.chord_class(descriptor.chord_class)
        values = {}
        for obj, value in descriptor.phi.items():
            if isinstance(value, list):
                if len(value) != 1:
                    raise DescriptorError(f"Only singleton forms are read from descriptors; {obj} has {len(value)} values")
                value = value[0]
            values[obj] = PitchClass.parse(value).value
        return pknet_from_pitches(F, values)

    def bisection(self, groupoid: Groupoid, literal: BisectionLiteral) -> Bisection:
        if len(literal.sigma) != len(groupoid.objects) or len(literal.legs) != len(groupoid.objects):
            raise DescriptorError(f"A bisection of {groupoid.name} needs {len(groupoid.objects)} images and legs")
        b = from_map(groupoid, dict(zip(groupoid.objects, literal.legs)))
        if list(b.sigma.images) != literal.sigma:
            raise DescriptorError(f"Legs give the permutation {b.sigma}, not {literal.sigma}")
        return b


def apply_bounds(config: WorkspaceConfig):
    """Workspace bounds override the environment for this process"""
    if not config.bounds:
        return
    unknown = [name for name in config.bounds if not hasattr(get_settings(), name)]
    if unknown:
        raise DescriptorError(f"Unknown bounds in workspace: {unknown}")
    configure_settings(**config.bounds)


class WorkspaceService:
    """Loads and caches workspaces by path"""

    def __init__(self):
        self._cache: Dict[str, Workspace] = {}

    def resolve_path(self, path: Optional[str] = None) -> Optional[Path]:
        """Explicit paths must exist; the default one is also looked up next to the package"""
        if path:
            candidate = Path(path)
            if not candidate.exists():
                raise DescriptorError(f"Workspace file {path} does not exist")
            return candidate.resolve()
        settings = get_settings()
        for candidate in (Path(settings.workspace_file), PACKAGE_ROOT / settings.WORKSPACE_PATH):
            if candidate.exists():
                return candidate.resolve()
        logger.warning("No workspace file found, using built-in objects only")
        return None

    def load(self, path: Optional[str] = None) -> Workspace:
        resolved = self.resolve_path(path)
        key = str(resolved) if resolved else ""
        if key not in self._cache:
            config = parse_workspace(read_descriptor_file(resolved)) if resolved else WorkspaceConfig()
            apply_bounds(config)
            self._cache[key] = Workspace(config, source=key or None)
        else:
            apply_bounds(self._cache[key].config)
        return self._cache[key]

    def load_data(self, data: dict) -> Workspace:
        """Build a workspace from an in-memory mapping, bypassing the cache"""
        return Workspace(parse_workspace(data))


# Global workspace service instance
workspace_service = WorkspaceService()


def get_workspace_service() -> WorkspaceService:
    """Get workspace service instance"""
    return workspace_service
