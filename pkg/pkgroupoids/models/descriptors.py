from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Dict, List, Literal, Optional, Union


PitchValue = Union[int, str]


class GroupDescriptor(BaseModel):
    """A finite group: builtin kinds or an explicit multiplication table"""
    name: str = Field(..., description="Name other descriptors refer to")
    kind: Literal["cyclic", "symmetric", "ti", "table", "wreath"] = Field(..., description="Construction")
    n: Optional[int] = Field(None, ge=1, description="Order (cyclic) or degree (symmetric, wreath)")
    base: Optional[str] = Field(None, description="Name of the group Z for kind 'wreath'")
    order: Optional[int] = Field(None, ge=1, description="Order for kind 'table'")
    multiply: Optional[List[int]] = Field(None, description="Row-major table, entry [a*order+b] = index of a·b")
    identity: int = Field(0, ge=0, description="Index of the identity for kind 'table'")
    labels: Optional[List[str]] = Field(None, description="Display label per element")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"name": "Z3", "kind": "table", "order": 3, "multiply": [0, 1, 2, 1, 2, 0, 2, 0, 1]}
        }
    )

    @model_validator(mode="after")
    def check_parameters(self):
        if self.kind in ("cyclic", "symmetric", "wreath") and self.n is None:
            raise ValueError(f"Group kind '{self.kind}' needs n")
        if self.kind == "wreath" and not self.base:
            raise ValueError("Group kind 'wreath' needs a base group")
        if self.kind == "table":
            if self.order is None or self.multiply is None:
                raise ValueError("Group kind 'table' needs order and multiply")
            if len(self.multiply) != self.order * self.order:
                raise ValueError(f"multiply must have {self.order * self.order} entries")
        return self


class MorphismDescriptor(BaseModel):
    id: str = Field(..., description="Morphism id")
    src: str = Field(..., description="Source object")
    tgt: str = Field(..., description="Target object")


class CompositionEntry(BaseModel):
    second: str = Field(..., description="Morphism applied second")
    first: str = Field(..., description="Morphism applied first")
    result: str = Field(..., description="Id of second ∘ first")


class PosetBlock(BaseModel):
    relation: List[MorphismDescriptor] = Field([], description="Generating arrows, closed transitively")
    bottom: Optional[str] = Field(None, description="Object with an arrow to every object")


class CategoryDescriptor(BaseModel):
    """A finite category, given extensionally or as a poset"""
    name: str
    objects: List[str] = Field(..., min_length=1)
    morphisms: List[MorphismDescriptor] = Field([], description="All morphisms, identities included")
    composition: List[CompositionEntry] = Field([], description="Full composition table")
    identities: Dict[str, str] = Field({}, description="Object → identity id; defaults to id_<object>")
    poset: Optional[PosetBlock] = Field(None, description="Build a poset category instead")
    groupoid: bool = Field(False, description="Synthesize inverses and treat as a groupoid")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "Delta3",
                "objects": ["X", "Y", "Z"],
                "poset": {
                    "relation": [{"id": "f", "src": "X", "tgt": "Y"}, {"id": "g", "src": "Y", "tgt": "Z"}],
                    "bottom": "X",
                },
            }
        }
    )


class ChordClassDescriptor(BaseModel):
    name: str
    delta: str = Field(..., description="Category name (Gamma, Delta3, Point or a workspace category)")
    group: str = Field("TI", description="Group name")
    assignments: Dict[str, str] = Field(..., description="Generating morphism → element label")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"name": "U", "delta": "Gamma", "group": "TI", "assignments": {"f": "I3", "g": "I10"}}
        }
    )


class SectionPair(BaseModel):
    source: str = Field(..., alias="from")
    target: str = Field(..., alias="to")
    h: int = Field(..., ge=0, description="Index of the chosen element of H")

    model_config = ConfigDict(populate_by_name=True)


class SectionDescriptor(BaseModel):
    """A choice of H-label per ordered pair of classes"""
    name: str
    classes: List[str] = Field(..., min_length=1)
    extension: Literal["ti"] = Field("ti", description="Group extension; T/I over Z12 by Z2")
    pairs: List[SectionPair] = Field([])
    default: int = Field(0, ge=0, description="h for pairs not listed")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "mixed",
                "classes": ["U", "V"],
                "pairs": [{"from": "U", "to": "V", "h": 1}, {"from": "V", "to": "U", "h": 1}],
                "default": 0,
            }
        }
    )


class ChordDescriptor(BaseModel):
    chord_class: str = Field(..., alias="class")
    pitches: Union[Dict[str, PitchValue], List[PitchValue]] = Field(
        ..., description="Pitch per object (mapping or in object order), as 0-11 or note names"
    )

    model_config = ConfigDict(populate_by_name=True)


class ProgressionDescriptor(BaseModel):
    name: str
    classes: List[str] = Field([], description="Classes the chords may use")
    chords: List[ChordDescriptor] = Field(..., min_length=1)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "berg-part-one",
                "classes": ["U", "V"],
                "chords": [
                    {"class": "U", "pitches": ["Eb", "C", "G"]},
                    {"class": "V", "pitches": {"X": "C#", "Y": "Eb", "Z": "A"}},
                ],
            }
        }
    )


class PKNetDescriptor(BaseModel):
    chord_class: str = Field(..., alias="class")
    phi: Dict[str, Union[PitchValue, List[PitchValue]]] = Field(
        ..., description="Object → pitch (singleton form) or list of pitches"
    )

    model_config = ConfigDict(populate_by_name=True)


class GroupoidDescriptor(BaseModel):
    """A groupoid for the bisection commands"""
    name: str
    kind: Literal["pair", "subgroupoid", "category"]
    group: Optional[str] = Field(None, description="Vertex group for kind 'pair'")
    objects: List[str] = Field([], description="Objects for kind 'pair'")
    section: Optional[str] = Field(None, description="Section name for kind 'subgroupoid'")
    category: Optional[str] = Field(None, description="Groupoid category name for kind 'category'")

    @model_validator(mode="after")
    def check_parameters(self):
        needed = {"pair": ("group", "objects"), "subgroupoid": ("section",), "category": ("category",)}
        missing = [key for key in needed[self.kind] if not getattr(self, key)]
        if missing:
            raise ValueError(f"Groupoid kind '{self.kind}' needs {missing}")
        return self


class BisectionLiteral(BaseModel):
    sigma: List[int] = Field(..., description="Images of 1..n")
    legs: List[str] = Field(..., description="Morphism id from object i to object sigma(i)")


class WorkspaceConfig(BaseModel):
    """Everything a CLI invocation can refer to by name"""
    groups: List[GroupDescriptor] = Field([])
    categories: List[CategoryDescriptor] = Field([])
    classes: List[ChordClassDescriptor] = Field([])
    sections: List[SectionDescriptor] = Field([])
    progressions: List[ProgressionDescriptor] = Field([])
    groupoids: List[GroupoidDescriptor] = Field([])
    bounds: Dict[str, int] = Field({}, description="Settings overrides, e.g. NET_SEARCH_BOUND")

    @field_validator("bounds")
    @classmethod
    def positive_bounds(cls, v):
        for key, value in v.items():
            if value <= 0:
                raise ValueError(f"Bound {key} must be positive")
        return v

    @model_validator(mode="after")
    def unique_names(self):
        for kind in ("groups", "categories", "classes", "sections", "progressions", "groupoids"):
            names = [item.name for item in getattr(self, kind)]
            duplicates = sorted({name for name in names if names.count(name) > 1})
            if duplicates:
                raise ValueError(f"Duplicate {kind} names: {duplicates}")
        return self
