"""
Subgroupoids of G^Δ cut out by a group extension 1 → Z → G → H → 1.

The projection Π replaces every label g = (z, h) by h. A section subcategory
picks one h per ordered pair of classes; the pullback along it keeps the
morphisms of G^Δ that project onto the picked h.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union
import logging

from ..core.categories import (
    FinCategory,
    Functor,
    Groupoid,
    Morphism,
    check_groupoid,
    endomorphism_group,
    pullback_category,
)
from ..core.exceptions import GroupMismatchError, SectionClosureError, UnknownNameError
from ..core.groups import (
    FiniteGroup,
    GroupElement,
    GroupExtension,
    extension_decompose,
    find_isomorphism,
    left_coset,
)
from ..models.reports import CosetWitness, EndomorphismWitness, KernelStructureReport
from .functor_groupoid import (
    ChordClass,
    GDeltaMorphism,
    MaterializedGroupoid,
    chord_class,
    materialize_groupoid,
)

logger = logging.getLogger(__name__)


def project(eta: GDeltaMorphism, E: GroupExtension) -> GroupElement:
    """The H-part of the label of η"""
    if eta.group is not E.G:
        raise GroupMismatchError(f"{eta.id} takes values in {eta.group.name}, not {E.G.name}")
    _, h = extension_decompose(E, eta.group.element(eta.label_index))
    return h


@dataclass(frozen=True, eq=False)
class SectionSubcategory:
    """One element of H per ordered pair of classes, closed under composition"""

    H: FiniteGroup
    objects: Tuple[str, ...]
    choice: Mapping[Tuple[str, str], int]

    def h(self, source: str, target: str) -> int:
        try:
            return self.choice[(source, target)]
        except KeyError:
            raise UnknownNameError(f"Section has no choice for {source} → {target}") from None


def build_section(
    objects: Sequence[str],
    choice: Mapping[Tuple[str, str], Union[int, GroupElement]],
    H: FiniteGroup,
    default: Optional[Union[int, GroupElement]] = None,
) -> SectionSubcategory:
    """Validate a choice of H-labels; pairs missing from ``choice`` take ``default``"""
    def index(value):
        return H.own(value) if isinstance(value, GroupElement) else H.element(int(value)).index

    resolved: Dict[Tuple[str, str], int] = {}
    for u in objects:
        for v in objects:
            if (u, v) in choice:
                resolved[(u, v)] = index(choice[(u, v)])
            elif default is not None:
                resolved[(u, v)] = index(default)
            else:
                raise SectionClosureError(f"Section has no choice for {u} → {v}", witness=(u, v))
    unknown = [pair for pair in choice if pair not in resolved]
    if unknown:
        raise UnknownNameError(f"Section mentions unknown classes {unknown}")

    for u in objects:
        if resolved[(u, u)] != H.identity:
            raise SectionClosureError(f"Section picks a nontrivial endomorphism of {u}", witness=(u, u))
    for u in objects:
        for v in objects:
            for w in objects:
                if H.mul_index(resolved[(v, w)], resolved[(u, v)]) != resolved[(u, w)]:
                    raise SectionClosureError(
                        f"Section is not closed at ({u}, {v}, {w})", witness=(u, v, w)
                    )
    return SectionSubcategory(H=H, objects=tuple(objects), choice=resolved)


def default_section(objects: Sequence[str], H: FiniteGroup) -> SectionSubcategory:
    """Every hom-set projects to the identity of H"""
    return build_section(objects, {}, H, default=H.identity)


@dataclass(frozen=True, eq=False)
class SubGroupoid:
    """A wide subgroupoid of a materialized G^Δ, given by the ids it keeps"""

    ambient: MaterializedGroupoid
    kept: FrozenSet[str]
    extension: GroupExtension
    section: SectionSubcategory
    _groupoid: Optional[Groupoid] = field(default=None, repr=False)

    def contains(self, eta: GDeltaMorphism) -> bool:
        return eta.id in self.kept

    def hom(self, source: str, target: str) -> List[GDeltaMorphism]:
        return [
            self.ambient.transformation(mid)
            for mid in self.ambient.hom(source, target)
            if mid in self.kept
        ]

    def is_closed(self) -> bool:
        C = self.ambient
        if any(C.identity(obj) not in self.kept for obj in C.objects):
            return False
        if any(C.inverse(mid) not in self.kept for mid in self.kept):
            return False
        for m2, m1 in C.composable_pairs():
            if m1 in self.kept and m2 in self.kept and C.compose(m2, m1) not in self.kept:
                return False
        return True

    def as_groupoid(self) -> Groupoid:
        if self._groupoid is None:
            C = self.ambient
            groupoid = Groupoid(
                name=f"{C.name}|{self.extension.Z.name}",
                objects=C.objects,
                morphisms=tuple(m for m in C.morphisms if m.id in self.kept),
                composition={
                    pair: result
                    for pair, result in C.composition.items()
                    if pair[0] in self.kept and pair[1] in self.kept
                },
                identities=dict(C.identities),
                inverses={mid: C.inverse(mid) for mid in self.kept},
            )
            object.__setattr__(self, "_groupoid", groupoid)
        return self._groupoid


def pullback_subgroupoid(
    classes: Union[Sequence[ChordClass], MaterializedGroupoid],
    E: GroupExtension,
    section: Optional[SectionSubcategory] = None,
) -> SubGroupoid:
    ambient = classes if isinstance(classes, MaterializedGroupoid) else materialize_groupoid(classes)
    section = section or default_section(ambient.objects, E.H)
    if set(section.objects) != set(ambient.objects):
        raise UnknownNameError(f"Section objects {section.objects} differ from {ambient.objects}")
    kept = frozenset(
        mid
        for mid, eta in ambient.transformations.items()
        if project(eta, E).index == section.h(eta.source.name, eta.target.name)
    )
    logger.info(f"Pullback subgroupoid keeps {len(kept)} of {len(ambient.morphisms)} morphisms")
    return SubGroupoid(ambient=ambient, kept=kept, extension=E, section=section)


def projected_class(F: ChordClass, E: GroupExtension) -> ChordClass:
    """π∘F, keeping the name of F"""
    assignments = {
        m.id: E.H.element(E.project[F.element(m.id)]) for m in F.delta.non_identity_morphisms()
    }
    return chord_class(F.name, F.delta, E.H, assignments)


def projection_functor(ambient: MaterializedGroupoid, E: GroupExtension) -> Tuple[Functor, MaterializedGroupoid]:
    """Π: G^Δ → H^Δ on the given classes, with its codomain"""
    projected = {F.name: projected_class(F, E) for F in ambient.classes}
    target = materialize_groupoid(list(projected.values()), name=f"H^Delta({','.join(projected)})")
    on_morphisms = {}
    for mid, eta in ambient.transformations.items():
        image = GDeltaMorphism(
            projected[eta.source.name],
            projected[eta.target.name],
            tuple(int(E.project[c]) for c in eta.components),
        )
        on_morphisms[mid] = image.id
    functor = Functor(
        name="Pi",
        source=ambient,
        target=target,
        on_objects={obj: obj for obj in ambient.objects},
        on_morphisms=on_morphisms,
    )
    return functor, target


def section_category(section: SectionSubcategory, target: MaterializedGroupoid) -> Tuple[FinCategory, Functor]:
    """The section as a category with its inclusion ι into H^Δ"""
    chosen = {}
    for (u, v), h in section.choice.items():
        matches = [
            mid for mid in target.hom(u, v) if target.transformation(mid).label_index == h
        ]
        chosen[(u, v)] = matches[0]
    category = FinCategory(
        name="Section",
        objects=section.objects,
        morphisms=tuple(Morphism(mid, u, v) for (u, v), mid in chosen.items()),
        composition={
            (chosen[(v, w)], chosen[(u, v)]): chosen[(u, w)]
            for u in section.objects
            for v in section.objects
            for w in section.objects
        },
        identities={u: chosen[(u, u)] for u in section.objects},
    )
    inclusion = Functor(
        name="iota",
        source=category,
        target=target,
        on_objects={u: u for u in section.objects},
        on_morphisms={mid: mid for mid in chosen.values()},
    )
    return category, inclusion


def _signature(eta: GDeltaMorphism) -> Tuple[str, str, Tuple[int, ...]]:
    return eta.source.name, eta.target.name, eta.components


def pullback_oracle(sub: SubGroupoid) -> bool:
    """The filtered subgroupoid agrees with the generic pullback of Π along ι"""
    pi, target = projection_functor(sub.ambient, sub.extension)
    _, iota = section_category(sub.section, target)
    pullback = pullback_category(pi, iota)
    first = [
        _signature(sub.ambient.transformation(pullback.morphism_pairs[m.id][0])) for m in pullback.morphisms
    ]
    if len(first) != len(set(first)):
        return False
    kept = {_signature(sub.ambient.transformation(mid)) for mid in sub.kept}
    diagonal = {(u, u) for u in sub.ambient.objects}
    return set(first) == kept and set(pullback.object_pairs.values()) == diagonal


def kernel_structure_report(sub: SubGroupoid, E: GroupExtension) -> KernelStructureReport:
    """Each End(U) against Z, and each hom-set's labels against the cosets of Z"""
    G = E.G
    groupoid = sub.as_groupoid()
    kernel = [int(g) for g in E.inject]
    endomorphisms = []
    for obj in groupoid.objects:
        End = endomorphism_group(groupoid, obj)
        mapping = find_isomorphism(End, E.Z)
        endomorphisms.append(
            EndomorphismWitness(
                object=obj,
                order=End.order,
                isomorphic_to_kernel=mapping is not None,
                isomorphism={} if mapping is None else {End.labels[i]: E.Z.labels[j] for i, j in enumerate(mapping)},
            )
        )

    cosets = []
    for u in groupoid.objects:
        for v in groupoid.objects:
            labels = sorted(eta.label_index for eta in sub.hom(u, v))
            representative = labels[0] if labels else G.identity
            coset = sorted(left_coset(G, representative, kernel))
            cosets.append(
                CosetWitness(
                    source=u,
                    target=v,
                    labels=[G.labels[g] for g in labels],
                    representative=G.labels[representative],
                    is_coset=labels == coset,
                )
            )

    closed = sub.is_closed() and check_groupoid(groupoid)
    passed = closed and all(w.isomorphic_to_kernel for w in endomorphisms) and all(w.is_coset for w in cosets)
    return KernelStructureReport(passed=passed, closed=closed, endomorphisms=endomorphisms, cosets=cosets)


def verify_kernel_structure(sub: SubGroupoid, E: GroupExtension) -> bool:
    """Every End(U) ≅ Z and every hom-set is a left coset of Z in G"""
    return kernel_structure_report(sub, E).passed
