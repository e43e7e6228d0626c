"""
The functor groupoid G^Δ: chord classes as functors Δ → G and the natural
transformations between them.

A morphism ^{FF'}g is stored as its tuple of components (one group element
per object of Δ); for a poset with bottom O the whole tuple is determined by
the component at O, which is the morphism's label.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import itertools
import logging

import networkx as nx
import numpy as np

from ..core.categories import (
    FinCategory,
    Functor,
    Groupoid,
    Morphism,
    NaturalTransformation,
    PosetCategory,
    check_functor,
    connected_components,
    group_category,
)
from ..core.config import get_settings
from ..core.exceptions import (
    CategoryMismatchError,
    ClassMismatchError,
    DescriptorError,
    ResourceBoundError,
    VerificationFailure,
)
from ..core.groups import FiniteGroup, GroupElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChordClass:
    """A generalized musical class: a functor from Δ to a group seen as a one-object category.

    Two classes are equal when their names are equal, whatever their functors.
    """

    name: str
    functor: Functor
    group: FiniteGroup

    @property
    def delta(self) -> FinCategory:
        return self.functor.source

    def element(self, morphism_id: str) -> int:
        """Index in the group of F(m)"""
        return self.group.by_label(self.functor(morphism_id)).index

    def assignments(self) -> Dict[str, str]:
        return {m.id: self.functor(m.id) for m in self.delta.non_identity_morphisms()}

    def __eq__(self, other) -> bool:
        return isinstance(other, ChordClass) and other.name == self.name

    def __hash__(self) -> int:
        return hash(("ChordClass", self.name))

    def __repr__(self) -> str:
        arrows = ", ".join(f"{m}↦{label}" for m, label in self.assignments().items())
        return f"ChordClass({self.name}: {arrows})"


def chord_class(
    name: str,
    delta: FinCategory,
    group: FiniteGroup,
    assignments: Mapping[str, Union[str, GroupElement]],
) -> ChordClass:
    """Build a chord class from images of (at least) the generating morphisms.

    Identities go to the group identity; unassigned composites are derived
    from assigned factors. The result must be a functor.
    """
    target = group_category(group)
    images: Dict[str, str] = {}
    for morphism_id, value in assignments.items():
        delta.morphism(morphism_id)
        if isinstance(value, GroupElement):
            images[morphism_id] = group.label(value)
        else:
            images[morphism_id] = group.label(group.by_label(value))
    for obj in delta.objects:
        images.setdefault(delta.identity(obj), group.labels[group.identity])

    progress = True
    while progress and len(images) < len(delta.morphisms):
        progress = False
        for m2, m1 in delta.composable_pairs():
            composite = delta.compose(m2, m1)
            if composite not in images and m1 in images and m2 in images:
                images[composite] = target.compose(images[m2], images[m1])
                progress = True
    missing = [m.id for m in delta.morphisms if m.id not in images]
    if missing:
        raise DescriptorError(f"Chord class {name} leaves {missing} unassigned")

    functor = Functor(
        name=name,
        source=delta,
        target=target,
        on_objects={obj: "*" for obj in delta.objects},
        on_morphisms=images,
    )
    if not check_functor(functor):
        raise DescriptorError(f"Assignments of chord class {name} do not define a functor")
    logger.debug(f"Built chord class {name} over {delta.name}")
    return ChordClass(name=name, functor=functor, group=group)


def _label_object(delta: FinCategory) -> str:
    if isinstance(delta, PosetCategory) and delta.bottom is not None:
        return delta.bottom
    return delta.objects[0]


@dataclass(frozen=True)
class GDeltaMorphism:
    """A natural transformation F → F' with one component per object of Δ (in Δ's object order)"""

    source: ChordClass
    target: ChordClass
    components: Tuple[int, ...]

    @property
    def delta(self) -> FinCategory:
        return self.source.delta

    @property
    def group(self) -> FiniteGroup:
        return self.source.group

    def component(self, obj: str) -> int:
        return self.components[self.delta.objects.index(obj)]

    @property
    def label_index(self) -> int:
        return self.component(_label_object(self.delta))

    @property
    def label(self) -> str:
        return self.group.labels[self.label_index]

    @property
    def id(self) -> str:
        delta = self.delta
        if isinstance(delta, PosetCategory) and delta.bottom is not None:
            key = self.label
        else:
            key = ",".join(self.group.labels[c] for c in self.components)
        return f"{self.source.name}->{self.target.name}:{key}"

    @property
    def notation(self) -> str:
        return f"^{{{self.source.name}{self.target.name}}}{self.label}"

    def __repr__(self) -> str:
        return f"GDeltaMorphism({self.id})"


def _check_pair(F: ChordClass, F2: ChordClass):
    if F.delta is not F2.delta:
        raise CategoryMismatchError(f"Classes {F.name} and {F2.name} live over different shapes")
    if F.group is not F2.group:
        raise CategoryMismatchError(f"Classes {F.name} and {F2.name} take values in different groups")


def is_natural(eta: GDeltaMorphism) -> bool:
    """Every square η_Y·F(m) = F'(m)·η_X commutes"""
    G, delta = eta.group, eta.delta
    for m in delta.morphisms:
        left = G.mul_index(eta.component(m.tgt), eta.source.element(m.id))
        right = G.mul_index(eta.target.element(m.id), eta.component(m.src))
        if left != right:
            return False
    return True


def natural_transformation(eta: GDeltaMorphism) -> NaturalTransformation:
    """The morphism as a NaturalTransformation between the underlying functors"""
    labels = eta.group.labels
    return NaturalTransformation(
        source_functor=eta.source.functor,
        target_functor=eta.target.functor,
        components={obj: labels[c] for obj, c in zip(eta.delta.objects, eta.components)},
    )


def _transport_forward(G: FiniteGroup, F: ChordClass, F2: ChordClass, m: str, eta_src: int) -> int:
    # η_tgt = F'(m) · η_src · F(m)⁻¹
    return G.mul_index(G.mul_index(F2.element(m), eta_src), G.inv_index(F.element(m)))


def _transport_backward(G: FiniteGroup, F: ChordClass, F2: ChordClass, m: str, eta_tgt: int) -> int:
    # η_src = F'(m)⁻¹ · η_tgt · F(m)
    return G.mul_index(G.mul_index(G.inv_index(F2.element(m)), eta_tgt), F.element(m))


def homset(F: ChordClass, F2: ChordClass) -> List[GDeltaMorphism]:
    """Hom(F, F') in G^Δ, one morphism per choice of the component at the bottom object.

    Shapes that are not posets with a bottom are handled by ``homset_general``.
    """
    _check_pair(F, F2)
    delta, G = F.delta, F.group
    if not (isinstance(delta, PosetCategory) and delta.bottom is not None):
        return homset_general(F, F2)

    arrows = [delta.arrow(delta.bottom, obj) for obj in delta.objects]
    morphisms = []
    for g in range(G.order):
        components = tuple(_transport_forward(G, F, F2, m, g) for m in arrows)
        eta = GDeltaMorphism(F, F2, components)
        if not is_natural(eta):
            raise VerificationFailure(f"Propagated transformation {eta.id} is not natural", witness=eta.id)
        morphisms.append(eta)
    logger.debug(f"Hom({F.name}, {F2.name}) has {len(morphisms)} elements")
    return morphisms


def spanning_frames(delta: FinCategory) -> List[Tuple[str, List[Tuple[str, str, str, bool]]]]:
    """Per connected component: its root and BFS tree edges (parent, child, morphism, forward)"""
    graph = nx.Graph()
    graph.add_nodes_from(delta.objects)
    for m in delta.non_identity_morphisms():
        if m.src != m.tgt and not graph.has_edge(m.src, m.tgt):
            graph.add_edge(m.src, m.tgt, morphism=m.id)
    frames = []
    for component in connected_components(delta):
        root = component[0]
        edges = []
        for parent, child in nx.bfs_edges(graph, root, sort_neighbors=lambda nodes: sorted(nodes, key=delta.objects.index)):
            morphism_id = graph.edges[parent, child]["morphism"]
            edges.append((parent, child, morphism_id, delta.src(morphism_id) == parent))
        frames.append((root, edges))
    return frames


def homset_general(F: ChordClass, F2: ChordClass) -> List[GDeltaMorphism]:
    """All natural transformations F → F' for an arbitrary finite Δ.

    A component is chosen freely at the root of each connected component,
    propagated along a spanning tree, and kept when every naturality square
    commutes.
    """
    _check_pair(F, F2)
    delta, G = F.delta, F.group
    frames = spanning_frames(delta)
    position = {obj: i for i, obj in enumerate(delta.objects)}
    morphisms = []
    for roots in itertools.product(range(G.order), repeat=len(frames)):
        components = [0] * len(delta.objects)
        for (root, edges), choice in zip(frames, roots):
            components[position[root]] = choice
            for parent, child, m, forward in edges:
                value = components[position[parent]]
                step = _transport_forward if forward else _transport_backward
                components[position[child]] = step(G, F, F2, m, value)
        eta = GDeltaMorphism(F, F2, tuple(components))
        if is_natural(eta):
            morphisms.append(eta)
    logger.debug(f"General Hom({F.name}, {F2.name}) has {len(morphisms)} elements")
    return morphisms


def homset_brute_force(F: ChordClass, F2: ChordClass) -> List[GDeltaMorphism]:
    """Filter every tuple of components by naturality; lexicographic in Δ's object order"""
    _check_pair(F, F2)
    delta, G = F.delta, F.group
    k = len(delta.objects)
    size = G.order ** k
    limit = get_settings().HOMSET_BRUTE_FORCE_LIMIT
    if size > limit:
        raise ResourceBoundError(f"Brute-force hom-set needs {size} tuples, above {limit}")

    grid = np.indices((G.order,) * k).reshape(k, -1)
    keep = np.ones(grid.shape[1], dtype=bool)
    position = {obj: i for i, obj in enumerate(delta.objects)}
    for m in delta.morphisms:
        f, f2 = F.element(m.id), F2.element(m.id)
        keep &= G.table[grid[position[m.tgt]], f] == G.table[f2, grid[position[m.src]]]
    return [GDeltaMorphism(F, F2, tuple(int(c) for c in column)) for column in grid[:, keep].T]


def compose(eta2: GDeltaMorphism, eta1: GDeltaMorphism) -> GDeltaMorphism:
    """η2 ∘ η1, componentwise"""
    if eta1.target != eta2.source or eta1.delta is not eta2.delta:
        raise ClassMismatchError(f"Cannot compose {eta2.id} after {eta1.id}")
    G = eta1.group
    components = tuple(G.mul_index(b, a) for b, a in zip(eta2.components, eta1.components))
    return GDeltaMorphism(eta1.source, eta2.target, components)


def identity_morphism(F: ChordClass) -> GDeltaMorphism:
    return GDeltaMorphism(F, F, (F.group.identity,) * len(F.delta.objects))


def inverse(eta: GDeltaMorphism) -> GDeltaMorphism:
    G = eta.group
    return GDeltaMorphism(eta.target, eta.source, tuple(G.inv_index(c) for c in eta.components))


def component_table(eta: GDeltaMorphism) -> Dict[str, GroupElement]:
    return {obj: eta.group.element(c) for obj, c in zip(eta.delta.objects, eta.components)}


def find_morphism(F: ChordClass, F2: ChordClass, label: str) -> GDeltaMorphism:
    """The element of Hom(F, F') with the given label"""
    for eta in homset(F, F2):
        if eta.label == label:
            return eta
    raise DescriptorError(f"Hom({F.name}, {F2.name}) has no morphism labelled {label}")


@dataclass(frozen=True, eq=False, repr=False)
class MaterializedGroupoid(Groupoid):
    """The full subcategory of G^Δ on a list of classes"""

    classes: Tuple[ChordClass, ...] = ()
    transformations: Mapping[str, GDeltaMorphism] = field(default_factory=dict)

    def transformation(self, morphism_id: str) -> GDeltaMorphism:
        self.morphism(morphism_id)
        return self.transformations[morphism_id]

    def chord_class(self, name: str) -> ChordClass:
        for F in self.classes:
            if F.name == name:
                return F
        raise DescriptorError(f"{name} is not an object of {self.name}")


def materialize_groupoid(classes: Sequence[ChordClass], name: Optional[str] = None) -> MaterializedGroupoid:
    if not classes:
        raise DescriptorError("Cannot materialize a groupoid on no chord classes")
    names = [F.name for F in classes]
    if len(set(names)) != len(names):
        raise DescriptorError(f"Duplicate chord class names in {names}")
    for F in classes[1:]:
        _check_pair(classes[0], F)

    hom: Dict[Tuple[str, str], List[GDeltaMorphism]] = {}
    transformations: Dict[str, GDeltaMorphism] = {}
    for F in classes:
        for F2 in classes:
            hom[(F.name, F2.name)] = homset(F, F2)
            for eta in hom[(F.name, F2.name)]:
                transformations[eta.id] = eta

    composition = {}
    for eta1 in transformations.values():
        for F3 in classes:
            for eta2 in hom[(eta1.target.name, F3.name)]:
                composition[(eta2.id, eta1.id)] = compose(eta2, eta1).id
    identities = {F.name: identity_morphism(F).id for F in classes}
    inverses = {mid: inverse(eta).id for mid, eta in transformations.items()}

    groupoid = MaterializedGroupoid(
        name=name or "G^Delta(" + ",".join(names) + ")",
        objects=tuple(names),
        morphisms=tuple(Morphism(mid, eta.source.name, eta.target.name) for mid, eta in transformations.items()),
        composition=composition,
        identities=identities,
        inverses=inverses,
        classes=tuple(classes),
        transformations=transformations,
    )
    logger.info(f"Materialized {groupoid.name} with {len(groupoid.morphisms)} morphisms")
    return groupoid
