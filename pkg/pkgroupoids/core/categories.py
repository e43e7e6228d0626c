"""
Finite categories, groupoids, functors, natural transformations and G-sets.

Everything is extensional: a category lists all of its morphisms and the full
composition table, so each axiom check is exhaustive.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple
from functools import lru_cache
import logging

import networkx as nx
import numpy as np

from .exceptions import (
    CategoryMismatchError,
    DegenerateCategoryError,
    DescriptorError,
    UnknownNameError,
)
from .groups import FiniteGroup, GroupElement, TIElement, ti_group

logger = logging.getLogger(__name__)

Composition = Mapping[Tuple[str, str], str]


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category.

    ``composition[(m2, m1)]`` is the id of ``m2 ∘ m1`` (m1 first) and must be
    defined exactly when ``tgt(m1) == src(m2)``.
    """

    name: str
    objects: Tuple[str, ...]
    morphisms: Tuple[Morphism, ...]
    composition: Composition
    identities: Mapping[str, str]
    _by_id: Dict[str, Morphism] = field(default_factory=dict, repr=False)
    _hom: Dict[Tuple[str, str], Tuple[str, ...]] = field(default_factory=dict, repr=False)
    _position: Dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.objects:
            raise DegenerateCategoryError(f"Category {self.name} has no objects")
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(self.morphisms))
        if len(set(self.objects)) != len(self.objects):
            raise DescriptorError(f"Category {self.name} lists an object twice")

        by_id: Dict[str, Morphism] = {}
        for m in self.morphisms:
            if m.id in by_id:
                raise DescriptorError(f"Category {self.name} lists morphism {m.id} twice")
            if m.src not in self.objects or m.tgt not in self.objects:
                raise DescriptorError(f"Morphism {m.id} of {self.name} has an unknown endpoint")
            by_id[m.id] = m
        for obj in self.objects:
            identity = self.identities.get(obj)
            if identity not in by_id or by_id[identity].src != obj or by_id[identity].tgt != obj:
                raise DescriptorError(f"Category {self.name} has no identity on {obj}")

        hom: Dict[Tuple[str, str], List[str]] = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self.morphisms:
            hom[(m.src, m.tgt)].append(m.id)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_hom", {pair: tuple(ids) for pair, ids in hom.items()})
        object.__setattr__(self, "_position", {m.id: i for i, m in enumerate(self.morphisms)})

    def morphism(self, morphism_id: str) -> Morphism:
        try:
            return self._by_id[morphism_id]
        except KeyError:
            raise UnknownNameError(f"Category {self.name} has no morphism {morphism_id!r}") from None

    def src(self, morphism_id: str) -> str:
        return self.morphism(morphism_id).src

    def tgt(self, morphism_id: str) -> str:
        return self.morphism(morphism_id).tgt

    def identity(self, obj: str) -> str:
        try:
            return self.identities[obj]
        except KeyError:
            raise UnknownNameError(f"Category {self.name} has no object {obj!r}") from None

    def is_identity(self, morphism_id: str) -> bool:
        m = self.morphism(morphism_id)
        return m.src == m.tgt and self.identities[m.src] == morphism_id

    def compose(self, m2: str, m1: str) -> str:
        """m2 ∘ m1"""
        if self.tgt(m1) != self.src(m2):
            raise CategoryMismatchError(f"{m2} ∘ {m1} is not composable in {self.name}")
        try:
            return self.composition[(m2, m1)]
        except KeyError:
            raise DescriptorError(f"Composition {m2} ∘ {m1} missing from {self.name}") from None

    def hom(self, a: str, b: str) -> Tuple[str, ...]:
        try:
            return self._hom[(a, b)]
        except KeyError:
            raise UnknownNameError(f"{a} or {b} is not an object of {self.name}") from None

    def composable_pairs(self) -> Iterable[Tuple[str, str]]:
        for m1 in self.morphisms:
            for b in self.objects:
                for m2 in self._hom[(m1.tgt, b)]:
                    yield m2, m1.id

    def position(self, morphism_id: str) -> int:
        return self._position[morphism_id]

    def non_identity_morphisms(self) -> List[Morphism]:
        return [m for m in self.morphisms if not self.is_identity(m.id)]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, objects={len(self.objects)}, morphisms={len(self.morphisms)})"


@dataclass(frozen=True, eq=False, repr=False)
class PosetCategory(FinCategory):
    """A thin category; ``bottom`` reaches every object when present"""

    bottom: Optional[str] = None

    def __post_init__(self):
        super().__post_init__()
        for (a, b), ids in self._hom.items():
            if len(ids) > 1:
                raise DescriptorError(f"Poset {self.name} has {len(ids)} morphisms {a} → {b}")
        if self.bottom is not None:
            unreachable = [x for x in self.objects if not self._hom.get((self.bottom, x))]
            if unreachable:
                raise DescriptorError(f"Bottom {self.bottom} of {self.name} does not reach {unreachable}")

    def arrow(self, a: str, b: str) -> Optional[str]:
        ids = self.hom(a, b)
        return ids[0] if ids else None


@dataclass(frozen=True, eq=False, repr=False)
class Groupoid(FinCategory):
    inverses: Mapping[str, str] = field(default_factory=dict)
    _components: Tuple[Tuple[str, ...], ...] = field(default=(), repr=False)

    def __post_init__(self):
        super().__post_init__()
        missing = [m.id for m in self.morphisms if m.id not in self.inverses]
        if missing:
            raise DescriptorError(f"Groupoid {self.name} has no inverse for {missing[:5]}")
        object.__setattr__(self, "_components", tuple(connected_components(self)))

    def inverse(self, morphism_id: str) -> str:
        self.morphism(morphism_id)
        return self.inverses[morphism_id]

    @property
    def components(self) -> Tuple[Tuple[str, ...], ...]:
        return self._components

    @property
    def is_connected(self) -> bool:
        return len(self._components) == 1


def object_graph(C: FinCategory) -> nx.MultiDiGraph:
    """Objects as nodes, one edge per morphism keyed by its id"""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(C.objects)
    for m in C.morphisms:
        graph.add_edge(m.src, m.tgt, key=m.id)
    return graph


def connected_components(C: FinCategory) -> List[Tuple[str, ...]]:
    """Weakly connected components, each in object order, ordered by first object"""
    order = {obj: i for i, obj in enumerate(C.objects)}
    components = [
        tuple(sorted(component, key=order.__getitem__))
        for component in nx.weakly_connected_components(object_graph(C))
    ]
    return sorted(components, key=lambda component: order[component[0]])


def composition_matrix(C: FinCategory) -> np.ndarray:
    """Index matrix with entry [j, i] = position of m_j ∘ m_i, -1 where undefined"""
    size = len(C.morphisms)
    matrix = np.full((size, size), -1, dtype=np.int64)
    for (m2, m1), m in C.composition.items():
        if m2 in C._position and m1 in C._position and m in C._position:
            matrix[C._position[m2], C._position[m1]] = C._position[m]
    return matrix


def check_category(C: FinCategory) -> bool:
    """Exhaustive check of composition domains, bookkeeping, identities and associativity"""
    table = composition_matrix(C)
    objects = {obj: i for i, obj in enumerate(C.objects)}
    src = np.array([objects[m.src] for m in C.morphisms])
    tgt = np.array([objects[m.tgt] for m in C.morphisms])
    if len(C.composition) != int((table >= 0).sum()):
        logger.debug(f"{C.name}: composition mentions unknown morphisms")
        return False

    composable = src[:, None] == tgt[None, :]
    defined = table >= 0
    if not np.array_equal(defined, composable):
        logger.debug(f"{C.name}: composition defined on the wrong pairs")
        return False
    rows, cols = np.nonzero(defined)
    results = table[rows, cols]
    if not (np.array_equal(src[results], src[cols]) and np.array_equal(tgt[results], tgt[rows])):
        logger.debug(f"{C.name}: composite has wrong source or target")
        return False

    identity = np.array([C._position[C.identities[obj]] for obj in C.objects])
    positions = np.arange(len(C.morphisms))
    if not np.array_equal(table[identity[tgt], positions], positions):
        return False
    if not np.array_equal(table[positions, identity[src]], positions):
        return False

    for k in range(len(C.morphisms)):
        kj = table[k]
        valid = defined & (kj >= 0)[:, None]
        left = table[np.where(kj >= 0, kj, 0)[:, None], positions[None, :]]
        right = table[k, np.where(defined, table, 0)]
        if not np.array_equal(left[valid], right[valid]):
            logger.debug(f"{C.name}: associativity fails through {C.morphisms[k].id}")
            return False
    return True


def check_groupoid(C: Groupoid) -> bool:
    if not check_category(C):
        return False
    for m in C.morphisms:
        inverse = C.inverses[m.id]
        if C.inverses.get(inverse) != m.id:
            return False
        if C.composition.get((inverse, m.id)) != C.identities[m.src]:
            return False
        if C.composition.get((m.id, inverse)) != C.identities[m.tgt]:
            return False
    return True


def category_defect(C: FinCategory) -> Optional[str]:
    """First violated category axiom, located by morphism ids; None for a category"""
    for m1 in C.morphisms:
        for m2 in C.morphisms:
            key = (m2.id, m1.id)
            if m1.tgt != m2.src:
                if key in C.composition:
                    return f"{m2.id} ∘ {m1.id} is defined but not composable"
                continue
            result = C.composition.get(key)
            if result is None or result not in C._by_id:
                return f"{m2.id} ∘ {m1.id} is missing"
            if C.src(result) != m1.src or C.tgt(result) != m2.tgt:
                return f"{m2.id} ∘ {m1.id} = {result} has the wrong endpoints"
    for m in C.morphisms:
        if C.composition[(C.identities[m.tgt], m.id)] != m.id:
            return f"identity of {m.tgt} is not a left unit for {m.id}"
        if C.composition[(m.id, C.identities[m.src])] != m.id:
            return f"identity of {m.src} is not a right unit for {m.id}"
    for m2, m1 in C.composable_pairs():
        m21 = C.composition[(m2, m1)]
        for b in C.objects:
            for m3 in C.hom(C.tgt(m2), b):
                if C.composition[(m3, m21)] != C.composition[(C.composition[(m3, m2)], m1)]:
                    return f"({m3} ∘ {m2}) ∘ {m1} differs from {m3} ∘ ({m2} ∘ {m1})"
    return None


def homset_sizes_constant_on_components(C: Groupoid) -> bool:
    for component in C.components:
        sizes = {len(C.hom(a, b)) for a in component for b in component}
        if len(sizes) != 1:
            return False
    return True


def poset_category(
    name: str,
    objects: Sequence[str],
    generators: Sequence[Tuple[str, str, str]],
    bottom: Optional[str] = None,
) -> PosetCategory:
    """Thin category generated by (id, src, tgt) arrows, closed transitively.

    Missing composites are named after the shortest generating path, e.g.
    ``g∘f``; identities are ``id_X``. With no bottom given, the unique object
    reaching all others is used if there is one.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(objects)
    names: Dict[Tuple[str, str], str] = {}
    for morphism_id, src, tgt in generators:
        if src == tgt:
            raise DescriptorError(f"Poset {name}: generator {morphism_id} is a loop")
        if (src, tgt) in names:
            raise DescriptorError(f"Poset {name}: two generators {src} → {tgt}")
        names[(src, tgt)] = morphism_id
        graph.add_edge(src, tgt)
    if set(graph.nodes) != set(objects):
        raise DescriptorError(f"Poset {name}: generators mention unknown objects")
    if not nx.is_directed_acyclic_graph(graph):
        raise DescriptorError(f"Poset {name}: generating relation has a cycle")

    for a in objects:
        for b in nx.descendants(graph, a):
            if (a, b) not in names:
                path = nx.shortest_path(graph, a, b)
                steps = [names[(x, y)] for x, y in zip(path, path[1:])]
                names[(a, b)] = "∘".join(reversed(steps))

    identities = {obj: f"id_{obj}" for obj in objects}
    arrows: Dict[Tuple[str, str], str] = {(obj, obj): identities[obj] for obj in objects}
    arrows.update(names)
    morphisms = [Morphism(mid, a, b) for (a, b), mid in sorted(arrows.items(), key=lambda kv: _arrow_order(objects, kv))]
    composition = {}
    for (a, b), m1 in arrows.items():
        for (c, d), m2 in arrows.items():
            if b == c:
                composition[(m2, m1)] = arrows[(a, d)]

    if bottom is None:
        minimal = [x for x in objects if all(x == y or (x, y) in arrows for y in objects)]
        bottom = minimal[0] if len(minimal) == 1 else None
    return PosetCategory(
        name=name,
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition=composition,
        identities=identities,
        bottom=bottom,
    )


def _arrow_order(objects, item):
    (a, b), mid = item
    return (a != b, objects.index(a), objects.index(b), mid)


@lru_cache(maxsize=None)
def build_gamma() -> PosetCategory:
    """f: X → Y and g: X → Z, no composites"""
    return poset_category("Gamma", ["X", "Y", "Z"], [("f", "X", "Y"), ("g", "X", "Z")], bottom="X")


@lru_cache(maxsize=None)
def build_delta3() -> PosetCategory:
    """f: X → Y, g: Y → Z and g∘f: X → Z"""
    return poset_category("Delta3", ["X", "Y", "Z"], [("f", "X", "Y"), ("g", "Y", "Z")], bottom="X")


@lru_cache(maxsize=None)
def build_point() -> PosetCategory:
    return poset_category("Point", ["X"], [], bottom="X")


@lru_cache(maxsize=None)
def group_category(G: FiniteGroup) -> Groupoid:
    """One object ``*``, one morphism per element, ids are the element labels"""
    labels = G.labels
    morphisms = tuple(Morphism(label, "*", "*") for label in labels)
    composition = {
        (labels[b], labels[a]): labels[G.mul_index(b, a)] for a in range(G.order) for b in range(G.order)
    }
    inverses = {labels[a]: labels[G.inv_index(a)] for a in range(G.order)}
    return Groupoid(
        name=G.name,
        objects=("*",),
        morphisms=morphisms,
        composition=composition,
        identities={"*": labels[G.identity]},
        inverses=inverses,
    )


def build_groupoid(
    name: str,
    objects: Sequence[str],
    morphisms: Sequence[Morphism],
    composition: Composition,
    identities: Mapping[str, str],
) -> Groupoid:
    """Groupoid from a category description, synthesizing the inverses"""
    category = FinCategory(name, tuple(objects), tuple(morphisms), composition, identities)
    inverses = {}
    for m in category.morphisms:
        for candidate in category.hom(m.tgt, m.src):
            if (
                composition.get((candidate, m.id)) == identities[m.src]
                and composition.get((m.id, candidate)) == identities[m.tgt]
            ):
                inverses[m.id] = candidate
                break
        else:
            raise DescriptorError(f"Morphism {m.id} of {name} is not invertible")
    return Groupoid(
        name=name,
        objects=category.objects,
        morphisms=category.morphisms,
        composition=composition,
        identities=identities,
        inverses=inverses,
    )


def endomorphism_group(C: FinCategory, obj: str) -> FiniteGroup:
    """End(obj) tabulated as a FiniteGroup whose labels and payloads are morphism ids"""
    ids = C.hom(obj, obj)
    index = {mid: i for i, mid in enumerate(ids)}
    table = np.array([[index[C.compose(b, a)] for a in ids] for b in ids], dtype=np.int64)
    return FiniteGroup(
        name=f"{C.name}.End({obj})",
        table=table,
        identity=index[C.identity(obj)],
        labels=tuple(ids),
        payloads=tuple(ids),
    )


def pair_groupoid_product(name: str, objects: Sequence[str], Z: FiniteGroup) -> Groupoid:
    """The groupoid objects² × Z: one morphism ``e->e':z`` for every pair and z"""
    def mid(a, b, z):
        return f"{a}->{b}:{Z.labels[z]}"

    morphisms = [Morphism(mid(a, b, z), a, b) for a in objects for b in objects for z in range(Z.order)]
    composition = {
        (mid(b, c, z2), mid(a, b, z1)): mid(a, c, Z.mul_index(z2, z1))
        for a in objects
        for b in objects
        for c in objects
        for z1 in range(Z.order)
        for z2 in range(Z.order)
    }
    inverses = {mid(a, b, z): mid(b, a, Z.inv_index(z)) for a in objects for b in objects for z in range(Z.order)}
    return Groupoid(
        name=name,
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition=composition,
        identities={a: mid(a, a, Z.identity) for a in objects},
        inverses=inverses,
    )


def random_connected_groupoid(Z: FiniteGroup, n: int, seed: int) -> Groupoid:
    """A copy of objects² × Z with opaque morphism ids in a seeded random order"""
    rng = np.random.default_rng(seed)
    objects = [f"o{i}" for i in range(1, n + 1)]
    base = pair_groupoid_product("base", objects, Z)
    shuffled = rng.permutation(len(base.morphisms))
    rename = {base.morphisms[int(k)].id: f"m{i}" for i, k in enumerate(shuffled)}
    morphisms = sorted(
        (Morphism(rename[m.id], m.src, m.tgt) for m in base.morphisms), key=lambda m: int(m.id[1:])
    )
    logger.debug(f"Random groupoid on {n} objects with seed {seed}")
    return Groupoid(
        name=f"Random({Z.name},{n},{seed})",
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        composition={(rename[b], rename[a]): rename[c] for (b, a), c in base.composition.items()},
        identities={obj: rename[base.identities[obj]] for obj in objects},
        inverses={rename[a]: rename[b] for a, b in base.inverses.items()},
    )


@dataclass(frozen=True, eq=False)
class Functor:
    name: str
    source: FinCategory
    target: FinCategory
    on_objects: Mapping[str, str]
    on_morphisms: Mapping[str, str]

    def __call__(self, morphism_id: str) -> str:
        try:
            return self.on_morphisms[morphism_id]
        except KeyError:
            raise UnknownNameError(f"Functor {self.name} is undefined on {morphism_id!r}") from None

    def obj(self, obj: str) -> str:
        return self.on_objects[obj]


def check_functor(F: Functor) -> bool:
    """Sources, targets, identities and every defined composite are preserved"""
    S, T = F.source, F.target
    if set(F.on_objects) != set(S.objects) or set(F.on_morphisms) != {m.id for m in S.morphisms}:
        logger.debug(f"Functor {F.name} is not total")
        return False
    if any(F.on_objects[x] not in T.objects for x in S.objects):
        return False
    for m in S.morphisms:
        image = F.on_morphisms[m.id]
        if image not in T._by_id:
            return False
        if T.src(image) != F.on_objects[m.src] or T.tgt(image) != F.on_objects[m.tgt]:
            logger.debug(f"Functor {F.name} breaks endpoints of {m.id}")
            return False
    for obj in S.objects:
        if F.on_morphisms[S.identity(obj)] != T.identity(F.on_objects[obj]):
            return False
    for m2, m1 in S.composable_pairs():
        if F.on_morphisms[S.compose(m2, m1)] != T.compose(F.on_morphisms[m2], F.on_morphisms[m1]):
            logger.debug(f"Functor {F.name} breaks composite {m2} ∘ {m1}")
            return False
    return True


def identity_functor(C: FinCategory) -> Functor:
    return Functor(
        name=f"id_{C.name}",
        source=C,
        target=C,
        on_objects={x: x for x in C.objects},
        on_morphisms={m.id: m.id for m in C.morphisms},
    )


def compose_functors(G: Functor, F: Functor) -> Functor:
    """G ∘ F"""
    if F.target is not G.source:
        raise CategoryMismatchError(f"Cannot compose {G.name} after {F.name}")
    return Functor(
        name=f"{G.name}∘{F.name}",
        source=F.source,
        target=G.target,
        on_objects={x: G.on_objects[y] for x, y in F.on_objects.items()},
        on_morphisms={m: G.on_morphisms[n] for m, n in F.on_morphisms.items()},
    )


@dataclass(frozen=True, eq=False)
class NaturalTransformation:
    source_functor: Functor
    target_functor: Functor
    components: Mapping[str, str]


def check_natural(eta: NaturalTransformation) -> bool:
    F, F2 = eta.source_functor, eta.target_functor
    if F.source is not F2.source or F.target is not F2.target:
        logger.debug("Natural transformation between functors with different (co)domains")
        return False
    C, D = F.source, F.target
    if set(eta.components) != set(C.objects):
        return False
    for x in C.objects:
        component = eta.components[x]
        if component not in D._by_id:
            return False
        if D.src(component) != F.obj(x) or D.tgt(component) != F2.obj(x):
            return False
    for m in C.morphisms:
        left = D.compose(eta.components[m.tgt], F(m.id))
        right = D.compose(F2(m.id), eta.components[m.src])
        if left != right:
            logger.debug(f"Naturality square for {m.id} does not commute")
            return False
    return True


@dataclass(frozen=True, eq=False)
class GSet:
    """A finite set with a left action; ``act_table[g, p]`` is the index of g·point_p"""

    name: str
    group: FiniteGroup
    carrier: Tuple[Hashable, ...]
    act_table: np.ndarray
    _point_index: Dict[Hashable, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        table = np.asarray(self.act_table, dtype=np.int64)
        if table.shape != (self.group.order, len(self.carrier)):
            raise DescriptorError(f"G-set {self.name}: action table has shape {table.shape}")
        table.setflags(write=False)
        object.__setattr__(self, "act_table", table)
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "_point_index", {p: i for i, p in enumerate(self.carrier)})

    def point_index(self, point: Hashable) -> int:
        try:
            return self._point_index[point]
        except KeyError:
            raise DescriptorError(f"{point!r} is not a point of {self.name}") from None

    def act(self, g: GroupElement, point: Hashable) -> Hashable:
        return self.carrier[self.act_table[self.group.own(g), self.point_index(point)]]


def gset_from_function(name: str, G: FiniteGroup, carrier: Sequence[Hashable], action: Callable) -> GSet:
    """Tabulate ``action(payload, point)`` over the group's payloads"""
    index = {p: i for i, p in enumerate(carrier)}
    table = np.array([[index[action(G.payload(g), p)] for p in carrier] for g in G.elements()], dtype=np.int64)
    return GSet(name=name, group=G, carrier=tuple(carrier), act_table=table)


def check_gset(S: GSet) -> bool:
    """Identity acts trivially and (g·h)·x = g·(h·x), exhaustively"""
    G, table = S.group, S.act_table
    if not np.array_equal(table[G.identity], np.arange(len(S.carrier))):
        return False
    composed = table[np.arange(G.order)[:, None, None], table[None, :, :]]
    return bool(np.array_equal(table[G.table], composed))


@lru_cache(maxsize=None)
def pitch_class_gset() -> GSet:
    """T/I acting on the twelve pitch classes"""
    G = ti_group()
    return gset_from_function("PitchClasses", G, tuple(range(12)), lambda x, p: x(p))


TRIAD_ROOT_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")


def triad_pitches(triad: str) -> frozenset:
    minor = triad.endswith("m")
    root = TRIAD_ROOT_NAMES.index(triad[:-1] if minor else triad)
    return frozenset((root + step) % 12 for step in ((0, 3, 7) if minor else (0, 4, 7)))


@lru_cache(maxsize=None)
def triad_gset() -> GSet:
    """T/I acting simply transitively on the 24 major and minor triads"""
    G = ti_group()
    triads = tuple(TRIAD_ROOT_NAMES) + tuple(f"{root}m" for root in TRIAD_ROOT_NAMES)
    by_pitches = {triad_pitches(t): t for t in triads}

    def action(x: TIElement, triad: str) -> str:
        return by_pitches[frozenset(x(p) for p in triad_pitches(triad))]

    return gset_from_function("Triads", G, triads, action)


@dataclass(frozen=True, eq=False, repr=False)
class PullbackCategory(FinCategory):
    """A pullback whose objects and morphisms remember the pair they come from"""

    object_pairs: Mapping[str, Tuple[str, str]] = field(default_factory=dict)
    morphism_pairs: Mapping[str, Tuple[str, str]] = field(default_factory=dict)


def _pair_name(a: str, b: str, taken: Mapping[str, Tuple[str, str]]) -> str:
    # ids may contain commas, so "(a,b)" alone can collide
    name = f"({a},{b})"
    suffix = 1
    while name in taken:
        suffix += 1
        name = f"({a},{b})#{suffix}"
    return name


def pullback_category(P: Functor, Q: Functor) -> PullbackCategory:
    """Pairs of objects and of morphisms agreeing in the common codomain"""
    if P.target is not Q.target:
        raise CategoryMismatchError(f"{P.name} and {Q.name} have different codomains")
    A, B = P.source, Q.source
    object_pairs: Dict[str, Tuple[str, str]] = {}
    objects: Dict[Tuple[str, str], str] = {}
    for a in A.objects:
        for b in B.objects:
            if P.obj(a) == Q.obj(b):
                name = _pair_name(a, b, object_pairs)
                object_pairs[name] = (a, b)
                objects[(a, b)] = name
    morphism_pairs: Dict[str, Tuple[str, str]] = {}
    pairs: Dict[Tuple[str, str], str] = {}
    morphisms = []
    for f in A.morphisms:
        for g in B.morphisms:
            if P(f.id) == Q(g.id):
                pair_id = _pair_name(f.id, g.id, morphism_pairs)
                morphism_pairs[pair_id] = (f.id, g.id)
                pairs[(f.id, g.id)] = pair_id
                morphisms.append(Morphism(pair_id, objects[(f.src, g.src)], objects[(f.tgt, g.tgt)]))
    composition = {}
    for (f1, g1), m1 in pairs.items():
        for (f2, g2), m2 in pairs.items():
            if A.tgt(f1) == A.src(f2) and B.tgt(g1) == B.src(g2):
                composition[(m2, m1)] = pairs[(A.compose(f2, f1), B.compose(g2, g1))]
    identities = {name: pairs[(A.identity(a), B.identity(b))] for name, (a, b) in object_pairs.items()}
    return PullbackCategory(
        name=f"{P.name}x{Q.name}",
        objects=tuple(object_pairs),
        morphisms=tuple(morphisms),
        composition=composition,
        identities=identities,
        object_pairs=object_pairs,
        morphism_pairs=morphism_pairs,
    )
