"""
Bisections of a finite connected groupoid.

A bisection picks, for every object i, one morphism i → σ(i) for a
permutation σ of the objects. Objects are numbered 1..n in the groupoid's
object order. Bisections compose as ``(b2 ∘ b1)(i) = b2(σ1(i)) ∘ b1(i)`` and
form the group Bis(C) ≅ Z ≀ S_n, Z being the vertex group of any object.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple
import itertools
import logging
import math

import networkx as nx
import numpy as np

from ..core.categories import (
    Functor,
    Groupoid,
    check_functor,
    endomorphism_group,
    pair_groupoid_product,
)
from ..core.config import get_settings
from ..core.exceptions import (
    CategoryMismatchError,
    DescriptorError,
    DisconnectedGroupoidError,
    FiberError,
    ResourceBoundError,
)
from ..core.groups import (
    FiniteGroup,
    Permutation,
    WreathElement,
    all_permutations,
    group_from_payloads,
    is_homomorphism,
    verify_group_axioms,
    wreath_group,
)
from ..models.reports import InternalAutomorphismReport, SemidirectReport, TrivializationReport
from .functor_groupoid import GDeltaMorphism
from .pknet import PKNet, act

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bisection:
    """``legs[i-1]`` is a morphism from object i to object sigma(i)"""

    groupoid: Groupoid
    sigma: Permutation
    legs: Tuple[str, ...]

    def __post_init__(self):
        C = self.groupoid
        object.__setattr__(self, "legs", tuple(self.legs))
        if len(self.legs) != len(C.objects) or self.sigma.n != len(C.objects):
            raise DescriptorError(f"A bisection of {C.name} needs {len(C.objects)} legs")
        for i, leg in enumerate(self.legs, start=1):
            m = C.morphism(leg)
            if m.src != C.objects[i - 1] or m.tgt != C.objects[self.sigma(i) - 1]:
                raise DescriptorError(f"Leg {leg} does not go from object {i} to object {self.sigma(i)}")

    def leg(self, obj: str) -> str:
        """b(obj) in map form: the leg starting at ``obj``"""
        return self.legs[self.groupoid.objects.index(obj)]

    def __str__(self) -> str:
        return f"<{self.sigma}; {', '.join(self.legs)}>"


def from_map(C: Groupoid, legs: Mapping[str, str]) -> Bisection:
    """Bisection from a map b: C₀ → C₁ with s∘b = id and t∘b bijective"""
    if set(legs) != set(C.objects):
        raise DescriptorError("A bisection must choose one morphism per object")
    targets = []
    for obj in C.objects:
        m = C.morphism(legs[obj])
        if m.src != obj:
            raise DescriptorError(f"Leg {m.id} chosen at {obj} starts at {m.src}")
        targets.append(C.objects.index(m.tgt) + 1)
    if len(set(targets)) != len(targets):
        raise DescriptorError("Targets of the chosen legs are not a permutation of the objects")
    return Bisection(C, Permutation(tuple(targets)), tuple(legs[obj] for obj in C.objects))


def compose_bisections(b2: Bisection, b1: Bisection) -> Bisection:
    """b2 ∘ b1 (b1 first)"""
    if b2.groupoid is not b1.groupoid:
        raise CategoryMismatchError("Bisections of different groupoids")
    C = b1.groupoid
    legs = tuple(C.compose(b2.legs[b1.sigma(i) - 1], b1.legs[i - 1]) for i in range(1, b1.sigma.n + 1))
    return Bisection(C, b2.sigma.compose(b1.sigma), legs)


def identity_bisection(C: Groupoid) -> Bisection:
    return Bisection(C, Permutation.identity(len(C.objects)), tuple(C.identity(obj) for obj in C.objects))


def inverse_bisection(b: Bisection) -> Bisection:
    """b⁻¹(e) = b((t∘b)⁻¹(e))⁻¹"""
    C = b.groupoid
    inverse_sigma = b.sigma.inverse()
    legs = tuple(C.inverse(b.legs[inverse_sigma(j) - 1]) for j in range(1, b.sigma.n + 1))
    return Bisection(C, inverse_sigma, legs)


def _require_connected(C: Groupoid):
    if not C.is_connected:
        raise DisconnectedGroupoidError(f"{C.name} has {len(C.components)} connected components")


def vertex_group_order(C: Groupoid) -> int:
    return len(C.hom(C.objects[0], C.objects[0]))


@dataclass(frozen=True, eq=False)
class BisGroup:
    groupoid: Groupoid
    elements: Tuple[Bisection, ...]
    group: FiniteGroup

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, b: Bisection) -> int:
        return self.group.by_payload(b).index


def enumerate_bisections(C: Groupoid) -> List[Bisection]:
    """Permutation-major, then legs in hom-set order"""
    objects = C.objects
    result = []
    for sigma in all_permutations(len(objects)):
        choices = [C.hom(objects[i - 1], objects[sigma(i) - 1]) for i in range(1, sigma.n + 1)]
        result.extend(Bisection(C, sigma, legs) for legs in itertools.product(*choices))
    return result


def bis_group(C: Groupoid) -> BisGroup:
    _require_connected(C)
    n = len(C.objects)
    order = vertex_group_order(C) ** n * math.factorial(n)
    bound = get_settings().BISECTION_ORDER_BOUND
    if order > bound:
        raise ResourceBoundError(f"Bis({C.name}) has order {order}, above the bound {bound}")
    elements = enumerate_bisections(C)
    group = group_from_payloads(f"Bis({C.name})", elements, compose_bisections)
    logger.info(f"Enumerated Bis({C.name}) of order {group.order}")
    return BisGroup(groupoid=C, elements=tuple(elements), group=group)


@dataclass(frozen=True, eq=False)
class TransportFrame:
    """A base object with anchors base → i (the anchor at the base is its identity)"""

    groupoid: Groupoid
    base: str
    anchors: Mapping[str, str]
    _vertex_group: Optional[FiniteGroup] = field(default=None, repr=False)

    def __post_init__(self):
        C = self.groupoid
        if set(self.anchors) != set(C.objects):
            raise DescriptorError("A transport frame needs one anchor per object")
        if self.anchors[self.base] != C.identity(self.base):
            raise DescriptorError(f"The anchor at the base {self.base} must be its identity")
        for obj, anchor in self.anchors.items():
            m = C.morphism(anchor)
            if m.src != self.base or m.tgt != obj:
                raise DescriptorError(f"Anchor {anchor} does not go from {self.base} to {obj}")
        object.__setattr__(self, "_vertex_group", endomorphism_group(C, self.base))

    @property
    def Z(self) -> FiniteGroup:
        """End(base)"""
        return self._vertex_group

    def h(self, source: str, target: str) -> str:
        """h_ij: i → j through the base"""
        C = self.groupoid
        return C.compose(self.anchors[target], C.inverse(self.anchors[source]))

    def to_base(self, obj: str) -> str:
        """The inverse anchor e → base"""
        return self.groupoid.inverse(self.anchors[obj])

    def phi(self, source: str, target: str, endomorphism: str) -> str:
        """φ_ij(n) = h_ij · n · h_ij⁻¹ : End(i) → End(j)"""
        C = self.groupoid
        h = self.h(source, target)
        return C.compose(h, C.compose(endomorphism, C.inverse(h)))


def check_cocycle(frame: TransportFrame) -> bool:
    """h_qr·h_pq = h_pr and φ_qr∘φ_pq = φ_pr over all triples"""
    C = frame.groupoid
    for p, q, r in itertools.product(C.objects, repeat=3):
        if C.compose(frame.h(q, r), frame.h(p, q)) != frame.h(p, r):
            return False
        for n in C.hom(p, p):
            if frame.phi(q, r, frame.phi(p, q, n)) != frame.phi(p, r, n):
                return False
    return True


def default_frame(C: Groupoid, base: Optional[str] = None) -> TransportFrame:
    """Anchors along breadth-first shortest paths, earliest morphism first"""
    _require_connected(C)
    base = base or C.objects[0]
    graph = nx.Graph()
    graph.add_nodes_from(C.objects)
    for m in C.morphisms:
        if m.src != m.tgt and not graph.has_edge(m.src, m.tgt):
            graph.add_edge(m.src, m.tgt, morphism=m.id)
    anchors = {base: C.identity(base)}
    order = C.objects.index
    for parent, child in nx.bfs_edges(graph, base, sort_neighbors=lambda nodes: sorted(nodes, key=order)):
        edge = graph.edges[parent, child]["morphism"]
        step = edge if C.src(edge) == parent else C.inverse(edge)
        anchors[child] = C.compose(step, anchors[parent])
    return TransportFrame(groupoid=C, base=base, anchors=anchors)


def from_anchors_to_base(C: Groupoid, base: str, to_base: Mapping[str, str]) -> TransportFrame:
    """Frame from arrows e → base, the one at the base being its identity"""
    return TransportFrame(groupoid=C, base=base, anchors={obj: C.inverse(m) for obj, m in to_base.items()})


def twisted_frame(frame: TransportFrame, seed: int) -> TransportFrame:
    """Same base, each non-base anchor precomposed with a random element of End(base)"""
    C = frame.groupoid
    rng = np.random.default_rng(seed)
    loops = C.hom(frame.base, frame.base)
    anchors = {}
    for obj, anchor in frame.anchors.items():
        anchors[obj] = anchor if obj == frame.base else C.compose(anchor, loops[int(rng.integers(len(loops)))])
    return TransportFrame(groupoid=C, base=frame.base, anchors=anchors)


def decompose(b: Bisection, frame: TransportFrame) -> Tuple[Bisection, Bisection]:
    """(n_part, h_part) with h_part ∘ n_part = b, n_part over the identity permutation"""
    C = b.groupoid
    objects = C.objects
    h_legs = tuple(frame.h(objects[i - 1], objects[b.sigma(i) - 1]) for i in range(1, b.sigma.n + 1))
    n_legs = tuple(C.compose(C.inverse(h), g) for h, g in zip(h_legs, b.legs))
    return Bisection(C, Permutation.identity(b.sigma.n), n_legs), Bisection(C, b.sigma, h_legs)


def wreath_isomorphism(b: Bisection, frame: TransportFrame) -> WreathElement:
    """⟨(φ_{i,base}(n_i)), σ⟩ in End(base) ≀ S_n"""
    n_part, _ = decompose(b, frame)
    objects = b.groupoid.objects
    Z = frame.Z
    vector = tuple(
        Z.by_label(frame.phi(objects[i], frame.base, leg)) for i, leg in enumerate(n_part.legs)
    )
    return WreathElement(vector, b.sigma)


def wreath_isomorphism_map(bis: BisGroup, frame: TransportFrame, W: FiniteGroup) -> np.ndarray:
    """Index in W of the image of every element of Bis(C)"""
    return np.array([W.by_payload(wreath_isomorphism(b, frame)).index for b in bis.elements], dtype=np.int64)


def frame_wreath_group(frame: TransportFrame) -> FiniteGroup:
    return wreath_group(frame.Z, len(frame.groupoid.objects))


def verify_wreath_isomorphism(bis: BisGroup, frame: TransportFrame, W: Optional[FiniteGroup] = None) -> Tuple[bool, bool]:
    """(bijective, homomorphism) for the frame's wreath map"""
    W = W or frame_wreath_group(frame)
    mapping = wreath_isomorphism_map(bis, frame, W)
    bijective = W.order == bis.order and len(np.unique(mapping)) == W.order
    return bijective, is_homomorphism(bis.group, W, mapping)


def verify_frame_independence(
    bis: BisGroup,
    first: TransportFrame,
    second: TransportFrame,
    W1: Optional[FiniteGroup] = None,
    W2: Optional[FiniteGroup] = None,
) -> bool:
    """χ_first ∘ χ_second⁻¹ is an isomorphism between the two wreath products"""
    W1 = W1 or frame_wreath_group(first)
    W2 = W2 or frame_wreath_group(second)
    map1 = wreath_isomorphism_map(bis, first, W1)
    map2 = wreath_isomorphism_map(bis, second, W2)
    if len(np.unique(map1)) != W1.order or len(np.unique(map2)) != W2.order:
        return False
    change = np.empty(W2.order, dtype=np.int64)
    change[map2] = map1
    return is_homomorphism(W2, W1, change)


@dataclass(frozen=True, eq=False)
class GroupoidSetAction:
    """A functor S: C → Sets given by its fibers and the map applied along each morphism"""

    groupoid: Groupoid
    fibers: Mapping[str, Tuple[Hashable, ...]]
    apply: Callable[[str, Hashable], Hashable]

    def points(self) -> List[Tuple[Hashable, str]]:
        """The disjoint union, as (x, object) pairs in object order"""
        return [(x, obj) for obj in self.groupoid.objects for x in self.fibers[obj]]


def representable_action(C: Groupoid, source: Optional[str] = None) -> GroupoidSetAction:
    """Hom(source, −) with postcomposition"""
    source = source or C.objects[0]
    return GroupoidSetAction(
        groupoid=C,
        fibers={obj: C.hom(source, obj) for obj in C.objects},
        apply=lambda m, x: C.compose(m, x),
    )


def act_on_disjoint_union(b: Bisection, S: GroupoidSetAction, point: Tuple[Hashable, str]) -> Tuple[Hashable, str]:
    """(x, i) ↦ (S(b(i))(x), σ(i))"""
    if S.groupoid is not b.groupoid:
        raise CategoryMismatchError("Bisection and set action live over different groupoids")
    x, obj = point
    if obj not in S.fibers or x not in S.fibers[obj]:
        raise FiberError(f"{x!r} is not in the fiber over {obj}")
    leg = b.leg(obj)
    return S.apply(leg, x), b.groupoid.tgt(leg)


def verify_action_axioms(bis: BisGroup, S: GroupoidSetAction) -> bool:
    """Identity fixes every point and (b·b')·p = b·(b'·p), exhaustively"""
    points = S.points()
    index = {p: i for i, p in enumerate(points)}
    perms = np.array(
        [[index[act_on_disjoint_union(b, S, p)] for p in points] for b in bis.elements], dtype=np.int64
    )
    G = bis.group
    if not np.array_equal(perms[G.identity], np.arange(len(points))):
        return False
    composed = perms[np.arange(G.order)[:, None, None], perms[None, :, :]]
    return bool(np.array_equal(perms[G.table], composed))


def internal_automorphism(b: Bisection) -> Functor:
    """ξ(b): g: e → e' ↦ b(e')·g·b(e)⁻¹"""
    C = b.groupoid
    on_morphisms = {
        m.id: C.compose(b.leg(m.tgt), C.compose(m.id, C.inverse(b.leg(m.src)))) for m in C.morphisms
    }
    return Functor(
        name=f"xi{b}",
        source=C,
        target=C,
        on_objects={obj: C.tgt(b.leg(obj)) for obj in C.objects},
        on_morphisms=on_morphisms,
    )


def internal_automorphism_arrays(bis: BisGroup) -> np.ndarray:
    """Row per bisection: positions of ξ(b)(m) for every morphism m"""
    C = bis.groupoid
    return np.array(
        [[C.position(internal_automorphism(b)(m.id)) for m in C.morphisms] for b in bis.elements],
        dtype=np.int64,
    )


def internal_automorphism_report(bis: BisGroup) -> InternalAutomorphismReport:
    perms = internal_automorphism_arrays(bis)
    G = bis.group
    size = perms.shape[1]
    homomorphism = bool(
        np.array_equal(perms[G.table], perms[np.arange(G.order)[:, None, None], perms[None, :, :]])
    )
    kernel = int((perms == np.arange(size)).all(axis=1).sum())
    image = np.unique(perms, axis=0)
    image_rows = {row.tobytes() for row in image}
    composed = image[np.arange(len(image))[:, None, None], image[None, :, :]].reshape(-1, size)
    inverses = np.argsort(image, axis=1)
    image_closed = all(row.tobytes() in image_rows for row in composed) and all(
        row.tobytes() in image_rows for row in inverses
    )
    functorial = all(check_functor(internal_automorphism(b)) for b in bis.elements)
    return InternalAutomorphismReport(
        bisection_order=bis.order,
        kernel_order=kernel,
        image_order=len(image),
        homomorphism=homomorphism and functorial,
        image_closed=image_closed,
        injective=kernel == 1,
        semidirect_claim_holds=len(image) == bis.order,
    )


def trivialize(frame: TransportFrame) -> Functor:
    """g: e → e' ↦ (e, e', h(e')·g·h(e)⁻¹) in objects² × End(base)"""
    C = frame.groupoid
    _require_connected(C)
    Z = frame.Z
    target = pair_groupoid_product(f"Pair({C.name})x{Z.name}", C.objects, Z)
    on_morphisms = {}
    for m in C.morphisms:
        loop = C.compose(frame.to_base(m.tgt), C.compose(m.id, C.inverse(frame.to_base(m.src))))
        on_morphisms[m.id] = f"{m.src}->{m.tgt}:{loop}"
    return Functor(
        name=f"triv_{frame.base}",
        source=C,
        target=target,
        on_objects={obj: obj for obj in C.objects},
        on_morphisms=on_morphisms,
    )


def trivialization_report(frame: TransportFrame) -> TrivializationReport:
    T = trivialize(frame)
    images = set(T.on_morphisms.values())
    bijective = len(images) == len(T.source.morphisms) == len(T.target.morphisms)
    return TrivializationReport(
        groupoid=frame.groupoid.name,
        base=frame.base,
        image_morphisms=len(T.target.morphisms),
        functorial=check_functor(T),
        bijective=bijective,
    )


def verify_trivialization(frame: TransportFrame) -> bool:
    report = trivialization_report(frame)
    return report.functorial and report.bijective


def normal_part(bis: BisGroup) -> List[int]:
    """Indices of the bisections over the identity permutation"""
    return [i for i, b in enumerate(bis.elements) if b.sigma.is_identity()]


def transport_bisection(frame: TransportFrame, sigma: Permutation) -> Bisection:
    """h_σ: the bisection with legs h_{iσ(i)}"""
    C = frame.groupoid
    objects = C.objects
    return Bisection(C, sigma, tuple(frame.h(objects[i - 1], objects[sigma(i) - 1]) for i in range(1, sigma.n + 1)))


def complement_part(bis: BisGroup, frame: TransportFrame) -> List[int]:
    """Indices of the frame transports h_σ, one per permutation"""
    return [bis.index(transport_bisection(frame, sigma)) for sigma in all_permutations(len(bis.groupoid.objects))]


def semidirect_structure(bis: BisGroup, frame: TransportFrame) -> SemidirectReport:
    """Bis(C) = N ⋊ H with N the legwise product of vertex groups and H ≅ S_n"""
    C, G = bis.groupoid, bis.group
    n = len(C.objects)
    z = vertex_group_order(C)
    N = normal_part(bis)
    H = complement_part(bis, frame)
    N_set, H_set = set(N), set(H)

    def closed(subset) -> bool:
        return all(G.mul_index(a, b) in subset for a in subset for b in subset)

    legwise = all(
        bis.elements[G.mul_index(a, b)].legs
        == tuple(C.compose(x, y) for x, y in zip(bis.elements[a].legs, bis.elements[b].legs))
        for a in N
        for b in N
    )
    normal_is_product = closed(N_set) and len(N) == z ** n and legwise
    sigmas = [bis.elements[h].sigma for h in H]
    complement_is_symmetric = (
        closed(H_set)
        and len(H_set) == math.factorial(n)
        and all(
            bis.elements[G.mul_index(a, b)].sigma == bis.elements[a].sigma.compose(bis.elements[b].sigma)
            for a in H
            for b in H
        )
        and len(set(sigmas)) == len(sigmas)
    )
    trivial_intersection = N_set & H_set == {G.identity}
    normal = all(
        G.mul_index(G.mul_index(g, m), G.inv_index(g)) in N_set for g in range(G.order) for m in N
    )

    pairs = set()
    recomposes = True
    for b in bis.elements:
        n_part, h_part = decompose(b, frame)
        pairs.add((bis.index(n_part), bis.index(h_part)))
        recomposes = recomposes and compose_bisections(h_part, n_part) == b
    decomposition_bijective = recomposes and len(pairs) == bis.order

    action_formula = True
    for h in H:
        h_b = bis.elements[h]
        for m in N:
            n_b = bis.elements[m]
            legs = tuple(
                C.compose(C.inverse(h_b.leg(e)), C.compose(n_b.leg(C.tgt(h_b.leg(e))), h_b.leg(e)))
                for e in C.objects
            )
            expected = compose_bisections(compose_bisections(inverse_bisection(h_b), n_b), h_b)
            if legs != expected.legs:
                action_formula = False
                break

    return SemidirectReport(
        order=bis.order,
        normal_order=len(N),
        complement_order=len(H_set),
        normal_is_product=normal_is_product,
        complement_is_symmetric=complement_is_symmetric,
        trivial_intersection=trivial_intersection,
        normal=normal,
        decomposition_bijective=decomposition_bijective,
        action_formula=action_formula,
    )


def verify_bis_group(bis: BisGroup) -> bool:
    C = bis.groupoid
    n = len(C.objects)
    return verify_group_axioms(bis.group) and bis.order == vertex_group_order(C) ** n * math.factorial(n)


def net_action(
    groupoid: Groupoid,
    transformations: Mapping[str, GDeltaMorphism],
    fibers: Mapping[str, Sequence[PKNet]],
) -> GroupoidSetAction:
    """C acting on PK-nets: the fiber over a class is its set of nets, morphisms act by Sη ∘ φ"""
    return GroupoidSetAction(
        groupoid=groupoid,
        fibers={obj: tuple(fibers[obj]) for obj in groupoid.objects},
        apply=lambda m, net: act(transformations[m], net),
    )
