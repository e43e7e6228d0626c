"""
PK-nets (R, S, F, φ): a set-valued form R over Δ, a context G-set S, a chord
class F and a natural transformation φ: R → S∘F.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from ..core.categories import FinCategory, GSet, pitch_class_gset
from ..core.config import get_settings
from ..core.exceptions import (
    ClassMismatchError,
    DescriptorError,
    ResourceBoundError,
    StructuralMismatchError,
)
from .functor_groupoid import (
    ChordClass,
    GDeltaMorphism,
    compose,
    homset,
    identity_morphism,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SetValuedDiagram:
    """A functor Δ → Sets. ``maps[m][r]`` is the image of r ∈ R(src m) in R(tgt m)."""

    name: str
    delta: FinCategory
    sets: Mapping[str, Tuple[Hashable, ...]]
    maps: Mapping[str, Mapping[Hashable, Hashable]]

    def elements(self, obj: str) -> Tuple[Hashable, ...]:
        return self.sets[obj]

    def slots(self) -> List[Tuple[str, Hashable]]:
        """(object, element) pairs in Δ's object order"""
        return [(obj, r) for obj in self.delta.objects for r in self.sets[obj]]


def check_diagram(R: SetValuedDiagram) -> bool:
    delta = R.delta
    if set(R.sets) != set(delta.objects) or any(not R.sets[obj] for obj in delta.objects):
        return False
    for m in delta.morphisms:
        mapping = R.maps.get(m.id)
        if mapping is None or set(mapping) != set(R.sets[m.src]):
            return False
        if any(image not in R.sets[m.tgt] for image in mapping.values()):
            return False
    for obj in delta.objects:
        if any(R.maps[delta.identity(obj)][r] != r for r in R.sets[obj]):
            return False
    for m2, m1 in delta.composable_pairs():
        composite = R.maps[delta.compose(m2, m1)]
        if any(composite[r] != R.maps[m2][R.maps[m1][r]] for r in R.sets[delta.src(m1)]):
            return False
    return True


@lru_cache(maxsize=None)
def singleton_diagram(delta: FinCategory) -> SetValuedDiagram:
    """The terminal form: one point over every object"""
    return SetValuedDiagram(
        name=f"1_{delta.name}",
        delta=delta,
        sets={obj: ("*",) for obj in delta.objects},
        maps={m.id: {"*": "*"} for m in delta.morphisms},
    )


@lru_cache(maxsize=None)
def representable_diagram(delta: FinCategory, obj: str) -> SetValuedDiagram:
    """Hom(obj, −): R(X) is the set of arrows obj → X, acted on by postcomposition"""
    return SetValuedDiagram(
        name=f"Hom({obj},-)",
        delta=delta,
        sets={x: delta.hom(obj, x) for x in delta.objects},
        maps={m.id: {r: delta.compose(m.id, r) for r in delta.hom(obj, m.src)} for m in delta.morphisms},
    )


@dataclass(frozen=True, eq=False)
class PKNet:
    """``phi[i][j]`` is the point of S assigned to the j-th element of R at the i-th object of Δ"""

    R: SetValuedDiagram
    S: GSet
    F: ChordClass
    phi: Tuple[Tuple[Hashable, ...], ...]

    @property
    def delta(self) -> FinCategory:
        return self.F.delta

    def component(self, obj: str) -> Dict[Hashable, Hashable]:
        i = self.delta.objects.index(obj)
        return dict(zip(self.R.sets[obj], self.phi[i]))

    def points(self) -> Tuple[Hashable, ...]:
        """One point per object; only meaningful for singleton forms"""
        return tuple(values[0] for values in self.phi)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PKNet)
            and other.F == self.F
            and other.phi == self.phi
            and other.R is self.R
            and other.S is self.S
        )

    def __hash__(self) -> int:
        return hash((self.F.name, self.phi))

    def __repr__(self) -> str:
        return f"PKNet({self.F.name}, {self.phi})"


def _check_structure(net: PKNet):
    R, S, F = net.R, net.S, net.F
    if R.delta is not F.delta:
        raise StructuralMismatchError(f"Form {R.name} and class {F.name} live over different shapes")
    if S.group is not F.group:
        raise StructuralMismatchError(f"Context {S.name} is acted on by {S.group.name}, not {F.group.name}")
    if len(net.phi) != len(F.delta.objects):
        raise StructuralMismatchError(f"φ has {len(net.phi)} components for {len(F.delta.objects)} objects")
    for obj, values in zip(F.delta.objects, net.phi):
        if len(values) != len(R.sets[obj]):
            raise StructuralMismatchError(f"φ at {obj} has {len(values)} values for {len(R.sets[obj])} elements")
        for point in values:
            S.point_index(point)


def validate_pknet(net: PKNet) -> bool:
    """φ_Y ∘ R(m) = S(F(m)) ∘ φ_X for every m: X → Y.

    Structural problems raise StructuralMismatchError; a failed square returns False.
    """
    _check_structure(net)
    R, S, F = net.R, net.S, net.F
    for m in F.delta.morphisms:
        source, target = net.component(m.src), net.component(m.tgt)
        g = F.element(m.id)
        for r, point in source.items():
            expected = S.carrier[S.act_table[g, S.point_index(point)]]
            if target[R.maps[m.id][r]] != expected:
                logger.debug(f"Naturality fails for {F.name} along {m.id} at {r!r}")
                return False
    return True


def enumerate_nets(R: SetValuedDiagram, S: GSet, F: ChordClass) -> List[PKNet]:
    """Every φ making (R, S, F, φ) a PK-net, by backtracking with naturality pruning"""
    if R.delta is not F.delta or S.group is not F.group:
        raise StructuralMismatchError(f"Form, context and class {F.name} do not match")
    bound = get_settings().NET_SEARCH_BOUND
    slots = R.slots()
    slot_index = {slot: i for i, slot in enumerate(slots)}

    # value[target] must equal act[g, value[source]]
    constraints: List[List[Tuple[int, int, int]]] = [[] for _ in slots]
    for m in F.delta.morphisms:
        g = F.element(m.id)
        for r in R.sets[m.src]:
            source = slot_index[(m.src, r)]
            target = slot_index[(m.tgt, R.maps[m.id][r])]
            constraints[max(source, target)].append((source, target, g))

    values = np.zeros(len(slots), dtype=np.int64)
    results: List[Tuple[int, ...]] = []
    nodes = 0

    def extend(depth: int):
        nonlocal nodes
        if depth == len(slots):
            results.append(tuple(int(v) for v in values))
            return
        for point in range(len(S.carrier)):
            nodes += 1
            if nodes > bound:
                raise ResourceBoundError(f"Net enumeration for {F.name} exceeded {bound} nodes")
            values[depth] = point
            if all(values[t] == S.act_table[g, values[s]] for s, t, g in constraints[depth]):
                extend(depth + 1)

    extend(0)
    nets = [_net_from_values(R, S, F, result) for result in results]
    logger.debug(f"N_{F.name} has {len(nets)} elements ({nodes} search nodes)")
    return nets


def _net_from_values(R: SetValuedDiagram, S: GSet, F: ChordClass, values: Sequence[int]) -> PKNet:
    phi, k = [], 0
    for obj in F.delta.objects:
        size = len(R.sets[obj])
        phi.append(tuple(S.carrier[v] for v in values[k:k + size]))
        k += size
    return PKNet(R=R, S=S, F=F, phi=tuple(phi))


def act(eta: GDeltaMorphism, net: PKNet) -> PKNet:
    """Sη ∘ φ: move a net of N_F to N_F' along η: F → F'"""
    if net.F != eta.source or net.delta is not eta.delta:
        raise ClassMismatchError(f"{eta.id} does not start at class {net.F.name}")
    S = net.S
    phi = tuple(
        tuple(S.carrier[S.act_table[component, S.point_index(point)]] for point in values)
        for component, values in zip(eta.components, net.phi)
    )
    return PKNet(R=net.R, S=S, F=eta.target, phi=phi)


def solve_transport(a: PKNet, b: PKNet) -> List[GDeltaMorphism]:
    """All η ∈ Hom(a.F, b.F) carrying a to b"""
    if a.R is not b.R or a.S is not b.S:
        raise StructuralMismatchError("Transport needs nets sharing form and context")
    return [eta for eta in homset(a.F, b.F) if act(eta, a) == b]


def check_net_functor_laws(
    classes: Sequence[ChordClass],
    R: SetValuedDiagram,
    S: GSet,
    compose_fn: Callable[[GDeltaMorphism, GDeltaMorphism], GDeltaMorphism] = compose,
) -> bool:
    """Identities act trivially and act(η2∘η1) = act(η2)∘act(η1) on every net of every class"""
    nets = {F.name: enumerate_nets(R, S, F) for F in classes}
    position = {F.name: {net: i for i, net in enumerate(nets[F.name])} for F in classes}

    def permutation(eta: GDeltaMorphism) -> Optional[np.ndarray]:
        targets = position[eta.target.name]
        images = [targets.get(act(eta, net), -1) for net in nets[eta.source.name]]
        return None if -1 in images else np.array(images, dtype=np.int64)

    hom = {(F.name, F2.name): homset(F, F2) for F in classes for F2 in classes}
    arrays = {}
    for etas in hom.values():
        for eta in etas:
            array = permutation(eta)
            if array is None:
                logger.debug(f"{eta.id} sends a net outside N_{eta.target.name}")
                return False
            arrays[eta] = array

    for F in classes:
        if not np.array_equal(arrays[identity_morphism(F)], np.arange(len(nets[F.name]))):
            return False
    for F1 in classes:
        for F2 in classes:
            for F3 in classes:
                for eta1 in hom[(F1.name, F2.name)]:
                    for eta2 in hom[(F2.name, F3.name)]:
                        composite = compose_fn(eta2, eta1)
                        composite_array = arrays.get(composite)
                        if composite_array is None:
                            composite_array = permutation(composite)
                        if composite_array is None or not np.array_equal(composite_array, arrays[eta2][arrays[eta1]]):
                            logger.debug(f"Functor law fails for {eta2.id} ∘ {eta1.id}")
                            return False
    return True


def pknet_from_pitches(
    F: ChordClass,
    pitches: Union[Mapping[str, Hashable], Sequence[Hashable]],
    S: Optional[GSet] = None,
) -> PKNet:
    """A net with singleton form, one pitch per object of Δ (mapping or Δ-ordered sequence)"""
    S = S or pitch_class_gset()
    objects = F.delta.objects
    if isinstance(pitches, Mapping):
        missing = set(objects) - set(pitches)
        if missing:
            raise DescriptorError(f"No pitch given for {sorted(missing)}")
        values = [pitches[obj] for obj in objects]
    else:
        values = list(pitches)
        if len(values) != len(objects):
            raise DescriptorError(f"Expected {len(objects)} pitches, got {len(values)}")
    return PKNet(R=singleton_diagram(F.delta), S=S, F=F, phi=tuple((value,) for value in values))
