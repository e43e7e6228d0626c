"""
Finite groups stored as explicit multiplication tables.

Products always read as function composition: ``a·b`` means "apply b first,
then a". Element indices follow each group's canonical enumeration.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple
from functools import lru_cache
import itertools
import math
import logging

import numpy as np

from .config import get_settings
from .exceptions import (
    DescriptorError,
    GroupMismatchError,
    MalformedExtensionError,
    ResourceBoundError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupElement:
    """An element of a FiniteGroup, identified by its position in the enumeration"""

    group_id: str
    index: int


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of ``a·b``. Labels and payloads (the domain
    values behind each index, e.g. TIElement or Permutation) are optional.
    The table is not required to satisfy the group axioms at construction;
    ``verify_group_axioms`` decides that.
    """

    name: str
    table: np.ndarray
    identity: int = 0
    labels: Tuple[str, ...] = ()
    payloads: Tuple[Hashable, ...] = ()
    _label_index: Dict[str, int] = field(default_factory=dict, repr=False)
    _payload_index: Dict[Hashable, int] = field(default_factory=dict, repr=False)
    _inverses: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
            raise DescriptorError(f"Group {self.name}: multiplication table must be a non-empty square array")
        order = table.shape[0]
        cap = get_settings().GROUP_ORDER_CAP
        if order > cap:
            raise ResourceBoundError(f"Group {self.name} has order {order}, above the cap {cap}")
        if table.min() < 0 or table.max() >= order:
            raise DescriptorError(f"Group {self.name}: table entries must lie in 0..{order - 1}")
        if not 0 <= self.identity < order:
            raise DescriptorError(f"Group {self.name}: identity index {self.identity} out of range")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(order))
        if len(labels) != order or len(set(labels)) != order:
            raise DescriptorError(f"Group {self.name}: labels must be {order} distinct strings")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_label_index", {label: i for i, label in enumerate(labels)})

        if self.payloads:
            if len(self.payloads) != order:
                raise DescriptorError(f"Group {self.name}: expected {order} payloads")
            object.__setattr__(self, "payloads", tuple(self.payloads))
            object.__setattr__(self, "_payload_index", {p: i for i, p in enumerate(self.payloads)})

        # -1 marks a row without a two-sided inverse
        inverses = np.full(order, -1, dtype=np.int64)
        for a in range(order):
            candidates = np.nonzero(table[a] == self.identity)[0]
            for b in candidates:
                if table[b, a] == self.identity:
                    inverses[a] = b
                    break
        inverses.setflags(write=False)
        object.__setattr__(self, "_inverses", inverses)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    # Index-level arithmetic, used by the enumeration-heavy services

    def mul_index(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv_index(self, a: int) -> int:
        inverse = int(self._inverses[a])
        if inverse < 0:
            raise DescriptorError(f"Element {self.labels[a]} of {self.name} has no inverse")
        return inverse

    @property
    def inverse_array(self) -> np.ndarray:
        return self._inverses

    # Element-level API

    def element(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise DescriptorError(f"Index {index} is not an element of {self.name}")
        return GroupElement(self.name, int(index))

    def elements(self) -> List[GroupElement]:
        return [GroupElement(self.name, i) for i in range(self.order)]

    def identity_element(self) -> GroupElement:
        return GroupElement(self.name, self.identity)

    def own(self, x: GroupElement) -> int:
        """Index of x, refusing elements of another group"""
        if x.group_id != self.name:
            raise GroupMismatchError(f"Element of {x.group_id} used in group {self.name}")
        return x.index

    def mul(self, *factors: GroupElement) -> GroupElement:
        """Product of the factors, rightmost applied first"""
        result = self.identity
        for x in reversed(factors):
            result = int(self.table[self.own(x), result])
        return GroupElement(self.name, result)

    def inv(self, x: GroupElement) -> GroupElement:
        return GroupElement(self.name, self.inv_index(self.own(x)))

    def power(self, x: GroupElement, exponent: int) -> GroupElement:
        base = self.own(x) if exponent >= 0 else self.inv_index(self.own(x))
        result = self.identity
        for _ in range(abs(exponent)):
            result = int(self.table[base, result])
        return GroupElement(self.name, result)

    def element_order(self, index: int) -> int:
        current, steps = index, 1
        while current != self.identity:
            current = int(self.table[index, current])
            steps += 1
            if steps > self.order:
                raise DescriptorError(f"Element {self.labels[index]} of {self.name} has no finite order")
        return steps

    def label(self, x: GroupElement) -> str:
        return self.labels[self.own(x)]

    def by_label(self, label: str) -> GroupElement:
        try:
            return GroupElement(self.name, self._label_index[label])
        except KeyError:
            raise DescriptorError(f"Group {self.name} has no element labelled {label!r}") from None

    def payload(self, x: GroupElement) -> Any:
        if not self.payloads:
            return self.own(x)
        return self.payloads[self.own(x)]

    def by_payload(self, payload: Hashable) -> GroupElement:
        try:
            return GroupElement(self.name, self._payload_index[payload])
        except KeyError:
            raise DescriptorError(f"Group {self.name} has no element {payload!r}") from None

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def verify_group_axioms(group: FiniteGroup) -> bool:
    """Check identity, inverses and associativity of the table"""
    settings = get_settings()
    table, e, order = group.table, group.identity, group.order
    arange = np.arange(order)

    if not (np.array_equal(table[e], arange) and np.array_equal(table[:, e], arange)):
        logger.debug(f"{group.name}: identity is not two-sided")
        return False
    if (group.inverse_array < 0).any():
        logger.debug(f"{group.name}: some element has no two-sided inverse")
        return False

    if order <= settings.ASSOCIATIVITY_EXHAUSTIVE_LIMIT:
        for a in range(order):
            # [(a·b)·c] and [a·(b·c)] indexed by (b, c)
            if not np.array_equal(table[table[a]], table[a][table]):
                logger.debug(f"{group.name}: associativity fails with left factor {group.labels[a]}")
                return False
        return True

    logger.warning(
        f"{group.name}: order {order} above exhaustive limit, "
        f"sampling {settings.ASSOCIATIVITY_SAMPLE_SIZE} triples"
    )
    rng = np.random.default_rng(settings.DEFAULT_SEED)
    a, b, c = rng.integers(0, order, size=(3, settings.ASSOCIATIVITY_SAMPLE_SIZE))
    return bool(np.array_equal(table[table[a, b], c], table[a, table[b, c]]))


def group_defect(group: FiniteGroup) -> Optional[str]:
    """First violated group axiom with the offending labels; None for a group"""
    table, e, labels = group.table, group.identity, group.labels
    for a in range(group.order):
        if table[e, a] != a or table[a, e] != a:
            return f"{labels[e]} is not a two-sided identity at {labels[a]}"
        if group.inverse_array[a] < 0:
            return f"{labels[a]} has no two-sided inverse"
    for a in range(group.order):
        mismatch = np.argwhere(table[table[a]] != table[a][table])
        if len(mismatch):
            b, c = (int(i) for i in mismatch[0])
            return f"({labels[a]}·{labels[b]})·{labels[c]} differs from {labels[a]}·({labels[b]}·{labels[c]})"
    return None


def group_from_payloads(
    name: str,
    payloads: Sequence[Hashable],
    multiply,
    label=str,
) -> FiniteGroup:
    """Tabulate a group from an enumeration of its elements and a product function"""
    order = len(payloads)
    cap = get_settings().GROUP_ORDER_CAP
    if order > cap:
        raise ResourceBoundError(f"Group {name} would have order {order}, above the cap {cap}")
    index = {p: i for i, p in enumerate(payloads)}
    table = np.empty((order, order), dtype=np.int64)
    for i, x in enumerate(payloads):
        for j, y in enumerate(payloads):
            table[i, j] = index[multiply(x, y)]
    identity = next(i for i in range(order) if all(table[i, j] == j for j in range(order)))
    return FiniteGroup(
        name=name,
        table=table,
        identity=identity,
        labels=tuple(label(p) for p in payloads),
        payloads=tuple(payloads),
    )


@lru_cache(maxsize=None)
def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with elements 0..n-1 under addition"""
    if n < 1:
        raise DescriptorError("Cyclic group order must be positive")
    residues = np.arange(n)
    table = (residues[:, None] + residues[None, :]) % n
    return FiniteGroup(
        name=f"Z{n}",
        table=table,
        identity=0,
        labels=tuple(str(i) for i in range(n)),
        payloads=tuple(range(n)),
    )


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n} in one-line notation: images[i-1] = σ(i)"""

    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise DescriptorError(f"{list(images)} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self ∘ other (other first)"""
        if other.n != self.n:
            raise GroupMismatchError(f"Cannot compose permutations of degree {self.n} and {other.n}")
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inverse = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            inverse[image - 1] = i
        return Permutation(tuple(inverse))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def __str__(self) -> str:
        return "[" + " ".join(str(i) for i in self.images) + "]"


def all_permutations(n: int) -> List[Permutation]:
    """S_n in lexicographic order of one-line notation (identity first)"""
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> FiniteGroup:
    if n < 1:
        raise DescriptorError("Symmetric group degree must be positive")
    group = group_from_payloads(f"S{n}", all_permutations(n), Permutation.compose)
    logger.debug(f"Built S{n} of order {group.order}")
    return group


@dataclass(frozen=True)
class TIElement:
    """T_n (sign 0) or I_n (sign 1) acting on pitch classes mod 12"""

    shift: int
    sign: int

    def __post_init__(self):
        object.__setattr__(self, "shift", self.shift % 12)
        object.__setattr__(self, "sign", self.sign % 2)

    def __mul__(self, other: "TIElement") -> "TIElement":
        step = other.shift if self.sign == 0 else -other.shift
        return TIElement(self.shift + step, self.sign + other.sign)

    def __call__(self, pitch: int) -> int:
        return (self.shift + pitch) % 12 if self.sign == 0 else (self.shift - pitch) % 12

    @property
    def label(self) -> str:
        return f"{'TI'[self.sign]}{self.shift}"

    def __str__(self) -> str:
        return self.label


def ti_elements() -> List[TIElement]:
    """T0..T11 then I0..I11"""
    return [TIElement(shift, sign) for sign in (0, 1) for shift in range(12)]


@lru_cache(maxsize=None)
def ti_group() -> FiniteGroup:
    """The T/I group of order 24 acting on the twelve pitch classes"""
    return group_from_payloads("TI", ti_elements(), TIElement.__mul__, label=lambda x: x.label)


@dataclass(frozen=True)
class WreathElement:
    """⟨(m_1..m_n), σ⟩ in Z ≀ S_n"""

    vector: Tuple[GroupElement, ...]
    sigma: Permutation

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(self.vector))
        if len(self.vector) != self.sigma.n:
            raise DescriptorError("Wreath vector length must equal the permutation degree")


def wreath_multiply(Z: FiniteGroup, left: WreathElement, right: WreathElement) -> WreathElement:
    """⟨(m_i),τ⟩·⟨(n_i),σ⟩ = ⟨(m_{σ(i)}·n_i), τσ⟩"""
    m, tau = left.vector, left.sigma
    n, sigma = right.vector, right.sigma
    vector = tuple(Z.mul(m[sigma(i) - 1], n[i - 1]) for i in range(1, sigma.n + 1))
    return WreathElement(vector, tau.compose(sigma))


def wreath_label(Z: FiniteGroup, x: WreathElement) -> str:
    return "<(" + ",".join(Z.label(z) for z in x.vector) + f"),{x.sigma}>"


def wreath_group(Z: FiniteGroup, n: int) -> FiniteGroup:
    """Z ≀ S_n, enumerated permutation-major then vector in Z's order"""
    if n < 1:
        raise DescriptorError("Wreath product degree must be positive")
    order = Z.order ** n * math.factorial(n)
    cap = get_settings().GROUP_ORDER_CAP
    if order > cap:
        raise ResourceBoundError(f"{Z.name} wr S{n} exceeds the group order cap {cap}")
    payloads = [
        WreathElement(tuple(vector), sigma)
        for sigma in all_permutations(n)
        for vector in itertools.product(Z.elements(), repeat=n)
    ]
    group = group_from_payloads(
        f"{Z.name}wrS{n}",
        payloads,
        lambda x, y: wreath_multiply(Z, x, y),
        label=lambda x: wreath_label(Z, x),
    )
    logger.info(f"Built {group.name} of order {group.order}")
    return group


def coordinate_action(Z: FiniteGroup, x: WreathElement) -> np.ndarray:
    """Permutation of the n·|Z| points (i, z) given by ⟨m,τ⟩·(i, z) = (τ(i), m_i·z)"""
    n = x.sigma.n
    images = np.empty(n * Z.order, dtype=np.int64)
    for i in range(1, n + 1):
        m_i = Z.own(x.vector[i - 1])
        for z in range(Z.order):
            images[(i - 1) * Z.order + z] = (x.sigma(i) - 1) * Z.order + Z.mul_index(m_i, z)
    return images


def verify_wreath_multiplication(W: FiniteGroup, Z: FiniteGroup) -> bool:
    """Compare the wreath table with composition in the faithful coordinate action"""
    actions = np.stack([coordinate_action(Z, x) for x in W.payloads])
    composed = actions[np.arange(W.order)[:, None, None], actions[None, :, :]]
    return bool(np.array_equal(actions[W.table], composed))


def generated_subgroup(group: FiniteGroup, generators: Iterable[int]) -> frozenset:
    generators = list(generators)
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = int(group.table[g, x])
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def generating_set(group: FiniteGroup) -> List[int]:
    """Greedy generating set in enumeration order"""
    generators: List[int] = []
    span = frozenset({group.identity})
    for x in range(group.order):
        if x not in span:
            generators.append(x)
            span = generated_subgroup(group, generators)
        if len(span) == group.order:
            break
    return generators


def left_coset(group: FiniteGroup, g: int, subgroup: Iterable[int]) -> frozenset:
    return frozenset(int(group.table[g, s]) for s in subgroup)


def is_homomorphism(source: FiniteGroup, target: FiniteGroup, mapping: np.ndarray) -> bool:
    mapping = np.asarray(mapping)
    return bool(np.array_equal(target.table[mapping[:, None], mapping[None, :]], mapping[source.table]))


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[np.ndarray]:
    """Brute-force isomorphism search through images of a generating set"""
    if G.order != H.order:
        return None
    generators = generating_set(G)
    h_orders = [H.element_order(h) for h in range(H.order)]
    candidates = [[h for h in range(H.order) if h_orders[h] == G.element_order(g)] for g in generators]

    for images in itertools.product(*candidates):
        mapping = _extend_to_homomorphism(G, H, generators, images)
        if mapping is None:
            continue
        if len(set(mapping.tolist())) == G.order and is_homomorphism(G, H, mapping):
            return mapping
    return None


def _extend_to_homomorphism(G, H, generators, images) -> Optional[np.ndarray]:
    mapping = np.full(G.order, -1, dtype=np.int64)
    mapping[G.identity] = H.identity
    frontier = [G.identity]
    while frontier:
        x = frontier.pop()
        for g, image in zip(generators, images):
            y = int(G.table[g, x])
            value = int(H.table[image, mapping[x]])
            if mapping[y] < 0:
                mapping[y] = value
                frontier.append(y)
            elif mapping[y] != value:
                return None
    return mapping if (mapping >= 0).all() else None


@dataclass(frozen=True, eq=False)
class GroupExtension:
    """1 → Z → G → H → 1 with a set-theoretic section of the projection.

    inject, project and section are index maps; every g decomposes uniquely
    as g = section(h)·inject(z).
    """

    Z: FiniteGroup
    G: FiniteGroup
    H: FiniteGroup
    inject: Tuple[int, ...]
    project: Tuple[int, ...]
    section: Tuple[int, ...]
    _decomposition: Dict[int, Tuple[int, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        Z, G, H = self.Z, self.G, self.H
        inject = np.asarray(self.inject, dtype=np.int64)
        project = np.asarray(self.project, dtype=np.int64)
        section = np.asarray(self.section, dtype=np.int64)
        if inject.shape != (Z.order,) or project.shape != (G.order,) or section.shape != (H.order,):
            raise MalformedExtensionError("Extension maps have the wrong lengths")
        if not is_homomorphism(Z, G, inject) or len(set(inject.tolist())) != Z.order:
            raise MalformedExtensionError("inject is not a monomorphism Z → G")
        if not is_homomorphism(G, H, project) or len(set(project.tolist())) != H.order:
            raise MalformedExtensionError("project is not an epimorphism G → H")
        kernel = {g for g in range(G.order) if project[g] == H.identity}
        if kernel != set(inject.tolist()):
            raise MalformedExtensionError(
                "Image of inject differs from the kernel of project",
                witness=sorted(kernel.symmetric_difference(inject.tolist())),
            )
        if not np.array_equal(project[section], np.arange(H.order)):
            raise MalformedExtensionError("section is not a right inverse of project")

        z_of = {int(g): z for z, g in enumerate(inject.tolist())}
        decomposition = {}
        for g in range(G.order):
            h = int(project[g])
            core = G.mul_index(G.inv_index(int(section[h])), g)
            decomposition[g] = (z_of[core], h)
        object.__setattr__(self, "_decomposition", decomposition)

    def recompose(self, z: GroupElement, h: GroupElement) -> GroupElement:
        s = self.section[self.H.own(h)]
        return self.G.element(self.G.mul_index(s, self.inject[self.Z.own(z)]))

    @property
    def kernel(self) -> frozenset:
        return frozenset(int(g) for g in self.inject)


def extension_decompose(E: GroupExtension, g: GroupElement) -> Tuple[GroupElement, GroupElement]:
    """(z, h) with section(h)·inject(z) = g"""
    z, h = E._decomposition[E.G.own(g)]
    return E.Z.element(z), E.H.element(h)


def ti_extension(G: Optional[FiniteGroup] = None) -> GroupExtension:
    """1 → Z12 → T/I → Z2 → 1 with section T0, I0"""
    G = G or ti_group()
    Z, H = cyclic_group(12), cyclic_group(2)
    inject = tuple(G.by_payload(TIElement(z, 0)).index for z in range(12))
    project = tuple(x.sign for x in G.payloads)
    section = (G.by_payload(TIElement(0, 0)).index, G.by_payload(TIElement(0, 1)).index)
    return GroupExtension(Z=Z, G=G, H=H, inject=inject, project=project, section=section)
