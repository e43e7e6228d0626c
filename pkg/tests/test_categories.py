import pytest

from pkgroupoids.core.categories import (
    FinCategory,
    Functor,
    Morphism,
    NaturalTransformation,
    build_delta3,
    build_gamma,
    build_groupoid,
    build_point,
    category_defect,
    check_category,
    check_functor,
    check_groupoid,
    check_gset,
    check_natural,
    compose_functors,
    endomorphism_group,
    group_category,
    identity_functor,
    pair_groupoid_product,
    pitch_class_gset,
    poset_category,
    pullback_category,
    random_connected_groupoid,
    triad_gset,
)
from pkgroupoids.core.exceptions import CategoryMismatchError, DegenerateCategoryError, DescriptorError
from pkgroupoids.core.groups import cyclic_group, ti_group, verify_group_axioms


def test_gamma_and_delta3():
    gamma, delta3 = build_gamma(), build_delta3()
    assert len(gamma.morphisms) == 5
    assert len(delta3.morphisms) == 6
    assert gamma.bottom == "X" and delta3.bottom == "X"
    assert delta3.compose("g", "f") == "g∘f"
    assert delta3.arrow("X", "Z") == "g∘f"
    assert gamma.hom("Y", "Z") == ()
    assert check_category(gamma) and check_category(delta3)
    assert category_defect(delta3) is None


def test_composition_requires_matching_endpoints():
    with pytest.raises(CategoryMismatchError):
        build_gamma().compose("g", "f")


def test_poset_with_cycle_is_rejected():
    with pytest.raises(DescriptorError):
        poset_category("Cycle", ["a", "b"], [("f", "a", "b"), ("g", "b", "a")])


def test_category_needs_objects():
    with pytest.raises(DegenerateCategoryError):
        FinCategory(name="Empty", objects=(), morphisms=(), composition={}, identities={})


def test_missing_composite_is_located():
    loop = FinCategory(
        name="Loop",
        objects=("a",),
        morphisms=(Morphism("id_a", "a", "a"), Morphism("x", "a", "a")),
        composition={("id_a", "id_a"): "id_a", ("id_a", "x"): "x", ("x", "id_a"): "x"},
        identities={"a": "id_a"},
    )
    assert not check_category(loop)
    assert category_defect(loop) == "x ∘ x is missing"


def test_pair_groupoid_product():
    C = pair_groupoid_product("P", ["a", "b"], cyclic_group(3))
    assert len(C.morphisms) == 12
    assert C.is_connected
    assert check_groupoid(C)
    assert C.compose("b->a:1", "a->b:1") == "a->a:2"
    assert C.inverse("a->b:1") == "b->a:2"
    End = endomorphism_group(C, "a")
    assert End.order == 3 and verify_group_axioms(End)


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_random_groupoids_are_groupoids(seed):
    C = random_connected_groupoid(cyclic_group(3), 2, seed)
    assert len(C.morphisms) == 12
    assert check_groupoid(C)
    assert C.is_connected


def test_disconnected_groupoid_components():
    C = build_groupoid(
        "Two",
        ["a", "b"],
        [Morphism("id_a", "a", "a"), Morphism("id_b", "b", "b")],
        {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b"},
        {"a": "id_a", "b": "id_b"},
    )
    assert C.components == (("a",), ("b",))
    assert not C.is_connected


def test_non_invertible_morphism_is_rejected():
    with pytest.raises(DescriptorError):
        build_groupoid(
            "Arrow",
            ["a", "b"],
            [Morphism("id_a", "a", "a"), Morphism("id_b", "b", "b"), Morphism("f", "a", "b")],
            {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b", ("f", "id_a"): "f", ("id_b", "f"): "f"},
            {"a": "id_a", "b": "id_b"},
        )


def test_group_category():
    C = group_category(ti_group())
    assert C.objects == ("*",)
    assert C.identity("*") == "T0"
    assert C.compose("T2", "I0") == "I2"
    assert check_groupoid(C)


def test_functor_composition_and_naturality():
    delta3 = build_delta3()
    identity = identity_functor(delta3)
    assert check_functor(identity)
    assert check_functor(compose_functors(identity, identity))
    eta = NaturalTransformation(identity, identity, {obj: delta3.identity(obj) for obj in delta3.objects})
    assert check_natural(eta)


def test_functor_breaking_composites_is_detected():
    delta3 = build_delta3()
    target = group_category(ti_group())
    F = Functor(
        name="Broken",
        source=delta3,
        target=target,
        on_objects={obj: "*" for obj in delta3.objects},
        on_morphisms={"id_X": "T0", "id_Y": "T0", "id_Z": "T0", "f": "T1", "g": "T1", "g∘f": "T5"},
    )
    assert not check_functor(F)


def test_pitch_class_and_triad_actions():
    TI = ti_group()
    assert check_gset(pitch_class_gset())
    triads = triad_gset()
    assert check_gset(triads)
    assert triads.act(TI.by_label("T2"), "C") == "D"
    assert triads.act(TI.by_label("I0"), "C") == "Fm"


def test_pullback_keeps_pairs_when_ids_contain_commas():
    C = poset_category("Discrete", ["a,b", "a", "b,a"], [])
    point = build_point()
    P = Functor(
        name="P",
        source=C,
        target=point,
        on_objects={obj: "X" for obj in C.objects},
        on_morphisms={m.id: "id_X" for m in C.morphisms},
    )
    pullback = pullback_category(P, P)
    # ("a,b", "a") and ("a", "b,a") both print as (a,b,a)
    assert len(pullback.objects) == 9
    assert set(pullback.object_pairs.values()) == {(x, y) for x in C.objects for y in C.objects}
    assert all(
        pullback.morphism_pairs[pullback.identity(name)] == (C.identity(x), C.identity(y))
        for name, (x, y) in pullback.object_pairs.items()
    )
    assert check_category(pullback)
