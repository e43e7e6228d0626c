import pytest

from pkgroupoids.core.categories import build_delta3, build_gamma, check_groupoid, check_natural
from pkgroupoids.core.config import configure_settings
from pkgroupoids.core.exceptions import (
    CategoryMismatchError,
    ClassMismatchError,
    DescriptorError,
    ResourceBoundError,
)
from pkgroupoids.core.groups import cyclic_group, ti_group
from pkgroupoids.services.functor_groupoid import (
    chord_class,
    compose,
    find_morphism,
    homset,
    homset_brute_force,
    homset_general,
    identity_morphism,
    inverse,
    is_natural,
    materialize_groupoid,
    natural_transformation,
)


def labels(eta):
    return tuple(eta.group.labels[c] for c in eta.components)


def test_chord_class_derives_composites():
    F = chord_class("F", build_delta3(), ti_group(), {"f": "I8", "g": "I9"})
    # I9·I8 = T1
    assert F.functor("g∘f") == "T1"
    assert F.functor("id_Y") == "T0"
    assert F.assignments() == {"f": "I8", "g": "I9", "g∘f": "T1"}


def test_inconsistent_assignments_are_rejected():
    with pytest.raises(DescriptorError):
        chord_class("Bad", build_delta3(), ti_group(), {"f": "T1", "g": "T1", "g∘f": "T5"})


def test_classes_compare_by_name():
    a = chord_class("A", build_gamma(), ti_group(), {"f": "T4", "g": "T7"})
    b = chord_class("A", build_gamma(), ti_group(), {"f": "T2", "g": "T5"})
    assert a == b
    assert hash(a) == hash(b)


@pytest.mark.parametrize("p", range(12))
def test_major_homsets_follow_closed_formulas(major, p):
    U, V = major
    assert labels(find_morphism(U, U, f"T{p}")) == (f"T{p}", f"T{p}", f"T{p}")
    assert labels(find_morphism(U, U, f"I{p}")) == (f"I{p}", f"I{(p + 8) % 12}", f"I{(p + 2) % 12}")
    assert labels(find_morphism(U, V, f"T{p}")) == (f"T{p}", f"T{(p + 10) % 12}", f"T{(p + 10) % 12}")
    assert labels(find_morphism(U, V, f"I{p}")) == (f"I{p}", f"I{(p + 6) % 12}", f"I{p}")


@pytest.mark.parametrize("p", range(12))
def test_berg_homset_follows_closed_formula(berg, p):
    U, V = berg["U"], berg["V"]
    assert labels(find_morphism(U, V, f"T{p}")) == (f"T{p}", f"T{(1 - p) % 12}", f"T{-p % 12}")
    assert labels(find_morphism(U, V, f"I{p}")) == (f"I{p}", f"I{(7 - p) % 12}", f"I{(8 - p) % 12}")


def test_three_homset_algorithms_agree(berg):
    for F in berg.values():
        for F2 in berg.values():
            fast = sorted(eta.components for eta in homset(F, F2))
            assert len(fast) == 24
            assert fast == sorted(eta.components for eta in homset_general(F, F2))
            assert fast == sorted(eta.components for eta in homset_brute_force(F, F2))


def test_brute_force_respects_bound(major):
    configure_settings(HOMSET_BRUTE_FORCE_LIMIT=10)
    with pytest.raises(ResourceBoundError):
        homset_brute_force(*major)


def test_morphisms_are_natural_transformations(major):
    U, V = major
    for eta in homset(U, V):
        assert is_natural(eta)
        assert check_natural(natural_transformation(eta))


def test_identity_inverse_and_composition(berg):
    U, V = berg["U"], berg["V"]
    eta = find_morphism(U, V, "T10")
    assert eta.notation == "^{UV}T10"
    assert compose(inverse(eta), eta) == identity_morphism(U)
    assert compose(eta, identity_morphism(U)) == eta


def test_composition_of_berg_steps(berg):
    composite = compose(find_morphism(berg["V"], berg["U"], "T2"), find_morphism(berg["V"], berg["V"], "T11"))
    assert composite.label == "T1"
    assert composite.source.name == "V" and composite.target.name == "U"
    assert composite.components == find_morphism(berg["W"], berg["U'"], "T1").components


def test_composition_checks_endpoints(berg):
    eta = find_morphism(berg["U"], berg["V"], "T0")
    with pytest.raises(ClassMismatchError):
        compose(eta, eta)


def test_classes_in_different_groups_do_not_mix(major):
    U, _ = major
    Z12 = cyclic_group(12)
    other = chord_class("Z", build_gamma(), Z12, {"f": "4", "g": "7"})
    with pytest.raises(CategoryMismatchError):
        homset(U, other)


def test_unknown_label(major):
    with pytest.raises(DescriptorError):
        find_morphism(*major, "X3")


def test_materialized_groupoid(major):
    C = materialize_groupoid(list(major))
    assert len(C.morphisms) == 96
    assert C.objects == ("U", "V")
    assert check_groupoid(C)
    assert C.transformation("U->V:T3").label == "T3"
    assert C.chord_class("V") == major[1]


def test_materialize_rejects_duplicates(major):
    with pytest.raises(DescriptorError):
        materialize_groupoid([major[0], major[0]])
