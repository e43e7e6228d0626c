import pytest

from pkgroupoids.core.categories import check_groupoid, endomorphism_group, poset_category
from pkgroupoids.core.exceptions import SectionClosureError
from pkgroupoids.core.groups import ti_extension
from pkgroupoids.services.functor_groupoid import chord_class, find_morphism, materialize_groupoid
from pkgroupoids.services.music_analysis import hook_groupoid
from pkgroupoids.services.subgroupoid import (
    build_section,
    default_section,
    kernel_structure_report,
    project,
    pullback_oracle,
    pullback_subgroupoid,
    verify_kernel_structure,
)


@pytest.fixture(scope="module")
def extension():
    return ti_extension()


def test_projection_reads_the_sign(berg, extension):
    assert project(find_morphism(berg["U"], berg["V"], "T10"), extension).index == 0
    assert project(find_morphism(berg["U"], berg["V"], "I5"), extension).index == 1


def test_hook_subgroupoid_keeps_transpositions(extension):
    sub = hook_groupoid()
    assert len(sub.kept) == 48
    assert sub.is_closed()
    assert all(eta.label.startswith("T") for eta in sub.hom("U", "V"))
    groupoid = sub.as_groupoid()
    assert check_groupoid(groupoid)
    assert endomorphism_group(groupoid, "U").order == 12
    assert verify_kernel_structure(sub, extension)


def test_berg_kernel_structure(berg, extension):
    sub = pullback_subgroupoid(list(berg.values()), extension)
    report = kernel_structure_report(sub, extension)
    assert report.passed and report.closed
    assert {w.order for w in report.endomorphisms} == {12}
    assert all(w.isomorphic_to_kernel for w in report.endomorphisms)
    assert len(report.cosets) == 16
    assert all(w.is_coset for w in report.cosets)


def test_mixed_section_keeps_inversions_between_classes(major, extension):
    section = build_section(["U", "V"], {("U", "V"): 1, ("V", "U"): 1}, extension.H, default=0)
    sub = pullback_subgroupoid(list(major), extension, section)
    assert all(eta.label.startswith("I") for eta in sub.hom("U", "V"))
    assert all(eta.label.startswith("T") for eta in sub.hom("U", "U"))
    assert verify_kernel_structure(sub, extension)


def test_unclosed_section_is_rejected(extension):
    with pytest.raises(SectionClosureError) as excinfo:
        build_section(["U", "V"], {("U", "V"): 1, ("V", "U"): 0}, extension.H, default=0)
    assert excinfo.value.witness == ("U", "V", "U")


def test_nontrivial_endomorphism_is_rejected(extension):
    with pytest.raises(SectionClosureError) as excinfo:
        build_section(["U"], {("U", "U"): 1}, extension.H)
    assert excinfo.value.witness == ("U", "U")


def test_missing_choice_without_default(extension):
    with pytest.raises(SectionClosureError):
        build_section(["U", "V"], {("U", "U"): 0}, extension.H)


def test_pullback_agrees_with_generic_construction(major, extension):
    assert pullback_oracle(hook_groupoid())
    ambient = materialize_groupoid(list(major))
    assert pullback_oracle(pullback_subgroupoid(ambient, extension, default_section(ambient.objects, extension.H)))


def test_pullback_agrees_without_bottom_and_with_commas(extension):
    cospan = poset_category("Cospan", ["X", "Y", "Z"], [("f", "X", "Z"), ("g", "Y", "Z")])
    assert cospan.bottom is None
    A = chord_class("A,1", cospan, extension.G, {"f": "T4", "g": "I3"})
    B = chord_class("B,2", cospan, extension.G, {"f": "T2", "g": "I5"})
    sub = pullback_subgroupoid(materialize_groupoid([A, B]), extension)
    # ids carry every component when there is no bottom
    assert all(mid.split(":", 1)[1].count(",") == 2 for mid in sub.kept)
    assert len(sub.kept) == 48
    assert pullback_oracle(sub)
