import pytest

from pkgroupoids.core.categories import build_delta3, build_gamma, pitch_class_gset, triad_gset
from pkgroupoids.core.config import configure_settings
from pkgroupoids.core.exceptions import (
    ClassMismatchError,
    DescriptorError,
    ResourceBoundError,
    StructuralMismatchError,
)
from pkgroupoids.services.functor_groupoid import find_morphism
from pkgroupoids.services.music_analysis import c_major_fixture, f_major_fixture, webern_fixture
from pkgroupoids.services.pknet import (
    PKNet,
    act,
    check_diagram,
    check_net_functor_laws,
    enumerate_nets,
    pknet_from_pitches,
    representable_diagram,
    singleton_diagram,
    solve_transport,
    validate_pknet,
)


def test_forms_are_functors():
    assert check_diagram(singleton_diagram(build_gamma()))
    R = representable_diagram(build_delta3(), "X")
    assert check_diagram(R)
    assert R.elements("Z") == ("g∘f",)
    assert representable_diagram(build_delta3(), "Y").elements("X") == ()


def test_fixture_nets_validate():
    _, c_major = c_major_fixture()
    _, _, f_major = f_major_fixture()
    _, webern = webern_fixture()
    assert validate_pknet(c_major)
    assert validate_pknet(f_major)
    assert all(validate_pknet(net) for net in webern.nets)


def test_wrong_pitches_fail_naturality(major):
    U, _ = major
    assert not validate_pknet(pknet_from_pitches(U, (5, 9, 1)))


def test_pitches_by_object_name(major):
    U, _ = major
    net = pknet_from_pitches(U, {"X": 5, "Y": 9, "Z": 0})
    assert net.points() == (5, 9, 0)
    with pytest.raises(DescriptorError):
        pknet_from_pitches(U, {"X": 5})
    with pytest.raises(DescriptorError):
        pknet_from_pitches(U, (5, 9))


def test_structural_mismatch(major):
    U, _ = major
    net = PKNet(R=singleton_diagram(build_delta3()), S=pitch_class_gset(), F=U, phi=((0,), (4,), (7,)))
    with pytest.raises(StructuralMismatchError):
        validate_pknet(net)


def test_inversion_acts_on_f_major():
    U, _, net = f_major_fixture()
    eta = find_morphism(U, U, "I8")
    assert act(eta, net).points() == (3, 7, 10)


def test_two_transports_reach_the_same_chord():
    U, V, net = f_major_fixture()
    for label in ("T3", "I1"):
        assert act(find_morphism(U, V, label), net).points() == (8, 10, 1)
    target = pknet_from_pitches(V, (8, 10, 1))
    assert sorted(eta.label for eta in solve_transport(net, target)) == ["I1", "T3"]


def test_act_checks_the_class():
    U, V, net = f_major_fixture()
    with pytest.raises(ClassMismatchError):
        act(find_morphism(V, U, "T0"), net)


@pytest.mark.parametrize("context, count", [(pitch_class_gset, 12), (triad_gset, 24)])
def test_enumerate_singleton_nets(major, context, count):
    U, _ = major
    nets = enumerate_nets(singleton_diagram(build_gamma()), context(), U)
    assert len(nets) == count
    assert all(validate_pknet(net) for net in nets)


def test_enumerate_representable_nets():
    F, _ = c_major_fixture()
    nets = enumerate_nets(representable_diagram(build_delta3(), "Y"), pitch_class_gset(), F)
    assert len(nets) == 12
    assert all(net.phi[0] == () for net in nets)


def test_enumeration_respects_bound(major):
    configure_settings(NET_SEARCH_BOUND=5)
    with pytest.raises(ResourceBoundError):
        enumerate_nets(singleton_diagram(build_gamma()), pitch_class_gset(), major[0])


def test_net_functor_laws(major, berg):
    R, S = singleton_diagram(build_gamma()), pitch_class_gset()
    assert check_net_functor_laws(list(major), R, S)
    assert check_net_functor_laws(list(berg.values()), R, S)


def test_broken_composition_breaks_functor_laws(major):
    R, S = singleton_diagram(build_gamma()), pitch_class_gset()
    assert not check_net_functor_laws(list(major), R, S, compose_fn=lambda eta2, eta1: eta1)
