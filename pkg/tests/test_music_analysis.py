import pytest
from hypothesis import given
from hypothesis import strategies as st

from pkgroupoids.core.categories import build_point, gset_from_function
from pkgroupoids.core import config
from pkgroupoids.core.config import configure_settings
from pkgroupoids.core.exceptions import DescriptorError, NoTransportError, StructuralMismatchError
from pkgroupoids.core.groups import ti_group
from pkgroupoids.services.functor_groupoid import chord_class
from pkgroupoids.services.music_analysis import (
    PitchClass,
    Progression,
    TransportPreference,
    berg_fixture,
    berg_progression,
    component_labels,
    get_analysis_pipeline,
    match_classes,
    notation,
    progression_from_chords,
    signed_label,
    webern_fixture,
)
from pkgroupoids.services.pknet import PKNet, pknet_from_pitches, singleton_diagram, solve_transport


@pytest.mark.parametrize(
    "text, value",
    [("C", 0), ("Eb", 3), ("E♭", 3), ("C#", 1), ("c♯", 1), ("B♭", 10), ("Cbb", 10), ("B#", 0), ("14", 2), ("-1", 11), (7, 7)],
)
def test_pitch_class_parsing(text, value):
    assert PitchClass.parse(text).value == value


@pytest.mark.parametrize("text", ["H", "C#x", "", "Do"])
def test_pitch_class_rejects_garbage(text):
    with pytest.raises(DescriptorError):
        PitchClass.parse(text)


@given(st.integers(0, 11))
def test_pitch_names_parse_back(value):
    pc = PitchClass(value)
    assert PitchClass.parse(pc.name(flats=False)) == pc
    assert PitchClass.parse(pc.name(flats=True)) == pc


def test_pitch_spelling_follows_settings(monkeypatch):
    assert PitchClass(3).name() == "D♯"
    monkeypatch.setattr(config, "settings", config.settings.model_copy(update={"DISPLAY_FLATS": True}))
    assert str(PitchClass(3)) == "E♭"


def test_spelling_override_does_not_leak():
    assert not config.get_settings().DISPLAY_FLATS
    assert str(PitchClass(3)) == "D♯"


def test_signed_labels():
    assert signed_label("T10", normalize=False) == "T-2"
    assert signed_label("T6", normalize=False) == "T6"
    assert signed_label("T7", normalize=False) == "T-5"
    assert signed_label("T10", normalize=True) == "T10"
    assert signed_label("I10", normalize=False) == "I10"


def test_berg_part_one():
    _, part_one, _ = berg_fixture()
    steps = get_analysis_pipeline().analyze_progression(part_one)
    assert [notation(step.morphism, False) for step in steps] == ["^{UV}T-2", "^{VV}T-1", "^{VU}T2", "^{UU}T1"]
    assert component_labels(steps[0].morphism, False) == {"X": "T-2", "Y": "T3", "Z": "T2"}


def test_berg_part_two():
    _, _, part_two = berg_fixture()
    steps = get_analysis_pipeline().analyze_progression(part_two)
    assert [notation(step.morphism, False) for step in steps] == ["^{U'W}T-2", "^{WU'}T1", "^{U'U'}T1"]
    assert component_labels(steps[1].morphism, False) == {"X": "T1", "Y": "T-2", "Z": "T-1"}


BERG_VIOLET = [
    ("part_one", 0, "^{UV}T-2", ("T-2", "T3", "T2")),
    ("part_one", 1, "^{VV}T-1", ("T-1", "T1", "T1")),
    ("part_one", 2, "^{VU}T2", ("T2", "T-3", "T-2")),
    ("part_one", 3, "^{UU}T1", ("T1", "T-1", "T-1")),
    ("part_two", 0, "^{U'W}T-2", ("T-2", "T3", "T2")),
    ("part_two", 1, "^{WU'}T1", ("T1", "T-2", "T-1")),
    ("part_two", 2, "^{U'U'}T1", ("T1", "T-1", "T-1")),
]


@pytest.mark.parametrize("part,index,label,components", BERG_VIOLET)
def test_berg_step_components(part, index, label, components):
    _, part_one, part_two = berg_fixture()
    progression = {"part_one": part_one, "part_two": part_two}[part]
    step = get_analysis_pipeline().analyze_progression(progression)[index]
    assert notation(step.morphism, False) == label
    labels = component_labels(step.morphism, False)
    assert (labels["X"], labels["Y"], labels["Z"]) == components


def test_whole_berg_progression_links_the_parts():
    steps = get_analysis_pipeline().analyze_progression(berg_progression())
    assert len(steps) == 8
    assert steps[4].morphism.source.name == "U"
    assert steps[4].morphism.target.name == "U'"


def test_telescoping_returns_to_identity():
    _, part_one, _ = berg_fixture()
    pipeline = get_analysis_pipeline()
    composite = pipeline.compose_steps(pipeline.analyze_progression(part_one))
    assert composite.label == "T0"
    assert composite in solve_transport(part_one.nets[0], part_one.nets[-1])


def test_constant_progression_has_identity_steps(berg):
    progression = progression_from_chords("constant", berg, [("U", (3, 0, 7))] * 3)
    steps = get_analysis_pipeline().analyze_progression(progression)
    assert [step.morphism.label for step in steps] == ["T0", "T0"]


def test_single_chord_has_no_steps(berg):
    progression = progression_from_chords("one", berg, [("U", ("Eb", "C", "G"))])
    assert get_analysis_pipeline().analyze_progression(progression) == []
    assert get_analysis_pipeline().compose_steps([]) is None


def test_webern_nets_share_one_class():
    F, progression = webern_fixture()
    assert [net.points() for net in progression.nets] == [(9, 11, 10), (1, 7, 2), (5, 3, 6)]
    steps = get_analysis_pipeline().analyze_progression(progression)
    assert all(step.morphism.source == F and step.morphism.target == F for step in steps)


def test_all_preference_keeps_every_alternative():
    _, part_one, _ = berg_fixture()
    steps = get_analysis_pipeline().analyze_progression(part_one, TransportPreference.ALL)
    assert all(step.morphism in step.alternatives for step in steps)


def test_component_report():
    _, part_one, _ = berg_fixture()
    pipeline = get_analysis_pipeline()
    frame = pipeline.component_report(pipeline.analyze_progression(part_one), normalize=False)
    assert list(frame.columns) == ["step", "transport", "X", "Y", "Z"]
    assert frame.iloc[0]["transport"] == "^{UV}T-2"
    assert len(frame) == 4


def test_component_report_reads_current_settings():
    _, part_one, _ = berg_fixture()
    pipeline = get_analysis_pipeline()
    steps = pipeline.analyze_progression(part_one)
    configure_settings(NORMALIZE_LABELS=True)
    frame = pipeline.component_report(steps)
    assert frame.iloc[0]["transport"] == "^{UV}T10"
    assert frame.iloc[0]["X"] == "T10"


def test_match_classes_never_guesses(berg):
    assert match_classes(("Eb", "C", "G"), list(berg.values())) == ["U"]
    assert match_classes(("C", "C", "C"), list(berg.values())) == []


def test_chord_outside_its_class_is_rejected(berg):
    with pytest.raises(DescriptorError):
        progression_from_chords("bad", berg, [("U", (0, 0, 0))])
    with pytest.raises(DescriptorError):
        progression_from_chords("bad", berg, [("Q", (0, 0, 0))])


def test_mixed_shapes_are_rejected(berg):
    F, webern = webern_fixture()
    mixed = [pknet_from_pitches(berg["U"], (3, 0, 7)), webern.nets[0]]
    with pytest.raises(StructuralMismatchError):
        Progression(name="mixed", nets=tuple(mixed))


def test_unreachable_chord_raises_no_transport():
    TI = ti_group()
    carrier = tuple(range(12)) + ("rest",)
    S = gset_from_function("PitchesAndRest", TI, carrier, lambda x, p: p if p == "rest" else x(p))
    P = chord_class("P", build_point(), TI, {})
    R = singleton_diagram(build_point())
    nets = (PKNet(R=R, S=S, F=P, phi=((0,),)), PKNet(R=R, S=S, F=P, phi=(("rest",),)))
    with pytest.raises(NoTransportError) as excinfo:
        get_analysis_pipeline().analyze_progression(Progression(name="gap", nets=nets))
    assert excinfo.value.witness == (1, 2)
    assert excinfo.value.exit_code == 4
