import pytest

from pkgroupoids.core.categories import Groupoid, check_groupoid
from pkgroupoids.core.config import get_settings
from pkgroupoids.core.exceptions import DescriptorError, UnknownNameError
from pkgroupoids.models.descriptors import BisectionLiteral, PKNetDescriptor, WorkspaceConfig
from pkgroupoids.services.workspace import (
    WorkspaceService,
    apply_bounds,
    parse_json_literal,
    read_descriptor_file,
)


def test_shipped_workspace_names(workspace):
    names = workspace.names()
    assert {"TI", "Z3", "Z12", "S3", "Z3wrS2"} <= set(names["groups"])
    assert {"Gamma", "Delta3", "Point", "Chain3", "Swap"} <= set(names["categories"])
    assert names["sections"] == ["hook", "mixed", "berg"]
    assert names["groupoids"] == ["Hook", "Pair2xZ3", "Swap", "UV-mixed", "UV-transpositions"]


def test_groups_are_built(workspace):
    assert workspace.group("Z3wrS2").order == 18
    assert workspace.group("S3").order == 6
    assert workspace.group("Z3").labels == ("0", "1", "2")


def test_categories_are_built(workspace):
    chain = workspace.category("Chain3")
    assert chain.compose("g", "f") == "g∘f"
    swap = workspace.groupoid("Swap")
    assert isinstance(swap, Groupoid)
    assert swap.inverse("u") == "v"
    assert check_groupoid(swap)


def test_classes_and_progressions(workspace):
    assert workspace.chord_class("U'").assignments() == {"f": "I7", "g": "I3"}
    assert len(workspace.progression("berg-part-one").nets) == 5
    assert workspace.progression("f-major").nets[0].points() == (5, 9, 0)


def test_subgroupoid_groupoids(workspace):
    assert len(workspace.groupoid("UV-transpositions").morphisms) == 48
    assert len(workspace.groupoid("Hook").morphisms) == 48
    assert len(workspace.groupoid("Pair2xZ3").morphisms) == 12


def test_unknown_names(workspace):
    with pytest.raises(UnknownNameError):
        workspace.chord_class("Nope")
    with pytest.raises(UnknownNameError):
        workspace.groupoid("Nope")


def test_net_literal(workspace):
    descriptor = parse_json_literal('{"class": "U0", "phi": {"X": "F", "Y": ["A"], "Z": 0}}', PKNetDescriptor)
    assert workspace.net(descriptor).points() == (5, 9, 0)
    with pytest.raises(DescriptorError):
        workspace.net(PKNetDescriptor.model_validate({"class": "U0", "phi": {"X": [5, 6], "Y": 9, "Z": 0}}))


def test_bisection_literal(workspace):
    C = workspace.groupoid("Pair2xZ3")
    b = workspace.bisection(C, BisectionLiteral(sigma=[2, 1], legs=["a->b:0", "b->a:0"]))
    assert b.leg("a") == "a->b:0"
    with pytest.raises(DescriptorError):
        workspace.bisection(C, BisectionLiteral(sigma=[1, 2], legs=["a->b:0", "b->a:0"]))


def test_invalid_json_literal():
    with pytest.raises(DescriptorError):
        parse_json_literal("{not json", PKNetDescriptor)
    with pytest.raises(DescriptorError):
        parse_json_literal('{"phi": {}}', PKNetDescriptor)


def test_duplicate_names_are_rejected():
    data = {"groups": [{"name": "A", "kind": "cyclic", "n": 2}, {"name": "A", "kind": "cyclic", "n": 3}]}
    with pytest.raises(DescriptorError):
        WorkspaceService().load_data(data)


def test_table_group_needs_full_table():
    with pytest.raises(DescriptorError):
        WorkspaceService().load_data({"groups": [{"name": "Z2", "kind": "table", "order": 2, "multiply": [0, 1, 1]}]})


def test_unknown_wreath_base():
    with pytest.raises(UnknownNameError):
        WorkspaceService().load_data({"groups": [{"name": "W", "kind": "wreath", "base": "Missing", "n": 2}]})


def test_inconsistent_class_is_rejected():
    data = {"classes": [{"name": "Bad", "delta": "Delta3", "assignments": {"f": "T1", "g": "T1", "g∘f": "T5"}}]}
    with pytest.raises(DescriptorError):
        WorkspaceService().load_data(data)


def test_section_with_unknown_class():
    with pytest.raises(UnknownNameError):
        WorkspaceService().load_data({"sections": [{"name": "s", "classes": ["Missing"]}]})


def test_bounds_override_settings():
    apply_bounds(WorkspaceConfig(bounds={"NET_SEARCH_BOUND": 5}))
    assert get_settings().NET_SEARCH_BOUND == 5
    with pytest.raises(DescriptorError):
        apply_bounds(WorkspaceConfig(bounds={"NO_SUCH_BOUND": 5}))


def test_bounds_must_be_positive():
    with pytest.raises(DescriptorError):
        WorkspaceService().load_data({"bounds": {"NET_SEARCH_BOUND": 0}})


def test_descriptor_files(tmp_path):
    good = tmp_path / "ws.json"
    good.write_text('{"groups": [{"name": "Z5", "kind": "cyclic", "n": 5}]}', encoding="utf-8")
    workspace = WorkspaceService().load(str(good))
    assert workspace.group("Z5").order == 5
    assert workspace.source == str(good.resolve())

    bad = tmp_path / "bad.yaml"
    bad.write_text("groups: [unclosed", encoding="utf-8")
    with pytest.raises(DescriptorError):
        read_descriptor_file(bad)

    scalar = tmp_path / "scalar.yaml"
    scalar.write_text("just text", encoding="utf-8")
    with pytest.raises(DescriptorError):
        read_descriptor_file(scalar)

    with pytest.raises(DescriptorError):
        WorkspaceService().load(str(tmp_path / "missing.yaml"))


def test_workspace_cache(workspace_path):
    service = WorkspaceService()
    assert service.load(workspace_path) is service.load(workspace_path)
