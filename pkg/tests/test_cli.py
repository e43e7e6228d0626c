import orjson
import pytest

from pkgroupoids.cli import commands
from pkgroupoids.cli.commands import canonical_label
from pkgroupoids.core.exceptions import NoTransportError
from pkgroupoids.main import main


@pytest.fixture
def run(workspace_path, capsys):
    """Invoke the CLI against the shipped workspace; returns (exit code, stdout, stderr)"""

    def invoke(*argv, config=workspace_path):
        code = main([*argv, "--config", config])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


def test_canonical_labels():
    assert canonical_label("T-2") == "T10"
    assert canonical_label("I14") == "I2"
    assert canonical_label(" T3 ") == "T3"
    assert canonical_label("a->b:0") == "a->b:0"


def test_homset_text(run):
    code, out, _ = run("homset", "--from", "U", "--to", "V")
    assert code == 0
    assert out.startswith("Hom(U, V): 24 morphisms")
    assert "^{UV}T-2" in out


def test_analyze_json(run):
    code, out, _ = run("analyze", "--progression", "berg-part-one", "--json")
    assert code == 0
    report = orjson.loads(out)
    assert [step["notation"] for step in report["steps"]] == ["^{UV}T-2", "^{VV}T-1", "^{VU}T2", "^{UU}T1"]
    assert report["steps"][0]["components"] == {"X": "T-2", "Y": "T3", "Z": "T2"}
    assert report["chords"][0]["phi"]["X"] == ["D♯"]


def test_analyze_normalized_labels_and_dot(run, tmp_path):
    target = tmp_path / "berg.dot"
    code, out, _ = run("analyze", "--progression", "berg-part-two", "--normalize-labels", "--dot", str(target))
    assert code == 0
    assert "^{U'W}T10" in out
    head = target.read_text(encoding="utf-8").splitlines()[0]
    assert head.startswith("digraph") and '"berg-part-two"' in head


def test_single_chord_progression(run):
    code, out, _ = run("analyze", "--progression", "f-major")
    assert code == 0
    assert "No steps (single chord)" in out


def test_act_with_pitches(run):
    code, out, _ = run("act", "--from", "U0", "--to", "U0", "--label", "I8", "--pitches", "F,A,C", "--json")
    assert code == 0
    report = orjson.loads(out)
    assert report["image"]["phi"] == {"X": ["D♯"], "Y": ["G"], "Z": ["A♯"]}
    assert report["components"] == {"X": "I8", "Y": "I4", "Z": "I10"}


def test_act_with_flats_and_signed_label(run):
    code, out, _ = run("act", "--from", "U", "--to", "V", "--label", "T-2", "--pitches", "Eb,C,G", "--flats", "--json")
    assert code == 0
    assert orjson.loads(out)["image"]["phi"] == {"X": ["D♭"], "Y": ["E♭"], "Z": ["A"]}


def test_act_with_net_literal(run):
    net = '{"class": "U0", "phi": {"X": "F", "Y": "A", "Z": "C"}}'
    code, out, _ = run("act", "--from", "U0", "--to", "V0", "--label", "T3", "--net", net, "--json")
    assert code == 0
    assert orjson.loads(out)["image"]["phi"] == {"X": ["G♯"], "Y": ["A♯"], "Z": ["C♯"]}


def test_act_rejects_net_of_other_class(run):
    net = '{"class": "V0", "phi": {"X": 0, "Y": 2, "Z": 5}}'
    code, _, err = run("act", "--from", "U0", "--to", "V0", "--label", "T3", "--net", net)
    assert code == 2
    assert "error:" in err


def test_nf_counts(run):
    code, out, _ = run("nf", "--class", "U0", "--json")
    assert code == 0
    assert orjson.loads(out)["count"] == 12
    code, out, _ = run("nf", "--class", "C", "--context", "triads", "--json")
    assert orjson.loads(out)["count"] == 24
    code, out, _ = run("nf", "--class", "C", "--form", "representable", "--object", "Y", "--json")
    assert orjson.loads(out)["count"] == 12


def test_subgroupoid(run):
    code, out, _ = run("subgroupoid", "--section", "mixed", "--json")
    assert code == 0
    report = orjson.loads(out)
    assert report["morphism_count"] == 48
    assert report["kernel_structure"]["passed"]
    assert all("}I" in notation for notation in report["hom"]["U0->V0"])

    code, out, _ = run("subgroupoid", "--classes", "U,V")
    assert code == 0
    assert "Kernel structure: PASS" in out


def test_bisections(run):
    literal = '{"sigma": [2, 1], "legs": ["a->b:0", "b->a:0"]}'
    code, out, _ = run("bisections", "--groupoid", "Pair2xZ3", "--bisection", literal, "--json")
    assert code == 0
    report = orjson.loads(out)
    assert report["order"] == report["expected_order"] == 18
    assert report["normal_subgroup_order"] == 9
    assert report["complement_order"] == 2
    assert report["detail"]["internal_automorphism"]["a->a:1"] == "b->b:1"


def test_wreath_iso_and_trivialize(run):
    code, out, _ = run("wreath-iso", "--groupoid", "Pair2xZ3", "--base", "b", "--json")
    assert code == 0
    report = orjson.loads(out)
    assert report["bijective"] and report["homomorphism"] and report["frame_independent"]
    assert report["base"] == "b"

    code, out, _ = run("trivialize", "--groupoid", "Swap")
    assert code == 0
    assert "Functorial: yes" in out


def test_unknown_base_object(run):
    code, _, err = run("wreath-iso", "--groupoid", "Pair2xZ3", "--base", "z")
    assert code == 2
    assert "has no object" in err


def test_dot_command(run, tmp_path):
    target = tmp_path / "webern.dot"
    code, out, _ = run("dot", "--progression", "webern", "--output", str(target))
    assert code == 0
    assert out.splitlines()[0].startswith("digraph webern")
    assert target.exists()
    code, out, _ = run("dot", "--net", '{"class": "C", "phi": {"X": 0, "Y": 4, "Z": 7}}', "--no-steps")
    assert code == 0
    assert "color=red" not in out


def test_classes(run):
    code, out, _ = run("classes")
    assert code == 0
    assert "Groupoids: Hook, Pair2xZ3, Swap, UV-mixed, UV-transpositions" in out


def test_verify_groups_suite(run):
    code, out, _ = run("verify", "--suite", "groups")
    assert code == 0
    assert "Overall: PASS (seed 0)" in out


def test_verify_reports_corrupted_workspace(run, tmp_path):
    broken = tmp_path / "broken.yaml"
    broken.write_text(
        "groups:\n  - {name: Broken, kind: table, order: 2, multiply: [0, 1, 1, 1]}\n", encoding="utf-8"
    )
    code, out, _ = run("verify", "--suite", "groups", config=str(broken))
    assert code == 1
    assert "witness: 1 has no two-sided inverse" in out
    assert "Overall: FAIL" in out


def test_unknown_name_exit_code(run):
    code, _, err = run("homset", "--from", "Nope", "--to", "U")
    assert code == 2
    assert "Unknown chord class 'Nope'" in err


def test_resource_bound_exit_code(run):
    code, _, err = run("nf", "--class", "U0", "--bound", "3")
    assert code == 3
    assert "exceeded" in err


def test_non_positive_bound(run):
    code, _, _ = run("classes", "--bound", "0")
    assert code == 2


def test_missing_workspace_file(run, tmp_path):
    code, _, _ = run("classes", config=str(tmp_path / "missing.yaml"))
    assert code == 2


def test_no_transport_exit_code(run, monkeypatch):
    def unreachable(workspace, args):
        raise NoTransportError("no morphism carries chord 1 to chord 2", witness=(1, 2))

    monkeypatch.setitem(commands.COMMANDS, "classes", unreachable)
    code, _, err = run("classes")
    assert code == 4
    assert "no morphism carries" in err


def test_unexpected_errors_exit_with_one(run, monkeypatch):
    def crash(workspace, args):
        raise RuntimeError("boom")

    monkeypatch.setitem(commands.COMMANDS, "classes", crash)
    code, _, err = run("classes")
    assert code == 1
    assert "boom" in err


def test_argument_errors_exit_through_argparse():
    with pytest.raises(SystemExit) as excinfo:
        main(["nf", "--class", "U0", "--context", "chords"])
    assert excinfo.value.code == 2
