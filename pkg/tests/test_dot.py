from pkgroupoids.services.dot import net_dot, progression_dot, progression_graph, to_dot
from pkgroupoids.services.music_analysis import berg_fixture, get_analysis_pipeline, webern_fixture


def test_progression_graph_edges():
    _, part_one, _ = berg_fixture()
    steps = get_analysis_pipeline().analyze_progression(part_one)
    graph = progression_graph(part_one.nets, steps, normalize=False)
    kinds = [data["kind"] for _, _, data in graph.edges(data=True)]
    # two arrows per chord, three components and one label per step
    assert kinds.count("chord") == 10
    assert kinds.count("component") == 12
    assert kinds.count("step") == 4
    assert graph.nodes["c1_X"]["label"] == "X: D♯"


def test_progression_dot_text():
    _, part_one, _ = berg_fixture()
    steps = get_analysis_pipeline().analyze_progression(part_one)
    dot = progression_dot(part_one, steps, flats=True, normalize=False)
    lines = dot.splitlines()
    assert lines[0].startswith("digraph") and '"berg-part-one"' in lines[0]
    assert "rankdir=LR" in dot
    assert "subgraph cluster_5 {" in dot
    assert 'label="^{UV}T-2" color=red' in dot
    assert "style=bold" in dot
    assert '"X: E♭"' in dot
    assert lines[-1].strip() == "}"


def test_every_chord_is_a_cluster():
    _, part_one, _ = berg_fixture()
    dot = to_dot(progression_graph(part_one.nets))
    assert dot.count("subgraph cluster_") == len(part_one.nets)
    assert 'label="1: U"' in dot


def test_net_dot_has_no_steps():
    F, progression = webern_fixture()
    dot = net_dot(progression.nets[0])
    assert "color=red" not in dot
    assert "color=violet" not in dot
    assert dot.count(" color=black") == 3
