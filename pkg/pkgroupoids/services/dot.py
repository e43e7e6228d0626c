"""
DOT rendering of PK-nets and analysed progressions.

One cluster per chord with a node per object of Δ; black arrows inside a
chord carry F(m), violet arrows between chords carry the per-object
components of the step, and a red arrow between the chords' first objects
carries the step's label.
"""

from typing import Optional, Sequence
import logging

import networkx as nx
from graphviz import Digraph

from .music_analysis import AnalysisStep, PitchClass, Progression, component_labels, notation, signed_label
from .pknet import PKNet

logger = logging.getLogger(__name__)

CHORD_COLOR = "black"
COMPONENT_COLOR = "violet"
STEP_COLOR = "red"


def _node(chord: int, obj: str) -> str:
    return f"c{chord}_{obj}"


def _point_label(point, flats: Optional[bool]) -> str:
    return PitchClass(point).name(flats) if isinstance(point, int) else str(point)


def progression_graph(
    nets: Sequence[PKNet],
    steps: Sequence[AnalysisStep] = (),
    flats: Optional[bool] = None,
    normalize: Optional[bool] = None,
) -> nx.MultiDiGraph:
    """Nodes carry ``chord`` and ``label``; edges carry ``label``, ``color`` and ``kind``"""
    graph = nx.MultiDiGraph()
    for i, net in enumerate(nets, start=1):
        F = net.F
        for obj in F.delta.objects:
            points = ", ".join(_point_label(p, flats) for p in net.component(obj).values())
            graph.add_node(_node(i, obj), chord=i, label=f"{obj}: {points}", chord_class=F.name)
        for m in F.delta.non_identity_morphisms():
            graph.add_edge(
                _node(i, m.src),
                _node(i, m.tgt),
                label=signed_label(F.functor(m.id), normalize),
                color=CHORD_COLOR,
                kind="chord",
            )

    for step in steps:
        for obj, label in component_labels(step.morphism, normalize).items():
            graph.add_edge(
                _node(step.from_index, obj),
                _node(step.to_index, obj),
                label=label,
                color=COMPONENT_COLOR,
                kind="component",
            )
        first = step.morphism.delta.objects[0]
        graph.add_edge(
            _node(step.from_index, first),
            _node(step.to_index, first),
            label=notation(step.morphism, normalize),
            color=STEP_COLOR,
            kind="step",
        )
    logger.debug(f"DOT graph with {graph.number_of_nodes()} nodes and {graph.number_of_edges()} edges")
    return graph


def to_dot(graph: nx.MultiDiGraph, name: str = "progression") -> str:
    """Serialize a progression graph; node and edge order follow insertion order"""
    dot = Digraph(name=name, graph_attr={"rankdir": "LR"}, node_attr={"shape": "box"})
    chords = sorted({data["chord"] for _, data in graph.nodes(data=True)})
    for chord in chords:
        members = [(n, d) for n, d in graph.nodes(data=True) if d["chord"] == chord]
        with dot.subgraph(name=f"cluster_{chord}") as cluster:
            cluster.attr(label=f"{chord}: {members[0][1]['chord_class']}")
            for node, data in members:
                cluster.node(node, label=data["label"])
    for source, target, data in graph.edges(data=True):
        style = "bold" if data["kind"] == "step" else None
        dot.edge(source, target, label=data["label"], color=data["color"], fontcolor=data["color"], style=style)
    return dot.source


def progression_dot(
    progression: Progression,
    steps: Sequence[AnalysisStep] = (),
    flats: Optional[bool] = None,
    normalize: Optional[bool] = None,
) -> str:
    return to_dot(progression_graph(progression.nets, steps, flats, normalize), progression.name)


def net_dot(net: PKNet, flats: Optional[bool] = None, normalize: Optional[bool] = None) -> str:
    return to_dot(progression_graph([net], (), flats, normalize), net.F.name)
