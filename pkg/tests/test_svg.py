import xml.etree.ElementTree as ET

from helpers import diamond, vee

from afbposet.embedding import EmbeddedDiagram
from afbposet.oracle import CorpusSpec, random_afb_diagram
from afbposet.svg import render_svg

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg)


def by_class(root, cls):
    return [el for el in root.iter() if el.get("class") == cls]


def test_one_circle_per_vertex_one_path_per_edge():
    d = random_afb_diagram(CorpusSpec(4, 14, "grid"))
    root = parse(render_svg(d))
    assert root.tag == NS + "svg"
    assert len(by_class(root, "vertex")) == len(d.vertices)
    assert len(by_class(root, "edge")) == len(d.edges)


def test_upward_means_smaller_screen_y():
    root = parse(render_svg(diamond()))
    cy = {c.get("data-id"): float(c.get("cy")) for c in by_class(root, "vertex")}
    assert cy["z"] > cy["l"] > cy["t"]


def test_deterministic():
    d = random_afb_diagram(CorpusSpec(9, 20, "wraparound"))
    assert render_svg(d) == render_svg(d)


def test_overlays():
    e = EmbeddedDiagram(diamond())
    svg = render_svg(
        e.diagram,
        envelope=e.envelope_order(),
        paths=[e.extremal_path("z", "t", "left"), e.extremal_path("z", "t", "right")],
        labels={"z": "zero"},
    )
    root = parse(svg)
    (env,) = by_class(root, "envelope")
    assert env.get("d").endswith("Z")
    assert len(by_class(root, "witness-left")) == len(by_class(root, "witness-right")) == 1
    assert "zero" in [t.text for t in root.iter(NS + "text")]


def test_two_minimal_envelope():
    e = EmbeddedDiagram(vee())
    root = parse(render_svg(e.diagram, envelope=e.envelope_order()))
    (env,) = by_class(root, "envelope")
    assert env.get("d").count("L") == 3
