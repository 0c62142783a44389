"""Serialization of networks, histograms and reports: DOT, GraphML, CSV, JSON."""
from __future__ import annotations

import json
import math
import re
import xml.etree.ElementTree as ET
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .degree_stats import DegreeDistribution
from .fxp_map import ControlParameter, DomainError, QuantizationMode
from .state_net import StateNetwork

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
_MU_RE = re.compile(r"^\s*(\d+)\s*/\s*(?:2\s*\^\s*(\d+)|(\d+))\s*$")


class ParseError(ValueError):
    pass


def parse_mu(spec: str) -> ControlParameter:
    """Parse ``"121/2^5"``, ``"121/32"`` or an exact decimal such as ``"3.78125"``.

    The denominator must be a power of two; even numerators are normalized and
    the input form is kept as the raw form.
    """
    if not spec or not spec.strip():
        raise ParseError("empty mu specification")
    m = _MU_RE.match(spec)
    if m:
        num = int(m.group(1))
        if m.group(2) is not None:
            exp = int(m.group(2))
        else:
            den = int(m.group(3))
            if den <= 0 or den & (den - 1):
                raise ParseError(f"mu denominator {den} in {spec!r} is not a power of two")
            exp = den.bit_length() - 1
    else:
        try:
            frac = Fraction(spec.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(
                f"cannot parse mu {spec!r}; expected forms like 121/2^5 or 121/32"
            ) from None
        den = frac.denominator
        if den & (den - 1):
            raise ParseError(f"mu {spec!r} is not dyadic (denominator {den})")
        num, exp = frac.numerator, den.bit_length() - 1
    if num <= 0:
        raise ParseError(f"mu must be positive, got {spec!r}")
    try:
        return ControlParameter(num, exp)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def node_value(i: int, n: int) -> str:
    """Exact decimal string of i / 2^n."""
    if i == 0:
        return "0"
    s = format(Decimal(i) / Decimal(1 << n), "f") if n else str(i)
    return s.rstrip("0").rstrip(".") if "." in s else s


def _open_for_write(path: str | Path):
    path = Path(path)
    try:
        return path.open("w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _graph_meta(net: StateNetwork) -> dict[str, str]:
    return {"mu": str(net.mu), "n": str(net.n), "quant": net.mode.value}


def export_dot(net: StateNetwork, path: str | Path) -> Path:
    meta = _graph_meta(net)
    with _open_for_write(path) as fh:
        fh.write("digraph state_network {\n")
        for k, v in meta.items():
            fh.write(f'  {k}="{v}";\n')
        for i in range(net.size):
            fh.write(f'  {i} [x="{node_value(i, net.n)}"];\n')
        for i, j in enumerate(net.successor.tolist()):
            fh.write(f"  {i} -> {j};\n")
        fh.write("}\n")
    return Path(path)


_DOT_META = re.compile(r'^\s*(\w+)\s*=\s*"([^"]*)"\s*;\s*$')
_DOT_NODE = re.compile(r'^\s*(\d+)\s*\[.*\]\s*;\s*$')
_DOT_EDGE = re.compile(r"^\s*(\d+)\s*->\s*(\d+)\s*;\s*$")


def _net_from_edges(meta: dict[str, str], nodes: set[int], edges: dict[int, int],
                    source: str) -> StateNetwork:
    try:
        mu = parse_mu(meta["mu"])
        n = int(meta["n"])
        mode = QuantizationMode(meta.get("quant", "round"))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"{source}: missing or bad graph attributes: {exc}") from exc
    size = (1 << n) + 1
    if nodes != set(range(size)) or set(edges) != nodes:
        raise ParseError(f"{source}: expected nodes 0..{size - 1} each with one out-edge")
    succ = np.array([edges[i] for i in range(size)], dtype=np.int64)
    return StateNetwork(mu, n, mode, succ)


def read_dot(path: str | Path) -> StateNetwork:
    meta: dict[str, str] = {}
    nodes: set[int] = set()
    edges: dict[int, int] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if m := _DOT_EDGE.match(line):
            i, j = int(m.group(1)), int(m.group(2))
            if i in edges:
                raise ParseError(f"{path}: node {i} has more than one out-edge")
            edges[i] = j
        elif m := _DOT_NODE.match(line):
            nodes.add(int(m.group(1)))
        elif m := _DOT_META.match(line):
            meta[m.group(1)] = m.group(2)
    return _net_from_edges(meta, nodes, edges, str(path))


def export_graphml(net: StateNetwork, path: str | Path) -> Path:
    g = f"{{{GRAPHML_NS}}}"
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(g + "graphml")
    keys = [
        ("d_mu", "graph", "mu", "string"),
        ("d_n", "graph", "n", "int"),
        ("d_quant", "graph", "quant", "string"),
        ("d_label", "node", "label", "int"),
        ("d_value", "node", "value", "double"),
    ]
    for kid, scope, name, typ in keys:
        ET.SubElement(root, g + "key", {"id": kid, "for": scope,
                                        "attr.name": name, "attr.type": typ})
    graph = ET.SubElement(root, g + "graph", {"id": "state_network", "edgedefault": "directed"})
    for k, v in _graph_meta(net).items():
        ET.SubElement(graph, g + "data", {"key": "d_" + k}).text = v
    for i in range(net.size):
        node = ET.SubElement(graph, g + "node", {"id": str(i)})
        ET.SubElement(node, g + "data", {"key": "d_label"}).text = str(i)
        ET.SubElement(node, g + "data", {"key": "d_value"}).text = node_value(i, net.n)
    for i, j in enumerate(net.successor.tolist()):
        ET.SubElement(graph, g + "edge", {"id": f"e{i}", "source": str(i), "target": str(j)})
    ET.indent(root, space="  ")
    data = ET.tostring(root, encoding="unicode", xml_declaration=False)
    with _open_for_write(path) as fh:
        fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
        fh.write(data)
        fh.write("\n")
    return Path(path)


def read_graphml(path: str | Path) -> StateNetwork:
    g = f"{{{GRAPHML_NS}}}"
    root = ET.parse(path).getroot()
    keys = {k.get("id"): k.get("attr.name") for k in root.iter(g + "key")}
    graph = root.find(g + "graph")
    if graph is None:
        raise ParseError(f"{path}: no <graph> element")
    meta = {keys.get(d.get("key"), d.get("key")): (d.text or "")
            for d in graph.findall(g + "data")}
    nodes = {int(nd.get("id")) for nd in graph.findall(g + "node")}
    edges: dict[int, int] = {}
    for e in graph.findall(g + "edge"):
        i = int(e.get("source"))
        if i in edges:
            raise ParseError(f"{path}: node {i} has more than one out-edge")
        edges[i] = int(e.get("target"))
    return _net_from_edges(meta, nodes, edges, str(path))


def graphml_schema():
    import xmlschema

    with resources.as_file(resources.files("fxpnet") / "schemas" / "graphml.xsd") as xsd:
        return xmlschema.XMLSchema(str(xsd))


def validate_graphml(path: str | Path) -> None:
    """Raise ``xmlschema.XMLSchemaValidationError`` if the file breaks the GraphML schema."""
    graphml_schema().validate(str(path))


def export_degree_csv(dist: DegreeDistribution, path: str | Path) -> Path:
    with _open_for_write(path) as fh:
        fh.write("degree,count\n")
        for k in sorted(dist.counts):
            if dist.counts[k] > 0:
                fh.write(f"{k},{dist.counts[k]}\n")
    return Path(path)


def read_degree_csv(path: str | Path) -> dict[int, int]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "degree,count":
        raise ParseError(f"{path}: expected header 'degree,count'")
    return {int(k): int(c) for k, c in (ln.split(",") for ln in lines[1:] if ln)}


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return _jsonable(float(obj))
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def dumps_json(doc: Any) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_json(doc: Any, path: str | Path) -> Path:
    with _open_for_write(path) as fh:
        fh.write(dumps_json(doc))
    return Path(path)
