"""JSON formats for diagrams, matrices and normal form data.

Diagram files::

    {"inputs": [0], "outputs": [0, 1],
     "nodes": [{"id": 0, "kind": "green", "param": 1.0, "weight": 1.0}],
     "edges": [[{"in": 0}, {"node": 0}],
               [{"node": 0}, {"out": 0}], [{"node": 0}, {"out": 1}]]}

``inputs`` and ``outputs`` list distinct port ids; their order is the
wire order. A node's ``weight`` defaults to 1.0 and ``param`` defaults
to 1.0 for green, 0.0 for red; a scalar node stores its value in
``weight`` and takes no edges.

Matrix files::

    {"in_qubits": 1, "out_qubits": 1, "entries": [1.0, 0.0, 0.0, 1.0]}

with entries row-major, one row per output index.

Normal form data serializes to a fixed key order: ``n``, ``k``, ``A``
(row-major bits), ``x``, ``Lambda``, ``lambda``; the zero vector's
form is ``{"zero": n}``. Serialization is deterministic, so equal
normal forms produce byte-identical lines.
"""

from __future__ import annotations

import json

import numpy as np

from .diagram import GREEN, IN, NODE, OUT, RED, SCALAR, Diagram, Node, validate
from .normalform import NormalForm, ZeroForm

__all__ = [
    "diagram_from_dict",
    "diagram_to_dict",
    "dumps",
    "matrix_from_dict",
    "matrix_to_dict",
    "normal_form_from_dict",
    "normal_form_to_dict",
]

_DEFAULT_PARAM = {GREEN: 1.0, RED: 0.0}


def dumps(obj) -> str:
    """Single-line JSON with a stable key order (insertion order)."""
    return json.dumps(obj, allow_nan=False)


def _endpoint_to_obj(ep):
    tag, index = ep
    if tag == NODE:
        return {"node": index}
    if tag == IN:
        return {"in": index}
    return {"out": index}


def diagram_to_dict(d: Diagram) -> dict:
    """Serializable form of a diagram; inverse of :func:`diagram_from_dict`."""
    nodes = []
    for nid in sorted(d.nodes):
        node = d.nodes[nid]
        if node.kind == SCALAR:
            nodes.append({"id": nid, "kind": node.kind, "weight": node.weight})
        else:
            nodes.append(
                {"id": nid, "kind": node.kind, "param": node.param, "weight": node.weight}
            )
    return {
        "inputs": list(range(d.n_in)),
        "outputs": list(range(d.n_out)),
        "nodes": nodes,
        "edges": [[_endpoint_to_obj(a), _endpoint_to_obj(b)] for a, b in d.edges],
    }


def _port_positions(data, key) -> dict[int, int]:
    ids = data.get(key, [])
    if not isinstance(ids, list) or any(not isinstance(i, int) for i in ids):
        raise ValueError(f"'{key}' must be a list of integer port ids")
    if len(set(ids)) != len(ids):
        raise ValueError(f"'{key}' contains duplicate port ids")
    return {pid: pos for pos, pid in enumerate(ids)}


def _number(obj, what: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ValueError(f"{what} must be a number")
    return float(obj)


def diagram_from_dict(data) -> Diagram:
    """Parses and validates a diagram; raises ValueError on any defect."""
    if not isinstance(data, dict):
        raise ValueError("diagram file must be a JSON object")
    ins = _port_positions(data, "inputs")
    outs = _port_positions(data, "outputs")

    nodes: dict[int, Node] = {}
    for entry in data.get("nodes", []):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise ValueError("every node needs an integer 'id'")
        nid = entry["id"]
        if nid in nodes:
            raise ValueError(f"duplicate node id {nid}")
        kind = entry.get("kind")
        if kind not in (GREEN, RED, SCALAR):
            raise ValueError(f"node {nid}: unknown kind {kind!r}")
        weight = _number(entry.get("weight", 1.0), f"node {nid} weight")
        if kind == SCALAR:
            nodes[nid] = Node(SCALAR, 0.0, weight)
        else:
            param = _number(
                entry.get("param", _DEFAULT_PARAM[kind]), f"node {nid} param"
            )
            nodes[nid] = Node(kind, param, weight)

    def parse_endpoint(obj):
        if not isinstance(obj, dict) or len(obj) != 1:
            raise ValueError(f"bad endpoint {obj!r}")
        (key, index), = obj.items()
        if not isinstance(index, int):
            raise ValueError(f"bad endpoint {obj!r}")
        if key == "node":
            if index not in nodes:
                raise ValueError(f"edge references unknown node {index}")
            return (NODE, index)
        if key == "in":
            if index not in ins:
                raise ValueError(f"edge references unknown input port {index}")
            return (IN, ins[index])
        if key == "out":
            if index not in outs:
                raise ValueError(f"edge references unknown output port {index}")
            return (OUT, outs[index])
        raise ValueError(f"bad endpoint {obj!r}")

    edges = []
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ValueError("'edges' must be a list")
    for raw in raw_edges:
        if not isinstance(raw, list) or len(raw) != 2:
            raise ValueError(f"bad edge {raw!r}: expected two endpoints")
        edges.append((parse_endpoint(raw[0]), parse_endpoint(raw[1])))

    d = Diagram(len(ins), len(outs), nodes, edges)
    problems = validate(d)
    if problems:
        raise ValueError("; ".join(problems))
    return d


def matrix_to_dict(mat) -> dict:
    """Serializable form of a matrix with power-of-two dimensions."""
    arr = np.asarray(mat, dtype=float)
    from .semantics import matrix_wires

    m, n = matrix_wires(arr)
    return {
        "in_qubits": n,
        "out_qubits": m,
        "entries": [float(x) for x in arr.reshape(-1)],
    }


def matrix_from_dict(data) -> np.ndarray:
    """Parses a matrix file back into its row-major array."""
    if not isinstance(data, dict):
        raise ValueError("matrix file must be a JSON object")
    for key in ("in_qubits", "out_qubits"):
        if not isinstance(data.get(key), int) or data[key] < 0:
            raise ValueError(f"'{key}' must be a nonnegative integer")
    n, m = data["in_qubits"], data["out_qubits"]
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise ValueError("'entries' must be a list of numbers")
    expected = 2 ** (m + n)
    if len(entries) != expected:
        raise ValueError(f"expected {expected} entries, got {len(entries)}")
    values = [_number(x, "matrix entry") for x in entries]
    return np.array(values, dtype=float).reshape(2**m, 2**n)


def normal_form_to_dict(nf) -> dict:
    """Canonical datum with fixed key order; zero forms become {"zero": n}."""
    if isinstance(nf, ZeroForm):
        return {"zero": nf.wires}
    return {
        "n": nf.wires,
        "k": int(nf.basis.shape[1]),
        "A": [int(b) for b in nf.basis.reshape(-1)],
        "x": [int(b) for b in nf.offset],
        "Lambda": float(nf.fourier.scale),
        "lambda": [float(c) for c in nf.fourier.coeffs],
    }


def normal_form_from_dict(data):
    """Parses a canonical datum produced by :func:`normal_form_to_dict`."""
    from .fourier import FourierData

    if not isinstance(data, dict):
        raise ValueError("normal form must be a JSON object")
    if "zero" in data:
        if not isinstance(data["zero"], int) or data["zero"] < 0:
            raise ValueError("'zero' must be a nonnegative wire count")
        return ZeroForm(data["zero"])
    try:
        n, k = data["n"], data["k"]
        basis = np.array(data["A"], dtype=np.uint8).reshape(n, k)
        offset = np.array(data["x"], dtype=np.uint8)
        scale = float(data["Lambda"])
        coeffs = np.array(data["lambda"], dtype=float)
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed normal form: {err}") from err
    if offset.size != n:
        raise ValueError("offset length must equal the wire count")
    return NormalForm(n, basis, offset, FourierData(k, scale, coeffs))
