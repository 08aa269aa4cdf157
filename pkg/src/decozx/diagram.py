"""Open string diagrams of weighted spiders on classical wires.

A diagram is a multigraph with two boundary rows. Nodes are green
spiders (parameter ``mu >= 0``), red spiders (parameter ``p`` in [0, 1])
or degree-0 scalar markers; every node carries a positive weight that
multiplies its tensor. Edges connect node ports and boundary ports; a
boundary port carries exactly one edge end, and an edge may join two
boundary ports directly (a bare wire). Spider legs are unordered, so the
graph is the whole datum.

Weight conventions for the generator constructors, with n incoming legs:
a green spider weighs 2**(n-1) and a red spider with m outgoing legs
weighs 2**(1-m). Cup, cap and identity are the phaseless green spiders
of those shapes, not separate node kinds. Builders that need exact
unweighted tensors (copy, parity) create weight-1 nodes directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .f2linalg import as_f2

__all__ = [
    "Diagram",
    "GREEN",
    "Node",
    "RED",
    "SCALAR",
    "affine_state",
    "bend_name",
    "big_green",
    "big_red",
    "cap",
    "compose_par",
    "compose_seq",
    "cup",
    "divide_registers",
    "empty",
    "fourier_gadget_state",
    "gather_registers",
    "green",
    "identity",
    "isomorphic",
    "matrix_arrow",
    "permutation_diagram",
    "red",
    "scalar",
    "swap",
    "unbend",
    "validate",
]

GREEN = "green"
RED = "red"
SCALAR = "scalar"

NODE = "node"
IN = "in"
OUT = "out"
_JUNCTION = "junction"

# An endpoint is ("node", id), ("in", port) or ("out", port).
Endpoint = tuple[str, int]
Edge = tuple[Endpoint, Endpoint]


@dataclass(frozen=True)
class Node:
    """One spider: kind, its parameter, and a multiplicative weight.

    ``param`` is mu for green nodes and p for red nodes; scalar nodes
    ignore it and carry their value in ``weight``.
    """

    kind: str
    param: float
    weight: float


@dataclass
class Diagram:
    """A diagram with ``n_in`` input wires and ``n_out`` output wires.

    Treated as an immutable value: operations return fresh diagrams and
    never mutate their arguments.
    """

    n_in: int
    n_out: int
    nodes: dict[int, Node] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)

    @property
    def arity(self) -> tuple[int, int]:
        return (self.n_in, self.n_out)

    def copy(self) -> "Diagram":
        return Diagram(self.n_in, self.n_out, dict(self.nodes), list(self.edges))

    def fresh_id(self) -> int:
        return max(self.nodes, default=-1) + 1

    def degree(self, nid: int) -> int:
        return sum((a == (NODE, nid)) + (b == (NODE, nid)) for a, b in self.edges)

    def node_ends(self, nid: int) -> list[tuple[int, int]]:
        """Edge ends at a node, as (edge index, slot) pairs."""
        out = []
        for ei, ends in enumerate(self.edges):
            for slot in (0, 1):
                if ends[slot] == (NODE, nid):
                    out.append((ei, slot))
        return out

    def port_end(self, side: str, port: int) -> tuple[int, int]:
        """The unique edge end at a boundary port."""
        for ei, ends in enumerate(self.edges):
            for slot in (0, 1):
                if ends[slot] == (side, port):
                    return (ei, slot)
        raise ValueError(f"no edge at {side} port {port}")


def validate(d: Diagram) -> list[str]:
    """Returns all structural problems of a diagram; empty means valid."""
    problems: list[str] = []
    if d.n_in < 0 or d.n_out < 0:
        problems.append("negative boundary arity")
        return problems
    for nid, node in d.nodes.items():
        if node.kind == GREEN:
            if node.param < 0:
                problems.append(f"node {nid}: green parameter must be >= 0")
            if node.weight <= 0:
                problems.append(f"node {nid}: weight must be positive")
        elif node.kind == RED:
            if not 0.0 <= node.param <= 1.0:
                problems.append(f"node {nid}: red parameter must lie in [0, 1]")
            if node.weight <= 0:
                problems.append(f"node {nid}: weight must be positive")
        elif node.kind == SCALAR:
            if node.weight < 0:
                problems.append(f"node {nid}: scalar value must be >= 0")
        else:
            problems.append(f"node {nid}: unknown kind {node.kind!r}")
    seen: dict[Endpoint, int] = {}
    for ei, (a, b) in enumerate(d.edges):
        for ep in (a, b):
            side, idx = ep
            if side == NODE:
                if idx not in d.nodes:
                    problems.append(f"edge {ei}: unknown node {idx}")
                elif d.nodes[idx].kind == SCALAR:
                    problems.append(f"edge {ei}: scalar nodes have no legs")
            elif side == IN:
                if not 0 <= idx < d.n_in:
                    problems.append(f"edge {ei}: input port {idx} out of range")
                seen[ep] = seen.get(ep, 0) + 1
            elif side == OUT:
                if not 0 <= idx < d.n_out:
                    problems.append(f"edge {ei}: output port {idx} out of range")
                seen[ep] = seen.get(ep, 0) + 1
            else:
                problems.append(f"edge {ei}: malformed endpoint {ep!r}")
    for port in [(IN, i) for i in range(d.n_in)] + [(OUT, i) for i in range(d.n_out)]:
        count = seen.get(port, 0)
        if count != 1:
            problems.append(f"{port[0]} port {port[1]} has {count} edge ends, wants 1")
    return problems


# ---------------------------------------------------------------------------
# generators


def green(n: int, m: int, mu: float = 1.0) -> Diagram:
    """Green spider with n inputs, m outputs and weight 2**(n-1)."""
    if n < 0 or m < 0:
        raise ValueError("arities must be >= 0")
    if mu < 0:
        raise ValueError("green parameter must be >= 0")
    node = Node(GREEN, float(mu), 2.0 ** (n - 1))
    edges: list[Edge] = [((IN, i), (NODE, 0)) for i in range(n)]
    edges += [((NODE, 0), (OUT, j)) for j in range(m)]
    return Diagram(n, m, {0: node}, edges)


def red(n: int, m: int, p: float = 0.0) -> Diagram:
    """Red spider with n inputs, m outputs and weight 2**(1-m)."""
    if n < 0 or m < 0:
        raise ValueError("arities must be >= 0")
    if not 0.0 <= p <= 1.0:
        raise ValueError("red parameter must lie in [0, 1]")
    node = Node(RED, float(p), 2.0 ** (1 - m))
    edges: list[Edge] = [((IN, i), (NODE, 0)) for i in range(n)]
    edges += [((NODE, 0), (OUT, j)) for j in range(m)]
    return Diagram(n, m, {0: node}, edges)


def scalar(s: float) -> Diagram:
    """Degree-0 diagram whose single entry is ``s``."""
    if s < 0:
        raise ValueError("scalar must be >= 0")
    return Diagram(0, 0, {0: Node(SCALAR, 0.0, float(s))}, [])


def identity(n: int) -> Diagram:
    """n bare wires."""
    if n < 0:
        raise ValueError("arities must be >= 0")
    return Diagram(n, n, {}, [((IN, i), (OUT, i)) for i in range(n)])


def swap() -> Diagram:
    """The wire crossing on two wires."""
    return Diagram(2, 2, {}, [((IN, 0), (OUT, 1)), ((IN, 1), (OUT, 0))])


def permutation_diagram(perm: Sequence[int]) -> Diagram:
    """Bare rewiring: input i exits at output ``perm[i]``."""
    w = len(perm)
    if sorted(perm) != list(range(w)):
        raise ValueError("not a permutation")
    return Diagram(w, w, {}, [((IN, i), (OUT, int(perm[i]))) for i in range(w)])


def cup() -> Diagram:
    """The 0 -> 2 bent wire; equals the phaseless green spider of that shape."""
    return green(0, 2, 1.0)


def cap() -> Diagram:
    """The 2 -> 0 bent wire; equals the phaseless green spider of that shape."""
    return green(2, 0, 1.0)


def empty() -> Diagram:
    return Diagram(0, 0, {}, [])


# ---------------------------------------------------------------------------
# composition


def _contract_junctions(
    nodes: dict[int, Node], edges: list[Edge], next_id: int
) -> tuple[dict[int, Node], list[Edge]]:
    """Removes transient junction endpoints by splicing their edge pairs.

    A junction always carries exactly two edge ends. A closed loop that
    survives with no node on it counts 2, recorded as a scalar node.
    """
    edges = list(edges)
    while True:
        locs: dict[int, list[tuple[int, int]]] = {}
        for ei, ends in enumerate(edges):
            for slot in (0, 1):
                if ends[slot][0] == _JUNCTION:
                    locs.setdefault(ends[slot][1], []).append((ei, slot))
        if not locs:
            return nodes, edges
        j = min(locs)
        (e1, s1), (e2, s2) = locs[j]
        if e1 == e2:
            del edges[e1]
            nodes[next_id] = Node(SCALAR, 0.0, 2.0)
            next_id += 1
            continue
        joined = (edges[e1][1 - s1], edges[e2][1 - s2])
        for ei in sorted((e1, e2), reverse=True):
            del edges[ei]
        edges.append(joined)


def compose_seq(first: Diagram, second: Diagram) -> Diagram:
    """Plugs ``first``'s outputs into ``second``'s inputs, in order."""
    if first.n_out != second.n_in:
        raise ValueError(
            f"arity mismatch: {first.n_out} outputs composed into {second.n_in} inputs"
        )
    offset = first.fresh_id()
    nodes = dict(first.nodes)
    for nid, node in second.nodes.items():
        nodes[nid + offset] = node

    def from_first(ep: Endpoint) -> Endpoint:
        return (_JUNCTION, ep[1]) if ep[0] == OUT else ep

    def from_second(ep: Endpoint) -> Endpoint:
        if ep[0] == NODE:
            return (NODE, ep[1] + offset)
        if ep[0] == IN:
            return (_JUNCTION, ep[1])
        return ep

    edges = [(from_first(a), from_first(b)) for a, b in first.edges]
    edges += [(from_second(a), from_second(b)) for a, b in second.edges]
    next_id = max(nodes, default=-1) + 1
    nodes, edges = _contract_junctions(nodes, edges, next_id)
    return Diagram(first.n_in, second.n_out, nodes, edges)


def compose_par(left: Diagram, right: Diagram) -> Diagram:
    """Places ``right`` below ``left``; its ports shift past ``left``'s."""
    offset = left.fresh_id()
    nodes = dict(left.nodes)
    for nid, node in right.nodes.items():
        nodes[nid + offset] = node

    def shift(ep: Endpoint) -> Endpoint:
        if ep[0] == NODE:
            return (NODE, ep[1] + offset)
        if ep[0] == IN:
            return (IN, ep[1] + left.n_in)
        return (OUT, ep[1] + left.n_out)

    edges = list(left.edges) + [(shift(a), shift(b)) for a, b in right.edges]
    return Diagram(left.n_in + right.n_in, left.n_out + right.n_out, nodes, edges)


def bend_name(d: Diagram) -> Diagram:
    """Turns an n -> m diagram into the 0 -> (m + n) state that names it.

    Each input is bent around with a cup; the state's outputs are the
    original outputs followed by the bent inputs. The cups carry the
    usual 1/2 weight, so the state's vector is 2**(-n) times the
    column-stacked matrix of ``d``.
    """
    base = d.fresh_id()
    nodes = dict(d.nodes)
    for i in range(d.n_in):
        nodes[base + i] = Node(GREEN, 1.0, 0.5)

    def bend(ep: Endpoint) -> Endpoint:
        return (NODE, base + ep[1]) if ep[0] == IN else ep

    edges = [(bend(a), bend(b)) for a, b in d.edges]
    edges += [((NODE, base + i), (OUT, d.n_out + i)) for i in range(d.n_in)]
    return Diagram(0, d.n_out + d.n_in, nodes, edges)


def unbend(state: Diagram, n_inputs: int) -> Diagram:
    """Bends the last ``n_inputs`` output legs of a state back into inputs.

    Inverse of :func:`bend_name` up to graph isomorphism: a leg that ends
    on a cup is cancelled outright (the snake), any other leg gets a
    weight-2 cap, so the result's matrix is 2**n_inputs times the state's
    entries read as (outputs, inputs).
    """
    if state.n_in != 0:
        raise ValueError("can only unbend a state")
    if not 0 <= n_inputs <= state.n_out:
        raise ValueError("more legs requested than the state has")
    m = state.n_out - n_inputs
    work = state.copy()
    for j in range(n_inputs):
        ei, slot = work.port_end(OUT, m + j)
        other = work.edges[ei][1 - slot]
        cancelled = False
        if other[0] == NODE:
            node = work.nodes[other[1]]
            if (
                node.kind == GREEN
                and node.param == 1.0
                and node.weight == 0.5
                and work.degree(other[1]) == 2
            ):
                # snake: drop the cup and hand its far leg to the new input
                far_ei, far_slot = [
                    end for end in work.node_ends(other[1]) if end != (ei, 1 - slot)
                ][0]
                ends = list(work.edges[far_ei])
                ends[far_slot] = (IN, j)
                work.edges[far_ei] = (ends[0], ends[1])
                del work.edges[ei]
                del work.nodes[other[1]]
                cancelled = True
        if not cancelled:
            cap_id = work.fresh_id()
            work.nodes[cap_id] = Node(GREEN, 1.0, 2.0)
            ends = list(work.edges[ei])
            ends[slot] = (NODE, cap_id)
            work.edges[ei] = (ends[0], ends[1])
            work.edges.append(((NODE, cap_id), (IN, j)))
    return Diagram(n_inputs, m, work.nodes, work.edges)


# ---------------------------------------------------------------------------
# structured builders


def matrix_arrow(a) -> Diagram:
    """Diagram an m x n GF(2) matrix as a copy/parity bipartite graph.

    One weight-1 green copy node per input, one weight-1 red parity node
    per output, an edge wherever the matrix has a 1. Evaluates exactly to
    ``sum_y |a @ y><y|`` with no extra scalar, and composes functorially.
    """
    mat = as_f2(a)
    if mat.ndim != 2:
        raise ValueError("expected a matrix")
    m, n = mat.shape
    nodes = {i: Node(GREEN, 1.0, 1.0) for i in range(n)}
    nodes.update({n + j: Node(RED, 0.0, 1.0) for j in range(m)})
    edges: list[Edge] = [((IN, i), (NODE, i)) for i in range(n)]
    edges += [
        ((NODE, i), (NODE, n + j))
        for j in range(m)
        for i in range(n)
        if mat[j, i]
    ]
    edges += [((NODE, n + j), (OUT, j)) for j in range(m)]
    return Diagram(n, m, nodes, edges)


def affine_state(basis, offset, scale: float = 1.0) -> Diagram:
    """State whose vector is ``scale * sum_y |basis @ y + offset>``.

    Built from the matrix-arrow graph with its inputs sealed by the copy
    nodes themselves (summing over all coefficient vectors), a NOT node
    on every output where the offset bit is 1, and a scalar marker when
    ``scale`` is not 1.
    """
    a = as_f2(basis)
    x = as_f2(offset)
    if a.ndim != 2 or x.shape != (a.shape[0],):
        raise ValueError("offset length must match basis rows")
    if scale < 0:
        raise ValueError("scale must be >= 0")
    n, k = a.shape
    nodes = {i: Node(GREEN, 1.0, 1.0) for i in range(k)}
    nodes.update({k + j: Node(RED, 0.0, 1.0) for j in range(n)})
    edges: list[Edge] = [
        ((NODE, i), (NODE, k + j))
        for j in range(n)
        for i in range(k)
        if a[j, i]
    ]
    nid = k + n
    for j in range(n):
        if x[j]:
            nodes[nid] = Node(RED, 1.0, 1.0)  # NOT
            edges.append(((NODE, k + j), (NODE, nid)))
            edges.append(((NODE, nid), (OUT, j)))
            nid += 1
        else:
            edges.append(((NODE, k + j), (OUT, j)))
    if scale != 1.0:
        nodes[nid] = Node(SCALAR, 0.0, float(scale))
    return Diagram(0, n, nodes, edges)


def fourier_gadget_state(coeffs, scale: float) -> Diagram:
    """State realizing strictly positive Fourier data as a gadget graph.

    One weight-1 green copy node per wire; for each nonzero index
    pattern, a weight-1 red parity node collects the wires where the
    pattern has a 1 and closes on a degree-1 green effect carrying that
    coefficient; a scalar marker carries ``scale``. Evaluates exactly to

        scale * prod over nonzero y of coeffs[y] ** <x, y>   at entry x.
    """
    lam = np.asarray(coeffs, dtype=float)
    size = lam.shape[0] + 1
    if lam.ndim != 1 or size & (size - 1):
        raise ValueError("coefficient count must be 2**n - 1")
    if scale <= 0 or (lam <= 0).any():
        raise ValueError("full support required: scale and coefficients positive")
    n = size.bit_length() - 1
    nodes = {i: Node(GREEN, 1.0, 1.0) for i in range(n)}
    edges: list[Edge] = [((NODE, i), (OUT, i)) for i in range(n)]
    for y in range(1, size):
        parity_id = n + 2 * (y - 1)
        effect_id = parity_id + 1
        nodes[parity_id] = Node(RED, 0.0, 1.0)
        nodes[effect_id] = Node(GREEN, float(lam[y - 1]), 1.0)
        for i in range(n):
            if (y >> (n - 1 - i)) & 1:
                edges.append(((NODE, i), (NODE, parity_id)))
        edges.append(((NODE, parity_id), (NODE, effect_id)))
    nodes[n + 2 * (size - 1)] = Node(SCALAR, 0.0, float(scale))
    return Diagram(0, n, nodes, edges)


def divide_registers(n_regs: int, size: int) -> Diagram:
    """Rewires ``n_regs`` size-``size`` registers into component order."""
    perm = [0] * (n_regs * size)
    for r in range(n_regs):
        for i in range(size):
            perm[r * size + i] = i * n_regs + r
    return permutation_diagram(perm)


def gather_registers(n_regs: int, size: int) -> Diagram:
    """Inverse of :func:`divide_registers` on the same shape."""
    perm = [0] * (n_regs * size)
    for r in range(n_regs):
        for i in range(size):
            perm[i * n_regs + r] = r * size + i
    return permutation_diagram(perm)


def _big_spider(builder, n: int, m: int, params: Sequence[float]) -> Diagram:
    k = len(params)
    if k < 1:
        raise ValueError("need at least one component")
    d = reduce(compose_par, (builder(n, m, p) for p in params))
    d = compose_seq(divide_registers(n, k), d) if n else d
    return compose_seq(d, gather_registers(m, k)) if m else d


def big_green(n: int, m: int, params: Sequence[float]) -> Diagram:
    """Componentwise green spider on registers of ``len(params)`` wires."""
    return _big_spider(green, n, m, params)


def big_red(n: int, m: int, params: Sequence[float]) -> Diagram:
    """Componentwise red spider on registers of ``len(params)`` wires."""
    return _big_spider(red, n, m, params)


# ---------------------------------------------------------------------------
# graph isomorphism


def _port_edges(d: Diagram):
    from collections import Counter

    return Counter(
        tuple(sorted((a, b)))
        for a, b in d.edges
        if a[0] != NODE and b[0] != NODE
    )


def _signature(d: Diagram, nid: int):
    node = d.nodes[nid]
    loops = sum(1 for a, b in d.edges if a == (NODE, nid) and b == (NODE, nid))
    ports = sorted(
        ends[1 - slot]
        for ends in d.edges
        for slot in (0, 1)
        if ends[slot] == (NODE, nid) and ends[1 - slot][0] != NODE
    )
    return (node.kind, node.param, node.weight, d.degree(nid), loops, tuple(ports))


def isomorphic(d1: Diagram, d2: Diagram) -> bool:
    """Boundary-preserving graph isomorphism with exact labels.

    Ports must match identically; nodes may be relabeled as long as
    kinds, parameters, weights and the edge multiset are preserved.
    """
    from collections import Counter

    if d1.arity != d2.arity:
        return False
    if len(d1.nodes) != len(d2.nodes) or len(d1.edges) != len(d2.edges):
        return False
    if _port_edges(d1) != _port_edges(d2):
        return False
    sig1 = {nid: _signature(d1, nid) for nid in d1.nodes}
    sig2 = {nid: _signature(d2, nid) for nid in d2.nodes}
    if Counter(sig1.values()) != Counter(sig2.values()):
        return False

    def adjacency(d: Diagram) -> dict[int, Counter]:
        adj: dict[int, Counter] = {nid: Counter() for nid in d.nodes}
        for a, b in d.edges:
            if a[0] == NODE and b[0] == NODE and a[1] != b[1]:
                adj[a[1]][b[1]] += 1
                adj[b[1]][a[1]] += 1
        return adj

    adj1, adj2 = adjacency(d1), adjacency(d2)
    candidates = {
        nid: [m for m in d2.nodes if sig2[m] == sig1[nid]] for nid in d1.nodes
    }
    order = sorted(d1.nodes, key=lambda nid: (len(candidates[nid]), nid))
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def extend(pos: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        for v in candidates[u]:
            if v in used:
                continue
            if all(adj1[u][w] == adj2[v][assignment[w]] for w in assignment):
                assignment[u] = v
                used.add(v)
                if extend(pos + 1):
                    return True
                del assignment[u]
                used.remove(v)
        return False

    return extend(0)
