"""Sound local rewriting of diagrams.

Every rule application follows the same recipe: match a set of nodes,
build a replacement subdiagram whose outputs line up with the dangling
edge ends of the matched region (ordered by edge index), verify that
the replacement has the same interpretation as the region it replaces,
and splice it in. The verification step means a malformed match or a
buggy replacement formula raises ``RuleSoundnessError`` instead of
silently changing the diagram's meaning.

Rule identifiers used in traces:

* ``F1`` green spider fusion, ``F2`` red spider fusion (site: edge index)
* ``M`` degree-1 colour conversion (site: node id)
* ``L`` hub expansion into a Fourier gadget (site: hub node id)
* ``ID`` identity spider removal (site: node id)
* ``COPY`` sharp state copied through a green spider (site: state id, spider id)
* ``BIALG`` bialgebra square (site: edge index)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import (
    GREEN,
    NODE,
    OUT,
    RED,
    SCALAR,
    Diagram,
    Edge,
    Endpoint,
    Node,
    _JUNCTION,
    _contract_junctions,
    fourier_gadget_state,
)
from .fourier import fourier_synthesize
from .semantics import approx_equal, evaluate

__all__ = [
    "RuleInstance",
    "RuleMatchError",
    "RuleSoundnessError",
    "SOUNDNESS_TOLERANCE",
    "apply_rule",
    "bialgebra",
    "check_rule_soundness",
    "color_convert_state",
    "copy_rule",
    "find_bialgebra_sites",
    "find_convert_sites",
    "find_copy_sites",
    "find_fusion_sites",
    "find_identity_sites",
    "find_rule_l_sites",
    "fuse_green",
    "fuse_red",
    "prob_xor",
    "apply_rule_L",
    "remove_identity",
    "simplify",
    "simplify_traced",
]

SOUNDNESS_TOLERANCE = 1e-9


class RuleMatchError(ValueError):
    """The site does not match the rule's left-hand side."""


class RuleSoundnessError(ValueError):
    """The replacement does not preserve the interpretation."""


@dataclass(frozen=True)
class RuleInstance:
    """One applied rewrite: rule id, site, and extra parameters."""

    rule: str
    site: tuple[int, ...]
    params: dict = field(default_factory=dict)


def prob_xor(p: float, q: float) -> float:
    """Probability that exactly one of two independent p/q coins is 1."""
    return p + q - 2.0 * p * q


# ---------------------------------------------------------------------------
# shared machinery: interface extraction, soundness gate, splicing


def _interface(d: Diagram, matched: set[int]):
    """Splits edges around the matched nodes.

    Returns (dangling, internal): ``internal`` lists indices of edges
    with both ends on matched nodes; ``dangling`` lists, in edge index
    order, pairs (edge index, slot of the surviving outer end).
    """
    dangling: list[tuple[int, int]] = []
    internal: list[int] = []
    for ei, (a, b) in enumerate(d.edges):
        a_in = a[0] == NODE and a[1] in matched
        b_in = b[0] == NODE and b[1] in matched
        if a_in and b_in:
            internal.append(ei)
        elif a_in:
            dangling.append((ei, 1))
        elif b_in:
            dangling.append((ei, 0))
    return dangling, internal


def _extract(d: Diagram, matched: set[int], dangling, internal) -> Diagram:
    """The matched region as a standalone state, one output per dangling end."""
    nodes = {nid: d.nodes[nid] for nid in matched}
    edges: list[Edge] = [d.edges[ei] for ei in internal]
    for k, (ei, outer_slot) in enumerate(dangling):
        edges.append((d.edges[ei][1 - outer_slot], (OUT, k)))
    return Diagram(0, len(dangling), nodes, edges)


def _splice(d: Diagram, matched: set[int], dangling, internal, replacement: Diagram) -> Diagram:
    """Replaces the matched region by ``replacement`` along the interface."""
    nodes = {nid: node for nid, node in d.nodes.items() if nid not in matched}
    offset = d.fresh_id()
    for nid, node in replacement.nodes.items():
        nodes[nid + offset] = node

    junction_of = {ei: k for k, (ei, _) in enumerate(dangling)}
    internal_set = set(internal)
    edges: list[Edge] = []
    for ei, ends in enumerate(d.edges):
        if ei in internal_set:
            continue
        k = junction_of.get(ei)
        if k is None:
            edges.append(ends)
        else:
            outer_slot = dangling[k][1]
            kept = ends[outer_slot]
            joined: Edge = ((kept, (_JUNCTION, k)) if outer_slot == 0
                            else ((_JUNCTION, k), kept))
            edges.append(joined)

    def from_replacement(ep: Endpoint) -> Endpoint:
        if ep[0] == NODE:
            return (NODE, ep[1] + offset)
        return (_JUNCTION, ep[1])

    edges += [(from_replacement(a), from_replacement(b)) for a, b in replacement.edges]
    nodes, edges = _contract_junctions(nodes, edges, max(nodes, default=-1) + 1)
    return Diagram(d.n_in, d.n_out, nodes, edges)


def _gated_splice(d, matched, dangling, internal, replacement, rule, site) -> Diagram:
    before = evaluate(_extract(d, matched, dangling, internal))
    after = evaluate(replacement)
    if not approx_equal(before, after, SOUNDNESS_TOLERANCE):
        raise RuleSoundnessError(
            f"rule shape rejected: {rule} at {site} would change the interpretation"
        )
    return _splice(d, matched, dangling, internal, replacement)


def _state_of(node: Node, legs: int) -> Diagram:
    """A single node wired straight to ``legs`` outputs."""
    return Diagram(0, legs, {0: node}, [((NODE, 0), (OUT, k)) for k in range(legs)])


def _node_at(d: Diagram, nid: int, kinds=(GREEN, RED)) -> Node:
    node = d.nodes.get(nid)
    if node is None:
        raise RuleMatchError(f"no node {nid}")
    if node.kind not in kinds:
        raise RuleMatchError(f"node {nid} is {node.kind}, expected one of {kinds}")
    return node


# ---------------------------------------------------------------------------
# fusion


def _fuse(d: Diagram, edge_index: int, kind: str, rule: str) -> Diagram:
    if not 0 <= edge_index < len(d.edges):
        raise RuleMatchError(f"no edge {edge_index}")
    a, b = d.edges[edge_index]
    if a[0] != NODE or b[0] != NODE or a[1] == b[1]:
        raise RuleMatchError("fusion needs an edge between two distinct spiders")
    n1 = _node_at(d, a[1], (kind,))
    n2 = _node_at(d, b[1], (kind,))
    matched = {a[1], b[1]}
    dangling, internal = _interface(d, matched)
    between = loops = 0
    for ei in internal:
        x, y = d.edges[ei]
        if x[1] == y[1]:
            loops += 1
        else:
            between += 1
    if kind == GREEN:
        merged = Node(GREEN, n1.param * n2.param, n1.weight * n2.weight)
    else:
        weight = n1.weight * n2.weight * 2.0 ** (between - 1 + loops)
        merged = Node(RED, prob_xor(n1.param, n2.param), weight)
    replacement = _state_of(merged, len(dangling))
    return _gated_splice(d, matched, dangling, internal, replacement, rule, (edge_index,))


def fuse_green(d: Diagram, edge_index: int) -> Diagram:
    """Merges the two green spiders joined by the given edge."""
    return _fuse(d, edge_index, GREEN, "F1")


def fuse_red(d: Diagram, edge_index: int) -> Diagram:
    """Merges the two red spiders joined by the given edge."""
    return _fuse(d, edge_index, RED, "F2")


def find_fusion_sites(d: Diagram) -> list[tuple[str, int]]:
    """All (rule id, edge index) fusion sites, in edge order."""
    sites = []
    for ei, (a, b) in enumerate(d.edges):
        if a[0] != NODE or b[0] != NODE or a[1] == b[1]:
            continue
        k1, k2 = d.nodes[a[1]].kind, d.nodes[b[1]].kind
        if k1 == k2 == GREEN:
            sites.append(("F1", ei))
        elif k1 == k2 == RED:
            sites.append(("F2", ei))
    return sites


# ---------------------------------------------------------------------------
# identity removal


def remove_identity(d: Diagram, node_id: int) -> Diagram:
    """Deletes a weight-1 phase-free degree-2 spider, connecting its legs."""
    node = _node_at(d, node_id)
    plain = (node.kind == GREEN and node.param == 1.0) or (
        node.kind == RED and node.param == 0.0
    )
    if d.degree(node_id) != 2 or node.weight != 1.0 or not plain:
        raise RuleMatchError(f"node {node_id} is not an identity spider")
    matched = {node_id}
    dangling, internal = _interface(d, matched)
    if len(dangling) == 2:
        replacement = Diagram(0, 2, {}, [((OUT, 0), (OUT, 1))])
    else:  # the spider's legs form a self-loop: a free circle
        replacement = Diagram(0, 0, {0: Node(SCALAR, 0.0, 2.0)}, [])
    return _gated_splice(d, matched, dangling, internal, replacement, "ID", (node_id,))


def find_identity_sites(d: Diagram) -> list[int]:
    """Node ids of removable identity spiders, ascending."""
    sites = []
    for nid in sorted(d.nodes):
        node = d.nodes[nid]
        if node.kind == SCALAR or node.weight != 1.0 or d.degree(nid) != 2:
            continue
        if (node.kind == GREEN and node.param == 1.0) or (
            node.kind == RED and node.param == 0.0
        ):
            sites.append(nid)
    return sites


# ---------------------------------------------------------------------------
# degree-1 colour conversion


def color_convert_state(d: Diagram, node_id: int) -> Diagram:
    """Swaps the colour of a degree-1 spider, emitting the scalar that balances it.

    A red endpoint with probability p < 1 becomes a green one with ratio
    p / (1 - p) next to the scalar 1 - p; a green endpoint with ratio mu
    becomes a red one with probability mu / (1 + mu) next to 1 + mu.
    The sharp red state p = 1 has no green counterpart.
    """
    node = _node_at(d, node_id)
    if d.degree(node_id) != 1:
        raise RuleMatchError(f"node {node_id} must have exactly one leg")
    if node.kind == RED:
        if node.param == 1.0:
            raise RuleMatchError("p = 1 is a pole: no green form exists")
        flipped = Node(GREEN, node.param / (1.0 - node.param), node.weight)
        balance = 1.0 - node.param
    else:
        flipped = Node(RED, node.param / (1.0 + node.param), node.weight)
        balance = 1.0 + node.param
    matched = {node_id}
    dangling, internal = _interface(d, matched)
    replacement = Diagram(
        0, 1,
        {0: flipped, 1: Node(SCALAR, 0.0, balance)},
        [((NODE, 0), (OUT, 0))],
    )
    return _gated_splice(d, matched, dangling, internal, replacement, "M", (node_id,))


def find_convert_sites(d: Diagram) -> list[int]:
    """Degree-1 spiders whose colour can be flipped, ascending node id."""
    return [
        nid
        for nid in sorted(d.nodes)
        if d.nodes[nid].kind in (GREEN, RED)
        and d.degree(nid) == 1
        and not (d.nodes[nid].kind == RED and d.nodes[nid].param == 1.0)
    ]


# ---------------------------------------------------------------------------
# copy rule


def copy_rule(d: Diagram, state_id: int, spider_id: int) -> Diagram:
    """Pushes a sharp red point mass through a green spider.

    The state must be a degree-1 red node with probability exactly 0 or
    1; it reappears on every remaining leg of the spider, and the freed
    weights collapse into one scalar.
    """
    state = _node_at(d, state_id, (RED,))
    if d.degree(state_id) != 1 or state.param not in (0.0, 1.0):
        raise RuleMatchError("copy needs a degree-1 red state with p exactly 0 or 1")
    (ei, slot), = d.node_ends(state_id)
    other = d.edges[ei][1 - slot]
    if other != (NODE, spider_id):
        raise RuleMatchError(f"state {state_id} is not plugged into node {spider_id}")
    spider = _node_at(d, spider_id, (GREEN,))
    matched = {state_id, spider_id}
    dangling, internal = _interface(d, matched)
    bit = int(state.param)
    value = state.weight * spider.weight * spider.param**bit
    nodes = {k: Node(RED, state.param, 1.0) for k in range(len(dangling))}
    edges: list[Edge] = [((NODE, k), (OUT, k)) for k in range(len(dangling))]
    if value != 1.0:
        nodes[len(dangling)] = Node(SCALAR, 0.0, value)
    replacement = Diagram(0, len(dangling), nodes, edges)
    return _gated_splice(
        d, matched, dangling, internal, replacement, "COPY", (state_id, spider_id)
    )


def find_copy_sites(d: Diagram) -> list[tuple[int, int]]:
    """(state id, spider id) pairs where the copy rule applies."""
    sites = []
    for nid in sorted(d.nodes):
        node = d.nodes[nid]
        if node.kind != RED or node.param not in (0.0, 1.0) or d.degree(nid) != 1:
            continue
        (ei, slot), = d.node_ends(nid)
        other = d.edges[ei][1 - slot]
        if other[0] == NODE and other[1] != nid and d.nodes[other[1]].kind == GREEN:
            sites.append((nid, other[1]))
    return sites


# ---------------------------------------------------------------------------
# bialgebra


def bialgebra(d: Diagram, edge_index: int) -> Diagram:
    """Expands a single plain green-red edge into the complete bipartite square."""
    if not 0 <= edge_index < len(d.edges):
        raise RuleMatchError(f"no edge {edge_index}")
    a, b = d.edges[edge_index]
    if a[0] != NODE or b[0] != NODE or a[1] == b[1]:
        raise RuleMatchError("bialgebra needs an edge between two distinct spiders")
    kinds = {d.nodes[a[1]].kind: a[1], d.nodes[b[1]].kind: b[1]}
    if set(kinds) != {GREEN, RED}:
        raise RuleMatchError("bialgebra needs one green and one red spider")
    gid, rid = kinds[GREEN], kinds[RED]
    if d.nodes[gid].param != 1.0 or d.nodes[rid].param != 0.0:
        raise RuleMatchError("bialgebra needs a phase-free green/red pair")
    matched = {gid, rid}
    dangling, internal = _interface(d, matched)
    if len(internal) != 1:
        raise RuleMatchError("bialgebra needs exactly one edge inside the match")

    sides = []
    for ei, outer_slot in dangling:
        sides.append(d.edges[ei][1 - outer_slot][1])
    nodes: dict[int, Node] = {}
    edges: list[Edge] = []
    for k, side in enumerate(sides):
        kind = RED if side == gid else GREEN
        nodes[k] = Node(kind, 0.0 if kind == RED else 1.0, 1.0)
        edges.append(((NODE, k), (OUT, k)))
    for i, si in enumerate(sides):
        for j, sj in enumerate(sides):
            if si == gid and sj == rid:
                edges.append(((NODE, i), (NODE, j)))
    value = d.nodes[gid].weight * d.nodes[rid].weight
    if value != 1.0:
        nodes[len(sides)] = Node(SCALAR, 0.0, value)
    replacement = Diagram(0, len(sides), nodes, edges)
    return _gated_splice(
        d, matched, dangling, internal, replacement, "BIALG", (edge_index,)
    )


def find_bialgebra_sites(d: Diagram) -> list[int]:
    """Edge indices where the bialgebra square applies."""
    loops = {nid for a, b in d.edges if a == b and a[0] == NODE for nid in (a[1],)}
    pair_count: dict[tuple[int, int], int] = {}
    for a, b in d.edges:
        if a[0] == NODE and b[0] == NODE and a[1] != b[1]:
            pair_count[tuple(sorted((a[1], b[1])))] = (
                pair_count.get(tuple(sorted((a[1], b[1]))), 0) + 1
            )
    sites = []
    for ei, (a, b) in enumerate(d.edges):
        if a[0] != NODE or b[0] != NODE or a[1] == b[1]:
            continue
        kinds = {d.nodes[a[1]].kind: a[1], d.nodes[b[1]].kind: b[1]}
        if set(kinds) != {GREEN, RED}:
            continue
        if d.nodes[kinds[GREEN]].param != 1.0 or d.nodes[kinds[RED]].param != 0.0:
            continue
        if a[1] in loops or b[1] in loops:
            continue
        if pair_count[tuple(sorted((a[1], b[1])))] != 1:
            continue
        sites.append(ei)
    return sites


# ---------------------------------------------------------------------------
# hub expansion


def _match_rule_l(d: Diagram, hub_id: int):
    """Matches the hub shape; returns (matched, dangling, internal, ratios, hub)."""
    hub = _node_at(d, hub_id, (GREEN,))
    if hub.param <= 0.0:
        raise RuleMatchError("hub ratio must be positive")
    legs = d.node_ends(hub_id)
    if not legs:
        raise RuleMatchError("hub must have at least one leg")
    reds = []
    for ei, slot in legs:
        other = d.edges[ei][1 - slot]
        if other[0] != NODE or other[1] == hub_id:
            raise RuleMatchError("every hub leg must reach a distinct red spider")
        reds.append(other[1])
    if len(set(reds)) != len(reds):
        raise RuleMatchError("every hub leg must reach a distinct red spider")
    effects: dict[int, float] = {}
    effect_ids = set()
    red_weight = 1.0
    for rid in reds:
        rnode = _node_at(d, rid, (RED,))
        if rnode.param != 0.0 or d.degree(rid) != 3:
            raise RuleMatchError("hub legs must reach plain degree-3 red spiders")
        red_weight *= rnode.weight
        onward = 0
        for ei, slot in d.node_ends(rid):
            other = d.edges[ei][1 - slot]
            if other == (NODE, hub_id):
                continue
            if other[0] == NODE and other[1] != rid and d.nodes[other[1]].kind == GREEN:
                candidate = other[1]
                if d.degree(candidate) == 1 and candidate not in effect_ids:
                    if rid not in effects:
                        mu = d.nodes[candidate].param
                        if mu <= 0.0:
                            raise RuleMatchError("effect ratios must be positive")
                        effects[rid] = mu
                        effect_ids.add(candidate)
                        red_weight *= d.nodes[candidate].weight
                        continue
            onward += 1
        if rid not in effects or onward != 1:
            raise RuleMatchError(
                "each red spider needs one weight leg and one onward leg"
            )
    matched = {hub_id, *reds, *effect_ids}
    dangling, internal = _interface(d, matched)
    if len(dangling) != len(reds):
        raise RuleMatchError("onward legs must leave the matched region")
    ratios = []
    for ei, outer_slot in dangling:
        inner = d.edges[ei][1 - outer_slot]
        if inner[0] != NODE or inner[1] not in effects:
            raise RuleMatchError("onward legs must hang off the red spiders")
        ratios.append(effects[inner[1]])
    return matched, dangling, internal, ratios, hub, red_weight


def apply_rule_L(d: Diagram, hub_id: int) -> Diagram:
    """Expands a green hub wired through red spiders into a Fourier gadget.

    The matched shape is a green hub whose every leg reaches a distinct
    plain degree-3 red spider carrying one positive green weight leg and
    one onward leg. Its interpretation has full support, so it equals a
    Fourier gadget, which is what gets spliced in.
    """
    matched, dangling, internal, ratios, hub, red_weight = _match_rule_l(d, hub_id)
    n = len(ratios)
    values = np.empty(2**n)
    for x in range(2**n):
        bits = [(x >> (n - 1 - i)) & 1 for i in range(n)]
        straight = inverted = 1.0
        for mu, bit in zip(ratios, bits):
            straight *= mu**bit
            inverted *= mu ** (1 - bit)
        values[x] = hub.weight * red_weight * (straight + hub.param * inverted)
    if (values <= 0.0).any():
        raise RuleMatchError("hub interpretation must have full support")
    data = fourier_synthesize(values)
    replacement = fourier_gadget_state(data.coeffs, data.scale)
    return _gated_splice(d, matched, dangling, internal, replacement, "L", (hub_id,))


def find_rule_l_sites(d: Diagram) -> list[int]:
    """Hub node ids where the hub expansion applies, ascending."""
    sites = []
    for nid in sorted(d.nodes):
        if d.nodes[nid].kind != GREEN:
            continue
        try:
            _match_rule_l(d, nid)
        except RuleMatchError:
            continue
        sites.append(nid)
    return sites


# ---------------------------------------------------------------------------
# dispatch, soundness checking, simplification


_RULES = {
    "F1": fuse_green,
    "F2": fuse_red,
    "M": color_convert_state,
    "L": apply_rule_L,
    "ID": remove_identity,
    "COPY": copy_rule,
    "BIALG": bialgebra,
}


def apply_rule(d: Diagram, instance: RuleInstance) -> Diagram:
    """Applies the rewrite described by ``instance`` to ``d``."""
    op = _RULES.get(instance.rule)
    if op is None:
        raise RuleMatchError(f"unknown rule {instance.rule!r}")
    return op(d, *instance.site)


def check_rule_soundness(instance: RuleInstance, d: Diagram) -> bool:
    """True when applying ``instance`` to ``d`` preserves the interpretation.

    A site that does not match at all raises ``RuleMatchError``; a match
    whose replacement would change the matrix returns False.
    """
    before = evaluate(d)
    try:
        after = apply_rule(d, instance)
    except RuleSoundnessError:
        return False
    return approx_equal(before, evaluate(after), SOUNDNESS_TOLERANCE)


def simplify_traced(d: Diagram) -> tuple[Diagram, list[RuleInstance]]:
    """Runs fusion and identity removal to a fixpoint, recording each step.

    Deterministic: the lowest-id identity spider goes first, then the
    lowest-index fusable edge, until neither rule matches.
    """
    current = d
    trace: list[RuleInstance] = []
    while True:
        identities = find_identity_sites(current)
        if identities:
            nid = identities[0]
            current = remove_identity(current, nid)
            trace.append(RuleInstance("ID", (nid,)))
            continue
        fusions = find_fusion_sites(current)
        if fusions:
            rule, ei = fusions[0]
            a, b = current.edges[ei]
            params = {"nodes": sorted((a[1], b[1]))}
            current = _fuse(current, ei, GREEN if rule == "F1" else RED, rule)
            trace.append(RuleInstance(rule, (ei,), params))
            continue
        return current, trace


def simplify(d: Diagram) -> Diagram:
    """Fuses spiders and removes identities until nothing changes."""
    return simplify_traced(d)[0]
