"""Exact evaluation of diagrams to nonnegative matrices.

Index conventions, used everywhere in the package:

* ``evaluate`` returns a ``2**m x 2**n`` array for an n -> m diagram;
  rows are indexed by output bits, columns by input bits.
* Within a row or column index, wire 0 is the most significant bit.
* Flattened state vectors list output bits before input bits.

The evaluator never subtracts: every entry is a sum of products of
nonnegative node weights, so a mathematically zero entry is an exact
floating point zero. The support tolerance below only guards callers
that feed in already-rounded data.

How evaluation works: every leg of a green spider carries the same bit,
so the wires fuse into equivalence classes with one bit variable each;
a green spider contributes the two-entry factor (weight, weight * mu)
on its class, a red spider contributes a factor on the parity of its
classes, and closed classes are summed out by variable elimination in
greedy minimum-degree order. The surviving factor over the boundary
classes is then fanned out to the ports.
"""

from __future__ import annotations

from collections import Counter, defaultdict

import numpy as np

from .diagram import GREEN, IN, NODE, OUT, RED, SCALAR, Diagram, validate

__all__ = [
    "InvalidDiagramError",
    "SUPPORT_TOLERANCE",
    "approx_equal",
    "decohere_pure",
    "evaluate",
    "matrix_wires",
    "support",
]

# Entries below this fraction of the largest one do not count as support.
SUPPORT_TOLERANCE = 1e-9


class InvalidDiagramError(ValueError):
    """The diagram fails structural validation."""


_parity_tables: dict[int, np.ndarray] = {}


def _parity(arity: int) -> np.ndarray:
    """The (2,)*arity table of index parities, cached."""
    if arity not in _parity_tables:
        _parity_tables[arity] = np.indices((2,) * arity).sum(axis=0) & 1
    return _parity_tables[arity]


def _product(factors, variables: list[int]) -> np.ndarray:
    """Broadcast product of factor tables over the given variable order."""
    position = {v: i for i, v in enumerate(variables)}
    table = np.ones((2,) * len(variables))
    for vars_, part in factors:
        shape = [1] * len(variables)
        for v in vars_:
            shape[position[v]] = 2
        table = table * part.reshape(shape)
    return table


def evaluate(d: Diagram) -> np.ndarray:
    """Contracts a diagram to its ``2**n_out x 2**n_in`` matrix, exactly."""
    problems = validate(d)
    if problems:
        raise InvalidDiagramError("; ".join(problems))

    node_wires: dict[int, list[int]] = {nid: [] for nid in d.nodes}
    port_wire: dict[tuple[str, int], int] = {}
    for ei, ends in enumerate(d.edges):
        for ep in ends:
            if ep[0] == NODE:
                node_wires[ep[1]].append(ei)
            else:
                port_wire[ep] = ei

    # union-find over wires; all legs of a green spider share one class
    parent = list(range(len(d.edges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    green_var: dict[int, int] = {}
    for nid in sorted(d.nodes):
        if d.nodes[nid].kind != GREEN:
            continue
        wires = node_wires[nid]
        if wires:
            for w in wires[1:]:
                parent[find(w)] = find(wires[0])
        else:
            parent.append(len(parent))  # isolated spider: private variable
            green_var[nid] = len(parent) - 1

    constant = 1.0
    factors: list[tuple[tuple[int, ...], np.ndarray]] = []
    for nid in sorted(d.nodes):
        node = d.nodes[nid]
        if node.kind == SCALAR:
            constant *= node.weight
        elif node.kind == GREEN:
            var = green_var.get(nid)
            if var is None:
                var = find(node_wires[nid][0])
            factors.append(((var,), node.weight * np.array([1.0, node.param])))
        else:  # RED: factor on the parity of its classes
            counts = Counter(find(w) for w in node_wires[nid])
            vars_ = tuple(sorted(v for v, c in counts.items() if c % 2))
            low = node.weight * (1.0 - node.param)
            high = node.weight * node.param
            if not vars_:
                constant *= low
            else:
                factors.append((vars_, np.where(_parity(len(vars_)) == 1, high, low)))

    ports = [(OUT, j) for j in range(d.n_out)] + [(IN, i) for i in range(d.n_in)]
    port_class = {ep: find(port_wire[ep]) for ep in ports}
    open_vars = sorted(set(port_class.values()))

    # classes no factor or port ever mentions are free bits: a factor of 2
    roots = {find(w) for w in range(len(d.edges))} | set(green_var.values())
    referenced = set(open_vars)
    for vars_, _ in factors:
        referenced.update(vars_)
    constant *= 2.0 ** len(roots - referenced)

    # eliminate closed variables, smallest resulting factor first
    alive: dict[int, tuple[tuple[int, ...], np.ndarray]] = dict(enumerate(factors))
    next_fid = len(factors)
    incidence: dict[int, set[int]] = defaultdict(set)
    for fid, (vars_, _) in alive.items():
        for v in vars_:
            incidence[v].add(fid)
    closed = {v for vars_, _ in factors for v in vars_} - set(open_vars)
    while closed:
        best: tuple[int, int] | None = None
        for v in sorted(closed):
            joined: set[int] = set()
            for fid in incidence[v]:
                joined.update(alive[fid][0])
            if best is None or len(joined) < best[0]:
                best = (len(joined), v)
        _, v = best
        fids = sorted(incidence[v])
        joined_vars = sorted({u for fid in fids for u in alive[fid][0]})
        table = _product([alive[fid] for fid in fids], joined_vars)
        table = table.sum(axis=joined_vars.index(v))
        for fid in fids:
            for u in alive[fid][0]:
                incidence[u].discard(fid)
            del alive[fid]
        closed.discard(v)
        kept = tuple(u for u in joined_vars if u != v)
        if kept:
            alive[next_fid] = (kept, table)
            for u in kept:
                incidence[u].add(next_fid)
            next_fid += 1
        else:
            constant *= float(table)

    boundary = d.n_out + d.n_in
    if boundary == 0:
        leftover = _product(alive.values(), [])
        return np.array([[constant * float(leftover)]])

    table = _product(alive.values(), open_vars)
    grid = np.indices((2,) * boundary)
    class_axes: dict[int, list[int]] = defaultdict(list)
    for axis, ep in enumerate(ports):
        class_axes[port_class[ep]].append(axis)
    consistent = np.ones((2,) * boundary, dtype=bool)
    index = []
    for v in open_vars:
        axes = class_axes[v]
        for extra in axes[1:]:
            consistent &= grid[axes[0]] == grid[extra]
        index.append(grid[axes[0]])
    out = constant * table[tuple(index)] * consistent
    return out.reshape(2**d.n_out, 2**d.n_in)


def matrix_wires(mat: np.ndarray) -> tuple[int, int]:
    """Wire counts (outputs, inputs) of a matrix; dims must be powers of 2."""
    if mat.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = mat.shape
    if rows < 1 or cols < 1 or rows & (rows - 1) or cols & (cols - 1):
        raise ValueError("matrix dimensions must be powers of two")
    return rows.bit_length() - 1, cols.bit_length() - 1


def support(d: Diagram, tolerance: float = SUPPORT_TOLERANCE) -> set[tuple[int, ...]]:
    """Bit vectors (output bits then input bits) of the nonzero entries."""
    mat = evaluate(d)
    m, n = matrix_wires(mat)
    top = float(mat.max())
    if top <= 0.0:
        return set()
    flat = mat.reshape(-1)
    width = m + n
    return {
        tuple((int(i) >> (width - 1 - b)) & 1 for b in range(width))
        for i in np.nonzero(flat > tolerance * top)[0]
    }


def decohere_pure(mat) -> np.ndarray:
    """Entrywise squared magnitude: the classical shadow of a complex map."""
    return np.abs(np.asarray(mat)) ** 2


def approx_equal(m1, m2, tolerance: float) -> bool:
    """Max entry difference at most ``tolerance * (1 + largest magnitude)``."""
    a = np.asarray(m1, dtype=float)
    b = np.asarray(m2, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return True
    top = max(float(np.abs(a).max()), float(np.abs(b).max()))
    return float(np.abs(a - b).max()) <= tolerance * (1.0 + top)
