"""Independent oracles used by the test suite.

Everything in this module recomputes results from first principles with
naive algorithms, deliberately sharing no code with the package under
test: the evaluator oracle enumerates every edge-bit assignment, the
Fourier oracles use the direct product formulas, and the GF(2) oracle
uses integer bitsets.  Tests compare the fast implementations against
these slow references.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np

from decozx.diagram import Diagram, GREEN, IN, NODE, OUT, RED, SCALAR


def brute_force_evaluate(d: Diagram) -> np.ndarray:
    """Evaluates a diagram by summing over all edge-bit assignments.

    Exponential in the edge count; callers should keep diagrams small.
    Node factors come straight from the generator definitions: a green
    node is weight * (1 if all incident bits are 0, mu if all are 1,
    else 0), a red node is weight * (1 - p) on even parity and
    weight * p on odd parity, and a scalar node is its weight.
    """
    n_edges = len(d.edges)
    if n_edges > 18:
        raise ValueError("too many edges for the brute-force oracle")
    incident: dict[int, list[int]] = {nid: [] for nid in d.nodes}
    for ei, ends in enumerate(d.edges):
        for end in ends:
            if end[0] == NODE:
                incident[end[1]].append(ei)
    in_edge = [d.port_end(IN, i)[0] for i in range(d.n_in)]
    out_edge = [d.port_end(OUT, j)[0] for j in range(d.n_out)]
    result = np.zeros((2 ** d.n_out, 2 ** d.n_in))
    for bits in itertools.product((0, 1), repeat=n_edges):
        factor = 1.0
        for nid, node in d.nodes.items():
            legs = [bits[ei] for ei in incident[nid]]
            if node.kind == GREEN:
                if not legs:
                    factor *= node.weight * (1.0 + node.param)
                elif all(b == 0 for b in legs):
                    factor *= node.weight
                elif all(b == 1 for b in legs):
                    factor *= node.weight * node.param
                else:
                    factor = 0.0
            elif node.kind == RED:
                if sum(legs) % 2 == 0:
                    factor *= node.weight * (1.0 - node.param)
                else:
                    factor *= node.weight * node.param
            elif node.kind == SCALAR:
                factor *= node.weight
            else:
                raise ValueError(f"unknown node kind {node.kind!r}")
            if factor == 0.0:
                break
        if factor == 0.0:
            continue
        row = 0
        for j in range(d.n_out):
            row = (row << 1) | bits[out_edge[j]]
        col = 0
        for i in range(d.n_in):
            col = (col << 1) | bits[in_edge[i]]
        result[row, col] += factor
    return result


def dot_f2(x: int, y: int) -> int:
    """GF(2) inner product of two integers read as bit vectors."""
    return bin(x & y).count("1") % 2


def naive_fourier_evaluate(scale: float, coeffs, n: int) -> np.ndarray:
    """Direct product formula v_x = scale * prod_y coeffs[y]^{<x,y>}."""
    size = 2 ** n
    assert len(coeffs) == size - 1
    v = np.empty(size)
    for x in range(size):
        value = scale
        for y in range(1, size):
            if dot_f2(x, y):
                value *= coeffs[y - 1]
        v[x] = value
    return v


def naive_fourier_synthesize(v) -> tuple[float, np.ndarray]:
    """Direct product-domain inversion of the Fourier parametrization.

    Works entirely with products of powers, never in log space, so it
    shares no code path with the fast transform it cross-checks:
    lambda_z = prod_x (v_x / v_0)^{-2(-1)^{<x,z>} / 2^n} and the scale
    is v_0.
    """
    v = np.asarray(v, dtype=float)
    size = len(v)
    n = size.bit_length() - 1
    assert 2 ** n == size and np.all(v > 0)
    coeffs = np.empty(size - 1)
    for z in range(1, size):
        value = 1.0
        for x in range(size):
            sign = -1.0 if dot_f2(x, z) else 1.0
            value *= (v[x] / v[0]) ** (-2.0 * sign / size)
        coeffs[z - 1] = value
    return float(v[0]), coeffs


def bitset_rank(rows) -> int:
    """GF(2) rank of a list of integer bitsets, by Gaussian elimination."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


def is_affine_ints(points: set[int]) -> bool:
    """Closure test: S is affine iff nonempty and x^y^z stays in S."""
    if not points:
        return False
    pts = sorted(points)
    for x in pts:
        for y in pts:
            for z in pts:
                if x ^ y ^ z not in points:
                    return False
    return True


def all_affine_subsets(n: int) -> list[frozenset[int]]:
    """Every affine subset of F_2^n, by filtering all subsets (n <= 3)."""
    assert n <= 3
    universe = list(range(2 ** n))
    found = []
    for r in range(1, 2 ** n + 1):
        for combo in itertools.combinations(universe, r):
            s = frozenset(combo)
            if is_affine_ints(set(s)):
                found.append(s)
    return found


def int_matmul_f2(a: list[int], b: list[int], inner: int) -> list[int]:
    """Product of GF(2) matrices stored as row bitsets (MSB first)."""
    rows = []
    for ra in a:
        acc = 0
        for k in range(inner):
            if (ra >> (inner - 1 - k)) & 1:
                acc ^= b[k]
        rows.append(acc)
    return rows


def enumerate_invertible_f2(n: int):
    """Yields every invertible n x n GF(2) matrix as a numpy array."""
    size = 2 ** n
    for rows in itertools.product(range(size), repeat=n):
        if bitset_rank(rows) == n:
            mat = np.zeros((n, n), dtype=np.uint8)
            for i, row in enumerate(rows):
                for j in range(n):
                    mat[i, j] = (row >> (n - 1 - j)) & 1
            yield mat


def random_invertible_f2(rng: random.Random, n: int) -> np.ndarray:
    """Rejection-samples an invertible n x n GF(2) matrix."""
    while True:
        rows = [rng.randrange(2 ** n) for _ in range(n)]
        if bitset_rank(rows) == n:
            mat = np.zeros((n, n), dtype=np.uint8)
            for i, row in enumerate(rows):
                for j in range(n):
                    mat[i, j] = (row >> (n - 1 - j)) & 1
            return mat


def random_affine_vector(
    rng: random.Random, n: int, k: int | None = None
) -> np.ndarray:
    """Random nonnegative vector of size 2^n whose support is affine.

    Picks a random rank-k basis (verified with the bitset oracle), a
    random offset, and positive values log-uniform in [e^-2, e^2].
    """
    if k is None:
        k = rng.randint(0, n)
    if k == 0:
        cols: list[int] = []
    else:
        while True:
            cols = [rng.randrange(1, 2 ** n) for _ in range(k)]
            if bitset_rank(cols) == k:
                break
    offset = rng.randrange(2 ** n)
    support = set()
    for combo in itertools.product((0, 1), repeat=k):
        point = offset
        for bit, col in zip(combo, cols):
            if bit:
                point ^= col
        support.add(point)
    v = np.zeros(2 ** n)
    for point in support:
        v[point] = math.exp(rng.uniform(-2.0, 2.0))
    return v


def random_small_diagram(rng: random.Random) -> Diagram:
    """Random diagram kept small enough for the brute-force oracle.

    Builds 1 to 3 layers of narrow spider blocks so the edge count
    stays within the oracle's enumeration budget.
    """
    from decozx.diagram import (
        compose_par,
        compose_seq,
        empty,
        green,
        identity,
        red,
        scalar,
    )

    width = rng.randint(0, 3)
    d = identity(width)
    if width == 0:
        d = scalar(rng.choice([0.5, 1.0, 1.5, 2.0]))
    for _ in range(rng.randint(1, 3)):
        layer = empty()
        remaining = width
        while remaining > 0:
            legs_in = rng.randint(1, min(2, remaining))
            legs_out = rng.randint(0, 2)
            kind = rng.choice(["green", "red", "wire"])
            if kind == "green":
                block = green(legs_in, legs_out, rng.choice([0.0, 0.5, 1.0, 2.0]))
            elif kind == "red":
                block = red(legs_in, legs_out, rng.choice([0.0, 0.25, 0.5, 1.0]))
            else:
                block = identity(legs_in)
                legs_out = legs_in
            layer = compose_par(layer, block)
            remaining -= legs_in
        new_width = layer.n_out
        if len(d.edges) + len(layer.edges) > 14:
            break
        d = compose_seq(d, layer)
        width = new_width
    return d
