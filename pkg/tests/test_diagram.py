"""Tests for diagram construction, composition, and isomorphism."""

from __future__ import annotations

import random

import numpy as np
import pytest

from decozx.diagram import (
    Diagram,
    Node,
    big_green,
    big_red,
    bend_name,
    cap,
    compose_par,
    compose_seq,
    cup,
    divide_registers,
    empty,
    gather_registers,
    green,
    identity,
    isomorphic,
    matrix_arrow,
    permutation_diagram,
    red,
    scalar,
    swap,
    unbend,
    validate,
)
from helpers import random_small_diagram


def test_constructor_arities():
    assert green(2, 3, 1.5).arity == (2, 3)
    assert red(1, 0, 0.25).arity == (1, 0)
    assert scalar(0.5).arity == (0, 0)
    assert identity(3).arity == (3, 3)
    assert swap().arity == (2, 2)
    assert cup().arity == (0, 2)
    assert cap().arity == (2, 0)
    assert empty().arity == (0, 0)


def test_constructors_validate_clean():
    for d in [
        green(2, 3, 1.5),
        red(0, 2, 0.3),
        scalar(2.0),
        identity(4),
        swap(),
        cup(),
        cap(),
        empty(),
        permutation_diagram([2, 0, 1]),
        matrix_arrow(np.array([[1, 0], [1, 1]], dtype=np.uint8)),
        big_green(2, 1, [1.5, 0.5]),
        big_red(1, 2, [0.25]),
    ]:
        assert validate(d) == []


def test_identity_has_no_nodes():
    d = identity(2)
    assert not d.nodes
    assert len(d.edges) == 2


def test_spider_constructors_have_one_node():
    d = green(2, 3, 1.5)
    assert len(d.nodes) == 1
    (node,) = d.nodes.values()
    assert node.kind == "green" and node.param == 1.5
    assert d.degree(next(iter(d.nodes))) == 5
    d = red(1, 1, 0.25)
    (node,) = d.nodes.values()
    assert node.kind == "red" and node.param == 0.25


def test_parameter_validation():
    with pytest.raises(ValueError):
        green(1, 1, -0.5)
    with pytest.raises(ValueError):
        red(1, 1, 1.5)
    with pytest.raises(ValueError):
        red(1, 1, -0.1)
    with pytest.raises(ValueError):
        scalar(-1.0)
    with pytest.raises(ValueError):
        identity(-1)


def test_permutation_diagram_rejects_non_permutation():
    with pytest.raises(ValueError):
        permutation_diagram([0, 0])
    with pytest.raises(ValueError):
        permutation_diagram([0, 2])


def test_compose_seq_arity_mismatch():
    with pytest.raises(ValueError, match="arity mismatch"):
        compose_seq(green(1, 2, 1.0), green(1, 1, 1.0))


def test_compose_par_adds_arities():
    d = compose_par(green(1, 2, 1.0), red(2, 0, 0.5))
    assert d.arity == (3, 2)


def test_compose_identity_is_neutral_up_to_iso():
    rng = random.Random(51)
    for _ in range(20):
        d = random_small_diagram(rng)
        assert isomorphic(compose_seq(identity(d.n_in), d), d)
        assert isomorphic(compose_seq(d, identity(d.n_out)), d)
        assert isomorphic(compose_par(d, empty()), d)
        assert isomorphic(compose_par(empty(), d), d)


def test_compose_associativity_up_to_iso():
    a = green(1, 2, 2.0)
    b = red(2, 1, 0.25)
    c = green(1, 1, 0.5)
    left = compose_seq(compose_seq(a, b), c)
    right = compose_seq(a, compose_seq(b, c))
    assert isomorphic(left, right)
    pl = compose_par(compose_par(a, b), c)
    pr = compose_par(a, compose_par(b, c))
    assert isomorphic(pl, pr)


def test_copy_is_deep_enough():
    d = green(1, 1, 1.0)
    c = d.copy()
    c.nodes[c.fresh_id()] = Node("scalar", 0.0, 2.0)
    assert len(d.nodes) == 1


def test_node_ends_and_port_end():
    d = green(2, 1, 1.0)
    nid = next(iter(d.nodes))
    assert len(d.node_ends(nid)) == 3
    ei, slot = d.port_end("in", 0)
    assert d.edges[ei][slot] == ("in", 0)
    with pytest.raises(ValueError):
        d.port_end("in", 5)


def test_validate_reports_problems():
    # missing edge for an input port
    d = Diagram(1, 0, {}, [])
    assert validate(d)
    # port wired twice
    d = Diagram(1, 1, {}, [(("in", 0), ("out", 0)), (("in", 0), ("out", 0))])
    assert validate(d)
    # reference to a node that does not exist
    d = Diagram(0, 0, {}, [(("node", 7), ("node", 7))])
    assert validate(d)


def test_isomorphic_ignores_labels_and_edge_order():
    d1 = compose_seq(green(1, 2, 2.0), compose_par(red(1, 1, 0.3), identity(1)))
    # rebuild with shifted node ids and reversed edge list
    shifted = {nid + 10: node for nid, node in d1.nodes.items()}

    def shift(end):
        return ("node", end[1] + 10) if end[0] == "node" else end

    edges = [(shift(a), shift(b)) for a, b in reversed(d1.edges)]
    d2 = Diagram(d1.n_in, d1.n_out, shifted, edges)
    assert isomorphic(d1, d2)


def test_isomorphic_distinguishes_parameters_and_wiring():
    assert not isomorphic(green(1, 1, 1.0), green(1, 1, 2.0))
    assert not isomorphic(red(1, 1, 0.3), green(1, 1, 0.3))
    assert not isomorphic(identity(2), swap())
    assert not isomorphic(green(1, 1, 1.0), red(1, 1, 0.0))
    d1 = compose_par(red(1, 1, 0.2), red(1, 1, 0.4))
    d2 = compose_par(red(1, 1, 0.4), red(1, 1, 0.2))
    # same multiset of nodes, different boundary wiring
    assert not isomorphic(d1, d2)


def test_isomorphic_handles_weights():
    d1 = scalar(2.0)
    d2 = scalar(3.0)
    assert not isomorphic(d1, d2)
    assert isomorphic(d1, scalar(2.0))


def test_bend_name_arity_and_unbend_inverse():
    d = red(2, 1, 0.35)
    state = bend_name(d)
    assert state.arity == (0, 3)
    back = unbend(state, 2)
    assert back.arity == (2, 1)
    assert isomorphic(back, d)


def test_unbend_without_matching_cups_uses_caps():
    state = compose_par(red(0, 1, 0.3), red(0, 1, 0.4))
    d = unbend(state, 1)
    assert d.arity == (1, 1)
    assert validate(d) == []


def test_matrix_arrow_shapes():
    a = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    d = matrix_arrow(a)
    assert d.arity == (3, 2)
    assert validate(d) == []
    empty_arrow = matrix_arrow(np.zeros((0, 2), dtype=np.uint8))
    assert empty_arrow.arity == (2, 0)


def test_big_spiders_shapes():
    d = big_green(2, 3, [1.5, 0.5])
    assert d.arity == (4, 6)
    assert validate(d) == []
    d = big_red(3, 1, [0.1, 0.9])
    assert d.arity == (6, 2)


def test_register_shuffles_are_inverse_permutations():
    d = compose_seq(divide_registers(2, 3), gather_registers(2, 3))
    assert d.arity == (6, 6)
    assert validate(d) == []


def test_validate_empty_and_wire_only():
    assert validate(empty()) == []
    assert validate(identity(5)) == []
    assert validate(permutation_diagram([1, 0])) == []
