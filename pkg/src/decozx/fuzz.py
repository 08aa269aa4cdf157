"""Randomized self-checking of the evaluate/normalize/rewrite stack.

Each iteration builds a random layered diagram from a seeded generator
and runs a set of named checks against it: the normal form round trip
must reproduce the diagram's state vector, equality must be reflexive,
and every applicable rewrite must preserve the interpretation. Failing
iterations carry the serialized diagram, so any failure doubles as a
standalone reproducer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .diagram import (
    Diagram,
    bend_name,
    compose_par,
    compose_seq,
    green,
    identity,
    permutation_diagram,
    red,
    scalar,
)
from .formats import diagram_to_dict
from .normalform import diagrams_equal, nf_to_diagram, normalize_state
from .rewrite import (
    RuleSoundnessError,
    bialgebra,
    color_convert_state,
    copy_rule,
    find_bialgebra_sites,
    find_convert_sites,
    find_copy_sites,
    find_fusion_sites,
    find_identity_sites,
    fuse_green,
    fuse_red,
    remove_identity,
)
from .semantics import approx_equal, evaluate

__all__ = [
    "FuzzRecord",
    "FuzzReport",
    "default_checks",
    "random_diagram",
    "run_fuzz",
]


@dataclass
class FuzzRecord:
    """Outcome of one fuzz iteration."""

    index: int
    n_in: int
    n_out: int
    node_count: int
    edge_count: int
    roundtrip_error: float
    failures: list[str] = field(default_factory=list)
    diagram: dict | None = None  # reproducer, kept only on failure

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class FuzzReport:
    """All records of a fuzz run plus the parameters that produced them."""

    seed: int
    max_wires: int
    iterations: int
    tolerance: float
    check_names: list[str]
    records: list[FuzzRecord]

    @property
    def failed(self) -> list[FuzzRecord]:
        return [r for r in self.records if not r.ok]

    def summary(self) -> dict:
        by_check = {name: 0 for name in self.check_names}
        for record in self.records:
            for failure in record.failures:
                name = failure.split(":", 1)[0]
                if name in by_check:
                    by_check[name] += 1
        return {
            "seed": self.seed,
            "wires": self.max_wires,
            "iters": self.iterations,
            "passed": len(self.records) - len(self.failed),
            "failed": len(self.failed),
            "check_failures": by_check,
            "reproducers": [
                {"iteration": r.index, "failures": r.failures, "diagram": r.diagram}
                for r in self.failed[:5]
            ],
        }


def _random_param(rng: random.Random, kind: str) -> float:
    if kind == "green":
        return rng.choice([0.0, 1.0, 1.0, round(rng.uniform(0.05, 3.0), 4)])
    return rng.choice([0.0, 0.5, 1.0, round(rng.uniform(0.0, 1.0), 4)])


def _random_spider(rng: random.Random, n: int, m: int) -> Diagram:
    if rng.random() < 0.5:
        return green(n, m, _random_param(rng, "green"))
    return red(n, m, _random_param(rng, "red"))


def random_diagram(rng: random.Random, max_wires: int = 6) -> Diagram:
    """A random layered diagram with at most ``max_wires`` wires per layer."""
    width = rng.randint(0, min(3, max_wires))
    d = identity(width)
    for _ in range(rng.randint(1, 4)):
        width = d.n_out
        if width == 0:
            if rng.random() < 0.3:
                d = compose_par(d, scalar(round(rng.uniform(0.0, 2.0), 4)))
            else:
                d = compose_par(d, _random_spider(rng, 0, rng.randint(1, max(1, max_wires // 2))))
            continue
        if width > 1 and rng.random() < 0.15:
            d = compose_seq(d, permutation_diagram(rng.sample(range(width), width)))
            continue
        layer = None
        remaining = width
        produced = 0
        while remaining > 0:
            legs_in = rng.randint(1, min(3, remaining))
            budget = max_wires - produced - (remaining - legs_in)
            legs_out = rng.randint(0, max(0, min(2, budget)))
            block = _random_spider(rng, legs_in, legs_out)
            layer = block if layer is None else compose_par(layer, block)
            remaining -= legs_in
            produced += legs_out
        d = compose_seq(d, layer)
    return d


def _check_roundtrip(d: Diagram, tolerance: float):
    vec = evaluate(bend_name(d)).reshape(-1)
    rebuilt = nf_to_diagram(normalize_state(vec))
    vec2 = evaluate(rebuilt).reshape(-1)
    top = max(float(vec.max()), float(vec2.max()))
    error = float(np.abs(vec - vec2).max()) / (1.0 + top)
    return error <= tolerance, f"state deviates by {error:.3e}", error


def _check_reflexive(d: Diagram, tolerance: float):
    ok = diagrams_equal(d, d, tolerance)
    return ok, "diagram does not equal itself", 0.0


def _check_rewrites(d: Diagram, tolerance: float):
    before = evaluate(d)
    applications = []
    for rule, ei in find_fusion_sites(d)[:3]:
        applications.append((rule, (ei,), (fuse_green if rule == "F1" else fuse_red, ei)))
    for nid in find_identity_sites(d)[:2]:
        applications.append(("ID", (nid,), (remove_identity, nid)))
    for nid in find_convert_sites(d)[:2]:
        applications.append(("M", (nid,), (color_convert_state, nid)))
    for site in find_copy_sites(d)[:2]:
        applications.append(("COPY", site, (copy_rule, *site)))
    for ei in find_bialgebra_sites(d)[:1]:
        applications.append(("BIALG", (ei,), (bialgebra, ei)))
    for rule, site, (op, *op_args) in applications:
        try:
            after = op(d, *op_args)
        except RuleSoundnessError as err:
            return False, f"{rule} at {site} rejected: {err}", float(len(applications))
        if not approx_equal(before, evaluate(after), tolerance):
            return False, f"{rule} at {site} changed the matrix", float(len(applications))
    return True, "", float(len(applications))


def default_checks() -> dict:
    """Name -> callable(diagram, tolerance) -> (ok, detail, metric)."""
    return {
        "roundtrip": _check_roundtrip,
        "reflexive": _check_reflexive,
        "rewrites": _check_rewrites,
    }


def run_fuzz(
    seed: int = 0,
    max_wires: int = 6,
    iterations: int = 50,
    tolerance: float = 1e-9,
    checks: dict | None = None,
) -> FuzzReport:
    """Fuzzes ``iterations`` random diagrams through the given checks."""
    if checks is None:
        checks = default_checks()
    rng = random.Random(seed)
    records = []
    for index in range(iterations):
        d = random_diagram(rng, max_wires)
        record = FuzzRecord(
            index=index,
            n_in=d.n_in,
            n_out=d.n_out,
            node_count=len(d.nodes),
            edge_count=len(d.edges),
            roundtrip_error=0.0,
        )
        for name, check in checks.items():
            try:
                ok, detail, metric = check(d, tolerance)
            except Exception as err:  # a crash is a failure with a reproducer
                ok, detail, metric = False, f"raised {type(err).__name__}: {err}", 0.0
            if name == "roundtrip":
                record.roundtrip_error = metric
            if not ok:
                record.failures.append(f"{name}: {detail}")
        if record.failures:
            record.diagram = diagram_to_dict(d)
        records.append(record)
    return FuzzReport(
        seed=seed,
        max_wires=max_wires,
        iterations=iterations,
        tolerance=tolerance,
        check_names=list(checks),
        records=records,
    )
