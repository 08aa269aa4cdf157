"""Fourier normal forms: the canonical datum behind every diagram.

A nonnegative state vector whose support is an affine subspace of bit
vectors is determined by three things: the canonical basis of the
support's direction space, the canonical coset representative, and the
positive values it takes on the support, stored as a Fourier datum
(global scale plus one multiplier per nonzero direction). Two diagrams
are equal as matrices exactly when these data agree, so equality
testing, canonical serialization and synthesis all go through here.

The all-zero vector has empty support and gets its own marker datum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagram import (
    Diagram,
    bend_name,
    compose_par,
    compose_seq,
    fourier_gadget_state,
    identity,
    matrix_arrow,
    red,
    scalar,
    unbend,
)
from .f2linalg import affine_violation, is_affine, pack_bits, unpack_bits
from .fourier import FourierData, fourier_synthesize
from .semantics import SUPPORT_TOLERANCE, evaluate, matrix_wires

__all__ = [
    "EQUALITY_TOLERANCE",
    "NonAffineSupportError",
    "NormalForm",
    "ZeroForm",
    "diagrams_equal",
    "nf_to_diagram",
    "normal_forms_close",
    "normalize_diagram",
    "normalize_state",
    "synthesize",
]

EQUALITY_TOLERANCE = 1e-9


class NonAffineSupportError(ValueError):
    """The support is not an affine subspace.

    ``witness`` holds three support points a, b, c with a + b + c (xor)
    outside the support, proving the failure.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class ZeroForm:
    """Normal form of the zero vector on ``wires`` wires."""

    wires: int


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Canonical datum of a nonzero affinely supported vector.

    Attributes:
        wires: Number of wires n; the vector lives on 2**n entries.
        basis: n x k canonical basis of the support's direction space.
        offset: Canonical coset representative, a length-n bit vector.
        fourier: Values on the support in Fourier form, over k wires.
    """

    wires: int
    basis: np.ndarray
    offset: np.ndarray
    fourier: FourierData


def normalize_state(vec, tolerance: float = SUPPORT_TOLERANCE):
    """Computes the normal form of a nonnegative vector of length 2**n.

    Raises:
        ValueError: On a malformed or negative vector.
        NonAffineSupportError: When the support is not affine; the
            exception's ``witness`` holds a violating triple.
    """
    v = np.asarray(vec, dtype=float)
    if v.ndim != 1 or v.size < 1 or v.size & (v.size - 1):
        raise ValueError("expected a vector of length 2**n")
    if (v < 0).any():
        raise ValueError("entries must be nonnegative")
    n = v.size.bit_length() - 1
    top = float(v.max())
    if top <= 0.0:
        return ZeroForm(n)
    points = [unpack_bits(int(i), n) for i in np.nonzero(v > tolerance * top)[0]]
    aff = is_affine(points)
    if aff is None:
        raise NonAffineSupportError(
            "support is not an affine subspace", affine_violation(points)
        )
    k = aff.dimension
    values = np.empty(2**k)
    for y in range(2**k):
        point = (aff.basis @ unpack_bits(y, k) + aff.offset) % 2
        values[y] = v[pack_bits(point)]
    return NormalForm(n, aff.basis, aff.offset, fourier_synthesize(values))


def normalize_diagram(d: Diagram, tolerance: float = SUPPORT_TOLERANCE):
    """Normal form of the state that names ``d`` (outputs then inputs).

    Every diagram's interpretation has affine support, so unlike
    :func:`normalize_state` this never reports witnesses; a non-affine
    support here would mean the evaluator itself is broken.
    """
    vec = evaluate(bend_name(d)).reshape(-1)
    try:
        return normalize_state(vec, tolerance)
    except NonAffineSupportError as err:  # pragma: no cover - internal guard
        raise AssertionError(
            "diagram interpretations always have affine support"
        ) from err


def nf_to_diagram(nf) -> Diagram:
    """Builds the canonical state diagram (0 -> wires) of a normal form."""
    if isinstance(nf, ZeroForm):
        d = scalar(0.0)
        for _ in range(nf.wires):
            d = compose_par(d, red(0, 1, 0.0))
        return d
    gadget = fourier_gadget_state(nf.fourier.coeffs, nf.fourier.scale)
    d = compose_seq(gadget, matrix_arrow(nf.basis))
    if nf.offset.any():
        flips = None
        for bit in nf.offset:
            layer = red(1, 1, 1.0) if bit else identity(1)
            flips = layer if flips is None else compose_par(flips, layer)
        d = compose_seq(d, flips)
    return d


def _close(a, b, tolerance: float) -> bool:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(np.abs(a - b) <= tolerance * np.maximum(np.abs(a), np.abs(b))))


def normal_forms_close(nf1, nf2, tolerance: float = EQUALITY_TOLERANCE) -> bool:
    """Same discrete data exactly; scale and multipliers to relative tolerance."""
    if isinstance(nf1, ZeroForm) or isinstance(nf2, ZeroForm):
        return (
            isinstance(nf1, ZeroForm)
            and isinstance(nf2, ZeroForm)
            and nf1.wires == nf2.wires
        )
    return (
        nf1.wires == nf2.wires
        and nf1.basis.shape == nf2.basis.shape
        and np.array_equal(nf1.basis, nf2.basis)
        and np.array_equal(nf1.offset, nf2.offset)
        and _close(nf1.fourier.scale, nf2.fourier.scale, tolerance)
        and _close(nf1.fourier.coeffs, nf2.fourier.coeffs, tolerance)
    )


def diagrams_equal(d1: Diagram, d2: Diagram, tolerance: float = EQUALITY_TOLERANCE) -> bool:
    """Decides whether two diagrams denote the same matrix.

    Raises:
        ValueError: When the diagrams have different arities.
    """
    if d1.arity != d2.arity:
        raise ValueError(f"arity mismatch: {d1.arity} vs {d2.arity}")
    return normal_forms_close(
        normalize_diagram(d1), normalize_diagram(d2), tolerance
    )


def synthesize(mat) -> Diagram:
    """Builds a diagram evaluating to the given nonnegative matrix.

    The matrix must have power-of-two dimensions and affinely supported
    entries; otherwise ``NonAffineSupportError`` carries a witness.
    """
    arr = np.asarray(mat, dtype=float)
    m_wires, n_wires = matrix_wires(arr)
    if (arr < 0).any():
        raise ValueError("entries must be nonnegative")
    vec = arr.reshape(-1) / 2.0**n_wires
    state = nf_to_diagram(normalize_state(vec))
    return unbend(state, n_wires)
