"""Tests for the multiplicative Fourier parametrization."""

from __future__ import annotations

import random

import numpy as np
import pytest

from decozx.fourier import (
    FourierData,
    fourier_evaluate,
    fourier_synthesize,
    walsh_hadamard,
)
from helpers import dot_f2, naive_fourier_evaluate, naive_fourier_synthesize


def test_walsh_hadamard_matches_naive_definition():
    rng = random.Random(9)
    for n in range(0, 6):
        size = 1 << n
        u = np.array([rng.uniform(-2.0, 2.0) for _ in range(size)])
        fast = walsh_hadamard(u)
        naive = np.array(
            [sum((-1) ** dot_f2(x, z) * u[x] for x in range(size)) for z in range(size)]
        )
        assert np.allclose(fast, naive, rtol=0, atol=1e-12)


def test_walsh_hadamard_is_scaled_involution():
    rng = random.Random(2)
    u = np.array([rng.uniform(-1.0, 1.0) for _ in range(16)])
    assert np.allclose(walsh_hadamard(walsh_hadamard(u)), 16 * u)


def test_walsh_hadamard_rejects_bad_length():
    with pytest.raises(ValueError):
        walsh_hadamard([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        walsh_hadamard([])
    with pytest.raises(ValueError):
        walsh_hadamard(np.ones((2, 2)))


def test_synthesis_anchor_two_wires():
    fd = fourier_synthesize([1.0, 2.0, 3.0, 6.0])
    assert fd.wires == 2
    assert fd.scale == pytest.approx(1.0, rel=1e-12)
    assert np.allclose(fd.coeffs, [2.0, 3.0, 1.0], rtol=1e-12)
    back = fourier_evaluate(fd)
    assert np.allclose(back, [1.0, 2.0, 3.0, 6.0], rtol=1e-12)


def test_evaluate_matches_naive_product_formula():
    rng = random.Random(13)
    for n in range(0, 5):
        coeffs = np.array([rng.uniform(0.2, 3.0) for _ in range((1 << n) - 1)])
        scale = rng.uniform(0.5, 2.0)
        fd = FourierData(wires=n, scale=scale, coeffs=coeffs)
        fast = fourier_evaluate(fd)
        naive = naive_fourier_evaluate(scale, coeffs, n)
        assert np.allclose(fast, naive, rtol=1e-12)


def test_synthesize_matches_naive_product_formula():
    rng = random.Random(29)
    for _ in range(40):
        n = rng.randint(0, 4)
        v = np.exp([rng.uniform(-2.0, 2.0) for _ in range(1 << n)])
        fd = fourier_synthesize(v)
        scale, coeffs = naive_fourier_synthesize(v)
        assert fd.scale == pytest.approx(scale, rel=1e-10)
        assert np.allclose(fd.coeffs, coeffs, rtol=1e-10)


def test_round_trip_both_directions():
    rng = random.Random(37)
    for _ in range(30):
        n = rng.randint(0, 6)
        v = np.exp([rng.uniform(-3.0, 3.0) for _ in range(1 << n)])
        back = fourier_evaluate(fourier_synthesize(v))
        assert np.allclose(back, v, rtol=1e-9)
        coeffs = np.exp([rng.uniform(-1.5, 1.5) for _ in range((1 << n) - 1)])
        fd = FourierData(wires=n, scale=float(np.exp(rng.uniform(-1, 1))), coeffs=coeffs)
        again = fourier_synthesize(fourier_evaluate(fd))
        assert again.scale == pytest.approx(fd.scale, rel=1e-9)
        assert np.allclose(again.coeffs, fd.coeffs, rtol=1e-9)


def test_synthesize_requires_full_support():
    with pytest.raises(ValueError, match="full support"):
        fourier_synthesize([1.0, 0.0])
    with pytest.raises(ValueError, match="full support"):
        fourier_synthesize([1.0, -0.5])
    with pytest.raises(ValueError, match="full support"):
        fourier_synthesize([1.0, 1e-15])
    with pytest.raises(ValueError):
        fourier_synthesize([1.0, 2.0, 3.0])


def test_fourier_data_validates_coefficient_count():
    with pytest.raises(ValueError):
        FourierData(wires=2, scale=1.0, coeffs=np.ones(2))
    with pytest.raises(ValueError):
        FourierData(wires=-1, scale=1.0, coeffs=np.ones(0))


def test_exponent_identity_small_widths():
    # (-2 / 2^n) * sum_x <y, x> (-1)^{<x, z>} equals [y == z] - [z == 0]
    for n in range(1, 4):
        size = 1 << n
        for y in range(size):
            for z in range(size):
                total = sum(dot_f2(y, x) * (-1) ** dot_f2(x, z) for x in range(size))
                value = -2.0 / size * total
                expected = (1.0 if y == z else 0.0) - (1.0 if z == 0 else 0.0)
                assert value == pytest.approx(expected, abs=1e-12)
