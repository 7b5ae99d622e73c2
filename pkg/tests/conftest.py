"""Shared fixtures and seeded random generators for the test suite."""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from blochcert.cyclotomic import CycloNumber
from blochcert.laurent import LaurentPoly
from blochcert.model import GaussianRational, OperatorModel

PRESET_DIR = Path(__file__).resolve().parent.parent / "presets"


@pytest.fixture(scope="session")
def preset_dir() -> Path:
    return PRESET_DIR


def random_fraction(rng: np.random.Generator, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
        if value or not nonzero:
            return value


def random_gaussian(rng: np.random.Generator, nonzero: bool = False) -> GaussianRational:
    while True:
        value = GaussianRational(random_fraction(rng), random_fraction(rng))
        if value or not nonzero:
            return value


def random_period(rng: np.random.Generator, d: int, max_cell: int, max_q: int = 4) -> tuple[int, ...]:
    while True:
        q = tuple(int(rng.integers(1, max_q + 1)) for _ in range(d))
        if math.prod(q) <= max_cell:
            return q


def random_model(
    rng: np.random.Generator,
    max_d: int = 2,
    max_cell: int = 6,
    max_support: int = 6,
    reach: int = 2,
) -> OperatorModel:
    """Random finite-range model with exact complex-rational data."""
    d = int(rng.integers(1, max_d + 1))
    q = random_period(rng, d, max_cell)
    n_hop = int(rng.integers(1, max_support + 1))
    hoppings: dict[tuple[int, ...], GaussianRational] = {}
    while len(hoppings) < n_hop:
        offset = tuple(int(rng.integers(-reach, reach + 1)) for _ in range(d))
        hoppings[offset] = random_gaussian(rng, nonzero=True)
    potential = tuple(random_gaussian(rng) for _ in range(math.prod(q)))
    return OperatorModel(d=d, q=q, hoppings=hoppings, potential=potential)


def random_laurent(
    rng: np.random.Generator,
    nvars: int,
    max_terms: int = 5,
    reach: int = 3,
    order: int | None = None,
) -> LaurentPoly:
    """Random sparse Laurent polynomial; Fraction coefficients by default,
    cyclotomic ones when ``order`` is given."""
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        exps = tuple(int(rng.integers(-reach, reach + 1)) for _ in range(nvars))
        if order is None:
            terms[exps] = random_fraction(rng, nonzero=True)
        else:
            coeffs = {
                int(rng.integers(0, max(1, order // 2))): random_fraction(rng, nonzero=True)
                for _ in range(int(rng.integers(1, 3)))
            }
            value = CycloNumber(order, coeffs)
            if not value:
                value = CycloNumber.one(order)
            terms[exps] = value
    return LaurentPoly(nvars, terms)
