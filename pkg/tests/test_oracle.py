"""Numeric pipeline: Floquet matrices, monodromy evidence, bands, slices."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from blochcert.eig import eigenvalues
from blochcert.floquet import build_system, char_poly, fundamental_cell, lift_char
from blochcert.model import GaussianRational, OperatorModel, preset_model
from blochcert.oracle import (
    VERDICT_INCONCLUSIVE,
    VERDICT_INTRANSITIVE,
    VERDICT_TRANSITIVE,
    band_path,
    fermi_slice,
    floquet_matrix_at,
    monodromy_run,
    numeric_model,
    track_loop,
)

from conftest import random_gaussian


def gr(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def decoupled_chain(v0=0, v1=1):
    return OperatorModel(
        d=1,
        q=(2,),
        hoppings={(2,): gr(-1), (-2,): gr(-1)},
        potential=(gr(v0), gr(v1)),
    )


def test_matrix_free_chain():
    m = preset_model("square", (2,), d=1)
    mat = floquet_matrix_at(m, [1.0])
    assert np.allclose(mat, np.diag([-2.0, 2.0]), atol=1e-14)


def test_matrix_single_site_with_potential():
    m = preset_model("square", (1, 1), potential=(gr(3, 1),))
    mat = floquet_matrix_at(m, [1.0, 1.0])
    assert mat.shape == (1, 1)
    assert abs(mat[0, 0] - (-4 + 3 + 1j)) < 1e-14


def test_matrix_zero_coordinate_rejected():
    with pytest.raises(ZeroDivisionError):
        floquet_matrix_at(preset_model("square", (2,), d=1), [0.0])


def test_spectrum_twist_invariance():
    rng = np.random.default_rng(8)
    m = preset_model(
        "triangular", (2, 2),
        potential=tuple(random_gaussian(rng) for _ in range(4)),
    )
    z = np.exp(2j * np.pi * rng.uniform(size=2)) * (1 + 0.1 * rng.uniform(size=2))
    base = np.sort_complex(eigenvalues(floquet_matrix_at(m, z)))
    for n in fundamental_cell(m.q):
        mu = np.exp(2j * np.pi * np.array(n) / np.array(m.q))
        vals = np.sort_complex(eigenvalues(floquet_matrix_at(m, mu * z)))
        assert np.abs(vals - base).max() < 1e-9


def test_monodromy_free_chain_transitive():
    report = monodromy_run(preset_model("square", (2,), d=1), loops=32, seed=7)
    assert report.verdict == VERDICT_TRANSITIVE
    assert report.orbits == [[1, 2]]
    assert report.loops_run >= 1


def test_monodromy_decoupled_intransitive():
    report = monodromy_run(decoupled_chain(), loops=32, seed=3)
    assert report.verdict == VERDICT_INTRANSITIVE
    assert report.orbits == [[1], [2]]
    assert all(perm == [0, 1] for perm in report.permutations)


def test_monodromy_single_sheet():
    report = monodromy_run(preset_model("square", (1, 1)), loops=4, seed=0)
    assert report.verdict == VERDICT_TRANSITIVE
    assert report.orbits == [[1]]


def test_monodromy_too_few_loops_inconclusive():
    report = monodromy_run(decoupled_chain(), loops=3, seed=3, stable_window=8)
    assert report.verdict == VERDICT_INCONCLUSIVE


def test_monodromy_seeded_determinism():
    m = preset_model("square", (2, 2))
    a = monodromy_run(m, loops=6, seed=11)
    b = monodromy_run(m, loops=6, seed=11)
    assert a.to_json() == b.to_json()


def test_permutation_stable_under_refinement():
    nm = numeric_model(preset_model("square", (2,), d=1))
    rng = np.random.default_rng(5)
    w = (1.0 + 0.02 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform(size=1))
    z0 = np.abs(w) ** 0.5 * np.exp(1j * np.angle(w) / 2)
    base = eigenvalues(floquet_matrix_at(nm, z0))
    base = base[np.lexsort((base.imag, base.real))]
    for center in (0j, 0.3 + 0.2j, w[0] * 0.9):
        coarse = track_loop(nm, z0, base, 0, center, dt0=1.0 / 16)
        fine = track_loop(nm, z0, base, 0, center, dt0=1.0 / 32)
        assert coarse.ok and fine.ok
        assert list(coarse.perm) == list(fine.perm)


def test_monodromy_report_schema():
    report = monodromy_run(preset_model("square", (2,), d=1), loops=8, seed=1)
    doc = report.to_dict()
    assert set(doc) == {
        "seed", "verdict", "base_point", "loops_requested", "loops_run",
        "permutations", "orbits", "diagnostics", "soundness",
    }
    # permutations and orbits are reported 1-based
    assert all(min(p) >= 1 for p in doc["permutations"])
    assert sorted(x for orbit in doc["orbits"] for x in orbit) == [1, 2]
    assert doc["diagnostics"]["min_eigengap"] is None or doc["diagnostics"]["min_eigengap"] > 0


def test_roots_of_lifted_polynomial_match_tracked_base():
    m = preset_model(
        "square", (2,), d=1,
        potential=(gr(1, 1), gr(-1, 2)),
    )
    system = build_system(m)
    char_poly(system)
    lifted = lift_char(system)
    report = monodromy_run(m, loops=2, seed=9)
    w0 = np.array(report.base_point)
    size = m.cell_size
    coeffs = [lifted.coefficient_of(m.d, k).eval(w0) for k in range(size, -1, -1)]
    roots = np.roots(coeffs)
    z0 = np.abs(w0) ** (1 / 2) * np.exp(1j * np.angle(w0) / 2)
    evals = eigenvalues(floquet_matrix_at(m, z0))
    cost = np.abs(roots[:, None] - evals[None, :])
    rows, cols = linear_sum_assignment(cost)
    assert cost[rows, cols].max() < 1e-8


def test_band_free_chain_cosine():
    m = preset_model("square", (1,), d=1)
    table = band_path(m, [(0.0,), (0.5,)], 64)
    assert table.hermitian
    for t, k, vals in zip(table.ts, table.ks, table.values):
        assert abs(vals[0].real - (-2 * math.cos(2 * math.pi * k[0]))) < 1e-12
    assert abs(table.values[0][0].real + 2) < 1e-15
    assert abs(table.values[-1][0].real - 2) < 1e-15


def test_band_constant_shift():
    c = Fraction(5, 4)
    path = [(0.0, 0.0), (0.5, 0.5), (0.5, 0.0)]
    base = band_path(preset_model("square", (2, 2)), path, 16)
    shifted = band_path(
        preset_model("square", (2, 2), potential=(gr(c),) * 4), path, 16
    )
    for u, v in zip(base.values, shifted.values):
        assert np.abs(v - (u + float(c))).max() < 1e-12


def test_band_square_corner():
    m = preset_model("square", (1, 1))
    table = band_path(m, [(0.0, 0.0), (0.5, 0.5)], 3)
    assert table.ks[-1] == (0.5, 0.5)
    assert abs(table.values[-1][0].real - 4.0) < 1e-12


def test_band_complex_sorting():
    m = preset_model("square", (2,), d=1, potential=(gr(0, 1), gr(0, -1)))
    table = band_path(m, [(0.0,), (0.5,)], 8)
    assert not table.hermitian
    for vals in table.values:
        keys = [(v.real, v.imag) for v in vals]
        assert keys == sorted(keys)


def test_band_csv_shape():
    m = preset_model("square", (1, 1))
    csv_text = band_path(m, [(0.0, 0.0), (0.5, 0.5)], 3).to_csv()
    lines = csv_text.strip().split("\n")
    assert lines[0] == "t,k1,k2,re_lam_1,im_lam_1"
    assert len(lines) == 4


def test_fermi_far_level_empty():
    result = fermi_slice(preset_model("square", (1, 1)), 100.0, 16)
    assert result.points == []
    assert result.to_csv() == "k1,k2,residual\n"


def test_fermi_contains_band_values():
    m = preset_model("square", (1, 1))
    grid = 8
    k = (2 / grid, 3 / grid)
    level = float(
        eigenvalues(floquet_matrix_at(m, np.exp(2j * np.pi * np.array(k))))[0].real
    )
    result = fermi_slice(m, level, grid)
    assert any(
        max(abs(a - b) for a, b in zip(p, k)) < 1e-12 for p in result.points
    )


def test_fermi_zero_level_curve():
    result = fermi_slice(preset_model("square", (1, 1)), 0.0, 16)
    assert result.points
    for point in result.points:
        total = math.cos(2 * math.pi * point[0]) + math.cos(2 * math.pi * point[1])
        assert abs(2 * total) < 1e-5
    assert any(
        abs(p[0] - 0.25) < 1e-9 and abs(p[1] - 0.25) < 1e-9 for p in result.points
    )


def test_fermi_complex_level_nonhermitian():
    m = preset_model("square", (2,), d=1, potential=(gr(0, 1), gr(0, -1)))
    nm = numeric_model(m)
    assert not nm.hermitian
    k = (0.125,)
    vals = eigenvalues(floquet_matrix_at(m, np.exp(2j * np.pi * np.array(k))))
    level = complex(vals[0])
    result = fermi_slice(m, level, 8)
    assert any(abs(p[0] - k[0]) < 1e-9 for p in result.points)
