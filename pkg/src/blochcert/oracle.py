"""Numerical cross-validation and physics output.

Everything here works in double precision and is independent of the
exact symbolic pipeline: diagonal entries come from evaluating the
symbol at numerically twisted points and the coupling matrix from the
complex Fourier sum, so agreement with the exact objects is a genuine
two-route check.

The monodromy runner gathers evidence about irreducibility of the lifted
characteristic polynomial.  Its root sheets are well defined over the
lifted variables w (the Floquet spectrum is the same at every choice of
q-th roots of w), so driving one coordinate of w around a closed circle
and tracking the eigenvalues induces a permutation of the sheets.  Loops
are tracked adaptively: a step is accepted only when the largest
eigenvalue displacement stays below a third of the smallest pairwise
gap, which makes nearest-neighbor matching unambiguous; otherwise the
step is halved, and a loop that cannot be tracked is replaced by a fresh
perturbed one.  Because the polynomial is monic in lambda up to sign,
every irreducible factor has positive lambda-degree and corresponds to a
loop-invariant set of sheets: a transitive permutation group is evidence
(not proof) of irreducibility, a stably intransitive one is evidence of
a factorization, and neither overrides the exact certificate.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .eig import eigenvalues
from .floquet import fundamental_cell
from .model import OperatorModel

VERDICT_TRANSITIVE = "TRANSITIVE"
VERDICT_INTRANSITIVE = "INTRANSITIVE_STABLE"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"

SOUNDNESS_NOTE = (
    "TRANSITIVE is numerical evidence, not proof, of irreducibility of the "
    "lifted characteristic polynomial: it is monic in lambda up to sign, so "
    "every factor has positive lambda-degree and corresponds to a "
    "loop-invariant subset of the root sheets.  INTRANSITIVE_STABLE is "
    "evidence of a factorization.  Neither verdict overrides the exact "
    "certificate."
)


@dataclass
class NumericModel:
    """Precomputed double-precision evaluator for one operator model."""

    d: int
    q: tuple[int, ...]
    cell_size: int
    exponents: np.ndarray  # (terms, d) symbol exponents (already negated offsets)
    weights: np.ndarray  # (terms,) complex hopping coefficients
    characters: np.ndarray  # (cell, d) complex character values
    coupling: np.ndarray  # (cell, cell) complex
    hermitian: bool


def numeric_model(model: OperatorModel) -> NumericModel:
    """Build the numeric evaluator directly from the model data."""
    cell = fundamental_cell(model.q)
    size = len(cell)
    exponents = np.array(
        [[-c for c in n] for n in model.hoppings], dtype=np.int64
    ).reshape(len(model.hoppings), model.d)
    weights = np.array(
        [a.to_complex() for a in model.hoppings.values()], dtype=complex
    )
    characters = np.array(
        [
            [np.exp(2j * np.pi * nj / qj) for nj, qj in zip(n, model.q)]
            for n in cell
        ],
        dtype=complex,
    )
    pot = np.array([v.to_complex() for v in model.potential], dtype=complex)
    coupling = np.zeros((size, size), dtype=complex)
    for a, n in enumerate(cell):
        for b, m in enumerate(cell):
            phases = np.array(
                [
                    np.exp(
                        -2j
                        * np.pi
                        * sum(lj * (nj - mj) / qj for lj, nj, mj, qj in zip(l, n, m, model.q))
                    )
                    for l in cell
                ]
            )
            coupling[a, b] = (pot * phases).sum() / size

    hermitian = all(v.is_real for v in model.potential) and all(
        tuple(-c for c in n) in model.hoppings
        and model.hoppings[tuple(-c for c in n)] == a.conjugate()
        for n, a in model.hoppings.items()
    )
    return NumericModel(
        d=model.d,
        q=tuple(model.q),
        cell_size=size,
        exponents=exponents,
        weights=weights,
        characters=characters,
        coupling=coupling,
        hermitian=hermitian,
    )


def _as_numeric(model) -> NumericModel:
    return model if isinstance(model, NumericModel) else numeric_model(model)


def floquet_matrix_at(model, z) -> np.ndarray:
    """Floquet matrix at the point z: twisted-symbol diagonal plus the
    constant coupling matrix, evaluated in double precision."""
    nm = _as_numeric(model)
    z = np.asarray(z, dtype=complex)
    if z.shape != (nm.d,):
        raise ValueError(f"expected {nm.d} coordinates, got shape {z.shape}")
    if np.any(z == 0):
        raise ZeroDivisionError("Floquet matrix undefined at a zero coordinate")
    points = nm.characters * z  # (cell, d)
    powers = points[:, None, :] ** nm.exponents[None, :, :]
    diag = (powers.prod(axis=2) * nm.weights[None, :]).sum(axis=1)
    matrix = nm.coupling.copy()
    matrix[np.diag_indices(nm.cell_size)] += diag
    return matrix


# -- eigenvalue bookkeeping -------------------------------------------------


def _min_pairwise_gap(vals: np.ndarray) -> float:
    n = len(vals)
    if n < 2:
        return math.inf
    dist = np.abs(vals[:, None] - vals[None, :])
    dist[np.diag_indices(n)] = math.inf
    return float(dist.min())


def _greedy_match(old: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, float]:
    """Globally greedy nearest-neighbor matching old[i] -> new[perm[i]];
    returns (perm, max displacement)."""
    n = len(old)
    dist = np.abs(old[:, None] - new[None, :])
    perm = np.full(n, -1, dtype=int)
    used = np.zeros(n, dtype=bool)
    max_disp = 0.0
    for flat in np.argsort(dist, axis=None):
        i, j = divmod(int(flat), n)
        if perm[i] >= 0 or used[j]:
            continue
        perm[i] = j
        used[j] = True
        max_disp = max(max_disp, float(dist[i, j]))
        if used.all():
            break
    return perm, max_disp


def _canonical_sort(vals: np.ndarray) -> np.ndarray:
    return vals[np.lexsort((vals.imag, vals.real))]


# -- monodromy ----------------------------------------------------------------


@dataclass
class LoopOutcome:
    ok: bool
    perm: np.ndarray | None
    steps: int
    min_gap: float
    reason: str = ""


def track_loop(
    nm: NumericModel,
    z0: np.ndarray,
    base: np.ndarray,
    axis: int,
    center: complex,
    max_steps: int = 10000,
    dt0: float = 1.0 / 16,
    close_tol: float = 1e-6,
) -> LoopOutcome:
    """Track the eigenvalue sheets around one circular loop of w_axis.

    The loop is the circle through w_axis(0) = z0[axis]**q_axis centered
    at ``center``; the moving coordinate z_axis follows the continued
    q-th root of w_axis (argument unwrapping, never re-branched).  The
    returned permutation sends each starting sheet to the index of the
    base eigenvalue it lands on.
    """
    qa = nm.q[axis]
    start = z0[axis] ** qa
    ray = start - center
    if abs(ray) < 1e-12 * max(1.0, abs(start)):
        return LoopOutcome(False, None, 0, math.inf, "degenerate circle")
    scale = max(1.0, float(np.abs(base).max()))
    cur = base.copy()
    z = np.array(z0, dtype=complex)
    theta = float(np.angle(start))
    prev_w = start
    t, dt = 0.0, dt0
    steps = 0
    min_gap = math.inf

    while t < 1.0:
        if steps >= max_steps:
            return LoopOutcome(False, None, steps, min_gap, "step budget exhausted")
        tn = min(1.0, t + dt)
        w_new = center + ray * np.exp(2j * np.pi * tn)
        delta = float(np.angle(w_new / prev_w))
        if abs(delta) > np.pi / 2:
            dt /= 2
            if dt < 1e-7:
                return LoopOutcome(False, None, steps, min_gap, "step underflow")
            continue
        theta_new = theta + delta
        z_new = z.copy()
        z_new[axis] = abs(w_new) ** (1.0 / qa) * np.exp(1j * theta_new / qa)
        vals = eigenvalues(floquet_matrix_at(nm, z_new))
        steps += 1
        perm, max_disp = _greedy_match(cur, vals)
        gap = _min_pairwise_gap(vals)
        min_gap = min(min_gap, gap)
        if gap <= 1e-12 * scale or not max_disp < gap / 3.0:
            dt /= 2
            if dt < 1e-7:
                return LoopOutcome(False, None, steps, min_gap, "near-collision")
            continue
        cur = vals[perm]
        t, theta, prev_w, z = tn, theta_new, w_new, z_new
        dt = min(dt * 1.25, 1.0 / 8, 1.0)

    cost = np.abs(cur[:, None] - base[None, :])
    rows, cols = linear_sum_assignment(cost)
    closure = np.empty(len(base), dtype=int)
    closure[rows] = cols
    mismatch = float(np.abs(cur - base[closure]).max())
    if mismatch > close_tol * scale:
        return LoopOutcome(False, None, steps, min_gap, "loop failed to close")
    return LoopOutcome(True, closure, steps, min_gap)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def partition(self, n: int) -> tuple[tuple[int, ...], ...]:
        groups: dict[int, list[int]] = {}
        for x in range(n):
            groups.setdefault(self.find(x), []).append(x)
        return tuple(tuple(g) for g in sorted(groups.values()))


@dataclass
class MonodromyReport:
    """Loop permutations, orbit partition, and verdict for one run."""

    seed: int
    verdict: str
    base_point: list[complex]
    loops_requested: int
    loops_run: int
    permutations: list[list[int]]  # 0-based sheet maps, one per loop
    orbits: list[list[int]]  # 1-based, each sorted
    diagnostics: dict = field(default_factory=dict)
    soundness: str = SOUNDNESS_NOTE

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "verdict": self.verdict,
            "base_point": [{"re": w.real, "im": w.imag} for w in self.base_point],
            "loops_requested": self.loops_requested,
            "loops_run": self.loops_run,
            "permutations": [[p + 1 for p in perm] for perm in self.permutations],
            "orbits": self.orbits,
            "diagnostics": self.diagnostics,
            "soundness": self.soundness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def monodromy_run(
    model,
    loops: int = 32,
    seed: int = 0,
    retries: int = 10,
    max_steps: int = 10000,
    stable_window: int = 8,
) -> MonodromyReport:
    """Gather monodromy evidence from ``loops`` random circular loops.

    All randomness (base point, loop axes, centers) flows from ``seed``.
    Stops early once the sheets form a single orbit; reports
    INTRANSITIVE_STABLE only when the orbit partition survived the final
    ``stable_window`` loops unchanged, and INCONCLUSIVE otherwise (for
    example under persistent near-degeneracies).
    """
    if loops < 1:
        raise ValueError("loops must be >= 1")
    nm = _as_numeric(model)
    size = nm.cell_size
    rng = np.random.default_rng(seed)

    base_w = None
    base = None
    z0 = None
    for _ in range(retries + 1):
        phases = rng.uniform(0.0, 1.0, nm.d)
        radii = 1.0 + 0.05 * rng.uniform(-1.0, 1.0, nm.d)
        w = radii * np.exp(2j * np.pi * phases)
        z = np.abs(w) ** (1.0 / np.array(nm.q)) * np.exp(
            1j * np.angle(w) / np.array(nm.q)
        )
        vals = _canonical_sort(eigenvalues(floquet_matrix_at(nm, z)))
        scale = max(1.0, float(np.abs(vals).max()))
        if size < 2 or _min_pairwise_gap(vals) > 1e-9 * scale:
            base_w, base, z0 = w, vals, z
            break
    if base is None:
        return MonodromyReport(
            seed=seed,
            verdict=VERDICT_INCONCLUSIVE,
            base_point=[],
            loops_requested=loops,
            loops_run=0,
            permutations=[],
            orbits=[],
            diagnostics={"reason": "no base point with separated eigenvalues"},
        )

    if size == 1:
        return MonodromyReport(
            seed=seed,
            verdict=VERDICT_TRANSITIVE,
            base_point=list(base_w),
            loops_requested=loops,
            loops_run=0,
            permutations=[],
            orbits=[[1]],
            diagnostics={"note": "single sheet"},
        )

    uf = _UnionFind(size)
    perms: list[list[int]] = []
    snapshots: list[tuple[tuple[int, ...], ...]] = []
    min_gap_seen = math.inf
    total_steps = 0
    total_retries = 0
    verdict = None

    for _ in range(loops):
        outcome = None
        for _attempt in range(retries):
            axis = int(rng.integers(nm.d))
            rho = rng.uniform(0.0, 1.2)
            phi = rng.uniform(0.0, 1.0)
            center = base_w[axis] * rho * np.exp(2j * np.pi * phi)
            result = track_loop(nm, z0, base, axis, center, max_steps=max_steps)
            total_steps += result.steps
            min_gap_seen = min(min_gap_seen, result.min_gap)
            if result.ok:
                outcome = result
                break
            total_retries += 1
        if outcome is None:
            verdict = VERDICT_INCONCLUSIVE
            break
        perms.append([int(x) for x in outcome.perm])
        for i, j in enumerate(outcome.perm):
            uf.union(i, int(j))
        snapshot = uf.partition(size)
        snapshots.append(snapshot)
        if len(snapshot) == 1:
            verdict = VERDICT_TRANSITIVE
            break

    if verdict is None:
        last = snapshots[-1]
        if len(last) == 1:
            verdict = VERDICT_TRANSITIVE
        elif len(snapshots) >= stable_window and all(
            s == last for s in snapshots[-stable_window:]
        ):
            verdict = VERDICT_INTRANSITIVE
        else:
            verdict = VERDICT_INCONCLUSIVE

    orbits = [
        sorted(x + 1 for x in group) for group in uf.partition(size)
    ]
    return MonodromyReport(
        seed=seed,
        verdict=verdict,
        base_point=list(base_w),
        loops_requested=loops,
        loops_run=len(perms),
        permutations=perms,
        orbits=orbits,
        diagnostics={
            "min_eigengap": min_gap_seen if min_gap_seen < math.inf else None,
            "steps": total_steps,
            "retries": total_retries,
        },
    )


# -- band structure -----------------------------------------------------------


@dataclass
class BandTable:
    """Sampled eigenvalues along a k-path; rows align with ``ts``."""

    ts: list[float]
    ks: list[tuple[float, ...]]
    values: list[np.ndarray]
    hermitian: bool

    def to_csv(self) -> str:
        d = len(self.ks[0]) if self.ks else 0
        nbands = len(self.values[0]) if self.values else 0
        header = (
            ["t"]
            + [f"k{j + 1}" for j in range(d)]
            + [x for i in range(nbands) for x in (f"re_lam_{i + 1}", f"im_lam_{i + 1}")]
        )
        lines = [",".join(header)]
        for t, k, vals in zip(self.ts, self.ks, self.values):
            row = [repr(t)] + [repr(x) for x in k]
            for v in vals:
                row.extend([repr(float(v.real)), repr(float(v.imag))])
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def band_path(model, kpath, samples: int) -> BandTable:
    """Eigenvalues along a piecewise-linear path of real quasi-momenta.

    Sampling is uniform in arc length with both endpoints included.  For
    models whose Floquet matrices are Hermitian (real potential, hopping
    map symmetric under n -> -n with conjugation) the eigenvalues are
    real and sorted ascending; otherwise they are sorted by real part
    then imaginary part.
    """
    nodes = [np.asarray(k, dtype=float) for k in kpath]
    if len(nodes) < 2:
        raise ValueError("k-path needs at least two nodes")
    nm = _as_numeric(model)
    for node in nodes:
        if node.shape != (nm.d,):
            raise ValueError(f"path node of dimension {node.shape}, expected ({nm.d},)")
    seg_lengths = [
        float(np.linalg.norm(b - a)) for a, b in zip(nodes[:-1], nodes[1:])
    ]
    total = sum(seg_lengths)
    if total == 0.0:
        seg_lengths = [1.0] * (len(nodes) - 1)
        total = float(len(nodes) - 1)
    cuts = np.concatenate([[0.0], np.cumsum(seg_lengths)]) / total

    ts = [0.0] if samples == 1 else [i / (samples - 1) for i in range(samples)]
    ks, values = [], []
    for t in ts:
        seg = min(np.searchsorted(cuts, t, side="right") - 1, len(nodes) - 2)
        seg = max(seg, 0)
        span = cuts[seg + 1] - cuts[seg]
        frac = 0.0 if span == 0 else (t - cuts[seg]) / span
        k = nodes[seg] * (1 - frac) + nodes[seg + 1] * frac
        z = np.exp(2j * np.pi * k)
        vals = eigenvalues(floquet_matrix_at(nm, z))
        if nm.hermitian:
            vals = np.sort(vals.real).astype(complex)
        else:
            vals = _canonical_sort(vals)
        ks.append(tuple(float(x) for x in k))
        values.append(vals)
    return BandTable(ts=ts, ks=ks, values=values, hermitian=nm.hermitian)


# -- Fermi slice --------------------------------------------------------------


@dataclass
class FermiSlice:
    """Real quasi-momenta where some eigenvalue meets the level."""

    level: complex
    d: int
    points: list[tuple[float, ...]]
    residuals: list[float]

    def to_csv(self) -> str:
        header = [f"k{j + 1}" for j in range(self.d)] + ["residual"]
        lines = [",".join(header)]
        for k, r in zip(self.points, self.residuals):
            lines.append(",".join([repr(x) for x in k] + [repr(r)]))
        return "\n".join(lines) + "\n"


def fermi_slice(model, level, grid: int, tol: float = 1e-6) -> FermiSlice:
    """Level-set sample of the band structure over [0,1)^d.

    Grid nodes whose nearest eigenvalue is within ``tol`` of the level
    are kept; grid edges are refined by bisection (per band, Hermitian
    case) or golden-section on the nearest-eigenvalue distance, and
    refined points are kept under the same residual test.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    nm = _as_numeric(model)
    level = complex(level)
    d = nm.d

    def values_at(k: np.ndarray) -> np.ndarray:
        vals = eigenvalues(floquet_matrix_at(nm, np.exp(2j * np.pi * k)))
        if nm.hermitian:
            return np.sort(vals.real).astype(complex)
        return _canonical_sort(vals)

    node_vals: dict[tuple[int, ...], np.ndarray] = {}
    for idx in itertools.product(range(grid), repeat=d):
        node_vals[idx] = values_at(np.array(idx, dtype=float) / grid)

    found: list[tuple[tuple[float, ...], float]] = []
    for idx, vals in node_vals.items():
        res = float(np.abs(vals - level).min())
        if res < tol:
            found.append((tuple(i / grid for i in idx), res))

    hermitian_level = nm.hermitian and abs(level.imag) < tol
    for idx, vals_a in node_vals.items():
        k_a = np.array(idx, dtype=float) / grid
        for axis in range(d):
            nxt = list(idx)
            nxt[axis] += 1
            vals_b = node_vals[tuple(v % grid for v in nxt)]
            k_b = k_a.copy()
            k_b[axis] += 1.0 / grid
            if hermitian_level:
                for band in range(nm.cell_size):
                    ga = vals_a[band].real - level.real
                    gb = vals_b[band].real - level.real
                    if ga == 0.0 or ga * gb >= 0.0:
                        continue
                    lo_k, hi_k, g_lo = k_a, k_b, ga
                    point, res = None, None
                    for _ in range(60):
                        mid = (lo_k + hi_k) / 2
                        gm = values_at(mid)[band].real - level.real
                        if abs(gm) < tol:
                            point, res = mid, abs(gm)
                            break
                        if (g_lo < 0) == (gm < 0):
                            lo_k, g_lo = mid, gm
                        else:
                            hi_k = mid
                    if point is not None:
                        found.append((tuple(float(x) for x in point), float(res)))
            else:
                res_a = float(np.abs(vals_a - level).min())
                res_b = float(np.abs(vals_b - level).min())
                spread = float(np.abs(vals_a - vals_b).max())
                if min(res_a, res_b) > max(10 * tol, spread):
                    continue
                lo_t, hi_t = 0.0, 1.0
                inv_phi = (math.sqrt(5) - 1) / 2

                def dist(t: float) -> float:
                    k = k_a.copy()
                    k[axis] += t / grid
                    return float(np.abs(values_at(k) - level).min())

                a_t, b_t = lo_t, hi_t
                c_t = b_t - inv_phi * (b_t - a_t)
                d_t = a_t + inv_phi * (b_t - a_t)
                fc, fd = dist(c_t), dist(d_t)
                for _ in range(40):
                    if fc < fd:
                        b_t, d_t, fd = d_t, c_t, fc
                        c_t = b_t - inv_phi * (b_t - a_t)
                        fc = dist(c_t)
                    else:
                        a_t, c_t, fc = c_t, d_t, fd
                        d_t = a_t + inv_phi * (b_t - a_t)
                        fd = dist(d_t)
                t_best = (a_t + b_t) / 2
                res = dist(t_best)
                if res < tol:
                    k = k_a.copy()
                    k[axis] += t_best / grid
                    found.append((tuple(float(x) for x in k), float(res)))

    # Deduplicate nearby points, keep the smallest residual, sort for output.
    dedup: dict[tuple[int, ...], tuple[tuple[float, ...], float]] = {}
    for point, res in found:
        key = tuple(int(round(x * 1e9)) for x in point)
        if key not in dedup or res < dedup[key][1]:
            dedup[key] = (point, res)
    ordered = sorted(dedup.values(), key=lambda pr: pr[0])
    return FermiSlice(
        level=level,
        d=d,
        points=[p for p, _ in ordered],
        residuals=[r for _, r in ordered],
    )
