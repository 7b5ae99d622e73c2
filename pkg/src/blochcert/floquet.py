"""Floquet reduction: fundamental cell, twisted diagonal, coupling matrix,
and the exact characteristic Laurent polynomial with its sublattice lift.

For a model with period q the cell W enumerates the q_1*...*q_d residue
classes (row-major, last index fastest).  The Floquet matrix at z is the
diagonal of twisted symbols p(mu_n (.) z) plus the constant coupling
matrix built from the potential's discrete Fourier transform.  Its
determinant det(D + B - lambda*I), expanded exactly over the working
cyclotomic field, is a Laurent polynomial in z and a monic-up-to-sign
polynomial in lambda whose z-support lies on the q-sublattice; rewriting
it in w_j = z_j^q_j gives the polynomial whose zero set is the Bloch
variety in (w, lambda).

The coupling matrix uses the 1/Q-normalized transform: this is the unique
normalization under which a constant potential c acts as c*I, which the
rest of the pipeline relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import CycloNumber, root_of_unity
from .laurent import LaurentPoly, lift, pad_vars, supported_on_lattice, twist
from .model import OperatorModel, symbol

DEFAULT_SYMBOLIC_BUDGET = 12


class BudgetExceededError(RuntimeError):
    """Cell too large for the exact determinant; use the numeric pipeline."""


class InvariantViolationError(RuntimeError):
    """An internal structural guarantee failed; indicates a bug."""


def fundamental_cell(q: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Cell points 0 <= n_j < q_j in row-major order (last index fastest)."""
    return list(itertools.product(*(range(qj) for qj in q)))


def cell_characters(
    q: tuple[int, ...], order: int
) -> dict[tuple[int, ...], tuple[int, ...]]:
    """For each cell point n, the exponent table of its character: entry j
    is the power of zeta_order representing exp(2*pi*i*n_j/q_j)."""
    for qj in q:
        if order % qj != 0:
            raise ValueError(f"field order {order} not divisible by period {qj}")
    return {
        n: tuple(nj * (order // qj) % order for nj, qj in zip(n, q))
        for n in fundamental_cell(q)
    }


def coupling_matrix(model: OperatorModel) -> list[list[CycloNumber]]:
    """Constant matrix with entries indexed by cell points (n, n'):
    (1/Q) * sum over the cell of V_l * zeta^(-sum_j l_j (n_j - n'_j) order/q_j).

    Depends on n - n' modulo q only; for a real potential it is Hermitian;
    for a constant potential c it equals c times the identity.
    """
    order = model.field_order
    q = model.q
    cell = fundamental_cell(q)
    size = len(cell)
    inv_size = Fraction(1, size)
    values = [v.to_cyclo(order) for v in model.potential]

    # One transform per difference class, then fill by n - n' mod q.
    diff_table: dict[tuple[int, ...], CycloNumber] = {}
    for delta in cell:
        acc = CycloNumber.zero(order)
        for l, v in zip(cell, values):
            if not v:
                continue
            e = -sum(lj * dj * (order // qj) for lj, dj, qj in zip(l, delta, q)) % order
            acc = acc + v * root_of_unity(e, order)
        diff_table[delta] = inv_size * acc

    matrix = []
    for n in cell:
        row = []
        for m in cell:
            delta = tuple((nj - mj) % qj for nj, mj, qj in zip(n, m, q))
            row.append(diff_table[delta])
        matrix.append(row)
    return matrix


@dataclass
class FloquetSystem:
    """All intermediate objects of the reduction for one model.

    ``char`` and ``lifted`` are filled by :func:`char_poly` and
    :func:`lift_char`; everything else is built eagerly.
    """

    model: OperatorModel
    order: int
    cell: list[tuple[int, ...]]
    characters: dict[tuple[int, ...], tuple[int, ...]]
    diagonal: list[LaurentPoly]
    coupling: list[list[CycloNumber]]
    char: LaurentPoly | None = field(default=None)
    lifted: LaurentPoly | None = field(default=None)


def build_system(model: OperatorModel) -> FloquetSystem:
    """Assemble cell, characters, twisted diagonal, and coupling matrix."""
    order = model.field_order
    p = symbol(model)
    cell = fundamental_cell(model.q)
    return FloquetSystem(
        model=model,
        order=order,
        cell=cell,
        characters=cell_characters(model.q, order),
        diagonal=[twist(p, n, model.q) for n in cell],
        coupling=coupling_matrix(model),
    )


def _det_memoized(entries: list[list[LaurentPoly]], nvars: int, one) -> LaurentPoly:
    # Cofactor expansion over the first remaining row, memoized on the set
    # of remaining columns (size * 2^size subproblems instead of size!).
    size = len(entries)
    zero = LaurentPoly.zero(nvars)
    cache: dict[int, LaurentPoly] = {}

    full_mask = (1 << size) - 1

    def minor(mask: int) -> LaurentPoly:
        if mask == 0:
            return LaurentPoly.constant(nvars, one)
        got = cache.get(mask)
        if got is not None:
            return got
        row = size - bin(mask).count("1")
        acc = zero
        sign = 1
        rest = mask
        while rest:
            low = rest & (-rest)
            col = low.bit_length() - 1
            entry = entries[row][col]
            if entry:
                sub = minor(mask & ~low)
                term = entry * sub
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
            rest ^= low
        cache[mask] = acc
        return acc

    return minor(full_mask)


def char_poly(
    system: FloquetSystem, budget: int = DEFAULT_SYMBOLIC_BUDGET
) -> LaurentPoly:
    """Exact determinant of (diagonal + coupling - lambda*I) as a Laurent
    polynomial in (z_1..z_d, lambda); lambda is the last variable.

    Verifies the two structural guarantees before returning: the lambda^Q
    coefficient is exactly (-1)^Q and the z-support lies on the
    q-sublattice.  Stores the result on ``system.char``.
    """
    size = len(system.cell)
    if size > budget:
        raise BudgetExceededError(
            f"cell size {size} exceeds the symbolic budget {budget}; "
            "use the numeric pipeline (monodromy/bands) instead"
        )
    d = system.model.d
    nv = d + 1
    one = CycloNumber.one(system.order)
    lam = LaurentPoly.variable(nv, d, one)
    entries: list[list[LaurentPoly]] = []
    for i in range(size):
        row = []
        for j in range(size):
            cell_entry = LaurentPoly.constant(nv, system.coupling[i][j])
            if i == j:
                cell_entry = cell_entry + pad_vars(system.diagonal[i], nv) - lam
            row.append(cell_entry)
        entries.append(row)
    det = _det_memoized(entries, nv, one)

    lead = det.coefficient_of(d, size)
    expected = LaurentPoly.constant(d, CycloNumber.from_value(system.order, (-1) ** size))
    if lead != expected:
        raise InvariantViolationError(
            f"lambda-leading coefficient is {lead!r}, expected (-1)^{size}"
        )
    if not supported_on_lattice(det, system.model.q):
        raise InvariantViolationError("characteristic polynomial leaves the sublattice")
    system.char = det
    return det


def lift_char(system: FloquetSystem) -> LaurentPoly:
    """Rewrite the characteristic polynomial in w_j = z_j^q_j (lambda kept);
    stores the result on ``system.lifted``."""
    if system.char is None:
        char_poly(system)
    try:
        lifted = lift(system.char, system.model.q)
    except Exception as exc:  # support already verified; would be a bug
        raise InvariantViolationError(str(exc)) from exc
    system.lifted = lifted
    return lifted
