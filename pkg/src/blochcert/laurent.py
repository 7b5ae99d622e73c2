"""Sparse multivariate Laurent polynomials and their degree machinery.

A polynomial maps exponent multi-indexes (tuples of ints, negatives
allowed) to nonzero coefficients.  Coefficients may be exact
(:class:`~blochcert.cyclotomic.CycloNumber`, ``Fraction``, ``int``) or
numeric (``float``/``complex``); exact and floating domains are never
mixed implicitly.

Besides ring arithmetic this module provides the pieces the certifier is
built from: the lowest-degree component, per-variable pole orders, the
character twist z -> mu (.) z, the sublattice-support test, and the lift
that rewrites a lattice-supported polynomial in the variables w_j = z_j^q_j.

The total degree of a monomial is the sum of its exponents.  Canonical
term order (used for serialization) is descending total degree with
ascending lexicographic tie-break.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycloNumber, root_of_unity


class ArityMismatchError(ValueError):
    """Operands have different numbers of variables."""


class DomainMismatchError(TypeError):
    """Operation requires a coefficient domain the polynomial does not have."""


class ZeroPolynomialError(ValueError):
    """The operation is undefined for the zero polynomial."""


class PoleEvaluationError(ZeroDivisionError):
    """Evaluation point has a zero coordinate where the polynomial has a pole."""


class LatticeSupportError(ValueError):
    """Support leaves the period sublattice; carries a witness exponent."""

    def __init__(self, exponent: tuple[int, ...], axis: int, period: int):
        self.exponent = exponent
        self.axis = axis
        self.period = period
        super().__init__(
            f"exponent {exponent} has {exponent[axis]} on axis {axis}, "
            f"not divisible by period {period}"
        )


class LaurentPoly:
    """Immutable sparse Laurent polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if nvars < 0:
            raise ValueError(f"nvars must be >= 0, got {nvars}")
        clean: dict[tuple[int, ...], object] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ArityMismatchError(
                    f"exponent {exps} has arity {len(exps)}, expected {nvars}"
                )
            if coeff:
                clean[exps] = coeff
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, coeff) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: coeff})

    @classmethod
    def monomial(cls, nvars: int, exponents: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(nvars, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, nvars: int, index: int, coeff=1) -> "LaurentPoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): coeff})

    # -- ring structure ------------------------------------------------

    def _check_arity(self, other: "LaurentPoly"):
        if other.nvars != self.nvars:
            raise ArityMismatchError(
                f"mixed arities {self.nvars} and {other.nvars}"
            )

    def _as_poly(self, other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            self._check_arity(other)
            return other
        if isinstance(other, (int, float, complex, Fraction, CycloNumber)):
            return LaurentPoly.constant(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in other.terms.items():
            if exps in out:
                s = out[exps] + c
                if s:
                    out[exps] = s
                else:
                    del out[exps]
            else:
                out[exps] = c
        return LaurentPoly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            self._check_arity(other)
            out: dict[tuple[int, ...], object] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c = c1 * c2
                    if e in out:
                        s = out[e] + c
                        if s:
                            out[e] = s
                        else:
                            del out[e]
                    elif c:
                        out[e] = c
            return LaurentPoly(self.nvars, out)
        if isinstance(other, (int, float, complex, Fraction, CycloNumber)):
            if not other:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.keys())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------

    @property
    def support(self) -> Iterable[tuple[int, ...]]:
        return self.terms.keys()

    def min_total_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return min(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        """Highest exponent of variable ``index`` over the support."""
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return max(e[index] for e in self.terms)

    def coefficient_of(self, index: int, power: int) -> "LaurentPoly":
        """Coefficient of variable ``index`` to ``power``, in the remaining vars."""
        out = {}
        for exps, c in self.terms.items():
            if exps[index] == power:
                out[exps[:index] + exps[index + 1:]] = c
        return LaurentPoly(self.nvars - 1, out)

    def eval(self, point: Sequence[complex]) -> complex:
        """Direct sparse evaluation; cyclotomic coefficients go through
        their double-precision value."""
        if len(point) != self.nvars:
            raise ArityMismatchError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        total = 0j
        for exps, coeff in self.terms.items():
            val = coeff.to_complex() if isinstance(coeff, CycloNumber) else complex(coeff)
            for x, e in zip(point, exps):
                if e == 0:
                    continue
                if x == 0 and e < 0:
                    raise PoleEvaluationError(
                        f"zero coordinate with negative exponent {e}"
                    )
                val *= x ** e
            total += val
        return total

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly(0)"
        body = " ".join(
            f"{c}*{e}" for e, c in sorted(self.terms.items(), key=lambda t: t[0])
        )
        return f"LaurentPoly({self.nvars}; {body})"


# -- degree machinery ----------------------------------------------------


def lowest_component(f: LaurentPoly) -> LaurentPoly:
    """Sum of the terms of minimal total degree of a nonzero polynomial."""
    if not f:
        raise ZeroPolynomialError("lowest component of the zero polynomial")
    low = f.min_total_degree()
    return LaurentPoly(f.nvars, {e: c for e, c in f.terms.items() if sum(e) == low})


def pole_orders(f: LaurentPoly) -> tuple[int, ...]:
    """Order of the pole at coordinate j = 0, per variable.

    Entry j is max(0, -(minimum exponent of variable j over the support)),
    i.e. 0 when the polynomial is regular in that variable.
    """
    if not f:
        raise ZeroPolynomialError("pole orders of the zero polynomial")
    mins = [min(e[j] for e in f.terms) for j in range(f.nvars)]
    return tuple(max(0, -m) for m in mins)


def _cyclo_order(f: LaurentPoly) -> int:
    # Rational coefficients embed canonically, so they are tolerated next
    # to cyclotomic ones; floats/complex are not exact and are rejected.
    orders = {c.order for c in f.terms.values() if isinstance(c, CycloNumber)}
    if not orders:
        raise DomainMismatchError("polynomial has no cyclotomic coefficients")
    if len(orders) > 1:
        raise DomainMismatchError(f"mixed cyclotomic orders {sorted(orders)}")
    if any(
        not isinstance(c, (CycloNumber, int, Fraction)) for c in f.terms.values()
    ):
        raise DomainMismatchError(
            "polynomial mixes cyclotomic and inexact coefficients"
        )
    return orders.pop()


def twist(f: LaurentPoly, shift: Sequence[int], q: Sequence[int]) -> LaurentPoly:
    """Substitute z_j -> exp(2*pi*i*shift_j/q_j) * z_j on the first len(q)
    variables (any trailing variables ride along untouched).

    Coefficients must be cyclotomic with every q_j dividing the field order.
    """
    if not f:
        return f
    order = _cyclo_order(f)
    d = len(q)
    if d > f.nvars or len(shift) != d:
        raise ArityMismatchError(
            f"twist of {f.nvars}-variable polynomial with {len(shift)} shifts, {d} periods"
        )
    for qj in q:
        if order % qj != 0:
            raise DomainMismatchError(
                f"field order {order} is not divisible by period {qj}"
            )
    out = {}
    for exps, coeff in f.terms.items():
        e = sum(exps[j] * shift[j] * (order // q[j]) for j in range(d)) % order
        out[exps] = coeff * root_of_unity(e, order)
    return LaurentPoly(f.nvars, out)


def supported_on_lattice(f: LaurentPoly, q: Sequence[int]) -> bool:
    """True iff every exponent is divisible by q componentwise on the first
    len(q) variables (trailing variables are unconstrained)."""
    return all(
        exps[j] % q[j] == 0 for exps in f.terms for j in range(len(q))
    )


def lift(f: LaurentPoly, q: Sequence[int]) -> LaurentPoly:
    """Rewrite f, whose support lies on the q-sublattice, in w_j = z_j^q_j.

    Raises :class:`LatticeSupportError` with a witness exponent otherwise.
    """
    d = len(q)
    out = {}
    for exps, coeff in f.terms.items():
        for j in range(d):
            if exps[j] % q[j] != 0:
                raise LatticeSupportError(exps, j, q[j])
        out[tuple(e // q[j] if j < d else e for j, e in enumerate(exps))] = coeff
    return LaurentPoly(f.nvars, out)


def compose_powers(f: LaurentPoly, q: Sequence[int]) -> LaurentPoly:
    """Substitute w_j -> z_j^q_j on the first len(q) variables (inverse of
    :func:`lift` on its image)."""
    d = len(q)
    out = {}
    for exps, coeff in f.terms.items():
        out[tuple(e * q[j] if j < d else e for j, e in enumerate(exps))] = coeff
    return LaurentPoly(f.nvars, out)


def pad_vars(f: LaurentPoly, nvars: int) -> LaurentPoly:
    """Embed into a ring with more variables, appended at the end."""
    if nvars < f.nvars:
        raise ArityMismatchError(f"cannot shrink {f.nvars} variables to {nvars}")
    extra = (0,) * (nvars - f.nvars)
    return LaurentPoly(nvars, {e + extra: c for e, c in f.terms.items()})


# -- canonical serialization ----------------------------------------------


def variable_names(d: int, lifted: bool = False, with_lambda: bool = False) -> list[str]:
    stem = "w" if lifted else "z"
    names = [stem] if d == 1 else [f"{stem}{j + 1}" for j in range(d)]
    if with_lambda:
        names.append("lam")
    return names


def sorted_terms(f: LaurentPoly) -> list[tuple[tuple[int, ...], object]]:
    """Terms in canonical order: descending total degree, then ascending lex."""
    return sorted(f.terms.items(), key=lambda t: (-sum(t[0]), t[0]))


def _coeff_is_one(c) -> bool:
    try:
        return bool(c == 1)
    except TypeError:
        return False


def _negated(c):
    """(is_negative, magnitude) for sign-aware printing; exact domains use
    the sign of the leading basis coefficient, complex the real part."""
    if isinstance(c, CycloNumber):
        if not c.coeffs:
            return False, c
        lead = c.coeffs[min(c.coeffs)]
        return (lead < 0, -c) if lead < 0 else (False, c)
    if isinstance(c, (int, Fraction, float)):
        return (c < 0, -c) if c < 0 else (False, c)
    if isinstance(c, complex):
        neg = c.real < 0 or (c.real == 0 and c.imag < 0)
        return (neg, -c) if neg else (False, c)
    return False, c


def _coeff_str(c) -> str:
    if isinstance(c, CycloNumber):
        text = str(c)
        return f"({text})" if (" " in text) else text
    if isinstance(c, complex):
        return f"({c.real!r}{c.imag:+}j)"
    return str(c)


def to_text(f: LaurentPoly, names: Sequence[str] | None = None) -> str:
    """Canonical text form: one term per line, canonical term order."""
    if names is None:
        names = variable_names(f.nvars)
    if len(names) != f.nvars:
        raise ArityMismatchError(f"{len(names)} names for {f.nvars} variables")
    if not f:
        return "0"
    lines = []
    for idx, (exps, coeff) in enumerate(sorted_terms(f)):
        neg, mag = _negated(coeff)
        mono = " ".join(
            f"{name}^{e}" for name, e in zip(names, exps) if e != 0
        )
        if not mono:
            body = _coeff_str(mag)
        elif _coeff_is_one(mag):
            body = mono
        else:
            body = f"{_coeff_str(mag)} * {mono}"
        if idx == 0:
            lines.append(f"- {body}" if neg else body)
        else:
            lines.append(f"- {body}" if neg else f"+ {body}")
    return "\n".join(lines)


def _coeff_json(c):
    if isinstance(c, CycloNumber):
        return {
            "order": c.order,
            "coeffs": {str(k): str(v) for k, v in sorted(c.coeffs.items())},
        }
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, int):
        return str(c)
    if isinstance(c, complex):
        return {"re": c.real, "im": c.imag}
    return {"re": float(c), "im": 0.0}


def to_json_dict(f: LaurentPoly, names: Sequence[str] | None = None) -> dict:
    """JSON-ready mirror of the canonical text serialization."""
    if names is None:
        names = variable_names(f.nvars)
    return {
        "nvars": f.nvars,
        "names": list(names),
        "terms": [
            {"exponents": list(exps), "coeff": _coeff_json(coeff)}
            for exps, coeff in sorted_terms(f)
        ],
    }
