"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Elements live on the power basis zeta_L^k, 0 <= k < phi(L), with rational
coefficients (``fractions.Fraction``).  Every value is kept in canonical
form by reduction modulo the L-th cyclotomic polynomial, so equality is
plain coefficient comparison and zero is the empty coefficient map.

The field order L is fixed per computation context; combining values from
different orders raises :class:`MixedOrderError`.  Values are immutable.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from typing import Mapping


class InvalidOrderError(ValueError):
    """Field order must be a positive integer."""


class MixedOrderError(ValueError):
    """Two cyclotomic values from different field orders were combined."""


def euler_phi(n: int) -> int:
    """Euler totient of a positive integer."""
    if n < 1:
        raise InvalidOrderError(f"order must be >= 1, got {n}")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def _divide_monic(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division of integer polynomials (ascending coefficients);
    # den must be monic and must divide num.
    num = list(num)
    dn = len(den) - 1
    quot = [0] * (len(num) - dn)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + dn]
        quot[i] = c
        if c:
            for k, dc in enumerate(den):
                num[i + k] -= c * dc
    if any(num):
        raise AssertionError("non-exact cyclotomic polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the order-th cyclotomic polynomial.

    Computed by stripping the factors of x^order - 1 belonging to proper
    divisors; the result is monic of degree phi(order).
    """
    if order < 1:
        raise InvalidOrderError(f"order must be >= 1, got {order}")
    if order == 1:
        return (-1, 1)
    poly = [-1] + [0] * (order - 1) + [1]
    for d in range(1, order):
        if order % d == 0:
            poly = _divide_monic(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _field_data(order: int) -> tuple[int, dict[int, tuple[tuple[int, int], ...]]]:
    # phi(order) plus, for every exponent e in [phi, order), the canonical
    # expansion of zeta^e as ((basis exponent, integer coefficient), ...).
    phi = euler_phi(order)
    cpoly = cyclotomic_polynomial(order)
    base = {k: -c for k, c in enumerate(cpoly[:-1]) if c}
    table: dict[int, dict[int, int]] = {}
    if phi < order:
        table[phi] = dict(base)
    for e in range(phi + 1, order):
        cur: dict[int, int] = {}
        for k, c in table[e - 1].items():
            k1 = k + 1
            if k1 < phi:
                cur[k1] = cur.get(k1, 0) + c
            else:
                for kk, cc in base.items():
                    cur[kk] = cur.get(kk, 0) + c * cc
        table[e] = {k: v for k, v in cur.items() if v}
    frozen = {e: tuple(sorted(m.items())) for e, m in table.items()}
    return phi, frozen


def _normalize(order: int, raw: Mapping[int, Fraction | int]) -> dict[int, Fraction]:
    phi, table = _field_data(order)
    out: dict[int, Fraction] = {}
    for e, c in raw.items():
        c = Fraction(c)
        if not c:
            continue
        e %= order
        if e < phi:
            out[e] = out.get(e, 0) + c
        else:
            for k, mult in table[e]:
                out[k] = out.get(k, 0) + c * mult
    return {k: v for k, v in out.items() if v}


class CycloNumber:
    """An element of Q(zeta_order) in canonical power-basis form."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Mapping[int, Fraction | int] | None = None):
        if order < 1:
            raise InvalidOrderError(f"order must be >= 1, got {order}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", _normalize(order, coeffs or {}))

    def __setattr__(self, name, value):
        raise AttributeError("CycloNumber is immutable")

    @classmethod
    def from_value(cls, order: int, value: int | Fraction) -> "CycloNumber":
        return cls(order, {0: Fraction(value)})

    @classmethod
    def zero(cls, order: int) -> "CycloNumber":
        return cls(order)

    @classmethod
    def one(cls, order: int) -> "CycloNumber":
        return cls(order, {0: 1})

    @classmethod
    def imaginary_unit(cls, order: int) -> "CycloNumber":
        if order % 4 != 0:
            raise InvalidOrderError(f"i requires 4 | order, got order={order}")
        return cls(order, {order // 4: 1})

    def _coerce(self, other) -> "CycloNumber | None":
        if isinstance(other, CycloNumber):
            if other.order != self.order:
                raise MixedOrderError(
                    f"mixed cyclotomic orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNumber.from_value(self.order, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return CycloNumber(self.order, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return CycloNumber(self.order, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                e = k1 + k2
                out[e] = out.get(e, 0) + c1 * c2
        return CycloNumber(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = CycloNumber.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(k == 0 for k in self.coeffs)

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs.get(0, Fraction(0))

    def conjugate(self) -> "CycloNumber":
        return CycloNumber(
            self.order, {(-k) % self.order: c for k, c in self.coeffs.items()}
        )

    def to_complex(self) -> complex:
        """Double-precision value, via zeta = exp(2*pi*i/order)."""
        total = 0j
        for k, c in self.coeffs.items():
            total += float(c) * cmath.exp(2j * cmath.pi * k / self.order)
        return total

    def __complex__(self):
        return self.to_complex()

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k == 0:
                body = str(c)
            else:
                mono = f"zeta{self.order}" + (f"^{k}" if k != 1 else "")
                if c == 1:
                    body = mono
                elif c == -1:
                    body = f"-{mono}"
                else:
                    body = f"{c}*{mono}"
            parts.append(body)
        text = parts[0]
        for body in parts[1:]:
            text += f" - {body[1:]}" if body.startswith("-") else f" + {body}"
        return text

    def __repr__(self):
        return f"CycloNumber({self.order}, {self})"


def root_of_unity(k: int, order: int) -> CycloNumber:
    """Canonical form of zeta_order^k = exp(2*pi*i*k/order)."""
    if order < 1:
        raise InvalidOrderError(f"order must be >= 1, got {order}")
    return CycloNumber(order, {k % order: 1})
