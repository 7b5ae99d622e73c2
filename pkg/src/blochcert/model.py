"""Operator models: hoppings, periodic potential, presets, file ingestion.

A model is the data of H = A + V on the integer lattice Z^d: a finitely
supported hopping map n -> a_n (Gaussian rationals, kept exact), a period
vector q, and the potential values on the fundamental cell, stored
row-major with the last index fastest.  The translation-invariant part is
summarized by its symbol, the Laurent polynomial sum of a_n z^(-n).

Model files are TOML or JSON; rationals are parsed exactly from "p/r"
strings or integers (floats are rejected to keep certificates sound).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - 3.10 fallback
    import tomli as tomllib

from .cyclotomic import CycloNumber
from .laurent import LaurentPoly


class ModelFormatError(ValueError):
    """Model file is malformed; message carries the offending field."""


def _parse_rational(value, field: str) -> Fraction:
    if isinstance(value, bool):
        raise ModelFormatError(f"{field}: expected rational, got boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelFormatError(f"{field}: bad rational {value!r}: {exc}") from None
    if isinstance(value, float):
        raise ModelFormatError(
            f"{field}: floats are not accepted; write the exact rational as a string"
        )
    raise ModelFormatError(f"{field}: expected rational, got {type(value).__name__}")


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex rational re + im*i."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def parse(cls, value, field: str = "value") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, dict):
            re = _parse_rational(value.get("re", 0), f"{field}.re")
            im = _parse_rational(value.get("im", 0), f"{field}.im")
            return cls(re, im)
        return cls(_parse_rational(value, field))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def to_cyclo(self, order: int) -> CycloNumber:
        value = CycloNumber.from_value(order, self.re)
        if self.im:
            value = value + self.im * CycloNumber.imaginary_unit(order)
        return value

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else ''}{self.im}i"


@dataclass(frozen=True)
class OperatorModel:
    """Hoppings + period + potential table on the fundamental cell."""

    d: int
    q: tuple[int, ...]
    hoppings: dict[tuple[int, ...], GaussianRational]
    potential: tuple[GaussianRational, ...]

    def __post_init__(self):
        if self.d < 1:
            raise ModelFormatError(f"d must be >= 1, got {self.d}")
        if len(self.q) != self.d or any(qj < 1 for qj in self.q):
            raise ModelFormatError(f"q must be {self.d} positive integers, got {self.q}")
        if not self.hoppings:
            raise ModelFormatError("hoppings must be nonempty")
        for offset, value in self.hoppings.items():
            if len(offset) != self.d:
                raise ModelFormatError(
                    f"hopping offset {offset} has arity {len(offset)}, expected {self.d}"
                )
            if not value:
                raise ModelFormatError(f"hopping at {offset} is zero; omit it")
        if len(self.potential) != self.cell_size:
            raise ModelFormatError(
                f"potential has {len(self.potential)} entries, expected "
                f"{self.cell_size} (product of q)"
            )

    @property
    def cell_size(self) -> int:
        return math.prod(self.q)

    @property
    def field_order(self) -> int:
        """Order of the cyclotomic field hosting every character value and i."""
        return math.lcm(4, *self.q)

    def canonical_dict(self) -> dict:
        return {
            "d": self.d,
            "q": list(self.q),
            "hoppings": [
                {"offset": list(n), "re": str(a.re), "im": str(a.im)}
                for n, a in sorted(self.hoppings.items())
            ],
            "potential": [
                {"re": str(v.re), "im": str(v.im)} for v in self.potential
            ],
        }

    def digest(self) -> str:
        payload = json.dumps(
            self.canonical_dict(), sort_keys=True, separators=(",", ":")
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def symbol(model: OperatorModel) -> LaurentPoly:
    """Laurent symbol of the hopping part: sum of a_n z^(-n), with exact
    cyclotomic coefficients in the model's working field."""
    order = model.field_order
    terms = {
        tuple(-c for c in n): a.to_cyclo(order) for n, a in model.hoppings.items()
    }
    return LaurentPoly(model.d, terms)


# -- lattice presets -------------------------------------------------------

PRESET_NAMES = ("square", "triangular", "extended-harper")

_MINUS_ONE = GaussianRational(Fraction(-1))


def preset_hoppings(name: str, d: int = 2) -> dict[tuple[int, ...], GaussianRational]:
    """Hopping maps of the stock lattices: nearest neighbors on Z^d
    ("square"), the sheared triangular lattice, and the extended Harper
    lattice (both on Z^2).  Every listed neighbor carries weight -1."""
    if name == "square":
        if d < 1:
            raise ModelFormatError(f"square preset needs d >= 1, got {d}")
        offsets = []
        for j in range(d):
            e = [0] * d
            e[j] = 1
            offsets.append(tuple(e))
            offsets.append(tuple(-x for x in e))
    elif name == "triangular":
        if d != 2:
            raise ModelFormatError("triangular preset is two-dimensional")
        offsets = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
    elif name == "extended-harper":
        if d != 2:
            raise ModelFormatError("extended-harper preset is two-dimensional")
        offsets = [
            (1, 0), (-1, 0), (0, 1), (0, -1),
            (1, -1), (-1, 1), (1, 1), (-1, -1),
        ]
    else:
        raise ModelFormatError(
            f"unknown preset {name!r}; expected one of {PRESET_NAMES}"
        )
    return {offset: _MINUS_ONE for offset in offsets}


def preset_model(
    name: str,
    q: tuple[int, ...] | list[int],
    d: int | None = None,
    potential: tuple[GaussianRational, ...] | None = None,
) -> OperatorModel:
    """Model with preset hoppings and zero (or given) potential."""
    q = tuple(int(v) for v in q)
    if d is None:
        d = len(q)
    hoppings = preset_hoppings(name, d)
    size = math.prod(q)
    if potential is None:
        potential = (GaussianRational(Fraction(0)),) * size
    return OperatorModel(d=d, q=q, hoppings=hoppings, potential=tuple(potential))


# -- file ingestion ---------------------------------------------------------


def _model_from_dict(data: dict) -> OperatorModel:
    if not isinstance(data, dict):
        raise ModelFormatError("model file must contain a table/object at top level")
    q_raw = data.get("q")
    if not isinstance(q_raw, list) or not q_raw:
        raise ModelFormatError("q: required array of positive integers")
    q = tuple(int(v) for v in q_raw)

    preset = data.get("preset")
    if preset is not None:
        d = int(data.get("d", len(q)))
        hoppings = preset_hoppings(preset, d)
    else:
        if "d" not in data:
            raise ModelFormatError("d: required when no preset is given")
        d = int(data["d"])
        raw = data.get("hoppings")
        if not isinstance(raw, list) or not raw:
            raise ModelFormatError("hoppings: required nonempty array")
        hoppings = {}
        for i, entry in enumerate(raw):
            field = f"hoppings[{i}]"
            if not isinstance(entry, dict) or "offset" not in entry:
                raise ModelFormatError(f"{field}: expected a table with an offset")
            offset = tuple(int(v) for v in entry["offset"])
            value = GaussianRational(
                _parse_rational(entry.get("re", 0), f"{field}.re"),
                _parse_rational(entry.get("im", 0), f"{field}.im"),
            )
            if offset in hoppings:
                raise ModelFormatError(f"{field}: duplicate offset {offset}")
            hoppings[offset] = value

    if len(q) != d:
        raise ModelFormatError(f"q has {len(q)} entries, expected d = {d}")

    size = math.prod(q)
    pot_raw = data.get("potential")
    if pot_raw is None:
        potential = (GaussianRational(Fraction(0)),) * size
    else:
        if not isinstance(pot_raw, list):
            raise ModelFormatError("potential: expected an array")
        potential = tuple(
            GaussianRational.parse(entry, f"potential[{i}]")
            for i, entry in enumerate(pot_raw)
        )
    return OperatorModel(d=d, q=q, hoppings=hoppings, potential=potential)


def parse_model(text: str, fmt: str = "toml") -> OperatorModel:
    """Parse a model from TOML or JSON text."""
    if fmt == "toml":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ModelFormatError(f"TOML parse error: {exc}") from None
    elif fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(
                f"JSON parse error at line {exc.lineno}: {exc.msg}"
            ) from None
    else:
        raise ModelFormatError(f"unknown model format {fmt!r}")
    return _model_from_dict(data)


def load_model(source: str | Path) -> OperatorModel:
    """Load a model from a .toml/.json file path, or parse raw text."""
    path = Path(source)
    looks_like_path = isinstance(source, Path) or (
        "\n" not in str(source) and len(str(source)) < 4096
    )
    if looks_like_path:
        if not path.exists():
            raise FileNotFoundError(f"model file not found: {path}")
        fmt = "json" if path.suffix.lower() == ".json" else "toml"
        return parse_model(path.read_text(), fmt)
    text = str(source)
    stripped = text.lstrip()
    fmt = "json" if stripped.startswith("{") else "toml"
    return parse_model(text, fmt)
