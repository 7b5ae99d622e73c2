"""Command-line entry point.

Subcommands: certify | dump | monodromy | bands | fermi.  Every command
reads one model file (TOML or JSON) given either positionally or via
--model, writes to stdout or --out, and draws any randomness from the
single --seed flag.

Exit codes: 0 on success (for ``certify``: assumptions verified), 2 when
``certify`` finds a failing assumption, 1 on input errors.  The
monodromy verdict is reported inside the JSON only, never via the exit
code, because an intransitive run is evidence rather than a finding.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .certify import VERDICT_CERTIFIED, certify
from .floquet import (
    BudgetExceededError,
    build_system,
    char_poly,
    lift_char,
)
from .laurent import (
    lowest_component,
    pole_orders,
    to_text,
    variable_names,
)
from .model import ModelFormatError, load_model, symbol
from .oracle import band_path, fermi_slice, monodromy_run

DUMP_SECTIONS = ("symbol", "lowest", "poles", "char", "lifted")


@dataclass
class RunConfig:
    """Parsed invocation; field defaults mirror the CLI defaults."""

    command: str
    model_path: str
    out: str | None = None
    seed: int = 0
    loops: int = 32
    samples: int = 128
    grid: int = 32
    level: complex = 0j
    path: str = ""
    budget: int = 12
    tol: float = 1e-6
    sections: tuple[str, ...] = DUMP_SECTIONS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochcert",
        description=(
            "Certify irreducibility of the Bloch variety of a periodic "
            "finite-range lattice operator, dump the exact intermediate "
            "polynomials, and cross-check numerically."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("model_pos", nargs="?", metavar="MODEL",
                       help="model file (TOML or JSON)")
        p.add_argument("--model", help="model file (alternative to the positional)")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("certify", help="check the two assumptions exactly")
    add_common(p)

    p = sub.add_parser("dump", help="print symbol, lowest component, pole "
                                    "orders, characteristic polynomial, lift")
    add_common(p)
    p.add_argument("--budget", type=int, default=12,
                   help="largest cell size expanded symbolically (default 12)")
    p.add_argument("--sections", default=",".join(DUMP_SECTIONS),
                   help=f"comma list from {{{','.join(DUMP_SECTIONS)}}} "
                        "(default: all)")

    p = sub.add_parser("monodromy", help="numerical irreducibility evidence")
    add_common(p)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--loops", type=int, default=32,
                   help="number of loops to track (default 32)")

    p = sub.add_parser("bands", help="eigenvalues along a k-path, CSV")
    add_common(p)
    p.add_argument("--path", required=True,
                   help="k-path nodes 'k1,..,kd:k1,..,kd:...' e.g. 0,0:0.5,0.5")
    p.add_argument("--samples", type=int, default=128,
                   help="number of samples along the path (default 128)")

    p = sub.add_parser("fermi", help="level-set slice of the band structure, CSV")
    add_common(p)
    p.add_argument("--lambda", dest="level", required=True,
                   help="energy level (complex accepted, e.g. '1.5' or '1+0.5j')")
    p.add_argument("--grid", type=int, default=32,
                   help="grid points per dimension (default 32)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="residual tolerance for accepted points (default 1e-6)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    model_path = args.model or args.model_pos
    if not model_path:
        raise ModelFormatError("no model file given (positional or --model)")
    cfg = RunConfig(command=args.command, model_path=model_path, out=args.out)
    for name in ("seed", "loops", "samples", "grid", "budget", "tol", "path"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "level"):
        cfg.level = complex(args.level)
    if hasattr(args, "sections"):
        sections = tuple(s.strip() for s in args.sections.split(",") if s.strip())
        unknown = [s for s in sections if s not in DUMP_SECTIONS]
        if unknown:
            raise ModelFormatError(f"unknown dump sections: {unknown}")
        cfg.sections = sections
    return cfg


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_kpath(spec: str, d: int) -> list[tuple[float, ...]]:
    nodes = []
    for chunk in spec.split(":"):
        coords = tuple(float(x) for x in chunk.split(","))
        if len(coords) != d:
            raise ModelFormatError(
                f"k-path node {chunk!r} has {len(coords)} coordinates, expected {d}"
            )
        nodes.append(coords)
    if len(nodes) < 2:
        raise ModelFormatError("k-path needs at least two nodes")
    return nodes


def cmd_certify(cfg: RunConfig) -> int:
    cert = certify(load_model(cfg.model_path))
    _emit(cert.to_json(), cfg.out)
    return 0 if cert.verdict == VERDICT_CERTIFIED else 2


def cmd_dump(cfg: RunConfig) -> int:
    model = load_model(cfg.model_path)
    p = symbol(model)
    h = lowest_component(p)
    znames = variable_names(model.d)
    parts = []
    if "symbol" in cfg.sections:
        parts.append("# symbol\n" + to_text(p, znames))
    if "lowest" in cfg.sections:
        parts.append("# lowest-degree component\n" + to_text(h, znames))
    if "poles" in cfg.sections:
        parts.append(
            "# pole orders\n"
            f"symbol: {' '.join(map(str, pole_orders(p)))}\n"
            f"lowest: {' '.join(map(str, pole_orders(h)))}"
        )
    wants_char = "char" in cfg.sections or "lifted" in cfg.sections
    if wants_char:
        try:
            system = build_system(model)
            char = char_poly(system, budget=cfg.budget)
            if "char" in cfg.sections:
                parts.append(
                    "# characteristic polynomial\n"
                    + to_text(char, variable_names(model.d, with_lambda=True))
                )
            if "lifted" in cfg.sections:
                lifted = lift_char(system)
                parts.append(
                    "# lifted characteristic polynomial\n"
                    + to_text(lifted, variable_names(model.d, lifted=True,
                                                     with_lambda=True))
                )
        except BudgetExceededError as exc:
            print(f"warning: {exc}", file=sys.stderr)
    _emit("\n\n".join(parts) + "\n", cfg.out)
    return 0


def cmd_monodromy(cfg: RunConfig) -> int:
    report = monodromy_run(load_model(cfg.model_path), loops=cfg.loops, seed=cfg.seed)
    _emit(report.to_json(), cfg.out)
    return 0


def cmd_bands(cfg: RunConfig) -> int:
    model = load_model(cfg.model_path)
    nodes = _parse_kpath(cfg.path, model.d)
    table = band_path(model, nodes, cfg.samples)
    _emit(table.to_csv(), cfg.out)
    return 0


def cmd_fermi(cfg: RunConfig) -> int:
    model = load_model(cfg.model_path)
    result = fermi_slice(model, cfg.level, cfg.grid, tol=cfg.tol)
    _emit(result.to_csv(), cfg.out)
    return 0


_COMMANDS = {
    "certify": cmd_certify,
    "dump": cmd_dump,
    "monodromy": cmd_monodromy,
    "bands": cmd_bands,
    "fermi": cmd_fermi,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except (ModelFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
