"""Command-line front end: ``autgrp <subcommand> --input J.json [options]``.

Exit status: 0 on success, 1 when ``verify`` finds a mismatch, 2 when a rank
or pairing decision fails (:class:`StructureError`), 3 on bad input.
"""
import argparse
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from ._config import default_tol
from .errors import DomainError, InputError, SingularInput, StructureError
from .group_sampler import (
    SampleConfig,
    classify_2x2,
    gnuplot_script,
    membership_residual,
    points_to_csv,
    points_to_ply,
    profile_4x4,
    project_cloud,
    sample_group,
    samples_to_csv,
)
from .io import matrix_from_json, matrix_to_json, read_json, read_matrix, write_json
from .pencil_kronecker import kronecker_structure
from .solution_basis import (
    SolutionBasis,
    cosol_basis,
    dimension_report,
    oracle_basis,
    sol_basis,
    span_equal,
)
from ._basis import equation_residual

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_STRUCTURE = 2
EXIT_INPUT = 3

SUBCOMMANDS = ("basis", "dim", "structure", "classify", "sample", "project", "verify")


@dataclass
class RunConfig:
    """Parsed command line."""

    subcommand: str
    input: str
    involution: str = "T"
    tol: Optional[float] = None
    seed: int = 0
    N: int = 1000
    output: Optional[str] = None
    format: str = "json"
    space: str = "sol"
    scale: float = 1.0
    mode: str = "scatter"
    grid: int = 50
    basis_file: Optional[str] = None
    gnuplot: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        if self.tol is not None and not self.tol > 0:
            raise InputError(f"tolerance must be positive, got {self.tol}")


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="autgrp",
        description="Tangent spaces and sampling of the groups {G : G* J G = J}.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--input", "-i", required=True, help="matrix J (Matrix JSON or CSV)")
        p.add_argument("--involution", choices=("T", "H"), default="T",
                       help="transpose (default) or conjugate transpose")
        p.add_argument("--tol", type=_positive_float, default=None,
                       help=f"relative rank tolerance (default {default_tol():g}, env AUTGRP_TOL)")
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        return p

    p = common(sub.add_parser("basis", help="basis of sol(J) or cosol(J) as JSON"))
    p.add_argument("--space", choices=("sol", "cosol"), default="sol")
    p = common(sub.add_parser("dim", help="dimension of sol(J) or cosol(J)"))
    p.add_argument("--space", choices=("sol", "cosol"), default="sol")
    p.add_argument("--report", action="store_true", help="print the full dimension report (JSON)")
    common(sub.add_parser("structure", help="Kronecker structure of J - lam J*"))
    common(sub.add_parser("classify", help="group type of a real 2x2 or generic 4x4 J"))
    for name, text in (("sample", "random group elements as CSV"),
                       ("project", "3-D projected point cloud")):
        p = common(sub.add_parser(name, help=text))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-N", "--N", dest="N", type=int, default=1000, help="number of samples")
        p.add_argument("--scale", type=float, default=1.0,
                       help="coefficients uniform on [-scale, scale]")
        if name == "project":
            p.add_argument("--mode", choices=("scatter", "surface-grid"), default="scatter")
            p.add_argument("--grid", type=int, default=50, help="lattice size for surface-grid")
            p.add_argument("--format", choices=("csv", "ply"), default="csv")
            p.add_argument("--gnuplot", default=None, help="also write a gnuplot script here")
    p = common(sub.add_parser("verify", help="re-check a stored basis file against J"))
    p.add_argument("--basis", dest="basis_file", required=True, help="output of `basis`")
    return parser


def _config(args):
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**values)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _basis_fn(space):
    return sol_basis if space == "sol" else cosol_basis


def cmd_basis(cfg, J):
    basis = _basis_fn(cfg.space)(J, cfg.involution, cfg.tol)
    report = dimension_report(J, cfg.involution, cfg.space, cfg.tol, basis=basis)
    out = {
        "space": basis.space,
        "involution": basis.involution,
        "field": basis.field,
        "dim": basis.dim,
        "elements": [matrix_to_json(X) for X in basis.elements],
        "residual_max": basis.residual_max,
        "dim_report": report.to_json(),
    }
    _emit(write_json(out), cfg.output)
    return EXIT_OK


def cmd_dim(cfg, J, report=False):
    basis = _basis_fn(cfg.space)(J, cfg.involution, cfg.tol)
    if report:
        rep = dimension_report(J, cfg.involution, cfg.space, cfg.tol, basis=basis)
        _emit(write_json(rep.to_json()), cfg.output)
    else:
        _emit(f"{basis.dim}\n", cfg.output)
    return EXIT_OK


def cmd_structure(cfg, J):
    spec = kronecker_structure(J, cfg.involution, cfg.tol)
    _emit(write_json(spec.to_json()), cfg.output)
    return EXIT_OK


def cmd_classify(cfg, J):
    if J.shape == (2, 2) and not np.iscomplexobj(J):
        out = classify_2x2(J).to_json()
        out["sol_dim"] = sol_basis(J, "T", cfg.tol).dim
    elif J.shape == (4, 4) and not np.iscomplexobj(J):
        out = {"profile": profile_4x4(J)}
    else:
        raise InputError("classify needs a real 2x2 or 4x4 matrix")
    _emit(write_json(out), cfg.output)
    return EXIT_OK


def _sample_config(cfg):
    try:
        return SampleConfig(N=cfg.N, seed=cfg.seed, scale=cfg.scale)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_sample(cfg, J):
    samples = sample_group(J, cfg.involution, _sample_config(cfg), tol=cfg.tol)
    _emit(samples_to_csv(samples), cfg.output)
    return EXIT_OK


def cmd_project(cfg, J):
    points = project_cloud(J, cfg.involution, _sample_config(cfg), mode=cfg.mode,
                           grid=cfg.grid, tol=cfg.tol)
    text = points_to_ply(points) if cfg.format == "ply" else points_to_csv(points)
    _emit(text, cfg.output)
    if cfg.gnuplot:
        if cfg.format != "csv" or cfg.output is None:
            raise InputError("--gnuplot needs --format csv and an --output file")
        grid = cfg.grid if cfg.mode == "surface-grid" else None
        _emit(gnuplot_script(cfg.output, grid), cfg.gnuplot)
    return EXIT_OK


def _load_basis(path, n):
    obj = read_json(path)
    try:
        space, inv = obj["space"], obj["involution"]
        elements = [matrix_from_json(e) for e in obj["elements"]]
    except (KeyError, TypeError):
        raise InputError(f"{path}: not a basis file") from None
    if space not in ("sol", "cosol") or inv not in ("T", "H"):
        raise InputError(f"{path}: bad space/involution")
    if any(X.shape != (n, n) for X in elements):
        raise InputError(f"{path}: element shapes do not match J")
    return space, inv, elements


def cmd_verify(cfg, J):
    n = J.shape[0]
    space, inv, elements = _load_basis(cfg.basis_file, n)
    sign = +1 if space == "sol" else -1
    oracle = oracle_basis(J, inv, sign)
    stored = SolutionBasis(space, oracle.involution, oracle.field, elements, n=n)
    residual = max((equation_residual(X, J, oracle.involution, sign) for X in elements),
                   default=0.0)
    scale = max(1.0, float(np.linalg.norm(J)))
    agrees = span_equal(stored, oracle)
    ok = agrees and residual <= 1e-8 * scale
    out = {"space": space, "involution": inv, "dim": len(elements), "oracle_dim": oracle.dim,
           "residual_max": residual, "span_agrees": agrees, "passed": ok}
    _emit(write_json(out), cfg.output)
    return EXIT_OK if ok else EXIT_MISMATCH


def run(cfg: RunConfig, report=False):
    """Execute one subcommand and return the exit status."""
    J = read_matrix(cfg.input)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] == 0:
        raise InputError(f"J must be a non-empty square matrix, got shape {J.shape}")
    handlers = {
        "basis": cmd_basis, "structure": cmd_structure, "classify": cmd_classify,
        "sample": cmd_sample, "project": cmd_project, "verify": cmd_verify,
    }
    if cfg.subcommand == "dim":
        return cmd_dim(cfg, J, report)
    return handlers[cfg.subcommand](cfg, J)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return run(cfg, report=getattr(args, "report", False))
    except StructureError as exc:
        print(f"autgrp: structure error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except (InputError, DomainError, SingularInput) as exc:
        print(f"autgrp: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
