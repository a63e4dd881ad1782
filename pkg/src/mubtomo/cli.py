"""mubtomo command line: reproducible file-to-file tomography pipelines.

Exit codes: 0 success, 2 invalid invocation or unreadable file, 3 violated
domain invariant, 4 numeric failure (aliased grid, degenerate angle).
Errors print exactly one ``Name: message`` line on stderr.
"""

import os
import sys

# Cap BLAS pools before numpy loads anywhere in the process. Effective for
# console-script entry because the package __init__ imports nothing heavy.
_threads = os.environ.get("MUBTOMO_THREADS")
if _threads and _threads.isdigit() and int(_threads) > 0:
    for _var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
        "VECLIB_MAXIMUM_THREADS",
    ):
        os.environ.setdefault(_var, _threads)

import argparse

import numpy as np

from . import io_formats as iof
from .classical_radon import inverse_radon, radon_forward
from .cv_wigner import (
    density_from_wavefunction,
    quadrature_sinogram,
    reconstruct_density_continuous,
    wigner_from_density,
)
from .errors import MubTomoError, UsageError
from .finite_field import assert_odd_prime
from .qudit_mub import build_mub_set
from .qudit_tomography import (
    frequencies,
    measure_probabilities,
    project_to_physical,
    reconstruct_density,
    sample_counts,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _uniform_angles(n: int) -> np.ndarray:
    if n < 1:
        raise UsageError("--angles must be positive")
    return np.arange(n) * np.pi / n


def _load_cv_state(path, n=None, xmax=None):
    """Position density from a density or wavefunction file.

    Wavefunctions are linearly resampled onto n points over [-xmax, xmax]
    when those flags are given; density matrices must already match.
    """
    kind = iof.peek_kind(path)
    if kind == "wavefunction":
        psi, x_min, x_max = iof.read_wavefunction(path)
        if n is not None and xmax is not None:
            old = np.linspace(x_min, x_max, psi.size)
            new = np.linspace(-xmax, xmax, n)
            psi = np.interp(new, old, psi.real) + 1j * np.interp(new, old, psi.imag)
            x_min, x_max = -xmax, xmax
        return density_from_wavefunction(psi, x_min, x_max)
    if kind == "density":
        rho = iof.read_position_density(path)
        if n is not None and (rho.n != n or abs(rho.x_max - xmax) > 1e-9
                              or abs(rho.x_min + xmax) > 1e-9):
            raise UsageError(
                f"density file axis ({rho.n} points on [{rho.x_min}, {rho.x_max}]) "
                f"does not match --grid {n} --xmax {xmax}; resampling is only "
                f"supported for wavefunction inputs"
            )
        return rho
    raise UsageError(f"{path}: kind {kind!r} is not a continuous state")


def _cmd_mub(args):
    mub_set = build_mub_set(assert_odd_prime(args.dim))
    iof.write_mub_set(args.out, mub_set)


def _cmd_simulate(args):
    rho = iof.read_qudit_density(args.state)
    if rho.shape[0] != args.dim:
        raise UsageError(f"--dim {args.dim} but state file has dim {rho.shape[0]}")
    mub_set = build_mub_set(assert_odd_prime(args.dim))
    table = measure_probabilities(rho, mub_set)
    if args.shots is None:
        iof.write_probability_table(args.out, table)
    else:
        counts = sample_counts(table, args.shots, args.seed)
        iof.write_count_table(args.out, counts, seed=args.seed)


def _cmd_reconstruct(args):
    kind = iof.peek_kind(args.probs)
    if kind == "probabilities":
        table = iof.read_probability_table(args.probs)
    elif kind == "counts":
        table = frequencies(iof.read_count_table(args.probs))
    else:
        raise UsageError(f"{args.probs}: kind {kind!r} is not a measurement table")
    mub_set = build_mub_set(assert_odd_prime(table.dim))
    rho = reconstruct_density(table, mub_set)
    if args.project:
        rho = project_to_physical(rho)
    iof.write_qudit_density(args.out, rho)


def _cmd_radon(args):
    grid = iof.read_grid(args.inp)
    sino = radon_forward(
        grid,
        _uniform_angles(args.angles),
        n_s=args.ns if args.ns is not None else grid.nx,
        s_max=args.smax,
    )
    iof.write_sinogram(args.out, sino)
    if args.csv:
        iof.write_sinogram_csv(args.csv, sino)


def _cmd_iradon(args):
    sino = iof.read_sinogram(args.inp)
    kwargs = {}
    if args.xmax is not None:
        kwargs.update(x_min=-args.xmax, x_max=args.xmax)
    if args.pmax is not None:
        kwargs.update(p_min=-args.pmax, p_max=args.pmax)
    grid = inverse_radon(
        sino,
        nx=args.nx if args.nx is not None else sino.n_s,
        n_p=args.np if args.np is not None else sino.n_s,
        window=args.window,
        **kwargs,
    )
    iof.write_grid(args.out, grid)
    if args.csv:
        iof.write_grid_csv(args.csv, grid)


def _cmd_wigner(args):
    rho = _load_cv_state(args.state, n=args.grid, xmax=args.xmax)
    W = wigner_from_density(
        rho,
        n_p=args.np if args.np is not None else args.grid,
        p_max=args.pmax if args.pmax is not None else args.xmax,
    )
    iof.write_grid(args.out, W)
    if args.csv:
        iof.write_grid_csv(args.csv, W)


def _cmd_quads(args):
    rho = _load_cv_state(args.state)
    sino = quadrature_sinogram(rho, _uniform_angles(args.angles))
    iof.write_sinogram(args.out, sino)
    if args.csv:
        iof.write_sinogram_csv(args.csv, sino)


def _cmd_reconstruct_cv(args):
    quads = iof.read_sinogram(args.quads)
    rho, raw_trace = reconstruct_density_continuous(
        quads, n_x=args.nx, x_max=args.xmax
    )
    iof.write_position_density(args.out, rho, pre_normalization_trace=raw_trace)
    print(f"pre_normalization_trace={raw_trace!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mubtomo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mub", help="write the d+1 unbiased bases for odd prime d")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_mub)

    p = sub.add_parser("simulate", help="measure a qudit state in every basis")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--state", required=True, help="density JSON file")
    p.add_argument("--shots", type=int, default=None,
                   help="finite-shot counts instead of exact probabilities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reconstruct", help="invert a probability or count table")
    p.add_argument("--probs", required=True, help="probabilities or counts JSON file")
    p.add_argument("--project", action="store_true",
                   help="project the estimate onto physical states")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("radon", help="forward Radon transform of a grid")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--angles", type=int, required=True,
                   help="number of uniform angles on [0, pi)")
    p.add_argument("--ns", type=int, default=None, help="samples per projection")
    p.add_argument("--smax", type=float, default=None)
    p.add_argument("--csv", default=None, help="also export rows as CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_radon)

    p = sub.add_parser("iradon", help="filtered back-projection of a sinogram")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--np", type=int, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--pmax", type=float, default=None)
    p.add_argument("--window", choices=["hann"], default=None,
                   help="apodize the ramp filter (for noisy rows)")
    p.add_argument("--csv", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_iradon)

    p = sub.add_parser("wigner", help="Wigner function of a continuous state")
    p.add_argument("--state", required=True, help="density or wavefunction JSON")
    p.add_argument("--grid", type=int, required=True, help="samples per axis")
    p.add_argument("--xmax", type=float, required=True, help="half extent of the axis")
    p.add_argument("--np", type=int, default=None)
    p.add_argument("--pmax", type=float, default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_wigner)

    p = sub.add_parser("quads", help="quadrature distributions of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--angles", type=int, required=True)
    p.add_argument("--csv", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_quads)

    p = sub.add_parser("reconstruct-cv",
                       help="position density matrix from quadratures")
    p.add_argument("--quads", required=True, help="sinogram JSON of quadrature rows")
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reconstruct_cv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
        return 0
    except MubTomoError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"FileNotFound: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
