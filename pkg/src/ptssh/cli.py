"""Command-line front end.

Exit codes: 0 success, 2 usage error (including requests beyond the SSH
cutoff), 3 numerical failure or a refused write.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from . import __version__, config
from .closed_form import CertificationError, CutoffError, available_ks, closed_form_matrix
from .dieudonne import (RankAmbiguityError, SpectrumError, eigvec_metric, gram_condition,
                        hermiticity_defect,
                        mutual_projection_defect, projection_defect, pseudometric_kernel,
                        residual, spectrum_is_real_simple)
from .metric import from_theta, positivity_scan
from .models import (HamiltonianSpec, RobinCoordinates, build_hamiltonian,
                     gamma_from_robin, lambda_from_theta)
from .numerics import NumericalError
from .serialize import (encode_matrix, manifest, matrix_document, sidecar_path, write_csv,
                        write_json)
from .spectral import (Axis, BracketError, critical_rho, ep_boundary, ep_map, pseudospectrum,
                       sweep_theta)

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    pass


# -- argument helpers --------------------------------------------------------

def parse_range(text: str, name: str = "range") -> Axis:
    """``min:max:count``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{name}: expected min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        return Axis(name, lo, hi, count)
    except ValueError as exc:
        raise UsageError(f"{name}: {exc}") from None


def parse_window(text: str) -> tuple[float, float, float, float]:
    """``re_min:re_max:im_min:im_max``."""
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"window: expected re_min:re_max:im_min:im_max, got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"window: {exc}") from None
    if not all(math.isfinite(v) for v in vals) or vals[1] < vals[0] or vals[3] < vals[2]:
        raise UsageError(f"window: bounds must be finite and ordered, got {text!r}")
    return vals


def _join_negative_values(argv):
    # "--omega -2:2:101" -> "--omega=-2:2:101" so argparse does not read a flag
    out = []
    for tok in argv:
        if (out and re.match(r"^-[\d.]", tok) and out[-1].startswith("--")
                and "=" not in out[-1]):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _add_model(p, kinds=("ssh", "dssh", "robin"), scalar_gamma=True, need_lambda=True):
    p.add_argument("--model", required=True, choices=kinds)
    p.add_argument("--n", type=int, required=True)
    if need_lambda:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--lambda", dest="lam", type=float, help="lambda = cos(theta)")
        g.add_argument("--theta", type=float, help="converted to lambda = cos(theta)")
    if scalar_gamma:
        p.add_argument("--rho", type=float)
        p.add_argument("--omega", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)


def _lambda(args) -> float:
    if getattr(args, "theta", None) is not None:
        return lambda_from_theta(args.theta)
    return args.lam if getattr(args, "lam", None) is not None else 0.0


def _gamma(args) -> tuple[float, float]:
    chart_ab = args.alpha is not None or args.beta is not None
    chart_ro = args.rho is not None or args.omega is not None
    if chart_ab and chart_ro:
        raise UsageError("give either --rho/--omega or --alpha/--beta, not both")
    if chart_ab:
        if args.alpha is None or args.beta is None:
            raise UsageError("--alpha and --beta must be given together")
        try:
            return gamma_from_robin(RobinCoordinates(args.alpha, args.beta))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return (args.rho or 0.0, args.omega or 0.0)


def _spec(args) -> HamiltonianSpec:
    rho, omega = _gamma(args)
    try:
        return HamiltonianSpec(args.model, args.n, _lambda(args), rho, omega)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def _write_sidecar(args, man):
    target = args.manifest or (sidecar_path(args.out) if args.out not in (None, "-") else None)
    if target:
        write_json(man, target)


# -- commands ------------------------------------------------------------------

def cmd_build(args) -> int:
    spec = _spec(args)
    H = build_hamiltonian(spec)
    man = manifest("build", {**_params(args), "resolved": spec.to_dict()})
    write_json(matrix_document(H, man), args.out)
    return 0


def _parse_ks(text: str, spec: HamiltonianSpec):
    if text == "all":
        return None
    try:
        ks = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--k expects 'all' or a comma list of integers, got {text!r}") from None
    bad = [k for k in ks if not 1 <= k <= spec.n]
    if bad or not ks:
        raise UsageError(f"--k values must lie in 1..{spec.n}")
    return ks


def _member(H, P, k=None) -> dict:
    out = {"entries": encode_matrix(P), "residual": residual(H, P),
           "hermiticity_defect": hermiticity_defect(P)}
    if k is not None:
        out = {"k": k, **out}
    return out


def cmd_pseudometrics(args) -> int:
    spec = _spec(args)
    H = build_hamiltonian(spec)
    ks = _parse_ks(args.k, spec)
    report = {"manifest": manifest("pseudometrics", {**_params(args), "resolved": spec.to_dict()}),
              "hamiltonian": {"n": spec.n, "entries": encode_matrix(H)}}
    closed = oracle = None
    if args.source in ("closed", "both"):
        use = available_ks(spec) if ks is None else ks
        closed = [closed_form_matrix(spec, k) for k in use]
        report["closed"] = {"members": [_member(H, P, k) for k, P in zip(use, closed)],
                            "gram_condition": gram_condition(closed)}
        if ks is None and len(use) < spec.n:
            report["closed"]["note"] = (
                f"k < {use[0]} lies beyond the band-ansatz cutoff for this model")
    if args.source in ("oracle", "both"):
        kernel = pseudometric_kernel(H, args.tol)
        oracle = list(kernel.matrices)
        report["oracle"] = {"members": [_member(H, P) for P in oracle],
                            "dimension": len(oracle),
                            "gram_condition": kernel.gram_condition}
    if closed is not None and oracle is not None:
        report["cross_validation"] = {
            "closed_in_oracle_span": projection_defect(closed, oracle),
            "oracle_in_closed_span": projection_defect(oracle, closed),
            "mutual": mutual_projection_defect(closed, oracle),
        }
    worst = max([m["residual"] for part in ("closed", "oracle") if part in report
                 for m in report[part]["members"]], default=0.0)
    if worst > config.EMIT_RESIDUAL_TOL and not args.force:
        raise NumericalFailure(
            f"largest residual {worst:.3e} exceeds {config.EMIT_RESIDUAL_TOL:g}; "
            "nothing written (use --force to write anyway)")
    write_json(report, args.out)
    return 0


def _sweep_gamma(args) -> complex:
    rho, omega = _gamma(args)
    return complex(rho, omega)


def cmd_sweep(args) -> int:
    if args.theta_range is not None:
        theta = parse_range(args.theta_range, "theta")
    else:
        if args.theta_steps < 1:
            raise UsageError("--theta-steps must be positive")
        theta = Axis("theta", 0.0, 2 * math.pi, args.theta_steps)
    if args.model != "swapped" and args.n % 2:
        raise UsageError(f"{args.model} requires an even dimension, got n={args.n}")
    if args.n < 2:
        raise UsageError("n must be >= 2")
    grid = sweep_theta(args.model, args.n, _sweep_gamma(args), theta)
    rows = []
    for t, w in zip(theta.values, grid.eigenvalues):
        for idx, z in enumerate(w):
            rows.append((float(t), idx, float(z.real), float(z.imag)))
    write_csv("sweep", rows, args.out)
    _write_sidecar(args, manifest("sweep", _params(args), "sweep"))
    return 0


def cmd_epmap(args) -> int:
    rho = parse_range(args.rho, "rho")
    omega = parse_range(args.omega, "omega")
    spec = _spec_no_gamma(args)
    boundary_out = args.boundary_out
    if boundary_out is None and args.out not in (None, "-"):
        boundary_out = f"{args.out}.boundary.csv"
    if boundary_out:
        result = ep_boundary(spec.kind, spec.n, spec.lam, rho, omega, args.tol)
        grid = result.grid
    else:
        grid = ep_map(spec.kind, spec.n, spec.lam, rho, omega)
    coords = grid.coordinates()
    rows = [(float(r), float(w), bool(ok), float(c))
            for (r, w), ok, c in zip(coords, grid.all_real, grid.cond_estimate)]
    write_csv("epmap", rows, args.out)
    if boundary_out:
        brows = []
        for p in result.points:
            if p.rho == 0 and p.omega == 0:
                a = b = float("nan")
            else:
                c = p.robin()
                a, b = c.alpha, c.beta
            brows.append((p.rho, p.omega, a, b))
        write_csv("boundary", brows, boundary_out)
    man = manifest("epmap", _params(args), "epmap")
    if boundary_out:
        man["boundary_file"] = boundary_out
        man["real_area"] = result.real_area()
    _write_sidecar(args, man)
    return 0


def _spec_no_gamma(args) -> HamiltonianSpec:
    try:
        return HamiltonianSpec(args.model, args.n, _lambda(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_pseudospectrum(args) -> int:
    spec = _spec(args)
    H = build_hamiltonian(spec)
    re_lo, re_hi, im_lo, im_hi = parse_window(args.window)
    res_im = args.res_im if args.res_im is not None else args.res
    if args.res < 1 or res_im < 1:
        raise UsageError("--res must be positive")
    re_ax, im_ax = Axis("re", re_lo, re_hi, args.res), Axis("im", im_lo, im_hi, res_im)
    kappa = None
    if args.kappa == "auto":
        if spectrum_is_real_simple(H):
            cand = from_theta(eigvec_metric(H, np.ones(spec.n)))
            kappa = cand.kappa if cand.positive else None
    elif args.kappa != "none":
        try:
            kappa = float(args.kappa)
        except ValueError:
            raise UsageError("--kappa expects auto, none or a number") from None
    grid = pseudospectrum(H, re_ax, im_ax, kappa)
    pts = grid.points().ravel()
    upper = grid.upper_bound.ravel() if grid.upper_bound is not None else [float("nan")] * pts.size
    ok = grid.enclosure_ok.ravel() if grid.enclosure_ok is not None else [""] * pts.size
    rows = [(float(z.real), float(z.imag), float(v), float(lo), float(up), o)
            for z, v, lo, up, o in zip(pts, grid.values.ravel(), grid.lower_bound.ravel(), upper, ok)]
    write_csv("pseudospectrum", rows, args.out)
    man = manifest("pseudospectrum", {**_params(args), "resolved": spec.to_dict()}, "pseudospectrum")
    man["kappa"] = kappa
    if grid.enclosure_ok is not None:
        man["enclosure_ok_all"] = bool(np.all(grid.enclosure_ok))
    _write_sidecar(args, man)
    return 0


def cmd_positivity(args) -> int:
    spec = _spec(args)
    H = build_hamiltonian(spec)
    if args.source == "closed":
        from .closed_form import closed_form_set
        pset = closed_form_set(spec)
    else:
        pset = pseudometric_kernel(H)
    m = len(pset.matrices)
    if args.samples < 1 or args.radius < 0:
        raise UsageError("--samples must be positive and --radius non-negative")
    if args.samples ** m > 2_000_000:
        raise UsageError(f"{args.samples}^{m} lattice points is too many; lower --samples")
    ranges = [(1 - args.radius, 1 + args.radius) if i == 0 else (-args.radius, args.radius)
              for i in range(m)]
    scan = positivity_scan(pset, ranges, args.samples)
    ks = pset.ks or tuple(range(1, m + 1))
    rows = []
    for idx, pt in enumerate(scan):
        for k, e in zip(ks, pt.epsilons):
            rows.append((idx, k, e, pt.positive, pt.min_eigenvalue))
    write_csv("positivity", rows, args.out)
    man = manifest("positivity", {**_params(args), "resolved": spec.to_dict()}, "positivity")
    man["positive_count"] = sum(p.positive for p in scan)
    man["points"] = len(scan)
    _write_sidecar(args, man)
    return 0


def cmd_critical_rho(args) -> int:
    probe = args.probe.split(":")
    if len(probe) != 2:
        raise UsageError("--probe expects lo:hi")
    try:
        lo, hi = float(probe[0]), float(probe[1])
    except ValueError as exc:
        raise UsageError(f"--probe: {exc}") from None
    omega = parse_range(args.omega, "omega")
    spec = _spec_no_gamma(args)
    value = critical_rho(spec.kind, spec.n, spec.lam, lo, hi, omega, args.tol)
    write_json({"critical_rho": value,
                "manifest": manifest("critical-rho", _params(args))}, args.out)
    return 0


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptssh", description="PT-symmetric SSH chains: pseudometrics, spectra, pseudospectra")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a Hamiltonian as a JSON matrix")
    _add_model(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("pseudometrics", help="closed-form and/or oracle pseudometrics")
    _add_model(p)
    p.add_argument("--k", default="all", help="'all' or a comma list such as 1,3")
    p.add_argument("--source", choices=("closed", "oracle", "both"), default="closed")
    p.add_argument("--tol", type=float, default=None, help="oracle null-space tolerance")
    p.add_argument("--force", action="store_true", help="write even if a residual check fails")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pseudometrics)

    p = sub.add_parser("sweep", help="spectrum against theta (lambda = cos theta)")
    _add_model(p, kinds=("ssh", "dssh", "swapped"), need_lambda=False)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--theta-steps", type=int, default=200, help="points on [0, 2 pi]")
    g.add_argument("--theta-range", help="min:max:count")
    p.add_argument("--out")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("epmap", help="real-spectrum map and boundary over (rho, omega)")
    _add_model(p, scalar_gamma=False)
    p.add_argument("--rho", required=True, help="min:max:count")
    p.add_argument("--omega", required=True, help="min:max:count")
    p.add_argument("--boundary-out")
    p.add_argument("--tol", type=float, default=config.BOUNDARY_TOL)
    p.add_argument("--out")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_epmap)

    p = sub.add_parser("pseudospectrum", help="resolvent norms on a complex window")
    _add_model(p)
    p.add_argument("--window", required=True, help="re_min:re_max:im_min:im_max")
    p.add_argument("--res", type=int, default=100, help="points per axis")
    p.add_argument("--res-im", type=int, default=None, help="points on the imaginary axis")
    p.add_argument("--kappa", default="auto", help="auto, none or a number")
    p.add_argument("--out")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_pseudospectrum)

    p = sub.add_parser("positivity", help="lattice scan of metric coefficients around e1")
    _add_model(p)
    p.add_argument("--source", choices=("closed", "oracle"), default="closed")
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--out")
    p.add_argument("--manifest")
    p.set_defaults(func=cmd_positivity)

    p = sub.add_parser("critical-rho", help="rho where the real-spectrum omega set vanishes")
    _add_model(p, scalar_gamma=False)
    p.add_argument("--probe", default="0.5:1.5", help="lo:hi")
    p.add_argument("--omega", default="-1:1:401", help="min:max:count scan")
    p.add_argument("--tol", type=float, default=1e-2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_critical_rho)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args)
    except CutoffError as exc:
        print(f"ptssh: cutoff: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, NumericalError, RankAmbiguityError, BracketError,
            CertificationError, SpectrumError, np.linalg.LinAlgError) as exc:
        print(f"ptssh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValueError) as exc:
        print(f"ptssh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
