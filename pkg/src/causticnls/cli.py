"""Command-line entry point.

Subcommands: focal, scatter, cusp, converge, lemma3, alias, list-presets.
Flags may also come from a JSON config (--config); explicit command-line
flags win over config values.  Exit code 0 on success; failures print one
machine-readable JSON line on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from causticnls.presets import registered_presets
from causticnls.propagators import BlowUpError, SplitScheme
from causticnls.runs import (
    MassConservationError,
    run_alias_check,
    run_convergence,
    run_cusp,
    run_focal,
    run_lemma3_scaling,
    run_scatter,
)
from causticnls.scattering import BoundaryLeakError


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="output directory (default ./out)")
    parser.add_argument("--config", type=Path, default=None, help="JSON config file")
    parser.add_argument("--dt", type=float, default=None, help="time step override")
    parser.add_argument("--modes", type=int, default=None, help="number of Fourier modes")
    parser.add_argument(
        "--scheme", choices=["lie", "strang"], default=None, help="splitting scheme"
    )
    parser.add_argument("--jobs", type=int, default=None, help="parallel workers for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causticnls",
        description="Split-step Fourier experiments for the semiclassical "
        "nonlinear Schrodinger equation with caustics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("focal", help="focal-point runs (free vs nonlinear at T=2)")
    p.add_argument("--alpha", type=float, action="append", default=None)
    p.add_argument("--preset", type=str, default=None, help="registered preset name")
    _add_common(p)

    p = sub.add_parser("scatter", help="scattering operator runs (sandwich, T=55)")
    p.add_argument("--sigma", type=float, action="append", default=None)
    p.add_argument("--lambda", dest="coupling", type=float, action="append", default=None)
    p.add_argument("--t-horizon", type=float, default=None, help="sandwich time T")
    p.add_argument("--no-t-stability", action="store_true", help="skip the stability-in-T rerun")
    p.add_argument("--preset", type=str, default=None)
    _add_common(p)

    p = sub.add_parser("cusp", help="cusp-caustic runs (free vs nonlinear at T=3.5)")
    p.add_argument("--alpha", type=float, action="append", default=None)
    p.add_argument("--preset", type=str, default=None)
    _add_common(p)

    p = sub.add_parser("converge", help="splitting self-convergence study")
    _add_common(p)

    p = sub.add_parser("lemma3", help="free-vs-nonlinear error scaling over an eps ladder")
    _add_common(p)

    p = sub.add_parser("alias", help="DFT aliasing and truncation diagnostics")
    _add_common(p)

    sub.add_parser("list-presets", help="list registered presets")
    return parser


def _load_config(args: argparse.Namespace) -> Dict[str, object]:
    if getattr(args, "config", None) is None:
        return {}
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a single JSON object")
    return cfg


def _merged(args: argparse.Namespace, cfg: Dict[str, object], key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in cfg:
        return cfg[key]
    return default


def _scheme_from(value: Optional[str]) -> Optional[SplitScheme]:
    return None if value is None else SplitScheme(value)


def _run_many(worker, points: List[tuple], jobs: int) -> List[dict]:
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, points))
    return [worker(p) for p in points]


def _focal_point(point) -> dict:
    alpha, out, dt, modes, scheme, eps = point
    return run_focal(alpha, out, dt=dt, n_modes=modes, scheme=_scheme_from(scheme), epsilon=eps)


def _cusp_point(point) -> dict:
    alpha, out, dt, modes, scheme, eps = point
    return run_cusp(alpha, out, dt=dt, n_modes=modes, scheme=_scheme_from(scheme), epsilon=eps)


def _scatter_point(point) -> dict:
    sigma, coupling, out, dt, modes, scheme, t_horizon, with_stability = point
    return run_scatter(
        sigma,
        coupling,
        out,
        dt=dt,
        n_modes=modes,
        scheme=_scheme_from(scheme),
        t_horizon=t_horizon,
        compute_t_stability=with_stability,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "list-presets":
            for name, preset in sorted(registered_presets().items()):
                print(
                    f"{name:28s} kind={preset.kind:8s} N={preset.grid.num_points:6d} "
                    f"sigma={preset.params.sigma:g} alpha={preset.params.alpha:g} "
                    f"coupling={preset.params.coupling:g} t_final={preset.t_final:g} "
                    f"dt={preset.dt:g}"
                )
            return 0

        cfg = _load_config(args)
        out = Path(_merged(args, cfg, "out", Path("out")))
        dt = _merged(args, cfg, "dt")
        modes = _merged(args, cfg, "modes")
        scheme = _merged(args, cfg, "scheme")
        jobs = int(_merged(args, cfg, "jobs", 1) or 1)

        if args.command == "focal":
            alphas = _resolve_alphas(args, cfg, default=(2.5, 2.0, 1.5), kind="focal")
            eps = cfg.get("epsilon")
            points = [(a, out, dt, modes, scheme, eps) for a in alphas]
            results = _run_many(_focal_point, points, jobs)
        elif args.command == "cusp":
            alphas = _resolve_alphas(args, cfg, default=(4.0, 3.0, 2.0), kind="cusp")
            eps = cfg.get("epsilon")
            points = [(a, out, dt, modes, scheme, eps) for a in alphas]
            results = _run_many(_cusp_point, points, jobs)
        elif args.command == "scatter":
            sigmas, couplings = _resolve_scatter_points(args, cfg)
            t_horizon = _merged(args, cfg, "t_horizon")
            with_stability = not getattr(args, "no_t_stability", False)
            points = [
                (s, c, out, dt, modes, scheme, t_horizon, with_stability)
                for s in sigmas
                for c in couplings
            ]
            results = _run_many(_scatter_point, points, jobs)
        elif args.command == "converge":
            results = [run_convergence(out, **_only(cfg, ["n_modes", "dts", "t_final"]))]
        elif args.command == "lemma3":
            results = [
                run_lemma3_scaling(
                    out, jobs=jobs, **_only(cfg, ["sigma", "alpha", "epsilons", "dt", "samples"])
                )
            ]
        elif args.command == "alias":
            results = [run_alias_check(out, **_only(cfg, ["seed", "fold_cases"]))]
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown command {args.command}")

        for res in results:
            name = res.get("preset", res.get("study", args.command))
            print(f"completed {name}: artifacts in {out}")
        return 0
    except (BlowUpError, BoundaryLeakError, MassConservationError, ValueError, OSError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


def _resolve_alphas(args, cfg, default, kind) -> List[float]:
    if getattr(args, "preset", None):
        preset = registered_presets().get(args.preset)
        if preset is None or preset.kind != kind:
            raise ValueError(f"unknown {kind} preset {args.preset!r}")
        return [preset.params.alpha]
    alphas = _merged(args, cfg, "alpha")
    if alphas is None:
        return list(default)
    if isinstance(alphas, (int, float)):
        return [float(alphas)]
    return [float(a) for a in alphas]


def _resolve_scatter_points(args, cfg):
    if getattr(args, "preset", None):
        preset = registered_presets().get(args.preset)
        if preset is None or preset.kind != "scatter":
            raise ValueError(f"unknown scatter preset {args.preset!r}")
        return [preset.params.sigma], [preset.params.coupling]
    sigmas = _merged(args, cfg, "sigma", [2.0])
    couplings = getattr(args, "coupling", None)
    if couplings is None:
        couplings = cfg.get("lambda", cfg.get("coupling", [1.0]))
    if isinstance(sigmas, (int, float)):
        sigmas = [sigmas]
    if isinstance(couplings, (int, float)):
        couplings = [couplings]
    return [float(s) for s in sigmas], [float(c) for c in couplings]


def _only(cfg: Dict[str, object], keys: List[str]) -> Dict[str, object]:
    return {k: cfg[k] for k in keys if k in cfg}


if __name__ == "__main__":
    sys.exit(main())
