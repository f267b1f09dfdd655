"""Command-line front end.

Subcommands: ``sample`` (draw one matrix), ``spectrum`` (top eigenvalues of a
sampled or loaded matrix), ``experiment`` (replicated runs with verdicts),
``sweep`` (phase-diagram grid), and ``verify`` (exact-invariant suite).

Exit codes: 0 when the command succeeds and every verdict passes, 2 when a
report contains a failing verdict, 1 for usage or configuration errors.

Every option can also live in a config file (``--config``, INI format, one
section per subcommand); command-line flags win over the file, and unknown
keys in a section are rejected rather than ignored.
"""

from __future__ import annotations

import argparse
import configparser
import sys

from .limits import EDGE, classify_regime
from .matrices import load_matrix_csv, norms, save_matrix_csv, top_entries
from .spectral import SOLVER_DENSE, SOLVER_LANCZOS, eig_dense_symmetric, top_eigs
from .tails import (
    BAND,
    BERNOULLI,
    FIXED_COUNT,
    HERMITIAN,
    RECTANGULAR,
    SV_CONSTANT,
    SV_LOG_POWER,
    EnsembleSpec,
    SparsitySpec,
    TailLaw,
    sample_matrix,
)
from .experiments import (
    make_config,
    run_edge_experiment,
    run_hermitian_experiment,
    run_invariant_suite,
    run_phase_sweep,
    run_poisson_experiment,
    run_truncation_experiment,
    sweep_to_csv,
)

EXPERIMENT_KINDS = ("poisson", "edge", "hermitian", "truncation")


class UsageError(Exception):
    """Bad flags or bad config; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise UsageError(message)


def _bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _floats(raw: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty list: {raw!r}")
    return tuple(float(p) for p in parts)


def _grid(raw: str) -> tuple[float, ...]:
    """Either ``lo:hi:step`` or a comma-separated list."""
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be lo:hi:step, got {raw!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"grid needs step > 0 and hi >= lo: {raw!r}")
        values = []
        x = lo
        while x <= hi + 1e-9 * max(1.0, abs(hi)):
            values.append(round(x, 12))
            x += step
        return tuple(values)
    return _floats(raw)


def _choice(*allowed: str):
    def convert(raw: str) -> str:
        value = raw.strip()
        if value not in allowed:
            raise ValueError(f"must be one of {allowed}: {raw!r}")
        return value

    return convert


_ENSEMBLE_TYPES = {
    "alpha": float,
    "mu": float,
    "n": int,
    "rho": float,
    "shape": _choice(RECTANGULAR, HERMITIAN),
    "sv_kind": _choice(SV_CONSTANT, SV_LOG_POWER),
    "sv_c": float,
    "sv_beta": float,
    "support_min": float,
    "standardize": _bool,
    "sparsity": _choice(BERNOULLI, BAND, FIXED_COUNT),
    "halfwidth": int,
    "count": int,
}

_ENSEMBLE_DEFAULTS = {
    "rho": 1.0,
    "shape": RECTANGULAR,
    "sv_kind": SV_CONSTANT,
    "sv_c": 1.0,
    "sv_beta": 0.0,
    "support_min": 1.0,
    "sparsity": BERNOULLI,
}

_COMMAND_TYPES = {
    "sample": {**_ENSEMBLE_TYPES, "seed": int, "out": str},
    "spectrum": {
        **_ENSEMBLE_TYPES,
        "seed": int,
        "k": int,
        "tol": float,
        "solver": _choice(SOLVER_LANCZOS, SOLVER_DENSE),
        "solver_seed": int,
        "infile": str,
        "symmetric": _bool,
        "out": str,
    },
    "experiment": {
        **{k: v for k, v in _ENSEMBLE_TYPES.items() if k != "shape"},
        "kind": _choice(*EXPERIMENT_KINDS),
        "replicates": int,
        "top_k": int,
        "thresholds": _floats,
        "master_seed": int,
        "esd_bins": int,
        "solver_tol": float,
        "gamma": float,
        "gamma_prime": float,
        "kappa": float,
        "report": str,
        "csv": str,
        "timing": _bool,
    },
    "sweep": {
        "alphas": _grid,
        "mus": _grid,
        "n": int,
        "rho": float,
        "replicates": int,
        "top_k": int,
        "master_seed": int,
        "out": str,
    },
    "verify": {
        "seed": int,
        "instances": int,
        "lemma_instances": int,
        "report": str,
    },
}

_COMMAND_DEFAULTS = {
    "sample": {**_ENSEMBLE_DEFAULTS, "standardize": False, "seed": 0},
    "spectrum": {
        **_ENSEMBLE_DEFAULTS,
        "standardize": False,
        "seed": 0,
        "k": 5,
        "tol": 1e-8,
        "solver": SOLVER_LANCZOS,
        "solver_seed": 0,
        "symmetric": False,
    },
    "experiment": {
        **{k: v for k, v in _ENSEMBLE_DEFAULTS.items() if k != "shape"},
        "replicates": 20,
        "top_k": 5,
        "thresholds": (0.5, 1.0, 2.0),
        "master_seed": 0,
        "esd_bins": 64,
        "solver_tol": 1e-8,
        "kappa": 1.5,
        "timing": True,
    },
    "sweep": {"rho": 1.0, "replicates": 5, "top_k": 3, "master_seed": 0},
    "verify": {"seed": 20240801, "instances": 500, "lemma_instances": 100},
}


def _add_ensemble_args(sub: argparse.ArgumentParser, with_shape: bool = True) -> None:
    sub.add_argument("--alpha", type=float, help="tail exponent")
    sub.add_argument("--mu", type=float, help="sparsity exponent; mask density n^(mu-1)")
    sub.add_argument("--n", type=int, help="column dimension")
    sub.add_argument("--rho", type=float, help="aspect ratio p/n (default 1)")
    if with_shape:
        sub.add_argument("--shape", choices=(RECTANGULAR, HERMITIAN))
    sub.add_argument("--sv", dest="sv_kind", choices=(SV_CONSTANT, SV_LOG_POWER))
    sub.add_argument("--sv-c", dest="sv_c", type=float)
    sub.add_argument("--sv-beta", dest="sv_beta", type=float)
    sub.add_argument("--support-min", dest="support_min", type=float)
    sub.add_argument("--standardize", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--sparsity", choices=(BERNOULLI, BAND, FIXED_COUNT))
    sub.add_argument("--halfwidth", type=int, help="band sparsity half width")
    sub.add_argument("--count", type=int, help="fixed-count sparsity entries per row")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="htspec",
        description="Sparse heavy-tailed random matrices: sampling, spectra, and phase-transition experiments.",
    )
    parser.add_argument("--config", help="INI file with one section per subcommand")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)

    sample = subs.add_parser("sample", help="draw one matrix and summarize it")
    _add_ensemble_args(sample)
    sample.add_argument("--seed", type=int)
    sample.add_argument("--out", help="write the matrix as i,j,value CSV")

    spectrum = subs.add_parser("spectrum", help="top eigenvalues of one matrix")
    _add_ensemble_args(spectrum)
    spectrum.add_argument("--seed", type=int)
    spectrum.add_argument("--k", type=int)
    spectrum.add_argument("--tol", type=float)
    spectrum.add_argument("--solver", choices=(SOLVER_LANCZOS, SOLVER_DENSE))
    spectrum.add_argument("--solver-seed", dest="solver_seed", type=int)
    spectrum.add_argument("--in", dest="infile", help="load matrix from CSV instead of sampling")
    spectrum.add_argument(
        "--symmetric", action=argparse.BooleanOptionalAction, default=None,
        help="treat the loaded CSV as symmetric",
    )
    spectrum.add_argument("--out", help="write the result as JSON")

    experiment = subs.add_parser("experiment", help="replicated run with verdicts")
    experiment.add_argument("--kind", choices=EXPERIMENT_KINDS)
    _add_ensemble_args(experiment, with_shape=False)
    experiment.add_argument("--replicates", type=int)
    experiment.add_argument("--top-k", dest="top_k", type=int)
    experiment.add_argument("--thresholds", type=_floats, help="comma-separated count thresholds")
    experiment.add_argument("--master-seed", dest="master_seed", type=int)
    experiment.add_argument("--esd-bins", dest="esd_bins", type=int)
    experiment.add_argument("--solver-tol", dest="solver_tol", type=float)
    experiment.add_argument("--gamma", type=float, help="truncation level exponent")
    experiment.add_argument("--gamma-prime", dest="gamma_prime", type=float)
    experiment.add_argument("--kappa", type=float)
    experiment.add_argument("--report", help="write the full report as JSON")
    experiment.add_argument("--csv", help="write the per-replicate summary as CSV")
    experiment.add_argument(
        "--timing", action=argparse.BooleanOptionalAction, default=None,
        help="include timing fields in the JSON report",
    )

    sweep = subs.add_parser("sweep", help="median diagnostics over an (alpha, mu) grid")
    sweep.add_argument("--alphas", type=_grid, help="lo:hi:step or comma list")
    sweep.add_argument("--mus", type=_grid, help="lo:hi:step or comma list")
    sweep.add_argument("--n", type=int)
    sweep.add_argument("--rho", type=float)
    sweep.add_argument("--replicates", type=int)
    sweep.add_argument("--top-k", dest="top_k", type=int)
    sweep.add_argument("--master-seed", dest="master_seed", type=int)
    sweep.add_argument("--out", help="write the grid as CSV")

    verify = subs.add_parser("verify", help="run the exact-invariant suite")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--instances", type=int)
    verify.add_argument("--lemma-instances", dest="lemma_instances", type=int)
    verify.add_argument("--report", help="write the check table as JSON")

    return parser


def _apply_config(args: argparse.Namespace, command: str) -> None:
    types = _COMMAND_TYPES[command]
    if args.config is not None:
        cp = configparser.ConfigParser()
        read = cp.read(args.config)
        if not read:
            raise UsageError(f"config file not found or unreadable: {args.config}")
        if cp.has_section(command):
            for key, raw in cp.items(command):
                dest = key.replace("-", "_")
                if dest == "sv":
                    dest = "sv_kind"
                if dest == "in":
                    dest = "infile"
                if dest not in types:
                    raise UsageError(f"unknown key {key!r} in config section [{command}]")
                if getattr(args, dest, None) is None:
                    try:
                        setattr(args, dest, types[dest](raw))
                    except ValueError as exc:
                        raise UsageError(f"bad value for {key!r} in [{command}]: {exc}") from exc
    for dest, value in _COMMAND_DEFAULTS[command].items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)


def _require(args: argparse.Namespace, names: tuple[str, ...]) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"missing required options: {flags}")


def _law(args: argparse.Namespace) -> TailLaw:
    return TailLaw(
        alpha=args.alpha,
        sv_kind=args.sv_kind,
        sv_c=args.sv_c,
        sv_beta=args.sv_beta,
        support_min=args.support_min,
        standardize=args.standardize,
    )


def _sparsity(args: argparse.Namespace) -> SparsitySpec:
    return SparsitySpec(
        kind=args.sparsity, mu=args.mu, halfwidth=args.halfwidth, count=args.count
    )


def _fmt(value) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _cmd_sample(args: argparse.Namespace) -> int:
    _require(args, ("alpha", "mu", "n"))
    if args.standardize is None:
        args.standardize = False
    spec = EnsembleSpec(
        shape=args.shape, n=args.n, law=_law(args), sparsity=_sparsity(args),
        seed=args.seed, rho=args.rho,
    )
    m = sample_matrix(spec)
    inf_n, one_n = norms(m)
    entries, _ = top_entries(m, 1)
    top = entries[0].magnitude if entries else 0.0
    if args.out:
        save_matrix_csv(m, args.out)
        print(f"wrote {args.out}")
    print(
        f"shape={m.rows}x{m.cols} nnz={m.nnz} norm_inf={inf_n:.6g} "
        f"norm_one={one_n:.6g} top_entry={top:.6g}"
    )
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    if args.infile is not None:
        m = load_matrix_csv(args.infile, symmetric=bool(args.symmetric))
    else:
        _require(args, ("alpha", "mu", "n"))
        if args.standardize is None:
            args.standardize = False
        spec = EnsembleSpec(
            shape=args.shape, n=args.n, law=_law(args), sparsity=_sparsity(args),
            seed=args.seed, rho=args.rho,
        )
        m = sample_matrix(spec)
    if args.solver == SOLVER_DENSE:
        dense = m.to_dense()
        target = dense if m.symmetric else dense @ dense.T
        result = eig_dense_symmetric(target, dense_limit=max(target.shape[0], 1))
        k = min(args.k, result.eigenvalues.size)
        import numpy as np

        result = type(result)(
            eigenvalues=result.eigenvalues[:k],
            eigenvectors=result.eigenvectors[:, :k],
            solver=result.solver,
            residual_norms=result.residual_norms[:k],
            iterations=result.iterations,
            restarts=result.restarts,
            converged=result.converged,
        )
    else:
        result = top_eigs(m, args.k, tol=args.tol, seed=args.solver_seed)
    for value, resid in zip(result.eigenvalues, result.residual_norms):
        print(f"{float(value)!r} residual={resid:.3e}")
    if not result.converged:
        print("warning: solver did not reach the requested tolerance", file=sys.stderr)
    if args.out:
        import json

        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(result.to_json_dict(), fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    return 0


def _print_verdicts(verdicts) -> None:
    for v in verdicts:
        status = "PASS" if v["pass"] else "FAIL"
        print(f"[{status}] {v['criterion']}: observed={_fmt(v['observed'])} bound={_fmt(v['bound'])}")
    passed = sum(1 for v in verdicts if v["pass"])
    print(f"{passed}/{len(verdicts)} criteria passed")


def _cmd_experiment(args: argparse.Namespace) -> int:
    _require(args, ("kind", "alpha", "mu", "n", "replicates"))
    if args.standardize is None:
        regime = classify_regime(args.alpha, args.mu)
        args.standardize = args.kind in ("edge", "truncation") or (
            args.kind == "hermitian" and regime == EDGE
        )
    cfg = make_config(
        alpha=args.alpha,
        mu=args.mu,
        n=args.n,
        rho=args.rho,
        replicates=args.replicates,
        shape=HERMITIAN if args.kind == "hermitian" else RECTANGULAR,
        top_k=args.top_k,
        thresholds=args.thresholds,
        master_seed=args.master_seed,
        standardize=args.standardize,
        sv_kind=args.sv_kind,
        sv_c=args.sv_c,
        sv_beta=args.sv_beta,
        support_min=args.support_min,
        sparsity_kind=args.sparsity,
        halfwidth=args.halfwidth,
        count=args.count,
        esd_bins=args.esd_bins,
        solver_tol=args.solver_tol,
    )
    if args.kind == "poisson":
        report = run_poisson_experiment(cfg)
    elif args.kind == "edge":
        report = run_edge_experiment(cfg)
    elif args.kind == "hermitian":
        report = run_hermitian_experiment(cfg)
    else:
        report = run_truncation_experiment(
            cfg, gamma=args.gamma, gamma_prime=args.gamma_prime, kappa=args.kappa
        )
    _print_verdicts(report.verdicts)
    if args.report:
        report.save_json(args.report, include_timing=args.timing)
        print(f"wrote {args.report}")
    if args.csv:
        report.save_csv(args.csv)
        print(f"wrote {args.csv}")
    return 0 if report.passed() else 2


def _cmd_sweep(args: argparse.Namespace) -> int:
    _require(args, ("alphas", "mus", "n"))
    sweep = run_phase_sweep(
        args.alphas,
        args.mus,
        n=args.n,
        rho=args.rho,
        replicates=args.replicates,
        top_k=args.top_k,
        master_seed=args.master_seed,
    )
    for cell in sweep["cells"]:
        print(
            f"alpha={cell['alpha']:g} mu={cell['mu']:g} regime={cell['regime']} "
            f"ratio_entry={_fmt(cell['median_ratio_entry'])} "
            f"ratio_edge={_fmt(cell['median_ratio_edge'])} "
            f"loc_dist={_fmt(cell['median_loc_dist'])}"
        )
    if args.out:
        sweep_to_csv(sweep, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    result = run_invariant_suite(
        seed=args.seed, instances=args.instances, lemma_instances=args.lemma_instances
    )
    for check in result["checks"]:
        status = "PASS" if check["pass"] else "FAIL"
        print(
            f"[{status}] {check['name']}: {check['violations']} violations "
            f"in {check['instances']} instances"
        )
    print(f"elapsed {result['elapsed_s']:.1f}s")
    if args.report:
        import json

        payload = {k: v for k, v in result.items() if k != "elapsed_s"}
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.report}")
    return 0 if result["pass"] else 2


_DISPATCH = {
    "sample": _cmd_sample,
    "spectrum": _cmd_spectrum,
    "experiment": _cmd_experiment,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (sample, spectrum, experiment, sweep, verify)")
        _apply_config(args, args.command)
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)


if __name__ == "__main__":
    raise SystemExit(main())
