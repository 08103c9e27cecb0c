"""Command-line front end: resolve a config, run one command, write CSV and a manifest.

Exit codes: 0 success, 1 configuration error, 2 numerical contract violation
(unconverged cutoffs, generator residual above tolerance).
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import __version__, dynamics, fntransform, physpar, qalgebra
from .config import RunConfig, cutoffs_from, manifest_lines, resolve
from .errors import ConfigError, FluxbusError, ResidualTooLargeError
from .hammodels import Cutoffs

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

# Unit conversions for the sample.* keys.
UM = 1e-6
NA = 1e-9


class Context:
    def __init__(self, values: dict[str, Any], out: Path, quiet: bool):
        self.values = values
        self.out = out
        self.quiet = quiet

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def say(self, message: str):
        if not self.quiet:
            print(message)

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
        path = self.out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_cell(v) for v in row])
        self.say(f"wrote {path}")


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _params(ctx: Context, **changes) -> physpar.SystemParams:
    p = physpar.SystemParams(
        ctx["params.omega_q"], ctx["params.omega_r"], ctx["params.omega_s"],
        ctx["params.g_qr"], ctx["params.g_qs"], unit="omega_r",
    )
    return p.replace(**changes) if changes else p


def _transfer_config(ctx: Context, params: physpar.SystemParams) -> dynamics.TransferConfig:
    return dynamics.TransferConfig(
        params=params,
        hamiltonian_kind=ctx["transfer.kind"],
        cut=cutoffs_from(ctx.values),
        t_max=ctx["transfer.t_max"],
        n_steps=ctx["transfer.n_steps"],
        initial=ctx["transfer.initial"],
        target=ctx["transfer.target"],
        n_spins=ctx["transfer.n_spins"],
        converge=ctx["transfer.converge"],
        tol=ctx["transfer.tol"],
        cap=ctx["transfer.cap"],
    )


def _regime_params(ctx: Context, g: float, omega_q: float) -> physpar.SystemParams:
    w = ctx["params.omega_r"]
    return physpar.SystemParams(omega_q * w, w, w, g * w, g * w, unit="omega_r")


def _report(ctx: Context, label: str, res: dynamics.TransferResult) -> bool:
    c = res.cutoffs_used
    ctx.say(
        f"{label}: peak fidelity {res.peak_fidelity:.6f} at gamma*t = {res.peak_time:.4f} "
        f"(cutoffs {c.n_photon}/{c.n_spinmode}, converged={res.converged})"
    )
    if res.converged is False:
        print(f"error: {label} not converged below cap {ctx['transfer.cap']}", file=sys.stderr)
        return False
    return True


def cmd_couplings(ctx: Context) -> int:
    geom = physpar.LoopGeometry(
        area=ctx["sample.area_um2"] * UM**2,
        aspect=ctx["sample.aspect"],
        thickness=ctx["sample.thickness_um"] * UM,
        persistent_current=ctx["sample.persistent_current_na"] * NA,
        density=ctx["sample.density_per_um3"] / UM**3,
    )
    b = physpar.loop_center_field(geom)
    g_s = physpar.single_spin_coupling(b)
    g_qs = physpar.ensemble_coupling_from_density(geom)
    omega = ctx["couplings.omega_r_mhz"]
    delta = ctx["couplings.detuning_ratio"] * g_qs
    # Working point: g_qr = g_qs, both modes at omega, qubit detuned by delta.
    eff = physpar.effective_rwa(physpar.SystemParams(omega + delta, omega, omega, g_qs, g_qs))
    i_r0 = physpar.zero_point_current(omega, ctx["couplings.inductance_nh"] * 1e-9)
    g_qr_circuit = physpar.qubit_resonator_coupling(
        ctx["couplings.mutual_ph"] * 1e-12, geom.persistent_current, i_r0
    )
    rows = [
        ("b_center", b, "T"),
        ("g_single", g_s, "MHz"),
        ("g_qs", g_qs, "MHz"),
        ("g_qr", g_qs, "MHz"),
        ("delta", delta, "MHz"),
        ("g_eff", eff.g_eff, "MHz"),
        ("i_r0", i_r0, "A"),
        ("g_qr_mutual_inductance", g_qr_circuit, "MHz"),
    ]
    for name, value, unit in rows:
        ctx.say(f"{name:>24} = {_cell(value)} {unit}")
    ctx.write_csv("couplings.csv", ("quantity", "value", "unit"), rows)
    return EXIT_OK


def cmd_fig4(ctx: Context) -> int:
    lo, hi, ppd = ctx["fig4.n_min_exp"], ctx["fig4.n_max_exp"], ctx["fig4.points_per_decade"]
    if hi < lo or ppd < 1:
        raise ConfigError("fig4 needs n_max_exp >= n_min_exp and points_per_decade >= 1")
    # Exponents k/ppd keep exact powers of ten on the grid.
    n_values = [10.0 ** (k / ppd) for k in range(lo * ppd, hi * ppd + 1)]
    rows = dynamics.sweep_ensemble_size(
        n_values,
        g_single_hybrid=ctx["fig4.g_single_hybrid_mhz"],
        g_single_direct=ctx["fig4.g_single_direct_mhz"],
        g_qr=ctx["fig4.g_qr_mhz"],
        delta=ctx["fig4.delta_mhz"],
    )
    ctx.write_csv("fig4.csv", ("n_spins", "g_eff_hybrid_mhz", "g_rs_direct_mhz"), rows)
    return EXIT_OK


def _trajectory_rows(res: dynamics.TransferResult):
    return zip(res.times, res.fidelity)


def cmd_transfer(ctx: Context) -> int:
    res = dynamics.transfer_experiment(_transfer_config(ctx, _params(ctx)))
    ctx.write_csv("transfer.csv", ("gamma_t", "fidelity"), _trajectory_rows(res))
    return EXIT_OK if _report(ctx, "transfer", res) else EXIT_NUMERIC


def cmd_fig5(ctx: Context) -> int:
    ok = True
    summary = []
    for label, g, wq in (
        ("strong", ctx["fig5.strong_g"], ctx["fig5.strong_omega_q"]),
        ("ultrastrong", ctx["fig5.ultra_g"], ctx["fig5.ultra_omega_q"]),
    ):
        res = dynamics.transfer_experiment(_transfer_config(ctx, _regime_params(ctx, g, wq)))
        ctx.write_csv(f"fig5_{label}.csv", ("gamma_t", "fidelity"), _trajectory_rows(res))
        ok &= _report(ctx, label, res)
        c = res.cutoffs_used
        summary.append((label, g, wq, res.peak_time, res.peak_fidelity, c.n_photon, c.n_spinmode, res.converged))
    ctx.write_csv(
        "fig5_summary.csv",
        ("regime", "g", "omega_q", "peak_gamma_t", "peak_fidelity", "n_photon", "n_spinmode", "converged"),
        summary,
    )
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_fig6(ctx: Context) -> int:
    traj = ctx["fig6.trajectory_g"]
    if len(traj) != 3:
        raise ConfigError(f"fig6.trajectory_g needs exactly 3 values, got {len(traj)}")
    wq = ctx["fig6.omega_q"]
    base = _transfer_config(ctx, _regime_params(ctx, traj[0], wq))
    ok = True
    for panel, g in zip("abc", traj):
        res = dynamics.transfer_experiment(dynamics.coupling_config(base, g, base.t_max))
        ctx.write_csv(f"fig6{panel}.csv", ("gamma_t", "fidelity"), _trajectory_rows(res))
        ok &= _report(ctx, f"fig6{panel} g={g:g}", res)
    rows = dynamics.sweep_coupling(base, ctx["fig6.g_values"], base.t_max, ctx["sweep.workers"])
    ctx.write_csv("fig6d.csv", ("g", "peak_fidelity"), rows)
    for g, peak in rows:
        ctx.say(f"fig6d g={g:g}: peak fidelity {peak:.6f}")
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_fncheck(ctx: Context) -> int:
    rng = np.random.default_rng(ctx["fncheck.seed"])
    n = ctx["fncheck.n_photon"]
    cut = Cutoffs(n, n)
    tol = ctx["fncheck.tolerance"]
    rows, worst = [], 0.0
    for i, p in enumerate(fntransform.random_dispersive_params(rng, ctx["fncheck.n_random"])):
        for regime in ("rwa", "nonrwa", "mixed"):
            chk = fntransform.check_elimination(p, cut, regime)
            worst = max(worst, chk.residual)
            rows.append((i, regime, p.omega_q, p.omega_r, p.omega_s, p.g_qr, p.g_qs,
                         chk.residual, chk.relative_residual, chk.closed_form_diff))
    ctx.write_csv(
        "fncheck.csv",
        ("set", "regime", "omega_q", "omega_r", "omega_s", "g_qr", "g_qs",
         "residual", "relative_residual", "closed_form_diff"),
        rows,
    )
    diffs = [r[-1] for r in rows if not math.isnan(r[-1])]
    ctx.say(f"max residual {worst:.3e}; max effective-vs-closed-form {max(diffs):.3e}")
    if worst > tol:
        raise ResidualTooLargeError(worst, tol)
    return EXIT_OK


def cmd_oracle(ctx: Context) -> int:
    n = ctx["oracle.n_photon"]
    rep = dynamics.bosonization_check(
        _params(ctx),
        n_spins=ctx["oracle.n_spins"],
        cut=Cutoffs(n, n),
        t_max=ctx["transfer.t_max"],
        n_steps=ctx["transfer.n_steps"],
        rotating_wave=ctx["oracle.rotating_wave"],
    )
    ctx.write_csv(
        "oracle.csv",
        ("gamma_t", "fidelity_exact", "fidelity_bosonized"),
        zip(rep.times, rep.fidelity_exact, rep.fidelity_bosonized),
    )
    ctx.say(f"max |exact - bosonized| = {rep.max_deviation:.3e}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[Context], int]] = {
    "couplings": cmd_couplings,
    "fig4": cmd_fig4,
    "transfer": cmd_transfer,
    "fig5": cmd_fig5,
    "fig6": cmd_fig6,
    "fncheck": cmd_fncheck,
    "oracle": cmd_oracle,
}

# Library-level numerical settings echoed in every manifest.
_LIBRARY_SETTINGS = {
    "library.version": __version__,
    "library.hermitian_rtol": qalgebra.HERMITIAN_RTOL,
    "library.unitary_atol": qalgebra.UNITARY_ATOL,
    "library.norm_atol": qalgebra.NORM_ATOL,
    "library.fn_boundary_margin": fntransform.BOUNDARY_MARGIN,
    "library.gamma_definition": "abs(g_eff), counter-rotating terms kept",
}


def run(cfg: RunConfig) -> int:
    if cfg.command not in COMMANDS:
        print(f"error: unknown command {cfg.command!r}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        values = resolve(cfg.config_path, cfg.overrides)
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "manifest.txt").write_text(
            "\n".join(manifest_lines(cfg.command, values, _LIBRARY_SETTINGS)) + "\n"
        )
        return COMMANDS[cfg.command](Context(values, out, cfg.quiet))
    except ResidualTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, FluxbusError, ValueError, OSError) as exc:
        # Invalid parameters surface as validation errors: a configuration problem.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fluxbus", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="flat key = value config file")
    ap.add_argument("--out", default="out", help="output directory (default: out)")
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="KEY=VALUE", help="override one config key (repeatable)")
    ap.add_argument("--quiet", action="store_true", help="suppress progress output")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(RunConfig(
        command=args.command,
        config_path=args.config,
        output_dir=args.out,
        overrides=tuple(args.overrides),
        quiet=args.quiet,
    ))


if __name__ == "__main__":
    sys.exit(main())
