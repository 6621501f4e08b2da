"""Batch command-line interface.

Verbs: ``phi-sweep``, ``r-scan``, ``scatter``, ``feasibility``,
``analytic-table``; ``figures`` (also reachable as ``--figures``) runs the
bundled figure recipes.  Every output embeds the fully resolved
configuration, numbers are written with 17 significant digits, and
re-running from an output's embedded config reproduces the files
byte-for-byte at any thread count.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .analytics import heisenberg, predict, r_crit, sql
from .config import (
    FEASIBILITY_KEYS,
    ConfigError,
    RunConfig,
    load_config_file,
    make_config,
    parse_assignments,
)
from .dynamics import build_ensemble, transferred_atoms
from .estimator import (
    PhiGrid,
    scan_over_r,
    sensitivity_curve,
    squeezed_combo_variance,
)
from .feasibility import PhysicalSetup, capture_fraction, rate_ratio, scaling_estimate
from .interferometer import (
    HomodyneSpec,
    calibrate_correction_sign,
    lo_noise_samples,
    measure_signals,
    resolve_homodyne,
)
from . import __version__

DRIFT_LIMIT = 1.0e-6  # conservation drift above this fails the run
RATE_RATIO_VALID = 100.0  # single-mode model considered valid above this


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _config_echo_lines(config: dict) -> list[str]:
    lines = []
    for key, value in config.items():
        if isinstance(value, (list, tuple)):
            value = ", ".join(_fmt(v) for v in value)
        elif value is None:
            value = ""
        else:
            value = _fmt(value)
        lines.append(f"# {key} = {value}")
    return lines


def write_table(path: Path, columns: list[str], rows, config: dict, fmt: str):
    """Write a data table as CSV (with a config-echo comment block) or JSON."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        payload = {
            "config": config,
            "columns": columns,
            "rows": [[_fmt(v) for v in row] for row in rows],
        }
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return
    lines = _config_echo_lines(config)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_summary(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _data_path(out_dir: Path, stem: str, fmt: str) -> Path:
    return out_dir / f"{stem}.{'json' if fmt == 'json' else 'csv'}"


PHI_SWEEP_COLUMNS = [
    "phi", "mean_s_a", "var_s_a", "mean_s_b", "mean_s", "var_s",
    "ds_dphi", "delta_phi", "m", "m_ci_lo", "m_ci_hi",
]


def cmd_phi_sweep(config: RunConfig, out_dir: Path, stem: str = "phi_sweep") -> int:
    ensemble = build_ensemble(
        config.n_total, config.n_seed, config.r, config.trajectories,
        config.master_seed, mode=config.mode,
        steps_per_unit_r=config.steps_per_unit_r, n_threads=config.threads,
    )
    grid = PhiGrid.from_range(config.phi_start, config.phi_stop, config.phi_count)
    spec = HomodyneSpec(
        gain_g=config.gain_g, lo_sampled=config.lo_sampled,
        correction_sign="plus" if config.correction == "on" else "auto",
    )
    curve = sensitivity_curve(
        ensemble, grid, spec, correction=(config.correction != "off"),
        resamples=config.bootstrap_resamples,
    )
    rows = list(zip(
        curve.phi, curve.mean_s_a, curve.var_s_a, curve.mean_s_b, curve.mean_s,
        curve.var_s, curve.ds_dphi, curve.delta_phi, curve.m, curve.m_ci_lo, curve.m_ci_hi,
    ))
    cfg = config.to_dict()
    write_table(_data_path(out_dir, stem, config.output_format),
                PHI_SWEEP_COLUMNS, rows, cfg, config.output_format)

    min_m, argmin_phi = curve.min_m()
    k = int(np.argmin(np.where(np.isfinite(curve.m), curve.m, np.inf)))
    drift = ensemble.conservation
    write_summary(out_dir / f"{stem}_summary.json", {
        "config": cfg,
        "min_m": min_m,
        "argmin_phi": argmin_phi,
        "m_ci_at_argmin": [float(curve.m_ci_lo[k]), float(curve.m_ci_hi[k])],
        "transferred_atoms": transferred_atoms(ensemble),
        "correction_sign": curve.correction_sign,
        "max_rel_drift_atoms": drift.max_rel_drift_atoms,
        "max_rel_drift_manley_rowe": drift.max_rel_drift_manley_rowe,
        "traj_count": curve.traj_count,
    })
    return 0 if _drift_ok(drift.max_rel_drift_atoms, drift.max_rel_drift_manley_rowe) else 1


R_SCAN_COLUMNS = [
    "r", "m", "m_ci_lo", "m_ci_hi", "transferred", "var_squeezed_combo",
    "m_plain", "m_recycled", "correction_sign",
]


def cmd_r_scan(config: RunConfig, out_dir: Path, stem: str = "r_scan") -> int:
    if not config.r_list:
        raise ConfigError("r-scan needs a non-empty r_list")
    result = scan_over_r(config.r_list, config)
    rows = [
        (row.r, row.m, row.m_ci_lo, row.m_ci_hi, row.transferred,
         row.var_squeezed_combo, row.m_plain, row.m_recycled, row.correction_sign)
        for row in result.rows
    ]
    cfg = config.to_dict()
    write_table(_data_path(out_dir, stem, config.output_format),
                R_SCAN_COLUMNS, rows, cfg, config.output_format)
    report = result.report
    write_summary(out_dir / f"{stem}_summary.json", {
        "config": cfg,
        "r_star": report.r_star,
        "m_star": report.m_star,
        "atoms_transferred_at_star": report.atoms_transferred_at_star,
        "equivalent_atom_gain": report.equivalent_atom_gain,
        "at_boundary": report.at_boundary,
    })
    worst_atoms = max(row.drift_atoms for row in result.rows)
    worst_mr = max(row.drift_manley_rowe for row in result.rows)
    return 0 if _drift_ok(worst_atoms, worst_mr) else 1


SCATTER_COLUMNS = ["trajectory", "phi", "s_a", "s_b_over_g", "s"]


def cmd_scatter(config: RunConfig, out_dir: Path, stem: str = "scatter") -> int:
    ensemble = build_ensemble(
        config.n_total, config.n_seed, config.r, config.trajectories,
        config.master_seed, mode=config.mode,
        steps_per_unit_r=config.steps_per_unit_r, n_threads=config.threads,
    )
    spec = resolve_homodyne(
        HomodyneSpec(
            gain_g=config.gain_g, lo_sampled=config.lo_sampled,
            correction_sign="plus" if config.correction == "on" else "auto",
        ),
        ensemble,
    )
    if config.correction == "auto_sign":
        spec = replace(spec, correction_sign=calibrate_correction_sign(ensemble, spec))
    sign = "off" if config.correction == "off" else spec.correction_sign
    lo_noise = lo_noise_samples(ensemble) if spec.lo_sampled else None

    use_spec = spec if sign != "off" else replace(spec, correction_sign="auto")
    rows = []
    corr = {}
    for phi in config.scatter_phis:
        sample = measure_signals(ensemble, phi, use_spec, lo_noise)
        s_b_scaled = sample.s_b / config.gain_g
        for t in range(ensemble.n_traj):
            rows.append((t, phi, sample.s_a[t], s_b_scaled[t], sample.s_combined[t]))
        corr[_fmt(float(phi))] = float(np.corrcoef(sample.s_a, s_b_scaled)[0, 1])
    cfg = config.to_dict()
    write_table(_data_path(out_dir, stem, config.output_format),
                SCATTER_COLUMNS, rows, cfg, config.output_format)
    drift = ensemble.conservation
    write_summary(out_dir / f"{stem}_summary.json", {
        "config": cfg,
        "correction_sign": sign,
        "corr_s_a_vs_s_b_over_g": corr,
        "transferred_atoms": transferred_atoms(ensemble),
        "max_rel_drift_atoms": drift.max_rel_drift_atoms,
        "max_rel_drift_manley_rowe": drift.max_rel_drift_manley_rowe,
    })
    return 0 if _drift_ok(drift.max_rel_drift_atoms, drift.max_rel_drift_manley_rowe) else 1


def cmd_feasibility(setup: PhysicalSetup, out_dir: Path, stem: str = "feasibility") -> int:
    setup.validate()
    fraction = capture_fraction(setup)
    ratio = rate_ratio(setup)
    scaling = scaling_estimate(setup.n_seed, setup.n_total) if setup.n_seed > 0 else None
    write_summary(out_dir / f"{stem}.json", {
        "config": {key: getattr(setup, key) for key in FEASIBILITY_KEYS},
        "capture_fraction": fraction,
        "rate_ratio": ratio,
        "scaling_estimate": scaling,
        "single_mode_valid": bool(ratio >= RATE_RATIO_VALID),
    })
    return 0


ANALYTIC_COLUMNS = [
    "r", "delta_phi_plain", "delta_phi_recycled", "m_plain", "m_recycled",
    "var_squeezed_combo", "var_antisqueezed_combo",
]


def cmd_analytic_table(config: RunConfig, out_dir: Path, stem: str = "analytic_table") -> int:
    r_values = config.r_list if config.r_list else list(np.linspace(0.0, 5.0, 51))
    rows = []
    for r in r_values:
        p = predict(float(r), config.n_total)
        rows.append((p.r, p.delta_phi_plain, p.delta_phi_recycled, p.m_plain,
                     p.m_recycled, p.var_squeezed_combo, p.var_antisqueezed_combo))
    cfg = config.to_dict()
    write_table(_data_path(out_dir, stem, config.output_format),
                ANALYTIC_COLUMNS, rows, cfg, config.output_format)
    write_summary(out_dir / f"{stem}_summary.json", {
        "config": cfg,
        "sql": sql(config.n_total),
        "heisenberg": heisenberg(config.n_total),
        "r_crit": r_crit(),
    })
    return 0


def cmd_figures(config: RunConfig, out_dir: Path) -> int:
    """Run the bundled figure recipes: squeezing vs r, M vs r, and the phase sweep."""
    fig_dir = out_dir / "figures"
    status = 0

    # (a) variance of the squeezed quadrature combination vs r
    r_grid = [round(v, 10) for v in np.arange(0.0, 4.01, 0.2)]
    rows = []
    for r in r_grid:
        var_undepleted = predict(r, config.n_total).var_squeezed_combo
        entry = [r, var_undepleted]
        for n_seed in (0.0, config.n_seed):
            ens = build_ensemble(
                config.n_total, n_seed, r, config.trajectories, config.master_seed,
                mode="tw", steps_per_unit_r=config.steps_per_unit_r,
                n_threads=config.threads,
            )
            entry.extend([squeezed_combo_variance(ens), transferred_atoms(ens)])
        rows.append(tuple(entry))
    write_table(
        _data_path(fig_dir, "squeezing_vs_r", config.output_format),
        ["r", "var_undepleted", "var_tw_unseeded", "transferred_unseeded",
         "var_tw_seeded", "transferred_seeded"],
        rows, config.to_dict(), config.output_format,
    )

    # (b) M vs r, unseeded
    cfg_b = replace(config, n_seed=0.0,
                    r_list=[round(v, 10) for v in np.arange(3.0, 5.51, 0.25)])
    status |= cmd_r_scan(cfg_b, fig_dir, stem="m_vs_r_unseeded")

    # (c) M vs r, seeded
    cfg_c = replace(config, r_list=[round(v, 10) for v in np.arange(1.0, 4.01, 0.25)])
    status |= cmd_r_scan(cfg_c, fig_dir, stem="m_vs_r_seeded")

    # (d) fringe, per-trajectory scatter and M vs phi at the working point
    status |= cmd_phi_sweep(config, fig_dir, stem="phi_sweep_working_point")
    status |= cmd_scatter(config, fig_dir, stem="scatter_working_point")
    return status


def _drift_ok(*drifts) -> bool:
    return all(d <= DRIFT_LIMIT for d in drifts)


def _error_record(kind: str, message: str) -> str:
    return json.dumps({"error": kind, "message": message})


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file, or a summary JSON "
                                         "with an embedded config")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--seed", type=int, help="override master_seed")
    common.add_argument("--threads", type=int, help="trajectory worker threads")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), help="data file format")

    parser = argparse.ArgumentParser(
        prog="atomlight",
        description="Monte Carlo phase-space simulation of an atom interferometer "
                    "with homodyne read-out of the beam-splitting light.",
    )
    parser.add_argument("--version", action="version", version=f"atomlight {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("phi-sweep", parents=[common],
                   help="sensitivity across the interferometer phase grid")
    sub.add_parser("r-scan", parents=[common],
                   help="M at phi = pi/2 across r_list, with the optimum")
    sub.add_parser("scatter", parents=[common],
                   help="per-trajectory signals at a few phases")
    sub.add_parser("feasibility", parents=[common],
                   help="geometric capture fraction and rate-ratio estimates")
    sub.add_parser("analytic-table", parents=[common],
                   help="closed-form undepleted-pump predictions per r")
    sub.add_parser("figures", parents=[common],
                   help="run the bundled figure recipes")
    return parser


def _resolve_mapping(args) -> dict:
    mapping = {}
    if args.config:
        mapping.update(load_config_file(args.config))
    for item in args.set:
        mapping.update(parse_assignments([item], source="--set"))
    if args.seed is not None:
        mapping["master_seed"] = args.seed
    if args.threads is not None:
        mapping["threads"] = args.threads
    if args.format is not None:
        mapping["output_format"] = args.format
    return mapping


def _resolve_setup(args) -> PhysicalSetup:
    mapping = {}
    if args.config:
        mapping.update(load_config_file(args.config, keys=FEASIBILITY_KEYS))
    for item in args.set:
        mapping.update(parse_assignments([item], source="--set", keys=FEASIBILITY_KEYS))
    return PhysicalSetup(**{k: float(v) for k, v in mapping.items()})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--figures" in argv:  # common-flag spelling of the figures verb
        argv.remove("--figures")
        verbs = ("phi-sweep", "r-scan", "scatter", "feasibility", "analytic-table")
        if argv and argv[0] in verbs:
            print(_error_record("config", f"--figures conflicts with the "
                                          f"{argv[0]!r} command"), file=sys.stderr)
            return 2
        if not argv or argv[0] != "figures":
            argv.insert(0, "figures")
    args = _build_parser().parse_args(argv)
    out_dir = Path(args.out)

    try:
        if args.command == "feasibility":
            return cmd_feasibility(_resolve_setup(args), out_dir)
        config = make_config(_resolve_mapping(args))
        if args.command == "phi-sweep":
            return cmd_phi_sweep(config, out_dir)
        if args.command == "r-scan":
            return cmd_r_scan(config, out_dir)
        if args.command == "scatter":
            return cmd_scatter(config, out_dir)
        if args.command == "analytic-table":
            return cmd_analytic_table(config, out_dir)
        if args.command == "figures":
            return cmd_figures(config, out_dir)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(_error_record("config", str(exc)), file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(_error_record("config", str(exc)), file=sys.stderr)
        return 2
    except OSError as exc:
        print(_error_record("io", str(exc)), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
