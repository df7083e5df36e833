"""Command-line interface: synthesize, pattern, verify, figures.

All numeric file outputs are deterministic for a fixed config and seed; CSV
values carry 9 significant digits and JSON floats use shortest round-trip
formatting.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .array_model import static_code_pattern
from .config import ConfigError, RunConfig, load_config
from .modulation import HarmonicSpectrum, ModulationConfig, Schedule, first_harmonic, schedule_to_bitmask
from .patterns import directivity, harmonic_pattern, hpbw, pointing, sll, static_pattern
from .plots import render_cut_figure
from .synthesis import ScheduleSet, synthesize_schedules
from .timedomain import compare_spectra, extract_harmonics_dft, sample_baseband, sweep_measurement

ORACLE_THRESHOLD = 1e-12
ROUTE_THRESHOLD = 1e-9
FIGURE_ANGLES_DEG = (0.0, 15.0, 30.0, 45.0)
FIGURE_MODES = ("static", "phase-only", "amp-phase")


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True))
        fh.write("\n")


def _write_cut_csv(path: str, theta_deg: np.ndarray, power_db: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("theta_deg,power_db\n")
        for t, p in zip(theta_deg, power_db):
            fh.write(f"{_fmt(t)},{_fmt(p)}\n")


# schedule file round trip ------------------------------------------------------


def _schedule_ticks(schedule: Schedule, ticks_per_period: int) -> tuple[int, int, int]:
    n = ticks_per_period
    return (
        int(round(schedule.tau_on / schedule.period * n)),
        int(round(schedule.tau_off / schedule.period * n)),
        int(round(schedule.delay / schedule.period * n)),
    )


def _schedules_document(schedule_set: ScheduleSet, cfg: RunConfig) -> dict:
    mc = schedule_set.config
    elements = []
    for r in range(schedule_set.rows):
        for c in range(schedule_set.cols):
            s = schedule_set.schedule(r, c)
            ton, toff, ud = _schedule_ticks(s, mc.ticks_per_period)
            a1 = first_harmonic(s, mc)
            elements.append(
                {
                    "row": r,
                    "col": c,
                    "tau_on_ticks": ton,
                    "tau_off_ticks": toff,
                    "delay_ticks": ud,
                    "alpha1_mag": abs(a1),
                    "alpha1_phase_rad": float(np.angle(a1)),
                }
            )
    return {
        "config": {
            "rows": schedule_set.rows,
            "cols": schedule_set.cols,
            "spacing_wavelengths": cfg.spacing_wavelengths,
            "carrier_hz": mc.carrier_hz,
            "modulation_hz": mc.modulation_hz,
            "clock_hz": mc.clock_hz,
            "ticks_per_period": mc.ticks_per_period,
        },
        "provenance": dict(schedule_set.provenance),
        "elements": elements,
    }


def load_schedule_set(path: str) -> tuple[ScheduleSet, dict]:
    """Rebuild a ScheduleSet from a schedules.json document."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load schedules from {path}: {exc}") from exc
    c = doc["config"]
    mc = ModulationConfig(
        carrier_hz=c["carrier_hz"], modulation_hz=c["modulation_hz"], clock_hz=c["clock_hz"]
    )
    n = mc.ticks_per_period
    period = mc.period_s
    grid = [[None] * c["cols"] for _ in range(c["rows"])]
    for e in doc["elements"]:
        grid[e["row"]][e["col"]] = Schedule(
            tau_on=e["tau_on_ticks"] * period / n,
            tau_off=e["tau_off_ticks"] * period / n,
            delay=e["delay_ticks"] * period / n,
            period=period,
        )
    if any(s is None for row in grid for s in row):
        raise ConfigError(f"schedules file {path} does not cover the full grid")
    schedule_set = ScheduleSet(
        schedules=tuple(tuple(row) for row in grid),
        config=mc,
        provenance=dict(doc.get("provenance", {})),
    )
    return schedule_set, doc["config"]


# commands ----------------------------------------------------------------------


def _synthesize_set(cfg: RunConfig, mode: str | None = None, theta_deg: float | None = None) -> ScheduleSet:
    mode = cfg.mode if mode is None else mode
    if mode == "static":
        raise ConfigError("mode 'static' has no switching schedules; use the pattern or figures command")
    theta_deg = cfg.theta_deg if theta_deg is None else theta_deg
    schedule_set = synthesize_schedules(
        cfg.geometry(),
        cfg.excitation(),
        cfg.sll_db,
        float(np.radians(theta_deg)),
        cfg.scan_phi(),
        mode,
        cfg.modulation_config(),
    )
    # record the commanded angles exactly, not a radians round trip
    schedule_set.provenance["scan_theta_deg"] = float(theta_deg)
    schedule_set.provenance["scan_phi_deg"] = float(cfg.phi_deg)
    return schedule_set


def run_synthesize(cfg: RunConfig) -> dict:
    schedule_set = _synthesize_set(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    mc = schedule_set.config
    hex_digits = (mc.ticks_per_period + 3) // 4

    schedules_path = os.path.join(cfg.out_dir, "schedules.json")
    _write_json(schedules_path, _schedules_document(schedule_set, cfg))

    table_path = os.path.join(cfg.out_dir, "fpga_table.txt")
    with open(table_path, "w") as fh:
        for r in range(schedule_set.rows):
            for c in range(schedule_set.cols):
                mask = schedule_to_bitmask(schedule_set.schedule(r, c), mc)
                fh.write(f"{r} {c} 0x{mask:0{hex_digits}X}\n")
    return {"schedules": schedules_path, "fpga_table": table_path}


def _cut_pattern(cfg: RunConfig, mode: str, theta_deg: float, grid, schedule_set: ScheduleSet | None = None):
    """Far-field cut for one mode/angle; returns (pattern, schedule_set|None)."""
    geometry = cfg.geometry()
    excitation = cfg.excitation()
    model = cfg.element_model()
    if mode == "static":
        code = static_code_pattern(geometry, float(np.radians(theta_deg)), cfg.scan_phi())
        return static_pattern(geometry, excitation, code, model, grid), None
    if schedule_set is None:
        schedule_set = _synthesize_set(cfg, mode=mode, theta_deg=theta_deg)
    k_max = max(1, abs(cfg.harmonic))
    spectrum = schedule_set.harmonic_spectrum(k_max)
    pattern = harmonic_pattern(geometry, excitation, spectrum, model, grid, cfg.harmonic)
    return pattern, schedule_set


def run_pattern(cfg: RunConfig, schedules_path: str | None = None) -> dict:
    os.makedirs(cfg.out_dir, exist_ok=True)
    schedule_set = None
    if schedules_path is not None:
        if cfg.mode == "static":
            raise ConfigError("--schedules cannot be combined with mode 'static'")
        schedule_set, file_cfg = load_schedule_set(schedules_path)
        if (file_cfg["rows"], file_cfg["cols"]) != (cfg.rows, cfg.cols):
            raise ConfigError(
                f"schedules file is {file_cfg['rows']}x{file_cfg['cols']} "
                f"but the config asks for {cfg.rows}x{cfg.cols}"
            )

    cut = cfg.cut_grid()
    pattern, schedule_set = _cut_pattern(cfg, cfg.mode, cfg.theta_deg, cut, schedule_set)
    hemi_pattern, _ = _cut_pattern(cfg, cfg.mode, cfg.theta_deg, cfg.hemisphere_grid(), schedule_set)

    theta_deg = cut.theta_deg()
    power_db = pattern.power_db()
    csv_path = os.path.join(cfg.out_dir, "pattern_cut.csv")
    _write_cut_csv(csv_path, theta_deg, power_db)

    if cfg.mode == "static":
        harmonic_hz = cfg.carrier_hz
    else:
        harmonic_hz = cfg.modulation_config().harmonic_frequency(cfg.harmonic)
    metrics = {
        "sll_db": sll(pattern),
        "hpbw_deg": hpbw(pattern),
        "pointing_deg": pointing(pattern),
        "directivity_dbi": directivity(hemi_pattern),
        "harmonic_hz": harmonic_hz,
    }
    metrics_path = os.path.join(cfg.out_dir, "metrics.json")
    _write_json(metrics_path, metrics)

    png_path = os.path.join(cfg.out_dir, "pattern_cut.png")
    label = cfg.mode
    render_cut_figure(
        png_path,
        [(label, theta_deg, power_db)],
        f"{label} scan {cfg.theta_deg:g} deg, harmonic {cfg.harmonic:+d}",
    )
    return {"pattern_csv": csv_path, "metrics": metrics_path, "figure": png_path, "metrics_values": metrics}


def _random_tick_schedule(rng: np.random.Generator, mc) -> Schedule:
    n = mc.ticks_per_period
    a, b = sorted(rng.integers(0, n + 1, size=2).tolist())
    u = int(rng.integers(0, n))
    period = mc.period_s
    return Schedule(a * period / n, b * period / n, u * period / n, period)


def run_verify(cfg: RunConfig, inject_bug: bool = False) -> tuple[dict, bool]:
    os.makedirs(cfg.out_dir, exist_ok=True)
    mc = cfg.modulation_config()
    rng = np.random.default_rng(cfg.seed)
    n = cfg.verify_schedules
    k_max = cfg.verify_k_max

    report: dict = {"seed": cfg.seed, "num_schedules": n, "k_max": k_max}
    if n == 0:
        report["warning"] = "no random schedules checked; oracle comparison is vacuous"
        oracle_err = 0.0
        failing = None
    else:
        grid = tuple(tuple(_random_tick_schedule(rng, mc) for _ in range(n)) for _ in range(1))
        schedule_set = ScheduleSet(schedules=grid, config=mc, provenance={"mode": "random", "quantized": True})
        analytic = schedule_set.harmonic_spectrum(k_max)
        record = sample_baseband(schedule_set, mc.ticks_per_period)
        oracle = extract_harmonics_dft(record, k_max)
        coeffs = analytic.coefficients
        if inject_bug:
            coeffs = coeffs.copy()
            coeffs[:, :, k_max + 1] *= -1.0  # negative control: flip the +1st harmonic
            analytic = HarmonicSpectrum(k_max=k_max, coefficients=coeffs)
        oracle_err = compare_spectra(analytic, oracle)
        failing = None
        if oracle_err > ORACLE_THRESHOLD:
            diff = np.abs(analytic.coefficients - oracle.coefficients)
            _, c, _ = np.unravel_index(int(np.argmax(diff)), diff.shape)
            ton, toff, ud = _schedule_ticks(schedule_set.schedule(0, int(c)), mc.ticks_per_period)
            failing = {
                "index": int(c),
                "tau_on_ticks": ton,
                "tau_off_ticks": toff,
                "delay_ticks": ud,
            }

    report["oracle"] = {
        "max_abs_error": oracle_err,
        "threshold": ORACLE_THRESHOLD,
        "pass": oracle_err <= ORACLE_THRESHOLD,
        "failing_schedule": failing,
    }

    # route equivalence: emulated sweep vs analytic pattern, four scan angles
    route_mode = cfg.mode if cfg.mode != "static" else "phase-only"
    geometry = cfg.geometry()
    excitation = cfg.excitation()
    model = cfg.element_model()
    grid_cut = cfg.cut_grid()
    route_err = 0.0
    for theta_deg in FIGURE_ANGLES_DEG:
        schedule_set = _synthesize_set(cfg, mode=route_mode, theta_deg=theta_deg)
        spectrum = schedule_set.harmonic_spectrum(max(1, abs(cfg.harmonic)))
        pat = harmonic_pattern(geometry, excitation, spectrum, model, grid_cut, cfg.harmonic)
        swp = sweep_measurement(schedule_set, geometry, excitation, model, grid_cut, cfg.harmonic)
        scale = pat.peak
        route_err = max(route_err, float(np.max(np.abs(swp.magnitude() - pat.magnitude())) / scale))
    report["route"] = {
        "angles_deg": list(FIGURE_ANGLES_DEG),
        "mode": route_mode,
        "harmonic": cfg.harmonic,
        "max_rel_error": route_err,
        "threshold": ROUTE_THRESHOLD,
        "pass": route_err <= ROUTE_THRESHOLD,
    }

    ok = report["oracle"]["pass"] and report["route"]["pass"]
    report["pass"] = ok
    _write_json(os.path.join(cfg.out_dir, "verify_report.json"), report)
    return report, ok


def run_figures(cfg: RunConfig) -> dict:
    os.makedirs(cfg.out_dir, exist_ok=True)
    grid = cfg.cut_grid()
    theta_deg = grid.theta_deg()
    entries = []
    figures = []
    for angle in FIGURE_ANGLES_DEG:
        curves = []
        for mode in FIGURE_MODES:
            pattern, _ = _cut_pattern(cfg, mode, angle, grid)
            power_db = pattern.power_db()
            name = f"cut_theta{angle:02.0f}_{mode}.csv"
            _write_cut_csv(os.path.join(cfg.out_dir, name), theta_deg, power_db)
            entries.append({"theta_deg": angle, "mode": mode, "csv": name})
            curves.append((mode, theta_deg, power_db))
        png = f"cut_theta{angle:02.0f}.png"
        render_cut_figure(os.path.join(cfg.out_dir, png), curves, f"scan {angle:g} deg")
        figures.append({"theta_deg": angle, "png": png})
    index = {
        "angles_deg": list(FIGURE_ANGLES_DEG),
        "modes": list(FIGURE_MODES),
        "cuts": entries,
        "figures": figures,
    }
    index_path = os.path.join(cfg.out_dir, "index.json")
    _write_json(index_path, index)
    return {"index": index_path, "cuts": len(entries), "figures": len(figures)}


# argument parsing ----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stcbeam",
        description="Space-time-coded metasurface beamforming toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--theta", type=float, help="scan angle in degrees")
        p.add_argument("--mode", choices=("static", "phase-only", "amp-phase"), help="weighting mode")
        p.add_argument("--sll", type=float, help="design sidelobe level in dB (negative)")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--out", help="output directory")

    common(sub.add_parser("synthesize", help="emit schedules.json and fpga_table.txt"))
    p_pattern = sub.add_parser("pattern", help="emit pattern_cut.csv and metrics.json")
    common(p_pattern)
    p_pattern.add_argument("--schedules", help="reuse a schedules.json instead of synthesizing")
    p_verify = sub.add_parser("verify", help="check analytic harmonics against the time-domain oracle")
    common(p_verify)
    p_verify.add_argument(
        "--inject-bug",
        action="store_true",
        help="negative control: perturb the analytic first harmonic so the check must fail",
    )
    common(sub.add_parser("figures", help="emit comparison cut CSVs and figures for four scan angles"))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        "theta_deg": args.theta,
        "mode": args.mode,
        "sll_db": args.sll,
        "seed": args.seed,
        "out_dir": args.out,
    }
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "synthesize":
            paths = run_synthesize(cfg)
            print(f"wrote {paths['schedules']} and {paths['fpga_table']}")
            return 0
        if args.command == "pattern":
            out = run_pattern(cfg, schedules_path=args.schedules)
            m = out["metrics_values"]
            print(
                f"wrote {out['pattern_csv']}  "
                f"(sll {m['sll_db']:.2f} dB, hpbw {m['hpbw_deg']:.2f} deg, "
                f"pointing {m['pointing_deg']:.2f} deg)"
            )
            return 0
        if args.command == "verify":
            report, ok = run_verify(cfg, inject_bug=args.inject_bug)
            oracle = report["oracle"]
            route = report["route"]
            print(
                f"oracle max error {oracle['max_abs_error']:.3e} "
                f"(threshold {oracle['threshold']:.0e}), "
                f"route max error {route['max_rel_error']:.3e} "
                f"(threshold {route['threshold']:.0e}): "
                + ("PASS" if ok else "FAIL")
            )
            return 0 if ok else 1
        out = run_figures(cfg)
        print(f"wrote {out['cuts']} cut files and {out['figures']} figures; index at {out['index']}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
