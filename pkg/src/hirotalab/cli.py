"""Command-line front door: config ingestion, verification commands, data emission.

Commands

  sample          write per-time field CSVs (optionally gnuplot scripts)
  residual        substitute the analytic solution into the coupled system
  zero-curvature  compatibility residual ladders for the 3x3 pair
  rh-check        factorization identities: kernels, symmetry, product, rebuild
  scatter         scattering matrix closure on the sampled t=0 fields
  propagate       pseudo-spectral evolution against the analytic solution

Exit codes: 0 success, 1 validation failure, 2 verification failure, 3 I/O failure.

Every CSV is written with 17 significant digits, '.' decimal separator and
'\n' line endings, so identical configs produce byte-identical files.
Report files carry one `name,value,threshold,pass` row per check; band
thresholds are printed as `lo..hi`.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .core import (
    ComplexField,
    Grid1D,
    SpectralData,
    SpectralDatum,
    SystemParams,
    ValidationError,
    trapezoid_mass,
    validate,
)
from . import laxpair, nsoliton, propagator, residual, rh

__all__ = ["RunConfig", "load_config", "main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_IO = 3


DEFAULT_TOLERANCES = {
    "residual_order_deficit": 0.2,
    "zc_order2_band": [3.5, 4.5],
    "zc_order4_band": [14.0, 18.0],
    "kernel": 1e-10,
    "symmetry": 1e-12,
    "product": 1e-10,
    "reconstruct": 1e-13,
    "s11_zero": 1e-4,
    "reflection": 1e-4,
    "det_s": 1e-8,
    "propagate_linf": 1e-5,
    "mass_drift": 1e-8,
}

DEFAULT_RESIDUAL = {"order": 2, "spacings": [0.1, 0.05, 0.025], "t_center": 0.5}
DEFAULT_ZC = {
    "x": 2.0,
    "t": 0.5,
    "order2_spacings": [2e-2, 1e-2, 5e-3],
    "order4_spacings": [0.2, 0.1, 0.05],
}
DEFAULT_RH = {"x": 0.7, "t": 0.4, "n_symmetry": 20, "n_product": 40, "seed": 20260810}
DEFAULT_SCATTER = {
    "x_min": -60.0,
    "x_max": 60.0,
    "spacing": 0.01,
    "real_zetas": [0.3, 0.5, 0.7, 0.9, 1.1],
    "tail_threshold": 1e-5,
}
DEFAULT_PROPAGATE = {
    "length": 80.0,
    "n": 1024,
    "dt": 1e-3,
    "t_final": 1.0,
    "snapshots": [1.0],
    "edge_threshold": 1e-9,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration shared by all commands."""

    params: SystemParams
    spectral: SpectralData
    grid: Grid1D
    times: tuple[float, ...]
    output_dir: str
    emit_plots: bool
    residual: dict
    zero_curvature: dict
    rh_check: dict
    scatter: dict
    propagate: dict
    tolerances: dict = field(default_factory=dict)


class ConfigError(ValueError):
    pass


def _complex_of(node, where: str) -> complex:
    if isinstance(node, (int, float)):
        return complex(node)
    if isinstance(node, dict) and set(node) <= {"re", "im"}:
        return complex(float(node.get("re", 0.0)), float(node.get("im", 0.0)))
    raise ConfigError(f"{where}: expected a number or {{\"re\": ..., \"im\": ...}}")


def _merged(defaults: dict, user) -> dict:
    out = dict(defaults)
    if user:
        if not isinstance(user, dict):
            raise ConfigError("command option sections must be objects")
        out.update(user)
    return out


def parse_config(doc: dict) -> RunConfig:
    try:
        pnode = doc["params"]
        params = SystemParams(
            epsilon=float(pnode["epsilon"]), k1=float(pnode["k1"]), a2=float(pnode["a2"])
        )
        data = []
        for i, snode in enumerate(doc["spectral"]):
            data.append(
                SpectralDatum(
                    zeta=_complex_of(snode["zeta"], f"spectral[{i}].zeta"),
                    alpha=_complex_of(snode["alpha"], f"spectral[{i}].alpha"),
                    beta=_complex_of(snode["beta"], f"spectral[{i}].beta"),
                    gamma=_complex_of(snode["gamma"], f"spectral[{i}].gamma"),
                )
            )
        spectral = SpectralData(tuple(data))
        gnode = doc["grid"]
        grid = Grid1D(float(gnode["x_min"]), float(gnode["x_max"]), int(gnode["nx"]))
        times = tuple(float(t) for t in doc.get("times", []))
    except KeyError as exc:
        raise ConfigError(f"missing config field {exc}") from exc
    validate(spectral, params)
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(doc.get("tolerances", {}))
    return RunConfig(
        params=params,
        spectral=spectral,
        grid=grid,
        times=times,
        output_dir=str(doc.get("output_dir", "out")),
        emit_plots=bool(doc.get("emit_plots", False)),
        residual=_merged(DEFAULT_RESIDUAL, doc.get("residual")),
        zero_curvature=_merged(DEFAULT_ZC, doc.get("zero_curvature")),
        rh_check=_merged(DEFAULT_RH, doc.get("rh_check")),
        scatter=_merged(DEFAULT_SCATTER, doc.get("scatter")),
        propagate=_merged(DEFAULT_PROPAGATE, doc.get("propagate")),
        tolerances=tol,
    )


def load_config(path: str | None) -> RunConfig:
    """Parse and validate a config file; None loads the bundled default."""
    if path is None:
        text = resources.files("hirotalab.data").joinpath("default_config.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(doc)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


class Report:
    """Accumulates name,value,threshold,pass rows; writes deterministic CSV."""

    def __init__(self) -> None:
        self.rows: list[tuple[str, float, str, bool]] = []

    def check_le(self, name: str, value: float, threshold: float) -> bool:
        ok = bool(value <= threshold)
        self.rows.append((name, value, _fmt(threshold), ok))
        return ok

    def check_ge(self, name: str, value: float, threshold: float) -> bool:
        ok = bool(value >= threshold)
        self.rows.append((name, value, _fmt(threshold), ok))
        return ok

    def check_band(self, name: str, value: float, lo: float, hi: float) -> bool:
        ok = bool(lo <= value <= hi)
        self.rows.append((name, value, f"{_fmt(lo)}..{_fmt(hi)}", ok))
        return ok

    def fail(self, name: str, note: str) -> bool:
        self.rows.append((name, float("nan"), note, False))
        return False

    @property
    def all_pass(self) -> bool:
        return all(ok for _, _, _, ok in self.rows)

    def write(self, path: Path, quiet: bool) -> None:
        lines = ["name,value,threshold,pass"]
        for name, value, threshold, ok in self.rows:
            lines.append(f"{name},{_fmt(value)},{threshold},{'true' if ok else 'false'}")
        _write_text(path, "\n".join(lines) + "\n")
        if not quiet:
            for name, value, threshold, ok in self.rows:
                print(f"  [{'PASS' if ok else 'FAIL'}] {name} = {value:.6g} (threshold {threshold})")


def _field_csv(q1: ComplexField, q2: ComplexField) -> str:
    xs = q1.grid.points()
    lines = ["x,re_q1,im_q1,abs_q1,re_q2,im_q2,abs_q2"]
    for i in range(q1.grid.nx):
        a, b = q1.values[i], q2.values[i]
        lines.append(
            ",".join(
                _fmt(v)
                for v in (xs[i], a.real, a.imag, abs(a), b.real, b.imag, abs(b))
            )
        )
    return "\n".join(lines) + "\n"


def _time_tag(t: float) -> str:
    return f"{t:g}"


def cmd_sample(cfg: RunConfig, out: Path, quiet: bool) -> int:
    pairs = nsoliton.sample(cfg.spectral, cfg.params, cfg.grid, cfg.times)
    names = []
    for (q1, q2), t in zip(pairs, cfg.times):
        name = f"fields_t{_time_tag(t)}.csv"
        _write_text(out / name, _field_csv(q1, q2))
        names.append(name)
        if not quiet:
            print(f"  wrote {name}")
    if cfg.emit_plots and names:
        _emit_plot_scripts(cfg, out, names)
    return EXIT_OK


def _emit_plot_scripts(cfg: RunConfig, out: Path, names: list[str]) -> None:
    slice_lines = [
        "set datafile separator ','",
        "set xlabel 'x'",
        "set key outside",
        "set terminal pngcairo size 900,600",
    ]
    for col, label in ((4, "abs_q1"), (7, "abs_q2"), (2, "re_q1"), (3, "im_q1")):
        png = f"slices_{label}.png"
        slice_lines.append(f"set output '{png}'")
        slice_lines.append(f"set ylabel '{label}'")
        plots = ", ".join(
            f"'{name}' using 1:{col} with lines title 't={_time_tag(t)}'"
            for name, t in zip(names, cfg.times)
        )
        slice_lines.append(f"plot {plots}")
    _write_text(out / "plot_slices.gp", "\n".join(slice_lines) + "\n")

    surf_rows = ["# x t abs_q1 abs_q2 re_q1 re_q2 im_q1 im_q2"]
    pairs = nsoliton.sample(cfg.spectral, cfg.params, cfg.grid, cfg.times)
    xs = cfg.grid.points()
    for (q1, q2), t in zip(pairs, cfg.times):
        for i in range(cfg.grid.nx):
            a, b = q1.values[i], q2.values[i]
            surf_rows.append(
                " ".join(
                    _fmt(v)
                    for v in (xs[i], t, abs(a), abs(b), a.real, b.real, a.imag, b.imag)
                )
            )
        surf_rows.append("")
    _write_text(out / "surface.dat", "\n".join(surf_rows) + "\n")
    surf_lines = [
        "set xlabel 'x'",
        "set ylabel 't'",
        "set terminal pngcairo size 900,600",
        "set hidden3d",
    ]
    for col, label in ((3, "abs_q1"), (4, "abs_q2"), (5, "re_q1"), (7, "im_q1")):
        surf_lines.append(f"set output 'surface_{label}.png'")
        surf_lines.append(f"splot 'surface.dat' using 1:2:{col} with lines title '{label}'")
    _write_text(out / "plot_surface.gp", "\n".join(surf_lines) + "\n")


def cmd_residual(cfg: RunConfig, out: Path, quiet: bool) -> int:
    opts = cfg.residual
    order = int(opts["order"])
    spacings = tuple(float(h) for h in opts["spacings"])
    rep1, rep2 = residual.soliton_residual_ladder(
        cfg.spectral,
        cfg.params,
        cfg.grid.x_min,
        cfg.grid.x_max,
        spacings,
        float(opts["t_center"]),
        order,
    )
    ladder_lines = ["h,sup_norm_q1,sup_norm_q2"]
    for h, n1, n2 in zip(rep1.spacings, rep1.sup_norms, rep2.sup_norms):
        ladder_lines.append(f"{_fmt(h)},{_fmt(n1)},{_fmt(n2)}")
    _write_text(out / "residual_ladder.csv", "\n".join(ladder_lines) + "\n")

    report = Report()
    floor = order - float(cfg.tolerances["residual_order_deficit"])
    report.check_ge("residual_order_q1", rep1.estimated_order, floor)
    report.check_ge("residual_order_q2", rep2.estimated_order, floor)
    report.write(out / "residual_report.csv", quiet)
    return EXIT_OK if report.all_pass else EXIT_VERIFICATION


def cmd_zero_curvature(cfg: RunConfig, out: Path, quiet: bool) -> int:
    opts = cfg.zero_curvature
    x, t = float(opts["x"]), float(opts["t"])
    report = Report()
    for order, key, band_key in (
        (2, "order2_spacings", "zc_order2_band"),
        (4, "order4_spacings", "zc_order4_band"),
    ):
        spacings = [float(h) for h in opts[key]]
        lo, hi = (float(v) for v in cfg.tolerances[band_key])
        for iz, zeta in enumerate(laxpair.default_zeta_samples()):
            sups = [
                float(
                    np.abs(
                        laxpair.zero_curvature_residual(
                            cfg.spectral, cfg.params, zeta, x, t, h, order
                        )
                    ).max()
                )
                for h in spacings
            ]
            for j in range(len(sups) - 1):
                ratio = sups[j] / sups[j + 1] if sups[j + 1] > 0 else float("inf")
                report.check_band(f"zc_o{order}_z{iz}_ratio{j}", ratio, lo, hi)
    report.write(out / "zero_curvature_report.csv", quiet)
    return EXIT_OK if report.all_pass else EXIT_VERIFICATION


def cmd_rh_check(cfg: RunConfig, out: Path, quiet: bool) -> int:
    opts = cfg.rh_check
    x, t = float(opts["x"]), float(opts["t"])
    tol = cfg.tolerances
    rng = np.random.default_rng(int(opts["seed"]))
    data, params = cfg.spectral, cfg.params
    report = Report()

    kr = rh.kernel_report(data, params, x, t)
    report.check_le("kernel_max", kr.max_norm, float(tol["kernel"]))

    def far_from_poles(z: complex) -> bool:
        zs = data.zetas()
        return (
            np.abs(z - zs).min() > 1e-3 and np.abs(z - np.conj(zs)).min() > 1e-3
            if len(data)
            else True
        )

    sym_worst = 0.0
    count = 0
    while count < int(opts["n_symmetry"]):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, -0.05))
        if not far_from_poles(z):
            continue
        lhs = np.conj(rh.rh_plus(np.conj(z), data, params, x, t).T)
        rhs = rh.rh_minus(z, data, params, x, t)
        sym_worst = max(sym_worst, float(np.abs(lhs - rhs).max()))
        count += 1
    report.check_le("symmetry_max", sym_worst, float(tol["symmetry"]))

    prod_worst = 0.0
    count = 0
    while count < int(opts["n_product"]):
        if count < int(opts["n_product"]) // 2:
            z = complex(rng.uniform(-2, 2), 0.0)
        else:
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if not far_from_poles(z):
            continue
        prod = rh.rh_minus(z, data, params, x, t) @ rh.rh_plus(z, data, params, x, t)
        prod_worst = max(prod_worst, float(np.abs(prod - np.eye(3)).max()))
        count += 1
    report.check_le("product_max", prod_worst, float(tol["product"]))

    rec_worst = 0.0
    for xx in np.linspace(cfg.grid.x_min, cfg.grid.x_max, 9):
        qr = rh.reconstruct(data, params, float(xx), t)
        qe = nsoliton.evaluate(data, params, float(xx), t)
        rec_worst = max(rec_worst, abs(qr[0] - qe[0]), abs(qr[1] - qe[1]))
    report.check_le("reconstruct_max", rec_worst, float(tol["reconstruct"]))

    report.write(out / "rh_report.csv", quiet)
    return EXIT_OK if report.all_pass else EXIT_VERIFICATION


def cmd_scatter(cfg: RunConfig, out: Path, quiet: bool) -> int:
    opts = cfg.scatter
    tol = cfg.tolerances
    h = float(opts["spacing"])
    nx = int(round((float(opts["x_max"]) - float(opts["x_min"])) / h)) + 1
    grid = Grid1D(float(opts["x_min"]), float(opts["x_min"]) + (nx - 1) * h, nx)
    (q1, q2), = nsoliton.sample(cfg.spectral, cfg.params, grid, [0.0])
    tail = float(opts["tail_threshold"])

    report = Report()
    for i, d in enumerate(cfg.spectral):
        s = rh.direct_scattering(q1, q2, complex(d.zeta), cfg.params, tail_threshold=tail)
        report.check_le(f"s11_zero_{i}", abs(s[0, 0]), float(tol["s11_zero"]))
    det_worst = 0.0
    refl_worst = 0.0
    for zr in opts["real_zetas"]:
        s = rh.direct_scattering(q1, q2, complex(float(zr)), cfg.params, tail_threshold=tail)
        refl_worst = max(refl_worst, abs(s[1, 0]), abs(s[2, 0]))
        det_worst = max(det_worst, abs(np.linalg.det(s) - 1.0))
    report.check_le("reflection_max", refl_worst, float(tol["reflection"]))
    report.check_le("det_s_max_err", det_worst, float(tol["det_s"]))
    report.write(out / "scatter_report.csv", quiet)
    return EXIT_OK if report.all_pass else EXIT_VERIFICATION


def cmd_propagate(cfg: RunConfig, out: Path, quiet: bool) -> int:
    opts = cfg.propagate
    tol = cfg.tolerances
    sgrid = propagator.SpectralGrid(float(opts["length"]), int(opts["n"]))
    xs = sgrid.points()
    grid = Grid1D(float(xs[0]), float(xs[-1]), sgrid.n)
    t_final = float(opts["t_final"])
    dt = float(opts["dt"])
    snaps = sorted(set(float(s) for s in opts["snapshots"]) | {t_final})

    def analytic(tt: float) -> tuple[ComplexField, ComplexField]:
        av1, av2 = nsoliton._fields_batch(cfg.spectral, cfg.params, xs, tt)
        return ComplexField(grid, tt, av1), ComplexField(grid, tt, av2)

    q10, q20 = analytic(0.0)
    report = Report()
    try:
        evolved = propagator.evolve(
            q10, q20, cfg.params, t_final, dt, snaps,
            edge_threshold=float(opts["edge_threshold"]),
        )
    except (propagator.BlowupError, propagator.EdgeDecayError, propagator.StabilityBoundError) as exc:
        report.fail("propagation_completed", type(exc).__name__)
        report.write(out / "propagation_report.csv", quiet)
        if not quiet:
            print(f"  propagation aborted: {exc}")
        return EXIT_VERIFICATION

    table = ["t,linf_error_q1,linf_error_q2"]
    final_err = 0.0
    for (e1, e2), tt in zip(evolved, snaps):
        a1, a2 = analytic(tt)
        err1 = float(np.abs(e1.values - a1.values).max())
        err2 = float(np.abs(e2.values - a2.values).max())
        table.append(f"{_fmt(tt)},{_fmt(err1)},{_fmt(err2)}")
        _write_text(out / f"snapshot_t{_time_tag(tt)}.csv", _field_csv(e1, e2))
        if tt == snaps[-1]:
            final_err = max(err1, err2)
    _write_text(out / "propagation_table.csv", "\n".join(table) + "\n")

    mass0 = trapezoid_mass(q10, q20)
    mass1 = trapezoid_mass(*evolved[-1])
    drift = abs(mass1 - mass0) / mass0 if mass0 > 0 else 0.0
    report.check_le("final_linf", final_err, float(tol["propagate_linf"]))
    report.check_le("mass_drift", drift, float(tol["mass_drift"]))
    report.write(out / "propagation_report.csv", quiet)
    return EXIT_OK if report.all_pass else EXIT_VERIFICATION


_COMMANDS = {
    "sample": cmd_sample,
    "residual": cmd_residual,
    "zero-curvature": cmd_zero_curvature,
    "rh-check": cmd_rh_check,
    "scatter": cmd_scatter,
    "propagate": cmd_propagate,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hirotalab",
        description="Verification laboratory for coupled-system soliton solutions",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", default=None, help="path to a JSON config (default: bundled)")
    parser.add_argument("--out", default=None, help="output directory (default: config output_dir)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except (ConfigError, ValidationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    out = Path(args.out) if args.out is not None else Path(cfg.output_dir)
    if not args.quiet:
        print(f"{args.command}: N = {len(cfg.spectral)}, out = {out}")
    try:
        return _COMMANDS[args.command](cfg, out, args.quiet)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ValueError, ArithmeticError) as exc:
        print(f"verification could not run: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
