"""Config-driven command line interface.

One JSON file describes one run:

    gqrm run.json [--set KEY=VALUE ...]

The file's "command" selects among: reduce (two-level reduction of a 1D
potential), spectrum (coupling sweep to CSV, optional figure), verify-gauge
(gauge-invariance check bundle), formfactor (beyond-dipole suppression
table), wilson-check (transporter transformation law).  ``--set`` overrides
dotted config paths, e.g. ``--set sweep.cutoff.n_max=512``.

Exit codes: 0 ok, 2 bad config, 3 validity warning (result still written),
4 solver failure, 5 unconverged sweep rows (CSV still written), 6 failed
gauge check.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from typing import Optional

import numpy as np

from . import __version__
from .gauge import CosineProfile, SampledProfile, UniformProfile
from .models import (
    GaugeFrame,
    ModeSpec,
    TwoLevelParams,
    mode_suppression_factor,
)
from .reduction import (
    PotentialSpec,
    ReductionError,
    dipole_moment,
    harmonic,
    load_potential_file,
    quartic_double_well,
    reduce_to_two_level,
    solve_schrodinger_1d,
    tilted_quartic,
)
from .spectra import CutoffPolicy, SweepConfig, gap_analysis, refine_fn, sweep
from .verify import RNG_NAME, run_gauge_checks, random_cubic, transporter_law_deviation
from .gauge import transporter_gauge_law

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDITY = 3
EXIT_SOLVER = 4
EXIT_CONVERGENCE = 5
EXIT_GAUGE = 6

COMMANDS = ("reduce", "spectrum", "verify-gauge", "formfactor", "wilson-check")

DEFAULT_SEED = 0
DEFAULT_VALIDITY_THRESHOLD = 10.0


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config plumbing


def _check_keys(section: dict, allowed: set, required: set, ctx: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {ctx}: {sorted(unknown)}")
    missing = required - set(section)
    if missing:
        raise ConfigError(f"missing required key(s) in {ctx}: {sorted(missing)}")


def _apply_override(config: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"--set expects KEY=VALUE, got {assignment!r}")
    path, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    keys = path.split(".")
    node = config
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set path {path!r} walks through a non-object")
    node[keys[-1]] = value


def load_config(path: str, overrides: Optional[list] = None) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(config, dict):
        raise ConfigError("config root must be a JSON object")
    for assignment in overrides or []:
        _apply_override(config, assignment)
    command = config.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {command!r}")
    return config


def _grid_from(section, ctx: str, default_num: int = 81) -> np.ndarray:
    """A grid given either as an explicit list or as start/stop plus step or num."""
    if isinstance(section, list):
        grid = np.asarray(section, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ConfigError(f"{ctx} must be a non-empty list of numbers")
        return grid
    if isinstance(section, dict):
        _check_keys(section, {"start", "stop", "step", "num"}, {"start", "stop"}, ctx)
        start, stop = float(section["start"]), float(section["stop"])
        if "step" in section and "num" in section:
            raise ConfigError(f"{ctx}: give either step or num, not both")
        if "step" in section:
            step = float(section["step"])
            if step <= 0:
                raise ConfigError(f"{ctx}: step must be positive")
            num = int(round((stop - start) / step)) + 1
        else:
            num = int(section.get("num", default_num))
        return np.linspace(start, stop, num)
    raise ConfigError(f"{ctx} must be a list or an object with start/stop")


def _parse_profile(section) -> object:
    if section is None:
        return UniformProfile()
    _check_keys(
        section,
        {"type", "value", "k", "phi", "amplitude", "file", "x", "values"},
        {"type"},
        "mode.profile",
    )
    kind = section["type"]
    if kind == "uniform":
        return UniformProfile(value=float(section.get("value", 1.0)))
    if kind == "cosine":
        if "k" not in section:
            raise ConfigError("cosine profile needs k")
        return CosineProfile(
            k=float(section["k"]),
            phi=float(section.get("phi", 0.0)),
            amplitude=float(section.get("amplitude", 1.0)),
        )
    if kind == "sampled":
        if "file" in section:
            try:
                data = np.loadtxt(section["file"])
            except (OSError, ValueError) as exc:
                raise ConfigError(f"mode.profile: {exc}")
            if data.ndim != 2 or data.shape[1] != 2:
                raise ConfigError("sampled profile file must have two columns")
            return SampledProfile(x=data[:, 0], values=data[:, 1])
        if "x" in section and "values" in section:
            try:
                return SampledProfile(
                    x=np.asarray(section["x"], dtype=float),
                    values=np.asarray(section["values"], dtype=float),
                )
            except ValueError as exc:
                raise ConfigError(f"mode.profile: {exc}")
        raise ConfigError("sampled profile needs a file or x/values arrays")
    raise ConfigError(f"unknown profile type {kind!r}")


def _parse_mode(section) -> ModeSpec:
    if section is None:
        raise ConfigError("missing required section: mode")
    _check_keys(section, {"omega_ph", "a0", "profile"}, {"omega_ph"}, "mode")
    profile = _parse_profile(section.get("profile"))
    try:
        return ModeSpec(
            omega_ph=float(section["omega_ph"]),
            a0=float(section["a0"]) if "a0" in section else None,
            profile=profile,
        )
    except ValueError as exc:
        raise ConfigError(f"mode: {exc}")


def _parse_two_level(section, omega_ph: Optional[float] = None) -> TwoLevelParams:
    if section is None:
        raise ConfigError("missing required section: two_level")
    _check_keys(
        section, {"delta", "epsilon", "a", "q", "omega_q"}, set(), "two_level"
    )
    epsilon = float(section.get("epsilon", 0.0))
    a = float(section["a"]) if "a" in section else None
    q = float(section["q"]) if "q" in section else None
    if "delta" in section:
        delta = float(section["delta"])
    else:
        omega_q = float(section["omega_q"]) if "omega_q" in section else omega_ph
        if omega_q is None:
            raise ConfigError("two_level needs delta or omega_q")
        if abs(epsilon) >= omega_q:
            raise ConfigError(
                f"two_level: |epsilon|={abs(epsilon)} must be < omega_q={omega_q}"
            )
        delta = math.sqrt(omega_q**2 - epsilon**2)
    try:
        return TwoLevelParams(delta=delta, epsilon=epsilon, a=a, q=q)
    except ValueError as exc:
        raise ConfigError(f"two_level: {exc}")


def _parse_potential(section) -> PotentialSpec:
    if section is None:
        raise ConfigError("missing required section: potential")
    allowed = {
        "family",
        "file",
        "beta",
        "x0",
        "lambda",
        "k",
        "x_min",
        "x_max",
        "n_points",
        "mass",
    }
    _check_keys(section, allowed, set(), "potential")
    mass = float(section.get("mass", 1.0))
    if "file" in section:
        if any(key in section for key in ("x_min", "x_max", "n_points", "family")):
            raise ConfigError(
                "potential: a sampled file fixes the grid; do not also give "
                "family/x_min/x_max/n_points"
            )
        try:
            x, v = load_potential_file(section["file"])
        except (OSError, ValueError) as exc:
            raise ConfigError(f"potential: {exc}")
        dx = np.diff(x)
        if not np.allclose(dx, dx[0], rtol=1e-8):
            raise ConfigError("potential file grid must be uniform")
        try:
            return PotentialSpec(
                x_min=float(x[0]),
                x_max=float(x[-1]),
                n_points=len(x),
                mass=mass,
                potential=v,
            )
        except ValueError as exc:
            raise ConfigError(f"potential: {exc}")
    family = section.get("family")
    if family == "quartic_double_well":
        fn = quartic_double_well(float(section.get("beta", 1.0)), float(section.get("x0", 1.5)))
    elif family == "tilted_quartic":
        fn = tilted_quartic(
            float(section.get("beta", 1.0)),
            float(section.get("x0", 1.5)),
            float(section.get("lambda", 0.0)),
        )
    elif family == "harmonic":
        fn = harmonic(float(section.get("k", 1.0)))
    else:
        raise ConfigError(
            f"potential: unknown family {family!r}; expected quartic_double_well, "
            f"tilted_quartic, harmonic, or a sampled file"
        )
    for key in ("x_min", "x_max", "n_points"):
        if key not in section:
            raise ConfigError(f"potential: missing required key {key}")
    try:
        return PotentialSpec(
            x_min=float(section["x_min"]),
            x_max=float(section["x_max"]),
            n_points=int(section["n_points"]),
            mass=mass,
            potential=fn,
        )
    except ValueError as exc:
        raise ConfigError(f"potential: violated precondition: {exc}")


def _parse_cutoff(section) -> CutoffPolicy:
    if section is None:
        return CutoffPolicy()
    _check_keys(section, {"n_start", "n_max", "tol_rel"}, set(), "sweep.cutoff")
    try:
        return CutoffPolicy(
            n_start=int(section["n_start"]) if section.get("n_start") is not None else None,
            n_max=int(section.get("n_max", 1024)),
            tol_rel=float(section.get("tol_rel", 1e-8)),
        )
    except ValueError as exc:
        raise ConfigError(f"sweep.cutoff: {exc}")


# ---------------------------------------------------------------------------
# output helpers


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gqrm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_reduce(config: dict) -> int:
    _check_keys(
        config,
        {"command", "potential", "output", "n_levels", "validity_threshold", "seed", "q"},
        {"command", "potential", "output"},
        "config",
    )
    spec = _parse_potential(config["potential"])
    n_levels = int(config.get("n_levels", 3))
    if n_levels < 3:
        raise ConfigError("reduce needs n_levels >= 3")
    if n_levels > spec.n_points - 2:
        raise ConfigError(
            f"reduce needs n_levels <= n_points - 2, got n_levels={n_levels} "
            f"with n_points={spec.n_points}"
        )
    threshold = float(config.get("validity_threshold", DEFAULT_VALIDITY_THRESHOLD))
    try:
        solution = solve_schrodinger_1d(spec, n_levels)
        result = reduce_to_two_level(solution, spec)
    except ReductionError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except np.linalg.LinAlgError as exc:
        print(f"solver failure: eigensolver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    gap = result.e1 - result.e0
    consistency = abs(result.omega_q - gap) / gap if gap > 0 else float("nan")
    validity_ok = result.validity_ratio >= threshold
    report = {
        "E0": result.e0,
        "E1": result.e1,
        "E2": result.e2,
        "delta": result.delta,
        "epsilon": result.epsilon,
        "t": result.t,
        "a": result.a,
        "x_L": result.x_l,
        "x_R": result.x_r,
        "omega_q": result.omega_q,
        "consistency_rel": consistency,
        "validity_ratio": result.validity_ratio,
        "validity_threshold": threshold,
        "validity_ok": validity_ok,
    }
    if "q" in config:
        report["dipole_moment"] = dipole_moment(result, float(config["q"]))
    _atomic_write(config["output"], _json_text(report))
    print(
        f"reduced: delta={result.delta:.6g} epsilon={result.epsilon:.6g} "
        f"a={result.a:.6g} validity_ratio={result.validity_ratio:.4g}"
    )
    if not validity_ok:
        print(
            f"warning: validity ratio {result.validity_ratio:.4g} below "
            f"threshold {threshold:.4g}; two-level reduction is questionable",
            file=sys.stderr,
        )
        return EXIT_VALIDITY
    return EXIT_OK


def cmd_spectrum(config: dict) -> int:
    _check_keys(
        config,
        {"command", "two_level", "mode", "sweep", "output", "plot", "seed"},
        {"command", "two_level", "mode", "sweep", "output"},
        "config",
    )
    mode = _parse_mode(config["mode"])
    params = _parse_two_level(config["two_level"], omega_ph=mode.omega_ph)
    section = config["sweep"]
    _check_keys(
        section,
        {"eta_grid", "n_levels", "frame", "cutoff", "tls_basis", "refine_gaps"},
        {"eta_grid"},
        "sweep",
    )
    try:
        sweep_config = SweepConfig(
            eta_grid=_grid_from(section["eta_grid"], "sweep.eta_grid"),
            params=params,
            mode=mode,
            n_levels=int(section.get("n_levels", 8)),
            frame=GaugeFrame.parse(section.get("frame", "coulomb")),
            cutoff=_parse_cutoff(section.get("cutoff")),
            tls_basis=section.get("tls_basis", "site"),
        )
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}")

    table = sweep(sweep_config)
    buf = io.StringIO()
    table.write_csv(buf)
    _atomic_write(config["output"], buf.getvalue())
    if config.get("plot"):
        from .plotting import save_spectrum_plot

        save_spectrum_plot(table, config["plot"])

    refine = None
    if section.get("refine_gaps"):
        refine = refine_fn(
            params,
            mode,
            table.n_levels,
            max(r.cutoff for r in table.rows),
            frame=sweep_config.frame,
            tls_basis=sweep_config.tls_basis,
        )
    crossing_tol = 1e-6
    print(f"spectrum: {len(table.rows)} eta points, n_levels={table.n_levels}")
    for j in range(table.n_levels - 1):
        analysis = gap_analysis(table, (j, j + 1), crossing_tol=crossing_tol, refine=refine)
        for m in analysis.minima:
            print(
                f"gap ({j},{j + 1}): minimum {m.gap:.3e} at eta={m.eta:.4f} "
                f"[{m.kind}{'' if m.refined else ', grid estimate'}]"
            )
    if not table.all_converged:
        bad = [r.eta for r in table.rows if not r.converged]
        print(
            f"warning: {len(bad)} eta point(s) unconverged at n_max="
            f"{sweep_config.cutoff.n_max}: {bad}",
            file=sys.stderr,
        )
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_verify_gauge(config: dict) -> int:
    _check_keys(
        config,
        {"command", "two_level", "mode", "verify", "output", "seed"},
        {"command", "two_level", "mode", "output"},
        "config",
    )
    mode = _parse_mode(config["mode"])
    params = _parse_two_level(config["two_level"], omega_ph=mode.omega_ph)
    section = config.get("verify") or {}
    _check_keys(
        section,
        {
            "eta",
            "cutoff",
            "n_levels",
            "displacement",
            "spectrum_threshold",
            "invariance_threshold",
            "n_phase_trials",
            "n_transporter_trials",
        },
        set(),
        "verify",
    )
    seed = int(config.get("seed", DEFAULT_SEED))
    displacement = section.get("displacement", "truncated_generator")
    if displacement not in ("truncated_generator", "analytic"):
        raise ConfigError("verify.displacement must be truncated_generator or analytic")
    checks = run_gauge_checks(
        params,
        mode,
        eta=float(section.get("eta", 0.5)),
        cutoff=int(section.get("cutoff", 80)),
        seed=seed,
        n_levels=int(section.get("n_levels", 10)),
        displacement_method=displacement,
        spectrum_threshold=float(section.get("spectrum_threshold", 1e-9)),
        invariance_threshold=float(section.get("invariance_threshold", 1e-12)),
        n_phase_trials=int(section.get("n_phase_trials", 64)),
        n_transporter_trials=int(section.get("n_transporter_trials", 16)),
    )
    report = {
        "command": "verify-gauge",
        "seed": seed,
        "rng": RNG_NAME,
        "displacement": displacement,
        "checks": [
            {
                "name": c.name,
                "max_deviation": c.max_deviation,
                "threshold": c.threshold,
                "passed": c.passed,
            }
            for c in checks
        ],
        "all_passed": all(c.passed for c in checks),
    }
    _atomic_write(config["output"], _json_text(report))
    for c in checks:
        print(f"{c.name}: max deviation {c.max_deviation:.3e} (threshold {c.threshold:.1e})")
    failed = [c for c in checks if not c.passed]
    if failed:
        for c in failed:
            print(
                f"gauge check failed: {c.name} deviation {c.max_deviation:.3e} "
                f"exceeds {c.threshold:.1e}",
                file=sys.stderr,
            )
        return EXIT_GAUGE
    return EXIT_OK


def cmd_formfactor(config: dict) -> int:
    _check_keys(
        config,
        {"command", "mode", "formfactor", "output", "seed"},
        {"command", "mode", "formfactor", "output"},
        "config",
    )
    mode = _parse_mode(config["mode"])
    if not isinstance(mode.profile, CosineProfile):
        raise ConfigError("formfactor requires a cosine mode profile")
    section = config["formfactor"]
    _check_keys(section, {"ka_grid"}, {"ka_grid"}, "formfactor")
    grid = _grid_from(section["ka_grid"], "formfactor.ka_grid")
    lines = ["k_times_a,suppression_factor"]
    for ka in grid:
        lines.append(f"{ka:.12g},{mode_suppression_factor(ka, mode.profile.phi):.12g}")
    _atomic_write(config["output"], "\n".join(lines) + "\n")
    print(f"formfactor: {len(grid)} points written")
    return EXIT_OK


def cmd_wilson_check(config: dict) -> int:
    _check_keys(
        config,
        {"command", "mode", "wilson", "output", "seed"},
        {"command", "output"},
        "config",
    )
    section = config.get("wilson") or {}
    _check_keys(
        section, {"q", "x_l", "x_r", "n_checks", "threshold"}, set(), "wilson"
    )
    seed = int(config.get("seed", DEFAULT_SEED))
    q = float(section.get("q", 1.0))
    x_l = float(section.get("x_l", -0.75))
    x_r = float(section.get("x_r", 0.75))
    if not x_l < x_r:
        raise ConfigError(f"wilson: need x_l < x_r, got {x_l}, {x_r}")
    n_checks = int(section.get("n_checks", 16))
    threshold = float(section.get("threshold", 1e-12))
    rng = np.random.default_rng(seed)
    profile = _parse_mode(config["mode"]).profile if "mode" in config else None
    if profile is not None:
        worst = 0.0
        for _ in range(n_checks):
            theta, dtheta = random_cubic(rng)
            lhs, rhs = transporter_gauge_law(profile, q, x_l, x_r, theta, dtheta)
            worst = max(worst, abs(lhs - rhs))
        worst = float(worst)
    else:
        worst = transporter_law_deviation(rng, n_trials=n_checks, q=q, x_l=x_l, x_r=x_r)
    report = {
        "command": "wilson-check",
        "seed": seed,
        "rng": RNG_NAME,
        "n_checks": n_checks,
        "q": q,
        "x_l": x_l,
        "x_r": x_r,
        "max_deviation": worst,
        "threshold": threshold,
        "passed": bool(worst <= threshold),
    }
    _atomic_write(config["output"], _json_text(report))
    print(f"wilson-check: max deviation {worst:.3e} over {n_checks} gauge functions")
    if worst > threshold:
        print(
            f"gauge check failed: transporter law deviation {worst:.3e} "
            f"exceeds {threshold:.1e}",
            file=sys.stderr,
        )
        return EXIT_GAUGE
    return EXIT_OK


DISPATCH = {
    "reduce": cmd_reduce,
    "spectrum": cmd_spectrum,
    "verify-gauge": cmd_verify_gauge,
    "formfactor": cmd_formfactor,
    "wilson-check": cmd_wilson_check,
}


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gqrm",
        description="Gauge-invariant quantum Rabi models: reduction, spectra, checks.",
    )
    parser.add_argument("config", help="JSON run configuration")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a dotted config path (repeatable)",
    )
    parser.add_argument("--version", action="version", version=f"gqrm {__version__}")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config, args.overrides)
        return DISPATCH[config["command"]](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
