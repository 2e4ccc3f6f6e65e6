"""Scenario runner.

    decoherence <command> [--key value ...] [--config FILE] [--output PREFIX]
                [--seed N] [--json] [--validate] [--sweep key=a:b:n] [--workers N]

Parameters may also come from a flat ``key = value`` config file (``command``,
``output`` and ``seed`` are recognised there too); command-line flags override
the file.  Dimensioned quantities carry their unit in the key (``mass-g``,
``temp-K``, ``dx-cm``); the engine commands (evolve, cl, zeno, zenotoy,
chiral) work in natural units with hbar = 1.

Exit status: 0 success, 2 configuration error, 3 numerical-domain error.
"""
from __future__ import annotations

import argparse
import difflib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from . import io as dio
from .constants import TOL
from .errors import ConfigurationError, NumericalDomainError

OUTPUT_ENV = "DECOHERENCE_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


@dataclass(frozen=True)
class Param:
    kind: type
    default: object = None
    help: str = ""
    choices: tuple = ()
    required: bool = False


def _grid_params(x_min=-10.0, x_max=10.0, n=128):
    return {
        "x-min": Param(float, x_min, "left edge of the position grid"),
        "x-max": Param(float, x_max, "right edge of the position grid"),
        "n-points": Param(int, n, "grid points (>= 8)"),
        "mass": Param(float, 1.0, "particle mass; 'inf' disables the kinetic term"),
        "dt": Param(float, None, "time step (default 0.9 of the stability bound)"),
        "steps": Param(int, 1000, "number of time steps"),
        "state": Param(str, "gaussian", "initial state", ("gaussian", "cat")),
        "sigma": Param(float, 1.0, "packet position spread"),
        "x0": Param(float, 0.0, "packet centre"),
        "p0": Param(float, 0.0, "mean momentum"),
        "separation": Param(float, 4.0, "cat-state packet separation"),
        "phase": Param(float, 0.0, "cat-state relative phase"),
        "scheme": Param(str, "rk4", "time stepper", ("rk4", "split")),
        "record-every": Param(int, 10, "snapshot stride"),
    }


SCHEMA: dict[str, dict[str, Param]] = {
    "schmidt": {
        "dim-a": Param(int, 2, "dimension of subsystem A"),
        "dim-b": Param(int, 2, "dimension of subsystem B"),
        "state": Param(str, "random", "bipartite state", ("bell", "product", "random")),
        "coeffs": Param(str, None, "explicit coefficient matrix 'c00,c01;c10,c11' (renormalized)"),
    },
    "localize": {
        "preset": Param(str, None, "preset environment name (see table1)"),
        "size-cm": Param(float, 1e-3, "object size a for the preset"),
        "k-per-cm": Param(float, None, "wavenumber of the scattered particles"),
        "flux-per-cm2-s": Param(float, None, "incident flux Nv/V"),
        "sigma-eff-cm2": Param(float, None, "effective cross section"),
        "dx-cm": Param(float, 1e-4, "separation x - x'"),
        "t-s": Param(float, 1e-4, "elapsed time"),
    },
    "table1": {},
    "evolve": {**_grid_params(), "lambda": Param(float, 0.1, "localization rate Lambda")},
    "cl": {
        **_grid_params(-12.0, 12.0, 128),
        "gamma": Param(float, 0.5, "damping constant"),
        "temperature": Param(float, 1.0, "temperature (k_B = 1)"),
        "lambda": Param(float, None, "override Lambda (default m*gamma*T)"),
    },
    "ratio": {
        "mass-g": Param(float, None, "mass", required=True),
        "temp-K": Param(float, None, "temperature", required=True),
        "dx-cm": Param(float, None, "separation", required=True),
    },
    "zeno": {
        "levels": Param(int, 2, "number of levels in the tunnelling chain"),
        "V": Param(float, 1.0, "nearest-neighbour coupling"),
        "t": Param(float, math.pi / 2, "total time"),
        "N": Param(int, 10, "number of projective checks"),
        "rate": Param(float, None, "optional classical decay rate for the exponential contrast"),
    },
    "zenotoy": {
        "V": Param(float, 1.0, "tunnelling amplitude"),
        "E": Param(float, 20.0, "level splitting"),
        "gamma": Param(str, "0,1,4,16,64,256,1024", "pointer coupling(s), comma separated"),
        "width": Param(float, 1.0, "initial pointer width"),
        "t-max": Param(float, None, "run length (default one Rabi period)"),
        "dt": Param(float, None, "sampling step (default t-max/200)"),
    },
    "chiral": {
        "V": Param(float, 1.0, "L <-> R tunnelling amplitude"),
        "E": Param(float, 0.0, "energy offset of |R>"),
        "rate": Param(float, 100.0, "chiral dephasing rate Gamma_chi"),
        "initial": Param(str, "L", "initial state", ("L", "R", "1", "2")),
        "t-max": Param(float, 10.0, "run length"),
        "dt": Param(float, 0.01, "time step"),
    },
    "cat": {
        "alpha": Param(float, 2.0, "coherent amplitude (real)"),
        "kappa-per-s": Param(float, 1e4, "reservoir coupling rate"),
        "t-max-s": Param(float, 1e-4, "end of the visibility curve"),
        "n-times": Param(int, 101, "samples on the curve"),
    },
    "gravity": {
        "n-per-cm3": Param(float, None, "gas number density (default: air at 1 atm, 300 K)"),
        "L-cm": Param(float, 1.0, "box edge"),
        "m-g": Param(float, None, "gas particle mass (default: air)"),
        "T-K": Param(float, None, "temperature (default 300 K)"),
        "t-s": Param(float, 1.0, "elapsed time"),
    },
}

COMMANDS = tuple(SCHEMA)


@dataclass
class ScenarioConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0


# --- parsing and validation ---------------------------------------------------

def _convert(kind, raw):
    if kind is float:
        return float(raw)
    if kind is int:
        value = float(raw)
        if value != int(value):
            raise ValueError(f"{raw!r} is not an integer")
        return int(value)
    return str(raw)


def _nearest(key, valid):
    match = difflib.get_close_matches(key, valid, n=1, cutoff=0.0)
    return match[0] if match else None


def resolve(config: ScenarioConfig):
    """Typed parameter dict plus diagnostics; defaults filled in."""
    diags = []
    if config.command not in SCHEMA:
        near = _nearest(config.command, COMMANDS)
        return {}, [f"unknown command {config.command!r} (did you mean {near!r}?)"]
    schema = SCHEMA[config.command]
    values = {}
    for key, raw in config.parameters.items():
        if key not in schema:
            near = _nearest(key, list(schema))
            hint = f"; nearest valid key is {near!r}" if near else ""
            diags.append(f"unknown parameter {key!r} for {config.command}{hint}")
            continue
        p = schema[key]
        try:
            values[key] = _convert(p.kind, raw)
        except (TypeError, ValueError):
            diags.append(f"parameter {key!r}: cannot read {raw!r} as {p.kind.__name__}")
            continue
        if p.choices and values[key] not in p.choices:
            diags.append(f"parameter {key!r} must be one of {list(p.choices)}, got {values[key]!r}")
    for key, p in schema.items():
        if key not in values:
            if p.required:
                diags.append(f"missing required parameter {key!r}")
            values[key] = p.default
    if not diags:
        diags += _semantic_checks(config.command, values)
    return values, diags


def _grid_and_params(cmd, v):
    from .evolution import RK4_STABILITY, EvolutionParams, GridSpec

    grid = GridSpec(v["x-min"], v["x-max"], v["n-points"])
    mass = v["mass"]
    kw = dict(mass=mass, dt=1.0, steps=v["steps"], scheme=v["scheme"], record_every=v["record-every"])
    if cmd == "cl":
        kw.update(gamma=v["gamma"], temperature=v["temperature"], lam=v["lambda"])
    else:
        kw.update(lam=v["lambda"])
    p = EvolutionParams(**kw)
    dt = v["dt"]
    if dt is None:
        # 0.9 of the tighter of the kinetic and damping step limits
        limits = [0.25 * mass * grid.dx**2] if math.isfinite(mass) else []
        gamma = p.gamma if cmd == "cl" else 0.0
        stiff = gamma * grid.length / grid.dx
        if p.scheme == "rk4":
            stiff += p.effective_lambda(cmd == "cl") * grid.length**2
        if stiff > 0:
            limits.append(RK4_STABILITY / stiff)
        dt = 0.9 * min(limits) if limits else 1e-3
    return grid, replace(p, dt=dt)


def _semantic_checks(cmd, v):
    diags = []
    try:
        if cmd in ("evolve", "cl"):
            from .evolution import stability_diagnostics

            grid, p = _grid_and_params(cmd, v)
            diags += stability_diagnostics(grid, p, cmd == "cl")
        elif cmd == "ratio":
            for key in ("mass-g", "temp-K"):
                if not v[key] > 0:
                    diags.append(f"{key} must be positive")
            if v["dx-cm"] < 0:
                diags.append("dx-cm must be nonnegative")
        elif cmd == "zeno":
            if v["N"] < 1:
                diags.append("N must be >= 1")
            if v["levels"] < 2:
                diags.append("levels must be >= 2")
        elif cmd == "schmidt":
            if v["dim-a"] < 1 or v["dim-b"] < 1:
                diags.append("subsystem dimensions must be >= 1")
            if v["state"] == "bell" and v["dim-a"] != v["dim-b"] and v["coeffs"] is None:
                diags.append("bell state needs dim-a == dim-b")
            if v["coeffs"] is not None:
                c = _parse_coeffs(v["coeffs"])
                if not np.all(np.isfinite(c)):
                    diags.append("coeffs must be a nonzero finite matrix")
        elif cmd == "localize":
            manual = [v[k] for k in ("k-per-cm", "flux-per-cm2-s", "sigma-eff-cm2")]
            if v["preset"] is None and any(x is None for x in manual):
                diags.append("give either preset or all of k-per-cm, flux-per-cm2-s, sigma-eff-cm2")
            elif v["preset"] is not None:
                from .scattering import TABLE_TARGETS, find_preset

                try:
                    find_preset(v["preset"], v["size-cm"])
                except KeyError:
                    near = _nearest(v["preset"], list(TABLE_TARGETS))
                    diags.append(f"no preset {v['preset']!r} at size-cm={v['size-cm']:g} "
                                 f"(presets: {', '.join(TABLE_TARGETS)}; sizes 0.001, 1e-05, 1e-06; "
                                 f"nearest name {near!r})")
        elif cmd == "zenotoy":
            [float(g) for g in str(v["gamma"]).split(",")]
        elif cmd == "cat":
            if v["n-times"] < 2:
                diags.append("n-times must be >= 2")
    except ConfigurationError as exc:
        diags.append(str(exc))
    except ValueError as exc:
        diags.append(f"invalid value: {exc}")
    return diags


def validate(config: ScenarioConfig) -> list[str]:
    """All configuration problems, without running anything."""
    return resolve(config)[1]


def read_config_file(path):
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key] = value
    return out


# --- commands -------------------------------------------------------------------

def _prefix(config):
    if config.output:
        return config.output
    base = os.environ.get(OUTPUT_ENV, "decoherence-out")
    return os.path.join(base, config.command)


def _parse_coeffs(text):
    """'a,b;c,d' -> 2x2 complex matrix; entries may be Python complex literals like 0.5j."""
    rows = [[complex(x.replace(" ", "")) for x in row.split(",")] for row in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ConfigurationError(f"coeffs rows have different lengths: {text!r}")
    c = np.array(rows)
    return c / np.linalg.norm(c)


def _matrix_rows(m):
    return [[i, *row] for i, row in enumerate(np.asarray(m))]


def _cmd_schmidt(v, cfg, prefix):
    from .quantum_core import (BipartiteState, coherence_norm, entanglement_entropy,
                               partial_trace, random_bipartite, schmidt_decompose)

    if v["coeffs"] is not None:
        state = BipartiteState(_parse_coeffs(v["coeffs"]))
    elif v["state"] == "bell":
        state = BipartiteState(np.eye(v["dim-a"]) / math.sqrt(v["dim-a"]))
    elif v["state"] == "product":
        c = np.zeros((v["dim-a"], v["dim-b"]))
        c[0, 0] = 1.0
        state = BipartiteState(c)
    else:
        state = random_bipartite(v["dim-a"], v["dim-b"], np.random.default_rng(cfg.seed))
    a, b = state.dimA, state.dimB
    sd = schmidt_decompose(state)
    rho = state.density_matrix()
    red_a = partial_trace(rho, "A", (a, b))
    red_b = partial_trace(rho, "B", (a, b))
    spectrum = np.sort(red_a.eigenvalues())[::-1][: sd.rank]
    singletons = [[lbl] for lbl in red_a.labels]
    files = [
        dio.write_csv(prefix + "_weights.csv", ("n", "weight"), enumerate(sd.weights)),
        dio.write_csv(prefix + "_rhoA.csv", ["row"] + [f"c{j}" for j in range(a)], _matrix_rows(red_a.entries)),
        dio.write_csv(prefix + "_rhoB.csv", ["row"] + [f"c{j}" for j in range(b)], _matrix_rows(red_b.entries)),
    ]
    summary = {"weights": sd.weights, "entropy_nats": entanglement_entropy(sd),
               "coherence_norm_A": coherence_norm(red_a, singletons),
               "oracle_max_deviation": float(np.max(np.abs(spectrum - sd.weights)))}
    return summary, files


def _cmd_localize(v, cfg, prefix):
    from .scattering import (ScatteringEnvironment, coherence_length, decoherence_factor,
                             find_preset, localization_rate, single_scattering_overlap)

    if v["preset"] is not None:
        env = find_preset(v["preset"], v["size-cm"]).env
    else:
        env = ScatteringEnvironment("custom", v["k-per-cm"], v["flux-per-cm2-s"], v["sigma-eff-cm2"])
    lam = localization_rate(env).value
    factor = float(decoherence_factor(v["dx-cm"], lam, v["t-s"]))
    single = float(single_scattering_overlap(v["dx-cm"], env.k).real)
    summary = {"environment": env.name, "lambda": lam, "decoherence_factor": factor,
               "coherence_length_cm": coherence_length(lam, v["t-s"]), "single_scattering_overlap": single}
    f = dio.write_csv(prefix + "_localize.csv",
                      ("lambda", "dx_cm", "t_s", "factor", "coherence_length_cm", "single_scattering_overlap"),
                      [(lam, v["dx-cm"], v["t-s"], factor, summary["coherence_length_cm"], single)])
    return summary, [f]


def _cmd_table1(v, cfg, prefix):
    from .scattering import preset_environments, write_preset_csv

    presets = preset_environments()
    path = prefix + "_table1.csv"
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    write_preset_csv(path, presets)
    errs = [p.log10_error for p in presets]
    return {"rows": len(presets), "max_log10_error": max(errs)}, [path]


def _initial_state(grid, v):
    from .evolution import gaussian_packet, two_packet_superposition

    if v["state"] == "cat":
        return two_packet_superposition(grid, v["separation"], v["phase"], v["sigma"], v["x0"], v["p0"])
    return gaussian_packet(grid, v["x0"], v["p0"], v["sigma"])


def _write_trajectory(traj, prefix):
    from .evolution import SUMMARY_COLUMNS, snapshot_rows

    n = traj.grid.nPoints
    snap_header = ["t"] + [f"abs_rho_{i}_{j}" for i in range(n) for j in range(n)]
    files = [dio.write_csv(prefix + "_summary.csv", SUMMARY_COLUMNS, traj.summary()),
             dio.write_csv(prefix + "_snapshots.csv", snap_header, snapshot_rows(traj))]
    return files


def _cmd_evolve(v, cfg, prefix, cl=False):
    from .evolution import evolve_caldeira_leggett, evolve_pure_decoherence

    grid, p = _grid_and_params("cl" if cl else "evolve", v)
    rho0 = _initial_state(grid, v)
    traj = (evolve_caldeira_leggett if cl else evolve_pure_decoherence)(rho0, p)
    last = traj.summary()[-1]
    summary = {"t_final": last.t, "trace": last.trace, "purity": last.purity,
               "mean_x": last.mean_x, "mean_p": last.mean_p, "offdiag_peak": last.offdiag_peak,
               "run": traj.metadata()}
    return summary, _write_trajectory(traj, prefix)


def _cmd_ratio(v, cfg, prefix):
    from .evolution import decoherence_relaxation_ratio

    r = decoherence_relaxation_ratio(v["mass-g"], v["temp-K"], v["dx-cm"])
    f = dio.write_csv(prefix + "_ratio.csv", ("mass_g", "temp_K", "dx_cm", "ratio", "lambda_th_cm"),
                      [(v["mass-g"], v["temp-K"], v["dx-cm"], r.ratio, r.lambda_th_cm)])
    return {"ratio": r.ratio, "lambda_th_cm": r.lambda_th_cm}, [f]


def _chain_hamiltonian(levels, V):
    h = np.zeros((levels, levels), dtype=complex)
    i = np.arange(levels - 1)
    h[i, i + 1] = h[i + 1, i] = V
    return h


def _cmd_zeno(v, cfg, prefix):
    from .measurement import exponential_decay_survival, survival_probability, zeno_survival

    h = _chain_hamiltonian(v["levels"], v["V"])
    u = np.zeros(v["levels"], dtype=complex)
    u[0] = 1.0
    z = zeno_survival(h, u, v["t"], v["N"])
    single = survival_probability(h, u, v["t"])
    summary = {"survival": z.exact, "approx": z.approx, "single_measurement": single.exact}
    row = [v["N"], v["t"], z.exact, z.approx, single.exact]
    header = ["N", "t", "survival", "approx", "single_measurement"]
    if v["rate"] is not None:
        summary["exponential"] = exponential_decay_survival(v["rate"], v["t"], v["N"])
        header.append("exponential")
        row.append(summary["exponential"])
    return summary, [dio.write_csv(prefix + "_zeno.csv", header, [row])]


def _cmd_zenotoy(v, cfg, prefix):
    from .zeno_toy import SCAN_COLUMNS, gamma_sweep

    gammas = [float(g) for g in str(v["gamma"]).split(",")]
    recs = gamma_sweep(gammas, V=v["V"], E=v["E"], width=v["width"], tMax=v["t-max"], dt=v["dt"])
    files = [dio.write_csv(prefix + "_scan.csv", SCAN_COLUMNS, [r.scan_row() for r in recs])]
    for i, r in enumerate(recs):
        files.append(dio.write_csv(f"{prefix}_series{i:03d}.csv", ("t", "P2", "branch_overlap"),
                                   zip(r.times, r.p2, r.branch_overlap)))
    summary = {"runs": [dict(zip(SCAN_COLUMNS, r.scan_row())) for r in recs],
               "warnings": sorted({w for r in recs for w in r.warnings})}
    return summary, files


def _cmd_chiral(v, cfg, prefix):
    from .measurement import chiral_decoherence_run, chiral_hamiltonian

    kets = {"1": [1, 0], "2": [0, 1], "L": [1, 1], "R": [1, -1]}
    psi = np.array(kets[v["initial"]], dtype=complex)
    psi /= np.linalg.norm(psi)
    traj = chiral_decoherence_run(chiral_hamiltonian(v["V"], v["E"]), v["rate"], np.outer(psi, psi.conj()),
                                  v["t-max"], v["dt"])
    rows = zip(traj.times, traj.rho_LL, 1 - traj.rho_LL, traj.rho_LR)
    f = dio.write_csv(prefix + "_chiral.csv", ("t", "rho_LL", "rho_RR", "rho_LR"), rows)
    return {"rho_LL_final": float(traj.rho_LL[-1]), "abs_rho_LR_final": float(abs(traj.rho_LR[-1]))}, [f]


def _cmd_cat(v, cfg, prefix):
    from .cats import VISIBILITY_COLUMNS, coherence_time, visibility_curve

    times = np.linspace(0.0, v["t-max-s"], v["n-times"])
    rows = list(visibility_curve(v["alpha"], v["kappa-per-s"], times))
    f = dio.write_csv(prefix + "_visibility.csv", VISIBILITY_COLUMNS, rows)
    return {"coherence_time_s": coherence_time(v["alpha"], v["kappa-per-s"]),
            "final_visibility": rows[-1][1]}, [f]


def _cmd_gravity(v, cfg, prefix):
    from .gravity import GRAVITY_COLUMNS, GravityScenario, air_scenario, gravity_row

    air = air_scenario(v["L-cm"], v["t-s"])
    s = GravityScenario(v["n-per-cm3"] or air.n, v["L-cm"], v["m-g"] or air.m, v["T-K"] or air.T, v["t-s"])
    row = gravity_row(s)
    f = dio.write_csv(prefix + "_gravity.csv", GRAVITY_COLUMNS, [row])
    return dict(zip(GRAVITY_COLUMNS, row)), [f]


HANDLERS = {
    "schmidt": _cmd_schmidt,
    "localize": _cmd_localize,
    "table1": _cmd_table1,
    "evolve": _cmd_evolve,
    "cl": lambda v, c, p: _cmd_evolve(v, c, p, cl=True),
    "ratio": _cmd_ratio,
    "zeno": _cmd_zeno,
    "zenotoy": _cmd_zenotoy,
    "chiral": _cmd_chiral,
    "cat": _cmd_cat,
    "gravity": _cmd_gravity,
}


@dataclass
class RunResult:
    status: int
    summary: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    diagnostic: str = ""


def execute(config: ScenarioConfig, workers=1) -> RunResult:
    """Validate, run one command, write metadata JSON and CSVs."""
    values, diags = resolve(config)
    if diags:
        return RunResult(EXIT_CONFIG, diagnostic="; ".join(diags))
    prefix = _prefix(config)
    try:
        summary, files = HANDLERS[config.command](values, config, prefix)
    except ConfigurationError as exc:
        return RunResult(EXIT_CONFIG, diagnostic=str(exc))
    except NumericalDomainError as exc:
        return RunResult(EXIT_DOMAIN, diagnostic=str(exc))
    meta = {
        "command": config.command,
        "parameters": values,
        "output": prefix,
        "seed": config.seed,
        "versions": {"decoherence": __version__, "numpy": np.__version__},
        "tolerances": {k: getattr(TOL, k) for k in TOL.__dataclass_fields__ if k != "extra"},
        "workers": workers,
        "files": [os.path.basename(f) for f in files],
        "summary": summary,
    }
    files.append(dio.write_json(prefix + "_meta.json", meta))
    return RunResult(EXIT_OK, summary, files)


def _sweep_values(spec):
    key, _, rng = spec.partition("=")
    if not key or not rng:
        raise ConfigurationError(f"--sweep expects key=a:b:n or key=v1,v2,..., got {spec!r}")
    if ":" in rng:
        a, b, n = rng.split(":")
        values = np.linspace(float(a), float(b), int(n))
    else:
        values = [float(x) for x in rng.split(",")]
    return key, [dio.format_float(x) for x in values]


def _run_one(args):
    config, workers = args
    return execute(config, workers)


def run_sweep(config: ScenarioConfig, spec: str, workers=1) -> list[RunResult]:
    key, values = _sweep_values(spec)
    prefix = _prefix(config)
    configs = [replace(config, parameters={**config.parameters, key: val}, output=f"{prefix}_sweep{i:03d}")
               for i, val in enumerate(values)]
    jobs = [(c, workers) for c in configs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    index_rows = [(i, key, val, r.status) for i, (val, r) in enumerate(zip(values, results))]
    dio.write_csv(prefix + "_sweep_index.csv", ("index", "key", "value", "status"), index_rows)
    return results


def run(config: ScenarioConfig, workers=1) -> RunResult:
    return execute(config, workers)


# --- entry point -------------------------------------------------------------------

def _print_summary(cmd, summary, stream):
    for key, value in summary.items():
        if key == "runs":
            for run in value:
                print(" ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in run.items()),
                      file=stream)
            continue
        if isinstance(value, (dict, list)) and key not in ("weights",):
            continue
        if isinstance(value, np.ndarray):
            value = " ".join(f"{x:.10g}" for x in value)
        elif isinstance(value, float):
            value = f"{value:.10g}"
        print(f"{key}: {value}", file=stream)


def _parse_params(tokens):
    params, i = {}, 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--"):
            raise ConfigurationError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise ConfigurationError(f"missing value for --{key}")
            value = tokens[i + 1]
            i += 2
        params[key] = value
    return params


def build_parser():
    ap = argparse.ArgumentParser(prog="decoherence", description=__doc__.split("\n\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter,
                                 epilog="commands: " + ", ".join(COMMANDS))
    ap.add_argument("command", nargs="?", help="scenario to run (or taken from --config)")
    ap.add_argument("--config", help="key = value config file")
    ap.add_argument("--output", help="output path prefix")
    ap.add_argument("--seed", type=int, help="seed for randomized inputs")
    ap.add_argument("--json", action="store_true", help="print a JSON summary on stdout")
    ap.add_argument("--validate", action="store_true", help="only report configuration problems")
    ap.add_argument("--sweep", help="key=a:b:n (linspace) or key=v1,v2,... fan-out")
    ap.add_argument("--workers", type=int, default=1, help="concurrent sweep runs")
    ap.add_argument("--list-params", action="store_true", help="show the parameters of a command")
    return ap


def config_from_args(argv):
    ap = build_parser()
    ns, rest = ap.parse_known_args(argv)
    file_params = read_config_file(ns.config) if ns.config else {}
    command = ns.command or file_params.pop("command", None)
    file_params.pop("command", None)
    output = ns.output or file_params.pop("output", None)
    file_params.pop("output", None)
    seed = ns.seed if ns.seed is not None else int(file_params.pop("seed", 0))
    file_params.pop("seed", None)
    if command is None:
        raise ConfigurationError("no command given")
    params = {**file_params, **_parse_params(rest)}
    return ScenarioConfig(command, params, output, seed), ns


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config, ns = config_from_args(argv)
    except (ConfigurationError, OSError, ValueError) as exc:
        print(f"decoherence: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if ns.list_params:
        for key, p in SCHEMA.get(config.command, {}).items():
            extra = f" {list(p.choices)}" if p.choices else ""
            print(f"--{key} ({p.kind.__name__}, default {p.default}){extra}: {p.help}")
        return EXIT_OK

    if ns.validate:
        diags = validate(config)
        if ns.json:
            print(json.dumps({"diagnostics": diags}))
        for d in diags:
            print(d, file=sys.stderr)
        return EXIT_CONFIG if diags else EXIT_OK

    if ns.sweep:
        try:
            results = run_sweep(config, ns.sweep, ns.workers)
        except ConfigurationError as exc:
            print(f"decoherence: error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        status = max(r.status for r in results)
        for r in results:
            if r.diagnostic:
                print(f"decoherence: {r.diagnostic}", file=sys.stderr)
        if ns.json:
            print(dio.dumps([r.summary for r in results]))
        return status

    result = execute(config, ns.workers)
    if result.status != EXIT_OK:
        print(f"decoherence: error: {result.diagnostic}", file=sys.stderr)
        return result.status
    if ns.json:
        print(dio.dumps(result.summary))
    else:
        _print_summary(config.command, result.summary, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
