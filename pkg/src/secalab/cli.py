"""Batch experiment harness.

Subcommands (all JSON-configured, all reproducible from a single seed):

* ``metrics``     -- expressibility / entangling-capability / gradient-variance
                     sweeps over layers, boundary-CZ count, or connection layer.
* ``vqe``         -- Heisenberg or QUBO training runs with repetition stats.
* ``cut-verify``  -- gate-cut reconstruction against the uncut simulator.
* ``plot``        -- deterministic SVG line charts from result CSVs.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 cut verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .ansatz import AnsatzSpec, ConnectionScheme, build, ncz_sweep_scheme, prepare
from .gatecut import CutEnsemble, cz_cut_ensemble, execute_cut, split
from .metrics import (
    DEFAULT_BINS,
    DEFAULT_ENT_SAMPLES,
    DEFAULT_EXP_PAIRS,
    DEFAULT_GRAD_SAMPLES,
    boundary_zz,
    estimate_entangling_capability,
    estimate_expressibility,
    estimate_gradient_variance,
    trainability_probe,
)
from .problems import HeisenbergSpec, heisenberg, random_qubo, to_ising
from .seeds import substream
from .statevec import expectation
from .svgplot import Series, line_chart
from .vqe import NumericalError, TrainConfig, train

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

SCHEMA_VERSION = 1
CUT_TOLERANCE = 1e-9

METRICS_HEADER = ["arch", "n", "L", "n_cz", "l_cz", "seed", "metric", "value", "samples"]
TRACE_HEADER = ["step", "energy", "e_var", "v_score"]
STATS_HEADER = ["rep", "seed", "final_energy", "final_v_score"]

KNOWN_METRICS = ("exp_kl", "ent", "grad_var")


class ConfigError(ValueError):
    """Bad or missing configuration input."""


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if cfg.get("version") != SCHEMA_VERSION:
        raise ConfigError(f"config version must be {SCHEMA_VERSION}, got {cfg.get('version')!r}")
    return cfg


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"config is missing required key {key!r}")
    return cfg[key]


def _int_list(cfg: dict, key: str) -> list[int]:
    value = _require(cfg, key)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"config key {key!r} must be a non-empty list")
    return [int(v) for v in value]


def _scheme_for(name: str) -> ConnectionScheme:
    table = {
        "feca": ConnectionScheme.feca,
        "seca": ConnectionScheme.seca,
        "nocz": ConnectionScheme.nocz,
    }
    if name not in table:
        raise ConfigError(f"unknown architecture {name!r}, expected one of {sorted(table)}")
    return table[name]()


def _map_ordered(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# metrics

def cmd_metrics(cfg: dict, out_dir: Path, threads: int) -> Path:
    seed = int(_require(cfg, "seed"))
    n_qubits = int(_require(cfg, "n_qubits"))
    sweep = cfg.get("sweep", "layers")
    wanted = cfg.get("metrics", list(KNOWN_METRICS))
    for name in wanted:
        if name not in KNOWN_METRICS:
            raise ConfigError(f"unknown metric {name!r}, expected subset of {KNOWN_METRICS}")
    n_seeds = int(cfg.get("n_seeds", 1))
    if n_seeds < 1:
        raise ConfigError("n_seeds must be >= 1")
    exp_pairs = int(cfg.get("exp_pairs", DEFAULT_EXP_PAIRS))
    ent_samples = int(cfg.get("ent_samples", DEFAULT_ENT_SAMPLES))
    grad_samples = int(cfg.get("grad_samples", DEFAULT_GRAD_SAMPLES))
    bins = int(cfg.get("bins", DEFAULT_BINS))
    grad_param = int(cfg.get("grad_param_index", 0))
    grad_probe = cfg.get("grad_probe", "block_zz")
    if grad_probe not in ("block_zz", "cross_zz"):
        raise ConfigError(f"grad_probe must be block_zz or cross_zz, got {grad_probe!r}")

    points: list[tuple[str, AnsatzSpec]] = []
    if sweep == "layers":
        archs = cfg.get("architectures", ["feca", "seca", "nocz"])
        for arch in archs:
            scheme = _scheme_for(arch)
            for layers in _int_list(cfg, "layers"):
                points.append((arch, AnsatzSpec(n_qubits, layers, scheme)))
    elif sweep == "ncz":
        layers = int(_require(cfg, "layers"))
        for n_cz in _int_list(cfg, "ncz_values"):
            points.append(("custom", AnsatzSpec(n_qubits, layers, ncz_sweep_scheme(layers, n_cz))))
    elif sweep == "lcz":
        layers = int(_require(cfg, "layers"))
        for l_cz in _int_list(cfg, "lcz_values"):
            scheme = ConnectionScheme.custom({l_cz})
            points.append(("custom", AnsatzSpec(n_qubits, layers, scheme)))
    else:
        raise ConfigError(f"unknown sweep {sweep!r}, expected layers|ncz|lcz")

    jobs = []
    for arch, spec in points:
        connected = spec.scheme.connected_layers(spec.layers)
        n_cz = len(connected)
        l_cz = next(iter(connected)) if n_cz == 1 else ""
        for seed_index in range(n_seeds):
            for metric in wanted:
                jobs.append((arch, spec, n_cz, l_cz, seed_index, metric))

    def compute(job) -> list:
        arch, spec, n_cz, l_cz, seed_index, metric = job
        purpose = f"metrics:{metric}:{arch}:n={spec.n_qubits}:L={spec.layers}:ncz={n_cz}:lcz={l_cz}"
        rng = substream(seed, purpose, seed_index)
        if metric == "exp_kl":
            report = estimate_expressibility(spec, exp_pairs, bins, rng)
            value, samples = report.kl_divergence, report.n_pairs
        elif metric == "ent":
            report = estimate_entangling_capability(spec, ent_samples, rng)
            value, samples = report.ent, report.n_samples
        else:
            probe_fn = trainability_probe if grad_probe == "block_zz" else boundary_zz
            report = estimate_gradient_variance(
                spec, probe_fn(spec.n_qubits), grad_param, grad_samples, rng
            )
            value, samples = report.variance, report.n_samples
        return [arch, spec.n_qubits, spec.layers, n_cz, l_cz, seed_index, metric, value, samples]

    rows = _map_ordered(compute, jobs, threads)
    path = out_dir / cfg.get("out_csv", "metrics.csv")
    _write_csv(path, METRICS_HEADER, rows)
    return path


# ---------------------------------------------------------------------------
# vqe

def _train_config(cfg: dict, seed: int) -> TrainConfig:
    return TrainConfig(
        max_steps=int(_require(cfg, "max_steps")),
        learning_rate=float(cfg.get("learning_rate", 0.05)),
        optimizer=cfg.get("optimizer", "adam"),
        seed=seed,
        init_policy=cfg.get("init_policy", "uniform_0_2pi"),
    )


def _point_seed(root_seed: int, purpose: str, index: int) -> int:
    return int(substream(root_seed, purpose, index).integers(0, 2**31))


def cmd_vqe(cfg: dict, out_dir: Path, threads: int) -> list[Path]:
    seed = int(_require(cfg, "seed"))
    problem = _require(cfg, "problem")
    if problem not in ("heisenberg", "qubo"):
        raise ConfigError(f"problem must be heisenberg or qubo, got {problem!r}")
    n_qubits = int(_require(cfg, "n_qubits"))
    archs = cfg.get("architectures", ["feca", "seca"])
    layer_values = _int_list(cfg, "layers")
    reps = int(cfg.get("reps", 1))
    if reps < 1:
        raise ConfigError("reps must be >= 1")

    points: list[tuple[str, dict]] = []
    if problem == "heisenberg":
        boundary = cfg.get("boundary", "periodic")
        for arch in archs:
            for layers in layer_values:
                for j in cfg.get("j_values", [1.0]):
                    label = f"heisenberg_{arch}_L{layers}_J{j:g}"
                    points.append((label, {"arch": arch, "layers": layers, "j": float(j),
                                           "boundary": boundary}))
    else:
        for arch in archs:
            for layers in layer_values:
                for density in cfg.get("densities", [0.5]):
                    label = f"qubo_{arch}_L{layers}_D{density:g}"
                    points.append((label, {"arch": arch, "layers": layers,
                                           "density": float(density)}))

    def run_point(point) -> tuple[str, list[list], list[list]]:
        label, params = point
        spec = AnsatzSpec(n_qubits, params["layers"], _scheme_for(params["arch"]))
        trace_rows: list[list] = []
        stats_rows: list[list] = []
        finals_e: list[float] = []
        finals_v: list[float] = []
        for rep in range(reps):
            rep_seed = _point_seed(seed, f"vqe:{label}", rep)
            if problem == "heisenberg":
                obs = heisenberg(HeisenbergSpec(n_qubits, params["j"], params["boundary"]))
            else:
                instance = random_qubo(
                    n_qubits,
                    params["density"],
                    tuple(cfg.get("weight_range", (-1.0, 1.0))),
                    substream(seed, f"qubo-instance:{label}", rep),
                )
                obs = to_ising(instance).observable
            trace = train(spec, obs, _train_config(cfg, rep_seed))
            if rep == 0:
                for rec in [trace.initial] + trace.records:
                    trace_rows.append([rec.step, rec.energy, rec.e_var, rec.v_score])
            final = trace.final
            stats_rows.append([rep, rep_seed, final.energy, final.v_score])
            finals_e.append(final.energy)
            finals_v.append(final.v_score)
        stats_rows.append(["mean", "", float(np.mean(finals_e)), float(np.mean(finals_v))])
        stats_rows.append(["variance", "", float(np.var(finals_e)), float(np.var(finals_v))])
        return label, trace_rows, stats_rows

    written: list[Path] = []
    for label, trace_rows, stats_rows in _map_ordered(run_point, points, threads):
        trace_path = out_dir / f"trace_{label}.csv"
        stats_path = out_dir / f"stats_{label}.csv"
        _write_csv(trace_path, TRACE_HEADER, trace_rows)
        _write_csv(stats_path, STATS_HEADER, stats_rows)
        written.extend([trace_path, stats_path])
    return written


# ---------------------------------------------------------------------------
# cut-verify

def run_cut_verify(cfg: dict, out_dir: Path, ensemble: CutEnsemble | None = None) -> int:
    seed = int(_require(cfg, "seed"))
    n_qubits = int(_require(cfg, "n_qubits"))
    if n_qubits > 12:
        raise ConfigError(f"cut-verify capped at 12 qubits, got {n_qubits}")
    layers = int(_require(cfg, "layers"))
    arch = cfg.get("architecture", "seca")
    theta_seeds = int(cfg.get("theta_seeds", 10))
    budget = int(cfg.get("budget", 10**6))
    obs_kind = cfg.get("observable", "heisenberg")
    if obs_kind == "heisenberg":
        obs = heisenberg(
            HeisenbergSpec(n_qubits, float(cfg.get("coupling", 1.0)), cfg.get("boundary", "periodic"))
        )
    elif obs_kind == "boundary_zz":
        obs = boundary_zz(n_qubits)
    else:
        raise ConfigError(f"unknown observable {obs_kind!r}, expected heisenberg|boundary_zz")

    spec = AnsatzSpec(n_qubits, layers, _scheme_for(arch))
    half_a, half_b, cut_layers = split(spec)
    ens = ensemble if ensemble is not None else cz_cut_ensemble()
    k = len(cut_layers)
    circuit = build(spec)
    runs = []
    worst = (0.0, -1)
    for i in range(theta_seeds):
        theta = substream(seed, "cut-theta", i).uniform(0.0, 2.0 * np.pi, circuit.n_params)
        value = execute_cut(half_a, half_b, ens, theta, obs, budget)
        uncut = expectation(prepare(spec, theta), obs)
        err = abs(value - uncut)
        if err > worst[0]:
            worst = (err, i)
        runs.append(
            {
                "cuts": k,
                "terms_executed": len(ens.terms) ** k,
                "kappa": ens.kappa,
                "value": value,
                "uncut_value": uncut,
                "abs_error": err,
            }
        )
    passed = worst[0] < CUT_TOLERANCE
    report = {
        "version": SCHEMA_VERSION,
        "architecture": arch,
        "n_qubits": n_qubits,
        "layers": layers,
        "tolerance": CUT_TOLERANCE,
        "max_abs_error": worst[0],
        "pass": passed,
        "runs": runs,
    }
    with open(out_dir / "cut_report.json", "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    if not passed:
        print(
            f"cut verification failed: |error|={worst[0]:.3e} at theta seed {worst[1]} "
            f"(tolerance {CUT_TOLERANCE:g})",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# plot

def _read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read csv {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"csv {path} is empty")
    header, data = rows[0], rows[1:]
    if not data:
        raise ConfigError(f"csv {path} has no data rows")
    return header, data


def _series_from_groups(groups: dict[str, dict[float, list[float]]]) -> list[Series]:
    out = []
    for name, by_x in groups.items():
        xs = sorted(by_x)
        ys, errs = [], []
        for x in xs:
            vals = np.array(by_x[x])
            ys.append(float(vals.mean()))
            errs.append(float(vals.std()))
        out.append(Series(name, xs, ys, errs))
    return out


def cmd_plot(cfg: dict, out_dir: Path) -> list[Path]:
    header, data = _read_csv(str(_require(cfg, "csv")))
    title = cfg.get("title", "")
    written: list[Path] = []

    def emit(name: str, series: list[Series], xlabel: str, ylabel: str) -> None:
        path = out_dir / f"{name}.svg"
        path.write_text(line_chart(series, title or name, xlabel, ylabel))
        written.append(path)

    if header == METRICS_HEADER:
        col = {name: i for i, name in enumerate(header)}
        # x axis: the sweep column that actually varies (n_cz, l_cz, then L)
        for metric in sorted({row[col["metric"]] for row in data}):
            rows = [row for row in data if row[col["metric"]] == metric]
            x_col = "L"
            for candidate in ("n_cz", "l_cz"):
                if len({row[col[candidate]] for row in rows if row[col[candidate]] != ""}) > 1:
                    x_col = candidate
                    break
            groups: dict[str, dict[float, list[float]]] = {}
            for row in rows:
                if row[col[x_col]] == "":
                    continue
                arch = row[col["arch"]]
                x = float(row[col[x_col]])
                groups.setdefault(arch, {}).setdefault(x, []).append(float(row[col["value"]]))
            emit(metric, _series_from_groups(groups), x_col, metric)
    elif header == TRACE_HEADER:
        steps = [float(row[0]) for row in data]
        for i, name in enumerate(TRACE_HEADER[1:], start=1):
            emit(name, [Series(name, steps, [float(row[i]) for row in data])], "step", name)
    elif header == STATS_HEADER:
        reps = [row for row in data if row[0].isdigit()]
        if not reps:
            raise ConfigError("stats csv has no per-repetition rows")
        xs = [float(row[0]) for row in reps]
        for i, name in enumerate(STATS_HEADER[2:], start=2):
            emit(name, [Series(name, xs, [float(row[i]) for row in reps])], "rep", name)
    else:
        raise ConfigError(f"unrecognized csv schema: {header}")
    return written


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secalab", description="Bipartite-HEA characterization and VQE workbench"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("metrics", "vqe", "cut-verify", "plot"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON experiment config")
        cmd.add_argument("--out", default=None, help="output directory (default: config 'out' or .)")
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.add_argument("--threads", type=int, default=None, help="worker threads")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        out_dir = Path(args.out if args.out is not None else cfg.get("out", "."))
        out_dir.mkdir(parents=True, exist_ok=True)
        threads = args.threads
        if threads is None:
            threads = int(os.environ.get("SECALAB_THREADS", "1"))
        if args.command == "metrics":
            path = cmd_metrics(cfg, out_dir, threads)
            print(f"wrote {path}")
        elif args.command == "vqe":
            for path in cmd_vqe(cfg, out_dir, threads):
                print(f"wrote {path}")
        elif args.command == "cut-verify":
            return run_cut_verify(cfg, out_dir)
        else:
            for path in cmd_plot(cfg, out_dir):
                print(f"wrote {path}")
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())
