"""Gradient-based variational optimization on exact statevector energies.

Gradients come from the parameter-shift rule (every gate is a rotation
generated by a Pauli, so +-pi/2 shifts give the exact derivative); all
shifted evaluations of one step run as a single simulation batch.  Traces
record energy, energy variance, and the V-score accuracy proxy per step,
and fixed seeds make complete runs bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ansatz import AnsatzSpec, Circuit, build, run_batch
from .statevec import PauliObservable, expectation_block, observable_variance, StateVector
from .problems import VScoreInputs, v_score

OPTIMIZERS = ("adam", "vanilla_gd")
INIT_POLICIES = ("uniform_0_2pi", "small_normal")

SMALL_NORMAL_SCALE = 0.1
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class NumericalError(RuntimeError):
    """Training produced a non-finite quantity."""


@dataclass(frozen=True)
class TrainConfig:
    max_steps: int
    learning_rate: float = 0.05
    optimizer: str = "adam"
    seed: int = 0
    init_policy: str = "uniform_0_2pi"

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer {self.optimizer!r} not in {OPTIMIZERS}")
        if self.init_policy not in INIT_POLICIES:
            raise ValueError(f"init_policy {self.init_policy!r} not in {INIT_POLICIES}")


@dataclass(frozen=True)
class StepRecord:
    step: int
    energy: float
    e_var: float
    v_score: float


@dataclass
class TrainTrace:
    """Optimization trace: one record per executed step plus the initial point."""

    initial: StepRecord
    records: list[StepRecord]
    theta: np.ndarray
    n_dof: int
    e_inf: float

    @property
    def final(self) -> StepRecord:
        return self.records[-1] if self.records else self.initial


@dataclass(frozen=True)
class RepeatResult:
    rep: int
    seed: int
    final_energy: float
    final_v_score: float


@dataclass
class RepeatStats:
    results: list[RepeatResult]
    mean_energy: float
    var_energy: float
    mean_v_score: float
    var_v_score: float


def _as_circuit(target: AnsatzSpec | Circuit) -> Circuit:
    return build(target) if isinstance(target, AnsatzSpec) else target


def energy_batch(circuit: Circuit, thetas: np.ndarray, obs: PauliObservable) -> np.ndarray:
    """Cost values for a block of parameter vectors, chunked for memory."""
    thetas = np.asarray(thetas, dtype=float)
    out = np.empty(len(thetas))
    step = max(1, (1 << 21) >> circuit.n_qubits)
    for start in range(0, len(thetas), step):
        chunk = thetas[start : min(start + step, len(thetas))]
        out[start : start + len(chunk)] = expectation_block(
            run_batch(circuit, chunk), circuit.n_qubits, obs
        )
    return out


def parameter_shift_grad(
    target: AnsatzSpec | Circuit, obs: PauliObservable, theta: np.ndarray
) -> np.ndarray:
    """Exact gradient: component k is [C(theta + pi/2 e_k) - C(theta - pi/2 e_k)]/2."""
    circuit = _as_circuit(target)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise ValueError(f"expected {circuit.n_params} parameters, got shape {theta.shape}")
    p = circuit.n_params
    if p == 0:
        return np.zeros(0)
    shifted = np.tile(theta, (2 * p, 1))
    diag = np.arange(p)
    shifted[diag, diag] += np.pi / 2
    shifted[p + diag, diag] -= np.pi / 2
    energies = energy_batch(circuit, shifted, obs)
    return (energies[:p] - energies[p:]) / 2.0


def _trace_v_score(energy: float, e_var: float, n_dof: int, e_inf: float) -> float:
    if e_var == 0.0:
        return 0.0
    if energy == e_inf:
        return float("inf")
    return v_score(VScoreInputs(energy, e_var, n_dof, e_inf))


def _evaluate(circuit: Circuit, obs: PauliObservable, theta, step, n_dof, e_inf) -> StepRecord:
    state = StateVector(circuit.n_qubits, run_batch(circuit, theta[None, :])[0])
    energy = float(expectation_block(state.amplitudes, circuit.n_qubits, obs))
    e_var = observable_variance(state, obs)
    if not np.isfinite(energy) or not np.isfinite(e_var):
        raise NumericalError(f"non-finite energy at step {step}: E={energy}, E_var={e_var}")
    return StepRecord(step, energy, e_var, _trace_v_score(energy, e_var, n_dof, e_inf))


def train(
    spec: AnsatzSpec,
    obs: PauliObservable,
    config: TrainConfig,
    e_inf: float = 0.0,
) -> TrainTrace:
    """Run the configured optimizer for a fixed step budget (no early stop)."""
    circuit = build(spec)
    if obs.n_qubits != spec.n_qubits:
        raise ValueError(f"observable acts on {obs.n_qubits} qubits, spec has {spec.n_qubits}")
    rng = np.random.default_rng(config.seed)
    if config.init_policy == "uniform_0_2pi":
        theta = rng.uniform(0.0, 2.0 * np.pi, circuit.n_params)
    else:
        theta = rng.normal(0.0, SMALL_NORMAL_SCALE, circuit.n_params)
    n_dof = spec.n_qubits
    initial = _evaluate(circuit, obs, theta, 0, n_dof, e_inf)

    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    records: list[StepRecord] = []
    for step in range(1, config.max_steps + 1):
        grad = parameter_shift_grad(circuit, obs, theta)
        if not np.all(np.isfinite(grad)):
            raise NumericalError(f"non-finite gradient at step {step}")
        if config.optimizer == "adam":
            m = ADAM_BETA1 * m + (1 - ADAM_BETA1) * grad
            v = ADAM_BETA2 * v + (1 - ADAM_BETA2) * grad**2
            m_hat = m / (1 - ADAM_BETA1**step)
            v_hat = v / (1 - ADAM_BETA2**step)
            theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
        else:
            theta = theta - config.learning_rate * grad
        records.append(_evaluate(circuit, obs, theta, step, n_dof, e_inf))
    return TrainTrace(initial, records, theta, n_dof, e_inf)


def repeat_experiment(
    spec: AnsatzSpec,
    obs: PauliObservable,
    config: TrainConfig,
    reps: int,
    base_seed: int,
    e_inf: float = 0.0,
) -> RepeatStats:
    """Re-run the same experiment with seeds base_seed..base_seed+reps-1."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    results = []
    for rep in range(reps):
        seed = base_seed + rep
        trace = train(spec, obs, replace(config, seed=seed), e_inf=e_inf)
        results.append(RepeatResult(rep, seed, trace.final.energy, trace.final.v_score))
    energies = np.array([r.final_energy for r in results])
    scores = np.array([r.final_v_score for r in results])
    return RepeatStats(
        results,
        float(energies.mean()),
        float(energies.var()),
        float(scores.mean()),
        float(scores.var()),
    )
