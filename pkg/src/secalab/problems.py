"""Benchmark Hamiltonians and their exact oracles.

Two problem families: the spin-1/2 Heisenberg chain (spin operators S =
sigma/2, so each bond contributes J/4 per Pauli word) and random QUBO
instances mapped to a diagonal Ising observable.

QUBO encoding: vertex i maps to qubit i and assignment x_i is read off the
basis index bit i, i.e. x_i = (1 - <Z_i>)/2.  The Ising observable plus its
recorded constant offset therefore reproduces the quadratic cost on every
computational basis state, and minimizing the observable minimizes the cost.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seeds import as_rng
from .statevec import CapacityError, PauliObservable, PauliString, to_matrix

BRUTE_FORCE_MAX = 20
DENSE_MAX = 12


@dataclass(frozen=True)
class HeisenbergSpec:
    n_sites: int
    coupling: float = 1.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.n_sites}")
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"boundary must be periodic or open, got {self.boundary!r}")


def heisenberg(spec: HeisenbergSpec) -> PauliObservable:
    """Nearest-neighbor S.S chain; periodic closes the ring (once for n=2)."""
    n = spec.n_sites
    bonds = [(i, i + 1) for i in range(n - 1)]
    if spec.boundary == "periodic" and n > 2:
        bonds.append((n - 1, 0))
    coeff = spec.coupling / 4.0
    terms = []
    for i, j in bonds:
        for letter in ("X", "Y", "Z"):
            word = ["I"] * n
            word[i] = letter
            word[j] = letter
            terms.append(PauliString(coeff, tuple(word)))
    return PauliObservable(tuple(terms))


class QuboInstance:
    """Symmetric zero-diagonal weight matrix over n vertices."""

    def __init__(self, weights: np.ndarray, seed: int | None = None):
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise ValueError(f"weights must be square, got shape {weights.shape}")
        if not np.array_equal(weights, weights.T):
            raise ValueError("weights must be exactly symmetric")
        if np.any(np.diagonal(weights) != 0.0):
            raise ValueError("weights must have zero diagonal")
        self.weights = weights
        self.seed = seed

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.weights[i, j] != 0.0:
                    out.append((i, j, float(self.weights[i, j])))
        return out

    @property
    def density(self) -> float:
        n = self.n
        return 2.0 * len(self.edges) / (n * (n - 1))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [{"i": i, "j": j, "w": w} for i, j, w in self.edges],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuboInstance":
        weights = np.zeros((data["n"], data["n"]))
        for e in data["edges"]:
            weights[e["i"], e["j"]] = e["w"]
            weights[e["j"], e["i"]] = e["w"]
        return cls(weights, data.get("seed"))


def random_qubo(
    n: int,
    density_target: float,
    weight_range: tuple[float, float] = (-1.0, 1.0),
    rng=None,
) -> QuboInstance:
    """Random instance with round(D*n*(n-1)/2) distinct edges.

    Edge weights are uniform over ``weight_range``; zero draws are nudged to
    the range midpoint offset so the edge count is exact.
    """
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got {n}")
    if not 0.0 < density_target <= 1.0:
        raise ValueError(f"density must be in (0, 1], got {density_target}")
    if not weight_range[0] < weight_range[1]:
        raise ValueError(f"weight range must be nonempty, got {weight_range}")
    n_possible = n * (n - 1) // 2
    n_edges = round(density_target * n_possible)
    if n_edges < 1:
        raise ValueError(f"density {density_target} yields no edges for n={n}")
    seed = rng if isinstance(rng, int) else None
    rng = as_rng(rng)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = rng.choice(n_possible, size=n_edges, replace=False)
    lo, hi = weight_range
    weights = np.zeros((n, n))
    for k in chosen:
        i, j = pairs[int(k)]
        w = rng.uniform(lo, hi)
        while w == 0.0:  # keep the edge count exact
            w = rng.uniform(lo, hi)
        weights[i, j] = weights[j, i] = w
    return QuboInstance(weights, seed=seed)


def qubo_cost(x, weights) -> float:
    """Quadratic cost sum_ij x_i M_ij x_j over an ordered double sum."""
    if isinstance(weights, QuboInstance):
        weights = weights.weights
    x = np.asarray(x)
    if x.shape != (weights.shape[0],):
        raise ValueError(f"assignment length {x.shape} does not match n={weights.shape[0]}")
    if np.any((x != 0) & (x != 1)):
        raise ValueError("assignment entries must be 0 or 1")
    x = x.astype(float)
    return float(x @ weights @ x)


class IsingForm:
    """Diagonal observable + constant offset equivalent to a QUBO cost."""

    def __init__(
        self,
        observable: PauliObservable,
        offset: float,
        coupling: np.ndarray,
        fields: np.ndarray,
    ):
        self.observable = observable
        self.offset = offset
        self.coupling = coupling
        self.fields = fields


def to_ising(instance: QuboInstance | np.ndarray) -> IsingForm:
    """Map a QUBO to Z-operators via x_i = (1 - Z_i)/2.

    Stored metadata keeps the conventional coupling J_ij = -M_ij and field
    h_i = -sum_j M_ij; the returned observable is scaled and signed so that
    its basis-state value plus the offset equals the quadratic cost directly.
    """
    if not isinstance(instance, QuboInstance):
        instance = QuboInstance(instance)
    m = instance.weights
    n = instance.n
    row_sums = m.sum(axis=1)
    terms = []
    for i in range(n):
        for j in range(i + 1, n):
            if m[i, j] != 0.0:
                word = ["I"] * n
                word[i] = "Z"
                word[j] = "Z"
                terms.append(PauliString(m[i, j] / 2.0, tuple(word)))
    for i in range(n):
        if row_sums[i] != 0.0:
            word = ["I"] * n
            word[i] = "Z"
            terms.append(PauliString(-row_sums[i] / 2.0, tuple(word)))
    if not terms:
        terms.append(PauliString(0.0, tuple("I" * n)))
    offset = float(m.sum()) / 4.0
    return IsingForm(PauliObservable(tuple(terms)), offset, -m, -row_sums)


def ising_basis_energies(form: IsingForm) -> np.ndarray:
    """<x|observable|x> + offset for every basis index (bit i of x = x_i)."""
    n = form.observable.n_qubits
    idx = np.arange(1 << n)
    out = np.full(1 << n, form.offset)
    for term in form.observable.terms:
        mask = 0
        for q, letter in enumerate(term.letters):
            if letter == "Z":
                mask |= 1 << q
            elif letter != "I":
                raise ValueError("basis energies need a Z-diagonal observable")
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & mask) & 1)
        out += term.coefficient * signs
    return out


def brute_force_min(weights) -> tuple[np.ndarray, float]:
    """Exhaustive QUBO minimum; ties break to the smallest basis index."""
    if isinstance(weights, QuboInstance):
        weights = weights.weights
    n = weights.shape[0]
    if n > BRUTE_FORCE_MAX:
        raise CapacityError(f"brute force capped at n={BRUTE_FORCE_MAX}, got {n}")
    best_cost = np.inf
    best_index = 0
    qubits = np.arange(n)
    for start in range(0, 1 << n, 1 << 16):
        idx = np.arange(start, min(start + (1 << 16), 1 << n))
        bits = ((idx[:, None] >> qubits[None, :]) & 1).astype(float)
        costs = np.einsum("bi,ij,bj->b", bits, weights, bits)
        k = int(np.argmin(costs))
        if costs[k] < best_cost:
            best_cost = float(costs[k])
            best_index = int(idx[k])
    best_x = (best_index >> qubits) & 1
    return best_x.astype(np.uint8), best_cost


def exact_ground(obs: PauliObservable) -> float:
    """Smallest eigenvalue of the dense observable matrix."""
    if obs.n_qubits > DENSE_MAX:
        raise CapacityError(f"dense eigensolve capped at n={DENSE_MAX}, got {obs.n_qubits}")
    return float(np.linalg.eigvalsh(to_matrix(obs))[0])


@dataclass(frozen=True)
class VScoreInputs:
    e_vqe: float
    e_var: float
    n_dof: int
    e_inf: float = 0.0


def v_score(inputs: VScoreInputs) -> float:
    """Dimensionless accuracy proxy N*E_var/(E_vqe - E_inf)^2."""
    if inputs.e_vqe == inputs.e_inf:
        raise ValueError("v-score undefined when the energy equals the zero point")
    return inputs.n_dof * inputs.e_var / (inputs.e_vqe - inputs.e_inf) ** 2
