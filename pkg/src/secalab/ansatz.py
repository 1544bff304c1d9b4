"""Bipartite multi-layer hardware-efficient circuits.

A spec with n qubits splits the register into two blocks of n/2 qubits
(block one: qubits 0..n/2-1, block two: n/2..n-1).  Each unit layer applies
an Rx, Ry, Rz column over all qubits (one fresh parameter per rotation, in
emission order), a nearest-neighbor CZ chain inside each block, and -- on
layers selected by the connection scheme -- one boundary CZ between qubits
n/2-1 and n/2.

Connection schemes: FECA connects every layer, SECA only the middle layer
((L+1)//2 for both parities), NoCZ none, and Custom takes an explicit layer
set.  The per-layer rotation order Rx -> Ry -> Rz is fixed and recorded in
serialized output.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .statevec import StateVector, cz_block, init_zero, rotate_block

INTRA_ENTANGLERS = ("linear_chain", "none")


def middle_layer(n_layers: int) -> int:
    """SECA's connected layer: (L+1)/2 for odd L, L/2 for even L."""
    return (n_layers + 1) // 2


@dataclass(frozen=True)
class ConnectionScheme:
    """Which layers carry the boundary CZ between the two blocks."""

    variant: str
    custom_layers: frozenset[int] = frozenset()

    @classmethod
    def feca(cls) -> "ConnectionScheme":
        return cls("feca")

    @classmethod
    def seca(cls) -> "ConnectionScheme":
        return cls("seca")

    @classmethod
    def nocz(cls) -> "ConnectionScheme":
        return cls("nocz")

    @classmethod
    def custom(cls, layers) -> "ConnectionScheme":
        layers = frozenset(int(l) for l in layers)
        if any(l < 1 for l in layers):
            raise ValueError("custom connection layers are 1-based")
        return cls("custom", layers)

    def connected_layers(self, n_layers: int) -> frozenset[int]:
        if self.variant == "feca":
            return frozenset(range(1, n_layers + 1))
        if self.variant == "seca":
            return frozenset({middle_layer(n_layers)})
        if self.variant == "nocz":
            return frozenset()
        if self.variant == "custom":
            if any(l > n_layers for l in self.custom_layers):
                raise ValueError(
                    f"custom layers {sorted(self.custom_layers)} exceed L={n_layers}"
                )
            return self.custom_layers
        raise ValueError(f"unknown connection scheme variant {self.variant!r}")

    def label(self) -> str:
        if self.variant == "custom":
            return "custom{%s}" % ",".join(str(l) for l in sorted(self.custom_layers))
        return self.variant


def ncz_sweep_scheme(n_layers: int, n_cz: int) -> ConnectionScheme:
    """Custom scheme with ``n_cz`` boundary CZs spread evenly over 1..L.

    Layer i of n_cz sits at the midpoint quantile (2i-1)*L/(2*n_cz), rounded
    half-up; n_cz == L reproduces the full set, n_cz == 1 the middle layer.
    """
    if not 0 <= n_cz <= n_layers:
        raise ValueError(f"n_cz={n_cz} outside 0..{n_layers}")
    chosen: set[int] = set()
    for i in range(1, n_cz + 1):
        layer = math.floor((2 * i - 1) * n_layers / (2 * n_cz) + 0.5)
        layer = min(max(layer, 1), n_layers)
        # midpoint spacing is >= 1 so collisions cannot happen; shift outward
        # defensively anyway
        while layer in chosen and layer < n_layers:
            layer += 1
        while layer in chosen and layer > 1:
            layer -= 1
        chosen.add(layer)
    return ConnectionScheme.custom(chosen)


@dataclass(frozen=True)
class AnsatzSpec:
    """Bipartite multi-layer HEA description."""

    n_qubits: int
    layers: int
    scheme: ConnectionScheme
    intra_entangler: str = "linear_chain"

    def __post_init__(self):
        if self.n_qubits < 2 or self.n_qubits % 2:
            raise ValueError(f"n_qubits must be even and >= 2, got {self.n_qubits}")
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        if self.intra_entangler not in INTRA_ENTANGLERS:
            raise ValueError(
                f"intra_entangler {self.intra_entangler!r} not in {INTRA_ENTANGLERS}"
            )
        self.scheme.connected_layers(self.layers)  # validates custom sets

    def label(self) -> str:
        return f"{self.scheme.label()}(n={self.n_qubits},L={self.layers})"


@dataclass(frozen=True)
class Rotation:
    axis: str
    qubit: int
    param: int


@dataclass(frozen=True)
class CZ:
    q1: int
    q2: int


@dataclass(frozen=True)
class Circuit:
    """Executable gate list; parameter indices cover 0..n_params-1 exactly once."""

    n_qubits: int
    n_params: int
    gates: tuple

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        params = sorted(g.param for g in self.gates if isinstance(g, Rotation))
        if params != list(range(self.n_params)):
            raise ValueError("parameter indices must cover 0..n_params-1 exactly once")


def param_count(spec: AnsatzSpec) -> int:
    """Three rotation parameters per qubit per layer."""
    return 3 * spec.n_qubits * spec.layers


def cz_count(spec: AnsatzSpec) -> int:
    """Total CZ gates: intra-block chains plus boundary connections."""
    intra = (spec.n_qubits - 2) * spec.layers if spec.intra_entangler == "linear_chain" else 0
    return intra + len(spec.scheme.connected_layers(spec.layers))


def build(spec: AnsatzSpec) -> Circuit:
    """Deterministic gate list for the spec."""
    half = spec.n_qubits // 2
    connected = spec.scheme.connected_layers(spec.layers)
    gates: list = []
    param = 0
    for layer in range(1, spec.layers + 1):
        for axis in ("x", "y", "z"):
            for q in range(spec.n_qubits):
                gates.append(Rotation(axis, q, param))
                param += 1
        if spec.intra_entangler == "linear_chain":
            for q in range(half - 1):
                gates.append(CZ(q, q + 1))
            for q in range(half, spec.n_qubits - 1):
                gates.append(CZ(q, q + 1))
        if layer in connected:
            gates.append(CZ(half - 1, half))
    return Circuit(spec.n_qubits, param, tuple(gates))


def run(circuit: Circuit, theta: np.ndarray) -> StateVector:
    """Apply the circuit to the all-zero state."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise ValueError(f"expected {circuit.n_params} parameters, got shape {theta.shape}")
    state = init_zero(circuit.n_qubits)
    block = state.amplitudes[None, :]
    for gate in circuit.gates:
        if isinstance(gate, Rotation):
            rotate_block(block, circuit.n_qubits, gate.axis, gate.qubit, theta[gate.param])
        else:
            cz_block(block, circuit.n_qubits, gate.q1, gate.q2)
    return state


def run_batch(circuit: Circuit, thetas: np.ndarray) -> np.ndarray:
    """Simulate many parameter vectors at once; returns (batch, 2**n) amplitudes."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] != circuit.n_params:
        raise ValueError(
            f"expected (batch, {circuit.n_params}) parameter block, got {thetas.shape}"
        )
    block = np.zeros((thetas.shape[0], 1 << circuit.n_qubits), dtype=complex)
    block[:, 0] = 1.0
    for gate in circuit.gates:
        if isinstance(gate, Rotation):
            rotate_block(block, circuit.n_qubits, gate.axis, gate.qubit, thetas[:, gate.param])
        else:
            cz_block(block, circuit.n_qubits, gate.q1, gate.q2)
    return block


def prepare(spec: AnsatzSpec, theta: np.ndarray) -> StateVector:
    """Output state of the spec's circuit for the given parameters."""
    return run(build(spec), theta)


# ---------------------------------------------------------------------------
# JSON gate-list round-tripping

def circuit_to_dict(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        if isinstance(g, Rotation):
            gates.append({"kind": "rot", "axis": g.axis, "q": g.qubit, "p": g.param})
        else:
            gates.append({"kind": "cz", "q1": g.q1, "q2": g.q2})
    return {"n": circuit.n_qubits, "gates": gates}


def circuit_from_dict(data: dict) -> Circuit:
    gates: list = []
    n_params = 0
    for entry in data["gates"]:
        if entry["kind"] == "rot":
            gates.append(Rotation(entry["axis"], entry["q"], entry["p"]))
            n_params = max(n_params, entry["p"] + 1)
        elif entry["kind"] == "cz":
            gates.append(CZ(entry["q1"], entry["q2"]))
        else:
            raise ValueError(f"unknown gate kind {entry['kind']!r}")
    return Circuit(data["n"], n_params, tuple(gates))


def circuit_to_json(circuit: Circuit) -> str:
    return json.dumps(circuit_to_dict(circuit))


def circuit_from_json(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))
