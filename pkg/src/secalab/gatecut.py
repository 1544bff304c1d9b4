"""Quasi-probability cutting of boundary CZ gates.

A CZ across the block boundary is, as a channel, the product of two local
quarter-turn Z phases and the two-qubit phase exp(-i*pi/4 * Z(x)Z).  The
two-qubit factor expands into a signed sum of local operations: an identity
pair, a Z pair, and eight measure/rotate cross terms over both sign choices
and both orderings.  Folding the projector and rotation normalizations into
the coefficients leaves ten terms of magnitude 1/2 each (kappa = 5), and
the fixed local phases compile straight into the half circuits.

Projector terms are non-unitary; half circuits keep the unnormalized vector
and expectations use the raw quadratic form, so all scalars stay in the
term coefficients.  With k cut points the exact reconstruction sums all
10**k term combinations of products of per-half expectations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ansatz import CZ, AnsatzSpec, ConnectionScheme, Rotation, build, cz_count
from .statevec import CapacityError, PauliObservable, cz_block, pauli_apply_block, rotate_block

OVERHEAD_BASE = 10
MAX_CUTS_OVERHEAD = 18
DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class LocalCutOp:
    """Single-qubit piece of one decomposition term.

    kind: identity | pauli_z | proj_z (projector onto the Z eigenspace with
    eigenvalue ``alpha``) | rot_z_quarter (exp(i*alpha*pi*Z/4)).
    """

    kind: str
    alpha: int = 0

    def __post_init__(self):
        if self.kind not in ("identity", "pauli_z", "proj_z", "rot_z_quarter"):
            raise ValueError(f"unknown cut op kind {self.kind!r}")
        if self.kind in ("proj_z", "rot_z_quarter") and self.alpha not in (-1, 1):
            raise ValueError(f"{self.kind} needs alpha in {{-1, +1}}")


@dataclass(frozen=True)
class CutTerm:
    coefficient: float
    op_a: LocalCutOp
    op_b: LocalCutOp

    def __post_init__(self):
        if not np.isfinite(self.coefficient) or self.coefficient == 0.0:
            raise ValueError(f"term coefficient must be finite and nonzero, got {self.coefficient}")


@dataclass(frozen=True)
class CutEnsemble:
    terms: tuple[CutTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if len(self.terms) != 10:
            raise ValueError(f"CZ cut ensemble has exactly 10 terms, got {len(self.terms)}")

    @property
    def kappa(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))


def cz_cut_ensemble() -> CutEnsemble:
    """The ten-term decomposition of the boundary CZ channel."""
    ident = LocalCutOp("identity")
    zop = LocalCutOp("pauli_z")
    terms = [
        CutTerm(0.5, ident, ident),
        CutTerm(0.5, zop, zop),
    ]
    for a1, a2 in itertools.product((1, -1), repeat=2):
        terms.append(
            CutTerm(-0.5 * a1 * a2, LocalCutOp("proj_z", a1), LocalCutOp("rot_z_quarter", a2))
        )
        terms.append(
            CutTerm(-0.5 * a1 * a2, LocalCutOp("rot_z_quarter", a1), LocalCutOp("proj_z", a2))
        )
    return CutEnsemble(tuple(terms))


# ---------------------------------------------------------------------------
# half circuits

@dataclass(frozen=True)
class FixedZ:
    """Unparameterized z rotation exp(-i*angle*Z/2) spliced at a cut."""

    qubit: int
    angle: float


@dataclass(frozen=True)
class CutSlot:
    """Placeholder where one term's local op is applied during execution."""

    index: int
    qubit: int


@dataclass(frozen=True)
class HalfCircuit:
    """One block's circuit; rotation params index into the full theta vector."""

    n_qubits: int
    boundary_qubit: int
    ops: tuple

    def __post_init__(self):
        for op in self.ops:
            qubits = (op.q1, op.q2) if isinstance(op, CZ) else (op.qubit,)
            if any(not 0 <= q < self.n_qubits for q in qubits):
                raise ValueError(f"op {op} leaves the {self.n_qubits}-qubit block")

    @property
    def n_cuts(self) -> int:
        return sum(1 for op in self.ops if isinstance(op, CutSlot))


def split(spec: AnsatzSpec) -> tuple[HalfCircuit, HalfCircuit, tuple[int, ...]]:
    """Route the spec's gates into two block-local circuits.

    Every boundary CZ becomes a cut point: both halves get the fixed local
    quarter phase plus a cut slot at that position.
    """
    half = spec.n_qubits // 2
    ops_a: list = []
    ops_b: list = []
    n_cuts = 0
    for gate in build(spec).gates:
        if isinstance(gate, Rotation):
            if gate.qubit < half:
                ops_a.append(gate)
            else:
                ops_b.append(Rotation(gate.axis, gate.qubit - half, gate.param))
        elif {gate.q1, gate.q2} == {half - 1, half}:
            # e^{i*pi*Z/4} == Rz(-pi/2) on each boundary qubit, every term
            ops_a.append(FixedZ(half - 1, -np.pi / 2))
            ops_b.append(FixedZ(0, -np.pi / 2))
            ops_a.append(CutSlot(n_cuts, half - 1))
            ops_b.append(CutSlot(n_cuts, 0))
            n_cuts += 1
        elif gate.q2 < half:
            ops_a.append(gate)
        else:
            ops_b.append(CZ(gate.q1 - half, gate.q2 - half))
    cut_layers = tuple(sorted(spec.scheme.connected_layers(spec.layers)))
    half_a = HalfCircuit(half, half - 1, tuple(ops_a))
    half_b = HalfCircuit(half, 0, tuple(ops_b))
    return half_a, half_b, cut_layers


def _apply_cut_op(amps: np.ndarray, n: int, qubit: int, op: LocalCutOp) -> None:
    low = 1 << qubit
    high = 1 << (n - 1 - qubit)
    v = amps.reshape(high, 2, low)
    if op.kind == "identity":
        return
    if op.kind == "pauli_z":
        v[:, 1, :] *= -1.0
    elif op.kind == "proj_z":
        v[:, 0 if op.alpha == -1 else 1, :] = 0.0
    else:  # rot_z_quarter: exp(i*alpha*pi*Z/4) == Rz(-alpha*pi/2)
        rotate_block(amps[None, :], n, "z", qubit, -op.alpha * np.pi / 2)


def run_half(half: HalfCircuit, theta: np.ndarray, slot_ops) -> np.ndarray:
    """Simulate one block; the result is unnormalized after projector slots."""
    theta = np.asarray(theta, dtype=float)
    amps = np.zeros(1 << half.n_qubits, dtype=complex)
    amps[0] = 1.0
    block = amps[None, :]
    for op in half.ops:
        if isinstance(op, Rotation):
            rotate_block(block, half.n_qubits, op.axis, op.qubit, theta[op.param])
        elif isinstance(op, CZ):
            cz_block(block, half.n_qubits, op.q1, op.q2)
        elif isinstance(op, FixedZ):
            rotate_block(block, half.n_qubits, "z", op.qubit, op.angle)
        else:
            _apply_cut_op(amps, half.n_qubits, op.qubit, slot_ops[op.index])
    return amps


def _quad_form(amps: np.ndarray, n: int, letters: tuple[str, ...]) -> float:
    """Raw <psi|P|psi> without normalization."""
    return float(np.vdot(amps, pauli_apply_block(amps, n, letters)).real)


def execute_cut(
    half_a: HalfCircuit,
    half_b: HalfCircuit,
    ensemble: CutEnsemble,
    theta: np.ndarray,
    obs: PauliObservable,
    budget: int = DEFAULT_BUDGET,
) -> float:
    """Reconstruct the full-circuit expectation from block-local runs only."""
    if half_a.n_cuts != half_b.n_cuts:
        raise ValueError(f"halves disagree on cut count: {half_a.n_cuts} vs {half_b.n_cuts}")
    n_total = half_a.n_qubits + half_b.n_qubits
    if obs.n_qubits != n_total:
        raise ValueError(f"observable acts on {obs.n_qubits} qubits, circuit has {n_total}")
    k = half_a.n_cuts
    combos = len(ensemble.terms) ** k
    if combos > budget:
        raise CapacityError(f"{combos} sub-circuit combinations exceed the budget of {budget}")
    strings = [
        (t.coefficient, t.letters[: half_a.n_qubits], t.letters[half_a.n_qubits :])
        for t in obs.terms
    ]
    total = 0.0
    for combo in itertools.product(ensemble.terms, repeat=k):
        weight = 1.0
        for term in combo:
            weight *= term.coefficient
        psi_a = run_half(half_a, theta, [t.op_a for t in combo])
        psi_b = run_half(half_b, theta, [t.op_b for t in combo])
        for coeff, letters_a, letters_b in strings:
            total += (
                weight
                * coeff
                * _quad_form(psi_a, half_a.n_qubits, letters_a)
                * _quad_form(psi_b, half_b.n_qubits, letters_b)
            )
    return total


def overhead(k_cuts: int) -> int:
    """Number of sub-circuit combinations for k cuts."""
    if k_cuts < 0:
        raise ValueError(f"cut count must be >= 0, got {k_cuts}")
    if k_cuts > MAX_CUTS_OVERHEAD:
        raise CapacityError(f"overhead overflows beyond {MAX_CUTS_OVERHEAD} cuts, got {k_cuts}")
    return OVERHEAD_BASE**k_cuts


@dataclass(frozen=True)
class CzRatio:
    s_cz: int
    s_feca: int
    ratio: float


def r_cz(spec: AnsatzSpec) -> CzRatio:
    """CZ-count ratio of the spec against the fully connected architecture."""
    s_cz = cz_count(spec)
    s_feca = cz_count(
        AnsatzSpec(spec.n_qubits, spec.layers, ConnectionScheme.feca(), spec.intra_entangler)
    )
    return CzRatio(s_cz, s_feca, s_cz / s_feca)
