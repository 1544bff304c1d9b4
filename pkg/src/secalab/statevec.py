"""Dense statevector simulator.

Qubit 0 is the least-significant bit of the basis index, so basis state
|b_{n-1} ... b_1 b_0> lives at index sum_q b_q * 2**q.  Gate kernels update
amplitudes in place with stride-based slicing; no gate matrix is ever
materialized for 1- and 2-qubit gates.  All kernels accept an optional
leading batch dimension so that many parameter settings can be simulated
with a single pass of vectorized numpy calls.

States are compared via fidelity, never amplitude-wise: rotations introduce
physically irrelevant global phases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24

_AXES = ("x", "y", "z")
_LETTERS = ("I", "X", "Y", "Z")

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class CapacityError(ValueError):
    """Requested register or workload exceeds the configured capacity cap."""


@dataclass
class StateVector:
    """Dense complex amplitude vector over ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        amps = np.ascontiguousarray(amplitudes, dtype=complex)
        n = int(amps.size).bit_length() - 1
        if amps.ndim != 1 or amps.size != 1 << n or n < 1:
            raise ValueError(f"amplitude vector length {amps.size} is not 2**n for n >= 1")
        return cls(n, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class PauliString:
    """One weighted Pauli word; ``letters[q]`` acts on qubit q."""

    coefficient: float
    letters: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        bad = set(self.letters) - set(_LETTERS)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class PauliObservable:
    """Hermitian operator given as a real-weighted sum of Pauli strings."""

    terms: tuple[PauliString, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("observable needs at least one term")
        sizes = {t.n_qubits for t in self.terms}
        if len(sizes) != 1:
            raise ValueError(f"terms disagree on qubit count: {sorted(sizes)}")

    @property
    def n_qubits(self) -> int:
        return self.terms[0].n_qubits


def pauli(coefficient: float, letters: str) -> PauliString:
    """Shorthand constructor; ``letters[0]`` acts on qubit 0."""
    return PauliString(coefficient, tuple(letters))


def init_zero(n: int) -> StateVector:
    """All-qubits-|0> reference state."""
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"qubit count {n} outside supported range 1..{MAX_QUBITS}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


# ---------------------------------------------------------------------------
# in-place kernels on a (batch, 2**n) block
#
# The block must be C-contiguous: every reshape below is then a view and the
# updates land in the caller's buffer.

def rotate_block(block: np.ndarray, n: int, axis: str, qubit: int, angle) -> None:
    """Apply exp(-i*angle*sigma_axis/2) to ``qubit`` of every row.

    ``angle`` is a scalar or a per-row vector of shape (batch,).  The two
    bit-planes are gathered into contiguous scratch before the arithmetic:
    for low qubits the planes are heavily strided and elementwise work on
    them is several times slower than the two copy passes.
    """
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    low = 1 << qubit
    high = 1 << (n - 1 - qubit)
    v = block.reshape(-1, high, 2, low)
    c = np.cos(np.multiply(angle, 0.5))
    s = np.sin(np.multiply(angle, 0.5))
    if np.ndim(c) == 1:
        c = c[:, None, None]
        s = s[:, None, None]
    if axis == "z":
        phase = c - 1j * s
        v[:, :, 0, :] *= phase
        v[:, :, 1, :] *= np.conj(phase)
        return
    a0 = np.ascontiguousarray(v[:, :, 0, :])
    a1 = np.ascontiguousarray(v[:, :, 1, :])
    if axis == "x":
        v[:, :, 0, :] = c * a0 - 1j * (s * a1)
        v[:, :, 1, :] = c * a1 - 1j * (s * a0)
    elif axis == "y":
        v[:, :, 0, :] = c * a0 - s * a1
        v[:, :, 1, :] = c * a1 + s * a0
    else:
        raise ValueError(f"unknown rotation axis {axis!r}, expected one of {_AXES}")


def cz_block(block: np.ndarray, n: int, q1: int, q2: int) -> None:
    """Negate every amplitude whose q1 and q2 bits are both set."""
    if q1 == q2:
        raise ValueError("cz needs two distinct qubits")
    for q in (q1, q2):
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    v = block.reshape((-1,) + (2,) * n)
    idx: list = [slice(None)] * (n + 1)
    idx[1 + (n - 1 - q1)] = 1
    idx[1 + (n - 1 - q2)] = 1
    v[tuple(idx)] *= -1.0


def pauli_apply_block(block: np.ndarray, n: int, letters: tuple[str, ...]) -> np.ndarray:
    """Return P|psi> for every row of ``block`` (out of place)."""
    flip = 0
    parity_mask = 0
    n_y = 0
    for q, letter in enumerate(letters):
        if letter in ("X", "Y"):
            flip |= 1 << q
        if letter in ("Z", "Y"):
            parity_mask |= 1 << q
        if letter == "Y":
            n_y += 1
    src = np.arange(block.shape[-1]) ^ flip
    phase = np.where(np.bitwise_count(src & parity_mask) & 1, -1.0, 1.0)
    if n_y % 4:
        phase = phase * (1j ** (n_y % 4))
    return block[..., src] * phase


def expectation_block(block: np.ndarray, n: int, obs: PauliObservable) -> np.ndarray:
    """<psi|H|psi> per row (real part; rows need not be normalized)."""
    out = np.zeros(block.shape[:-1], dtype=complex)
    conj = block.conj()
    for term in obs.terms:
        out += term.coefficient * np.einsum(
            "...i,...i->...", conj, pauli_apply_block(block, n, term.letters)
        )
    return out.real


# ---------------------------------------------------------------------------
# single-state operations

def apply_rotation(state: StateVector, axis: str, qubit: int, angle: float) -> StateVector:
    """Single-qubit rotation exp(-i*angle*sigma/2); mutates and returns ``state``."""
    rotate_block(state.amplitudes[None, :], state.n_qubits, axis, qubit, angle)
    return state


def apply_cz(state: StateVector, q1: int, q2: int) -> StateVector:
    """Controlled-Z on (q1, q2); symmetric in its arguments; mutates ``state``."""
    cz_block(state.amplitudes[None, :], state.n_qubits, q1, q2)
    return state


def _check_sizes(state: StateVector, obs: PauliObservable) -> None:
    if obs.n_qubits != state.n_qubits:
        raise ValueError(
            f"observable acts on {obs.n_qubits} qubits, state has {state.n_qubits}"
        )


def expectation(state: StateVector, obs: PauliObservable) -> float:
    """<psi|H|psi> = sum_k c_k <psi|P_k|psi>."""
    _check_sizes(state, obs)
    return float(expectation_block(state.amplitudes, state.n_qubits, obs))


def observable_variance(state: StateVector, obs: PauliObservable) -> float:
    """<H^2> - <H>^2, via the single application phi = H|psi>."""
    _check_sizes(state, obs)
    amps = state.amplitudes
    phi = np.zeros_like(amps)
    for term in obs.terms:
        phi += term.coefficient * pauli_apply_block(amps, state.n_qubits, term.letters)
    mean = np.vdot(amps, phi).real
    second = np.vdot(phi, phi).real
    return float(second - mean * mean)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def reduced_purity(state: StateVector, qubit: int) -> float:
    """Tr(rho_q^2) of the single-qubit reduced density matrix."""
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    low = 1 << qubit
    high = 1 << (n - 1 - qubit)
    v = state.amplitudes.reshape(high, 2, low)
    a0 = v[:, 0, :].ravel()
    a1 = v[:, 1, :].ravel()
    r00 = np.vdot(a0, a0).real
    r11 = np.vdot(a1, a1).real
    r01 = np.vdot(a1, a0)
    return float(r00 * r00 + r11 * r11 + 2.0 * abs(r01) ** 2)


def sample_haar_state(n: int, rng: np.random.Generator) -> StateVector:
    """Uniform (Haar) random pure state: normalized complex Gaussian vector."""
    if n > 12:
        raise CapacityError(f"haar sampling capped at 12 qubits, got {n}")
    amps = haar_block(n, 1, rng)[0]
    return StateVector(n, np.ascontiguousarray(amps))


def haar_block(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, 2**n) block of independent Haar-random states."""
    if n > 12:
        raise CapacityError(f"haar sampling capped at 12 qubits, got {n}")
    dim = 1 << n
    raw = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def to_matrix(obs: PauliObservable) -> np.ndarray:
    """Dense 2**n x 2**n matrix of the observable (supporting oracle, n <= 12)."""
    n = obs.n_qubits
    if n > 12:
        raise CapacityError(f"dense matrix capped at 12 qubits, got {n}")
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for term in obs.terms:
        m = np.ones((1, 1), dtype=complex)
        for q in reversed(range(n)):
            m = np.kron(m, _PAULI_MATS[term.letters[q]])
        out += term.coefficient * m
    return out
