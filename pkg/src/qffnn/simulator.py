"""Exact statevector simulation for small qubit registers.

Conventions used throughout the package:

- Basis index ``j`` encodes qubit ``k`` as bit ``k`` of ``j``; qubit 0 is the
  least significant bit.  An ``n``-qubit state is a complex array of length
  ``2**n`` indexed by ``j``.
- Classical bitstrings (``Counts`` keys, the keys returned by
  ``run_circuit_exact``) are written most-significant-bit first, so classical
  bit 0 is the rightmost character.
- Gates are unitary and never renormalize; measurements collapse and
  renormalize.  Multi-controlled gates act natively on the statevector, no
  decomposition into elementary gates is performed.

Supported gates: H, X, Z, CZ, MCZ (phase flip where every participating qubit
is 1) and MCX (NOT on the target where every control is 1).  The gate kernel
is vectorized over a leading batch axis so that sampling many shots stays
cheap; ``run_circuit`` simulates shots in chunks, each row of the chunk being
one independent shot with its own measurement record.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence, Union

import numpy as np

SQRT_HALF = float(np.sqrt(0.5))
ATOL = 1e-12
MAX_QUBITS = 12

GATE_KINDS = ("H", "X", "Z", "CZ", "MCZ", "MCX")
DIAGONAL_KINDS = frozenset({"Z", "CZ", "MCZ"})


@dataclass(frozen=True)
class GateOp:
    """A single gate.

    For the diagonal gates (Z, CZ, MCZ) the target/control split is purely
    cosmetic; participants are canonicalized into ``targets`` in sorted order.
    ``classical_condition`` is ``(clbit, value)``: the gate fires only on
    shots where that classical bit currently holds ``value``.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    classical_condition: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(q) for q in self.targets)
        controls = tuple(int(q) for q in self.controls)
        participants = targets + controls
        if len(set(participants)) != len(participants):
            raise ValueError(f"duplicate qubit in {self.kind} on {participants}")
        if any(q < 0 for q in participants):
            raise ValueError("negative qubit index")
        if self.kind in ("H", "X", "Z"):
            if len(targets) != 1 or controls:
                raise ValueError(f"{self.kind} takes exactly one target and no controls")
        elif self.kind == "CZ":
            if len(participants) != 2:
                raise ValueError("CZ takes exactly two qubits")
            targets, controls = tuple(sorted(participants)), ()
        elif self.kind == "MCZ":
            if len(participants) < 3:
                raise ValueError("MCZ takes at least three qubits (use Z or CZ below that)")
            targets, controls = tuple(sorted(participants)), ()
        else:  # MCX
            if len(targets) != 1 or not controls:
                raise ValueError("MCX takes one target and at least one control")
            controls = tuple(sorted(controls))
        if self.classical_condition is not None:
            clbit, value = self.classical_condition
            if value not in (0, 1):
                raise ValueError("classical condition value must be 0 or 1")
            object.__setattr__(self, "classical_condition", (int(clbit), int(value)))
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)

    @property
    def participants(self) -> tuple[int, ...]:
        return self.targets + self.controls

    def conditioned_on(self, clbit: int, value: int = 1) -> "GateOp":
        return replace(self, classical_condition=(clbit, value))


def h(qubit: int) -> GateOp:
    return GateOp("H", (qubit,))


def x(qubit: int) -> GateOp:
    return GateOp("X", (qubit,))


def z(qubit: int) -> GateOp:
    return GateOp("Z", (qubit,))


def cz(a: int, b: int) -> GateOp:
    return GateOp("CZ", (a, b))


def mcz(*qubits: int) -> GateOp:
    return GateOp("MCZ", tuple(qubits))


def mcx(controls: Sequence[int], target: int) -> GateOp:
    return GateOp("MCX", (target,), tuple(controls))


@dataclass(frozen=True)
class MeasureOp:
    """Computational-basis measurement of ``qubit``, recorded in ``clbit``."""

    qubit: int
    clbit: int


CircuitOp = Union[GateOp, MeasureOp]


@dataclass
class Circuit:
    num_qubits: int
    num_clbits: int = 0
    ops: list[CircuitOp] = field(default_factory=list)

    def append(self, *ops: CircuitOp) -> "Circuit":
        self.ops.extend(ops)
        return self

    def extend(self, ops: Sequence[CircuitOp]) -> "Circuit":
        self.ops.extend(ops)
        return self

    def measure(self, qubit: int, clbit: int) -> "Circuit":
        self.ops.append(MeasureOp(qubit, clbit))
        return self

    def gate_ops(self) -> Iterator[GateOp]:
        return (op for op in self.ops if isinstance(op, GateOp))

    def validate(self) -> None:
        """Check index bounds and that every classical condition reads a bit
        written by an earlier measurement."""
        written: set[int] = set()
        for op in self.ops:
            if isinstance(op, MeasureOp):
                if not 0 <= op.qubit < self.num_qubits:
                    raise ValueError(f"measured qubit {op.qubit} out of range")
                if not 0 <= op.clbit < self.num_clbits:
                    raise ValueError(f"classical bit {op.clbit} out of range")
                written.add(op.clbit)
                continue
            for q in op.participants:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit {q} out of range for {self.num_qubits}-qubit circuit")
            if op.classical_condition is not None:
                clbit, _ = op.classical_condition
                if not 0 <= clbit < self.num_clbits:
                    raise ValueError(f"condition bit {clbit} out of range")
                if clbit not in written:
                    raise ValueError(f"condition reads classical bit {clbit} before any measurement writes it")


@dataclass
class StateVector:
    """Pure state of ``num_qubits`` qubits; ``amplitudes`` has length 2**n."""

    num_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}")
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(amps.size).bit_length() - 1
        if amps.ndim != 1 or amps.size != 1 << n or not 1 <= n <= MAX_QUBITS:
            raise ValueError("amplitude array length must be 2**n with 1 <= n <= 12")
        if abs(np.linalg.norm(amps) - 1.0) > ATOL:
            raise ValueError("state is not normalized")
        return cls(n, amps.copy())

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass
class DensityMatrix2:
    """Single-qubit density matrix (2x2, Hermitian, unit trace, PSD)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if not np.allclose(m, m.conj().T, atol=ATOL):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > ATOL or abs(np.trace(m).imag) > ATOL:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(m).min() < -ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        self.entries = m

    @property
    def excited_population(self) -> float:
        """Probability of reading 1, i.e. the (1,1) diagonal entry."""
        return float(self.entries[1, 1].real)


@dataclass
class Counts:
    """Aggregated shot outcomes: bitstring (MSB first) -> occurrence count."""

    counts: dict[str, int]
    total_shots: int

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("negative count")
        if sum(self.counts.values()) != self.total_shots:
            raise ValueError("counts do not sum to total_shots")
        widths = {len(k) for k in self.counts}
        if len(widths) > 1:
            raise ValueError("inconsistent bitstring widths")

    def num_clbits(self) -> int:
        return len(next(iter(self.counts))) if self.counts else 0

    def frequency(self, key: str) -> float:
        return self.counts.get(key, 0) / self.total_shots

    def probability_vector(self, num_bits: int) -> np.ndarray:
        """Empirical distribution over all 2**num_bits outcomes, indexed by the
        integer value of the bitstring (clbit 0 = least significant)."""
        vec = np.zeros(1 << num_bits)
        for key, cnt in self.counts.items():
            vec[int(key, 2) if key else 0] += cnt
        return vec / self.total_shots

    def marginal_probability(self, clbit: int, value: int = 1) -> float:
        """Fraction of shots where the given classical bit reads ``value``."""
        hits = 0
        for key, cnt in self.counts.items():
            if int(key[len(key) - 1 - clbit]) == value:
                hits += cnt
        return hits / self.total_shots


# ---------------------------------------------------------------------------
# gate kernel

def _indices_bit_clear(num_qubits: int, qubit: int) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    return idx[(idx >> qubit) & 1 == 0]


def _indices_all_ones(num_qubits: int, qubits: Sequence[int]) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    for q in qubits:
        idx = idx[(idx >> q) & 1 == 1]
    return idx


def _apply_gate_kernel(amps: np.ndarray, gate: GateOp, num_qubits: int) -> None:
    """Apply ``gate`` in place to ``amps`` of shape (batch, 2**num_qubits)."""
    if gate.kind == "H":
        t = gate.targets[0]
        i0 = _indices_bit_clear(num_qubits, t)
        i1 = i0 + (1 << t)
        a = amps[:, i0].copy()
        b = amps[:, i1]
        amps[:, i0] = (a + b) * SQRT_HALF
        amps[:, i1] = (a - b) * SQRT_HALF
    elif gate.kind in ("X", "MCX"):
        t = gate.targets[0]
        sel = _indices_all_ones(num_qubits, gate.controls)
        i0 = sel[(sel >> t) & 1 == 0]
        i1 = i0 + (1 << t)
        tmp = amps[:, i0].copy()
        amps[:, i0] = amps[:, i1]
        amps[:, i1] = tmp
    else:
        cols = _indices_all_ones(num_qubits, gate.participants)
        amps[:, cols] *= -1.0


def _check_bounds(gate: GateOp, num_qubits: int) -> None:
    for q in gate.participants:
        if not 0 <= q < num_qubits:
            raise ValueError(f"qubit {q} out of range for {num_qubits}-qubit register")


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Return the state after ``gate``; norm is preserved to float precision.

    Conditioned gates are rejected here: classical conditions only make sense
    inside ``run_circuit``, which owns the classical register.
    """
    if gate.classical_condition is not None:
        raise ValueError("conditioned gates are resolved by run_circuit")
    _check_bounds(gate, state.num_qubits)
    amps = state.amplitudes.copy()
    _apply_gate_kernel(amps.reshape(1, -1), gate, state.num_qubits)
    return StateVector(state.num_qubits, amps)


def simulate_state(circuit: Circuit) -> StateVector:
    """Final state of a purely unitary circuit (no measurements, no conditions)."""
    circuit.validate()
    state = StateVector.zero(circuit.num_qubits)
    amps = state.amplitudes.reshape(1, -1)
    for op in circuit.ops:
        if isinstance(op, MeasureOp) or op.classical_condition is not None:
            raise ValueError("simulate_state only supports unitary circuits")
        _apply_gate_kernel(amps, op, circuit.num_qubits)
    return state


# ---------------------------------------------------------------------------
# measurement and sampling

def exact_probabilities(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Marginal Born probabilities of the listed qubits.

    The result has length 2**len(qubits); outcome index bit k is the value of
    ``qubits[k]``, so the first listed qubit is the least significant bit.
    """
    qubits = list(qubits)
    if not qubits:
        raise ValueError("need at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise ValueError("duplicate qubit")
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise ValueError(f"qubit {q} out of range")
    probs = np.abs(state.amplitudes) ** 2
    basis = np.arange(probs.size)
    packed = np.zeros(probs.size, dtype=np.int64)
    for k, q in enumerate(qubits):
        packed |= ((basis >> q) & 1) << k
    return np.bincount(packed, weights=probs, minlength=1 << len(qubits))


def measure_qubit(
    state: StateVector, qubit: int, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Sample one computational-basis measurement and collapse the state."""
    if not 0 <= qubit < state.num_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    basis = np.arange(state.amplitudes.size)
    mask1 = (basis >> qubit) & 1 == 1
    p1 = float(np.sum(np.abs(state.amplitudes[mask1]) ** 2))
    outcome = 1 if rng.random() < p1 else 0
    amps = state.amplitudes.copy()
    amps[mask1 != bool(outcome)] = 0.0
    p_sel = p1 if outcome else 1.0 - p1
    amps /= np.sqrt(max(p_sel, 1e-300))
    return outcome, StateVector(state.num_qubits, amps)


def reduced_density_matrix(state: StateVector, keep: int) -> DensityMatrix2:
    """Partial trace over every qubit except ``keep``."""
    if not 0 <= keep < state.num_qubits:
        raise ValueError(f"qubit {keep} out of range")
    n = state.num_qubits
    # axis for qubit q in the C-ordered reshape is n-1-q
    psi = state.amplitudes.reshape([2] * n)
    psi = np.moveaxis(psi, n - 1 - keep, 0).reshape(2, -1)
    return DensityMatrix2(psi @ psi.conj().T)


def _bits_to_key(bits: Sequence[int], num_clbits: int) -> str:
    return "".join(str(int(bits[k])) for k in reversed(range(num_clbits)))


def run_circuit(
    circuit: Circuit,
    shots: int,
    rng: np.random.Generator,
    chunk_shots: int = 8192,
) -> Counts:
    """Sample ``shots`` independent executions of ``circuit``.

    Each shot starts in |0...0> with all classical bits 0; ops run in order,
    measurements collapse the shot's state and write its classical bits, and a
    conditioned gate fires only on shots whose referenced bit matches.  Shots
    are simulated in batches (one array row per shot), which changes nothing
    statistically but keeps the per-gate work vectorized.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    circuit.validate()
    n, nc = circuit.num_qubits, circuit.num_clbits
    dim = 1 << n
    basis = np.arange(dim)
    # the unconditioned unitary prefix is identical for every shot: run it once
    prefix_len = 0
    for op in circuit.ops:
        if isinstance(op, MeasureOp) or op.classical_condition is not None:
            break
        prefix_len += 1
    prefix_state = np.zeros((1, dim), dtype=complex)
    prefix_state[0, 0] = 1.0
    for op in circuit.ops[:prefix_len]:
        _apply_gate_kernel(prefix_state, op, n)
    agg: dict[str, int] = {}
    remaining = shots
    while remaining > 0:
        s = min(chunk_shots, remaining)
        remaining -= s
        amps = np.repeat(prefix_state, s, axis=0)
        bits = np.zeros((s, max(nc, 1)), dtype=np.uint8)
        for op in circuit.ops[prefix_len:]:
            if isinstance(op, MeasureOp):
                mask1 = (basis >> op.qubit) & 1 == 1
                p1 = np.sum(np.abs(amps[:, mask1]) ** 2, axis=1)
                outcomes = rng.random(s) < p1
                keep = np.where(outcomes[:, None], mask1[None, :], ~mask1[None, :])
                amps *= keep
                p_sel = np.where(outcomes, p1, 1.0 - p1)
                amps /= np.sqrt(np.maximum(p_sel, 1e-300))[:, None]
                bits[:, op.clbit] = outcomes
            elif op.classical_condition is None:
                _apply_gate_kernel(amps, op, n)
            else:
                clbit, value = op.classical_condition
                rows = bits[:, clbit] == value
                if rows.any():
                    sub = amps[rows]
                    _apply_gate_kernel(sub, op, n)
                    amps[rows] = sub
        if nc:
            packed = bits[:, :nc].astype(np.int64) @ (1 << np.arange(nc, dtype=np.int64))
        else:
            packed = np.zeros(s, dtype=np.int64)
        values, cnts = np.unique(packed, return_counts=True)
        for v, c in zip(values, cnts):
            key = format(int(v), f"0{nc}b") if nc else ""
            agg[key] = agg.get(key, 0) + int(c)
    return Counts(agg, shots)


def run_circuit_exact(circuit: Circuit) -> dict[str, float]:
    """Exact distribution over classical outcomes, the shots->infinity limit of
    ``run_circuit``.  Measurements are enumerated as branches (at most one
    branch per classical bit pattern), so mid-circuit measurement feeding a
    classical condition is handled without Monte-Carlo error."""
    circuit.validate()
    n, nc = circuit.num_qubits, circuit.num_clbits
    basis = np.arange(1 << n)
    init = np.zeros(1 << n, dtype=complex)
    init[0] = 1.0
    branches: list[tuple[np.ndarray, list[int], float]] = [(init, [0] * max(nc, 1), 1.0)]
    for op in circuit.ops:
        if isinstance(op, MeasureOp):
            mask1 = (basis >> op.qubit) & 1 == 1
            split: list[tuple[np.ndarray, list[int], float]] = []
            for amps, bits, prob in branches:
                p1 = float(np.sum(np.abs(amps[mask1]) ** 2))
                for outcome, p_sel in ((0, 1.0 - p1), (1, p1)):
                    if p_sel <= 0.0:
                        continue
                    camps = amps.copy()
                    camps[mask1 != bool(outcome)] = 0.0
                    camps /= np.sqrt(p_sel)
                    cbits = bits.copy()
                    cbits[op.clbit] = outcome
                    split.append((camps, cbits, prob * p_sel))
            branches = split
        else:
            cond = op.classical_condition
            for amps, bits, _ in branches:
                if cond is None or bits[cond[0]] == cond[1]:
                    _apply_gate_kernel(amps.reshape(1, -1), op, n)
    dist: dict[str, float] = {}
    for _, bits, prob in branches:
        key = _bits_to_key(bits, nc)
        dist[key] = dist.get(key, 0.0) + prob
    return dist


def states_equal_up_to_phase(a: StateVector, b: StateVector, atol: float = ATOL) -> bool:
    if a.num_qubits != b.num_qubits:
        return False
    overlap = abs(np.vdot(a.amplitudes, b.amplitudes))
    return bool(abs(overlap - 1.0) <= atol)
