"""Quantum perceptron nodes over sign vectors.

A node processes a classical input vector i and weight vector w, both with
entries in {-1, +1} and length m = 2**N.  The input is stored on N qubits as
a real equally-weighted (REW) state whose amplitude at basis index j is
i[j]/sqrt(m).  Every REW state is a hypergraph state: it is reachable from
the uniform superposition by Z, CZ and multi-controlled-Z sign flips alone,
which is what the synthesis routine below emits (at most m-1 gates).

The weight stage reuses the same sign-flip synthesis followed by Hadamard and
X on every encoding qubit; it maps the weight's own REW state onto |1...1>,
so after input preparation and weight transform the amplitude on |1...1>
equals the normalized overlap i.w/m.  A multi-controlled NOT copies that
component onto an ancilla, whose excitation probability (i.w/m)**2 is the
node's activation.

Pattern labels: a length-m sign vector is identified with the integer whose
bit k is 0 for entry +1 and 1 for entry -1.  For m = 4 the entries are read
as 2x2 pixels in row-major order (entry 0 top-left, entry 3 bottom-right),
+1 drawn filled and -1 empty; the full-row images get labels 12 and 3, the
full-column images 10 and 5.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .simulator import (
    Circuit,
    GateOp,
    StateVector,
    cz,
    h,
    mcx,
    mcz,
    simulate_state,
    x,
    z,
)


@dataclass(frozen=True)
class BinaryVector:
    """Sign vector with entries in {-1, +1} and power-of-two length."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if any(e not in (-1, 1) for e in entries):
            raise ValueError("entries must be -1 or +1")
        m = len(entries)
        if m < 2 or m & (m - 1):
            raise ValueError("length must be a power of two >= 2")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_label(cls, label: int, m: int) -> "BinaryVector":
        if not 0 <= label < (1 << m):
            raise ValueError(f"label {label} out of range for m={m}")
        return cls(tuple(-1 if (label >> k) & 1 else 1 for k in range(m)))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def num_qubits(self) -> int:
        return self.m.bit_length() - 1

    def label(self) -> int:
        return sum(1 << k for k, e in enumerate(self.entries) if e == -1)

    def negated(self) -> "BinaryVector":
        return BinaryVector(tuple(-e for e in self.entries))

    def dot(self, other: "BinaryVector") -> int:
        if other.m != self.m:
            raise ValueError("length mismatch")
        return sum(a * b for a, b in zip(self.entries, other.entries))


@dataclass(frozen=True)
class NeuronSpec:
    """One node: weight vector plus its qubit assignment.

    ``ancilla_qubit`` is None for nodes read out directly on their encoding
    qubit (only meaningful for single-qubit nodes, e.g. an output node).
    """

    weight: BinaryVector
    encoding_qubits: tuple[int, ...]
    ancilla_qubit: int | None = None

    def __post_init__(self) -> None:
        qubits = tuple(int(q) for q in self.encoding_qubits)
        object.__setattr__(self, "encoding_qubits", qubits)
        if len(qubits) != self.weight.num_qubits:
            raise ValueError("encoding register size does not match weight length")
        if len(set(qubits)) != len(qubits):
            raise ValueError("duplicate encoding qubit")
        if self.ancilla_qubit is not None and self.ancilla_qubit in qubits:
            raise ValueError("ancilla must be distinct from encoding qubits")

    @property
    def all_qubits(self) -> tuple[int, ...]:
        if self.ancilla_qubit is None:
            return self.encoding_qubits
        return self.encoding_qubits + (self.ancilla_qubit,)


def rew_state(vec: BinaryVector) -> StateVector:
    """REW state of ``vec``: amplitude vec[j]/sqrt(m) at basis index j."""
    amps = np.asarray(vec.entries, dtype=complex) / np.sqrt(vec.m)
    return StateVector(vec.num_qubits, amps)


def hypergraph_sign_synthesis(vec: BinaryVector) -> tuple[list[GateOp], int]:
    """Sign-flip gate cascade (HSGS) preparing ``vec`` from the uniform state.

    Returns (gates, global_sign) with gates over local qubits 0..N-1 such that
    applying them to |+>^N gives global_sign * rew_state(vec) exactly.  If the
    first entry is -1 the vector is negated up front and the -1 is reported as
    the (unobservable) global sign instead of being synthesized.

    Basis indices 1..m-1 are scanned in order of increasing Hamming weight
    (ties by index); whenever the tracked sign at index j disagrees with the
    target, a Z-type gate on exactly the qubits set in j is emitted, flipping
    every index whose bit pattern contains j.  Lower-weight indices are never
    revisited, so at most m-1 gates come out.
    """
    target = list(vec.entries)
    global_sign = 1
    if target[0] == -1:
        global_sign = -1
        target = [-t for t in target]
    m = len(target)
    current = [1] * m
    gates: list[GateOp] = []
    for j in sorted(range(1, m), key=lambda idx: (bin(idx).count("1"), idx)):
        if current[j] == target[j]:
            continue
        qubits = tuple(k for k in range(vec.num_qubits) if (j >> k) & 1)
        if len(qubits) == 1:
            gates.append(z(qubits[0]))
        elif len(qubits) == 2:
            gates.append(cz(*qubits))
        else:
            gates.append(mcz(*qubits))
        for idx in range(m):
            if idx & j == j:
                current[idx] = -current[idx]
    return gates, global_sign


def _remap(gates: Sequence[GateOp], qubits: Sequence[int]) -> list[GateOp]:
    return [
        replace(
            g,
            targets=tuple(qubits[t] for t in g.targets),
            controls=tuple(qubits[c] for c in g.controls),
        )
        for g in gates
    ]


def input_preparation_ops(vec: BinaryVector, qubits: Sequence[int] | None = None) -> list[GateOp]:
    """Gates taking |0...0> to the REW state of ``vec`` (up to global sign):
    Hadamard on every encoding qubit, then the sign-flip cascade."""
    qubits = tuple(qubits) if qubits is not None else tuple(range(vec.num_qubits))
    if len(qubits) != vec.num_qubits:
        raise ValueError("qubit count does not match vector length")
    gates, _ = hypergraph_sign_synthesis(vec)
    return [h(q) for q in qubits] + _remap(gates, qubits)


def weight_transform_ops(vec: BinaryVector, qubits: Sequence[int] | None = None) -> list[GateOp]:
    """Gates mapping the REW state of ``vec`` onto |1...1> (up to global sign).

    The diagonal sign cascade is self-inverse, so running it first rotates the
    weight state back to the uniform superposition; Hadamards then X gates
    finish the job.  For a single-qubit node this collapses to one or two
    gates because X.H.Z == H exactly.
    """
    qubits = tuple(qubits) if qubits is not None else tuple(range(vec.num_qubits))
    if len(qubits) != vec.num_qubits:
        raise ValueError("qubit count does not match vector length")
    gates, _ = hypergraph_sign_synthesis(vec)
    if vec.num_qubits == 1:
        return [h(qubits[0])] if gates else [h(qubits[0]), x(qubits[0])]
    return _remap(gates, qubits) + [h(q) for q in qubits] + [x(q) for q in qubits]


def activation_gate(encoding_qubits: Sequence[int], ancilla: int) -> GateOp:
    """Multi-controlled NOT routing the all-ones component onto the ancilla."""
    return mcx(tuple(encoding_qubits), ancilla)


def node_ops(input_vec: BinaryVector, spec: NeuronSpec) -> list[GateOp]:
    """Full gate sequence of one node: input preparation, weight transform,
    and (when an ancilla is assigned) the activation MCX."""
    if input_vec.m != spec.weight.m:
        raise ValueError("input length does not match weight length")
    ops = input_preparation_ops(input_vec, spec.encoding_qubits)
    ops += weight_transform_ops(spec.weight, spec.encoding_qubits)
    if spec.ancilla_qubit is not None:
        ops.append(activation_gate(spec.encoding_qubits, spec.ancilla_qubit))
    return ops


def neuron_circuit(input_vec: BinaryVector, weight_vec: BinaryVector) -> Circuit:
    """Standalone (N+1)-qubit node circuit with the ancilla measured into
    classical bit 0."""
    n = input_vec.num_qubits
    spec = NeuronSpec(weight_vec, tuple(range(n)), n)
    circuit = Circuit(n + 1, 1)
    circuit.extend(node_ops(input_vec, spec))
    circuit.measure(n, 0)
    return circuit


def activation_probability(input_vec: BinaryVector, weight_vec: BinaryVector) -> float:
    """Closed-form activation (i.w)**2 / m**2, the oracle the circuits must match."""
    if input_vec.m != weight_vec.m:
        raise ValueError("length mismatch")
    d = input_vec.dot(weight_vec)
    return (d * d) / (input_vec.m * input_vec.m)


def simulated_activation_probability(input_vec: BinaryVector, weight_vec: BinaryVector) -> float:
    """Activation computed by statevector simulation of the node's unitary part:
    the Born weight of |1...1> after input preparation and weight transform."""
    if input_vec.m != weight_vec.m:
        raise ValueError("length mismatch")
    n = input_vec.num_qubits
    circuit = Circuit(n)
    circuit.extend(input_preparation_ops(input_vec))
    circuit.extend(weight_transform_ops(weight_vec))
    state = simulate_state(circuit)
    return float(abs(state.amplitudes[input_vec.m - 1]) ** 2)
