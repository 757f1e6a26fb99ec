"""Layered feed-forward networks of quantum perceptron nodes.

Two execution modes are provided.

Hybrid mode: each node runs on its own small register; measuring its ancilla
yields a classical bit, and the bits of one layer program the input
preparation of the next (bit 0 -> entry +1, bit 1 -> entry -1).  The exact
executor computes every node's activation by statevector simulation and
convolves the per-node Bernoulli laws analytically over all intermediate bit
patterns; the sampled executor draws shot-level outcomes.

Coherent mode: the same network as one measurement-free circuit.  By the
deferred-measurement principle the classically conditioned phase flips of the
hybrid output stage become CZ gates from each hidden ancilla to the output
qubit, and the output probability is read from the reduced density matrix of
the output qubit.  This construction covers two-layer networks whose output
node sits on a single qubit fed by exactly two hidden nodes (one CZ per
synapse); deeper or wider topologies run in hybrid mode only.

Classical bit layout of sampled circuits: bit 0 carries the network output,
bits 1..l hold the hidden-node outcomes in layer order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .neuron import (
    BinaryVector,
    NeuronSpec,
    activation_gate,
    node_ops,
    simulated_activation_probability,
    weight_transform_ops,
)
from .simulator import (
    Circuit,
    Counts,
    StateVector,
    cz,
    h,
    reduced_density_matrix,
    run_circuit,
    simulate_state,
    z,
)

DEFAULT_THRESHOLD = 0.5


class UnsupportedTopology(ValueError):
    """Raised when an executor does not cover the requested network shape."""


@dataclass(frozen=True)
class LayerSpec:
    neurons: tuple[NeuronSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "neurons", tuple(self.neurons))
        used: set[int] = set()
        for spec in self.neurons:
            overlap = used.intersection(spec.all_qubits)
            if overlap:
                raise ValueError(f"qubits {sorted(overlap)} assigned twice within a layer")
            used.update(spec.all_qubits)


@dataclass(frozen=True)
class NetworkSpec:
    """Layer stack plus synapse wiring.

    ``synapses[i][j]`` lists, in order, the indices of layer-i neurons feeding
    neuron j of layer i+1; a node on N qubits must be fed by exactly 2**N
    nodes.  First-layer neurons all receive the raw input vector.
    """

    layers: tuple[LayerSpec, ...]
    synapses: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def __post_init__(self) -> None:
        layers = tuple(self.layers)
        synapses = tuple(tuple(tuple(f) for f in layer_map) for layer_map in self.synapses)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "synapses", synapses)
        if not layers:
            raise ValueError("network needs at least one layer")
        if len(synapses) != len(layers) - 1:
            raise ValueError("need one synapse map per non-input layer")
        for i, layer_map in enumerate(synapses):
            prev, cur = layers[i], layers[i + 1]
            if len(layer_map) != len(cur.neurons):
                raise ValueError(f"synapse map {i} must cover every neuron of layer {i + 1}")
            for j, feeders in enumerate(layer_map):
                spec = cur.neurons[j]
                if len(feeders) != spec.weight.m:
                    raise ValueError(
                        f"neuron {j} of layer {i + 1} encodes {spec.weight.m} inputs "
                        f"but is fed by {len(feeders)} nodes"
                    )
                if any(not 0 <= f < len(prev.neurons) for f in feeders):
                    raise ValueError("synapse references a missing neuron")

    @property
    def hidden_layers(self) -> tuple[LayerSpec, ...]:
        return self.layers[:-1]

    @property
    def output_neuron(self) -> NeuronSpec:
        if len(self.layers[-1].neurons) != 1:
            raise UnsupportedTopology("executors require a single output neuron")
        return self.layers[-1].neurons[0]

    def to_json_dict(self) -> dict:
        doc: dict = {"layers": [], "synapses": []}
        for layer in self.layers:
            doc["layers"].append(
                {
                    "neurons": [
                        {
                            "weight_label": spec.weight.label(),
                            "qubits": list(spec.encoding_qubits),
                            "ancilla": spec.ancilla_qubit,
                        }
                        for spec in layer.neurons
                    ]
                }
            )
        for layer_map in self.synapses:
            doc["synapses"].append({str(j): list(feeders) for j, feeders in enumerate(layer_map)})
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "NetworkSpec":
        layers = []
        for layer_doc in doc["layers"]:
            neurons = []
            for nd in layer_doc["neurons"]:
                qubits = tuple(nd["qubits"])
                if "weight_entries" in nd:
                    weight = BinaryVector(tuple(nd["weight_entries"]))
                else:
                    weight = BinaryVector.from_label(nd["weight_label"], 1 << len(qubits))
                neurons.append(NeuronSpec(weight, qubits, nd.get("ancilla")))
            layers.append(LayerSpec(tuple(neurons)))
        synapses = tuple(
            tuple(tuple(layer_map[str(j)]) for j in range(len(layer_map)))
            for layer_map in doc.get("synapses", [])
        )
        return cls(tuple(layers), synapses)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "NetworkSpec":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class HiddenOutcome:
    bits: tuple[int, ...]
    probability: float


@dataclass(frozen=True)
class RunResult:
    input_label: int
    p_out: float
    mode: str
    shots: int | None
    classified_positive: bool


def line_recognition_network(
    w1: BinaryVector | None = None,
    w2: BinaryVector | None = None,
    w_out: BinaryVector | None = None,
) -> NetworkSpec:
    """The built-in 3-node network for 2x2 line recognition: one hidden node
    tuned to horizontal lines (label 12), one to vertical lines (label 10),
    and a single-qubit output node with weight (+1, -1) flagging dissimilar
    hidden outcomes.  Seven qubits in total."""
    w1 = w1 if w1 is not None else BinaryVector.from_label(12, 4)
    w2 = w2 if w2 is not None else BinaryVector.from_label(10, 4)
    w_out = w_out if w_out is not None else BinaryVector((1, -1))
    hidden = LayerSpec(
        (
            NeuronSpec(w1, (0, 1), 2),
            NeuronSpec(w2, (3, 4), 5),
        )
    )
    out = LayerSpec((NeuronSpec(w_out, (6,), None),))
    return NetworkSpec((hidden, out), (((0, 1),),))


def feedforward_input(bits: Sequence[int]) -> BinaryVector:
    """Classical input built from a layer's measured bits: entry k is +1 when
    bits[k] is 0 and -1 when it is 1."""
    return BinaryVector(tuple(1 if b == 0 else -1 for b in bits))


def _first_layer_inputs(net: NetworkSpec, input_vec: BinaryVector) -> list[BinaryVector]:
    for spec in net.layers[0].neurons:
        if spec.weight.m != input_vec.m:
            raise ValueError("input length does not match first-layer node size")
    return [input_vec] * len(net.layers[0].neurons)


def _exact_output_law(net: NetworkSpec, layer_idx: int, inputs: list[BinaryVector]) -> float:
    layer = net.layers[layer_idx]
    ps = [simulated_activation_probability(vec, spec.weight) for vec, spec in zip(inputs, layer.neurons)]
    if layer_idx == len(net.layers) - 1:
        return ps[0]
    total = 0.0
    for bits in product((0, 1), repeat=len(layer.neurons)):
        weight = 1.0
        for p, b in zip(ps, bits):
            weight *= p if b else 1.0 - p
        if weight == 0.0:
            continue
        next_inputs = [
            feedforward_input([bits[f] for f in feeders])
            for feeders in net.synapses[layer_idx]
        ]
        total += weight * _exact_output_law(net, layer_idx + 1, next_inputs)
    return total


def _clamp_probability(p: float) -> float:
    if not -1e-9 <= p <= 1.0 + 1e-9:
        raise ValueError(f"probability {p} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _result(input_vec: BinaryVector, p: float, mode: str, shots: int | None, threshold: float) -> RunResult:
    p = _clamp_probability(p)
    return RunResult(input_vec.label(), p, mode, shots, p > threshold)


def hybrid_exact(
    net: NetworkSpec,
    input_vec: BinaryVector,
    threshold: float = DEFAULT_THRESHOLD,
) -> RunResult:
    """Exact output law of the hybrid network: per-node activations are
    simulated, and the total activation probability is the convolution of the
    per-node Bernoulli laws over all intermediate bit patterns.  Handles any
    depth; cost grows with 2**(layer width)."""
    if len(net.layers) < 2:
        raise UnsupportedTopology("feed-forward execution needs at least two layers")
    net.output_neuron  # validates single output node
    p = _exact_output_law(net, 0, _first_layer_inputs(net, input_vec))
    return _result(input_vec, p, "hybrid", None, threshold)


def hidden_outcome_distribution(net: NetworkSpec, input_vec: BinaryVector) -> list[HiddenOutcome]:
    """Joint law of the first hidden layer's measured bits (product of the
    per-node Bernoulli laws), in lexicographic bit order."""
    if len(net.layers) < 2:
        raise UnsupportedTopology("no hidden layer")
    layer = net.layers[0]
    inputs = _first_layer_inputs(net, input_vec)
    ps = [simulated_activation_probability(vec, spec.weight) for vec, spec in zip(inputs, layer.neurons)]
    outcomes = []
    for bits in product((0, 1), repeat=len(layer.neurons)):
        weight = 1.0
        for p, b in zip(ps, bits):
            weight *= p if b else 1.0 - p
        outcomes.append(HiddenOutcome(bits, weight))
    return outcomes


def _figure_style_class(net: NetworkSpec) -> tuple[NeuronSpec, ...]:
    """Validate the two-layer, single-qubit-output shape shared by the sampled
    hybrid circuit and the coherent circuit; returns the hidden specs."""
    if len(net.layers) != 2:
        raise UnsupportedTopology("combined circuit construction covers two-layer networks")
    out = net.output_neuron
    if len(out.encoding_qubits) != 1:
        raise UnsupportedTopology("output node must sit on a single qubit")
    hidden = net.layers[0].neurons
    feeders = net.synapses[0][0]
    if len(feeders) != len(hidden) or sorted(feeders) != list(range(len(hidden))):
        raise UnsupportedTopology("output node must be fed by every hidden node exactly once")
    for spec in hidden:
        if spec.ancilla_qubit is None:
            raise UnsupportedTopology("hidden nodes need an ancilla")
    qubits = [q for spec in hidden for q in spec.all_qubits] + list(out.all_qubits)
    if len(set(qubits)) != len(qubits):
        raise ValueError("qubit assignments overlap across layers")
    return tuple(hidden[f] for f in feeders)


def build_hybrid_circuit(net: NetworkSpec, input_vec: BinaryVector) -> Circuit:
    """One circuit for the whole hybrid run: every hidden node prepared,
    activated and measured mid-circuit, then the output qubit prepared with a
    Hadamard plus one conditioned Z per hidden bit, weight-transformed, and
    measured.  Classical bit 0 is the output, bit k the k-th hidden node."""
    fed = _figure_style_class(net)
    _first_layer_inputs(net, input_vec)
    out = net.output_neuron
    out_qubit = out.encoding_qubits[0]
    num_qubits = max(q for spec in net.layers[0].neurons for q in spec.all_qubits)
    num_qubits = max(num_qubits, max(out.all_qubits)) + 1
    circuit = Circuit(num_qubits, len(fed) + 1)
    for spec in fed:
        circuit.extend(node_ops(input_vec, spec))
    for k, spec in enumerate(fed, start=1):
        circuit.measure(spec.ancilla_qubit, k)
    circuit.append(h(out_qubit))
    for k in range(1, len(fed) + 1):
        circuit.append(z(out_qubit).conditioned_on(k, 1))
    circuit.extend(weight_transform_ops(out.weight, out.encoding_qubits))
    if out.ancilla_qubit is not None:
        circuit.append(activation_gate(out.encoding_qubits, out.ancilla_qubit))
        circuit.measure(out.ancilla_qubit, 0)
    else:
        circuit.measure(out_qubit, 0)
    return circuit


def coherent_circuit(net: NetworkSpec, input_vec: BinaryVector) -> Circuit:
    """Measurement-free equivalent of the hybrid circuit: the conditioned Z
    gates become CZ gates from each hidden ancilla to the output qubit."""
    fed = _figure_style_class(net)
    _first_layer_inputs(net, input_vec)
    out = net.output_neuron
    if out.ancilla_qubit is not None:
        raise UnsupportedTopology("coherent output node is read out directly, without ancilla")
    out_qubit = out.encoding_qubits[0]
    num_qubits = max(q for spec in net.layers[0].neurons for q in spec.all_qubits)
    num_qubits = max(num_qubits, out_qubit) + 1
    circuit = Circuit(num_qubits)
    for spec in fed:
        circuit.extend(node_ops(input_vec, spec))
    circuit.append(h(out_qubit))
    for spec in fed:
        circuit.append(cz(spec.ancilla_qubit, out_qubit))
    circuit.extend(weight_transform_ops(out.weight, out.encoding_qubits))
    return circuit


def coherent_measured_circuit(net: NetworkSpec, input_vec: BinaryVector) -> Circuit:
    """Coherent circuit plus a single end measurement of the output qubit into
    classical bit 0; hidden registers are left unmeasured."""
    circuit = coherent_circuit(net, input_vec)
    circuit.num_clbits = 1
    circuit.measure(net.output_neuron.encoding_qubits[0], 0)
    return circuit


def coherent_state(net: NetworkSpec, input_vec: BinaryVector) -> StateVector:
    return simulate_state(coherent_circuit(net, input_vec))


def coherent_exact(
    net: NetworkSpec,
    input_vec: BinaryVector,
    threshold: float = DEFAULT_THRESHOLD,
) -> RunResult:
    """Exact coherent run: simulate the measurement-free circuit, trace out
    everything but the output qubit, and read the excited population."""
    state = coherent_state(net, input_vec)
    rho = reduced_density_matrix(state, net.output_neuron.encoding_qubits[0])
    return _result(input_vec, rho.excited_population, "coherent", None, threshold)


def _sampled_deep(
    net: NetworkSpec, input_vec: BinaryVector, shots: int, rng: np.random.Generator
) -> float:
    """Shot sampling for networks beyond the combined-circuit class: walk the
    layers, drawing every node's Bernoulli outcome per shot from its simulated
    activation for the shot's fed-forward input."""
    first = net.layers[0].neurons
    _first_layer_inputs(net, input_vec)
    bits = np.empty((shots, len(first)), dtype=np.uint8)
    for k, spec in enumerate(first):
        p = simulated_activation_probability(input_vec, spec.weight)
        bits[:, k] = rng.random(shots) < p
    for layer_idx in range(1, len(net.layers)):
        layer = net.layers[layer_idx]
        new_bits = np.empty((shots, len(layer.neurons)), dtype=np.uint8)
        for j, spec in enumerate(layer.neurons):
            feeders = list(net.synapses[layer_idx - 1][j])
            packed = bits[:, feeders].astype(np.int64) @ (1 << np.arange(len(feeders), dtype=np.int64))
            table = np.empty(1 << len(feeders))
            for pattern in range(1 << len(feeders)):
                fed = feedforward_input([(pattern >> b) & 1 for b in range(len(feeders))])
                table[pattern] = simulated_activation_probability(fed, spec.weight)
            new_bits[:, j] = rng.random(shots) < table[packed]
        bits = new_bits
    return float(bits[:, 0].mean())


def hybrid_sampled(
    net: NetworkSpec,
    input_vec: BinaryVector,
    shots: int,
    rng: np.random.Generator,
    threshold: float = DEFAULT_THRESHOLD,
) -> RunResult:
    """Shot-sampled hybrid run.  Two-layer networks run as the single combined
    circuit with mid-circuit measurement and classical control; deeper stacks
    fall back to layer-by-layer sampling."""
    try:
        circuit = build_hybrid_circuit(net, input_vec)
    except UnsupportedTopology:
        if len(net.layers) < 2:
            raise
        p = _sampled_deep(net, input_vec, shots, rng)
    else:
        counts = run_circuit(circuit, shots, rng)
        p = counts.marginal_probability(0)
    return _result(input_vec, p, "hybrid-sampled", shots, threshold)


def coherent_sampled(
    net: NetworkSpec,
    input_vec: BinaryVector,
    shots: int,
    rng: np.random.Generator,
    threshold: float = DEFAULT_THRESHOLD,
) -> RunResult:
    counts = run_circuit(coherent_measured_circuit(net, input_vec), shots, rng)
    return _result(input_vec, counts.marginal_probability(0), "coherent-sampled", shots, threshold)


def sampled_counts(
    net: NetworkSpec,
    input_vec: BinaryVector,
    mode: str,
    shots: int,
    rng: np.random.Generator,
) -> Counts:
    """Raw shot counts of the combined circuit for either mode; the noise and
    mitigation pipeline operates on these before estimating the output."""
    if mode == "hybrid":
        return run_circuit(build_hybrid_circuit(net, input_vec), shots, rng)
    if mode == "coherent":
        return run_circuit(coherent_measured_circuit(net, input_vec), shots, rng)
    raise ValueError(f"unknown mode {mode!r}")


def output_probability_from_vector(probabilities: np.ndarray) -> float:
    """Output-bit marginal of a distribution over classical bit patterns
    (classical bit 0, the output, is the least significant index bit)."""
    idx = np.arange(probabilities.size)
    return float(probabilities[idx & 1 == 1].sum())


def classify(result: RunResult, threshold: float = DEFAULT_THRESHOLD) -> bool:
    """Verdict of a run: activation probability strictly above the threshold."""
    if not 0.0 <= result.p_out <= 1.0:
        raise ValueError("p_out outside [0, 1]")
    return result.p_out > threshold
