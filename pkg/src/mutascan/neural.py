"""Feed-forward backpropagation classifier for malignant-candidate mutations.

A from-scratch multi-layer perceptron: logistic sigmoid on every non-input
layer, full-batch gradient descent on mean squared error with momentum,
seeded uniform weight initialization, zero-initialized biases. The default
topology is 10-4-1 (ten mutation features, four hidden units, one risk
output). Models persist as versioned JSON and round-trip bit-exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .align import Mutation, MutationKind
from .errors import MutascanError
from .seqio import DnaSequence
from .seqstats import windowed_gc

MODEL_FORMAT = "mutascan-model"
MODEL_VERSION = 1

DISPLAY_AT_RISK = "highly risk of breast cancer"
DISPLAY_NORMAL = "Normal"


class NeuralError(MutascanError):
    pass


class DimensionMismatchError(NeuralError):
    pass


class EmptyDatasetError(NeuralError):
    pass


class CorruptFileError(NeuralError):
    pass


class VersionMismatchError(NeuralError):
    pass


class Label(Enum):
    AT_RISK = "AtRisk"
    NORMAL = "Normal"

    @property
    def display(self) -> str:
        return DISPLAY_AT_RISK if self is Label.AT_RISK else DISPLAY_NORMAL


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != 10:
            raise ValueError("feature vector must have exactly 10 components")
        for i, v in enumerate(self.values):
            if not (0.0 <= v <= 1.0) or not math.isfinite(v):
                raise ValueError(f"feature {i + 1} = {v} outside [0, 1]")


@dataclass(frozen=True)
class NetworkTopology:
    layer_sizes: tuple[int, ...] = (10, 4, 1)

    def __post_init__(self):
        if len(self.layer_sizes) < 3:
            raise ValueError("need input, at least one hidden, and output layer")
        if any(s < 1 for s in self.layer_sizes):
            raise ValueError("layer sizes must be positive")
        if self.layer_sizes[-1] != 1:
            raise ValueError("output layer must have exactly one node")

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    momentum: float = 0.9
    target_mse: float = 1e-9
    max_epochs: int = 500_000
    seed: int = 42
    init_range: tuple[float, float] = (-0.5, 0.5)

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if not (0.0 <= self.momentum < 1.0):
            raise ValueError("momentum must be in [0, 1)")
        if self.target_mse <= 0:
            raise ValueError("target MSE must be positive")
        if self.max_epochs < 1:
            raise ValueError("max epochs must be at least 1")
        if self.init_range[0] > self.init_range[1]:
            raise ValueError("init range lower bound exceeds upper bound")


@dataclass(frozen=True)
class TrainReport:
    epochs_run: int
    final_mse: float
    converged: bool
    history: tuple[float, ...]


@dataclass(eq=False)
class Network:
    topology: NetworkTopology
    weights: list[np.ndarray]  # per layer pair, shape (to_size, from_size)
    biases: list[np.ndarray]  # per non-input layer, shape (to_size,)
    train_config: TrainConfig | None = None

    def __post_init__(self):
        sizes = self.topology.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise DimensionMismatchError("parameter count does not match topology")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[i + 1], sizes[i]) or b.shape != (sizes[i + 1],):
                raise DimensionMismatchError(
                    f"layer {i} parameters have shape {w.shape}/{b.shape}, "
                    f"expected {(sizes[i + 1], sizes[i])}/{(sizes[i + 1],)}"
                )
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ValueError("network parameters must be finite")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.topology == other.topology
            and all(np.array_equal(a, b) for a, b in zip(self.weights, other.weights))
            and all(np.array_equal(a, b) for a, b in zip(self.biases, other.biases))
        )


def zero_network(topology: NetworkTopology) -> Network:
    sizes = topology.layer_sizes
    return Network(
        topology,
        [np.zeros((sizes[i + 1], sizes[i])) for i in range(len(sizes) - 1)],
        [np.zeros(sizes[i + 1]) for i in range(len(sizes) - 1)],
    )


def _init_network(topology: NetworkTopology, cfg: TrainConfig) -> Network:
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.init_range
    sizes = topology.layer_sizes
    weights = [
        rng.uniform(lo, hi, size=(sizes[i + 1], sizes[i]))
        for i in range(len(sizes) - 1)
    ]
    biases = [np.zeros(sizes[i + 1]) for i in range(len(sizes) - 1)]
    return Network(topology, weights, biases, train_config=cfg)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # split form avoids overflow in exp for large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _as_input(x, width: int) -> np.ndarray:
    values = x.values if isinstance(x, FeatureVector) else x
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (width,):
        raise DimensionMismatchError(
            f"input has {arr.shape[0] if arr.ndim == 1 else 'bad'} components, "
            f"expected {width}"
        )
    return arr


def _forward_all(net: Network, batch: np.ndarray) -> list[np.ndarray]:
    acts = [batch]
    for w, b in zip(net.weights, net.biases):
        acts.append(_sigmoid(acts[-1] @ w.T + b))
    return acts


def forward(net: Network, x) -> float:
    """Propagate one input through the network; output strictly in (0, 1)."""
    arr = _as_input(x, net.topology.input_size)
    return float(_forward_all(net, arr[np.newaxis, :])[-1][0, 0])


def gradient(net: Network, sample: tuple) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Exact partials of the squared error (output - target)^2 for one sample.

    Returns (weight gradients, bias gradients) with the same shapes as the
    network parameters.
    """
    x, target = sample
    arr = _as_input(x, net.topology.input_size)
    acts = _forward_all(net, arr[np.newaxis, :])
    t = np.asarray([[float(target)]])
    d_weights, d_biases = _backward(net, acts, t, scale=1.0)
    return d_weights, d_biases


def _backward(
    net: Network, acts: list[np.ndarray], targets: np.ndarray, scale: float
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Reverse pass for E = scale * sum_samples (output - target)^2."""
    out = acts[-1]
    delta = 2.0 * scale * (out - targets) * out * (1.0 - out)
    d_weights: list[np.ndarray] = [None] * len(net.weights)  # type: ignore[list-item]
    d_biases: list[np.ndarray] = [None] * len(net.biases)  # type: ignore[list-item]
    for layer in range(len(net.weights) - 1, -1, -1):
        d_weights[layer] = delta.T @ acts[layer]
        d_biases[layer] = delta.sum(axis=0)
        if layer > 0:
            a = acts[layer]
            delta = (delta @ net.weights[layer]) * a * (1.0 - a)
    return d_weights, d_biases


def train(
    topology: NetworkTopology,
    data: Sequence[tuple],
    cfg: TrainConfig = TrainConfig(),
) -> tuple[Network, TrainReport]:
    """Full-batch gradient descent with momentum toward the target MSE.

    MSE = (1/S) * sum over samples of (output - target)^2; the history
    records the post-update MSE of every epoch, so the report's curve is
    exactly what a monitoring plot would show. Deterministic for a fixed
    seed, dataset, and config.
    """
    if len(data) == 0:
        raise EmptyDatasetError("training data is empty")
    width = topology.input_size
    batch = np.stack([_as_input(x, width) for x, _ in data])
    targets = np.asarray([[float(t)] for _, t in data])

    net = _init_network(topology, cfg)
    vel_w = [np.zeros_like(w) for w in net.weights]
    vel_b = [np.zeros_like(b) for b in net.biases]
    scale = 1.0 / len(data)

    history: list[float] = []
    acts = _forward_all(net, batch)
    for _ in range(cfg.max_epochs):
        d_weights, d_biases = _backward(net, acts, targets, scale)
        for layer in range(len(net.weights)):
            vel_w[layer] = cfg.momentum * vel_w[layer] - cfg.learning_rate * d_weights[layer]
            vel_b[layer] = cfg.momentum * vel_b[layer] - cfg.learning_rate * d_biases[layer]
            net.weights[layer] = net.weights[layer] + vel_w[layer]
            net.biases[layer] = net.biases[layer] + vel_b[layer]
        acts = _forward_all(net, batch)
        mse = float(np.mean((acts[-1] - targets) ** 2))
        history.append(mse)
        if mse <= cfg.target_mse:
            break

    report = TrainReport(
        epochs_run=len(history),
        final_mse=history[-1],
        converged=history[-1] <= cfg.target_mse,
        history=tuple(history),
    )
    return net, report


def classify(net: Network, x, threshold: float = 0.5) -> tuple[Label, float]:
    """Label an input AtRisk when its score reaches the threshold (inclusive)."""
    score = forward(net, x)
    label = Label.AT_RISK if score >= threshold else Label.NORMAL
    return label, score


_TRANSITIONS = {("A", "G"), ("G", "A"), ("C", "T"), ("T", "C")}


def encode(mut: Mutation, ref: DnaSequence) -> FeatureVector:
    """Encode one classified mutation as the fixed 10-component vector.

    Components, in order: f1 position/refLength; f2-f4 one-hot kind
    (substitution, insertion, deletion); f5-f7 one-hot effect (Silent,
    Missense, Nonsense), all zero for Frameshift and NonCoding; f8
    frameshift flag; f9 GC fraction of the 21-base window around the
    position (clamped to base 1 for an insertion before the start); f10
    1 for a transition substitution, 0 for a transversion, 0.5 for indels.
    A multi-base substitution counts as a transition only if every changed
    column is one.
    """
    from .protein import EffectKind

    if mut.effect is None:
        raise ValueError("mutation must carry a protein effect before encoding")
    kind_hot = {
        MutationKind.SUBSTITUTION: (1.0, 0.0, 0.0),
        MutationKind.INSERTION: (0.0, 1.0, 0.0),
        MutationKind.DELETION: (0.0, 0.0, 1.0),
    }[mut.kind]
    effect_hot = {
        EffectKind.SILENT: (1.0, 0.0, 0.0),
        EffectKind.MISSENSE: (0.0, 1.0, 0.0),
        EffectKind.NONSENSE: (0.0, 0.0, 1.0),
    }.get(mut.effect.kind, (0.0, 0.0, 0.0))
    if mut.kind is MutationKind.SUBSTITUTION:
        changed = [
            (r, a) for r, a in zip(mut.ref_bases, mut.alt_bases) if r != a
        ]
        f10 = 1.0 if changed and all(p in _TRANSITIONS for p in changed) else 0.0
    else:
        f10 = 0.5
    return FeatureVector(
        (
            mut.position / len(ref),
            *kind_hot,
            *effect_hot,
            1.0 if mut.effect.kind is EffectKind.FRAMESHIFT else 0.0,
            windowed_gc(ref, max(1, mut.position)),
            f10,
        )
    )


def save_net(net: Network, path: str | Path) -> None:
    """Write the network as versioned JSON; floats keep full precision."""
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "topology": list(net.topology.layer_sizes),
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
        "train_config": None
        if net.train_config is None
        else {
            "learning_rate": net.train_config.learning_rate,
            "momentum": net.train_config.momentum,
            "target_mse": net.train_config.target_mse,
            "max_epochs": net.train_config.max_epochs,
            "seed": net.train_config.seed,
            "init_range": list(net.train_config.init_range),
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_net(path: str | Path) -> Network:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptFileError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise CorruptFileError(f"{path} is not a model file")
    if doc.get("version") != MODEL_VERSION:
        raise VersionMismatchError(
            f"model version {doc.get('version')!r}, expected {MODEL_VERSION}"
        )
    try:
        topology = NetworkTopology(tuple(int(s) for s in doc["topology"]))
        weights = [np.asarray(w, dtype=np.float64) for w in doc["weights"]]
        biases = [np.asarray(b, dtype=np.float64) for b in doc["biases"]]
        cfg_doc = doc.get("train_config")
        cfg = (
            None
            if cfg_doc is None
            else TrainConfig(
                learning_rate=cfg_doc["learning_rate"],
                momentum=cfg_doc["momentum"],
                target_mse=cfg_doc["target_mse"],
                max_epochs=cfg_doc["max_epochs"],
                seed=cfg_doc["seed"],
                init_range=tuple(cfg_doc["init_range"]),
            )
        )
        return Network(topology, weights, biases, train_config=cfg)
    except (KeyError, TypeError, ValueError, DimensionMismatchError) as exc:
        raise CorruptFileError(f"model file {path} is malformed: {exc}") from exc


@dataclass(frozen=True)
class TrainingRow:
    """One line of a training dataset file.

    Rows carry either a ready feature vector or a mutation descriptor to be
    encoded against a reference at load time.
    """

    id: str
    gene: str
    label: int
    features: tuple[float, ...] | None = None
    mutation: dict | None = field(default=None)


def load_training_rows(path: str | Path) -> list[TrainingRow]:
    """Parse a JSON-lines training file: {id, gene, features|mutation, label}."""
    rows: list[TrainingRow] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptFileError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        try:
            row = TrainingRow(
                id=str(obj["id"]),
                gene=str(obj["gene"]),
                label=int(obj["label"]),
                features=tuple(float(v) for v in obj["features"])
                if "features" in obj
                else None,
                mutation=obj.get("mutation"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFileError(f"{path}:{lineno}: bad row: {exc}") from exc
        if row.label not in (0, 1):
            raise CorruptFileError(f"{path}:{lineno}: label must be 0 or 1")
        if row.features is None and row.mutation is None:
            raise CorruptFileError(
                f"{path}:{lineno}: row needs features or a mutation descriptor"
            )
        rows.append(row)
    if not rows:
        raise EmptyDatasetError(f"no training rows in {path}")
    return rows


def rows_to_samples(
    rows: list[TrainingRow],
    ref: DnaSequence | None = None,
    cds_start: int | None = None,
    cds_end: int | None = None,
) -> list[tuple[FeatureVector, int]]:
    """Resolve rows to (features, label) pairs.

    Descriptor-only rows are classified and encoded against `ref` and its
    CDS; without a reference they are rejected, since the encoding needs
    sequence context.
    """
    from .protein import classify_effect

    samples: list[tuple[FeatureVector, int]] = []
    for row in rows:
        if row.features is not None:
            samples.append((FeatureVector(row.features), row.label))
            continue
        if ref is None or cds_start is None or cds_end is None:
            raise NeuralError(
                f"row {row.id} has only a mutation descriptor; encoding it "
                "requires a reference sequence and CDS bounds"
            )
        desc = row.mutation
        try:
            mut = Mutation(
                position=int(desc["position"]),
                kind=MutationKind(desc["kind"]),
                ref_bases=str(desc.get("ref", "")),
                alt_bases=str(desc.get("alt", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFileError(f"row {row.id}: bad mutation descriptor: {exc}") from exc
        effect = classify_effect(mut, ref, cds_start, cds_end)
        mut = Mutation(mut.position, mut.kind, mut.ref_bases, mut.alt_bases, effect)
        samples.append((encode(mut, ref), row.label))
    return samples
