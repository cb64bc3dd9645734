"""Character classifier: a 100-64-26 sigmoid network trained on the atlas.

Input is the 10x10 binary resample of a character segment; the 26 outputs
correspond to A-Z. Lowercase glyphs train their uppercase class, giving
four exemplars per letter (two cases x two fonts). Training is plain
per-example gradient descent on squared error with a fixed example order
and seeded initialization, so two runs produce identical weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelError, TrainingError
from .glyphs import LETTERS, GlyphAtlas
from .imgcore import BinaryImage, Rng, Segment, resize10

N_IN, N_HID, N_OUT = 100, 64, 26


@dataclass
class TrainConfig:
    learning_rate: float = 0.5
    max_epochs: int = 2000
    target_mse: float = 0.001
    init_range: tuple[float, float] = (-0.5, 0.5)
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


@dataclass
class NetModel:
    weights_ih: np.ndarray  # (100, 64)
    bias_h: np.ndarray      # (64,)
    weights_ho: np.ndarray  # (64, 26)
    bias_o: np.ndarray      # (26,)

    def __post_init__(self):
        shapes = [(self.weights_ih, (N_IN, N_HID)), (self.bias_h, (N_HID,)),
                  (self.weights_ho, (N_HID, N_OUT)), (self.bias_o, (N_OUT,))]
        for arr, shape in shapes:
            if arr.shape != shape:
                raise ModelError(f"weight shape {arr.shape} != expected {shape}")
            if not np.isfinite(arr).all():
                raise ModelError("non-finite weights")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def init_model(cfg: TrainConfig) -> NetModel:
    """Fresh model with weights drawn uniformly from cfg.init_range.

    Draw order: weights_ih row-major, bias_h, weights_ho row-major, bias_o.
    Each value is lo + (hi - lo) * next_float().
    """
    rng = Rng(cfg.seed)
    lo, hi = cfg.init_range
    span = hi - lo

    def draw(n):
        return np.array([lo + span * rng.next_float() for _ in range(n)])

    return NetModel(
        weights_ih=draw(N_IN * N_HID).reshape(N_IN, N_HID),
        bias_h=draw(N_HID),
        weights_ho=draw(N_HID * N_OUT).reshape(N_HID, N_OUT),
        bias_o=draw(N_OUT),
    )


def forward(model: NetModel, x: np.ndarray) -> np.ndarray:
    """Activations of the 26 output nodes, each strictly in (0, 1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (N_IN,):
        raise ValueError(f"feature vector must have length {N_IN}, got {x.shape}")
    h = _sigmoid(x @ model.weights_ih + model.bias_h)
    return _sigmoid(h @ model.weights_ho + model.bias_o)


def example_loss(model: NetModel, x: np.ndarray, target: np.ndarray) -> float:
    """Squared-error loss 0.5 * sum((o - t)^2) for one example."""
    o = forward(model, x)
    return float(0.5 * np.sum((o - target) ** 2))


def gradients(model: NetModel, x: np.ndarray, target: np.ndarray):
    """Analytic gradients of example_loss w.r.t. all four weight groups."""
    x = np.asarray(x, dtype=np.float64)
    h = _sigmoid(x @ model.weights_ih + model.bias_h)
    o = _sigmoid(h @ model.weights_ho + model.bias_o)
    delta_o = (o - target) * o * (1.0 - o)
    delta_h = (model.weights_ho @ delta_o) * h * (1.0 - h)
    return (np.outer(x, delta_h), delta_h, np.outer(h, delta_o), delta_o)


def glyph_feature(bitmap: BinaryImage) -> np.ndarray:
    """Training feature for a glyph: crop to its ink bbox, resample to 10x10.

    Matches what segmentation produces at break time (tight boxes).
    """
    m = bitmap.mask
    ys, xs = np.nonzero(m)
    crop = m[ys.min():ys.max() + 1, xs.min():xs.max() + 1]
    seg = Segment(bbox=(0, 0, crop.shape[1], crop.shape[0]), mask=BinaryImage(crop))
    return resize10(seg)


def training_set(atlas: GlyphAtlas) -> list[tuple[np.ndarray, int]]:
    """The 104 (feature, class index) pairs in fixed order.

    Per letter: upper font 0, lower font 0, upper font 1, lower font 1.
    """
    examples = []
    for ch in LETTERS:
        for case_ch, font_id in ((ch, 0), (ch.lower(), 0), (ch, 1), (ch.lower(), 1)):
            if (case_ch, font_id) not in atlas:
                raise TrainingError(f"atlas incomplete: missing {case_ch}/{font_id}")
            examples.append((glyph_feature(atlas.get(case_ch, font_id).bitmap),
                             LETTERS.index(ch)))
    return examples


def train(atlas: GlyphAtlas, cfg: TrainConfig | None = None) -> NetModel:
    """Train on the atlas until epoch MSE <= cfg.target_mse or max_epochs.

    Epoch MSE is the mean squared output error over all examples and
    output nodes, measured on the pre-update forward pass of each example.
    """
    cfg = cfg or TrainConfig()
    examples = training_set(atlas)
    model = init_model(cfg)
    targets = np.eye(N_OUT)
    lr = cfg.learning_rate
    for _epoch in range(cfg.max_epochs):
        sq_sum = 0.0
        for x, label in examples:
            t = targets[label]
            h = _sigmoid(x @ model.weights_ih + model.bias_h)
            o = _sigmoid(h @ model.weights_ho + model.bias_o)
            err = o - t
            sq_sum += float(np.sum(err * err))
            delta_o = err * o * (1.0 - o)
            delta_h = (model.weights_ho @ delta_o) * h * (1.0 - h)
            model.weights_ho -= lr * np.outer(h, delta_o)
            model.bias_o -= lr * delta_o
            model.weights_ih -= lr * np.outer(x, delta_h)
            model.bias_h -= lr * delta_h
        if sq_sum / (len(examples) * N_OUT) <= cfg.target_mse:
            break
    return model


def classify(model: NetModel, x: np.ndarray) -> tuple[str, float]:
    """Letter with the strongest activation; ties go to the lower index."""
    o = forward(model, x)
    idx = int(np.argmax(o))
    return LETTERS[idx], float(o[idx])


def save_model(model: NetModel) -> bytes:
    """Text serialization with full round-trip float precision."""
    lines = ["OCRNET1", f"{N_IN} {N_HID} {N_OUT}"]
    for row in model.weights_ih:
        lines.append(" ".join(repr(float(v)) for v in row))
    lines.append(" ".join(repr(float(v)) for v in model.bias_h))
    for row in model.weights_ho:
        lines.append(" ".join(repr(float(v)) for v in row))
    lines.append(" ".join(repr(float(v)) for v in model.bias_o))
    return ("\n".join(lines) + "\n").encode("ascii")


def load_model(data: bytes) -> NetModel:
    lines = data.decode("ascii").splitlines()
    if not lines or lines[0] != "OCRNET1":
        raise ModelError(f"bad magic {lines[0] if lines else '<empty>'!r}")
    if len(lines) < 2 or lines[1].split() != [str(N_IN), str(N_HID), str(N_OUT)]:
        raise ModelError(f"unsupported topology {lines[1] if len(lines) > 1 else '?'!r}")
    expected = 2 + N_IN + 1 + N_HID + 1
    if len(lines) != expected:
        raise ModelError(f"expected {expected} lines, got {len(lines)}")

    def parse_row(line: str, n: int) -> np.ndarray:
        vals = line.split()
        if len(vals) != n:
            raise ModelError(f"expected {n} values per row, got {len(vals)}")
        try:
            return np.array([float(v) for v in vals])
        except ValueError:
            raise ModelError("non-numeric weight") from None

    pos = 2
    w_ih = np.stack([parse_row(lines[pos + i], N_HID) for i in range(N_IN)])
    pos += N_IN
    b_h = parse_row(lines[pos], N_HID)
    pos += 1
    w_ho = np.stack([parse_row(lines[pos + i], N_OUT) for i in range(N_HID)])
    pos += N_HID
    b_o = parse_row(lines[pos], N_OUT)
    return NetModel(weights_ih=w_ih, bias_h=b_h, weights_ho=w_ho, bias_o=b_o)
