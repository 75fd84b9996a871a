"""Output layers: trained linear readout rules and nearest-core rules.

Two families share the Prediction interface.  The readout family scores
a state column (or a sum of columns) through a ridge-trained weight
matrix and takes the argmax.  The tensor family projects a state matrix
into fitted Tucker-2 bases and picks the class of the nearest core
slice in Frobenius norm.

Class ids are 1-based throughout.  Ties break toward the lowest class
id (or lowest slice index) and set the ``tie`` flag.
"""

import io
from dataclasses import dataclass

import numpy as np

from . import tensor_ops as tops
from .numlin import ridge_solve
from .tucker import project_core

_TIE_REL = 1e-12  # scores this close (relative) count as tied


@dataclass(frozen=True)
class OutputWeights:
    """Ridge-trained readout matrix (K x N) and the lambda that made it."""

    w: np.ndarray
    ridge_lambda: float

    def __post_init__(self):
        if self.w.ndim != 2 or self.w.shape[0] < 2:
            raise ValueError(
                f"readout must be K x N with K >= 2, got shape {self.w.shape}"
            )
        if not np.all(np.isfinite(self.w)):
            raise ValueError("readout entries must be finite")

    @property
    def n_classes(self):
        return self.w.shape[0]


@dataclass(frozen=True)
class Prediction:
    """Predicted class id with the per-class score detail."""

    label: int
    scores: np.ndarray  # per-class scores (higher wins) or distances (lower)
    tie: bool


def _argmax_prediction(scores):
    scores = np.asarray(scores, dtype=float)
    best = int(np.argmax(scores))
    tol = _TIE_REL * max(1.0, float(np.max(np.abs(scores))))
    tie = int(np.sum(scores >= scores[best] - tol)) > 1
    return Prediction(label=best + 1, scores=scores, tie=tie)


def _argmin_prediction(dists):
    dists = np.asarray(dists, dtype=float)
    best = int(np.argmin(dists))
    tol = _TIE_REL * max(1.0, float(np.max(np.abs(dists))))
    tie = int(np.sum(dists <= dists[best] + tol)) > 1
    return best, tie


def train_output_weights(x, slice_labels, pointwise_labels=None,
                         ridge_lambda=0.0, n_classes=None):
    """Train the readout on a stacked state tensor ``x`` (N x T x M).

    The tensor is unfolded to [slice_1 | ... | slice_M] and paired with an
    indicator matrix whose column (j-1)T + t is the basis vector of the
    label active in slice j at time t.  ``pointwise_labels`` (M x T)
    overrides the per-slice labels for inputs whose class switches over
    time; otherwise every time step inherits its slice's label.
    """
    x = tops.as_tensor3(x)
    n, t, m = x.shape
    slice_labels = np.asarray(slice_labels, dtype=int)
    if slice_labels.shape != (m,):
        raise ValueError(f"expected {m} slice labels, got "
                         f"shape {slice_labels.shape}")
    if pointwise_labels is None:
        pointwise = np.repeat(slice_labels[:, None], t, axis=1)
    else:
        pointwise = np.asarray(pointwise_labels, dtype=int)
        if pointwise.shape != (m, t):
            raise ValueError(f"pointwise labels must be {(m, t)}, got "
                             f"shape {pointwise.shape}")
    if n_classes is None:
        n_classes = int(pointwise.max())
    if pointwise.min() < 1 or pointwise.max() > n_classes:
        raise ValueError("labels must lie in 1..n_classes")

    x3 = tops.unfold(x, 1)                       # N x (T M), slice j then t
    flat = pointwise.reshape(-1)                 # matches unfold column order
    y = np.zeros((n_classes, t * m))
    y[flat - 1, np.arange(t * m)] = 1.0
    w = ridge_solve(x3, y, ridge_lambda)
    return OutputWeights(w=w, ridge_lambda=float(ridge_lambda))


def classify_pointwise(weights, states, t):
    """Classify time step ``t`` (1-based) of a state matrix."""
    states = tops.as_matrix(states)
    if not 1 <= t <= states.shape[1]:
        raise ValueError(f"t={t} outside 1..{states.shape[1]}")
    return _argmax_prediction(weights.w @ states[:, t - 1])


def classify_block(weights, states, omega=None):
    """Classify a whole state matrix by the summed score over ``omega``.

    ``omega`` is a collection of 1-based time steps; by default all of
    them.  ``omega = {T}`` reproduces single-endpoint sampling.
    """
    states = tops.as_matrix(states)
    n_steps = states.shape[1]
    if omega is None:
        idx = np.arange(n_steps)
    else:
        omega = sorted(set(int(t) for t in omega))
        if not omega:
            raise ValueError("omega must be nonempty")
        if omega[0] < 1 or omega[-1] > n_steps:
            raise ValueError(f"omega must lie within 1..{n_steps}")
        idx = np.asarray(omega) - 1
    return _argmax_prediction(weights.w @ states[:, idx].sum(axis=1))


def _slice_distances(g, core):
    """Frobenius distance of ``g`` to every frontal slice of ``core``."""
    diff = core - g[:, :, None]
    return np.sqrt(np.sum(diff * diff, axis=(0, 1)))


def classify_global_tensor(states, model):
    """Nearest-core-slice rule under a single global Tucker-2 model.

    Projects the states into the model's bases and returns the class of
    the training slice whose core is closest.  ``scores`` holds the
    minimum distance per class.
    """
    g = project_core(states, model)
    dists = _slice_distances(g, model.core)
    best, tie = _argmin_prediction(dists)
    label = int(model.slice_labels[best])
    class_ids = np.unique(model.slice_labels)
    per_class = np.array([dists[model.slice_labels == c].min()
                          for c in class_ids])
    return Prediction(label=label, scores=per_class, tie=tie)


def classify_perclass_tensor(states, models):
    """Nearest-core rule with one Tucker-2 model per class.

    For each class the states are projected into that class's own bases
    and compared against that class's core slices; the class with the
    smallest minimum distance wins.
    """
    if not models:
        raise ValueError("need at least one per-class model")
    dists = np.empty(len(models))
    for k, model in enumerate(models):
        g = project_core(states, model)
        dists[k] = _slice_distances(g, model.core).min()
    best, tie = _argmin_prediction(dists)
    label = int(models[best].slice_labels[0])
    return Prediction(label=label, scores=dists, tie=tie)


def predictions_to_csv(sample_ids, true_labels, predictions):
    """Render predictions as CSV rows with per-class score detail."""
    buf = io.StringIO()
    buf.write("sample_id,true_label,predicted_label,tie,scores\n")
    for sid, truth, pred in zip(sample_ids, true_labels, predictions):
        scores = ";".join(f"{s:.6g}" for s in pred.scores)
        buf.write(f"{sid},{truth},{pred.label},{int(pred.tie)},{scores}\n")
    return buf.getvalue()
