"""Orthogonal Tucker-2 decomposition of state tensors by alternating SVDs.

``hooi`` fits factor matrices U (space) and V (time) with orthonormal
columns and a core tensor whose frontal slices are per-sample feature
matrices.  ``project_core`` maps a new state matrix into the fitted
bases; ``fit_per_class`` builds one model per class.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import tensor_ops as tops
from .numlin import truncated_svd, fix_column_signs

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 100


@dataclass(frozen=True)
class HooiConfig:
    """Ranks, stopping tolerance, iteration cap and init seed."""

    ranks: tuple  # (J1, J2)
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    seed: int = 0

    def __post_init__(self):
        j1, j2 = self.ranks
        if j1 < 1 or j2 < 1:
            raise ValueError(f"ranks must be positive, got {self.ranks}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class TuckerModel:
    """Fitted factor pair, core tensor and per-slice class labels."""

    u: np.ndarray          # (N, J1), orthonormal columns
    v: np.ndarray          # (T, J2), orthonormal columns
    core: np.ndarray       # (J1, J2, M)
    slice_labels: np.ndarray  # (M,) class id per frontal slice
    ranks: tuple
    converged: bool
    iterations: int
    # Frobenius norm of the core after each iteration; diagnostic only.
    objective_history: tuple = field(default=(), compare=False)

    @property
    def n_space(self):
        return self.u.shape[0]

    @property
    def n_time(self):
        return self.v.shape[0]

    @property
    def n_slices(self):
        return self.core.shape[2]


def _random_orthonormal(rng, n, r):
    q, _ = np.linalg.qr(rng.standard_normal((n, r)))
    return q


def hooi(x, cfg, labels=None):
    """Fit an orthogonal Tucker-2 decomposition of ``x`` (N x T x M).

    Alternates the two factor updates: contract mode 2 by V' and take the
    dominant left singular vectors of the mode-1 unfolding for U, then
    contract mode 1 by U' and take the mode-2 unfolding's dominant left
    singular vectors for V.  Stops when the leading singular values of
    both updates change by less than ``cfg.tol``, or at ``cfg.max_iters``
    (the model is then returned with ``converged=False``).
    """
    x = tops.as_tensor3(x)
    n, t, m = x.shape
    j1, j2 = cfg.ranks
    if j1 > n or j2 > t:
        raise ValueError(
            f"ranks {cfg.ranks} exceed tensor dimensions (N={n}, T={t})"
        )
    if labels is None:
        labels = np.ones(m, dtype=int)
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (m,):
        raise ValueError(
            f"expected {m} slice labels, got shape {labels.shape}"
        )

    rng = np.random.default_rng(cfg.seed)
    u = _random_orthonormal(rng, n, j1)
    v = _random_orthonormal(rng, t, j2)
    s1_prev = np.zeros(j1)
    s2_prev = np.zeros(j2)
    history = []
    converged = False
    iterations = 0

    for iterations in range(1, cfg.max_iters + 1):
        b = tops.mode_product(x, v.T, 2)
        res1 = truncated_svd(tops.unfold(b, 1), j1)
        u = res1.left_vectors
        s1 = res1.singular_values

        b = tops.mode_product(x, u.T, 1)
        res2 = truncated_svd(tops.unfold(b, 2), j2)
        v = res2.left_vectors
        s2 = res2.singular_values

        # ||core|| at the current factors: V holds the top-J2 left singular
        # vectors of (X x1 U')_(2), so the projected energy is sum(s2^2)
        history.append(float(np.sqrt(np.sum(s2**2))))

        change = max(
            float(np.max(np.abs(s1 - s1_prev))),
            float(np.max(np.abs(s2 - s2_prev))),
        )
        if change < cfg.tol:
            converged = True
            break
        s1_prev, s2_prev = s1, s2

    core = tops.mode_product(tops.mode_product(x, u.T, 1), v.T, 2)
    return TuckerModel(
        u=u,
        v=v,
        core=core,
        slice_labels=labels,
        ranks=(j1, j2),
        converged=converged,
        iterations=iterations,
        objective_history=tuple(history),
    )


def project_core(x, model):
    """Feature matrix ``U' X V`` of a state matrix in the fitted bases."""
    x = tops.as_matrix(x)
    if x.shape != (model.n_space, model.n_time):
        raise ValueError(
            f"state matrix of shape {x.shape} does not match model "
            f"dimensions ({model.n_space}, {model.n_time})"
        )
    return model.u.T @ x @ model.v


def reconstruct(model):
    """Rebuild the rank-(J1,J2) approximation ``core x1 U x2 V``."""
    return tops.mode_product(tops.mode_product(model.core, model.u, 1),
                             model.v, 2)


def fit_per_class(class_tensors, cfg, class_ids=None):
    """Fit one Tucker-2 model per class tensor.

    ``class_tensors`` is a list of N x T x M_k tensors, one per class,
    all sharing (N, T).  Each class k uses a seed offset by k so the
    random initializations differ but remain reproducible.
    """
    if not class_tensors:
        raise ValueError("need at least one class tensor")
    if class_ids is None:
        class_ids = list(range(1, len(class_tensors) + 1))
    if len(class_ids) != len(class_tensors):
        raise ValueError("class_ids and class_tensors length mismatch")
    base = tops.as_tensor3(class_tensors[0]).shape[:2]
    models = []
    for k, (cid, xk) in enumerate(zip(class_ids, class_tensors)):
        xk = tops.as_tensor3(xk)
        if xk.shape[2] < 1:
            raise ValueError(f"class {cid} has no samples")
        if xk.shape[:2] != base:
            raise ValueError(
                f"class {cid} tensor shape {xk.shape[:2]} differs from "
                f"{base}"
            )
        labels = np.full(xk.shape[2], cid, dtype=int)
        models.append(hooi(xk, replace(cfg, seed=cfg.seed + k), labels))
    return models


def save_model(model, path):
    """Serialize a TuckerModel to an ``.npz`` container (lossless)."""
    np.savez(
        path,
        dims=np.array([model.n_space, model.n_time, model.n_slices]),
        ranks=np.array(model.ranks),
        u=model.u,
        v=model.v,
        core=model.core,
        slice_labels=model.slice_labels,
        converged=np.array(int(model.converged)),
        iterations=np.array(model.iterations),
    )


def load_model(path):
    """Inverse of :func:`save_model`."""
    with np.load(path) as d:
        return TuckerModel(
            u=d["u"],
            v=d["v"],
            core=d["core"],
            slice_labels=d["slice_labels"],
            ranks=tuple(int(r) for r in d["ranks"]),
            converged=bool(int(d["converged"])),
            iterations=int(d["iterations"]),
        )
