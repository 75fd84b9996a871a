"""Config-driven experiment runner.

Runs parameter grids of repeated randomized trials.  Within one
repetition the reservoir weights, the dataset draw and the test noise
are drawn once and shared by every classification method, so the
methods are compared on identical randomizations.  Per-repetition seeds
derive from the master seed through a counter-based scheme
(``SeedSequence(master_seed, spawn_key=(cell_index, repetition))``), so
results are reproducible and cells are independent.

Accuracy accounting: the switching-signal dataset counts segments (time
steps for the pointwise rule); the whole-sample datasets count samples.
"""

import io
import itertools
import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from . import classify, data, esn
from .tucker import HooiConfig, hooi, fit_per_class

METHODS = ("weights_pointwise", "weights_block", "tensor_global",
           "tensor_perclass")
DATASET_KINDS = ("sine_square", "usps", "jv")

# full-scale settings activated by the full_paper flag
_FULL_PAPER = {
    "sine_square": {"repetitions": 50, "train_patterns": 20,
                    "test_patterns": 50, "segments_per_pattern": 100},
    "usps": {"repetitions": 40, "per_class": 100},
    "jv": {"repetitions": 20},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Grids, method list and seeds for one experiment run."""

    dataset: dict
    methods: tuple
    n_grid: tuple
    activations: tuple = ("tanh",)
    betas: tuple = (0.0,)
    sigmas: tuple = (0.0,)
    j1_grid: tuple = ("max(1, N // 5)",)
    j2_grid: tuple = (5,)
    alpha: float = 1.0
    density: float = 0.1
    spectral_radius: float = 0.95
    scale_in: float = 1.0
    ridge_lambda: float = 1e-2
    repetitions: int = 5
    master_seed: int = 0
    hooi_tol: float = 1e-6
    hooi_max_iters: int = 100
    full_paper: bool = False

    def __post_init__(self):
        kind = self.dataset.get("kind")
        if kind not in DATASET_KINDS:
            raise ValueError(f"dataset kind must be one of {DATASET_KINDS}, "
                             f"got {kind!r}")
        if not self.methods:
            raise ValueError("method list must be nonempty")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; "
                             f"choose from {METHODS}")
        for name in ("n_grid", "activations", "betas", "sigmas",
                     "j1_grid", "j2_grid"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for name in ("methods", "n_grid", "activations", "betas", "sigmas",
                     "j1_grid", "j2_grid"):
            if name in d:
                d[name] = tuple(d[name])
        return cls(**d)

    def to_dict(self):
        d = asdict(self)
        for name in ("methods", "n_grid", "activations", "betas", "sigmas",
                     "j1_grid", "j2_grid"):
            d[name] = list(d[name])
        return d


@dataclass(frozen=True)
class ResultRow:
    """Aggregated accuracy for one grid cell, method and split."""

    dataset: str
    method: str
    split: str
    n_nodes: int
    activation: str
    beta: float
    j1: int
    j2: int
    sigma: float
    repetitions: int
    mean_accuracy: float
    std_accuracy: float
    degenerate_std: bool = False
    error: str = ""


def resolve_rank(expr, n):
    """Evaluate a rank-grid entry, which may be an expression in N."""
    if isinstance(expr, (int, np.integer)):
        return int(expr)
    allowed = {"N": n, "min": min, "max": max, "floor": math.floor}
    return int(eval(str(expr), {"__builtins__": {}}, allowed))


def _rep_seeds(master_seed, cell_index, rep):
    """Five independent integer seeds for one repetition of one cell."""
    ss = np.random.SeedSequence(master_seed,
                                spawn_key=(cell_index, rep))
    state = ss.generate_state(5, dtype=np.uint64)
    # order: reservoir, train data, test data, noise, hooi
    return [int(v) for v in state]


def _effective(cfg):
    """Dataset parameters and repetition count after the full_paper flag."""
    ds = dict(cfg.dataset)
    reps = cfg.repetitions
    if cfg.full_paper:
        overrides = dict(_FULL_PAPER[ds["kind"]])
        reps = overrides.pop("repetitions")
        ds.update(overrides)
    return ds, reps


# ---------------------------------------------------------------------------
# per-repetition evaluation

def _slice_segments(dataset, states_list, segment_len):
    """Cut full-pattern states into per-segment units with their labels."""
    units = []
    for sample, states in zip(dataset.samples, states_list):
        n_segments = sample.n_steps // segment_len
        for i in range(n_segments):
            lo = i * segment_len
            units.append((states[:, lo:lo + segment_len],
                          int(sample.pointwise_labels[lo])))
    return units


def _prepare_rep(cfg, ds_params, n_nodes, activation, beta, sigma, seeds,
                 jv_cache):
    """Draw dataset + reservoir + noise once; run the ESN on everything.

    Returns a dict with the training tensor and labels for the readout,
    unit lists (states, label) for the instance-level rules, and, for the
    switching-signal dataset, the full-pattern states with per-step
    labels used by the pointwise rule.
    """
    res_seed, train_seed, test_seed, noise_seed, hooi_seed = seeds
    kind = ds_params["kind"]
    if kind == "sine_square":
        seg_len = ds_params.get("segment_len", 100)
        ds_tr = data.gen_sine_square(
            ds_params.get("train_patterns", 10),
            ds_params.get("segments_per_pattern", 30),
            seg_len, seed=train_seed)
        ds_te = data.gen_sine_square(
            ds_params.get("test_patterns", 10),
            ds_params.get("segments_per_pattern", 30),
            seg_len, seed=test_seed)
    elif kind == "usps":
        ds_tr = data.load_usps(ds_params["path"],
                               ds_params.get("per_class", 30),
                               "train", seed=train_seed)
        ds_te = data.load_usps(ds_params["path"],
                               ds_params.get("per_class", 30),
                               "test", seed=train_seed)
    else:  # jv: fixed files, randomization lives in the reservoir and noise
        ds_tr, ds_te = jv_cache
    ds_te = data.add_noise(ds_te, sigma, seed=noise_seed)

    n_inputs = ds_tr.samples[0].values.shape[0]
    reservoir = esn.make_reservoir(
        n_nodes, n_inputs, density=cfg.density, scale_in=cfg.scale_in,
        spectral_radius=cfg.spectral_radius, alpha=cfg.alpha, beta=beta,
        activation=activation, seed=res_seed)

    states_tr = [esn.run(reservoir, s.values) for s in ds_tr.samples]
    states_te = [esn.run(reservoir, s.values) for s in ds_te.samples]

    rep = {
        "kind": kind,
        "n_classes": ds_tr.n_classes,
        "hooi_seed": hooi_seed,
        "train_tensor": esn.stack_states(states_tr),
        "train_slice_labels": ds_tr.labels(),
    }
    if kind == "sine_square":
        rep["train_pointwise"] = np.stack(
            [s.pointwise_labels for s in ds_tr.samples])
        rep["pointwise_pairs"] = {
            "train": (states_tr, rep["train_pointwise"]),
            "test": (states_te,
                     np.stack([s.pointwise_labels for s in ds_te.samples])),
        }
        rep["units"] = {
            "train": _slice_segments(ds_tr, states_tr, seg_len),
            "test": _slice_segments(ds_te, states_te, seg_len),
        }
    else:
        rep["train_pointwise"] = None
        rep["units"] = {
            "train": list(zip(states_tr, ds_tr.labels())),
            "test": list(zip(states_te, ds_te.labels())),
        }
    return rep


def _accuracy(pred_labels, true_labels):
    pred_labels = np.asarray(pred_labels)
    true_labels = np.asarray(true_labels)
    return 100.0 * float(np.mean(pred_labels == true_labels))


def _eval_weights(rep, weights):
    """Accuracies of the pointwise and block readout rules, per split."""
    out = {}
    for split in ("train", "test"):
        if rep["kind"] == "sine_square":
            states_list, pointwise = rep["pointwise_pairs"][split]
            hits = total = 0
            for states, labels in zip(states_list, pointwise):
                pred = np.argmax(weights.w @ states, axis=0) + 1
                hits += int(np.sum(pred == labels))
                total += labels.size
            out[("weights_pointwise", split)] = 100.0 * hits / total
        else:
            # whole-sample inputs: majority vote over per-step decisions
            preds, truth = [], []
            for states, label in rep["units"][split]:
                step = np.argmax(weights.w @ states, axis=0) + 1
                preds.append(np.bincount(step).argmax())
                truth.append(label)
            out[("weights_pointwise", split)] = _accuracy(preds, truth)

        preds = [classify.classify_block(weights, states).label
                 for states, _ in rep["units"][split]]
        truth = [label for _, label in rep["units"][split]]
        out[("weights_block", split)] = _accuracy(preds, truth)
    return out


def _nearest_global_labels(model, states_list):
    """Vectorized nearest-core-slice labels for a batch of state matrices."""
    batch = np.stack(states_list, axis=2)
    g = np.einsum("ni,ntm,tj->ijm", model.u, batch, model.v)
    gf = g.reshape(-1, g.shape[2]).T                    # units x (J1 J2)
    cf = model.core.reshape(-1, model.core.shape[2]).T  # slices x (J1 J2)
    d2 = ((gf * gf).sum(axis=1)[:, None]
          + (cf * cf).sum(axis=1)[None, :] - 2.0 * gf @ cf.T)
    return model.slice_labels[np.argmin(d2, axis=1)]


def _min_class_distance(model, states_list):
    """Per-unit minimum distance to any core slice of one class model."""
    batch = np.stack(states_list, axis=2)
    g = np.einsum("ni,ntm,tj->ijm", model.u, batch, model.v)
    gf = g.reshape(-1, g.shape[2]).T
    cf = model.core.reshape(-1, model.core.shape[2]).T
    d2 = ((gf * gf).sum(axis=1)[:, None]
          + (cf * cf).sum(axis=1)[None, :] - 2.0 * gf @ cf.T)
    return np.min(d2, axis=1)


def _eval_tensor(rep, method, hooi_cfg):
    """Accuracies of one nearest-core rule at one rank pair, per split."""
    train_units = rep["units"]["train"]
    unit_states = [u[0] for u in train_units]
    unit_labels = np.array([u[1] for u in train_units], dtype=int)

    if method == "tensor_global":
        model = hooi(esn.stack_states(unit_states), hooi_cfg, unit_labels)

        def predict(states_list):
            return _nearest_global_labels(model, states_list)
    else:
        class_ids = sorted(set(int(c) for c in unit_labels))
        tensors = [esn.stack_states(
            [s for s, lab in train_units if lab == cid])
            for cid in class_ids]
        models = fit_per_class(tensors, hooi_cfg, class_ids)

        def predict(states_list):
            dists = np.stack([_min_class_distance(m, states_list)
                              for m in models])
            return np.array(class_ids)[np.argmin(dists, axis=0)]

    out = {}
    for split in ("train", "test"):
        states_list = [u[0] for u in rep["units"][split]]
        truth = [u[1] for u in rep["units"][split]]
        out[(method, split)] = _accuracy(predict(states_list), truth)
    return out


# ---------------------------------------------------------------------------
# the grid loop

def _run_cell(cfg, ds_params, reps, cell_index, n_nodes, activation, beta,
              sigma, jv_cache):
    rank_pairs = []
    needs_ranks = any(m.startswith("tensor") for m in cfg.methods)
    if needs_ranks:
        seen = set()
        for e1, e2 in itertools.product(cfg.j1_grid, cfg.j2_grid):
            pair = (resolve_rank(e1, n_nodes), resolve_rank(e2, n_nodes))
            if pair not in seen:
                seen.add(pair)
                rank_pairs.append(pair)

    acc = {}  # (method, j1, j2, split) -> list of per-rep accuracies
    for rep_idx in range(reps):
        seeds = _rep_seeds(cfg.master_seed, cell_index, rep_idx)
        rep = _prepare_rep(cfg, ds_params, n_nodes, activation, beta, sigma,
                           seeds, jv_cache)
        if any(m.startswith("weights") for m in cfg.methods):
            weights = classify.train_output_weights(
                rep["train_tensor"], rep["train_slice_labels"],
                rep["train_pointwise"], cfg.ridge_lambda,
                n_classes=rep["n_classes"])
            for (method, split), value in _eval_weights(rep, weights).items():
                if method in cfg.methods:
                    acc.setdefault((method, 0, 0, split), []).append(value)
        for j1, j2 in rank_pairs:
            hooi_cfg = HooiConfig(ranks=(j1, j2), tol=cfg.hooi_tol,
                                  max_iters=cfg.hooi_max_iters,
                                  seed=rep["hooi_seed"])
            for method in cfg.methods:
                if not method.startswith("tensor"):
                    continue
                res = _eval_tensor(rep, method, hooi_cfg)
                for (_, split), value in res.items():
                    acc.setdefault((method, j1, j2, split), []).append(value)

    rows = []
    for method in cfg.methods:
        for (m, j1, j2, split), values in sorted(acc.items()):
            if m != method:
                continue
            values = np.asarray(values)
            degenerate = len(values) < 2
            rows.append(ResultRow(
                dataset=ds_params["kind"], method=method, split=split,
                n_nodes=n_nodes, activation=activation, beta=beta,
                j1=j1, j2=j2, sigma=sigma, repetitions=len(values),
                mean_accuracy=float(values.mean()),
                std_accuracy=0.0 if degenerate
                else float(values.std(ddof=1)),
                degenerate_std=degenerate,
            ))
    return rows


def run_experiment(cfg):
    """Run every grid cell; a failing cell yields an error row, not a crash."""
    ds_params, reps = _effective(cfg)
    jv_cache = None
    if ds_params["kind"] == "jv":
        jv_cache = data.load_jv(
            ds_params["train_path"], ds_params["test_path"],
            ds_params.get("resample_len", 24),
            ds_params.get("append_bias_rows", True))
    rows = []
    cells = list(itertools.product(cfg.n_grid, cfg.activations, cfg.betas,
                                   cfg.sigmas))
    for cell_index, (n_nodes, activation, beta, sigma) in enumerate(cells):
        try:
            rows.extend(_run_cell(cfg, ds_params, reps, cell_index, n_nodes,
                                  activation, beta, sigma, jv_cache))
        except Exception as exc:
            rows.append(ResultRow(
                dataset=ds_params["kind"], method="error", split="",
                n_nodes=n_nodes, activation=activation, beta=beta,
                j1=0, j2=0, sigma=sigma, repetitions=0,
                mean_accuracy=float("nan"), std_accuracy=float("nan"),
                error=str(exc),
            ))
    return rows


# ---------------------------------------------------------------------------
# output

CSV_HEADER = ("dataset,method,split,n_nodes,activation,beta,j1,j2,sigma,"
              "repetitions,mean_accuracy,std_accuracy,accuracy,"
              "degenerate_std,error")


def summarize(rows):
    """Render result rows as CSV with a two-decimal ``mean (std)`` column."""
    if not rows:
        raise ValueError("no rows to summarize")
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        if r.error:
            mean = std = fmt = ""
        else:
            mean = f"{r.mean_accuracy:.6f}"
            std = f"{r.std_accuracy:.6f}"
            fmt = f"{r.mean_accuracy:.2f} ({r.std_accuracy:.2f})"
        error = r.error.replace(",", ";").replace("\n", " ")
        buf.write(
            f"{r.dataset},{r.method},{r.split},{r.n_nodes},{r.activation},"
            f"{r.beta:.6g},{r.j1 or ''},{r.j2 or ''},{r.sigma:.6g},"
            f"{r.repetitions},{mean},{std},\"{fmt}\","
            f"{int(r.degenerate_std)},{error}\n"
        )
    return buf.getvalue()


def parse_summary(text):
    """Read :func:`summarize` output back into a list of dicts."""
    lines = [ln for ln in text.splitlines() if ln]
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        fields = []
        current = ""
        quoted = False
        for ch in line:
            if ch == '"':
                quoted = not quoted
            elif ch == "," and not quoted:
                fields.append(current)
                current = ""
            else:
                current += ch
        fields.append(current)
        out.append(dict(zip(header, fields)))
    return out


def figure_series(rows):
    """Per-figure data files: test accuracy vs N per (dataset, method, sigma).

    For the tensor methods the best mean over the rank grid is taken at
    each N, mirroring how the grid results are plotted.  Returns a dict
    of file name -> CSV text with columns ``x,mean,std``.
    """
    groups = {}
    for r in rows:
        if r.split != "test" or r.error:
            continue
        key = (r.dataset, r.method, r.sigma)
        best = groups.setdefault(key, {})
        prev = best.get(r.n_nodes)
        if prev is None or r.mean_accuracy > prev[0]:
            best[r.n_nodes] = (r.mean_accuracy, r.std_accuracy)
    out = {}
    for (dataset, method, sigma), series in sorted(groups.items()):
        buf = io.StringIO()
        buf.write("x,mean,std\n")
        for n in sorted(series):
            mean, std = series[n]
            buf.write(f"{n},{mean:.6f},{std:.6f}\n")
        out[f"fig_{dataset}_{method}_sigma{sigma:g}.csv"] = buf.getvalue()
    return out


def template_config(kind="sine_square"):
    """A ready-to-edit desk-scale config dict for each dataset kind."""
    if kind == "sine_square":
        cfg = ExperimentConfig(
            dataset={"kind": "sine_square", "train_patterns": 10,
                     "test_patterns": 10, "segments_per_pattern": 30,
                     "segment_len": 100},
            methods=METHODS,
            n_grid=(10, 20, 50),
            activations=("tanh", "sin"),
            betas=(0.0, math.pi / 4),
            j1_grid=("max(1, N // 5)",),
            j2_grid=(5,),
            alpha=0.5,
            ridge_lambda=1e-6,
            repetitions=5,
        )
    elif kind == "usps":
        cfg = ExperimentConfig(
            dataset={"kind": "usps", "path": "digits.txt", "per_class": 30},
            methods=("weights_block", "tensor_global"),
            n_grid=(10, 25, 50),
            activations=("tanh",),
            betas=(math.pi / 4,),
            j1_grid=(5, 10, "N // 2", "(3 * N) // 4"),
            j2_grid=(4, 8, 12),
            repetitions=10,
        )
    elif kind == "jv":
        cfg = ExperimentConfig(
            dataset={"kind": "jv", "train_path": "ae.train",
                     "test_path": "ae.test", "resample_len": 24,
                     "append_bias_rows": True},
            methods=("weights_block", "tensor_global"),
            n_grid=(4, 10, 20),
            activations=("sin",),
            betas=(math.pi / 4,),
            sigmas=(0.0, 0.05, 0.10),
            j1_grid=("max(1, (3 * N) // 4)",),
            j2_grid=(8,),
            repetitions=10,
        )
    else:
        raise ValueError(f"unknown template kind {kind!r}")
    return cfg.to_dict()


def save_config(cfg, path):
    with open(path, "w") as fh:
        json.dump(cfg.to_dict() if isinstance(cfg, ExperimentConfig) else cfg,
                  fh, indent=2)
        fh.write("\n")


def load_config(path):
    with open(path) as fh:
        return ExperimentConfig.from_dict(json.load(fh))
