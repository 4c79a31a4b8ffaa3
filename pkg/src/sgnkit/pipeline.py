"""Feature-space expansion and the classification benchmark.

Per-order feature blocks are concatenated, standardised, reduced by PCA to
the width of the order-0 block, and fed to an L2-regularised logistic
regression. Evaluation repeats random train/test splits and reports F1.
"""

from __future__ import annotations

import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .datasets import GraphDataset
from .features import FEATURE_NAMES, FeatureConfig, extract_features
from .sgn import ITERATED_LINE, SgnConfig, line_graph, sgn_series
from .wl import DEGREE, WlConfig, WlVocabulary, default_init, wl_feature_matrix

log = logging.getLogger(__name__)

HANDCRAFTED = "handcrafted"
WL = "wl"
METHODS = (HANDCRAFTED, WL)


class PipelineError(ValueError):
    pass


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    columns: tuple[str, ...]
    orders: tuple[int, ...]

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise PipelineError("values/columns shape mismatch")
        if len(self.orders) != len(self.columns):
            raise PipelineError("orders/columns length mismatch")
        if not np.all(np.isfinite(self.values)):
            raise PipelineError("feature matrix has non-finite entries")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @classmethod
    def from_array(cls, values, columns: Sequence[str], order: int) -> "FeatureMatrix":
        values = np.asarray(values, dtype=float).reshape(-1, len(columns))
        return cls(values, tuple(f"{c}@{order}" for c in columns), (order,) * len(columns))


def concat_orders(blocks: Sequence[FeatureMatrix]) -> FeatureMatrix:
    if not blocks:
        raise PipelineError("no blocks to concatenate")
    rows = {b.shape[0] for b in blocks}
    if len(rows) != 1:
        raise PipelineError(f"row count mismatch across blocks: {sorted(rows)}")
    return FeatureMatrix(
        np.hstack([b.values for b in blocks]),
        tuple(c for b in blocks for c in b.columns),
        tuple(o for b in blocks for o in b.orders),
    )


def _as_array(X) -> np.ndarray:
    return X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=float)


# --------------------------------------------------------------------- PCA


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    std: np.ndarray
    components: np.ndarray  # (d, p), orthonormal rows
    explained_variance: np.ndarray

    @property
    def dim(self) -> int:
        return self.components.shape[0]


def standardize_params(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    # constant columns keep their (zero) centred values
    std[std < 1e-12] = 1.0
    return mean, std


def fit_pca(X, d: int) -> PcaModel:
    X = _as_array(X)
    n, p = X.shape
    if n < 2:
        raise PipelineError("PCA needs at least 2 rows")
    if not 1 <= d <= p:
        raise PipelineError(f"target dimension {d} outside [1, {p}]")
    mean, std = standardize_params(X)
    Z = (X - mean) / std
    cov = Z.T @ Z / (n - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1][:d]
    comps = vecs[:, order].T.copy()
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PcaModel(mean, std, comps, np.clip(vals[order], 0.0, None))


def apply_pca(m: PcaModel, X) -> np.ndarray:
    X = _as_array(X)
    if X.ndim != 2 or X.shape[1] != m.mean.shape[0]:
        raise PipelineError(
            f"expected {m.mean.shape[0]} columns, got {X.shape[1] if X.ndim == 2 else X.shape}"
        )
    return ((X - m.mean) / m.std) @ m.components.T


# ----------------------------------------------------- logistic regression


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray
    intercept: float
    reg: float
    final_loss: float
    iterations: int
    converged: bool

    def decision(self, X) -> np.ndarray:
        return _as_array(X) @ self.weights + self.intercept

    def predict(self, X) -> np.ndarray:
        return (self.decision(X) > 0).astype(int)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logreg_loss_grad(theta: np.ndarray, X: np.ndarray, y: np.ndarray, reg: float):
    """Penalised negative log-likelihood and its gradient.

    ``theta = [intercept, w_1..w_p]``; the intercept is not penalised.
    Loss = sum_i log(1 + exp(z_i)) - y_i z_i + reg/2 * |w|^2.
    """
    z = theta[0] + X @ theta[1:]
    loss = float(np.sum(np.logaddexp(0.0, z) - y * z) + 0.5 * reg * theta[1:] @ theta[1:])
    r = _sigmoid(z) - y
    grad = np.concatenate(([r.sum()], X.T @ r + reg * theta[1:]))
    return loss, grad


def train_logreg(X, y, reg: float = 1.0, seed: Optional[int] = None,
                 tol: float = 1e-6, max_iter: int = 200) -> LogRegModel:
    """Newton/IRLS from zero weights.

    ``seed`` is accepted for interface symmetry; the optimum is unique for
    ``reg > 0`` and the iteration is deterministic, so it is unused.
    """
    X = _as_array(X)
    y = np.asarray(y, dtype=float)
    if X.shape[0] != y.shape[0]:
        raise PipelineError("X and y row counts differ")
    if not np.all((y == 0) | (y == 1)):
        raise PipelineError("labels must be 0/1")
    if len(np.unique(y)) < 2:
        raise PipelineError("training set has a single class")
    n, p = X.shape
    Xa = np.hstack([np.ones((n, 1)), X])
    penalty = np.full(p + 1, reg)
    penalty[0] = 0.0
    theta = np.zeros(p + 1)
    loss, grad = logreg_loss_grad(theta, X, y, reg)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        s = _sigmoid(Xa @ theta)
        w = s * (1.0 - s)
        H = Xa.T @ (Xa * w[:, None]) + np.diag(penalty)
        step = np.linalg.lstsq(H, grad, rcond=None)[0]
        # damped Newton keeps separable or badly scaled problems monotone
        t = 1.0
        while True:
            cand = theta - t * step
            cand_loss, cand_grad = logreg_loss_grad(cand, X, y, reg)
            if cand_loss <= loss + 1e-12 * abs(loss) or t < 1e-8:
                break
            t *= 0.5
        theta, loss, grad = cand, cand_loss, cand_grad
        if np.linalg.norm(grad) < tol:
            converged = True
            break
    return LogRegModel(theta[1:].copy(), float(theta[0]), reg, loss, it, converged)


# ------------------------------------------------------------------ metrics


@dataclass(frozen=True)
class Metrics:
    f1: float
    precision: float
    recall: float


def f1_score(y_true, y_pred) -> Metrics:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise PipelineError("y_true and y_pred lengths differ")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true != 1) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred != 1)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return Metrics(0.0, precision, recall)
    return Metrics(2 * precision * recall / (precision + recall), precision, recall)


def gain(f1_combined: float, f1_original: float) -> float:
    """Relative improvement over the baseline, in percent."""
    if f1_original == 0:
        raise PipelineError("gain undefined for a zero baseline")
    return (f1_combined - f1_original) / f1_original * 100.0


def feature_importance(m) -> np.ndarray:
    """|beta_i| / sum |beta| in percent; uniform (with a warning) for all-zero weights."""
    beta = np.abs(np.asarray(m.weights if isinstance(m, LogRegModel) else m, dtype=float))
    if beta.size == 0:
        raise PipelineError("no weights")
    total = beta.sum()
    if total == 0:
        warnings.warn("all weights are zero; reporting uniform importance", RuntimeWarning)
        return np.full(beta.size, 100.0 / beta.size)
    return beta / total * 100.0


# ------------------------------------------------------------ feature blocks


def wl_block(graphs, order: int, cfg: WlConfig) -> FeatureMatrix:
    values = wl_feature_matrix(graphs, cfg, WlVocabulary())
    cols = tuple(f"wl{j}@{order}" for j in range(values.shape[1]))
    return FeatureMatrix(values, cols, (order,) * len(cols))


def _series_job(args):
    g, max_order, rule = args
    graphs = [g]
    seconds = []
    prev = None
    for k in range(1, max_order + 1):
        t = time.perf_counter()
        if rule != ITERATED_LINE and k == 2:
            cur = sgn_series(g, 2, rule)[2]
        else:
            cur = line_graph(prev if prev is not None else g)
        seconds.append(time.perf_counter() - t)
        graphs.append(cur.graph)
        prev = cur
    return graphs, seconds


def _features_job(args):
    graphs, cfg = args
    return [extract_features(g, cfg).as_array() for g in graphs]


def _pool_map(fn, items, n_jobs: int):
    if n_jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        # map preserves input order, so results do not depend on scheduling
        return list(pool.map(fn, items))


def _chunks(items: list, n: int) -> list[list]:
    size = max(1, -(-len(items) // max(1, n)))
    return [items[i:i + size] for i in range(0, len(items), size)]


@dataclass
class OrderBlocks:
    """Feature blocks per SGN order plus stage timings (seconds)."""

    blocks: dict[int, FeatureMatrix]
    timings: dict[str, float] = field(default_factory=dict)


def compute_order_blocks(
    ds: GraphDataset,
    method: str = HANDCRAFTED,
    max_order: int = 2,
    rule: str = ITERATED_LINE,
    feature_cfg: FeatureConfig = FeatureConfig(),
    wl_height: int = 2,
    n_jobs: int = 1,
) -> OrderBlocks:
    """SGN transforms and per-order feature blocks for a whole dataset.

    Transform timings are summed per-graph construction times for each
    order, so they do not depend on ``n_jobs``.
    """
    if method not in METHODS:
        raise PipelineError(f"unknown feature method {method!r}")
    if rule != ITERATED_LINE and max_order > 2:
        raise PipelineError(f"rule {rule!r} only defines order 2")
    SgnConfig(order=min(max_order, 2) if rule != ITERATED_LINE else max_order, rule=rule)
    series = _pool_map(_series_job, [(g, max_order, rule) for g in ds.graphs], n_jobs)
    timings = {
        f"transform_order{k}": float(sum(sec[k - 1] for _, sec in series))
        for k in range(1, max_order + 1)
    }
    blocks = {}
    for k in range(max_order + 1):
        graphs = [gs[k] for gs, _ in series]
        t = time.perf_counter()
        if method == HANDCRAFTED:
            parts = _pool_map(_features_job, [(c, feature_cfg) for c in _chunks(graphs, n_jobs)], n_jobs)
            rows = [r for part in parts for r in part]
            values = np.vstack(rows) if rows else np.zeros((0, len(FEATURE_NAMES)))
            blocks[k] = FeatureMatrix(values, tuple(f"{c}@{k}" for c in FEATURE_NAMES),
                                      (k,) * len(FEATURE_NAMES))
        else:
            init = default_init(ds) if k == 0 else DEGREE
            blocks[k] = wl_block(graphs, k, WlConfig(height=wl_height, init=init))
        timings[f"features_order{k}"] = time.perf_counter() - t
    return OrderBlocks(blocks, timings)


# --------------------------------------------------------------- experiment


@dataclass
class CombinationResult:
    orders: tuple[int, ...]
    f1_scores: np.ndarray  # percent, one per repetition
    importances: np.ndarray  # percent per input column, averaged over reps
    columns: tuple[str, ...]
    resamples: int

    @property
    def mean_f1(self) -> float:
        return float(self.f1_scores.mean())

    @property
    def std_f1(self) -> float:
        return float(self.f1_scores.std())


@dataclass
class ExperimentResult:
    combinations: list[CombinationResult]
    repetitions: int
    train_frac: float
    reg: float
    seed: int
    timings: dict[str, float] = field(default_factory=dict)

    def by_orders(self, orders) -> CombinationResult:
        orders = tuple(orders)
        for c in self.combinations:
            if c.orders == orders:
                return c
        raise KeyError(orders)

    def gain(self, orders) -> Optional[float]:
        """Gain of ``orders`` over the order-0 run, if one was made."""
        try:
            base = self.by_orders((0,))
        except KeyError:
            return None
        return gain(self.by_orders(orders).mean_f1, base.mean_f1)


def split_indices(n: int, train_frac: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    perm = rng.permutation(n)
    n_train = min(n - 1, max(1, int(round(train_frac * n))))
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def _draw_split(y: np.ndarray, train_frac: float, seed: int, rep: int, max_tries: int = 1000):
    """Split for one repetition; resample while the training side is single-class."""
    rng = np.random.default_rng([seed, rep])
    for tries in range(max_tries):
        train, test = split_indices(len(y), train_frac, rng)
        if len(np.unique(y[train])) == 2:
            return train, test, tries
    raise PipelineError(f"no two-class training split after {max_tries} draws")


def evaluate_split(X: np.ndarray, y: np.ndarray, train, test, d: int, reg: float):
    """Fit PCA + standardisation + logistic regression on ``train``, score ``test``.

    Returns the test F1 (fraction) and the model weights mapped back onto the
    standardised input columns.
    """
    d = min(d, X.shape[1], len(train))
    pca = fit_pca(X[train], d)
    z_train = apply_pca(pca, X[train])
    mu, sd = standardize_params(z_train)
    model = train_logreg((z_train - mu) / sd, y[train], reg=reg)
    z_test = (apply_pca(pca, X[test]) - mu) / sd
    score = f1_score(y[test], model.predict(z_test)).f1
    back = pca.components.T @ (model.weights / sd)
    return score, back


def run_combination(blocks: dict[int, FeatureMatrix], y, orders, repetitions: int = 100,
                    train_frac: float = 0.9, reg: float = 1.0, seed: int = 0,
                    target_dim: Optional[int] = None) -> CombinationResult:
    if repetitions < 1:
        raise PipelineError("repetitions must be >= 1")
    if not 0 < train_frac < 1:
        raise PipelineError("train_frac must lie in (0, 1)")
    orders = tuple(orders)
    missing = [k for k in orders if k not in blocks]
    if missing:
        raise PipelineError(f"no feature block for orders {missing}")
    fm = concat_orders([blocks[k] for k in orders])
    X = fm.values
    y = np.asarray(y)
    d = target_dim if target_dim is not None else blocks[min(blocks)].shape[1]
    scores = np.empty(repetitions)
    imp = np.zeros(X.shape[1])
    resamples = 0
    for r in range(repetitions):
        train, test, tries = _draw_split(y, train_frac, seed, r)
        resamples += tries
        score, back = evaluate_split(X, y, train, test, d, reg)
        scores[r] = 100.0 * score
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            imp += feature_importance(back)
    if resamples:
        log.warning("orders %s: %d degenerate splits resampled", orders, resamples)
    return CombinationResult(orders, scores, imp / repetitions, fm.columns, resamples)


def run_experiment(
    ds: GraphDataset,
    feature_method: str = HANDCRAFTED,
    orders: Sequence[Sequence[int]] = ((0,), (0, 1, 2)),
    repetitions: int = 100,
    train_frac: float = 0.9,
    reg: float = 1.0,
    seed: int = 0,
    rule: str = ITERATED_LINE,
    wl_height: int = 2,
    n_jobs: int = 1,
    blocks: Optional[OrderBlocks] = None,
) -> ExperimentResult:
    """Evaluate each order combination on identical per-repetition splits."""
    orders = [tuple(o) for o in orders]
    if not orders or any(not o for o in orders):
        raise PipelineError("order combinations must be non-empty")
    max_order = max(k for o in orders for k in o)
    if blocks is None:
        blocks = compute_order_blocks(ds, feature_method, max_order, rule,
                                      wl_height=wl_height, n_jobs=n_jobs)
    y = np.asarray(ds.labels)
    d = blocks.blocks[0].shape[1] if 0 in blocks.blocks else None
    timings = dict(blocks.timings)
    results = []
    t = time.perf_counter()
    jobs = [(blocks.blocks, y, o, repetitions, train_frac, reg, seed, d) for o in orders]
    results = _pool_map(_combination_job, jobs, n_jobs if len(orders) > 1 else 1)
    timings["training"] = time.perf_counter() - t
    return ExperimentResult(results, repetitions, train_frac, reg, seed, timings)


def _combination_job(args):
    return run_combination(*args)
