"""Clustering experiment protocols.

Every trial derives its own seeds from ``(master_seed, tag, trial index)``
through :class:`numpy.random.SeedSequence`, so results do not depend on the
order in which trials are run.
"""

import itertools
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .baselines import CfConfig, cascade_cf_train, cf_train
from .clustering import clustering_accuracy, kmeans, pairwise_fscore
from .model import ModelConfig, train

logger = logging.getLogger(__name__)

METHODS = ("dscf", "cf", "cascade")
DEFAULT_NOISE_LEVELS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


class NotEnoughClasses(ValueError):
    pass


@dataclass(frozen=True)
class MethodSpec:
    """A method plus every hyperparameter except the rank.

    The rank is ``K + 1`` for a K-cluster problem unless ``rank`` is given;
    deep methods use the same width on all ``n_layers`` layers.
    """

    method: str = "dscf"
    n_layers: int = 3
    rank: int | None = None
    alpha: float = 1e4
    beta: float = 1e4
    gamma: float = 1e4
    epsilon: float = 1e-3
    max_iters: int = 500
    delta: float = 1e-8
    eps_div: float = 1e-12
    warm_start: bool = False
    cf_tol: float = 1e-6

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")

    def width(self, n_clusters):
        return self.rank if self.rank is not None else n_clusters + 1

    def model_config(self, n_clusters, seed):
        return ModelConfig(
            layer_dims=(self.width(n_clusters),) * self.n_layers,
            alpha=self.alpha,
            beta=self.beta,
            gamma=self.gamma,
            epsilon=self.epsilon,
            max_iters=self.max_iters,
            seed=seed,
            delta=self.delta,
            eps_div=self.eps_div,
            warm_start=self.warm_start,
        )

    def cf_config(self, n_clusters, seed):
        return CfConfig(
            rank=self.width(n_clusters),
            max_iters=self.max_iters,
            tol=self.cf_tol,
            seed=seed,
            eps_div=self.eps_div,
        )

    def label(self):
        return self.method if self.method == "cf" else f"{self.method}-L{self.n_layers}"

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class NoiseSpec:
    variance_levels: tuple = DEFAULT_NOISE_LEVELS
    pixel_fraction: float = 0.3
    seed: int = 0

    def __post_init__(self):
        levels = tuple(float(v) for v in self.variance_levels)
        object.__setattr__(self, "variance_levels", levels)
        if list(levels) != sorted(levels) or any(not 0 <= v <= 1 for v in levels):
            raise ValueError("variance levels must be sorted and within [0, 1]")
        if not 0 < self.pixel_fraction <= 1:
            raise ValueError("pixel_fraction must be in (0, 1]")


@dataclass
class MetricReport:
    """AC and F-score over repeated trials; ``runs`` holds ``(seed, ac, f)``."""

    runs: list = field(default_factory=list)

    def add(self, seed, ac, fscore):
        self.runs.append((int(seed), float(ac), float(fscore)))

    def _col(self, i):
        return np.array([r[i] for r in self.runs], dtype=float)

    @property
    def ac(self):
        return float(self._col(1).mean())

    @property
    def fscore(self):
        return float(self._col(2).mean())

    @property
    def ac_std(self):
        return float(self._col(1).std())

    @property
    def f_std(self):
        return float(self._col(2).std())

    def to_dict(self):
        return {
            "ac_mean": self.ac,
            "ac_std": self.ac_std,
            "f_mean": self.fscore,
            "f_std": self.f_std,
            "runs": [{"seed": s, "ac": a, "fscore": f} for s, a, f in self.runs],
        }


def trial_seeds(master_seed, *tags, n=3):
    """``n`` independent 32-bit seeds for the trial identified by ``tags``."""
    ss = np.random.SeedSequence([int(master_seed), *(int(t) for t in tags)])
    return [int(s) for s in ss.generate_state(n)]


def sample_categories(dataset, n_clusters, trial_seed):
    """Pick ``n_clusters`` distinct classes uniformly and return their samples.

    Columns keep their original dataset order; labels are renumbered
    ``0..n_clusters-1`` by increasing original class id.
    """
    C = dataset.class_count
    if n_clusters > C:
        raise NotEnoughClasses(f"need {n_clusters} classes, dataset has {C}")
    if n_clusters == C:
        chosen = np.arange(C)
    else:
        rng = np.random.default_rng(trial_seed)
        chosen = np.sort(rng.choice(C, size=n_clusters, replace=False))
    remap = np.full(C, -1)
    remap[chosen] = np.arange(n_clusters)
    mask = remap[dataset.labels] >= 0
    return dataset.X[:, mask], remap[dataset.labels[mask]]


def noise_delta(shape, spec, level, v_max):
    """Corruption mask and unclamped additive noise for one level.

    The mask and the underlying standard normals depend only on
    ``spec.seed``, so different levels corrupt the same entries with
    proportionally scaled noise.
    """
    rng = np.random.default_rng(spec.seed)
    size = int(np.prod(shape))
    n_corrupt = int(round(spec.pixel_fraction * size))
    flat = rng.choice(size, size=n_corrupt, replace=False)
    z = rng.standard_normal(n_corrupt)
    mask = np.zeros(size, dtype=bool)
    mask[flat] = True
    delta = np.zeros(size)
    delta[flat] = np.sqrt(level) * v_max * z
    return mask.reshape(shape), delta.reshape(shape)


def corrupt_gaussian(X, spec, level):
    """Add Gaussian noise of variance ``level * max(X)**2`` to a random subset.

    The output is clamped at zero to keep the data factorizable.
    """
    X = np.asarray(X, dtype=np.float64)
    if level == 0:
        return X.copy()
    _, delta = noise_delta(X.shape, spec, level, float(X.max(initial=0.0)))
    return np.maximum(X + delta, 0.0)


def representation(X, n_clusters, spec, seed):
    """Train ``spec`` on ``X`` and return the final ``r x N`` representation."""
    if spec.method == "dscf":
        return train(X, spec.model_config(n_clusters, seed)).V_final
    if spec.method == "cf":
        return cf_train(X, spec.cf_config(n_clusters, seed)).V
    cfg = spec.cf_config(n_clusters, seed)
    V, _ = cascade_cf_train(X, [cfg.rank] * spec.n_layers, cfg)
    return V


def run_clustering_trial(X, truth, spec, seed=0, kmeans_seed=0, kmeans_restarts=10, n_clusters=None):
    """Learn a representation, run K-means on its columns, score the labels.

    Returns
    -------
    (ac, fscore) : tuple of float
    """
    truth = np.asarray(truth, dtype=int)
    K = int(np.unique(truth).size) if n_clusters is None else n_clusters
    V = representation(X, K, spec, seed)
    pred = kmeans(V, K, restarts=kmeans_restarts, seed=kmeans_seed)
    return clustering_accuracy(pred, truth), pairwise_fscore(pred, truth)


def run_protocol(dataset, ks, trials, methods, master_seed=0, kmeans_restarts=10):
    """Average AC/F-score over ``trials`` random category selections per K.

    Every method sees the same selections. Returns
    ``{(spec.label(), K): MetricReport}``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    reports = {}
    for K in ks:
        for t in range(trials):
            sample_seed, model_seed, km_seed = trial_seeds(master_seed, K, t)
            X, truth = sample_categories(dataset, K, sample_seed)
            for spec in methods:
                ac, f = run_clustering_trial(X, truth, spec, model_seed, km_seed, kmeans_restarts, K)
                reports.setdefault((spec.label(), K), MetricReport()).add(model_seed, ac, f)
                logger.info("%s K=%d trial %d: ac=%.4f f=%.4f", spec.label(), K, t, ac, f)
    return reports


def noise_sweep(dataset, noise, methods, n_clusters=2, trials=30, master_seed=0, kmeans_restarts=10):
    """AC per noise level with paired trials.

    Within a trial the category sample, the corrupted entries and the model
    and K-means seeds are shared across levels; only the noise amplitude
    changes. Returns ``{(spec.label(), level): MetricReport}``.
    """
    reports = {}
    for t in range(trials):
        sample_seed, model_seed, km_seed, noise_seed = trial_seeds(master_seed, n_clusters, t, n=4)
        X, truth = sample_categories(dataset, n_clusters, sample_seed)
        trial_noise = NoiseSpec(noise.variance_levels, noise.pixel_fraction, noise_seed)
        for level in noise.variance_levels:
            Xn = corrupt_gaussian(X, trial_noise, level)
            for spec in methods:
                ac, f = run_clustering_trial(Xn, truth, spec, model_seed, km_seed, kmeans_restarts, n_clusters)
                reports.setdefault((spec.label(), level), MetricReport()).add(model_seed, ac, f)
    return reports


def layer_sweep(dataset, layers, spec, n_clusters=4, trials=1, master_seed=0, kmeans_restarts=10):
    """AC per number of layers; every depth sees the same category samples.

    Returns ``{L: MetricReport}``.
    """
    reports = {}
    for t in range(trials):
        sample_seed, model_seed, km_seed = trial_seeds(master_seed, n_clusters, t)
        X, truth = sample_categories(dataset, n_clusters, sample_seed)
        for L in layers:
            s = MethodSpec(**{**spec.to_dict(), "n_layers": int(L)})
            ac, f = run_clustering_trial(X, truth, s, model_seed, km_seed, kmeans_restarts, n_clusters)
            reports.setdefault(int(L), MetricReport()).add(model_seed, ac, f)
    return reports


def grid_search(dataset, grid, spec=None, n_clusters=2, trials=1, master_seed=0, kmeans_restarts=10):
    """Exhaustive search over ``grid = {"alpha": [...], "beta": [...], "gamma": [...]}``.

    Missing keys keep the value from ``spec``. Every grid point is scored
    by :func:`run_protocol` at ``K = n_clusters`` with the same master seed,
    so all points see the same category samples.

    Returns
    -------
    best : dict
        Parameter values with the highest mean AC (first one on ties, in
        grid order).
    surface : list of (dict, MetricReport)
    """
    spec = MethodSpec() if spec is None else spec
    keys = [k for k in ("alpha", "beta", "gamma") if k in grid]
    values = [list(grid[k]) for k in keys]
    if not keys or any(len(v) == 0 for v in values):
        raise ValueError("grid must contain at least one non-empty parameter list")
    surface = []
    for combo in itertools.product(*values):
        params = dict(zip(keys, (float(v) for v in combo)))
        s = MethodSpec(**{**spec.to_dict(), **params})
        report = run_protocol(dataset, [n_clusters], trials, [s], master_seed, kmeans_restarts)
        surface.append((params, report[(s.label(), n_clusters)]))
    best_params, _ = max(surface, key=lambda item: item[1].ac)
    return best_params, surface
