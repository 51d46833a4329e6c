import numpy as np
import pytest

from dscfnet.datasets import Dataset, generate_synthetic
from dscfnet.protocols import (
    MethodSpec,
    NoiseSpec,
    NotEnoughClasses,
    corrupt_gaussian,
    grid_search,
    layer_sweep,
    noise_delta,
    run_clustering_trial,
    run_protocol,
    sample_categories,
)

FAST = dict(max_iters=40)


@pytest.fixture(scope="module")
def blobs():
    return generate_synthetic(4, 8, 6, seed=5)


class TestSampleCategories:
    def test_all_classes(self, blobs):
        X, truth = sample_categories(blobs, 4, 123)
        np.testing.assert_array_equal(X, blobs.X)
        np.testing.assert_array_equal(truth, blobs.labels)

    def test_deterministic(self, blobs):
        a, b = sample_categories(blobs, 2, 9), sample_categories(blobs, 2, 9)
        np.testing.assert_array_equal(a[0], b[0])
        assert set(a[1]) == {0, 1}

    def test_not_enough(self, blobs):
        with pytest.raises(NotEnoughClasses):
            sample_categories(blobs, 5, 0)

    def test_uniform_frequency(self):
        # one-hot features reveal which classes were drawn
        ds = Dataset(np.eye(10), np.arange(10))
        counts = np.zeros(10)
        for t in range(1000):
            X, _ = sample_categories(ds, 3, t)
            counts[np.argmax(X, axis=0)] += 1
        assert np.all(np.abs(counts / 1000 - 0.3) <= 0.05)


class TestCorruption:
    def test_level_zero_identity(self):
        X = np.random.default_rng(0).random((4, 5))
        np.testing.assert_array_equal(corrupt_gaussian(X, NoiseSpec(seed=1), 0.0), X)

    def test_variance(self):
        spec = NoiseSpec(pixel_fraction=1.0, seed=2)
        mask, delta = noise_delta((100, 100), spec, 1.0, v_max=3.0)
        assert mask.all()
        assert np.var(delta[mask]) == pytest.approx(9.0, rel=0.1)

    def test_fraction_and_clamp(self):
        X = np.random.default_rng(1).random((20, 30))
        spec = NoiseSpec(pixel_fraction=0.3, seed=3)
        out = corrupt_gaussian(X, spec, 0.6)
        assert out.min() >= 0
        assert np.count_nonzero(out != X) <= 180

    def test_deterministic(self):
        X = np.random.default_rng(1).random((6, 7))
        spec = NoiseSpec(seed=4)
        np.testing.assert_array_equal(corrupt_gaussian(X, spec, 0.4), corrupt_gaussian(X, spec, 0.4))

    def test_levels_validated(self):
        with pytest.raises(ValueError):
            NoiseSpec(variance_levels=(0.4, 0.2))


class TestTrial:
    def test_separated_two_clusters(self):
        ds = generate_synthetic(2, 15, 10, seed=0)
        ac, f = run_clustering_trial(ds.X, ds.labels, MethodSpec("dscf", n_layers=1), seed=1)
        assert ac >= 0.95 and 0 <= f <= 1

    @pytest.mark.parametrize("method", ["cf", "cascade"])
    def test_baselines(self, blobs, method):
        ac, f = run_clustering_trial(blobs.X, blobs.labels, MethodSpec(method, n_layers=2, **FAST))
        assert 0 <= ac <= 1 and 0 <= f <= 1

    def test_deterministic(self, blobs):
        spec = MethodSpec(n_layers=2, **FAST)
        assert run_clustering_trial(blobs.X, blobs.labels, spec, 3, 4) == run_clustering_trial(blobs.X, blobs.labels, spec, 3, 4)


class TestProtocol:
    def test_single_trial(self, blobs):
        spec = MethodSpec(n_layers=1, **FAST)
        reps = run_protocol(blobs, [2], 1, [spec], master_seed=7)
        rep = reps[(spec.label(), 2)]
        assert len(rep.runs) == 1 and rep.ac == rep.runs[0][1] and rep.ac_std == 0.0

    def test_deterministic(self, blobs):
        specs = [MethodSpec(n_layers=1, **FAST), MethodSpec("cf", **FAST)]
        a = run_protocol(blobs, [2, 3], 2, specs, master_seed=1)
        b = run_protocol(blobs, [2, 3], 2, specs, master_seed=1)
        assert {k: v.runs for k, v in a.items()} == {k: v.runs for k, v in b.items()}
        for rep in a.values():
            acs = [r[1] for r in rep.runs]
            assert min(acs) <= rep.ac <= max(acs)


class TestLayerSweep:
    def test_single(self, blobs):
        reps = layer_sweep(blobs, [1], MethodSpec(**FAST), n_clusters=2)
        assert list(reps) == [1]

    def test_paired_samples(self, blobs, monkeypatch):
        import dscfnet.protocols as P

        seen = []
        real = P.run_clustering_trial

        def spy(X, truth, spec, *a, **k):
            seen.append((X.copy(), spec.n_layers))
            return real(X, truth, spec, *a, **k)

        monkeypatch.setattr(P, "run_clustering_trial", spy)
        layer_sweep(blobs, [1, 2, 3], MethodSpec(**FAST), n_clusters=2)
        assert [L for _, L in seen] == [1, 2, 3]
        for X, _ in seen[1:]:
            np.testing.assert_array_equal(X, seen[0][0])


class TestGridSearch:
    def test_singleton(self, blobs):
        best, surface = grid_search(blobs, {"alpha": [10.0], "beta": [1.0], "gamma": [5.0]}, MethodSpec(n_layers=1, **FAST))
        assert best == {"alpha": 10.0, "beta": 1.0, "gamma": 5.0} and len(surface) == 1

    def test_default_grid_contains_paper_value(self):
        from dscfnet.cli import build_parser

        args = build_parser().parse_args(["grid", "--data", "x", "--out", "y"])
        assert 1e4 in args.alpha and 1e4 in args.beta and 1e4 in args.gamma

    def test_argmax(self, blobs):
        grid = {"alpha": [1e-2, 1e2, 1e4], "gamma": [1.0, 1e4]}
        best, surface = grid_search(blobs, grid, MethodSpec(n_layers=1, **FAST), trials=2)
        acs = [r.ac for _, r in surface]
        assert surface[int(np.argmax(acs))][0] == best
