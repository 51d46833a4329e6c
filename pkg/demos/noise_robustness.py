"""Corrupt a fraction of the entries with Gaussian noise and watch accuracy.

Each level uses the same trial seeds, so the sweep compares methods on
identical corrupted inputs.
"""

from dscfnet import MethodSpec, NoiseSpec, generate_synthetic, noise_sweep

ds = generate_synthetic(4, 20, 30, seed=5)
noise = NoiseSpec(variance_levels=(0.0, 0.4, 1.0), pixel_fraction=0.3, seed=1)
methods = [MethodSpec("cf", max_iters=200), MethodSpec("dscf", n_layers=3, max_iters=200)]
reports = noise_sweep(ds, noise, methods, n_clusters=2, trials=5, master_seed=0)

for spec in methods:
    row = "  ".join(f"{lv:.1f}:{reports[(spec.label(), lv)].ac:.3f}" for lv in noise.variance_levels)
    print(f"{spec.label():8s} {row}")
