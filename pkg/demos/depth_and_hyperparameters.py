"""Sweep the number of layers, then grid-search the trade-off weights."""

from dscfnet import MethodSpec, generate_synthetic, grid_search, layer_sweep

ds = generate_synthetic(4, 15, 30, separation=5.0, seed=2)
spec = MethodSpec("dscf", max_iters=150)

for L, rep in layer_sweep(ds, [1, 2, 3, 4], spec, n_clusters=4, trials=2).items():
    print(f"L={L}: AC {rep.ac:.3f}  F {rep.fscore:.3f}")

grid = {"alpha": [1e-2, 1e2, 1e4], "beta": [1e4], "gamma": [1e-2, 1e4]}
best, surface = grid_search(ds, grid, MethodSpec("dscf", n_layers=2, max_iters=150), n_clusters=4)
for params, rep in surface:
    print(params, f"AC {rep.ac:.3f}")
print("best:", best)
