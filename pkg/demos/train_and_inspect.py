"""Train a three-layer model on synthetic blobs and look inside it.

Prints the per-layer objective trace, checks that the learned factors are
nonnegative, and shows how column-sparse the error matrix E ended up.
"""

import numpy as np

from dscfnet import ModelConfig, coefficient_matrix, generate_synthetic, train
from dscfnet.numerics import column_l2_norms

ds = generate_synthetic(n_classes=3, per_class=20, dim=30, seed=1)
config = ModelConfig.for_clusters(ds.class_count, n_layers=3, max_iters=200, seed=0)
model = train(ds.X, config)

for layer, trace in sorted(model.traces.items()):
    first, last = trace[0].objective, trace[-1].objective
    print(f"layer {layer}: {len(trace) - 1:3d} iters, objective {first:.4g} -> {last:.4g}")
print("converged per layer:", model.converged)

print("min entry of V:", model.V_final.min())
print("min entry of each W_l:", [float(W.min()) for W in model.W])

R = coefficient_matrix(model)
print("coefficient matrix R:", R.shape, "diag mean", np.diag(R).mean().round(4))

norms = column_l2_norms(model.E)
print("error column norms: median %.3g, max %.3g" % (np.median(norms), norms.max()))
