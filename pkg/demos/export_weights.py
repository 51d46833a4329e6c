"""Write the learned coefficient matrix R and similarity S as heatmaps.

With samples grouped by class, R should look block diagonal. The PGM files
open in most image viewers.
"""

import tempfile
from pathlib import Path

import numpy as np

from dscfnet import ModelConfig, coefficient_matrix, export_heatmap, generate_synthetic, train
from dscfnet.export import read_pgm

ds = generate_synthetic(3, 15, 20, seed=4)
model = train(ds.X, ModelConfig.for_clusters(3, n_layers=2, max_iters=200))
R = coefficient_matrix(model)

out = Path(tempfile.mkdtemp())
export_heatmap(R, out / "R.pgm")
export_heatmap(model.S, out / "S.pgm")
print("wrote", sorted(p.name for p in out.iterdir()), "to", out)

# block structure: mean |R| within classes vs across
same = ds.labels[:, None] == ds.labels[None, :]
print("mean |R| within class %.4f, across %.4f" % (np.abs(R)[same].mean(), np.abs(R)[~same].mean()))
print("pixel range:", read_pgm(out / "R.pgm").min(), "-", read_pgm(out / "R.pgm").max())
