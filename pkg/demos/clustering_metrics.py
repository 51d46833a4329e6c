"""Cluster the learned representation and score it.

AC is the best one-to-one matching of clusters to classes; the F-score counts
sample pairs. Both are invariant to how the clusters are numbered.
"""

import numpy as np

from dscfnet import MethodSpec, clustering_accuracy, generate_synthetic, kmeans, pairwise_fscore
from dscfnet.protocols import representation

ds = generate_synthetic(4, 25, 40, seed=3)

raw = kmeans(ds.X, 4, seed=0)
print("k-means on raw data:  AC %.3f  F %.3f" % (clustering_accuracy(raw, ds.labels), pairwise_fscore(raw, ds.labels)))

V = representation(ds.X, 4, MethodSpec("dscf", n_layers=2), seed=0)
pred = kmeans(V, 4, seed=0)
print("k-means on DSCF V:    AC %.3f  F %.3f" % (clustering_accuracy(pred, ds.labels), pairwise_fscore(pred, ds.labels)))

# relabeling the clusters leaves both scores unchanged
perm = np.random.default_rng(0).permutation(4)
assert clustering_accuracy(perm[pred], ds.labels) == clustering_accuracy(pred, ds.labels)
assert pairwise_fscore(perm[pred], ds.labels) == pairwise_fscore(pred, ds.labels)
