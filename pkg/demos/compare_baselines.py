"""Compare the deep model with single-layer CF and the naive cascade.

Runs the category-sampling protocol: each trial picks K classes at random,
learns a representation with every method and clusters it with k-means.
"""

from dscfnet import MethodSpec, generate_synthetic, run_protocol

ds = generate_synthetic(6, 20, 30, separation=4.0, seed=11)
methods = [
    MethodSpec("cf", max_iters=200),
    MethodSpec("cascade", n_layers=3, max_iters=200),
    MethodSpec("dscf", n_layers=3, max_iters=200),
]
reports = run_protocol(ds, ks=[2, 4, 6], trials=3, methods=methods, master_seed=0)

print(f"{'method':12s} {'K':>2s} {'AC':>12s} {'F':>12s}")
for (label, K), rep in sorted(reports.items(), key=lambda kv: (kv[0][1], kv[0][0])):
    print(f"{label:12s} {K:2d} {rep.ac:.3f}±{rep.ac_std:.3f} {rep.fscore:.3f}±{rep.f_std:.3f}")
