"""File emission: heatmaps, objective traces and deterministic archives.

All writers produce byte-identical files for identical inputs.
"""

import csv
import io
import json
import zipfile

import numpy as np


def export_heatmap(M, path, fmt="pgm"):
    """Write ``M`` as a plain (P2) PGM of ``|M|`` scaled to 0..255, or as CSV.

    The CSV variant stores raw values with round-trip precision.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError("heatmap source must be 2-D")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            for row in M:
                w.writerow([repr(float(v)) for v in row])
        return
    if fmt != "pgm":
        raise ValueError(f"unknown heatmap format {fmt!r}")
    A = np.abs(M)
    top = A.max(initial=0.0)
    pix = np.zeros(A.shape, dtype=int) if top == 0 else np.rint(255.0 * A / top).astype(int)
    rows, cols = M.shape
    with open(path, "w") as fh:
        fh.write(f"P2\n{cols} {rows}\n255\n")
        for row in pix:
            fh.write(" ".join(str(v) for v in row) + "\n")


def read_pgm(path):
    """Parse a plain P2 PGM written by :func:`export_heatmap`."""
    with open(path) as fh:
        tokens = [t for line in fh if not line.startswith("#") for t in line.split()]
    if tokens[0] != "P2":
        raise ValueError("not a plain PGM file")
    cols, rows, _ = (int(t) for t in tokens[1:4])
    return np.array([int(t) for t in tokens[4 : 4 + rows * cols]]).reshape(rows, cols)


def write_trace_csv(traces, path):
    """``iter,layer,objective,delta_v`` rows, layers in increasing order."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "layer", "objective", "delta_v"])
        for layer in sorted(traces):
            for row in traces[layer]:
                w.writerow([row.iter, layer, repr(row.objective), repr(row.delta_v)])


def write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(header, rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def save_arrays(path, **arrays):
    """Like ``numpy.savez`` but with fixed zip timestamps."""
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        for name in sorted(arrays):
            buf = io.BytesIO()
            np.lib.format.write_array(buf, np.ascontiguousarray(arrays[name]), allow_pickle=False)
            info = zipfile.ZipInfo(f"{name}.npy", date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, buf.getvalue())


def load_arrays(path):
    with np.load(path, allow_pickle=False) as data:
        return {k: data[k] for k in data.files}
