import numpy as np


def histogram(values) -> tuple[np.ndarray, np.ndarray]:
    """Freedman-Diaconis bins; a single bin around a degenerate sample."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)
    if v.size < 2 or np.ptp(v) == 0:
        edges = np.array([v[0] - 0.5, v[0] + 0.5])
    else:
        edges = np.histogram_bin_edges(v, bins="fd")
    counts, _ = np.histogram(v, bins=edges)
    return edges, counts


def histogram_rows(edges: np.ndarray, counts: np.ndarray):
    for i in range(len(counts)):
        yield edges[i], edges[i + 1], int(counts[i])
