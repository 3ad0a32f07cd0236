"""Hot numeric kernels.

Each kernel exists twice: a loop version compiled with numba, and a
vectorised numpy version. The public names (``entropy_from_weights``,
``composition_scores``) point at the numba loop unless numba is disabled
(see :mod:`scalescope._accel`), in which case they point at the numpy code.
Both versions are always importable so they can be checked against each
other.

Entropy here is the size-weighted, diversity-base entropy

    h = -sum_j (w_j / N) log_D (w_j / N),   w_j = f_j * S_j,  N = sum_j w_j

evaluated as ``(log N - sum_j w_j log w_j / N) / log D``. ``D == 1`` gives 0
and an exactly uniform weight vector gives exactly 1.
"""
import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

__all__ = [
    "BACKEND",
    "composition_scores",
    "composition_scores_loop",
    "composition_scores_numpy",
    "entropy_from_weights",
    "entropy_from_weights_loop",
    "entropy_from_weights_numpy",
    "substring_table",
]


def _finish(total, wlogw, diversity, uniform):
    if diversity <= 1:
        return 0.0
    if uniform:
        return 1.0
    h = (np.log(total) - wlogw / total) / np.log(diversity)
    return min(max(h, 0.0), 1.0)


_finish_jit = njit(cache=True)(_finish)


@njit(cache=True)
def entropy_from_weights_loop(weights):
    total = 0
    wlogw = 0.0
    w0 = weights[0]
    uniform = True
    for i in range(weights.shape[0]):
        w = weights[i]
        total += w
        wlogw += w * np.log(w)
        if w != w0:
            uniform = False
    return _finish_jit(total, wlogw, weights.shape[0], uniform)


def entropy_from_weights_numpy(weights):
    weights = np.asarray(weights, dtype=np.int64)
    total = int(weights.sum())
    wf = weights.astype(np.float64)
    wlogw = float(np.sum(wf * np.log(wf)))
    uniform = bool(np.all(weights == weights[0]))
    return _finish(total, wlogw, weights.shape[0], uniform)


def substring_table(units):
    """Integer ids for every substring of ``units``.

    Returns ``(sid, sizes)`` where ``sid[i, j]`` is the id of ``units[i:j]``
    (``-1`` for ``j <= i``) and ``sizes[k]`` is the length of substring ``k``.
    Equal substrings share an id.
    """
    n = len(units)
    sid = np.full((n + 1, n + 1), -1, dtype=np.int64)
    ids = {}
    sizes = []
    for i in range(n):
        for j in range(i + 1, n + 1):
            key = units[i:j]
            k = ids.get(key)
            if k is None:
                k = ids[key] = len(sizes)
                sizes.append(j - i)
            sid[i, j] = k
    return sid, np.asarray(sizes, dtype=np.int64)


# Composition masks: bit k set <=> a cut at unit position k + 1. Both
# versions return per-mask (entropy, segment count, longest segment).


@njit(cache=True)
def composition_scores_loop(sid, sizes, n):
    n_masks = 1 << (n - 1)
    h = np.empty(n_masks, dtype=np.float64)
    nseg = np.empty(n_masks, dtype=np.int64)
    longest = np.empty(n_masks, dtype=np.int64)
    counts = np.zeros(sizes.shape[0], dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    for mask in range(n_masks):
        n_touched = 0
        start = 0
        segs = 0
        big = 0
        for pos in range(1, n + 1):
            if pos == n or (mask >> (pos - 1)) & 1:
                k = sid[start, pos]
                if pos - start > big:
                    big = pos - start
                if counts[k] == 0:
                    touched[n_touched] = k
                    n_touched += 1
                counts[k] += 1
                segs += 1
                start = pos
        wlogw = 0.0
        k0 = touched[0]
        w0 = counts[k0] * sizes[k0]
        uniform = True
        for t in range(n_touched):
            k = touched[t]
            w = counts[k] * sizes[k]
            wlogw += w * np.log(w)
            if w != w0:
                uniform = False
            counts[k] = 0
        h[mask] = _finish_jit(n, wlogw, n_touched, uniform)
        nseg[mask] = segs
        longest[mask] = big
    return h, nseg, longest


def composition_scores_numpy(sid, sizes, n):
    masks = np.arange(1 << (n - 1), dtype=np.int64)
    bits = [((masks >> k) & 1).astype(bool) for k in range(n - 1)]
    ones = np.ones(masks.shape[0], dtype=bool)

    def cut(pos):
        return ones if pos in (0, n) else bits[pos - 1]

    longest = np.zeros(masks.shape[0], dtype=np.int64)
    # segment [i, j) is present iff both ends are cuts and nothing between is
    by_id = {}
    for i in range(n):
        free = ones
        for j in range(i + 1, n + 1):
            present = cut(i) & free & cut(j)
            np.maximum(longest, np.where(present, j - i, 0), out=longest)
            by_id.setdefault(int(sid[i, j]), []).append(present)
            if j < n:
                free = free & ~bits[j - 1]

    nseg = np.zeros(masks.shape[0], dtype=np.int64)
    diversity = np.zeros(masks.shape[0], dtype=np.int64)
    wlogw = np.zeros(masks.shape[0], dtype=np.float64)
    wmin = np.full(masks.shape[0], np.iinfo(np.int64).max, dtype=np.int64)
    wmax = np.zeros(masks.shape[0], dtype=np.int64)
    for k, rows in by_id.items():
        c = np.sum(rows, axis=0, dtype=np.int64)
        w = c * sizes[k]
        hit = w > 0
        nseg += c
        diversity += hit
        wf = w[hit].astype(np.float64)
        wlogw[hit] += wf * np.log(wf)
        wmin[hit] = np.minimum(wmin[hit], w[hit])
        wmax[hit] = np.maximum(wmax[hit], w[hit])

    h = (np.log(n) - wlogw / n) / np.log(np.maximum(diversity, 2))
    h = np.clip(h, 0.0, 1.0)
    h[wmin == wmax] = 1.0
    h[diversity <= 1] = 0.0
    return h, nseg, longest


if HAVE_NUMBA:
    entropy_from_weights = entropy_from_weights_loop
    composition_scores = composition_scores_loop
else:
    entropy_from_weights = entropy_from_weights_numpy
    composition_scores = composition_scores_numpy
