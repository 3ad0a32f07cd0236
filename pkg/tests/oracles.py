"""Brute-force reference computations, deliberately independent of the package."""
import itertools
import math
from collections import Counter
from functools import lru_cache

T = " a ab abc abcd abcde abcdef abcdefg"

REF_TILING = [
    " a a", "b", " abc", " abc", "d", " abc", "de", " abc", "def", " abc", "de", "f", "g",
]


def raw_entropy(weights):
    """-sum p log_D p with D = len(weights); 0 when D == 1."""
    n = sum(weights)
    D = len(weights)
    if D == 1:
        return 0.0
    return -sum(w / n * math.log(w / n) for w in weights) / math.log(D)


def tiling_entropy(segments):
    c = Counter(segments)
    return raw_entropy([f * len(s) for s, f in c.items()])


def all_tilings(s):
    n = len(s)
    for mask in itertools.product((0, 1), repeat=n - 1):
        cuts = [0] + [i + 1 for i, b in enumerate(mask) if b] + [n]
        yield tuple(cuts), [s[a:b] for a, b in zip(cuts, cuts[1:])]


def brute_min_entropy(s):
    """(h, cuts) minimising entropy; ties to fewer segments then smaller cut vector."""
    best = None
    for cuts, segs in all_tilings(s):
        h = tiling_entropy(segs)
        key = (h, len(cuts), cuts)
        if best is None or h < best[0] - 1e-12 or (abs(h - best[0]) <= 1e-12 and key[1:] < best[1:]):
            best = key
    return best[0], best[2]


def _moves(cuts):
    """Every valid single move on a cut vector, as (kind, new cut vector)."""
    L = len(cuts) - 1
    for j in range(L):
        a, b = cuts[j], cuts[j + 1]
        for p in range(a + 1, b):
            yield "split", cuts[: j + 1] + (p,) + cuts[j + 1:]
    for j in range(1, L):
        yield "join", cuts[:j] + cuts[j + 1:]
        for q in range(cuts[j - 1] + 1, cuts[j + 1]):
            if q != cuts[j]:
                yield "drift", cuts[:j] + (q,) + cuts[j + 1:]


@lru_cache(maxsize=None)
def delta_d_extremes(max_len=8, alphabet="ab"):
    """Observed (min, max) of D' - D per move kind over every string, tiling and move."""
    lo = {k: 10**9 for k in ("split", "drift", "join")}
    hi = {k: -(10**9) for k in ("split", "drift", "join")}
    for n in range(1, max_len + 1):
        for letters in itertools.product(alphabet, repeat=n):
            s = "".join(letters)
            for cuts, segs in all_tilings(s):
                d0 = len(set(segs))
                for kind, new in _moves(cuts):
                    d1 = len({s[a:b] for a, b in zip(new, new[1:])})
                    lo[kind] = min(lo[kind], d1 - d0)
                    hi[kind] = max(hi[kind], d1 - d0)
    return {k: (lo[k], hi[k]) for k in lo}


def zipf(D, exponent=1.0):
    w = [1.0 / k**exponent for k in range(1, D + 1)]
    z = math.fsum(w)
    return [x / z for x in w]
