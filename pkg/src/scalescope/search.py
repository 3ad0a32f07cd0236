"""Fundamental-scale search.

Segmentations are rewritten with three moves: split one symbol in two,
drift the boundary between two neighbours, or join two neighbours. A
restartable first-improvement local search applies them to lower the
size-weighted entropy, starting from fixed-scale tilings. Short messages can
be solved exactly by enumerating every composition.
"""
from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .model import (
    Segmentation,
    SymbolProfile,
    TilingError,
    as_message,
    entropy,
    profile_from_segmentation,
)
from .tokenizers import DelimiterPolicy, tokenize

KINDS = ("split", "drift", "join")
TIE_EPS = 1e-12


class InvalidMove(ValueError):
    """A move does not fit the segmentation it is applied to."""


@dataclass(frozen=True)
class Move:
    """A single rewrite of a segmentation.

    ``position`` is a segment index. For ``split`` the offset is the cut
    inside that segment (``1 <= offset <= size - 1``); for ``drift`` it is the
    signed shift of the boundary after that segment; ``join`` ignores it.
    """

    kind: str
    position: int
    offset: int = 0


@dataclass(frozen=True)
class SearchConfig:
    initializations: tuple = ("chars", "words")
    max_passes: int = 200
    restarts: int = 3
    rng_seed: int = 0
    acceptance: str = "strict"  # or "non-increasing"
    candidate_budget: int | None = None  # moves examined per pass, None = all
    max_drift: int = 3
    max_symbol_units: int | None = None
    policy: DelimiterPolicy = DelimiterPolicy()

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")
        if self.acceptance not in ("strict", "non-increasing"):
            raise ValueError(f"unknown acceptance rule {self.acceptance!r}")
        if not self.initializations:
            raise ValueError("need at least one initialization")
        if self.candidate_budget is not None and self.candidate_budget < 1:
            raise ValueError("candidate_budget must be positive")
        if self.max_drift < 1:
            raise ValueError("max_drift must be at least 1")

    def as_dict(self) -> dict:
        return {
            "initializations": list(self.initializations),
            "max_passes": self.max_passes,
            "restarts": self.restarts,
            "rng_seed": self.rng_seed,
            "acceptance": self.acceptance,
            "candidate_budget": self.candidate_budget,
            "max_drift": self.max_drift,
            "max_symbol_units": self.max_symbol_units,
        }


@dataclass(frozen=True)
class TraceRow:
    pass_no: int
    kind: str
    position: int
    offset: int
    h_before: float
    h_after: float

    def tsv(self) -> str:
        return (
            f"{self.pass_no}\t{self.kind}\t{self.position}\t{self.offset}\t"
            f"{self.h_before:.12g}\t{self.h_after:.12g}"
        )


@dataclass(frozen=True)
class SearchResult:
    segmentation: Segmentation
    profile: SymbolProfile
    entropy: float
    trace: tuple = field(repr=False)
    initialization: str = ""
    restart: int = 0

    def __iter__(self):
        # unpacks as (segmentation, profile, h)
        return iter((self.segmentation, self.profile, self.entropy))

    def trace_tsv(self) -> str:
        head = "pass\tkind\tposition\toffset\th_before\th_after\n"
        return head + "".join(row.tsv() + "\n" for row in self.trace)


# -- moves --------------------------------------------------------------------


def apply_move(seg: Segmentation, m: Move) -> Segmentation:
    b = list(seg.boundaries)
    L = len(b) - 1
    j = m.position
    if m.kind not in KINDS:
        raise InvalidMove(f"unknown move kind {m.kind!r}")
    if not 0 <= j < L:
        raise InvalidMove(f"segment {j} out of range for {L} segments")
    if m.kind == "split":
        size = b[j + 1] - b[j]
        if not 1 <= m.offset <= size - 1:
            raise InvalidMove(f"split offset {m.offset} outside 1..{size - 1}")
        b.insert(j + 1, b[j] + m.offset)
    else:
        if j + 1 >= L:
            raise InvalidMove(f"segment {j} has no successor")
        if m.kind == "join":
            del b[j + 1]
        else:
            new = b[j + 1] + m.offset
            if m.offset == 0 or not b[j] < new < b[j + 2]:
                raise InvalidMove(f"drift {m.offset:+d} empties a segment")
            b[j + 1] = new
    return Segmentation(seg.message, tuple(b))


def diversity_delta_bounds(kind) -> tuple:
    """Reachable range of ``D' - D`` for one move of the given kind."""
    kind = kind.kind if isinstance(kind, Move) else kind
    try:
        return {"split": (-1, 2), "drift": (-2, 2), "join": (-2, 1)}[kind]
    except KeyError:
        raise InvalidMove(f"unknown move kind {kind!r}") from None


# -- local search -------------------------------------------------------------


class _State:
    """Mutable tiling with running symbol counts and sum of w*log(w)."""

    def __init__(self, units, cuts, xlogx, max_units):
        self.units = units
        self.n = len(units)
        self.cuts = list(cuts)
        self.cutset = set(cuts)
        self.xlogx = xlogx
        self.max_units = max_units
        self.counts = Counter(units[a:b] for a, b in zip(cuts, cuts[1:]))
        self.refresh()

    def refresh(self):
        x = self.xlogx
        self.wlogw = math.fsum(x[c * len(s)] for s, c in self.counts.items())
        self.diversity = len(self.counts)

    def h_of(self, wlogw, diversity):
        if diversity <= 1:
            return 0.0
        return (math.log(self.n) - wlogw / self.n) / math.log(diversity)

    @property
    def h(self):
        return self.h_of(self.wlogw, self.diversity)

    def plan(self, kind, p, delta):
        """Cut edits and symbol swaps for a candidate, or None if it no longer fits."""
        cuts, cutset, u = self.cuts, self.cutset, self.units
        if kind == "split":
            if p in cutset:
                return None
            k = bisect.bisect_left(cuts, p)
            a, b = cuts[k - 1], cuts[k]
            return k - 1, p - a, (u[a:b],), (u[a:p], u[p:b])
        if p not in cutset or p in (0, self.n):
            return None
        k = bisect.bisect_left(cuts, p)
        a, b = cuts[k - 1], cuts[k + 1]
        if kind == "join":
            return k - 1, 0, (u[a:p], u[p:b]), (u[a:b],)
        q = p + delta
        if not a < q < b:
            return None
        return k - 1, delta, (u[a:p], u[p:b]), (u[a:q], u[q:b])

    def score(self, old, new):
        if self.max_units is not None and any(len(s) > self.max_units for s in new):
            return None
        change = Counter(new)
        change.subtract(old)
        wlogw, div = self.wlogw, self.diversity
        x = self.xlogx
        for s, d in change.items():
            if d == 0:
                continue
            c = self.counts.get(s, 0)
            size = len(s)
            wlogw += x[(c + d) * size] - x[c * size]
            if c == 0:
                div += 1
            elif c + d == 0:
                div -= 1
        return wlogw, div

    def commit(self, kind, p, delta, old, new, wlogw, div):
        for s in old:
            c = self.counts[s] - 1
            if c:
                self.counts[s] = c
            else:
                del self.counts[s]
        for s in new:
            self.counts[s] += 1
        self.wlogw, self.diversity = wlogw, div
        if kind == "split":
            bisect.insort(self.cuts, p)
            self.cutset.add(p)
        elif kind == "join":
            self.cuts.remove(p)
            self.cutset.discard(p)
        else:
            i = bisect.bisect_left(self.cuts, p)
            self.cuts[i] = p + delta
            self.cutset.discard(p)
            self.cutset.add(p + delta)

    def candidates(self, max_drift):
        cuts = self.cuts
        out = [("split", p, 0) for p in range(1, self.n) if p not in self.cutset]
        for p in cuts[1:-1]:
            out.append(("join", p, 0))
            for d in range(1, max_drift + 1):
                out.append(("drift", p, d))
                out.append(("drift", p, -d))
        return out


def _local_search(state: _State, cfg: SearchConfig, rng: np.random.Generator):
    trace = []
    strict = cfg.acceptance == "strict"
    best = (state.h, tuple(state.cuts))
    for pass_no in range(1, cfg.max_passes + 1):
        state.refresh()
        cands = state.candidates(cfg.max_drift)
        order = rng.permutation(len(cands))
        if cfg.candidate_budget is not None:
            order = order[: cfg.candidate_budget]
        accepted = 0
        for i in order:
            kind, p, delta = cands[i]
            planned = state.plan(kind, p, delta)
            if planned is None:
                continue
            position, offset, old, new = planned
            scored = state.score(old, new)
            if scored is None:
                continue
            h_old = state.h
            h_new = state.h_of(*scored)
            if strict:
                ok = h_new < h_old - TIE_EPS
            else:
                ok = h_new <= h_old + TIE_EPS
            if not ok:
                continue
            state.commit(kind, p, delta, old, new, *scored)
            accepted += 1
            trace.append(TraceRow(pass_no, kind, position, offset, h_old, h_new))
            if h_new < best[0] - TIE_EPS:
                best = (h_new, tuple(state.cuts))
        if accepted == 0:
            break
    if strict:
        best = (state.h, tuple(state.cuts))
    return best[1], tuple(trace)


def _restart_rng(seed: int, restart: int, init_index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, restart, init_index])


def _coarsen(cuts, rng, max_units):
    """Drop a random share of interior cuts, keeping symbols within ``max_units``."""
    rate = rng.uniform(0.2, 0.9)
    drop = rng.random(len(cuts)) < rate
    out = [cuts[0]]
    for i in range(1, len(cuts) - 1):
        if drop[i] and (max_units is None or cuts[i + 1] - out[-1] <= max_units):
            continue
        out.append(cuts[i])
    out.append(cuts[-1])
    return tuple(out)


def _better(h1, cuts1, h2, cuts2) -> bool:
    """Lower h wins; ties go to fewer segments, then the smaller boundary vector."""
    if h1 < h2 - TIE_EPS:
        return True
    if h1 > h2 + TIE_EPS:
        return False
    return (len(cuts1), cuts1) < (len(cuts2), cuts2)


def minimize_entropy(msg, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Approximate the minimal-entropy tiling of ``msg``.

    Every initialization is run once per restart. Restart 0 starts from the
    fixed-scale tilings themselves; later restarts start from randomly
    coarsened copies of them. Each (restart, initialization) pair draws from
    its own generator seeded by ``(rng_seed, restart, initialization
    index)``, so restarts are independent of execution order. The result is
    never worse than the best initial tiling.
    """
    msg = as_message(msg)
    if len(msg) == 0:
        raise TilingError("empty message")
    n = len(msg)
    xlogx = [0.0] + [w * math.log(w) for w in range(1, n + 1)]

    best = None
    for restart in range(cfg.restarts):
        for idx, selector in enumerate(cfg.initializations):
            start = tokenize(msg, selector, cfg.policy)
            if cfg.max_symbol_units is not None and any(
                b - a > cfg.max_symbol_units for a, b in zip(start.boundaries, start.boundaries[1:])
            ):
                continue
            rng = _restart_rng(cfg.rng_seed, restart, idx)
            cuts = start.boundaries
            if restart > 0:
                cuts = _coarsen(cuts, rng, cfg.max_symbol_units)
            state = _State(msg.units, cuts, xlogx, cfg.max_symbol_units)
            cuts, trace = _local_search(state, cfg, rng)
            seg = Segmentation(msg, cuts)
            h = entropy(profile_from_segmentation(seg))
            if best is None or _better(h, cuts, best[0], best[1]):
                best = (h, cuts, trace, selector, restart)
    if best is None:
        raise ValueError("no initialization respects max_symbol_units")
    h, cuts, trace, selector, restart = best
    seg = Segmentation(msg, cuts)
    return SearchResult(seg, profile_from_segmentation(seg), h, trace, selector, restart)


# -- exhaustive oracle --------------------------------------------------------


def exhaustive_min_entropy(msg, cap: int = 18, max_symbol_units: int | None = None):
    """Global entropy minimum over all ``2**(n-1)`` tilings of a short message.

    Returns ``(segmentation, h)``. Ties go to fewer segments, then to the
    lexicographically smallest boundary vector.
    """
    msg = as_message(msg)
    n = len(msg)
    if n == 0:
        raise TilingError("empty message")
    if n > cap:
        raise ValueError(f"message has {n} units, exhaustive search is capped at {cap}")
    sid, sizes = kernels.substring_table(msg.units)
    h, nseg, longest = kernels.composition_scores(sid, sizes, n)
    ok = np.ones_like(nseg, dtype=bool) if max_symbol_units is None else longest <= max_symbol_units
    if not ok.any():
        raise ValueError(f"no tiling keeps every symbol within {max_symbol_units} units")
    hmin = h[ok].min()
    tied = np.flatnonzero(ok & (h <= hmin + TIE_EPS))
    fewest = nseg[tied].min()
    tied = tied[nseg[tied] == fewest]
    cuts = min(_mask_cuts(int(m), n) for m in tied)
    return Segmentation(msg, cuts), float(h[_cuts_mask(cuts)])


def _mask_cuts(mask: int, n: int) -> tuple:
    return (0,) + tuple(k + 1 for k in range(n - 1) if mask >> k & 1) + (n,)


def _cuts_mask(cuts) -> int:
    return sum(1 << (c - 1) for c in cuts[1:-1])
