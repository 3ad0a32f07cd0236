"""Scale downgrading of ranked probability profiles.

A ranked profile of D points is collapsed to S points by cutting it into S
contiguous groups of roughly equal width in log-probability and replacing
each group by one point carrying the group's total mass at its
mass-weighted mean rank. On a power-law profile log-probability is linear in
log-rank, so the groups are equally wide in log-rank: the sparse head keeps
full detail and the dense tail is thinned. Runs of tied probabilities carry
no shape and are shared out evenly between the groups that cover them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .model import SymbolProfile, sig12

MASS_TOL = 1e-9


@dataclass(frozen=True)
class DowngradedProfile:
    ranks: np.ndarray  # representative rank per point, sorted by mass
    masses: np.ndarray  # non-increasing
    source_D: int
    target_S: int
    group_bounds: tuple  # group k covers source positions [bounds[k], bounds[k+1])
    order: tuple  # group index of each output point, pre-sort order

    def __len__(self):
        return len(self.masses)

    def as_dict(self) -> dict:
        return {
            "source_D": self.source_D,
            "target_S": self.target_S,
            "points": [
                {"rank": sig12(float(r)), "mass": sig12(float(m))}
                for r, m in zip(self.ranks, self.masses)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=1) + "\n"

    def plot_tsv(self) -> str:
        rows = ["rank\tmass"]
        rows += [f"{r:.6f}\t{m:.12g}" for r, m in zip(self.ranks, self.masses)]
        return "\n".join(rows) + "\n"


def group_bounds(masses, S: int) -> tuple:
    """Cut positions ``0 = c_0 < c_1 < ... < c_S = D`` over a ranked profile.

    Each group spans an equal share of the log-probability range still to be
    covered and holds at least one point. The share is recomputed after every
    group, so groups forced to a single point do not starve the tail.
    """
    masses = np.asarray(masses, dtype=np.float64)
    D = masses.size
    if S >= D:
        return tuple(range(D + 1))
    neg_y = -np.log(masses)  # non-decreasing
    bounds = [0]
    for k in range(1, S):
        s = bounds[-1]
        left = S - k + 1  # groups still to place, this one included
        span = neg_y[-1] - neg_y[s]
        if span <= 0:
            size = int(round((D - s) / left))
        else:
            cut = neg_y[s] + span / left
            size = int(np.searchsorted(neg_y[s:], cut, side="left"))
        size = min(max(size, 1), D - s - (left - 1))
        bounds.append(s + size)
    bounds.append(D)
    return tuple(bounds)


def _ranked_input(profile):
    if isinstance(profile, DowngradedProfile):
        return np.asarray(profile.ranks, float), np.asarray(profile.masses, float)
    if isinstance(profile, SymbolProfile):
        masses = profile.probabilities
    else:
        masses = np.asarray(profile, dtype=np.float64)
    return np.arange(1, masses.size + 1, dtype=np.float64), masses


def downgrade_profile(profile, S: int) -> DowngradedProfile:
    """Collapse a ranked profile to ``min(S, D)`` points.

    ``profile`` may be a :class:`SymbolProfile`, an earlier
    :class:`DowngradedProfile` (its points are regrouped and their
    representative ranks averaged), or a plain sequence of ranked masses.
    """
    if S < 1:
        raise ValueError(f"target scale must be at least 1, got {S}")
    ranks, masses = _ranked_input(profile)
    D = masses.size
    if D == 0:
        raise ValueError("empty profile")
    if np.any(masses <= 0):
        raise ValueError("profile masses must be positive")
    if np.any(np.diff(masses) > 0):
        raise ValueError("profile must be ranked by non-increasing mass")
    if abs(math.fsum(masses) - 1.0) > MASS_TOL:
        raise ValueError(f"profile mass is {math.fsum(masses)!r}, not 1")

    bounds = group_bounds(masses, S)
    n = len(bounds) - 1
    out_mass = np.empty(n)
    out_rank = np.empty(n)
    for g in range(n):
        a, b = bounds[g], bounds[g + 1]
        m = math.fsum(masses[a:b])
        out_mass[g] = m
        out_rank[g] = math.fsum(masses[a:b] * ranks[a:b]) / m

    # group sums of a sorted sequence need not stay sorted
    order = np.lexsort((out_rank, -out_mass))
    return DowngradedProfile(
        ranks=out_rank[order],
        masses=out_mass[order],
        source_D=D,
        target_S=S,
        group_bounds=bounds,
        order=tuple(int(i) for i in order),
    )


def downgraded_from_dict(d: dict) -> DowngradedProfile:
    pts = d["points"]
    ranks = np.array([p["rank"] for p in pts], dtype=np.float64)
    masses = np.array([p["mass"] for p in pts], dtype=np.float64)
    n = len(pts)
    return DowngradedProfile(ranks, masses, d["source_D"], d["target_S"], tuple(range(n + 1)), tuple(range(n)))
