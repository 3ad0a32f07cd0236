"""Messages, tilings, symbol profiles and the entropy arithmetic."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import kernels

Units = Union[str, bytes]

PROB_TOL = 1e-9


class TilingError(ValueError):
    """A segmentation does not reproduce its message exactly."""


class ProfileError(ValueError):
    """A probability profile is empty or does not sum to one."""


@dataclass(frozen=True)
class Message:
    """An ordered run of alphabet units.

    ``units`` is a ``str`` (one unit per code point) or ``bytes`` (one unit
    per byte). Bit-level messages are ``str`` over ``"01"`` with
    ``mode="bits"``.
    """

    units: Units
    mode: str = "text"

    def __post_init__(self):
        if self.mode not in ("text", "bytes", "bits"):
            raise ValueError(f"unknown message mode {self.mode!r}")
        if self.mode == "bytes" and not isinstance(self.units, bytes):
            raise TypeError("byte mode needs a bytes payload")
        if self.mode != "bytes" and not isinstance(self.units, str):
            raise TypeError(f"{self.mode} mode needs a str payload")

    @property
    def length_units(self) -> int:
        return len(self.units)

    def __len__(self):
        return len(self.units)


def as_message(msg) -> Message:
    if isinstance(msg, Message):
        return msg
    if isinstance(msg, (bytes, bytearray)):
        return Message(bytes(msg), "bytes")
    return Message(str(msg))


@dataclass(frozen=True)
class Segmentation:
    """A gap-free, overlap-free tiling of a message.

    ``boundaries`` holds every cut position including 0 and ``len(message)``.
    """

    message: Message
    boundaries: tuple

    def __post_init__(self):
        b = tuple(int(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        n = len(self.message)
        if n < 1:
            raise TilingError("empty message")
        if len(b) < 2 or b[0] != 0 or b[-1] != n:
            raise TilingError(f"boundaries must run from 0 to {n}, got {b[:1]}..{b[-1:]}")
        if any(b1 <= b0 for b0, b1 in zip(b, b[1:])):
            raise TilingError("boundaries must be strictly increasing")

    @classmethod
    def from_segments(cls, message, segments: Sequence[Units]) -> "Segmentation":
        message = as_message(message)
        cuts = [0]
        for s in segments:
            if len(s) < 1:
                raise TilingError("empty segment")
            cuts.append(cuts[-1] + len(s))
        seg = cls(message, tuple(cuts))
        if tuple(seg.segments) != tuple(segments):
            raise TilingError("segments do not concatenate to the message")
        return seg

    @property
    def segments(self) -> list:
        u = self.message.units
        b = self.boundaries
        return [u[i:j] for i, j in zip(b, b[1:])]

    @property
    def scope(self) -> int:
        return len(self.boundaries) - 1

    def __len__(self):
        return self.scope


@dataclass(frozen=True)
class SymbolEntry:
    symbol: Units
    f: int
    size: int
    weight: int  # units covered by all occurrences, f * size for a uniform symbol
    p: float


def _rank_key(entry: SymbolEntry):
    s = entry.symbol
    sb = s if isinstance(s, bytes) else s.encode("utf-8", "surrogatepass")
    return (-entry.weight, sb)


@dataclass(frozen=True)
class SymbolProfile:
    """Ranked size-weighted symbol probabilities of one interpretation."""

    entries: tuple
    total_units: int
    scope: int

    @property
    def diversity(self) -> int:
        return len(self.entries)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.p for e in self.entries], dtype=np.float64)

    @property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.entries], dtype=np.int64)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @classmethod
    def from_counts(cls, counts, sizes=None, total_units=None, weights=None) -> "SymbolProfile":
        """Build a profile from ``{symbol: frequency}``.

        ``sizes`` maps symbol to unit length (defaults to ``len(symbol)``).
        ``weights`` overrides the covered-unit count per symbol, for symbols
        whose occurrences differ in size.
        """
        entries = []
        for sym, f in counts.items():
            f = int(f)
            if f < 1:
                continue
            size = int(sizes[sym]) if sizes is not None else len(sym)
            w = int(weights[sym]) if weights is not None else f * size
            entries.append((sym, f, size, w))
        if not entries:
            raise ProfileError("empty profile")
        total = sum(e[3] for e in entries)
        if total_units is None:
            total_units = total
        elif total != total_units:
            raise TilingError(f"symbols cover {total} units, message has {total_units}")
        built = [SymbolEntry(s, f, size, w, w / total_units) for s, f, size, w in entries]
        built.sort(key=_rank_key)
        return cls(tuple(built), int(total_units), sum(e.f for e in built))


def symbol_probability(f: int, size: int, total_units: int) -> float:
    if f < 1 or size < 1:
        raise ValueError("frequency and size must be at least 1")
    if f * size > total_units:
        raise TilingError(f"{f} occurrences of size {size} exceed a {total_units}-unit message")
    return f * size / total_units


def profile_from_segmentation(seg: Segmentation) -> SymbolProfile:
    return SymbolProfile.from_counts(Counter(seg.segments), total_units=len(seg.message))


def entropy(profile: SymbolProfile) -> float:
    """Diversity-base entropy of a profile; 0 for a single symbol."""
    if len(profile) == 0:
        raise ProfileError("empty profile")
    total = sum(e.weight for e in profile)
    if total != profile.total_units:
        raise ProfileError(f"probabilities sum to {total / profile.total_units!r}, not 1")
    return float(kernels.entropy_from_weights(profile.weights))


def entropy_flat(frequencies) -> float:
    """Entropy of a relative-frequency list in base ``len(frequencies)``."""
    p = np.asarray(frequencies, dtype=np.float64)
    if p.size == 0:
        raise ProfileError("empty distribution")
    if np.any(p <= 0):
        raise ProfileError("relative frequencies must be positive")
    if abs(math.fsum(p) - 1.0) > PROB_TOL:
        raise ProfileError(f"relative frequencies sum to {math.fsum(p)!r}, not 1")
    n = p.size
    if n == 1:
        return 0.0
    if np.all(p == p[0]):
        return 1.0
    h = -math.fsum(p * np.log(p)) / math.log(n)
    return min(max(h, 0.0), 1.0)


def specific_diversity(diversity: int, scope: int) -> float:
    if diversity < 1 or diversity > scope:
        raise ValueError(f"need 1 <= D <= L, got D={diversity}, L={scope}")
    return diversity / scope


@dataclass(frozen=True)
class ScaleReport:
    scale_name: str
    resolution: tuple  # unit counts per dimension, or ("irregular", ...)
    scope: int
    diversity: int
    entropy: float
    specific_diversity: float
    total_units: int
    density: tuple = None
    metadata: dict = None
    profile: SymbolProfile = field(default=None, repr=False, compare=False)

    def as_dict(self) -> dict:
        d = {
            "scale": self.scale_name,
            "L_units": self.total_units,
            "resolution": list(self.resolution),
            "scope_L": self.scope,
            "diversity_D": self.diversity,
            "entropy_h": sig12(self.entropy),
            "specific_d": sig12(self.specific_diversity),
        }
        if self.density is not None:
            d["density_r"] = [sig12(x) for x in self.density]
        if self.metadata:
            d["metadata"] = dict(sorted(self.metadata.items()))
        return d


def report_from_profile(profile, scale_name, resolution, dims=None) -> ScaleReport:
    density = None
    if dims is not None:
        dims = tuple(dims)
        if len(dims) != len(resolution):
            raise ValueError("need one physical size per resolution axis")
        density = tuple(r / x for r, x in zip(resolution, dims))
    return ScaleReport(
        scale_name=scale_name,
        resolution=tuple(resolution),
        scope=profile.scope,
        diversity=profile.diversity,
        entropy=entropy(profile),
        specific_diversity=specific_diversity(profile.diversity, profile.scope),
        total_units=profile.total_units,
        density=density,
        profile=profile,
    )


def scale_report(seg: Segmentation, scale_name: str = "custom", dims=None) -> ScaleReport:
    """Summarise one 1D interpretation: R = L_A, scope, diversity, h and d."""
    profile = profile_from_segmentation(seg)
    return report_from_profile(profile, scale_name, (len(seg.message),), dims)


# -- serialisation -----------------------------------------------------------


def sig12(x: float) -> float:
    return float(f"{x:.12g}")


def symbol_text(sym: Units) -> str:
    """JSON-safe text for a symbol; bytes map one-to-one onto U+0000..U+00FF."""
    return sym.decode("latin-1") if isinstance(sym, bytes) else sym


def profile_to_dict(profile: SymbolProfile, scale_name: str) -> dict:
    h = entropy(profile)
    return {
        "scale": scale_name,
        "L_units": profile.total_units,
        "scope_L": profile.scope,
        "diversity_D": profile.diversity,
        "entropy_h": sig12(h),
        "specific_d": sig12(specific_diversity(profile.diversity, profile.scope)),
        "symbols": [
            {"s": symbol_text(e.symbol), "f": e.f, "size": e.size, "p": sig12(e.p)}
            for e in profile
        ],
    }


def profile_from_dict(d: dict, mode: str = "text") -> SymbolProfile:
    counts, sizes, weights = {}, {}, {}
    for row in d["symbols"]:
        sym = row["s"].encode("latin-1") if mode == "bytes" else row["s"]
        counts[sym] = int(row["f"])
        sizes[sym] = int(row["size"])
        # p carries mixed-size symbols correctly where f * size cannot
        weights[sym] = round(float(row["p"]) * d["L_units"])
    return SymbolProfile.from_counts(counts, sizes, d["L_units"], weights)


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=True, indent=1) + "\n"
