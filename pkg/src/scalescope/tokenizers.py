"""Fixed observation scales: characters, words, bits and n-gram blocks."""
from dataclasses import dataclass

from .model import Message, Segmentation, TilingError, as_message

SCALES = ("chars", "words", "bits", "ngram:N", "fundamental")


@dataclass(frozen=True)
class DelimiterPolicy:
    """Where word delimiters go: glued to the next word, the previous one, or alone."""

    delimiters: frozenset = frozenset({" "})
    attachment: str = "leading"

    def __post_init__(self):
        if not self.delimiters:
            raise ValueError("delimiter set must not be empty")
        if self.attachment not in ("leading", "trailing", "standalone"):
            raise ValueError(f"unknown attachment mode {self.attachment!r}")

    def units_for(self, msg: Message) -> frozenset:
        if msg.mode != "bytes":
            return frozenset(self.delimiters)
        out = set()
        for d in self.delimiters:
            if isinstance(d, int):
                out.add(d)
            else:
                out.update(d.encode("latin-1"))
        return frozenset(out)


def _require(msg) -> Message:
    msg = as_message(msg)
    if len(msg) == 0:
        raise TilingError("empty message")
    return msg


def tokenize_chars(msg) -> Segmentation:
    msg = _require(msg)
    return Segmentation(msg, tuple(range(len(msg) + 1)))


def tokenize_ngram(msg, n: int) -> Segmentation:
    """Consecutive blocks of ``n`` units; the last block keeps the remainder."""
    if n < 1:
        raise ValueError(f"n-gram size must be at least 1, got {n}")
    msg = _require(msg)
    cuts = list(range(0, len(msg), n)) + [len(msg)]
    return Segmentation(msg, tuple(cuts))


def tokenize_words(msg, policy: DelimiterPolicy = DelimiterPolicy()) -> Segmentation:
    msg = _require(msg)
    units = msg.units
    delims = policy.units_for(msg)
    n = len(units)
    is_delim = [u in delims for u in units]
    cuts = {0, n}
    for i in range(1, n):
        prev, cur = is_delim[i - 1], is_delim[i]
        if policy.attachment == "leading":
            # every delimiter opens a segment, so "␣␣a" -> "␣", "␣a"
            split = cur
        elif policy.attachment == "trailing":
            split = prev
        else:
            split = cur or prev
        if split:
            cuts.add(i)
    return Segmentation(msg, tuple(sorted(cuts)))


def tokenize_bits(msg) -> Segmentation:
    """Expand every byte into eight single-bit units, most significant bit first."""
    msg = _require(msg)
    raw = msg.units if msg.mode == "bytes" else msg.units.encode("utf-8", "surrogatepass")
    bits = "".join(format(b, "08b") for b in raw)
    return tokenize_chars(Message(bits, "bits"))


def parse_scale(selector: str):
    """Validate a scale selector; returns ``(name, n)`` with ``n`` only for n-grams."""
    if selector in ("chars", "words", "bits", "fundamental"):
        return selector, None
    if selector.startswith("ngram:"):
        try:
            n = int(selector.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad n-gram selector {selector!r}") from None
        if n < 1:
            raise ValueError(f"bad n-gram selector {selector!r}")
        return "ngram", n
    raise ValueError(f"unknown scale {selector!r}; expected one of {', '.join(SCALES)}")


def tokenize(msg, selector: str, policy: DelimiterPolicy = DelimiterPolicy()) -> Segmentation:
    """Segment ``msg`` at a fixed scale (every selector except ``fundamental``)."""
    name, n = parse_scale(selector)
    if name == "chars":
        return tokenize_chars(msg)
    if name == "words":
        return tokenize_words(msg, policy)
    if name == "bits":
        return tokenize_bits(msg)
    if name == "ngram":
        return tokenize_ngram(msg, n)
    raise ValueError("the fundamental scale is found by search, not tokenized")
