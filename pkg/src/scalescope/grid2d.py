"""Scale, scope and resolution accounting for 2D cell grids.

A grid is a W x H array of palette symbols. A tiling partitions its cells
into regions; every region carries a class label, and the classes play the
role of symbols. A class's probability is the share of grid cells its
regions cover.

File formats (``#`` starts a comment line)::

    grid file              tiling file
    ---------              -----------
    W H                    W H
    H rows of W symbols    H rows of W region ids
                           classes [auto]
                           <region id> <label | auto>   (optional lines)
                           meta <key> <value>           (optional lines)

Row tokens are whitespace separated; a row without whitespace is read one
character per cell. Regions missing from the class section, or labelled
``auto``, are classed by their cell pattern up to translation.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace

from .model import ScaleReport, SymbolProfile, report_from_profile


class PartitionError(ValueError):
    """Regions overlap, miss cells, or do not match the grid."""


class GridFormatError(ValueError):
    """A grid or tiling file cannot be parsed."""


@dataclass(frozen=True)
class Grid:
    width: int
    height: int
    cells: tuple  # row-major palette symbols

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise GridFormatError("grid needs positive width and height")
        if len(self.cells) != self.width * self.height:
            raise GridFormatError(
                f"{self.width}x{self.height} grid needs {self.width * self.height} cells, got {len(self.cells)}"
            )

    @classmethod
    def from_rows(cls, rows) -> "Grid":
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise GridFormatError("ragged grid rows")
        return cls(width, len(rows), tuple(str(c) for r in rows for c in r))

    @property
    def palette(self) -> frozenset:
        return frozenset(self.cells)

    def xy(self, index: int):
        return index % self.width, index // self.width


@dataclass(frozen=True)
class Region:
    cells: frozenset
    label: str | None = None  # None: derive from the cell pattern


@dataclass(frozen=True)
class GridTiling:
    regions: tuple
    metadata: dict = field(default_factory=dict, compare=False)

    @classmethod
    def single_cells(cls, grid: Grid) -> "GridTiling":
        return cls(tuple(Region(frozenset([i]), grid.cells[i]) for i in range(len(grid.cells))))

    @classmethod
    def from_id_map(cls, ids, classes=None, metadata=None) -> "GridTiling":
        """Regions from a row-major sequence of region ids.

        ``classes`` maps region id to label; ids absent from it, or mapped to
        ``"auto"``, get pattern-derived labels.
        """
        classes = classes or {}
        members = defaultdict(set)
        for i, rid in enumerate(ids):
            members[rid].add(i)
        for rid in classes:
            if rid not in members:
                raise PartitionError(f"class map names region {rid!r}, which has no cells")
        regions = []
        for rid in sorted(members, key=_natural):
            label = classes.get(rid)
            regions.append(Region(frozenset(members[rid]), None if label in (None, "auto") else label))
        return cls(tuple(regions), dict(metadata or {}))


def _natural(s):
    return (0, int(s), "") if str(s).isdigit() else (1, 0, str(s))


def validate_partition(grid: Grid, tiling: GridTiling) -> None:
    n = len(grid.cells)
    seen = Counter()
    for r in tiling.regions:
        if not r.cells:
            raise PartitionError("empty region")
        seen.update(r.cells)
    extra = [i for i in seen if not 0 <= i < n]
    if extra:
        raise PartitionError(f"region cells outside the grid: {sorted(extra)[:5]}")
    dup = sorted(i for i, c in seen.items() if c > 1)
    if dup:
        raise PartitionError(f"cells in more than one region: {[grid.xy(i) for i in dup[:5]]}")
    if len(seen) != n:
        missing = [i for i in range(n) if i not in seen]
        raise PartitionError(f"cells in no region: {[grid.xy(i) for i in missing[:5]]}")


# -- class identity ------------------------------------------------------------

_DIHEDRAL = (
    lambda x, y: (x, y),
    lambda x, y: (-y, x),
    lambda x, y: (-x, -y),
    lambda x, y: (y, -x),
    lambda x, y: (-x, y),
    lambda x, y: (y, x),
    lambda x, y: (x, -y),
    lambda x, y: (-y, -x),
)


def _normalised(points):
    x0 = min(p[0] for p in points)
    y0 = min(p[1] for p in points)
    return tuple(sorted((y - y0, x - x0, v) for x, y, v in points))


def region_pattern(grid: Grid, cells, symmetric: bool = False) -> tuple:
    """Cell pattern of a region up to translation (and the 8 square symmetries)."""
    points = [(*grid.xy(i), grid.cells[i]) for i in cells]
    if not symmetric:
        return _normalised(points)
    return min(_normalised([(*t(x, y), v) for x, y, v in points]) for t in _DIHEDRAL)


def pattern_label(pattern) -> str:
    """Render a pattern row by row, '.' for bounding-box cells outside it."""
    h = max(p[0] for p in pattern) + 1
    w = max(p[1] for p in pattern) + 1
    box = [["."] * w for _ in range(h)]
    for y, x, v in pattern:
        box[y][x] = v
    sep = "" if all(len(v) == 1 for _, _, v in pattern) else " "
    return "/".join(sep.join(row) for row in box)


def class_labels(grid: Grid, tiling: GridTiling, symmetric: bool = False) -> list:
    return [
        r.label if r.label is not None else pattern_label(region_pattern(grid, r.cells, symmetric))
        for r in tiling.regions
    ]


# -- accounting ----------------------------------------------------------------


def grid_profile(grid: Grid, tiling: GridTiling, symmetric: bool = False) -> SymbolProfile:
    """Class profile of a tiled grid.

    A class's frequency is its region count and its weight the cells those
    regions cover, so regions of unequal size inside one class are handled.
    The reported size of such a class is its mean region size, rounded.
    """
    validate_partition(grid, tiling)
    counts, weights = Counter(), Counter()
    for region, label in zip(tiling.regions, class_labels(grid, tiling, symmetric)):
        counts[label] += 1
        weights[label] += len(region.cells)
    sizes = {k: round(weights[k] / counts[k]) for k in counts}
    return SymbolProfile.from_counts(counts, sizes, len(grid.cells), weights)


def tiling_resolution(grid: Grid, tiling: GridTiling) -> tuple:
    """(R_horz, R_vert) for regular tilings, else ("irregular", rows, cols).

    A tiling is regular when every region is the same axis-aligned k x m
    block sitting on a k x m lattice. For irregular tilings the counts are
    the most regions met along any single row and any single column.
    """
    W, H = grid.width, grid.height
    blocks = set()
    for r in tiling.regions:
        xs = [i % W for i in r.cells]
        ys = [i // W for i in r.cells]
        x0, y0 = min(xs), min(ys)
        k, m = max(xs) - x0 + 1, max(ys) - y0 + 1
        if k * m != len(r.cells) or x0 % k or y0 % m:
            blocks = None
            break
        blocks.add((k, m))
        if len(blocks) > 1:
            blocks = None
            break
    if blocks:
        (k, m), = blocks
        if W % k == 0 and H % m == 0:
            return (W // k, H // m)

    owner = [0] * (W * H)
    for n, r in enumerate(tiling.regions):
        for i in r.cells:
            owner[i] = n
    per_row = max(len(set(owner[y * W:(y + 1) * W])) for y in range(H))
    per_col = max(len(set(owner[x::W])) for x in range(W))
    return ("irregular", per_row, per_col)


def grid_report(grid: Grid, tiling: GridTiling, scale_name: str = "symbols",
                symmetric: bool = False, dims=None) -> ScaleReport:
    profile = grid_profile(grid, tiling, symmetric)
    resolution = tiling_resolution(grid, tiling)
    if resolution[0] == "irregular":
        dims = None
    rep = report_from_profile(profile, scale_name, resolution, dims)
    if tiling.metadata:
        rep = replace(rep, metadata=dict(tiling.metadata))
    return rep


# -- files ---------------------------------------------------------------------


def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def _row_tokens(line: str):
    return line.split() if any(c.isspace() for c in line) else list(line)


def _read_shape_and_rows(lines, what):
    try:
        head = next(lines)
        W, H = (int(x) for x in head.split())
    except (StopIteration, ValueError):
        raise GridFormatError(f"{what}: first line must be 'W H'") from None
    rows = []
    for y in range(H):
        try:
            row = _row_tokens(next(lines))
        except StopIteration:
            raise GridFormatError(f"{what}: expected {H} rows, got {y}") from None
        if len(row) != W:
            raise GridFormatError(f"{what}: row {y + 1} has {len(row)} cells, expected {W}")
        rows.append(row)
    return W, H, rows


def parse_grid(text: str) -> Grid:
    lines = _content_lines(text)
    W, H, rows = _read_shape_and_rows(lines, "grid")
    rest = list(lines)
    if rest:
        raise GridFormatError(f"grid: unexpected trailing line {rest[0]!r}")
    return Grid.from_rows(rows)


def parse_tiling(text: str, grid: Grid | None = None) -> GridTiling:
    lines = _content_lines(text)
    W, H, rows = _read_shape_and_rows(lines, "tiling")
    if grid is not None and (W, H) != (grid.width, grid.height):
        raise PartitionError(f"tiling is {W}x{H} but grid is {grid.width}x{grid.height}")
    classes, metadata = {}, {}
    in_classes = False
    for line in lines:
        parts = line.split()
        if parts[0] == "classes":
            in_classes = True
            if parts[1:] not in ([], ["auto"]):
                raise GridFormatError(f"tiling: bad classes header {line!r}")
        elif parts[0] == "meta" and len(parts) >= 3:
            metadata[parts[1]] = " ".join(parts[2:])
        elif in_classes and len(parts) == 2:
            if parts[0] in classes:
                raise GridFormatError(f"tiling: region {parts[0]!r} classed twice")
            classes[parts[0]] = parts[1]
        else:
            raise GridFormatError(f"tiling: cannot read line {line!r}")
    ids = [tok for row in rows for tok in row]
    return GridTiling.from_id_map(ids, classes, metadata)
