"""Sparse 0/1 datasets: representation, file formats, generators, transforms.

A dataset is stored row-wise as sorted arrays of active column indices,
so everything downstream costs time proportional to the number of 1s
instead of the full matrix size. Datasets are treated as immutable once
constructed; transforms return new objects.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError, FormatError
from .streams import derive_rng

_INT = np.int64
_EMPTY_ROW = np.empty(0, dtype=_INT)

FORMATS = ("fimi", "dense01")


@dataclass(eq=False)
class BinaryDataset:
    """0/1 matrix with ``n_cols`` columns.

    ``rows[i]`` holds the strictly increasing column indices where row i
    is 1. Duplicate rows are kept; the distance distribution counts all
    ordered row pairs, so duplicates matter.
    """

    n_cols: int
    rows: list[np.ndarray]

    def __post_init__(self):
        if self.n_cols < 0:
            raise ValueError("n_cols must be >= 0")
        self.rows = [np.asarray(r, dtype=_INT) for r in self.rows]
        for r in self.rows:
            if r.ndim != 1:
                raise ValueError("each row must be a 1-d index array")
            if r.size:
                if r[0] < 0 or r[-1] >= self.n_cols:
                    raise ValueError("column index out of range")
                if r.size > 1 and np.any(np.diff(r) <= 0):
                    raise ValueError("row indices must be strictly increasing")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def ones_count(self) -> int:
        return int(sum(r.size for r in self.rows))

    @property
    def density(self) -> float:
        cells = self.n_rows * self.n_cols
        return self.ones_count / cells if cells else 0.0

    def row_lengths(self) -> np.ndarray:
        return np.fromiter((r.size for r in self.rows), dtype=_INT, count=self.n_rows)

    def to_dense(self) -> np.ndarray:
        """Dense uint8 matrix (desk-scale sizes only)."""
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i, r] = 1
        return out

    @classmethod
    def from_dense(cls, arr) -> "BinaryDataset":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("dense input must be 2-d")
        return cls(arr.shape[1], [np.flatnonzero(row).astype(_INT) for row in arr])

    def __eq__(self, other):
        if not isinstance(other, BinaryDataset):
            return NotImplemented
        return (
            self.n_cols == other.n_cols
            and self.n_rows == other.n_rows
            and all(np.array_equal(a, b) for a, b in zip(self.rows, other.rows))
        )

    def __repr__(self):
        return f"BinaryDataset(n_rows={self.n_rows}, n_cols={self.n_cols}, ones={self.ones_count})"


@dataclass(eq=False)
class MarginProfile:
    """Per-column probabilities.

    ``kind="margin"``: value i is the probability of column i being 1.
    ``kind="reversal"``: value i is the Markov flip probability entering
    column i (value 0 is unused; the first column is a fair coin).
    """

    values: np.ndarray
    kind: str = "margin"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in ("margin", "reversal"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.values.ndim != 1:
            raise ValueError("profile values must be 1-d")
        if self.values.size and (self.values.min() < 0.0 or self.values.max() > 1.0):
            raise ValueError("profile values must lie in [0, 1]")

    def __len__(self):
        return self.values.size


def _require_kind(profile: MarginProfile, kind: str, n_cols: int | None = None):
    if profile.kind != kind:
        raise ValueError(f"expected a {kind!r} profile, got {profile.kind!r}")
    if n_cols is not None and len(profile) != n_cols:
        raise ValueError(f"profile has {len(profile)} values, expected {n_cols}")


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def loads(text: str, fmt: str = "fimi", n_cols: int | None = None) -> BinaryDataset:
    """Parse a dataset from text.

    fimi: one transaction per line, whitespace-separated item ids;
    duplicate ids within a line are dropped; the column count is
    1 + max id unless ``n_cols`` raises it.
    dense01: one row of '0'/'1' characters per line, optionally separated
    by commas or whitespace; all rows must have equal length.
    """
    if fmt == "fimi":
        return _parse_fimi(text, n_cols)
    if fmt == "dense01":
        return _parse_dense01(text, n_cols)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _content_lines(text: str) -> list[str]:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _parse_fimi(text: str, n_cols: int | None) -> BinaryDataset:
    rows = []
    max_id = -1
    for lineno, line in enumerate(_content_lines(text), start=1):
        tokens = line.split()
        if not tokens:
            rows.append(_EMPTY_ROW)
            continue
        try:
            ids = sorted({int(t) for t in tokens})
        except ValueError as exc:
            raise FormatError(f"fimi line {lineno}: non-integer item id") from exc
        if ids[0] < 0:
            raise FormatError(f"fimi line {lineno}: negative item id {ids[0]}")
        max_id = max(max_id, ids[-1])
        rows.append(np.array(ids, dtype=_INT))
    k = max_id + 1
    if n_cols is not None:
        k = max(k, n_cols)
    return BinaryDataset(k, rows)


def _parse_dense01(text: str, n_cols: int | None) -> BinaryDataset:
    rows = []
    width = None
    for lineno, line in enumerate(_content_lines(text), start=1):
        chars = "".join(line.replace(",", " ").split())
        if width is None:
            width = len(chars)
        elif len(chars) != width:
            raise FormatError(
                f"dense01 line {lineno}: row length {len(chars)} != {width}"
            )
        bad = set(chars) - {"0", "1"}
        if bad:
            raise FormatError(f"dense01 line {lineno}: invalid character {bad.pop()!r}")
        bits = np.frombuffer(chars.encode("ascii"), dtype=np.uint8)
        rows.append(np.flatnonzero(bits == ord("1")).astype(_INT))
    k = width if width is not None else 0
    if n_cols is not None:
        k = max(k, n_cols)
    return BinaryDataset(k, rows)


def dumps(ds: BinaryDataset, fmt: str = "fimi") -> str:
    """Serialize a dataset; fimi uses single spaces, both formats end lines with LF."""
    if fmt == "fimi":
        return "".join(" ".join(str(c) for c in row) + "\n" for row in ds.rows)
    if fmt == "dense01":
        parts = []
        for row in ds.rows:
            chars = np.full(ds.n_cols, ord("0"), dtype=np.uint8)
            chars[row] = ord("1")
            parts.append(chars.tobytes().decode("ascii") + "\n")
        return "".join(parts)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def load(path, fmt: str = "fimi", n_cols: int | None = None) -> BinaryDataset:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read(), fmt, n_cols)


def dump(ds: BinaryDataset, path, fmt: str = "fimi") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(ds, fmt))


# ---------------------------------------------------------------------------
# Basic statistics and transforms
# ---------------------------------------------------------------------------

def margins(ds: BinaryDataset) -> MarginProfile:
    """Fraction of rows containing each column."""
    if ds.n_rows == 0:
        raise EmptyDatasetError("margins are undefined for a dataset with no rows")
    counts = _column_counts(ds)
    return MarginProfile(counts / ds.n_rows, "margin")


def _column_counts(ds: BinaryDataset) -> np.ndarray:
    if ds.ones_count == 0:
        return np.zeros(ds.n_cols, dtype=_INT)
    all_idx = np.concatenate(ds.rows)
    return np.bincount(all_idx, minlength=ds.n_cols).astype(_INT)


def permute_columns(ds: BinaryDataset, seed: int) -> BinaryDataset:
    """Shuffle each column independently with its own stream.

    Column sums (margins) are preserved exactly; the result only breaks
    dependencies between columns.
    """
    if ds.n_rows == 0:
        raise EmptyDatasetError("cannot permute a dataset with no rows")
    counts = _column_counts(ds)
    n = ds.n_rows
    part_rows, part_cols = [], []
    for j in range(ds.n_cols):
        c = int(counts[j])
        if c == 0:
            continue
        rng = derive_rng(seed, "permute-column", j)
        part_rows.append(rng.permutation(n)[:c].astype(_INT))
        part_cols.append(np.full(c, j, dtype=_INT))
    if not part_rows:
        return BinaryDataset(ds.n_cols, [_EMPTY_ROW] * n)
    rr = np.concatenate(part_rows)
    cc = np.concatenate(part_cols)
    order = np.lexsort((cc, rr))
    rr, cc = rr[order], cc[order]
    cuts = np.searchsorted(rr, np.arange(1, n))
    return BinaryDataset(ds.n_cols, np.split(cc, cuts))


def copy_columns(ds: BinaryDataset, n: int) -> BinaryDataset:
    """Replace each column by n adjacent copies; pairwise distances scale by n."""
    if n < 1:
        raise ValueError("copy count must be >= 1")
    offsets = np.arange(n, dtype=_INT)
    rows = [(r[:, None] * n + offsets).ravel() for r in ds.rows]
    return BinaryDataset(ds.n_cols * n, rows)


def random_subset(ds: BinaryDataset, mode: str, m: int, seed: int) -> BinaryDataset:
    """Uniform sample of m rows or columns, without replacement.

    Column mode renumbers the kept columns to [0, m) preserving their
    original order; row mode keeps rows in drawn order.
    """
    if mode not in ("rows", "cols"):
        raise ValueError(f"mode must be 'rows' or 'cols', got {mode!r}")
    total = ds.n_rows if mode == "rows" else ds.n_cols
    if not 1 <= m <= total:
        raise ValueError(f"m must be in [1, {total}], got {m}")
    rng = derive_rng(seed, "subset", mode)
    if mode == "rows":
        keep = rng.permutation(ds.n_rows)[:m]
        return BinaryDataset(ds.n_cols, [ds.rows[i] for i in keep])
    keep = np.sort(rng.permutation(ds.n_cols)[:m])
    rows = []
    for r in ds.rows:
        pos = np.searchsorted(keep, r)
        clipped = np.minimum(pos, m - 1)
        mask = keep[clipped] == r
        rows.append(pos[mask].astype(_INT))
    return BinaryDataset(m, rows)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

_BLOCK_CELLS = 1 << 20  # rows are generated in blocks of about this many cells


def gen_independent(n_cols: int, n_rows: int, profile: MarginProfile, seed: int) -> BinaryDataset:
    """Dataset whose cell (i, j) is 1 with probability profile.values[j],
    all cells independent."""
    _require_kind(profile, "margin", n_cols)
    rng = derive_rng(seed, "gen-independent")
    p = profile.values
    rows: list[np.ndarray] = []
    block = max(1, _BLOCK_CELLS // max(n_cols, 1))
    done = 0
    while done < n_rows:
        b = min(block, n_rows - done)
        hits = rng.random((b, n_cols)) < p
        rows.extend(np.flatnonzero(hits[i]).astype(_INT) for i in range(b))
        done += b
    return BinaryDataset(n_cols, rows)


def gen_markov(n_cols: int, n_rows: int, profile: MarginProfile, seed: int) -> BinaryDataset:
    """Rows generated column-by-column by a two-state chain.

    The first column is a fair coin; column j flips the previous value
    with probability profile.values[j]. All margins are 0.5 by symmetry;
    small flip probabilities give strong positive adjacent correlation.
    """
    if n_cols < 1:
        raise ValueError("the chain needs at least one column")
    _require_kind(profile, "reversal", n_cols)
    t = profile.values
    rng = derive_rng(seed, "gen-markov")
    rows: list[np.ndarray] = []
    block = max(1, _BLOCK_CELLS // n_cols)
    done = 0
    while done < n_rows:
        b = min(block, n_rows - done)
        u = rng.random((b, n_cols))
        x = np.empty((b, n_cols), dtype=bool)
        x[:, 0] = u[:, 0] < 0.5
        for j in range(1, n_cols):
            x[:, j] = x[:, j - 1] ^ (u[:, j] < t[j])
        rows.extend(np.flatnonzero(x[i]).astype(_INT) for i in range(b))
        done += b
    return BinaryDataset(n_cols, rows)


def random_profile(n_cols: int, kind: str = "margin", seed: int = 0) -> MarginProfile:
    """Random profile: draw a cap uniformly from [0, 1], then each value
    uniformly from [0, cap]. Produces profiles of widely varying density."""
    if n_cols < 1:
        raise ValueError("n_cols must be >= 1")
    if kind not in ("margin", "reversal"):
        raise ValueError(f"unknown profile kind {kind!r}")
    rng = derive_rng(seed, "profile", kind)
    cap = rng.random()
    return MarginProfile(rng.random(n_cols) * cap, kind)


def t_measure(profile: MarginProfile) -> float:
    """Sum of 2 t (1 - t) over a reversal profile; small values mean
    strongly correlated adjacent columns."""
    _require_kind(profile, "reversal")
    v = profile.values
    return float(np.sum(2.0 * v * (1.0 - v)))
