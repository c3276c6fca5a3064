"""Date-aligned multi-series panels: ingestion, alignment, transforms, windowing.

A :class:`Panel` is the universal input of the pipeline: an ordered set of
calendar dates, a list of series names, and a dense float matrix with one row
per date and one column per series.  Panels are immutable; every operation
returns a new object.
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateSplitError,
    DuplicateDateError,
    EmptyIntersectionError,
    KindMismatchError,
    MissingColumnError,
    NonPositivePriceError,
    UnparsableDateError,
    WindowTooLargeError,
    ZeroVarianceError,
)


class Kind(enum.Enum):
    """What the panel values measure."""

    PRICE = "price"
    LOG_RETURN = "log_return"


def _frozen_array(values, dtype=float, ndim=None) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"expected {ndim}-d array, got {arr.ndim}-d")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Panel:
    """Immutable date-aligned matrix of prices or log returns.

    Parameters
    ----------
    dates : tuple of datetime.date
        Strictly increasing calendar dates, one per row.
    names : tuple of str
        Unique series identifiers, one per column.
    values : ndarray, shape (len(dates), len(names))
        Prices (CNY/ton) or dimensionless log returns.
    kind : Kind
        PRICE panels must be strictly positive.
    """

    dates: tuple
    names: tuple
    values: np.ndarray
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))
        object.__setattr__(self, "values", _frozen_array(self.values, ndim=2))
        if len(self.names) != len(set(self.names)):
            raise ValueError("series names must be unique")
        if self.values.shape != (len(self.dates), len(self.names)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.dates)} dates x {len(self.names)} names"
            )
        if len(self.dates) < 1:
            raise ValueError("panel needs at least 1 row")
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise ValueError(f"dates not strictly increasing at {a!r} -> {b!r}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("panel values must be finite (no missing cells)")
        if self.kind is Kind.PRICE and not np.all(self.values > 0):
            raise ValueError("price panel must be strictly positive")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        """Return a copy of one series as a 1-d array."""
        if name not in self.names:
            raise MissingColumnError(f"panel has no series named {name!r}")
        return self.values[:, self.names.index(name)].copy()

    def select(self, names: Sequence[str]) -> "Panel":
        """Panel restricted to the given columns, in the given order."""
        idx = [self.names.index(n) if n in self.names else -1 for n in names]
        for n, i in zip(names, idx):
            if i < 0:
                raise MissingColumnError(f"panel has no series named {n!r}")
        return Panel(self.dates, tuple(names), self.values[:, idx], self.kind)

    def drop(self, name: str) -> "Panel":
        """Panel without the named column."""
        keep = [n for n in self.names if n != name]
        if len(keep) == len(self.names):
            raise MissingColumnError(f"panel has no series named {name!r}")
        return self.select(keep)

    def to_csv(self, path) -> None:
        """Write the panel in the input CSV shape (date column first).

        Floats are written with ``repr`` so re-parsing reproduces the matrix
        bit for bit.
        """
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["date", *self.names])
            for i, d in enumerate(self.dates):
                writer.writerow([d.isoformat(), *[repr(v) for v in self.values[i]]])


def _parse_date(text: str, row: int) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError as exc:
        raise UnparsableDateError(
            f"row {row}: cannot parse date {text!r} as YYYY-MM-DD"
        ) from exc


def load_csv(path, columns: Sequence[str] | None = None,
             date_column: str = "date") -> Panel:
    """Load a price panel from a CSV file.

    The file must have a header with a date column (ISO-8601) and numeric
    settlement-price columns.  Rows where any requested column is empty are
    dropped; an explicit zero or negative price is an error.  Rows are sorted
    by date.

    Parameters
    ----------
    path : str or Path
        CSV file location.
    columns : sequence of str, optional
        Price columns to keep, in order.  Default: every non-date column.
    date_column : str
        Name of the date column.

    Returns
    -------
    Panel
        A PRICE panel.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumnError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if date_column not in header:
            raise MissingColumnError(f"{path}: no {date_column!r} column in header")
        if columns is None:
            columns = [h for h in header if h != date_column]
        if not columns:
            raise MissingColumnError(f"{path}: no price columns requested")
        for c in columns:
            if c not in header:
                raise MissingColumnError(f"{path}: no column named {c!r}")
        date_idx = header.index(date_column)
        col_idx = [header.index(c) for c in columns]

        rows: list[tuple[dt.date, list[float]]] = []
        for row_no, raw in enumerate(reader, start=2):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            cells = [raw[i].strip() if i < len(raw) else "" for i in col_idx]
            if any(cell == "" for cell in cells):
                continue  # incomplete row: this date has no full observation
            date = _parse_date(raw[date_idx] if date_idx < len(raw) else "", row_no)
            prices = []
            for name, cell in zip(columns, cells):
                try:
                    value = float(cell)
                except ValueError:
                    raise NonPositivePriceError(
                        f"row {row_no}, column {name!r}: {cell!r} is not a number"
                    ) from None
                if not math.isfinite(value) or value <= 0:
                    raise NonPositivePriceError(
                        f"row {row_no}, column {name!r}: price {cell} is not positive"
                    )
                prices.append(value)
            rows.append((date, prices))

    if len(rows) < 2:
        raise EmptyIntersectionError(
            f"{path}: fewer than 2 complete rows after dropping incomplete ones"
        )
    rows.sort(key=lambda item: item[0])
    for (d1, _), (d2, _) in zip(rows, rows[1:]):
        if d1 == d2:
            raise DuplicateDateError(f"{path}: date {d1.isoformat()} appears twice")
    dates = tuple(d for d, _ in rows)
    values = np.array([p for _, p in rows], dtype=float)
    return Panel(dates, tuple(columns), values, Kind.PRICE)


def align(panels: Sequence[Panel]) -> Panel:
    """Inner-join panels on their dates.

    Only dates present in every input survive; columns are concatenated in
    input order.  Column names must be disjoint and kinds must agree.
    """
    if len(panels) < 2:
        raise ValueError("align needs at least 2 panels")
    kind = panels[0].kind
    names: list[str] = []
    for p in panels:
        if p.kind is not kind:
            raise KindMismatchError("cannot align panels of different kinds")
        names.extend(p.names)
    if len(names) != len(set(names)):
        raise ValueError("panels must have disjoint column names")

    common = set(panels[0].dates)
    for p in panels[1:]:
        common &= set(p.dates)
    if len(common) < 2:
        raise EmptyIntersectionError(
            "panels share no common dates" if not common
            else "panels share only one common date"
        )
    dates = tuple(sorted(common))
    blocks = []
    for p in panels:
        pos = {d: i for i, d in enumerate(p.dates)}
        blocks.append(p.values[[pos[d] for d in dates], :])
    return Panel(dates, tuple(names), np.hstack(blocks), kind)


def log_returns(panel: Panel) -> Panel:
    """Per-column log returns ln(P_t / P_{t-1}).

    The output has one row fewer than the input and is dated by the later
    observation of each ratio.
    """
    if panel.kind is not Kind.PRICE:
        raise KindMismatchError("log_returns expects a price panel")
    returns = np.log(panel.values[1:] / panel.values[:-1])
    return Panel(panel.dates[1:], panel.names, returns, Kind.LOG_RETURN)


def train_test_split(panel: Panel, train_fraction: float) -> tuple[Panel, Panel]:
    """Chronological split: first floor(fraction * n) rows train, rest test."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    n = panel.n_rows
    n_train = int(math.floor(train_fraction * n))
    if n_train < 1 or n - n_train < 1:
        raise DegenerateSplitError(
            f"split of {n} rows at fraction {train_fraction} leaves "
            f"{n_train}/{n - n_train} rows; neither side may be empty"
        )
    train = Panel(panel.dates[:n_train], panel.names,
                  panel.values[:n_train], panel.kind)
    test = Panel(panel.dates[n_train:], panel.names,
                 panel.values[n_train:], panel.kind)
    return train, test


@dataclass(frozen=True)
class MinMaxScaler:
    """Per-column min/max map to [0, 1], fitted on training rows only."""

    names: tuple
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "mins", _frozen_array(self.mins, ndim=1))
        object.__setattr__(self, "maxs", _frozen_array(self.maxs, ndim=1))

    @classmethod
    def fit(cls, names: Sequence[str], rows: np.ndarray) -> "MinMaxScaler":
        mins = rows.min(axis=0)
        maxs = rows.max(axis=0)
        for name, lo, hi in zip(names, mins, maxs):
            if hi <= lo:
                raise ZeroVarianceError(
                    f"column {name!r} is constant over the training rows; "
                    "min/max scaling is undefined"
                )
        return cls(tuple(names), mins, maxs)

    def _index(self, name: str) -> int:
        if name not in self.names:
            raise MissingColumnError(f"scaler has no column named {name!r}")
        return self.names.index(name)

    def transform(self, values: np.ndarray, names: Sequence[str]) -> np.ndarray:
        idx = [self._index(n) for n in names]
        lo = self.mins[idx]
        hi = self.maxs[idx]
        return (values - lo) / (hi - lo)

    def inverse(self, scaled: np.ndarray, names: Sequence[str]) -> np.ndarray:
        idx = [self._index(n) for n in names]
        lo = self.mins[idx]
        hi = self.maxs[idx]
        return scaled * (hi - lo) + lo


@dataclass(frozen=True)
class WindowedDataset:
    """Sliding-window supervised dataset for multi-step forecasting.

    ``inputs`` and ``targets`` hold the raw (unscaled) values; the fitted
    scaler travels with the dataset so that training can scale on the fly and
    predictions can be mapped back to price units.  Sample ``s`` reads rows
    ``[s, s+lookback)`` and predicts the target column over rows
    ``[s+lookback, s+lookback+horizon)``.
    """

    inputs: np.ndarray        # (samples, lookback, n_features)
    targets: np.ndarray       # (samples, horizon)
    lookback: int
    horizon: int
    feature_names: tuple
    target_name: str
    scaler: MinMaxScaler
    train_rows: int           # panel rows the scaler was fitted on

    def __post_init__(self):
        object.__setattr__(self, "inputs", _frozen_array(self.inputs, ndim=3))
        object.__setattr__(self, "targets", _frozen_array(self.targets, ndim=2))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[2]

    def _subset(self, idx: np.ndarray) -> "WindowedDataset":
        return WindowedDataset(self.inputs[idx], self.targets[idx],
                               self.lookback, self.horizon, self.feature_names,
                               self.target_name, self.scaler, self.train_rows)

    def train_view(self) -> "WindowedDataset":
        """Samples whose target window lies entirely inside the train rows."""
        last_target = np.arange(self.n_samples) + self.lookback + self.horizon
        return self._subset(np.nonzero(last_target <= self.train_rows)[0])

    def test_view(self) -> "WindowedDataset":
        """Samples whose target window lies entirely after the train rows.

        Windows that straddle the boundary belong to neither view.
        """
        first_target = np.arange(self.n_samples) + self.lookback
        return self._subset(np.nonzero(first_target >= self.train_rows)[0])

    def scaled_inputs(self) -> np.ndarray:
        flat = self.inputs.reshape(-1, self.n_features)
        scaled = self.scaler.transform(flat, self.feature_names)
        return scaled.reshape(self.inputs.shape)

    def scaled_targets(self) -> np.ndarray:
        return self.scaler.transform(self.targets[..., None],
                                     [self.target_name])[..., 0]

    def inverse_target(self, scaled: np.ndarray) -> np.ndarray:
        return self.scaler.inverse(scaled[..., None], [self.target_name])[..., 0]


def make_windows(panel: Panel, target: str, lookback: int, horizon: int,
                 include_target_as_feature: bool = True,
                 train_rows: int | None = None) -> WindowedDataset:
    """Build sliding windows over a panel for multi-step forecasting.

    Parameters
    ----------
    panel : Panel
        Source series; all columns become features (minus the target when
        ``include_target_as_feature`` is false).
    target : str
        Column to predict.
    lookback, horizon : int
        Input window length and number of forecast steps.
    include_target_as_feature : bool
        Whether the target's own history is part of the inputs.
    train_rows : int, optional
        Number of leading panel rows that count as training data; the min/max
        scaler is fitted on these rows only.  Default: every row.
    """
    if target not in panel.names:
        raise MissingColumnError(f"panel has no series named {target!r}")
    if lookback < 1 or horizon < 1:
        raise ValueError("lookback and horizon must be >= 1")
    n = panel.n_rows
    if lookback + horizon > n:
        raise WindowTooLargeError(
            f"lookback {lookback} + horizon {horizon} exceeds {n} rows"
        )
    if train_rows is None:
        train_rows = n
    if not 1 <= train_rows <= n:
        raise ValueError(f"train_rows must lie in [1, {n}]")

    feature_names = tuple(
        n_ for n_ in panel.names
        if include_target_as_feature or n_ != target
    )
    if not feature_names:
        raise ValueError("no features left after excluding the target")
    feat = panel.select(feature_names).values
    tgt = panel.column(target)

    n_samples = n - lookback - horizon + 1
    inputs = np.empty((n_samples, lookback, len(feature_names)))
    targets = np.empty((n_samples, horizon))
    for s in range(n_samples):
        inputs[s] = feat[s:s + lookback]
        targets[s] = tgt[s + lookback:s + lookback + horizon]

    scaler = MinMaxScaler.fit(panel.names, panel.values[:train_rows])
    return WindowedDataset(inputs, targets, lookback, horizon, feature_names,
                           target, scaler, train_rows)
