"""Plain-text file formats: datasets, labels, traces and key-value configs.

Datasets are UTF-8 CSV without a header, one sample per row. In memory the
samples become columns, so a file with ``n`` rows of ``d`` numbers loads as a
``(d, n)`` array. Labels live in a companion file with one nonnegative integer
per line.
"""

import csv
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError, ParseError

__all__ = [
    "labels_path_for",
    "load_dataset",
    "save_dataset",
    "load_labels",
    "save_labels",
    "write_trace",
    "read_trace",
    "read_config",
]


def labels_path_for(path):
    """Companion labels file of a dataset: ``data.csv`` -> ``data.labels``."""
    return Path(path).with_suffix(".labels")


def _fmt(v):
    return repr(float(v))


def save_dataset(path, x, labels=None):
    """Write a ``(d, n)`` matrix as ``n`` CSV rows, plus labels if given."""
    x = np.asarray(x, dtype=np.float64)
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for col in x.T:
            fh.write(",".join(_fmt(v) for v in col) + "\n")
    if labels is not None:
        save_labels(labels_path_for(path), labels)
    return path


def load_dataset(path, labels_path=None):
    """Read a dataset file and its optional labels.

    Parameters
    ----------
    path : str or Path
    labels_path : str or Path, optional
        Defaults to :func:`labels_path_for`; a missing default file simply means
        no labels.

    Returns
    -------
    x : ndarray, shape (d, n)
    labels : ndarray of int or None

    Raises
    ------
    ParseError
        With the offending line (and column for non-numeric fields).
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"dataset file not found: {path}")
    rows = []
    width = None
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"expected {width} fields, found {len(row)}", path, lineno)
            vals = []
            for colno, field in enumerate(row, start=1):
                try:
                    v = float(field)
                except ValueError:
                    raise ParseError(f"not a number: {field.strip()!r}", path, lineno, colno) from None
                if not np.isfinite(v):
                    raise ParseError(f"non-finite value {field.strip()!r}", path, lineno, colno)
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ParseError("no samples found", path)
    x = np.array(rows, dtype=np.float64).T

    explicit = labels_path is not None
    lpath = Path(labels_path) if explicit else labels_path_for(path)
    labels = None
    if lpath.is_file():
        labels = load_labels(lpath)
        if labels.size != x.shape[1]:
            raise DataError(f"{lpath}: {labels.size} labels for {x.shape[1]} samples")
    elif explicit:
        raise ConfigError(f"labels file not found: {lpath}")
    return x, labels


def load_labels(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"labels file not found: {path}")
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                v = int(s)
            except ValueError:
                raise ParseError(f"not an integer label: {s!r}", path, lineno) from None
            if v < 0:
                raise ParseError(f"negative label {v}", path, lineno)
            out.append(v)
    return np.array(out, dtype=np.int64)


def save_labels(path, labels):
    labels = getattr(labels, "labels", labels)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for v in np.asarray(labels).ravel():
            fh.write(f"{int(v)}\n")
    return Path(path)


def write_trace(path, trace):
    """Write ``(iteration, normalized objective)`` pairs as CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("iter,normalized_objective\n")
        for it, val in trace:
            fh.write(f"{int(it)},{_fmt(val)}\n")
    return Path(path)


def read_trace(path):
    path = Path(path)
    if path.is_dir():
        path = path / "trace.csv"
    if not path.is_file():
        raise ConfigError(f"trace file not found: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["iter", "normalized_objective"]:
            raise ParseError(f"unexpected header {header}", path, 1)
        out = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, found {len(row)}", path, lineno)
            try:
                out.append((int(row[0]), float(row[1])))
            except ValueError:
                raise ParseError(f"bad trace row {row}", path, lineno) from None
    return out


def read_config(path):
    """Parse a ``key = value`` (or ``key: value``) file into a dict of strings.

    Blank lines and ``#`` comments are skipped; dashes in keys become
    underscores.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            for sep in ("=", ":"):
                if sep in line:
                    key, value = line.split(sep, 1)
                    break
            else:
                raise ConfigError(f"{path}, line {lineno}: expected 'key = value'")
            key = key.strip().replace("-", "_")
            if not key:
                raise ConfigError(f"{path}, line {lineno}: empty key")
            out[key] = value.strip()
    return out
