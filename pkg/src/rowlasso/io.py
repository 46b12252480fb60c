"""CSV input and JSON path output for the command-line tools.

CSV files are comma-separated with ``.`` decimals; a single leading header row
is auto-detected (any cell that does not parse as a number).  Parse failures
report 1-based row and column positions.

A fitted path serializes to JSON as

    {"family": ..., "alpha": ..., "lambdas": [...], "fits": [
        {"lambda": ..., "intercept": [M floats], "coef": {"k": [M floats]},
         "n_active": ..., "iterations": ..., "kkt_max_violation": ...,
         "converged": ...}]}

where ``coef`` holds only the nonzero coefficient rows, keyed by 0-based row
index, so wide designs stay small on disk.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .core import MULTINOMIAL, CoefficientMatrix, ResponseMatrix


class InputError(ValueError):
    """Malformed input data; the message carries file/row/column context."""


def _parse_cell(text):
    try:
        return float(text)
    except ValueError:
        return None


def read_matrix_csv(path):
    """Read a numeric matrix from a CSV file, skipping one optional header row."""
    with open(path, newline="") as handle:
        rows = [row for row in csv.reader(handle) if row and any(c.strip() for c in row)]
    if not rows:
        raise InputError(f"{path}: file contains no data")

    start = 0
    first = [_parse_cell(cell.strip()) for cell in rows[0]]
    if any(value is None for value in first):
        start = 1
        if len(rows) == 1:
            raise InputError(f"{path}: only a header row, no data")

    width = len(rows[start])
    data = np.empty((len(rows) - start, width))
    for i, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise InputError(f"{path}: row {i} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row, start=1):
            value = _parse_cell(cell.strip())
            if value is None:
                raise InputError(
                    f"{path}: row {i}, column {j}: could not parse {cell.strip()!r} as a number"
                )
            data[i - start - 1, j - 1] = value
    return data


def read_response_csv(path, family):
    """Read a response for the given family.

    Multinomial input is either an n x M one-hot matrix or a single column of
    integer class labels 1..M.
    """
    values = read_matrix_csv(path)
    if family != MULTINOMIAL:
        return ResponseMatrix(values, family)
    try:
        if values.shape[1] == 1:
            return ResponseMatrix.from_labels(values[:, 0])
        return ResponseMatrix(values, MULTINOMIAL)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def path_fit_to_dict(fit):
    """JSON-ready dictionary for a fitted path (schema in the module docstring)."""
    entries = []
    for point in fit.points:
        beta = point.coef.beta
        nonzero = np.flatnonzero(np.einsum("ij,ij->i", beta, beta))
        entries.append({
            "lambda": float(point.lam),
            "intercept": [float(v) for v in point.coef.intercept],
            "coef": {str(int(k)): [float(v) for v in beta[k]] for k in nonzero},
            "n_active": int(point.n_active),
            "iterations": int(point.iterations),
            "kkt_max_violation": float(point.kkt_max_violation),
            "converged": bool(point.converged),
        })
    return {
        "family": fit.family,
        "alpha": float(fit.alpha),
        "lambdas": [float(v) for v in fit.lambdas],
        "fits": entries,
    }


def write_path_json(fit, path):
    with open(path, "w") as handle:
        json.dump(path_fit_to_dict(fit), handle, indent=1)
        handle.write("\n")


def read_path_json(path):
    with open(path) as handle:
        return json.load(handle)


def coefficients_from_entry(entry, n_features):
    """Rebuild a CoefficientMatrix from one ``fits`` entry of the JSON output."""
    intercept = np.asarray(entry["intercept"], dtype=float)
    beta = np.zeros((n_features, intercept.size))
    for key, row in entry["coef"].items():
        beta[int(key)] = row
    return CoefficientMatrix(beta, intercept)
