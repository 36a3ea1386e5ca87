"""Core domain types: measure networks, couplings, solve reports, file I/O.

A measure network is a square real weight matrix (possibly asymmetric, any
sign, any diagonal) together with a fully supported probability vector over
its nodes. All downstream machinery (distances, geodesics, tangent vectors,
means) operates on these two arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

PROB_TOL = 1e-9
MARGINAL_TOL = 1e-8


class GwnetError(ValueError):
    """Base class for validation and computation errors in this package."""


class NonSquareError(GwnetError):
    pass


class NonProbabilityError(GwnetError):
    pass


class NonFiniteEntryError(GwnetError):
    pass


class DimensionMismatchError(GwnetError):
    pass


class ParseError(GwnetError):
    pass


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class MeasureNetwork:
    """A weighted network with a probability measure on its nodes.

    omega is the n x n weight matrix, mu the length-n node measure. Entries
    of mu must be strictly positive and sum to 1 within PROB_TOL; the stored
    mu is renormalized to sum exactly to 1 so that marginal constraints
    downstream do not accumulate error. Arrays are stored read-only.
    """

    omega: np.ndarray
    mu: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if omega.ndim != 2 or omega.shape[0] != omega.shape[1] or omega.shape[0] < 1:
            raise NonSquareError(f"omega must be square, got shape {omega.shape}")
        n = omega.shape[0]
        if mu.shape != (n,):
            raise NonProbabilityError(
                f"mu must have length {n}, got shape {mu.shape}")
        if not np.all(np.isfinite(omega)):
            raise NonFiniteEntryError("omega contains non-finite entries")
        if not np.all(np.isfinite(mu)):
            raise NonFiniteEntryError("mu contains non-finite entries")
        if np.any(mu <= 0):
            raise NonProbabilityError("mu entries must be strictly positive")
        total = float(mu.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise NonProbabilityError(f"mu sums to {total}, expected 1")
        object.__setattr__(self, "omega", _freeze(omega))
        object.__setattr__(self, "mu", _freeze(mu / total))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise GwnetError(f"expected {n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.omega.shape[0]

    def with_omega(self, omega: np.ndarray) -> "MeasureNetwork":
        """Same nodes and measure, new weights."""
        return MeasureNetwork(omega, self.mu, self.labels)


def validate_network(omega, mu, labels=None) -> MeasureNetwork:
    """Validate raw arrays and return a MeasureNetwork.

    Raises NonSquareError, NonProbabilityError or NonFiniteEntryError when
    the input does not describe a measure network.
    """
    return MeasureNetwork(omega, mu, labels)


def uniform_network(omega, labels=None) -> MeasureNetwork:
    """Network with the uniform measure on its nodes."""
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise NonSquareError(f"omega must be square, got shape {omega.shape}")
    n = omega.shape[0]
    return MeasureNetwork(omega, np.full(n, 1.0 / n), labels)


@dataclass(frozen=True)
class Coupling:
    """A nonnegative matrix with prescribed row and column marginals.

    Row sums must match row_marginal and column sums col_marginal within
    MARGINAL_TOL per entry. Couplings are the soft node matchings over
    which the distance is optimized.
    """

    matrix: np.ndarray
    row_marginal: np.ndarray
    col_marginal: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        p = np.asarray(self.row_marginal, dtype=float)
        q = np.asarray(self.col_marginal, dtype=float)
        if matrix.ndim != 2 or matrix.shape != (p.shape[0], q.shape[0]):
            raise DimensionMismatchError(
                f"matrix shape {matrix.shape} does not match marginals "
                f"({p.shape[0]}, {q.shape[0]})")
        if not np.all(np.isfinite(matrix)):
            raise NonFiniteEntryError("coupling contains non-finite entries")
        if matrix.min(initial=0.0) < 0:
            raise GwnetError("coupling entries must be nonnegative")
        if np.max(np.abs(matrix.sum(axis=1) - p)) > MARGINAL_TOL:
            raise GwnetError("row sums do not match the row marginal")
        if np.max(np.abs(matrix.sum(axis=0) - q)) > MARGINAL_TOL:
            raise GwnetError("column sums do not match the column marginal")
        object.__setattr__(self, "matrix", _freeze(matrix))
        object.__setattr__(self, "row_marginal", _freeze(p))
        object.__setattr__(self, "col_marginal", _freeze(q))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a distance solve.

    cost is the distortion at the returned coupling and gw_distance is
    cost / 2. The objective trace records the squared distortion per outer
    iteration of the winning start and is non-increasing up to 1e-12.
    """

    cost: float
    gw_distance: float
    iterations: int
    converged: bool
    objective_trace: tuple[float, ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# File formats.
#
# json: {"omega": [[...]], "mu": [...], "labels": [...]?}
# csv:  first line "mu,v1,...,vn", then n comma-separated omega rows.
# ---------------------------------------------------------------------------

def _format_for(path: str, format: str | None) -> str:
    if format is not None:
        if format not in ("json", "csv"):
            raise ParseError(f"unknown format {format!r}")
        return format
    if str(path).endswith(".csv"):
        return "csv"
    return "json"


def network_to_dict(net: MeasureNetwork) -> dict:
    d = {"omega": net.omega.tolist(), "mu": net.mu.tolist()}
    if net.labels is not None:
        d["labels"] = list(net.labels)
    return d


def network_from_dict(d: dict) -> MeasureNetwork:
    if not isinstance(d, dict) or "omega" not in d or "mu" not in d:
        raise ParseError("network object needs 'omega' and 'mu' fields")
    try:
        omega = np.array(d["omega"], dtype=float)
        mu = np.array(d["mu"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric network data: {exc}") from exc
    return MeasureNetwork(omega, mu, d.get("labels"))


def write_network(net: MeasureNetwork, path, format: str | None = None) -> None:
    """Write a network to path as json or csv (inferred from the extension)."""
    fmt = _format_for(path, format)
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(network_to_dict(net), fh)
            fh.write("\n")
    else:
        # repr of a python float round-trips exactly
        lines = ["mu," + ",".join(repr(float(x)) for x in net.mu)]
        lines += [",".join(repr(float(x)) for x in row)
                  for row in net.omega]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def read_network(path, format: str | None = None) -> MeasureNetwork:
    """Read a network written by write_network. Raises ParseError on bad content."""
    fmt = _format_for(path, format)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "json":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid json: {exc}") from exc
        return network_from_dict(d)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("mu,"):
        raise ParseError("csv network must start with a 'mu,...' line")
    try:
        mu = np.array([float(x) for x in lines[0].split(",")[1:]], dtype=float)
        omega = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]],
                         dtype=float)
    except ValueError as exc:
        raise ParseError(f"non-numeric csv entry: {exc}") from exc
    if omega.size == 0:
        raise ParseError("csv network has no omega rows")
    return MeasureNetwork(omega, mu)
