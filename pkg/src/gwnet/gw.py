"""Distance computation between measure networks.

The squared distortion of a coupling C is the four-index sum

    dis(C)^2 = sum_{i,j,k,l} (X_ik - Y_jl)^2 C_ij C_kl

and the distance between networks is half the infimum of dis over the
coupling polytope. distortion_tensor evaluates the sum literally (testing
reference, O(n^2 m^2)); everything else uses the equivalent matrix form

    dis(C)^2 = <p, X.^2 p> + <q, Y.^2 q> - 2 <C, X C Y^T>

which costs O(n^2 m + n m^2). The solver is Frank-Wolfe over the polytope:
linearize at C, send the gradient to the exact transport subsolver, then
take the exact minimizer of the 1-D quadratic along the segment toward the
returned vertex. Weight matrices may be asymmetric, so the gradient is
(A + A*) C with A* the adjoint of the coupling-to-coupling operator A.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .networks import (Coupling, DimensionMismatchError, GwnetError,
                       MeasureNetwork, SolveReport)
from .linear_ot import OtProblem, solve_linear_ot


class NegativeRadicandError(GwnetError):
    pass


@dataclass(frozen=True)
class GwParams:
    """Knobs for the outer solver.

    line_search "exact_quadratic" minimizes the restricted quadratic in
    closed form; "armijo" backtracks from a full step instead. init_coupling
    is "product", "identity_block" (northwest-corner vertex in natural node
    order, the diagonal when the marginals agree) or "given" with the start
    supplied in `given`. restarts adds that many extra starts from seeded
    random vertices; the best final objective wins.
    """

    max_outer_iters: int = 200
    objective_tol: float = 1e-9
    line_search: str = "exact_quadratic"
    init_coupling: str = "product"
    given: np.ndarray | None = None
    restarts: int = 0
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_outer_iters < 1:
            raise GwnetError("max_outer_iters must be at least 1")
        if self.objective_tol <= 0:
            raise GwnetError("objective_tol must be positive")
        if self.line_search not in ("exact_quadratic", "armijo"):
            raise GwnetError(f"unknown line_search {self.line_search!r}")
        if self.init_coupling not in ("product", "identity_block", "given"):
            raise GwnetError(f"unknown init_coupling {self.init_coupling!r}")
        if self.init_coupling == "given" and self.given is None:
            raise GwnetError("init_coupling 'given' needs the `given` matrix")
        if self.restarts < 0:
            raise GwnetError("restarts must be nonnegative")


def _check_shapes(X: MeasureNetwork, Y: MeasureNetwork, C: np.ndarray):
    if C.shape != (X.size, Y.size):
        raise DimensionMismatchError(
            f"coupling shape {C.shape} does not match networks "
            f"({X.size}, {Y.size})")


def _as_matrix(C) -> np.ndarray:
    return C.matrix if isinstance(C, Coupling) else np.asarray(C, dtype=float)


def distortion_tensor(X: MeasureNetwork, Y: MeasureNetwork, C) -> float:
    """Distortion of C by explicit four-index summation. Reference path."""
    C = _as_matrix(C)
    _check_shapes(X, Y, C)
    L = (X.omega[:, None, :, None] - Y.omega[None, :, None, :]) ** 2
    dis2 = float(np.einsum("ijkl,ij,kl->", L, C, C))
    return float(np.sqrt(max(dis2, 0.0)))


def _quadratic_value(X: np.ndarray, Y: np.ndarray, C: np.ndarray) -> float:
    """<A C, C> evaluated in matrix form, valid for any C (marginals taken from C)."""
    r = C.sum(axis=1)
    c = C.sum(axis=0)
    return float(r @ (X**2) @ r + c @ (Y**2) @ c
                 - 2.0 * np.sum(C * (X @ C @ Y.T)))


def distortion_matrix(X: MeasureNetwork, Y: MeasureNetwork, C) -> float:
    """Distortion of a coupling of (mu_X, mu_Y) via the matrix identity.

    A radicand within a relative tolerance below zero is clamped (seen when
    the two quadratic terms cancel at scale); anything more negative raises
    NegativeRadicandError.
    """
    C = _as_matrix(C)
    _check_shapes(X, Y, C)
    p, q = X.mu, Y.mu
    const = float(p @ (X.omega**2) @ p + q @ (Y.omega**2) @ q)
    dis2 = const - 2.0 * float(np.sum(C * (X.omega @ C @ Y.omega.T)))
    if dis2 < 0:
        if dis2 >= -1e-12 * max(1.0, const):
            dis2 = 0.0
        else:
            raise NegativeRadicandError(f"squared distortion {dis2} < 0")
    return float(np.sqrt(dis2))


def _apply(X: np.ndarray, Y: np.ndarray, C: np.ndarray) -> np.ndarray:
    """A C, the linearization of the squared distortion at C."""
    r = C.sum(axis=1)
    c = C.sum(axis=0)
    return (X**2 @ r)[:, None] + (Y**2 @ c)[None, :] - 2.0 * X @ C @ Y.T


def _apply_adjoint(X: np.ndarray, Y: np.ndarray, D: np.ndarray) -> np.ndarray:
    """A* D, so that <A C, D> = <C, A* D> for all C, D."""
    r = D.sum(axis=1)
    c = D.sum(axis=0)
    return (X.T**2 @ r)[:, None] + (Y.T**2 @ c)[None, :] - 2.0 * X.T @ D @ Y


def gw_gradient(X: MeasureNetwork, Y: MeasureNetwork, C) -> np.ndarray:
    """Gradient of C -> <A C, C>, i.e. (A + A*) C.

    For symmetric weight matrices this reduces to 2 A C; for asymmetric
    ones the adjoint term differs and matters.
    """
    C = _as_matrix(C)
    _check_shapes(X, Y, C)
    return _apply(X.omega, Y.omega, C) + _apply_adjoint(X.omega, Y.omega, C)


def northwest_corner(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Northwest-corner vertex of the transportation polytope."""
    n, m = len(p), len(q)
    out = np.zeros((n, m))
    rp = p.astype(float).copy()
    cq = q.astype(float).copy()
    i = j = 0
    while i < n and j < m:
        t = min(rp[i], cq[j])
        out[i, j] = t
        rp[i] -= t
        cq[j] -= t
        # on ties advance the row; the column is finished by a later row
        if rp[i] <= cq[j]:
            i += 1
        else:
            j += 1
    return out


def random_vertex(p: np.ndarray, q: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random vertex: northwest corner under a random node order on both sides."""
    sigma = rng.permutation(len(p))
    tau = rng.permutation(len(q))
    nw = northwest_corner(p[sigma], q[tau])
    out = np.zeros_like(nw)
    out[np.ix_(sigma, tau)] = nw
    return out


def _initial_couplings(X, Y, params: GwParams) -> list[np.ndarray]:
    p, q = X.mu, Y.mu
    if params.init_coupling == "product":
        starts = [np.outer(p, q)]
    elif params.init_coupling == "identity_block":
        if X.size != Y.size:
            raise GwnetError(
                "identity_block initialization needs same-size networks; "
                f"got {X.size} and {Y.size}")
        starts = [northwest_corner(p, q)]
    else:
        given = np.asarray(params.given, dtype=float)
        _check_shapes(X, Y, given)
        starts = [given]
    rng = np.random.default_rng(params.rng_seed)
    starts += [random_vertex(p, q, rng) for _ in range(params.restarts)]
    return starts


def _line_step(a: float, b: float) -> float:
    """Minimizer over [0,1] of t -> a t^2 + b t."""
    if a > 0:
        return min(1.0, max(0.0, -b / (2.0 * a)))
    return 1.0 if a + b < 0 else 0.0


def solve_gw(X: MeasureNetwork, Y: MeasureNetwork,
             params: GwParams | None = None) -> tuple[Coupling, SolveReport]:
    """Locally optimal coupling between X and Y by Frank-Wolfe.

    Each outer iteration solves the exact linear transport problem with the
    current gradient as cost, then minimizes the objective on the segment
    toward the returned vertex. The objective trace is non-increasing; the
    reported distance is an upper bound on the true one, tight when a global
    minimizer is found. With restarts > 0, extra seeded random-vertex starts
    are run and the best final objective wins.
    """
    params = params or GwParams()
    A, B = X.omega, Y.omega
    p, q = X.mu, Y.mu
    const = float(p @ (A**2) @ p + q @ (B**2) @ q)

    def objective(C: np.ndarray) -> float:
        return const - 2.0 * float(np.sum(C * (A @ C @ B.T)))

    best = None
    for C0 in _initial_couplings(X, Y, params):
        C = C0.copy()
        J = objective(C)
        trace = [J]
        converged = False
        for _ in range(params.max_outer_iters):
            G = _apply(A, B, C) + _apply_adjoint(A, B, C)
            V, _ = solve_linear_ot(OtProblem(G, p, q))
            D = V.matrix - C
            b = float(np.sum(G * D))
            # D has zero marginals, so <A D, D> has no marginal terms
            a = -2.0 * float(np.sum(D * (A @ D @ B.T)))
            if params.line_search == "exact_quadratic":
                t = _line_step(a, b)
            else:
                t = 1.0
                while t > 1e-12 and objective(C + t * D) > J + 1e-4 * t * b:
                    t *= 0.5
            if t <= 0.0:
                converged = True
                break
            C = C + t * D
            J_new = objective(C)
            decrease = J - J_new
            J = J_new
            trace.append(J)
            if decrease <= params.objective_tol * max(abs(J), 1e-16):
                converged = True
                break
        if best is None or J < best[1]:
            best = (C, J, trace, converged)

    C, J, trace, converged = best
    C = np.maximum(C, 0.0)
    dis = float(np.sqrt(max(J, 0.0)))
    report = SolveReport(cost=dis, gw_distance=dis / 2.0,
                         iterations=len(trace) - 1, converged=converged,
                         objective_trace=tuple(trace))
    return Coupling(C, p, q), report


def gw_distance(X: MeasureNetwork, Y: MeasureNetwork,
                params: GwParams | None = None) -> float:
    """Convenience wrapper returning only the distance estimate."""
    _, report = solve_gw(X, Y, params)
    return report.gw_distance
