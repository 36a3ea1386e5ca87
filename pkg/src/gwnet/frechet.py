"""Averages of network collections by gradient flow in tangent space.

One gradient evaluation log-maps every member of the collection onto a
running base: each alignment may expand the base, and the target matrices
collected so far are replicated onto the expanded node set so that at the
end everything lives on one common base. The gradient there is

    g = 2 (omega_base - mean_k omega_target_k)

whose zero is the entrywise arithmetic mean of the aligned members. The
mean iteration steps the base weights along -tau g, with full steps first
(tau = 0.5 turns a two-member average into the midpoint construction) and
Armijo backtracking afterwards.

The compressed variants keep the base size fixed: the aligned difference
is block-averaged over the copies of each base node before it is used,
which also yields fixed-size compressed representatives of large networks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .networks import Coupling, GwnetError, MeasureNetwork
from .gw import GwParams, solve_gw
from .alignment import blow_up, to_vertex_coupling
from .tangent import TangentVector


@dataclass(frozen=True)
class FrechetParams:
    """Knobs for the mean iteration.

    step_rule "full_then_armijo" takes `full_steps` steps of size
    full_step_tau and then backtracks (beta, sigma) from full_step_tau;
    "fixed" always uses full_step_tau. Convergence is declared when the
    relative loss decrease stays below loss_tol for 3 consecutive
    iterations. compress "to_seed_size" block-averages every log map down
    to the seed size so the base never grows. momentum > 0 adds a heavy
    ball term during the full-step phase (0.9 is the usual choice),
    default off. Couplings are recomputed every iteration, warm-started
    from the previous alignment unless warm_start is False.
    """

    max_iters: int = 100
    step_rule: str = "full_then_armijo"
    full_steps: int = 5
    full_step_tau: float = 0.5
    armijo_beta: float = 0.5
    armijo_sigma: float = 1e-4
    loss_tol: float = 1e-8
    compress: str = "none"
    momentum: float = 0.0
    warm_start: bool = True
    gw: GwParams = field(default_factory=GwParams)

    def __post_init__(self):
        if self.step_rule not in ("full_then_armijo", "fixed"):
            raise GwnetError(f"unknown step_rule {self.step_rule!r}")
        if self.compress not in ("none", "to_seed_size"):
            raise GwnetError(f"unknown compress {self.compress!r}")
        if self.max_iters < 1 or self.full_step_tau <= 0 or self.loss_tol <= 0:
            raise GwnetError("parameters must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise GwnetError("momentum must lie in [0, 1)")


def frechet_loss(S: list[MeasureNetwork], Z: MeasureNetwork,
                 params: FrechetParams | None = None) -> float:
    """Mean squared distance from Z to the members of S."""
    if not S:
        raise GwnetError("empty collection")
    params = params or FrechetParams()
    total = 0.0
    for Y in S:
        _, report = solve_gw(Z, Y, params.gw)
        total += report.gw_distance ** 2
    return total / len(S)


def _lift_coupling(C: np.ndarray, source_index, mu_old, mu_new) -> np.ndarray:
    """Carry a coupling on an old base onto its expansion, splitting each
    row's mass across the node's copies in proportion to their measures."""
    idx = np.asarray(source_index)
    return C[idx, :] * (mu_new / mu_old[idx])[:, None]


def _with_given(gw_params: GwParams, start: np.ndarray) -> GwParams:
    # a concrete start replaces multi-start: restarts add nothing but cost
    return GwParams(max_outer_iters=gw_params.max_outer_iters,
                    objective_tol=gw_params.objective_tol,
                    line_search=gw_params.line_search,
                    init_coupling="given", given=start,
                    restarts=0, rng_seed=gw_params.rng_seed)


def _warm_loss(S: list[MeasureNetwork], Z: MeasureNetwork,
               params: FrechetParams, warm: list | None) -> float:
    """frechet_loss with per-member warm starts when available."""
    total = 0.0
    for k, Y in enumerate(S):
        w = warm[k] if warm is not None and k < len(warm) else None
        gwp = _with_given(params.gw, w) if w is not None else params.gw
        _, report = solve_gw(Z, Y, gwp)
        total += report.gw_distance ** 2
    return total / len(S)


@dataclass
class _SequentialLog:
    base: MeasureNetwork          # common base after all alignments
    targets: list                 # aligned member weights on the final base
    distortions: list             # per-member distortion at its coupling
    lift: np.ndarray              # final base node -> seed node index
    couplings: list               # per-member coupling from the final base


def sequential_log(X: MeasureNetwork, S: list[MeasureNetwork],
                   gw_params: GwParams,
                   warm: list | None = None) -> _SequentialLog:
    """Log-map every member of S onto a base that starts at X and grows.

    Earlier members' aligned weights (and any warm-start couplings) are
    replicated onto each expansion so the result is one common base plus
    one aligned weight matrix per member.
    """
    base = X
    targets: list[np.ndarray] = []
    couplings: list = [None] * len(S)
    warm_local: list = list(warm) if warm is not None else [None] * len(S)
    distortions: list[float] = []
    lift = np.arange(X.size)
    for k, Y in enumerate(S):
        start = warm_local[k]
        if start is not None and start.shape == (base.size, Y.size):
            gwp = _with_given(gw_params, start)
        else:
            gwp = gw_params
        coupling, _ = solve_gw(base, Y, gwp)
        coupling = to_vertex_coupling(base, Y, coupling)
        pair = blow_up(base, Y, coupling)
        src = np.array(pair.plan.source_index)
        if pair.size != base.size:
            # an expansion happened: replicate everything collected so far,
            # including warm starts for members not yet processed
            targets = [T[np.ix_(src, src)] for T in targets]
            for i in range(k):
                if couplings[i] is not None:
                    couplings[i] = _lift_coupling(couplings[i], src,
                                                  base.mu, pair.mu_hat)
            for j in range(k + 1, len(S)):
                w = warm_local[j]
                if w is not None and w.shape[0] == base.size:
                    warm_local[j] = _lift_coupling(w, src, base.mu,
                                                   pair.mu_hat)
            lift = lift[src]
        # the member's own coupling from the new base is the diagonal one
        mat = np.zeros((pair.size, Y.size))
        mat[np.arange(pair.size), np.array(pair.plan.target_index)] = pair.mu_hat
        couplings[k] = mat
        targets.append(pair.omega_yhat)
        dis2 = float(pair.mu_hat @ ((pair.omega_xhat - pair.omega_yhat) ** 2)
                     @ pair.mu_hat)
        distortions.append(float(np.sqrt(max(dis2, 0.0))))
        base = pair.base_network()
    return _SequentialLog(base=base, targets=targets, distortions=distortions,
                          lift=lift, couplings=couplings)


@dataclass(frozen=True)
class FrechetGradient:
    gradient: TangentVector       # on the common base
    base: MeasureNetwork
    targets: tuple
    loss: float                   # mean squared distance at the current couplings
    lift: np.ndarray
    couplings: tuple


def frechet_gradient(S: list[MeasureNetwork], X: MeasureNetwork,
                     params: FrechetParams | None = None,
                     warm: list | None = None) -> FrechetGradient:
    """Gradient of the mean squared distance to S at X.

    Zero exactly when the base weights are the entrywise mean of the
    aligned member weights.
    """
    if not S:
        raise GwnetError("empty collection")
    params = params or FrechetParams()
    if params.compress == "to_seed_size":
        vs, distortions, couplings = [], [], []
        for k, Y in enumerate(S):
            start = warm[k] if warm is not None else None
            v, dis, mat = _compress_log(X, Y, params.gw, warm=start)
            vs.append(v)
            distortions.append(dis)
            couplings.append(mat)
        g = -2.0 * np.mean(vs, axis=0)
        loss = float(np.mean([(d / 2.0) ** 2 for d in distortions]))
        return FrechetGradient(gradient=TangentVector(X, g), base=X,
                               targets=tuple(X.omega + v for v in vs),
                               loss=loss, lift=np.arange(X.size),
                               couplings=tuple(couplings))
    seq = sequential_log(X, S, params.gw, warm=warm)
    g = 2.0 * (seq.base.omega - np.mean(seq.targets, axis=0))
    loss = float(np.mean([(d / 2.0) ** 2 for d in seq.distortions]))
    return FrechetGradient(gradient=TangentVector(seq.base, g), base=seq.base,
                           targets=tuple(seq.targets), loss=loss,
                           lift=seq.lift, couplings=tuple(seq.couplings))


@dataclass(frozen=True)
class FrechetResult:
    network: MeasureNetwork
    loss: float
    converged: bool
    iterations: int
    trace: tuple          # (iteration, loss, base_size) rows
    max_iters_exceeded: bool


def _resolve_seed(S, seed, rng_seed: int) -> MeasureNetwork:
    if isinstance(seed, MeasureNetwork):
        return seed
    if seed is None:
        return S[0]
    k = int(seed)
    rng = np.random.default_rng(rng_seed)
    return MeasureNetwork(rng.random((k, k)), np.full(k, 1.0 / k))


def frechet_mean(S: list[MeasureNetwork],
                 params: FrechetParams | None = None,
                 seed: MeasureNetwork | int | None = None,
                 seed_rng: int = 0) -> FrechetResult:
    """Iterative mean of a collection by tangent-space gradient descent.

    seed may be a network, an integer size (a seeded random network of that
    size is used), or None for the first member. Full steps of 0.5 run
    first; each full step lands exactly on the entrywise mean of the
    currently aligned members. Armijo backtracking afterwards never
    increases the loss. Returns the best iterate seen, with converged False
    and max_iters_exceeded True when the loss never settled within
    max_iters.
    """
    if not S:
        raise GwnetError("empty collection")
    params = params or FrechetParams()
    X = _resolve_seed(S, seed, seed_rng)
    warm: list | None = None
    prev_step: np.ndarray | None = None
    trace: list[tuple] = []
    best: tuple[float, MeasureNetwork] | None = None
    loss_prev: float | None = None
    settled = 0
    converged = False
    iterations = 0
    stepped = False

    for it in range(params.max_iters):
        iterations = it + 1
        grad = frechet_gradient(S, X, params,
                                warm=warm if params.warm_start else None)
        loss, base, g = grad.loss, grad.base, grad.gradient.f
        warm = list(grad.couplings)
        trace.append((it, loss, base.size))
        stepped = False
        if best is None or loss < best[0]:
            best = (loss, base)
        if loss_prev is not None:
            rel = (loss_prev - loss) / max(abs(loss_prev), 1e-16)
            settled = settled + 1 if rel < params.loss_tol else 0
            if settled >= 3:
                converged = True
                break
        loss_prev = loss

        if params.step_rule == "fixed" or it < params.full_steps:
            tau = params.full_step_tau
            step = -tau * g
            if params.momentum > 0 and prev_step is not None \
                    and prev_step.shape[0] == X.size:
                step = step + params.momentum * \
                    prev_step[np.ix_(grad.lift, grad.lift)]
        else:
            # pure gradient backtracking; sufficient decrease in the
            # weighted norm of g, never accepts an increase
            mu = base.mu
            gnorm2 = float(mu @ (g * g) @ mu)
            tau = params.full_step_tau
            backtracks = 0
            while backtracks < 20 and \
                    _warm_loss(S, base.with_omega(base.omega - tau * g),
                               params, warm) > \
                    loss - params.armijo_sigma * tau * gnorm2:
                tau *= params.armijo_beta
                backtracks += 1
            if backtracks >= 20:
                # no step this small still decreases: stationary in practice
                converged = True
                break
            step = -tau * g
        X = base.with_omega(base.omega + step)
        prev_step = step
        stepped = True

    if stepped:
        # the final step was never evaluated; record it
        grad = frechet_gradient(S, X, params,
                                warm=warm if params.warm_start else None)
        trace.append((iterations, grad.loss, grad.base.size))
        if grad.loss < best[0]:
            best = (grad.loss, grad.base)
    return FrechetResult(network=best[1], loss=best[0], converged=converged,
                         iterations=iterations, trace=tuple(trace),
                         max_iters_exceeded=not converged)


def _compress_log(X: MeasureNetwork, Y: MeasureNetwork,
                  gw_params: GwParams, coupling: Coupling | None = None,
                  warm: np.ndarray | None = None
                  ) -> tuple[np.ndarray, float, np.ndarray]:
    if coupling is None:
        gwp = gw_params
        if warm is not None and warm.shape == (X.size, Y.size):
            gwp = _with_given(gw_params, warm)
        coupling, _ = solve_gw(X, Y, gwp)
    coupling = to_vertex_coupling(X, Y, coupling)
    pair = blow_up(X, Y, coupling)
    src = np.array(pair.plan.source_index)
    u = np.array(pair.plan.u, dtype=float)
    P = np.zeros((X.size, pair.size))
    P[src, np.arange(pair.size)] = 1.0
    P /= u[:, None]
    f = pair.omega_yhat - pair.omega_xhat
    v = P @ f @ P.T
    dis2 = float(pair.mu_hat @ (f ** 2) @ pair.mu_hat)
    return v, float(np.sqrt(max(dis2, 0.0))), coupling.matrix


def compress_log(X: MeasureNetwork, Y: MeasureNetwork,
                 params: FrechetParams | None = None,
                 coupling: Coupling | None = None) -> np.ndarray:
    """Size-|X| compression of the aligned difference between Y and X.

    Aligns Y to X, then averages the difference matrix over the copies of
    each X node (plain average over the u_x * u_x' copy pairs). Adding the
    result to omega_X gives a |X|-node compressed representative of Y.
    """
    params = params or FrechetParams()
    v, _, _ = _compress_log(X, Y, params.gw, coupling)
    return v


def compressed_average(X: MeasureNetwork, Y: MeasureNetwork,
                       params: FrechetParams | None = None) -> MeasureNetwork:
    """Average of X and the compressed representative of Y, at X's size.

    Returns (X, omega_X + v/2, mu_X) where v = compress_log(X, Y). No
    expansion takes place.
    """
    params = params or FrechetParams()
    v, _, _ = _compress_log(X, Y, params.gw)
    return X.with_omega(X.omega + 0.5 * v)
