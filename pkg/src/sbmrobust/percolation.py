"""Site percolation on block-model ensembles in the infinite-size limit.

Nodes are removed blockwise: a fraction ``phi[r]`` of block ``r`` survives.
The probabilities ``u[r]`` that an edge leaving a block-``r`` node does not
lead to the giant component solve

    u_r = sum_s m_rs [1 - phi_s + phi_s g1_s(u_s)],

and the giant component is ``S = sum_s n_s phi_s [1 - g0_s(u_s)]``.
Robustness is ``R = 2 * int_0^1 S(q) dq``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np
from scipy.integrate import simpson

from .blockmodel import BlockModel, g0, mixing_matrix

FIXED_POINT_TOL = 1e-12
MAX_ITERATIONS = 10**6
BISECTION_TOL = 1e-12
X_MIN = 1e-15
DEFAULT_GRID = 201


class RemovalSchedule(enum.Enum):
    RANDOM = "random"
    TARGETED = "targeted"

    @classmethod
    def parse(cls, value) -> "RemovalSchedule":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class ConvergenceError(ArithmeticError):
    """The fixed-point iteration hit its cap before converging."""

    def __init__(self, message, residual, q=None):
        super().__init__(message)
        self.residual = residual
        self.q = q


@dataclass(frozen=True)
class PhiVector:
    """Per-block survival fractions after removing a fraction ``q`` of nodes."""

    phi: np.ndarray
    q: float


@dataclass(frozen=True)
class SCurve:
    q_grid: np.ndarray
    s_values: np.ndarray
    robustness: float

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("q,S\n")
            for q, s in zip(self.q_grid, self.s_values):
                fh.write(f"{float(q)!r},{float(s)!r}\n")


# -- compiled kernels ---------------------------------------------------------


@numba.njit(cache=True)
def _targeted_x(n, kappas, q):
    # root of 1 - q - sum_r n_r exp(-kappa_r (1-x)/x); decreasing in x
    lo = X_MIN
    hi = 1.0
    best_x = hi
    best_res = np.inf
    for _ in range(200):
        x = 0.5 * (lo + hi)
        t = (1.0 - x) / x
        acc = 0.0
        for r in range(n.size):
            acc += n[r] * np.exp(-kappas[r] * t)
        res = 1.0 - q - acc
        if abs(res) < best_res:
            best_res = abs(res)
            best_x = x
        if abs(res) < BISECTION_TOL:
            break
        if res > 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= 2.2e-16 * hi:
            break
    return best_x


@numba.njit(cache=True)
def _targeted_phi(n, kappas, q):
    phi = np.empty(n.size)
    if q <= 0.0:
        phi[:] = 1.0
        return phi
    if q >= 1.0:
        phi[:] = 0.0
        return phi
    x = _targeted_x(n, kappas, q)
    t = (1.0 - x) / x
    for r in range(n.size):
        phi[r] = np.exp(-kappas[r] * t)
    return phi


@numba.njit(cache=True)
def _iterate(m, phi, c, u, tol, max_iter):
    """Plain fixed-point iteration in place; returns (iterations, last change)."""
    B = u.size
    new = np.empty(B)
    h = np.empty(B)
    change = np.inf
    it = 0
    while it < max_iter:
        # 1 - F_r(u) = sum_s m_rs phi_s (1 - g1_s(u_s)); rows of m sum to one
        for s in range(B):
            h[s] = -phi[s] * np.expm1(c[s] * (u[s] - 1.0))
        change = 0.0
        for r in range(B):
            acc = 0.0
            for s in range(B):
                acc += m[r, s] * h[s]
            acc = 1.0 - acc
            if acc < 0.0:
                acc = 0.0
            d = abs(acc - u[r])
            if d > change:
                change = d
            new[r] = acc
        u[:] = new
        it += 1
        if change < tol:
            break
    return it, change


@numba.njit(cache=True)
def _giant(n, phi, c, u):
    S = 0.0
    for s in range(n.size):
        # 1 - g0(c, u) with g0 = e^{c(u-1)} (1 - e^{-cu}) / (1 - e^{-c})
        g = np.exp(c[s] * (u[s] - 1.0)) * np.expm1(-c[s] * u[s]) / np.expm1(-c[s])
        S += n[s] * phi[s] * (1.0 - g)
    return S


@numba.njit(cache=True)
def _curve(n, kappas, c, m, q_grid, targeted, uniform, tol, max_iter):
    """S on the grid; warm-starts each q from the previous least fixed point.

    Returns (S, status, residual) where status is -1 on success or the grid
    index at which the iteration cap was hit.
    """
    B = n.size
    S = np.zeros(q_grid.size)
    u = np.zeros(B)
    for i in range(q_grid.size):
        q = q_grid[i]
        if q >= 1.0:
            S[i] = 0.0
            u[:] = 1.0
            continue
        if targeted and not uniform:
            phi = _targeted_phi(n, kappas, q)
        else:
            phi = np.full(B, 1.0 - q)
        it, change = _iterate(m, phi, c, u, tol, max_iter)
        if change >= tol:
            return S, i, change
        S[i] = _giant(n, phi, c, u)
    return S, -1, 0.0


# -- public operations --------------------------------------------------------


def _uniform_degrees(model: BlockModel) -> bool:
    k = model.block_degrees
    return bool(np.ptp(k) <= 1e-12 * np.max(k))


def phi_for(model: BlockModel, schedule, q: float) -> PhiVector:
    """Survival fractions of every block after removing a fraction ``q``.

    Random removal keeps ``1 - q`` of every block. Targeted removal keeps
    ``exp(-kappa_r (1 - x) / x)`` with ``x`` fixed by the total removed
    fraction; when all block degrees coincide this is again ``1 - q``.
    """
    schedule = RemovalSchedule.parse(schedule)
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    if schedule is RemovalSchedule.RANDOM or _uniform_degrees(model):
        phi = np.full(model.B, 1.0 - q)
    else:
        phi = _targeted_phi(model.n, model.block_degrees, q)
    return PhiVector(phi, q)


def targeted_root(model: BlockModel, q: float) -> float:
    """Root ``x*`` of the targeted-removal normalization (1 at ``q = 0``)."""
    if q <= 0.0:
        return 1.0
    if q >= 1.0:
        return 0.0
    return float(_targeted_x(model.n, model.block_degrees, float(q)))


def self_consistency_map(model: BlockModel, phi: PhiVector, u) -> np.ndarray:
    """One application of the self-consistency map to ``u``."""
    m = mixing_matrix(model)
    c = model.poisson_params
    h = -np.asarray(phi.phi) * np.expm1(c * (np.asarray(u, dtype=float) - 1.0))
    return 1.0 - m @ h


def solve_u(
    model: BlockModel,
    phi: PhiVector,
    tol: float = FIXED_POINT_TOL,
    max_iter: int = MAX_ITERATIONS,
    u0=None,
) -> np.ndarray:
    """Least fixed point of the self-consistency map.

    Iterates from ``u = 0`` (or from ``u0``, which must lie below the least
    fixed point) until the max-norm change drops below ``tol``.

    Raises
    ------
    ConvergenceError
        If ``max_iter`` iterations do not reach ``tol``.
    """
    u = np.zeros(model.B) if u0 is None else np.array(u0, dtype=float)
    _, change = _iterate(
        mixing_matrix(model), np.asarray(phi.phi, dtype=float), model.poisson_params, u, tol, max_iter
    )
    if change >= tol:
        raise ConvergenceError(
            f"self-consistency iteration did not converge in {max_iter} steps "
            f"(last change {change:.3e})",
            change,
            phi.q,
        )
    return u


def giant_component(model: BlockModel, phi: PhiVector, u=None) -> float:
    """Fraction of all nodes in the giant component for survival ``phi``."""
    if u is None:
        u = solve_u(model, phi)
    phi_arr = np.asarray(phi.phi, dtype=float)
    return float(np.sum(model.n * phi_arr * (1.0 - g0(model.poisson_params, u))))


def s_curve(model: BlockModel, schedule, grid_size: int = DEFAULT_GRID) -> SCurve:
    """Sample ``S(q)`` on a uniform grid and integrate it to ``R``.

    ``grid_size`` must be odd and at least 3 (composite Simpson rule).
    """
    if grid_size < 3 or grid_size % 2 == 0:
        raise ValueError(f"grid_size must be odd and >= 3, got {grid_size}")
    schedule = RemovalSchedule.parse(schedule)
    q_grid = np.linspace(0.0, 1.0, grid_size)
    S, status, residual = _curve(
        model.n,
        model.block_degrees,
        model.poisson_params,
        mixing_matrix(model),
        q_grid,
        schedule is RemovalSchedule.TARGETED,
        _uniform_degrees(model),
        FIXED_POINT_TOL,
        MAX_ITERATIONS,
    )
    if status >= 0:
        q = float(q_grid[status])
        raise ConvergenceError(
            f"self-consistency iteration did not converge at q={q!r} "
            f"(last change {residual:.3e})",
            residual,
            q,
        )
    R = float(2.0 * simpson(S, x=q_grid))
    return SCurve(q_grid, S, min(max(R, 0.0), 1.0))


def robustness_pair(model: BlockModel, grid_size: int = DEFAULT_GRID) -> tuple[float, float]:
    """``(R_targeted, R_random)`` on a common grid."""
    random = s_curve(model, RemovalSchedule.RANDOM, grid_size).robustness
    if _uniform_degrees(model):
        return random, random
    targeted = s_curve(model, RemovalSchedule.TARGETED, grid_size).robustness
    return targeted, random


def write_robustness_pair(pair, path) -> None:
    with open(path, "w") as fh:
        fh.write("R_targeted,R_random\n")
        fh.write(f"{pair[0]!r},{pair[1]!r}\n")
