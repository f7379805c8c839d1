"""Quasi-Newton traveling-wave solves and amplitude continuation.

The traveling-wave residual of an odd-parity profile is even on the grid,
so the discrete system pairs the cosine modes of the residual (mean
included) with the sine coefficients of theta plus the two scalars (beta,
alpha).  The sine mode at the Nyquist frequency vanishes identically on
the collocation grid and is therefore not an unknown; the corresponding
cosine equation is dropped from the square solve and monitored through
the max-norm of the grid residual instead.  Amplitude is pinned by
theta at the frozen argmax index of the current guess.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg

from . import geometry, spectral
from .bifurcation import asymptotic_guess
from .errors import (
    BranchStartError,
    ConvergenceError,
    DegenerateFrontError,
    SingularSystemError,
)
from .model import ModelKind, WaveParams, length_from_theta, residual

__all__ = [
    "SolveConfig",
    "WaveSolution",
    "BranchRecord",
    "assemble_system",
    "quasi_newton_solve",
    "continue_branch",
    "flat_solution",
    "residual_at_resolution",
]

_PIVOT_FLOOR = 1e-14
_MAX_STEP_HALVINGS = 4
_ALPHA_WELL_POSED = -3.0

Termination = Literal[
    "self-intersection",
    "alpha-threshold",
    "iteration-failure",
    "max-amplitude-reached",
]


@dataclass(frozen=True)
class SolveConfig:
    """Discretization and iteration budget of one quasi-Newton solve."""

    nx: int = 256
    tol_residual: float = 1e-10
    max_iters: int = 50
    fd_step: float = 1e-7
    jacobian_mode: Literal["finite-difference-full", "broyden-update"] = (
        "finite-difference-full"
    )

    def __post_init__(self):
        spectral.grid(self.nx)
        if self.tol_residual <= 0.0:
            raise ValueError(f"tol_residual must be positive, got {self.tol_residual!r}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters!r}")
        if self.fd_step <= 0.0:
            raise ValueError(f"fd_step must be positive, got {self.fd_step!r}")
        if self.jacobian_mode not in ("finite-difference-full", "broyden-update"):
            raise ValueError(f"unknown jacobian_mode {self.jacobian_mode!r}")


@dataclass(frozen=True, eq=False)
class WaveSolution:
    """A converged traveling wave with its branch bookkeeping."""

    theta: spectral.ThetaProfile
    alpha: float
    beta: float
    length: float
    amplitude: float
    residual_norm: float
    k0: int
    kind: ModelKind
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class BranchRecord:
    """Ordered continuation output plus the reason the march stopped."""

    kind: ModelKind
    k0: int
    solutions: tuple
    termination: Termination

    @property
    def amplitudes(self):
        return np.array([s.amplitude for s in self.solutions])


def _rebuild(x, nx):
    """Profile and parameters from the unknown vector [b_1.., beta, alpha]."""
    p = spectral.from_sine_coeffs(x[:-2], nx)
    beta, alpha = float(x[-2]), float(x[-1])
    return p, WaveParams(alpha=alpha, beta=beta, length=length_from_theta(p))


def _pack(sol):
    return np.concatenate(
        [spectral.sine_coeffs(sol.theta), [sol.beta, sol.alpha]]
    )


def _residual_cosine_modes(p, params, kind):
    r = residual(p, params, kind)
    rp = spectral.ThetaProfile.from_values(r, allow_small=True)
    return spectral.cosine_coeffs(rp), float(np.max(np.abs(r)))


def assemble_system(p, beta, alpha, target_h, kind, amp_index=None):
    """Stacked traveling-wave equations for one profile.

    Returns the nx/2 + 2 vector of residual cosine coefficients for
    wavenumbers 0..nx/2 followed by the amplitude pin
    (theta at the argmax, or at amp_index when given) minus target_h.
    """
    params = WaveParams(alpha=alpha, beta=beta, length=length_from_theta(p))
    modes, _ = _residual_cosine_modes(p, params, kind)
    if amp_index is None:
        amp = float(np.max(p.values))
    else:
        amp = float(p.values[amp_index])
    return np.append(modes, amp - target_h)


def _square_equations(x, nx, target_h, kind, amp_index):
    """The square Newton system: cosine modes 0..nx/2-1 plus amplitude pin.

    Also reports the grid max-norm of the residual, which the convergence
    test uses so that the monitored-but-unsolved Nyquist mode cannot hide
    an unresolved wave.
    """
    p, params = _rebuild(x, nx)
    modes, grid_norm = _residual_cosine_modes(p, params, kind)
    eqs = np.append(modes[: nx // 2], p.values[amp_index] - target_h)
    return eqs, grid_norm, p, params


def _fd_jacobian(fun, x, f0, fd_step):
    m, n = f0.size, x.size
    jac = np.empty((m, n))
    for i in range(n):
        step = fd_step * (1.0 + abs(x[i]))
        xi = x.copy()
        xi[i] += step
        jac[:, i] = (fun(xi) - f0) / step
    return jac


def _lu_solve(jac, rhs):
    with warnings.catch_warnings():
        # the pivot check below turns exact singularity into a typed error
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(jac, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < _PIVOT_FLOOR:
        raise SingularSystemError(
            f"Newton matrix pivot below {_PIVOT_FLOOR:g}; system is singular"
        )
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def quasi_newton_solve(guess, target_h, kind, cfg=None, k0=None):
    """Solve for the traveling wave with max(theta) pinned to target_h.

    guess is a (ThetaProfile, WaveParams) pair; its profile is projected
    onto odd parity, and the amplitude is pinned at the grid index where
    the guess attains its maximum (frozen for the whole solve).  The
    Jacobian is forward finite differences, either rebuilt every iteration
    or Broyden-updated between rebuilds, and each update solves a dense
    LU-factored system.

    Raises ConvergenceError after cfg.max_iters without meeting
    cfg.tol_residual, SingularSystemError on a negligible pivot.
    """
    if cfg is None:
        cfg = SolveConfig()
    if target_h < 0.0:
        raise ValueError(f"target_h must be nonnegative, got {target_h!r}")
    p0, params0 = guess
    nx = p0.nx
    p0 = spectral.project_odd(p0)
    x = np.concatenate(
        [spectral.sine_coeffs(p0), [params0.beta, params0.alpha]]
    )
    amp_index = int(np.argmax(p0.values))

    def fun(xv):
        return _square_equations(xv, nx, target_h, kind, amp_index)[0]

    eqs, grid_norm, p, params = _square_equations(x, nx, target_h, kind, amp_index)
    history = [grid_norm]
    tol = cfg.tol_residual
    jac = None
    iterations = 0
    for it in range(1, cfg.max_iters + 1):
        if grid_norm <= tol and abs(eqs[-1]) <= tol:
            break
        if jac is None or cfg.jacobian_mode == "finite-difference-full":
            jac = _fd_jacobian(fun, x, eqs, cfg.fd_step)
        dx = _lu_solve(jac, -eqs)
        x = x + dx
        eqs_new, grid_norm, p, params = _square_equations(
            x, nx, target_h, kind, amp_index
        )
        if cfg.jacobian_mode == "broyden-update":
            if np.max(np.abs(eqs_new)) > 0.5 * np.max(np.abs(eqs)):
                jac = None  # stalled; force a fresh finite-difference build
            else:
                df = eqs_new - eqs
                jac = jac + np.outer((df - jac @ dx) / np.dot(dx, dx), dx)
        eqs = eqs_new
        iterations = it
        history.append(grid_norm)
    if grid_norm > tol or abs(eqs[-1]) > tol:
        raise ConvergenceError(
            f"no convergence after {cfg.max_iters} iterations "
            f"(residual {grid_norm:.3e}, target_h {target_h})",
            last_iterate=x,
            residual_history=history,
        )

    if k0 is None:
        b = np.abs(x[:-2])
        k0 = int(np.argmax(b)) + 1 if b.size and np.max(b) > 0.0 else 1
    return WaveSolution(
        theta=p,
        alpha=params.alpha,
        beta=params.beta,
        length=params.length,
        amplitude=float(np.max(p.values)),
        residual_norm=grid_norm,
        k0=int(k0),
        kind=kind,
        iterations=iterations,
    )


def flat_solution(alpha, nx=256, kind=ModelKind.LINEAR):
    """The flat front as an exactly converged WaveSolution (beta = 1, L = 2*pi)."""
    p = spectral.ThetaProfile.from_values(np.zeros(nx))
    return WaveSolution(
        theta=p,
        alpha=float(alpha),
        beta=1.0,
        length=2.0 * np.pi,
        amplitude=0.0,
        residual_norm=0.0,
        k0=1,
        kind=kind,
        iterations=0,
    )


def residual_at_resolution(sol, nx):
    """Max-norm of the wave's residual re-evaluated on an nx-point grid.

    Resamples the profile spectrally; a converged, resolved wave should
    barely move under doubling of nx.
    """
    fine = spectral.resample(sol.theta, nx)
    params = WaveParams(alpha=sol.alpha, beta=sol.beta, length=length_from_theta(fine))
    return float(np.max(np.abs(residual(fine, params, sol.kind))))


def _near_self_intersection(p):
    return geometry.is_near_self_intersecting(geometry.reconstruct_curve(p))


def continue_branch(k0, kind, h_step, h_max, cfg=None):
    """March the branch of mode k0 in the wave amplitude h = max(theta).

    Starts from the asymptotic guess at eps = h_step, then increments the
    amplitude target by the current step, predicting each new iterate by
    secant extrapolation of the previous two solutions.  A failed solve
    halves the step (at most 4 halvings over the whole run).  Stops on
    near-self-intersection of the predicted or converged curve, on
    crossing the well-posedness threshold alpha = -3 (nonlinear closure),
    on step exhaustion, or once target_h would exceed h_max.
    """
    if cfg is None:
        cfg = SolveConfig()
    if h_step <= 0.0:
        raise ValueError(f"h_step must be positive, got {h_step!r}")
    if h_max < h_step:
        raise ValueError(f"h_max {h_max!r} is below the first target {h_step!r}")

    guess = asymptotic_guess(k0, h_step, kind, nx=cfg.nx)
    try:
        sol = quasi_newton_solve(guess, h_step, kind, cfg, k0=k0)
    except (ConvergenceError, SingularSystemError, DegenerateFrontError) as exc:
        raise BranchStartError(
            f"first solve at target_h {h_step} failed for k0={k0}, {kind.value}"
        ) from exc

    solutions = [sol]
    if _near_self_intersection(sol.theta):
        return BranchRecord(kind, int(k0), tuple(solutions), "self-intersection")

    step = float(h_step)
    halvings = 0
    x_prev, h_prev = _pack(sol), float(h_step)
    x_prev2, h_prev2 = None, None
    termination = None
    while termination is None:
        h_next = h_prev + step
        if h_next > h_max * (1.0 + 1e-12):
            termination = "max-amplitude-reached"
            break
        if x_prev2 is None:
            x_guess = x_prev.copy()
        else:
            x_guess = x_prev + (x_prev - x_prev2) * ((h_next - h_prev) / (h_prev - h_prev2))
        try:
            p_guess, params_guess = _rebuild(x_guess, cfg.nx)
            if _near_self_intersection(p_guess):
                termination = "self-intersection"
                break
            sol_new = quasi_newton_solve(
                (p_guess, params_guess), h_next, kind, cfg, k0=k0
            )
        except (ConvergenceError, SingularSystemError, DegenerateFrontError):
            halvings += 1
            if halvings > _MAX_STEP_HALVINGS:
                termination = "iteration-failure"
                break
            step *= 0.5
            continue
        if kind is ModelKind.NONLINEAR and sol_new.alpha >= _ALPHA_WELL_POSED:
            termination = "alpha-threshold"
            break
        solutions.append(sol_new)
        if _near_self_intersection(sol_new.theta):
            termination = "self-intersection"
            break
        x_prev2, h_prev2 = x_prev, h_prev
        x_prev, h_prev = _pack(sol_new), h_next

    return BranchRecord(kind, int(k0), tuple(solutions), termination)
