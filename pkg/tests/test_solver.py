import numpy as np
import pytest

from flamefront.bifurcation import asymptotic_guess, nonlinear_bifurcation_alpha
from flamefront.errors import (
    BranchStartError,
    ConvergenceError,
    SingularSystemError,
)
from flamefront.model import ModelKind, WaveParams, residual
from flamefront.solver import (
    BranchRecord,
    SolveConfig,
    assemble_system,
    continue_branch,
    flat_solution,
    quasi_newton_solve,
    residual_at_resolution,
)
from flamefront.spectral import ThetaProfile, cosine_coeffs, sine_coeffs


def flat_guess(nx=64, beta=1.0, alpha=5.0):
    p = ThetaProfile.from_values(np.zeros(nx))
    return p, WaveParams(alpha=alpha, beta=beta, length=2.0 * np.pi)


def test_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(nx=100, tol_residual=-1.0)
    with pytest.raises(ValueError):
        SolveConfig(max_iters=0)
    with pytest.raises(ValueError):
        SolveConfig(jacobian_mode="exact")
    from flamefront.errors import InvalidGridError

    with pytest.raises(InvalidGridError):
        SolveConfig(nx=31)


def test_assemble_system_flat_is_zero():
    p, params = flat_guess()
    eqs = assemble_system(p, params.beta, params.alpha, 0.0, ModelKind.LINEAR)
    assert eqs.shape == (64 // 2 + 2,)
    np.testing.assert_allclose(eqs, 0.0, rtol=0, atol=1e-14)


def test_assemble_system_amplitude_row():
    p, params = flat_guess()
    eqs = assemble_system(p, params.beta, params.alpha, 0.1, ModelKind.LINEAR)
    np.testing.assert_allclose(eqs[:-1], 0.0, rtol=0, atol=1e-14)
    assert eqs[-1] == pytest.approx(-0.1, rel=1e-14)


def test_assemble_system_defect_scaling():
    # the truncated expansion feeds an O(eps^3) defect into the system
    norms = []
    for eps in (0.1, 0.05):
        p, params = asymptotic_guess(1, eps, ModelKind.LINEAR)
        eqs = assemble_system(p, params.beta, params.alpha, eps, ModelKind.LINEAR)
        norms.append(np.max(np.abs(eqs)))
    assert 6.0 < norms[0] / norms[1] < 10.0


def test_solve_flat_target_zero_is_immediate():
    sol = quasi_newton_solve(flat_guess(), 0.0, ModelKind.LINEAR)
    assert sol.iterations == 0
    assert sol.residual_norm <= 1e-14
    assert sol.amplitude == 0.0
    np.testing.assert_allclose(sol.theta.values, 0.0, rtol=0, atol=1e-15)


def test_solve_small_linear_wave(linear_wave_small):
    sol = linear_wave_small
    assert sol.kind is ModelKind.LINEAR
    assert sol.k0 == 1
    # regression baseline: the second-order guess converges in a handful
    # of corrections
    assert sol.iterations <= 5
    assert sol.residual_norm <= 1e-10
    assert sol.amplitude == pytest.approx(0.05, abs=1e-10)
    assert sol.alpha == pytest.approx(5.0, abs=0.01)
    # weakly nonlinear prediction beta = 1 + h^2/4
    assert sol.beta == pytest.approx(1.0 + 0.25 * 0.05**2, abs=1e-5)
    assert sol.length > 2.0 * np.pi


def test_solution_residual_norm_is_true_grid_norm(linear_wave_small):
    sol = linear_wave_small
    params = WaveParams(alpha=sol.alpha, beta=sol.beta, length=sol.length)
    r = residual(sol.theta, params, sol.kind)
    assert np.max(np.abs(r)) == pytest.approx(sol.residual_norm, rel=1e-6, abs=1e-14)


def test_solution_parity(linear_wave_small):
    # solutions live in the odd subspace: no cosine content at all
    c = cosine_coeffs(linear_wave_small.theta)
    s = sine_coeffs(linear_wave_small.theta)
    assert np.max(np.abs(c)) <= 1e-12 * np.max(np.abs(s))


def test_solve_pins_amplitude_at_grid_max(linear_wave_small):
    assert np.max(linear_wave_small.theta.values) == pytest.approx(0.05, abs=1e-10)


def test_branch_consistency_log_fit(fast_config):
    # beta - 1 = h^2/4 + O(h^4): the log-log fit over small amplitudes
    # recovers exponent 2 and prefactor 1/4
    hs = np.array([0.01, 0.02, 0.05, 0.1])
    betas = []
    for h in hs:
        sol = quasi_newton_solve(
            asymptotic_guess(1, h, ModelKind.LINEAR),
            h,
            ModelKind.LINEAR,
            k0=1,
            cfg=fast_config,
        )
        betas.append(sol.beta)
    slope, intercept = np.polyfit(np.log(hs), np.log(np.array(betas) - 1.0), 1)
    assert slope == pytest.approx(2.0, abs=0.05)
    assert np.exp(intercept) == pytest.approx(0.25, abs=0.02)


def test_resolve_from_solution_is_cheap(linear_wave_small):
    sol = linear_wave_small
    params = WaveParams(alpha=sol.alpha, beta=sol.beta, length=sol.length)
    again = quasi_newton_solve((sol.theta, params), 0.05, ModelKind.LINEAR, k0=1)
    assert again.iterations <= 2
    assert abs(again.alpha - sol.alpha) < 1e-9
    assert abs(again.beta - sol.beta) < 1e-11


def test_solve_small_nonlinear_wave(nonlinear_wave_small):
    sol = nonlinear_wave_small
    alpha0 = nonlinear_bifurcation_alpha(1)
    assert sol.residual_norm <= 1e-10
    assert sol.amplitude == pytest.approx(0.05, abs=1e-10)
    assert sol.alpha == pytest.approx(alpha0, abs=0.02)
    assert sol.alpha < -3.0


def test_broyden_mode_agrees_with_full_jacobian(linear_wave_small):
    cfg = SolveConfig(jacobian_mode="broyden-update")
    guess = asymptotic_guess(1, 0.05, ModelKind.LINEAR)
    sol = quasi_newton_solve(guess, 0.05, ModelKind.LINEAR, cfg=cfg, k0=1)
    assert sol.residual_norm <= 1e-10
    assert abs(sol.alpha - linear_wave_small.alpha) < 1e-8
    assert abs(sol.beta - linear_wave_small.beta) < 1e-10


def test_solve_rejects_negative_target():
    with pytest.raises(ValueError):
        quasi_newton_solve(flat_guess(), -0.1, ModelKind.LINEAR)


def test_convergence_error_carries_history():
    cfg = SolveConfig(max_iters=2)
    guess = asymptotic_guess(1, 0.3, ModelKind.LINEAR)
    with pytest.raises(ConvergenceError) as info:
        quasi_newton_solve(guess, 0.9, ModelKind.LINEAR, cfg=cfg, k0=1)
    err = info.value
    assert err.last_iterate is not None
    assert len(err.residual_history) >= 2


def test_singular_system_from_flat_guess():
    # at theta = 0 the equations do not depend on alpha, so the Jacobian
    # has an identically zero column
    with pytest.raises(SingularSystemError):
        quasi_newton_solve(flat_guess(), 0.3, ModelKind.LINEAR)


def test_flat_solution_fields():
    sol = flat_solution(17.0, nx=64)
    assert sol.alpha == 17.0
    assert sol.beta == 1.0
    assert sol.amplitude == 0.0
    assert sol.residual_norm == 0.0
    assert sol.length == pytest.approx(2.0 * np.pi, rel=1e-15)


def test_residual_audit_at_higher_resolution(linear_wave_small):
    sol = linear_wave_small
    audit = residual_at_resolution(sol, 512)
    assert abs(audit - sol.residual_norm) < 1e-8


def test_branch_stops_at_h_max():
    rec = continue_branch(1, ModelKind.LINEAR, 0.05, 0.2)
    assert isinstance(rec, BranchRecord)
    assert rec.termination == "max-amplitude-reached"
    assert len(rec.solutions) == 4
    np.testing.assert_allclose(rec.amplitudes, [0.05, 0.1, 0.15, 0.2], rtol=0, atol=1e-9)
    betas = [s.beta for s in rec.solutions]
    assert all(a < b for a, b in zip(betas, betas[1:]))


def test_branch_validation():
    with pytest.raises(ValueError):
        continue_branch(1, ModelKind.LINEAR, 0.0, 1.0)
    with pytest.raises(ValueError):
        continue_branch(1, ModelKind.LINEAR, 0.05, 0.01)


def test_branch_start_failure():
    cfg = SolveConfig(max_iters=1)
    with pytest.raises(BranchStartError):
        continue_branch(1, ModelKind.LINEAR, 0.05, 0.2, cfg=cfg)


def test_branch_nonlinear_segment():
    rec = continue_branch(1, ModelKind.NONLINEAR, 0.02, 0.06)
    assert rec.termination == "max-amplitude-reached"
    alphas = [s.alpha for s in rec.solutions]
    assert all(a < -3.0 for a in alphas)
    # alpha climbs toward the well-posedness boundary as amplitude grows
    assert all(a < b for a, b in zip(alphas, alphas[1:]))
