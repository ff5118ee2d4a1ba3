import math

import numpy as np
import pytest
from pydantic import ValidationError

from genfrac.core.errors import DomainError, NoConvergenceError, SingularNodeError
from genfrac.models import CauchyProblem, SampledFunction
from genfrac.services.cauchy_volterra import (
    contraction_step,
    solve_cauchy,
    volterra_u0,
)
from genfrac.services.kernel_algebra import make_kernel
from genfrac.services.rl_oracle import rl_derivative_quad, rl_integral_power


def _problem(
    rhs=lambda t, u: np.ones_like(t),
    catalog_id="rl",
    params=None,
    alpha=0.5,
    beta=0.0,
    gamma=0.5,
    constants=(0.0,),
    lipschitz=1.0,
    interval=(0.0, 1.0),
):
    return CauchyProblem(
        kernel=make_kernel(catalog_id, params or {}),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        a=interval[0],
        b=interval[1],
        constants=constants,
        rhs=rhs,
        lipschitz=lipschitz,
    )


def _mittag_leffler(z, alpha, terms=90):
    return sum(z**k / math.gamma(alpha * k + 1) for k in range(terms))


# --- Término inicial ---


def test_u0_singular_term():
    p = _problem(constants=(1.0,))
    u0 = volterra_u0(p, [0.5, 1.0])
    assert isinstance(u0, SampledFunction)
    assert u0.interval == (0.5, 1.0)
    assert u0.values[-1] == pytest.approx(1 / math.gamma(0.5), abs=1e-15)
    assert u0.values[-1] == pytest.approx(0.564189584, abs=1e-9)


def test_u0_vanishes_without_data():
    p = _problem(constants=(0.0,))
    assert np.all(volterra_u0(p, np.linspace(0.0, 1.0, 11)).values == 0.0)


def test_u0_constant_term_includes_base_point():
    p = _problem(gamma=1.0, constants=(2.0,))
    u0 = volterra_u0(p, [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(u0.values, 2.0)
    np.testing.assert_allclose(u0.t, [0.0, 0.5, 1.0])


def test_u0_rejects_singular_base_point():
    p = _problem(constants=(1.0,))
    with pytest.raises(SingularNodeError):
        volterra_u0(p, [0.0, 0.5])


@pytest.mark.parametrize("nodes", [[0.5, 1.5], [0.5], [0.0, 0.3, 1.0], [1.0, 0.5]])
def test_u0_rejects_bad_nodes(nodes):
    with pytest.raises(DomainError):
        volterra_u0(_problem(), nodes)


def test_problem_checks_number_of_constants():
    with pytest.raises(ValidationError):
        _problem(gamma=1.5, constants=(1.0,))


def test_problem_rejects_zero_alpha():
    with pytest.raises(ValidationError):
        _problem(catalog_id="prabhakar", params={"rho": 1, "omega": -1}, alpha=0.0, beta=1.0)


# --- Paso de contracción ---


def test_contraction_step_rl():
    assert contraction_step(_problem(lipschitz=2.0)) == pytest.approx(0.45, rel=1e-9)


def test_contraction_step_is_capped_by_interval():
    assert contraction_step(_problem(lipschitz=1e-12)) == 1.0


def test_contraction_step_exponential_kernel():
    # h·e^h = 1 en el orden total (1, 1): h* = W(1)
    p = _problem(
        catalog_id="prabhakar",
        params={"rho": 1, "omega": -1},
        beta=1.0,
        interval=(0.0, 2.0),
    )
    assert contraction_step(p) == pytest.approx(0.9 * 0.5671432904097838, rel=1e-8)


def test_contraction_step_shrinks_with_lipschitz():
    params = {"rho": 1, "omega": -1}
    steps = [
        contraction_step(
            _problem(catalog_id="prabhakar", params=params, beta=1.0, lipschitz=c, interval=(0, 5))
        )
        for c in (1.0, 2.0, 4.0)
    ]
    assert steps[0] > steps[1] > steps[2]


# --- Solución ---


def test_solve_constant_rhs_gives_identity():
    result = solve_cauchy(_problem())
    sol = result.solution
    assert sol.a == 0.0
    assert np.max(np.abs(sol.values - sol.t)) < 1e-5


def test_solve_zero_rhs_keeps_singular_initial_term():
    p = _problem(rhs=lambda t, u: np.zeros_like(t), constants=(1.0,))
    result = solve_cauchy(p, n_per_step=32)
    sol = result.solution
    assert sol.t[0] > 0.0
    assert sol.t[0] == pytest.approx(sol.h)
    np.testing.assert_allclose(sol.values, sol.t**-0.5 / math.gamma(0.5), rtol=1e-14)


def test_solve_homogeneous_problem_has_zero_solution():
    p = _problem(
        rhs=lambda t, u: u,
        catalog_id="prabhakar",
        params={"rho": 1, "omega": -1},
        alpha=0.2,
        beta=1.0,
        gamma=1.0,
    )
    result = solve_cauchy(p)
    assert np.max(np.abs(result.solution.values)) < 1e-10


def test_solve_satisfies_differential_form(interior):
    result = solve_cauchy(_problem())
    sol = result.solution
    recovered = rl_derivative_quad(sol, 0.5)
    expected = rl_integral_power(0.5, 0.0, 0.0, sol.t)
    mask = interior(sol)
    assert np.max(np.abs(recovered.values - expected)[mask]) < 5e-3


def test_solve_relaxation_over_several_windows():
    # u′ = −I^{1/2}u, u(0) = 1: u = E_{3/2}(−t^{3/2})
    p = _problem(
        rhs=lambda t, u: -u,
        gamma=1.0,
        constants=(1.0,),
        interval=(0.0, 3.0),
    )
    tol = 1e-10
    result = solve_cauchy(p, n_per_step=128, tol=tol)
    sol = result.solution
    exact = np.array([_mittag_leffler(-(x**1.5), 1.5) for x in sol.t])

    assert len(result.windows) > 1
    assert len(result.windows) <= math.ceil(3.0 / result.step)
    assert np.max(np.abs(sol.values - exact)) < 1e-3
    assert result.residual <= 10 * tol
    for window in result.windows:
        assert all(r <= window.contraction_constant + 0.1 for r in window.ratios)


def test_solve_windows_are_contiguous():
    p = _problem(rhs=lambda t, u: -u, gamma=1.0, constants=(1.0,), interval=(0.0, 3.0))
    windows = solve_cauchy(p, n_per_step=16).windows
    assert windows[0].t_start == 0.0
    assert windows[-1].t_end == 3.0
    for prev, nxt in zip(windows, windows[1:]):
        assert nxt.t_start == prev.t_end


def test_solve_reports_understated_lipschitz():
    p = _problem(
        rhs=lambda t, u: 50.0 * u,
        gamma=1.0,
        constants=(1.0,),
        lipschitz=0.01,
    )
    with pytest.raises(NoConvergenceError, match="ventana 0"):
        solve_cauchy(p, max_picard=20)


def test_solve_needs_enough_nodes_per_window():
    with pytest.raises(DomainError):
        solve_cauchy(_problem(), n_per_step=2)
