import math

import numpy as np
import pytest

from genfrac.core.errors import DomainError, InvalidPsiError, UnsupportedBasePointError
from genfrac.models import ClosedFormFunction, PsiFunction
from genfrac.services.calculus_rules import leibniz_series
from genfrac.services.kernel_algebra import make_kernel
from genfrac.services.operator_eval import integral_direct, kernel_operator
from genfrac.services.psi_operators import (
    erdelyi_kober_integral,
    hadamard_integral,
    katugampola_integral,
    psi_integral,
    psi_leibniz_series,
)

E_INTERVAL = (1.0, math.e)


def _rl(alpha, interval=E_INTERVAL):
    return kernel_operator(make_kernel("rl"), alpha, 0.0, interval)


# --- Integral respecto de ψ ---


@pytest.mark.parametrize(
    "catalog_id, params, alpha, beta",
    [
        ("rl", {}, 0.5, 0.0),
        ("prabhakar", {"rho": 1, "omega": -1}, 0.5, 0.5),
        ("gpf", {"rho": 0.8}, 0.6, 1.0),
    ],
)
def test_identity_psi_is_base_operator(sample, catalog_id, params, alpha, beta):
    f = sample(np.cos, n=256)
    op = kernel_operator(make_kernel(catalog_id, params), alpha, beta, (0.0, 1.0))
    result = psi_integral(op, PsiFunction.identity(), f)
    assert np.array_equal(result.values, integral_direct(op, f).values)


def test_log_psi_of_constant(sample):
    f = sample(np.ones_like, *E_INTERVAL, n=512)
    result = psi_integral(_rl(1.0), PsiFunction.log(), f)
    assert result.values[-1] == pytest.approx(1.0, abs=1e-10)


def test_log_psi_of_log(sample):
    f = sample(np.log, *E_INTERVAL, n=512)
    result = psi_integral(_rl(0.5), PsiFunction.log(), f)
    assert result.values[-1] == pytest.approx(1 / math.gamma(2.5), abs=1e-8)
    assert result.values[-1] == pytest.approx(0.752252778, abs=1e-9)


@pytest.mark.parametrize("mu", [0, 1, 2])
@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_hadamard_power_rule(sample, interior, mu, alpha):
    f = sample(lambda t: np.log(t) ** mu, *E_INTERVAL, n=1024)
    result = hadamard_integral(alpha, f)
    log_t = np.log(f.t)
    expected = math.gamma(mu + 1) / math.gamma(mu + alpha + 1) * log_t ** (mu + alpha)
    mask = interior(f)
    assert np.max(np.abs(result.values - expected)[mask]) < 1e-5


def test_resample_and_nodal_agree(sample, interior):
    f = sample(np.cos, *E_INTERVAL, n=1024)
    kernel = make_kernel("prabhakar", {"rho": 1, "omega": -1})
    op = kernel_operator(kernel, 0.5, 1.0, E_INTERVAL)
    resampled = psi_integral(op, PsiFunction.log(), f)
    nodal = psi_integral(op, PsiFunction.log(), f, method="nodal")
    mask = interior(f)
    assert np.max(np.abs(resampled.values - nodal.values)[mask]) < 1e-4


def test_series_engine_matches_direct(sample, interior):
    f = sample(np.sqrt, *E_INTERVAL, n=1024)
    kernel = make_kernel("prabhakar", {"rho": 1, "omega": -1})
    op = kernel_operator(kernel, 1.0, 1.0, E_INTERVAL)
    direct = psi_integral(op, PsiFunction.log(), f)
    series = psi_integral(op, PsiFunction.log(), f, engine="series")
    mask = interior(f)
    assert np.max(np.abs(direct.values - series.values)[mask]) < 1e-4


# --- Katugampola ---


def test_katugampola_with_rho_zero_is_rl(sample):
    result = katugampola_integral(0.5, 0.0, sample(np.ones_like, n=512))
    assert result.values[-1] == pytest.approx(1 / math.gamma(1.5), abs=1e-6)


def test_katugampola_elementary_integral(sample):
    result = katugampola_integral(1.0, 1.0, sample(np.ones_like, n=512))
    assert result.values[-1] == pytest.approx(0.5, abs=1e-10)


def test_katugampola_of_zero(sample):
    result = katugampola_integral(0.5, 2.0, sample(np.zeros_like, n=128))
    assert np.all(result.values == 0.0)


def test_katugampola_rejects_rho():
    f = ClosedFormFunction.constant(1.0).sample(0.0, 1.0, 16)
    with pytest.raises(DomainError):
        katugampola_integral(0.5, -1.0, f)


# --- Erdélyi–Kober ---


def test_erdelyi_kober_constant(sample):
    result = erdelyi_kober_integral(0.5, 1.0, 0.0, sample(np.ones_like, n=512))
    np.testing.assert_allclose(result.values, 1 / math.gamma(1.5), atol=1e-6)


def test_erdelyi_kober_unit_order(sample):
    result = erdelyi_kober_integral(1.0, 1.0, 0.0, sample(np.ones_like, n=512))
    np.testing.assert_allclose(result.values, 1.0, atol=1e-6)


def test_erdelyi_kober_of_zero(sample):
    result = erdelyi_kober_integral(0.5, 2.0, 0.5, sample(np.zeros_like, n=128))
    assert np.all(result.values == 0.0)


def test_erdelyi_kober_output_starts_after_zero(sample):
    f = sample(np.ones_like, n=128)
    result = erdelyi_kober_integral(0.5, 1.0, 0.0, f)
    assert result.a == pytest.approx(f.h)
    assert result.n == f.n - 1


def test_erdelyi_kober_rejects_non_integrable_weight(sample):
    with pytest.raises(DomainError):
        erdelyi_kober_integral(0.5, 1.0, -1.0, sample(np.ones_like, n=64))


def test_erdelyi_kober_negative_eta_on_constant(sample):
    result = erdelyi_kober_integral(0.5, 2.0, -0.5, sample(np.ones_like, n=256))
    np.testing.assert_allclose(result.values, math.sqrt(math.pi), rtol=1e-12)


def test_erdelyi_kober_negative_eta_power_rule(sample, interior):
    alpha, eta = 0.5, -0.5
    f = sample(lambda t: t, n=1024)
    result = erdelyi_kober_integral(alpha, 1.0, eta, f)
    expected = math.gamma(eta + 2.0) / math.gamma(eta + alpha + 2.0) * result.t
    mask = interior(result)
    assert np.max(np.abs(result.values - expected)[mask]) < 1e-4


def test_erdelyi_kober_requires_zero_base_point(sample):
    with pytest.raises(UnsupportedBasePointError):
        erdelyi_kober_integral(0.5, 1.0, 0.0, sample(np.ones_like, a=1.0, b=2.0, n=64))


# --- Validación de ψ ---


def test_decreasing_psi_is_rejected(sample):
    psi = PsiFunction.custom(lambda t: -t, lambda t: -np.ones_like(t))
    with pytest.raises(InvalidPsiError):
        psi_integral(_rl(0.5, (0.0, 1.0)), psi, sample(np.ones_like, n=64))


def test_non_finite_derivative_is_rejected(sample):
    psi = PsiFunction.custom(np.sqrt, lambda t: 0.5 / np.sqrt(t))
    with pytest.raises(InvalidPsiError):
        psi_integral(_rl(0.5, (0.0, 1.0)), psi, sample(np.ones_like, n=64))


def test_log_psi_requires_positive_base_point(sample):
    with pytest.raises(DomainError):
        hadamard_integral(0.5, sample(np.ones_like, n=64))


# --- Leibniz en ψ ---


def test_psi_leibniz_identity_is_leibniz(sample):
    op = kernel_operator(make_kernel("prabhakar", {"rho": 1, "omega": -1}), 0.5, 0.5, (0.0, 1.0))
    f = sample(np.exp, n=256)
    g_fn = ClosedFormFunction.polynomial((1.0, 2.0))
    g = [f.with_values(g_fn.derivative(m, f.t)) for m in range(2)]
    result = psi_leibniz_series(op, PsiFunction.identity(), f, g, 1)
    assert np.array_equal(result.values, leibniz_series(op, f, g, 1).values)


def test_psi_leibniz_with_unit_g(sample):
    op = _rl(0.5)
    f = sample(np.log, *E_INTERVAL, n=512)
    g = [f.with_values(np.ones_like(f.t)), f.with_values(np.zeros_like(f.t))]
    result = psi_leibniz_series(op, PsiFunction.log(), f, g, 1)
    assert np.array_equal(result.values, psi_integral(op, PsiFunction.log(), f).values)


def test_psi_leibniz_log_times_log(sample, interior):
    op = _rl(0.5)
    f = sample(np.log, *E_INTERVAL, n=1024)
    # (t d/dt)^m log t = 1, 0
    g = [f, f.with_values(np.ones_like(f.t)), f.with_values(np.zeros_like(f.t))]
    result = psi_leibniz_series(op, PsiFunction.log(), f, g, 2)
    reference = psi_integral(op, PsiFunction.log(), f.with_values(f.values**2))
    mask = interior(f)
    assert np.max(np.abs(result.values - reference.values)[mask]) < 1e-4
