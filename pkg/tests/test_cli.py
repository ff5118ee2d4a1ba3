import io
import logging
import math
import sys

import numpy as np
import pytest

from genfrac.cli.expressions import compile_expression
from genfrac.cli.grammar import (
    parse_function_spec,
    parse_kernel_spec,
    parse_problem_text,
    parse_psi_spec,
)
from genfrac.cli.main import run
from genfrac.core.errors import (
    EXIT_DOMAIN,
    EXIT_NUMERICAL,
    EXIT_USAGE,
    ExpressionSyntaxError,
    GrammarError,
    KernelSpecSyntaxError,
    ProblemFileError,
)
from genfrac.core.log import configure_logging
from genfrac.services.csv_io import read_csv

PROBLEM = """\
# u = t
kernel=rl
alpha=0.5
gamma=0.5
constants=[0]
rhs=1 + 0*u
lipschitz=1
interval=[0,1]
"""


def _rows(text):
    lines = text.strip().splitlines()
    assert lines[0] == "t,value"
    return np.array([[float(x) for x in line.split(",")] for line in lines[1:]])


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- Subcomandos ---


def test_integrate_constant(capsys):
    code, out, _ = _run(capsys, "integrate", "--alpha", "0.5", "--f", "const:1")
    assert code == 0
    rows = _rows(out)
    assert rows.shape == (1025, 2)
    assert rows[-1, 0] == 1.0
    assert rows[-1, 1] == pytest.approx(1 / math.gamma(1.5), abs=1e-6)


def test_integrate_is_deterministic(capsys):
    argv = ["integrate", "--kernel", "prabhakar:rho=1,omega=-1", "--alpha", "0.5", "--beta", "0.5"]
    argv += ["--f", "expr:exp(-t)*sin(3*t)", "--n", "256"]
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second


def test_integrate_then_differentiate_through_csv(capsys, tmp_path):
    path = tmp_path / "g.csv"
    code, out, _ = _run(
        capsys, "integrate", "--alpha", "0.5", "--f", "poly:0,1", "--n", "512", "--out", str(path)
    )
    assert code == 0
    assert out == ""
    assert read_csv(path).n == 512

    code, out, _ = _run(
        capsys, "differentiate", "--alpha", "0.5", "--f", f"csv:{path}", "--n", "512"
    )
    assert code == 0
    rows = _rows(out)
    mask = (rows[:, 0] >= 0.1) & (rows[:, 0] <= 0.9)
    assert np.max(np.abs(rows[mask, 1] - rows[mask, 0])) < 5e-3


def test_csv_on_another_grid_is_rejected(capsys, tmp_path):
    path = tmp_path / "g.csv"
    _run(capsys, "integrate", "--alpha", "0.5", "--f", "const:1", "--n", "64", "--out", str(path))
    code, _, err = _run(capsys, "integrate", "--alpha", "0.5", "--f", f"csv:{path}", "--n", "32")
    assert code == EXIT_DOMAIN
    assert "subintervalos" in err


def test_symbol_laplace(capsys):
    code, out, _ = _run(capsys, "symbol", "--alpha", "0.5", "--s", "4")
    assert code == 0
    assert float(out) == pytest.approx(0.5, abs=1e-15)


def test_symbol_exponential_kernel(capsys):
    argv = ["symbol", "--kind", "laplace", "--kernel", "prabhakar:rho=1,omega=-1"]
    code, out, _ = _run(capsys, *argv, "--alpha", "1", "--beta", "1", "--s", "1")
    assert code == 0
    assert float(out) == pytest.approx(0.5, abs=1e-12)


def test_symbol_fourier(capsys):
    code, out, _ = _run(capsys, "symbol", "--kind", "fourier", "--alpha", "1", "--k", "1")
    assert code == 0
    assert complex(out.strip()) == pytest.approx(1j, abs=1e-15)


def test_check_semigroup_rl(capsys):
    code, out, _ = _run(
        capsys, "check-semigroup", "--alpha1", "0.3", "--alpha2", "0.9", "--kmax", "8"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,residual"
    assert len(lines) == 9
    assert max(float(line.split(",")[1]) for line in lines[1:]) < 1e-12


def test_check_inverse(capsys):
    code, out, _ = _run(
        capsys,
        "check-inverse",
        "--kernel",
        "prabhakar:rho=1.5,omega=-0.3",
        "--alpha",
        "0.4",
        "--beta",
        "0.6",
    )
    assert code == 0
    residuals = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
    assert max(residuals) < 1e-10


def test_catalog_lists_kernels(capsys):
    code, out, _ = _run(capsys, "catalog")
    assert code == 0
    names = [line.split(":")[0] for line in out.splitlines()]
    assert {"rl", "prabhakar", "ab", "gpf", "ml", "explicit"} <= set(names)


def test_solve_cauchy_from_problem_file(capsys, tmp_path):
    path = tmp_path / "problem.txt"
    path.write_text(PROBLEM, encoding="utf-8")
    code, out, _ = _run(capsys, "solve-cauchy", "--problem", str(path))
    assert code == 0
    rows = _rows(out)
    assert np.max(np.abs(rows[:, 1] - rows[:, 0])) < 1e-5


def test_solve_linear(capsys):
    code, out, _ = _run(
        capsys,
        "solve-linear",
        "--alpha",
        "0.5",
        "--c",
        "1",
        "--g",
        "expr:t^0.5/0.886226925452758 + 1",
        "--n",
        "512",
    )
    assert code == 0
    np.testing.assert_allclose(_rows(out)[:, 1], 1.0, atol=1e-5)


def test_psi_integrate_log(capsys):
    code, out, _ = _run(
        capsys,
        "psi-integrate",
        "--psi",
        "log",
        "--alpha",
        "1",
        "--interval",
        f"1,{math.e!r}",
        "--f",
        "const:1",
        "--n",
        "256",
    )
    assert code == 0
    assert _rows(out)[-1, 1] == pytest.approx(1.0, abs=1e-10)


# --- Códigos de salida ---


def test_bad_kernel_spec_is_usage_error(capsys):
    code, out, err = _run(
        capsys, "integrate", "--kernel", "prab:rho=1", "--alpha", "0.5", "--f", "const:1"
    )
    assert code == EXIT_USAGE
    assert out == ""
    assert "error [KernelSpecSyntaxError]" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = _run(capsys, "catalog", "--frobnicate")
    assert code == EXIT_USAGE


def test_out_of_region_is_numerical_error(capsys):
    code, _, err = _run(
        capsys,
        "symbol",
        "--kernel",
        "ml:beta_ml=1,alpha_ml=0.5",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--s",
        "0.5",
    )
    assert code == EXIT_NUMERICAL
    assert "OutOfRegionError" in err


def test_left_half_plane_is_domain_error(capsys):
    code, _, _ = _run(capsys, "symbol", "--alpha", "0.5", "--s", "-1")
    assert code == EXIT_DOMAIN


def test_negative_order_is_domain_error(capsys):
    code, _, _ = _run(capsys, "integrate", "--alpha", "-1", "--f", "const:1")
    assert code == EXIT_DOMAIN


# --- Gramáticas ---


@pytest.mark.parametrize(
    "text, position",
    [
        ("foo", 0),
        ("prabhakar:rho=,omega=1", 14),
        ("prabhakar:rho=1;", 15),
        ("explicit:coeffs=[1,2", 20),
    ],
)
def test_kernel_spec_error_positions(text, position):
    with pytest.raises(KernelSpecSyntaxError) as excinfo:
        parse_kernel_spec(text)
    assert excinfo.value.position == position


def test_kernel_spec_with_list_value():
    kernel = parse_kernel_spec("explicit:coeffs=[1,0.5,0.25],radius=2")
    assert kernel.coeffs[:3] == (1.0, 0.5, 0.25)
    assert kernel.radius == 2.0


def test_function_spec_prefixes():
    f = parse_function_spec("poly:1,2", 0.0, 1.0, 4)
    np.testing.assert_allclose(f.values, [1.0, 1.5, 2.0, 2.5, 3.0])
    with pytest.raises(GrammarError):
        parse_function_spec("sinc:1", 0.0, 1.0, 4)


def test_expression_error_position_is_shifted_by_prefix():
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_function_spec("expr:t + x", 0.0, 1.0, 4)
    assert excinfo.value.position == len("expr:") + 4


def test_psi_spec():
    assert parse_psi_spec("log").variant == "log"
    assert parse_psi_spec("power:rho=1").exponent == 2.0
    assert parse_psi_spec("powsigma:sigma=0.5").exponent == 0.5
    with pytest.raises(GrammarError):
        parse_psi_spec("power:sigma=1")


def test_expression_compiler():
    expression = compile_expression("2*t^2 + sin(pi*t) - -1", ("t",))
    np.testing.assert_allclose(expression(np.array([0.0, 0.5])), [1.0, 2.5])


def test_expression_in_two_variables_broadcasts():
    expression = compile_expression("exp(t) * u", ("t", "u"))
    values = expression(np.array([0.0, 1.0]), np.array([2.0, 1.0]))
    np.testing.assert_allclose(values, [2.0, math.e])


@pytest.mark.parametrize("text, position", [("t +", 3), ("(t", 2), ("sin t", 4), ("2 $", 2)])
def test_expression_error_positions(text, position):
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        compile_expression(text)
    assert excinfo.value.position == position



# --- Logging ---


def test_run_survives_a_closed_stderr_from_a_previous_run(monkeypatch, tmp_path):
    first = io.StringIO()
    monkeypatch.setattr(sys, "stderr", first)
    assert run(["catalog", "--out", str(tmp_path / "a.txt")]) == 0
    first.close()

    second = io.StringIO()
    monkeypatch.setattr(sys, "stderr", second)
    code = run(["symbol", "--alpha", "0.5", "--s", "-1"])
    assert code == EXIT_DOMAIN
    assert "error [" in second.getvalue()


def test_configure_logging_keeps_a_single_handler(monkeypatch):
    monkeypatch.setattr(sys, "stderr", io.StringIO())
    configure_logging("INFO")
    monkeypatch.setattr(sys, "stderr", io.StringIO())
    logger = configure_logging("DEBUG")
    assert len(logger.handlers) == 1
    assert logger.handlers[0].stream is sys.stderr
    assert logger.level == logging.DEBUG


# --- Archivo de problema ---


def test_problem_text_is_parsed():
    problem = parse_problem_text(PROBLEM)
    assert problem.gamma == 0.5
    assert problem.beta == 0.0
    assert problem.constants == (0.0,)
    np.testing.assert_allclose(problem.rhs(np.array([0.2]), np.array([7.0])), [1.0])


@pytest.mark.parametrize(
    "edit",
    [
        lambda text: text.replace("lipschitz=1\n", ""),
        lambda text: text + "alpha=0.7\n",
        lambda text: text + "delta=1\n",
        lambda text: text + "sin signo igual\n",
    ],
)
def test_problem_text_errors(edit):
    with pytest.raises(ProblemFileError):
        parse_problem_text(edit(PROBLEM))
