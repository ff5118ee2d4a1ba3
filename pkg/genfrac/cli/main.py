"""
Punto de entrada de la línea de comandos `genfrac`.

Cada subcomando escribe su resultado (CSV o un número) en stdout o en --out;
los diagnósticos van a stderr. Códigos de salida: 0 éxito, 1 error inesperado,
2 uso, 3 fallo numérico, 4 dominio.
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from pydantic import ValidationError

from genfrac import __version__
from genfrac.cli.grammar import (
    parse_closed_form,
    parse_function_spec,
    parse_interval,
    parse_kernel_spec,
    parse_problem_file,
    parse_psi_spec,
)
from genfrac.core.config import settings
from genfrac.core.errors import (
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_UNEXPECTED,
    EXIT_USAGE,
    GenFracError,
)
from genfrac.core.log import configure_logging
from genfrac.models.functions import SampledFunction
from genfrac.models.kernel import OrderPair, TruncationPolicy
from genfrac.models.operators import GenOperator, SymbolQuery
from genfrac.services import kernel_algebra
from genfrac.services.calculus_rules import chain_series, leibniz_series, sampled_derivatives
from genfrac.services.cauchy_volterra import solve_cauchy
from genfrac.services.csv_io import format_csv
from genfrac.services.operator_eval import (
    derivative,
    integral_direct,
    integral_series,
    make_derivative,
)
from genfrac.services.psi_operators import psi_integral
from genfrac.services.transforms import fourier_symbol, laplace_symbol, solve_linear_integral_eq

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], str]

CLOSED_FORM_KINDS = ("const", "power", "poly", "exp")


# --- Construcción de objetos a partir de los argumentos ---


def _trunc(args: argparse.Namespace) -> TruncationPolicy:
    given = {}
    if args.max_terms is not None:
        given["max_terms"] = args.max_terms
    if args.tail_tol is not None:
        given["tail_tol"] = args.tail_tol
    return TruncationPolicy(**given)


def _operator(args: argparse.Namespace) -> GenOperator:
    return GenOperator(
        kernel=parse_kernel_spec(args.kernel),
        order=OrderPair(alpha=args.alpha, beta=args.beta),
        interval=parse_interval(args.interval),
        trunc=_trunc(args),
    )


def _sample(spec: str, op: GenOperator, n: int) -> SampledFunction:
    return parse_function_spec(spec, op.a, op.b, n)


def _number(z: complex) -> str:
    if z.imag == 0.0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _residual_table(residuals: Sequence[float]) -> str:
    rows = ["k,residual"] + [f"{k},{r:.17g}" for k, r in enumerate(residuals)]
    return "\n".join(rows) + "\n"


# --- Subcomandos ---


def cmd_integrate(args: argparse.Namespace) -> str:
    op = _operator(args)
    f = _sample(args.f, op, args.n)
    result = integral_direct(op, f) if args.method == "direct" else integral_series(op, f)
    return format_csv(result)


def cmd_differentiate(args: argparse.Namespace) -> str:
    op = _operator(args)
    f = _sample(args.f, op, args.n)
    flavor = "rl_type" if args.flavor == "rl" else "caputo_type"
    return format_csv(derivative(make_derivative(op, flavor), f))


def cmd_leibniz(args: argparse.Namespace) -> str:
    op = _operator(args)
    f = _sample(args.f, op, args.n)
    kind = args.g.partition(":")[0]
    if kind in CLOSED_FORM_KINDS:
        g = parse_closed_form(args.g, op.a)
        g_derivs = [f.with_values(g.derivative(m, f.t)) for m in range(args.M + 1)]
    else:
        g_derivs = sampled_derivatives(_sample(args.g, op, args.n), args.M)
    return format_csv(leibniz_series(op, f, g_derivs, args.M))


def cmd_chain(args: argparse.Namespace) -> str:
    op = _operator(args)
    outer = parse_closed_form(args.f, 0.0)
    inner = parse_closed_form(args.g, op.a)
    result = chain_series(
        op,
        lambda r, x: outer.derivative(r, x),
        lambda j, t: inner.derivative(j, t),
        args.M,
        n_intervals=args.n,
    )
    return format_csv(result)


def cmd_symbol(args: argparse.Namespace) -> str:
    kernel = parse_kernel_spec(args.kernel)
    order = OrderPair(alpha=args.alpha, beta=args.beta)
    if args.kind == "laplace":
        if args.s is None:
            raise argparse.ArgumentTypeError("symbol --kind laplace requiere --s")
        try:
            s = complex(args.s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"--s no es un número: {args.s!r}") from None
        query = SymbolQuery(kernel=kernel, order=order, point=s, trunc=_trunc(args))
        return _number(laplace_symbol(query)) + "\n"
    if args.k is None:
        raise argparse.ArgumentTypeError("symbol --kind fourier requiere --k")
    query = SymbolQuery(kernel=kernel, order=order, point=args.k, trunc=_trunc(args))
    return _number(fourier_symbol(query)) + "\n"


def cmd_solve_linear(args: argparse.Namespace) -> str:
    op = _operator(args)
    g = _sample(args.g, op, args.n)
    result = solve_linear_integral_eq(op, args.c, g, tol=args.tol, max_iter=args.max_iter)
    logger.info("residuo %.3e tras %d iteraciones", result.residual, result.iterations)
    return format_csv(result.solution)


def cmd_solve_cauchy(args: argparse.Namespace) -> str:
    problem = parse_problem_file(args.problem)
    result = solve_cauchy(
        problem,
        n_per_step=args.n_per_step,
        tol=args.tol,
        max_picard=args.max_picard,
        trunc=_trunc(args),
    )
    logger.info("residuo de Volterra %.3e, %d ventanas", result.residual, len(result.windows))
    return format_csv(result.solution)


def cmd_psi_integrate(args: argparse.Namespace) -> str:
    op = _operator(args)
    f = _sample(args.f, op, args.n)
    psi = parse_psi_spec(args.psi)
    return format_csv(psi_integral(op, psi, f, method=args.psi_method))


def cmd_check_semigroup(args: argparse.Namespace) -> str:
    kernel = parse_kernel_spec(args.kernel)
    residuals = kernel_algebra.semigroup_residual(
        kernel, args.alpha1, args.alpha2, args.beta, args.kmax
    )
    return _residual_table(residuals)


def cmd_check_inverse(args: argparse.Namespace) -> str:
    kernel = parse_kernel_spec(args.kernel)
    order = OrderPair(alpha=args.alpha, beta=args.beta)
    m = math.floor(args.alpha) + 1
    residuals = kernel_algebra.reciprocal_identity_residuals(kernel, order, m, args.kmax)
    return _residual_table(residuals)


def cmd_catalog(args: argparse.Namespace) -> str:
    return "".join(f"{name}: {text}\n" for name, text in kernel_algebra.CATALOG.items())


# --- Parser ---


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-terms", type=int, default=None, help="términos máximos por serie")
    common.add_argument("--tail-tol", type=float, default=None, help="tolerancia de cola")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    common.add_argument("--out", default=None, help="archivo de salida (por defecto stdout)")

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument("--kernel", default="rl", help="nombre[:clave=valor,...]")

    order = argparse.ArgumentParser(add_help=False)
    order.add_argument("--alpha", type=float, required=True)
    order.add_argument("--beta", type=float, default=0.0)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--interval", default="0,1", help="a,b")
    grid.add_argument("--n", type=int, default=settings.grid_intervals, help="subintervalos N")

    operator = [common, kernel, order, grid]

    parser = argparse.ArgumentParser(
        prog="genfrac",
        description="Cálculo fraccionario con núcleos analíticos generales.",
        epilog="Funciones: const:c | power:mu | poly:c0,c1,... | exp:k | csv:ARCHIVO | expr:EXPR",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERBO")

    def add(name: str, handler: Handler, parents: list, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, parents=parents, help=help_text)
        cmd.set_defaults(handler=handler)
        return cmd

    cmd = add("integrate", cmd_integrate, operator, "aplica ᴬI^{α,β} a f")
    cmd.add_argument("--f", required=True)
    cmd.add_argument("--method", choices=["series", "direct"], default="series")

    cmd = add("differentiate", cmd_differentiate, operator, "derivada asociada (RL o Caputo)")
    cmd.add_argument("--f", required=True)
    cmd.add_argument("--flavor", choices=["rl", "caputo"], default="rl")

    cmd = add("leibniz", cmd_leibniz, operator, "regla de Leibniz truncada para ᴬI(f·g)")
    cmd.add_argument("--f", required=True)
    cmd.add_argument("--g", required=True)
    cmd.add_argument("--M", type=int, default=2)

    cmd = add("chain", cmd_chain, operator, "regla de la cadena truncada para ᴬI(f∘g)")
    cmd.add_argument("--f", required=True, help="función exterior en forma cerrada")
    cmd.add_argument("--g", required=True, help="función interior en forma cerrada")
    cmd.add_argument("--M", type=int, default=4)

    cmd = add("symbol", cmd_symbol, [common, kernel, order], "símbolo de Laplace o de Fourier")
    cmd.add_argument("--kind", choices=["laplace", "fourier"], default="laplace")
    cmd.add_argument("--s", default=None, help="punto con Re(s) > 0 (admite 1+2j)")
    cmd.add_argument("--k", type=float, default=None, help="frecuencia real no nula")

    cmd = add("solve-linear", cmd_solve_linear, operator, "resuelve ᴬI f + c·f = g")
    cmd.add_argument("--c", type=float, required=True)
    cmd.add_argument("--g", required=True)
    cmd.add_argument("--tol", type=float, default=1e-10)
    cmd.add_argument("--max-iter", type=int, default=200)

    cmd = add("solve-cauchy", cmd_solve_cauchy, [common], "problema de Cauchy por ventanas")
    cmd.add_argument("--problem", required=True, type=Path)
    cmd.add_argument("--n-per-step", type=int, default=64)
    cmd.add_argument("--tol", type=float, default=None)
    cmd.add_argument("--max-picard", type=int, default=None)

    cmd = add("psi-integrate", cmd_psi_integrate, operator, "operador respecto de ψ")
    cmd.add_argument("--psi", required=True, help="identity | log | power:rho=… | powsigma:sigma=…")
    cmd.add_argument("--f", required=True)
    cmd.add_argument("--psi-method", choices=["resample", "nodal"], default="resample")

    cmd = add("check-semigroup", cmd_check_semigroup, [common, kernel], "residuos de semigrupo")
    cmd.add_argument("--alpha1", type=float, required=True)
    cmd.add_argument("--alpha2", type=float, required=True)
    cmd.add_argument("--beta", type=float, default=0.0)
    cmd.add_argument("--kmax", type=int, default=8)

    cmd = add("check-inverse", cmd_check_inverse, [common, kernel, order], "residuos Ā_Γ·A_Γ = 1")
    cmd.add_argument("--kmax", type=int, default=8)

    add("catalog", cmd_catalog, [common], "lista los núcleos del catálogo")
    return parser


# --- Ejecución ---


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ejecuta la CLI con los argumentos dados y devuelve el código de salida.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        configure_logging(args.log_level)
        output = args.handler(args)
    except GenFracError as e:
        print(f"error [{type(e).__name__}]: {str(e)}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error [ValidationError]: {str(e)}", file=sys.stderr)
        return EXIT_DOMAIN
    except argparse.ArgumentTypeError as e:
        print(f"error [uso]: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.debug("error inesperado", exc_info=True)
        print(f"error inesperado [{type(e).__name__}]: {str(e)}", file=sys.stderr)
        return EXIT_UNEXPECTED

    _emit(output, args.out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
