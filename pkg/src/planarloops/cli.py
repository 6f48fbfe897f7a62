"""Command-line front end: ``planarloops <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 an internal
inconsistency such as d∘d != 0.
"""

from __future__ import annotations

from fractions import Fraction
import functools
import json
from pathlib import Path
import sys

import click

from . import cupcx, series as series_mod
from .cache import CACHE_ENV, open_cache
from .chaincore import HomologyTable, homology_table
from .diagrams import DiagramError, TLDiagram, compose as compose_diagrams, parse_diagram
from .exactlin import CoeffRing, DifferentialError, RingError
from .loops import loops_homology
from .model import ModelError, bockstein_homology_2n4, massey_power, model_homology
from .suites import SUITE_NAMES, run_suite
from .torext import ext_table_truncated_poly, tor_table, tor_with_cell

FORMATS = ("aligned", "csv", "json")


class InvalidInput(click.ClickException):
    exit_code = 2


class Inconsistent(click.ClickException):
    exit_code = 3


def _guarded(func):
    """Map domain errors onto exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DifferentialError as exc:
            raise Inconsistent(str(exc)) from None
        except (RingError, DiagramError, cupcx.CupComplexError, ModelError, KeyError) as exc:
            raise InvalidInput(str(exc).strip("'\"")) from None

    return wrapper


def _half(value: int, what: str, minimum: int = 0) -> int:
    if value % 2 or value < 2 * minimum:
        raise InvalidInput(f"{what} must be an even integer >= {2 * minimum}, got {value}")
    return value // 2


def _parameter(text: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"cannot read parameter {text!r}") from None
    return int(value) if value.denominator == 1 else value


def _ring(text: str, param: str) -> CoeffRing:
    return CoeffRing.parse(text, _parameter(param))


def _emit_table(table: HomologyTable, fmt: str) -> None:
    text = {"aligned": table.to_aligned, "csv": table.to_csv, "json": table.to_json}[fmt]()
    click.echo(text.rstrip("\n"))


def _weight_filter(table: HomologyTable, weights: str | None, ring: CoeffRing) -> HomologyTable:
    if weights is None:
        return table.collapsed()
    if not ring.weight_graded:
        raise InvalidInput(f"weight blocks need a = 0, got a = {ring.a}")
    if weights == "all":
        return table
    try:
        w = int(weights)
    except ValueError:
        raise InvalidInput(f"--weights takes 'all' or an integer, got {weights!r}") from None
    out = HomologyTable(metadata=dict(table.metadata), q_max=table.q_max)
    out.entries = {k: s for k, s in table.entries.items() if k[1] == w}
    return out


ring_option = click.option("--ring", "ring_text", default="Z", show_default=True,
                           help="Z, Q or a prime field such as F2.")
param_option = click.option("--param", default="0", show_default=True, help="The loop parameter a.")
format_option = click.option("--format", "fmt", type=click.Choice(FORMATS), default="aligned",
                             show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
              help=f"Invariant cache directory (default: ${CACHE_ENV}, else no cache).")
@click.pass_context
def main(ctx, cache_dir):
    """Exact homology of Temperley-Lieb loop complexes and their models."""
    ctx.obj = {"cache": open_cache(cache_dir)}


@main.command()
@click.option("--complex", "kind", type=click.Choice(["loops", "model"]), default="loops", show_default=True)
@click.option("--n", "n2", type=int, required=True, help="Number of boundary points 2n.")
@click.option("--i", "i2", type=int, default=0, show_default=True, help="Right points 2i (loops only).")
@ring_option
@param_option
@click.option("--max-degree", type=click.IntRange(min=0), default=None, help="Default 4 for loops, 10 for the model.")
@click.option("--normalized", is_flag=True, help="Use the normalised bar complex (loops only).")
@click.option("--weights", default=None, help="'all' for every weight block, or one weight; "
                                              "omit to sum over weights.")
@format_option
@click.pass_obj
@_guarded
def homology(obj, kind, n2, i2, ring_text, param, max_degree, normalized, weights, fmt):
    """Homology of L(0,2n,2i) or of the model M(2n)."""
    ring = _ring(ring_text, param)
    n = _half(n2, "--n", 1)
    if kind == "loops":
        i = _half(i2, "--i")
        q_max = 4 if max_degree is None else max_degree
        table = loops_homology(n, ring, q_max, i, normalized, cache=obj["cache"])
    else:
        if i2 or normalized:
            raise InvalidInput("--i and --normalized apply to the loops complex only")
        q_max = 10 if max_degree is None else max_degree
        table = model_homology(n, ring, q_max, cache=obj["cache"])
    _emit_table(_weight_filter(table, weights, ring), fmt)


@main.command()
@click.option("--n", "n2", type=int, required=True)
@click.option("--arity", type=int, default=3, show_default=True)
@ring_option
@click.pass_obj
@_guarded
def massey(obj, n2, arity, ring_text):
    """The Massey power <Phi, ..., Phi> in M(2n; R, 0)."""
    result = massey_power(_half(n2, "--n", 1), CoeffRing.parse(ring_text), arity)
    click.echo(str(result))
    if not result.defined:
        sys.exit(1)


@main.command()
@click.option("--n", "n2", type=int, default=4, show_default=True)
@click.option("--max-degree", type=click.IntRange(min=0), default=7, show_default=True)
@format_option
@_guarded
def bockstein(n2, max_degree, fmt):
    """Homology of the mod 2 Bockstein on the model for 2n = 4."""
    if n2 != 4:
        raise InvalidInput("the Bockstein is implemented for --n 4 only")
    _emit_table(bockstein_homology_2n4(max_degree).collapsed(), fmt)


@main.command()
@click.option("--which", type=click.Choice(["inn", "out", "dinn", "dout"]), required=True)
@click.option("--n", "n2", type=int, required=True)
@click.option("--i", "i2", type=int, default=0, show_default=True)
@click.option("--p", type=int, default=0, show_default=True, help="Filtration index for dinn.")
@click.option("--max-degree", type=click.IntRange(min=0), default=3, show_default=True, help="For dinn and dout.")
@ring_option
@format_option
@click.pass_obj
@_guarded
def acyclicity(obj, which, n2, i2, p, max_degree, ring_text, fmt):
    """Certify that a cup complex is acyclic; exit 1 if it is not."""
    ring = CoeffRing.parse(ring_text)
    n = _half(n2, "--n", 0 if which == "inn" else 1)
    i = _half(i2, "--i")
    if which == "inn":
        if i > n:
            raise InvalidInput("--i must not exceed --n")
        cx, q_max = cupcx.build_inn_complex(n, i, augmented=True, ring=ring), None
    elif which == "out":
        cx, q_max = cupcx.build_out_complex(n, ring), None
    elif which == "dinn":
        cx, q_max = cupcx.build_derived("DInn", n, ring, max_degree + 1, i=i, p=p), max_degree
    else:
        cx, q_max = cupcx.dout_total(n, ring, max_degree, augmented=True), max_degree
    table = homology_table(cx, q_max=q_max, cache=obj["cache"]).collapsed()
    dims = cx.total_dims()
    acyclic = all(s.is_zero for s in table.entries.values())
    if fmt == "json":
        click.echo(json.dumps({"complex": cx.name, "acyclic": acyclic,
                               "dims": {str(q): dims[q] for q in sorted(dims) if q_max is None or q <= q_max},
                               "homology": table.records()}, indent=1, default=str))
    else:
        click.echo(f"{cx.name}: {'acyclic' if acyclic else 'NOT acyclic'}")
        rows = [("q", "dim", "homology")]
        for (q, _), s in sorted(table.entries.items(), key=lambda kv: kv[0][0]):
            rows.append((str(q), str(dims.get(q, 0)), str(s)))
        sep = "," if fmt == "csv" else "  "
        widths = [0] * 3 if fmt == "csv" else [max(len(r[k]) for r in rows) for k in range(3)]
        for r in rows:
            click.echo(sep.join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    if not acyclic:
        sys.exit(1)


@main.command()
@click.option("--n", "n2", type=int, required=True)
@ring_option
@param_option
@click.option("--max-degree", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--normalized/--unreduced", default=True, show_default=True)
@click.option("--cell-coefficients", is_flag=True, help="Use S(2n,0) as the right module.")
@format_option
@click.pass_obj
@_guarded
def tor(obj, n2, ring_text, param, max_degree, normalized, cell_coefficients, fmt):
    """Tor over TL_2n(R, a) with trivial or cell-module coefficients."""
    ring = _ring(ring_text, param)
    builder = tor_with_cell if cell_coefficients else tor_table
    _emit_table(builder(_half(n2, "--n", 1), ring, max_degree, normalized, cache=obj["cache"]), fmt)


@main.command()
@click.option("--n", type=int, required=True, help="Generator count n (not 2n).")
@ring_option
@click.option("--max-degree", type=click.IntRange(min=0), default=9, show_default=True)
@format_option
@_guarded
def ext(n, ring_text, max_degree, fmt):
    """Bidegrees of Ext over R[x]/(x^(n+1)) up to total degree max-degree."""
    if n < 1:
        raise InvalidInput("--n must be >= 1")
    cells = ext_table_truncated_poly(n, CoeffRing.parse(ring_text), max_degree)
    if fmt == "json":
        click.echo(json.dumps([{"d": d, "w": w} for d, w in cells]))
    elif fmt == "csv":
        click.echo("d,w")
        for d, w in cells:
            click.echo(f"{d},{w}")
    else:
        for d, w in cells:
            click.echo(f"{d:>3}  {w:>3}")


def _read_diagram(path: str) -> TLDiagram:
    text = Path(path).read_text().strip()
    if text.startswith("{") and '"' in text:
        try:
            return TLDiagram.from_json(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: {exc}") from None
    head, sep, arcs = text.partition(":")
    try:
        m, n = (int(x) for x in head.split(","))
    except ValueError:
        raise InvalidInput(f"{path}: expected a JSON record or 'm,n: arcs'") from None
    if not sep:
        raise InvalidInput(f"{path}: expected a JSON record or 'm,n: arcs'")
    return parse_diagram(m, n, arcs)


@main.command()
@click.option("--lhs", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--rhs", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--format", "fmt", type=click.Choice(["aligned", "json"]), default="aligned", show_default=True)
@_guarded
def compose(lhs, rhs, fmt):
    """Compose two diagrams (lhs then rhs) and count closed loops."""
    result = compose_diagrams(_read_diagram(lhs), _read_diagram(rhs))
    if fmt == "json":
        click.echo(json.dumps({"loops": result.loops, "diagram": result.diagram.to_record()}))
    else:
        click.echo(f"loops={result.loops}")
        click.echo(str(result.diagram))


@main.command()
@click.argument("name", type=click.Choice(series_mod.NAMES))
@click.option("--order", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["aligned", "json"]), default="aligned", show_default=True)
def series(name, order, fmt):
    """Expand a closed-form generating function."""
    coeffs = series_mod.series(name, order)
    click.echo(json.dumps(coeffs) if fmt == "json" else ",".join(map(str, coeffs)))


@main.command()
@click.option("--suite", type=click.Choice(SUITE_NAMES), default="all", show_default=True)
@_guarded
def verify(suite):
    """Run a verification suite; exit 1 if any check fails."""
    results = run_suite(suite, progress=click.echo)
    failed = sum(not r.passed for r in results)
    click.echo(f"{len(results) - failed}/{len(results)} checks passed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
