"""Command-line front end.

Every command runs the shared service handlers in-process by default; with
--server URL it posts the same request to a running HTTP instance instead.
Output is JSON lines (one object per line, fixed key order) unless
--format pretty is given.  Exit codes: 0 success / all checks pass,
1 usage error, 2 data error, 3 verification failure.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

from .formdb import DataError
from .service import handlers
from .service.models import (InterpRequest, LValueRequest, QexpRequest,
                             VerifyRequest)


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _int_list(text: str | None) -> list[int] | None:
    """Parse '12', '4,6,8', or '0..5' (inclusive) into a list."""
    if text is None:
        return None
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise click.UsageError(f"bad integer list {text!r}") from None
    if not out:
        raise click.UsageError(f"empty integer list {text!r}")
    return out


def _remote(server: str, method: str, path: str, payload: dict | None = None) -> dict:
    try:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            if method == "GET":
                resp = client.get(path)
            else:
                resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        _fail(f"cannot reach {server}: {exc}", 2)
    if resp.status_code == 200:
        return resp.json()
    try:
        message = resp.json().get("error", resp.text)
    except json.JSONDecodeError:
        message = resp.text
    _fail(message, 1 if resp.status_code == 400 else 2)


def _common(fn):
    fn = click.option("--format", "fmt", type=click.Choice(["json", "pretty"]),
                      default="json", show_default=True,
                      help="JSON lines or human-readable text.")(fn)
    fn = click.option("--server", default=None, metavar="URL",
                      help="Post to a running service instead of computing "
                           "in-process.")(fn)
    return fn


@click.group()
def cli():
    """Exact q-expansions, character sums, L-values, and interpolation
    factors for pairs of eigenforms."""


@cli.command()
@click.argument("spec", nargs=-1, required=True)
@click.option("--prec", default=10, show_default=True,
              help="Number of q-expansion coefficients a_0..a_{prec-1}.")
@_common
def qexp(spec, prec, fmt, server):
    """Print a q-expansion from a spec string.

    SPEC examples: `eisE k=2 N=4 p=3`, `scriptE k1=12 k2=2 j=10 chi=quad3
    N=4 p=3`, `tilde k1=12 k2=2 j=10 chi=quad3 N=4 p=3`,
    `form 11.2.a.a`, `form 1.12.a.a stab=alpha p=5`.
    """
    text = " ".join(spec)
    if server:
        data = _remote(server, "POST", "/qexp",
                       QexpRequest(spec=text, prec=prec).model_dump())
    else:
        data = handlers.handle_qexp(QexpRequest(spec=text, prec=prec)).model_dump()
    if fmt == "json":
        click.echo(_dumps(data))
        return
    click.echo(f"spec: {data['spec']}")
    click.echo(f"weight: {data['weight']}")
    click.echo(f"level: {data['level']}")
    for n, c in enumerate(data["coefficients"]):
        click.echo(f"a_{n} = {_dumps(c)}")


@cli.command()
@click.argument("suite", type=click.Choice(["slice", "twist", "euler", "all"]))
@click.option("--k1", default=None, help="Weight(s), e.g. 12 or 4..14.")
@click.option("--k2", default=None, help="Weight(s), e.g. 2 or 1,2,3.")
@click.option("--tau", default=None, help="Twist exponent(s), e.g. 0..5.")
@click.option("--j", default=None, help="Evaluation point(s) for twist.")
@click.option("--chi", default=None, metavar="LABEL",
              help="Character label (triv, quad<M>, <M>.<n>, or JSON).")
@click.option("--p", default=None, type=int, help="Working prime.")
@click.option("--N", "n_level", default=4, show_default=True, type=int,
              help="Tame level N of the Eisenstein family.")
@click.option("--prec", default=None, type=int,
              help="q-precision (default 200 for slice, 100 for twist).")
@click.option("--finite", is_flag=True,
              help="Add the finite-weight-character slice triples.")
@click.option("--f1", default=None, metavar="LABEL", help="First eigenform.")
@click.option("--f2", default=None, metavar="LABEL", help="Second eigenform.")
@click.option("--lmax", default=97, show_default=True, type=int,
              help="Largest prime checked by the euler suite.")
@click.option("--power-bound", default=10**4, show_default=True, type=int,
              help="Largest prime power checked by the euler suite.")
@_common
def verify(suite, k1, k2, tau, j, chi, p, n_level, prec, finite, f1, f2,
           lmax, power_bound, fmt, server):
    """Run an identity verification suite; exit 0 iff every case passes."""
    req = VerifyRequest(
        suite=suite, k1=_int_list(k1), k2=_int_list(k2), tau=_int_list(tau),
        j=_int_list(j), chi=chi, p=p, N=n_level, prec=prec, finite=finite,
        f1=f1, f2=f2, lmax=lmax, power_bound=power_bound,
    )
    if server:
        data = _remote(server, "POST", "/verify", req.model_dump())
    else:
        data = handlers.handle_verify(req).model_dump()
    if fmt == "json":
        for case in data["cases"]:
            click.echo(_dumps(case))
        click.echo(_dumps({"suite": data["suite"], "total": data["total"],
                           "passed": data["passed"], "ok": data["ok"]}))
    else:
        for case in data["cases"]:
            mark = "PASS" if case["ok"] else "FAIL"
            params = " ".join(f"{k}={v}" for k, v in case["params"].items())
            line = f"{mark} {case['case']} {params} prec={case['prec']}"
            if not case["ok"]:
                where = (f" first mismatch q^{case['first_mismatch']}"
                         if case["first_mismatch"] is not None else "")
                line += f"{where} ({case['detail']})"
            click.echo(line)
        click.echo(f"{data['passed']}/{data['total']} cases pass")
    if not data["ok"]:
        sys.exit(3)


@cli.command()
@click.argument("f1")
@click.argument("f2")
@click.option("--j", required=True, type=int, help="Evaluation point s = j.")
@click.option("--chi", default="triv", show_default=True, metavar="LABEL",
              help="Twisting character.")
@click.option("--digits", default=50, show_default=True, type=int)
@click.option("--nmax", default=10**5, show_default=True, type=int,
              help="Summation truncation.")
@click.option("--route", default="convolution", show_default=True,
              type=click.Choice(["convolution", "euler"]),
              help="Coefficient assembly route.")
@_common
def lvalue(f1, f2, j, chi, digits, nmax, route, fmt, server):
    """Evaluate the imprimitive Rankin-Selberg L-value at s = j."""
    req = LValueRequest(f1=f1, f2=f2, j=j, chi=chi, digits=digits, nmax=nmax,
                        route=route)
    if server:
        data = _remote(server, "POST", "/lvalue", req.model_dump())
    else:
        data = handlers.handle_lvalue(req).model_dump()
    if fmt == "json":
        click.echo(_dumps(data))
        return
    click.echo(f"L({data['s']}) = {data['re']} + {data['im']}*i")
    click.echo(f"digits: {data['digits']}  n_max: {data['n_max']}  "
               f"route: {data['route']}")
    click.echo(f"certified tail bound: {data['tail_bound']}")
    for w in data["warnings"]:
        click.echo(f"note: {w}")


@cli.command()
@click.argument("f1")
@click.argument("f2")
@click.option("--j", required=True, type=int, help="Evaluation point.")
@click.option("--chi", default="triv", show_default=True, metavar="LABEL")
@click.option("--digits", default=50, show_default=True, type=int)
@click.option("--lvalue", default=None, metavar="DECIMAL",
              help="Externally supplied L-value (required when j lies "
                   "outside the region of absolute convergence).")
@click.option("--p", default=None, type=int,
              help="Stabilisation prime (inferred from chi when possible).")
@click.option("--stab1", default="alpha", show_default=True,
              type=click.Choice(["alpha", "beta"]),
              help="Root choice when stabilising the first form.")
@click.option("--stab2", default="alpha", show_default=True,
              type=click.Choice(["alpha", "beta"]),
              help="Root choice when stabilising the second form.")
@click.option("--petersson", default=None, metavar="DECIMAL",
              help="Petersson norm override for the first form.")
@_common
def interp(f1, f2, j, chi, digits, lvalue, p, stab1, stab2, petersson, fmt,
           server):
    """Predicted period value, dissected into its interpolation factors."""
    req = InterpRequest(f1=f1, f2=f2, j=j, chi=chi, digits=digits,
                        lvalue=lvalue, p=p, stab1=stab1, stab2=stab2,
                        petersson=petersson)
    if server:
        data = _remote(server, "POST", "/interp", req.model_dump())
    else:
        data = handlers.handle_interp(req).model_dump()
    if fmt == "json":
        click.echo(_dumps(data))
    else:
        for name in ("euler_ratio", "archimedean", "gauss_block", "lvalue"):
            val = data[name]
            tag = "exact" if data["exact"].get(name) else "numeric"
            click.echo(f"{name}: {val['re']} + {val['im']}*i  [{tag}]")
        click.echo(f"total: {data['total']['re']} + {data['total']['im']}*i")
        click.echo(f"regime: {data['regime']}")
        if data["routes_match"] is not None:
            mark = "PASS" if data["routes_match"] else "FAIL"
            click.echo(f"prefactor route equality: {mark}")
        for w in data["warnings"]:
            click.echo(f"note: {w}")
    if data["routes_match"] is False:
        sys.exit(3)


@cli.command()
@click.argument("label", required=False)
@_common
def forms(label, fmt, server):
    """List eigenform records, or print one record as JSON."""
    if server:
        data = _remote(server, "GET", f"/forms/{label}" if label else "/forms")
    elif label:
        data = handlers.handle_form(label).model_dump()
    else:
        data = handlers.handle_forms().model_dump()
    if fmt == "json":
        click.echo(_dumps(data))
    elif label:
        click.echo(json.dumps(data["record"], indent=2))
    else:
        for name in data["labels"]:
            click.echo(name)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--data-dir", default=None, type=click.Path(),
              help="Eigenform record directory (default: packaged data or "
                   "RANKIN_DATA_DIR).")
def serve(host, port, data_dir):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(data_dir), host=host, port=port)


def main():
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except handlers.SpecError as exc:
        _fail(str(exc), 1)
    except DataError as exc:
        _fail(str(exc), 2)
    except (ValueError, ZeroDivisionError) as exc:
        _fail(str(exc), 2)


if __name__ == "__main__":
    main()
