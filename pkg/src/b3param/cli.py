"""Command-line entry point (``b3param``).

Exit codes: 0 when every check passes, 2 when a supported component (or a
verified file) fails a check, 3 for invalid configuration.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import braidrep, parametrize, quiver
from .dimvectors import enumerate_components, n_sigma, parse_sigma, tau_for
from .errors import B3Error, ConstraintViolation, FieldError, NotCyclic, UnsupportedComponent
from .linalg import matrix_from_json, matrix_to_json
from .scalars import default_prime, parse_field

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3

CSV_COLUMNS = ["sigma", "n", "n_sigma", "case", "params", "detB_ok", "braid", "central",
               "burnside", "rank_c2c3", "rank_b3", "status"]


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


def _field(spec):
    try:
        return parse_field(spec or f"fp:{default_prime()}")
    except (FieldError, ValueError) as exc:
        raise ConfigError(str(exc))


def _sigma(text):
    try:
        return parse_sigma(text)
    except ConstraintViolation as exc:
        raise ConfigError(str(exc))


def _emit(payload, out):
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}")


field_option = click.option("--field", "field_spec", default=None,
                            help="fp:P, fp or qrho (default: fp with BRAID_DEFAULT_PRIME or 2^61-1)")
seed_option = click.option("--seed", default=0, show_default=True, type=int)


@click.group()
def cli():
    """Rational parametrizations of braid group representation components."""


@cli.command()
@click.option("--n", "n", required=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "pretty"]), default="json")
def components(n, fmt):
    """List every component for dimension N."""
    if n < 1:
        raise ConfigError("n must be positive")
    rows = []
    for s in enumerate_components(n):
        row = {"sigma": str(s), "n_sigma": n_sigma(s)}
        try:
            tau, case = tau_for(s)
            row.update(case=case.name, tau=list(tau.as_tuple()), status="supported")
        except UnsupportedComponent as exc:
            row.update(case=None, tau=None, status=f"unsupported ({exc.reason})")
        rows.append(row)
    if fmt == "json":
        _emit({"n": n, "components": rows}, None)
    else:
        for r in rows:
            click.echo(f"{r['sigma']:<16} n_sigma={r['n_sigma']:<4} {r['status']}")


@cli.command()
@click.option("--sigma", "sigma_text", required=True)
@click.option("--out", default=None)
def plan(sigma_text, out):
    """Print the symbolic layout report for a component."""
    s = _sigma(sigma_text)
    try:
        p = parametrize.plan_component(s)
    except UnsupportedComponent as exc:
        raise ConfigError(str(exc))
    payload = p.to_json()
    payload["n_sigma"] = n_sigma(s)
    payload["params"] = parametrize.count_parameters(p)
    _emit(payload, out)


def build_payload(s, field, seed):
    p = parametrize.plan_component(s)
    B, point = parametrize.instantiate(p, field, seed)
    mu = point.values[p.mu_param]
    rep = braidrep.lift(B, mu, s)
    return {
        "sigma": str(s),
        "field": field.spec,
        "seed": seed,
        "parameters": p.parameter_names(),
        "assignment": point.to_json(p.registry),
        "corrections": [c.to_json() for c in p.corrections],
        "mu": field.encode(mu),
        "B": matrix_to_json(B),
        "sigma1": matrix_to_json(rep.sigma1),
        "sigma2": matrix_to_json(rep.sigma2),
    }


@cli.command()
@click.option("--sigma", "sigma_text", required=True)
@field_option
@seed_option
@click.option("--out", default=None)
def build(sigma_text, field_spec, seed, out):
    """Instantiate a component at a seeded point and lift it."""
    s = _sigma(sigma_text)
    field = _field(field_spec)
    try:
        payload = build_payload(s, field, seed)
    except UnsupportedComponent as exc:
        raise ConfigError(str(exc))
    _emit(payload, out)


def verify_payload(obj):
    field = parse_field(obj["field"])
    s = parse_sigma(obj["sigma"])
    B = matrix_from_json(obj["B"], field)
    mu = field.decode(obj["mu"])
    stored = braidrep.BraidRep(matrix_from_json(obj["sigma1"], field),
                               matrix_from_json(obj["sigma2"], field), mu, s, field)
    rebuilt = braidrep.lift(B, mu, s)
    rel = braidrep.verify_relations(stored)
    out = {
        "sigma": str(s),
        "lift_matches": rebuilt.sigma1 == stored.sigma1 and rebuilt.sigma2 == stored.sigma2,
        "braid": rel["braid"],
        "central": rel["central"],
    }
    if getattr(field, "is_prime", False):
        out["burnside"] = braidrep.burnside_dimension(stored)
        out["irreducible"] = out["burnside"] == s.n ** 2
    out["verdict"] = "pass" if all(v for k, v in out.items()
                                   if k in ("lift_matches", "braid", "central", "irreducible")) else "fail"
    return out


@cli.command()
@click.argument("path")
def verify(path):
    """Re-check a file written by ``build``."""
    obj = _load(path)
    try:
        result = verify_payload(obj)
    except (KeyError, B3Error) as exc:
        raise ConfigError(f"malformed build file: {exc}")
    _emit(result, None)
    click.get_current_context().exit(EXIT_OK if result["verdict"] == "pass" else EXIT_FAIL)


@cli.command()
@click.option("--sigma", "sigma_text", required=True)
@click.option("--mode", type=click.Choice(["c2c3", "b3"], case_sensitive=False), default="c2c3")
@click.option("--trials", default=2, show_default=True, type=int)
@field_option
@seed_option
@click.option("--cap", default=braidrep.DEFAULT_CAP, show_default=True, type=int)
def rank(sigma_text, mode, trials, field_spec, seed, cap):
    """Jacobian rank of trace coordinates at seeded points."""
    s = _sigma(sigma_text)
    field = _field(field_spec)
    if not getattr(field, "is_prime", False):
        raise ConfigError("rank needs a prime field")
    try:
        p = parametrize.plan_component(s)
    except UnsupportedComponent as exc:
        raise ConfigError(str(exc))
    results = []
    for i in range(trials):
        try:
            r = braidrep.jacobian_rank_details(p, field, seed + i, mode.lower(), cap=cap)
            results.append({"seed": seed + i, **r.to_json()})
        except B3Error as exc:
            results.append({"seed": seed + i, "rank": None, "error": str(exc)})
    best = max((r["rank"] for r in results if r["rank"] is not None), default=None)
    payload = {"sigma": str(s), "mode": mode.lower(), "n_sigma": n_sigma(s),
               "params": parametrize.count_parameters(p), "trials": results, "rank": best}
    _emit(payload, None)
    if mode.lower() == "c2c3" and best != n_sigma(s):
        click.get_current_context().exit(EXIT_FAIL)


# --------------------------------------------------------------------------
# sweeps


def _report_one(args):
    sigma_text, field_spec, trials, seed, cap = args
    return braidrep.dominance_report(parse_sigma(sigma_text), parse_field(field_spec),
                                     trials, seed, cap)


def run_sweep(n_min, n_max, field, trials=3, seed=0, cap=braidrep.DEFAULT_CAP, jobs=1) -> dict:
    if not 2 <= n_min <= n_max:
        raise ConfigError("need 2 <= from <= to")
    work = [(str(s), field.spec, trials, seed, cap)
            for n in range(n_min, n_max + 1) for s in enumerate_components(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_report_one, work))
    else:
        reports = [_report_one(w) for w in work]
    supported = [r for r in reports if r["verdict"] != "unsupported"]
    failed = [r["sigma"] for r in supported if r["verdict"] != "pass"]
    return {
        "config": {"from": n_min, "to": n_max, "field": field.spec, "trials": trials,
                   "seed": seed, "cap": cap},
        "components": reports,
        "summary": {"components": len(reports), "supported": len(supported),
                    "unsupported": len(reports) - len(supported), "failed": failed},
        "verdict": "pass" if not failed else "fail",
    }


def csv_rows(sweep: dict):
    for r in sweep["components"]:
        trials = r["trials"]
        if r["verdict"] == "unsupported":
            yield {"sigma": r["sigma"], "n": r["n"], "n_sigma": r["n_sigma"], "case": "",
                   "params": "", "detB_ok": "", "braid": "", "central": "", "burnside": "",
                   "rank_c2c3": "", "rank_b3": "", "status": f"unsupported ({r['reason']})"}
            continue
        yield {
            "sigma": r["sigma"], "n": r["n"], "n_sigma": r["n_sigma"], "case": r["case"],
            "params": r["params"],
            "detB_ok": all(t["detB"] for t in trials),
            "braid": all(t["braid"] for t in trials),
            "central": all(t["central"] for t in trials),
            "burnside": min(t["burnside"] for t in trials),
            "rank_c2c3": r["rank_c2c3"], "rank_b3": r["rank_b3"], "status": r["verdict"],
        }


def format_sweep(sweep, fmt):
    if fmt == "json":
        return json.dumps(sweep, indent=2) + "\n"
    rows = list(csv_rows(sweep))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in CSV_COLUMNS}
    lines = ["  ".join(c.ljust(widths[c]) for c in CSV_COLUMNS)]
    lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in CSV_COLUMNS) for r in rows]
    lines.append(f"verdict: {sweep['verdict']}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


@cli.command()
@click.option("--from", "n_min", required=True, type=int)
@click.option("--to", "n_max", required=True, type=int)
@field_option
@click.option("--trials", default=3, show_default=True, type=int)
@seed_option
@click.option("--cap", default=braidrep.DEFAULT_CAP, show_default=True, type=int)
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "pretty"]), default="json")
@click.option("--out", default=None)
def sweep(n_min, n_max, field_spec, trials, seed, cap, jobs, fmt, out):
    """Run every check on every component with from <= n <= to."""
    field = _field(field_spec)
    if not getattr(field, "is_prime", False):
        raise ConfigError("sweep needs a prime field")
    result = run_sweep(n_min, n_max, field, trials, seed, cap, jobs)
    text = format_sweep(result, fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    click.get_current_context().exit(EXIT_OK if result["verdict"] == "pass" else EXIT_FAIL)


# --------------------------------------------------------------------------
# quiver and linear-system utilities


@cli.group(name="quiver")
def quiver_group():
    """Quiver representation tools."""


@quiver_group.command("simple")
@click.argument("path")
@seed_option
@click.option("--absolute", is_flag=True,
              help="Also require scalar endomorphisms (simple over the algebraic closure).")
def quiver_simple(path, seed, absolute):
    """Decide whether a quiver representation (JSON) is simple."""
    obj = _load(path)
    try:
        rep = quiver.QuiverRep.from_json(obj)
        simple = quiver.meataxe_is_simple(rep, seed, absolute=absolute)
    except (KeyError, B3Error) as exc:
        raise ConfigError(f"bad representation: {exc}")
    _emit({"simple": simple, "absolute": absolute, "total_dim": rep.total_dim}, None)


@cli.group(name="sys")
def sys_group():
    """Linear system tools."""


@sys_group.command("canon")
@click.argument("path")
def sys_canon(path):
    """Companion normal form of a linear system (JSON with A, B, C)."""
    obj = _load(path)
    try:
        system = quiver.LinearSystem.from_json(obj)
    except (KeyError, B3Error) as exc:
        raise ConfigError(f"bad system: {exc}")
    try:
        canon = quiver.canonical_form(system)
    except NotCyclic as exc:
        click.echo(json.dumps({"error": str(exc)}))
        click.get_current_context().exit(EXIT_FAIL)
    payload = canon.to_json()
    payload["canonical"] = quiver.is_canonical(system)
    _emit(payload, None)


def main(argv=None):
    try:
        rv = cli.main(args=argv, prog_name="b3param", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG if not isinstance(exc, ConfigError) else exc.exit_code
    except click.exceptions.Abort:
        return 1
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
