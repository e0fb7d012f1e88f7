"""Command-line front end.

Exit codes: 0 success, 1 a checked constraint fails, 2 invalid document,
3 consistency failure, 4 internal error, 5 deadline exceeded; ``equiv``
returns 10 for inequivalent and 11 for undecided.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import click

from .birational import verify_inverse
from .documents import DocumentError, load_document
from .groebner import BACKEND, Deadline, DeadlineExceeded
from .implicitize import (
    EmptyParameterSpaceSuspected,
    NonLinearEquations,
    ParameterSampler,
    RegionSamplingExhausted,
    check_point,
    markov_property,
    model_equiv,
    vanishing_ideal,
    vanishing_ideal_by_elimination,
)

EXIT_FAIL = 1
EXIT_SCHEMA = 2
EXIT_CONSISTENCY = 3
EXIT_INTERNAL = 4
EXIT_DEADLINE = 5
EXIT_INEQUIVALENT = 10
EXIT_UNDECIDED = 11

BENCH_FIELDS = ("label", "family", "method", "status", "seconds", "generators", "max_degree", "hash", "backend")


def _emit(obj, as_json: bool, text: str) -> None:
    if as_json:
        click.echo(json.dumps(obj, indent=2, sort_keys=True))
    else:
        click.echo(text)


def _deadline(seconds: float | None) -> Deadline | None:
    return Deadline(seconds) if seconds else None


def _guard(fn):
    """Map library exceptions onto the exit-code contract."""

    def run(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except DocumentError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_SCHEMA)
        except (EmptyParameterSpaceSuspected, RegionSamplingExhausted, NonLinearEquations) as exc:
            click.echo(f"consistency: {exc}", err=True)
            sys.exit(EXIT_CONSISTENCY)
        except DeadlineExceeded as exc:
            click.echo(f"deadline: {exc}", err=True)
            sys.exit(EXIT_DEADLINE)
        except click.exceptions.Exit:
            raise
        except Exception as exc:  # noqa: BLE001 - the contract maps everything else to 4
            click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)
        sys.exit(code or 0)

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Implicit descriptions of ambirational statistical models.

    FILE arguments are JSON model documents or names of bundled examples
    (see `ambikit list`).
    """


@main.command("list")
def list_cmd():
    """List the bundled example documents."""
    from .documents import bundled, bundled_names

    for name in bundled_names():
        click.echo(f"{name}\t{bundled(name).label}")


@main.command()
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
@click.option("--seed", default=0, show_default=True, help="Seed for the interior-point check.")
@_guard
def markov(file, as_json, seed):
    """Print the Markov property (equations, inequalities, inequations, positivities)."""
    doc = load_document(file)
    mp = markov_property(doc.build(), seed)
    _emit(mp.to_json(), as_json, str(mp))


@main.command()
@click.argument("file")
@click.option("--method", type=click.Choice(["saturation", "elimination"]), default="saturation",
              show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--timeout-seconds", type=float, default=None)
@_guard
def vanishing(file, method, as_json, timeout_seconds):
    """Print the vanishing ideal of the model."""
    doc = load_document(file)
    m = doc.build()
    I = _vanishing(m, method, _deadline(timeout_seconds))
    _emit(I.to_json(), as_json, str(I))


def _vanishing(m, method, deadline):
    if method == "saturation":
        return vanishing_ideal(m, deadline)
    return vanishing_ideal_by_elimination(m, deadline)


@main.command()
@click.argument("file1")
@click.argument("file2")
@click.option("--mode", type=click.Choice(["exact", "zariski"]), default="exact", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@_guard
def equiv(file1, file2, mode, seed, as_json):
    """Decide model equivalence (exit 0 equivalent, 10 inequivalent, 11 undecided)."""
    m1, m2 = load_document(file1).build(), load_document(file2).build()
    if m1.model_vars != m2.model_vars:
        raise DocumentError("the two models use different coordinates")
    v = model_equiv(m1, m2, mode, seed)
    lines = [v.result]
    for c in v.certificates:
        detail = f"residual {c['residual']}" if "residual" in c else f"value {c['value']} at {c['point']}"
        lines.append(f"  {c['source']} model {c['kind']}: {c['constraint']} ({detail})")
    lines += [f"  note: {n}" for n in v.notes]
    _emit(v.to_json(), as_json, "\n".join(lines))
    return {"equivalent": 0, "inequivalent": EXIT_INEQUIVALENT, "undecided": EXIT_UNDECIDED}[v.result]


def _parse_point(text: str) -> dict:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"point is not a JSON object: {exc}") from exc
    if not isinstance(raw, dict):
        raise DocumentError("point must be a JSON object mapping names to rationals")
    try:
        return {k: Fraction(str(v)) for k, v in raw.items()}
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coordinate value: {exc}") from exc


@main.command()
@click.argument("file")
@click.option("--point", default=None, help="Model point: JSON object or file, values as rationals.")
@click.option("--params", default=None, help="Parameter point; the model point is its image.")
@click.option("--sample", is_flag=True, help="Use the image of a seeded interior parameter sample.")
@click.option("--seed", default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@_guard
def check(file, point, params, sample, seed, as_json):
    """Evaluate every constraint at a point (exit 1 if any fails)."""
    m = load_document(file).build()
    if sum(x is not None and x is not False for x in (point, params, sample or None)) != 1:
        raise DocumentError("give exactly one of --point, --params, --sample")
    if point is not None:
        x = _parse_point(point)
    else:
        theta = _parse_point(params) if params is not None else ParameterSampler(m, seed).sample()
        missing = set(m.param_vars.names) - set(theta)
        if missing:
            raise DocumentError(f"parameter point lacks {sorted(missing)}")
        x = m.iso.alpha(theta)
    missing = set(m.model_vars.names) - set(x)
    if missing:
        raise DocumentError(f"point lacks coordinates {sorted(missing)}")
    mp = markov_property(m, seed)
    rows = check_point(mp, x)
    ok = all(r.holds for r in rows)
    text = "\n".join(
        f"{'holds' if r.holds else 'FAILS'}  {r.kind:<10} {r.polynomial}  [value {r.value}]" for r in rows
    )
    _emit({"ok": ok, "point": {k: str(v) for k, v in x.items()}, "checks": [r.to_json() for r in rows]},
          as_json, text)
    return 0 if ok else EXIT_FAIL


def bench_row(file: str, method: str, timeout_seconds: float | None) -> dict:
    """One benchmark measurement; a deadline is reported as a ``timeout`` row."""
    doc = load_document(file)
    m = doc.build()
    start = time.perf_counter()
    try:
        I = _vanishing(m, method, _deadline(timeout_seconds))
    except DeadlineExceeded:
        secs = time.perf_counter() - start
        return dict(label=m.label, family=m.family, method=method, status="timeout", seconds=f"{secs:.3f}",
                    generators="", max_degree="", hash="", backend=BACKEND)
    secs = time.perf_counter() - start
    digest = hashlib.sha256("\n".join(sorted(I.strings())).encode()).hexdigest()[:16]
    return dict(label=m.label, family=m.family, method=method, status="ok", seconds=f"{secs:.3f}",
                generators=len(I), max_degree=max((g.total_degree() for g in I.gens), default=0),
                hash=digest, backend=BACKEND)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("AMBIKIT_THREADS", "1")))
    except ValueError:
        return 1


@main.command()
@click.argument("files", nargs=-1, required=True)
@click.option("--method", type=click.Choice(["saturation", "elimination"]), default="saturation",
              show_default=True)
@click.option("--timeout-seconds", type=float, default=None)
@click.option("--header/--no-header", default=True, show_default=True)
@_guard
def bench(files, method, timeout_seconds, header):
    """Time the vanishing-ideal computation; print one CSV row per document.

    Several documents run in parallel worker processes, at most
    AMBIKIT_THREADS at a time.
    """
    for f in files:
        load_document(f)
    workers = min(_workers(), len(files))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(bench_row, files, [method] * len(files), [timeout_seconds] * len(files)))
    else:
        rows = [bench_row(f, method, timeout_seconds) for f in files]
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_FIELDS, lineterminator="\n")
    if header:
        w.writeheader()
    w.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


@main.command()
@click.argument("file")
@click.option("--both", is_flag=True, help="Also check alpha after beta.")
@click.option("--json", "as_json", is_flag=True)
@_guard
def verify(file, both, as_json):
    """Exact check that the inverse map inverts the parametrization (exit 3 on failure)."""
    m = load_document(file).build()
    rep = verify_inverse(m.iso, both)
    text = "ok" if rep.ok else "\n".join(f"FAILS {v} ({d}): {r}" for v, d, r in rep.failures)
    _emit(rep.to_json(), as_json, text)
    return 0 if rep.ok else EXIT_CONSISTENCY


if __name__ == "__main__":  # pragma: no cover
    main()
