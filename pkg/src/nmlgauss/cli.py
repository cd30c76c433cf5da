"""Command-line interface.

Usage:
    nmlgauss atten --n 2 --alpha 1 --sigma-min 1 --sigma-max 1
    nmlgauss atten --n 3 --alpha 1 --method mc --samples 1000000 --seed 7
    nmlgauss scan --alpha 1 --sigma-min 0.5 --sigma-max 2 --powers-of-two 10
    nmlgauss verify --only in --n 1000
    nmlgauss mle --alpha 1 data.txt
    nmlgauss logq --alpha 1 data.txt
    nmlgauss envelope --alpha 1 --x-min -5 --x-max 5 --points 101
    nmlgauss in --n 10

Structured output goes to stdout, diagnostics to stderr.  Exit codes:
0 success, 2 invalid parameters, 3 a verification check failed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Iterable

import click

from . import kernels
from .attenuation import (
    AttenuationResult,
    Method,
    atten_approx,
    atten_exact,
    compute_In,
    exact_terms,
)
from .core import GaussianClass, SufficientStats, ml_estimate
from .errors import ConvergenceError, DomainError, IllConditionedProposalError
from .report import GROUPS, SIGMAS, run_checks
from .universal import UniversalDensity, codelength_bits, log_q_star
from .verify import mc_atten, mc_In, quadrature_atten_1d, quadrature_atten_2d

__all__ = ["main", "cli", "to_json"]

EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3
DEFAULT_SEED = 0


class CheckFailed(Exception):
    """Carries fully rendered output for a run whose checks failed."""

    def __init__(self, text: str):
        super().__init__("verification check failed")
        self.text = text


def _num(value: float, digits: int) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "null"
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, f".{digits}g")


def to_json(obj, digits: int = 17) -> str:
    """JSON with floats at a fixed number of significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj, digits)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        body = ", ".join(f"{to_json(str(k))}: {to_json(v, digits)}" for k, v in obj.items())
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v, digits) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _human(value, digits: int = 6) -> str:
    if isinstance(value, float):
        return _num(value, digits).strip('"')
    return str(value)


def _envelope(config: dict, result, checks) -> dict:
    return {"config": config, "result": result, "checks": checks}


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(doc) + "\n"
    lines = []
    result = doc.get("result")
    if isinstance(result, dict):
        for key, value in result.items():
            if isinstance(value, dict):
                value = ", ".join(f"{k}={_human(v)}" for k, v in value.items())
            lines.append(f"{key:<18} {_human(value)}")
    for check in doc.get("checks") or []:
        status = "PASS" if check["passed"] else "FAIL"
        err = check.get("error")
        tol = check.get("tolerance")
        lines.append(
            f"{status} {check['name']}  value={_human(check.get('value'))}"
            f"  error={_human(err)}  tol={_human(tol)}"
        )
    return "\n".join(lines) + "\n"


def _emit(doc: dict, fmt: str) -> None:
    text = _render(doc, fmt)
    checks = doc.get("checks") or []
    if any(not c["passed"] for c in checks):
        raise CheckFailed(text)
    click.echo(text, nl=False)


def _class_options(f):
    f = click.option("--sigma-max", type=float, default=1.0, show_default=True, help="Upper std-dev bound.")(f)
    f = click.option("--sigma-min", type=float, default=1.0, show_default=True, help="Lower std-dev bound.")(f)
    f = click.option("--alpha", type=float, default=1.0, show_default=True,
                     help="Width of the mean range [-alpha/2, alpha/2].")(f)
    return f


def _format_option(default: str = "json", choices: Iterable[str] = ("json", "human")):
    return click.option("--format", "fmt", type=click.Choice(list(choices)), default=default, show_default=True)


def _mc_options(f):
    f = click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
                     help="Worker threads; never changes results.")(f)
    f = click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), envvar="NMLG_SEED",
                     default=DEFAULT_SEED, show_default=True, help="Root seed (env NMLG_SEED).")(f)
    f = click.option("--samples", type=click.IntRange(min=10_000), default=1_000_000, show_default=True)(f)
    return f


def _make_class(alpha: float, sigma_min: float, sigma_max: float) -> GaussianClass:
    return GaussianClass(alpha, sigma_min, sigma_max)


def _class_config(alpha, sigma_min, sigma_max) -> dict:
    return {"alpha": alpha, "sigma_min": sigma_min, "sigma_max": sigma_max}


@click.group()
@click.version_option(package_name="artifact")
def cli() -> None:
    """Universal densities and attenuation of bounded Gaussian classes."""


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Sequence length.")
@_class_options
@click.option("--method", type=click.Choice(["exact", "approx", "quadrature", "mc"]), default="exact",
              show_default=True)
@_mc_options
@click.option("--rel-tol", type=float, default=1e-9, show_default=True, help="Quadrature tolerance.")
@_format_option()
def atten(n, alpha, sigma_min, sigma_max, method, samples, seed, threads, rel_tol, fmt):
    """Attenuation of length-n sequences from the class."""
    cls = _make_class(alpha, sigma_min, sigma_max)
    config = {"command": "atten", "n": n, **_class_config(alpha, sigma_min, sigma_max),
              "method": method, "format": fmt}
    checks = None
    if method == "exact":
        result = atten_exact(n, cls)
    elif method == "approx":
        result = atten_approx(n, cls)
    else:
        reference = atten_exact(n, cls)
        if method == "quadrature":
            config["rel_tol"] = rel_tol
            if n == 1:
                est, tol = quadrature_atten_1d(cls, rel_tol), 1e-6
            elif n == 2:
                est, tol = quadrature_atten_2d(cls, rel_tol), 1e-3
            else:
                raise DomainError("quadrature is available for n = 1 and n = 2 only; use --method mc")
            err = abs(est.value - reference.value) / reference.value
            checks = [{"name": "exact_agreement", "passed": err <= tol, "value": est.value,
                       "reference": reference.value, "error": err, "tolerance": tol}]
            result = AttenuationResult(math.log(est.value), Method.QUADRATURE, regions=est.regions)
        else:
            config.update(samples=samples, seed=seed, threads=threads)
            est = mc_atten(n, cls, samples, seed, threads)
            err = abs(est.value - reference.value)
            tol = SIGMAS * est.std_error
            checks = [{"name": "exact_agreement", "passed": err <= tol, "value": est.value,
                       "reference": reference.value, "error": err, "tolerance": tol}]
            result = AttenuationResult(math.log(est.value), Method.MONTE_CARLO, regions=est.regions,
                                       std_error=est.std_error)
    _emit(_envelope(config, result.as_dict(), checks), fmt)


SCAN_HEADER = ["n", "exact", "log_exact", "approx", "t1", "t2", "t3", "I_n", "exact_over_n",
               "exact_over_sqrt_n"]


def _scan_ns(n_min: int, n_max: int, step: int, powers: int | None) -> list[int]:
    if powers is not None:
        return [2 ** k for k in range(powers + 1)]
    if n_min > n_max:
        raise DomainError(f"--n-min {n_min} exceeds --n-max {n_max}")
    return list(range(n_min, n_max + 1, step))


@cli.command()
@_class_options
@click.option("--n-min", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--n-max", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--n-step", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--powers-of-two", "powers", type=click.IntRange(0, 40), default=None,
              help="Scan n = 1, 2, 4, ..., 2^K instead of a linear range.")
def scan(alpha, sigma_min, sigma_max, n_min, n_max, n_step, powers):
    """CSV table of exact and approximate attenuation over a range of n."""
    cls = _make_class(alpha, sigma_min, sigma_max)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    for n in _scan_ns(n_min, n_max, n_step, powers):
        exact = atten_exact(n, cls)
        approx = atten_approx(n, cls).value if n >= 2 else None
        terms = [math.exp(t) if t != -math.inf else 0.0 for t in exact_terms(n, cls)]
        row = [n, exact.value, exact.log_value, approx, *terms, compute_In(n),
               exact.value / n, exact.value / math.sqrt(n)]
        writer.writerow(["" if v is None else (v if isinstance(v, int) else _num(v, 17)) for v in row])
    click.echo(buf.getvalue(), nl=False)


@cli.command()
@click.option("--only", "only", multiple=True, type=click.Choice(sorted(GROUPS)),
              help="Run only these check groups (repeatable).")
@click.option("--n", "n", type=click.IntRange(min=2), default=None,
              help="Sequence length for the I_n group.")
@click.option("--samples", type=click.IntRange(min=10_000), default=None,
              help="Monte Carlo samples (default 10^6; 10^5 for n >= 1000 in the I_n group).")
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), envvar="NMLG_SEED", default=DEFAULT_SEED,
              show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=1000, show_default=True,
              help="Random sequences for the equalizer/dominance group.")
@_format_option()
def verify(only, n, samples, seed, threads, trials, fmt):
    """Run the cross-oracle checks; exits 3 if any fails."""
    if samples is None:
        samples = 100_000 if (n or 0) >= 1000 else 1_000_000
    config = {"command": "verify", "only": list(only) or None, "n": n, "samples": samples,
              "seed": seed, "threads": threads, "trials": trials, "backend": kernels.BACKEND,
              "format": fmt}
    checks = run_checks(list(only) or None, n=n, samples=samples, seed=seed, threads=threads,
                        trials=trials)
    summary = {"total": len(checks), "passed": sum(c.passed for c in checks)}
    _emit(_envelope(config, summary, [c.as_dict() for c in checks]), fmt)


def read_sequence(stream) -> list[float]:
    """One decimal per line; blank lines and ``#`` comments are skipped."""
    values = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            value = float(line)
        except ValueError:
            raise DomainError(f"line {lineno}: not a number: {line!r}") from None
        if not math.isfinite(value):
            raise DomainError(f"line {lineno}: non-finite value")
        values.append(value)
    if not values:
        raise DomainError("input contains no observations")
    return values


_input_argument = click.argument("source", type=click.File("r", encoding="utf-8"), default="-")


@cli.command()
@_class_options
@_input_argument
@_format_option()
def mle(alpha, sigma_min, sigma_max, source, fmt):
    """Clipped ML estimate for a sequence (file or stdin)."""
    cls = _make_class(alpha, sigma_min, sigma_max)
    stats = SufficientStats.from_sequence(read_sequence(source))
    est = ml_estimate(stats, cls)
    config = {"command": "mle", **_class_config(alpha, sigma_min, sigma_max), "format": fmt}
    result = {"n": stats.n, "mean": stats.mean, "sse": stats.sse, "mu_hat": est.mu_hat,
              "sigma_hat_sq": est.sigma_hat_sq, "log_phat": est.log_phat}
    _emit(_envelope(config, result, None), fmt)


@cli.command()
@_class_options
@_input_argument
@_format_option()
def logq(alpha, sigma_min, sigma_max, source, fmt):
    """Log universal density and code length of a sequence."""
    cls = _make_class(alpha, sigma_min, sigma_max)
    stats = SufficientStats.from_sequence(read_sequence(source))
    u = UniversalDensity.for_class(cls, stats.n)
    lq = log_q_star(u, stats)
    config = {"command": "logq", **_class_config(alpha, sigma_min, sigma_max), "format": fmt}
    result = {"n": stats.n, "log_q_star": lq, "bits": codelength_bits(u, stats),
              "log_phat": lq + u.log_atten, "log_attenuation": u.log_atten}
    _emit(_envelope(config, result, None), fmt)


@cli.command()
@_class_options
@click.option("--x-min", type=float, default=-5.0, show_default=True)
@click.option("--x-max", type=float, default=5.0, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=101, show_default=True)
def envelope(alpha, sigma_min, sigma_max, x_min, x_max, points):
    """CSV table of the single-observation envelope on a grid."""
    from .core import envelope_1d

    cls = _make_class(alpha, sigma_min, sigma_max)
    if not x_min < x_max:
        raise DomainError("--x-min must be below --x-max")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "envelope", "log_envelope"])
    for i in range(points):
        x = x_min + (x_max - x_min) * i / (points - 1)
        p = envelope_1d(x, cls)
        writer.writerow([_num(x, 17), _num(p, 17), _num(math.log(p), 17)])
    click.echo(buf.getvalue(), nl=False)


@cli.command(name="in")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--mc/--no-mc", default=False, help="Also estimate I_n by Monte Carlo.")
@_mc_options
@_format_option()
def in_cmd(n, mc, samples, seed, threads, fmt):
    """Gaussian mass I_n of the ellipsoid z^T (I + 11^T) z <= n."""
    config = {"command": "in", "n": n, "format": fmt}
    value = compute_In(n)
    result = {"n": n, "I_n": value}
    checks = None
    if mc:
        if n < 2:
            raise DomainError("Monte Carlo needs n >= 2")
        config.update(samples=samples, seed=seed, threads=threads)
        est = mc_In(n, samples, seed, threads)
        result.update(mc_estimate=est.value, std_error=est.std_error,
                      distance_to_1=abs(est.value - 1.0), distance_to_half=abs(est.value - 0.5))
        err = abs(est.value - value)
        checks = [{"name": "identity", "passed": err <= SIGMAS * est.std_error, "value": est.value,
                   "reference": value, "error": err, "tolerance": SIGMAS * est.std_error}]
    _emit(_envelope(config, result, checks), fmt)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="nmlgauss", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_INVALID
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    except CheckFailed as exc:
        click.echo(exc.text, nl=False)
        click.echo("error: verification check failed", err=True)
        return EXIT_CHECK_FAILED
    except (ConvergenceError, IllConditionedProposalError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CHECK_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
