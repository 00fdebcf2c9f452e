"""Command-line entry point: ``pamreach <command> [options]``.

Exit codes: 0 for a definite answer, 3 when the answer is Unknown, 4 for
input or domain errors (click itself uses 2 for usage errors).
"""
from __future__ import annotations

import json
import logging
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from . import beta as betamod
from .errors import PamError
from .exactnum import PrimeBasis, format_rational
from .formats import decimal, dump_pam, load_pam, write_csv, write_density
from .pam import CapExceeded, Cycle, Hit, Interval, iterate_orbit, structure_report, validate
from .reach import coeff_matrix_and_signs, decide_reach_bounded, decide_reach_weight, simulate_reach
from .seqlab import (
    DynamicInterval,
    beta_fractional_orbit,
    dynamic_hit_frequency,
    first_failure,
    mahler_sequence,
    mahler_stream,
    multiples,
    pam_orbit,
    schedule,
    star_discrepancy,
    theorem5_scan,
)
from .transfer import StepDensity, density_bounds, dyadic_bins, empirical_histogram, iterate_transfer

log = logging.getLogger("pamreach")

EXIT_OK = 0
EXIT_UNKNOWN = 3
EXIT_ERROR = 4

COMMANDS = (
    "validate", "orbit", "reach", "beta-build", "beta-digits", "tds",
    "density", "theorem5", "mahler", "hitfreq",
)


@dataclass
class ExperimentConfig:
    command: str
    pam: Optional[Path] = None
    x: Optional[Fraction] = None
    y: Optional[Fraction] = None
    cap: int = 10_000
    depth: int = 64
    beta: Optional[Fraction] = None
    variant: str = "greedy"
    basis: Optional[PrimeBasis] = None
    kmin: Optional[Fraction] = None
    kmax: Optional[Fraction] = None
    out: Optional[Path] = None
    format: str = "csv"
    seed: int = 0
    merge_cap: int = 100_000
    steps: int = 10
    n: int = 1000
    i: int = 4
    bins: int = 4
    generator: str = "multiples"
    theta: Optional[Fraction] = None
    interval: tuple = ("0", "1/2")
    p: int = 2
    schedule: str = "n"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("cap", "depth", "merge_cap", "steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.pam is not None and not Path(self.pam).exists():
            raise FileNotFoundError(self.pam)


def _need(cfg: ExperimentConfig, *names: str):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise click.UsageError(f"{cfg.command} needs --{', --'.join(missing)}")


def _emit(cfg: ExperimentConfig, payload: dict):
    """Print a one-screen summary; JSON when ``--format json``."""
    if cfg.format == "json":
        click.echo(json.dumps(payload, indent=2, default=str))
    else:
        for k, v in payload.items():
            click.echo(f"{k}: {v}")


def _verdict_name(v) -> str:
    if isinstance(v, Hit):
        return f"Hit({v.step})"
    if isinstance(v, Cycle):
        return f"Cycle({v.preperiod}, {v.period})"
    return "CapExceeded"


def _orbit_rows(rec):
    for i, x in enumerate(rec.points):
        piece = rec.piece_trace[i] if i < len(rec.piece_trace) else ""
        yield i, x, decimal(x), piece


def _cmd_validate(cfg):
    f = load_pam(cfg.pam, check=False)
    report = validate(f)
    payload = {"label": f.label, "pieces": len(f.pieces), "deterministic": f.deterministic, "valid": report.ok}
    if report.violations:
        payload["violations"] = report.violations
    s = structure_report(f)
    payload.update(injective=s.injective, complete=s.complete, continuous_on_circle=s.continuous_on_circle,
                   degree=s.degree, zero_slopes=s.zero_slopes)
    _emit(cfg, payload)
    return EXIT_OK if report.ok else EXIT_ERROR


def _cmd_orbit(cfg):
    _need(cfg, "pam", "x")
    f = load_pam(cfg.pam)
    rec = iterate_orbit(f, cfg.x, cfg.cap, target=cfg.y)
    if cfg.out:
        write_csv(cfg.out, ("index", "point", "point_decimal", "piece"), _orbit_rows(rec))
    _emit(cfg, {"verdict": _verdict_name(rec.verdict), "points": len(rec.points)})
    return EXIT_UNKNOWN if isinstance(rec.verdict, CapExceeded) else EXIT_OK


def _cmd_reach(cfg):
    _need(cfg, "pam", "x", "y")
    f = load_pam(cfg.pam)
    sign_ok = False
    if all(a != 0 for a in f.slopes):
        _, sign_ok = coeff_matrix_and_signs(f, cfg.basis)
    if sign_ok:
        verdict = decide_reach_weight(f, cfg.x, cfg.y, cfg.cap, cfg.basis)
    elif cfg.kmin is not None and cfg.kmax is not None:
        verdict = decide_reach_bounded(f, cfg.kmin, cfg.kmax, cfg.x, cfg.y, cfg.cap, cfg.basis)
    else:
        verdict = simulate_reach(f, cfg.x, cfg.y, cfg.cap)
    log.info("reach: decider=%s", verdict.decider)
    if cfg.out:
        write_csv(cfg.out, ("index", "point", "point_decimal", "piece"), _orbit_rows(verdict.certificate))
    payload = {"verdict": str(verdict), "decider": verdict.decider, "conditional": verdict.conditional}
    payload.update({k: v for k, v in verdict.details.items() if k in ("basis", "h", "threshold", "M1")})
    _emit(cfg, payload)
    return EXIT_OK if verdict.definite else EXIT_UNKNOWN


def _cmd_beta_build(cfg):
    _need(cfg, "beta")
    text = dump_pam(betamod.build_beta_pam(cfg.beta, cfg.variant))
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        click.echo(text, nl=False)
    return EXIT_OK


def _cmd_beta_digits(cfg):
    _need(cfg, "beta", "x")
    seq = betamod.digit_stream(cfg.beta, cfg.variant, cfg.x, cfg.depth)
    if cfg.out:
        rows = ((i, d, x, decimal(x)) for i, (d, x) in enumerate(zip(seq.digits, seq.orbit)))
        write_csv(cfg.out, ("index", "digit", "point", "point_decimal"), rows)
    _emit(cfg, {"digits": str(seq), "periodic": seq.periodic_suffix})
    return EXIT_OK


def _cmd_tds(cfg):
    _need(cfg, "beta", "x")
    ans = betamod.tds01_decide(cfg.beta, cfg.x, cfg.depth)
    payload = {"answer": ans.answer}
    if ans.witness is not None:
        payload["greedy_digits"] = str(ans.witness)
    if ans.refutation_step is not None:
        payload["refuting_digit_index"] = ans.refutation_step
    _emit(cfg, payload)
    return EXIT_UNKNOWN if ans.answer == "Unknown" else EXIT_OK


def _cmd_density(cfg):
    _need(cfg, "pam")
    f = load_pam(cfg.pam)
    run = iterate_transfer(f, StepDensity.uniform(f.domain), cfg.steps, cfg.merge_cap)
    if cfg.out:
        write_density(cfg.out, run.phi_n)
    kmin, kmax = density_bounds(run.phi_n, f.domain)
    _emit(cfg, {
        "steps": run.steps_done,
        "stopped_early": run.stopped_early,
        "l1_distances": [format_rational(d) for d in run.distances],
        "kmin_estimate": format_rational(kmin),
        "kmax_estimate": format_rational(kmax),
        "breakpoints": len(run.phi_n.breakpoints),
    })
    return EXIT_OK


def _cmd_theorem5(cfg):
    rows = theorem5_scan(cfg.n, cfg.i)
    if cfg.out:
        write_csv(cfg.out, ("n", "value", "value_decimal", "passes"),
                  ((r.n, r.value.to_fraction(), decimal(r.value.to_fraction()), r.passes) for r in rows))
    _emit(cfg, {"rows": len(rows), "passed": sum(r.passes for r in rows), "first_failure": first_failure(rows)})
    return EXIT_OK


def _cmd_mahler(cfg):
    values = mahler_sequence(cfg.n)
    hist = empirical_histogram(values, dyadic_bins(cfg.bins))
    if cfg.out:
        out = Path(cfg.out)
        write_csv(out, ("n", "value", "value_decimal"), ((n, v, decimal(v)) for n, v in enumerate(values, 1)))
        hist_path = out.with_name(out.stem + "_hist.csv")
        write_csv(hist_path, ("bin_left", "bin_right", "count", "frequency"),
                  ((b.left, b.right, c, fr) for b, c, fr in zip(hist.bins, hist.counts, hist.frequencies)))
    _emit(cfg, {"n": cfg.n, "counts": hist.counts,
                "star_discrepancy_dyadic": format_rational(star_discrepancy(values))})
    return EXIT_OK


def _generator(cfg):
    if cfg.generator == "multiples":
        _need(cfg, "theta")
        return multiples(cfg.theta)
    if cfg.generator == "mahler":
        return mahler_stream()
    if cfg.generator == "beta":
        _need(cfg, "beta", "x")
        return beta_fractional_orbit(cfg.beta, cfg.x)
    if cfg.generator == "pam":
        _need(cfg, "pam", "x")
        f = load_pam(cfg.pam)
        if f.domain != Interval(0, 1):
            raise click.UsageError("hitfreq needs a map on [0, 1)")
        return pam_orbit(f, cfg.x)
    raise click.UsageError(f"unknown generator {cfg.generator!r}")


def _cmd_hitfreq(cfg):
    sched = cfg.schedule
    k = schedule(int(sched) if sched.lstrip("-").isdigit() else sched)
    dyn = DynamicInterval(Interval(*cfg.interval), cfg.p, k)
    rep = dynamic_hit_frequency(_generator(cfg), dyn, cfg.n)
    _emit(cfg, {"n": rep.n, "F_dynamic": rep.F_dynamic, "F_static_on_shifted": rep.F_static_on_shifted,
                "equal": rep.equal})
    return EXIT_OK if rep.equal else EXIT_ERROR


HANDLERS = {
    "validate": _cmd_validate,
    "orbit": _cmd_orbit,
    "reach": _cmd_reach,
    "beta-build": _cmd_beta_build,
    "beta-digits": _cmd_beta_digits,
    "tds": _cmd_tds,
    "density": _cmd_density,
    "theorem5": _cmd_theorem5,
    "mahler": _cmd_mahler,
    "hitfreq": _cmd_hitfreq,
}


def run_experiment(cfg: ExperimentConfig) -> int:
    """Dispatch one command; returns the process exit code."""
    random.seed(cfg.seed)
    try:
        return HANDLERS[cfg.command](cfg)
    except PamError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_ERROR


# click plumbing
class RationalType(click.ParamType):
    name = "P/Q"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational", param, ctx)


class BasisType(click.ParamType):
    name = "p1,p2,..."

    def convert(self, value, param, ctx):
        if isinstance(value, PrimeBasis):
            return value
        try:
            return PrimeBasis.of(*(int(p) for p in value.split(",")))
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


RATIONAL = RationalType()

_OPTIONS = {
    "pam": click.option("--pam", type=click.Path(exists=True, dir_okay=False, path_type=Path)),
    "x": click.option("--x", type=RATIONAL),
    "y": click.option("--y", type=RATIONAL),
    "cap": click.option("--cap", type=click.IntRange(min=1), default=10_000, show_default=True),
    "depth": click.option("--depth", type=click.IntRange(min=1), default=64, show_default=True),
    "beta": click.option("--beta", type=RATIONAL),
    "variant": click.option("--variant", type=click.Choice(betamod.VARIANTS), default="greedy", show_default=True),
    "basis": click.option("--basis", type=BasisType()),
    "kmin": click.option("--kmin", type=RATIONAL),
    "kmax": click.option("--kmax", type=RATIONAL),
    "out": click.option("--out", type=click.Path(dir_okay=False, path_type=Path)),
    "format": click.option("--format", "format_", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
    "steps": click.option("--steps", type=click.IntRange(min=1), default=10, show_default=True),
    "merge_cap": click.option("--merge-cap", type=click.IntRange(min=1), default=100_000, show_default=True),
    "seed": click.option("--seed", type=int, default=0, show_default=True),
}


def _run(command: str, **kwargs):
    kwargs["format"] = kwargs.pop("format_", "csv")
    cfg = ExperimentConfig(command=command, **kwargs)
    sys.exit(run_experiment(cfg))


def _with(*names):
    def deco(fn):
        for name in reversed(names):
            fn = _OPTIONS[name](fn)
        return fn
    return deco


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log decider selection and progress.")
def main(verbose):
    """Exact experiments with piecewise affine maps."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(name)s: %(message)s")


@main.command("validate")
@_with("pam", "format")
def validate_cmd(**kw):
    """Check a map file and print its structure."""
    _run("validate", **kw)


@main.command("orbit")
@_with("pam", "x", "y", "cap", "out", "format")
def orbit_cmd(**kw):
    """Iterate a deterministic map exactly (optionally until --y is hit)."""
    _run("orbit", **kw)


@main.command("reach")
@_with("pam", "x", "y", "cap", "basis", "kmin", "kmax", "out", "format")
def reach_cmd(**kw):
    """Decide whether --y is in the orbit of --x."""
    _run("reach", **kw)


@main.command("beta-build")
@_with("beta", "variant", "out")
def beta_build_cmd(**kw):
    """Write the beta-expansion map as a JSON map file."""
    _run("beta-build", **kw)


@main.command("beta-digits")
@_with("beta", "variant", "x", "depth", "out", "format")
def beta_digits_cmd(**kw):
    """Greedy or lazy digits of --x in base --beta."""
    _run("beta-digits", **kw)


@main.command("tds")
@_with("beta", "x", "depth", "format")
def tds_cmd(**kw):
    """Does --x have a base --beta expansion with digits 0 and 1 only?"""
    _run("tds", **kw)


@main.command("density")
@_with("pam", "steps", "merge_cap", "out", "format")
def density_cmd(**kw):
    """Iterate the transfer operator from the uniform density."""
    _run("density", **kw)


@main.command("theorem5")
@click.option("--n-max", "n", type=click.IntRange(min=0), default=2059, show_default=True)
@click.option("--i", "i", type=click.IntRange(min=1), default=4, show_default=True)
@_with("out", "format")
def theorem5_cmd(**kw):
    """Exact scan of {2^n n alpha} < 1/2."""
    _run("theorem5", **kw)


@main.command("mahler")
@click.option("--n", type=click.IntRange(min=1), default=5000, show_default=True)
@click.option("--bins", type=click.IntRange(min=0, max=16), default=4, show_default=True,
              help="Histogram uses 2**bins dyadic bins.")
@_with("out", "format")
def mahler_cmd(**kw):
    """Exact {(3/2)^n} values and their histogram."""
    _run("mahler", **kw)


@main.command("hitfreq")
@click.option("--generator", type=click.Choice(["multiples", "mahler", "beta", "pam"]), default="multiples",
              show_default=True)
@click.option("--theta", type=RATIONAL)
@click.option("--interval", nargs=2, default=("0", "1/2"), show_default=True)
@click.option("--p", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--schedule", default="n", show_default=True, help="n, n-1, or a constant integer")
@click.option("--n", type=click.IntRange(min=1), default=1000, show_default=True)
@_with("pam", "x", "beta", "format")
def hitfreq_cmd(**kw):
    """Compare hits of a dynamic interval with hits of the shifted sequence."""
    _run("hitfreq", **kw)


if __name__ == "__main__":
    main()
