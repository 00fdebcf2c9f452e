"""On-disk formats.

Maps are JSON documents::

    {"label": "doubling",
     "domain": ["0", "1"],
     "deterministic": true,
     "pieces": [{"interval": ["0", "1/2"], "a": "2", "b": "0"},
                {"interval": ["1/2", "1"], "a": "2", "b": "-1"}]}

Bulk outputs are CSV. Every number is written as an exact ``p/q`` string;
the ``*_decimal`` columns are for plotting only and never read back.
"""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import PamSyntaxError, ValidationFailed
from .exactnum import format_rational
from .pam import AffinePiece, Interval, PamMap, validate
from .transfer import StepDensity


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise PamSyntaxError(f"{where}: expected a 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise PamSyntaxError(f"{where}: cannot parse {value!r} as a rational ({exc})") from None


def _interval(value, where: str) -> Interval:
    if not isinstance(value, list) or len(value) != 2:
        raise PamSyntaxError(f"{where}: expected [left, right]")
    left, right = _rational(value[0], f"{where}[0]"), _rational(value[1], f"{where}[1]")
    if left >= right:
        raise PamSyntaxError(f"{where}: left {left} must be below right {right}")
    return Interval(left, right)


def parse_pam(text: str, *, check: bool = True) -> PamMap:
    """Parse a map document; with ``check`` the result must pass :func:`validate`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PamSyntaxError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise PamSyntaxError("top level must be an object")
    for key in ("domain", "pieces"):
        if key not in doc:
            raise PamSyntaxError(f"missing key {key!r}")
    domain = _interval(doc["domain"], "domain")
    deterministic = doc.get("deterministic", True)
    if not isinstance(deterministic, bool):
        raise PamSyntaxError("deterministic: expected true or false")
    if not isinstance(doc["pieces"], list) or not doc["pieces"]:
        raise PamSyntaxError("pieces: expected a non-empty list")
    pieces = []
    for i, raw in enumerate(doc["pieces"]):
        where = f"pieces[{i}]"
        if not isinstance(raw, dict):
            raise PamSyntaxError(f"{where}: expected an object")
        missing = {"interval", "a", "b"} - raw.keys()
        if missing:
            raise PamSyntaxError(f"{where}: missing {sorted(missing)}")
        pieces.append(
            AffinePiece(
                _interval(raw["interval"], f"{where}.interval"),
                _rational(raw["a"], f"{where}.a"),
                _rational(raw["b"], f"{where}.b"),
            )
        )
    f = PamMap(domain, tuple(pieces), deterministic, str(doc.get("label", "")))
    if check:
        report = validate(f)
        if not report.ok:
            raise ValidationFailed("; ".join(report.violations), report.violations)
    return f


def load_pam(path, *, check: bool = True) -> PamMap:
    return parse_pam(Path(path).read_text(), check=check)


def pam_to_dict(f: PamMap) -> dict:
    return {
        "label": f.label,
        "domain": [format_rational(f.domain.left), format_rational(f.domain.right)],
        "deterministic": f.deterministic,
        "pieces": [
            {
                "interval": [format_rational(p.domain.left), format_rational(p.domain.right)],
                "a": format_rational(p.a),
                "b": format_rational(p.b),
            }
            for p in f.pieces
        ],
    }


def dump_pam(f: PamMap) -> str:
    return json.dumps(pam_to_dict(f), indent=2) + "\n"


def decimal(x: Fraction) -> str:
    return repr(x.numerator / x.denominator)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    n = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([format_rational(c) if isinstance(c, Fraction) else c for c in row])
            n += 1
    return n


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_density(path, phi: StepDensity) -> int:
    rows = [(s, v, decimal(v)) for s, _, v in phi.gaps()]
    rows.append((phi.breakpoints[-1], "", ""))
    return write_csv(path, ("breakpoint", "value", "value_decimal"), rows)


def read_density(path) -> StepDensity:
    rows = read_csv(path)
    bps = tuple(Fraction(r["breakpoint"]) for r in rows)
    vals = tuple(Fraction(r["value"]) for r in rows[:-1])
    return StepDensity(bps, vals)
