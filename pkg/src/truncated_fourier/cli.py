"""Command-line front end.

Every command writes one machine-readable report (CSV or JSON) to stdout or
``--output``. Floats are written with 17 significant digits so reports parse
back to the same binary64 values. Exit status: 0 success, 1 computation
failure, 2 invalid usage.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .asymptotics import (
    asymptotic_report,
    slepian_delta,
    transition_index,
    transition_sigma,
)
from .errors import ProlateError
from .fourier_spectrum import spectrum_table
from .prolate_solver import compute_prolate, eigenfunction_on_big_interval, prolate_eval
from .spectral_analysis import (
    cross_net_check,
    interval_net_check,
    plunge_counts,
    required_trace_kmax,
    residue_net_check,
    trace_check,
)

log = logging.getLogger(__name__)

COMMANDS = ("spectrum", "eigenfunction", "asymptotics", "plunge", "net", "trace", "slepian")
_DEFAULT_FORMAT = {"spectrum": "csv", "eigenfunction": "csv"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    a: float | None = None
    a_grid: tuple[float, ...] = ()
    k_max: int | None = None
    k: int | None = None
    epsilon: float | None = None
    kappa: float | None = None
    b: tuple[float, ...] = ()
    oracle: bool = False
    m: int | None = None
    grid_size: int = 101
    regime: str = "small_a_sigma"
    leading: bool = False
    domain: str = "unit_interval"
    form: str = "uncoupled"
    output_format: str | None = None
    output_path: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def a_values(self) -> tuple[float, ...]:
        return self.a_grid if self.a_grid else ((self.a,) if self.a is not None else ())

    @property
    def fmt(self) -> str:
        return self.output_format or _DEFAULT_FORMAT.get(self.command, "json")

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        vals = self.a_values
        if not vals:
            raise UsageError("--a or --a-grid is required")
        positive_a = self.command != "eigenfunction"
        for a in vals:
            if not math.isfinite(a) or a < 0 or (positive_a and a == 0):
                raise UsageError(f"a must be {'positive' if positive_a else 'nonnegative'}, got {a}")
        if self.k_max is not None and self.k_max < 0:
            raise UsageError("--k-max must be nonnegative")
        if self.command in ("eigenfunction", "slepian") and self.k is None and not self.b:
            raise UsageError(f"{self.command} needs --k" + (" or --b" if self.command == "slepian" else ""))
        if self.k is not None and self.k < 0:
            raise UsageError("--k must be nonnegative")
        if self.command == "eigenfunction" and self.grid_size < 2:
            raise UsageError("--grid-size must be at least 2")
        if self.command == "plunge":
            if self.epsilon is None or not 0 < self.epsilon < 0.5:
                raise UsageError("--epsilon must lie in (0, 1/2)")
        if self.command == "net" and (self.kappa is None or not self.kappa > 0):
            raise UsageError("--kappa must be positive")
        if self.command == "slepian" and any(a <= 0.5 for a in vals):
            raise UsageError("slepian needs a > 1/2")
        if self.m is not None and self.m < 1:
            raise UsageError("--m must be positive")
        if self.fmt not in ("csv", "json"):
            raise UsageError("--format must be csv or json")


def _clean(x: float) -> float:
    return x + 0.0  # drops the sign of negative zero


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(_clean(x), ".17g")


def _plain(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def to_json(obj: Any, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""

    def enc(v: Any, level: int) -> str:
        pad, inner = " " * (indent * level), " " * (indent * (level + 1))
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{inner}{json.dumps(k)}: {enc(x, level + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(v, list):
            if not v:
                return "[]"
            return "[\n" + ",\n".join(inner + enc(x, level + 1) for x in v) + "\n" + pad + "]"
        if isinstance(v, float):
            return format_float(v)
        return json.dumps(v)

    return enc(_plain(obj), 0) + "\n"


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _flatten(record: dict, prefix: str = "") -> dict:
    out = {}
    for key, val in record.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        elif isinstance(val, list):
            out[name] = json.dumps(_plain(val)) if val and not isinstance(val[0], dict) else len(val)
        else:
            out[name] = val
    return out


def _records_csv(records: list) -> str:
    flat = [_flatten(_plain(r)) for r in records]
    header = list(flat[0]) if flat else []
    return to_csv(header, [[row.get(h, "") for h in header] for row in flat])


def _cmd_spectrum(cfg: RunConfig) -> str:
    a = cfg.a_values[0]
    k_max = 10 if cfg.k_max is None else cfg.k_max
    table = spectrum_table(a, k_max, with_oracle=cfg.oracle, m=cfg.m)
    header = ["k", "gamma", "mu", "sigma", "lambda_re", "lambda_im"]
    if cfg.oracle:
        header.append("sigma_oracle")
    rows = []
    for i, e in enumerate(table.entries):
        row = [e.k, e.gamma, e.mu, e.sigma, float(e.lam.real), float(e.lam.imag)]
        if cfg.oracle:
            row.append(float(table.sigma_oracle[i]))
        rows.append(row)
    if cfg.fmt == "csv":
        return to_csv(header, rows)
    return to_json(
        {
            "a": a,
            "k_max": k_max,
            "oracle_agreement": table.oracle_agreement,
            "entries": [dict(zip(header, r)) for r in rows],
        }
    )


def eigenfunction_dump(a: float, k: int, grid_size: int) -> list[tuple[float, float, float]]:
    """Samples ``(t, g_k(t, a), e_k(a t, a))`` on a uniform grid of ``[-1, 1]``."""
    pf = compute_prolate(a, k)[k]
    t = np.linspace(-1.0, 1.0, grid_size)
    g = prolate_eval(pf, t)
    e = eigenfunction_on_big_interval(pf, np.clip(a * t, -a, a)) if a > 0 else g
    return [(float(ti), float(gi), float(ei)) for ti, gi, ei in zip(t, g, e)]


def _cmd_eigenfunction(cfg: RunConfig) -> str:
    rows = eigenfunction_dump(cfg.a_values[0], cfg.k, cfg.grid_size)
    if cfg.fmt == "csv":
        return to_csv(["t", "g", "e"], rows)
    return to_json({"a": cfg.a_values[0], "k": cfg.k, "samples": [dict(zip("tge", r)) for r in rows]})


def _cmd_asymptotics(cfg: RunConfig) -> str:
    if cfg.regime == "transition":
        idx = list(cfg.b) or [-1.0, 0.0, 1.0]
    else:
        idx = list(range((3 if cfg.k_max is None else cfg.k_max) + 1))
    report = asymptotic_report(cfg.regime, cfg.a_values, idx, leading=cfg.leading)
    if cfg.fmt == "csv":
        return to_csv(
            ["index", "a", "computed", "formula", "ratio"],
            [[r.index, r.a, r.computed, r.formula, r.ratio] for r in report.rows],
        )
    return to_json(report)


def _plunge_kmax(a: float, epsilon: float, given: int | None) -> int:
    if given is not None:
        return given
    # the tail must drop below epsilon/10; past the plunge sigma decays fast
    return required_trace_kmax(a)


def _cmd_plunge(cfg: RunConfig) -> str:
    records = []
    for a in cfg.a_values:
        table = spectrum_table(a, _plunge_kmax(a, cfg.epsilon, cfg.k_max))
        rep = plunge_counts(table, cfg.epsilon)
        rec = _plain(rep)
        rec["margins"] = rep.margins
        rec["bounds_hold"] = rep.bounds_hold
        records.append(rec)
    return _records_csv(records) if cfg.fmt == "csv" else to_json(records if cfg.a_grid else records[0])


def _cmd_net(cfg: RunConfig) -> str:
    records = []
    for a in cfg.a_values:
        table = spectrum_table(a, cfg.k_max if cfg.k_max is not None else required_trace_kmax(a))
        if cfg.domain == "unit_interval":
            rep = interval_net_check(table.sigma, cfg.kappa)
        elif cfg.domain == "residue":
            rep = residue_net_check(table, cfg.kappa)
        else:
            rep = cross_net_check(table, cfg.kappa)
        rec = {"a": a, **_plain(rep)}
        records.append(rec)
    return _records_csv(records) if cfg.fmt == "csv" else to_json(records if cfg.a_grid else records[0])


def _cmd_trace(cfg: RunConfig) -> str:
    records = []
    for a in cfg.a_values:
        k_max = cfg.k_max if cfg.k_max is not None else required_trace_kmax(a)
        records.append(trace_check(spectrum_table(a, k_max)))
    return _records_csv(records) if cfg.fmt == "csv" else to_json(records if cfg.a_grid else records[0])


def _cmd_slepian(cfg: RunConfig) -> str:
    records = []
    for a in cfg.a_values:
        if cfg.b:
            targets = [(b, transition_index(a, b)) for b in cfg.b]
        else:
            targets = [(None, cfg.k)]
        table = spectrum_table(a, max(k for _, k in targets))
        for b, k in targets:
            delta = slepian_delta(a, k, cfg.form)
            records.append(
                {
                    "a": a,
                    "b": b,
                    "k": k,
                    "form": cfg.form,
                    "delta": delta,
                    "sigma_predicted": transition_sigma(delta),
                    "sigma_limit": None if b is None else transition_sigma(b),
                    "sigma_computed": float(table.sigma[k]),
                }
            )
    if cfg.fmt == "csv":
        return _records_csv(records)
    return to_json(records if len(records) > 1 else records[0])


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "eigenfunction": _cmd_eigenfunction,
    "asymptotics": _cmd_asymptotics,
    "plunge": _cmd_plunge,
    "net": _cmd_net,
    "trace": _cmd_trace,
    "slepian": _cmd_slepian,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    try:
        text = _HANDLERS[cfg.command](cfg)
    except ProlateError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def parse_grid(spec: str) -> tuple[float, ...]:
    """``start:stop:step`` inclusive of ``stop`` (within rounding)."""
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:step, got {spec!r}")
    if not step > 0 or stop < start:
        raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 12) for i in range(n))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="truncated-fourier",
        description="Spectrum of the Fourier operator truncated to [-a, a].",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("--a", type=float)
        if grid:
            p.add_argument("--a-grid", type=parse_grid, default=())
        p.add_argument("--format", dest="output_format", choices=("csv", "json"))
        p.add_argument("--output", dest="output_path")
        return p

    p = common(sub.add_parser("spectrum", help="gamma, sigma and lambda for k = 0..k_max"), grid=False)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--oracle", action="store_true", help="cross-check sigma by Nystrom")
    p.add_argument("--m", type=int, help="Nystrom quadrature size")

    p = common(sub.add_parser("eigenfunction", help="sample g_k and e_k on a grid"), grid=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--grid-size", type=int, default=101)

    p = common(sub.add_parser("asymptotics", help="computed spectrum against asymptotic laws"))
    p.add_argument(
        "--regime",
        choices=("small_a_sigma", "small_a_lambda", "large_a_deficit", "transition"),
        default="small_a_sigma",
    )
    p.add_argument("--k-max", type=int)
    p.add_argument("--b", type=float, nargs="+", default=())
    p.add_argument("--leading", action="store_true", help="exact leading small-a term")

    p = common(sub.add_parser("plunge", help="plunge-region counts and bounds"))
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--k-max", type=int)

    p = common(sub.add_parser("net", help="kappa-net verdicts"))
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--domain", choices=("unit_interval", "residue", "cross"), default="unit_interval")
    p.add_argument("--k-max", type=int)

    p = common(sub.add_parser("trace", help="trace identities and the ITZ inequality"))
    p.add_argument("--k-max", type=int)

    p = common(sub.add_parser("slepian", help="solve the transition equation"))
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=float, nargs="+", default=())
    p.add_argument("--form", choices=("uncoupled", "coupled"), default="uncoupled")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {f.name for f in dataclasses.fields(RunConfig)}
    values = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    for key in ("a_grid", "b"):
        if key in values:
            values[key] = tuple(values[key])
    return RunConfig(**values)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
