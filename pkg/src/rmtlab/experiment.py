"""Experiment configuration, Monte Carlo orchestration and persistence.

Output directory layout::

    config.json      resolved configuration (used to validate resumption)
    replicates.csv   one row per replicate, written in index order
    summary.json     statistics, see SUMMARY_SCHEMA
    histogram.csv    normalized-sample histogram with N(0, 2) densities
    histogram.svg
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .sampling import StreamSeed, sample_adjacency
from .spectral import ConvergenceError, lambda1, trace_power_int
from .stats import (
    NormalizedSample,
    expectation_window_check,
    ks_distance,
    normal02_pdf,
    normalize_lambda1,
    normalize_traces,
    summary_moments,
    tail_check,
    trace_variance_leading_term,
)

log = logging.getLogger(__name__)

__all__ = [
    "ConfigError",
    "RuntimeFailure",
    "ExperimentConfig",
    "ReplicateRecord",
    "parse_config",
    "run_experiment",
    "run_replicate",
    "emit_histogram",
    "load_replicates",
    "report",
    "CLT_MODES",
    "VERIFY_MODES",
    "CSV_FIELDS",
    "SUMMARY_SCHEMA",
    "MAX_NONCONVERGED_FRACTION",
]

CLT_MODES = ("trace-clt", "lambda1-clt", "concentration")
VERIFY_MODES = ("verify-combinatorics", "verify-encoding", "verify-oracles")
CSV_FIELDS = ("replicate_index", "master_seed", "trace_int", "lambda1", "status")
MAX_NONCONVERGED_FRACTION = 1e-3
THREADS_ENV = "RMTLAB_THREADS"

_NUMBER_OR_NULL = {"type": ["number", "null"]}
SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["ks", "mean", "variance", "third", "fourth", "tail_checks", "window_ok"],
    "properties": {
        "ks": _NUMBER_OR_NULL,
        "mean": _NUMBER_OR_NULL,
        "variance": _NUMBER_OR_NULL,
        "third": _NUMBER_OR_NULL,
        "fourth": _NUMBER_OR_NULL,
        "tail_checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "t", "bound", "freq"],
                "properties": {
                    "m": {"type": "integer", "minimum": 1},
                    "t": {"type": "number", "exclusiveMinimum": 0},
                    "bound": {"type": "number", "minimum": 0},
                    "freq": {"type": "number", "minimum": 0, "maximum": 1},
                },
            },
        },
        "window_ok": {"type": ["boolean", "null"]},
    },
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"config error: field '{field}': {message}")
        self.field = field


class RuntimeFailure(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    n: int = 1000
    p_spec: dict = field(default_factory=lambda: {"kind": "power", "epsilon": 0.5})
    m: int = 3
    replicates: int = 400
    master_seed: int = 0
    loops: bool = True
    threads: int | str = 1
    output_dir: str = "out"
    allow_large_p: bool = False
    t_values: list = field(default_factory=lambda: [1.0])
    bins: int = 20
    thresholds: dict = field(default_factory=dict)
    # verify-* modes
    q: int = 8
    qmax: int = 6

    @property
    def p_fraction(self) -> Fraction | None:
        if self.p_spec.get("kind") != "explicit":
            return None
        value = self.p_spec["value"]
        if isinstance(value, float):
            return None
        return Fraction(str(value))

    @property
    def p(self) -> float:
        if self.p_spec["kind"] == "power":
            return float(self.n) ** (float(self.p_spec["epsilon"]) - 1.0)
        frac = self.p_fraction
        return float(frac) if frac is not None else float(self.p_spec["value"])

    def resolved_threads(self) -> int:
        env = os.environ.get(THREADS_ENV)
        threads = env if env else self.threads
        if threads == "auto":
            return os.cpu_count() or 1
        try:
            threads = int(threads)
        except (TypeError, ValueError):
            raise ConfigError("threads", f"expected an integer or 'auto', got {threads!r}") from None
        if threads < 1:
            raise ConfigError("threads", f"must be >= 1, got {threads}")
        return threads

    def identity(self) -> dict:
        """Fields that determine replicate contents (checked on resume)."""
        return {
            "mode": self.mode,
            "n": self.n,
            "p": f"{self.p:.17g}",
            "m": self.m,
            "master_seed": self.master_seed,
            "loops": self.loops,
        }

    def to_json(self) -> dict:
        out = asdict(self)
        out["p_resolved"] = float(f"{self.p:.12g}")
        frac = self.p_fraction
        out["p_fraction"] = None if frac is None else f"{frac.numerator}/{frac.denominator}"
        return out


@dataclass
class ReplicateRecord:
    replicate_index: int
    master_seed: int
    trace_int: int | None = None
    lambda1: float | None = None
    status: str = "ok"

    def row(self) -> list[str]:
        return [
            str(self.replicate_index),
            str(self.master_seed),
            "" if self.trace_int is None else str(self.trace_int),
            "" if self.lambda1 is None else repr(float(self.lambda1)),
            self.status,
        ]

    @classmethod
    def from_row(cls, row: dict) -> "ReplicateRecord":
        return cls(
            replicate_index=int(row["replicate_index"]),
            master_seed=int(row["master_seed"]),
            trace_int=int(row["trace_int"]) if row["trace_int"] else None,
            lambda1=float(row["lambda1"]) if row["lambda1"] else None,
            status=row["status"],
        )

    @property
    def seed(self) -> StreamSeed:
        return StreamSeed(self.master_seed, self.replicate_index)


# --------------------------------------------------------------------------
# configuration

_FIELD_TYPES = {
    "n": int, "m": int, "replicates": int, "master_seed": int, "bins": int,
    "q": int, "qmax": int, "loops": bool, "allow_large_p": bool,
}


def _coerce(name, value):
    kind = _FIELD_TYPES.get(name)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(name, f"expected an integer, got {value!r}")
    if kind is bool and not isinstance(value, bool):
        raise ConfigError(name, f"expected true/false, got {value!r}")
    return value


def _parse_p_value(value):
    if isinstance(value, bool):
        raise ConfigError("p_spec.value", f"expected a number or 'NUM/DEN', got {value!r}")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text) if "/" in text else float(text)
        except (ValueError, ZeroDivisionError):
            raise ConfigError("p_spec.value", f"cannot parse {value!r}") from None
    raise ConfigError("p_spec.value", f"expected a number or 'NUM/DEN', got {value!r}")


def _normalize_p_spec(spec) -> dict:
    if not isinstance(spec, dict):
        raise ConfigError("p_spec", "expected an object with a 'kind' entry")
    kind = spec.get("kind")
    if kind == "power":
        if "epsilon" not in spec:
            raise ConfigError("p_spec.epsilon", "missing")
        eps = spec["epsilon"]
        if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not 0 < eps <= 1:
            raise ConfigError("p_spec.epsilon", f"must be a number in (0, 1], got {eps!r}")
        return {"kind": "power", "epsilon": float(eps)}
    if kind == "explicit":
        if "value" not in spec:
            raise ConfigError("p_spec.value", "missing")
        value = _parse_p_value(spec["value"])
        if isinstance(value, Fraction):
            value = f"{value.numerator}/{value.denominator}"
        return {"kind": "explicit", "value": value}
    raise ConfigError("p_spec.kind", f"must be 'explicit' or 'power', got {kind!r}")


def parse_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    """Load a JSON config file, apply flag overrides, validate.

    ``overrides`` entries that are None are ignored, so argparse namespaces
    can be passed through directly.
    """
    data: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON in {path}: {exc}") from None
        except OSError as exc:
            raise ConfigError("<file>", f"cannot read {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("<file>", "top level must be a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")
    if "mode" not in data:
        raise ConfigError("mode", "missing")
    data = {k: _coerce(k, v) for k, v in data.items()}
    if "p_spec" in data:
        data["p_spec"] = _normalize_p_spec(data["p_spec"])
    cfg = ExperimentConfig(**data)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.mode not in CLT_MODES + VERIFY_MODES:
        raise ConfigError("mode", f"unknown mode {cfg.mode!r}")
    if cfg.n < 1:
        raise ConfigError("n", f"must be >= 1, got {cfg.n}")
    if cfg.mode in VERIFY_MODES:
        if cfg.mode == "verify-oracles":
            if cfg.p_fraction is None:
                raise ConfigError("p_spec", "verify-oracles needs an exact rational p ('NUM/DEN')")
            if not 0 <= cfg.p_fraction <= 1:
                raise ConfigError("p_spec.value", f"must lie in [0, 1], got {cfg.p_fraction}")
        if cfg.q < 1:
            raise ConfigError("q", f"must be >= 1, got {cfg.q}")
        if cfg.qmax < 1:
            raise ConfigError("qmax", f"must be >= 1, got {cfg.qmax}")
        return
    if cfg.m < 1:
        raise ConfigError("m", f"must be >= 1, got {cfg.m}")
    if cfg.replicates < 2:
        raise ConfigError("replicates", f"must be >= 2 in mode {cfg.mode}, got {cfg.replicates}")
    if not 0 <= cfg.master_seed < 2**64:
        raise ConfigError("master_seed", "must fit in 64 bits")
    p = cfg.p
    if not 0 < p <= 1:
        raise ConfigError("p_spec", f"resolved p must lie in (0, 1], got {p}")
    if p > 0.5 and not cfg.allow_large_p:
        raise ConfigError("p_spec", f"p = {p:.12g} exceeds 1/2; pass allow_large_p to override")
    if cfg.bins < 4:
        raise ConfigError("bins", f"must be >= 4, got {cfg.bins}")
    for t in cfg.t_values:
        if isinstance(t, bool) or not isinstance(t, (int, float)) or t <= 0:
            raise ConfigError("t_values", f"entries must be positive numbers, got {t!r}")
    if not isinstance(cfg.thresholds, dict):
        raise ConfigError("thresholds", "expected an object")
    cfg.resolved_threads()


# --------------------------------------------------------------------------
# replicates

def run_replicate(task) -> ReplicateRecord:
    """Sample one graph and compute the requested statistics."""
    n, p, loops, master_seed, index, m, want_trace, want_lambda = task
    adj = sample_adjacency(n, p, loops, StreamSeed(master_seed, index))
    record = ReplicateRecord(index, master_seed)
    if want_trace:
        record.trace_int = trace_power_int(adj, m)
    if want_lambda:
        try:
            record.lambda1 = lambda1(adj)
        except ConvergenceError as exc:
            record.lambda1 = exc.estimate
            record.status = "nonconverged"
    return record


def _format_row(record: ReplicateRecord) -> str:
    buf = io.StringIO()
    csv.writer(buf).writerow(record.row())
    return buf.getvalue()


def _header() -> str:
    buf = io.StringIO()
    csv.writer(buf).writerow(CSV_FIELDS)
    return buf.getvalue()


def load_replicates(path) -> list[ReplicateRecord]:
    with open(path, newline="") as fh:
        return [ReplicateRecord.from_row(row) for row in csv.DictReader(fh)]


def _resume_prefix(path: Path) -> list[ReplicateRecord]:
    """Keep the leading run of complete, consecutive rows of an earlier run
    and truncate anything after it (e.g. a partially written line)."""
    raw = path.read_bytes().decode()
    header = _header()
    if not raw.startswith(header):
        raise ConfigError("output_dir", f"{path} does not look like a replicates file")
    kept = [header]
    records = []
    body = raw[len(header):]
    for line in body.splitlines(keepends=True):
        if not line.endswith("\r\n"):
            break
        row = next(csv.reader([line]))
        if len(row) != len(CSV_FIELDS) or not row[0].isdigit() or int(row[0]) != len(records):
            break
        try:
            records.append(ReplicateRecord.from_row(dict(zip(CSV_FIELDS, row))))
        except ValueError:
            break
        kept.append(line)
    path.write_bytes("".join(kept).encode())
    return records


def _prepare_output(cfg: ExperimentConfig, out: Path) -> list[ReplicateRecord]:
    out.mkdir(parents=True, exist_ok=True)
    cfg_path = out / "config.json"
    csv_path = out / "replicates.csv"
    identity = cfg.identity()
    if csv_path.exists() and cfg_path.exists():
        previous = json.loads(cfg_path.read_text()).get("identity")
        if previous != identity:
            raise ConfigError(
                "output_dir", f"{out} holds replicates of a different experiment; use a new directory"
            )
        done = _resume_prefix(csv_path)
    else:
        csv_path.write_text(_header(), newline="")
        done = []
    payload = {"identity": identity, "config": cfg.to_json()}
    cfg_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return done


def _compute_records(cfg: ExperimentConfig, start: int, csv_path: Path, threads: int):
    want_trace = cfg.mode == "trace-clt"
    want_lambda = cfg.mode in ("lambda1-clt", "concentration")
    p = cfg.p
    tasks = (
        (cfg.n, p, cfg.loops, cfg.master_seed, r, cfg.m, want_trace, want_lambda)
        for r in range(start, cfg.replicates)
    )
    with open(csv_path, "a", newline="") as fh:
        if threads == 1:
            results = map(run_replicate, tasks)
            for record in results:
                fh.write(_format_row(record))
                fh.flush()
                yield record
            return
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
            # map yields in submission order, buffering early finishers
            for record in pool.map(run_replicate, tasks, chunksize=4):
                fh.write(_format_row(record))
                fh.flush()
                yield record


def _null_stats() -> dict:
    return {"ks": None, "mean": None, "variance": None, "third": None, "fourth": None}


def _sample_stats(sample: NormalizedSample) -> dict:
    stats = {"ks": ks_distance(sample)}
    if len(sample) >= 4:
        stats.update(summary_moments(sample))
    else:
        stats.update({k: None for k in ("mean", "variance", "third", "fourth")})
    stats["degenerate"] = sample.degenerate
    stats["scale_used"] = sample.scale_used
    return stats


def _check_thresholds(summary: dict, thresholds: dict) -> list[str]:
    failures = []

    def bounded(key, value, lo=None, hi=None):
        if value is None:
            failures.append(f"{key}: value unavailable")
        elif (lo is not None and value < lo) or (hi is not None and value > hi):
            failures.append(f"{key}={value:.6g} outside [{lo}, {hi}]")

    th = thresholds
    if "ks_max" in th:
        bounded("ks", summary["ks"], hi=th["ks_max"])
    if "variance_min" in th or "variance_max" in th:
        bounded("variance", summary["variance"], th.get("variance_min"), th.get("variance_max"))
    if "mean_abs_max" in th:
        mean = summary["mean"]
        bounded("|mean|", None if mean is None else abs(mean), hi=th["mean_abs_max"])
    if "fourth_min" in th or "fourth_max" in th:
        bounded("fourth", summary["fourth"], th.get("fourth_min"), th.get("fourth_max"))
    if "variance_ratio_min" in th or "variance_ratio_max" in th:
        bounded("variance_ratio", summary.get("variance_ratio"),
                th.get("variance_ratio_min"), th.get("variance_ratio_max"))
    if th.get("require_window") and summary["window_ok"] is not True:
        failures.append(f"window_ok={summary['window_ok']}")
    if th.get("require_tails"):
        for check in summary["tail_checks"]:
            if not check["ok"]:
                failures.append(f"tail m={check['m']} t={check['t']}: freq={check['freq']:.4g} > bound")
    return failures


def _summarize(cfg: ExperimentConfig, records: list[ReplicateRecord]) -> tuple[dict, NormalizedSample | None]:
    p = cfg.p
    summary = {
        "mode": cfg.mode,
        "n": cfg.n,
        "p": float(f"{p:.12g}"),
        "p_fraction": cfg.to_json()["p_fraction"],
        "np": cfg.n * p,
        "m": cfg.m,
        "loops": cfg.loops,
        "master_seed": cfg.master_seed,
        "replicates": len(records),
        "tail_checks": [],
        "window_ok": None,
    }
    sample = None
    if cfg.mode == "trace-clt":
        traces = [r.trace_int for r in records]
        sample = normalize_traces(traces, cfg.n, p, cfg.m)
        summary.update(_sample_stats(sample))
        total = sum(traces)
        count = len(traces)
        # exact sample variance (ddof=1) of the raw traces
        raw_var = Fraction(count * sum(t * t for t in traces) - total * total, count * (count - 1))
        leading = trace_variance_leading_term(cfg.n, p, cfg.m)
        summary["trace_mean"] = float(Fraction(total, count))
        summary["raw_trace_variance"] = float(raw_var)
        summary["variance_leading_term"] = leading
        summary["variance_ratio"] = float(raw_var) / leading
        summary["excluded"] = 0
        return summary, sample

    good = [r.lambda1 for r in records if r.status == "ok"]
    excluded = len(records) - len(good)
    summary["excluded"] = excluded
    if excluded > MAX_NONCONVERGED_FRACTION * len(records):
        raise RuntimeFailure(
            f"{excluded} of {len(records)} lambda1 computations did not converge "
            f"(limit {MAX_NONCONVERGED_FRACTION:.1%})"
        )
    sample = normalize_lambda1(good, p)
    summary.update(_sample_stats(sample))
    summary["lambda1_mean"] = float(np.mean(good))
    summary["lambda1_variance"] = float(np.var(good, ddof=1))
    if cfg.n * p >= 30:
        summary["window_ok"] = expectation_window_check(summary["lambda1_mean"], cfg.n, p)
    for t in cfg.t_values:
        check = tail_check(good, cfg.n, p, cfg.m, float(t))
        summary["tail_checks"].append({
            "m": check.m, "t": check.t, "bound": check.bound,
            "freq": check.empirical_frequency, "slack": check.slack, "ok": check.ok,
        })
    return summary, sample


def _run_verify(cfg: ExperimentConfig) -> dict:
    from . import verify

    if cfg.mode == "verify-combinatorics":
        result = verify.verify_combinatorics()
    elif cfg.mode == "verify-encoding":
        result = verify.verify_encoding_range(cfg.n, cfg.q, cfg.loops)
        result["passed"] = result["violations"] == 0
    else:
        result = verify.verify_oracles(cfg.n, cfg.qmax, cfg.p_fraction, cfg.loops)
        for row in result["rows"]:
            for key in ("expectation", "variance", "walk_expectation"):
                row[key] = str(row[key])
        result["p"] = str(result["p"])
    summary = {"mode": cfg.mode, **_null_stats(), "tail_checks": [], "window_ok": None, **result}
    summary["acceptance"] = {
        "configured": True,
        "passed": bool(result["passed"]),
        "failures": [] if result["passed"] else [f"{cfg.mode} found violations"],
    }
    return summary


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run ``cfg`` to completion and write its artifacts.

    Monte Carlo modes resume from an existing ``replicates.csv`` in the
    output directory. The returned summary carries an ``acceptance`` entry;
    the CLI maps a configured, failed acceptance to exit code 3.
    """
    out = Path(cfg.output_dir)
    if cfg.mode in VERIFY_MODES:
        summary = _run_verify(cfg)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "summary.json", summary)
        return summary

    threads = cfg.resolved_threads()
    records = _prepare_output(cfg, out)
    if records:
        log.info("resuming %s after %d completed replicates", out, len(records))
    records.extend(_compute_records(cfg, len(records), out / "replicates.csv", threads))
    summary, sample = _summarize(cfg, records)
    failures = _check_thresholds(summary, cfg.thresholds)
    summary["acceptance"] = {
        "configured": bool(cfg.thresholds),
        "passed": not failures,
        "failures": failures,
    }
    if sample is not None and len(sample):
        emit_histogram(sample, cfg.bins, out)
    _write_json(out / "summary.json", summary)
    return summary


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


# --------------------------------------------------------------------------
# histogram and report

def emit_histogram(sample, bins: int, out, lo: float | None = None, hi: float | None = None) -> dict:
    """Write histogram.csv and histogram.svg; default range is +-4 sqrt(2).

    Values outside the range are not counted.
    """
    values = sample.values if isinstance(sample, NormalizedSample) else np.asarray(sample, dtype=float)
    if len(values) == 0:
        raise ValueError("cannot build a histogram of an empty sample")
    if bins < 4:
        raise ValueError(f"bins must be >= 4, got {bins}")
    lo = -4 * math.sqrt(2) if lo is None else lo
    hi = 4 * math.sqrt(2) if hi is None else hi
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = normal02_pdf(centers)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "histogram.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "count", "normal02_density"])
        for left, right, c, d in zip(edges[:-1], edges[1:], counts, density):
            writer.writerow([repr(float(left)), repr(float(right)), int(c), repr(float(d))])
    (out / "histogram.svg").write_text(_histogram_svg(edges, counts, len(values)))
    return {"edges": edges, "counts": counts, "density": density}


def _histogram_svg(edges, counts, total) -> str:
    width, height, pad = 640, 360, 30
    lo, hi = float(edges[0]), float(edges[-1])
    bin_width = (hi - lo) / len(counts)
    heights = counts / (total * bin_width)
    grid = np.linspace(lo, hi, 200)
    curve = normal02_pdf(grid)
    top = max(float(heights.max()), float(curve.max())) * 1.1 or 1.0

    def sx(x):
        return pad + (x - lo) / (hi - lo) * (width - 2 * pad)

    def sy(y):
        return height - pad - y / top * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for left, h in zip(edges[:-1], heights):
        x0, x1 = sx(left), sx(left + bin_width)
        parts.append(
            f'<rect x="{x0:.2f}" y="{sy(h):.2f}" width="{x1 - x0:.2f}" '
            f'height="{sy(0) - sy(h):.2f}" fill="#9ecae1" stroke="#3182bd"/>'
        )
    points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(grid, curve))
    parts.append(f'<polyline points="{points}" fill="none" stroke="#d62728" stroke-width="2"/>')
    parts.append(
        f'<line x1="{pad}" y1="{sy(0):.2f}" x2="{width - pad}" y2="{sy(0):.2f}" stroke="black"/>'
    )
    parts.append(f'<text x="{pad}" y="{pad - 10}" font-size="12">normalized sample vs N(0, 2)</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)


def report(directory) -> str:
    """Human-readable report of a finished run directory."""
    directory = Path(directory)
    summary = json.loads((directory / "summary.json").read_text())
    lines = [f"run directory: {directory}", f"mode: {summary.get('mode')}"]
    for key in ("n", "p", "p_fraction", "np", "m", "replicates", "excluded"):
        if key in summary:
            lines.append(f"{key}: {summary[key]}")
    for key in ("ks", "mean", "variance", "third", "fourth", "variance_ratio", "lambda1_mean"):
        value = summary.get(key)
        if value is not None:
            lines.append(f"{key}: {value:.6g}")
    if summary.get("window_ok") is not None:
        lines.append(f"window_ok: {summary['window_ok']}")
    for check in summary.get("tail_checks", []):
        lines.append(
            f"tail m={check['m']} t={check['t']}: bound={check['bound']:.4g} freq={check['freq']:.4g}"
        )
    csv_path = directory / "replicates.csv"
    if csv_path.exists():
        records = load_replicates(csv_path)
        lines.append(f"replicates.csv rows: {len(records)}")
    acceptance = summary.get("acceptance", {})
    if acceptance.get("configured"):
        lines.append("acceptance: " + ("PASS" if acceptance.get("passed") else "FAIL"))
        lines.extend(f"  - {f}" for f in acceptance.get("failures", []))
    return "\n".join(lines)
