"""Verification reports."""
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Metric:
    """One checked quantity.

    ``error`` is a non-negative deviation from the ideal value and the metric
    passes iff ``error < tol``; a zero tolerance can therefore never pass.
    """

    name: str
    value: float
    error: float
    tol: float

    @property
    def passed(self):
        return self.error < self.tol


def fidelity_metric(name, value, tol):
    return Metric(name, float(value), max(0.0, 1.0 - float(value)), float(tol))


def residual_metric(name, value, tol):
    return Metric(name, float(value), abs(float(value)), float(tol))


@dataclass
class VerificationReport:
    proposition: str
    params: dict
    metrics: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(m.passed for m in self.metrics)

    def add(self, metric):
        self.metrics.append(metric)
        return metric

    def metric(self, name):
        for m in self.metrics:
            if m.name == name:
                return m
        raise KeyError(name)

    def worst(self, prefix):
        """Metric with the largest error among names starting with ``prefix``."""
        return max((m for m in self.metrics if m.name.startswith(prefix)),
                   key=lambda m: m.error)

    def records(self):
        """One JSON-ready dict per metric, plus one per note."""
        params = {k: _jsonable(v) for k, v in self.params.items()}
        out = [{"prop": self.proposition, "params": params, "metric": m.name,
                "value": m.value, "pass": m.passed} for m in self.metrics]
        for key in sorted(self.notes):
            out.append({"prop": self.proposition, "params": params, "metric": f"note:{key}",
                        "value": self.notes[key], "pass": self.passed})
        return out

    def to_jsonl(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records())

    def format_text(self, show_elapsed=True):
        params = " ".join(f"{k}={_short(v)}" for k, v in self.params.items())
        head = f"{self.proposition} [{params}] {'PASS' if self.passed else 'FAIL'}"
        if show_elapsed:
            head += f" ({self.elapsed:.3f}s)"
        lines = [head]
        for m in self.metrics:
            flag = "ok " if m.passed else "BAD"
            lines.append(f"  {flag} {m.name} = {m.value:.17g} (error {m.error:.3e} < {m.tol:g})")
        for key in sorted(self.notes):
            lines.append(f"  note {key}: {self.notes[key]}")
        return "\n".join(lines)


@contextmanager
def timed(report):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed = time.perf_counter() - start


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "tolist"):
        return _jsonable(v.tolist())
    return v


def _short(v):
    if isinstance(v, float):
        return f"{v:g}"
    if isinstance(v, (list, tuple)) and len(v) > 4:
        return f"[{len(v)} values]"
    return str(v)
