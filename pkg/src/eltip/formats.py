"""Text formats: instance documents, sweep CSV, gnuplot scripts, reports.

Instance documents are JSON::

    {
      "format": "eltip-instance",
      "version": "1",
      "n": 3,
      "couplings": [[0, 1, 3.0], [0, 2, 5.0], [1, 2, 10.0]],
      "fields": [[0, -7.0], [1, -16.0], [2, 13.0]],
      "metadata": {"name": "table4-id"}
    }

``format``, ``version`` and ``metadata`` are optional on input.  Absent
fields are zero.  Unknown keys, inside ``metadata`` or at the top level,
survive a parse/serialize round trip.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .dynamics import SweepResult
from .errors import InstanceParseError, InstanceValidationError
from .ising import IsingProblem, SpinConfig
from .landscape import LandscapeReport, Level

INSTANCE_FORMAT = "eltip-instance"
INSTANCE_VERSION = "1"
REPORT_FORMAT = "eltip-report"
REPORT_VERSION = "1"
CSV_VERSION = "1"
JSON_MARKER = "--- json ---"

_KNOWN_KEYS = {"format", "version", "n", "couplings", "fields", "metadata"}


@dataclass(frozen=True)
class InstanceDocument:
    problem: IsingProblem
    metadata: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def name(self) -> str | None:
        return self.metadata.get("name")


def _reject_constant(token):
    raise InstanceValidationError(f"non-finite value {token} is not allowed")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceValidationError(f"{where}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise InstanceValidationError(f"{where}: value must be finite")
    return v


def _index(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceValidationError(f"{where}: expected an integer index, got {value!r}")
    return value


def document_from_dict(data: Any) -> InstanceDocument:
    if not isinstance(data, dict):
        raise InstanceValidationError("instance must be a JSON object")
    fmt = data.get("format", INSTANCE_FORMAT)
    if fmt != INSTANCE_FORMAT:
        raise InstanceValidationError(f"unexpected format {fmt!r}")
    version = str(data.get("version", INSTANCE_VERSION))
    if version != INSTANCE_VERSION:
        raise InstanceValidationError(f"unsupported instance version {version!r}")
    if "n" not in data:
        raise InstanceValidationError("missing spin count 'n'")
    n = _index(data["n"], "n")
    if n < 1:
        raise InstanceValidationError(f"n must be >= 1, got {n}")

    couplings = {}
    for entry in data.get("couplings", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise InstanceValidationError(f"coupling entry {entry!r} must be [i, j, value]")
        i = _index(entry[0], "coupling")
        j = _index(entry[1], "coupling")
        where = f"coupling ({i}, {j})"
        if not i < j:
            raise InstanceValidationError(f"{where}: requires i < j")
        if i < 0 or j >= n:
            raise InstanceValidationError(f"{where}: index out of range for n={n}")
        if (i, j) in couplings:
            raise InstanceValidationError(f"{where}: duplicate pair")
        couplings[(i, j)] = _number(entry[2], where)

    fields = [0.0] * n
    seen = set()
    for entry in data.get("fields", []):
        if not isinstance(entry, list) or len(entry) != 2:
            raise InstanceValidationError(f"field entry {entry!r} must be [i, value]")
        i = _index(entry[0], "field")
        where = f"field {i}"
        if not 0 <= i < n:
            raise InstanceValidationError(f"{where}: index out of range for n={n}")
        if i in seen:
            raise InstanceValidationError(f"{where}: duplicate index")
        seen.add(i)
        fields[i] = _number(entry[1], where)

    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise InstanceValidationError("metadata must be an object")
    extra = {k: v for k, v in data.items() if k not in _KNOWN_KEYS}
    return InstanceDocument(IsingProblem(n, couplings, tuple(fields)), dict(metadata), extra)


def parse_document(text: str) -> InstanceDocument:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, exc.lineno, exc.colno) from None
    return document_from_dict(data)


def parse_instance(text: str) -> IsingProblem:
    return parse_document(text).problem


def document_to_dict(doc: InstanceDocument) -> dict:
    p = doc.problem
    out = {
        "format": INSTANCE_FORMAT,
        "version": INSTANCE_VERSION,
        "n": p.n,
        "couplings": [[i, j, v] for (i, j), v in p.couplings.items()],
        "fields": [[i, h] for i, h in enumerate(p.fields)],
    }
    if doc.metadata:
        out["metadata"] = doc.metadata
    out.update(doc.extra)
    return out


def serialize_document(doc: InstanceDocument) -> str:
    d = document_to_dict(doc)
    # one term per line keeps diffs readable
    lines = ["{"]
    items = list(d.items())
    for q, (key, value) in enumerate(items):
        comma = "," if q < len(items) - 1 else ""
        if key in ("couplings", "fields") and value:
            body = ",\n".join("    " + json.dumps(e) for e in value)
            lines.append(f'  "{key}": [\n{body}\n  ]{comma}')
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value, sort_keys=True)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_instance(problem: IsingProblem, metadata: dict | None = None) -> str:
    return serialize_document(InstanceDocument(problem, dict(metadata or {})))


def load_document(path: str | Path) -> InstanceDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def fixture_names() -> list[str]:
    root = resources.files("eltip") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> InstanceDocument:
    """Instance shipped with the package, e.g. ``"fig1a"`` or ``"table4-id"``."""
    res = resources.files("eltip") / "data" / f"{name}.json"
    if not res.is_file():
        raise FileNotFoundError(f"no fixture named {name!r}; available: {', '.join(fixture_names())}")
    return parse_document(res.read_text(encoding="utf-8"))


# --- sweep CSV -------------------------------------------------------------


def sweep_header(n: int) -> list[str]:
    return ["T"] + [str(SpinConfig.from_index(z, n)) for z in range(1 << n)] + ["ground"]


def write_sweep_csv(result: SweepResult, labels: Sequence[str] | None = None) -> str:
    """``T,<config columns in basis-index order>,ground`` with 9 significant digits."""
    header = sweep_header(result.n)
    if labels is not None:
        if len(labels) != 1 << result.n:
            raise ValueError("need one label per basis state")
        header = ["T", *labels, "ground"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for t, row, g in zip(result.times, result.probabilities, result.ground_probability):
        w.writerow([f"{t:.9g}", *(f"{p:.9g}" for p in row), f"{g:.9g}"])
    return buf.getvalue()


def read_sweep_csv(text: str) -> tuple[list[str], np.ndarray, np.ndarray, np.ndarray]:
    """Returns ``(state labels, times, probabilities, ground)``."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body]).reshape(len(body), len(header))
    return header[1:-1], data[:, 0], data[:, 1:-1], data[:, -1]


def gnuplot_script(csv_path: str, n: int, title: str = "", output: str | None = None) -> str:
    """Probability of every basis state against total annealing time, log x axis."""
    lines = [
        f"# columns: {', '.join(sweep_header(n))}",
        "set datafile separator ','",
        "set logscale x",
        "set format x '10^{%L}'",
        "set xlabel 'total annealing time T'",
        "set ylabel 'final-state probability'",
        "set yrange [0:1]",
        "set key outside right",
    ]
    if title:
        lines.append(f"set title {json.dumps(title)}")
    if output:
        lines += ["set terminal pngcairo size 900,600", f"set output {json.dumps(output)}"]
    lines.append(
        f"plot for [col=2:{(1 << n) + 1}] {json.dumps(csv_path)} using 1:col with linespoints title columnheader"
    )
    return "\n".join(lines) + "\n"


# --- reports ---------------------------------------------------------------


def report_to_dict(report: LandscapeReport) -> dict:
    return {
        "ground_energy": report.ground_energy,
        "ground_configs": [str(c) for c in report.ground_configs],
        "levels": [
            {"energy": l.energy, "config": str(l.config), "gap": l.gap, "min_hamming": l.min_hamming}
            for l in report.levels
        ],
        "difficulty_score": report.difficulty_score,
        "score_formula": report.score_formula,
    }


def report_from_dict(d: dict) -> LandscapeReport:
    return LandscapeReport(
        d["ground_energy"],
        tuple(SpinConfig.from_string(c) for c in d["ground_configs"]),
        tuple(
            Level(l["energy"], SpinConfig.from_string(l["config"]), l["gap"], l["min_hamming"])
            for l in d["levels"]
        ),
        d["difficulty_score"],
        d["score_formula"],
    )


def _table(report: LandscapeReport) -> list[str]:
    out = [f"{'level':>5}  {'energy':>14}  {'gap':>12}  {'hamming':>7}  config"]
    for q, l in enumerate(report.levels, 1):
        out.append(f"{q:>5}  {l.energy:>14.10g}  {l.gap:>12.6g}  {l.min_hamming:>7d}  {l.config}")
    return out


def write_report(obj: LandscapeReport | Sequence[tuple[str, LandscapeReport]]) -> str:
    """Human-readable table, then a JSON block after a ``--- json ---`` line."""
    lines = []
    if isinstance(obj, LandscapeReport):
        payload = {"kind": "report", "report": report_to_dict(obj)}
        lines.append(f"ground energy {obj.ground_energy:.10g}  ground configs {' '.join(map(str, obj.ground_configs))}")
        lines.append(f"difficulty score {obj.difficulty_score:.6g}  ({obj.score_formula}, heuristic)")
        lines += _table(obj)
    else:
        ranked = list(obj)
        payload = {
            "kind": "ranking",
            "landscapes": [{"label": lab, "report": report_to_dict(r)} for lab, r in ranked],
        }
        for rank, (lab, r) in enumerate(ranked, 1):
            fe = r.first_excited()
            first = f"first excited gap {fe.gap:.6g} hamming {fe.min_hamming}" if fe else "no excited level listed"
            lines.append(f"#{rank} {lab}: score {r.difficulty_score:.6g}; {first}")
        for lab, r in ranked:
            lines.append("")
            lines.append(f"[{lab}] ground energy {r.ground_energy:.10g}")
            lines += _table(r)
    doc = {"format": REPORT_FORMAT, "version": REPORT_VERSION, "score_formula_is_heuristic": True, **payload}
    lines += [JSON_MARKER, json.dumps(doc, indent=2)]
    return "\n".join(lines) + "\n"


def parse_report_json(text: str) -> LandscapeReport | list[tuple[str, LandscapeReport]]:
    """Inverse of the JSON block of :func:`write_report`."""
    _, sep, tail = text.partition(JSON_MARKER + "\n")
    doc = json.loads(tail if sep else text)
    if doc.get("format") != REPORT_FORMAT:
        raise ValueError("not a report document")
    if doc["kind"] == "report":
        return report_from_dict(doc["report"])
    return [(e["label"], report_from_dict(e["report"])) for e in doc["landscapes"]]
