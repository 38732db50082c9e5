"""Reading problem files (JSON, or CSV for plain utility tables) and echoing them back.

JSON layout::

    {
      "prizes": ["o1", "o2", "o3"],
      "dm": [0, 0.5, 1],
      "individuals": [[1, 0, 0], [0, 1, 1]],
      "epsilon": 0.5,
      "seu": {
        "states": ["s1", "s2"],
        "tastes": {"dm": [...], "individuals": [[...], ...]},
        "beliefs": {"dm": [...], "individuals": [[...], ...]},
        "epsilon1": 0.1,
        "epsilon2": 0.2
      }
    }

``seu.tastes`` is optional and defaults to the top-level utilities, with the
prizes playing the role of consequences. CSV files carry a header row of
prize labels, then the DM's utilities, then one row per individual; lines
starting with ``#`` are skipped.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .core import Problem
from .seu import SeuProblem

FORMATS = ("json", "csv")


class InputError(ValueError):
    """A problem file could not be parsed; ``where`` names the line or field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.detail = message


@dataclass(frozen=True)
class ParsedInput:
    problem: Problem
    epsilon: float | None
    seu: SeuProblem | None
    epsilon1: float | None
    epsilon2: float | None
    echo: dict


def _reject_constant(name: str):
    raise ValueError(f"non-finite literal {name}")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(where, f"expected a number, got {json.dumps(value)}")
    out = float(value)
    if not math.isfinite(out):
        raise InputError(where, "number is not finite")
    return out


def _vector(value: Any, where: str, length: int | None = None) -> list[float]:
    if not isinstance(value, list) or not value:
        raise InputError(where, "expected a non-empty list of numbers")
    out = [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]
    if length is not None and len(out) != length:
        raise InputError(where, f"has {len(out)} entries, expected {length}")
    return out


def _matrix(value: Any, where: str, length: int) -> list[list[float]]:
    if not isinstance(value, list) or not value:
        raise InputError(where, "expected a non-empty list of vectors")
    return [_vector(row, f"{where}[{i}]", length) for i, row in enumerate(value)]


def _labels(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or not value:
        raise InputError(where, "expected a non-empty list of labels")
    for i, s in enumerate(value):
        if not isinstance(s, str) or not s:
            raise InputError(f"{where}[{i}]", "labels must be non-empty strings")
    if len(set(value)) != len(value):
        raise InputError(where, "labels must be unique")
    return list(value)


def _tolerance(value: Any, where: str, upper: float | None = None) -> float:
    out = _number(value, where)
    if out < 0:
        raise InputError(where, "must be >= 0")
    if upper is not None and out > upper:
        raise InputError(where, f"must be <= {upper}")
    return out


def _require(doc: dict, key: str, where: str = "") -> Any:
    if key not in doc:
        raise InputError(f"{where}{key}", "missing required field")
    return doc[key]


def _belief(value: Any, where: str, length: int) -> list[float]:
    vec = _vector(value, where, length)
    if any(v < 0 for v in vec):
        raise InputError(where, "probabilities must be >= 0")
    if abs(sum(vec) - 1.0) > 1e-9:
        raise InputError(where, f"probabilities sum to {sum(vec)!r}, not 1")
    return vec


def parse_document(doc: Any) -> ParsedInput:
    """Validate a decoded JSON document and build the problem objects."""
    if not isinstance(doc, dict):
        raise InputError("(root)", "expected a JSON object")
    prizes = _labels(_require(doc, "prizes"), "prizes")
    m = len(prizes)
    dm = _vector(_require(doc, "dm"), "dm", m)
    inds = _matrix(_require(doc, "individuals"), "individuals", m)
    eps = None
    if doc.get("epsilon") is not None:
        eps = _tolerance(doc["epsilon"], "epsilon")
    problem = Problem.from_arrays(dm, inds, labels=prizes, epsilon=eps)
    echo: dict = {"prizes": prizes, "dm": dm, "individuals": inds}
    if eps is not None:
        echo["epsilon"] = eps

    seu = eps1 = eps2 = None
    if doc.get("seu") is not None:
        sec = doc["seu"]
        if not isinstance(sec, dict):
            raise InputError("seu", "expected an object")
        states = _labels(_require(sec, "states", "seu."), "seu.states")
        s = len(states)
        beliefs = _require(sec, "beliefs", "seu.")
        if not isinstance(beliefs, dict):
            raise InputError("seu.beliefs", "expected an object")
        P0 = _belief(_require(beliefs, "dm", "seu.beliefs."), "seu.beliefs.dm", s)
        raw = _require(beliefs, "individuals", "seu.beliefs.")
        if not isinstance(raw, list) or not raw:
            raise InputError("seu.beliefs.individuals", "expected a non-empty list of vectors")
        Ps = [_belief(row, f"seu.beliefs.individuals[{i}]", s) for i, row in enumerate(raw)]
        cons, v0, vs = prizes, dm, inds
        tastes_echo = None
        if sec.get("tastes") is not None:
            tastes = sec["tastes"]
            if not isinstance(tastes, dict):
                raise InputError("seu.tastes", "expected an object")
            if tastes.get("consequences") is not None:
                cons = _labels(tastes["consequences"], "seu.tastes.consequences")
            v0 = _vector(_require(tastes, "dm", "seu.tastes."), "seu.tastes.dm", len(cons))
            vs = _matrix(_require(tastes, "individuals", "seu.tastes."),
                         "seu.tastes.individuals", len(cons))
            tastes_echo = {"consequences": cons, "dm": v0, "individuals": vs}
        if len(vs) != len(Ps):
            raise InputError("seu.beliefs.individuals",
                             f"{len(Ps)} beliefs for {len(vs)} individual tastes")
        if sec.get("epsilon1") is not None:
            eps1 = _tolerance(sec["epsilon1"], "seu.epsilon1")
        if sec.get("epsilon2") is not None:
            eps2 = _tolerance(sec["epsilon2"], "seu.epsilon2", upper=1.0)
        seu = SeuProblem.from_arrays(v0, vs, P0, Ps, consequences=cons, states=states)
        seu_echo: dict = {"states": states, "beliefs": {"dm": P0, "individuals": Ps}}
        if tastes_echo is not None:
            seu_echo["tastes"] = tastes_echo
        if eps1 is not None:
            seu_echo["epsilon1"] = eps1
        if eps2 is not None:
            seu_echo["epsilon2"] = eps2
        echo["seu"] = seu_echo
    return ParsedInput(problem, eps, seu, eps1, eps2, echo)


def parse_json_text(text: str) -> ParsedInput:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    except ValueError as exc:
        raise InputError("(document)", str(exc)) from None
    return parse_document(doc)


def parse_csv_text(text: str) -> ParsedInput:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            row = next(csv.reader([line]), [])
        except csv.Error as exc:
            raise InputError(f"line {lineno}", str(exc)) from None
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        rows.append((lineno, [c.strip() for c in row]))
    if len(rows) < 3:
        raise InputError("(document)", "need a header row, a DM row and at least one individual")
    header_line, header = rows[0]
    m = len(header)
    values = []
    for lineno, row in rows[1:]:
        if len(row) != m:
            raise InputError(f"line {lineno}", f"has {len(row)} columns, header has {m}")
        vec = []
        for col, cell in enumerate(row, start=1):
            try:
                x = float(cell)
            except ValueError:
                raise InputError(f"line {lineno}, column {col}",
                                 f"expected a number, got {cell!r}") from None
            if not math.isfinite(x):
                raise InputError(f"line {lineno}, column {col}", "number is not finite")
            vec.append(x)
        values.append(vec)
    try:
        labels = _labels(header, "header")
    except InputError as exc:
        raise InputError(f"line {header_line}", exc.detail) from None
    return parse_document({"prizes": labels, "dm": values[0], "individuals": values[1:]})


def detect_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in FORMATS:
            raise InputError("--format", f"unknown format {fmt!r}")
        return fmt
    return "csv" if path.suffix.lower() == ".csv" else "json"


def load(path: str | Path, fmt: str | None = None) -> ParsedInput:
    """Read and validate one problem file (UTF-8)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(str(path), f"cannot read file ({exc})") from None
    if detect_format(path, fmt) == "csv":
        return parse_csv_text(text)
    return parse_json_text(text)


def problem_to_document(problem: Problem, epsilon: float | None = None) -> dict:
    doc = {
        "prizes": list(problem.prizes.labels),
        "dm": problem.dm.tolist(),
        "individuals": problem.matrix.tolist(),
    }
    eps = epsilon if epsilon is not None else problem.epsilon
    if eps is not None:
        doc["epsilon"] = float(eps)
    return doc
