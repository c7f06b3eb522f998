"""Problem files, bundled fixtures and reports.

A problem file is JSON::

    {"name": "...", "A": [["1", "-1/2"], ...], "B": [[1, 0.5], ...],
     "c": [1, "3/2"], "classes": [3, 3], "tolerances": {"tol": 1e-9}}

Integers and "p/q" strings are exact; decimals (numbers with a point or an
exponent, in either form) go to the float backend. A must be exact.
"""

from __future__ import annotations

import io as _io
import csv
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ParseError
from .framework import ProblemInstance
from .geometry import ClassPartition
from .linalg import RatMatrix, RealMatrix, as_matrix, is_exact, to_numpy

_DECIMAL = re.compile(r"[.eE]")


def _field_line(text: str, name: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(name), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse_number(v, field_name: str = "", line: int | None = None):
    if isinstance(v, bool):
        raise ParseError(f"booleans are not numbers in {field_name!r}", field_name, line)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        s = v.strip()
        try:
            if _DECIMAL.search(s) and "/" not in s:
                return float(s)
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {v!r} as a number", field_name, line) from None
    raise ParseError(f"expected a number in {field_name!r}, got {type(v).__name__}", field_name, line)


def _matrix(doc, text, name, required=True):
    line = _field_line(text, name)
    if name not in doc:
        if required:
            raise ParseError(f"missing field {name!r}", name, None)
        return None
    rows = doc[name]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{name!r} must be an array of arrays", name, line)
    if len({len(r) for r in rows}) > 1:
        raise DimensionMismatch(f"rows of {name!r} differ in length", name, line)
    return [[parse_number(v, name, line) for v in r] for r in rows]


def _build_matrix(rows, ncols):
    if not rows:
        return RatMatrix.zeros(0, ncols)
    if any(isinstance(v, float) for r in rows for v in r):
        return RealMatrix(np.array([[float(v) for v in r] for r in rows]))
    return RatMatrix(rows)


def problem_from_dict(doc: dict, text: str = "") -> ProblemInstance:
    A = _matrix(doc, text, "A")
    B = _matrix(doc, text, "B")
    if "c" not in doc:
        raise ParseError("missing field 'c'", "c", None)
    cline = _field_line(text, "c")
    if not isinstance(doc["c"], list):
        raise ParseError("'c' must be an array", "c", cline)
    c = [parse_number(v, "c", cline) for v in doc["c"]]
    m = len(c)
    for name, rows in (("A", A), ("B", B)):
        if rows and len(rows[0]) != m:
            raise DimensionMismatch(
                f"{name!r} has {len(rows[0])} columns but 'c' has length {m}", name, _field_line(text, name)
            )
    if any(isinstance(v, float) for r in A for v in r):
        raise ParseError("'A' must be exact (integers or 'p/q' strings)", "A", _field_line(text, "A"))
    if any(not v > 0 for v in c):
        raise ParseError("coefficients in 'c' must be positive", "c", cline)
    part = None
    if doc.get("classes") is not None:
        sizes = doc["classes"]
        if sum(sizes) != m:
            raise DimensionMismatch(f"class sizes sum to {sum(sizes)}, expected {m}", "classes", _field_line(text, "classes"))
        part = ClassPartition.from_sizes(sizes)
    return ProblemInstance(_build_matrix(A, m), _build_matrix(B, m), tuple(c), part, doc.get("name", ""))


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", None, e.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", None, 1)
    return doc


def parse_problem(text: str) -> ProblemInstance:
    return problem_from_dict(parse_document(text), text)


def _num_out(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return float(v)


def _matrix_out(M):
    M = as_matrix(M)
    if is_exact(M):
        return [[_num_out(v) for v in r] for r in M.rows]
    return to_numpy(M).tolist()


def problem_to_dict(p: ProblemInstance) -> dict:
    doc = {"A": _matrix_out(p.A), "B": _matrix_out(p.B), "c": [_num_out(v) for v in p.c],
           "classes": list(p.partition.sizes)}
    if p.name:
        doc = {"name": p.name, **doc}
    return doc


def dump_problem(p: ProblemInstance) -> str:
    return json.dumps(problem_to_dict(p), indent=1)


# -- fixtures ----------------------------------------------------------------------


def _fixture_dir():
    return resources.files("fewnomial") / "fixtures"


def fixture_names() -> list[str]:
    return sorted(f.name[:-5] for f in _fixture_dir().iterdir() if f.name.endswith(".json"))


def load_fixture(name: str) -> dict:
    name = name[:-5] if name.endswith(".json") else name
    f = _fixture_dir() / f"{name}.json"
    if not f.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return parse_document(f.read_text())


def read_problem_document(path: str) -> tuple[dict, str]:
    """Read a problem file; a missing path falls back to the bundled fixture of the same name."""
    p = Path(path)
    if p.is_file():
        text = p.read_text()
        return parse_document(text), text
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in fixture_names():
        text = (_fixture_dir() / f"{stem}.json").read_text()
        return parse_document(text), text
    raise FileNotFoundError(f"{path}: no such file or bundled fixture")


# -- reports -----------------------------------------------------------------------


def to_jsonable(v):
    if isinstance(v, Fraction):
        return _num_out(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [to_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, float) and not np.isfinite(v):
        return str(v)
    if hasattr(v, "value") and hasattr(v, "name"):  # enums
        return v.value
    return v


def _text_lines(v, indent=0):
    pad = "  " * indent
    if isinstance(v, dict):
        for k, x in v.items():
            if isinstance(x, (dict, list)) and x and not _flat(x):
                yield f"{pad}{k}:"
                yield from _text_lines(x, indent + 1)
            else:
                yield f"{pad}{k}: {_inline(x)}"
    elif isinstance(v, list):
        for x in v:
            if isinstance(x, dict):
                yield f"{pad}-"
                yield from _text_lines(x, indent + 1)
            else:
                yield f"{pad}- {_inline(x)}"
    else:
        yield f"{pad}{_inline(v)}"


def _flat(x):
    return isinstance(x, list) and all(not isinstance(t, (dict, list)) for t in x)


def _inline(x):
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, list):
        return "[" + ", ".join(_inline(t) for t in x) + "]"
    return str(x)


@dataclass
class Report:
    command: str
    data: dict = field(default_factory=dict)
    status: int = 0
    csv_rows: list | None = None
    csv_header: list | None = None

    def as_dict(self) -> dict:
        return {"command": self.command, "status": self.status, **to_jsonable(self.data)}

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=1)
        if fmt == "csv":
            if self.csv_rows is None:
                raise ValueError(f"{self.command} has no CSV output")
            buf = _io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.csv_header)
            w.writerows(self.csv_rows)
            return buf.getvalue()
        return "\n".join(_text_lines(self.as_dict()))
