"""Report schema and its JSON / CSV serialisation.

Floats are written with 17 significant digits, so parsing a report and
serialising it again reproduces the original bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .ostrowski import VerificationRecord

CSV_FIELDS = (
    "command", "fn", "a", "b", "x", "s", "q", "tau", "branch",
    "psi", "lhs", "rhs", "margin", "holds", "oracle_err",
)


def fmt_float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    if v == 0.0:
        # "0" would parse back as an int and lose the sign of -0.0
        return "-0.0" if math.copysign(1.0, v) < 0 else "0.0"
    text = format(v, ".17g")
    # keep integral floats recognisable as floats after a parse
    return text if any(c in text for c in ".en") else text + ".0"


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: insertion-ordered keys, %.17g floats, trailing newline."""
    return _encode(obj, indent, 0) + "\n"


def loads(text: str):
    return json.loads(text)


def _opt(v):
    return None if v is None or (isinstance(v, float) and not math.isfinite(v)) else v


def record_fields(rec: VerificationRecord, command: str) -> dict:
    return {
        "command": command,
        "fn": rec.fn_id,
        "a": rec.iv.a,
        "b": rec.iv.b,
        "x": rec.x,
        "s": rec.s,
        "q": rec.q,
        "tau": _opt(rec.tau),
        "branch": rec.branch,
        "psi": _opt(rec.psi),
        "lhs": rec.lhs,
        "rhs": rec.rhs,
        "margin": rec.margin,
        "holds": rec.holds,
        "oracle_err": rec.oracle_err,
    }


def make_report(command: str, params: dict, *, tau=None, branch=None, psi=None, lhs=None,
                rhs=None, margin=None, holds=None, oracle_err=None, timings=None, **extra) -> dict:
    rep = {
        "command": command,
        "params": params,
        "tau": _opt(tau),
        "branch": branch,
        "psi": _opt(psi),
        "lhs": _opt(lhs),
        "rhs": _opt(rhs),
        "margin": _opt(margin),
        "holds": holds,
        "oracle_err": _opt(oracle_err),
        "timings": timings or {},
    }
    rep.update(extra)
    return rep


def report_from_record(command: str, params: dict, rec: VerificationRecord, timings=None, **extra) -> dict:
    return make_report(
        command, params, tau=rec.tau, branch=rec.branch, psi=rec.psi, lhs=rec.lhs, rhs=rec.rhs,
        margin=rec.margin, holds=rec.holds, oracle_err=rec.oracle_err, timings=timings,
        hypothesis_ok=rec.hypothesis_ok, **extra,
    )


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if not math.isfinite(v) else format(v, ".17g")
    return str(v)


def to_csv(rows) -> str:
    """Fixed-header CSV; each row is a mapping with (a subset of) CSV_FIELDS."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for row in rows:
        w.writerow([_csv_cell(row.get(k)) for k in CSV_FIELDS])
    return buf.getvalue()
