"""Text and JSON rendering of command reports."""

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from .exterior import _Graded
from .formats import graded_to_model
from .liealg import AlgebraElement
from .models import ExitCode
from .ring import QuotientElement, format_scalar, rational_to_str

STATUS_MARKERS = {
    "ok": "✅",
    "flat": "✅",
    "generic": "✅",
    "passed": "✅",
    "non_flat": "🔺",
    "inapplicable": "⚠️",
    "not_generic": "⚠️",
    "failed": "❌",
}


@dataclass
class Report:
    """
    Result of one command.

    Text and JSON output are both rendered from ``fields``; timings are
    shown in text mode only so JSON output is reproducible.
    """
    command: str
    status: str
    exit_code: ExitCode = ExitCode.SUCCESS
    fields: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)


def jsonable(value: Any) -> Any:
    """Convert a computed value to plain JSON data with canonical strings."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return rational_to_str(value)
    if isinstance(value, (PolyElement, FracElement, QuotientElement)):
        return format_scalar(value)
    if isinstance(value, _Graded):
        data = graded_to_model(value).model_dump(exclude_none=True)
        data["text"] = str(value)
        return data
    if isinstance(value, AlgebraElement):
        return [jsonable(c) for c in value.coords]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def text_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (Fraction, PolyElement, FracElement, QuotientElement)):
        return format_scalar(value)
    if isinstance(value, _Graded):
        return str(value)
    if isinstance(value, AlgebraElement):
        return "(" + ", ".join(text_value(c) for c in value.coords) + ")"
    if isinstance(value, (list, tuple)) and all(isinstance(v, Fraction) for v in value):
        return "(" + ", ".join(rational_to_str(v) for v in value) + ")"
    return str(value)


def render_text(report: Report) -> str:
    marker = STATUS_MARKERS.get(report.status, "🔹")
    lines: List[str] = [f"\n{marker} {report.command}: {report.status}", "=" * 60]
    for key, value in report.fields.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"   • {k}: {text_value(v)}" for k, v in value.items())
        elif isinstance(value, list) and value and not all(isinstance(v, Fraction) for v in value):
            lines.append(f"{key}:")
            lines.extend(f"   • {text_value(v)}" for v in value)
        else:
            lines.append(f"{key}: {text_value(value)}")
    lines.append("=" * 60)
    for name, seconds in report.timings.items():
        lines.append(f"⏱️ {name}: {seconds:.2f}s")
    return "\n".join(lines)


def render_json(report: Report) -> str:
    document = {
        "command": report.command,
        "status": report.status,
        "exit_code": int(report.exit_code),
        "exit_name": report.exit_code.name,
    }
    document.update({key: jsonable(value) for key, value in report.fields.items()})
    return json.dumps(document, indent=2)


def print_report(report: Report, json_output: bool = False) -> None:
    print(render_json(report) if json_output else render_text(report))
