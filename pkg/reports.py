"""
Reports
=======
Human and JSON rendering of command reports and errors.
"""

import json
from typing import Any, Dict, List

from colorama import Fore, Style, init

from data_models import Report

init(autoreset=True)

BANNER_WIDTH = 60


def to_json(report: Report, include_timing: bool = False) -> str:
    """Sorted keys; byte-identical across runs unless timing is included."""
    body = report.structured()
    if include_timing:
        body["timing"] = report.timing
    return json.dumps(body, sort_keys=True, indent=2)


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.3f}"
    if isinstance(value, (list, tuple)) and len(value) > 12:
        return f"[{', '.join(map(str, value[:12]))}, ... ({len(value)} entries)]"
    return str(value)


def _section(title: str, data: Dict[str, Any], color: str) -> List[str]:
    lines = [f"{color}{Style.BRIGHT}{title}{Style.RESET_ALL}"]
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"  {key}:")
            for inner_key, inner_value in value.items():
                lines.append(f"    - {inner_key}: {_format_value(inner_value)}")
        elif isinstance(value, bool):
            mark = f"{Fore.GREEN}yes" if value else f"{Fore.RED}no"
            lines.append(f"  {key}: {mark}{Style.RESET_ALL}")
        else:
            lines.append(f"  {key}: {_format_value(value)}")
    return lines


def to_text(report: Report) -> str:
    """Banner-style console rendering."""
    lines = [
        "=" * BANNER_WIDTH,
        f"{Fore.CYAN}{Style.BRIGHT}extkit {' '.join(report.command)}{Style.RESET_ALL}",
        "=" * BANNER_WIDTH,
    ]
    lines.extend(_section("Result", report.result, Fore.GREEN))
    if report.provenance:
        lines.extend(_section("Provenance", report.provenance, Fore.YELLOW))
    if report.timing:
        lines.extend(_section("Timing (s)", report.timing, Fore.BLUE))
    lines.append("=" * BANNER_WIDTH)
    return "\n".join(lines)


def render(report: Report, as_json: bool, include_timing: bool = False) -> str:
    return to_json(report, include_timing) if as_json else to_text(report)


def render_error(body: Dict[str, Any], as_json: bool) -> str:
    if as_json:
        return json.dumps(body, sort_keys=True, indent=2)
    lines = [
        "=" * BANNER_WIDTH,
        f"{Fore.RED}{Style.BRIGHT}❌ {body.get('error', 'Error')}: {body.get('message', '')}{Style.RESET_ALL}",
    ]
    for key, value in body.items():
        if key not in ('error', 'message'):
            lines.append(f"  {key}: {_format_value(value)}")
    lines.append("=" * BANNER_WIDTH)
    return "\n".join(lines)
