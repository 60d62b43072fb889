"""
Export functionality for derivation traces and engine results.
Supports plain text, JSON and Markdown formats.
"""
import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from identities import TraceValidation, validate_trace
from symbols import DerivationTrace

logger = logging.getLogger(__name__)

TEXT = "text"
JSON = "json"
MARKDOWN = "markdown"


def trace_to_dict(trace: DerivationTrace, result: Optional[str] = None,
                  validation: Optional[TraceValidation] = None) -> Dict[str, Any]:
    """
    The JSON form of a trace.

    Args:
        trace: Trace to export
        result: Printed final expression (the last step's result by default)
        validation: Replay outcome; computed when omitted

    Returns:
        {"steps": [...], "result": str, "valid": bool, "failing_index": int | None}
    """
    if validation is None:
        validation = validate_trace(trace)
    if result is None:
        result = str(trace.result) if len(trace) else ""
    return {
        "steps": [step.to_dict(i) for i, step in enumerate(trace)],
        "result": result,
        "valid": validation.valid,
        "failing_index": validation.failing_index,
    }


def export_to_json(trace: DerivationTrace, result: Optional[str] = None,
                   validation: Optional[TraceValidation] = None) -> str:
    try:
        return json.dumps(trace_to_dict(trace, result, validation), indent=2, ensure_ascii=False)
    except Exception as e:
        logger.error(f"Error exporting trace to JSON: {str(e)}")
        raise


def export_to_text(trace: DerivationTrace, result: Optional[str] = None,
                   validation: Optional[TraceValidation] = None) -> str:
    """One step per line, then the result and the replay verdict."""
    if validation is None:
        validation = validate_trace(trace)
    lines = [f"{i:3d}  {step}" for i, step in enumerate(trace)]
    if result is not None:
        lines.append(f"result: {result}")
    if validation.valid:
        lines.append(f"trace: valid ({len(trace)} step(s))")
    else:
        lines.append(f"trace: INVALID at step {validation.failing_index}: {validation.reason}")
    return "\n".join(lines)


def export_to_markdown(trace: DerivationTrace, result: Optional[str] = None,
                       validation: Optional[TraceValidation] = None,
                       title: str = "Derivation Report") -> str:
    """
    Export a trace as a Markdown report.

    Args:
        trace: Trace to export
        result: Printed final expression
        validation: Replay outcome; computed when omitted
        title: Report heading

    Returns:
        Markdown string
    """
    if validation is None:
        validation = validate_trace(trace)
    try:
        md = [f"# {title}\n"]
        md.append(f"**Exported:** {datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M:%S UTC')}\n")
        if len(trace):
            md.append(f"**Input:** `{trace.start}`\n")
        if result is not None:
            md.append(f"**Result:** `{result}`\n")
        verdict = "valid" if validation.valid else f"invalid at step {validation.failing_index}"
        md.append(f"**Replay:** {verdict}\n")

        md.append("\n| # | rule | target | witnesses | after |")
        md.append("|---|------|--------|-----------|-------|")
        for i, step in enumerate(trace):
            witnesses = ", ".join(f"{k}={v}" for k, v in step.to_dict(i)["witnesses"].items())
            md.append(f"| {i} | {step.rule.value} | {step.target} | {witnesses} | `{step.after}` |")
        return "\n".join(md) + "\n"
    except Exception as e:
        logger.error(f"Error exporting trace to Markdown: {str(e)}")
        raise


def emit_trace(trace: DerivationTrace, mode: str = TEXT, result: Optional[str] = None) -> str:
    """Render a trace in the requested mode (text, json or markdown); the trace is replayed once."""
    validation = validate_trace(trace)
    if mode == JSON:
        return export_to_json(trace, result, validation)
    if mode == MARKDOWN:
        return export_to_markdown(trace, result, validation)
    return export_to_text(trace, result, validation)
