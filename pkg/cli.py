"""
Command-line front end.

Subcommands:
- fold EXPR: reduce a tensor product of symbols (fold or p-th power recursion)
- witt OP A [B]: one Witt vector operation
- pi BETA X --length M: the correction vector of the shift beta -> beta + x^(p^M)
- realize SYMBOL: structure constants of the symbol's algebra
- check: the seeded property suites

Exit codes: 0 success, 1 domain error, 2 usage or parse error.

Usage:
    python -m cli --prime 2 --vars w,t,s,u fold "[(w), t)_{2} * [(s), u)_{2}"
    echo "[(t), s)_{2}" | python -m cli --json realize
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, field_validator

from config import LoggingSettings, get_settings
from derham import solve_pi
from error_handling import EXIT_DOMAIN_ERROR, EXIT_OK, ErrorHandler, exit_code_for, format_error_context
from exceptions import InvalidInputError, SymbolEngineError
from export_utils import JSON, MARKDOWN, TEXT, emit_trace, trace_to_dict
from expression_parser import parse_elem, parse_expression, parse_symbol, parse_witt_vector
from input_validation import sanitize_expression, validate_level, validate_prime, validate_variables
from merging import albert_reduce
from observability import setup_structured_logging
from realize import GeneratorPresentation, center_basis, check_relations, realize_symbol
from ring_base import FieldContext
from self_check import run_checks
from witt import (
    mul_by_p,
    verschiebung,
    witt_frobenius,
    witt_inv,
    wp_map,
)

logger = logging.getLogger(__name__)

DEFAULT_VARIABLES = "t,s,u,v,w,x"

WITT_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}
WITT_UNARY = {
    "neg": lambda a: -a,
    "inv": witt_inv,
    "frobenius": witt_frobenius,
    "wp": wp_map,
    "mul-p": mul_by_p,
    "verschiebung": verschiebung,
}


class Subcommand(str, Enum):
    FOLD = "fold"
    WITT = "witt"
    PI = "pi"
    REALIZE = "realize"
    CHECK = "check"


class Command(BaseModel):
    """A validated command-line request."""
    subcommand: Subcommand
    prime: int
    variables: List[str]
    inputs: List[str] = Field(default_factory=list)
    output: str = TEXT
    operation: Optional[str] = None
    length: Optional[int] = None
    seed: Optional[int] = None
    trials: Optional[int] = Field(default=None, ge=1)

    @field_validator("prime")
    @classmethod
    def check_prime(cls, v: int) -> int:
        ok, value, error = validate_prime(v)
        if not ok:
            raise ValueError(error)
        return value

    @field_validator("variables")
    @classmethod
    def check_variables(cls, v: List[str]) -> List[str]:
        ok, value, error = validate_variables(v)
        if not ok:
            raise ValueError(error)
        return value

    @field_validator("inputs")
    @classmethod
    def check_inputs(cls, v: List[str]) -> List[str]:
        cleaned = []
        for text in v:
            ok, value, error = sanitize_expression(text)
            if not ok:
                raise ValueError(error)
            cleaned.append(value)
        return cleaned

    @field_validator("length")
    @classmethod
    def check_length(cls, v: Optional[int]) -> Optional[int]:
        if v is None:
            return v
        ok, value, error = validate_level(v)
        if not ok:
            raise ValueError(error)
        return value

    def context(self) -> FieldContext:
        return FieldContext(self.prime, self.variables)


@dataclass
class CommandResult:
    exit_code: int
    payload: str
    data: Dict[str, Any] = field(default_factory=dict)


# =============================================================================
# Argument parsing
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclic-symbols",
        description="Exact calculus of cyclic p-algebra symbols over F_p(t1, ..., tn).",
    )
    parser.add_argument("--prime", "-p", type=int, default=None, help="characteristic p (2, 3 or 5)")
    parser.add_argument("--vars", default=DEFAULT_VARIABLES, help="comma-separated indeterminates")
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="emit JSON")
    output.add_argument("--markdown", action="store_true", help="emit a Markdown report (fold only)")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized suites")
    parser.add_argument("--log-level", default=None, help="logging level (default from CYCLIC_LOG_LEVEL)")
    parser.add_argument("--log-json", action="store_true", help="structured JSON logs on stderr")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    fold = sub.add_parser("fold", help="reduce a tensor product of symbols")
    fold.add_argument("inputs", nargs="*", help="expression (read from stdin when omitted)")

    witt = sub.add_parser("witt", help="one Witt vector operation")
    witt.add_argument("operation", choices=sorted(list(WITT_BINARY) + list(WITT_UNARY)))
    witt.add_argument("inputs", nargs="*", help="Witt vectors such as (t,0)")

    pi = sub.add_parser("pi", help="correction vector for beta -> beta + x^(p^m)")
    pi.add_argument("inputs", nargs="*", help="beta and x")
    pi.add_argument("--length", "-m", type=int, default=1, help="Witt length m")

    realize = sub.add_parser("realize", help="structure constants of a symbol algebra")
    realize.add_argument("inputs", nargs="*", help="one symbol")

    check = sub.add_parser("check", help="run the property suites")
    check.add_argument("--trials", type=int, default=None, help="base trial count per suite")
    return parser


def _read_stdin(subcommand: str) -> List[str]:
    try:
        if sys.stdin is None or sys.stdin.isatty():
            return []
        text = sys.stdin.read()
    except (OSError, ValueError):
        return []
    if subcommand in (Subcommand.FOLD.value, Subcommand.REALIZE.value):
        return [text] if text.strip() else []
    return [line for line in text.splitlines() if line.strip()]


def build_command(args: argparse.Namespace) -> Command:
    """
    Turn parsed arguments into a validated Command.

    Raises:
        InvalidInputError: a value fails validation
    """
    settings = get_settings()
    inputs = list(getattr(args, "inputs", []) or [])
    if not inputs and args.subcommand != Subcommand.CHECK.value:
        inputs = _read_stdin(args.subcommand)
    output = JSON if args.json else MARKDOWN if args.markdown else TEXT
    try:
        return Command(
            subcommand=args.subcommand,
            prime=args.prime if args.prime is not None else settings.engine.default_prime,
            variables=[n.strip() for n in args.vars.split(",") if n.strip()],
            inputs=inputs,
            output=output,
            operation=getattr(args, "operation", None),
            length=getattr(args, "length", None),
            seed=args.seed,
            trials=getattr(args, "trials", None),
        )
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise InvalidInputError(messages, original_error=e)


def _arity(cmd: Command, expected: Sequence[int]) -> None:
    if len(cmd.inputs) not in expected:
        wanted = " or ".join(str(n) for n in expected)
        raise InvalidInputError(
            f"{cmd.subcommand.value} takes {wanted} input(s), got {len(cmd.inputs)}",
            context={"subcommand": cmd.subcommand.value},
        )


# =============================================================================
# Subcommands
# =============================================================================

def _run_fold(cmd: Command) -> CommandResult:
    _arity(cmd, (1,))
    context = cmd.context()
    expr = parse_expression(cmd.inputs[0], context)
    if expr.is_split:
        raise InvalidInputError("Nothing to fold: the expression is the split class")
    result = albert_reduce(expr)

    if result.halted:
        halt = result.halt
        data = {"halt": halt.to_dict(), "certificate": trace_to_dict(halt.certificate, result="0")}
        if cmd.output == JSON:
            return CommandResult(EXIT_OK, json.dumps(data, indent=2), data)
        if halt.depth == 0:
            lines = [f"halt at depth 0: input = B * {halt.cyclic_factor}"]
        else:
            lines = [
                f"halt at depth {halt.depth}: input^{halt.power} ~ {halt.source}",
                f"{halt.source} = B * {halt.cyclic_factor}",
            ]
        lines += [
            f"B = {halt.b_expr}",
            "certificate (B^p reduces to the split class):",
            emit_trace(halt.certificate, cmd.output, result="0"),
        ]
        return CommandResult(EXIT_OK, "\n".join(lines), data)

    printed = str(result.cyclic)
    data = trace_to_dict(result.trace, result=printed)
    return CommandResult(EXIT_OK, emit_trace(result.trace, cmd.output, result=printed), data)


def _run_witt(cmd: Command) -> CommandResult:
    context = cmd.context()
    op = cmd.operation
    if op in WITT_BINARY:
        _arity(cmd, (2,))
        a, b = (parse_witt_vector(text, context) for text in cmd.inputs)
        value = WITT_BINARY[op](a, b)
    else:
        _arity(cmd, (1,))
        value = WITT_UNARY[op](parse_witt_vector(cmd.inputs[0], context))
    data = {"operation": op, "inputs": cmd.inputs, "result": str(value)}
    payload = json.dumps(data, indent=2) if cmd.output == JSON else str(value)
    return CommandResult(EXIT_OK, payload, data)


def _run_pi(cmd: Command) -> CommandResult:
    _arity(cmd, (2,))
    context = cmd.context()
    beta, x = (parse_elem(text, context) for text in cmd.inputs)
    solution = solve_pi(beta, x, cmd.prime, cmd.length or 1)
    data = solution.to_dict()
    if cmd.output == JSON:
        return CommandResult(EXIT_OK, json.dumps(data, indent=2), data)
    lines = [
        f"[beta] + [x^(p^m)] = {solution.carry}",
        f"d[{solution.shifted}] = {solution.mu} d[{beta}]",
        f"pi = {solution.pi}",
    ]
    lines += [f"  {step.rule}: {step.term} -> {step.detail}" for step in solution.derivation]
    return CommandResult(EXIT_OK, "\n".join(lines), data)


def _run_realize(cmd: Command) -> CommandResult:
    _arity(cmd, (1,))
    symbol = parse_symbol(cmd.inputs[0], cmd.context())
    algebra = realize_symbol(symbol)
    relations_ok = check_relations(algebra, GeneratorPresentation.from_symbol(symbol))
    center_rank = len(center_basis(algebra))
    data = algebra.to_dict()
    data.update({"relations_ok": relations_ok, "center_rank": center_rank})
    exit_code = EXIT_OK if relations_ok else EXIT_DOMAIN_ERROR
    if cmd.output == JSON:
        return CommandResult(exit_code, json.dumps(data, indent=2), data)
    lines = [
        f"algebra of {symbol}: dimension {algebra.dimension}",
        f"relations: {'ok' if relations_ok else 'FAILED'}",
        f"center rank: {center_rank}",
    ]
    for (i, j), row in sorted(algebra.table.items()):
        product = " + ".join(f"({v})*{algebra.labels[k]}" for k, v in sorted(row.items()))
        lines.append(f"  {algebra.labels[i]} . {algebra.labels[j]} = {product}")
    return CommandResult(exit_code, "\n".join(lines), data)


def _run_check(cmd: Command) -> CommandResult:
    summary = run_checks(trials=cmd.trials, seed=cmd.seed)
    exit_code = EXIT_OK if summary["ok"] else EXIT_DOMAIN_ERROR
    if cmd.output == JSON:
        return CommandResult(exit_code, json.dumps(summary, indent=2), summary)
    lines = [f"seed {summary['seed']}: {summary['passed']}/{summary['total_trials']} trial(s) passed"]
    for suite, info in summary["suites"].items():
        status = "ok" if not info["failed"] else f"{info['failed']} failed"
        lines.append(f"  {suite:16s} {info['count']:4d}  {status}")
        if info["first_failure"]:
            lines.append(f"    first failure at trial {info['first_failure']['index']}: {info['first_failure']['error']}")
    return CommandResult(exit_code, "\n".join(lines), summary)


HANDLERS: Dict[Subcommand, Callable[[Command], CommandResult]] = {
    Subcommand.FOLD: _run_fold,
    Subcommand.WITT: _run_witt,
    Subcommand.PI: _run_pi,
    Subcommand.REALIZE: _run_realize,
    Subcommand.CHECK: _run_check,
}


def run_command(cmd: Command) -> CommandResult:
    """
    Execute a command, turning engine errors into exit codes.

    Returns:
        CommandResult with exit code 0, 1 (domain error) or 2 (parse error)
    """
    try:
        return HANDLERS[cmd.subcommand](cmd)
    except SymbolEngineError as e:
        ErrorHandler.log_error(e, context={"subcommand": cmd.subcommand.value})
        data = format_error_context(e, cmd.subcommand.value)
        payload = json.dumps({"error": data}, indent=2) if cmd.output == JSON else f"error: {e.message}"
        return CommandResult(exit_code_for(e), payload, {"error": data})


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return exit_code_for(e)

    settings = get_settings()
    setup_structured_logging(
        level=LoggingSettings(level=args.log_level).level if args.log_level else settings.logging.level,
        enable_json=args.log_json or settings.logging.json_output,
        service_name=settings.logging.service_name,
    )

    try:
        cmd = build_command(args)
    except SymbolEngineError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return exit_code_for(e)

    result = run_command(cmd)
    stream = sys.stdout if result.exit_code == EXIT_OK or "error" not in result.data else sys.stderr
    print(result.payload, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
