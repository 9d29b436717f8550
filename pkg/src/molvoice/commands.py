"""The whitelisted command script language.

This is what the LLM is allowed to emit: two-slash comment lines, calls to a
closed set of zero/one-argument functions, and three bare display commands
(``spacefill R``, ``sticks R``, ``color NAME``). The text is parsed into a
Script, validated all-or-nothing against the whitelist, and executed statement
by statement against a SceneState. Emitted text is never evaluated as code.

Grammar in docs/command-language.md.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Callable, Union

from . import scene as scene_ops
from .errors import (
    ArityMismatchError,
    BadArgTypeError,
    BadSelectionError,
    MolVoiceError,
    NotWhitelistedError,
    ScriptSyntaxError,
    ScriptValidationError,
    SelectionError,
    UnbalancedParenError,
    UnbalancedQuoteError,
    UnknownColorError,
)
from .pdbio import write_pdb
from .scene import ColorName, SceneState, scene_fingerprint
from .selection import SelectionExpr, eval_selection, parse_selection


class FunctionName(str, Enum):
    """The only callable functions. Nothing outside this set executes."""

    COUNT_ATOMS = "countAtoms"
    ACKNOWLEDGE = "acknowledge"
    SAY_TIME = "sayTime"
    SAY_DATE = "sayDate"
    ZOOM_IN = "zoomIn"
    ZOOM_OUT = "zoomOut"
    CHANGE_TEMPERATURE = "changeTemperature"
    SET_TEMPERATURE = "setTemperature"
    CHANGE_UPDATE_RATE = "changeUpdateRate"
    START_SIMULATION = "startSimulation"
    STOP_SIMULATION = "stopSimulation"
    WRITE_PDB = "writePDB"
    SELECT = "select"
    SPEAK_UP = "speakUp"
    DIDNT_UNDERSTAND = "didntUnderstand"


WHITELIST = frozenset(f.value for f in FunctionName)

# argument signature per function: "num" | "str" entries, one per argument
ARITY: dict[FunctionName, tuple[str, ...]] = {name: () for name in FunctionName}
ARITY[FunctionName.SELECT] = ("str",)
ARITY[FunctionName.CHANGE_TEMPERATURE] = ("num",)
ARITY[FunctionName.SET_TEMPERATURE] = ("num",)
ARITY[FunctionName.CHANGE_UPDATE_RATE] = ("num",)

REP_KINDS = ("spacefill", "sticks", "color")


@dataclass(frozen=True)
class NumberArg:
    value: float


@dataclass(frozen=True)
class StrArg:
    value: str


Arg = Union[NumberArg, StrArg]


@dataclass(frozen=True)
class Comment:
    text: str


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple[Arg, ...] = ()
    # filled in by validation for select(), so execution never re-parses
    selection: SelectionExpr | None = None


@dataclass(frozen=True)
class RepCmd:
    kind: str
    # raw token at parse time; float (spacefill/sticks) or ColorName after validation
    arg: "float | ColorName | str"


Statement = Union[Comment, Call, RepCmd]


@dataclass
class Script:
    statements: list[Statement] = field(default_factory=list)
    raw: str = ""
    validated: bool = False


_NUMBER_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)$")
_CALL_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)$")
_REPCMD_RE = re.compile(r"^(spacefill|sticks|color)\s+(\S+)$")


# --- parsing ----------------------------------------------------------------

def parse_script(text: str) -> Script:
    """Parse raw LLM output into a Script.

    Comment lines (``//...``) become Comment statements; everything else is
    split on ";" and newlines. Raises ScriptSyntaxError, UnbalancedQuoteError,
    or UnbalancedParenError. Empty text yields an empty Script.
    """
    statements: list[Statement] = []
    offset = 0
    for line in text.split("\n"):
        stripped = line.strip()
        if stripped.startswith("//"):
            statements.append(Comment(stripped[2:].strip()))
        else:
            for fragment, position in _split_fragments(line, offset):
                statements.append(_parse_fragment(fragment, position))
        offset += len(line) + 1
    return Script(statements=statements, raw=text)


def _split_fragments(line: str, base: int) -> list[tuple[str, int]]:
    """Split one line on ";" outside quotes; yields (fragment, absolute offset)."""
    fragments = []
    start = 0
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in ("'", '"'):
            quote = ch
        elif ch == ";":
            fragments.append((line[start:i], base + start))
            start = i + 1
    if quote:
        raise UnbalancedQuoteError(base + len(line))
    fragments.append((line[start:], base + start))
    return [(f.strip(), pos) for f, pos in fragments if f.strip()]


def _parse_fragment(fragment: str, position: int) -> Statement:
    _check_parens(fragment, position)
    call = _CALL_RE.match(fragment)
    if call:
        name, argtext = call.group(1), call.group(2)
        return Call(name=name, args=tuple(_parse_args(argtext, fragment, position)))
    rep = _REPCMD_RE.match(fragment)
    if rep:
        return RepCmd(kind=rep.group(1), arg=rep.group(2))
    raise ScriptSyntaxError(fragment, position)


def _check_parens(fragment: str, position: int) -> None:
    depth = 0
    quote = None
    for ch in fragment:
        if quote:
            if ch == quote:
                quote = None
        elif ch in ("'", '"'):
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UnbalancedParenError(fragment, position)
    if depth != 0:
        raise UnbalancedParenError(fragment, position)


def _parse_args(argtext: str, fragment: str, position: int) -> list[Arg]:
    if not argtext.strip():
        return []
    args = []
    for token in _split_commas(argtext):
        token = token.strip()
        if _NUMBER_RE.match(token):
            args.append(NumberArg(float(token)))
            continue
        if len(token) >= 2 and token[0] == token[-1] and token[0] in ("'", '"'):
            args.append(StrArg(token[1:-1]))
            continue
        raise ScriptSyntaxError(fragment, position)
    return args


def _split_commas(argtext: str) -> list[str]:
    parts = []
    start = 0
    quote = None
    for i, ch in enumerate(argtext):
        if quote:
            if ch == quote:
                quote = None
        elif ch in ("'", '"'):
            quote = ch
        elif ch == ",":
            parts.append(argtext[start:i])
            start = i + 1
    parts.append(argtext[start:])
    return parts


# --- validation -------------------------------------------------------------

def validate_script(script: Script) -> Script:
    """Check every statement against the whitelist and argument table.

    All-or-nothing: any issue rejects the whole script via
    ScriptValidationError carrying the full issue list. Returns a new Script
    with typed rep-command arguments and pre-parsed select() expressions.
    """
    issues: list[MolVoiceError] = []
    checked: list[Statement] = []
    for stmt in script.statements:
        if isinstance(stmt, Comment):
            checked.append(stmt)
        elif isinstance(stmt, Call):
            checked.append(_validate_call(stmt, issues))
        else:
            checked.append(_validate_rep(stmt, issues))
    if issues:
        raise ScriptValidationError(issues)
    return Script(statements=checked, raw=script.raw, validated=True)


def _validate_call(stmt: Call, issues: list[MolVoiceError]) -> Call:
    if stmt.name not in WHITELIST:
        issues.append(NotWhitelistedError(stmt.name))
        return stmt
    signature = ARITY[FunctionName(stmt.name)]
    if len(stmt.args) != len(signature):
        issues.append(ArityMismatchError(stmt.name, len(stmt.args), len(signature)))
        return stmt
    for pos, (arg, want) in enumerate(zip(stmt.args, signature)):
        if want == "num" and not isinstance(arg, NumberArg):
            issues.append(BadArgTypeError(stmt.name, pos, "expected a number"))
            return stmt
        if want == "str" and not isinstance(arg, StrArg):
            issues.append(BadArgTypeError(stmt.name, pos, "expected a quoted string"))
            return stmt
    if stmt.name == FunctionName.SELECT.value:
        try:
            expr = parse_selection(stmt.args[0].value)
        except SelectionError as err:
            issues.append(BadSelectionError(err))
            return stmt
        return replace(stmt, selection=expr)
    return stmt


def _validate_rep(stmt: RepCmd, issues: list[MolVoiceError]) -> RepCmd:
    token = stmt.arg
    if stmt.kind == "color":
        try:
            return replace(stmt, arg=ColorName.parse(str(token)))
        except UnknownColorError as err:
            issues.append(err)
            return stmt
    if not isinstance(token, (int, float)):
        if not _NUMBER_RE.match(str(token)):
            issues.append(BadArgTypeError(stmt.kind, 0, "expected a number"))
            return stmt
        token = float(token)
    if token < 0:
        issues.append(BadArgTypeError(stmt.kind, 0, "radius must be >= 0"))
        return stmt
    return replace(stmt, arg=float(token))


# --- execution --------------------------------------------------------------

@dataclass
class ExecutionReport:
    """What running a script produced: ordered user-facing lines, whether the
    scene changed, and where execution stopped if a statement faulted."""

    responses: list[str] = field(default_factory=list)
    mutated: bool = False
    failed_at: tuple[int, Exception] | None = None
    response_volume: str = "normal"


Clock = Callable[[], datetime]


@dataclass
class _ExecContext:
    scene: SceneState
    report: ExecutionReport
    clock: Clock


def _exec_count_atoms(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.responses.append(f"{scene_ops.count_atoms(ctx.scene)} atoms")


def _exec_acknowledge(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.responses.append("OK")


def _exec_say_time(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.responses.append(f"It is {ctx.clock():%H:%M}")


def _exec_say_date(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.responses.append(f"Today is {ctx.clock():%Y-%m-%d}")


def _exec_zoom_in(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.zoom(ctx.scene, "in")


def _exec_zoom_out(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.zoom(ctx.scene, "out")


def _exec_change_temperature(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.adjust_sim(ctx.scene, "temperature", "delta", stmt.args[0].value)


def _exec_set_temperature(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.adjust_sim(ctx.scene, "temperature", "set", stmt.args[0].value)


def _exec_change_update_rate(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.adjust_sim(ctx.scene, "update_rate", "delta", stmt.args[0].value)


def _exec_start_simulation(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.set_running(ctx.scene, True)


def _exec_stop_simulation(ctx: _ExecContext, stmt: Call) -> None:
    scene_ops.set_running(ctx.scene, False)


def _exec_write_pdb(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.responses.append(write_pdb(ctx.scene))


def _exec_select(ctx: _ExecContext, stmt: Call) -> None:
    expr = stmt.selection or parse_selection(stmt.args[0].value)
    ctx.scene.current_selection = eval_selection(expr, ctx.scene.structure)


def _exec_speak_up(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.response_volume = "loud"


def _exec_didnt_understand(ctx: _ExecContext, stmt: Call) -> None:
    ctx.report.responses.append("Sorry, I didn't understand")


DISPATCH: dict[FunctionName, Callable[[_ExecContext, Call], None]] = {
    FunctionName.COUNT_ATOMS: _exec_count_atoms,
    FunctionName.ACKNOWLEDGE: _exec_acknowledge,
    FunctionName.SAY_TIME: _exec_say_time,
    FunctionName.SAY_DATE: _exec_say_date,
    FunctionName.ZOOM_IN: _exec_zoom_in,
    FunctionName.ZOOM_OUT: _exec_zoom_out,
    FunctionName.CHANGE_TEMPERATURE: _exec_change_temperature,
    FunctionName.SET_TEMPERATURE: _exec_set_temperature,
    FunctionName.CHANGE_UPDATE_RATE: _exec_change_update_rate,
    FunctionName.START_SIMULATION: _exec_start_simulation,
    FunctionName.STOP_SIMULATION: _exec_stop_simulation,
    FunctionName.WRITE_PDB: _exec_write_pdb,
    FunctionName.SELECT: _exec_select,
    FunctionName.SPEAK_UP: _exec_speak_up,
    FunctionName.DIDNT_UNDERSTAND: _exec_didnt_understand,
}


def _exec_rep(ctx: _ExecContext, stmt: RepCmd) -> None:
    if stmt.kind == "color":
        scene_ops.apply_color(ctx.scene, stmt.arg)
    else:
        scene_ops.apply_rep(ctx.scene, stmt.kind, float(stmt.arg))


def execute_script(script: Script, scene: SceneState, clock: Clock | None = None) -> ExecutionReport:
    """Run a validated script against the scene, statement by statement.

    Comments are inert but their text is copied into the responses as
    explanation lines. Execution stops at the first faulting statement; the
    fault is reported in ``failed_at``, not raised.
    """
    if not script.validated:
        raise ScriptValidationError([])  # callers must validate first
    report = ExecutionReport()
    ctx = _ExecContext(scene=scene, report=report, clock=clock or datetime.now)
    before = scene_fingerprint(scene)
    for index, stmt in enumerate(script.statements):
        try:
            if isinstance(stmt, Comment):
                report.responses.append(stmt.text)
            elif isinstance(stmt, Call):
                DISPATCH[FunctionName(stmt.name)](ctx, stmt)
            else:
                _exec_rep(ctx, stmt)
        except Exception as err:  # any handler fault must be rollbackable
            report.failed_at = (index, err)
            break
    report.mutated = scene_fingerprint(scene) != before
    return report


# --- rendering --------------------------------------------------------------

def render_statement(stmt: Statement) -> str:
    """Canonical one-line rendering, used for display and event payloads."""
    if isinstance(stmt, Comment):
        return f"// {stmt.text}"
    if isinstance(stmt, Call):
        return f"{stmt.name}({', '.join(_render_arg(a) for a in stmt.args)});"
    value = stmt.arg.value if isinstance(stmt.arg, ColorName) else _render_number(stmt.arg)
    return f"{stmt.kind} {value};"


def _render_arg(arg: Arg) -> str:
    if isinstance(arg, NumberArg):
        return _render_number(arg.value)
    return f"'{arg.value}'"


def _render_number(value: "float | str") -> str:
    if isinstance(value, str):
        return value
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))
