"""Exception types shared across the package.

Every error the pipeline can surface derives from MolVoiceError and carries a
stable ``code`` used in wire documents ({code, message, detail}).
"""

from __future__ import annotations


class MolVoiceError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def as_doc(self) -> dict:
        return {"code": self.code, "message": str(self) or self.code.replace("_", " "), "detail": self.detail()}

    def detail(self) -> dict:
        return {}


# --- scene model / PDB ---

class NoAtomsError(MolVoiceError):
    code = "no_atoms"


class MalformedRecordError(MolVoiceError):
    code = "malformed_record"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason

    def detail(self) -> dict:
        return {"line": self.line_no, "reason": self.reason}


class NegativeRadiusError(MolVoiceError):
    code = "negative_radius"


class UnknownColorError(MolVoiceError):
    code = "unknown_color"

    def __init__(self, name: str):
        super().__init__(f"unknown color {name!r}")
        self.name = name

    def detail(self) -> dict:
        return {"name": self.name}


class NonNumericError(MolVoiceError):
    code = "non_numeric"


# --- selection language ---

class SelectionError(MolVoiceError):
    code = "selection_error"


class EmptySelectionError(SelectionError):
    code = "empty_selection"


class UnknownKeywordError(SelectionError):
    code = "unknown_keyword"

    def __init__(self, token: str):
        super().__init__(f"unknown keyword {token!r}")
        self.token = token

    def detail(self) -> dict:
        return {"token": self.token}


class MissingValuesError(SelectionError):
    code = "missing_values"

    def __init__(self, keyword: str):
        super().__init__(f"keyword {keyword!r} needs at least one value")
        self.keyword = keyword

    def detail(self) -> dict:
        return {"keyword": self.keyword}


class TrailingTokensError(SelectionError):
    code = "trailing_tokens"

    def __init__(self, token: str):
        super().__init__(f"unexpected trailing token {token!r}")
        self.token = token

    def detail(self) -> dict:
        return {"token": self.token}


class SelectionTooDeepError(SelectionError):
    # enforces the AST depth cap (32); not reachable from sane inputs
    code = "selection_too_deep"


# --- command script ---

class ScriptError(MolVoiceError):
    code = "script_error"


class ScriptSyntaxError(ScriptError):
    code = "syntax_error"

    def __init__(self, fragment: str, position: int):
        super().__init__(f"cannot parse statement {fragment!r} at offset {position}")
        self.fragment = fragment
        self.position = position

    def detail(self) -> dict:
        return {"fragment": self.fragment, "position": self.position}


class UnbalancedQuoteError(ScriptError):
    code = "unbalanced_quote"

    def __init__(self, position: int):
        super().__init__(f"unterminated quote at offset {position}")
        self.position = position

    def detail(self) -> dict:
        return {"position": self.position}


class UnbalancedParenError(ScriptError):
    code = "unbalanced_paren"

    def __init__(self, fragment: str, position: int):
        super().__init__(f"unbalanced parentheses in {fragment!r} at offset {position}")
        self.fragment = fragment
        self.position = position

    def detail(self) -> dict:
        return {"fragment": self.fragment, "position": self.position}


class NotWhitelistedError(ScriptError):
    code = "not_whitelisted"

    def __init__(self, name: str):
        super().__init__(f"function {name!r} is not whitelisted")
        self.name = name

    def detail(self) -> dict:
        return {"name": self.name}


class ArityMismatchError(ScriptError):
    code = "arity_mismatch"

    def __init__(self, name: str, got: int, want: int):
        super().__init__(f"{name} takes {want} argument(s), got {got}")
        self.name = name
        self.got = got
        self.want = want

    def detail(self) -> dict:
        return {"name": self.name, "got": self.got, "want": self.want}


class BadArgTypeError(ScriptError):
    code = "bad_arg_type"

    def __init__(self, name: str, pos: int, reason: str = ""):
        msg = f"bad argument type for {name} at position {pos}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.name = name
        self.pos = pos

    def detail(self) -> dict:
        return {"name": self.name, "pos": self.pos}


class BadSelectionError(ScriptError):
    code = "bad_selection"

    def __init__(self, inner: SelectionError):
        super().__init__(f"invalid selection: {inner}")
        self.inner = inner

    def detail(self) -> dict:
        return {"inner": self.inner.as_doc()}


class ScriptValidationError(ScriptError):
    """Raised by validate_script; carries every issue found (all-or-nothing)."""

    code = "invalid_script"

    def __init__(self, issues: list[MolVoiceError]):
        super().__init__("; ".join(str(i) for i in issues))
        self.issues = issues

    def detail(self) -> dict:
        return {"issues": [i.as_doc() for i in self.issues]}


class RuntimeFaultError(ScriptError):
    code = "runtime_fault"

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"statement {index} failed: {cause}")
        self.index = index
        self.cause = cause

    def detail(self) -> dict:
        if isinstance(self.cause, MolVoiceError):
            cause_doc = self.cause.as_doc()
        else:
            cause_doc = {"code": "internal", "message": str(self.cause), "detail": {}}
        return {"index": self.index, "cause": cause_doc}


# --- LLM gateway ---

class GatewayError(MolVoiceError):
    code = "gateway_error"


class EmptyUtteranceError(GatewayError):
    code = "empty_utterance"


class CastTimeoutError(GatewayError):
    code = "timeout"


class HttpStatusError(GatewayError):
    code = "http_error"

    def __init__(self, status: int, body: str = ""):
        super().__init__(f"chat endpoint returned HTTP {status}")
        self.status = status
        self.body = body

    def detail(self) -> dict:
        return {"status": self.status}


class MissingApiKeyError(GatewayError):
    code = "missing_api_key"

    def __init__(self, env_var: str):
        super().__init__(f"environment variable {env_var} is not set")
        self.env_var = env_var

    def detail(self) -> dict:
        return {"envVar": self.env_var}


class EmptyCompletionError(GatewayError):
    code = "empty_completion"


class TruncatedCompletionError(GatewayError):
    code = "truncated_completion"


class BudgetTooSmallError(GatewayError):
    code = "budget_too_small"


# --- lexicon ---

class MalformedLineError(MolVoiceError):
    code = "malformed_line"

    def __init__(self, line_no: int, reason: str = ""):
        super().__init__(f"lexicon line {line_no} is malformed" + (f": {reason}" if reason else ""))
        self.line_no = line_no

    def detail(self) -> dict:
        return {"line": self.line_no}


# --- session service ---

class SessionNotFoundError(MolVoiceError):
    code = "session_not_found"


class QueueFullError(MolVoiceError):
    code = "queue_full"
