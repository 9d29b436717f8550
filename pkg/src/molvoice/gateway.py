"""Chat-completions gateway: prompt assembly, history, and the cast call.

The gateway owns everything between a cleaned transcript and raw script text:
the bundled prompt template (system text plus worked example pairs), the
rolling per-session history, and the backend call. Two backends exist: a
remote chat-completions HTTP endpoint, and a deterministic in-process mock
that answers from the template's own example table so the whole pipeline can
run offline and in tests.
"""

from __future__ import annotations

import json
import logging
import math
import os
import re
from dataclasses import dataclass, field
from importlib import resources

import httpx

from .errors import (
    BudgetTooSmallError,
    CastTimeoutError,
    EmptyCompletionError,
    EmptyUtteranceError,
    HttpStatusError,
    MissingApiKeyError,
    TruncatedCompletionError,
)
from .lexicon import Lexicon, hint_lines

log = logging.getLogger(__name__)

DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"
DEFAULT_MODEL = "gpt-4o-mini"
DEFAULT_KEY_ENV = "OPENAI_API_KEY"

FALLBACK_SCRIPT = "didntUnderstand();"


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str


@dataclass(frozen=True)
class Turn:
    user: str
    assistant: str


@dataclass(frozen=True)
class PromptTemplate:
    """System text plus ordered (user, assistant) example pairs."""

    system: str
    examples: tuple[tuple[str, str], ...]


@dataclass
class History:
    """Rolling verbatim turn list; oldest turns fall off past max_turns."""

    max_turns: int = 20
    turns: list[Turn] = field(default_factory=list)

    def append(self, user: str, assistant: str) -> None:
        self.turns.append(Turn(user, assistant))
        if len(self.turns) > self.max_turns:
            del self.turns[: len(self.turns) - self.max_turns]


@dataclass
class GatewayConfig:
    endpoint_url: str = DEFAULT_ENDPOINT
    model_id: str = DEFAULT_MODEL
    api_key_env: str = DEFAULT_KEY_ENV
    timeout: float = 30.0
    max_turns: int = 20
    backend: str = "mock"  # mock | remote
    history_token_budget: int = 4000

    def __post_init__(self) -> None:
        if not 1 <= self.timeout <= 120:
            raise ValueError(f"timeout must be within [1, 120], got {self.timeout}")
        if self.backend not in ("mock", "remote"):
            raise ValueError(f"unknown backend {self.backend!r}")


def estimate_tokens(text: str) -> int:
    """Cheap length heuristic: one token per four characters, rounded up."""
    return math.ceil(len(text) / 4)


# --- template loading -------------------------------------------------------

_SECTION_RE = re.compile(r"^### (SYSTEM|USER|ASSISTANT)\s*$")


def parse_template(text: str) -> PromptTemplate:
    """Parse the template file format.

    Sections are delimited by "### SYSTEM" / "### USER" / "### ASSISTANT"
    lines: one system section first, then strictly alternating user/assistant
    pairs. Every assistant script must parse and validate, so a bad example
    can never ship inside the bundle.
    """
    sections: list[tuple[str, str]] = []
    label = None
    lines: list[str] = []
    for line in text.split("\n"):
        m = _SECTION_RE.match(line)
        if m:
            if label is not None:
                sections.append((label, "\n".join(lines).strip()))
            label = m.group(1)
            lines = []
        elif label is not None:
            lines.append(line)
        elif line.strip():
            raise ValueError("template text precedes the first section header")
    if label is not None:
        sections.append((label, "\n".join(lines).strip()))

    if not sections or sections[0][0] != "SYSTEM":
        raise ValueError("template must start with a SYSTEM section")
    system = sections[0][1]
    if not system:
        raise ValueError("SYSTEM section is empty")

    examples = []
    rest = sections[1:]
    if len(rest) % 2:
        raise ValueError("unpaired USER/ASSISTANT sections")
    for i in range(0, len(rest), 2):
        (ulabel, utext), (alabel, atext) = rest[i], rest[i + 1]
        if ulabel != "USER" or alabel != "ASSISTANT":
            raise ValueError(f"expected USER/ASSISTANT pair at section {i + 1}")
        if not utext or not atext:
            raise ValueError(f"empty example text at section {i + 1}")
        examples.append((utext, atext))

    template = PromptTemplate(system=system, examples=tuple(examples))
    _check_examples(template)
    return template


def _check_examples(template: PromptTemplate) -> None:
    # deferred import: commands imports nothing from here, but keep the
    # module graph acyclic if that ever changes
    from .commands import parse_script, validate_script

    for user, assistant in template.examples:
        try:
            validate_script(parse_script(assistant))
        except Exception as err:
            raise ValueError(f"bundled example for {user!r} does not validate: {err}") from err


def load_bundled_template(lexicon: Lexicon | None = None) -> PromptTemplate:
    """Load the packaged template, folding lexicon hints into the system text."""
    text = resources.files("molvoice.data").joinpath("prompt.txt").read_text("utf-8")
    template = parse_template(text)
    if lexicon is not None and lexicon.hint_entries:
        hints = "\n".join(hint_lines(lexicon))
        system = (
            template.system.rstrip()
            + "\n\nKnown recognizer confusions to keep in mind:\n"
            + hints
        )
        template = PromptTemplate(system=system, examples=template.examples)
    return template


# --- message assembly -------------------------------------------------------

def build_messages(template: PromptTemplate, history: History, user_text: str) -> list[ChatMessage]:
    """[system] + example pairs + history turns + the new user message."""
    if not user_text.strip():
        raise EmptyUtteranceError()
    messages = [ChatMessage("system", template.system)]
    for user, assistant in template.examples:
        messages.append(ChatMessage("user", user))
        messages.append(ChatMessage("assistant", assistant))
    for turn in history.turns:
        messages.append(ChatMessage("user", turn.user))
        messages.append(ChatMessage("assistant", turn.assistant))
    messages.append(ChatMessage("user", user_text))
    return messages


def template_tokens(template: PromptTemplate) -> int:
    total = estimate_tokens(template.system)
    for user, assistant in template.examples:
        total += estimate_tokens(user) + estimate_tokens(assistant)
    return total


def trim_history(history: History, token_budget: int, base_tokens: int = 0) -> History:
    """Drop oldest whole turns until base_tokens + history fits the budget.

    base_tokens carries the estimate for the fixed part of the request
    (system + examples + pending user text); the budget covers the whole
    message list, so a base alone above budget is unsatisfiable.
    """
    if base_tokens > token_budget:
        raise BudgetTooSmallError()
    kept = list(history.turns)
    total = sum(estimate_tokens(t.user) + estimate_tokens(t.assistant) for t in kept)
    while kept and base_tokens + total > token_budget:
        dropped = kept.pop(0)
        total -= estimate_tokens(dropped.user) + estimate_tokens(dropped.assistant)
    return History(max_turns=history.max_turns, turns=kept)


# --- mock backend -----------------------------------------------------------

_REPLAY_WORDS = frozenset({"again", "repeat"})


def _mock_key(text: str) -> str:
    key = " ".join(text.split()).casefold().strip()
    return key.rstrip(".!?").strip()


def mock_table(template: PromptTemplate) -> dict[str, str]:
    """Normalized user text → assistant script, first occurrence wins."""
    table: dict[str, str] = {}
    for user, assistant in template.examples:
        table.setdefault(_mock_key(user), assistant)
    return table


def mock_cast(transcript: str, history: History, table: dict[str, str]) -> str:
    """Deterministic offline stand-in for the model.

    A bare "again"/"repeat" replays the previous assistant text before the
    table is consulted, mirroring how history gives the model that context.
    """
    key = _mock_key(transcript)
    if key in _REPLAY_WORDS:
        if history.turns:
            return history.turns[-1].assistant
        return FALLBACK_SCRIPT
    return table.get(key, FALLBACK_SCRIPT)


# --- the gateway ------------------------------------------------------------

class Gateway:
    """One per session: owns the history and performs cast() calls."""

    def __init__(
        self,
        config: GatewayConfig,
        template: PromptTemplate,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self.config = config
        self.template = template
        self.history = History(max_turns=config.max_turns)
        self._transport = transport
        self._table = mock_table(template)
        self._base_tokens = template_tokens(template)

    def cast(self, transcript: str) -> str:
        """Transcript in, raw script text out; appends the turn on success."""
        if not transcript.strip():
            raise EmptyUtteranceError()
        base = self._base_tokens + estimate_tokens(transcript)
        budget = base + self.config.history_token_budget
        self.history = trim_history(self.history, budget, base_tokens=base)
        if self.config.backend == "mock":
            text = mock_cast(transcript, self.history, self._table)
        else:
            messages = build_messages(self.template, self.history, transcript)
            text = self._remote_complete(messages)
        self.history.append(transcript, text)
        return text

    def _remote_complete(self, messages: list[ChatMessage]) -> str:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise MissingApiKeyError(self.config.api_key_env)
        payload = {
            "model": self.config.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": 0,
        }
        headers = {"Authorization": f"Bearer {key}"}
        try:
            with httpx.Client(transport=self._transport, timeout=self.config.timeout) as client:
                response = client.post(self.config.endpoint_url, json=payload, headers=headers)
        except httpx.TimeoutException as err:
            raise CastTimeoutError() from err
        if response.status_code < 200 or response.status_code >= 300:
            raise HttpStatusError(response.status_code, response.text[:500])
        try:
            body = response.json()
            choice = body["choices"][0]
            content = choice["message"]["content"]
            finish = choice.get("finish_reason")
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as err:
            raise EmptyCompletionError() from err
        if finish == "length":
            raise TruncatedCompletionError()
        if not content or not content.strip():
            raise EmptyCompletionError()
        log.debug("cast completed, %d chars", len(content))
        return content
