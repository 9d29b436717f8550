"""The utterance pipeline: one transcript in, one structured result out.

Order is fixed: normalize the transcript, cast it to script text, parse,
validate, execute. Each stage can be observed through an emit callback so a
service can stream progress. Failures never leave the scene half-mutated: a
runtime fault rolls the scene back to the pre-execution snapshot, and the
result's error field carries the structured cause.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from .commands import (
    Comment,
    execute_script,
    parse_script,
    render_statement,
    validate_script,
)
from .errors import (
    EmptyUtteranceError,
    GatewayError,
    RuntimeFaultError,
    ScriptError,
)
from .gateway import Gateway, GatewayConfig, load_bundled_template
from .lexicon import Lexicon, load_bundled_lexicon, normalize_transcript
from .pdbio import load_pdb
from .scene import SceneState, copy_scene, diff_scenes, new_scene, restore_scene

log = logging.getLogger(__name__)

NOT_UNDERSTOOD = "Sorry, I didn't understand"

# stage → payload observer; stages fire in pipeline order
Emit = Callable[[str, dict], None]

STAGES = ("transcript", "normalized", "script", "executed")


@dataclass
class UtteranceResult:
    """Everything one utterance produced, in wire-ready form."""

    normalized_text: str = ""
    raw_script: str = ""
    statements: list[str] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)
    responses: list[str] = field(default_factory=list)
    scene_diff: dict = field(default_factory=dict)
    response_volume: str = "normal"
    error: dict | None = None

    def to_doc(self) -> dict:
        return {
            "normalizedText": self.normalized_text,
            "rawScript": self.raw_script,
            "statements": list(self.statements),
            "comments": list(self.comments),
            "responses": list(self.responses),
            "sceneDiff": dict(self.scene_diff),
            "responseVolume": self.response_volume,
            "error": dict(self.error) if self.error else None,
        }


class CommandSession:
    """A scene plus a gateway with its own history; runs utterances."""

    def __init__(
        self,
        config: GatewayConfig | None = None,
        pdb_text: str | None = None,
        lexicon: Lexicon | None = None,
        transport=None,
        clock=None,
    ) -> None:
        self.config = config or GatewayConfig()
        self.lexicon = lexicon if lexicon is not None else load_bundled_lexicon()
        template = load_bundled_template(self.lexicon)
        self.gateway = Gateway(self.config, template, transport=transport)
        if pdb_text is None:
            pdb_text = load_bundled_fixture()
        self.scene: SceneState = new_scene(load_pdb(pdb_text))
        self.clock = clock

    def run(self, text: str, emit: Emit | None = None) -> UtteranceResult:
        """Run the full pipeline for one utterance.

        Raises EmptyUtteranceError for blank input; every other failure is
        returned structurally in the result. The scene is only mutated when
        the whole script executed cleanly.
        """
        if not text.strip():
            raise EmptyUtteranceError()
        send = emit or (lambda stage, payload: None)
        result = UtteranceResult()

        send("transcript", {"text": text})
        normalized = normalize_transcript(text, self.lexicon)
        result.normalized_text = normalized
        send("normalized", {"text": normalized})

        try:
            raw = self.gateway.cast(normalized)
        except GatewayError as err:
            log.warning("cast failed: %s", err)
            result.error = err.as_doc()
            return result
        result.raw_script = raw

        try:
            script = validate_script(parse_script(raw))
        except ScriptError as err:
            # hallucinated or malformed output: reject wholesale, answer as
            # a non-understanding, keep the diagnostics structured
            log.info("rejected script %r: %s", raw, err)
            result.error = err.as_doc()
            result.responses = [NOT_UNDERSTOOD]
            return result

        result.statements = [render_statement(s) for s in script.statements]
        result.comments = [s.text for s in script.statements if isinstance(s, Comment)]
        send("script", {"raw": raw, "statements": list(result.statements)})

        snapshot = copy_scene(self.scene)
        report = execute_script(script, self.scene, clock=self.clock)
        result.responses = list(report.responses)
        result.response_volume = report.response_volume

        if report.failed_at is not None:
            index, cause = report.failed_at
            restore_scene(self.scene, snapshot)
            fault = RuntimeFaultError(index, cause)
            log.info("execution fault at %d: %s", index, cause)
            result.error = fault.as_doc()
            return result

        result.scene_diff = diff_scenes(snapshot, self.scene)
        self.scene.last_user_message = text
        send("executed", {"responses": list(result.responses), "sceneDiff": dict(result.scene_diff)})
        return result


def load_bundled_fixture() -> str:
    from importlib import resources

    return resources.files("molvoice.data").joinpath("mini.pdb").read_text("utf-8")
