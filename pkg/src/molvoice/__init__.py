"""molvoice: turn speech transcripts into whitelisted molecular viewer commands.

The pipeline is normalize -> cast (LLM or deterministic mock) -> parse ->
validate -> execute against an in-memory molecular scene. Nothing the model
emits is ever evaluated as code; only a closed set of functions and three
bare display commands can run.
"""

from .commands import ExecutionReport, FunctionName, Script, execute_script, parse_script, validate_script
from .errors import MolVoiceError
from .gateway import Gateway, GatewayConfig, PromptTemplate, estimate_tokens
from .lexicon import Lexicon, load_bundled_lexicon, normalize_transcript, parse_lexicon
from .pdbio import load_pdb, write_pdb
from .pipeline import CommandSession, UtteranceResult
from .scene import ColorName, SceneState, Structure, new_scene
from .selection import eval_selection, parse_selection
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "ColorName",
    "CommandSession",
    "ExecutionReport",
    "FunctionName",
    "Gateway",
    "GatewayConfig",
    "Lexicon",
    "MolVoiceError",
    "PromptTemplate",
    "SceneState",
    "Script",
    "Structure",
    "UtteranceResult",
    "create_app",
    "estimate_tokens",
    "eval_selection",
    "execute_script",
    "load_bundled_lexicon",
    "load_pdb",
    "new_scene",
    "normalize_transcript",
    "parse_lexicon",
    "parse_script",
    "parse_selection",
    "validate_script",
    "write_pdb",
    "__version__",
]
