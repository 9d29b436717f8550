"""Two-tier lexicon for repairing predictable speech misrecognitions.

Browser speech recognizers have no domain vocabulary, so domain words come
back as near-homophones. Entries are kept in a TSV with one rule per line:

    pattern<TAB>replacement<TAB>tier

Tier ``exact`` rules are applied mechanically to the transcript before it
reaches the model: case-insensitive, whole-word, longest pattern first, one
pass (replacements are never rescanned). Tier ``hint`` rules are too risky to
apply blindly; they are only surfaced to the model inside the system prompt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import MalformedLineError

_TIERS = ("exact", "hint")


@dataclass(frozen=True)
class LexiconEntry:
    pattern: str
    replacement: str
    tier: str


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexiconEntry, ...]

    @property
    def exact_entries(self) -> tuple[LexiconEntry, ...]:
        return tuple(e for e in self.entries if e.tier == "exact")

    @property
    def hint_entries(self) -> tuple[LexiconEntry, ...]:
        return tuple(e for e in self.entries if e.tier == "hint")


def parse_lexicon(text: str) -> Lexicon:
    """Parse TSV rules. Blank lines and lines starting with # are skipped."""
    entries = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise MalformedLineError(line_no)
        pattern, replacement, tier = (p.strip() for p in parts)
        if not pattern or not replacement or tier not in _TIERS:
            raise MalformedLineError(line_no)
        entries.append(LexiconEntry(pattern, replacement, tier))
    return Lexicon(entries=tuple(entries))


def load_bundled_lexicon() -> Lexicon:
    text = resources.files("molvoice.data").joinpath("lexicon.tsv").read_text("utf-8")
    return parse_lexicon(text)


def normalize_transcript(text: str, lexicon: Lexicon) -> str:
    """Apply the exact tier to a transcript.

    Whole-word, case-insensitive, longest pattern first so that multi-word
    patterns win over their prefixes. Single pass: each span of the input is
    rewritten at most once, so rules can never cascade or loop.
    """
    rules = sorted(lexicon.exact_entries, key=lambda e: len(e.pattern), reverse=True)
    if not rules:
        return text
    alternation = "|".join(re.escape(r.pattern) for r in rules)
    compiled = re.compile(rf"(?<!\w)(?:{alternation})(?!\w)", re.IGNORECASE)
    by_pattern = {r.pattern.lower(): r.replacement for r in rules}
    return compiled.sub(lambda m: by_pattern[m.group(0).lower()], text)


def hint_lines(lexicon: Lexicon) -> list[str]:
    """Prompt-ready lines describing the risky tier, one per rule."""
    return [
        f'- "{e.pattern}" is often a misrecognition of "{e.replacement}"'
        for e in lexicon.hint_entries
    ]
