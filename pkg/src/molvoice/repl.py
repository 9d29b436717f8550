"""Line-oriented REPL: the typed path through the same pipeline the voice UI
uses. One local session, one utterance per line, ``:quit`` to leave."""

from __future__ import annotations

import sys

from .errors import EmptyUtteranceError
from .pipeline import CommandSession

QUIT = ":quit"


def repl_loop(session: CommandSession, stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    interactive = hasattr(stdin, "isatty") and stdin.isatty()

    def say(text: str) -> None:
        print(text, file=stdout)

    if interactive:
        say("molvoice repl, :quit to exit")
    while True:
        if interactive:
            stdout.write("> ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            return 0
        line = line.strip()
        if line == QUIT:
            return 0
        if not line:
            continue
        try:
            result = session.run(line)
        except EmptyUtteranceError:
            continue
        for response in result.responses:
            say(response)
        if result.error is not None:
            say(f"error [{result.error['code']}]: {result.error['message']}")
        for key, value in sorted(result.scene_diff.items()):
            if isinstance(value, list) and len(value) == 2:
                say(f"{key}: {value[0]} -> {value[1]}")
            else:
                say(f"{key}: {value}")
