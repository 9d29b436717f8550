from datetime import datetime

import pytest

from molvoice import commands
from molvoice.commands import FunctionName
from molvoice.errors import EmptyUtteranceError
from molvoice.gateway import GatewayConfig
from molvoice.pipeline import NOT_UNDERSTOOD, CommandSession, load_bundled_fixture
from molvoice.scene import scene_fingerprint as fingerprint

CLOCK = lambda: datetime(2026, 8, 19, 14, 30, 5)


@pytest.fixture
def session():
    return CommandSession(clock=CLOCK)


def run_with_stages(session, text):
    stages = []
    result = session.run(text, emit=lambda stage, doc: stages.append(stage))
    return result, stages


def test_count_atoms_end_to_end(session):
    result, stages = run_with_stages(session, "Tell me the number of atoms")
    assert result.error is None
    assert result.raw_script == "//Use countAtoms()\ncountAtoms();"
    assert result.responses == ["Use countAtoms()", "20 atoms"]
    assert stages == ["transcript", "normalized", "script", "executed"]
    assert result.scene_diff == {}


def test_stop_simulation_comment_and_state(session):
    session.run("Start the simulation")
    assert session.scene.sim.running is True
    result = session.run("Stop simulation")
    assert result.responses[0] == "User asked to stop (pause) the simulation"
    assert session.scene.sim.running is False
    assert result.scene_diff == {"sim.running": [True, False]}


def test_gibberish_is_polite_refusal(session):
    before = fingerprint(session.scene)
    result, stages = run_with_stages(session, "qwxzzt gibberish")
    assert result.error is None
    assert result.responses == [NOT_UNDERSTOOD]
    assert result.scene_diff == {}
    assert fingerprint(session.scene) == before
    assert stages == ["transcript", "normalized", "script", "executed"]


def test_again_replays_last_cast(session):
    session.run("Increase temperature")
    session.run("Again")
    assert session.scene.sim.temperature == 360.0


def test_bigger_then_much_bigger(session):
    session.run("Make spheres bigger")
    result = session.run("Much bigger")
    assert result.raw_script == "select('all'); spacefill 6;"
    assert all(r.spacefill == 6.0 for r in session.scene.rep.records)


def test_runtime_fault_rolls_back(session, monkeypatch):
    def boom(ctx, args):
        ctx.scene.sim.temperature = 999.0
        raise RuntimeError("clock hardware failure")

    monkeypatch.setitem(commands.DISPATCH, FunctionName.SAY_TIME, boom)
    before = fingerprint(session.scene)
    result = session.run("What time is it")
    assert result.error is not None
    assert result.error["code"] == "runtime_fault"
    assert result.scene_diff == {}
    assert fingerprint(session.scene) == before
    assert session.scene.sim.temperature == 300.0


def test_blank_utterance_raises(session):
    with pytest.raises(EmptyUtteranceError):
        session.run("")
    with pytest.raises(EmptyUtteranceError):
        session.run("   ")


def test_last_user_message_only_on_success(session):
    session.run("Tell me the number of atoms")
    assert session.scene.last_user_message == "Tell me the number of atoms"
    session.run("qwxzzt gibberish")
    # refusal executes didntUnderstand successfully, so it still counts
    assert session.scene.last_user_message == "qwxzzt gibberish"


def test_last_user_message_not_set_on_fault(session, monkeypatch):
    def boom(ctx, args):
        raise RuntimeError("no")

    monkeypatch.setitem(commands.DISPATCH, FunctionName.SAY_TIME, boom)
    session.run("Tell me the number of atoms")
    session.run("What time is it")
    assert session.scene.last_user_message == "Tell me the number of atoms"


def test_result_doc_shape(session):
    result = session.run("Tell me the number of atoms")
    doc = result.to_doc()
    assert set(doc) == {
        "normalizedText",
        "rawScript",
        "statements",
        "comments",
        "responses",
        "sceneDiff",
        "responseVolume",
        "error",
    }
    assert doc["normalizedText"] == "Tell me the number of atoms"
    assert doc["statements"] == ["// Use countAtoms()", "countAtoms();"]
    assert doc["comments"] == ["Use countAtoms()"]
    assert doc["error"] is None
    assert doc["responseVolume"] == "normal"


def test_remote_without_key_reports_gateway_error(monkeypatch):
    monkeypatch.delenv("MOLVOICE_NO_SUCH_KEY", raising=False)
    config = GatewayConfig(backend="remote", api_key_env="MOLVOICE_NO_SUCH_KEY")
    session = CommandSession(config=config, clock=CLOCK)
    before = fingerprint(session.scene)
    result, stages = run_with_stages(session, "Tell me the number of atoms")
    assert result.error is not None
    assert result.error["code"] == "missing_api_key"
    assert result.scene_diff == {}
    assert result.responses == []
    assert fingerprint(session.scene) == before
    assert session.gateway.history.turns == []
    assert stages == ["transcript", "normalized"]


def test_lexicon_normalization_feeds_gateway(session):
    result = session.run("so mean")
    assert result.normalized_text == "zoom in"
    assert session.scene.view.zoom_factor == pytest.approx(1.25)


def test_custom_pdb_text(session):
    text = load_bundled_fixture()
    one_atom = "\n".join(line for line in text.splitlines() if " CA  ALA" in line) + "\nEND\n"
    small = CommandSession(pdb_text=one_atom, clock=CLOCK)
    result = small.run("Tell me the number of atoms")
    assert result.responses[-1] == "1 atoms"


def test_say_time_uses_injected_clock(session):
    result = session.run("What time is it")
    assert result.responses[-1] == "It is 14:30"
