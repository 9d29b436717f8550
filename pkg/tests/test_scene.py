import math

import pytest

from molvoice.errors import NegativeRadiusError, NonNumericError, UnknownColorError
from molvoice.scene import (
    ColorName,
    adjust_sim,
    apply_color,
    apply_rep,
    copy_scene,
    count_atoms,
    diff_scenes,
    restore_scene,
    scene_fingerprint,
    set_running,
    zoom,
)

# independent element -> color table, frozen here rather than imported
ELEMENT_ORACLE = {
    "C": "grey",
    "N": "blue",
    "O": "red",
    "S": "yellow",
    "P": "orange",
    "H": "white",
}


def test_defaults(fixture_scene):
    s = fixture_scene
    assert s.sim.temperature == 300.0
    assert s.sim.update_rate == 1.0
    assert s.sim.running is False
    assert s.view.zoom_factor == 1.0
    assert s.current_selection == set()
    assert s.last_user_message == ""
    for atom, rep in zip(s.structure.atoms, s.rep.records):
        assert rep.spacefill == 1.0
        assert rep.sticks == 1.0
        expected = ELEMENT_ORACLE.get(atom.element, "magenta")
        assert rep.color.value == expected


def test_count_atoms(fixture_scene):
    assert count_atoms(fixture_scene) == 20


def test_apply_rep_touches_only_selection(fixture_scene):
    s = fixture_scene
    s.current_selection = {0, 3, 7}
    apply_rep(s, "spacefill", 3.0)
    for i, rep in enumerate(s.rep.records):
        assert rep.spacefill == (3.0 if i in {0, 3, 7} else 1.0)
        assert rep.sticks == 1.0


def test_apply_rep_empty_selection_changes_nothing(fixture_scene):
    s = fixture_scene
    before = scene_fingerprint(s)
    apply_rep(s, "sticks", 2.0)
    assert scene_fingerprint(s) == before


def test_negative_radius_rejected_without_mutation(fixture_scene):
    s = fixture_scene
    s.current_selection = {0, 1}
    before = scene_fingerprint(s)
    with pytest.raises(NegativeRadiusError):
        apply_rep(s, "spacefill", -0.5)
    assert scene_fingerprint(s) == before


def test_apply_color_plain_and_byatom(fixture_scene):
    s = fixture_scene
    s.current_selection = set(range(20))
    apply_color(s, "red")
    assert all(r.color is ColorName.RED for r in s.rep.records)
    apply_color(s, ColorName.BYATOM)
    for atom, rep in zip(s.structure.atoms, s.rep.records):
        assert rep.color.value == ELEMENT_ORACLE.get(atom.element, "magenta")


def test_unknown_color_rejected(fixture_scene):
    fixture_scene.current_selection = {0}
    with pytest.raises(UnknownColorError):
        apply_color(fixture_scene, "byref")


def test_adjust_sim_set_and_delta_with_clamping(fixture_scene):
    s = fixture_scene
    adjust_sim(s, "temperature", "set", 500.0)
    assert s.sim.temperature == 500.0
    adjust_sim(s, "temperature", "delta", -600.0)
    assert s.sim.temperature == 0.0  # clamped at floor
    adjust_sim(s, "temperature", "set", 99999.0)
    assert s.sim.temperature == 10000.0
    adjust_sim(s, "update_rate", "delta", -100.0)
    assert s.sim.update_rate == 0.1
    adjust_sim(s, "update_rate", "set", 5000.0)
    assert s.sim.update_rate == 1000.0


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf"), True])
def test_adjust_sim_rejects_non_numeric(fixture_scene, bad):
    with pytest.raises(NonNumericError):
        adjust_sim(fixture_scene, "temperature", "set", bad)


def test_set_running_idempotent(fixture_scene):
    s = fixture_scene
    set_running(s, True)
    fp = scene_fingerprint(s)
    set_running(s, True)
    assert scene_fingerprint(s) == fp
    assert s.sim.running is True


def test_zoom_steps_and_clamps(fixture_scene):
    s = fixture_scene
    zoom(s, "in")
    assert s.view.zoom_factor == pytest.approx(1.25)
    zoom(s, "out")
    assert s.view.zoom_factor == pytest.approx(1.0)
    for _ in range(40):
        zoom(s, "in")
    assert s.view.zoom_factor == 100.0
    for _ in range(80):
        zoom(s, "out")
    assert s.view.zoom_factor == 0.01


def test_fingerprint_ignores_last_user_message(fixture_scene):
    s = fixture_scene
    fp = scene_fingerprint(s)
    s.last_user_message = "hello"
    assert scene_fingerprint(s) == fp


def test_copy_restore_roundtrip(fixture_scene):
    s = fixture_scene
    snapshot = copy_scene(s)
    s.current_selection = {1, 2}
    apply_rep(s, "spacefill", 6.0)
    adjust_sim(s, "temperature", "delta", 40.0)
    set_running(s, True)
    zoom(s, "in")
    assert scene_fingerprint(s) != scene_fingerprint(snapshot)
    restore_scene(s, snapshot)
    assert scene_fingerprint(s) == scene_fingerprint(snapshot)
    assert s.sim.temperature == 300.0


def test_copy_is_deep(fixture_scene):
    s = fixture_scene
    snapshot = copy_scene(s)
    s.current_selection.add(0)
    s.rep.records[0].spacefill = 9.0
    assert snapshot.current_selection == set()
    assert snapshot.rep.records[0].spacefill == 1.0


def test_diff_scenes_reports_changed_fields(fixture_scene):
    s = fixture_scene
    before = copy_scene(s)
    adjust_sim(s, "temperature", "set", 330.0)
    set_running(s, True)
    s.current_selection = {0, 1, 2}
    s.rep.records[0].spacefill = 3.0
    diff = diff_scenes(before, s)
    assert diff["sim.temperature"] == [300.0, 330.0]
    assert diff["sim.running"] == [False, True]
    assert diff["selection.size"] == [0, 3]
    assert diff["rep.changedAtoms"] == 1
    assert "view.zoomFactor" not in diff
    assert diff_scenes(before, before) == {}


def test_zoom_never_leaves_bounds_under_random_walk(fixture_scene):
    import random

    rng = random.Random(404)
    s = fixture_scene
    for _ in range(2000):
        zoom(s, rng.choice(["in", "out"]))
        assert 0.01 <= s.view.zoom_factor <= 100.0
        assert math.isfinite(s.view.zoom_factor)
