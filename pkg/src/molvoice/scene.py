"""In-memory molecular scene: structure, per-atom representation, simulation
and view parameters, and the current selection that display commands act on.

Every executed command mutates or queries a SceneState. The scene is owned by
one session and mutated one command at a time; nothing here locks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import NegativeRadiusError, NonNumericError, UnknownColorError

# Clamp ranges for numeric state. Values are clamped, never rejected, so a
# careless voice command degrades gracefully instead of erroring.
TEMPERATURE_RANGE = (0.0, 10000.0)
UPDATE_RATE_RANGE = (0.1, 1000.0)
ZOOM_RANGE = (0.01, 100.0)
ZOOM_STEP = 1.25

# Atom names treated as backbone: protein N/C/CA plus nucleic-acid P.
BACKBONE_NAMES = frozenset({"N", "C", "CA", "P"})


class ColorName(str, Enum):
    """Closed display palette. BYATOM is a pseudo-color that expands to
    per-element colors when applied; it is never stored on an atom."""

    RED = "red"
    BLUE = "blue"
    WHITE = "white"
    GREEN = "green"
    YELLOW = "yellow"
    ORANGE = "orange"
    GREY = "grey"
    CYAN = "cyan"
    MAGENTA = "magenta"
    BYATOM = "byatom"

    @classmethod
    def parse(cls, name: str) -> "ColorName":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise UnknownColorError(name) from None


# CPK-style element colors used when "byatom" is applied.
ELEMENT_COLORS = {
    "C": ColorName.GREY,
    "N": ColorName.BLUE,
    "O": ColorName.RED,
    "S": ColorName.YELLOW,
    "P": ColorName.ORANGE,
    "H": ColorName.WHITE,
}
ELEMENT_COLOR_DEFAULT = ColorName.MAGENTA


@dataclass(frozen=True)
class Atom:
    """One atom as read from a coordinate record. Immutable; display state
    lives in RepState, keyed by atom index."""

    serial: int
    name: str
    resname: str
    chain: str
    resid: int
    position: tuple[float, float, float]
    element: str = ""

    def __post_init__(self):
        object.__setattr__(self, "name", self.name.strip().upper())
        object.__setattr__(self, "resname", self.resname.strip().upper())
        object.__setattr__(self, "element", self.element.strip().upper())


@dataclass
class Structure:
    """Ordered atom list; order is preserved from ingestion and indexes the
    selection space 0..len(atoms)."""

    atoms: list[Atom] = field(default_factory=list)
    title: str = ""

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass
class AtomRep:
    """Per-atom display record: sphere radius, stick radius, color.
    A radius of 0 means the element is not drawn."""

    spacefill: float = 1.0
    sticks: float = 1.0
    color: ColorName = ColorName.GREY


@dataclass
class RepState:
    records: list[AtomRep] = field(default_factory=list)

    @classmethod
    def default_for(cls, structure: Structure) -> "RepState":
        """Baseline on load: spacefill 1, sticks 1, colored by element."""
        return cls(records=[
            AtomRep(1.0, 1.0, _element_color(atom)) for atom in structure.atoms
        ])


@dataclass
class SimState:
    temperature: float = 300.0
    update_rate: float = 1.0
    running: bool = False


@dataclass
class ViewState:
    zoom_factor: float = 1.0


@dataclass
class SceneState:
    """Aggregate the pipeline executes against: one structure plus all
    mutable display/simulation/view state and the current selection."""

    structure: Structure
    rep: RepState
    sim: SimState = field(default_factory=SimState)
    view: ViewState = field(default_factory=ViewState)
    current_selection: set[int] = field(default_factory=set)
    last_user_message: str = ""


def new_scene(structure: Structure) -> SceneState:
    """Build a scene with default rep/sim/view state and an empty selection."""
    return SceneState(structure=structure, rep=RepState.default_for(structure))


def _element_color(atom: Atom) -> ColorName:
    element = atom.element or _derive_element(atom.name)
    return ELEMENT_COLORS.get(element, ELEMENT_COLOR_DEFAULT)


def _derive_element(name: str) -> str:
    for ch in name:
        if ch.isalpha():
            return ch.upper()
    return ""


def _clamp(value: float, bounds: tuple[float, float]) -> float:
    lo, hi = bounds
    return min(hi, max(lo, value))


# --- operations -------------------------------------------------------------

def count_atoms(scene: SceneState) -> int:
    return len(scene.structure.atoms)


def apply_rep(scene: SceneState, kind: str, radius: float) -> SceneState:
    """Set the spacefill or sticks radius of every selected atom.

    Unselected atoms are untouched; an empty selection is a no-op.
    """
    if kind not in ("spacefill", "sticks"):
        raise ValueError(f"unknown rep kind {kind!r}")
    if radius < 0:
        raise NegativeRadiusError(f"radius must be >= 0, got {radius}")
    for index in scene.current_selection:
        record = scene.rep.records[index]
        if kind == "spacefill":
            record.spacefill = radius
        else:
            record.sticks = radius
    return scene


def apply_color(scene: SceneState, color: "ColorName | str") -> SceneState:
    """Color every selected atom. "byatom" expands to per-element colors."""
    if not isinstance(color, ColorName):
        color = ColorName.parse(color)
    for index in scene.current_selection:
        if color is ColorName.BYATOM:
            scene.rep.records[index].color = _element_color(scene.structure.atoms[index])
        else:
            scene.rep.records[index].color = color
    return scene


def adjust_sim(scene: SceneState, field_name: str, mode: str, value: float) -> SceneState:
    """Set or shift temperature/update_rate; the result is clamped, and the
    running flag is untouched."""
    if field_name not in ("temperature", "update_rate"):
        raise ValueError(f"unknown sim field {field_name!r}")
    if mode not in ("set", "delta"):
        raise ValueError(f"unknown mode {mode!r}")
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise NonNumericError(f"value must be a finite number, got {value!r}")
    if field_name == "temperature":
        base = scene.sim.temperature if mode == "delta" else 0.0
        scene.sim.temperature = _clamp(base + value, TEMPERATURE_RANGE)
    else:
        base = scene.sim.update_rate if mode == "delta" else 0.0
        scene.sim.update_rate = _clamp(base + value, UPDATE_RATE_RANGE)
    return scene


def set_running(scene: SceneState, running: bool) -> SceneState:
    scene.sim.running = bool(running)
    return scene


def zoom(scene: SceneState, direction: str) -> SceneState:
    """Multiply (in) or divide (out) the zoom factor by a fixed step, clamped."""
    if direction not in ("in", "out"):
        raise ValueError(f"unknown zoom direction {direction!r}")
    factor = scene.view.zoom_factor
    factor = factor * ZOOM_STEP if direction == "in" else factor / ZOOM_STEP
    scene.view.zoom_factor = _clamp(factor, ZOOM_RANGE)
    return scene


# --- snapshots --------------------------------------------------------------
# last_user_message is session metadata, deliberately excluded so that
# "did the scene change" means display/sim/view/selection state only.

def scene_fingerprint(scene: SceneState) -> tuple:
    """Hashable snapshot of all command-visible mutable state."""
    return (
        tuple((r.spacefill, r.sticks, r.color) for r in scene.rep.records),
        (scene.sim.temperature, scene.sim.update_rate, scene.sim.running),
        scene.view.zoom_factor,
        frozenset(scene.current_selection),
    )


def copy_scene(scene: SceneState) -> SceneState:
    """Independent copy of the mutable state; the Structure is shared
    (atoms are immutable)."""
    return SceneState(
        structure=scene.structure,
        rep=RepState(records=[replace(r) for r in scene.rep.records]),
        sim=replace(scene.sim),
        view=replace(scene.view),
        current_selection=set(scene.current_selection),
        last_user_message=scene.last_user_message,
    )


def restore_scene(scene: SceneState, snapshot: SceneState) -> None:
    """Write a snapshot (from copy_scene) back into the live scene object."""
    scene.rep.records = [replace(r) for r in snapshot.rep.records]
    scene.sim = replace(snapshot.sim)
    scene.view = replace(snapshot.view)
    scene.current_selection = set(snapshot.current_selection)
    scene.last_user_message = snapshot.last_user_message


def diff_scenes(before: SceneState, after: SceneState) -> dict:
    """Summary of changed fields between two scene snapshots.

    Keys (present only when changed):
      sim.temperature, sim.updateRate, sim.running, view.zoomFactor -> [from, to]
      selection.size -> [from, to] (present whenever the selected set changed)
      rep.changedAtoms -> count of atoms whose display record changed
    """
    diff: dict = {}
    if before.sim.temperature != after.sim.temperature:
        diff["sim.temperature"] = [before.sim.temperature, after.sim.temperature]
    if before.sim.update_rate != after.sim.update_rate:
        diff["sim.updateRate"] = [before.sim.update_rate, after.sim.update_rate]
    if before.sim.running != after.sim.running:
        diff["sim.running"] = [before.sim.running, after.sim.running]
    if before.view.zoom_factor != after.view.zoom_factor:
        diff["view.zoomFactor"] = [before.view.zoom_factor, after.view.zoom_factor]
    if before.current_selection != after.current_selection:
        diff["selection.size"] = [len(before.current_selection), len(after.current_selection)]
    changed = sum(1 for b, a in zip(before.rep.records, after.rep.records) if b != a)
    if changed:
        diff["rep.changedAtoms"] = changed
    return diff
