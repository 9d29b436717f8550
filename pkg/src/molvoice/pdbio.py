"""Fixed-column PDB reading and writing.

Only ATOM/HETATM records are consumed, in file order; MODEL/altloc bookkeeping
is out of scope. Column layout (1-indexed, inclusive): serial 7-11, name 13-16,
resname 18-20, chain 22, resid 23-26, x/y/z 31-54, element 77-78 (optional on
read, always written).
"""

from __future__ import annotations

from .errors import MalformedRecordError, NoAtomsError
from .scene import Atom, SceneState, Structure, _derive_element

_RECORD_PREFIXES = ("ATOM  ", "HETATM", "ATOM")


def load_pdb(text: str) -> Structure:
    """Parse PDB text into a Structure, one Atom per ATOM/HETATM record."""
    if not text or not text.strip():
        raise NoAtomsError("no coordinate records found")
    atoms: list[Atom] = []
    seen_serials: set[int] = set()
    title = ""
    for line_no, line in enumerate(text.splitlines(), start=1):
        record = line[:6].strip()
        if record == "TITLE" and not title:
            title = line[10:].strip()
            continue
        if record not in ("ATOM", "HETATM"):
            continue
        atoms.append(_parse_record(line, line_no, seen_serials))
    if not atoms:
        raise NoAtomsError("no coordinate records found")
    return Structure(atoms=atoms, title=title)


def _parse_record(line: str, line_no: int, seen_serials: set[int]) -> Atom:
    if len(line) < 54:
        raise MalformedRecordError(line_no, "record shorter than coordinate columns")
    try:
        serial = int(line[6:11])
    except ValueError:
        raise MalformedRecordError(line_no, f"bad serial {line[6:11]!r}") from None
    if serial <= 0:
        raise MalformedRecordError(line_no, f"serial must be positive, got {serial}")
    if serial in seen_serials:
        raise MalformedRecordError(line_no, f"duplicate serial {serial}")
    seen_serials.add(serial)
    name = line[12:16].strip()
    resname = line[17:20].strip()
    chain = line[21].strip()
    try:
        resid = int(line[22:26])
    except ValueError:
        raise MalformedRecordError(line_no, f"bad residue number {line[22:26]!r}") from None
    try:
        position = (float(line[30:38]), float(line[38:46]), float(line[46:54]))
    except ValueError:
        raise MalformedRecordError(line_no, "bad coordinate field") from None
    element = line[76:78].strip() if len(line) >= 78 else ""
    return Atom(
        serial=serial,
        name=name,
        resname=resname,
        chain=chain,
        resid=resid,
        position=position,
        element=element or _derive_element(name),
    )


def write_pdb(scene: SceneState) -> str:
    """Serialize the scene's structure back to PDB text, terminated by END."""
    atoms = scene.structure.atoms
    if not atoms:
        raise NoAtomsError("scene has no atoms to write")
    lines = []
    if scene.structure.title:
        lines.append(f"TITLE     {scene.structure.title}")
    for atom in atoms:
        lines.append(format_atom_record(atom))
    lines.append("END")
    return "\n".join(lines) + "\n"


def format_atom_record(atom: Atom) -> str:
    if len(atom.resname) > 3:
        # cols 18-20 hold three characters; refuse rather than silently truncate
        raise ValueError(f"resname {atom.resname!r} does not fit fixed PDB columns")
    name = atom.name if len(atom.name) >= 4 else f" {atom.name:<3s}"
    x, y, z = atom.position
    return (
        f"ATOM  {atom.serial:>5d} {name[:4]} {atom.resname:>3s} "
        f"{atom.chain:1.1s}{atom.resid:>4d}    "
        f"{x:8.3f}{y:8.3f}{z:8.3f}{1.0:6.2f}{0.0:6.2f}          {atom.element:>2.2s}"
    )
