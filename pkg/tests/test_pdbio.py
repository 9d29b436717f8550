import random

import pytest

from molvoice.errors import MalformedRecordError, NoAtomsError
from molvoice.pdbio import format_atom_record, load_pdb, write_pdb
from molvoice.scene import Atom, Structure, new_scene

from genutil import random_structure

SPEC_LINE = "ATOM      1  CA  ARG A   1       1.000   2.000   3.000"


def test_single_record_fields():
    structure = load_pdb(SPEC_LINE)
    assert len(structure.atoms) == 1
    atom = structure.atoms[0]
    assert atom.serial == 1
    assert atom.name == "CA"
    assert atom.resname == "ARG"
    assert atom.chain == "A"
    assert atom.resid == 1
    assert atom.position == (1.0, 2.0, 3.0)


def test_fixture_against_line_scan_oracle(fixture_text):
    # independent oracle: plain text scan of the fixture, no pdbio involved
    records = [ln for ln in fixture_text.split("\n") if ln.startswith(("ATOM  ", "HETATM"))]
    oracle_serials = [int(ln[6:11]) for ln in records]
    oracle_chains = {ln[21] for ln in records}

    structure = load_pdb(fixture_text)
    assert len(records) == 20
    assert [a.serial for a in structure.atoms] == oracle_serials
    assert {a.chain for a in structure.atoms} == oracle_chains == {"A", "C"}


def test_remark_only_is_no_atoms():
    with pytest.raises(NoAtomsError):
        load_pdb("REMARK   1 NOTHING HERE\nREMARK   2 STILL NOTHING\nEND\n")


def test_empty_text_is_no_atoms():
    with pytest.raises(NoAtomsError):
        load_pdb("")


def test_short_record_reports_line_number():
    text = "ATOM      1  CA  ARG A   1       1.000   2.000   3.000\nATOM      2  CA\n"
    with pytest.raises(MalformedRecordError) as err:
        load_pdb(text)
    assert err.value.line_no == 2


def test_bad_coordinates_rejected():
    bad = SPEC_LINE[:30] + "   x.xxx" + SPEC_LINE[38:]
    with pytest.raises(MalformedRecordError):
        load_pdb(bad)


def test_duplicate_serial_rejected():
    with pytest.raises(MalformedRecordError):
        load_pdb(SPEC_LINE + "\n" + SPEC_LINE)


def test_write_single_atom_coordinate_columns():
    scene = new_scene(
        Structure(atoms=[Atom(1, "CA", "ALA", "A", 1, (1.0, 2.0, 3.0), "C")])
    )
    text = write_pdb(scene)
    assert "1.000   2.000   3.000" in text
    assert text.rstrip().endswith("END")


def test_write_empty_scene_is_no_atoms():
    scene = new_scene(Structure(atoms=[]))
    with pytest.raises(NoAtomsError):
        write_pdb(scene)


def test_fixture_roundtrip_byte_identical(fixture_text):
    # independent normalizer: only trailing whitespace per line may differ
    def norm(text: str) -> str:
        return "\n".join(line.rstrip() for line in text.rstrip("\n").split("\n"))

    scene = new_scene(load_pdb(fixture_text))
    assert norm(write_pdb(scene)) == norm(fixture_text)


def test_roundtrip_random_structures():
    rng = random.Random(7321)
    for _ in range(100):
        structure = random_structure(rng, max_atoms=80)
        loaded = load_pdb(write_pdb(new_scene(structure)))
        assert loaded.atoms == structure.atoms
        assert loaded.title == structure.title


def test_long_resname_rejected_at_write():
    atom = Atom(1, "CA", "DXYZ", "A", 1, (0.0, 0.0, 0.0), "C")
    with pytest.raises(ValueError):
        format_atom_record(atom)
