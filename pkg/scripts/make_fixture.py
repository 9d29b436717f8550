"""Regenerate fixtures/mini.pdb and the bundled copy from one atom table.

The fixture is written by write_pdb itself so the load->write round trip is
byte-exact by construction. Run from the repo root:

    python scripts/make_fixture.py
"""

from pathlib import Path

from molvoice.pdbio import write_pdb
from molvoice.scene import Atom, Structure, new_scene

# serial, name, resname, chain, resid, (x, y, z), element
ATOMS = [
    (1, "N", "ALA", "A", 1, (11.104, 6.134, 2.715), "N"),
    (2, "CA", "ALA", "A", 1, (12.560, 6.351, 2.619), "C"),
    (3, "C", "ALA", "A", 1, (13.276, 5.225, 1.874), "C"),
    (4, "O", "ALA", "A", 1, (12.644, 4.311, 1.341), "O"),
    (5, "CB", "ALA", "A", 1, (13.182, 6.496, 4.012), "C"),
    (6, "N", "CYS", "A", 2, (14.609, 5.281, 1.834), "N"),
    (7, "CA", "CYS", "A", 2, (15.434, 4.269, 1.163), "C"),
    (8, "C", "CYS", "A", 2, (16.917, 4.613, 1.293), "C"),
    (9, "O", "CYS", "A", 2, (17.311, 5.713, 1.687), "O"),
    (10, "SG", "CYS", "A", 2, (14.995, 2.609, 1.783), "S"),
    (11, "N", "ASP", "C", 3, (2.093, 10.437, 5.617), "N"),
    (12, "CA", "ASP", "C", 3, (3.513, 10.155, 5.433), "C"),
    (13, "OD1", "ASP", "C", 3, (4.014, 12.407, 6.288), "O"),
    (14, "N", "ARG", "C", 4, (4.201, 8.963, 5.961), "N"),
    (15, "CA", "ARG", "C", 4, (5.641, 8.742, 5.821), "C"),
    (16, "NH1", "ARG", "C", 4, (6.122, 5.320, 8.111), "N"),
    (17, "N", "GLY", "C", 5, (6.329, 7.551, 6.349), "N"),
    (18, "CA", "GLY", "C", 5, (7.769, 7.330, 6.209), "C"),
    (19, "N", "LYS", "C", 6, (8.457, 6.139, 6.737), "N"),
    (20, "NZ", "LYS", "C", 6, (9.117, 2.503, 9.287), "N"),
]


def build_structure() -> Structure:
    atoms = [
        Atom(serial=s, name=n, resname=rn, chain=ch, resid=ri, position=pos, element=el)
        for s, n, rn, ch, ri, pos, el in ATOMS
    ]
    return Structure(atoms=atoms, title="MINI FIXTURE")


def main() -> None:
    text = write_pdb(new_scene(build_structure()))
    root = Path(__file__).resolve().parent.parent
    for target in (root / "fixtures" / "mini.pdb", root / "src" / "molvoice" / "data" / "mini.pdb"):
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        print(f"wrote {target} ({len(text)} bytes)")


if __name__ == "__main__":
    main()
