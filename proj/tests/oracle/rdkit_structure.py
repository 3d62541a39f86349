#!/usr/bin/env python3
"""Reference atom/bond/hydrogen/ring counts and circular-environment counts.

Writes tests/data/structure_reference.json; run once with RDKit installed.
"""
import json
from pathlib import Path

from rdkit import Chem
from rdkit.Chem import rdFingerprintGenerator

SMILES = ["C", "CC(=O)O", "c1ccccc1", "c1ccncc1", "c1ccc2ccccc2c1",
          "C1CC2CCC1C2", "c1ccc2[nH]ccc2c1", "O=C=O", "CCO"]


def environments(mol, radius):
    gen = rdFingerprintGenerator.GetMorganGenerator(radius=radius)
    return len(gen.GetSparseCountFingerprint(mol).GetNonzeroElements())


def main():
    out = []
    for smi in SMILES:
        mol = Chem.MolFromSmiles(smi)
        out.append({
            "smiles": smi,
            "atoms": mol.GetNumAtoms(),
            "bonds": mol.GetNumBonds(),
            "hydrogens": [a.GetTotalNumHs() for a in mol.GetAtoms()],
            "aromatic": [a.GetIsAromatic() for a in mol.GetAtoms()],
            "rings": mol.GetRingInfo().NumRings(),
            "environments_r2": environments(mol, 2),
        })
    path = Path(__file__).resolve().parent.parent / "data" / "structure_reference.json"
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
