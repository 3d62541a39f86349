#!/usr/bin/env python3
"""Reference descriptor values for tests/data/descriptor_molecules.smi.

Run once with RDKit installed; the output CSV is committed and read by the
C++ tests, so RDKit is not a build or test dependency.

Definitions mirror molxfer's:
  molecular_weight  average MW including hydrogens
  aromatic_rings    SSSR rings whose atoms are all aromatic
  rotatable_bonds   SMARTS [!D1]-&!@[!D1]
  hba               N + O atom count
  hbd               N/O atoms carrying at least one hydrogen
  heterocycles      SSSR rings containing a non-carbon atom
  tpsa              Ertl TPSA, N and O contributions only
"""
import argparse
import csv
import sys
from pathlib import Path

from rdkit import Chem
from rdkit.Chem import Descriptors, rdMolDescriptors

ROTATABLE = Chem.MolFromSmarts("[!D1]-&!@[!D1]")


def describe(smiles):
    mol = Chem.MolFromSmiles(smiles)
    if mol is None:
        raise ValueError(f"RDKit cannot parse {smiles!r}")
    rings = [list(r) for r in Chem.GetSSSR(mol)]
    atoms = mol.GetAtoms()
    return {
        "smiles": Chem.MolToSmiles(mol, isomericSmiles=False),
        "molecular_weight": f"{Descriptors.MolWt(mol):.6f}",
        "aromatic_rings": sum(all(mol.GetAtomWithIdx(i).GetIsAromatic() for i in r)
                              for r in rings),
        "rotatable_bonds": len(mol.GetSubstructMatches(ROTATABLE)),
        "hba": sum(a.GetSymbol() in ("N", "O") for a in atoms),
        "hbd": sum(a.GetSymbol() in ("N", "O") and a.GetTotalNumHs() > 0
                   for a in atoms),
        "heterocycles": sum(any(mol.GetAtomWithIdx(i).GetSymbol() != "C" for i in r)
                            for r in rings),
        "tpsa": f"{rdMolDescriptors.CalcTPSA(mol, includeSandP=False):.6f}",
    }


def main():
    here = Path(__file__).resolve().parent.parent / "data"
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input", type=Path, default=here / "descriptor_molecules.smi")
    ap.add_argument("--output", type=Path, default=here / "descriptor_reference.csv")
    args = ap.parse_args()

    fields = ["name", "smiles", "molecular_weight", "aromatic_rings",
              "rotatable_bonds", "hba", "hbd", "heterocycles", "tpsa"]
    rows = []
    for line in args.input.read_text().splitlines():
        if not line.strip():
            continue
        smiles, name = line.split()
        rows.append({"name": name, **describe(smiles)})
    with args.output.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
