//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "molxfer/datagen.h"
#include "molxfer/molgraph.h"
#include "molxfer/random.h"
#include "test_util.h"

namespace molxfer {
namespace {
SmilesErrorKind error_kind(std::string_view smiles) {
  try {
    parse_smiles(smiles);
  } catch (const SmilesError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << smiles;
  return SmilesErrorKind::kSyntax;
}

TEST(ParseSmiles, Methane) {
  MolecularGraph mol = parse_smiles("C");
  ASSERT_EQ(mol.num_atoms(), 1);
  EXPECT_EQ(mol.num_bonds(), 0);
  EXPECT_EQ(mol.atom(0).element, Element::kC);
  EXPECT_EQ(mol.atom(0).implicit_h, 4);
  EXPECT_EQ(mol.atom(0).degree, 0);
  EXPECT_TRUE(mol.rings().empty());
  EXPECT_EQ(mol.source_smiles(), "C");
}

TEST(ParseSmiles, AceticAcid) {
  MolecularGraph mol = parse_smiles("CC(=O)O");
  EXPECT_EQ(mol.num_atoms(), 4);
  EXPECT_EQ(mol.num_bonds(), 3);
  int doubles = 0;
  for (const Bond &b: mol.bonds())
    doubles += b.order == BondOrder::kDouble;
  EXPECT_EQ(doubles, 1);
  EXPECT_TRUE(mol.rings().empty());
  EXPECT_EQ(mol.atom(3).implicit_h, 1);
}

TEST(ParseSmiles, Benzene) {
  MolecularGraph mol = parse_smiles("c1ccccc1");
  ASSERT_EQ(mol.num_atoms(), 6);
  EXPECT_EQ(mol.num_bonds(), 6);
  for (const Atom &a: mol.atoms()) {
    EXPECT_TRUE(a.is_aromatic);
    EXPECT_EQ(a.implicit_h, 1);
  }
  for (const Bond &b: mol.bonds()) {
    EXPECT_EQ(b.order, BondOrder::kAromatic);
    EXPECT_TRUE(b.in_ring);
  }
  ASSERT_EQ(mol.rings().size(), 1);
  EXPECT_EQ(mol.rings()[0].size(), 6);
}

TEST(ParseSmiles, BracketAtoms) {
  MolecularGraph mol = parse_smiles("C[N+](C)(C)C");
  EXPECT_EQ(mol.atom(1).formal_charge, 1);
  EXPECT_EQ(mol.atom(1).total_h(), 0);

  mol = parse_smiles("[NH4+]");
  EXPECT_EQ(mol.atom(0).formal_charge, 1);
  EXPECT_EQ(mol.atom(0).explicit_h, 4);
  EXPECT_EQ(mol.atom(0).implicit_h, 0);

  mol = parse_smiles("[O-]C=O");
  EXPECT_EQ(mol.atom(0).formal_charge, -1);
  EXPECT_EQ(mol.atom(0).total_h(), 0);

  mol = parse_smiles("C[N--]");
  EXPECT_EQ(mol.atom(1).formal_charge, -2);
  mol = parse_smiles("C[N+2]C");
  EXPECT_EQ(mol.atom(1).formal_charge, 2);
  mol = parse_smiles("[13CH4]");
  EXPECT_EQ(mol.atom(0).total_h(), 4);
  mol = parse_smiles("[CH3:7]O");
  EXPECT_EQ(mol.atom(0).total_h(), 3);
}

TEST(ParseSmiles, StereoIsIgnored) {
  DescriptorVector plain = compute_descriptors(parse_smiles("CC(N)C(=O)O"));
  EXPECT_EQ(compute_descriptors(parse_smiles("C[C@H](N)C(=O)O")), plain);
  EXPECT_EQ(compute_descriptors(parse_smiles("C[C@@H](N)C(=O)O")), plain);
  EXPECT_EQ(compute_descriptors(parse_smiles("C[C@TH1H](N)C(=O)O")), plain);
  EXPECT_EQ(parse_smiles("F/C=C/F").num_bonds(), 3);
  EXPECT_EQ(parse_smiles("F/C=C\\F").num_atoms(), 4);
}

TEST(ParseSmiles, RingClosures) {
  MolecularGraph mol = parse_smiles("C%10CCCCC%10");
  EXPECT_EQ(mol.rings().size(), 1);
  mol = parse_smiles("C1CC=1");
  EXPECT_EQ(mol.bond(mol.find_bond(0, 2)).order, BondOrder::kDouble);
  mol = parse_smiles("C=1CC1");
  EXPECT_EQ(mol.bond(mol.find_bond(0, 2)).order, BondOrder::kDouble);
  // A ring label can be reused once closed.
  mol = parse_smiles("C1CC1C1CC1");
  EXPECT_EQ(mol.rings().size(), 2);
}

TEST(ParseSmiles, HalogensAndHeavyElements) {
  MolecularGraph mol = parse_smiles("ClC(Br)(I)F");
  EXPECT_EQ(mol.atom(0).element, Element::kCl);
  EXPECT_EQ(mol.atom(2).element, Element::kBr);
  EXPECT_EQ(mol.atom(3).element, Element::kI);
  EXPECT_EQ(mol.atom(1).implicit_h, 0);

  mol = parse_smiles("OB(O)O");
  EXPECT_EQ(mol.atom(1).implicit_h, 0);
  mol = parse_smiles("CS(=O)(=O)C");
  EXPECT_EQ(mol.atom(1).implicit_h, 0);
  mol = parse_smiles("OP(=O)(O)O");
  EXPECT_EQ(mol.atom(1).implicit_h, 0);
  mol = parse_smiles("CS");
  EXPECT_EQ(mol.atom(1).implicit_h, 1);
}

TEST(ParseSmiles, AromaticHeteroatoms) {
  MolecularGraph pyrrole = parse_smiles("c1cc[nH]c1");
  EXPECT_EQ(pyrrole.atom(3).total_h(), 1);
  MolecularGraph pyridine = parse_smiles("c1ccncc1");
  EXPECT_EQ(pyridine.atom(3).total_h(), 0);
  MolecularGraph furan = parse_smiles("c1ccoc1");
  EXPECT_EQ(furan.atom(3).total_h(), 0);
  MolecularGraph pyridone = parse_smiles("O=c1cccc[nH]1");
  EXPECT_EQ(pyridone.atom(1).total_h(), 0);
  MolecularGraph pyridinium = parse_smiles("C[n+]1ccccc1");
  EXPECT_EQ(pyridinium.atom(1).total_h(), 0);
}

TEST(ParseSmiles, Errors) {
  EXPECT_EQ(error_kind("C1CC"), SmilesErrorKind::kUnclosedRing);
  EXPECT_EQ(error_kind("C(C"), SmilesErrorKind::kUnbalancedParenthesis);
  EXPECT_EQ(error_kind("CC)C"), SmilesErrorKind::kUnbalancedParenthesis);
  EXPECT_EQ(error_kind("C[Na]"), SmilesErrorKind::kUnsupportedElement);
  EXPECT_EQ(error_kind("C[Si](C)C"), SmilesErrorKind::kUnsupportedElement);
  EXPECT_EQ(error_kind("[se]1cccc1"), SmilesErrorKind::kUnsupportedElement);
  EXPECT_EQ(error_kind("CX"), SmilesErrorKind::kUnsupportedElement);
  EXPECT_EQ(error_kind("FC(F)(F)(F)F"), SmilesErrorKind::kValence);
  EXPECT_EQ(error_kind("O=O=O"), SmilesErrorKind::kValence);
  EXPECT_EQ(error_kind("C#C#C"), SmilesErrorKind::kValence);
  EXPECT_EQ(error_kind("[CH5]"), SmilesErrorKind::kValence);
  EXPECT_EQ(error_kind("CCO.O"), SmilesErrorKind::kMultiFragment);
  EXPECT_EQ(error_kind("CC(C)cc"), SmilesErrorKind::kAromaticity);
  EXPECT_EQ(error_kind("c1cccc1"), SmilesErrorKind::kAromaticity);
  EXPECT_EQ(error_kind("C12CC12"), SmilesErrorKind::kDuplicateBond);
  EXPECT_EQ(error_kind(""), SmilesErrorKind::kSyntax);
  EXPECT_EQ(error_kind("C=1CC-1"), SmilesErrorKind::kSyntax);
  EXPECT_EQ(error_kind("C[C"), SmilesErrorKind::kSyntax);
  EXPECT_EQ(error_kind("C=(C)C"), SmilesErrorKind::kSyntax);
}

TEST(ParseSmiles, ErrorNames) {
  EXPECT_EQ(to_string(SmilesErrorKind::kUnclosedRing), "UnclosedRing");
  EXPECT_EQ(to_string(SmilesErrorKind::kValence), "ValenceError");
  EXPECT_EQ(to_string(SmilesErrorKind::kMultiFragment), "MultiFragmentError");
}

// The valence error fires exactly above the largest table entry.
TEST(ParseSmiles, ValenceBoundary) {
  EXPECT_NO_THROW(parse_smiles("C(C)(C)(C)C"));
  EXPECT_NO_THROW(parse_smiles("CN(C)C"));
  EXPECT_NO_THROW(parse_smiles("CN(=O)=O"));
  EXPECT_EQ(error_kind("CN(=O)(=O)C"), SmilesErrorKind::kValence);
  EXPECT_NO_THROW(parse_smiles("C[N+](C)(C)C"));
  EXPECT_NO_THROW(parse_smiles("OS(=O)(=O)O"));
  EXPECT_NO_THROW(parse_smiles("FP(F)(F)(F)F"));
  EXPECT_EQ(error_kind("FP(F)(F)(F)(F)F"), SmilesErrorKind::kValence);
  EXPECT_EQ(error_kind("CO(C)C"), SmilesErrorKind::kValence);
  EXPECT_NO_THROW(parse_smiles("C[O+](C)C"));
}

TEST(MolecularGraph, CycleBasisRank) {
  for (const std::string &smi: test::generated_smiles(300, 3)) {
    MolecularGraph mol = parse_smiles(smi);
    EXPECT_EQ(static_cast<int>(mol.rings().size()),
              mol.num_bonds() - mol.num_atoms() + 1)
        << smi;
  }
  for (const char *smi: { "C1CC2CCC1C2", "c1ccc2ccccc2c1", "C12C3C4C1C5C2C3C45",
                          "c1cc2cccc3ccc(c1)c23" }) {
    MolecularGraph mol = parse_smiles(smi);
    EXPECT_EQ(static_cast<int>(mol.rings().size()),
              mol.num_bonds() - mol.num_atoms() + 1)
        << smi;
  }
}

TEST(MolecularGraph, NorbornaneRingSizes) {
  MolecularGraph mol = parse_smiles("C1CC2CCC1C2");
  std::vector<std::size_t> sizes;
  for (const auto &r: mol.rings())
    sizes.push_back(r.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t> { 5, 5 }));
}

TEST(MolecularGraph, AssembleRejectsBadBonds) {
  std::vector<Atom> atoms(2);
  EXPECT_THROW(MolecularGraph::assemble(atoms, { { 0, 0, BondOrder::kSingle } }),
               SmilesError);
  EXPECT_THROW(MolecularGraph::assemble(atoms, { { 0, 2, BondOrder::kSingle } }),
               SmilesError);
  EXPECT_THROW(MolecularGraph::assemble(atoms, {}), SmilesError);
  EXPECT_THROW(MolecularGraph::assemble(
                   atoms, { { 0, 1, BondOrder::kSingle }, { 1, 0, BondOrder::kDouble } }),
               SmilesError);
  MolecularGraph ok = MolecularGraph::assemble(atoms, { { 0, 1, BondOrder::kDouble } });
  EXPECT_EQ(ok.atom(0).implicit_h, 2);
}

TEST(MolecularGraph, ReindexPreservesDescriptors) {
  Rng rng(11);
  for (const std::string &smi: test::generated_smiles(100, 5)) {
    MolecularGraph mol = parse_smiles(smi);
    std::vector<int> perm(mol.num_atoms());
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(perm, rng);
    MolecularGraph other = mol.reindexed(perm);
    EXPECT_EQ(compute_descriptors(other), compute_descriptors(mol)) << smi;
    EXPECT_EQ(other.rings().size(), mol.rings().size());
    for (int i = 0; i < mol.num_atoms(); ++i)
      EXPECT_EQ(other.atom(perm[i]).total_h(), mol.atom(i).total_h());
  }
}

TEST(ToSmiles, RoundTrip) {
  std::vector<std::string> inputs = test::generated_smiles(200, 9);
  for (const char *smi: { "c1ccc2ccccc2c1", "C1CC2CCC1C2", "C[N+](=O)[O-]",
                          "c1ccc(-c2ccccc2)cc1", "O=c1cccc[nH]1", "CC#N",
                          "[NH4+]", "C1CC1C1CC1", "c1cc2cccc3ccc(c1)c23" })
    inputs.emplace_back(smi);
  for (const std::string &smi: inputs) {
    MolecularGraph mol = parse_smiles(smi);
    for (int root = 0; root < mol.num_atoms(); root += 3) {
      std::string out = to_smiles(mol, root);
      MolecularGraph back = parse_smiles(out);
      EXPECT_EQ(back.num_atoms(), mol.num_atoms()) << smi << " -> " << out;
      EXPECT_EQ(back.num_bonds(), mol.num_bonds()) << smi << " -> " << out;
      EXPECT_EQ(compute_descriptors(back), compute_descriptors(mol))
          << smi << " -> " << out;
      EXPECT_EQ(molecule_key(back), molecule_key(mol)) << smi << " -> " << out;
    }
  }
}

TEST(ToSmiles, IsDeterministic) {
  MolecularGraph mol = parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
  EXPECT_EQ(to_smiles(mol), to_smiles(mol));
  EXPECT_EQ(to_smiles(parse_smiles("CCO")), "CCO");
  EXPECT_THROW(to_smiles(mol, 99), Error);
}
}  // namespace
}  // namespace molxfer
