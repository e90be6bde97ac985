import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synthroute.chem import (
    AROMATIC,
    SINGLE,
    Fingerprint,
    Molecule,
    canonical_key,
    element_multiset,
    fingerprint,
    parse_smiles,
    same_molecule,
    tanimoto,
    write_smiles,
)
from synthroute.errors import (
    EmptyInputError,
    LengthMismatchError,
    SmilesParseError,
    UnbalancedParenError,
    UnknownAtomSymbolError,
    UnmatchedRingError,
)

ERROR_KINDS = {
    "unmatched_ring": UnmatchedRingError,
    "unbalanced_paren": UnbalancedParenError,
    "unknown_atom_symbol": UnknownAtomSymbolError,
    "empty_input": EmptyInputError,
}


class TestParse:
    def test_ethanol(self):
        m = parse_smiles("CCO")
        assert [a.element for a in m.atoms] == ["C", "C", "O"]
        assert len(m.bonds) == 2
        assert all(b.order == SINGLE for b in m.bonds)

    def test_cyclopropane(self):
        m = parse_smiles("C1CC1")
        assert m.atom_count == 3
        assert m.bond_count == 3

    def test_benzene(self):
        m = parse_smiles("c1ccccc1")
        assert m.atom_count == 6
        assert m.bond_count == 6
        assert all(a.aromatic for a in m.atoms)
        assert all(b.order == AROMATIC for b in m.bonds)

    def test_unclosed_ring(self):
        with pytest.raises(UnmatchedRingError):
            parse_smiles("C1CC")

    def test_bracket_charge(self):
        m = parse_smiles("C[N+](C)(C)C")
        charges = [a.charge for a in m.atoms]
        assert charges.count(1) == 1
        assert m.atoms[1].bracketed

    def test_negative_charge_digit(self):
        m = parse_smiles("[O-2]")
        assert m.atoms[0].charge == -2

    def test_stereo_markers_ignored_with_flag(self):
        m = parse_smiles("C/C=C\\C")
        assert m.stereo_ignored
        assert m.bond_count == 3
        plain = parse_smiles("CC=CC")
        assert same_molecule(m, plain)
        assert not plain.stereo_ignored

    def test_at_stereo_ignored(self):
        m = parse_smiles("C[C@H](N)O")
        assert m.stereo_ignored
        assert same_molecule(m, parse_smiles("CC(N)O"))

    def test_percent_ring_closure(self):
        assert parse_smiles("C%10CC%10").bond_count == 3

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            parse_smiles("")
        with pytest.raises(EmptyInputError):
            parse_smiles("   ")

    def test_malformed_corpus(self, malformed_smiles):
        for smiles, kind in malformed_smiles:
            with pytest.raises(ERROR_KINDS[kind]):
                parse_smiles(smiles)

    def test_valid_inputs_do_not_raise(self, smiles_pairs):
        for first, second in smiles_pairs:
            parse_smiles(first)
            parse_smiles(second)


class TestWrite:
    def test_round_trip_ethanol(self):
        again = parse_smiles(write_smiles(parse_smiles("CCO")))
        assert again.atom_count == 3
        assert again.bond_count == 2

    def test_round_trip_ring(self):
        again = parse_smiles(write_smiles(parse_smiles("C1CC1")))
        assert again.atom_count == 3
        assert again.bond_count == 3

    def test_round_trip_fixture_corpus(self, smiles_pairs):
        for first, _ in smiles_pairs:
            m = parse_smiles(first)
            again = parse_smiles(write_smiles(m))
            assert same_molecule(m, again), first

    def test_single_bond_between_aromatic_rings(self):
        biphenyl = parse_smiles("c1ccccc1-c1ccccc1")
        assert sum(1 for b in biphenyl.bonds if b.order == SINGLE) == 1
        assert same_molecule(biphenyl, parse_smiles(write_smiles(biphenyl)))


class TestCanonicalKey:
    def test_reversed_spelling(self):
        assert canonical_key(parse_smiles("CCO")) == canonical_key(parse_smiles("OCC"))

    def test_distinct_graphs(self):
        assert canonical_key(parse_smiles("CCO")) != canonical_key(parse_smiles("CCN"))
        assert element_multiset(parse_smiles("CCO")) != element_multiset(
            parse_smiles("CCN")
        )

    def test_stable_across_calls(self):
        key = canonical_key(parse_smiles("CC(=O)Oc1ccccc1C(=O)O")).key
        assert key == canonical_key(parse_smiles("CC(=O)Oc1ccccc1C(=O)O")).key
        assert len(key) == 16

    def test_spelling_invariance_fixture(self, smiles_pairs):
        for first, second in smiles_pairs:
            a, b = parse_smiles(first), parse_smiles(second)
            assert canonical_key(a) == canonical_key(b), (first, second)


class TestFingerprint:
    def test_spelling_invariance(self, smiles_pairs):
        for first, second in smiles_pairs:
            fa = fingerprint(parse_smiles(first))
            fb = fingerprint(parse_smiles(second))
            assert fa == fb, (first, second)

    def test_radius_zero_single_atom(self):
        fp = fingerprint(parse_smiles("C"), radius=0)
        assert fp.bit_count() == 1

    def test_disjoint_elements_share_no_radius0_bits(self):
        pairs = [("CCCC", "OSN"), ("c1ccccc1", "OP(O)O"), ("FCl", "NSBr")]
        for left, right in pairs:
            fl = fingerprint(parse_smiles(left), radius=0)
            fr = fingerprint(parse_smiles(right), radius=0)
            assert fl.bits & fr.bits == 0, (left, right)

    def test_bad_args(self):
        with pytest.raises(ValueError):
            fingerprint(parse_smiles("C"), radius=-1)
        with pytest.raises(ValueError):
            fingerprint(parse_smiles("C"), n_bits=1000)


def _fp_from_indices(indices, n_bits=64):
    bits = 0
    for i in indices:
        bits |= 1 << i
    return Fingerprint(bits=bits, n_bits=n_bits, radius=0)


class TestTanimoto:
    def test_identity(self):
        fp = _fp_from_indices({1, 5, 9})
        assert tanimoto(fp, fp) == 1.0

    def test_disjoint(self):
        assert tanimoto(_fp_from_indices({1, 2}), _fp_from_indices({3, 4})) == 0.0

    def test_half_overlap(self):
        assert tanimoto(_fp_from_indices({1, 2, 3}), _fp_from_indices({2, 3, 4})) == 0.5

    def test_both_empty(self):
        assert tanimoto(_fp_from_indices(set()), _fp_from_indices(set())) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            tanimoto(_fp_from_indices({1}, 64), _fp_from_indices({1}, 128))

    @given(
        st.frozensets(st.integers(0, 63), max_size=64),
        st.frozensets(st.integers(0, 63), max_size=64),
    )
    @settings(max_examples=300, deadline=None)
    def test_matches_set_oracle(self, left, right):
        got = tanimoto(_fp_from_indices(left), _fp_from_indices(right))
        if not left and not right:
            expected = 1.0
        else:
            expected = len(left & right) / len(left | right)
        assert got == pytest.approx(expected)
        assert 0.0 <= got <= 1.0
        assert got == tanimoto(_fp_from_indices(right), _fp_from_indices(left))


class TestSameMolecule:
    def test_examples(self):
        assert same_molecule(parse_smiles("CCO"), parse_smiles("OCC"))
        assert not same_molecule(parse_smiles("CCO"), parse_smiles("CCN"))

    def test_reflexive_on_fixture(self, smiles_pairs):
        for first, _ in smiles_pairs:
            m = parse_smiles(first)
            assert same_molecule(m, m)


class TestMoleculeInvariants:
    def test_requires_atoms(self):
        with pytest.raises(ValueError):
            Molecule(atoms=(), bonds=())

    def test_rejects_duplicate_bond(self):
        from synthroute.chem import Atom, Bond

        atoms = (Atom("C", False, 0, False), Atom("C", False, 0, False))
        with pytest.raises(ValueError):
            Molecule(atoms=atoms, bonds=(Bond(0, 1, SINGLE), Bond(1, 0, SINGLE)))

    def test_rejects_out_of_range_bond(self):
        from synthroute.chem import Atom, Bond

        atoms = (Atom("C", False, 0, False),)
        with pytest.raises(ValueError):
            Molecule(atoms=atoms, bonds=(Bond(0, 3, SINGLE),))

    def test_duplicate_ring_bond_rejected_at_parse(self):
        with pytest.raises(SmilesParseError):
            parse_smiles("C12CC12")
