#!/usr/bin/env python3
"""
Tests for the Hamiltonian text format and YAML sweep manifests.
"""

import pytest
import yaml

from src.circuits.ansatz_compiler import AnsatzFamily
from src.ham_io import (BUNDLED_NAH, bundled_nah, bundled_nah_file, load_hamiltonian, load_manifest,
                        manifest_from_dict, parse, save_hamiltonian, serialize)
from src.optimizers import OptimizerKind
from src.utils.errors import HamiltonianParseError, ManifestError


class TestParse:
    def test_bundled_file(self):
        source = bundled_nah_file()
        assert source.molecule == "NaH"
        assert source.bond_length_angstrom == pytest.approx(1.91438)
        assert source.basis == "STO-3G"
        assert source.n_qubits == 4
        assert len(source.terms) == 27
        assert source.terms[0] == (-159.40289, "IIII")
        assert source.terms[2] == (0.0202421, "XXXX")

    def test_bundled_hamiltonian(self):
        h = bundled_nah()
        assert h.coefficient("IIIZ") == pytest.approx(-0.387818)
        assert h.coefficient("ZIZI") == pytest.approx(0.158901)

    def test_comments_and_blank_lines(self):
        source = parse("# only terms\n\n0.5 ZI  # trailing\n-0.25 IX\n")
        assert source.n_qubits == 2
        assert source.terms == [(0.5, "ZI"), (-0.25, "IX")]

    @pytest.mark.parametrize("text, line", [
        ("0.5 ZQ\n", 1),
        ("0.5 ZZ\n0.1 ZZZ\n", 2),
        ("0.5 ZZ\n0.1 XX\n0.2 ZZ\n", 3),
        ("n_qubits: 2\n0.5 ZZZ\n", 2),
        ("abc ZZ\n", 1),
        ("0.5 ZZ extra\n", 1),
        ("0.5 ZZ\nmolecule: NaH\n", 2),
        ("colour: blue\n0.5 ZZ\n", 1),
        ("n_qubits: zero\n0.5 ZZ\n", 1),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(HamiltonianParseError) as excinfo:
            parse(text)
        assert excinfo.value.line_number == line
        assert str(excinfo.value).startswith(f"line {line}:")

    def test_no_terms(self):
        with pytest.raises(HamiltonianParseError):
            parse("# nothing\nmolecule: H2\n")

    def test_serialize_keeps_full_precision(self, tmp_path):
        path = tmp_path / "copy.ham"
        save_hamiltonian(bundled_nah_file(), path)
        again = load_hamiltonian(path)
        assert again.terms == bundled_nah_file().terms
        assert again.bond_length_angstrom == bundled_nah_file().bond_length_angstrom

    def test_serialize_pauli_sum(self):
        text = serialize(bundled_nah())
        assert text.startswith("n_qubits: 4\n")
        assert parse(text).to_pauli_sum() == bundled_nah()


class TestManifest:
    def base(self, **overrides):
        data = {
            "hamiltonians": [{"bundled": True}],
            "noise_levels": [0.0, "1e-4", 1e-2],
            "optimizers": ["cobyla", "LBFGS"],
            "ansatz": ["uccd", "adapt"],
        }
        data.update(overrides)
        return data

    def test_valid_manifest(self):
        manifest = manifest_from_dict(self.base(seeds=[1, 2], rc=3))
        assert manifest.noise_levels == [0.0, 1e-4, 1e-2]
        assert manifest.optimizers == [OptimizerKind.GRADIENT_FREE, OptimizerKind.QUASI_NEWTON]
        assert manifest.ansatz == [AnsatzFamily.UCCD, AnsatzFamily.ADAPT]
        assert manifest.hamiltonians[0].bond_length == pytest.approx(1.91438)
        assert manifest.n_cells == 1 * 3 * 2 * 2 * 2
        assert manifest.rc == 3

    def test_seed_default(self):
        assert manifest_from_dict(self.base()).seeds == [0]

    @pytest.mark.parametrize("overrides", [
        {"noise_levels": []},
        {"noise_levels": [0.5]},
        {"noise_levels": ["loud"]},
        {"optimizers": ["newton"]},
        {"ansatz": ["uccsdt"]},
        {"hamiltonians": [{"label": "none"}]},
        {"hamiltonians": ["missing.ham"]},
        {"rc": -1},
        {"max_iterations": 0},
    ])
    def test_invalid_manifests(self, overrides):
        with pytest.raises(ManifestError):
            manifest_from_dict(self.base(**overrides))

    def test_missing_axis(self):
        data = self.base()
        del data["optimizers"]
        with pytest.raises(ManifestError):
            manifest_from_dict(data)

    def test_noise_levels_fall_back_to_default_grid(self):
        data = self.base()
        del data["noise_levels"]
        manifest = manifest_from_dict(data, default_noise_levels=[0.0, 1e-3])
        assert manifest.noise_levels == [0.0, 1e-3]
        assert manifest_from_dict(self.base(), default_noise_levels=[1e-3]).noise_levels == [0.0, 1e-4, 1e-2]
        with pytest.raises(ManifestError):
            manifest_from_dict(data)
        with pytest.raises(ManifestError):
            manifest_from_dict(self.base(noise_levels=[]), default_noise_levels=[0.0])

    def test_relative_paths_resolve_against_manifest(self, tmp_path):
        (tmp_path / "data").mkdir()
        save_hamiltonian(bundled_nah_file(), tmp_path / "data" / "nah.ham")
        manifest_path = tmp_path / "study.yaml"
        manifest_path.write_text(yaml.safe_dump(self.base(hamiltonians=[{"path": "data/nah.ham",
                                                                          "bond_length": 2.0}])))
        manifest = load_manifest(manifest_path)
        assert manifest.hamiltonians[0].bond_length == 2.0
        assert manifest.hamiltonians[0].label == "data/nah.ham"

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("hamiltonians: [\n")
        with pytest.raises(ManifestError):
            load_manifest(path)

    def test_bundled_manifests_load(self):
        manifests = BUNDLED_NAH.parent.parent.parent / "manifests"
        for path in sorted(manifests.glob("*.yaml")):
            assert load_manifest(path).n_cells > 0
