"""Tests for model definition, validation, config loading and the tilde basis."""
import pytest
import numpy as np
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from errors import ModelError
from pauli import PauliString, anticommutes

FIXTURES = Path(__file__).parent / "fixtures"


class TestBuiltins:
    """Tests for the reference cluster models."""

    def test_cluster_y_shape(self):
        """Test cluster_y has N-2 terms and N jumps."""
        from models import builtin

        model = builtin("cluster_y", 6, J=1.0, kappa=0.3)
        assert len(model.hamiltonian_terms) == 4
        assert len(model.jumps) == 6
        assert model.hamiltonian_terms[0][1].labels() == "ZXZIII"
        assert model.jumps[2][1].labels() == "IIYIII"
        assert model.rates == [0.3] * 6

    def test_cluster_ziz_shape(self):
        """Test cluster_ziz has bulk jumps Z_{j-1} Z_{j+1}."""
        from models import builtin

        model = builtin("cluster_ziz", 5)
        assert len(model.jumps) == 3
        assert model.jumps[0][1].labels() == "ZIZII"

    def test_unknown_builtin(self):
        """Test unknown names raise ModelError."""
        from models import builtin

        with pytest.raises(ModelError):
            builtin("cluster_x", 6)

    def test_too_short(self):
        """Test chains below four qubits are rejected."""
        from models import builtin

        with pytest.raises(ModelError):
            builtin("cluster_y", 3)

    def test_with_couplings(self):
        """Test uniform coupling override."""
        from models import builtin

        model = builtin("cluster_y", 4).with_couplings(J=2.0, kappa=0.1)
        assert model.coefficients == [2.0, 2.0]
        assert model.rates == [0.1] * 4


class TestValidation:
    """Tests for model validation reports."""

    def test_builtins_are_valid(self):
        """Test reference models pass validation."""
        from models import builtin, validate

        for name in ("cluster_y", "cluster_ziz"):
            report = validate(builtin(name, 6))
            assert report.is_valid
            assert report.errors == []

    def test_noncommuting_terms(self):
        """Test anticommuting Hamiltonian terms are reported."""
        from models import LindbladModel, validate

        model = LindbladModel.from_text([(1.0, "XI"), (1.0, "ZI")], [(0.5, "ZZ")])
        report = validate(model)
        assert not report.is_valid
        assert any("non-commuting" in e for e in report.errors)

    def test_non_hermitian_jump(self):
        """Test a jump with imaginary phase is rejected."""
        from models import LindbladModel, validate

        model = LindbladModel.from_text([(1.0, "XX")], [(0.5, "iZI")])
        assert not validate(model).is_valid

    def test_no_jumps_warns(self):
        """Test a model without jumps is valid with a warning."""
        from models import LindbladModel, validate

        report = validate(LindbladModel.from_text([(1.0, "XX")], []))
        assert report.is_valid
        assert report.warnings

    def test_require_valid_raises(self):
        """Test require_valid turns errors into ModelError."""
        from models import LindbladModel, require_valid

        with pytest.raises(ModelError):
            require_valid(LindbladModel.from_text([(1.0, "X"), (1.0, "Y")], [(1.0, "Z")]))


class TestConfig:
    """Tests for settings and model-file loading."""

    def test_packaged_defaults(self):
        """Test defaults.yaml loads with the documented tolerances."""
        from config import load_settings

        settings = load_settings()
        assert settings.tolerances.real_tol == 1e-10
        assert settings.limits.dense_cap_sites == 14
        assert settings.echo.steps == 400

    def test_missing_settings_file(self):
        """Test a missing settings file falls back to schema defaults."""
        from config import load_settings

        settings = load_settings(Path("/nonexistent/settings.yaml"))
        assert settings.tolerances.oracle_block == 1e-12

    def test_partial_settings_file(self):
        """Test a partial file overrides only what it names."""
        from config import load_settings

        settings = load_settings(FIXTURES / "loose_settings.yaml")
        assert settings.tolerances.real_tol == 1e-6
        assert settings.tolerances.spectrum_match == 1e-10
        assert settings.echo.steps == 50

    def test_activate_settings(self):
        """Test an activated settings object is what load_settings returns."""
        from config import activate_settings, load_settings

        custom = load_settings(FIXTURES / "loose_settings.yaml")
        activate_settings(custom)
        try:
            assert load_settings().tolerances.real_tol == 1e-6
        finally:
            activate_settings(None)
        assert load_settings().tolerances.real_tol == 1e-10

    def test_invalid_settings(self, tmp_path):
        """Test a nonpositive tolerance raises ModelError."""
        from config import load_settings

        path = tmp_path / "bad.yaml"
        path.write_text("tolerances:\n  real_tol: -1.0\n")
        with pytest.raises(ModelError):
            load_settings(path)

    def test_load_builtin_model_file(self):
        """Test a YAML file naming a builtin."""
        from config import load_model_file
        from models import from_config

        model = from_config(load_model_file(FIXTURES / "cluster_ziz_8.yaml"))
        assert model.name == "cluster_ziz"
        assert model.n_qubits == 8

    def test_load_explicit_model_file(self):
        """Test a JSON file with explicit terms."""
        from config import load_model_file
        from models import from_config

        model = from_config(load_model_file(FIXTURES / "three_qubit.json"))
        assert model.n_qubits == 3
        assert model.coefficients == [1.0, 0.7, 0.4]

    def test_model_file_length_mismatch(self, tmp_path):
        """Test Pauli strings must have n_qubits characters."""
        from config import load_model_file

        path = tmp_path / "short.yaml"
        path.write_text("n_qubits: 3\nhamiltonian:\n  - {coeff: 1.0, pauli: XX}\n")
        with pytest.raises(ModelError):
            load_model_file(path)

    def test_model_file_builtin_and_terms(self, tmp_path):
        """Test builtin and explicit terms are mutually exclusive."""
        from config import load_model_file

        path = tmp_path / "both.yaml"
        path.write_text(
            "builtin: {name: cluster_y, n: 4}\nn_qubits: 4\n"
            "hamiltonian:\n  - {coeff: 1.0, pauli: XXII}\n"
        )
        with pytest.raises(ModelError):
            load_model_file(path)

    def test_missing_model_file(self):
        """Test a missing model file raises ModelError."""
        from config import load_model_file

        with pytest.raises(ModelError):
            load_model_file(Path("/nonexistent/model.json"))


class TestTildeBasis:
    """Tests for the stabilizer-generator basis."""

    def test_cluster_layout(self):
        """Test generators sit on the bulk sites and the ends are free."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_y", 6))
        assert tilde.generator_sites == (2, 3, 4, 5)
        assert tilde.free_sites == (1, 6)
        assert tilde.is_single_generator

    def test_terms_become_single_z(self):
        """Test each Hamiltonian term maps to +-Z~ on its own site."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_ziz", 6))
        for l, (_, h) in enumerate(tilde.base.hamiltonian_terms):
            assert h.canonical() == PauliString.single(6, tilde.generator_sites[l], "Z")
            assert tilde.term_exponents[l].count(1) == 1

    def test_map_is_symplectic(self):
        """Test the constructed basis change preserves the symplectic form."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_y", 7))
        assert tilde.map.is_symplectic()
        assert tilde.inverse_map.is_symplectic()

    def test_commutation_preserved(self):
        """Test tilde images keep every pairwise commutation relation."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_y", 6))
        phys = [p for _, p in tilde.physical.hamiltonian_terms + tilde.physical.jumps]
        images = [p for _, p in tilde.base.hamiltonian_terms + tilde.base.jumps]
        for i in range(len(phys)):
            for k in range(len(phys)):
                assert anticommutes(phys[i], phys[k]) == anticommutes(images[i], images[k])

    def test_jumps_stay_hermitian(self):
        """Test jump images are Hermitian strings."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_y", 6))
        assert all(f.is_hermitian for _, f in tilde.base.jumps)

    def test_dependent_term(self):
        """Test a product of generators is detected as multi-generator."""
        from config import load_model_file
        from models import from_config, to_tilde

        tilde = to_tilde(from_config(load_model_file(FIXTURES / "three_qubit.json")))
        assert tilde.n_generators == 2
        assert not tilde.is_single_generator
        assert sorted(sum(e) for e in tilde.term_exponents) == [1, 1, 2]

    def test_site_couplings(self):
        """Test signed couplings per generator site."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_y", 5, J=0.8))
        assert set(tilde.site_couplings) == {2, 3, 4}
        assert np.allclose(np.abs(list(tilde.site_couplings.values())), 0.8)

    def test_invalid_model_rejected(self):
        """Test to_tilde refuses invalid models."""
        from models import LindbladModel, to_tilde

        with pytest.raises(ModelError):
            to_tilde(LindbladModel.from_text([(1.0, "XI"), (1.0, "ZI")], [(0.5, "ZZ")]))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
