"""Tests for bit-packed Pauli strings and symplectic maps."""
import pytest
import numpy as np
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from errors import DimensionError, ModelError
from pauli import (
    PauliString, SymplecticMap, anticommutes, conjugation_sign, commutator_action,
    gf2_inverse, gf2_rank, iter_strings, multiply, string_index, symplectic_product
)


def _random_string(rng, n):
    labels = "".join(rng.choice(list("IXYZ"), size=n))
    return PauliString.from_text(labels).with_phase(int(rng.integers(4)))


class TestPauliStringText:
    """Tests for parsing and rendering."""

    def test_parse_phase_prefixes(self):
        """Test +, -, +i and -i prefixes set the phase exponent."""
        assert PauliString.from_text("XYZ").phase == 0
        assert PauliString.from_text("+iXYZ").phase == 1
        assert PauliString.from_text("-XYZ").phase == 2
        assert PauliString.from_text("-iXYZ").phase == 3

    def test_render_round_trip(self):
        """Test to_text reproduces the parsed text."""
        for text in ["IXYZ", "-ZZ", "+iY", "-iXIZ"]:
            assert PauliString.from_text(text).to_text() == text

    def test_whitespace_is_ignored(self):
        """Test grouped seeds parse to one string."""
        p = PauliString.from_text("ZXY I XYXY")
        assert p.n_qubits == 8
        assert p.labels() == "ZXYIXYXY"

    def test_site_order(self):
        """Test character i is site i+1."""
        p = PauliString.from_text("XIZ")
        assert p.label(1) == "X"
        assert p.label(3) == "Z"
        assert p.support == (1, 3)
        assert p.weight == 2

    def test_invalid_characters(self):
        """Test unknown characters raise ModelError."""
        with pytest.raises(ModelError):
            PauliString.from_text("XAZ")

    def test_empty_string(self):
        """Test an empty body raises ModelError."""
        with pytest.raises(ModelError):
            PauliString.from_text("-i")

    def test_single_out_of_range(self):
        """Test single-site construction checks the site."""
        with pytest.raises(DimensionError):
            PauliString.single(3, 4, "X")

    def test_hermiticity(self):
        """Test only real phases are Hermitian."""
        assert PauliString.from_text("-XY").is_hermitian
        assert not PauliString.from_text("iXY").is_hermitian


class TestPauliAlgebra:
    """Tests for products and commutation."""

    def test_y_convention(self):
        """Test Y = iXZ."""
        x = PauliString.from_text("X")
        z = PauliString.from_text("Z")
        assert multiply(x, z) == PauliString.from_text("-iY")
        assert multiply(z, x) == PauliString.from_text("iY")

    def test_multiply_matches_dense(self):
        """Test the packed product equals the matrix product."""
        rng = np.random.default_rng(11)
        for _ in range(30):
            a, b = _random_string(rng, 3), _random_string(rng, 3)
            assert np.allclose(multiply(a, b).to_dense(), a.to_dense() @ b.to_dense())

    def test_symplectic_product_matches_dense(self):
        """Test anticommutation agrees with the dense commutator."""
        rng = np.random.default_rng(12)
        for _ in range(30):
            a, b = _random_string(rng, 3), _random_string(rng, 3)
            da, db = a.to_dense(), b.to_dense()
            commute = np.allclose(da @ db, db @ da)
            assert anticommutes(a, b) == (not commute)

    def test_symplectic_product_bilinear(self):
        """Test the form is additive in each argument."""
        rng = np.random.default_rng(13)
        for _ in range(30):
            a, b, c = (_random_string(rng, 4) for _ in range(3))
            left = symplectic_product(multiply(a, b), c)
            assert left == (symplectic_product(a, c) + symplectic_product(b, c)) % 2

    def test_conjugation_sign(self):
        """Test f m f = +-m."""
        f = PauliString.from_text("YI")
        assert conjugation_sign(f, PauliString.from_text("XZ")) == -1
        assert conjugation_sign(f, PauliString.from_text("YZ")) == 1

    def test_conjugation_sign_rejects_non_hermitian(self):
        """Test a non-Hermitian conjugating string raises ModelError."""
        with pytest.raises(ModelError):
            conjugation_sign(PauliString.from_text("iX"), PauliString.from_text("Z"))

    def test_commutator_action(self):
        """Test commuting strings give None."""
        h = PauliString.from_text("ZXZ")
        assert commutator_action(h, PauliString.from_text("IXI")) is None
        assert commutator_action(h, PauliString.from_text("IZI")) == multiply(h, PauliString.from_text("IZI"))

    def test_size_mismatch(self):
        """Test strings of different length cannot be combined."""
        with pytest.raises(DimensionError):
            multiply(PauliString.from_text("XX"), PauliString.from_text("X"))


class TestEnumeration:
    """Tests for the lexicographic basis."""

    def test_order(self):
        """Test I<X<Y<Z with site 1 most significant."""
        labels = [p.labels() for p in iter_strings(2)]
        assert len(labels) == 16
        assert labels[:5] == ["II", "IX", "IY", "IZ", "XI"]
        assert labels[-1] == "ZZ"

    def test_string_index_inverts_order(self):
        """Test string_index gives the enumeration position."""
        for i, p in enumerate(iter_strings(3)):
            assert string_index(p) == i


class TestSymplectic:
    """Tests for GF(2) helpers and symplectic maps."""

    def test_gf2_rank(self):
        """Test rank of a dependent set."""
        rows = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]], dtype=np.uint8)
        assert gf2_rank(rows) == 2

    def test_gf2_inverse(self):
        """Test inverse over GF(2)."""
        m = np.array([[1, 1], [0, 1]], dtype=np.uint8)
        inv = gf2_inverse(m)
        assert np.array_equal((m.astype(int) @ inv.astype(int)) % 2, np.eye(2, dtype=int))

    def test_identity_map(self):
        """Test the identity map is symplectic and fixes strings."""
        ident = SymplecticMap.identity(3)
        assert ident.is_symplectic()
        p = PauliString.from_text("-XYZ")
        assert ident.apply(p) == p

    def test_inverse_round_trip(self):
        """Test a map composed with its inverse fixes strings with their phase."""
        from models import builtin, to_tilde

        tilde = to_tilde(builtin("cluster_y", 5))
        rng = np.random.default_rng(14)
        for _ in range(20):
            p = _random_string(rng, 5)
            assert tilde.to_physical(tilde.to_tilde_string(p)) == p


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
