"""Tests for eigendecomposition, spectral statistics and the random ensemble."""
import pytest
import numpy as np
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from errors import DimensionError, ModelError, NumericalError


class TestEigendecompose:
    """Tests for the dense eigensolver wrapper."""

    def test_real_symmetric(self):
        """Test a symmetric matrix gives real eigenvalues."""
        from spectra import eigendecompose

        spec = eigendecompose(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(np.sort(spec.eigenvalues.real), [1.0, 3.0])
        assert np.all(spec.eigenvalues.imag == 0)

    def test_real_input_is_conjugation_closed(self):
        """Test real nonsymmetric input keeps conjugate pairs exact."""
        from spectra import conjugation_distance, eigendecompose

        rng = np.random.default_rng(5)
        matrix = rng.standard_normal((40, 40)).astype(complex)
        spec = eigendecompose(matrix)
        assert conjugation_distance(spec.eigenvalues) < 1e-12

    def test_vectors(self):
        """Test right eigenvectors are returned as columns."""
        from spectra import eigendecompose

        a = np.array([[0.0, 1.0], [-1.0, 0.0]])
        spec = eigendecompose(a, vectors=True)
        assert spec.eigenvectors.shape == (2, 2)
        assert np.allclose(a @ spec.eigenvectors, spec.eigenvectors * spec.eigenvalues)

    def test_non_square(self):
        """Test non-square input raises DimensionError."""
        from spectra import eigendecompose

        with pytest.raises(DimensionError):
            eigendecompose(np.zeros((2, 3)))

    def test_cap(self):
        """Test the dense cap is enforced."""
        from spectra import eigendecompose

        with pytest.raises(DimensionError):
            eigendecompose(np.eye(3), cap=2)

    def test_non_finite(self):
        """Test NaN eigenvalues are reported."""
        from spectra import ComplexSpectrum

        with pytest.raises(NumericalError):
            ComplexSpectrum(np.array([1.0, np.nan]))


class TestSpectrumFiles:
    """Tests for re,im CSV files."""

    def test_save_and_load(self, tmp_path):
        """Test a saved spectrum reloads to full precision."""
        from spectra import ComplexSpectrum, load_spectrum

        values = np.array([1 / 3 + 0.1j, -2.5 - 1e-17j, 0.0])
        path = tmp_path / "spectrum.csv"
        ComplexSpectrum(values).save_csv(path)
        assert path.read_text().startswith("re,im\n")
        assert np.array_equal(load_spectrum(path).eigenvalues, values)

    def test_headerless_file(self, tmp_path):
        """Test a file without a header row."""
        from spectra import load_spectrum

        path = tmp_path / "bare.csv"
        path.write_text("1.0,2.0\n-3.0,0.5\n")
        spec = load_spectrum(path)
        assert len(spec) == 2
        assert spec.source_tag == "bare"

    def test_wrong_columns(self, tmp_path):
        """Test three columns are rejected."""
        from spectra import load_spectrum

        path = tmp_path / "bad.csv"
        path.write_text("1,2,3\n")
        with pytest.raises(DimensionError):
            load_spectrum(path)

    def test_multiset_distance(self):
        """Test matching ignores order and detects size mismatch."""
        from spectra import multiset_distance

        assert multiset_distance([1, 2j, 3], [3, 1, 2j]) == 0
        assert np.isclose(multiset_distance([0, 1], [0, 1.5]), 0.5)
        assert multiset_distance([1], [1, 2]) == float("inf")


class TestStatistics:
    """Tests for real fraction, eccentricity and spacing ratios."""

    def test_real_fraction(self):
        """Test half of the eigenvalues are real."""
        from spectra import real_fraction

        assert real_fraction(np.array([1, 2, 1 + 1j, 1 - 1j])) == 0.5
        assert real_fraction(np.array([])) == 0.0

    def test_real_fraction_is_relative(self):
        """Test the tolerance scales with the largest modulus."""
        from spectra import real_fraction

        values = np.array([1e6, 1e6 + 1e-5j])
        assert real_fraction(values) == 1.0
        assert real_fraction(values, real_tol=1e-13) == 0.5

    def test_eccentricity(self):
        """Test the spread-based eccentricity of a cross of points."""
        from spectra import eccentricity

        values = np.array([2, -2, 1j, -1j])
        assert np.isclose(eccentricity(values), np.sqrt(0.75))

    def test_symmetric_cross_is_round(self):
        """Test equal spreads along both axes give zero, real points included."""
        from spectra import eccentricity

        assert eccentricity(np.array([1, -1, 1j, -1j])) == 0.0

    def test_exclude_real(self):
        """Test dropping the real points measures only the nonreal cloud."""
        from spectra import eccentricity

        values = np.array([3, -3, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j])
        assert np.isclose(eccentricity(values, exclude_real=True), 0.0)
        assert eccentricity(values) > 0.5

    def test_eccentricity_of_real_spectrum(self):
        """Test a spectrum on one line has no eccentricity below one."""
        from spectra import eccentricity

        with pytest.raises(NumericalError):
            eccentricity(np.array([1.0, 2.0, 3.0]))
        with pytest.raises(NumericalError):
            eccentricity(np.array([1.0, 2.0, 1j, -1j]), exclude_real=True)

    def test_ratios_inside_unit_disk(self):
        """Test |z| <= 1 for every complex ratio."""
        from spectra import spacing_ratios

        rng = np.random.default_rng(6)
        values = rng.standard_normal(200) + 1j * rng.standard_normal(200)
        complex_z, real_z, _ = spacing_ratios(values)
        assert complex_z.size > 0
        assert np.all(np.abs(complex_z) <= 1 + 1e-12)
        assert real_z.size == 0

    def test_real_line_ratios(self):
        """Test a real spectrum yields only real-line ratios."""
        from spectra import spacing_ratios

        values = np.sort(np.random.default_rng(7).uniform(size=50))
        complex_z, real_z, _ = spacing_ratios(values)
        assert complex_z.size == 0
        assert real_z.size == 50
        assert np.all((real_z >= 0) & (real_z <= 1))

    def test_too_few_values(self):
        """Test two eigenvalues cannot give a ratio."""
        from spectra import spacing_ratios

        with pytest.raises(NumericalError):
            spacing_ratios(np.array([1 + 1j, 2 - 1j]))

    def test_ellipse_filter_count(self):
        """Test the filter keeps ceil(fraction * n) points."""
        from spectra import ellipse_filter

        rng = np.random.default_rng(8)
        values = rng.standard_normal(301) + 2j * rng.standard_normal(301)
        mask, meta = ellipse_filter(values, 1 / 3)
        assert mask.sum() == int(np.ceil(301 / 3))
        assert meta["kept"] == mask.sum()
        assert meta["total"] == 301

    def test_spectrum_stats(self):
        """Test the summary carries every statistic."""
        from spectra import spectrum_stats

        rng = np.random.default_rng(9)
        values = np.concatenate([rng.standard_normal(30), rng.standard_normal(40) + 1j])
        stats = spectrum_stats(values, keep_fraction=0.5)
        assert np.isclose(stats.f_r, 30 / 70)
        assert stats.eccentricity is not None
        assert stats.to_dict()["n_eigenvalues"] == 70
        assert set(stats.filter_meta) == {"upper", "real"}


class TestBaselines:
    """Tests for Poisson and Ginibre comparisons."""

    def test_poisson_is_deterministic(self):
        """Test equal seeds give equal baselines."""
        from spectra import poisson_baseline

        first = poisson_baseline(100, samples=10, seed=3)
        assert first == poisson_baseline(100, samples=10, seed=3)
        assert first[1] > 0

    def test_poisson_dimension(self):
        """Test only 1D and 2D scatter are supported."""
        from spectra import poisson_baseline

        with pytest.raises(ValueError):
            poisson_baseline(10, dim=3)

    def test_ginibre_exceeds_poisson(self):
        """Test level repulsion pushes mean |z| above uncorrelated points."""
        from spectra import eigendecompose, poisson_baseline, spacing_ratios

        rng = np.random.default_rng(10)
        n = 1000
        matrix = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        complex_z, _, _ = spacing_ratios(eigendecompose(matrix).eigenvalues)
        baseline, _ = poisson_baseline(n // 2, samples=20, seed=0, keep_fraction=None)
        assert np.mean(np.abs(complex_z)) > baseline + 0.02


class TestEnsemble:
    """Tests for the pseudo-Hermitian ensemble."""

    def test_pseudo_hermiticity_is_exact(self):
        """Test eta A eta = A^T without tolerance."""
        from spectra import rmt_sample

        assert rmt_sample(16, 0.7, seed=3).is_pseudo_hermitian()

    def test_spin_parity(self):
        """Test eta = (-1)^popcount."""
        from spectra import spin_parity

        assert np.array_equal(spin_parity(4), [1, -1, -1, 1])
        with pytest.raises(DimensionError):
            spin_parity(6)

    def test_bad_inputs(self):
        """Test negative chi and malformed eta are rejected."""
        from spectra import rmt_sample

        with pytest.raises(ModelError):
            rmt_sample(4, -1.0, seed=0)
        with pytest.raises(DimensionError):
            rmt_sample(4, 1.0, seed=0, eta=np.array([1, 2, 1, 1]))

    def test_zero_chi_is_imaginary(self):
        """Test the purely off-diagonal ensemble has no real eigenvalues."""
        from spectra import real_fraction, rmt_sample

        sample = rmt_sample(16, 0.0, seed=1)
        assert real_fraction(np.linalg.eigvals(sample.matrix)) <= 1 / 16

    def test_real_fraction_grows_with_chi(self):
        """Test larger chi gives more real eigenvalues."""
        from spectra import ensemble_sweep

        low, high = ensemble_sweep(16, [0.0, 4.0], samples=20, seed=0)
        assert high.f_r > low.f_r
        assert high.samples == 20

    def test_sweep_is_deterministic(self):
        """Test equal seeds reproduce the sweep with and without threads."""
        from spectra import ensemble_sweep

        first = ensemble_sweep(8, [1.0], samples=5, seed=2)
        second = ensemble_sweep(8, [1.0], samples=5, seed=2, workers=3)
        assert first[0].to_dict() == second[0].to_dict()

    def test_sweep_real_fraction(self):
        """Test a family of diagonal matrices is entirely real."""
        from spectra import sweep_real_fraction

        points = sweep_real_fraction(lambda r: np.diag([1.0, 2.0, 3.0 + r]), [0.1, 0.2])
        assert [p.parameter for p in points] == [0.1, 0.2]
        assert all(p.f_r == 1.0 for p in points)
        assert all(p.eccentricity is None for p in points)


def _y_fragment_factory(n, seed):
    from effective import restrict
    from fragments import fragment_of
    from models import builtin, to_tilde
    from pauli import PauliString

    def build(ratio):
        model = to_tilde(builtin("cluster_y", n, J=1.0, kappa=ratio))
        return restrict(model, fragment_of(model, PauliString.from_text(seed)))

    return build


def _exceeds_poisson(ratios, dim, n_points, keep_fraction):
    from spectra import poisson_baseline

    magnitudes = np.abs(ratios)
    mean = float(magnitudes.mean())
    err = float(magnitudes.std(ddof=1) / np.sqrt(magnitudes.size))
    baseline, baseline_err = poisson_baseline(n_points, dim=dim, samples=50, seed=0, keep_fraction=keep_fraction)
    return mean - baseline > 3 * np.hypot(err, baseline_err)


@pytest.mark.slow
class TestYJumpFragment:
    """Tests for level statistics of a twelve-pseudospin Y-jump fragment."""

    SEED = "Y" + "X" * 12 + "I"
    KEEP = 1 / 3

    @pytest.fixture(scope="class")
    def spectrum(self):
        from spectra import eigendecompose

        gen = _y_fragment_factory(14, self.SEED)(1.0)
        assert gen.n_sites == 12
        return eigendecompose(gen.matrix).eigenvalues

    def test_conjugation_symmetric(self, spectrum):
        """Test the 4096 eigenvalues are real or in conjugate pairs."""
        from spectra import conjugation_distance

        assert spectrum.size == 4096
        assert conjugation_distance(spectrum) < 1e-8

    def test_complex_level_repulsion(self, spectrum):
        """Test nonreal spacing ratios sit further from zero than for Poisson points."""
        from spectra import spacing_ratios

        complex_z, _, _ = spacing_ratios(spectrum, keep_fraction=self.KEEP)
        per_half = int(round(complex_z.size / 2 / self.KEEP))
        assert _exceeds_poisson(complex_z, 2, per_half, self.KEEP)

    def test_real_level_repulsion(self, spectrum):
        """Test real-line spacing ratios sit further from zero than for Poisson points."""
        from spectra import spacing_ratios

        _, real_z, _ = spacing_ratios(spectrum, keep_fraction=self.KEEP)
        assert real_z.size > 0
        assert _exceeds_poisson(real_z, 1, int(round(real_z.size / self.KEEP)), self.KEEP)

    def test_real_fraction_rises_past_kappa_equal_j(self):
        """Test f_r grows from kappa = J/2 on and approaches one at strong dissipation."""
        from spectra import sweep_real_fraction

        points = sweep_real_fraction(_y_fragment_factory(14, self.SEED), [0.5, 1.0, 2.0, 5.0])
        f_r = [p.f_r for p in points]
        assert f_r == sorted(f_r)
        assert f_r[-1] > 0.5

    def test_real_fraction_monotone_for_odd_fragment(self):
        """Test f_r is monotone from weak to strong dissipation with eleven pseudospins."""
        from spectra import sweep_real_fraction

        points = sweep_real_fraction(_y_fragment_factory(13, "Y" + "X" * 11 + "I"), [0.1, 0.5, 1.0, 2.0, 5.0])
        f_r = [p.f_r for p in points]
        assert f_r == sorted(f_r)
        assert f_r[-1] > 0.5


@pytest.mark.slow
class TestEnsembleAtScale:
    """Tests for 100 ensemble samples at n = 256."""

    CHIS = [0.0, 0.5, 1.0, 2.0, 4.0]

    def test_samples_are_pseudo_hermitian_and_paired(self):
        """Test every sample has eta A eta = A^T and a conjugation-closed spectrum."""
        from spectra import conjugation_distance, eigendecompose, rmt_sample

        for chi in (0.0, 1.0, 4.0):
            for s in range(100):
                sample = rmt_sample(256, chi, seed=s)
                assert sample.is_pseudo_hermitian()
                assert conjugation_distance(eigendecompose(sample.matrix).eigenvalues) < 1e-8

    def test_real_fraction_and_eccentricity_trends(self):
        """Test f_r starts below 1/n and grows with chi while the eccentricity dips at chi = 1."""
        from spectra import ensemble_sweep

        points = ensemble_sweep(256, self.CHIS, samples=100, seed=0, workers=4)
        f_r = [p.f_r for p in points]
        assert f_r[0] <= 1 / 256
        assert f_r == sorted(f_r)
        defined = [(p.parameter, p.eccentricity) for p in points if p.eccentricity is not None]
        assert min(defined, key=lambda item: item[1])[0] == 1.0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
