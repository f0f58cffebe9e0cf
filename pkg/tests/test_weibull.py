import math

import numpy as np
import pytest

from fempost.weibull import (
    DegenerateFit,
    DomainError,
    ElementField,
    FailureSample,
    RankOutOfRange,
    WeibullParams,
    empirical_cdf,
    failure_probability,
    fit_three_parameter,
    hazard_map,
    load_element_fields_csv,
    max_principal_stress,
    rank_samples,
    weibull_stress,
)


def quantile_samples(true: WeibullParams, n: int):
    """Failure loads whose sigma_w values sit exactly at the plotting
    positions of the true distribution (zero sampling noise)."""
    u = (np.arange(1, n + 1) - 0.3) / (n + 0.4)
    sw = true.sigma_th + true.sigma_u * (-np.log(1 - u)) ** (1.0 / true.m)
    return rank_samples((sw - 800.0) / 10.0)


def linear_fields(lo=0.0, hi=400.0, n=81):
    """Single-element fields with sigma1 = 800 + 10 J, so sigma_w(J) is the
    same affine function for any threshold below it."""
    return [
        ElementField(J, [800.0 + 10.0 * J], [1.0])
        for J in np.linspace(lo, hi, n)
    ]


class TestMaxPrincipalStress:
    def test_diagonal(self):
        assert max_principal_stress([3.0, 2.0, 1.0, 0.0]) == pytest.approx(3.0)

    def test_pure_shear(self):
        assert max_principal_stress([0.0, 0.0, 0.0, 5.0]) == pytest.approx(5.0)

    def test_six_components(self):
        assert max_principal_stress([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]) == pytest.approx(1.0)

    def test_bad_component_count(self):
        with pytest.raises(ValueError):
            max_principal_stress([1.0, 2.0, 3.0])

    def test_against_characteristic_polynomial(self):
        # oracle: roots of det(S - lambda I) = 0 via numpy.roots
        rng = np.random.default_rng(99)
        for _ in range(500):
            s11, s22, s33, s12, s13, s23 = rng.normal(scale=100.0, size=6)
            i1 = s11 + s22 + s33
            i2 = (
                s11 * s22 + s22 * s33 + s11 * s33
                - s12**2 - s13**2 - s23**2
            )
            i3 = (
                s11 * s22 * s33
                + 2 * s12 * s13 * s23
                - s11 * s23**2 - s22 * s13**2 - s33 * s12**2
            )
            roots = np.roots([1.0, -i1, i2, -i3])
            expected = float(np.max(roots.real))
            got = max_principal_stress([s11, s22, s33, s12, s13, s23])
            assert got == pytest.approx(expected, rel=1e-10, abs=1e-8)


class TestWeibullStress:
    params = WeibullParams(1000.0, 2.0, 1200.0, 1.0)

    def test_single_element_identity(self):
        field = ElementField(1.0, [2000.0], [1.0])
        assert weibull_stress(field, self.params) == 2000.0

    def test_two_equal_elements(self):
        field = ElementField(1.0, [2000.0, 2000.0], [1.0, 1.0])
        assert weibull_stress(field, self.params) == pytest.approx(
            1000.0 + 1000.0 * math.sqrt(2.0)
        )

    def test_all_below_threshold(self):
        field = ElementField(1.0, [900.0, 500.0], [1.0, 1.0])
        assert weibull_stress(field, self.params) == self.params.sigma_th

    def test_monotone_in_stress_and_volume(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            sigma1 = rng.uniform(500.0, 3000.0, size=5)
            volume = rng.uniform(0.1, 2.0, size=5)
            base = weibull_stress(ElementField(1.0, sigma1, volume), self.params)
            i = rng.integers(5)
            up_s = sigma1.copy()
            up_s[i] += 100.0
            up_v = volume.copy()
            up_v[i] *= 2.0
            assert weibull_stress(ElementField(1.0, up_s, volume), self.params) >= base
            assert weibull_stress(ElementField(1.0, sigma1, up_v), self.params) >= base

    def test_translation_homogeneity(self):
        # sigma1 = sigma_th + c*w: the excess over threshold scales linearly in c
        rng = np.random.default_rng(2)
        w = rng.uniform(0.1, 1.0, size=8)
        v = rng.uniform(0.5, 1.5, size=8)
        p = WeibullParams(1000.0, 3.0, 1.0, 1.0)
        base = weibull_stress(ElementField(1.0, 1000.0 + 100.0 * w, v), p) - 1000.0
        for c in (2.0, 5.0):
            scaled = weibull_stress(ElementField(1.0, 1000.0 + c * 100.0 * w, v), p) - 1000.0
            assert scaled == pytest.approx(c * base, rel=1e-12)


class TestFailureProbability:
    params = WeibullParams(1000.0, 4.0, 1200.0, 1.0)

    def test_at_threshold(self):
        assert failure_probability(1000.0, self.params) == 0.0

    def test_one_scale_above_threshold(self):
        got = failure_probability(2200.0, self.params)
        assert got == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)

    def test_monotone_to_one(self):
        sw = np.linspace(1000.0, 50000.0, 200)
        pf = failure_probability(sw, self.params)
        assert np.all(np.diff(pf) >= 0)
        assert pf[-1] == pytest.approx(1.0)

    def test_below_threshold_raises(self):
        with pytest.raises(DomainError):
            failure_probability(999.0, self.params)


class TestEmpiricalCdf:
    def test_single_sample(self):
        assert empirical_cdf(1, 1) == pytest.approx(0.5)

    def test_last_of_ten(self):
        assert empirical_cdf(10, 10) == pytest.approx(9.7 / 10.4)

    def test_strictly_increasing_inside_unit_interval(self):
        values = [empirical_cdf(j, 20) for j in range(1, 21)]
        assert all(0.0 < v < 1.0 for v in values)
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_rank_out_of_range(self):
        with pytest.raises(RankOutOfRange):
            empirical_cdf(0, 5)
        with pytest.raises(RankOutOfRange):
            empirical_cdf(6, 5)
        with pytest.raises(RankOutOfRange):
            FailureSample(1.0, 7, 6)


class TestFit:
    def test_recovers_true_parameters(self):
        true = WeibullParams(1000.0, 4.0, 1200.0, 1.0)
        params, trace = fit_three_parameter(
            linear_fields(), quantile_samples(true, 200), V0=1.0
        )
        assert params.sigma_th == pytest.approx(1000.0, rel=0.05)
        assert params.m == pytest.approx(4.0, rel=0.05)
        assert params.sigma_u == pytest.approx(1200.0, rel=0.05)
        assert len(trace) >= 1

    def test_zero_threshold_case(self):
        true = WeibullParams(0.0, 4.0, 1200.0, 1.0)
        u = (np.arange(1, 201) - 0.3) / 200.4
        sw = true.sigma_u * (-np.log(1 - u)) ** (1.0 / true.m)
        fields = [ElementField(J, [10.0 * J], [1.0]) for J in np.linspace(0, 400, 81)]
        params, _ = fit_three_parameter(fields, rank_samples(sw / 10.0), V0=1.0)
        assert params.m == pytest.approx(4.0, rel=0.05)
        assert params.sigma_u == pytest.approx(1200.0, rel=0.05)

    def test_infinite_tol_one_iteration(self):
        true = WeibullParams(1000.0, 4.0, 1200.0, 1.0)
        params, trace = fit_three_parameter(
            linear_fields(), quantile_samples(true, 50), V0=1.0, tol=math.inf
        )
        assert len(trace) == 1
        assert np.isfinite([params.sigma_th, params.m, params.sigma_u]).all()

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            fit_three_parameter(linear_fields(), quantile_samples(WeibullParams(1000, 4, 1200), 2))

    def test_degenerate_sigma_w(self):
        fields = [ElementField(J, [2000.0], [1.0]) for J in (0.0, 1.0)]
        samples = rank_samples([0.2, 0.5, 0.8])
        with pytest.raises(DegenerateFit):
            fit_three_parameter(fields, samples, V0=1.0)

    def test_extrapolation_rejected(self):
        true = WeibullParams(1000.0, 4.0, 1200.0, 1.0)
        with pytest.raises(ValueError):
            fit_three_parameter(linear_fields(0.0, 50.0, 11), quantile_samples(true, 20), V0=1.0)


class TestHazardMap:
    params = WeibullParams(1000.0, 4.0, 1200.0, 1.0)

    def test_below_threshold_floored(self):
        pf, log_pf = hazard_map(ElementField(1.0, [900.0], [1.0]), self.params)
        assert pf[0] == 0.0
        assert log_pf[0] == -16.0

    def test_unit_element_at_scale(self):
        pf, _ = hazard_map(ElementField(1.0, [2200.0], [1.0]), self.params)
        assert pf[0] == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)

    def test_single_element_consistency(self):
        field = ElementField(1.0, [1800.0], [0.7])
        pf, _ = hazard_map(field, self.params)
        expected = failure_probability(weibull_stress(field, self.params), self.params)
        assert pf[0] == expected


class TestCsvIngestion:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "fields.csv"
        path.write_text(
            "load_level,element_id,sigma1,volume\n"
            "1.0,1,1500.0,0.5\n"
            "1.0,2,1600.0,0.25\n"
            "2.0,1,1800.0,0.5\n"
            "2.0,2,1900.0,0.25\n"
        )
        fields = load_element_fields_csv(path)
        assert len(fields) == 2
        assert fields[0].load_level == 1.0
        assert list(fields[1].sigma1) == [1800.0, 1900.0]
        assert list(fields[0].volume) == [0.5, 0.25]
