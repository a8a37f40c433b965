import math

import pytest

from linnik.arithmetic import CesaroParams
from linnik.errors import DomainError
from linnik.formula import (
    TruncationSpec,
    default_truncation,
    evaluate,
    fit_loglog_slope,
    lattice_points,
    threshold_probe,
    m1_term,
    m2_term,
    m3_term,
    m4_term,
)
from linnik.specfun import gamma_ratio
from linnik.zeros import ZeroSet


class TestLatticePoints:
    def test_small_radii(self):
        assert lattice_points(0) == ()
        assert lattice_points(1) == ()
        assert lattice_points(2) == ((2, 1),)
        assert dict(lattice_points(3)) == {2: 1, 5: 2, 8: 1}

    def test_counts_match_direct_enumeration(self):
        pts = dict(lattice_points(12))
        direct = {}
        for l1 in range(1, 13):
            for l2 in range(1, 13):
                s = l1 * l1 + l2 * l2
                if s <= 144:
                    direct[s] = direct.get(s, 0) + 1
        assert pts == direct


class TestM1:
    def test_closed_form_k0(self):
        # at k = 0: pi N^2/8 + N/4 - (2/3) N^(3/2)
        got = m1_term(CesaroParams(N=100, k=0.0))
        expected = math.pi * 100**2 / 8 + 100 / 4 - (2.0 / 3.0) * 1000.0
        assert got == pytest.approx(expected, rel=1e-14)
        assert math.pi * 100**2 / 8 == pytest.approx(3926.9908169872415, rel=1e-15)

    def test_leading_term_dominance(self):
        k = 2.0
        target = math.pi / (4.0 * math.gamma(k + 3.0))
        r6 = m1_term(CesaroParams(N=10**6, k=k)) / (10**6) ** (k + 2)
        r8 = m1_term(CesaroParams(N=10**8, k=k)) / (10**8) ** (k + 2)
        assert abs(r8 - target) < abs(r6 - target)
        assert r8 == pytest.approx(target, rel=1e-3)

    def test_requires_k_above_minus_one(self):
        with pytest.raises(DomainError):
            m1_term(CesaroParams(N=100, k=-1.5))


@pytest.fixture(scope="module")
def spec50(zeros100):
    return default_truncation(CesaroParams(N=1000, k=2.0), zeros100)


class TestM2:
    def test_empty_zero_sum(self, zeros100):
        spec = TruncationSpec(Z=0, L=3, M=3, tol=1.0)
        assert m2_term(CesaroParams(N=1000, k=2.0), zeros100, spec).value == 0.0

    def test_magnitude_bound_from_gamma_ratios(self, zeros100, spec50):
        N, k = 1000.0, 2.0
        t = m2_term(CesaroParams(N=1000, k=k), zeros100, spec50)
        ratio_sum = sum(
            abs(gamma_ratio(z.rho, k + 1.5)) for z in zeros100.zeros[:50]
        )
        assert abs(t.value) <= 3.0 * N ** (k + 1.5) * ratio_sum

    def test_subcritical_flagged(self, zeros100, spec50):
        t = m2_term(CesaroParams(N=100, k=0.4), zeros100, spec50)
        assert any("k > 1/2" in note for note in t.notes)

    def test_block_assembly(self, zeros100, spec50):
        t = m2_term(CesaroParams(N=500, k=2.0), zeros100, spec50)
        c = t.components
        recon = (
            -(math.pi / 4.0) * c["block1"]
            - 0.25 * c["block2"]
            + 0.5 * math.sqrt(math.pi) * c["block3"]
        )
        assert t.value == recon


class TestM3:
    def test_empty_lattice(self, zeros100):
        spec = TruncationSpec(Z=50, L=0, M=3, tol=1.0)
        assert m3_term(CesaroParams(N=100, k=2.0), zeros100, spec).value == 0.0

    def test_first_lattice_term_against_oracle_value(self, zeros100):
        # L = 2 keeps only (1,1); Z = 0 removes the zero part. The expected
        # value is (N^2/pi^3) * J_4(2 pi sqrt(2) sqrt(N)) / 2^2 with the
        # Bessel factor frozen from the 200-bit contour oracle.
        spec = TruncationSpec(Z=0, L=2, M=3, tol=1.0)
        got = m3_term(CesaroParams(N=100, k=2.0), zeros100, spec)
        assert got.value == pytest.approx(6.696964005506506, rel=1e-9)
        assert got.components["zeros"] == 0.0

    def test_sign_split(self, zeros100, spec50):
        t = m3_term(CesaroParams(N=500, k=2.0), zeros100, spec50)
        assert t.value == t.components["lattice"] - t.components["zeros"]
        assert set(t.tail_bounds) == {"lattice", "zeros"}
        assert all(v >= 0.0 for v in t.tail_bounds.values())


class TestM4:
    def test_empty_m_sum(self, zeros100):
        spec = TruncationSpec(Z=50, L=3, M=0, tol=1.0)
        assert m4_term(CesaroParams(N=100, k=2.0), zeros100, spec).value == 0.0

    def test_first_block_against_oracle_value(self, zeros100):
        # m = 1 only, zero blocks off: block1 = (N^2/pi^3) * J_4(2 pi sqrt(N));
        # J_4(20 pi) frozen from the contour oracle
        spec = TruncationSpec(Z=0, L=3, M=1, tol=1.0)
        t = m4_term(CesaroParams(N=100, k=2.0), zeros100, spec)
        assert t.components["block1"] == pytest.approx(25.671096501266785, rel=1e-9)

    def test_sign_pattern(self, zeros100, spec50):
        t = m4_term(CesaroParams(N=500, k=2.0), zeros100, spec50)
        c = t.components
        assert t.value == c["block1"] - c["block2"] - c["block3"] + c["block4"]

    def test_diagnostic_variant_of_block4(self, zeros100):
        spec = TruncationSpec(Z=10, L=3, M=2, tol=1.0)
        t = m4_term(CesaroParams(N=200, k=2.0), zeros100, spec, diagnostics=True)
        assert "m4_block4_full_power_variant" in t.extras
        alt = t.extras["m4_block4_full_power_variant"]
        assert alt != t.components["block4"]


class TestEvaluate:
    def test_theorem_range_gate(self, zeros100):
        with pytest.raises(DomainError):
            evaluate(CesaroParams(N=100, k=1.2), zeros100)
        rep = evaluate(
            CesaroParams(N=100, k=1.2),
            zeros100,
            TruncationSpec(Z=10, L=3, M=2, tol=1.0),
            allow_subcritical=True,
        )
        assert any("subcritical" in n for n in rep.notes)

    def test_N4_lhs_vanishes_report_well_formed(self, zeros100):
        spec = TruncationSpec(Z=10, L=2, M=1, tol=1.0)
        rep = evaluate(CesaroParams(N=4, k=2.0), zeros100, spec)
        assert rep.lhs == 0.0
        assert rep.total == rep.m1 + rep.m2 + rep.m3 + rep.m4
        assert rep.residual == rep.lhs - rep.total
        assert math.isfinite(rep.normalized_residual)
        assert set(rep.tail_bounds) == {"m2", "m3", "m4"}

    def test_bitwise_deterministic(self, zeros100):
        spec = TruncationSpec(Z=20, L=3, M=2, tol=1.0)
        a = evaluate(CesaroParams(N=300, k=2.0), zeros100, spec)
        b = evaluate(CesaroParams(N=300, k=2.0), zeros100, spec)
        c = evaluate(CesaroParams(N=300, k=2.0), zeros100, spec, threads=4)
        for x, y in ((a, b), (a, c)):
            assert (x.lhs, x.m1, x.m2, x.m3, x.m4, x.residual) == (
                y.lhs,
                y.m1,
                y.m2,
                y.m3,
                y.m4,
                y.residual,
            )

    def test_magnitude_hierarchy(self, grid_runs):
        for N, (_spec, rep) in grid_runs.items():
            assert rep.m1 > 0.0
            assert abs(rep.m2) + abs(rep.m3) + abs(rep.m4) < 0.05 * rep.m1

    def test_subterm_error_carries_term_identification(self, zeros100):
        from linnik.errors import PrecisionError
        from linnik.specfun import PrecisionConfig

        # forcing the asymptotic strategy makes the complex-order Bessel
        # evaluations in m3 uncertifiable at this argument
        cfg = PrecisionConfig(strategy_override="asymptotic")
        spec = TruncationSpec(Z=5, L=2, M=1, tol=1.0)
        with pytest.raises(PrecisionError) as exc:
            evaluate(CesaroParams(N=100, k=2.0), zeros100, spec, cfg=cfg)
        assert str(exc.value).startswith("m3:")


class TestLemma5Probe:
    def test_empty_zero_set(self):
        empty = ZeroSet(())
        series = threshold_probe(2, 1.75, 100, empty)
        assert series.partial_sums == ()

    def test_partial_sums_nonnegative_nondecreasing(self, zeros100):
        series = threshold_probe(2, 1.75, 100, zeros100.truncated(30))
        ps = series.partial_sums
        assert len(ps) == 30
        assert all(p >= 0.0 for p in ps)
        assert all(b >= a for a, b in zip(ps, ps[1:]))

    def test_divergent_grows_faster_than_convergent(self, zeros100):
        zs = zeros100.truncated(50)
        conv = threshold_probe(2, 1.75, 100, zs).partial_sums
        div = threshold_probe(2, 1.0, 100, zs).partial_sums
        assert div[49] / div[24] > conv[49] / conv[24]

    def test_dimension_validation(self, zeros100):
        with pytest.raises(DomainError):
            threshold_probe(4, 2.0, 100, zeros100.truncated(5))
        with pytest.raises(DomainError):
            threshold_probe(2, -1.0, 100, zeros100.truncated(5))


class TestScalingFit:
    def test_synthetic_cubic(self):
        ns = [500, 1000, 2000, 4000]
        slope, excluded = fit_loglog_slope(ns, [0.7 * n**3 for n in ns])
        assert slope == pytest.approx(3.0, abs=1e-6)
        assert excluded == ()

    def test_zero_rows_excluded(self):
        ns = [10, 20, 40, 80]
        slope, excluded = fit_loglog_slope(ns, [0.0, 8e3, 6.4e4, 5.12e5])
        assert excluded == (10,)
        assert slope == pytest.approx(3.0, abs=1e-9)

    def test_needs_two_points(self):
        with pytest.raises(DomainError):
            fit_loglog_slope([10, 20], [0.0, 5.0])


class TestDefaultTruncation:
    def test_fifty_zeros_and_floors(self, zeros100):
        spec = default_truncation(CesaroParams(N=1000, k=2.0), zeros100)
        assert spec.Z == 50
        assert spec.L >= 3
        assert spec.M >= 3
        assert spec.tol == pytest.approx(1e-6 * 1000.0**3)

    def test_tolerance_tightens_cutoffs(self, zeros100):
        params = CesaroParams(N=1000, k=2.0)
        loose = default_truncation(params, zeros100)
        tight = default_truncation(params, zeros100, tol=loose.tol * 1e-4)
        assert tight.L >= loose.L
        assert tight.M >= loose.M
        assert tight.L > 3 or tight.M > 3

    def test_doubling_helper(self, zeros100):
        spec = default_truncation(CesaroParams(N=500, k=2.0), zeros100)
        assert spec.doubled("Z").Z == 2 * spec.Z
        assert spec.doubled("L").L == 2 * spec.L
        assert spec.doubled("M").M == 2 * spec.M
        with pytest.raises(ValueError):
            spec.doubled("Q")
