import math

import numpy as np
import pytest

import meanlab.means as M
from meanlab.errors import DegeneratePairError, DomainError
from meanlab.means import MeanKind, PositivePair

import oracles


def _rel(a, b):
    return abs(a - b) / abs(b)


class TestClosedForms:
    def test_basic_means_at_4_1(self):
        assert M.arithmetic(4, 1) == 2.5
        assert M.geometric(4, 1) == 2.0
        assert M.harmonic(4, 1) == pytest.approx(1.6, rel=1e-15)

    def test_oracle_values_at_4_1(self):
        assert _rel(M.logarithmic(4, 1), oracles.L_4_1) < 1e-15
        assert _rel(M.identric(4, 1), oracles.I_4_1) < 1e-15
        assert _rel(M.seiffert(4, 1), oracles.P_4_1) < 1e-15
        assert _rel(M.x_mean(4, 1), oracles.X_4_1) < 1e-15
        assert _rel(M.y_mean(4, 1), oracles.Y_4_1) < 1e-15
        assert _rel(M.heronian_mean(4, 1, 0.5), oracles.HERONIAN_HALF_4_1) < 1e-14

    def test_e_1_closed_forms(self):
        assert _rel(M.logarithmic(math.e, 1), math.e - 1) < 1e-15
        assert _rel(M.identric(math.e, 1), oracles.IDENTRIC_E_1) < 1e-15

    def test_power_mean_examples(self):
        assert M.power_mean(4, 1, 0.5) == pytest.approx(2.25, rel=1e-14)
        assert M.power_mean(4, 1, 1.0) == pytest.approx(2.5, rel=1e-14)
        assert M.power_mean(4, 1, 0.0) == pytest.approx(2.0, rel=1e-15)
        assert M.power_mean(4, 1, -1.0) == pytest.approx(1.6, rel=1e-14)

    def test_heronian_examples(self):
        assert M.heronian_mean(4, 1, 1.0) == pytest.approx(7.0 / 3.0, rel=1e-14)
        assert M.heronian_mean(9, 9, 2.7) == 9.0

    def test_diagonal_is_exact(self):
        for f in (
            M.arithmetic,
            M.geometric,
            M.harmonic,
            M.logarithmic,
            M.identric,
            M.seiffert,
            M.x_mean,
            M.y_mean,
        ):
            assert f(3.7, 3.7) == 3.7
        assert M.power_mean(3.7, 3.7, 0.41) == 3.7
        assert M.heronian_mean(3.7, 3.7, -1.3) == 3.7

    def test_bounds_at_4_1(self):
        # X sits between G and P, Y between H and G
        g, x, p = M.geometric(4, 1), M.x_mean(4, 1), M.seiffert(4, 1)
        assert g < x < p
        h, y = M.harmonic(4, 1), M.y_mean(4, 1)
        assert h < y < g

    def test_domain_errors(self):
        for bad in ((0.0, 1.0), (-2.0, 3.0), (math.nan, 1.0), (math.inf, 1.0)):
            with pytest.raises(DomainError):
                M.arithmetic(*bad)
            with pytest.raises(DomainError):
                M.x_mean(*bad)
        with pytest.raises(DomainError):
            M.power_mean(2, 3, math.inf)
        with pytest.raises(DomainError):
            M.heronian_mean(2, 3, math.nan)


class TestAgainstMpmathOracle:
    def test_random_pairs_all_means(self):
        rng = np.random.default_rng(7)
        bs = np.exp(rng.uniform(math.log(1e-4), math.log(1e4), 25))
        rs = np.exp(rng.uniform(math.log(1.0 + 1e-7), math.log(1e7), 25))
        fns = {
            "A": M.arithmetic,
            "G": M.geometric,
            "H": M.harmonic,
            "L": M.logarithmic,
            "I": M.identric,
            "P": M.seiffert,
            "X": M.x_mean,
            "Y": M.y_mean,
        }
        for b, r in zip(bs, rs):
            a = b * r
            ref = oracles.mp_means(a, b)
            for tag, fn in fns.items():
                assert _rel(fn(a, b), float(ref[tag])) < 5e-14, (tag, a, b)

    def test_power_type_means_vs_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            b = float(np.exp(rng.uniform(-5, 5)))
            a = b * float(np.exp(rng.uniform(1e-6, 8)))
            p = float(rng.uniform(-3, 3))
            assert _rel(M.power_mean(a, b, p), float(oracles.mp_power_mean(a, b, p))) < 5e-14
            assert _rel(M.heronian_mean(a, b, p), float(oracles.mp_heronian(a, b, p))) < 5e-14


def _random_pairs(n, seed, ratio_lo=1.0 + 1e-9, ratio_hi=1e8):
    rng = np.random.default_rng(seed)
    b = np.exp(rng.uniform(math.log(1e-6), math.log(1e6), n))
    r = np.exp(rng.uniform(math.log(ratio_lo), math.log(ratio_hi), n))
    return b * r, b


_ALL_KERNELS = [
    M.arithmetic,
    M.geometric,
    M.harmonic,
    M.logarithmic,
    M.identric,
    M.seiffert,
    M.x_mean,
    M.y_mean,
]


class TestAlgebraicProperties:
    def test_symmetry(self):
        a, b = _random_pairs(10_000, 11)
        for f in _ALL_KERNELS:
            lhs, rhs = f(a, b), f(b, a)
            assert np.all(np.abs(lhs - rhs) <= 1e-15 * np.abs(rhs))
        for p in (-1.5, 0.0, 0.37, 2.0):
            assert np.all(M.power_mean(a, b, p) == M.power_mean(b, a, p))
            assert np.all(M.heronian_mean(a, b, p) == M.heronian_mean(b, a, p))

    @pytest.mark.parametrize("lam", [1e-6, 1.0, 1e6])
    def test_homogeneity(self, lam):
        a, b = _random_pairs(10_000, 12)
        for f in _ALL_KERNELS:
            base = f(a, b)
            scaled = f(lam * a, lam * b)
            assert np.all(np.abs(scaled - lam * base) <= 1e-13 * lam * base)
        for p in (0.5, -2.0):
            base = M.power_mean(a, b, p)
            assert np.all(np.abs(M.power_mean(lam * a, lam * b, p) - lam * base) <= 1e-13 * lam * base)

    def test_mean_property(self):
        a, b = _random_pairs(10_000, 13)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        for f in _ALL_KERNELS:
            v = f(a, b)
            assert np.all(v > lo) and np.all(v < hi)
        for p in (0.3, -1.0):
            v = M.power_mean(a, b, p)
            assert np.all(v > lo) and np.all(v < hi)
            v = M.heronian_mean(a, b, p)
            assert np.all(v > lo) and np.all(v < hi)

    def test_classical_ordering(self):
        # H <= G <= L <= P <= I <= A, strict off the diagonal.  P and I agree
        # to t^4/90, so strictness is only resolvable in doubles for t above
        # ~0.012; below that allow a one-ulp tie.
        a, b = _random_pairs(10_000, 14, ratio_lo=1.05)
        h, g, l = M.harmonic(a, b), M.geometric(a, b), M.logarithmic(a, b)
        p, i, am = M.seiffert(a, b), M.identric(a, b), M.arithmetic(a, b)
        for lo_v, hi_v in ((h, g), (g, l), (l, p), (p, i), (i, am)):
            assert np.all(lo_v < hi_v)
        a, b = _random_pairs(10_000, 15, ratio_lo=1.0 + 1e-9, ratio_hi=1.05)
        vals = [
            M.harmonic(a, b),
            M.geometric(a, b),
            M.logarithmic(a, b),
            M.seiffert(a, b),
            M.identric(a, b),
            M.arithmetic(a, b),
        ]
        for lo_v, hi_v in zip(vals, vals[1:]):
            assert np.all(lo_v <= hi_v * (1.0 + 1e-15))

    def test_power_mean_monotone_in_exponent(self):
        rng = np.random.default_rng(15)
        a, b = _random_pairs(10_000, 16, ratio_lo=1.001)
        p = rng.uniform(-3.0, 2.9, 10_000)
        q = p + rng.uniform(0.05, 1.0, 10_000)
        assert np.all(M.power_mean(a, b, p) < M.power_mean(a, b, q))
        assert np.all(M.heronian_mean(a, b, p) < M.heronian_mean(a, b, q))

    def test_continuity_at_diagonal(self):
        # every mean here has first-order expansion 1 + h/2 at (1 + h, 1)
        for h in (1e-4, 1e-5, 1e-6):
            for f in _ALL_KERNELS:
                err = abs(f(1.0 + h, 1.0) - 1.0 - h / 2.0)
                assert err <= 0.3 * h * h, (f.__name__, h, err)


class TestDualRoutes:
    def _pairs_with_tiny_band(self):
        a1, b1 = _random_pairs(900, 21)
        rng = np.random.default_rng(22)
        b2 = np.exp(rng.uniform(math.log(1e-6), math.log(1e6), 100))
        u = np.exp(rng.uniform(math.log(1e-9), math.log(2e-5), 100))
        a2 = b2 * (1.0 + u)
        a = np.concatenate([a1, a2])
        b = np.concatenate([b1, b2])
        t = np.abs(a - b) / (a + b)
        assert int(np.sum(t < 1e-5)) >= 100
        return a, b

    @pytest.mark.parametrize(
        "direct,param",
        [
            (M.logarithmic_direct, M.logarithmic_param),
            (M.seiffert_direct, M.seiffert_param),
            (M.x_mean_direct, M.x_mean_param),
            (M.identric_direct, M.identric_param),
        ],
    )
    def test_routes_agree(self, direct, param):
        a, b = self._pairs_with_tiny_band()
        v1, v2 = direct(a, b), param(a, b)
        assert np.all(np.abs(v1 - v2) <= 1e-12 * np.abs(v2))

    def test_primary_matches_both_routes(self):
        a, b = self._pairs_with_tiny_band()
        assert np.all(np.abs(M.logarithmic(a, b) - M.logarithmic_direct(a, b)) <= 1e-12 * M.logarithmic(a, b))
        assert np.all(np.abs(M.x_mean(a, b) - M.x_mean_direct(a, b)) <= 1e-12 * M.x_mean(a, b))


class TestParamPoint:
    def test_values_at_4_1(self):
        pt = M.param_point(PositivePair(4.0, 1.0))
        assert _rel(pt.x, oracles.PARAM_X_4_1) < 1e-15
        assert _rel(pt.y, oracles.PARAM_Y_4_1) < 1e-15

    def test_roundtrip_identities(self):
        # cos(x) carries absolute error ~eps near pi/2, so the relative
        # identity is testable at 1e-14 for ratios up to ~10^3
        rng = np.random.default_rng(23)
        for _ in range(200):
            b = float(np.exp(rng.uniform(-6, 6)))
            a = b * float(np.exp(rng.uniform(1e-8, math.log(1000.0))))
            pt = M.param_point(PositivePair(a, b))
            g_over_a = M.geometric(a, b) / M.arithmetic(a, b)
            assert _rel(math.cos(pt.x), g_over_a) < 1e-14
            assert _rel(math.cosh(pt.y), 1.0 / g_over_a) < 1e-14

    def test_first_order_near_diagonal(self):
        eps = 1e-9
        pt = M.param_point(PositivePair(1.0 + eps, 1.0))
        assert pt.x == pytest.approx(eps / 2, rel=1e-6)
        assert pt.y == pytest.approx(eps / 2, rel=1e-6)

    def test_degenerate_pair(self):
        with pytest.raises(DegeneratePairError):
            M.param_point(PositivePair(2.0, 2.0))

    def test_pair_validation(self):
        with pytest.raises(DomainError):
            PositivePair(0.0, 1.0)
        with pytest.raises(DomainError):
            PositivePair(1.0, -3.0)
        with pytest.raises(DomainError):
            PositivePair(math.inf, 1.0)
        assert abs(PositivePair(4.0, 1.0).t - 0.6) < 1e-16
        assert abs(PositivePair(1.0, 4.0).t + 0.6) < 1e-16


class TestTypedFacade:
    def test_mean_kind_validation(self):
        with pytest.raises(DomainError):
            MeanKind("Z")
        with pytest.raises(DomainError):
            MeanKind("A", exponent=2.0)
        with pytest.raises(DomainError):
            MeanKind("Mp")
        with pytest.raises(DomainError):
            MeanKind.power(math.inf)
        assert MeanKind.power(0.5).label() == "Mp[0.5]"
        assert MeanKind("P").label() == "P"

    def test_eval_mean_dispatch(self):
        pair = PositivePair(4.0, 1.0)
        assert M.eval_mean(MeanKind("A"), pair) == 2.5
        assert _rel(M.eval_mean(MeanKind("X"), pair), oracles.X_4_1) < 1e-15
        assert M.eval_mean(MeanKind.power(0.5), pair) == pytest.approx(2.25, rel=1e-14)
        assert _rel(M.eval_mean(MeanKind.heronian(0.5), pair), oracles.HERONIAN_HALF_4_1) < 1e-14

    def test_eval_all_vector(self):
        pair = PositivePair(4.0, 1.0)
        v = M.eval_all(pair)
        assert v.as_dict() == {
            "A": M.arithmetic(4, 1),
            "G": M.geometric(4, 1),
            "H": M.harmonic(4, 1),
            "L": M.logarithmic(4, 1),
            "I": M.identric(4, 1),
            "P": M.seiffert(4, 1),
            "X": M.x_mean(4, 1),
            "Y": M.y_mean(4, 1),
        }
        assert v.point is not None
        ordering = [v.harmonic, v.geometric, v.logarithmic, v.seiffert, v.identric, v.arithmetic]
        assert all(x < y for x, y in zip(ordering, ordering[1:]))
        lo, hi = min(pair.a, pair.b), max(pair.a, pair.b)
        assert all(lo <= val <= hi for val in v.as_dict().values())

    def test_eval_all_diagonal(self):
        v = M.eval_all(PositivePair(5.5, 5.5))
        assert v.point is None
        assert set(v.as_dict().values()) == {5.5}
