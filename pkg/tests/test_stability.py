import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from reccost import (
    LOG_LINE,
    DomainError,
    FamilySpec,
    PreconditionError,
    analytic,
    certify,
    certify_ratio,
    delta_of_h,
    estimate_bounds,
    lift_to_log,
    make_family,
    optimal_h,
    perturb,
    sample_table,
    sup_defect,
)
from reccost.stability import ENVELOPE_COSH_BRANCH, ENVELOPE_DELTA_TIMES_J, certificate_sweep

COSH_LOG = make_family(FamilySpec("cosh-lambda"), domain=LOG_LINE)


class TestEstimateBounds:
    def test_cosh(self):
        B, K = estimate_bounds(COSH_LOG, 2.0)
        assert abs(B - math.cosh(2.0)) <= 1e-12
        assert abs(K - math.sinh(2.0)) <= 1e-12

    def test_constant_one(self):
        B, K = estimate_bounds(make_family(FamilySpec("constant-one")), 5.0)
        assert (B, K) == (1.0, 0.0)

    def test_cos_on_pi(self):
        B, K = estimate_bounds(make_family(FamilySpec("cos-k", {"k": 1.0})), math.pi)
        assert abs(B - 1.0) <= 1e-9
        assert abs(K - 1.0) <= 1e-6

    def test_table_fallback_third_difference(self):
        ts = np.linspace(-2.2, 2.2, 441)
        h = sample_table(LOG_LINE, ts, np.cosh(ts))
        B, K = estimate_bounds(h, 2.0)
        assert abs(B - math.cosh(2.0)) <= 1e-6
        assert abs(K - math.sinh(2.0)) <= 0.1 * math.sinh(2.0)

    def test_coarse_table_warns(self):
        ts = np.linspace(-2.5, 2.5, 21)
        h = sample_table(LOG_LINE, ts, np.cosh(ts))
        with pytest.warns(UserWarning):
            estimate_bounds(h, 2.0)


class TestDeltaOfH:
    def test_formula_values(self):
        assert abs(delta_of_h(0.0, 1.0, 3.0, 0.1) - 0.2) <= 1e-15
        assert abs(delta_of_h(0.01, 1.0, 3.0, 0.1) - 1.2) <= 1e-14
        assert delta_of_h(0.0, 123.0, 0.0, 0.5) == 0.0

    def test_validation(self):
        with pytest.raises(DomainError):
            delta_of_h(0.0, 1.0, 3.0, 0.0)
        with pytest.raises(DomainError):
            delta_of_h(-1.0, 1.0, 3.0, 0.1)


class TestOptimalH:
    def test_interior_stationary_point(self):
        assert abs(optimal_h(1e-6, 1.0, 3.0, 2.0) - 0.01) <= 1e-15

    def test_zero_defect_policy_floor(self):
        assert optimal_h(0.0, 1.0, 3.0, 2.0) == 0.02

    def test_clamped_at_window(self):
        assert optimal_h(1e3, 1.0, 3.0, 2.0) == 2.0

    def test_zero_third_derivative(self):
        assert optimal_h(1.0, 1.0, 0.0, 2.0) == 2.0

    @pytest.mark.parametrize("eps,B,K,T", [(1e-6, 1.0, 3.0, 2.0), (1e-3, 3.0, 2.0, 1.5)])
    def test_matches_numerical_minimizer(self, eps, B, K, T):
        h_star = optimal_h(eps, B, K, T)
        res = minimize_scalar(
            lambda h: delta_of_h(eps, B, K, h),
            bounds=(1e-6, T),
            method="bounded",
            options={"xatol": 1e-12},
        )
        assert abs(h_star - res.x) <= 1e-6 * h_star

    def test_delta_convexity_at_stationary_point(self):
        eps, B, K, T = 1e-6, 1.0, 3.0, 2.0
        h_star = optimal_h(eps, B, K, T)
        d_star = delta_of_h(eps, B, K, h_star)
        assert d_star <= delta_of_h(eps, B, K, 0.5 * h_star) + 1e-12 * d_star
        assert d_star <= delta_of_h(eps, B, K, 2.0 * h_star) + 1e-12 * d_star

    def test_validation(self):
        with pytest.raises(DomainError):
            optimal_h(1e-6, 1.0, 3.0, 0.0)


class TestCertify:
    def test_exact_solution(self):
        cert = certify(COSH_LOG, 2.0, 0.05)
        assert cert.verified
        assert cert.max_observed_error <= 1e-10
        assert cert.max_envelope_margin >= 0.0
        assert cert.envelope.form == ENVELOPE_COSH_BRANCH

    def test_family_member(self):
        h = make_family(FamilySpec("cosh-lambda", {"lambda": 1.5}), domain=LOG_LINE)
        cert = certify(h, 2.0, 0.05)
        assert cert.verified
        assert abs(cert.inputs.a - 2.25) <= 1e-8
        assert cert.max_observed_error <= 1e-9 * math.cosh(1.5 * 2.0)

    @pytest.mark.parametrize("eta", [1e-4, 1e-3])
    def test_perturbed_envelope_dominates(self, eta):
        pert = perturb(COSH_LOG, "poly4", eta)
        cert = certify(pert, 1.0, 0.02)
        assert cert.verified
        assert cert.max_envelope_margin >= 0.0
        assert cert.inputs.epsilon > 0.0

    def test_user_h_choice_respected(self):
        cert = certify(COSH_LOG, 2.0, 0.05, h_choice=0.5)
        assert cert.inputs.h == 0.5
        assert cert.verified
        with pytest.raises(DomainError):
            certify(COSH_LOG, 2.0, 0.05, h_choice=2.5)

    def test_curvature_override_changes_branch(self):
        cert = certify(COSH_LOG, 2.0, 0.05, a=4.0)
        assert not cert.verified  # certifying cosh against cosh(2t) must fail

    def test_not_even_rejected(self):
        odd = analytic(
            LOG_LINE, "cosh+odd",
            (lambda t: np.cosh(t) + 1e-3 * t**3,), support=(-700.0, 700.0),
        )
        with pytest.raises(PreconditionError):
            certify(odd, 2.0, 0.05)

    def test_wrong_normalization_rejected(self):
        z = make_family(FamilySpec("zero"))
        with pytest.raises(PreconditionError):
            certify(z, 2.0, 0.05)

    def test_negative_curvature_rejected(self):
        h = make_family(FamilySpec("cos-k", {"k": 1.0}))
        with pytest.raises(PreconditionError):
            certify(h, 2.0, 0.05)

    def test_envelope_shape(self):
        cert = certify(COSH_LOG, 2.0, 0.05)
        ts, _, _, env, _ = certificate_sweep(COSH_LOG, cert, 0.05)
        # even, zero at t = 0, strictly increasing in |t|
        assert env[np.argmin(np.abs(ts))] == 0.0
        assert np.allclose(env, env[::-1], rtol=0, atol=0)
        pos = env[ts >= 0]
        assert np.all(np.diff(pos) > 0)

    def test_certify_sampled_cosh_table(self):
        # integer-multiple grid puts t = 0 exactly on a node
        ts = np.arange(-440, 441) * 0.005
        table = sample_table(LOG_LINE, ts, np.cosh(ts))
        cert = certify(table, 1.0, 0.05)
        assert cert.verified
        assert abs(cert.inputs.a - 1.0) <= 1e-6
        assert cert.max_observed_error <= 1e-6

    def test_soundness_on_builtin_members(self):
        handles = [
            make_family(FamilySpec("cosh-lambda", {"lambda": lam}), domain=LOG_LINE)
            for lam in (0.5, 1.0, 2.0)
        ] + [make_family(FamilySpec("powerlaw-w", {"lambda": 1.5}), domain=LOG_LINE)]
        for h in handles:
            cert = certify(h, 2.0, 0.05)
            assert cert.verified, h.name
            bound = 1e-9 * math.cosh(math.sqrt(cert.inputs.a) * 2.0)
            assert cert.max_observed_error <= bound, h.name


class TestPerturbationScaling:
    def test_epsilon_linear_in_amplitude(self):
        etas = [1e-4, 1e-3, 1e-2]
        ratios = []
        for eta in etas:
            pert = perturb(COSH_LOG, "poly4", eta)
            eps = sup_defect(pert, 1.0, 0.02).epsilon
            ratios.append(eps / eta)
        ref = ratios[0]
        for r in ratios[1:]:
            assert abs(r / ref - 1.0) <= 0.05


class TestCertifyRatio:
    def test_canonical_cost(self):
        f = make_family(FamilySpec("cosh-lambda", {"lambda": 1.0}))
        cert = certify_ratio(f, 2.0, 0.05)
        assert cert.verified
        assert abs(cert.inputs.a - 1.0) <= 1e-10
        assert cert.max_observed_error <= 1e-10
        assert cert.envelope.form == ENVELOPE_DELTA_TIMES_J

    def test_family_member(self):
        f = make_family(FamilySpec("cosh-lambda", {"lambda": 1.2}))
        cert = certify_ratio(f, 2.0, 0.05)
        assert cert.verified
        assert abs(cert.inputs.a - 1.44) <= 1e-8
        assert cert.envelope.form == ENVELOPE_COSH_BRANCH

    def test_quadlog_certificate_is_sound(self):
        # the bound is genuinely satisfied (large delta) or the verdict is negative
        f = make_family(FamilySpec("quadlog"))
        cert = certify_ratio(f, 2.0, 0.05)
        assert cert.max_envelope_margin >= 0.0 or not cert.verified

    def test_rejects_log_handle(self):
        with pytest.raises(DomainError):
            certify_ratio(COSH_LOG, 2.0, 0.05)

    @pytest.mark.parametrize("lam", [0.8, 1.0, 1.7])
    def test_consistent_with_lifted_certificate(self, lam):
        f = make_family(FamilySpec("cosh-lambda", {"lambda": lam}))
        cr = certify_ratio(f, 2.0, 0.05)
        cl = certify(lift_to_log(f), 2.0, 0.05)
        assert cr.verified == cl.verified
        assert abs(cr.delta - cl.delta) <= 1e-12 * cl.delta
