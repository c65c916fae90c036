import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from probe_qfi.bath import BathParams, EstimationTarget
from probe_qfi.coherence import ProbeParams, chi_shift, gamma_corr, gamma_uc, phi_shift
from probe_qfi.errors import DomainError, UnsupportedConfigurationError
from probe_qfi.sensitivity import (
    Method,
    dchi_dG,
    dchi_dT,
    dgamma_dG,
    dgamma_domega_c,
    dgamma_dT,
    dphi_domega_c,
    finite_difference_oracle,
    printed_dgamma_domega_c,
    printed_temperature_sensitivity,
    profile,
    sensitivity,
    sensitivity_under_integral,
)

PROBE = ProbeParams()
STANDARD_T = BathParams(G=1, omega_c=5, s=0.1, T=0.5)


def total_gamma(bath, t, pulses=None, probe=PROBE):
    return gamma_uc(bath, t, pulses) + gamma_corr(bath, probe, phi_shift(bath, t, pulses))


def total_chi(bath, t, pulses=None, probe=PROBE):
    return chi_shift(bath, probe, phi_shift(bath, t, pulses))


def fd(f, x0):
    return finite_difference_oracle(f, x0).estimate


def test_oracle_on_square():
    est = finite_difference_oracle(lambda x: x * x, 3.0)
    assert est.estimate == pytest.approx(6.0, abs=1e-9)
    assert est.error_order == 4


def test_oracle_linearity_in_coupling():
    bath = BathParams(0.7, 3, 0.4)
    est = fd(lambda g: gamma_uc(bath.replace(G=g), 2.0), 0.7)
    assert est == pytest.approx(gamma_uc(bath.replace(G=1.0), 2.0), abs=1e-7)


def test_cutoff_ohmic_spot_values():
    bath = BathParams(1, 5, 1)
    assert dgamma_domega_c(bath, 1.0) == pytest.approx(5 / 26, rel=1e-14)
    assert dphi_domega_c(bath, 1.0) == pytest.approx(1 / 26, rel=1e-14)


def test_coupling_ohmic_spot_values():
    bath = BathParams(1, 5, 1)
    assert dgamma_dG(bath, 1.0) == pytest.approx(1.629048, abs=1e-6)
    assert dchi_dG(bath, 1.0) == pytest.approx(1.373401, abs=1e-6)


@pytest.mark.parametrize("func", [dgamma_domega_c, dphi_domega_c, dgamma_dG, dchi_dG])
@pytest.mark.parametrize("s", [0.3, 1.0, 2.5])
def test_closed_forms_vanish_at_t_zero(func, s):
    assert func(BathParams(1, 2, s), 0.0) == 0.0


def test_cutoff_sub_ohmic_against_oracle():
    bath = BathParams(1, 2, 0.5)
    est = finite_difference_oracle(lambda w: gamma_uc(bath.replace(omega_c=w), 1.0), 2.0, scale=2.0).estimate
    assert dgamma_domega_c(bath, 1.0) == pytest.approx(est, rel=1e-6)


def test_phase_cutoff_super_ohmic_against_oracle():
    bath = BathParams(0.8, 3.3, 2.0)
    est = fd(lambda w: phi_shift(bath.replace(omega_c=w), 0.9), 3.3)
    assert dphi_domega_c(bath, 0.9) == pytest.approx(est, rel=1e-6)


def test_coupling_super_ohmic_against_oracle():
    bath = BathParams(1, 5, 3)
    assert dgamma_dG(bath, 0.3) == pytest.approx(fd(lambda g: gamma_uc(bath.replace(G=g), 0.3), 1.0), rel=1e-6)
    assert dchi_dG(bath, 0.3) == pytest.approx(fd(lambda g: phi_shift(bath.replace(G=g), 0.3), 1.0), rel=1e-6)


def test_printed_cutoff_exponent_is_inconsistent():
    bath = BathParams(1, 2, 0.5)
    est = fd(lambda w: gamma_uc(bath.replace(omega_c=w), 1.0), 2.0)
    assert abs(printed_dgamma_domega_c(bath, 1.0) - est) > 1e-3 * abs(est)
    # the printed form does not approach the Ohmic result as s -> 1
    near = BathParams(1, 5, 1 + 1e-6)
    assert abs(printed_dgamma_domega_c(near, 1.0) - 5 / 26) > 1e-2


def test_temperature_standard_scenario():
    t = 1.0
    assert dgamma_dT(STANDARD_T, PROBE, t) == pytest.approx(fd(lambda T: total_gamma(STANDARD_T.replace(T=T), t), 0.5), rel=1e-6)
    assert dchi_dT(STANDARD_T, PROBE, t) == pytest.approx(fd(lambda T: total_chi(STANDARD_T.replace(T=T), t), 0.5), rel=1e-6)
    quad = dgamma_dT(STANDARD_T, PROBE, t, method="quadrature")
    assert quad == pytest.approx(dgamma_dT(STANDARD_T, PROBE, t), rel=1e-8)


def test_temperature_trivial_cases():
    assert dgamma_dT(STANDARD_T, PROBE, 0.0) == 0.0
    assert dchi_dT(STANDARD_T, PROBE, 0.0) == 0.0
    # phi = 0 kills the correlation part: compare against the uncorrelated part alone
    p = profile(STANDARD_T, PROBE, 0.0, None, "T")
    assert p.dgamma_corr == 0.0
    hot = STANDARD_T.replace(T=1e5)
    assert abs(dchi_dT(hot, PROBE, 1.0)) < 1e-9


def test_printed_temperature_forms_fail_oracle():
    bath = BathParams(1, 0.5, 0.5, 2.0)  # T > omega_c keeps the cosh^2 integral finite
    probe = ProbeParams(omega_0=2.0)
    t = 1.0
    printed = printed_temperature_sensitivity(bath, probe, t)
    p = profile(bath, probe, t, None, "T")
    uc_oracle = fd(lambda T: gamma_uc(bath.replace(T=T), t), bath.T)
    corr_oracle = fd(lambda T: gamma_corr(bath.replace(T=T), probe, phi_shift(bath, t)), bath.T)
    chi_oracle = fd(lambda T: total_chi(bath.replace(T=T), t, probe=probe), bath.T)
    assert p.dgamma_uc == pytest.approx(uc_oracle, rel=1e-6)
    assert p.dgamma_corr == pytest.approx(corr_oracle, rel=1e-6)
    assert p.dchi == pytest.approx(chi_oracle, rel=1e-6)
    assert abs(printed.dgamma_uc_dT - uc_oracle) > 1e-2 * abs(uc_oracle)
    assert abs(printed.dgamma_corr_dT - corr_oracle) > 1e-2 * abs(corr_oracle)
    assert abs(printed.dchi_dT - chi_oracle) > 1e-2 * abs(chi_oracle)
    assert math.isinf(printed_temperature_sensitivity(STANDARD_T, PROBE, t).dgamma_uc_dT)


def test_under_integral_pulsed_scenario():
    bath = BathParams(1, 5, 0.1)
    t, n = 2.0, 4
    rec = sensitivity_under_integral(bath, PROBE, t, n, "wc")
    assert rec.method is Method.UNDER_INTEGRAL
    assert rec.dGamma_dx == pytest.approx(fd(lambda w: total_gamma(bath.replace(omega_c=w), t, n), 5.0), rel=1e-6)
    assert rec.dChi_dx == pytest.approx(fd(lambda w: total_chi(bath.replace(omega_c=w), t, n), 5.0), rel=1e-6)


@pytest.mark.parametrize("target", ["wc", "G", "T"])
def test_under_integral_matches_analytic(target):
    bath = BathParams(0.6, 4, 0.7, 0.9)
    a = sensitivity(bath, PROBE, 1.4, None, target)
    q = sensitivity(bath, PROBE, 1.4, None, target, method="under_integral")
    assert a.method is Method.ANALYTIC
    assert q.dGamma_dx == pytest.approx(a.dGamma_dx, rel=1e-8)
    assert q.dChi_dx == pytest.approx(a.dChi_dx, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("n", [None, 0, 1, 3, 7])
def test_coupling_linearity(n):
    bath = BathParams(0.37, 4, 0.6, 0.4)
    p = profile(bath, PROBE, 1.9, n, "G")
    assert p.dgamma_uc * bath.G == pytest.approx(gamma_uc(bath, 1.9, n), rel=1e-14)


@given(
    G=st.floats(0.01, 2), wc=st.floats(0.5, 10), s=st.floats(0.1, 3), T=st.floats(0.05, 3),
    t=st.floats(0.05, 10), n=st.integers(0, 4), target=st.sampled_from(["wc", "G", "T"]),
)
def test_analytic_matches_oracle(G, wc, s, T, t, n, target):
    bath = BathParams(G, wc, s, T)
    rec = sensitivity(bath, PROBE, t, n, target)
    field = EstimationTarget.parse(target).value
    x0 = getattr(bath, field)
    g_fd = fd(lambda x: total_gamma(bath.replace(**{field: x}), t, n), x0)
    c_fd = fd(lambda x: total_chi(bath.replace(**{field: x}), t, n), x0)
    scale_g = max(abs(total_gamma(bath, t, n)) / x0, 1.0)
    assert rec.dGamma_dx == pytest.approx(g_fd, rel=1e-6, abs=1e-9 * scale_g)
    assert rec.dChi_dx == pytest.approx(c_fd, rel=1e-6, abs=1e-9 * max(abs(total_chi(bath, t, n)) / x0, 1.0))


def test_domain_errors():
    cold = BathParams(1, 5, 0.5)
    with pytest.raises(DomainError):
        sensitivity(cold, PROBE, 1.0, None, "T")
    with pytest.raises(DomainError):
        dgamma_dT(cold, PROBE, 1.0)
    with pytest.raises(DomainError):
        dchi_dT(cold, PROBE, 1.0)
    with pytest.raises(UnsupportedConfigurationError):
        dgamma_domega_c(STANDARD_T, 1.0)
    with pytest.raises(DomainError):
        finite_difference_oracle(lambda x: x, 0.0)
