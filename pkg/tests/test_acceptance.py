"""Acceptance suite: one recorded PASS/FAIL line per criterion."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from probe_qfi.bath import BathParams, EstimationTarget
from probe_qfi.cli import compute, preset, read_csv_scenario, render_csv
from probe_qfi.coherence import (
    ProbeParams,
    PulseSchedule,
    chi_shift,
    gamma_corr,
    gamma_uc,
    gamma_uc_closed_form,
    phi_closed_form,
    phi_shift,
)
from probe_qfi.fisher import classical_fisher, optimal_phi_hat, qfi, qfi_terms
from probe_qfi.optimize import OptimizationBudget, optimize_pulses, optimize_time
from probe_qfi.sensitivity import (
    dchi_dG,
    dgamma_dG,
    dgamma_domega_c,
    dphi_domega_c,
    finite_difference_oracle,
    printed_dgamma_domega_c,
    printed_temperature_sensitivity,
    profile,
    sensitivity_under_integral,
)

from oracles import density_matrix_qfi

FIELDS = {"wc": "omega_c", "G": "G", "T": "T"}


def rel_err(a, b, floor=0.0):
    return abs(a - b) / max(abs(b), floor) if max(abs(b), floor) > 0 else abs(a - b)


def random_bath(rng, T=None):
    s = rng.uniform(0.1, 3.0)
    if abs(s - 1) < 1e-3:
        s = 1.0
    if T is None:
        T = 0.0 if rng.random() < 0.5 else rng.uniform(0.2, 3.0)
    return BathParams(G=rng.uniform(0.05, 2.0), omega_c=rng.uniform(0.5, 10.0), s=s, T=T)


# -- 1 ----------------------------------------------------------------------------------


def test_closed_form_matches_quadrature(acceptance):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(200):
        bath = BathParams(G=1.0, omega_c=rng.uniform(0.5, 10), s=rng.uniform(0.1, 3), T=0.0)
        t = rng.uniform(0.01, 20)
        worst = max(
            worst,
            rel_err(gamma_uc(bath, t, method="quadrature"), gamma_uc_closed_form(bath, t)),
            rel_err(phi_shift(bath, t, method="quadrature"), phi_closed_form(bath, t)),
        )
    assert acceptance("1", worst < 1e-8, f"max rel err {worst:.2e} over 200 configs")


# -- 2 ----------------------------------------------------------------------------------


def fd(f, x0):
    return finite_difference_oracle(f, x0).estimate


def total_gamma(bath, probe, t, pulses):
    return gamma_uc(bath, t, pulses) + gamma_corr(bath, probe, phi_shift(bath, t, pulses))


def total_chi(bath, probe, t, pulses):
    return chi_shift(bath, probe, phi_shift(bath, t, pulses))


def derivative_errors(rng, target):
    field = FIELDS[target]
    bath = random_bath(rng, T=rng.uniform(0.2, 3.0) if target == "T" else None)
    probe = ProbeParams(omega_0=rng.uniform(0.5, 3.0), phi_0=rng.uniform(0, 2 * math.pi))
    t = rng.uniform(0.05, 10)
    pulses = None if rng.random() < 0.5 else int(rng.integers(0, 5))
    x0 = getattr(bath, field)

    def shifted(x):
        return bath.replace(**{field: x})

    dg = fd(lambda x: total_gamma(shifted(x), probe, t, pulses), x0)
    dc = fd(lambda x: total_chi(shifted(x), probe, t, pulses), x0)
    p = profile(bath, probe, t, pulses, target)
    q = sensitivity_under_integral(bath, probe, t, pulses, target)
    errs = [
        rel_err(float(p.dgamma_uc + p.dgamma_corr), dg, 1e-3),
        rel_err(float(p.dchi), dc, 1e-3),
        rel_err(q.dGamma_dx, dg, 1e-3),
        rel_err(q.dChi_dx, dc, 1e-3),
    ]
    if bath.T == 0 and pulses is None and target != "T":
        closed = {
            "wc": (dgamma_domega_c(bath, t), dphi_domega_c(bath, t)),
            "G": (dgamma_dG(bath, t), dchi_dG(bath, t)),
        }[target]
        errs += [rel_err(closed[0], dg, 1e-3), rel_err(closed[1], dc, 1e-3)]
    return max(errs)


@pytest.mark.parametrize("target", ["wc", "G", "T"])
def test_sensitivities_match_finite_differences(acceptance, target):
    rng = np.random.default_rng({"wc": 21, "G": 22, "T": 23}[target])
    worst = max(derivative_errors(rng, target) for _ in range(100))
    assert acceptance(f"2.{target}", worst < 1e-6, f"max rel err {worst:.2e} over 100 configs")


def test_printed_forms_fail_finite_differences(acceptance):
    rng = np.random.default_rng(24)
    cutoff_rejected = 0
    for _ in range(100):
        bath = BathParams(G=rng.uniform(0.05, 2), omega_c=rng.uniform(0.5, 10), s=rng.uniform(0.1, 0.9), T=0.0)
        t = rng.uniform(0.05, 10)
        oracle = fd(lambda w: gamma_uc(bath.replace(omega_c=w), t), bath.omega_c)
        cutoff_rejected += rel_err(printed_dgamma_domega_c(bath, t), oracle, 1e-3) > 1e-6
    temp_rejected = {"csch": 0, "w0": 0, "tan": 0}
    for _ in range(20):
        wc = rng.uniform(0.3, 1.0)
        bath = BathParams(G=rng.uniform(0.2, 1), omega_c=wc, s=rng.uniform(0.2, 2), T=rng.uniform(1.5, 3) * wc)
        probe = ProbeParams(omega_0=rng.uniform(1.5, 3.0))
        t = rng.uniform(0.5, 3)
        printed = printed_temperature_sensitivity(bath, probe, t)
        phi = phi_shift(bath, t)
        uc = fd(lambda T: gamma_uc(bath.replace(T=T), t), bath.T)
        corr = fd(lambda T: gamma_corr(bath.replace(T=T), probe, phi), bath.T)
        chi = fd(lambda T: total_chi(bath.replace(T=T), probe, t, None), bath.T)
        temp_rejected["csch"] += rel_err(printed.dgamma_uc_dT, uc) > 1e-6
        temp_rejected["w0"] += rel_err(printed.dgamma_corr_dT, corr) > 1e-6
        temp_rejected["tan"] += rel_err(printed.dchi_dT, chi) > 1e-6
    passed = cutoff_rejected == 100 and all(v == 20 for v in temp_rejected.values())
    detail = f"printed variants rejected: cutoff exponent {cutoff_rejected}/100, " + ", ".join(
        f"{k} {v}/20" for k, v in temp_rejected.items()
    )
    assert acceptance("2.printed", passed, detail)


# -- 3 ----------------------------------------------------------------------------------


def test_measurement_attains_qfi(acceptance):
    rng = np.random.default_rng(3)
    grid = np.linspace(0, 2 * math.pi, 10_000, endpoint=False)
    worst_eq, worst_excess, underflow = 0.0, -math.inf, 0
    for _ in range(100):
        target = ["wc", "G", "T"][int(rng.integers(0, 3))]
        bath = random_bath(rng, T=rng.uniform(0.2, 3.0) if target == "T" else None)
        probe = ProbeParams(omega_0=rng.uniform(0.5, 3.0), phi_0=rng.uniform(0, 2 * math.pi))
        t = rng.uniform(0.05, 10)
        pulses = None if rng.random() < 0.5 else int(rng.integers(0, 5))
        corr = bool(rng.random() < 0.7)
        h = qfi(bath, probe, t, pulses, target, corr).value
        best = optimal_phi_hat(bath, probe, t, pulses, target, corr)
        f = classical_fisher(bath, probe, t, pulses, target, best, corr)
        grid_max = np.max(classical_fisher(bath, probe, t, pulses, target, grid, corr))
        if h == 0:
            # Gamma so large that e^(-2 Gamma) underflows: every quantity must be exactly 0
            underflow += 1
            worst_eq = max(worst_eq, abs(f))
            worst_excess = max(worst_excess, grid_max)
            continue
        worst_eq = max(worst_eq, rel_err(f, h))
        worst_excess = max(worst_excess, (grid_max - f) / f)
    passed = worst_eq < 1e-9 and worst_excess <= 1e-9
    detail = f"max |CFI-QFI|/QFI {worst_eq:.2e}, max grid excess {worst_excess:.2e} ({underflow} configs with underflowed QFI checked exactly)"
    assert acceptance("3", passed, detail)


# -- 4 ----------------------------------------------------------------------------------


def test_zero_pulse_kernels_reduce_to_free_evolution(acceptance):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(50):
        bath = BathParams(G=rng.uniform(0.05, 2), omega_c=rng.uniform(0.5, 10), s=rng.uniform(0.1, 3), T=0.0)
        t = rng.uniform(0.01, 20)
        zero = PulseSchedule(0)
        worst = max(
            worst,
            rel_err(gamma_uc(bath, t, zero, method="quadrature"), gamma_uc(bath, t, None, method="quadrature")),
            rel_err(phi_shift(bath, t, zero, method="quadrature"), phi_shift(bath, t, None, method="quadrature")),
            rel_err(gamma_uc(bath, t, zero), gamma_uc_closed_form(bath, t)),
            rel_err(phi_shift(bath, t, zero), phi_closed_form(bath, t)),
        )
    assert acceptance("4", worst < 1e-10, f"max rel err {worst:.2e} over 50 configs")


# -- 5 ----------------------------------------------------------------------------------


def test_spot_value(acceptance):
    bath = BathParams(G=1, omega_c=5, s=1, T=0)
    probe = ProbeParams()
    corr = qfi(bath, probe, 1.0, None, "G", True).value
    uncorr = qfi(bath, probe, 1.0, None, "G", False).value
    dm_corr = density_matrix_qfi(bath, probe, 1.0, "G", correlations=True)
    dm_uncorr = density_matrix_qfi(bath, probe, 1.0, "G", correlations=False)
    passed = (
        abs(corr - 0.178701) < 1e-5
        and abs(uncorr - 0.106154) < 1e-5
        and abs(dm_corr - corr) < 1e-7
        and abs(dm_uncorr - uncorr) < 1e-7
    )
    assert acceptance("5", passed, f"corr {corr:.7f}, uncorr {uncorr:.7f} (density-matrix {dm_corr:.7f}, {dm_uncorr:.7f})")


# -- 6 ----------------------------------------------------------------------------------


def column_ratios(table, num="qfi_corr", den="qfi_uncorr"):
    i, j = table.columns.index(num), table.columns.index(den)
    return np.array([row[i] / row[j] for row in table.rows])


def test_weak_coupling_curves_nearly_coincide(acceptance):
    (scenario,) = preset("fig1")
    ratios = column_ratios(compute(scenario))
    worst = float(np.max(np.abs(ratios - 1)))
    detail = f"max |corr/uncorr - 1| = {worst:.3f} over omega_c in [1, 10] (t_max = {scenario.budget.t_max:g})"
    assert acceptance("6a", worst < 0.05, detail)


def test_sub_ohmic_cutoff_sweep_gains_order_of_magnitude(acceptance):
    scenario = next(s for s in preset("fig3") if s.bath.s == 0.1)
    best = float(np.max(column_ratios(compute(scenario))))
    assert acceptance("6b", best > 10, f"max corr/uncorr = {best:.1f} over omega_c in [1, 10]")


def test_sub_ohmic_coupling_sweep_gains_order_of_magnitude(acceptance):
    scenario = next(s for s in preset("fig4") if s.bath.s == 0.1)
    best = float(np.max(column_ratios(compute(scenario))))
    assert acceptance("6c", best > 10, f"max corr/uncorr = {best:.0f} over G in [0.01, 10]")


def test_pulses_and_correlations_combined_gain(acceptance):
    budget = OptimizationBudget(n_max=8, patience=4, coarse_points=1000)
    probe = ProbeParams()
    best = 0.0
    for G in (0.1, 1.0, 3.0):
        bath = BathParams(G=G, omega_c=5, s=0.1)
        combined = optimize_pulses(bath, probe, "G", budget, True)
        baseline = optimize_time(bath, probe, "G", budget, False)
        best = max(best, combined.value / baseline.value)
    assert acceptance("6d", best >= 100, f"max (pulsed, correlated)/(free, uncorrelated) = {best:.0f}")


# -- 7 ----------------------------------------------------------------------------------

baths = st.builds(
    BathParams,
    G=st.floats(0.05, 2.0),
    omega_c=st.floats(0.5, 10.0),
    s=st.floats(0.1, 3.0),
    T=st.one_of(st.just(0.0), st.floats(0.2, 3.0)),
)
times = st.floats(0.01, 20.0)
pulse_counts = st.one_of(st.none(), st.integers(0, 6))


def targets_for(bath):
    return ["wc", "G", "T"] if bath.T > 0 else ["wc", "G"]


def check_invariants():
    failures = []

    @given(baths, times, pulse_counts, st.floats(0, 2 * math.pi))
    def terms_and_polar_angle(bath, t, pulses, phi_0):
        for target in targets_for(bath):
            for corr in (True, False):
                first, second = qfi_terms(bath, ProbeParams(phi_0=phi_0), t, pulses, target, corr)
                assert first >= 0 and second >= 0
                top = qfi(bath, ProbeParams(phi_0=phi_0), t, pulses, target, corr).value
                for theta in np.linspace(0.05, math.pi - 0.05, 15):
                    assert qfi(bath, ProbeParams(theta_0=theta, phi_0=phi_0), t, pulses, target, corr).value <= top * (1 + 1e-12)

    @given(baths.map(lambda b: b.replace(T=0.0)), pulse_counts)
    def correlations_help_at_zero_temperature(bath, pulses):
        t = np.geomspace(1e-3, 50, 400)
        for target in ("wc", "G"):
            with_corr = sum(qfi_terms(bath, ProbeParams(), t, pulses, target, True))
            without = sum(qfi_terms(bath, ProbeParams(), t, pulses, target, False))
            assert np.all(with_corr >= without * (1 - 1e-12))

    for prop in (terms_and_polar_angle, correlations_help_at_zero_temperature):
        try:
            prop()
        except AssertionError as exc:
            failures.append(f"{prop.__name__}: {exc}")
    return failures


def test_structural_invariants(acceptance):
    failures = check_invariants()
    budget = OptimizationBudget(coarse_points=400, n_max=6, patience=3)
    table_ok = True
    for scenario in preset("fig10", with_pulses=True)[:1] + preset("fig11", with_pulses=True)[:1]:
        scenario = type(scenario).from_dict({**scenario.to_dict(), "budget": budget.to_dict()})
        table = compute(scenario)
        for base in ("qfi_corr", "qfi_uncorr"):
            i, j = table.columns.index(base), table.columns.index(base + "_pulsed")
            table_ok &= all(row[j] >= row[i] for row in table.rows)
    if not table_ok:
        failures.append("pulsed optimum below unpulsed optimum")
    assert acceptance("7", not failures, "; ".join(failures) or "nonnegative terms, equatorial maximum, T=0 dominance, pulsed >= free")


# -- 8 ----------------------------------------------------------------------------------


def test_mixed_state_reduction(acceptance):
    rng = np.random.default_rng(8)
    exact, decreasing = True, 0
    for _ in range(50):
        target = ["wc", "G", "T"][int(rng.integers(0, 3))]
        bath = random_bath(rng, T=rng.uniform(0.2, 3.0) if target == "T" else None)
        t = rng.uniform(0.05, 10)
        pulses = None if rng.random() < 0.5 else int(rng.integers(0, 5))
        phi_0 = rng.uniform(0, 2 * math.pi)
        pure = qfi(bath, ProbeParams(phi_0=phi_0), t, pulses, target).value
        zero = qfi(bath, ProbeParams(phi_0=phi_0, gamma_0=0.0), t, pulses, target).value
        mixed = qfi(bath, ProbeParams(phi_0=phi_0, gamma_0=rng.uniform(0.01, 2.0)), t, pulses, target).value
        exact &= zero == pure
        decreasing += mixed < pure
    passed = exact and decreasing == 50
    assert acceptance("8", passed, f"gamma_0 = 0 exact: {exact}; strictly lower QFI: {decreasing}/50")


# -- 9 ----------------------------------------------------------------------------------


def test_determinism_and_round_trip(acceptance, tmp_path):
    checks = []
    for name in ("fig2", "fig6", "fig7"):
        for scenario in preset(name)[:1]:
            first = render_csv(scenario, compute(scenario))
            second = render_csv(scenario, compute(scenario, workers=2))
            path = tmp_path / f"{scenario.name}.csv"
            path.write_text(first)
            again = read_csv_scenario(path)
            checks.append((scenario.name, first == second, again == scenario, render_csv(again, compute(again)) == first))
    passed = all(all(c[1:]) for c in checks)
    detail = ", ".join(f"{n}: identical={a} reparsed={b} regenerated={c}" for n, a, b, c in checks)
    assert acceptance("9", passed, detail)
