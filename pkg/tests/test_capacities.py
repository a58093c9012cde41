import math

import numpy as np
import pytest

from gausscap.capacities.classical import (
    class_c_min_difference,
    class_uncertainty_bound,
    classical_capacity_lower_bound,
    chi_a_lower,
    chi_h_lower,
    combined_class_c_bound,
    conferencing_lower_bound,
    continuity_bound,
    output_energy_bound,
    threshold_power,
    uncertainty_lower_bound,
    uncertainty_report,
)
from gausscap.capacities.optimize import coordinate_ascent, line_search
from gausscap.capacities.quantum import (
    Method,
    coherent_information_gaussian,
    energy_constrained_q_lower_bound,
    gibbs_state_cm,
    max_squeezing,
    maximize_coherent_info,
    optimized_coherent_info_omg,
    q_ghx_closed_form,
)
from gausscap.core.channels import OmgClass, canonical_unitary
from gausscap.core.symplectic import CovarianceMatrix, EnergyBudget, g_entropy, g_occupation
from gausscap.errors import DimensionMismatch, DomainError

POWERS = [0.1, 0.5, 1.0, 5.0, 10.0]
POWER_LADDER = [0.1, 1.0, 10.0, 100.0, 1e4]


# ── Quantum capacity ───────────────────────────────────────────────────────────
@pytest.mark.parametrize("q", [0.55, 2 / 3, 0.75, 0.9, 1.5, 2.0, 5.0])
def test_closed_form_matches_optimized_omg(q):
    closed = q_ghx_closed_form(q)
    optimized = optimized_coherent_info_omg(q, abs(1 - q))
    assert optimized.method is Method.CLOSED_FORM
    assert optimized.value == pytest.approx(closed, abs=1e-12)


@pytest.mark.parametrize("q", [2 / 3, 2.0])
def test_closed_form_ln2(q):
    assert q_ghx_closed_form(q) == pytest.approx(math.log(2), abs=1e-12)


def test_closed_form_antidegradable_range():
    assert q_ghx_closed_form(0.5) == 0.0
    assert q_ghx_closed_form(0.3) == 0.0
    with pytest.raises(DomainError):
        q_ghx_closed_form(1.0)


def test_optimized_omg_with_excess_noise():
    # x = 3, y = 3: K/|1-x| = 0.25, (K+a)/a = 1.25
    result = optimized_coherent_info_omg(3.0, 3.0)
    expected = 0.25 * math.log(0.25) - 1.25 * math.log(1.25) + math.log(1.5)
    assert result.value == pytest.approx(expected)
    assert result.optimizer["K"] == pytest.approx(0.5)


def test_optimized_omg_lossy_noisy():
    # x = 0.8, y = 0.5: K = 0.15, K/a = 0.75, (K+a)/a = 1.75
    result = optimized_coherent_info_omg(0.8, 0.5)
    expected = 0.75 * math.log(0.75) - 1.75 * math.log(1.75) + math.log(4)
    assert result.value == pytest.approx(expected)


def test_optimized_omg_clips_antidegradable():
    result = optimized_coherent_info_omg(0.75, 0.1)
    assert result.value == 0.0
    assert result.optimizer["clipped"] is True
    assert result.optimizer["K"] < 0


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_optimized_omg_singular_points(x):
    with pytest.raises(DomainError):
        optimized_coherent_info_omg(x, 0.5)


def test_coherent_information_of_pure_loss():
    w = canonical_unitary(0.75)
    value = coherent_information_gaussian(w, CovarianceMatrix.vacuum(), gibbs_state_cm(4.0))
    assert value == pytest.approx(g_occupation(3.0) - g_occupation(1.0), abs=1e-10)
    with pytest.raises(DimensionMismatch):
        coherent_information_gaussian(w, CovarianceMatrix.vacuum(2), gibbs_state_cm(4.0))


def test_max_squeezing():
    assert max_squeezing(0.0) == 0.0
    assert math.cosh(2 * max_squeezing(3.0)) == pytest.approx(7.0)


def test_energy_lower_bound_beats_vacuum_helper():
    w = canonical_unitary(0.75)
    budget = EnergyBudget(5.0, 1.0)
    vacuum_helper = g_occupation(3.75) - g_occupation(1.25)
    assert energy_constrained_q_lower_bound(w, budget) >= vacuum_helper - 1e-12


def test_energy_lower_bound_without_helper_energy():
    w = canonical_unitary(2.0)
    budget = EnergyBudget(3.0, 0.0)
    value = coherent_information_gaussian(w, CovarianceMatrix.vacuum(), gibbs_state_cm(3.0))
    assert energy_constrained_q_lower_bound(w, budget) == pytest.approx(value)


@pytest.mark.parametrize("q", [0.75, 2.0])
def test_energy_lower_bound_is_monotone_in_both_budgets(q):
    w = canonical_unitary(q)
    in_p_a = [energy_constrained_q_lower_bound(w, EnergyBudget(p, 1.0)) for p in POWER_LADDER]
    in_p_e = [energy_constrained_q_lower_bound(w, EnergyBudget(1.0, p)) for p in POWER_LADDER]
    assert all(b >= a - 1e-6 for a, b in zip(in_p_a, in_p_a[1:]))
    assert all(b >= a - 1e-6 for a, b in zip(in_p_e, in_p_e[1:]))


def test_energy_lower_bound_reaches_closed_form():
    w = canonical_unitary(0.75)
    values = [energy_constrained_q_lower_bound(w, EnergyBudget(p, p)) for p in POWER_LADDER]
    assert all(b >= a - 1e-6 for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(q_ghx_closed_form(0.75), abs=5e-3)


def test_maximize_approaches_closed_form_at_high_power():
    result = maximize_coherent_info(canonical_unitary(0.75), EnergyBudget(1e4, 1.0))
    assert result.converged
    assert result.value == pytest.approx(math.log(3), abs=2e-3)


def test_maximize_grows_with_power():
    w = canonical_unitary(0.75)
    low = maximize_coherent_info(w, EnergyBudget(1.0, 1.0)).value
    high = maximize_coherent_info(w, EnergyBudget(10.0, 1.0)).value
    assert high >= low - 1e-9


def test_maximize_is_start_independent_without_helper():
    w = canonical_unitary(0.75)
    budget = EnergyBudget(2.0, 0.0)
    a = maximize_coherent_info(w, budget).value
    b = maximize_coherent_info(w, budget, start=(0.5, 0.2, 1.0, 0.0, 0.0)).value
    assert a == pytest.approx(b, abs=1e-6)


# ── Classical bounds ───────────────────────────────────────────────────────────
def test_threshold_power_at_zero_squeezing():
    assert threshold_power(0.75, 0.25, 0.0) == 0.0


def test_classical_bound_without_helper_energy():
    x, y = 0.75, 0.25
    value = classical_capacity_lower_bound(x, y, EnergyBudget(2.0, 0.0))
    offset = (x - 1) / 2
    assert value == pytest.approx(g_occupation(x * 2.0 + y + offset) - g_occupation(y + offset))


@pytest.mark.parametrize("q", [0.6, 1.5])
def test_classical_bound_grows_with_helper_energy(q):
    y = abs(1 - q)
    without = classical_capacity_lower_bound(q, y, EnergyBudget(5.0, 0.0))
    with_helper = classical_capacity_lower_bound(q, y, EnergyBudget(5.0, 1.0))
    assert with_helper >= without


def test_classical_bound_domain():
    with pytest.raises(DomainError):
        classical_capacity_lower_bound(1.0, 0.0, EnergyBudget(1.0, 1.0))


def test_chi_bounds_of_beam_splitter():
    w = canonical_unitary(0.6)
    budget = EnergyBudget(2.0, 3.0)
    assert chi_h_lower(w, budget) == pytest.approx(g_occupation(1.2))
    assert chi_a_lower(w, budget) == pytest.approx(g_occupation(1.2))


def test_generic_uncertainty_value():
    assert uncertainty_lower_bound(EnergyBudget(1.0, 1.0)) == pytest.approx(1 / 3)


@pytest.mark.parametrize("q", [0.6, 0.75, 1.5, 2.0])
@pytest.mark.parametrize("p_a", POWERS)
@pytest.mark.parametrize("p_e", POWERS)
def test_uncertainty_relation(q, p_a, p_e):
    budget = EnergyBudget(p_a, p_e)
    report = uncertainty_report(canonical_unitary(q), budget)
    assert report.holds
    assert report.chi_h_lower + report.chi_a_lower >= uncertainty_lower_bound(budget)


CLASS_GRID = (
    [(OmgClass.C_ATT, k, None) for k in (0.3, 0.5, 0.7)]
    + [(OmgClass.C_AMP, k, None) for k in (1.5, 2.0, 4.0)]
    + [(OmgClass.B1, None, n0) for n0 in (0.5, 1.0, 2.0)]
    + [(OmgClass.B2, None, n0) for n0 in (0.5, 1.0, 2.0)]
)


@pytest.mark.parametrize("tag, kappa, n0", CLASS_GRID)
@pytest.mark.parametrize("p_a", POWERS)
@pytest.mark.parametrize("p_e", POWERS)
def test_class_bound_dominates_generic(tag, kappa, n0, p_a, p_e):
    budget = EnergyBudget(p_a, p_e)
    assert class_uncertainty_bound(tag, budget, kappa, n0) >= uncertainty_lower_bound(budget)


def test_class_bound_domains():
    budget = EnergyBudget(1.0, 1.0)
    with pytest.raises(DomainError):
        class_uncertainty_bound(OmgClass.C_ATT, budget, kappa=1.5)
    with pytest.raises(DomainError):
        class_uncertainty_bound(OmgClass.B1, budget)
    with pytest.raises(DomainError):
        class_uncertainty_bound(OmgClass.D, budget)


def test_class_a1_bound():
    assert class_uncertainty_bound(OmgClass.A1, EnergyBudget(3.0, 2.0)) == pytest.approx(g_entropy(2.5))


@pytest.mark.parametrize("kappa", [0.3, 0.7, 1.5, 4.0])
def test_combined_class_c_bound_matches_split_forms(kappa):
    budget = EnergyBudget(2.0, 0.5)
    tag = OmgClass.C_ATT if kappa < 1 else OmgClass.C_AMP
    assert combined_class_c_bound(kappa, budget) == pytest.approx(class_uncertainty_bound(tag, budget, kappa))


@pytest.mark.parametrize("kappa", [0.2, 0.5, 0.9])
def test_min_difference_is_zero_energy_limit(kappa):
    assert class_c_min_difference(kappa) == pytest.approx(combined_class_c_bound(kappa, EnergyBudget(0.0, 0.0)))


def test_uncertainty_report_classifies_effective_channel():
    budget = EnergyBudget(1.0, 2.0)
    report = uncertainty_report(canonical_unitary(0.6), budget)
    assert report.channel_class.tag is OmgClass.C_ATT
    assert report.class_bound == pytest.approx(class_uncertainty_bound(OmgClass.C_ATT, budget, 0.6, 0.0))
    assert report.class_min_difference == pytest.approx(class_c_min_difference(0.6))
    assert report.to_dict()["class"] == "C_att"


@pytest.mark.parametrize("p_a", [0.5, 2.0, 10.0])
def test_conferencing_reduces_to_ideal_for_beam_splitters(p_a):
    bound = conferencing_lower_bound(canonical_unitary(0.7), p_a)
    assert bound.nu == pytest.approx([1.0])
    assert bound.value == pytest.approx(bound.ideal_channel_value)
    assert bound.ideal_channel_value == pytest.approx(g_entropy(p_a + 0.5))
    assert bound.literal_value == pytest.approx(g_entropy(p_a))


def test_conferencing_literal_reading_below_half_photon():
    bound = conferencing_lower_bound(canonical_unitary(0.7), 0.2)
    assert math.isnan(bound.literal_value)
    assert bound.value == pytest.approx(g_entropy(0.7))
    assert math.isnan(bound.to_dict()["literal_value"])


def test_conferencing_for_amplifier():
    bound = conferencing_lower_bound(canonical_unitary(2.0), 1.0)
    assert bound.nu == pytest.approx([3.0])
    assert bound.value == pytest.approx(g_occupation(4.0) - g_occupation(1.0))


def test_conferencing_and_chi_average_with_equal_budgets():
    budget = EnergyBudget(2.0, 2.0)
    w = canonical_unitary(0.75)
    conferencing = conferencing_lower_bound(w, budget.p_a).value
    assert conferencing >= (chi_h_lower(w, budget) + chi_a_lower(w, budget)) / 2


def test_output_energy_and_continuity():
    assert output_energy_bound(EnergyBudget(1.0, 2.5)) == 7.0
    assert continuity_bound(1.0, 0.0) == pytest.approx(6 * math.log(2), rel=1e-12)
    values = [continuity_bound(10.0 ** -k, 7.0) for k in range(2, 9)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] > 0
    with pytest.raises(DomainError):
        continuity_bound(0.0, 1.0)
    with pytest.raises(DomainError):
        continuity_bound(0.1, -1.0)


# ── Optimizer ──────────────────────────────────────────────────────────────────
def test_line_search_prefers_endpoints():
    t, v = line_search(lambda t: t, 0.0, 2.0)
    assert (t, v) == (2.0, 2.0)


def test_coordinate_ascent_on_concave_quadratic():
    target = np.array([0.3, -0.2])
    result = coordinate_ascent(lambda v: -float(np.sum((v - target) ** 2)), [(0, 1), (-1, 1)], (0.9, 0.9))
    assert result.converged
    np.testing.assert_allclose(result.x, target, atol=1e-5)


def test_coordinate_ascent_respects_bounds_and_fixed_coordinates():
    result = coordinate_ascent(lambda v: float(v[0] + v[1]), [(0, 1), (0.5, 0.5)], (0.2, 0.5))
    assert result.x == pytest.approx((1.0, 0.5))
