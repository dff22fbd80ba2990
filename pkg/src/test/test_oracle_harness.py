import pytest
from pydantic import ValidationError

from core.config import configure_settings, get_settings
from core.exceptions import ScenarioError
from services.gbell import MultiEntangledSpec, make_entangled
from services.measurement import collapse_all, project
from services.oracle_harness import (
    ModularTerm,
    ScenarioLimits,
    SwapLayout,
    _configure_worker,
    perturbed_predictor,
    random_scenario,
    run_campaign,
    verify_layout,
    verify_scenario,
)
from services.qudit_state import fidelity_up_to_phase, reduce_to_single
from services.swap_predict import SwapScenario, predict_general

ACCEPTANCE_LIMITS = ScenarioLimits(min_dimension=2, max_dimension=3, min_systems=2, max_systems=3, max_total_qudits=10)


def _spec(dimension, l, *k):
    return MultiEntangledSpec(dimension=dimension, l=l, k=tuple(k))


def _carrying_scenario():
    return SwapScenario(
        dimension=3,
        systems=(_spec(3, 1, 2, 1), _spec(3, 2, 1, 0, 2)),
        measured_counts=(1, 2),
    )


def test_random_scenarios_verify():
    for seed in range(200):
        scenario = random_scenario(seed, ACCEPTANCE_LIMITS)
        assert scenario.q in (2, 3)
        assert scenario.dimension in (2, 3)
        assert scenario.total_qudits <= 10
        report = verify_scenario(scenario)
        assert report.summary.passed, f"seed {seed}: {report.summary}"
        assert report.summary.feasible_count == scenario.dimension ** scenario.q


@pytest.mark.parametrize("term", list(ModularTerm))
def test_negative_controls_fail(term):
    report = verify_scenario(_carrying_scenario(), perturbed_predictor(term))
    assert not report.summary.passed


def test_negative_control_fails_every_campaign_scenario():
    predictor = perturbed_predictor(ModularTerm.BRIDGE)
    for seed in range(20):
        scenario = random_scenario(seed, ACCEPTANCE_LIMITS)
        assert not verify_scenario(scenario, predictor).summary.passed


@pytest.mark.parametrize("term", list(ModularTerm))
def test_each_negative_control_fails_some_acceptance_scenario(term):
    predictor = perturbed_predictor(term)
    assert any(
        not verify_scenario(random_scenario(seed, ACCEPTANCE_LIMITS), predictor).summary.passed
        for seed in range(200)
    )


def test_unmeasured_particles_stay_maximally_mixed():
    scenario = _carrying_scenario()
    layout = SwapLayout.from_scenario(scenario)
    for outcome in collapse_all(layout.composite(), layout.measurement_spec()):
        if not outcome.feasible:
            continue
        for particle in range(outcome.post_state.num_qudits):
            assert reduce_to_single(outcome.post_state, particle).distance_from_maximally_mixed() <= 1e-10


def test_post_state_matches_direct_projection():
    scenario = _carrying_scenario()
    layout = SwapLayout.from_scenario(scenario)
    state, spec = layout.composite(), layout.measurement_spec()
    for outcome in collapse_all(state, spec):
        if not outcome.feasible:
            continue
        direct = project(state, spec, outcome.label)
        assert fidelity_up_to_phase(direct.post_state, outcome.post_state) == pytest.approx(1.0, abs=1e-10)
        predicted = make_entangled(predict_general(scenario, outcome.label).result)
        assert fidelity_up_to_phase(direct.post_state, predicted) == pytest.approx(1.0, abs=1e-10)


def test_layout_measuring_reference_particles():
    layout = SwapLayout(
        dimension=3,
        systems=(_spec(3, 1, 2, 1), _spec(3, 2, 1)),
        measured=((0, 2), (0,)),
    )
    assert layout.global_measured() == [[0, 2], [3]]
    canonical = layout.canonical()
    assert canonical.measured_counts == (2, 1)
    report = verify_layout(layout)
    assert report.summary.passed
    assert report.scenario.measured == [[0, 2], [3]]


def test_fully_measured_system_cannot_be_verified():
    layout = SwapLayout(dimension=2, systems=(_spec(2, 0, 0),), measured=((0, 1),))
    assert layout.canonical() is None
    with pytest.raises(ScenarioError):
        verify_layout(layout)


def test_layout_requires_measured_particle_per_system():
    with pytest.raises(ValidationError, match="each system must contribute at least one measured particle"):
        SwapLayout(dimension=2, systems=(_spec(2, 0, 0), _spec(2, 0, 0)), measured=((1,), ()))


def test_random_scenario_is_deterministic():
    assert random_scenario(17) == random_scenario(17)


def test_random_scenario_respects_size_budget():
    limits = ScenarioLimits(min_dimension=3, max_dimension=3, max_total_qudits=10, max_amplitudes=3 ** 5)
    for seed in range(10):
        assert random_scenario(seed, limits).total_qudits <= 5


@pytest.mark.parametrize(
    "limits",
    [
        ScenarioLimits(min_dimension=3, max_dimension=2),
        ScenarioLimits(min_systems=0),
        ScenarioLimits(min_systems=2, max_systems=3, max_total_qudits=3),
    ],
)
def test_random_scenario_unsatisfiable_limits(limits):
    with pytest.raises(ScenarioError):
        random_scenario(0, limits)


def test_campaign_reports_follow_seed_order():
    seeds = [5, 1, 3]
    reports = run_campaign(seeds, ScenarioLimits(max_total_qudits=6))
    assert len(reports) == 3
    for seed, report in zip(seeds, reports):
        assert report.summary.passed
        expected = verify_scenario(random_scenario(seed, ScenarioLimits(max_total_qudits=6)))
        assert report.scenario == expected.scenario


def test_campaign_carries_the_size_guard_into_limits():
    configure_settings(max_amplitudes=3 ** 5)
    reports = run_campaign(range(12), ScenarioLimits(min_dimension=3, max_dimension=3, max_total_qudits=10), workers=2)
    for report in reports:
        assert report.summary.passed
        assert sum(len(system.k) + 1 for system in report.scenario.systems) <= 5


def test_worker_setup_installs_the_size_guard():
    _configure_worker(81)
    assert get_settings().max_amplitudes == 81
