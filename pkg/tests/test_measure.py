"""Projective spin measurement, collapse, and seeded sampling."""

import math

import numpy as np
import pytest

from superselect.entangle import all_bipartitions, schmidt
from superselect.errors import ConfigurationError, DomainError, SuperselectionError
from superselect.fock import BasisState, RegisterLabel, SectorIndex
from superselect.measure import (
    SpinObservable,
    measure_spin,
    read_sector_charge,
    sample_measurement,
    spin_z_observable,
)
from superselect.scenarios import build_scenario, electron_positron_registry
from superselect.states import StateVector, max_term_deviation

ROOT_HALF = 1.0 / math.sqrt(2.0)


def B(*labels):
    return BasisState(tuple(RegisterLabel(sid, spin) for sid, spin in labels))


@pytest.fixture
def hybrid_third():
    return build_scenario("hybrid_pair", alpha=math.sqrt(1 / 3), beta=math.sqrt(2 / 3))


def test_hybrid_measurement_collapses_both_factors(hybrid_third):
    reg, state, _ = hybrid_third
    records = measure_spin(reg, state, spin_z_observable(reg, 0))
    assert [r.outcome for r in records] == [0, 1]
    assert records[0].probability == pytest.approx(1 / 3, abs=1e-12)
    assert records[1].probability == pytest.approx(2 / 3, abs=1e-12)
    # collapse: each post state is a single product term
    assert max_term_deviation(
        records[0].post_state, StateVector({B(("e-", 0), ("e+", 1)): 1.0})
    ) <= 1e-12
    assert max_term_deviation(
        records[1].post_state, StateVector({B(("e+", 1), ("e-", 0)): 1.0})
    ) <= 1e-12
    for record in records:
        for cut in all_bipartitions(2):
            assert schmidt(record.post_state, cut).rank == 1
        assert read_sector_charge(reg, record.post_state) == SectorIndex((0,))


def test_measurement_on_spin_eigenstate_is_trivial():
    reg = electron_positron_registry(2)
    vec = StateVector({B(("e-", 1), ("e+", 1)): 1.0})
    records = measure_spin(reg, vec, spin_z_observable(reg, 0))
    assert len(records) == 1
    assert records[0].outcome == 1
    assert records[0].probability == pytest.approx(1.0, abs=1e-12)
    assert records[0].post_state == vec


def test_spinless_state_has_single_trivial_outcome():
    reg, bell, _ = build_scenario("bell_plus")
    records = measure_spin(reg, bell, spin_z_observable(reg, 1))
    assert len(records) == 1 and records[0].outcome == 0
    assert records[0].probability == pytest.approx(1.0, abs=1e-12)
    # no external DOF existed, so the internal entanglement survives
    assert max_term_deviation(records[0].post_state, bell) <= 1e-12


def test_measurement_rejects_cross_sector_input():
    reg, forbidden, _ = build_scenario("forbidden_pm2e")
    with pytest.raises(SuperselectionError):
        measure_spin(reg, forbidden, spin_z_observable(reg, 0))


def test_measurement_register_bounds(hybrid_third):
    reg, state, _ = hybrid_third
    with pytest.raises(DomainError):
        measure_spin(reg, state, spin_z_observable(reg, 5))


def test_measurement_requires_normalized_state():
    reg = electron_positron_registry(1)
    vec = StateVector({B(("e-", 0), ("e+", 0)): 2.0})
    with pytest.raises(DomainError):
        measure_spin(reg, vec, spin_z_observable(reg, 0))


def test_probabilities_sum_to_one_in_rotated_basis(hybrid_third):
    reg, state, _ = hybrid_third
    theta = 0.7
    rot = np.array(
        [[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]],
        dtype=complex,
    )
    obs = SpinObservable(register=0, bases={"e-": rot, "e+": rot})
    records = measure_spin(reg, state, obs)
    assert sum(r.probability for r in records) == pytest.approx(1.0, abs=1e-9)
    for record in records:
        assert read_sector_charge(reg, record.post_state) == SectorIndex((0,))


def test_measurement_is_repeatable(hybrid_third):
    reg, state, _ = hybrid_third
    obs = spin_z_observable(reg, 0)
    for record in measure_spin(reg, state, obs):
        again = measure_spin(reg, record.post_state, obs)
        assert len(again) == 1
        assert again[0].outcome == record.outcome
        assert again[0].probability == pytest.approx(1.0, abs=1e-12)


def test_observable_must_be_unitary():
    with pytest.raises(ConfigurationError):
        SpinObservable(register=0, bases={"e-": np.array([[1.0, 0.0], [1.0, 0.0]])})
    with pytest.raises(ConfigurationError):
        SpinObservable(register=0, bases={"e-": np.ones((2, 3))})


def test_observable_missing_species_rejected(hybrid_third):
    reg, state, _ = hybrid_third
    obs = SpinObservable(register=0, bases={"e-": np.eye(2)})
    with pytest.raises(ConfigurationError):
        measure_spin(reg, state, obs)


def test_sampling_is_deterministic_per_seed(hybrid_third):
    reg, state, _ = hybrid_third
    obs = spin_z_observable(reg, 0)
    first = sample_measurement(reg, state, obs, seed=42)
    second = sample_measurement(reg, state, obs, seed=42)
    assert first.outcome == second.outcome
    assert first.post_state == second.post_state


def test_sampling_deterministic_state_always_returns_it():
    reg = electron_positron_registry(2)
    vec = StateVector({B(("e-", 1), ("e+", 0)): 1.0})
    for seed in range(5):
        record = sample_measurement(reg, vec, spin_z_observable(reg, 1), seed)
        assert record.probability == pytest.approx(1.0, abs=1e-12)


def test_sampling_frequencies_match_born_rule(hybrid_third):
    reg, state, _ = hybrid_third
    obs = spin_z_observable(reg, 0)
    trials = 10_000
    hits = sum(
        1 for seed in range(trials)
        if sample_measurement(reg, state, obs, seed).outcome == 0
    )
    p = 1 / 3
    sigma = math.sqrt(trials * p * (1 - p))
    assert abs(hits - trials * p) <= 3 * sigma


def test_read_sector_charge(hybrid_third):
    reg, state, _ = hybrid_third
    assert read_sector_charge(reg, state) == SectorIndex((0,))
    _, forbidden, _ = build_scenario("forbidden_pm2e")
    reg1 = electron_positron_registry(1)
    with pytest.raises(SuperselectionError):
        read_sector_charge(reg1, forbidden)
