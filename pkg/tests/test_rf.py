import numpy as np
import pytest
from hypothesis import given, strategies as st

from ohc_ura.rf import (DEFAULT_ALPHA, DEFAULT_BETA, DeviceProfile, DevicePopulation, distort,
                        ideal_passthrough, pa_response, sample_population)

DEFAULT = DeviceProfile(0, 2.1587, 1.1417)


def test_defaults_match_reported_values():
    assert DEFAULT_ALPHA == 2.1587
    assert DEFAULT_BETA == 1.1417


def test_distort_examples():
    assert distort(0.0, DEFAULT) == 0.0
    # oracle: direct evaluation of alpha*a/(1+beta*a^2)
    assert distort(1.0, DEFAULT) == pytest.approx(2.1587 / 2.1417, rel=1e-15)
    assert distort(1.0, DEFAULT) == pytest.approx(1.007937, abs=1e-6)
    assert distort(0.5, DEFAULT) == pytest.approx(1.07935 / 1.285425, rel=1e-12)
    assert distort(0.5, DEFAULT) == pytest.approx(0.83968, abs=1e-5)


@pytest.mark.parametrize("a", [0.0, 1.0, 0.37, -2.5])
def test_ideal_passthrough(a):
    assert ideal_passthrough(a) == a


def test_sample_population_examples():
    assert len(sample_population(0, seed=1)) == 0
    pop = sample_population(1000, seed=7)
    assert np.all((pop.alpha >= 2.1587 * 0.95) & (pop.alpha <= 2.1587 * 1.05))
    assert np.all((pop.beta >= 1.1417 * 0.95) & (pop.beta <= 1.1417 * 1.05))
    assert pop.alpha.min() >= 2.0508 - 1e-4 and pop.alpha.max() <= 2.2666 + 1e-4
    assert pop.beta.min() >= 1.0846 - 1e-4 and pop.beta.max() <= 1.1988 + 1e-4
    # spread actually covers most of the interval
    assert pop.alpha.max() - pop.alpha.min() > 0.9 * 0.1 * 2.1587


def test_sample_population_deterministic_and_seed_sensitive():
    a, b = sample_population(50, seed=3), sample_population(50, seed=3)
    assert list(a) == list(b)
    c = sample_population(50, seed=4)
    assert np.any(a.alpha != c.alpha) or np.any(a.beta != c.beta)


def test_sample_population_independence_switch():
    pop = sample_population(200, seed=5, independent=False)
    assert np.allclose(pop.alpha / DEFAULT_ALPHA, pop.beta / DEFAULT_BETA)
    pop = sample_population(200, seed=5)
    assert abs(np.corrcoef(pop.alpha, pop.beta)[0, 1]) < 0.3


def test_negative_count():
    with pytest.raises(ValueError):
        sample_population(-1)


def test_profile_validation():
    with pytest.raises(ValueError):
        DeviceProfile(0, -1.0, 1.0)
    with pytest.raises(ValueError):
        DeviceProfile(0, 1.0, 0.0)


def test_population_sequence_and_amplitudes():
    pop = sample_population(5, seed=2, legitimate=[True, True, False, True, False])
    assert [p.device_id for p in pop] == list(range(5))
    assert [p.legitimate for p in pop] == [True, True, False, True, False]
    amps = pop.tx_amplitude(1.0)
    assert amps == pytest.approx([distort(1.0, p) for p in pop])
    assert DevicePopulation.from_profiles(list(pop))[3] == pop[3]
    with pytest.raises(IndexError):
        pop[5]
    with pytest.raises(KeyError):
        pop.tx_amplitude(1.0, [7])
    ideal = DevicePopulation([True, False])
    assert ideal.tx_amplitude(1.0).tolist() == [1.0, 1.0]


@given(st.floats(2.1587 * 0.95, 2.1587 * 1.05), st.floats(1.1417 * 0.95, 1.1417 * 1.05))
def test_psi_increasing_below_peak(alpha, beta):
    a = np.linspace(0.0, 0.9, 2001) / np.sqrt(beta)
    y = pa_response(a, alpha, beta)
    assert y[0] == 0.0
    assert np.all(np.diff(y) > 0)
