import itertools
import math

import numpy as np
import pytest

from ohc_ura.analytics import p_type_a, p_type_b, p_type_c, symbol_error_prob
from ohc_ura.channel import ChannelUseObservation, derive_params, observe, observe_dense, occupancy_from_indices
from ohc_ura.codec import decode_index
from ohc_ura.receiver import (PERFECT_RFFI, Provenance, RecoveredList, RffiModel, authenticate_use,
                              build_list, demodulate_use, recover_round)
from ohc_ura.rf import DevicePopulation

P1 = derive_params(0.0, 4)


@pytest.mark.parametrize("value, bit", [(1.0, 1), (0.0, 0), (0.4999, 0), (0.5, 0), (0.5001, 1)])
def test_demodulate_threshold(value, bit):
    assert demodulate_use(ChannelUseObservation(0, value, 1), P1) == bit


def test_authenticate_examples():
    for seed in range(20):
        assert authenticate_use(2, True, RffiModel(0.0, 1.0), seed) is False
        assert authenticate_use(3, False, RffiModel(0.0, 1.0), seed) is False
        assert authenticate_use(1, True, PERFECT_RFFI, seed) is True
        assert authenticate_use(1, False, PERFECT_RFFI, seed) is False
        assert authenticate_use(0, False, PERFECT_RFFI, seed) is False


def test_authenticate_rates():
    rng = np.random.default_rng(9)
    n = 20_000
    m = RffiModel(0.3, 0.1)
    legit = sum(authenticate_use(1, True, m, rng) for _ in range(n)) / n
    illegit = sum(authenticate_use(1, False, m, rng) for _ in range(n)) / n
    empty = sum(authenticate_use(0, False, m, rng) for _ in range(n)) / n
    for got, p in [(legit, 0.7), (illegit, 0.1), (empty, 0.1)]:
        assert abs(got - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_rffi_validation():
    with pytest.raises(ValueError):
        RffiModel(-0.1, 0.0)
    with pytest.raises(ValueError):
        RffiModel(0.0, 1.5)


def _entries(B, idx):
    return [(n, decode_index(n, B), Provenance.TYPE_A) for n in idx]


def test_build_list_examples():
    assert len(build_list(_entries(4, [1, 2, 3]), 5, 0)) == 3
    assert len(build_list([], 5, 0, B=4)) == 0
    lst = build_list(_entries(4, range(10)), 4, 0)
    assert len(lst) == 4 and len(set(lst.index.tolist())) == 4


def test_build_list_uniform_subset():
    trials = 5000
    hits = np.zeros(10)
    rng = np.random.default_rng(1)
    for _ in range(trials):
        hits[build_list(_entries(4, range(10)), 4, rng).index] += 1
    freq = hits / trials
    assert np.all(np.abs(freq - 0.4) <= 3 * math.sqrt(0.4 * 0.6 / trials))


def test_recovered_list_rejects_duplicates():
    with pytest.raises(ValueError):
        RecoveredList(4, [1, 1], [0, 0])


def _round(B, hot, legit, ebn0_db=math.inf, rffi=PERFECT_RFFI, D_L=None, seed=0, dense=False):
    params = derive_params(ebn0_db, B)
    pop = DevicePopulation(legit)
    occ = occupancy_from_indices(B, hot)
    rng = np.random.default_rng(seed)
    obs = (observe_dense if dense else observe)(occ, pop, params, rng)
    D_L = sum(legit) if D_L is None else D_L
    return recover_round(obs, occ, params, rffi, D_L, pop, rng)


def test_recover_round_examples():
    lst = _round(3, [5], [True])
    assert [str(m) for m in lst.messages] == ["101"]
    assert lst[0][2] is Provenance.TYPE_A
    assert len(_round(3, [4, 4], [True, True])) == 0


def test_no_type_b_or_c_without_false_acceptance():
    rng = np.random.default_rng(3)
    for i in range(300):
        hot = rng.integers(0, 16, size=6)
        lst = _round(4, hot, [True] * 3 + [False] * 3, ebn0_db=-3.0, rffi=RffiModel(0.2, 0.0), seed=i)
        assert lst.count(Provenance.TYPE_B) == 0 and lst.count(Provenance.TYPE_C) == 0
        assert len(lst) <= 3


@pytest.mark.parametrize("B, K", [(1, 4), (2, 4), (3, 4), (4, 3), (4, 4)])
def test_noiseless_perfect_exhaustive(B, K):
    """Recovered list equals exactly the set of collision-free legitimate messages."""
    N = 1 << B
    splits = [(K // 2, K - K // 2)] if (B, K) == (4, 4) else [(d, K - d) for d in range(1, K + 1)]
    for D_L, D_I in splits:
        legit = [True] * D_L + [False] * D_I
        for place in itertools.product(range(N), repeat=K):
            expected = {place[k] for k in range(D_L) if place.count(place[k]) == 1}
            lst = _round(B, place, legit)
            assert set(lst.index.tolist()) == expected
            assert len(lst) <= D_L
            assert all(t == Provenance.TYPE_A for t in lst.tag)


@pytest.mark.parametrize("dense", [False, True])
def test_type_rates_converge_to_closed_forms(dense):
    B, D_L, D_I = 4, 3, 2
    N = 1 << B
    ebn0_db, rffi = -2.0, RffiModel(0.2, 0.3)
    pe = symbol_error_prob(ebn0_db, B)
    rounds = 20_000
    rng = np.random.default_rng(77)
    counts = np.zeros(3)
    legit = [True] * D_L + [False] * D_I
    for r in range(rounds):
        hot = rng.integers(0, N, size=D_L + D_I)
        lst = _round(B, hot, legit, ebn0_db, rffi, D_L=N, seed=rng, dense=dense)  # cap N: no truncation
        counts += np.bincount(lst.tag, minlength=3)
    uses = rounds * N
    for got, p in zip(counts / uses, [p_type_a(D_L, D_I, N, pe, rffi.p_md),
                                      p_type_b(D_L, D_I, N, pe, rffi.p_fa),
                                      p_type_c(D_L, D_I, N, pe, rffi.p_fa)]):
        assert abs(got - p) <= 3 * math.sqrt(p * (1 - p) / uses), (got, p)


def test_demodulation_error_rate_matches_q():
    B, ebn0_db = 6, 0.0
    params = derive_params(ebn0_db, B)
    pe = symbol_error_prob(ebn0_db, B)
    occ = occupancy_from_indices(B, np.arange(64))
    pop = DevicePopulation(np.ones(64, dtype=bool))
    rng = np.random.default_rng(5)
    n_err = n = 0
    for _ in range(1000):
        v = observe(occ, pop, params, rng).value
        n_err += int(np.sum(v <= params.threshold))
        n += v.size
    assert abs(n_err / n - pe) <= 3 * math.sqrt(pe * (1 - pe) / n)
    # idle false alarm rate, from dense noise-only observations
    empty = occupancy_from_indices(B, [])
    fa = np.mean([np.mean(observe_dense(empty, DevicePopulation([]), params, rng).value > 0.5)
                  for _ in range(1000)])
    assert abs(fa - pe) <= 3 * math.sqrt(pe * (1 - pe) / 64_000)


def test_list_never_exceeds_cap():
    rng = np.random.default_rng(8)
    for i in range(200):
        hot = rng.integers(0, 64, size=12)
        lst = _round(6, hot, [True] * 4 + [False] * 8, ebn0_db=-6.0, rffi=RffiModel(0.0, 1.0), seed=i)
        assert len(lst) <= 4
        assert len(set(lst.index.tolist())) == len(lst)
