"""Brute-force reference computations, independent of the package internals."""

from __future__ import annotations

import itertools
from fractions import Fraction


def placements(N, K):
    return itertools.product(range(N), repeat=K)


def type_rates_by_enumeration(N, D_L, D_I, p_e, p_md, p_fa):
    """Exact per-channel-use probabilities of type A/B/C outcomes.

    Averages over every assignment of the D_L + D_I devices (legitimate ones first)
    to N channel uses and over every channel use.
    """
    K = D_L + D_I
    a = b = c = 0.0
    count = 0
    for place in placements(N, K):
        for n in range(N):
            occ = [k for k in range(K) if place[k] == n]
            if len(occ) == 1:
                if occ[0] < D_L:
                    a += (1 - p_e) * (1 - p_md)
                else:
                    b += (1 - p_e) * p_fa
            elif not occ:
                c += p_e * p_fa
            count += 1
    return a / count, b / count, c / count


def collision_pupe(N, D_L, D_I):
    """Exact PUPE when only collisions cause errors (noiseless, perfect RFFI)."""
    K = D_L + D_I
    missed = 0
    total = 0
    for place in placements(N, K):
        for ell in range(D_L):
            if sum(1 for k in range(K) if place[k] == place[ell]) > 1:
                missed += 1
            total += 1
    return Fraction(missed, total)


def noiseless_pupe_spoof(N, D_L, D_I, p_md, p_fa):
    """Exact (PUPE, spoofing probability) with noiseless detection and a random list cap.

    Enumerates placements and every accept/reject pattern of the lone occupants;
    when more than D_L uses are accepted each survives with probability D_L/m.
    """
    K = D_L + D_I
    miss = 0.0
    spoof = 0.0
    n_place = N ** K
    for place in placements(N, K):
        singles = [k for k in range(K) if sum(1 for j in range(K) if place[j] == place[k]) == 1]
        for pattern in itertools.product((0, 1), repeat=len(singles)):
            w = 1.0
            for k, acc in zip(singles, pattern):
                p = (1 - p_md) if k < D_L else p_fa
                w *= p if acc else 1 - p
            if w == 0:
                continue
            accepted = [k for k, acc in zip(singles, pattern) if acc]
            m = len(accepted)
            keep = 1.0 if m <= D_L else D_L / m
            got_l = sum(1 for k in accepted if k < D_L) * keep
            got_i = sum(1 for k in accepted if k >= D_L) * keep
            miss += w * (D_L - got_l)
            spoof += w * got_i
    pupe = miss / (n_place * D_L) if D_L else None
    sp = spoof / (n_place * D_I) if D_I else None
    return pupe, sp
