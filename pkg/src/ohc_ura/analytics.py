"""Closed-form per-channel-use probabilities, PUPE and spoofing probability.

Every active device picks one of N channel uses uniformly at random. A channel
use ends up in the recovered list as

* type A: a lone legitimate device, detected and authenticated,
* type B: a lone illegitimate device, detected and wrongly authenticated,
* type C: nobody transmitted, noise crossed the threshold and was authenticated.

The list size is approximated by min(P*N, D_L), apportioned among the types in
proportion to their probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc


def q_function(x):
    """Gaussian tail probability Q(x) = P(Z > x)."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(float(x) / math.sqrt(2.0))
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def symbol_error_prob(ebn0_db: float, B: int) -> float:
    """OOK error probability when one symbol carries the energy of all B bits.

    Serves both as miss-detection P(1->0) and false-alarm P(0->1).
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    if ebn0_db == math.inf:
        return 0.0
    if ebn0_db == -math.inf:
        return 0.5
    return float(q_function(math.sqrt(B * 10.0 ** (ebn0_db / 10.0) / 2.0)))


def _free(N: int, k: int) -> float:
    """(1 - 1/N)**k, the chance that k devices all avoid a given channel use."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if k <= 0:
        return 1.0
    if N == 1:
        return 0.0
    return math.exp(k * math.log1p(-1.0 / N))


def _check_counts(D_L: int, D_I: int) -> None:
    if D_L < 0 or D_I < 0:
        raise ValueError(f"device counts must be >= 0, got D_L={D_L}, D_I={D_I}")


def p_type_a(D_L: int, D_I: int, N: int, p_sym_err: float, p_md: float) -> float:
    _check_counts(D_L, D_I)
    if D_L == 0:
        return 0.0
    return D_L / N * _free(N, D_L + D_I - 1) * (1.0 - p_sym_err) * (1.0 - p_md)


def p_type_b(D_L: int, D_I: int, N: int, p_sym_err: float, p_fa: float) -> float:
    _check_counts(D_L, D_I)
    if D_I == 0:
        return 0.0
    return D_I / N * _free(N, D_L + D_I - 1) * (1.0 - p_sym_err) * p_fa


def p_type_c(D_L: int, D_I: int, N: int, p_false_alarm_demod: float, p_fa: float) -> float:
    _check_counts(D_L, D_I)
    return _free(N, D_L + D_I) * p_false_alarm_demod * p_fa


@dataclass(frozen=True)
class AnalyticalPoint:
    N: int
    D_L: int
    D_I: int
    p_sym_err: float
    p_a: float
    p_b: float
    p_c: float
    p_total: float
    pupe: float | None  # None when D_L = 0
    spoof: float | None  # None when D_I = 0

    @property
    def pn(self) -> float:
        """Expected number of channel uses yielding a list entry."""
        return self.p_total * self.N

    @property
    def expected_list_size(self) -> float:
        return min(self.pn, self.D_L)


def point_from_error(D_L: int, D_I: int, N: int, p_sym_err: float, p_md: float, p_fa: float) -> AnalyticalPoint:
    """Evaluate all closed forms for a given symbol error probability.

    N need not be a power of two here, which the enumeration checks rely on.
    """
    pa = p_type_a(D_L, D_I, N, p_sym_err, p_md)
    pb = p_type_b(D_L, D_I, N, p_sym_err, p_fa)
    pc = p_type_c(D_L, D_I, N, p_sym_err, p_fa)
    P = pa + pb + pc
    size = min(P * N, D_L)
    pupe = spoof = None
    if D_L > 0:
        # P = 0 means nothing is ever recovered
        pupe = 1.0 if P == 0 else 1.0 - pa / P * size / D_L
    if D_I > 0:
        spoof = 0.0 if P == 0 else pb / P * size / D_I
    return AnalyticalPoint(N, D_L, D_I, p_sym_err, pa, pb, pc, P, pupe, spoof)


def analyze(D_L: int, D_I: int, B: int, ebn0_db: float, p_md: float = 0.0, p_fa: float = 0.0,
            N: int | None = None) -> AnalyticalPoint:
    N = (1 << B) if N is None else N
    return point_from_error(D_L, D_I, N, symbol_error_prob(ebn0_db, B), p_md, p_fa)


def pupe_analytical(D_L: int, D_I: int, B: int, ebn0_db: float, p_md: float = 0.0, p_fa: float = 0.0,
                    N: int | None = None) -> AnalyticalPoint:
    if D_L < 1:
        raise ValueError("PUPE is undefined without active legitimate devices (D_L = 0)")
    return analyze(D_L, D_I, B, ebn0_db, p_md, p_fa, N)


def spoofing_analytical(D_L: int, D_I: int, B: int, ebn0_db: float, p_md: float = 0.0, p_fa: float = 0.0,
                        N: int | None = None) -> float:
    if D_I < 1:
        raise ValueError("spoofing probability is undefined without illegitimate devices (D_I = 0)")
    return analyze(D_L, D_I, B, ebn0_db, p_md, p_fa, N).spoof


@dataclass(frozen=True)
class SolverConfig:
    target_pupe: float = 0.05
    search_lo_db: float = -20.0
    search_hi_db: float = 40.0
    grid_step_db: float = 0.5
    tol_db: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.target_pupe <= 1.0:
            raise ValueError(f"target_pupe must lie in (0, 1], got {self.target_pupe}")
        if not self.search_lo_db < self.search_hi_db:
            raise ValueError("search_lo_db must be below search_hi_db")
        if not (self.tol_db > 0 and self.grid_step_db > 0):
            raise ValueError("tol_db and grid_step_db must be positive")


def min_ebn0_for_pupe(config: SolverConfig, D_L: int, D_I: int, B: int, p_md: float = 0.0,
                      p_fa: float = 0.0) -> float | None:
    """Smallest Eb/N0 (dB) in the search range meeting PUPE <= target, or None if infeasible.

    A coarse grid locates the first feasible point; bisection then narrows the
    bracket to ``tol_db`` and the feasible end is returned.
    """
    eps = config.target_pupe

    def ok(x):
        return pupe_analytical(D_L, D_I, B, x, p_md, p_fa).pupe <= eps

    n_steps = int(math.ceil((config.search_hi_db - config.search_lo_db) / config.grid_step_db))
    grid = [min(config.search_lo_db + i * config.grid_step_db, config.search_hi_db) for i in range(n_steps + 1)]
    if ok(grid[0]):
        return grid[0]
    for lo, hi in zip(grid, grid[1:]):
        if ok(hi):
            break
    else:
        return None
    while hi - lo > config.tol_db:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class RegimeRow:
    D_L: int
    ebn0_db: float | None
    point: AnalyticalPoint | None

    @property
    def saturated(self) -> bool | None:
        """True when the expected list size is capped by D_L (P*N >= D_L)."""
        return None if self.point is None else self.point.pn >= self.D_L


def regime_sweep(D_I: int, B: int, p_md: float, p_fa: float, target_pupe: float = 0.05,
                 dl_values=range(1, 257), solver: SolverConfig | None = None) -> list[RegimeRow]:
    """Solve the minimum Eb/N0 for each D_L and evaluate P*N there."""
    solver = solver or SolverConfig(target_pupe=target_pupe)
    if solver.target_pupe != target_pupe:
        solver = SolverConfig(target_pupe, solver.search_lo_db, solver.search_hi_db,
                              solver.grid_step_db, solver.tol_db)
    rows = []
    for D_L in dl_values:
        x = min_ebn0_for_pupe(solver, D_L, D_I, B, p_md, p_fa)
        pt = None if x is None else analyze(D_L, D_I, B, x, p_md, p_fa)
        rows.append(RegimeRow(D_L, x, pt))
    return rows


def regime_transition_dl(D_I: int, B: int, p_md: float, p_fa: float, target_pupe: float = 0.05,
                         dl_max: int = 256, solver: SolverConfig | None = None) -> int | None:
    """Smallest feasible D_L at which P*N <= D_L, at the solved minimum Eb/N0.

    Below the returned value the list is saturated (P*N > D_L). Returns None if
    P*N stays above D_L over 1..dl_max.
    """
    for row in regime_sweep(D_I, B, p_md, p_fa, target_pupe, range(1, dl_max + 1), solver):
        if row.point is not None and row.point.pn <= row.D_L:
            return row.D_L
    return None
