"""Core trust math: confidence factors, direct/indirect trust, decay, thresholds.

Every function here is pure: it reads its arguments, returns a value, and
touches no global state. All trust-like quantities live in [0, 1].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Tuple


class CFModel(Enum):
    """How the direct-vs-indirect weight grows with transaction count."""

    CFDA = "cfda"          # n / (n + c)
    CFDB = "cfdb"          # 1 - beta ** n
    CONSTANT = "constant"  # fixed weight, ignores history


class DTModel(Enum):
    """Direct trust model computed from clean/polluted chunk counters."""

    DTMA = "dtma"  # clean / (clean + polluted)
    DTMB = "dtmb"  # (clean + 1) / (clean + polluted + 2)
    PDTM = "pdtm"  # exp(-rho * polluted) * clean / (clean + eta)


class ChunkQuality(Enum):
    CLEAN = "clean"
    POLLUTED = "polluted"


class TrustState(NamedTuple):
    """Decayed evidence one peer holds about another.

    Counters are real-valued: exponential decay produces fractional counts,
    and rounding them would break the monotonicity of the trust models.
    """

    n_clean: float = 0.0
    n_polluted: float = 0.0
    n_transactions: float = 0.0
    last_update: float = 0.0


EMPTY_STATE = TrustState()


@dataclass(frozen=True)
class TrustParams:
    """All tunable constants of the trust pipeline.

    One instance describes a single peer's configuration; worlds may give
    different peers different parameter sets.
    """

    cf_model: CFModel = CFModel.CFDA
    cf_constant: float = 0.5       # fixed weight when cf_model is CONSTANT
    c: float = 1.0                 # CFDA: transactions needed to reach weight 0.5
    beta: float = 0.5              # CFDB base, in (0, 1)
    dt_model: DTModel = DTModel.PDTM
    rho: float = math.log(2.0)     # PDTM penalty exponent per polluted chunk
    eta: float = 1.0               # PDTM clean-count offset
    forgetting: float = 0.0        # per-round decay rate of clean evidence
    forgiving: float = 0.0         # per-round decay rate of polluted evidence
    theta_p: float = 0.5           # below this trust: refuse to transact
    theta_g: float = 0.9           # at or above: transact unconditionally
    chi: float = 0.5               # transaction probability inside the gray zone
    k_providers: int = 5           # how many top-trust providers to consider
    k_recommenders: int = 5        # how many top-credibility recommenders to keep
    cold_start_trust: float = 0.5  # substitute when no evidence exists at all

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError("c must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.rho <= 0 or self.eta <= 0:
            raise ValueError("rho and eta must be positive")
        if self.forgetting < 0 or self.forgiving < 0:
            raise ValueError("decay rates must be non-negative")
        for name in ("cf_constant", "theta_p", "theta_g", "chi", "cold_start_trust"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.theta_p > self.theta_g:
            raise ValueError("theta_p must not exceed theta_g")
        if self.k_providers < 1 or self.k_recommenders < 1:
            raise ValueError("k_providers and k_recommenders must be >= 1")
        if (self.forgetting > 0 or self.forgiving > 0) and self.forgetting <= self.forgiving:
            warnings.warn(
                "forgetting <= forgiving: polluted evidence now fades at least "
                "as fast as clean evidence, which weakens on-off resistance",
                stacklevel=2,
            )

    @property
    def onoff_resistant(self) -> bool:
        """Whether PDTM's drop-vs-gain condition rho > ln(1 + 1/eta) holds."""
        return self.rho > math.log(1.0 + 1.0 / self.eta)


class OnOffMargin(NamedTuple):
    ratio: float       # trust drop from N polluted over trust gain from N clean
    bound: float       # closed-form lower estimate (1 - e^{-rho N}) (eta + N)
    resistant: bool    # rho > ln(1 + 1/eta)


def confidence_factor(state: TrustState, params: TrustParams) -> float:
    """Weight of direct trust, grown from the decayed transaction count.

    Zero with no history, strictly increasing, and tending to 1, so a peer
    leans on recommendations exactly while it lacks first-hand evidence.
    """
    n = state.n_transactions
    if params.cf_model is CFModel.CFDA:
        return n / (n + params.c)
    if params.cf_model is CFModel.CFDB:
        return 1.0 - params.beta ** n
    return params.cf_constant


def direct_trust(state: TrustState, params: TrustParams) -> float:
    """Trust from first-hand chunk deliveries under the selected model.

    DTMA is undefined at (0, 0); it falls back to cold_start_trust so an
    unknown peer is neither embraced nor condemned.
    """
    nc, np_ = state.n_clean, state.n_polluted
    model = params.dt_model
    if model is DTModel.DTMA:
        total = nc + np_
        if total == 0.0:
            return params.cold_start_trust
        return nc / total
    if model is DTModel.DTMB:
        return (nc + 1.0) / (nc + np_ + 2.0)
    return math.exp(-params.rho * np_) * nc / (nc + params.eta)


def indirect_trust(
    recommendations: Sequence[Tuple[float, float]],
) -> Optional[float]:
    """Credibility-weighted mean of recommendation values.

    Each element is (credibility, value), both in [0, 1]. Returns None when
    the list is empty or no recommender carries positive credibility; the
    caller substitutes cold-start trust or pure direct trust.
    """
    total = 0.0
    weighted = 0.0
    for cred, value in recommendations:
        total += cred
        weighted += cred * value
    if total == 0.0:
        return None
    return weighted / total


def combine_trust(
    direct: float,
    indirect: Optional[float],
    alpha: float,
    cold_start: float = 0.5,
) -> float:
    """Convex combination alpha * direct + (1 - alpha) * indirect."""
    if indirect is None:
        indirect = cold_start
    return alpha * direct + (1.0 - alpha) * indirect


def apply_decay(state: TrustState, now: float, params: TrustParams) -> TrustState:
    """Age the evidence: clean counts fade at the forgetting rate, polluted
    counts at the forgiving rate, transaction counts with the clean evidence.

    Raises ValueError when `now` precedes the state's last update.
    """
    dt = now - state.last_update
    if dt < 0:
        raise ValueError(
            f"time regression: now={now} precedes last_update={state.last_update}"
        )
    if dt == 0.0:
        return state
    keep_clean = math.exp(-params.forgetting * dt)
    keep_polluted = math.exp(-params.forgiving * dt)
    return TrustState(
        n_clean=state.n_clean * keep_clean,
        n_polluted=state.n_polluted * keep_polluted,
        n_transactions=state.n_transactions * keep_clean,
        last_update=now,
    )


def record_delivery(state: TrustState, quality: ChunkQuality) -> TrustState:
    """Count one received chunk at full weight. The state must already be
    decayed to the current round."""
    if quality is ChunkQuality.CLEAN:
        return state._replace(
            n_clean=state.n_clean + 1.0,
            n_transactions=state.n_transactions + 1.0,
        )
    return state._replace(
        n_polluted=state.n_polluted + 1.0,
        n_transactions=state.n_transactions + 1.0,
    )


def transaction_probability(trust: float, params: TrustParams) -> float:
    """Double-threshold policy: refuse below theta_p, probe with probability
    chi in the gray zone, accept unconditionally at or above theta_g."""
    if trust < params.theta_p:
        return 0.0
    if trust < params.theta_g:
        return params.chi
    return 1.0


def onoff_resistance_margin(
    state: TrustState, n_chunks: int, params: TrustParams
) -> OnOffMargin:
    """Compare the trust drop from `n_chunks` polluted uploads against the
    gain from the same number of clean uploads, under PDTM.

    Returns the drop/gain ratio, the closed-form estimate
    (1 - e^{-rho N}) (eta + N), and whether rho > ln(1 + 1/eta). The estimate
    only lower-bounds the ratio when clean evidence dominates (roughly
    n_clean >= eta * N); with thin clean evidence the ratio falls below it.
    """
    if params.dt_model is not DTModel.PDTM:
        raise ValueError("on-off resistance margin is defined for PDTM only")
    if n_chunks < 1:
        raise ValueError("n_chunks must be a positive integer")
    nc, np_ = state.n_clean, state.n_polluted
    if nc <= 0.0:
        raise ValueError("degenerate state: n_clean must be positive")
    rho, eta = params.rho, params.eta
    # the drop/gain quotient with the shared exp(-rho * n_polluted) factor
    # canceled, which stays finite even where that factor underflows
    ratio = (1.0 - math.exp(-rho * n_chunks)) * nc * (nc + n_chunks + eta) / (eta * n_chunks)
    bound = (1.0 - math.exp(-rho * n_chunks)) * (eta + n_chunks)
    return OnOffMargin(ratio=ratio, bound=bound, resistant=params.onoff_resistant)
