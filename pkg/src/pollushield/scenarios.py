"""Experiment library: declarative configs for the six canned experiments,
world construction, scenario execution, and the scenario file format.

Configs are fully explicit: builders materialize candidate sets and peer
roles up front, so a config saved to disk reloads bit-identically and a
(config, seed) pair always replays the same run.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .behaviors import BehaviorKind, PeerBehavior
from .metrics import MetricsReport, PeerSummary
from .sim_engine import World, evaluate_components, run_round
from .trust_core import CFModel, ChunkQuality, DTModel, TrustParams

EXPERIMENT_IDS = ("e1", "e2", "e3", "e4", "e5", "e6")


class PolicyKind(Enum):
    PROPOSED = "proposed"    # double threshold (theta_p, theta_g, chi)
    SINGLE = "single"        # transact iff trust >= theta
    PEERTRUST = "peertrust"  # fixed-weight baseline with a single threshold


@dataclass(frozen=True)
class Policy:
    kind: PolicyKind = PolicyKind.PROPOSED
    theta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is PolicyKind.SINGLE and self.theta is None:
            raise ValueError("single-threshold policy requires theta")

    @classmethod
    def proposed(cls) -> "Policy":
        return cls(PolicyKind.PROPOSED)

    @classmethod
    def single(cls, theta: float) -> "Policy":
        return cls(PolicyKind.SINGLE, theta)

    @classmethod
    def peertrust(cls) -> "Policy":
        return cls(PolicyKind.PEERTRUST, 0.5)


# Baseline trust pipeline: ratio-based direct trust, fixed half/half weight
# between direct and indirect evidence, no decay, one threshold.
PEERTRUST_THETA = 0.5


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    n_peers: int
    rounds: int
    seed: int
    behavior_mix: Tuple[Tuple[PeerBehavior, int], ...]
    params: TrustParams
    param_overrides: Tuple[Tuple[int, TrustParams], ...] = ()
    loss_rate_range: Optional[Tuple[float, float]] = None
    observed_pairs: Tuple[Tuple[int, int], ...] = ()
    policy: Policy = field(default_factory=Policy.proposed)
    requesters: Tuple[int, ...] = ()
    candidate_map: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()
    request_budgets: Tuple[Tuple[int, int], ...] = ()  # non-default (peer, budget)
    warmup_rounds: int = 0       # rounds with the threshold policy disabled
    warmup_budget: int = 0       # minimum per-round deliveries during warmup
    detection_threshold: Optional[float] = None  # None: use params.theta_p
    measure_from: Optional[int] = None           # None: warmup_rounds
    ads_per_round: Optional[int] = None          # None: every candidate advertises

    def validate(self) -> None:
        if self.n_peers < 1:
            raise ValueError("n_peers must be positive")
        if self.rounds < 1:
            raise ValueError("rounds must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        total = sum(count for _, count in self.behavior_mix)
        if total != self.n_peers:
            raise ValueError(
                f"behavior mix counts sum to {total}, expected n_peers={self.n_peers}"
            )
        if any(count < 0 for _, count in self.behavior_mix):
            raise ValueError("behavior mix counts must be non-negative")
        ids = range(self.n_peers)
        for observer, subject in self.observed_pairs:
            if observer not in ids or subject not in ids or observer == subject:
                raise ValueError(f"invalid observed pair ({observer}, {subject})")
        for pid in self.requesters:
            if pid not in ids:
                raise ValueError(f"invalid requester id {pid}")
        for pid, cands in self.candidate_map:
            if pid not in ids:
                raise ValueError(f"candidate map references unknown peer {pid}")
            for c in cands:
                if c not in ids or c == pid:
                    raise ValueError(f"invalid candidate {c} for peer {pid}")
        for pid, budget in self.request_budgets:
            if pid not in ids or budget < 1:
                raise ValueError(f"invalid request budget ({pid}, {budget})")
        for pid, _ in self.param_overrides:
            if pid not in ids:
                raise ValueError(f"param override references unknown peer {pid}")
        if self.loss_rate_range is not None:
            lo, hi = self.loss_rate_range
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError("loss_rate_range must satisfy 0 <= lo <= hi <= 1")
        if not 0 <= self.warmup_rounds < self.rounds:
            raise ValueError("warmup_rounds must lie in [0, rounds)")
        if self.measure_from is not None and not 0 <= self.measure_from < self.rounds:
            raise ValueError("measure_from must lie in [0, rounds)")
        if self.ads_per_round is not None and self.ads_per_round < 1:
            raise ValueError("ads_per_round must be >= 1 when set")
        groups = {b.group for b, n in self.behavior_mix if b.group and n > 0}
        seen: set = set()
        for group in groups:
            members = set(group)
            if members & seen:
                raise ValueError("a peer may appear in at most one collusion group")
            seen |= members


# --- serialization -----------------------------------------------------------

def _behavior_to_dict(b: PeerBehavior) -> dict:
    return {
        "kind": b.kind.value,
        "loss_rate": b.loss_rate,
        "on_ratio": b.on_ratio,
        "target_set": list(b.target_set),
        "slander_prob": b.slander_prob,
        "group": list(b.group),
        "designated_polluter": b.designated_polluter,
        "rotation_period": b.rotation_period,
    }


def _behavior_from_dict(d: dict) -> PeerBehavior:
    return PeerBehavior(
        kind=BehaviorKind(d["kind"]),
        loss_rate=d["loss_rate"],
        on_ratio=d["on_ratio"],
        target_set=tuple(d["target_set"]),
        slander_prob=d["slander_prob"],
        group=tuple(d["group"]),
        designated_polluter=d["designated_polluter"],
        rotation_period=d["rotation_period"],
    )


def _params_to_dict(p: TrustParams) -> dict:
    return {
        "cf_model": p.cf_model.value,
        "cf_constant": p.cf_constant,
        "c": p.c,
        "beta": p.beta,
        "dt_model": p.dt_model.value,
        "rho": p.rho,
        "eta": p.eta,
        "forgetting": p.forgetting,
        "forgiving": p.forgiving,
        "theta_p": p.theta_p,
        "theta_g": p.theta_g,
        "chi": p.chi,
        "k_providers": p.k_providers,
        "k_recommenders": p.k_recommenders,
        "cold_start_trust": p.cold_start_trust,
    }


def _params_from_dict(d: dict) -> TrustParams:
    d = dict(d)
    d["cf_model"] = CFModel(d["cf_model"])
    d["dt_model"] = DTModel(d["dt_model"])
    return TrustParams(**d)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "name": cfg.name,
        "n_peers": cfg.n_peers,
        "rounds": cfg.rounds,
        "seed": cfg.seed,
        "behavior_mix": [
            {"behavior": _behavior_to_dict(b), "count": n} for b, n in cfg.behavior_mix
        ],
        "params": _params_to_dict(cfg.params),
        "param_overrides": [
            [pid, _params_to_dict(p)] for pid, p in cfg.param_overrides
        ],
        "loss_rate_range": list(cfg.loss_rate_range) if cfg.loss_rate_range else None,
        "observed_pairs": [list(pair) for pair in cfg.observed_pairs],
        "policy": {"kind": cfg.policy.kind.value, "theta": cfg.policy.theta},
        "requesters": list(cfg.requesters),
        "candidate_map": [[pid, list(c)] for pid, c in cfg.candidate_map],
        "request_budgets": [list(rb) for rb in cfg.request_budgets],
        "warmup_rounds": cfg.warmup_rounds,
        "warmup_budget": cfg.warmup_budget,
        "detection_threshold": cfg.detection_threshold,
        "measure_from": cfg.measure_from,
        "ads_per_round": cfg.ads_per_round,
    }


def config_from_dict(d: dict) -> ScenarioConfig:
    known = {
        "name", "n_peers", "rounds", "seed", "behavior_mix", "params",
        "param_overrides", "loss_rate_range", "observed_pairs", "policy",
        "requesters", "candidate_map", "request_budgets", "warmup_rounds",
        "warmup_budget", "detection_threshold", "measure_from", "ads_per_round",
    }
    unknown = set(d) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    missing = known - set(d)
    if missing:
        raise ValueError(f"missing config fields: {sorted(missing)}")
    cfg = ScenarioConfig(
        name=d["name"],
        n_peers=d["n_peers"],
        rounds=d["rounds"],
        seed=d["seed"],
        behavior_mix=tuple(
            (_behavior_from_dict(e["behavior"]), e["count"]) for e in d["behavior_mix"]
        ),
        params=_params_from_dict(d["params"]),
        param_overrides=tuple(
            (pid, _params_from_dict(p)) for pid, p in d["param_overrides"]
        ),
        loss_rate_range=tuple(d["loss_rate_range"]) if d["loss_rate_range"] else None,
        observed_pairs=tuple((o, s) for o, s in d["observed_pairs"]),
        policy=Policy(PolicyKind(d["policy"]["kind"]), d["policy"]["theta"]),
        requesters=tuple(d["requesters"]),
        candidate_map=tuple((pid, tuple(c)) for pid, c in d["candidate_map"]),
        request_budgets=tuple((pid, b) for pid, b in d["request_budgets"]),
        warmup_rounds=d["warmup_rounds"],
        warmup_budget=d["warmup_budget"],
        detection_threshold=d["detection_threshold"],
        measure_from=d["measure_from"],
        ads_per_round=d["ads_per_round"],
    )
    cfg.validate()
    return cfg


def dump_config(cfg: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(cfg), sort_keys=True, indent=2) + "\n"


def save_config(cfg: ScenarioConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_config(cfg))


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def config_digest(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(dump_config(cfg).encode("utf-8")).hexdigest()


# --- experiment builders -----------------------------------------------------

def _base_params(**kwargs) -> TrustParams:
    defaults = dict(
        cf_model=CFModel.CFDA,
        c=1.0,
        dt_model=DTModel.PDTM,
        rho=math.log(2.0),  # ln(1 + 1/eta) with eta = 1: the boundary setting
        eta=1.0,
        theta_p=0.5,
        theta_g=0.9,
        chi=0.5,
    )
    defaults.update(kwargs)
    return TrustParams(**defaults)


def _pop_overrides(overrides: dict, allowed: Sequence[str]) -> dict:
    unknown = set(overrides) - set(allowed)
    if unknown:
        raise ValueError(f"unsupported overrides: {sorted(unknown)}")
    return overrides


def _sample_candidates(
    rng: random.Random, pid: int, pool: Sequence[int], count: int
) -> Tuple[int, ...]:
    eligible = [p for p in pool if p != pid]
    if count >= len(eligible):
        return tuple(eligible)
    return tuple(sorted(rng.sample(eligible, count)))


def build_e1(**overrides) -> ScenarioConfig:
    """Constant vs dynamic confidence weighting under bad-mouthing.

    Two observers watch one spotless uploader whose reputation is slandered
    by 8 of 10 recommenders. Peer 0 uses the dynamic weight, peer 1 a fixed
    0.5. Transactions are forced (thresholds zeroed) so trust trajectories
    run for the full horizon.
    """
    ov = _pop_overrides(overrides, ("seed", "rounds"))
    seed = ov.get("seed", 1)
    rounds = ov.get("rounds", 50)
    n_recommenders = 10
    n_liars = 8
    subject = 2
    recommenders = tuple(range(3, 3 + n_recommenders))
    params = _base_params(
        dt_model=DTModel.DTMA,
        theta_p=0.0,
        theta_g=0.0,
        k_providers=1 + n_recommenders,
        k_recommenders=n_recommenders,
    )
    ccfs = replace(params, cf_model=CFModel.CONSTANT, cf_constant=0.5)
    mix = (
        (PeerBehavior.honest(), 3),
        (PeerBehavior.badmouther((subject,), slander_prob=1.0), n_liars),
        (PeerBehavior.honest(), n_recommenders - n_liars),
    )
    observer_candidates = (subject,) + recommenders
    cand_map = [(0, observer_candidates), (1, observer_candidates)]
    cand_map += [(k, (subject,)) for k in recommenders]
    return ScenarioConfig(
        name="e1",
        n_peers=3 + n_recommenders,
        rounds=rounds,
        seed=seed,
        behavior_mix=mix,
        params=params,
        param_overrides=((1, ccfs),),
        observed_pairs=((0, subject), (1, subject)),
        requesters=(0, 1) + recommenders,
        candidate_map=tuple(cand_map),
        request_budgets=((0, 1 + n_recommenders), (1, 1 + n_recommenders)),
        detection_threshold=0.5,
        measure_from=0,
    )


def build_e2(**overrides) -> ScenarioConfig:
    """Direct trust models against on-off uploaders at 50/20/10 percent.

    One victim scores with the exponential-penalty model, a second with the
    plain clean/total ratio; both receive one chunk per attacker per round.
    """
    ov = _pop_overrides(overrides, ("seed", "rounds"))
    seed = ov.get("seed", 1)
    rounds = ov.get("rounds", 50)
    attackers = (2, 3, 4)
    params = _base_params(theta_p=0.0, theta_g=0.0, k_providers=3)
    dtma = replace(params, dt_model=DTModel.DTMA)
    mix = (
        (PeerBehavior.honest(), 2),
        (PeerBehavior.onoff(0.5), 1),
        (PeerBehavior.onoff(0.2), 1),
        (PeerBehavior.onoff(0.1), 1),
    )
    observed = tuple((v, a) for v in (0, 1) for a in attackers)
    return ScenarioConfig(
        name="e2",
        n_peers=5,
        rounds=rounds,
        seed=seed,
        behavior_mix=mix,
        params=params,
        param_overrides=((1, dtma),),
        observed_pairs=observed,
        requesters=(0, 1),
        candidate_map=((0, attackers), (1, attackers)),
        request_budgets=((0, 3), (1, 3)),
        detection_threshold=0.5,
        measure_from=0,
    )


# Loss-sweep tuning: slow forgetting keeps honest evidence deep; the
# forgiving rate is set so light loss leaves honest trust above the
# unconditional-accept threshold while sustained loss pulls it through the
# gray zone, where only probabilistic probing keeps serving. Other
# experiments pick their own decay rates.
_POP_FORGETTING = 0.01
_POP_FORGIVING = 0.066
_POP_ROUNDS = 44
_POP_WARMUP = 24
_POP_WARMUP_BUDGET = 3
_POP_CANDIDATES = 10
_POP_REQUESTERS = 150


def _population_config(
    name: str,
    seed: int,
    rounds: int,
    n_honest: int,
    n_persistent: int,
    n_onoff: int,
    loss_range: Tuple[float, float],
    policy: Policy,
    warmup_rounds: int = _POP_WARMUP,
    warmup_budget: int = _POP_WARMUP_BUDGET,
    measure_from: Optional[int] = None,
    forgetting: float = _POP_FORGETTING,
    forgiving: float = _POP_FORGIVING,
    ads_per_round: Optional[int] = None,
) -> ScenarioConfig:
    n_peers = n_honest + n_persistent + n_onoff
    if policy.kind is PolicyKind.PEERTRUST:
        params = TrustParams(
            cf_model=CFModel.CONSTANT,
            cf_constant=0.5,
            dt_model=DTModel.DTMA,
            theta_p=0.0,
            theta_g=1.0,
            k_providers=_POP_CANDIDATES,
            k_recommenders=5,
        )
    else:
        params = _base_params(
            forgetting=forgetting,
            forgiving=forgiving,
            k_providers=_POP_CANDIDATES,
            k_recommenders=5,
        )
    mix = (
        (PeerBehavior.honest(), n_honest),
        (PeerBehavior.persistent(), n_persistent),
        (PeerBehavior.onoff(0.2), n_onoff),
    )
    requesters = tuple(range(min(_POP_REQUESTERS, n_honest)))
    rng = random.Random(f"{seed}:topology:{name}")
    pool = list(range(n_peers))
    cand_map = tuple(
        (rid, _sample_candidates(rng, rid, pool, _POP_CANDIDATES)) for rid in requesters
    )
    return ScenarioConfig(
        name=name,
        n_peers=n_peers,
        rounds=rounds,
        seed=seed,
        behavior_mix=mix,
        params=params,
        loss_rate_range=loss_range,
        policy=policy,
        requesters=requesters,
        candidate_map=cand_map,
        warmup_rounds=warmup_rounds,
        warmup_budget=warmup_budget,
        detection_threshold=0.5,
        measure_from=measure_from,
        ads_per_round=ads_per_round,
    )


def _parse_policy(value, default: Policy, single_theta: float) -> Policy:
    if value is None:
        return default
    if isinstance(value, Policy):
        return value
    if value == "proposed":
        return Policy.proposed()
    if value == "single":
        return Policy.single(single_theta)
    if value == "peertrust":
        return Policy.peertrust()
    raise ValueError(f"unknown policy {value!r}")


def build_e3(**overrides) -> ScenarioConfig:
    """Double thresholds vs a single 0.8 threshold under uniform loss.

    500 peers, 20% malicious (half persistent, half 20% on-off). The loss
    rate applies identically to every honest upload; sweep it to compare
    how each policy treats good peers with degraded records.
    """
    ov = _pop_overrides(overrides, ("seed", "rounds", "loss_rate", "policy"))
    seed = ov.get("seed", 1)
    rounds = ov.get("rounds", _POP_ROUNDS)
    loss = ov.get("loss_rate", 0.02)
    policy = _parse_policy(ov.get("policy"), Policy.proposed(), 0.8)
    return _population_config(
        name="e3",
        seed=seed,
        rounds=rounds,
        n_honest=400,
        n_persistent=50,
        n_onoff=50,
        loss_range=(loss, loss),
        policy=policy,
    )


def build_e4(**overrides) -> ScenarioConfig:
    """Collaborative attack on one victim: rotating or static polluter duty.

    The victim receives one chunk from every group member each round;
    members exchange chunks among themselves so each has first-hand history
    to lie about. Transactions are forced so trajectories run to the end.
    """
    ov = _pop_overrides(overrides, ("seed", "rounds", "mode", "group_size"))
    seed = ov.get("seed", 1)
    rounds = ov.get("rounds", 200)
    mode = ov.get("mode", "rotating")
    group_size = ov.get("group_size", 10)
    if mode not in ("rotating", "static"):
        raise ValueError(f"unknown collaboration mode {mode!r}")
    members = tuple(range(1, group_size + 1))
    if mode == "rotating":
        behavior = PeerBehavior.collab_rotating(members, period=1)
        observed = ((0, members[0]),)
    else:
        behavior = PeerBehavior.collab_static(members, designated=members[0])
        observed = ((0, members[0]), (0, members[1]))
    params = _base_params(
        theta_p=0.0,
        theta_g=0.0,
        k_providers=group_size,
        k_recommenders=group_size,
    )
    member_k1 = replace(params, k_providers=1)
    cand_map = [(0, members)]
    cand_map += [(m, tuple(x for x in members if x != m)) for m in members]
    return ScenarioConfig(
        name="e4",
        n_peers=1 + group_size,
        rounds=rounds,
        seed=seed,
        behavior_mix=((PeerBehavior.honest(), 1), (behavior, group_size)),
        params=params,
        param_overrides=tuple((m, member_k1) for m in members),
        observed_pairs=observed,
        requesters=(0,) + members,
        candidate_map=tuple(cand_map),
        request_budgets=((0, group_size),),
        detection_threshold=0.5,
        measure_from=0,
    )


def build_e5(**overrides) -> ScenarioConfig:
    """Do high-trust peers attract more data requests?

    100 providers with spread trust profiles (lossy honest peers plus both
    attacker types) serve 30 active requesters. A newcomer (the last peer)
    downloads only from the requesters, so its view of every provider is
    built purely from recommendations; final trust from that viewpoint is
    compared against how many requests each provider served. Per-round
    advertisement subsets spread demand across providers in proportion to
    their local trust ranking.
    """
    ov = _pop_overrides(overrides, ("seed", "rounds"))
    seed = ov.get("seed", 1)
    rounds = ov.get("rounds", 50)
    n_honest_prov, n_persistent, n_onoff, n_req = 60, 20, 20, 30
    providers = tuple(range(100))
    reqs = tuple(range(100, 100 + n_req))
    newcomer = 100 + n_req
    params = _base_params(
        forgetting=0.0,
        forgiving=0.15,
        k_providers=12,
        k_recommenders=10,
    )
    newcomer_params = replace(params, k_providers=n_req)
    mix = (
        (PeerBehavior.honest(), n_honest_prov),
        (PeerBehavior.persistent(), n_persistent),
        (PeerBehavior.onoff(0.2), n_onoff),
        (PeerBehavior.honest(), n_req),
        (PeerBehavior.honest(), 1),
    )
    rng = random.Random(f"{seed}:topology:e5")
    cand_map = [
        (rid, _sample_candidates(rng, rid, providers, 20)) for rid in reqs
    ]
    cand_map.append((newcomer, reqs))
    return ScenarioConfig(
        name="e5",
        n_peers=newcomer + 1,
        rounds=rounds,
        seed=seed,
        behavior_mix=mix,
        params=params,
        param_overrides=((newcomer, newcomer_params),),
        loss_rate_range=(0.0, 0.08),
        observed_pairs=tuple((newcomer, p) for p in providers),
        requesters=reqs + (newcomer,),
        candidate_map=tuple(cand_map),
        request_budgets=tuple((rid, 3) for rid in reqs) + ((newcomer, n_req),),
        warmup_rounds=10,
        warmup_budget=3,
        detection_threshold=0.5,
        ads_per_round=6,
    )


def build_e6(**overrides) -> ScenarioConfig:
    """Proposed pipeline vs the fixed-weight single-threshold baseline while
    the malicious fraction sweeps from 0 to 50 percent.

    Per-peer loss is drawn uniformly from [0%, 2%]; half the malicious peers
    pollute persistently, half run a 20% on-off pattern. Malicious ids are
    scattered across the population so deterministic tie-breaks carry no
    information about who is clean. The whole run is measured: the decisive
    difference is how long each pipeline keeps feeding from an on-off
    uploader it has already been burned by.
    """
    ov = _pop_overrides(
        overrides, ("seed", "rounds", "malicious_fraction", "policy")
    )
    seed = ov.get("seed", 1)
    rounds = ov.get("rounds", 56)
    fraction = ov.get("malicious_fraction", 0.2)
    if not 0.0 <= fraction <= 0.9:
        raise ValueError("malicious_fraction must lie in [0, 0.9]")
    policy = _parse_policy(ov.get("policy"), Policy.proposed(), PEERTRUST_THETA)
    n_peers = 500
    n_malicious = round(n_peers * fraction)
    n_persistent = n_malicious // 2
    n_onoff = n_malicious - n_persistent

    if policy.kind is PolicyKind.PEERTRUST:
        params = TrustParams(
            cf_model=CFModel.CONSTANT,
            cf_constant=0.5,
            dt_model=DTModel.DTMA,
            theta_p=0.0,
            theta_g=1.0,
            k_providers=_POP_CANDIDATES,
            k_recommenders=5,
        )
    else:
        params = _base_params(
            forgetting=0.0,
            forgiving=0.03,
            k_providers=_POP_CANDIDATES,
            k_recommenders=5,
        )

    layout_rng = random.Random(f"{seed}:layout:e6")
    ids = list(range(n_peers))
    malicious = sorted(layout_rng.sample(ids, n_malicious))
    persistent_ids = set(sorted(layout_rng.sample(malicious, n_persistent)))
    onoff_ids = set(malicious) - persistent_ids
    behaviors: List[PeerBehavior] = []
    for pid in ids:
        if pid in persistent_ids:
            behaviors.append(PeerBehavior.persistent())
        elif pid in onoff_ids:
            behaviors.append(PeerBehavior.onoff(0.2))
        else:
            behaviors.append(PeerBehavior.honest())
    mix: List[Tuple[PeerBehavior, int]] = []
    for behavior in behaviors:
        if mix and mix[-1][0] == behavior:
            mix[-1] = (behavior, mix[-1][1] + 1)
        else:
            mix.append((behavior, 1))

    honest_ids = [pid for pid in ids if pid not in persistent_ids and pid not in onoff_ids]
    requesters = tuple(honest_ids[:_POP_REQUESTERS])
    rng = random.Random(f"{seed}:topology:e6")
    cand_map = tuple(
        (rid, _sample_candidates(rng, rid, ids, _POP_CANDIDATES)) for rid in requesters
    )
    return ScenarioConfig(
        name="e6",
        n_peers=n_peers,
        rounds=rounds,
        seed=seed,
        behavior_mix=tuple(mix),
        params=params,
        loss_rate_range=(0.0, 0.02),
        policy=policy,
        requesters=requesters,
        candidate_map=cand_map,
        warmup_rounds=24,
        warmup_budget=3,
        detection_threshold=0.5,
        measure_from=0,
    )


_BUILDERS = {
    "e1": build_e1,
    "e2": build_e2,
    "e3": build_e3,
    "e4": build_e4,
    "e5": build_e5,
    "e6": build_e6,
}


def build_experiment(exp_id: str, **overrides) -> ScenarioConfig:
    """Deterministic config for one of the canned experiments e1..e6."""
    key = exp_id.lower()
    if key not in _BUILDERS:
        raise KeyError(f"unknown experiment id {exp_id!r}")
    cfg = _BUILDERS[key](**overrides)
    cfg.validate()
    return cfg


# --- execution ---------------------------------------------------------------

def build_world(cfg: ScenarioConfig) -> World:
    """Materialize a World from a validated config."""
    cfg.validate()
    if cfg.policy.kind is PolicyKind.PROPOSED:
        single = None
    elif cfg.policy.kind is PolicyKind.SINGLE:
        single = cfg.policy.theta
    else:
        single = PEERTRUST_THETA
    world = World(
        seed=cfg.seed,
        detection_threshold=(
            cfg.detection_threshold
            if cfg.detection_threshold is not None
            else cfg.params.theta_p
        ),
        warmup_rounds=cfg.warmup_rounds,
        warmup_budget=cfg.warmup_budget,
        single_threshold=single,
        ads_per_round=cfg.ads_per_round,
    )
    behaviors: List[PeerBehavior] = []
    for behavior, count in cfg.behavior_mix:
        behaviors.extend([behavior] * count)
    loss_rng = random.Random(f"{cfg.seed}:loss")
    if cfg.loss_rate_range is not None:
        lo, hi = cfg.loss_rate_range
        lossy = (BehaviorKind.HONEST, BehaviorKind.BADMOUTH)
        behaviors = [
            replace(b, loss_rate=loss_rng.uniform(lo, hi)) if b.kind in lossy else b
            for b in behaviors
        ]
    overrides = dict(cfg.param_overrides)
    budgets = dict(cfg.request_budgets)
    cand_map = dict(cfg.candidate_map)
    requesters = set(cfg.requesters)
    for pid, behavior in enumerate(behaviors):
        world.add_peer(
            pid,
            behavior,
            overrides.get(pid, cfg.params),
            is_requester=pid in requesters,
            budget=budgets.get(pid, 1),
            candidates=cand_map.get(pid, ()),
        )
    return world


def run_scenario(cfg: ScenarioConfig) -> MetricsReport:
    """Run the configured world for cfg.rounds and collect the report."""
    world = build_world(cfg)
    trajectories: Dict[Tuple[int, int], List] = {pair: [] for pair in cfg.observed_pairs}
    for _ in range(cfg.rounds):
        run_round(world)
        for observer, subject in cfg.observed_pairs:
            comp = evaluate_components(world, observer, subject)
            trajectories[(observer, subject)].append(
                (world.round, comp.direct, comp.indirect, comp.alpha, comp.combined)
            )
    measure_from = cfg.measure_from if cfg.measure_from is not None else cfg.warmup_rounds
    measured_rounds = max(1, cfg.rounds - measure_from)
    clean_measured: Dict[int, int] = {}
    polluted_total: Dict[int, int] = {}
    served: Dict[int, int] = {}
    for ev in world.event_log:
        served[ev.provider] = served.get(ev.provider, 0) + 1
        if ev.quality is ChunkQuality.POLLUTED:
            polluted_total[ev.requester] = polluted_total.get(ev.requester, 0) + 1
        elif ev.round_no > measure_from:
            clean_measured[ev.requester] = clean_measured.get(ev.requester, 0) + 1
    summary = [
        PeerSummary(
            peer=pid,
            behavior=world.peers[pid].behavior.label,
            goodput=clean_measured.get(pid, 0) / measured_rounds,
            polluted_accepted=polluted_total.get(pid, 0),
            detection_round=world.detections.get(pid),
            requests_received=served.get(pid, 0),
        )
        for pid in sorted(world.peers)
    ]
    run_meta = {
        "name": cfg.name,
        "seed": cfg.seed,
        "rounds": cfg.rounds,
        "measure_from": measure_from,
        "config_digest": config_digest(cfg),
        "engine_version": __version__,
    }
    return MetricsReport(trajectories=trajectories, summary=summary, run_meta=run_meta)


def mean_requester_goodput(
    cfg: ScenarioConfig,
    report: MetricsReport,
    peers: Optional[Sequence[int]] = None,
) -> float:
    """Average goodput over the served population: the honest requesters by
    default, or an explicit peer subset."""
    if peers is None:
        honest = {s.peer for s in report.summary if s.behavior == "honest"}
        peers = [pid for pid in cfg.requesters if pid in honest]
    rows = {s.peer: s for s in report.summary}
    values = [rows[pid].goodput for pid in peers]
    return sum(values) / len(values) if values else 0.0
