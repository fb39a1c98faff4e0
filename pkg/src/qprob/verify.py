"""Self-contained invariant suites behind the ``verify`` command.

Each check exercises one family of library guarantees on seeded random
instances and reports a pass flag plus a short deterministic detail string,
so that two runs with the same seed produce byte-identical reports no matter
how many workers integrate the stochastic ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import becsim, quarterlaw
from .events import DensityOperator, Observable, event_probability, union_probability
from .prospects import (
    CompositeState,
    dephase_modes,
    max_entangled_state,
    mode_pfq,
    product_state,
    prospect_probabilities,
)
from .sampling import (
    random_density,
    random_entangled_pure,
    random_observable,
    random_weights,
)
from .uncertain import ModeWeights, UncertainUnion, proposition_operator, uncertain_probability
from .linalg import trace


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    passed: bool
    detail: str


GROUPS = ("events", "uncertain", "prospects", "quarterlaw", "becsim")

_BELL_LIKE = np.array([0.5, 0.5, 0.5, -0.5], dtype=np.complex128)


def _bell_like_state() -> CompositeState:
    return CompositeState(
        rho=DensityOperator(np.outer(_BELL_LIKE, _BELL_LIKE.conj())), dim_a=2, dim_b=2
    )


def _check_projective_measure(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst_sum = 0.0
    worst_union = 0.0
    for dim in (2, 3, 4, 8):
        for _ in range(100):
            rho = random_density(rng, dim)
            obs = random_observable(rng, dim)
            probs = [event_probability(rho, obs, n) for n in range(dim)]
            if any(p < 0.0 or p > 1.0 for p in probs):
                return CheckResult("events", "projective-probability-measure", False, "probability outside [0, 1]")
            worst_sum = max(worst_sum, abs(sum(probs) - 1.0))
            half = list(range(dim // 2))
            union = union_probability(rho, obs, half)
            worst_union = max(worst_union, abs(union - sum(probs[n] for n in half)))
    passed = worst_sum < 1e-10 and worst_union < 1e-12
    return CheckResult(
        "events",
        "projective-probability-measure",
        passed,
        f"max |sum p - 1| = {worst_sum:.3e}, max additivity gap = {worst_union:.3e}",
    )


def _check_uncertain_trace(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for dim in (2, 3, 4):
        for _ in range(100):
            rho = random_density(rng, dim)
            union = UncertainUnion(random_observable(rng, dim), random_weights(rng, dim))
            direct = uncertain_probability(rho, union).p
            via_operator = trace(rho.matrix @ proposition_operator(union)).real
            worst = max(worst, abs(direct - via_operator))
    return CheckResult(
        "uncertain",
        "uncertain-trace-agreement",
        worst < 1e-12,
        f"max |p - trace route| = {worst:.3e}",
    )


def _check_uncertain_commuting(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for dim in (2, 3, 4):
        for _ in range(100):
            obs = Observable.standard(dim)
            rho = DensityOperator.diagonal(rng.dirichlet(np.ones(dim)))
            q = uncertain_probability(rho, UncertainUnion(obs, random_weights(rng, dim))).interference
            worst = max(worst, abs(q))
    return CheckResult(
        "uncertain",
        "interference-vanishes-for-commuting-state",
        worst < 1e-14,
        f"max |q| = {worst:.3e}",
    )


def _check_uncertain_witness(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    rho = DensityOperator.pure(plus)
    union = UncertainUnion(Observable.standard(2), ModeWeights.normalized([1.0, 1.0]))
    q = uncertain_probability(rho, union).interference
    return CheckResult(
        "uncertain",
        "uncertain-union-not-additive",
        abs(q) > 0.1,
        f"witness |q| = {abs(q):.6f}",
    )


def _check_prospect_oracle(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    state = _bell_like_state()
    result = prospect_probabilities(state, ModeWeights.normalized([1.0, 1.0]), mode="raw")
    p = result.p
    expected_p = np.array([0.5, 0.0])
    expected_f = np.array([0.25, 0.25])
    expected_q = np.array([0.25, -0.25])
    gap = max(
        float(np.max(np.abs(p - expected_p))),
        float(np.max(np.abs(result.f - expected_f))),
        float(np.max(np.abs(result.q - expected_q))),
    )
    return CheckResult(
        "prospects",
        "interference-decomposition-reference-values",
        gap < 1e-12,
        f"max deviation from reference triple = {gap:.3e}",
    )


def _check_prospect_axioms(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    # The injected-fault flag lands here: it perturbs the accumulated gap so
    # the normalization check is the one that reports the failure.
    worst = 1.0 if corrupt else 0.0
    for dim_a, dim_b in ((2, 2), (2, 3), (3, 3)):
        for _ in range(100):
            state = random_entangled_pure(rng, dim_a, dim_b)
            res = prospect_probabilities(state, random_weights(rng, dim_b), mode="normalized")
            worst = max(
                worst,
                abs(float(res.p.sum()) - 1.0),
                abs(float(res.f.sum()) - 1.0),
                abs(float(res.q.sum())),
                float(np.max(np.abs(res.p - res.f - res.q))),
            )
            if np.any(res.p < 0.0) or np.any(res.p > 1.0) or np.any(res.f < 0.0) or np.any(res.f > 1.0):
                return CheckResult("prospects", "probability-normalization", False, "family leaves [0, 1]")
            if np.any(np.abs(res.q) > 1.0):
                return CheckResult("prospects", "probability-normalization", False, "|q| exceeds 1")
    return CheckResult(
        "prospects",
        "probability-normalization",
        worst < 1e-10,
        f"max normalization gap = {worst:.3e}",
    )


def _check_zero_interference_product(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    # Raw interference need not vanish for a product state; the vanishing
    # theorem lives in the normalized families, where the sum rules force it.
    worst = 0.0
    for dim_a, dim_b in ((2, 2), (2, 3), (3, 3)):
        for _ in range(100):
            state = product_state(random_density(rng, dim_a), random_density(rng, dim_b))
            res = prospect_probabilities(state, random_weights(rng, dim_b), mode="normalized")
            worst = max(worst, float(np.max(np.abs(res.q))))
    return CheckResult(
        "prospects",
        "interference-vanishes-for-product-states",
        worst < 1e-12,
        f"max |q| over product states = {worst:.3e}",
    )


def _check_zero_interference_max_entangled(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for m in range(2, 7):
        state = max_entangled_state(m)
        for _ in range(50):
            res = prospect_probabilities(state, random_weights(rng, m), mode="raw")
            worst = max(worst, float(np.max(np.abs(res.q))))
    return CheckResult(
        "prospects",
        "interference-vanishes-for-maximally-entangled-states",
        worst < 1e-12,
        f"max |q| over maximally entangled states = {worst:.3e}",
    )


def _check_interference_witness(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    res = prospect_probabilities(_bell_like_state(), ModeWeights.normalized([1.0, 1.0]), mode="raw")
    peak = float(np.max(np.abs(res.q)))
    return CheckResult(
        "prospects",
        "entangled-state-interference-witness",
        peak > 0.1,
        f"witness max |q| = {peak:.6f}",
    )


def _check_decoherence_linearity(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    state = _bell_like_state()
    weights = ModeWeights.normalized([1.0, 1.0])
    dephased = dephase_modes(state)
    _, _, q_full = mode_pfq(state.matrix, 2, 2, weights)
    worst = 0.0
    for lam in (0.0, 0.25, 0.5, 1.0):
        matrix = (1.0 - lam) * dephased + lam * state.matrix
        _, _, q = mode_pfq(matrix, 2, 2, weights)
        worst = max(worst, float(np.max(np.abs(q - lam * q_full))))
    return CheckResult(
        "prospects",
        "interference-linear-under-dephasing",
        worst < 1e-12,
        f"max deviation from linearity = {worst:.3e}",
    )


def _check_quarter_law_closed(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for alpha in (0.3, 0.5, 1.0, 2.0, 5.0, 10.0):
        mu = float(rng.uniform(0.3, 10.0))
        split = quarterlaw.q_split_closed(quarterlaw.BetaPairDistribution.symmetric(alpha, mu))
        worst = max(worst, abs(split.q_plus - 0.25), abs(split.q_minus + 0.25))
    return CheckResult(
        "quarterlaw",
        "quarter-law-closed-form",
        worst == 0.0,
        f"max deviation from 1/4 = {worst:.3e}",
    )


def _check_quarter_law_quadrature(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dist = quarterlaw.BetaPairDistribution(
            alpha=float(rng.uniform(0.3, 10.0)),
            beta=float(rng.uniform(0.3, 10.0)),
            mu=float(rng.uniform(0.3, 10.0)),
            nu=float(rng.uniform(0.3, 10.0)),
            lambda_plus=0.5,
            lambda_minus=0.5,
        )
        closed = quarterlaw.q_split_closed(dist)
        numeric = quarterlaw.q_split_numeric(dist, tol=1e-10)
        worst = max(worst, abs(closed.q_plus - numeric.q_plus), abs(closed.q_minus - numeric.q_minus))
    return CheckResult(
        "quarterlaw",
        "quadrature-matches-closed-form",
        worst < 1e-8,
        f"max |closed - quadrature| = {worst:.3e}",
    )


def _check_density_normalization(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        dist = quarterlaw.BetaPairDistribution(
            alpha=float(rng.uniform(0.3, 10.0)),
            beta=float(rng.uniform(0.3, 10.0)),
            mu=float(rng.uniform(0.3, 10.0)),
            nu=float(rng.uniform(0.3, 10.0)),
            lambda_plus=0.5,
            lambda_minus=0.5,
        )
        worst = max(worst, abs(quarterlaw.pdf_normalization(dist, tol=1e-10) - 1.0))
    return CheckResult(
        "quarterlaw",
        "density-integrates-to-one",
        worst < 1e-8,
        f"max |integral - 1| = {worst:.3e}",
    )


def _check_critical_amplitude(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    value = becsim.critical_amplitude(-0.9, 0.0)
    return CheckResult(
        "becsim",
        "critical-amplitude-reference-value",
        abs(value - 0.28206) < 5e-4,
        f"critical amplitude at (-0.9, 0) = {value:.6f}",
    )


def _check_energy_conservation(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    worst = 0.0
    for b in (0.25, 0.5):
        params = becsim.BecParams(b=b, sigma=0.0, s0=-0.9, x0=0.0, dt=1e-3, t_max=100.0, n_paths=2)
        traj = becsim.integrate_deterministic(params)
        h = 0.5 * traj.s**2 - b * np.sqrt(1.0 - traj.s**2) * np.cos(traj.x)
        worst = max(worst, float(np.max(np.abs(h - h[0]))))
    return CheckResult(
        "becsim",
        "energy-conserved-along-noiseless-flow",
        worst < 1e-6,
        f"max energy drift = {worst:.3e}",
    )


def _check_regime_dichotomy(rng: np.random.Generator, corrupt: bool) -> CheckResult:
    sub = becsim.integrate_deterministic(
        becsim.BecParams(b=0.25, sigma=0.0, s0=-0.9, x0=0.0, dt=1e-3, t_max=200.0, n_paths=2)
    )
    sup = becsim.integrate_deterministic(
        becsim.BecParams(b=0.5, sigma=0.0, s0=-0.9, x0=0.0, dt=1e-3, t_max=200.0, n_paths=2)
    )
    sub_stays_negative = bool(np.all(sub.s < 0.0))
    sup_crosses = bool(np.any(sup.s >= 0.0))
    labels_ok = (
        becsim.regime_classify(0.25, -0.9, 0.0) is becsim.Regime.RABI
        and becsim.regime_classify(0.5, -0.9, 0.0) is becsim.Regime.JOSEPHSON
    )
    return CheckResult(
        "becsim",
        "subcritical-bounded-supercritical-crossing",
        sub_stays_negative and sup_crosses and labels_ok,
        f"subcritical max s = {float(np.max(sub.s)):.6f}, supercritical max s = {float(np.max(sup.s)):.6f}",
    )


def _check_ensemble_antisymmetry(rng: np.random.Generator, corrupt: bool, workers: int = 1) -> CheckResult:
    params = becsim.BecParams(
        b=0.25, sigma=0.1, s0=-0.9, x0=0.0, dt=1e-3, t_max=10.0, n_paths=200, seed=20240
    )
    result = becsim.ensemble_interference(params, workers=workers)
    gap = float(np.max(np.abs(result.q1 + result.q2)))
    sums = float(np.max(np.abs(result.p1 + result.p2 - 1.0)))
    return CheckResult(
        "becsim",
        "interference-factors-antisymmetric",
        gap < 1e-14 and sums == 0.0,
        f"max |q1 + q2| = {gap:.3e}",
    )


_CHECKS: tuple[tuple[str, Callable[..., CheckResult]], ...] = (
    ("events", _check_projective_measure),
    ("uncertain", _check_uncertain_trace),
    ("uncertain", _check_uncertain_commuting),
    ("uncertain", _check_uncertain_witness),
    ("prospects", _check_prospect_oracle),
    ("prospects", _check_prospect_axioms),
    ("prospects", _check_zero_interference_product),
    ("prospects", _check_zero_interference_max_entangled),
    ("prospects", _check_interference_witness),
    ("prospects", _check_decoherence_linearity),
    ("quarterlaw", _check_quarter_law_closed),
    ("quarterlaw", _check_quarter_law_quadrature),
    ("quarterlaw", _check_density_normalization),
    ("becsim", _check_critical_amplitude),
    ("becsim", _check_energy_conservation),
    ("becsim", _check_regime_dichotomy),
    ("becsim", _check_ensemble_antisymmetry),
)


def run_checks(
    seed: int,
    group_filter: str | None = None,
    corrupt: bool = False,
    workers: int = 1,
) -> list[CheckResult]:
    """Run the invariant suites, optionally restricted to one group.

    ``corrupt`` injects a deliberate fault into the prospect normalization
    check so the failure path of the reporting machinery can be exercised.
    """
    if group_filter is not None and group_filter not in GROUPS:
        raise ValueError(f"unknown check group {group_filter!r}; choose from {', '.join(GROUPS)}")
    results = []
    for index, (group, check) in enumerate(_CHECKS):
        if group_filter is not None and group != group_filter:
            continue
        rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, index])
        if check is _check_ensemble_antisymmetry:
            results.append(check(rng, corrupt, workers=workers))
        else:
            results.append(check(rng, corrupt))
    return results
