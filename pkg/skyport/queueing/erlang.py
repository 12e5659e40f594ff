# File: skyport/queueing/erlang.py
"""M/M/c (Erlang-C) steady state for skyport pad capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

from skyport.errors import QueueUnstableError, ScenarioError, UndefinedInputError


@dataclass(frozen=True)
class QueueSpec:
    servers:      int = 12
    service_rate: float = 2.5          # μ, vehicles/hour per server
    wait_target:  float = 5.0 / 60.0   # W_q*, hours

    def __post_init__(self):
        if int(self.servers) != self.servers or self.servers < 1:
            raise ScenarioError(f"servers must be an integer >= 1, got {self.servers}")
        if not self.service_rate > 0:
            raise ScenarioError(f"service_rate must be > 0, got {self.service_rate}")
        if self.wait_target < 0:
            raise ScenarioError(f"wait_target must be >= 0, got {self.wait_target}")

    @property
    def capacity(self) -> float:
        return self.servers * self.service_rate


@dataclass(frozen=True)
class ErlangMetrics:
    p0:          float   # probability of an empty system
    lq:          float   # mean queue length
    wq:          float   # mean wait in queue (hours when rates are per hour)
    prob_wait:   float   # Erlang C: probability an arrival waits
    ls:          float
    ws:          float
    utilization: float   # ρ = λ / (cμ)


@dataclass(frozen=True)
class TolerableRate:
    value:      float
    floor:      int
    open_bound: bool = False   # True when the value is the stability supremum cμ


@dataclass(frozen=True)
class PenetrationReport:
    lambda_tol:    float
    lambda_max:    float
    penetration:   float | None
    full_coverage: bool = False

    @property
    def percent(self) -> float | None:
        if self.penetration is None:
            return None
        return round(100.0 * self.penetration, 2)


def erlang_metrics(lam: float, spec: QueueSpec) -> ErlangMetrics:
    """
    P0 = [Σ_{n<c} aⁿ/n! + aᶜ/(c!(1−ρ))]⁻¹,  Lq = P0·aᶜ·ρ / (c!(1−ρ)²),  Wq = Lq/λ
    with a = λ/μ, ρ = λ/(cμ).
    """
    c, mu = int(spec.servers), spec.service_rate
    if lam < 0:
        raise ScenarioError(f"arrival rate must be >= 0, got {lam}")
    if lam >= c * mu:
        raise QueueUnstableError(f"arrival rate {lam} >= capacity c·μ = {c * mu}")
    if lam == 0:
        return ErlangMetrics(p0=1.0, lq=0.0, wq=0.0, prob_wait=0.0, ls=0.0, ws=1.0 / mu, utilization=0.0)

    a = lam / mu
    rho = lam / (c * mu)
    # aⁿ/n! built iteratively
    term, head = 1.0, 1.0
    for n in range(1, c):
        term *= a / n
        head += term
    tail_term = term * a / c                       # aᶜ/c!
    p0 = 1.0 / (head + tail_term / (1.0 - rho))
    lq = p0 * tail_term * rho / (1.0 - rho) ** 2
    wq = lq / lam
    return ErlangMetrics(
        p0=p0,
        lq=lq,
        wq=wq,
        prob_wait=p0 * tail_term / (1.0 - rho),
        ls=lq + a,
        ws=wq + 1.0 / mu,
        utilization=rho,
    )


def lambda_tolerable(spec: QueueSpec, xtol: float = 1e-9) -> TolerableRate:
    """Largest λ whose Erlang-C wait stays within spec.wait_target (bisection)."""
    if spec.wait_target == 0:
        return TolerableRate(0.0, 0)
    upper = spec.capacity
    if math.isinf(spec.wait_target):
        return TolerableRate(upper, math.floor(upper), open_bound=True)

    def excess(lam: float) -> float:
        return erlang_metrics(lam, spec).wq - spec.wait_target

    hi = upper * (1.0 - 1e-12)
    if excess(hi) <= 0:
        return TolerableRate(upper, math.floor(upper), open_bound=True)
    root = bisect(excess, 0.0, hi, xtol=xtol)
    return TolerableRate(root, math.floor(root))


def market_penetration(lambda_tol: float, lambda_max: float) -> PenetrationReport:
    """λ^tol / λ_p^max; a zero peak means every arrival is served."""
    if lambda_max < 0:
        raise ScenarioError(f"lambda_max must be >= 0, got {lambda_max}")
    if lambda_max == 0:
        return PenetrationReport(lambda_tol, 0.0, None, full_coverage=True)
    ratio = lambda_tol / lambda_max
    return PenetrationReport(lambda_tol, lambda_max, ratio, full_coverage=ratio >= 1.0)


def service_rate_from_times(max_aerial_minutes: float, load_unload_minutes: float) -> float:
    """μ (vehicles/hour) for a round trip: 2·aerial + 2·load/unload minutes."""
    if max_aerial_minutes < 0 or load_unload_minutes < 0:
        raise ScenarioError("service times must be >= 0")
    service = 2.0 * max_aerial_minutes + 2.0 * load_unload_minutes
    if service <= 0:
        raise UndefinedInputError("round-trip service time is zero")
    return 60.0 / service
