from skyport.queueing.erlang import (
    ErlangMetrics, PenetrationReport, QueueSpec, TolerableRate,
    erlang_metrics, lambda_tolerable, market_penetration, service_rate_from_times,
)
from skyport.queueing.profiles import (
    DemandProfile, ProfileResult, hub_arrival_profiles, lambda_max, profiles_frame,
)

__all__ = [
    "DemandProfile", "ErlangMetrics", "PenetrationReport", "ProfileResult", "QueueSpec",
    "TolerableRate", "erlang_metrics", "hub_arrival_profiles", "lambda_max",
    "lambda_tolerable", "market_penetration", "profiles_frame", "service_rate_from_times",
]
