from skyport.ingest.costs import (
    build_demand, build_ground_costs, build_instance, prune_zones, read_zones,
)
from skyport.ingest.geo import aerial_cost, aerial_cost_matrix
from skyport.ingest.trips import IngestConfig, IngestStats, TripRecord, TripTable, parse_trips

__all__ = [
    "IngestConfig", "IngestStats", "TripRecord", "TripTable",
    "aerial_cost", "aerial_cost_matrix", "build_demand", "build_ground_costs",
    "build_instance", "parse_trips", "prune_zones", "read_zones",
]
