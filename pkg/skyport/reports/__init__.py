from skyport.reports.sweep import (
    DEFAULT_P_VALUES, DEFAULT_SCENARIOS, SweepResult, SweepSpec,
    arrival_table, penetration_table, run_sweep, summarize_variation, write_sweep,
)

__all__ = [
    "DEFAULT_P_VALUES", "DEFAULT_SCENARIOS", "SweepResult", "SweepSpec", "arrival_table",
    "penetration_table", "run_sweep", "summarize_variation", "write_sweep",
]
