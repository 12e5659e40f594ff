import json
import logging

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from skyport.cli import EXIT_INPUT, EXIT_SOLVER, cli, parse_p_values
from skyport.models import ProblemInstance, Zone
from skyport.serialization import dump_instance, load_instance, load_solution


@pytest.fixture(autouse=True)
def _detach_log_handlers():
    yield
    logger = logging.getLogger("skyport")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def instance_file(tmp_path, tiny_instance):
    path = tmp_path / "instance.json"
    path.write_text(dump_instance(tiny_instance))
    return path


@pytest.fixture
def airport_trips(tmp_path):
    path = tmp_path / "airport_trips.csv"
    path.write_text(
        "pickup_datetime,dropoff_datetime,PULocationID,DOLocationID\n"
        "2018-01-01 08:10:00,2018-01-01 08:40:00,1,9\n"
        "2018-01-01 08:20:00,2018-01-01 08:40:00,2,9\n"
        "2018-01-01 08:55:00,2018-01-01 09:25:00,1,9\n"
    )
    return path


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)


def result_row(output: str) -> list[str]:
    """Fields of the line printed under the solve header."""
    lines = output.splitlines()
    header = next(k for k, line in enumerate(lines) if line.split()[:2] == ["p", "obj"])
    return lines[header + 1].split()


# ─── ingest ──────────────────────────────────────────────────────────

def test_ingest(runner, three_zone_files, tmp_path):
    trips, zones = three_zone_files
    out = tmp_path / "out"
    result = invoke(runner, "ingest", trips, zones, "--out-dir", out)
    assert result.exit_code == 0, result.output

    instance = load_instance((out / "instance.json").read_text())
    assert instance.origin_ids == (1, 2)
    assert instance.demand.tolist() == [[2], [1]]
    stats = json.loads((out / "ingest_stats.json").read_text())
    assert (stats["rows_read"], stats["malformed"], stats["retained"]) == (7, 1, 6)


def test_ingest_keep_zones(runner, three_zone_files, tmp_path):
    trips, zones = three_zone_files
    result = invoke(runner, "ingest", trips, zones, "--out-dir", tmp_path, "--keep-zones", 1)
    assert result.exit_code == 0, result.output
    assert load_instance((tmp_path / "instance.json").read_text()).origin_ids == (1,)


def test_ingest_missing_zones_file(runner, three_zone_files, tmp_path):
    trips, _ = three_zone_files
    result = invoke(runner, "ingest", trips, tmp_path / "nope.csv", "--out-dir", tmp_path)
    assert result.exit_code == EXIT_INPUT
    assert "zones file not found" in result.output


def test_ingest_bad_header(runner, three_zone_files, tmp_path):
    _, zones = three_zone_files
    trips = tmp_path / "bad.csv"
    trips.write_text("pickup_datetime,dropoff_datetime,PULocationID\n")
    result = invoke(runner, "ingest", trips, zones, "--out-dir", tmp_path)
    assert result.exit_code == EXIT_INPUT
    assert "DOLocationID" in result.output


def test_ingest_counts_undecodable_rows(runner, three_zone_files, tmp_path):
    _, zones = three_zone_files
    trips = tmp_path / "latin.csv"
    trips.write_bytes(
        b"pickup_datetime,dropoff_datetime,PULocationID,DOLocationID\n"
        b"2018-01-01 08:00:00,2018-01-01 08:30:00,1,9\n"
        b"2018-01-01 08:10:00,2018-01-01 08:30:00,7\xff,9\n"
        b"2018-01-01 08:10:00,2018-01-01 08:30:00,2,9\n"
    )
    result = invoke(runner, "ingest", trips, zones, "--out-dir", tmp_path / "out")
    assert result.exit_code == 0, result.output
    stats = json.loads((tmp_path / "out" / "ingest_stats.json").read_text())
    assert (stats["malformed"], stats["retained"]) == (1, 2)


def test_ingest_unwritable_out_dir(runner, three_zone_files, tmp_path):
    trips, zones = three_zone_files
    blocker = tmp_path / "taken"
    blocker.write_text("not a directory")
    result = invoke(runner, "ingest", trips, zones, "--out-dir", blocker)
    assert result.exit_code == EXIT_INPUT


# ─── solve ───────────────────────────────────────────────────────────

def test_solve_without_hubs(runner, instance_file, tmp_path):
    out = tmp_path / "p0.json"
    result = invoke(runner, "solve", instance_file, "--p", 0, "--out", out)
    assert result.exit_code == 0, result.output
    row = result_row(result.output)
    # p, objective (M), % decrease, iterations, time, direct, hubs
    assert row[0] == "0" and row[2] == "-" and row[5] == "2" and row[6] == "-"
    assert load_solution(out.read_text()).hubs == ()


def test_solve_one_hub(runner, instance_file, tmp_path):
    out = tmp_path / "p1.json"
    result = invoke(runner, "solve", instance_file, "--p", 1, "--out", out, "--no-meta")
    assert result.exit_code == 0, result.output
    row = result_row(result.output)
    assert row[2] == "50.00" and row[4] == "-" and row[6] == "2"
    doc = json.loads(out.read_text())
    assert doc["hubs"] == [2] and doc["objective"] == 190.0
    assert "wall_time" not in doc["meta"]


@pytest.mark.parametrize("method", ["bf", "ls"])
def test_solve_methods_agree(runner, instance_file, tmp_path, method):
    out = tmp_path / f"{method}.json"
    result = invoke(runner, "solve", instance_file, "--p", 2, "--alpha", 10, "--beta", 1.1,
                    "--method", method, "--out", out)
    assert result.exit_code == 0, result.output
    assert load_solution(out.read_text()).hubs == (1, 2)


def test_solve_p_above_candidates(runner, instance_file, tmp_path):
    result = invoke(runner, "solve", instance_file, "--p", 3, "--out", tmp_path / "x.json")
    assert result.exit_code == EXIT_INPUT
    assert "exceeds" in result.output


def test_solve_unroutable_pair(runner, tiny_instance, tmp_path):
    ground = tiny_instance.ground_cost.copy()
    ground[0, 2] = np.nan
    broken = ProblemInstance(tiny_instance.origins, tiny_instance.airports, ground,
                             tiny_instance.aerial_cost, tiny_instance.demand)
    path = tmp_path / "broken.json"
    path.write_text(dump_instance(broken))

    result = invoke(runner, "solve", path, "--p", 0, "--out", tmp_path / "x.json")
    assert result.exit_code == EXIT_SOLVER
    assert "(1 → 9)" in result.output

    # hub 2 rescues the pair
    result = invoke(runner, "solve", path, "--p", 1, "--out", tmp_path / "y.json")
    assert result.exit_code == 0, result.output


def test_solve_missing_instance(runner, tmp_path):
    result = invoke(runner, "solve", tmp_path / "missing.json", "--p", 1)
    assert result.exit_code == EXIT_INPUT
    assert "instance file not found" in result.output


def test_config_file_sets_defaults(runner, instance_file, tmp_path):
    config = tmp_path / "run.env"
    config.write_text("alpha=10\nbeta=1.1\np=1\n")
    out = tmp_path / "sol.json"
    result = invoke(runner, "--config", config, "solve", instance_file, "--out", out)
    assert result.exit_code == 0, result.output
    # at α=10, β=1.1 hub 1 beats hub 2
    assert load_solution(out.read_text()).hubs == (1,)

    result = invoke(runner, "--config", config, "solve", instance_file, "--p", 0, "--out", out)
    assert result.exit_code == 0, result.output
    assert load_solution(out.read_text()).hubs == ()


# ─── sweep ───────────────────────────────────────────────────────────

def test_parse_p_values():
    assert parse_p_values("0-3") == (0, 1, 2, 3)
    assert parse_p_values("0,2,5") == (0, 2, 5)
    assert parse_p_values("4") == (4,)


def test_sweep(runner, instance_file, airport_trips, tmp_path):
    out = tmp_path / "sweep"
    result = invoke(runner, "sweep", instance_file, "--scenario", "0,1", "--scenario", "10,1.1",
                    "--p-values", "0-2", "--trips", airport_trips, "--out-dir", out, "--no-meta")
    assert result.exit_code == 0, result.output
    for name in ("sweep_a0_b1.csv", "sweep_a10_b1.1.csv", "normalized_objective.csv",
                 "direct_connections.csv", "max_arrival.csv", "market_penetration.csv"):
        assert (out / name).is_file(), name
    assert (out / "solutions" / "a10_b1.1_p2.json").is_file()


def test_sweep_reports_failed_cells(runner, instance_file, tmp_path):
    result = invoke(runner, "sweep", instance_file, "--scenario", "0,1", "--p-values", "0,3",
                    "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    assert "1 cells failed" in result.output


def test_sweep_applies_trip_duration_bounds(runner, instance_file, airport_trips, tmp_path):
    out = tmp_path / "sweep"
    args = ["sweep", instance_file, "--scenario", "0,1", "--p-values", "1",
            "--trips", airport_trips, "--out-dir", out, "--no-meta"]
    assert invoke(runner, *args).exit_code == 0
    # hub 2: two arrivals in hour 8
    assert pd.read_csv(out / "max_arrival.csv")["a0_b1"].tolist() == [2.0]

    # the two 30 min trips from zone 1 fall outside the bounds
    assert invoke(runner, *args, "--max-trip-minutes", 25).exit_code == 0
    assert pd.read_csv(out / "max_arrival.csv")["a0_b1"].tolist() == [1.0]


@pytest.mark.parametrize("tie_break, direct", [("direct-then-lowest-id", 1), ("hub-then-lowest-id", 0)])
def test_sweep_tie_break(runner, tmp_path, tie_break, direct):
    # direct 10 min, via its own hub 0 + 10 min
    instance = ProblemInstance((Zone(1),), (Zone(9, is_airport=True),),
                               np.array([[0.0, 10.0]]), np.array([[10.0]]), np.array([[5]]))
    path = tmp_path / "tie.json"
    path.write_text(dump_instance(instance))
    out = tmp_path / "sweep"
    result = invoke(runner, "sweep", path, "--scenario", "0,1", "--p-values", "1",
                    "--tie-break", tie_break, "--out-dir", out)
    assert result.exit_code == 0, result.output
    assert json.loads((out / "solutions" / "a0_b1_p1.json").read_text())["direct_count"] == direct


def test_sweep_bad_scenario(runner, instance_file, tmp_path):
    result = runner.invoke(cli, ["sweep", str(instance_file), "--scenario", "ten", "--out-dir", str(tmp_path)])
    assert result.exit_code == 2


# ─── analyze ─────────────────────────────────────────────────────────

def test_analyze_reference_preset(runner, instance_file, airport_trips, tmp_path):
    solution = tmp_path / "p1.json"
    assert invoke(runner, "solve", instance_file, "--p", 1, "--out", solution).exit_code == 0

    out = tmp_path / "analysis"
    result = invoke(runner, "analyze", instance_file, solution, airport_trips,
                    "--reference-preset", "--out-dir", out)
    assert result.exit_code == 0, result.output

    doc = json.loads((out / "penetration.json").read_text())
    assert doc["hubs"] == [2]
    assert doc["lambda_tol_floor"] == 24
    assert doc["lambda_max"] == 2.0
    assert doc["percent"] == 1200.0 and doc["full_coverage"]
    assert (doc["routed_trips"], doc["skipped_trips"], doc["days"]) == (3, 0, 1)
    assert (out / "profiles.csv").read_text().startswith("hub,hour_0,")


def test_analyze_default_service_rate(runner, instance_file, airport_trips, tmp_path):
    solution = tmp_path / "p1.json"
    invoke(runner, "solve", instance_file, "--p", 1, "--out", solution)
    result = invoke(runner, "analyze", instance_file, solution, airport_trips, "--out-dir", tmp_path)
    assert result.exit_code == 0, result.output
    doc = json.loads((tmp_path / "penetration.json").read_text())
    # hub 2 flies 10 min to the airport: 60 / (2·10 + 2·2)
    assert doc["service_rate"] == pytest.approx(2.5)


@pytest.mark.parametrize("extra, hour", [((), 9), (("--beta", 1), 8)])
def test_analyze_defaults_to_solution_scenario(runner, instance_file, tmp_path, extra, hour):
    solution = tmp_path / "b11.json"
    assert invoke(runner, "solve", instance_file, "--beta", 1.1, "--p", 1, "--out", solution).exit_code == 0
    assert load_solution(solution.read_text()).meta.beta == 1.1

    trips = tmp_path / "late.csv"
    trips.write_text(
        "pickup_datetime,dropoff_datetime,PULocationID,DOLocationID\n"
        "2018-01-01 08:53:30,2018-01-01 09:20:00,2,9\n"
    )
    out = tmp_path / "analysis"
    result = invoke(runner, "analyze", instance_file, solution, trips, *extra, "--out-dir", out)
    assert result.exit_code == 0, result.output

    # 6 min access to hub 1: 6.6 min at β = 1.1 crosses 09:00
    profiles = pd.read_csv(out / "profiles.csv").set_index("hub")
    assert profiles.loc[1, f"hour_{hour}"] == 1
    doc = json.loads((out / "penetration.json").read_text())
    assert doc["hubs"] == [1]
    assert doc["beta"] == (1.0 if extra else 1.1)


def test_analyze_unknown_hub(runner, instance_file, airport_trips, tmp_path):
    solution = tmp_path / "bad.json"
    solution.write_text(json.dumps({"hubs": [42], "routing": [], "objective": 0.0, "direct_count": 0}))
    result = invoke(runner, "analyze", instance_file, solution, airport_trips, "--out-dir", tmp_path)
    assert result.exit_code == EXIT_INPUT


# ─── export ──────────────────────────────────────────────────────────

def test_export_mps(runner, instance_file, tmp_path):
    out = tmp_path / "model.mps"
    result = invoke(runner, "export", instance_file, "--format", "mps", "--p", 1, "--out", out)
    assert result.exit_code == 0, result.output
    text = out.read_text()
    assert ["NAME", "SKYPORT"] in [line.split() for line in text.splitlines()]
    assert text.rstrip().endswith("ENDATA")
    assert "free" in runner.invoke(cli, ["export", "--help"]).output


def test_export_geojson(runner, instance_file, tmp_path):
    solution = tmp_path / "p1.json"
    invoke(runner, "solve", instance_file, "--p", 1, "--out", solution)
    out = tmp_path / "map.geojson"
    result = invoke(runner, "export", instance_file, "--format", "geojson", "--solution", solution, "--out", out)
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert doc["type"] == "FeatureCollection"
    assert "2 routes" in result.output


def test_export_geojson_needs_solution(runner, instance_file, tmp_path):
    result = runner.invoke(cli, ["export", str(instance_file), "--format", "geojson"])
    assert result.exit_code == 2
    assert "--solution" in result.output


def test_export_unknown_format(runner, instance_file):
    result = runner.invoke(cli, ["export", str(instance_file), "--format", "lp"])
    assert result.exit_code == 2
