import pandas as pd

# Canonical trip-frame columns shared by ingestion and profiling
TRIP_COLUMNS = ["pickup_time", "dropoff_time", "origin_zone", "dest_zone", "duration_min"]


def split_by_duration(df: pd.DataFrame, min_minutes: float, max_minutes: float):
    """
    Keep trips whose duration lies in [min_minutes, max_minutes].
    Returns (kept, counts) where counts has negative_duration / too_short / too_long.
    """
    dur = df["duration_min"]
    negative = dur < 0
    too_short = ~negative & (dur < min_minutes)
    too_long = dur > max_minutes

    counts = {
        "negative_duration": int(negative.sum()),
        "too_short":         int(too_short.sum()),
        "too_long":          int(too_long.sum()),
    }
    kept = df[~(negative | too_short | too_long)].reset_index(drop=True)
    return kept, counts


def drop_malformed_rows(df: pd.DataFrame, pickup: str, dropoff: str,
                        origin: str, dest: str, time_format: str | None):
    """
    Coerce a raw string chunk into the canonical trip frame.
    Rows with unparseable timestamps or non-integer zone ids are dropped and counted.
    """
    pick = pd.to_datetime(df[pickup].str.strip(), format=time_format, errors="coerce")
    drop = pd.to_datetime(df[dropoff].str.strip(), format=time_format, errors="coerce")
    orig = pd.to_numeric(df[origin].str.strip(), errors="coerce")
    dest_ = pd.to_numeric(df[dest].str.strip(), errors="coerce")

    bad = pick.isna() | drop.isna() | orig.isna() | dest_.isna()
    bad |= (orig.fillna(0) % 1 != 0) | (dest_.fillna(0) % 1 != 0)

    out = pd.DataFrame({
        "pickup_time":  pick[~bad],
        "dropoff_time": drop[~bad],
        "origin_zone":  orig[~bad].astype("int64"),
        "dest_zone":    dest_[~bad].astype("int64"),
    })
    out["duration_min"] = (out["dropoff_time"] - out["pickup_time"]).dt.total_seconds() / 60.0
    return out.reset_index(drop=True), int(bad.sum())
