import os

# Optional: load .env if present (DEV convenience)
try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    pass


class Config:
    """
    Runtime defaults for the skyport suite.
    Every value can be overridden through a SKYPORT_* environment variable.
    """

    # ─── Files & logging ─────────────────────────────────────────────
    OUTPUT_DIR = os.getenv('SKYPORT_OUTPUT_DIR', 'output')
    LOG_LEVEL  = os.getenv('SKYPORT_LOG_LEVEL', 'INFO')

    # ─── Ingestion ───────────────────────────────────────────────────
    # Air taxi cruise speed used for hub → airport legs
    AIRSPEED_MPH        = float(os.getenv('SKYPORT_AIRSPEED_MPH', '150'))
    LOAD_UNLOAD_MINUTES = float(os.getenv('SKYPORT_LOAD_UNLOAD_MINUTES', '2'))
    MIN_TRIP_MINUTES    = float(os.getenv('SKYPORT_MIN_TRIP_MINUTES', '1'))
    MAX_TRIP_MINUTES    = float(os.getenv('SKYPORT_MAX_TRIP_MINUTES', '300'))
    CHUNK_ROWS          = int(os.getenv('SKYPORT_CHUNK_ROWS', '500000'))

    # ─── Solvers ─────────────────────────────────────────────────────
    ENUMERATION_CAP = int(os.getenv('SKYPORT_ENUMERATION_CAP', str(10**7)))
    TIME_LIMIT      = float(os.getenv('SKYPORT_TIME_LIMIT', '600'))
    RESTARTS        = int(os.getenv('SKYPORT_RESTARTS', '10'))

    # ─── Queueing ────────────────────────────────────────────────────
    # Uber Elevate sizing: 12 pads per skyport, 5 minute tolerable wait
    SERVERS      = int(os.getenv('SKYPORT_SERVERS', '12'))
    WAIT_MINUTES = float(os.getenv('SKYPORT_WAIT_MINUTES', '5'))
