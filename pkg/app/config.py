import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class Config:
    SECRET_KEY = os.environ.get("SECRET_KEY") or "change_this_to_random_secret_string"

    REPORT_DIR = os.environ.get("CRSYS_REPORT_DIR") or os.path.join(os.getcwd(), "reports")
    SIGNATURE_DIR = os.environ.get("CRSYS_SIGNATURE_DIR") or os.path.join(BASE_DIR, "signatures")

    MAX_CONTEXT = int(os.environ.get("CRSYS_MAX_CONTEXT", 3))
    MAX_TERM_SIZE = int(os.environ.get("CRSYS_MAX_TERM_SIZE", 8))
    SAMPLES = int(os.environ.get("CRSYS_SAMPLES", 300))
    SEED = int(os.environ.get("CRSYS_SEED", 0))
    EXHAUSTIVE_LIMIT = int(os.environ.get("CRSYS_EXHAUSTIVE_LIMIT", 200000)) # cases per exhaustive law grid

    MAX_WORKERS = int(os.environ.get("CRSYS_MAX_WORKERS", 3))
    MAX_RUNNING_TASKS = int(os.environ.get("CRSYS_MAX_RUNNING_TASKS", 2))

    RATELIMIT_STORAGE_URI = "memory://"
    RATELIMIT_STRATEGY = "fixed-window"
    RATELIMIT_DEFAULT = "2000 per day"
