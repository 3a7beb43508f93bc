import glob
import json
import logging
import os
import time
import uuid

import pandas as pd

from app.config import Config

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["name", "status", "mode", "cases", "note", "counterexample"]


def create_report_id():
    return str(uuid.uuid4())


def _paths(report_id, report_dir=None):
    base = report_dir or Config.REPORT_DIR
    return os.path.join(base, f"{report_id}.json"), os.path.join(base, f"{report_id}.csv")


def save_report(report_id, report, metadata=None, include_timing=False, report_dir=None):
    """
    Writes <id>.json (metadata and checks) and <id>.csv (one row per check).
    Returns the JSON path.
    """
    base = report_dir or Config.REPORT_DIR
    os.makedirs(base, exist_ok=True)
    json_path, csv_path = _paths(report_id, base)

    data = report.to_dict(include_timing)
    data["report_id"] = report_id
    data["saved_at"] = time.time()
    data["metadata"] = dict(metadata or {})
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)

    rows = []
    for check in data["checks"]:
        row = {col: check.get(col, "") for col in CSV_COLUMNS}
        if check.get("counterexample") is not None:
            row["counterexample"] = json.dumps(check["counterexample"], ensure_ascii=False, sort_keys=True)
        rows.append(row)
    pd.DataFrame(rows, columns=CSV_COLUMNS).to_csv(csv_path, index=False)

    logger.info("saved report %s (%d checks) to %s", report_id, len(rows), base)
    return json_path


def load_report(report_id, report_dir=None):
    """The saved JSON document, or None."""
    json_path, _ = _paths(report_id, report_dir)
    if not os.path.exists(json_path):
        return None
    try:
        with open(json_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error("cannot load report %s: %s", report_id, e)
        return None


def load_checks_frame(report_id, report_dir=None):
    _, csv_path = _paths(report_id, report_dir)
    if not os.path.exists(csv_path):
        return None
    try:
        return pd.read_csv(csv_path)
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=CSV_COLUMNS)


def get_csv_path(report_id, report_dir=None):
    _, csv_path = _paths(report_id, report_dir)
    return csv_path if os.path.exists(csv_path) else None


def get_history(report_dir=None):
    """Saved reports' summaries, newest first."""
    base = report_dir or Config.REPORT_DIR
    items = []
    for path in glob.glob(os.path.join(base, "*.json")):
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("skipping unreadable report %s: %s", path, e)
            continue
        items.append({
            "report_id": data.get("report_id"),
            "suite": data.get("suite"),
            "passed": data.get("passed"),
            "complete": data.get("complete", True),
            "saved_at": data.get("saved_at", 0),
            "date_str": time.strftime("%Y-%m-%d %H:%M", time.localtime(data.get("saved_at", 0))),
        })
    items.sort(key=lambda x: x["saved_at"], reverse=True)
    return items
