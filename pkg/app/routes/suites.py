from flask import Blueprint, current_app, jsonify, request, send_file

from app import limiter
from app.services.registry import SelectorError
from app.services.report_service import get_csv_path, get_history, load_report
from app.services.suite_service import SUITES, make_budget
from app.services.task_manager import ServerBusyError, get_task_status, start_suite_task, stop_task

suites_bp = Blueprint("suites", __name__)

BUDGET_FIELDS = ("max_len", "samples", "seed", "max_size")


def _budget_from(raw):
    values = {}
    for key in BUDGET_FIELDS:
        val = raw.get(key)
        if val is None:
            continue
        if isinstance(val, bool) or not isinstance(val, int) or val < 0:
            raise ValueError(f"{key} must be a natural number")
        values[key] = val
    return make_budget(**values)


@suites_bp.route("/suites/<command>", methods=["POST"])
@limiter.limit("30 per minute")
def start_suite(command):
    if command not in SUITES:
        return jsonify({"error": f"unknown suite {command!r}"}), 404

    raw = request.get_json(silent=True)
    if not raw or not raw.get("selector"):
        return jsonify({"error": "MISSING_FIELDS"}), 400

    try:
        budget = _budget_from(raw)
        task_id = start_suite_task(command, raw["selector"], budget, bool(raw.get("no_lifting")))
    except ServerBusyError as e:
        return jsonify({"error": str(e)}), 503
    except (SelectorError, ValueError) as e:
        return jsonify({"error": str(e)}), 400

    current_app.logger.info("started %s on %s as %s", command, raw["selector"], task_id)
    return jsonify({"task_id": task_id})


@suites_bp.route("/status/<task_id>")
def status(task_id):
    info = get_task_status(task_id)
    if not info:
        return jsonify({"status": "unknown"}), 404
    return jsonify(info)


@suites_bp.route("/stop/<task_id>", methods=["POST"])
def stop_suite(task_id):
    return jsonify({"success": stop_task(task_id)})


@suites_bp.route("/reports")
def history():
    return jsonify(get_history())


@suites_bp.route("/reports/<task_id>")
def show_report(task_id):
    report = load_report(task_id)
    if report is None:
        return jsonify({"error": "Report not found or expired."}), 404
    return jsonify(report)


@suites_bp.route("/reports/<task_id>/csv")
def download_csv(task_id):
    path = get_csv_path(task_id)
    if path is None:
        return jsonify({"error": "Report not found or expired."}), 404
    return send_file(path, mimetype="text/csv", as_attachment=True, download_name=f"report_{task_id}.csv")
