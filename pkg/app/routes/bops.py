from flask import Blueprint, current_app, jsonify, request

from app import limiter
from app.services import bops_service

bops_bp = Blueprint("bops", __name__)


@bops_bp.route("/bops", methods=["POST"])
@limiter.limit("120 per minute")
def evaluate():
    """Body: {"selector", "op", "args", "mode"}; same evaluation as the bops command."""
    raw = request.get_json(silent=True)
    if not raw or not raw.get("selector") or not raw.get("op"):
        return jsonify({"error": "MISSING_FIELDS"}), 400

    try:
        ok, payload = bops_service.evaluate(raw["selector"], raw["op"], raw.get("args", {}), raw.get("mode", "both"))
    except ValueError as e:
        return jsonify({"error": str(e)}), 400

    if not ok:
        current_app.logger.debug("bops %s on %s rejected: %s", raw["op"], raw["selector"], payload)
    return jsonify(payload), 200 if ok else 422
