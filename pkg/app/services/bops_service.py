"""
Evaluation of single B-system operations from JSON arguments.

C(RR):      T {"m", "n"}   Tt {"m", "b"}   S {"b", "n"}   St {"b1", "b2"}   delta {"n"}
C(RR, LM):  T {"X", "Y"}   Tt {"X", "b"}   S {"b", "Y"}   St {"b1", "b2"}   delta {"X"}

b is {"n", "r"} in C(RR) and {"n", "gamma", "r"} in C(RR, LM); objects of
C(RR, LM) are {"n", "tele"}.
"""
import logging

from app.services import registry
from core import crr, crrlm
from core.errors import BopDomainError, CSysError

logger = logging.getLogger(__name__)

MODES = ("explicit", "definitional", "both")

_CRR_ARGS = {
    "T": (("m", "int"), ("n", "int")),
    "Tt": (("m", "int"), ("b", "btilde")),
    "S": (("b", "btilde"), ("n", "int")),
    "St": (("b1", "btilde"), ("b2", "btilde")),
    "delta": (("n", "int"),),
}

_CRRLM_ARGS = {
    "T": (("X", "object"), ("Y", "object")),
    "Tt": (("X", "object"), ("b", "btilde")),
    "S": (("b", "btilde"), ("Y", "object")),
    "St": (("b1", "btilde"), ("b2", "btilde")),
    "delta": (("X", "object"),),
}


class ArgumentsError(ValueError):
    pass


def _decode(cc, kind, value, key):
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise ArgumentsError(f"{key} must be a natural number, got {value!r}")
        return value
    if kind == "btilde":
        return cc.decode_btilde(value)
    return cc.decode_object(value)


def decode_args(cc, op, data):
    """Decoded positional arguments of op; raises CSysError for values outside the carriers."""
    op = crr.normalize_op(op)
    spec = (_CRRLM_ARGS if registry.is_lm_system(cc) else _CRR_ARGS)[op]
    if not isinstance(data, dict):
        raise ArgumentsError(f"arguments of {op} must be a JSON object")
    missing = [key for key, _ in spec if key not in data]
    if missing:
        raise ArgumentsError(f"{op} needs {', '.join(key for key, _ in spec)}; missing {', '.join(missing)}")
    return op, [_decode(cc, kind, data[key], key) for key, kind in spec]


def encode_value(cc, value):
    if isinstance(value, (crr.BTildeRR, crrlm.BTildeLM)):
        return cc.encode_btilde(value)
    if isinstance(value, int):
        return value
    return cc.encode_object(value)


def error_dict(e):
    data = {"error": type(e).__name__, "message": str(e)}
    if isinstance(e, BopDomainError):
        data["op"] = e.op
        data["condition"] = e.condition
    return data


def _evaluators(cc):
    if registry.is_lm_system(cc):
        return {"explicit": crrlm.bop_lm_explicit, "definitional": crrlm.bop_lm_definitional}
    return {"explicit": crr.bop_explicit, "definitional": crr.bop_definitional}


def _run(fn, cc, op, args):
    try:
        return True, encode_value(cc, fn(cc, op, *args))
    except CSysError as e:
        logger.debug("%s on %s raised %s", op, cc.name, e)
        return False, error_dict(e)


def evaluate(selector, op, data, mode="both"):
    """
    Returns (ok, payload). ok is False for domain errors, for values outside
    the carriers and for disagreement in `both` mode.
    """
    if mode not in MODES:
        raise ArgumentsError(f"mode must be one of {', '.join(MODES)}")
    cc = registry.resolve_system(selector)
    try:
        op, args = decode_args(cc, op, data)
    except CSysError as e:
        return False, error_dict(e)

    evaluators = _evaluators(cc)
    if mode != "both":
        ok, value = _run(evaluators[mode], cc, op, args)
        return ok, value if not ok else {"op": op, "mode": mode, "result": value}

    ok_e, explicit = _run(evaluators["explicit"], cc, op, args)
    ok_d, definitional = _run(evaluators["definitional"], cc, op, args)
    agree = ok_e == ok_d and (explicit == definitional if ok_e else explicit["error"] == definitional["error"])
    payload = {"op": op, "mode": mode, "explicit": explicit, "definitional": definitional, "agree": agree}
    return ok_e and ok_d and agree, payload
