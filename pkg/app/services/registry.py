"""
Selector strings for monad instances and C-systems.

  vars | unit | exc | free:<file>          monad instances
  crr:<instance>                           C(RR)
  crrlm:<instance>:<rrmod|unit|ty>         C(RR, LM); the module defaults to
                                           ty for two-sorted files, rrmod otherwise
"""
import logging
import os
from dataclasses import dataclass
from functools import lru_cache

from app.config import Config
from core import crr, crrlm, relmonad, syntax
from core.errors import SignatureError

logger = logging.getLogger(__name__)

BUILTIN_INSTANCES = {
    "vars": relmonad.variables_instance,
    "unit": relmonad.unit_instance,
    "exc": relmonad.exception_instance,
}
MODULES = ("rrmod", "unit", "ty")


class SelectorError(ValueError):
    pass


@dataclass(frozen=True)
class Resolved:
    inst: object
    ty_sig: object = None


def resolve_path(path):
    if os.path.isabs(path) or os.path.exists(path):
        return path
    bundled = os.path.join(Config.SIGNATURE_DIR, path)
    if os.path.exists(bundled):
        return bundled
    raise SelectorError(f"signature file not found: {path}")


@lru_cache(maxsize=32)
def _load(path):
    try:
        return syntax.load_signatures(path)
    except OSError as e:
        raise SelectorError(f"cannot read {path}: {e}")
    except SignatureError as e:
        raise SelectorError(str(e))


def resolve_instance(selector, no_lifting=False):
    ty_sig = None
    if selector in BUILTIN_INSTANCES:
        inst = BUILTIN_INSTANCES[selector]()
    elif selector.startswith("free:"):
        path = resolve_path(selector[len("free:"):])
        el_sig, ty_sig = _load(path)
        inst = relmonad.free_monad(el_sig, name=selector)
    else:
        raise SelectorError(f"unknown instance selector {selector!r}")

    if no_lifting:
        if inst.signature is None:
            raise SelectorError(f"--no-lifting needs a free instance, got {selector!r}")
        inst = relmonad.mutate_no_lifting(inst)
        logger.debug("using %s without de Bruijn lifting", selector)
    return Resolved(inst, ty_sig)


def _split_module(rest):
    head, sep, tail = rest.rpartition(":")
    if sep and tail in MODULES:
        return head, tail
    return rest, None


def build_module(resolved, name):
    inst = resolved.inst
    if name == "rrmod":
        return crrlm.lm_of_rr(inst)
    if name == "unit":
        return crrlm.unit_module(inst)
    if resolved.ty_sig is None:
        raise SelectorError(f"{inst.name} has no type signature for the ty module")
    return crrlm.two_sorted_module(resolved.ty_sig, inst)


def resolve_system(selector, no_lifting=False):
    """Returns a C(RR) or C(RR, LM) system for a crr:/crrlm: selector."""
    if selector.startswith("crr:"):
        return crr.crr_build(resolve_instance(selector[len("crr:"):], no_lifting).inst)
    if selector.startswith("crrlm:"):
        rest, module = _split_module(selector[len("crrlm:"):])
        resolved = resolve_instance(rest, no_lifting)
        if module is None:
            module = "ty" if resolved.ty_sig is not None else "rrmod"
        return crrlm.crrlm_build(resolved.inst, build_module(resolved, module))
    raise SelectorError(f"unknown system selector {selector!r}")


def is_lm_system(cc):
    return isinstance(cc, crrlm.CRRLMSystem)
