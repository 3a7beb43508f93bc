"""
Raw syntax over binding signatures.

Trees are built from `Var` and `Op` nodes. Inside a tree at binder depth k a
node `Var(j)` with j < k refers to a bound variable (the innermost binder is
0); j >= k refers to the free variable x_{j-k} of the ambient context. At the
top of a tree of context n the free variables are Var(0), ..., Var(n-1).

The two constants `BOT` and `STAR` are the extra points of the exception and
terminal set monads.
"""
import json
import logging
from dataclasses import dataclass

from core.errors import EmptyCarrierError, SignatureError, SortError

logger = logging.getLogger(__name__)

EL = "el"
TY = "ty"
RESERVED_SYMBOLS = {"Var", "Bot", "Star"}


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Op:
    sym: str
    args: tuple = ()


@dataclass(frozen=True)
class _Constant:
    name: str

    def __repr__(self):
        return self.name


BOT = _Constant("Bot")
STAR = _Constant("Star")


@dataclass(frozen=True)
class ArgSpec:
    sort: str
    bind: int = 0


@dataclass(frozen=True)
class OpSpec:
    sym: str
    args: tuple

    @property
    def arity(self):
        return len(self.args)


@dataclass(frozen=True)
class BindingSignature:
    """Constructors of one sort; `sort` is the sort of the terms they build."""

    ops: tuple
    sort: str = EL

    def __post_init__(self):
        seen = set()
        for spec in self.ops:
            if spec.sym in RESERVED_SYMBOLS:
                raise SignatureError(f"symbol {spec.sym!r} is reserved")
            if spec.sym in seen:
                raise SignatureError(f"duplicate symbol {spec.sym!r}")
            seen.add(spec.sym)
            for arg in spec.args:
                if arg.sort not in (EL, TY):
                    raise SignatureError(f"{spec.sym}: unknown sort {arg.sort!r}")
                if self.sort == EL and arg.sort != EL:
                    raise SignatureError(f"{spec.sym}: element constructors take element arguments only")
                if not isinstance(arg.bind, int) or arg.bind < 0:
                    raise SignatureError(f"{spec.sym}: binder count must be a natural number")

    def lookup(self, sym):
        for spec in self.ops:
            if spec.sym == sym:
                return spec
        raise SignatureError(f"unknown symbol {sym!r} in {self.sort} signature")

    def has(self, sym):
        return any(spec.sym == sym for spec in self.ops)

    @classmethod
    def elements(cls, *entries):
        """Shorthand: elements(("app", (0, 0)), ("lam", (1,)))."""
        return cls(tuple(OpSpec(sym, tuple(ArgSpec(EL, b) for b in binds)) for sym, binds in entries), EL)


def _parse_el_args(sym, raw_args):
    args = []
    for raw in raw_args:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise SignatureError(f"{sym}: element argument must be a binder count, got {raw!r}")
        args.append(ArgSpec(EL, raw))
    return tuple(args)


def _parse_ty_args(sym, raw_args):
    args = []
    for raw in raw_args:
        if not isinstance(raw, dict) or "sort" not in raw:
            raise SignatureError(f"{sym}: type argument must be an object with a sort, got {raw!r}")
        args.append(ArgSpec(raw["sort"], raw.get("bind", 0)))
    return tuple(args)


def parse_signatures(data):
    """Returns (element signature, type signature or None) from the decoded JSON object."""
    if not isinstance(data, dict) or "el" not in data:
        raise SignatureError("signature file must be an object with an 'el' list")
    try:
        el = BindingSignature(
            tuple(OpSpec(e["sym"], _parse_el_args(e["sym"], e.get("args", []))) for e in data["el"]), EL)
        ty = None
        if data.get("ty"):
            ty = BindingSignature(
                tuple(OpSpec(e["sym"], _parse_ty_args(e["sym"], e.get("args", []))) for e in data["ty"]), TY)
    except (KeyError, TypeError) as e:
        raise SignatureError(f"malformed signature entry: {e}")
    if ty is not None:
        clash = {spec.sym for spec in el.ops} & {spec.sym for spec in ty.ops}
        if clash:
            raise SignatureError(f"symbols used in both sorts: {sorted(clash)}")
    return el, ty


def load_signatures(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SignatureError(f"{path}: invalid JSON: {e}")
    return parse_signatures(data)


def check_scope(node, ctx, el_sig, ty_sig=None, sort=EL):
    """Raises unless `node` is a well-scoped tree of `sort` in a context of size ctx."""
    if isinstance(node, Var):
        if sort != EL:
            raise SortError(f"variable {node.index} used where a type expression is expected")
        if not 0 <= node.index < ctx:
            raise SignatureError(f"variable {node.index} out of scope in context {ctx}")
        return
    if not isinstance(node, Op):
        raise SignatureError(f"not a syntax tree: {node!r}")
    if sort == EL:
        if ty_sig is not None and ty_sig.has(node.sym):
            raise SortError(f"type constructor {node.sym!r} used where an element is expected")
        spec = el_sig.lookup(node.sym)
    else:
        if el_sig.has(node.sym):
            raise SortError(f"element constructor {node.sym!r} used where a type expression is expected")
        if ty_sig is None:
            raise SignatureError("no type signature given")
        spec = ty_sig.lookup(node.sym)
    if len(node.args) != spec.arity:
        raise SignatureError(f"{node.sym} takes {spec.arity} arguments, got {len(node.args)}")
    for arg, arg_spec in zip(node.args, spec.args):
        check_scope(arg, ctx + arg_spec.bind, el_sig, ty_sig, arg_spec.sort)


def binders_of(sym, el_sig, ty_sig=None):
    if ty_sig is not None and ty_sig.has(sym):
        return tuple(a.bind for a in ty_sig.lookup(sym).args)
    return tuple(a.bind for a in el_sig.lookup(sym).args)


def shift(node, k, binders, depth=0):
    """Raises every free variable of `node` by k."""
    if k == 0:
        return node
    if isinstance(node, Var):
        return node if node.index < depth else Var(node.index + k)
    binds = binders(node.sym)
    return Op(node.sym, tuple(shift(a, k, binders, depth + b) for a, b in zip(node.args, binds)))


def substitute(node, comps, binders, lift=True, depth=0):
    """
    Simultaneous substitution of comps[i] for the free variable x_i.

    With lift=False the substituted trees are not shifted past the binders
    they are moved under.
    """
    if isinstance(node, Var):
        if node.index < depth:
            return node
        replacement = comps[node.index - depth]
        return shift(replacement, depth, binders) if lift else replacement
    binds = binders(node.sym)
    return Op(node.sym, tuple(substitute(a, comps, binders, lift, depth + b) for a, b in zip(node.args, binds)))


def size(node):
    if isinstance(node, Op):
        return 1 + sum(size(a) for a in node.args)
    return 1


def to_json(node):
    if isinstance(node, Var):
        return ["Var", node.index]
    if node is BOT:
        return ["Bot"]
    if node is STAR:
        return ["Star"]
    if isinstance(node, Op):
        return [node.sym] + [to_json(a) for a in node.args]
    raise TypeError(f"cannot serialize {node!r}")


def from_json(data):
    if not isinstance(data, list) or not data or not isinstance(data[0], str):
        raise SignatureError(f"malformed term {data!r}")
    head = data[0]
    if head == "Var":
        if len(data) != 2 or isinstance(data[1], bool) or not isinstance(data[1], int):
            raise SignatureError(f"malformed variable {data!r}")
        return Var(data[1])
    if head == "Bot":
        return BOT
    if head == "Star":
        return STAR
    return Op(head, tuple(from_json(a) for a in data[1:]))


def render(node):
    if isinstance(node, Var):
        return f"Var {node.index}"
    if isinstance(node, Op):
        if not node.args:
            return node.sym
        return f"{node.sym}({', '.join(render(a) for a in node.args)})"
    return "⊥" if node is BOT else "*"


class TreeSampler:
    """Random well-scoped trees of bounded size drawn from a numpy Generator."""

    LEAF_BIAS = 0.3
    ATTEMPTS = 64

    def __init__(self, el_sig, ty_sig=None):
        self.el_sig = el_sig
        self.ty_sig = ty_sig

    def _sig(self, sort):
        return self.el_sig if sort == EL else self.ty_sig

    def _grow(self, rng, sort, ctx, budget):
        sig = self._sig(sort)
        leaves = [spec for spec in sig.ops if spec.arity == 0]
        n_leaves = len(leaves) + (ctx if sort == EL else 0)
        inner = [spec for spec in sig.ops if 0 < spec.arity < budget]
        if n_leaves and (not inner or budget <= 1 or rng.random() < self.LEAF_BIAS):
            pick = int(rng.integers(0, n_leaves))
            if pick < len(leaves):
                return Op(leaves[pick].sym)
            return Var(pick - len(leaves))
        if not inner:
            return None
        spec = inner[int(rng.integers(0, len(inner)))]
        share = (budget - 1) // spec.arity
        args = []
        for arg in spec.args:
            sub = self._grow(rng, arg.sort, ctx + arg.bind, share)
            if sub is None:
                return None
            args.append(sub)
        return Op(spec.sym, tuple(args))

    def sample(self, rng, ctx, max_size, sort=EL):
        for _ in range(self.ATTEMPTS):
            node = self._grow(rng, sort, ctx, max_size)
            if node is not None and size(node) <= max_size:
                return node
        raise EmptyCarrierError(f"no {sort} tree of size <= {max_size} found in context {ctx}")
