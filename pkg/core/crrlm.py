"""
Left modules over a relative monad, seen as presheaves on C(RR), and the
C-system C(RR, LM) = C(RR)[LM].

An object is (n, (T_0, ..., T_{n-1})) with T_i in LM(i); a section of
p_{(n+1, Gamma)} corresponds to (n, Gamma, r) with r in RR(n).
"""
import logging
from dataclasses import dataclass

from core import crr, kleisli, syntax
from core.crr import CMor, OPS, normalize_op
from core.csystem import SectionWitness, sample_homs, sample_objects
from core.errors import (
    ArityError,
    BopDomainError,
    EmptyCarrierError,
    PreconditionError,
    SectionError,
    SignatureError,
    SortError,
    StructureError,
    TelescopeError,
)
from core.finfun import delta
from core.kleisli import KMor
from core.presheaf_ext import ExtMor, ExtObj, ExtSystem, Presheaf, star_iter_ext, tr
from core.relmonad import Term, natural_context
from core.report import EXHAUSTIVE, SAMPLED, SKIPPED, Check, check_cases
from core.syntax import STAR, TY, Op, Var

logger = logging.getLogger(__name__)


class ModuleInstance(Presheaf):
    """A left module LM over RR: sets LM(n) with a substitution action of Kleisli morphisms."""

    def __init__(self, name, inst, act, contains, elements=None, sampler=None, encode=None, decode=None,
                 signature=None):
        self.name = name
        self.inst = inst
        self.signature = signature
        self._act = act
        self._contains = contains
        self._elements = elements
        self._sampler = sampler
        self._encode = encode or syntax.to_json
        self._decode = decode

    def lm_act(self, f, E):
        if not self._contains(f.dom, E):
            raise ArityError(f"element is not in {self.name}({f.dom})")
        return self._act(f, E)

    def contains(self, X, e):
        return self._contains(X, e)

    def act(self, f, e):
        return self._act(f.kmor, e)

    def elements(self, X):
        return None if self._elements is None else self._elements(X)

    def sample(self, rng, X, max_size=8):
        if self._sampler is None:
            return super().sample(rng, X, max_size)
        return self._sampler(rng, X, max_size)

    def encode(self, e):
        return self._encode(e)

    def decode(self, X, data):
        if self._decode is not None:
            return self._decode(X, data)
        return super().decode(X, data)


def lm_of_rr(inst):
    """LM(n) = RR(n) acted on by bind."""
    def contains(n, E):
        return isinstance(E, Term) and E.instance == inst.name and E.ctx == n

    return ModuleInstance(
        name="rrmod",
        inst=inst,
        act=inst.bind,
        contains=contains,
        elements=inst.enumerate,
        sampler=inst.sample,
        encode=inst.encode,
        decode=inst.decode,
    )


def two_sorted_module(ty_sig, inst):
    """LM(n) = type expressions over ty_sig whose element variables are below n."""
    el_sig = inst.signature
    if el_sig is None:
        raise SignatureError(f"{inst.name} is not a free instance over an element signature")

    def binders(sym):
        return syntax.binders_of(sym, el_sig, ty_sig)

    def contains(n, E):
        try:
            syntax.check_scope(E, n, el_sig, ty_sig, TY)
        except (SignatureError, SortError):
            return False
        return True

    def act(f, E):
        return syntax.substitute(E, tuple(c.payload for c in f.comps), binders, inst.lift)

    def decode(n, data):
        E = syntax.from_json(data)
        syntax.check_scope(E, n, el_sig, ty_sig, TY)
        return E

    sampler = syntax.TreeSampler(el_sig, ty_sig)
    return ModuleInstance(
        name="ty",
        inst=inst,
        act=act,
        contains=contains,
        sampler=lambda rng, n, max_size: sampler.sample(rng, n, max_size, TY),
        decode=decode,
        signature=ty_sig,
    )


def unit_module(inst):
    return ModuleInstance(
        name="unit",
        inst=inst,
        act=lambda f, E: STAR,
        contains=lambda n, E: E is STAR,
        elements=lambda n: [STAR],
    )


@dataclass(frozen=True)
class BTildeLM:
    n: int
    gamma: tuple
    r: object

    def __post_init__(self):
        if len(self.gamma) != self.n + 1:
            raise TelescopeError(f"(n, Gamma, r) needs a telescope of length {self.n + 1}, got {len(self.gamma)}")
        if self.r.ctx != self.n:
            raise ArityError(f"(n, Gamma, r) with n={self.n} and r of context {self.r.ctx}")


class CRRLMSystem(ExtSystem):
    def __init__(self, inst, mod):
        super().__init__(crr.crr_build(inst), mod)
        self.inst = inst
        self.mod = mod
        self.name = f"crrlm:{inst.name}:{mod.name}"

    def encode_object(self, X):
        return {"n": X.base, "tele": [self.mod.encode(e) for e in X.tele]}

    def decode_object(self, data):
        try:
            n, tele = data["n"], data["tele"]
        except (KeyError, TypeError):
            raise TelescopeError(f"expected an object {{\"n\": ..., \"tele\": [...]}}, got {data!r}")
        natural_context(n)
        if len(tele) != n:
            raise TelescopeError(f"telescope of length {len(tele)} for n={n}")
        return self.make_object(n, tuple(self.mod.decode(i, e) for i, e in enumerate(tele)))

    def encode_btilde(self, b):
        return {"n": b.n, "gamma": [self.mod.encode(e) for e in b.gamma], "r": self.inst.encode(b.r)}

    def decode_btilde(self, data):
        try:
            n, gamma, r = data["n"], data["gamma"], data["r"]
        except (KeyError, TypeError):
            raise TelescopeError(f"expected {{\"n\": ..., \"gamma\": [...], \"r\": ...}}, got {data!r}")
        natural_context(n)
        X = self.decode_object({"n": n + 1, "tele": gamma})
        return BTildeLM(n, X.tele, self.inst.decode(n, r))


def crrlm_build(inst, mod):
    return CRRLMSystem(inst, mod)


def _face(ext, i, n, E):
    """∂^i_n on LM(n): the renaming along delta(i, n)."""
    return ext.mod.lm_act(kleisli.L(ext.inst, delta(i, n)), E)


def theta_lm(mod, r, E, n):
    """theta^LM_{m,n}(r, E) = qq^{n-m-1}(x_0, ..., x_{m-1}, r)(E) for E in LM(n)."""
    m = r.ctx
    if n <= m:
        raise PreconditionError(f"theta needs n > m, got m={m}, n={n}")
    f = kleisli.qq_iter(mod.inst, kleisli.section_tuple(mod.inst, r), n - m - 1)
    return mod.lm_act(f, E)


def theta_by_elements(mod, r, E, n):
    """
    theta^LM on a type expression of a two-sorted module, computed one element
    subterm at a time: variables bound by type constructors are renamed to
    x_n, x_{n+1}, ..., theta_rr substitutes r, and the renaming is undone.
    """
    inst = mod.inst
    el_sig, ty_sig = inst.signature, mod.signature
    if n <= r.ctx:
        raise PreconditionError(f"theta needs n > m, got m={r.ctx}, n={n}")

    def binders(sym):
        return syntax.binders_of(sym, el_sig)

    def element(t, k):
        up = tuple(Var(n + j) for j in range(k)) + tuple(Var(i) for i in range(n))
        moved = kleisli.theta_rr(inst, r, inst.make(n + k, syntax.substitute(t, up, binders)))
        down = tuple(Var(i + k) for i in range(n - 1)) + tuple(Var(j) for j in range(k))
        return syntax.substitute(moved.payload, down, binders)

    def walk(node, k):
        args = []
        for a, spec in zip(node.args, ty_sig.lookup(node.sym).args):
            args.append(walk(a, k + spec.bind) if spec.sort == TY else element(a, k + spec.bind))
        return Op(node.sym, tuple(args))

    return walk(E, 0)


def _theta_oracle(mod):
    if mod.name == "rrmod":
        return lambda r, E, n: kleisli.theta_rr(mod.inst, r, E)
    if mod.signature is not None:
        return lambda r, E, n: theta_by_elements(mod, r, E, n)
    return None


def _weakened_tail(ext, X, Y):
    """p_X*(Y) in closed form: X's telescope followed by ∂^{m-1}_k(T'_k), k = m-1, ..., n-1."""
    m, n = X.base, Y.base
    tail = tuple(_face(ext, m - 1, k, Y.tele[k]) for k in range(m - 1, n))
    return ExtObj(n + 1, X.tele + tail)


def p_star_weakening(ext, X, Y):
    """p_Y*(X) for Y = (n, (T_0, ..., T_{n-2}, T)) and X = (m, (T_0, ..., T_{m-1})) with m > n-1."""
    m, n = X.base, Y.base
    if n == 0:
        raise PreconditionError("p_Y needs Y of positive length")
    if m <= n - 1:
        raise PreconditionError(f"p_Y*(X) needs m > n-1, got m={m}, n={n}")
    if X.tele[: n - 1] != Y.tele[: n - 1]:
        raise TelescopeError("X and Y disagree on their first n-1 telescope entries")
    return _weakened_tail(ext, Y, X)


def is_section_lm(ext, s):
    return s.src == ext.ft(s.dst) and crr.is_section(ext.base, s.base)


def _section_mor(ext, s):
    mor = s.mor if isinstance(s, SectionWitness) else s
    if ext.length(mor.dst) == 0 or not is_section_lm(ext, mor):
        raise SectionError("not a section of a p-morphism of C(RR, LM)")
    return mor


def section_of_lm(ext, f):
    return SectionWitness(ext.section_of(f))


def pullback_section_lm(ext, f, s):
    """f*(s) for f: X -> ft^i(Y) and a section s: ft(Y) -> Y, in closed form."""
    mor = _section_mor(ext, s)
    Y = mor.dst
    i = ext.length(Y) - ext.length(f.dst)
    if i < 1 or ext.ft_iter(Y, i) != f.dst:
        raise StructureError("the section does not lie above the codomain of f")
    m, n = f.src.base, f.dst.base
    lifted = kleisli.qq_iter(ext.inst, f.base.kmor, i - 1)
    last = ext.inst.bind(lifted, mor.base.kmor.comps[n + i - 1])
    base = CMor(KMor(m + i, m + i - 1, ext.inst.variables(m + i - 1) + (last,)))
    src = star_iter_ext(ext, f, ext.ft(Y), i - 1)
    dst = star_iter_ext(ext, f, Y, i)
    return SectionWitness(ExtMor(src, dst, base))


def mb_lm(ext, s):
    mor = _section_mor(ext, s)
    n = mor.src.base
    return BTildeLM(n, mor.dst.tele, mor.base.kmor.comps[n])


def mb_lm_inv(ext, b):
    X = ext.make_object(b.n + 1, b.gamma)
    return SectionWitness(ExtMor(ext.ft(X), X, CMor(kleisli.section_tuple(ext.inst, b.r))))


def boundary_lm(b):
    return ExtObj(b.n + 1, b.gamma)


def _explicit_T(ext, X, Y, op="T"):
    m, n = X.base, Y.base
    if m <= 0:
        raise BopDomainError(op, "m > 0", f"m={m}")
    if n <= m - 1:
        raise BopDomainError(op, "n > m-1", f"m={m}, n={n}")
    if X.tele[: m - 1] != Y.tele[: m - 1]:
        raise BopDomainError(op, "T_i = T'_i for i <= m-2")
    return _weakened_tail(ext, X, Y)


def _explicit_Tt(ext, X, b):
    m = X.base
    if m <= 0:
        raise BopDomainError("T~", "m > 0", f"m={m}")
    if b.n + 1 <= m - 1:
        raise BopDomainError("T~", "n+1 > m-1", f"m={m}, n={b.n}")
    head = _explicit_T(ext, X, ExtObj(b.n + 1, b.gamma), "T~")
    return BTildeLM(b.n + 1, head.tele, ext.inst.rr_of_finfun(delta(m - 1, b.n), b.r))


def _explicit_S(ext, b, Y, op="S"):
    m, n = b.n, Y.base
    if n <= m + 1:
        raise BopDomainError(op, "n > m+1", f"m={m}, n={n}")
    if b.gamma != Y.tele[: m + 1]:
        raise BopDomainError(op, "T_i = T'_i for i <= m")
    tail = tuple(theta_lm(ext.mod, b.r, Y.tele[k], k) for k in range(m + 1, n))
    return ExtObj(n - 1, Y.tele[:m] + tail)


def _explicit_St(ext, b1, b2):
    if b2.n <= b1.n:
        raise BopDomainError("S~", "n > m", f"m={b1.n}, n={b2.n}")
    head = _explicit_S(ext, b1, ExtObj(b2.n + 1, b2.gamma), "S~")
    return BTildeLM(b2.n - 1, head.tele, kleisli.theta_rr(ext.inst, b1.r, b2.r))


def _explicit_delta(ext, X):
    m = X.base
    if m <= 0:
        raise BopDomainError("delta", "m > 0", f"m={m}")
    return BTildeLM(m, _explicit_T(ext, X, X, "delta").tele, ext.inst.eta(m, m - 1))


_EXPLICIT = {
    "T": _explicit_T,
    "Tt": _explicit_Tt,
    "S": _explicit_S,
    "St": _explicit_St,
    "delta": _explicit_delta,
}

_DEFINITIONAL = {
    "T": lambda ext, X, Y: ext.b_T(X, Y),
    "Tt": lambda ext, X, b: mb_lm(ext, ext.b_Tt(X, mb_lm_inv(ext, b))),
    "S": lambda ext, b, Y: ext.b_S(mb_lm_inv(ext, b), Y),
    "St": lambda ext, b1, b2: mb_lm(ext, ext.b_St(mb_lm_inv(ext, b1), mb_lm_inv(ext, b2))),
    "delta": lambda ext, X: mb_lm(ext, ext.b_delta(X)),
}


def bop_lm_explicit(ext, op, *args):
    return _EXPLICIT[normalize_op(op)](ext, *args)


def bop_lm_definitional(ext, op, *args):
    return _DEFINITIONAL[normalize_op(op)](ext, *args)


# suites

def _btildes_over(ext, X):
    """Every (n, Gamma, r) with (n+1, Gamma) = X, when RR(n) is enumerable."""
    n = X.base - 1
    return [BTildeLM(n, X.tele, r) for r in ext.inst.enumerate(n)]


class _CaseDrawer:
    """Random in-domain arguments for the five operations."""

    def __init__(self, ext, budget, rng):
        self.ext = ext
        self.budget = budget
        self.rng = rng

    def ctx(self, lo, hi):
        if hi < lo:
            raise EmptyCarrierError(f"no context size between {lo} and {hi} within the budget")
        return int(self.rng.integers(lo, hi + 1))

    def obj(self, n, prefix=()):
        return self.ext.extend(self.rng, ExtObj(len(prefix), tuple(prefix)), n, self.budget.max_size)

    def term(self, n):
        return self.ext.inst.sample(self.rng, n, self.budget.max_size)

    def btilde(self, n, prefix=()):
        return BTildeLM(n, self.obj(n + 1, prefix).tele, self.term(n))

    def draw(self, op):
        top = self.budget.max_len
        if op == "T":
            m = self.ctx(1, top)
            X = self.obj(m)
            return X, self.obj(self.ctx(m, top + 1), X.tele[: m - 1])
        if op == "Tt":
            m = self.ctx(1, top)
            X = self.obj(m)
            return X, self.btilde(self.ctx(m - 1, top + 1), X.tele[: m - 1])
        if op == "S":
            b = self.btilde(self.ctx(0, top - 1))
            return b, self.obj(self.ctx(b.n + 2, b.n + 4), b.gamma)
        if op == "St":
            b1 = self.btilde(self.ctx(0, top - 1))
            return b1, self.btilde(self.ctx(b1.n + 1, b1.n + 3), b1.gamma)
        return (self.obj(self.ctx(1, top + 1)),)


def theorem_cases(ext, budget, rng=None):
    rng = rng if rng is not None else budget.rng(13)
    if ext.enumerable_objects and ext.inst.is_enumerable:
        objects = list(ext.objects(budget.max_len))
        positive = [X for X in objects if X.base > 0]
        bts = [b for X in positive for b in _btildes_over(ext, X)]
        cases = {
            "T": [(X, Y) for X in positive for Y in objects
                  if Y.base > X.base - 1 and X.tele[: X.base - 1] == Y.tele[: X.base - 1]],
            "Tt": [(X, b) for X in positive for b in bts
                   if b.n + 1 > X.base - 1 and X.tele[: X.base - 1] == b.gamma[: X.base - 1]],
            "S": [(b, Y) for b in bts for Y in objects
                  if Y.base > b.n + 1 and Y.tele[: b.n + 1] == b.gamma],
            "St": [(b1, b2) for b1 in bts for b2 in bts
                   if b2.n > b1.n and b2.gamma[: b1.n + 1] == b1.gamma],
            "delta": [(X,) for X in positive],
        }
        return cases, EXHAUSTIVE

    drawer = _CaseDrawer(ext, budget, rng)
    cases = {op: [] for op in OPS}
    for op in OPS:
        for _ in range(budget.samples):
            try:
                cases[op].append(drawer.draw(op))
            except EmptyCarrierError:
                logger.debug("skipped a %s case with an empty carrier", op)
    return cases, SAMPLED


def _encode_value(ext, v):
    if isinstance(v, BTildeLM):
        return ext.encode_btilde(v)
    if isinstance(v, ExtObj):
        return ext.encode_object(v)
    return v


def check_theorem(ext, budget):
    cases, mode = theorem_cases(ext, budget)
    checks = []
    for op in OPS:
        def agree(args, op=op):
            return bop_lm_explicit(ext, op, *args) == bop_lm_definitional(ext, op, *args)

        def describe(args, op=op):
            out = {"args": [_encode_value(ext, a) for a in args]}
            for label, fn in (("explicit", bop_lm_explicit), ("definitional", bop_lm_definitional)):
                try:
                    out[label] = _encode_value(ext, fn(ext, op, *args))
                except Exception as e:
                    out[label] = f"{type(e).__name__}: {e}"
            return out

        checks.append(check_cases(f"theorem-lm-{op}", cases[op], agree, describe, mode))
    return checks


def check_mb(ext, budget):
    rng = budget.rng(14)
    exhaustive = ext.enumerable_objects and ext.inst.is_enumerable
    if exhaustive:
        positive = [X for X in ext.objects(budget.max_len) if X.base > 0]
        pairs = [b for X in positive for b in _btildes_over(ext, X)]
        sections = [s for X in positive for s in ext.homs(ext.ft(X), X) if is_section_lm(ext, s)]
    else:
        drawer = _CaseDrawer(ext, budget, rng)
        pairs, sections = [], []
        for _ in range(budget.samples):
            try:
                pairs.append(drawer.btilde(drawer.ctx(0, budget.max_len - 1)))
                sections.append(mb_lm_inv(ext, drawer.btilde(drawer.ctx(0, budget.max_len - 1))).mor)
            except EmptyCarrierError:
                continue
    mode = EXHAUSTIVE if exhaustive else SAMPLED
    return [
        check_cases("mb-lm-roundtrip-sections", sections,
                    lambda s: mb_lm_inv(ext, mb_lm(ext, s)).mor == s, ext.encode_mor, mode),
        check_cases("mb-lm-roundtrip-pairs", pairs,
                    lambda b: mb_lm(ext, mb_lm_inv(ext, b)) == b, ext.encode_btilde, mode),
    ]


def _sample_sections(ext, drawer, budget):
    out = []
    for _ in range(max(1, budget.samples // 10)):
        try:
            b = drawer.btilde(drawer.ctx(0, budget.max_len))
        except EmptyCarrierError:
            continue
        out.append(mb_lm_inv(ext, b).mor)
    return out


def check_closed_forms(ext, budget):
    """Closed formulas of C(RR, LM) against the generic pullback calculus."""
    rng = budget.rng(15)
    objects, _ = sample_objects(ext, budget, rng)
    positive = [X for X in objects if X.base > 0]
    drawer = _CaseDrawer(ext, budget, rng)

    weakening = [(X, Y) for Y in positive for X in objects
                 if X.base > Y.base - 1 and X.tele[: Y.base - 1] == Y.tele[: Y.base - 1]]
    for _ in range(budget.samples // 2):
        try:
            Y = drawer.obj(drawer.ctx(1, budget.max_len))
            weakening.append((drawer.obj(drawer.ctx(Y.base, budget.max_len + 1), Y.tele[: Y.base - 1]), Y))
        except EmptyCarrierError:
            continue

    morphisms = []
    for X in objects:
        for Y in positive:
            homs, _ = sample_homs(ext, X, Y, budget, rng)
            morphisms.extend(homs[:4])

    pullbacks = []
    for s in _sample_sections(ext, drawer, budget):
        for i in range(1, ext.length(s.dst) + 1):
            D = ext.ft_iter(s.dst, i)
            for X in objects[:6]:
                homs, _ = sample_homs(ext, X, D, budget, rng)
                pullbacks.extend((f, s) for f in homs[:1])

    oracle = _theta_oracle(ext.mod)
    thetas = []
    for _ in range(budget.samples // 2 if oracle is not None else 0):
        m = drawer.ctx(0, budget.max_len)
        n = drawer.ctx(m + 1, m + 3)
        try:
            thetas.append((drawer.term(m), ext.mod.sample(rng, n, budget.max_size), n))
        except EmptyCarrierError:
            continue

    def weakening_ok(c):
        X, Y = c
        return p_star_weakening(ext, X, Y) == ext.star_over(ext.p(Y), X)

    def section_transport(f):
        s = section_of_lm(ext, f).mor
        return tr(s) == crr.section_of(ext.base, tr(f)).mor and is_section_lm(ext, s)

    def pullback_ok(c):
        f, s = c
        closed = pullback_section_lm(ext, f, s).mor
        return (closed == ext.star_mor(f, s)
                and tr(closed) == crr.pullback_section(ext.base, tr(f), tr(s)).mor)

    def theta_ok(c):
        r, E, n = c
        return theta_lm(ext.mod, r, E, n) == oracle(r, E, n)

    def enc_term(t):
        return ext.inst.encode(t)

    return [
        check_cases("p-star-weakening-closed-form", weakening, weakening_ok,
                    lambda c: [ext.encode_object(c[0]), ext.encode_object(c[1])], SAMPLED),
        check_cases("section-of-lm-transport", morphisms, section_transport, ext.encode_mor, SAMPLED),
        check_cases("pullback-section-lm", pullbacks, pullback_ok,
                    lambda c: {"f": ext.encode_mor(c[0]), "s": ext.encode_mor(c[1])}, SAMPLED),
        check_cases("theta-lm-matches-theta-rr", thetas, theta_ok,
                    lambda c: [enc_term(c[0]), ext.mod.encode(c[1]), c[2]], SAMPLED)
        if oracle is not None
        else Check("theta-lm-matches-theta-rr", SKIPPED, mode=SAMPLED,
                   note=f"no substitution on {ext.mod.name} to compare against"),
    ]
