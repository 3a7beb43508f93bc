"""
The C-system C(RR) of a relative monad: objects are naturals n (written n^),
a morphism m^ -> n^ is a Kleisli morphism n -> m. Sections of p-morphisms
correspond to pairs (n, r) with r in RR(n).
"""
import logging
from dataclasses import dataclass

from core import kleisli
from core.csystem import CSystem, SectionWitness
from core.errors import (
    ArityError,
    BopDomainError,
    CompositionError,
    EmptyCarrierError,
    SectionError,
    StructureError,
)
from core.finfun import delta, iota, swap
from core.kleisli import KMor
from core.report import EXHAUSTIVE, SAMPLED, check_cases

logger = logging.getLogger(__name__)

OPS = ("T", "Tt", "S", "St", "delta")
OP_ALIASES = {"T~": "Tt", "T̃": "Tt", "S~": "St", "S̃": "St", "δ": "delta"}


def normalize_op(op):
    op = OP_ALIASES.get(op, op)
    if op not in OPS:
        raise ValueError(f"unknown operation {op!r}; expected one of {', '.join(OPS)}")
    return op


@dataclass(frozen=True)
class CMor:
    """A morphism src^ -> dst^ of C(RR), stored as the Kleisli morphism dst -> src."""

    kmor: KMor

    @property
    def src(self):
        return self.kmor.cod

    @property
    def dst(self):
        return self.kmor.dom


@dataclass(frozen=True)
class BTildeRR:
    n: int
    r: object

    def __post_init__(self):
        if self.r.ctx != self.n:
            raise ArityError(f"({self.n}, r) with r of context {self.r.ctx}")


class CRRSystem(CSystem):
    enumerable_objects = True

    def __init__(self, inst):
        self.inst = inst
        self.name = f"crr:{inst.name}"
        self.enumerable_homs = inst.is_enumerable

    @property
    def pt(self):
        return 0

    def length(self, X):
        return X

    def ft(self, X):
        return max(X - 1, 0)

    def p(self, X):
        if X == 0:
            return self.identity(0)
        return CMor(kleisli.L(self.inst, iota(X - 1, 1)))

    def _check_pullback(self, f, Y):
        if Y == 0:
            raise StructureError("cannot pull back the object of length 0")
        if f.dst != Y - 1:
            raise StructureError(f"f ends at {f.dst}^, not at ft({Y}^)")

    def star(self, f, Y):
        self._check_pullback(f, Y)
        return f.src + 1

    def q(self, f, Y):
        self._check_pullback(f, Y)
        return CMor(kleisli.qq(self.inst, f.kmor))

    def compose(self, f, g):
        if f.dst != g.src:
            raise CompositionError(f"cannot compose {f.src}^->{f.dst}^ with {g.src}^->{g.dst}^")
        return CMor(kleisli.t_compose(self.inst, g.kmor, f.kmor))

    def identity(self, X):
        return CMor(kleisli.t_identity(self.inst, X))

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def section_of(self, f):
        n, m = f.dst, f.src
        if n == 0:
            raise SectionError("s_f needs a codomain of positive length")
        return CMor(KMor(m + 1, m, self.inst.variables(m) + (f.kmor.comps[n - 1],)))

    def star_mor(self, f, a):
        d, m = f.dst, f.src
        if a.src < d or a.dst < d:
            raise StructureError(f"f*(a) needs a morphism between objects above {d}^")
        if not self.is_over(a, d):
            raise StructureError(f"a is not a morphism over {d}^")
        i, j = a.src - d, a.dst - d
        lifted = self.q_iter(f, a.src, i).kmor
        comps = self.inst.variables(m + i)[:m]
        comps += tuple(self.inst.bind(lifted, a.kmor.comps[d + l]) for l in range(j))
        return CMor(KMor(m + j, m + i, comps))

    def objects(self, max_len):
        return range(max_len + 1)

    def homs(self, X, Y):
        return (CMor(k) for k in kleisli.all_kmors(self.inst, Y, X))

    def sample_object(self, rng, max_len, max_size=8):
        return int(rng.integers(0, max_len + 1))

    def sample_mor(self, rng, X, Y, max_size=8):
        return CMor(kleisli.sample_kmor(self.inst, rng, Y, X, max_size))

    def encode_object(self, X):
        return X

    def encode_mor(self, f):
        return {"src": f.src, "dst": f.dst, "comps": [self.inst.encode(c) for c in f.kmor.comps]}

    def encode_btilde(self, b):
        return {"n": b.n, "r": self.inst.encode(b.r)}

    def decode_btilde(self, data):
        try:
            return BTildeRR(data["n"], self.inst.decode(data["n"], data["r"]))
        except (KeyError, TypeError):
            raise StructureError(f"expected an object {{\"n\": ..., \"r\": ...}}, got {data!r}")


def crr_build(inst):
    return CRRSystem(inst)


def ft_mor(cc, f):
    return cc.ft_mor(f)


def is_section(cc, f):
    """A morphism n^ -> (n+1)^ is a section iff its first n components are the variables."""
    n = f.src
    return f.dst == n + 1 and f.kmor.comps[:n] == cc.inst.variables(n)


def section_of(cc, f):
    return SectionWitness(cc.section_of(f))


def _section_mor(cc, s):
    mor = s.mor if isinstance(s, SectionWitness) else s
    if not is_section(cc, mor):
        raise SectionError("not a section of a p-morphism of C(RR)")
    return mor


def mb(cc, s):
    mor = _section_mor(cc, s)
    return BTildeRR(mor.src, mor.kmor.comps[mor.src])


def mb_inv(cc, b):
    return SectionWitness(CMor(kleisli.section_tuple(cc.inst, b.r)))


def boundary(b):
    return b.n + 1


def pullback_section(cc, f, s):
    """f*(s) for f: m^ -> n^ and a section s: (n+i)^ -> (n+i+1)^, in closed form."""
    mor = _section_mor(cc, s)
    n, m = f.dst, f.src
    i = mor.src - n
    if i < 0:
        raise StructureError(f"section over {mor.src}^ is not above the codomain {n}^ of f")
    lifted = kleisli.qq_iter(cc.inst, f.kmor, i)
    last = cc.inst.bind(lifted, mor.kmor.comps[n + i])
    return SectionWitness(CMor(KMor(m + i + 1, m + i, cc.inst.variables(m + i) + (last,))))


def _explicit_T(cc, m, n):
    if m <= 0:
        raise BopDomainError("T", "m > 0", f"m={m}")
    if n <= m - 1:
        raise BopDomainError("T", "n > m-1", f"m={m}, n={n}")
    return n + 1


def _explicit_Tt(cc, m, b):
    if m <= 0:
        raise BopDomainError("T~", "m > 0", f"m={m}")
    if b.n + 1 <= m - 1:
        raise BopDomainError("T~", "n+1 > m-1", f"m={m}, n={b.n}")
    return BTildeRR(b.n + 1, cc.inst.rr_of_finfun(delta(m - 1, b.n), b.r))


def _explicit_S(cc, b, n):
    if n <= b.n + 1:
        raise BopDomainError("S", "n > m+1", f"m={b.n}, n={n}")
    return n - 1


def _explicit_St(cc, b1, b2):
    if b2.n <= b1.n:
        raise BopDomainError("S~", "n > m", f"m={b1.n}, n={b2.n}")
    return BTildeRR(b2.n - 1, kleisli.theta_rr(cc.inst, b1.r, b2.r))


def _explicit_delta(cc, n):
    if n <= 0:
        raise BopDomainError("delta", "n > 0", f"n={n}")
    return BTildeRR(n, cc.inst.eta(n, n - 1))


_EXPLICIT = {
    "T": _explicit_T,
    "Tt": _explicit_Tt,
    "S": _explicit_S,
    "St": _explicit_St,
    "delta": _explicit_delta,
}

_DEFINITIONAL = {
    "T": lambda cc, m, n: cc.b_T(m, n),
    "Tt": lambda cc, m, b: mb(cc, cc.b_Tt(m, mb_inv(cc, b))),
    "S": lambda cc, b, n: cc.b_S(mb_inv(cc, b), n),
    "St": lambda cc, b1, b2: mb(cc, cc.b_St(mb_inv(cc, b1), mb_inv(cc, b2))),
    "delta": lambda cc, n: mb(cc, cc.b_delta(n)),
}


def bop_explicit(cc, op, *args):
    return _EXPLICIT[normalize_op(op)](cc, *args)


def bop_definitional(cc, op, *args):
    return _DEFINITIONAL[normalize_op(op)](cc, *args)


def psi(inst, t):
    if t.ctx != 2:
        raise ArityError(f"psi acts on RR(2), got a term of context {t.ctx}")
    t = inst.rr_of_finfun(delta(0, 2), t)
    t = inst.rr_of_finfun(delta(0, 3), t)
    t = kleisli.theta_rr(inst, inst.eta(3, 0), t)
    return kleisli.theta_rr(inst, inst.eta(2, 1), t)


def _btildes(cc, budget, rng, exhaustive, top):
    inst = cc.inst
    if exhaustive:
        return [BTildeRR(n, r) for n in range(top + 1) for r in inst.enumerate(n)]
    out = []
    for _ in range(budget.samples):
        n = int(rng.integers(0, top + 1))
        try:
            out.append(BTildeRR(n, inst.sample(rng, n, budget.max_size)))
        except EmptyCarrierError:
            continue
    return out


def theorem_cases(cc, budget, rng=None):
    """Argument tuples per operation, all inside the operations' domains."""
    rng = rng if rng is not None else budget.rng(6)
    top = budget.max_len
    exhaustive = cc.inst.is_enumerable
    if exhaustive:
        bts = _btildes(cc, budget, rng, True, top)
        ints = range(top + 2)
        cases = {
            "T": [(m, n) for m in ints for n in ints if m > 0 and n > m - 1],
            "Tt": [(m, b) for m in ints for b in bts if m > 0 and b.n + 1 > m - 1],
            "S": [(b, n) for b in bts for n in ints if n > b.n + 1],
            "St": [(b1, b2) for b1 in bts for b2 in bts if b2.n > b1.n],
            "delta": [(n,) for n in ints if n > 0],
        }
        return cases, EXHAUSTIVE

    inst = cc.inst
    draws = budget.samples

    def term(n):
        return inst.sample(rng, n, budget.max_size)

    def ctx(lo, hi):
        return int(rng.integers(lo, hi + 1))

    def draw_T():
        m = ctx(1, top + 1)
        return m, ctx(m, top + 2)

    def draw_Tt():
        m = ctx(1, top + 1)
        n = ctx(max(m - 1, 0), top + 2)
        return m, BTildeRR(n, term(n))

    def draw_S():
        k = ctx(0, top)
        return BTildeRR(k, term(k)), ctx(k + 2, k + 4)

    def draw_St():
        k = ctx(0, top)
        n = ctx(k + 1, k + 3)
        return BTildeRR(k, term(k)), BTildeRR(n, term(n))

    def draw_delta():
        return (ctx(1, top + 2),)

    draw = {"T": draw_T, "Tt": draw_Tt, "S": draw_S, "St": draw_St, "delta": draw_delta}
    cases = {op: [] for op in OPS}
    for op in OPS:
        for _ in range(draws):
            try:
                cases[op].append(draw[op]())
            except EmptyCarrierError:
                logger.debug("skipped a %s case with an empty carrier", op)
    return cases, SAMPLED


def _domain_violations(cc, budget):
    inst = cc.inst
    b0 = BTildeRR(1, inst.eta(1, 0))
    b1 = BTildeRR(2, inst.eta(2, 1))
    return [
        ("T", (0, 3)), ("T", (3, 1)),
        ("Tt", (0, b0)), ("Tt", (4, b0)),
        ("S", (b0, 2)), ("S", (b1, 1)),
        ("St", (b1, b0)), ("St", (b0, b0)),
        ("delta", (0,)),
    ]


def _raises_domain_error(fn, *args):
    try:
        fn(*args)
    except BopDomainError:
        return True
    return False


def _encode_arg(cc, a):
    return cc.encode_btilde(a) if isinstance(a, BTildeRR) else a


def _encode_result(cc, v):
    return cc.encode_btilde(v) if isinstance(v, BTildeRR) else v


def check_theorem(cc, budget):
    cases, mode = theorem_cases(cc, budget)
    checks = []
    for op in OPS:
        def agree(args, op=op):
            return bop_explicit(cc, op, *args) == bop_definitional(cc, op, *args)

        def describe(args, op=op):
            out = {"args": [_encode_arg(cc, a) for a in args]}
            for label, fn in (("explicit", bop_explicit), ("definitional", bop_definitional)):
                try:
                    out[label] = _encode_result(cc, fn(cc, op, *args))
                except Exception as e:
                    out[label] = f"{type(e).__name__}: {e}"
            return out

        checks.append(check_cases(f"theorem-{op}", cases[op], agree, describe, mode))

    violations = _domain_violations(cc, budget)
    checks.append(check_cases(
        "theorem-domains", violations,
        lambda c: (_raises_domain_error(bop_explicit, cc, c[0], *c[1])
                   and _raises_domain_error(bop_definitional, cc, c[0], *c[1])),
        lambda c: {"op": c[0], "args": [_encode_arg(cc, a) for a in c[1]]}))
    return checks


def check_mb(cc, budget):
    rng = budget.rng(7)
    inst = cc.inst
    exhaustive = inst.is_enumerable
    mode = EXHAUSTIVE if exhaustive else SAMPLED
    if exhaustive:
        sections = [s for n in range(budget.max_len + 1) for s in cc.homs(n, n + 1) if is_section(cc, s)]
        pairs = _btildes(cc, budget, rng, True, budget.max_len)
    else:
        pairs = _btildes(cc, budget, rng, False, budget.max_len)
        sections = [CMor(kleisli.section_tuple(inst, b.r)) for b in _btildes(cc, budget, rng, False, budget.max_len)]
    criterion = []
    if exhaustive:
        criterion = [f for n in range(budget.max_len + 1) for f in cc.homs(n, n + 1)]
    return [
        check_cases("mb-roundtrip-sections", sections,
                    lambda s: mb_inv(cc, mb(cc, s)).mor == s, cc.encode_mor, mode),
        check_cases("mb-roundtrip-pairs", pairs,
                    lambda b: mb(cc, mb_inv(cc, b)) == b, cc.encode_btilde, mode),
        check_cases("section-criterion", criterion,
                    lambda f: is_section(cc, f) == cc.is_section(f), cc.encode_mor, mode),
    ]


def check_psi(inst, budget):
    if inst.is_enumerable:
        terms, mode = inst.enumerate(2), EXHAUSTIVE
    else:
        rng = budget.rng(8)
        terms, mode = [inst.sample(rng, 2, budget.max_size) for _ in range(budget.samples)], SAMPLED
    transposition = swap(2, 0, 1)
    return check_cases("psi-equals-swap", terms,
                       lambda t: psi(inst, t) == inst.rr_of_finfun(transposition, t),
                       lambda t: inst.encode(t), mode)


def check_closed_forms(cc, budget):
    """Closed formulas of C(RR) against their recursive definitions."""
    rng = budget.rng(16)
    inst = cc.inst
    top = budget.max_len
    lifts, pullbacks, truncations = [], [], []
    for _ in range(budget.samples):
        m, n, i = (int(x) for x in rng.integers(0, top + 1, size=3))
        try:
            f = CMor(kleisli.sample_kmor(inst, rng, n, m, budget.max_size))
            lifts.append((f, i))
            r = inst.sample(rng, n + i, budget.max_size)
            pullbacks.append((f, mb_inv(cc, BTildeRR(n + i, r)).mor))
            truncations.append((CMor(kleisli.sample_kmor(inst, rng, n + i, m, budget.max_size)), i))
        except EmptyCarrierError:
            continue

    def lift_ok(c):
        f, i = c
        closed = kleisli.qq_iter(inst, f.kmor, i)
        return (closed == kleisli.qq_iter_recursive(inst, f.kmor, i)
                and cc.q_iter(f, f.dst + i, i).kmor == closed
                and cc.star_iter(f, f.dst + i, i) == f.src + i)

    def pullback_ok(c):
        f, s = c
        return pullback_section(cc, f, s).mor == cc.star_mor(f, s)

    def truncation_ok(c):
        g, i = c
        n = g.dst - i
        return cc.compose(g, cc.p_iter(g.dst, i)).kmor.comps == g.kmor.comps[:n]

    return [
        check_cases("qq-iter-closed-form", lifts, lift_ok,
                    lambda c: {"f": cc.encode_mor(c[0]), "i": c[1]}, SAMPLED),
        check_cases("pullback-section-equals-star-mor", pullbacks, pullback_ok,
                    lambda c: {"f": cc.encode_mor(c[0]), "s": cc.encode_mor(c[1])}, SAMPLED),
        check_cases("p-iter-truncation", truncations, truncation_ok,
                    lambda c: {"g": cc.encode_mor(c[0]), "i": c[1]}, SAMPLED),
    ]
