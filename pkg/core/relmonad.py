"""
Jf-relative monads: a carrier RR(n) for every natural n, the unit
eta(n)(i) = x_i^n and the Kleisli extension rho (here `bind`).

Set monads (identity, exception, terminal) become relative monads by
restricting to the standard finite sets; binding signatures give the free
relative monad of de Bruijn syntax.
"""
import itertools
import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional

from core import kleisli
from core import syntax
from core.errors import ArityError, EmptyCarrierError, IndexRangeError, SignatureError
from core.report import EXHAUSTIVE, SAMPLED, Budget, Report, budget_dict, check_cases
from core.syntax import BOT, STAR, Var

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Term:
    instance: str
    ctx: int
    payload: object

    def __str__(self):
        return f"{syntax.render(self.payload)} : RR({self.ctx})"


@dataclass(frozen=True)
class SetMonad:
    """
    A monad (R, unit, join) on sets. The standard set stn(n) is presented to it
    as the list [Var(0), ..., Var(n-1)].
    """

    name: str
    unit: Callable
    fmap: Callable
    join: Callable
    carrier: Optional[Callable] = None


@dataclass(frozen=True)
class MonadInstance:
    name: str
    unit: Callable
    subst: Callable
    carrier: Optional[Callable] = None
    sampler: Optional[Callable] = None
    validator: Optional[Callable] = None
    signature: object = None
    lift: bool = True

    @property
    def is_enumerable(self):
        return self.carrier is not None

    def eta(self, n, i):
        if not 0 <= i < n:
            raise IndexRangeError(f"variable x_{i} out of range in context {n}")
        return Term(self.name, n, self.unit(i))

    def variables(self, n):
        return tuple(self.eta(n, i) for i in range(n))

    def bind(self, f, t):
        if t.ctx != f.dom:
            raise ArityError(f"cannot bind a morphism from {f.dom} into a term of context {t.ctx}")
        return Term(self.name, f.cod, self.subst(t.payload, tuple(c.payload for c in f.comps)))

    def rr_of_finfun(self, ff, t):
        """RR(ff)(t) = bind(L(ff), t): the renaming of t along ff."""
        if t.ctx != ff.dom:
            raise ArityError(f"cannot rename a term of context {t.ctx} along a map from {ff.dom}")
        return self.bind(kleisli.L(self, ff), t)

    def enumerate(self, n):
        if self.carrier is None:
            return None
        return [Term(self.name, n, payload) for payload in self.carrier(n)]

    def sample(self, rng, n, max_size=8):
        if self.sampler is None:
            elements = self.enumerate(n)
            if not elements:
                raise EmptyCarrierError(f"RR({n}) of {self.name} is empty")
            return elements[int(rng.integers(0, len(elements)))]
        return Term(self.name, n, self.sampler(rng, n, max_size))

    def is_valid(self, n, payload):
        if self.validator is not None:
            return self.validator(n, payload)
        return payload in self.carrier(n)

    def make(self, n, payload):
        if not self.is_valid(n, payload):
            raise SignatureError(f"{syntax.render(payload)} is not an element of RR({n}) of {self.name}")
        return Term(self.name, n, payload)

    def encode(self, t):
        return syntax.to_json(t.payload)

    def decode(self, n, data):
        return self.make(natural_context(n), syntax.from_json(data))


def natural_context(n):
    """n itself when it is a usable context size; JSON input goes through here."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ArityError(f"context size must be a natural number, got {n!r}")
    return n


def from_set_monad(monad, name=None):
    """rho(f) = R(f) followed by the multiplication at stn(n)."""
    def base(n):
        return [Var(i) for i in range(n)]

    def subst(payload, comps):
        return monad.join(monad.fmap(lambda v: comps[v.index], payload))

    carrier = None
    if monad.carrier is not None:
        def carrier(n):
            return monad.carrier(base(n))

    return MonadInstance(
        name=name or monad.name,
        unit=lambda i: monad.unit(Var(i)),
        subst=subst,
        carrier=carrier,
    )


IDENTITY_MONAD = SetMonad(
    name="vars",
    unit=lambda x: x,
    fmap=lambda g, t: g(t),
    join=lambda tt: tt,
    carrier=lambda xs: list(xs),
)

# R(X) = X + {BOT}. The left injection is left implicit; X never contains BOT,
# so the multiplication is the identity on this encoding.
EXCEPTION_MONAD = SetMonad(
    name="exc",
    unit=lambda x: x,
    fmap=lambda g, t: BOT if t is BOT else g(t),
    join=lambda tt: tt,
    carrier=lambda xs: list(xs) + [BOT],
)

TERMINAL_MONAD = SetMonad(
    name="unit",
    unit=lambda x: STAR,
    fmap=lambda g, t: STAR,
    join=lambda tt: STAR,
    carrier=lambda xs: [STAR],
)


def variables_instance():
    return from_set_monad(IDENTITY_MONAD)


def exception_instance():
    return from_set_monad(EXCEPTION_MONAD)


def unit_instance():
    return from_set_monad(TERMINAL_MONAD)


def free_monad(sig, name="free", lift=True):
    """RR(n) = trees over sig with free variables below n; bind is simultaneous substitution."""
    def binders(sym):
        return syntax.binders_of(sym, sig)

    def validator(n, payload):
        try:
            syntax.check_scope(payload, n, sig)
        except SignatureError:
            return False
        return True

    sampler = syntax.TreeSampler(sig)
    return MonadInstance(
        name=name,
        unit=lambda i: Var(i),
        subst=lambda payload, comps: syntax.substitute(payload, comps, binders, lift),
        sampler=lambda rng, n, max_size: sampler.sample(rng, n, max_size),
        validator=validator,
        signature=sig,
        lift=lift,
    )


def mutate_no_lifting(inst):
    """The free instance with de Bruijn lifting under binders switched off."""
    if inst.signature is None:
        raise SignatureError(f"{inst.name} is not a free instance")
    return replace(inst, subst=free_monad(inst.signature, lift=False).subst, lift=False)


def _law_grid_size(inst, max_n):
    sizes = [len(inst.enumerate(n)) for n in range(max_n + 1)]
    return sum(sizes[m] ** l * sizes[n] ** m * sizes[l]
               for l, m, n in itertools.product(range(max_n + 1), repeat=3))


def _sampled_cases(rng, max_n, samples, draw):
    produced = 0
    attempts = 0
    while produced < samples and attempts < samples * 20:
        attempts += 1
        try:
            case = draw(rng, max_n)
        except EmptyCarrierError:
            continue
        produced += 1
        yield case


def check_monad_laws(inst, max_n=3, samples=300, seed=0, exhaustive_limit=200000, max_size=8):
    """The three relative-monad laws, exhaustive when the carriers are small enough."""
    budget = Budget(max_len=max_n, samples=samples, seed=seed, limit=exhaustive_limit, max_size=max_size)
    exhaustive = inst.is_enumerable and _law_grid_size(inst, max_n) <= exhaustive_limit
    mode = EXHAUSTIVE if exhaustive else SAMPLED
    rng = budget.rng()

    def enc(t):
        return {"ctx": t.ctx, "term": inst.encode(t)}

    def enc_mor(f):
        return kleisli.encode_kmor(inst, f)

    if exhaustive:
        law1_cases = ((n, t) for n in range(max_n + 1) for t in inst.enumerate(n))
        law2_cases = ((f, i) for m in range(max_n + 1) for n in range(max_n + 1)
                      for f in kleisli.all_kmors(inst, m, n) for i in range(m))
        law3_cases = ((f, g, t)
                      for l, m, n in itertools.product(range(max_n + 1), repeat=3)
                      for f in kleisli.all_kmors(inst, l, m)
                      for g in kleisli.all_kmors(inst, m, n)
                      for t in inst.enumerate(l))
    else:
        def draw1(r, top):
            n = int(r.integers(0, top + 1))
            return n, inst.sample(r, n, max_size)

        def draw2(r, top):
            if top < 1:
                raise EmptyCarrierError("law2 needs a context of positive size")
            m = int(r.integers(1, top + 1))
            n = int(r.integers(0, top + 1))
            return kleisli.sample_kmor(inst, r, m, n, max_size), int(r.integers(0, m))

        def draw3(r, top):
            l, m, n = (int(x) for x in r.integers(0, top + 1, size=3))
            f = kleisli.sample_kmor(inst, r, l, m, max_size)
            g = kleisli.sample_kmor(inst, r, m, n, max_size)
            return f, g, inst.sample(r, l, max_size)

        law1_cases = _sampled_cases(rng, max_n, samples, draw1)
        law2_cases = _sampled_cases(rng, max_n, samples, draw2)
        law3_cases = _sampled_cases(rng, max_n, samples, draw3)

    checks = [
        check_cases(
            "law1-bind-unit-is-identity", law1_cases,
            lambda c: inst.bind(kleisli.t_identity(inst, c[0]), c[1]) == c[1],
            lambda c: {"t": enc(c[1])}, mode),
        check_cases(
            "law2-bind-on-generator", law2_cases,
            lambda c: inst.bind(c[0], inst.eta(c[0].dom, c[1])) == c[0].comps[c[1]],
            lambda c: {"f": enc_mor(c[0]), "i": c[1]}, mode),
        check_cases(
            "law3-bind-associative", law3_cases,
            lambda c: inst.bind(c[1], inst.bind(c[0], c[2])) == inst.bind(kleisli.t_compose(inst, c[0], c[1]), c[2]),
            lambda c: {"f": enc_mor(c[0]), "g": enc_mor(c[1]), "t": enc(c[2])}, mode),
    ]
    return Report(f"laws:{inst.name}", checks, seed, budget_dict(budget))
