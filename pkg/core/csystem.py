"""
Generic C-systems: the structure (l, ft, pt, p, f*, q), the calculus derived
from it, the B-system operations defined through pullbacks, and brute-force
checkers for the C0 axioms, the pullback property and homomorphisms.

Composition is diagrammatic: compose(f, g) is "f then g".
"""
import logging
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from typing import Callable

from core.errors import (
    BopDomainError,
    ConsistencyError,
    DepthError,
    EmptyCarrierError,
    SectionError,
    StructureError,
)
from core.report import EXHAUSTIVE, FAIL, NO_CASES, PASS, SAMPLED, SKIPPED, Check, check_cases

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SectionWitness:
    mor: object


@dataclass(frozen=True)
class Homomorphism:
    name: str
    source: "CSystem"
    target: "CSystem"
    ob: Callable
    mor: Callable


class CSystem(ABC):
    name = "csystem"
    enumerable_objects = False
    enumerable_homs = False

    @property
    @abstractmethod
    def pt(self):
        ...

    @abstractmethod
    def length(self, X):
        ...

    @abstractmethod
    def ft(self, X):
        ...

    @abstractmethod
    def p(self, X):
        ...

    @abstractmethod
    def star(self, f, Y):
        ...

    @abstractmethod
    def q(self, f, Y):
        ...

    @abstractmethod
    def compose(self, f, g):
        ...

    @abstractmethod
    def identity(self, X):
        ...

    @abstractmethod
    def dom(self, f):
        ...

    @abstractmethod
    def cod(self, f):
        ...

    @abstractmethod
    def section_of(self, f):
        """s_f : dom(f) -> ft(f)*(cod(f)), the section with s_f o q(ft(f), cod(f)) = f."""

    @abstractmethod
    def star_mor(self, f, a):
        """f*(a) for f: Gamma -> Delta and a: Gamma' -> Gamma'' over Delta."""

    def objects(self, max_len):
        raise NotImplementedError(f"{self.name} cannot enumerate objects")

    def homs(self, X, Y):
        raise NotImplementedError(f"{self.name} cannot enumerate morphisms")

    def sample_object(self, rng, max_len, max_size=8):
        raise NotImplementedError(f"{self.name} cannot sample objects")

    def sample_mor(self, rng, X, Y, max_size=8):
        raise NotImplementedError(f"{self.name} cannot sample morphisms")

    def encode_object(self, X):
        return repr(X)

    def encode_mor(self, f):
        return repr(f)

    # derived calculus

    def ft_iter(self, X, i):
        if i < 0 or i > self.length(X):
            raise DepthError(f"ft^{i} of an object of length {self.length(X)}")
        for _ in range(i):
            X = self.ft(X)
        return X

    def p_iter(self, X, i):
        if i < 0 or i > self.length(X):
            raise DepthError(f"p_{{X,{i}}} of an object of length {self.length(X)}")
        mor = self.identity(X)
        for _ in range(i):
            mor = self.compose(mor, self.p(self.cod(mor)))
        return mor

    def terminal(self, X):
        return self.p_iter(X, self.length(X))

    def ft_mor(self, f):
        return self.compose(f, self.p(self.cod(f)))

    def leq(self, X, Y):
        d = self.length(Y) - self.length(X)
        return d >= 0 and self.ft_iter(Y, d) == X

    def lt(self, X, Y):
        return self.length(X) < self.length(Y) and self.leq(X, Y)

    def _check_iter(self, f, Y, i):
        if i < 0 or i > self.length(Y):
            raise DepthError(f"iterated pullback of depth {i} along an object of length {self.length(Y)}")
        if self.cod(f) != self.ft_iter(Y, i):
            raise StructureError(f"codomain of f is not ft^{i} of the object being pulled back")

    def q_iter(self, f, Y, i):
        self._check_iter(f, Y, i)
        g = f
        for k in range(i - 1, -1, -1):
            g = self.q(g, self.ft_iter(Y, k))
        return g

    def star_iter(self, f, Y, i):
        self._check_iter(f, Y, i)
        if i == 0:
            return self.dom(f)
        return self.star(self.q_iter(f, self.ft(Y), i - 1), Y)

    def _depth_over(self, f, Y):
        i = self.length(Y) - self.length(self.cod(f))
        if i < 0:
            raise StructureError("object is shorter than the codomain it is pulled back along")
        return i

    def star_over(self, f, Y):
        """f*(Y) for any Y >= cod(f)."""
        return self.star_iter(f, Y, self._depth_over(f, Y))

    def q_over(self, f, Y):
        return self.q_iter(f, Y, self._depth_over(f, Y))

    def p_over(self, Y, X):
        if not self.leq(X, Y):
            raise StructureError("p_{X,Y} needs X <= Y")
        return self.p_iter(Y, self.length(Y) - self.length(X))

    def is_over(self, f, base):
        if not (self.leq(base, self.dom(f)) and self.leq(base, self.cod(f))):
            raise StructureError("is_over needs the base below both ends of the morphism")
        return self.compose(f, self.p_over(self.cod(f), base)) == self.p_over(self.dom(f), base)

    def is_section(self, s):
        Y = self.cod(s)
        return (self.length(Y) > 0 and self.dom(s) == self.ft(Y)
                and self.compose(s, self.p(Y)) == self.identity(self.dom(s)))

    def as_section(self, s):
        if not self.is_section(s):
            raise SectionError("morphism is not a section of its codomain's p-morphism")
        return SectionWitness(s)

    def boundary(self, sw):
        return self.cod(sw.mor)

    def delta(self, X):
        if self.length(X) == 0:
            raise SectionError("the diagonal needs an object of positive length")
        return self.section_of(self.identity(X))

    # B-system operations in the pullback presentation

    def b_T(self, X, Y):
        if self.length(X) == 0:
            raise BopDomainError("T", "l(Γ) > 0")
        if not self.lt(self.ft(X), Y):
            raise BopDomainError("T", "Γ' > ft(Γ)")
        return self.star_over(self.p(X), Y)

    def b_Tt(self, X, s):
        if self.length(X) == 0:
            raise BopDomainError("T~", "l(Γ) > 0")
        if not self.lt(self.ft(X), self.boundary(s)):
            raise BopDomainError("T~", "∂(s) > ft(Γ)")
        return SectionWitness(self.star_mor(self.p(X), s.mor))

    def b_S(self, r, Y):
        if not self.lt(self.boundary(r), Y):
            raise BopDomainError("S", "Γ > ∂(r)")
        return self.star_over(r.mor, Y)

    def b_St(self, r, s):
        if not self.lt(self.boundary(r), self.boundary(s)):
            raise BopDomainError("S~", "∂(s) > ∂(r)")
        return SectionWitness(self.star_mor(r.mor, s.mor))

    def b_delta(self, X):
        if self.length(X) == 0:
            raise BopDomainError("delta", "l(Γ) > 0")
        return SectionWitness(self.delta(X))


def identity_homomorphism(cc):
    return Homomorphism(f"id:{cc.name}", cc, cc, lambda X: X, lambda f: f)


def star_mor_equations(cc, f, a, b):
    """The two defining equations of f*(a), for a candidate b."""
    if cc.dom(b) != cc.star_over(f, cc.dom(a)) or cc.cod(b) != cc.star_over(f, cc.cod(a)):
        return False
    square = cc.compose(b, cc.q_over(f, cc.cod(a))) == cc.compose(cc.q_over(f, cc.dom(a)), a)
    return square and cc.is_over(b, cc.dom(f))


def checked_star_mor(cc, f, a):
    b = cc.star_mor(f, a)
    if not star_mor_equations(cc, f, a, b):
        raise ConsistencyError("f*(a) does not satisfy its defining equations")
    if cc.enumerable_homs:
        solutions = sum(1 for c in cc.homs(cc.dom(b), cc.cod(b)) if star_mor_equations(cc, f, a, c))
        if solutions != 1:
            raise ConsistencyError(f"f*(a) defining equations have {solutions} solutions")
    return b


# sampling helpers shared by the suites

def sample_objects(cc, budget, rng):
    """Returns (objects, exhaustive)."""
    if cc.enumerable_objects:
        return list(cc.objects(budget.max_len)), True
    seen = [cc.pt]
    for _ in range(budget.samples):
        try:
            X = cc.sample_object(rng, budget.max_len, budget.max_size)
        except EmptyCarrierError:
            continue
        if X not in seen:
            seen.append(X)
        if len(seen) >= 4 * (budget.max_len + 1):
            break
    return seen, False


def sample_homs(cc, X, Y, budget, rng):
    if cc.enumerable_homs:
        homs = list(cc.homs(X, Y))
        if len(homs) <= budget.per_hom:
            return homs, True
        picked = sorted(rng.choice(len(homs), size=budget.per_hom, replace=False))
        return [homs[int(i)] for i in picked], False
    homs = []
    for _ in range(max(1, budget.per_hom // 4)):
        try:
            homs.append(cc.sample_mor(rng, X, Y, budget.max_size))
        except EmptyCarrierError:
            break
    return homs, False


class _Grid:
    """Collects cases from sampled hom-sets and remembers whether anything was cut."""

    def __init__(self, cc, budget, rng):
        self.cc = cc
        self.budget = budget
        self.rng = rng
        self.objects, self.exhaustive = sample_objects(cc, budget, rng)

    def homs(self, X, Y):
        homs, complete = sample_homs(self.cc, X, Y, self.budget, self.rng)
        self.exhaustive = self.exhaustive and complete
        return homs

    @property
    def mode(self):
        return EXHAUSTIVE if self.exhaustive else SAMPLED

    def positive(self):
        return [Y for Y in self.objects if self.cc.length(Y) > 0]

    def pairs_into_ft(self):
        """(f, Y) with f: X -> ft(Y)."""
        cc = self.cc
        return [(f, Y) for Y in self.positive() for X in self.objects for f in self.homs(X, cc.ft(Y))]

    def cap(self, items, limit):
        if len(items) <= limit:
            return items
        self.exhaustive = False
        picked = sorted(self.rng.choice(len(items), size=limit, replace=False))
        return [items[int(i)] for i in picked]

    def over_pairs(self, limit):
        """(f, a) with a over cod(f), drawn from sections, p-morphisms and identities."""
        cc = self.cc
        pairs = []
        for D in self.objects:
            candidates = [cc.identity(D)]
            candidates.extend(cc.p(Y) for Y in self.positive() if cc.ft(Y) == D)
            for Y in self.positive():
                candidates.extend(cc.section_of(g) for g in self.homs(D, Y)[:2])
            for G in self.objects:
                for f in self.homs(G, D)[:2]:
                    pairs.extend((f, a) for a in candidates)
        self.exhaustive = False
        return self.cap(pairs, limit)


def _describe(cc, *mors):
    return [cc.encode_mor(m) for m in mors]


def check_c0_axioms(cc, budget):
    rng = budget.rng(1)
    grid = _Grid(cc, budget, rng)
    objects = grid.objects
    pairs = grid.pairs_into_ft()
    triples = [(g, f, Y) for f, Y in pairs for W in objects for g in grid.homs(W, cc.dom(f))]
    triples = grid.cap(triples, budget.limit // 20)
    morphisms = [f for X in objects for Y in objects for f in grid.homs(X, Y)]
    chains = [(f, g, h) for f in morphisms for g in grid.homs(cc.cod(f), cc.cod(f))[:2]
              for h in grid.homs(cc.cod(g), cc.pt)]
    mode = grid.mode

    def unique_pt(X):
        return cc.length(cc.pt) == 0 and (cc.length(X) != 0 or X == cc.pt)

    def pt_final(X):
        if cc.enumerable_homs:
            return list(cc.homs(X, cc.pt)) == [cc.terminal(X)]
        t = cc.terminal(X)
        return cc.dom(t) == X and cc.cod(t) == cc.pt and all(g == t for g in grid.homs(X, cc.pt))

    def square(case):
        f, Y = case
        P = cc.star(f, Y)
        q = cc.q(f, Y)
        return (cc.ft(P) == cc.dom(f) and cc.dom(q) == P and cc.cod(q) == Y
                and cc.compose(q, cc.p(Y)) == cc.compose(cc.p(P), f))

    def identity_star(Y):
        one = cc.identity(cc.ft(Y))
        return cc.star(one, Y) == Y and cc.q(one, Y) == cc.identity(Y)

    def composition(case):
        g, f, Y = case
        P = cc.star(f, Y)
        gf = cc.compose(g, f)
        return (cc.star(gf, Y) == cc.star(g, P)
                and cc.q(gf, Y) == cc.compose(cc.q(g, P), cc.q(f, Y)))

    def unit_laws(f):
        return cc.compose(cc.identity(cc.dom(f)), f) == f == cc.compose(f, cc.identity(cc.cod(f)))

    def associative(case):
        f, g, h = case
        return cc.compose(cc.compose(f, g), h) == cc.compose(f, cc.compose(g, h))

    def p_iter_composition(X):
        l = cc.length(X)
        return all(cc.compose(cc.p_iter(X, i), cc.p_iter(cc.ft_iter(X, i), j)) == cc.p_iter(X, i + j)
                   for i in range(l + 1) for j in range(l - i + 1))

    def partial_order(case):
        X, Y = case
        if not cc.leq(X, X):
            return False
        if cc.leq(X, Y) and cc.leq(Y, X) and X != Y:
            return False
        return all(cc.leq(X, Z) for Z in objects if cc.leq(X, Y) and cc.leq(Y, Z))

    enc_obj = cc.encode_object
    return [
        check_cases("c0-unique-length-zero", objects, unique_pt, enc_obj, mode),
        check_cases("c0-ft-length", grid.positive(),
                    lambda X: cc.length(cc.ft(X)) == cc.length(X) - 1, enc_obj, mode),
        check_cases("c0-ft-pt", [cc.pt], lambda X: cc.ft(X) == X, enc_obj, mode),
        check_cases("c0-pt-final", objects, pt_final, enc_obj, mode),
        check_cases("c0-q-p-square", pairs, square,
                    lambda c: {"f": cc.encode_mor(c[0]), "Y": enc_obj(c[1])}, mode),
        check_cases("c0-identity-star-q", grid.positive(), identity_star, enc_obj, mode),
        check_cases("c0-composition-star-q", triples, composition,
                    lambda c: {"g": cc.encode_mor(c[0]), "f": cc.encode_mor(c[1]), "Y": enc_obj(c[2])}, mode),
        check_cases("category-identity", morphisms, unit_laws, cc.encode_mor, mode),
        check_cases("category-associativity", chains, associative, lambda c: _describe(cc, *c), mode),
        check_cases("p-iter-composition", objects, p_iter_composition, enc_obj, mode),
        check_cases("leq-partial-order", [(X, Y) for X in objects for Y in objects], partial_order,
                    lambda c: [enc_obj(c[0]), enc_obj(c[1])], mode),
    ]


def check_pullbacks(cc, budget):
    """
    Universal property of every canonical square q(f, Y), p(f*Y) within the
    budget: the map h -> (h o q, h o p) from hom(W, f*Y) to cones over W is
    a bijection. Cones are counted by grouping hom(W, Y) over hom(W, ft Y).
    """
    name = "pullback-universal-property"
    if not (cc.enumerable_objects and cc.enumerable_homs):
        return Check(name, SKIPPED, mode=SAMPLED, note=f"{cc.name} has no morphism enumerators")

    objects = list(cc.objects(budget.max_len))
    squares = [(f, Y) for Y in objects if cc.length(Y) > 0
               for X in objects for f in cc.homs(X, cc.ft(Y))]
    order = budget.rng(2).permutation(len(squares))
    cache = {}

    def homs(W, Z):
        key = (W, Z)
        if key not in cache:
            cache[key] = list(cc.homs(W, Z))
        return cache[key]

    cost = 0
    cases = 0
    for idx in order:
        f, Y = squares[int(idx)]
        X = cc.dom(f)
        P = cc.star(f, Y)
        q = cc.q(f, Y)
        pP = cc.p(P)
        pY = cc.p(Y)
        for W in objects:
            if cost > budget.limit:
                logger.info("pullback check stopped at its budget after %d cases", cases)
                return Check(name, PASS, None, cases, SAMPLED,
                             f"partial: stopped at the case budget after {cases} of {len(squares) * len(objects)} cases")
            cases += 1
            over = Counter(cc.compose(u, pY) for u in homs(W, Y))
            cones = sum(over[cc.compose(v, f)] for v in homs(W, X))
            images = set()
            witness = {"f": cc.encode_mor(f), "Y": cc.encode_object(Y), "W": cc.encode_object(W)}
            for h in homs(W, P):
                u, v = cc.compose(h, q), cc.compose(h, pP)
                if cc.compose(u, pY) != cc.compose(v, f):
                    witness["h"] = cc.encode_mor(h)
                    return Check(name, FAIL, witness, cases, EXHAUSTIVE)
                images.add((u, v))
            cost += len(homs(W, P)) + len(homs(W, Y)) + len(homs(W, X))
            if len(images) != len(homs(W, P)) or cones != len(images):
                witness.update(cones=cones, factorizations=len(images))
                return Check(name, FAIL, witness, cases, EXHAUSTIVE)
    if cases == 0:
        return Check(name, SKIPPED, None, 0, EXHAUSTIVE, NO_CASES)
    logger.info("check %s passed on %d cases", name, cases)
    return Check(name, PASS, None, cases, EXHAUSTIVE)


def check_sections(cc, budget):
    grid = _Grid(cc, budget, budget.rng(3))
    data = [f for X in grid.objects for Y in grid.positive() for f in grid.homs(X, Y)]

    def laws(f):
        s = cc.section_of(f)
        Y = cc.cod(f)
        ftf = cc.ft_mor(f)
        return (cc.dom(s) == cc.dom(f) and cc.cod(s) == cc.star(ftf, Y)
                and cc.compose(s, cc.p(cc.cod(s))) == cc.identity(cc.dom(f))
                and cc.compose(s, cc.q(ftf, Y)) == f)

    return check_cases("section-laws", data, laws, cc.encode_mor, grid.mode)


def check_star_mor(cc, budget):
    grid = _Grid(cc, budget, budget.rng(4))
    pairs = grid.over_pairs(budget.samples)

    def describe(c):
        return {"f": cc.encode_mor(c[0]), "a": cc.encode_mor(c[1])}

    checks = [check_cases("star-mor-defining-equations", pairs,
                          lambda c: star_mor_equations(cc, c[0], c[1], cc.star_mor(c[0], c[1])),
                          describe, grid.mode)]
    if cc.enumerable_homs:
        few = pairs[: max(1, budget.samples // 10)]
        checks.append(check_cases("star-mor-uniqueness", few,
                                  lambda c: checked_star_mor(cc, c[0], c[1]) is not None,
                                  describe, grid.mode))
    return checks


def check_homomorphism(h, budget):
    src, dst = h.source, h.target
    grid = _Grid(src, budget, budget.rng(5))
    objects = grid.objects
    morphisms = [f for X in objects for Y in objects for f in grid.homs(X, Y)]
    composable = [(f, g) for f in morphisms for g in grid.homs(src.cod(f), src.pt)]
    pairs = grid.pairs_into_ft()
    over = grid.over_pairs(budget.samples)
    mode = grid.mode

    def enc(c):
        return [src.encode_mor(m) for m in c] if isinstance(c, tuple) else src.encode_object(c)

    def length_ft(X):
        Y = h.ob(X)
        return dst.length(Y) == src.length(X) and h.ob(src.ft(X)) == dst.ft(Y)

    def functor(case):
        f, g = case
        return (h.mor(src.identity(src.dom(f))) == dst.identity(h.ob(src.dom(f)))
                and h.mor(src.compose(f, g)) == dst.compose(h.mor(f), h.mor(g)))

    def p_iter(X):
        return all(h.mor(src.p_iter(X, i)) == dst.p_iter(h.ob(X), i) for i in range(src.length(X) + 1))

    def order(case):
        X, Y = case
        return ((not src.leq(X, Y) or dst.leq(h.ob(X), h.ob(Y)))
                and (not src.lt(X, Y) or dst.lt(h.ob(X), h.ob(Y))))

    def star_q(case):
        f, Y = case
        return (h.ob(src.star(f, Y)) == dst.star(h.mor(f), h.ob(Y))
                and h.mor(src.q(f, Y)) == dst.q(h.mor(f), h.ob(Y)))

    def star_over(case):
        f, a = case
        return (h.ob(src.star_over(f, src.cod(a))) == dst.star_over(h.mor(f), h.ob(src.cod(a)))
                and h.mor(src.star_mor(f, a)) == dst.star_mor(h.mor(f), h.mor(a)))

    def delta(X):
        return h.mor(src.delta(X)) == dst.delta(h.ob(X))

    return [
        check_cases("hom-pt", [src.pt], lambda X: h.ob(X) == dst.pt, enc, mode),
        check_cases("hom-length-ft", objects, length_ft, enc, mode),
        check_cases("hom-functor", composable, functor, enc, mode),
        check_cases("hom-p-iter", objects, p_iter, enc, mode),
        check_cases("hom-order", [(X, Y) for X in objects for Y in objects], order,
                    lambda c: [src.encode_object(c[0]), src.encode_object(c[1])], mode),
        check_cases("hom-star-q", pairs, star_q,
                    lambda c: {"f": src.encode_mor(c[0]), "Y": src.encode_object(c[1])}, mode),
        check_cases("hom-star-mor", over, star_over,
                    lambda c: {"f": src.encode_mor(c[0]), "a": src.encode_mor(c[1])}, mode),
        check_cases("hom-delta", grid.positive(), delta, enc, mode),
    ]
