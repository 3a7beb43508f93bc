"""
The extension CC[F] of a C-system by a presheaf F on it.

Objects are pairs (X, (T_0, ..., T_{l(X)-1})) with T_i in F(ft^{l(X)-i}(X)),
stored outermost-first; morphisms are base morphisms between the underlying
objects.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import product

from core import syntax
from core.csystem import CSystem, Homomorphism, sample_homs, sample_objects
from core.errors import (
    CompositionError,
    DepthError,
    EmptyCarrierError,
    SectionError,
    StructureError,
    TelescopeError,
)
from core.report import EXHAUSTIVE, SAMPLED, SKIPPED, Check, check_cases
from core.syntax import STAR

logger = logging.getLogger(__name__)


class Presheaf(ABC):
    name = "presheaf"

    @abstractmethod
    def contains(self, X, e):
        ...

    @abstractmethod
    def act(self, f, e):
        """F(f)(e) for f: X -> Y and e in F(Y); lands in F(X)."""

    def elements(self, X):
        return None

    def sample(self, rng, X, max_size=8):
        elements = self.elements(X)
        if not elements:
            raise EmptyCarrierError(f"{self.name} has no elements over {X!r}")
        return elements[int(rng.integers(0, len(elements)))]

    def encode(self, e):
        return syntax.to_json(e)

    def decode(self, X, data):
        e = syntax.from_json(data)
        if not self.contains(X, e):
            raise TelescopeError(f"{data!r} is not an element of {self.name} over {X!r}")
        return e


class UnitPresheaf(Presheaf):
    name = "unit"

    def contains(self, X, e):
        return e is STAR

    def act(self, f, e):
        return STAR

    def elements(self, X):
        return [STAR]


@dataclass(frozen=True)
class ExtObj:
    base: object
    tele: tuple = ()


@dataclass(frozen=True)
class ExtMor:
    src: ExtObj
    dst: ExtObj
    base: object


class ExtSystem(CSystem):
    def __init__(self, base, F):
        self.base = base
        self.F = F
        self.name = f"{base.name}[{F.name}]"
        self.enumerable_objects = base.enumerable_objects and F.elements(base.pt) is not None
        self.enumerable_homs = base.enumerable_homs

    @property
    def pt(self):
        return ExtObj(self.base.pt, ())

    def length(self, X):
        return self.base.length(X.base)

    def ft(self, X):
        if not X.tele:
            return X
        return ExtObj(self.base.ft(X.base), X.tele[:-1])

    def p(self, X):
        return ExtMor(X, self.ft(X), self.base.p(X.base))

    def star(self, f, Y):
        if self.length(Y) == 0:
            raise StructureError("cannot pull back the object of length 0")
        if f.dst != self.ft(Y):
            raise StructureError("f does not end at ft(Y)")
        last = self.F.act(f.base, Y.tele[-1])
        return ExtObj(self.base.star(f.base, Y.base), f.src.tele + (last,))

    def q(self, f, Y):
        return ExtMor(self.star(f, Y), Y, self.base.q(f.base, Y.base))

    def compose(self, f, g):
        if f.dst != g.src:
            raise CompositionError("morphisms of the extension do not compose")
        return ExtMor(f.src, g.dst, self.base.compose(f.base, g.base))

    def identity(self, X):
        return ExtMor(X, X, self.base.identity(X.base))

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.dst

    def section_of(self, f):
        if self.length(f.dst) == 0:
            raise SectionError("s_f needs a codomain of positive length")
        return ExtMor(f.src, self.star(self.ft_mor(f), f.dst), self.base.section_of(f.base))

    def star_mor(self, f, a):
        src = self.star_over(f, a.src)
        dst = self.star_over(f, a.dst)
        return ExtMor(src, dst, self.base.star_mor(f.base, a.base))

    def make_object(self, base_obj, tele):
        tele = tuple(tele)
        l = self.base.length(base_obj)
        if len(tele) != l:
            raise TelescopeError(f"telescope of length {len(tele)} over an object of length {l}")
        for i, e in enumerate(tele):
            if not self.F.contains(self.base.ft_iter(base_obj, l - i), e):
                raise TelescopeError(f"entry {i} of the telescope is not in {self.F.name} at the right object")
        return ExtObj(base_obj, tele)

    def telescopes(self, X):
        l = self.base.length(X)
        layers = [self.F.elements(self.base.ft_iter(X, l - i)) for i in range(l)]
        return (ExtObj(X, tele) for tele in product(*layers))

    def objects(self, max_len):
        for X in self.base.objects(max_len):
            yield from self.telescopes(X)

    def homs(self, X, Y):
        return (ExtMor(X, Y, b) for b in self.base.homs(X.base, Y.base))

    def extend(self, rng, X, n, max_size=8):
        """A random object of length n whose telescope starts with X's, over a random base object."""
        base_obj = X.base
        tele = X.tele
        while self.base.length(base_obj) < n:
            base_obj = self._base_above(rng, base_obj)
            tele = tele + (self.F.sample(rng, self.base.ft(base_obj), max_size),)
        return ExtObj(base_obj, tele)

    def _base_above(self, rng, X):
        n = self.base.length(X) + 1
        if not self.base.enumerable_objects:
            raise StructureError(f"{self.base.name} cannot list the objects above a given one")
        above = [Y for Y in self.base.objects(n) if self.base.length(Y) == n and self.base.ft(Y) == X]
        if not above:
            raise EmptyCarrierError(f"no base object of length {n} above the given one")
        return above[int(rng.integers(0, len(above)))]

    def sample_object(self, rng, max_len, max_size=8):
        n = int(rng.integers(0, max_len + 1))
        return self.extend(rng, self.pt, n, max_size)

    def sample_mor(self, rng, X, Y, max_size=8):
        return ExtMor(X, Y, self.base.sample_mor(rng, X.base, Y.base, max_size))

    def encode_object(self, X):
        return {"base": self.base.encode_object(X.base), "tele": [self.F.encode(e) for e in X.tele]}

    def encode_mor(self, f):
        return {"src": self.encode_object(f.src), "dst": self.encode_object(f.dst),
                "base": self.base.encode_mor(f.base)}


def ext_build(cc, F):
    return ExtSystem(cc, F)


def tr(m):
    return m.base


def tr_ob(o):
    return o.base


def tr_hom(ext):
    return Homomorphism(f"tr:{ext.name}", ext, ext.base, tr_ob, tr)


def point(ext):
    """An element of F(pt), or None when F(pt) is empty or not enumerable."""
    elements = ext.F.elements(ext.base.pt)
    return elements[0] if elements else None


def gamma_y(ext, X, y):
    """(y_{ft^l(X)}, ..., y_{ft(X)}) with y_Z = F(p_{Z, l(Z)})(y)."""
    base = ext.base
    l = base.length(X)
    return tuple(ext.F.act(base.terminal(base.ft_iter(X, l - i)), y) for i in range(l))


def tr_bang(ext, y):
    if not ext.F.contains(ext.base.pt, y):
        raise TelescopeError(f"{y!r} is not an element of {ext.F.name} over pt")

    def ob(X):
        return ExtObj(X, gamma_y(ext, X, y))

    def mor(f):
        return ExtMor(ob(ext.base.dom(f)), ob(ext.base.cod(f)), f)

    return Homomorphism(f"tr!:{ext.name}", ext.base, ext, ob, mor)


def can_iso(ext, X, g, g2):
    src = ext.make_object(X, g)
    dst = ext.make_object(X, g2)
    return ExtMor(src, dst, ext.base.identity(X))


def star_iter_ext(ext, f, Y, i):
    """
    Closed form of f*(Y, i): the telescope of dom(f) followed by
    F(q(f, ft^{i-j}(Y), j))(T'_{l(Y)-i+j}) for j = 0, ..., i-1.
    """
    ly = ext.length(Y)
    if i < 0 or i > ly:
        raise DepthError(f"iterated pullback of depth {i} along an object of length {ly}")
    if f.dst != ext.ft_iter(Y, i):
        raise StructureError(f"codomain of f is not ft^{i} of the object being pulled back")
    base = ext.base
    entries = tuple(
        ext.F.act(base.q_iter(f.base, base.ft_iter(Y.base, i - j), j), Y.tele[ly - i + j])
        for j in range(i)
    )
    return ExtObj(base.star_iter(f.base, Y.base, i), f.src.tele + entries)


def check_presheaf_laws(cc, F, budget):
    rng = budget.rng(9)
    objects, exhaustive = sample_objects(cc, budget, rng)
    cases = []
    for Z in objects:
        elements = F.elements(Z)
        if elements is None:
            exhaustive = False
            elements = []
            for _ in range(4):
                try:
                    elements.append(F.sample(rng, Z, budget.max_size))
                except EmptyCarrierError:
                    break
        for Y in objects:
            gs, complete = sample_homs(cc, Y, Z, budget, rng)
            exhaustive = exhaustive and complete
            for X in objects[:4]:
                fs, complete = sample_homs(cc, X, Y, budget, rng)
                exhaustive = exhaustive and complete
                cases.extend((f, g, e) for f in fs[:2] for g in gs[:2] for e in elements)
    mode = EXHAUSTIVE if exhaustive else SAMPLED

    def describe(c):
        return {"f": cc.encode_mor(c[0]), "g": cc.encode_mor(c[1]), "e": F.encode(c[2])}

    return [
        check_cases("presheaf-identity", cases,
                    lambda c: F.act(cc.identity(cc.cod(c[1])), c[2]) == c[2], describe, mode),
        check_cases("presheaf-composition", cases,
                    lambda c: F.act(cc.compose(c[0], c[1]), c[2]) == F.act(c[0], F.act(c[1], c[2])),
                    describe, mode),
    ]


def check_full_faithfulness(ext, budget):
    name = "tr-full-faithfulness"
    if not (ext.enumerable_objects and ext.enumerable_homs):
        return Check(name, SKIPPED, mode=SAMPLED, note=f"{ext.name} has no morphism enumerators")
    objects = list(ext.objects(budget.max_len))
    pairs = [(X, Y) for X in objects for Y in objects]

    def bijective(c):
        X, Y = c
        images = [tr(m) for m in ext.homs(X, Y)]
        return len(set(images)) == len(images) and set(images) == set(ext.base.homs(X.base, Y.base))

    return check_cases(name, pairs, bijective,
                       lambda c: [ext.encode_object(c[0]), ext.encode_object(c[1])])


def check_tr_bang_retraction(ext, y, budget):
    rng = budget.rng(10)
    base = ext.base
    h = tr_bang(ext, y)
    objects, exhaustive = sample_objects(base, budget, rng)
    morphisms = []
    for X in objects:
        for Y in objects:
            homs, complete = sample_homs(base, X, Y, budget, rng)
            exhaustive = exhaustive and complete
            morphisms.extend(homs)
    mode = EXHAUSTIVE if exhaustive else SAMPLED
    return check_cases("tr-bang-retraction", morphisms,
                       lambda f: tr(h.mor(f)) == f and tr_ob(h.ob(base.dom(f))) == base.dom(f),
                       base.encode_mor, mode)


def check_can_naturality(ext, y, budget):
    rng = budget.rng(11)
    h = tr_bang(ext, y)
    objects, exhaustive = sample_objects(ext, budget, rng)
    morphisms = []
    for X in objects:
        for Y in objects:
            homs, complete = sample_homs(ext, X, Y, budget, rng)
            exhaustive = exhaustive and complete
            morphisms.extend(homs)
    mode = EXHAUSTIVE if exhaustive else SAMPLED

    def natural(f):
        X, Y = f.src, f.dst
        to_split_src = can_iso(ext, X.base, X.tele, gamma_y(ext, X.base, y))
        to_split_dst = can_iso(ext, Y.base, Y.tele, gamma_y(ext, Y.base, y))
        back = can_iso(ext, X.base, gamma_y(ext, X.base, y), X.tele)
        inverse = ext.compose(to_split_src, back) == ext.identity(X)
        return inverse and ext.compose(to_split_src, h.mor(tr(f))) == ext.compose(f, to_split_dst)

    return check_cases("can-naturality", morphisms, natural, ext.encode_mor, mode)


def check_star_iter_ext(ext, budget):
    rng = budget.rng(12)
    objects, exhaustive = sample_objects(ext, budget, rng)
    cases = []
    for Y in objects:
        for i in range(ext.length(Y) + 1):
            D = ext.ft_iter(Y, i)
            for X in objects:
                fs, complete = sample_homs(ext, X, D, budget, rng)
                exhaustive = exhaustive and complete
                cases.extend((f, Y, i) for f in fs[:2])
    if len(cases) > budget.samples:
        picked = sorted(rng.choice(len(cases), size=budget.samples, replace=False))
        cases = [cases[int(k)] for k in picked]
        exhaustive = False
    mode = EXHAUSTIVE if exhaustive else SAMPLED
    return check_cases("star-iter-ext-closed-form", cases,
                       lambda c: star_iter_ext(ext, *c) == ext.star_iter(*c),
                       lambda c: {"f": ext.encode_mor(c[0]), "Y": ext.encode_object(c[1]), "i": c[2]}, mode)
