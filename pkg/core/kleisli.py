"""
The Lawvere theory T of a relative monad: Kleisli morphisms m -> n are
sequences of m terms of RR(n), composed with bind.
"""
import itertools
from dataclasses import dataclass

from core.errors import ArityError, CompositionError, PreconditionError
from core.finfun import iota


@dataclass(frozen=True)
class KMor:
    dom: int
    cod: int
    comps: tuple

    def __post_init__(self):
        if len(self.comps) != self.dom:
            raise ArityError(f"Kleisli morphism from {self.dom} given {len(self.comps)} components")
        for c in self.comps:
            if c.ctx != self.cod:
                raise ArityError(f"component of context {c.ctx} in a morphism to {self.cod}")

    def __getitem__(self, i):
        return self.comps[i]


def t_identity(inst, n):
    return KMor(n, n, inst.variables(n))


def t_compose(inst, f, g):
    """f then g: the i-th component is bind(g, f(i))."""
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose {f.dom}->{f.cod} with {g.dom}->{g.cod} in T")
    return KMor(f.dom, g.cod, tuple(inst.bind(g, c) for c in f.comps))


def L(inst, ff):
    return KMor(ff.dom, ff.cod, tuple(inst.eta(ff.cod, v) for v in ff.values))


def weaken(inst, t, i=1):
    return inst.rr_of_finfun(iota(t.ctx, i), t)


def qq(inst, f):
    m = f.cod
    comps = tuple(weaken(inst, c) for c in f.comps) + (inst.eta(m + 1, m),)
    return KMor(f.dom + 1, m + 1, comps)


def qq_iter(inst, f, i):
    """Closed form of the i-fold qq: weaken every component by i, then append x_m, ..., x_{m+i-1}."""
    if i == 0:
        return f
    m = f.cod
    comps = tuple(weaken(inst, c, i) for c in f.comps)
    comps += tuple(inst.eta(m + i, m + k) for k in range(i))
    return KMor(f.dom + i, m + i, comps)


def qq_iter_recursive(inst, f, i):
    for _ in range(i):
        f = qq(inst, f)
    return f


def section_tuple(inst, r):
    """(x_0^m, ..., x_{m-1}^m, r) : m+1 -> m for r in RR(m)."""
    return KMor(r.ctx + 1, r.ctx, inst.variables(r.ctx) + (r,))


def theta_tuple(inst, r, n):
    """(x_0, ..., x_{m-1}, iota(r), x_m, ..., x_{n-2}) : n -> n-1, the substitution of r for x_m."""
    m = r.ctx
    if n <= m:
        raise PreconditionError(f"theta needs n > m, got m={m}, n={n}")
    comps = tuple(inst.eta(n - 1, k) for k in range(m))
    comps += (weaken(inst, r, n - m - 1),)
    comps += tuple(inst.eta(n - 1, k) for k in range(m, n - 1))
    return KMor(n, n - 1, comps)


def theta_rr(inst, r, s):
    """theta_{m,n}(r, s): substitute r for x_m in s and move the higher variables down."""
    return inst.bind(theta_tuple(inst, r, s.ctx), s)


def all_kmors(inst, m, n):
    carrier = inst.enumerate(n)
    for comps in itertools.product(carrier, repeat=m):
        yield KMor(m, n, comps)


def sample_kmor(inst, rng, m, n, max_size=8):
    return KMor(m, n, tuple(inst.sample(rng, n, max_size) for _ in range(m)))


def encode_kmor(inst, f):
    return {"dom": f.dom, "cod": f.cod, "comps": [inst.encode(c) for c in f.comps]}


def decode_kmor(inst, data):
    try:
        dom, cod, comps = data["dom"], data["cod"], data["comps"]
    except (KeyError, TypeError):
        raise ArityError(f"malformed Kleisli morphism {data!r}")
    return KMor(dom, cod, tuple(inst.decode(cod, c) for c in comps))
