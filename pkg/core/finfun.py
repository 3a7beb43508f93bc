"""
The category F of standard finite sets stn(n) = {0, ..., n-1}.

Composition is written in diagrammatic order everywhere: ff_compose(f, g)
first applies f, then g.
"""
import itertools
from dataclasses import dataclass

from core.errors import CompositionError, IndexRangeError


@dataclass(frozen=True)
class FinFun:
    dom: int
    cod: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.dom:
            raise IndexRangeError(f"FinFun of domain {self.dom} given {len(self.values)} values")
        for v in self.values:
            if not 0 <= v < self.cod:
                raise IndexRangeError(f"value {v} outside stn({self.cod})")

    def __call__(self, j):
        return self.values[j]

    def is_injective(self):
        return len(set(self.values)) == self.dom

    def is_surjective(self):
        return set(self.values) == set(range(self.cod))


def ff_identity(n):
    return FinFun(n, n, tuple(range(n)))


def ff_compose(f, g):
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose {f.dom}->{f.cod} with {g.dom}->{g.cod}")
    return FinFun(f.dom, g.cod, tuple(g.values[v] for v in f.values))


def delta(i, n):
    """The increasing inclusion stn(n) -> stn(n+1) that skips the value i."""
    if not 0 <= i <= n:
        raise IndexRangeError(f"delta({i}, {n}) needs 0 <= i <= n")
    return FinFun(n, n + 1, tuple(j if j < i else j + 1 for j in range(n)))


def sigma(i, n):
    """The non-decreasing surjection stn(n+2) -> stn(n+1) that takes the value i twice."""
    if not 0 <= i <= n:
        raise IndexRangeError(f"sigma({i}, {n}) needs 0 <= i <= n")
    return FinFun(n + 2, n + 1, tuple(j if j <= i else j - 1 for j in range(n + 2)))


def iota(n, i):
    return FinFun(n, n + i, tuple(range(n)))


def swap(n, a, b):
    """The transposition of a and b in stn(n)."""
    values = list(range(n))
    values[a], values[b] = values[b], values[a]
    return FinFun(n, n, tuple(values))


def all_finfuns(m, n):
    for values in itertools.product(range(n), repeat=m):
        yield FinFun(m, n, values)
