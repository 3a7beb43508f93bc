from core.kleisli import KMor
from core.syntax import Op


def lam(body):
    return Op("lam", (body,))


def app_(fn, arg):
    return Op("app", (fn, arg))


def kmor(inst, cod, *payloads):
    """The Kleisli morphism len(payloads) -> cod with the given component payloads."""
    return KMor(len(payloads), cod, tuple(inst.make(cod, p) for p in payloads))
