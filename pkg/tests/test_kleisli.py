import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import kleisli, relmonad
from core.errors import ArityError, CompositionError, PreconditionError
from core.finfun import all_finfuns, delta, ff_compose, iota, sigma
from core.kleisli import KMor
from core.syntax import BOT, BindingSignature, Var
from helpers import app_, kmor, lam

FREE = relmonad.free_monad(BindingSignature.elements(("app", (0, 0)), ("lam", (1,))), name="free:lam_app.sig")


def variables_of(f):
    return tuple(c.payload for c in f.comps)


def test_kmor_checks_its_components(vars_inst):
    with pytest.raises(ArityError):
        KMor(2, 2, (vars_inst.eta(2, 0),))
    with pytest.raises(ArityError):
        KMor(1, 2, (vars_inst.eta(3, 0),))


def test_compose_example(vars_inst):
    f = kmor(vars_inst, 2, Var(1), Var(0))
    g = kmor(vars_inst, 2, Var(0), Var(0))
    assert variables_of(kleisli.t_compose(vars_inst, f, g)) == (Var(0), Var(0))
    assert variables_of(kleisli.t_compose(vars_inst, g, f)) == (Var(1), Var(1))


def test_compose_rejects_mismatched_ends(vars_inst):
    with pytest.raises(CompositionError):
        kleisli.t_compose(vars_inst, kleisli.t_identity(vars_inst, 2), kleisli.t_identity(vars_inst, 3))


def test_identity(vars_inst, free_inst):
    assert kleisli.t_identity(vars_inst, 0) == KMor(0, 0, ())
    assert variables_of(kleisli.t_identity(vars_inst, 2)) == (Var(0), Var(1))
    assert variables_of(kleisli.t_identity(free_inst, 1)) == (Var(0),)


def test_identity_is_neutral(exc_inst):
    for f in kleisli.all_kmors(exc_inst, 2, 2):
        assert kleisli.t_compose(exc_inst, f, kleisli.t_identity(exc_inst, 2)) == f
        assert kleisli.t_compose(exc_inst, kleisli.t_identity(exc_inst, 2), f) == f


def test_L_of_face_and_degeneracy_maps(vars_inst):
    assert variables_of(kleisli.L(vars_inst, delta(1, 2))) == (Var(0), Var(2))
    assert variables_of(kleisli.L(vars_inst, sigma(0, 1))) == (Var(0), Var(0), Var(1))
    assert variables_of(kleisli.L(vars_inst, iota(3, 1))) == (Var(0), Var(1), Var(2))
    assert kleisli.L(vars_inst, iota(3, 1)).cod == 4


def test_qq(vars_inst):
    for n in range(4):
        assert kleisli.qq(vars_inst, kleisli.t_identity(vars_inst, n)) == kleisli.t_identity(vars_inst, n + 1)
    f = kmor(vars_inst, 1, Var(0), Var(0))
    assert kleisli.qq(vars_inst, f) == kmor(vars_inst, 2, Var(0), Var(0), Var(1))
    for n in range(4):
        assert kleisli.qq(vars_inst, kleisli.L(vars_inst, iota(n, 1))) == kleisli.L(vars_inst, delta(n, n + 1))


def test_qq_iter(free_inst):
    f = kmor(free_inst, 1, lam(Var(1)), app_(Var(0), Var(0)))
    assert kleisli.qq_iter(free_inst, f, 0) == f
    assert kleisli.qq_iter(free_inst, f, 2) == kleisli.qq(free_inst, kleisli.qq(free_inst, f))
    assert kleisli.qq_iter(free_inst, f, 3) == kleisli.qq_iter_recursive(free_inst, f, 3)


def test_theta(vars_inst, exc_inst):
    r = vars_inst.eta(1, 0)
    assert kleisli.theta_rr(vars_inst, r, vars_inst.eta(2, 1)) == vars_inst.eta(1, 0)
    assert kleisli.theta_rr(vars_inst, r, vars_inst.eta(2, 0)) == vars_inst.eta(1, 0)
    bottom = exc_inst.make(0, BOT)
    assert kleisli.theta_rr(exc_inst, bottom, exc_inst.eta(1, 0)) == bottom


def test_theta_moves_higher_variables_down(free_inst):
    r = free_inst.make(1, lam(Var(1)))
    s = free_inst.make(3, app_(Var(1), Var(2)))
    assert kleisli.theta_rr(free_inst, r, s).payload == app_(lam(Var(1)), Var(1))


def test_theta_needs_a_larger_context(vars_inst):
    with pytest.raises(PreconditionError):
        kleisli.theta_tuple(vars_inst, vars_inst.eta(2, 0), 2)


def test_section_tuple(exc_inst):
    r = exc_inst.make(2, BOT)
    s = kleisli.section_tuple(exc_inst, r)
    assert (s.dom, s.cod) == (3, 2)
    assert variables_of(s) == (Var(0), Var(1), BOT)


def test_all_kmors_counts(exc_inst):
    assert len(list(kleisli.all_kmors(exc_inst, 2, 1))) == 4
    assert len(list(kleisli.all_kmors(exc_inst, 0, 3))) == 1


def test_encode_and_decode(free_inst):
    f = kmor(free_inst, 2, lam(Var(2)), Var(0))
    data = kleisli.encode_kmor(free_inst, f)
    assert data == {"dom": 2, "cod": 2, "comps": [["lam", ["Var", 2]], ["Var", 0]]}
    assert kleisli.decode_kmor(free_inst, data) == f
    with pytest.raises(ArityError):
        kleisli.decode_kmor(free_inst, {"dom": 1})


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(0, 3))
def test_qq_iter_closed_form_matches_iteration(seed, i):
    rng = np.random.default_rng(seed)
    m, n = (int(x) for x in rng.integers(1, 4, size=2))
    f = kleisli.sample_kmor(FREE, rng, m, n, 6)
    assert kleisli.qq_iter(FREE, f, i) == kleisli.qq_iter_recursive(FREE, f, i)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_composition_is_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (int(x) for x in rng.integers(1, 4, size=4))
    f = kleisli.sample_kmor(FREE, rng, a, b, 5)
    g = kleisli.sample_kmor(FREE, rng, b, c, 5)
    h = kleisli.sample_kmor(FREE, rng, c, d, 5)
    left = kleisli.t_compose(FREE, kleisli.t_compose(FREE, f, g), h)
    right = kleisli.t_compose(FREE, f, kleisli.t_compose(FREE, g, h))
    assert left == right


def test_renaming_then_composing_picks_components(exc_inst):
    for a, b, c in itertools.product(range(3), repeat=3):
        for ff in all_finfuns(a, b):
            for g in kleisli.all_kmors(exc_inst, b, c):
                composed = kleisli.t_compose(exc_inst, kleisli.L(exc_inst, ff), g)
                assert composed.comps == tuple(g.comps[ff(i)] for i in range(a))


@pytest.mark.parametrize("inst", [relmonad.variables_instance(), FREE], ids=["vars", "free"])
def test_L_is_a_functor(inst):
    for a, b, c in itertools.product(range(4), repeat=3):
        for f, g in itertools.product(all_finfuns(a, b), all_finfuns(b, c)):
            assert kleisli.L(inst, ff_compose(f, g)) == kleisli.t_compose(inst, kleisli.L(inst, f), kleisli.L(inst, g))


def test_renaming_along_a_composite_on_exceptions(exc_inst):
    for a, b, c in itertools.product(range(4), repeat=3):
        for f, g in itertools.product(all_finfuns(a, b), all_finfuns(b, c)):
            for t in exc_inst.enumerate(a):
                assert exc_inst.rr_of_finfun(ff_compose(f, g), t) == exc_inst.rr_of_finfun(g, exc_inst.rr_of_finfun(f, t))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_renaming_along_a_composite_on_free_terms(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (int(x) for x in rng.integers(1, 4, size=3))
    f = list(all_finfuns(a, b))[int(rng.integers(0, b ** a))]
    g = list(all_finfuns(b, c))[int(rng.integers(0, c ** b))]
    t = FREE.sample(rng, a, 6)
    assert FREE.rr_of_finfun(ff_compose(f, g), t) == FREE.rr_of_finfun(g, FREE.rr_of_finfun(f, t))
