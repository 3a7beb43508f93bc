import pytest

from core import crrlm, kleisli
from core.crrlm import BTildeLM, crrlm_build, lm_of_rr, two_sorted_module, unit_module
from core.errors import (
    ArityError,
    BopDomainError,
    PreconditionError,
    SignatureError,
    TelescopeError,
)
from core.finfun import swap
from core.presheaf_ext import ExtObj
from core.report import EXHAUSTIVE, FAIL, NO_CASES, PASS, SAMPLED, SKIPPED, Budget
from core.syntax import BOT, STAR, Op, Var
from helpers import app_, kmor, lam


def statuses(checks):
    return {c.name: c.status for c in checks}


def El(e):
    return Op("El", (e,))


def Pi(a, b):
    return Op("Pi", (a, b))


U = Op("U")


@pytest.fixture
def ext(exc_inst):
    return crrlm_build(exc_inst, lm_of_rr(exc_inst))


@pytest.fixture
def bot(exc_inst):
    return lambda n: exc_inst.make(n, BOT)


@pytest.fixture
def ty_module(two_sorted_sigs, two_sorted_inst):
    _, ty_sig = two_sorted_sigs
    return two_sorted_module(ty_sig, two_sorted_inst)


@pytest.fixture
def ext_ty(two_sorted_inst, ty_module):
    return crrlm_build(two_sorted_inst, ty_module)


def both(ext, op, *args):
    explicit = crrlm.bop_lm_explicit(ext, op, *args)
    assert explicit == crrlm.bop_lm_definitional(ext, op, *args)
    return explicit


def test_module_carriers(ext, exc_inst):
    mod = ext.mod
    assert [e.payload for e in mod.elements(0)] == [BOT]
    assert {e.payload for e in mod.elements(1)} == {BOT, Var(0)}
    assert ext.name == "crrlm:exc:rrmod"


def test_objects_of_length_one(ext, bot):
    assert [X for X in ext.objects(1) if X.base == 1] == [ExtObj(1, (bot(0),))]
    assert len([X for X in ext.objects(2) if X.base == 2]) == 2


def test_delta(ext, exc_inst, bot):
    X = ExtObj(2, (bot(0), bot(1)))
    assert both(ext, "delta", X) == BTildeLM(2, (bot(0), bot(1), bot(2)), exc_inst.eta(2, 1))


def test_S(ext, exc_inst, bot):
    b = BTildeLM(0, (bot(0),), bot(0))
    Y = ExtObj(2, (bot(0), exc_inst.eta(1, 0)))
    assert both(ext, "S", b, Y) == ExtObj(1, (bot(0),))


def test_T(ext, bot):
    X = ExtObj(1, (bot(0),))
    assert both(ext, "T", X, X) == ExtObj(2, (bot(0), bot(1)))


def test_Tt(ext, exc_inst, bot):
    X = ExtObj(1, (bot(0),))
    b = BTildeLM(1, (bot(0), exc_inst.eta(1, 0)), exc_inst.eta(1, 0))
    assert both(ext, "T~", X, b) == BTildeLM(2, (bot(0), bot(1), exc_inst.eta(2, 1)), exc_inst.eta(2, 1))


def test_St(ext, exc_inst, bot):
    b1 = BTildeLM(0, (bot(0),), bot(0))
    b2 = BTildeLM(1, (bot(0), exc_inst.eta(1, 0)), exc_inst.eta(1, 0))
    assert both(ext, "St", b1, b2) == BTildeLM(0, (bot(0),), bot(0))


def test_prefix_mismatch_is_a_domain_error(ext, exc_inst, bot):
    X = ExtObj(3, (bot(0), exc_inst.eta(1, 0), bot(2)))
    Y = ExtObj(3, (bot(0), bot(1), bot(2)))
    with pytest.raises(BopDomainError) as info:
        crrlm.bop_lm_explicit(ext, "T", X, Y)
    assert info.value.condition == "T_i = T'_i for i <= m-2"

    b = BTildeLM(1, (bot(0), exc_inst.eta(1, 0)), bot(1))
    with pytest.raises(BopDomainError) as info:
        crrlm.bop_lm_explicit(ext, "S", b, Y)
    assert info.value.condition == "T_i = T'_i for i <= m"


def test_length_conditions(ext, bot):
    with pytest.raises(BopDomainError) as info:
        crrlm.bop_lm_explicit(ext, "delta", ext.pt)
    assert info.value.condition == "m > 0"
    b = BTildeLM(1, (bot(0), bot(1)), bot(1))
    with pytest.raises(BopDomainError) as info:
        crrlm.bop_lm_explicit(ext, "S", b, ExtObj(2, (bot(0), bot(1))))
    assert info.value.condition == "n > m+1"


def test_btilde_checks_its_shape(bot):
    with pytest.raises(TelescopeError):
        BTildeLM(1, (bot(0),), bot(1))
    with pytest.raises(ArityError):
        BTildeLM(0, (bot(0),), bot(1))


def test_mb_round_trip(ext, exc_inst, bot):
    b = BTildeLM(1, (bot(0), exc_inst.eta(1, 0)), bot(1))
    s = crrlm.mb_lm_inv(ext, b)
    assert s.mor.dst == crrlm.boundary_lm(b) == ExtObj(2, (bot(0), exc_inst.eta(1, 0)))
    assert crrlm.mb_lm(ext, s) == b
    assert crrlm.is_section_lm(ext, s.mor)


def test_p_star_weakening(ext, exc_inst, bot):
    Y = ExtObj(1, (bot(0),))
    X = ExtObj(2, (bot(0), exc_inst.eta(1, 0)))
    expected = ExtObj(3, (bot(0), bot(1), exc_inst.eta(2, 1)))
    assert crrlm.p_star_weakening(ext, X, Y) == expected == ext.star_over(ext.p(Y), X)
    with pytest.raises(PreconditionError):
        crrlm.p_star_weakening(ext, X, ext.pt)


def test_theta_lm_substitutes_the_last_variable(ext, exc_inst, bot):
    assert crrlm.theta_lm(ext.mod, bot(0), exc_inst.eta(1, 0), 1) == bot(0)
    assert crrlm.theta_lm(ext.mod, exc_inst.eta(1, 0), exc_inst.eta(2, 1), 2) == exc_inst.eta(1, 0)
    with pytest.raises(PreconditionError):
        crrlm.theta_lm(ext.mod, exc_inst.eta(1, 0), exc_inst.eta(1, 0), 1)


def test_two_sorted_action(ty_module, two_sorted_inst):
    close = kmor(two_sorted_inst, 0, lam(Var(0)))
    assert ty_module.lm_act(close, El(Var(0))) == El(lam(Var(0)))

    flip = kleisli.L(two_sorted_inst, swap(2, 0, 1))
    assert ty_module.lm_act(flip, El(Var(0))) == El(Var(1))

    weaken = kmor(two_sorted_inst, 2, Var(1))
    assert ty_module.lm_act(weaken, Pi(U, El(Var(1)))) == Pi(U, El(Var(2)))
    with pytest.raises(ArityError):
        ty_module.lm_act(weaken, El(Var(1)))


def test_two_sorted_theta(ty_module, two_sorted_inst):
    c = two_sorted_inst.make(0, lam(Var(0)))
    assert crrlm.theta_lm(ty_module, c, El(Var(0)), 1) == El(lam(Var(0)))


def test_two_sorted_membership(ty_module):
    assert ty_module.contains(1, El(Var(0)))
    assert ty_module.contains(0, Pi(U, El(Var(0))))
    assert not ty_module.contains(0, El(Var(0)))
    assert not ty_module.contains(1, Var(0))
    with pytest.raises(SignatureError):
        ty_module.decode(0, ["El", ["Var", 0]])
    assert ty_module.decode(1, ["El", ["Var", 0]]) == El(Var(0))


def test_two_sorted_module_needs_a_free_instance(two_sorted_sigs, exc_inst):
    _, ty_sig = two_sorted_sigs
    with pytest.raises(SignatureError):
        two_sorted_module(ty_sig, exc_inst)


def test_encode_and_decode_objects(ext_ty):
    data = {"n": 2, "tele": [["U"], ["El", ["Var", 0]]]}
    X = ext_ty.decode_object(data)
    assert X == ExtObj(2, (U, El(Var(0))))
    assert ext_ty.encode_object(X) == data
    with pytest.raises(TelescopeError):
        ext_ty.decode_object({"n": 2, "tele": [["U"]]})
    with pytest.raises(TelescopeError):
        ext_ty.decode_object({"tele": []})


def test_decode_btilde(ext_ty, two_sorted_inst):
    data = {"n": 1, "gamma": [["U"], ["El", ["Var", 0]]], "r": ["lam", ["Var", 1]]}
    b = ext_ty.decode_btilde(data)
    assert b == BTildeLM(1, (U, El(Var(0))), two_sorted_inst.make(1, lam(Var(1))))
    assert ext_ty.encode_btilde(b) == data


def test_two_sorted_S(ext_ty, two_sorted_inst):
    c = two_sorted_inst.make(0, lam(Var(0)))
    b = BTildeLM(0, (U,), c)
    Y = ExtObj(3, (U, El(Var(0)), Pi(El(Var(0)), El(Var(2)))))
    expected = ExtObj(2, (El(lam(Var(0))), Pi(El(lam(Var(0))), El(Var(1)))))
    assert both(ext_ty, "S", b, Y) == expected


def test_unit_module(exc_inst):
    ext = crrlm_build(exc_inst, unit_module(exc_inst))
    assert [X.tele for X in ext.objects(2)] == [(), (STAR,), (STAR, STAR)]


@pytest.mark.parametrize("module", [lm_of_rr, unit_module])
def test_theorem_holds_exhaustively(exc_inst, budget, module):
    ext = crrlm_build(exc_inst, module(exc_inst))
    checks = crrlm.check_theorem(ext, budget)
    assert set(statuses(checks).values()) == {PASS}
    assert {c.mode for c in checks} == {EXHAUSTIVE}
    assert all(c.cases > 0 for c in checks)


def test_theorem_holds_for_two_sorted_syntax(ext_ty, budget):
    checks = crrlm.check_theorem(ext_ty, budget)
    assert set(statuses(checks).values()) == {PASS}
    assert {c.mode for c in checks} == {SAMPLED}


def test_mb_round_trips(ext, ext_ty, budget):
    assert set(statuses(crrlm.check_mb(ext, budget)).values()) == {PASS}
    assert set(statuses(crrlm.check_mb(ext_ty, budget)).values()) == {PASS}


def test_closed_forms(ext, ext_ty, budget):
    exc = statuses(crrlm.check_closed_forms(ext, budget))
    assert set(exc.values()) == {PASS}
    assert "theta-lm-matches-theta-rr" in exc
    assert set(statuses(crrlm.check_closed_forms(ext_ty, budget)).values()) == {PASS}


def test_theta_on_type_expressions_by_elements(ty_module, two_sorted_inst):
    c = two_sorted_inst.make(0, lam(Var(0)))
    for E, n, expected in [
        (El(Var(0)), 1, El(lam(Var(0)))),
        (Pi(U, El(Var(1))), 1, Pi(U, El(lam(Var(0))))),
        (Pi(U, El(Var(0))), 1, Pi(U, El(Var(0)))),
        (Pi(U, El(app_(Var(0), Var(2)))), 2, Pi(U, El(app_(Var(0), Var(1))))),
    ]:
        assert crrlm.theta_by_elements(ty_module, c, E, n) == expected
        assert crrlm.theta_lm(ty_module, c, E, n) == expected
    with pytest.raises(PreconditionError):
        crrlm.theta_by_elements(ty_module, two_sorted_inst.make(1, Var(0)), U, 1)


def test_closed_forms_compare_theta_on_two_sorted_syntax(ext_ty, budget):
    theta = {c.name: c for c in crrlm.check_closed_forms(ext_ty, budget)}["theta-lm-matches-theta-rr"]
    assert theta.status == PASS
    assert theta.cases > 0


def test_closed_forms_skip_theta_on_the_unit_module(exc_inst, budget):
    ext = crrlm_build(exc_inst, unit_module(exc_inst))
    theta = {c.name: c for c in crrlm.check_closed_forms(ext, budget)}["theta-lm-matches-theta-rr"]
    assert theta.status == SKIPPED
    assert theta.cases == 0
    assert "unit" in theta.note


@pytest.mark.parametrize("which", ["ext", "ext_ty"])
def test_suites_at_context_budget_zero(request, which):
    ext = request.getfixturevalue(which)
    budget = Budget(max_len=0, samples=20, per_hom=8, limit=20000, max_size=6, seed=3)
    checks = crrlm.check_theorem(ext, budget) + crrlm.check_mb(ext, budget)
    checks += crrlm.check_closed_forms(ext, budget)
    assert FAIL not in {c.status for c in checks}
    skipped = [c for c in checks if c.status == SKIPPED]
    assert skipped
    assert all(c.cases == 0 for c in skipped)
    assert statuses(checks)["mb-lm-roundtrip-pairs"] == SKIPPED
    assert {c.note for c in skipped if c.name.startswith("theorem-lm-")} <= {NO_CASES}


def test_negative_context_sizes_are_rejected(ext_ty):
    with pytest.raises(ArityError):
        ext_ty.decode_object({"n": -1, "tele": []})
    with pytest.raises(ArityError):
        ext_ty.decode_btilde({"n": -1, "gamma": [], "r": ["Var", 0]})
    with pytest.raises(ArityError):
        ext_ty.decode_object({"n": True, "tele": [["U"]]})
