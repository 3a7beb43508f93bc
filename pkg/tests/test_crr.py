import pytest

from core import crr, kleisli, relmonad
from core.crr import BTildeRR, CMor, crr_build
from core.errors import ArityError, BopDomainError, SectionError
from core.finfun import swap
from core.kleisli import KMor
from core.report import EXHAUSTIVE, FAIL, PASS, SAMPLED, Budget
from core.syntax import BOT, Var
from helpers import app_, kmor, lam


def statuses(checks):
    return {c.name: c.status for c in checks}


@pytest.fixture
def cc_vars(vars_inst):
    return crr_build(vars_inst)


@pytest.fixture
def cc_exc(exc_inst):
    return crr_build(exc_inst)


@pytest.fixture
def cc_free(free_inst):
    return crr_build(free_inst)


def both(cc, op, *args):
    explicit = crr.bop_explicit(cc, op, *args)
    assert explicit == crr.bop_definitional(cc, op, *args)
    return explicit


def test_T(cc_vars):
    assert both(cc_vars, "T", 1, 2) == 3
    assert both(cc_vars, "T", 2, 3) == 4


def test_delta(cc_vars, vars_inst):
    assert both(cc_vars, "delta", 2) == BTildeRR(2, vars_inst.eta(2, 1))
    for n in range(1, 4):
        assert crr.mb(cc_vars, cc_vars.delta(n)) == BTildeRR(n, vars_inst.eta(n, n - 1))


def test_Tt_renames_past_the_weakened_variable(cc_vars, vars_inst):
    b = BTildeRR(1, vars_inst.eta(1, 0))
    assert both(cc_vars, "Tt", 1, b) == BTildeRR(2, vars_inst.eta(2, 1))


def test_St_substitutes_the_exception(cc_exc, exc_inst):
    bottom = exc_inst.make(0, BOT)
    result = both(cc_exc, "S~", BTildeRR(0, bottom), BTildeRR(1, exc_inst.eta(1, 0)))
    assert result == BTildeRR(0, bottom)


def test_S(cc_exc, exc_inst):
    assert both(cc_exc, "S", BTildeRR(1, exc_inst.eta(1, 0)), 4) == 3


def test_operation_aliases(cc_vars):
    assert crr.normalize_op("δ") == "delta"
    assert crr.normalize_op("T~") == "Tt"
    with pytest.raises(ValueError):
        crr.normalize_op("U")
    assert crr.bop_explicit(cc_vars, "δ", 1) == crr.bop_explicit(cc_vars, "delta", 1)


@pytest.mark.parametrize("op, args, condition", [
    ("T", (0, 3), "m > 0"),
    ("T", (3, 1), "n > m-1"),
    ("delta", (0,), "n > 0"),
])
def test_domain_errors_name_their_condition(cc_exc, op, args, condition):
    with pytest.raises(BopDomainError) as info:
        crr.bop_explicit(cc_exc, op, *args)
    assert info.value.condition == condition


def test_domain_errors_for_pairs(cc_exc, exc_inst):
    b0 = BTildeRR(1, exc_inst.eta(1, 0))
    b1 = BTildeRR(2, exc_inst.eta(2, 1))
    with pytest.raises(BopDomainError) as info:
        crr.bop_explicit(cc_exc, "S", b1, 3)
    assert info.value.condition == "n > m+1"
    with pytest.raises(BopDomainError) as info:
        crr.bop_explicit(cc_exc, "St", b1, b0)
    assert (info.value.op, info.value.condition) == ("S~", "n > m")
    with pytest.raises(BopDomainError):
        crr.bop_definitional(cc_exc, "St", b1, b0)


def test_btilde_checks_its_context(exc_inst):
    with pytest.raises(ArityError):
        BTildeRR(2, exc_inst.eta(1, 0))


def test_cmor_direction(vars_inst):
    f = CMor(kmor(vars_inst, 3, Var(0), Var(2)))
    assert (f.src, f.dst) == (3, 2)


def test_section_criterion(cc_exc, exc_inst):
    assert crr.is_section(cc_exc, cc_exc.delta(2))
    assert not crr.is_section(cc_exc, cc_exc.p(2))
    not_a_section = CMor(kmor(exc_inst, 1, BOT, Var(0)))
    assert not crr.is_section(cc_exc, not_a_section)
    assert not cc_exc.is_section(not_a_section)
    with pytest.raises(SectionError):
        crr.mb(cc_exc, not_a_section)


def test_mb_inverse(cc_exc, exc_inst):
    b = BTildeRR(2, exc_inst.make(2, BOT))
    s = crr.mb_inv(cc_exc, b)
    assert (s.mor.src, s.mor.dst) == (2, 3)
    assert crr.mb(cc_exc, s) == b
    assert crr.boundary(b) == 3 == cc_exc.boundary(s)


def test_section_of(cc_exc, exc_inst):
    f = CMor(kmor(exc_inst, 1, BOT, Var(0)))
    s = crr.section_of(cc_exc, f).mor
    assert crr.is_section(cc_exc, s)
    assert s.kmor.comps == (exc_inst.eta(1, 0), exc_inst.eta(1, 0))


def test_pullback_section_along_identity(cc_exc):
    s = cc_exc.delta(2)
    assert crr.pullback_section(cc_exc, cc_exc.identity(1), s).mor == s
    assert crr.pullback_section(cc_exc, cc_exc.identity(2), s).mor == s


def test_pullback_section_matches_star_mor(cc_free, free_inst):
    f = CMor(kmor(free_inst, 2, lam(Var(1))))
    s = crr.mb_inv(cc_free, BTildeRR(1, free_inst.make(1, app_(Var(0), lam(Var(1)))))).mor
    closed = crr.pullback_section(cc_free, f, s).mor
    assert closed == cc_free.star_mor(f, s)
    assert closed.kmor.comps[2].payload == app_(lam(Var(1)), lam(lam(Var(2))))


def test_psi_examples(free_inst):
    assert crr.psi(free_inst, free_inst.eta(2, 0)) == free_inst.eta(2, 1)
    t = free_inst.make(2, app_(Var(0), Var(1)))
    assert crr.psi(free_inst, t).payload == app_(Var(1), Var(0))
    under_binder = free_inst.make(2, lam(Var(1)))
    assert crr.psi(free_inst, under_binder).payload == lam(Var(2))


def test_psi_needs_two_variables(free_inst):
    with pytest.raises(ArityError):
        crr.psi(free_inst, free_inst.eta(3, 0))


@pytest.mark.parametrize("factory", [
    relmonad.variables_instance,
    relmonad.exception_instance,
    relmonad.unit_instance,
])
def test_psi_is_the_transposition(factory, budget):
    check = crr.check_psi(factory(), budget)
    assert check.status == PASS
    assert check.mode == EXHAUSTIVE


@pytest.mark.parametrize("factory", [relmonad.variables_instance, relmonad.exception_instance])
def test_theorem_holds_exhaustively(factory, budget):
    checks = crr.check_theorem(crr_build(factory()), budget)
    assert set(statuses(checks).values()) == {PASS}
    assert {c.mode for c in checks if c.name != "theorem-domains"} == {EXHAUSTIVE}
    assert "theorem-domains" in statuses(checks)


def test_theorem_holds_on_sampled_free_terms(cc_free, budget):
    checks = crr.check_theorem(cc_free, budget)
    assert set(statuses(checks).values()) == {PASS}
    assert all(c.cases > 0 for c in checks)
    assert {c.mode for c in checks if c.name != "theorem-domains"} == {SAMPLED}


def test_mb_round_trips(cc_exc, cc_free, budget):
    assert set(statuses(crr.check_mb(cc_exc, budget)).values()) == {PASS}
    sampled = statuses(crr.check_mb(cc_free, budget))
    assert sampled["mb-roundtrip-pairs"] == PASS
    assert sampled["mb-roundtrip-sections"] == PASS


def test_closed_forms(cc_exc, cc_free, budget):
    assert set(statuses(crr.check_closed_forms(cc_exc, budget)).values()) == {PASS}
    assert set(statuses(crr.check_closed_forms(cc_free, budget)).values()) == {PASS}


def test_qq_iter_of_a_section_is_the_substitution(free_inst):
    r = free_inst.make(1, lam(Var(1)))
    assert kleisli.qq_iter(free_inst, kleisli.section_tuple(free_inst, r), 1) == kleisli.theta_tuple(free_inst, r, 3)


def test_psi_without_lifting_differs_from_the_swap(free_inst):
    broken = relmonad.mutate_no_lifting(free_inst)
    t = broken.make(2, lam(Var(1)))
    assert crr.psi(broken, t) != broken.rr_of_finfun(swap(2, 0, 1), t)

    check = crr.check_psi(broken, Budget(samples=300, max_size=8, seed=0))
    assert check.status == FAIL
    assert check.counterexample is not None


def test_St_without_lifting_disagrees_with_its_definition(free_inst):
    broken = crr_build(relmonad.mutate_no_lifting(free_inst))
    b1 = BTildeRR(2, broken.inst.make(2, lam(Var(2))))
    b2 = BTildeRR(5, broken.inst.make(5, Var(2)))
    explicit = crr.bop_explicit(broken, "St", b1, b2)
    definitional = crr.bop_definitional(broken, "St", b1, b2)
    assert explicit.r.payload == lam(Var(1))
    assert definitional.r.payload == lam(Var(0))

    sound = crr_build(free_inst)
    b1 = BTildeRR(2, free_inst.make(2, lam(Var(2))))
    b2 = BTildeRR(5, free_inst.make(5, Var(2)))
    assert both(sound, "St", b1, b2) == BTildeRR(4, free_inst.make(4, lam(Var(2))))


def test_negative_context_sizes_are_rejected(cc_exc):
    with pytest.raises(ArityError):
        cc_exc.decode_btilde({"n": -1, "r": ["Bot"]})
    with pytest.raises(ArityError):
        cc_exc.decode_btilde({"n": 1.5, "r": ["Var", 0]})


def test_ft_mor_of_identity(cc_vars, vars_inst):
    f = KMor(2, 2, vars_inst.variables(2))
    assert crr.ft_mor(cc_vars, CMor(f)) == cc_vars.p(2)
