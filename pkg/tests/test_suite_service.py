import threading

import pytest

from app.services import registry, suite_service
from core.errors import StructureError
from core.report import FAIL, PASS, Budget, Check


def test_crashed_jobs_become_failed_checks():
    def boom():
        raise StructureError("no pullback")

    jobs = [("ok", lambda: Check("ok", PASS, cases=1)), ("boom", boom)]
    report = suite_service.run_jobs("demo", jobs, Budget(), max_workers=2)
    by_name = {c.name: c for c in report.checks}
    assert by_name["ok"].status == PASS
    assert by_name["boom"].status == FAIL
    assert by_name["boom"].counterexample == {"error": "StructureError: no pullback"}
    assert not report.passed


def test_progress_is_reported():
    seen = []
    jobs = [(str(i), lambda i=i: [Check(f"c{i}", PASS)]) for i in range(3)]
    suite_service.run_jobs("demo", jobs, Budget(), progress_callback=lambda done, total: seen.append((done, total)))
    assert seen == [(1, 3), (2, 3), (3, 3)]


def test_make_budget_uses_config_defaults():
    budget = suite_service.make_budget(samples=5)
    assert budget.samples == 5
    assert budget.max_len == 3
    assert budget.seed == 0


def test_axioms_jobs_for_module_systems(budget):
    suite, jobs = suite_service.build_jobs("axioms", "crrlm:exc:rrmod", budget)
    assert suite == "axioms:crrlm:exc:rrmod"
    assert {label for label, _ in jobs} >= {"c0", "tr", "presheaf", "tr-bang", "can"}


def test_ty_module_leaves_out_tr_bang(budget):
    suite, jobs = suite_service.build_jobs("axioms", "crrlm:free:two_sorted.sig", budget)
    assert suite == "axioms:crrlm:free:two_sorted.sig:ty"
    labels = {label for label, _ in jobs}
    assert "tr" in labels and "tr-bang" not in labels


@pytest.mark.slow
def test_theorems_with_no_lifting_fail_on_psi_and_St():
    report = suite_service.run_suite("theorems", "crr:free:lam_app.sig", Budget(), True)
    assert not report.passed
    by_name = {c.name: c for c in report.checks}
    assert by_name["psi-equals-swap"].status == FAIL
    st = by_name["theorem-St"]
    assert st.status == FAIL
    witness = st.counterexample.get("case", st.counterexample)
    assert witness["explicit"] != witness["definitional"]


def test_stopped_suite_is_incomplete():
    stop = threading.Event()
    stop.set()
    jobs = [(str(i), lambda i=i: Check(f"c{i}", PASS, cases=1)) for i in range(2)]
    report = suite_service.run_jobs("demo", jobs, Budget(), stop_event=stop)
    assert report.complete is False
    assert report.passed is False
    assert report.checks == []
    assert report.to_dict()["complete"] is False


def test_finished_suite_is_complete():
    jobs = [("ok", lambda: Check("ok", PASS, cases=1))]
    report = suite_service.run_jobs("demo", jobs, Budget(), stop_event=threading.Event())
    assert report.complete and report.passed
    assert "complete" not in report.to_dict()


def test_selectors():
    assert registry.resolve_system("crrlm:exc").name == "crrlm:exc:rrmod"
    assert registry.resolve_system("crrlm:exc:unit").name == "crrlm:exc:unit"
    assert registry.resolve_system("crr:free:lam_app.sig").name == "crr:free:lam_app.sig"
    with pytest.raises(registry.SelectorError):
        registry.resolve_system("crrlm:exc:ty")
    with pytest.raises(registry.SelectorError):
        suite_service.build_jobs("prove", "exc", Budget())
