"""
Assembles the check suites behind the CLI commands and the JSON service.

Independent checks run on a thread pool; every check seeds its own generator
from (seed, salt), so the report does not depend on scheduling.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import replace

from app.config import Config
from app.services import registry
from core import crr, crrlm, csystem, presheaf_ext, relmonad
from core.report import FAIL, Budget, Check, Report, budget_dict

logger = logging.getLogger(__name__)

SUITES = ("laws", "axioms", "theorems", "demo-perm")


def make_budget(max_len=None, samples=None, seed=None, max_size=None, limit=None):
    return Budget(
        max_len=Config.MAX_CONTEXT if max_len is None else max_len,
        samples=Config.SAMPLES if samples is None else samples,
        seed=Config.SEED if seed is None else seed,
        max_size=Config.MAX_TERM_SIZE if max_size is None else max_size,
        limit=Config.EXHAUSTIVE_LIMIT if limit is None else limit,
    )


def _prefixed(label, checks):
    return [replace(c, name=f"{label}/{c.name}") for c in checks]


def _as_list(result):
    if isinstance(result, Check):
        return [result]
    if isinstance(result, Report):
        return list(result.checks)
    return list(result)


def run_jobs(suite, jobs, budget, progress_callback=None, stop_event=None, max_workers=None):
    """Runs (label, fn) jobs concurrently; fn returns a Check, a list of them or a Report."""
    started = time.time()
    report = Report(suite, [], budget.seed, budget_dict(budget))
    total = len(jobs)
    completed = 0

    def stopped():
        return stop_event is not None and stop_event.is_set()

    with ThreadPoolExecutor(max_workers=max_workers or Config.MAX_WORKERS) as executor:
        futures = {executor.submit(fn): label for label, fn in jobs if not stopped()}
        for future in as_completed(futures):
            label = futures[future]
            if stopped():
                for pending in futures:
                    pending.cancel()
            if future.cancelled():
                continue
            try:
                checks = _as_list(future.result())
            except Exception as e:
                logger.exception("job %s of %s crashed", label, suite)
                checks = [Check(label, FAIL, {"error": f"{type(e).__name__}: {e}"})]
            report.extend(checks)
            completed += 1
            if progress_callback:
                progress_callback(completed, total)

    report.wall_time = time.time() - started
    report.complete = completed == total
    if not report.complete:
        logger.info("%s stopped after %d of %d jobs", suite, completed, total)
    logger.info("%s: %d checks in %.2fs, passed=%s", suite, len(report.checks), report.wall_time, report.passed)
    return report


def laws_jobs(selector, budget, no_lifting=False):
    inst = registry.resolve_instance(selector, no_lifting).inst
    return f"laws:{inst.name}", [(
        "laws",
        lambda: relmonad.check_monad_laws(inst, budget.max_len, budget.samples, budget.seed,
                                          budget.limit, budget.max_size),
    )]


def axioms_jobs(selector, budget):
    cc = registry.resolve_system(selector)
    jobs = [
        ("c0", lambda: csystem.check_c0_axioms(cc, budget)),
        ("pullbacks", lambda: csystem.check_pullbacks(cc, budget)),
        ("sections", lambda: csystem.check_sections(cc, budget)),
        ("star-mor", lambda: csystem.check_star_mor(cc, budget)),
        ("identity", lambda: _prefixed("identity", csystem.check_homomorphism(
            csystem.identity_homomorphism(cc), budget))),
    ]
    if registry.is_lm_system(cc):
        jobs += [
            ("tr", lambda: _prefixed("tr", csystem.check_homomorphism(presheaf_ext.tr_hom(cc), budget))),
            ("presheaf", lambda: presheaf_ext.check_presheaf_laws(cc.base, cc.F, budget)),
            ("full-faithfulness", lambda: presheaf_ext.check_full_faithfulness(cc, budget)),
            ("star-iter-ext", lambda: presheaf_ext.check_star_iter_ext(cc, budget)),
        ]
        y = presheaf_ext.point(cc)
        if y is not None:
            jobs += [
                ("tr-bang", lambda: _prefixed("tr-bang", csystem.check_homomorphism(
                    presheaf_ext.tr_bang(cc, y), budget))),
                ("tr-bang-retraction", lambda: presheaf_ext.check_tr_bang_retraction(cc, y, budget)),
                ("can", lambda: presheaf_ext.check_can_naturality(cc, y, budget)),
            ]
        else:
            logger.info("%s: LM(0) has no enumerable element, tr! checks left out", cc.name)
    return f"axioms:{cc.name}", jobs


def theorems_jobs(selector, budget, no_lifting=False):
    cc = registry.resolve_system(selector, no_lifting)
    if registry.is_lm_system(cc):
        jobs = [
            ("theorem", lambda: crrlm.check_theorem(cc, budget)),
            ("mb", lambda: crrlm.check_mb(cc, budget)),
            ("closed-forms", lambda: crrlm.check_closed_forms(cc, budget)),
        ]
    else:
        jobs = [
            ("theorem", lambda: crr.check_theorem(cc, budget)),
            ("mb", lambda: crr.check_mb(cc, budget)),
            ("closed-forms", lambda: crr.check_closed_forms(cc, budget)),
            ("psi", lambda: crr.check_psi(cc.inst, budget)),
        ]
    return f"theorems:{cc.name}", jobs


def demo_perm_jobs(selector, budget):
    inst = registry.resolve_instance(selector).inst
    return f"demo-perm:{inst.name}", [("psi", lambda: crr.check_psi(inst, budget))]


def build_jobs(command, selector, budget, no_lifting=False):
    if command == "laws":
        return laws_jobs(selector, budget, no_lifting)
    if command == "axioms":
        return axioms_jobs(selector, budget)
    if command == "theorems":
        return theorems_jobs(selector, budget, no_lifting)
    if command == "demo-perm":
        return demo_perm_jobs(selector, budget)
    raise registry.SelectorError(f"unknown suite {command!r}")


def run_suite(command, selector, budget, no_lifting=False, progress_callback=None, stop_event=None):
    suite, jobs = build_jobs(command, selector, budget, no_lifting)
    return run_jobs(suite, jobs, budget, progress_callback, stop_event)
