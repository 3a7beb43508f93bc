"""
Check results and budgets shared by all law, axiom and theorem suites.

A failing law is data, not an error: every checker returns `Check` records
and never raises for a mathematical counterexample.
"""
import json
import logging
from dataclasses import dataclass, field, asdict

import numpy as np

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"

NO_CASES = "no cases within the budget"


@dataclass(frozen=True)
class Budget:
    max_len: int = 3
    samples: int = 300
    per_hom: int = 16
    limit: int = 200000
    max_size: int = 8
    seed: int = 0

    def rng(self, salt=0):
        return np.random.default_rng([self.seed, salt])


@dataclass
class Check:
    name: str
    status: str
    counterexample: object = None
    cases: int = 0
    mode: str = EXHAUSTIVE
    note: str = ""

    @property
    def failed(self):
        return self.status == FAIL

    def to_dict(self):
        data = {"name": self.name, "status": self.status, "cases": self.cases, "mode": self.mode}
        if self.counterexample is not None:
            data["counterexample"] = self.counterexample
        if self.note:
            data["note"] = self.note
        return data


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)
    seed: int = 0
    budgets: dict = field(default_factory=dict)
    wall_time: float = 0.0
    complete: bool = True

    @property
    def passed(self):
        return self.complete and not any(c.failed for c in self.checks)

    def extend(self, checks):
        self.checks.extend(checks)
        return self

    def sorted_checks(self):
        return sorted(self.checks, key=lambda c: c.name)

    def to_dict(self, include_timing=False):
        data = {
            "suite": self.suite,
            "passed": self.passed,
            "seed": self.seed,
            "budgets": dict(self.budgets),
            "checks": [c.to_dict() for c in self.sorted_checks()],
        }
        if not self.complete:
            data["complete"] = False
        if include_timing:
            data["wall_time"] = round(self.wall_time, 3)
        return data

    def to_json(self, include_timing=False):
        return json.dumps(self.to_dict(include_timing), sort_keys=True, ensure_ascii=False, indent=2)


def budget_dict(budget):
    return asdict(budget)


def check_cases(name, cases, predicate, describe=repr, mode=EXHAUSTIVE):
    """Runs predicate over cases and stops at the first counterexample."""
    count = 0
    for case in cases:
        count += 1
        error = None
        try:
            ok = predicate(case)
        except Exception as e:
            ok = False
            error = f"{type(e).__name__}: {e}"
        if not ok:
            try:
                witness = describe(case)
            except Exception:
                witness = repr(case)
            if error:
                witness = {"case": witness, "error": error}
            logger.info("check %s failed after %d cases", name, count)
            return Check(name, FAIL, witness, count, mode)
    if count == 0:
        logger.info("check %s has no cases within the budget", name)
        return Check(name, SKIPPED, None, 0, mode, NO_CASES)
    logger.info("check %s passed on %d cases", name, count)
    return Check(name, PASS, None, count, mode)
