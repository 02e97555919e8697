"""One call from a parsed rule to its complex and K-theory report."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .apcomplex import CochainSystem, Diagnostics, Incidence, build_complex, cochain_system, diagnostics, orient
from .collar import CollaredRule, collar_rule
from .ktheory import KTheoryReport, compute_d1, compute_d2
from .substitution import SubstitutionRule, recurrent_part


class BudgetExceeded(Exception):
    pass


@dataclass
class Run:
    rule: SubstitutionRule
    collared: CollaredRule
    cells: list
    incidence: Incidence
    cochains: CochainSystem
    diagnostics: Diagnostics
    report: KTheoryReport | None = None
    seconds: float = 0.0
    components: tuple = ()  # closed label classes, set for non-primitive rules
    dropped: tuple = ()  # transient labels removed from a non-primitive rule


class Clock:
    def __init__(self, budget: float | None = None):
        self.budget = budget
        self.start = time.monotonic()

    def check(self, stage: str) -> None:
        if self.budget is not None and time.monotonic() - self.start > self.budget:
            raise BudgetExceeded(f"time budget of {self.budget:g} s exceeded after {stage}")

    def remaining(self) -> float | None:
        if self.budget is None:
            return None
        return max(self.budget - (time.monotonic() - self.start), 1e-3)


def build(rule: SubstitutionRule, seed: int | None = None, clock: Clock | None = None) -> Run:
    """Collar the rule and build its complex and cochains (no K-theory).

    A non-primitive rule is first cut down to its closed components; the
    complex is then their disjoint union, so every group is the direct sum
    over components.
    """
    clock = clock or Clock()
    comps, dropped = (), ()
    if not rule.primitive:
        rule, comps, dropped = recurrent_part(rule)
    cr = collar_rule(rule)
    clock.check("collaring")
    cells, inc = build_complex(cr)
    if seed is not None:
        inc = orient(cells, inc, seed=seed)
    cs = cochain_system(cells, inc, cr)
    clock.check("building the complex")
    return Run(rule, cr, cells, inc, cs, diagnostics(cells, inc), components=tuple(comps), dropped=tuple(dropped))


def attach_report(run: Run, verify: str = "auto", clock: Clock | None = None) -> KTheoryReport:
    clock = clock or Clock()
    compute = compute_d1 if run.rule.dimension == 1 else compute_d2
    rep = compute(run.cochains, run.rule.name, run.diagnostics, verify=verify, budget=clock.remaining())
    clock.check("classification")
    if run.components:
        rep.flags["primitive"] = False
        rep.flags["closed_components"] = [list(c) for c in run.components]
        rep.flags["dropped_labels"] = list(run.dropped)
    run.report = rep
    return rep


def analyze(rule: SubstitutionRule, seed: int | None = None, verify: str = "auto",
            budget: float | None = None) -> Run:
    clock = Clock(budget)
    run = build(rule, seed, clock)
    attach_report(run, verify, clock)
    run.seconds = time.monotonic() - clock.start
    return run
