"""
Chronological DPLL with unipolar-set termination

The solver keeps, for every clause, the number of unassigned unnegated and
negated literals and the trail level at which the clause was satisfied. From
those it maintains the number of active positive clauses, active negative
clauses and active clauses incrementally, so the unipolarity check after
each assignment is O(1).

There is no unit propagation, no pure-literal rule and no learning: each
step assigns true to the most frequent literal of a most frequent variable
among the active clauses, and a conflict flips the most recent decision
whose other branch is untried.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from .analysis import Inverter, Model, Unipolarity, invert_model, reveal as reveal_rho
from .cnf import Formula
from .config import settings
from .errors import SolverInvariantError
from .schemas import SolveStats, TerminationMode, Verdict

log = logging.getLogger(__name__)

UNSET = -1


class ApplyStatus(str, Enum):
    OK = "ok"
    CONFLICT = "conflict"


class Backtrack(str, Enum):
    RETRIED = "retried"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class ClauseState:
    remaining_pos: int
    remaining_neg: int
    satisfied_at_level: Optional[int]

    @property
    def active(self) -> bool:
        return self.satisfied_at_level is None

    @property
    def positive(self) -> bool:
        return self.active and self.remaining_neg == 0 and self.remaining_pos > 0

    @property
    def negative(self) -> bool:
        return self.active and self.remaining_pos == 0 and self.remaining_neg > 0


@dataclass
class TrailEntry:
    variable: int
    value: bool
    tried_both_branches: bool
    level: int

    @property
    def literal(self) -> int:
        return self.variable if self.value else -self.variable


@dataclass
class SolverCounters:
    pos_active: int = 0
    neg_active: int = 0
    active_total: int = 0
    assignments: int = 0


def _code(lit: int) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


class Solver:
    """Mutable search state over one immutable Formula"""

    def __init__(self, formula: Formula, debug: Optional[bool] = None):
        self.formula = formula
        self.debug = settings.debug_recount if debug is None else debug
        n = formula.num_vars
        clauses = formula.clauses

        self.clauses = clauses
        self.rem_pos = [0] * len(clauses)
        self.rem_neg = [0] * len(clauses)
        self.sat_level = [UNSET] * len(clauses)
        self.occurs: List[List[int]] = [[] for _ in range(2 * n + 2)]
        # active clauses containing each literal, by literal code
        self.lit_count = [0] * (2 * n + 2)
        self.value: List[Optional[bool]] = [None] * (n + 1)
        self.trail: List[TrailEntry] = []
        self.counters = SolverCounters()
        self.conflicts = 0
        self.empty_clauses = 0

        counters = self.counters
        for index, clause in enumerate(clauses):
            for lit in clause:
                code = _code(lit)
                self.occurs[code].append(index)
                self.lit_count[code] += 1
                if lit > 0:
                    self.rem_pos[index] += 1
                else:
                    self.rem_neg[index] += 1
            rp, rn = self.rem_pos[index], self.rem_neg[index]
            counters.active_total += 1
            if rn == 0 and rp > 0:
                counters.pos_active += 1
            elif rp == 0 and rn > 0:
                counters.neg_active += 1
            elif rp == 0:
                self.empty_clauses += 1

    # ==================== Inspection ====================

    def clause_state(self, index: int) -> ClauseState:
        level = self.sat_level[index]
        return ClauseState(self.rem_pos[index], self.rem_neg[index], None if level == UNSET else level)

    def recount(self) -> SolverCounters:
        """Counters recomputed from the clause states"""
        fresh = SolverCounters(assignments=self.counters.assignments)
        for index in range(len(self.clauses)):
            state = self.clause_state(index)
            if not state.active:
                continue
            fresh.active_total += 1
            if state.positive:
                fresh.pos_active += 1
            elif state.negative:
                fresh.neg_active += 1
        return fresh

    def check_counters(self) -> None:
        fresh = self.recount()
        if fresh != self.counters:
            raise SolverInvariantError(
                f"incremental counters {self.counters} differ from recount {fresh} "
                f"at trail length {len(self.trail)}"
            )

    # ==================== Search steps ====================

    def check_ust(self) -> Unipolarity:
        pos, neg = self.counters.pos_active, self.counters.neg_active
        if pos == 0 and neg == 0:
            return Unipolarity.BOTH
        if pos == 0:
            return Unipolarity.NO_POSITIVE
        if neg == 0:
            return Unipolarity.NO_NEGATIVE
        return Unipolarity.BIPOLAR

    def pick_branch(self) -> int:
        """Most frequent literal of a most frequent unassigned variable

        Ties go to the lowest variable index, then to the unnegated literal.
        """
        lit_count = self.lit_count
        value = self.value
        best_var, best_score = 0, 0
        for var in range(1, len(value)):
            if value[var] is None:
                score = lit_count[2 * var] + lit_count[2 * var + 1]
                if score > best_score:
                    best_var, best_score = var, score
        if best_var == 0:
            raise SolverInvariantError("no unassigned variable occurs in an active clause")
        return best_var if lit_count[2 * best_var] >= lit_count[2 * best_var + 1] else -best_var

    def apply_assignment(self, lit: int, tried_both: bool = False) -> ApplyStatus:
        """Assign lit true: satisfy clauses holding it, shorten those holding -lit"""
        var = abs(lit)
        if self.value[var] is not None:
            raise SolverInvariantError(f"variable {var} is already assigned")

        level = len(self.trail)
        self.trail.append(TrailEntry(var, lit > 0, tried_both, level))
        self.value[var] = lit > 0
        counters = self.counters
        counters.assignments += 1

        sat_level = self.sat_level
        rem_pos, rem_neg = self.rem_pos, self.rem_neg
        lit_count = self.lit_count
        clauses = self.clauses

        for index in self.occurs[_code(lit)]:
            if sat_level[index] != UNSET:
                continue
            sat_level[index] = level
            rp, rn = rem_pos[index], rem_neg[index]
            counters.active_total -= 1
            if rn == 0:
                counters.pos_active -= 1
            elif rp == 0:
                counters.neg_active -= 1
            for other in clauses[index]:
                lit_count[_code(other)] -= 1

        conflict = False
        for index in self.occurs[_code(-lit)]:
            if sat_level[index] != UNSET:
                continue
            rp, rn = rem_pos[index], rem_neg[index]
            if lit > 0:
                # -lit is the negated literal being deleted
                rem_neg[index] = rn - 1
                if rn == 1:
                    if rp > 0:
                        counters.pos_active += 1
                    else:
                        counters.neg_active -= 1
                        conflict = True
            else:
                rem_pos[index] = rp - 1
                if rp == 1:
                    if rn > 0:
                        counters.neg_active += 1
                    else:
                        counters.pos_active -= 1
                        conflict = True

        if self.debug:
            self.check_counters()
        return ApplyStatus.CONFLICT if conflict else ApplyStatus.OK

    def _undo_last(self) -> TrailEntry:
        entry = self.trail.pop()
        lit = entry.literal
        level = entry.level
        counters = self.counters
        sat_level = self.sat_level
        rem_pos, rem_neg = self.rem_pos, self.rem_neg
        lit_count = self.lit_count
        clauses = self.clauses

        for index in self.occurs[_code(-lit)]:
            if sat_level[index] != UNSET:
                continue
            rp, rn = rem_pos[index], rem_neg[index]
            if lit > 0:
                rem_neg[index] = rn + 1
                if rn == 0:
                    if rp > 0:
                        counters.pos_active -= 1
                    else:
                        counters.neg_active += 1
            else:
                rem_pos[index] = rp + 1
                if rp == 0:
                    if rn > 0:
                        counters.neg_active -= 1
                    else:
                        counters.pos_active += 1

        for index in self.occurs[_code(lit)]:
            if sat_level[index] != level:
                continue
            sat_level[index] = UNSET
            rp, rn = rem_pos[index], rem_neg[index]
            counters.active_total += 1
            if rn == 0:
                counters.pos_active += 1
            elif rp == 0:
                counters.neg_active += 1
            for other in clauses[index]:
                lit_count[_code(other)] += 1

        self.value[entry.variable] = None
        if self.debug:
            self.check_counters()
        return entry

    def backtrack(self) -> Tuple[Backtrack, Optional[ApplyStatus]]:
        """Undo back to the latest decision with an untried branch and flip it"""
        while self.trail:
            entry = self._undo_last()
            if not entry.tried_both_branches:
                return Backtrack.RETRIED, self.apply_assignment(-entry.literal, tried_both=True)
        return Backtrack.EXHAUSTED, None

    def completed_model(self, fill: bool) -> Model:
        """Trail values, with every unassigned variable set to fill"""
        return Model(tuple(fill if value is None else value for value in self.value[1:]))

    # ==================== Driver ====================

    def run(self, mode: TerminationMode, budget: Optional[int] = None) -> SolveStats:
        budget = settings.default_budget if budget is None else budget
        counters = self.counters
        m = len(self.clauses)
        track_ust = mode is not TerminationMode.AST
        n_u: Optional[int] = None
        trail_u: Optional[int] = None
        remainder: Optional[float] = None
        side: Optional[Unipolarity] = None

        def finish(result: Verdict, model: Optional[Model] = None, n_a: Optional[int] = None) -> SolveStats:
            return SolveStats(
                result=result,
                mode=mode,
                n_u=n_u,
                n_a=n_a,
                trail_u=trail_u,
                trail_a=len(self.trail) if n_a is not None else None,
                remainder_pct=remainder,
                conflicts=self.conflicts,
                assignments=counters.assignments,
                trail_length=len(self.trail),
                unipolar_side=side.value if side is not None else None,
                model=model.literals() if model is not None else None,
            )

        if self.empty_clauses:
            self.conflicts += 1
            return finish(Verdict.UNSAT)

        status = ApplyStatus.OK
        while True:
            if status is ApplyStatus.CONFLICT:
                self.conflicts += 1
                if counters.assignments >= budget:
                    return finish(Verdict.INDETERMINATE)
                outcome, status = self.backtrack()
                if outcome is Backtrack.EXHAUSTED:
                    return finish(Verdict.UNSAT)
                continue

            if track_ust and n_u is None:
                polarity = self.check_ust()
                if polarity.is_unipolar:
                    n_u = counters.assignments
                    trail_u = len(self.trail)
                    side = polarity
                    remainder = 100.0 * counters.active_total / m if m else 0.0
                    if mode is TerminationMode.UST:
                        fill = polarity is Unipolarity.NO_NEGATIVE
                        return finish(Verdict.SAT, self.completed_model(fill))

            if counters.active_total == 0:
                return finish(Verdict.SAT, self.completed_model(False), n_a=counters.assignments)

            if counters.assignments >= budget:
                return finish(Verdict.INDETERMINATE)
            status = self.apply_assignment(self.pick_branch())


def solve(
    formula: Formula,
    mode: TerminationMode = TerminationMode.UST,
    budget: Optional[int] = None,
    *,
    reveal: bool = False,
    debug: Optional[bool] = None,
) -> SolveStats:
    """Solve formula; with reveal, search the rho-inverted set and map the model back"""
    theta = Inverter()
    if reveal:
        formula, theta = reveal_rho(formula)
        log.debug("searching the rho-inverted set (|rho|=%d)", len(theta))

    stats = Solver(formula, debug=debug).run(TerminationMode(mode), budget)
    log.debug(
        "%s in %s mode: n_u=%s n_a=%s assignments=%d conflicts=%d",
        stats.result.value, stats.mode.value, stats.n_u, stats.n_a, stats.assignments, stats.conflicts,
    )

    if reveal:
        update = {"revealed": True}
        if stats.model is not None and theta.variables:
            model = invert_model(Model.from_literals(stats.model, formula.num_vars), theta)
            update["model"] = model.literals()
        stats = stats.model_copy(update=update)
    return stats
