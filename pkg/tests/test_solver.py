import pytest

from ustsat.analysis import Model, Unipolarity, verify_model
from ustsat.bench import TABLE1_P, TABLE1_R
from ustsat.cnf import Formula, parse_dimacs
from ustsat.oracle import brute_force
from ustsat.schemas import TerminationMode, Verdict
from ustsat.solver import ApplyStatus, Backtrack, ClauseState, Solver, SolverCounters, solve

from strategies import random_formulas

MODES = [TerminationMode.UST, TerminationMode.AST, TerminationMode.MEASURE]


def model_of(stats, num_vars):
    return Model.from_literals(stats.model, num_vars)


class TestSteps:

    def test_initial_counters(self, example51):
        solver = Solver(example51)
        assert solver.counters == SolverCounters(pos_active=1, neg_active=1, active_total=3, assignments=0)
        assert solver.check_ust() is Unipolarity.BIPOLAR

    def test_pick_branch_example(self, example51):
        # every variable occurs three times; v1 wins the tie and -v1 is its commoner literal
        assert Solver(example51).pick_branch() == -1

    def test_pick_branch_frequency(self):
        solver = Solver(Formula.from_clauses(3, [[1, 2], [2, -3], [-2]]))
        assert solver.pick_branch() == 2

    def test_pick_branch_prefers_unnegated_on_tie(self):
        assert Solver(Formula.from_clauses(1, [[1], [-1]])).pick_branch() == 1

    def test_apply_satisfies_and_shortens(self, example51):
        solver = Solver(example51)
        assert solver.apply_assignment(-1) is ApplyStatus.OK
        assert solver.clause_state(0) == ClauseState(2, 0, None)
        assert solver.clause_state(1).satisfied_at_level == 0
        assert solver.clause_state(2).satisfied_at_level == 0
        assert solver.counters == SolverCounters(pos_active=1, neg_active=0, active_total=1, assignments=1)
        assert solver.check_ust() is Unipolarity.NO_NEGATIVE

    def test_mixed_clause_becomes_positive(self):
        solver = Solver(Formula.from_clauses(2, [[1, -2]]))
        assert solver.counters.pos_active == 0
        assert solver.apply_assignment(2) is ApplyStatus.OK
        assert solver.counters.pos_active == 1
        assert solver.clause_state(0).positive

    def test_conflict(self):
        solver = Solver(Formula.from_clauses(1, [[1], [-1]]))
        assert solver.apply_assignment(1) is ApplyStatus.CONFLICT
        assert solver.clause_state(1) == ClauseState(0, 0, None)

    def test_backtrack_flips_then_exhausts(self):
        solver = Solver(Formula.from_clauses(1, [[1], [-1]]))
        solver.apply_assignment(1)

        assert solver.backtrack() == (Backtrack.RETRIED, ApplyStatus.CONFLICT)
        assert solver.trail[-1].literal == -1
        assert solver.trail[-1].tried_both_branches

        assert solver.backtrack() == (Backtrack.EXHAUSTED, None)
        assert solver.trail == []
        assert solver.recount() == SolverCounters(pos_active=1, neg_active=1, active_total=2, assignments=2)

    def test_undo_restores_clause_states(self, example51):
        solver = Solver(example51, debug=True)
        before = [solver.clause_state(i) for i in range(3)]
        solver.apply_assignment(-1)
        solver.apply_assignment(2)
        solver.backtrack()
        solver.backtrack()
        solver.backtrack()
        assert [solver.clause_state(i) for i in range(3)] == before
        assert solver.value == [None] * 4


class TestExample:

    def test_measure(self, example51):
        stats = solve(example51, TerminationMode.MEASURE)
        assert stats.result is Verdict.SAT
        assert stats.n_u == 1
        assert stats.n_a == 2
        assert stats.gain == 2.0
        assert (stats.trail_u, stats.trail_a) == (1, 2)
        assert stats.remainder_pct == pytest.approx(100 / 3)
        assert stats.conflicts == 0
        assert stats.model == [-1, 2, -3]

    def test_ust(self, example51):
        stats = solve(example51, TerminationMode.UST)
        assert stats.result is Verdict.SAT
        assert stats.n_u == 1
        assert stats.n_a is None
        assert stats.assignments == 1
        assert (stats.trail_u, stats.trail_a) == (1, None)
        assert stats.unipolar_side == "noNegative"
        assert stats.model == [-1, 2, 3]
        assert verify_model(example51, model_of(stats, 3))

    def test_ast(self, example51):
        stats = solve(example51, TerminationMode.AST)
        assert stats.result is Verdict.SAT
        assert stats.n_u is None
        assert stats.n_a == 2
        assert stats.trail_length == 2
        assert stats.model == [-1, 2, -3]

    def test_reveal(self, example51):
        stats = solve(example51, TerminationMode.UST, reveal=True)
        assert stats.revealed
        assert stats.n_u == 0
        assert stats.assignments == 0
        assert stats.model == [-1, 2, -3]
        assert verify_model(example51, model_of(stats, 3))

    def test_record(self, example51):
        record = solve(example51, TerminationMode.MEASURE).record()
        assert record == {
            "result": "SAT", "mode": "measure", "n_u": 1, "n_a": 2, "gain": 2.0,
            "remainder_pct": pytest.approx(33.333, abs=1e-3), "conflicts": 0, "assignments": 2,
            "trail_length": 2,
        }


class TestBoundaries:

    def test_initially_unipolar_stops_at_zero(self):
        formula = parse_dimacs("p cnf 3 2\n-1 -2 0\n-2 3 0\n")
        stats = solve(formula, TerminationMode.UST)
        assert stats.result is Verdict.SAT
        assert stats.n_u == 0
        assert stats.assignments == 0
        assert stats.model == [-1, -2, -3]
        assert stats.remainder_pct == 100.0

    def test_initially_unipolar_has_no_gain(self):
        formula = parse_dimacs("p cnf 3 2\n-1 -2 0\n-2 3 0\n")
        stats = solve(formula, TerminationMode.MEASURE)
        assert stats.n_u == 0
        assert stats.n_a >= 1
        assert stats.gain is None

    def test_empty_clause_is_unsat(self):
        stats = solve(parse_dimacs("p cnf 2 2\n1 2 0\n0\n"), TerminationMode.UST)
        assert stats.result is Verdict.UNSAT
        assert stats.conflicts == 1
        assert stats.assignments == 0

    def test_no_clauses(self):
        stats = solve(Formula.from_clauses(3, []), TerminationMode.MEASURE)
        assert stats.result is Verdict.SAT
        assert (stats.n_u, stats.n_a) == (0, 0)
        assert stats.remainder_pct == 0.0
        assert stats.model == [-1, -2, -3]

    def test_contradiction(self):
        stats = solve(Formula.from_clauses(1, [[1], [-1]]), TerminationMode.UST)
        assert stats.result is Verdict.UNSAT
        assert stats.conflicts == 2
        assert stats.assignments == 2

    def test_budget(self):
        stats = solve(Formula.from_clauses(1, [[1], [-1]]), TerminationMode.UST, budget=1)
        assert stats.result is Verdict.INDETERMINATE
        assert stats.model is None


class TestRandom:

    @pytest.mark.parametrize("p", [0.5, 0.3, 0.1])
    def test_unipolar_strictly_before_all_satisfied(self, sweep, p):
        # ratios from 2.0 up to the satisfiability threshold of the p row
        threshold = TABLE1_R[TABLE1_P.index(p)][-1]
        checked = 0
        for params, formula in random_formulas(sweep, seed=21, n_range=(10, 30), r_range=(2.0, threshold), p_choices=(p,)):
            stats = solve(formula, TerminationMode.MEASURE, budget=20_000)
            if stats.result is not Verdict.SAT:
                continue
            checked += 1
            assert stats.n_u < stats.n_a, params
            assert verify_model(formula, model_of(stats, formula.num_vars))
        assert checked > 0

    @pytest.mark.parametrize("mode", MODES)
    def test_matches_exhaustive_search(self, sweep, mode):
        for params, formula in random_formulas(sweep, seed=7, n_range=(3, 14), r_range=(1.0, 7.0)):
            stats = solve(formula, mode)
            expected = brute_force(formula)
            assert (stats.result is Verdict.SAT) == (expected is not None), params
            if stats.result is Verdict.SAT:
                assert verify_model(formula, model_of(stats, formula.num_vars)), params
            else:
                assert stats.result is Verdict.UNSAT

    def test_modes_share_one_search_path(self, sweep):
        for params, formula in random_formulas(sweep, seed=8, n_range=(5, 16), r_range=(2.0, 5.0)):
            ust = solve(formula, TerminationMode.UST)
            ast = solve(formula, TerminationMode.AST)
            measure = solve(formula, TerminationMode.MEASURE)
            assert ust.result is ast.result is measure.result
            if measure.result is Verdict.SAT:
                assert measure.n_u == ust.assignments, params
                assert measure.n_a == ast.assignments, params
            else:
                assert ust.assignments == ast.assignments == measure.assignments

    def test_counters_match_recount(self):
        # debug mode recounts after every apply and every undo
        for _, formula in random_formulas(100, seed=9, n_range=(5, 20), r_range=(1.0, 6.0)):
            solve(formula, TerminationMode.AST, debug=True)

    def test_deterministic(self):
        for _, formula in random_formulas(20, seed=10, n_range=(10, 30)):
            assert solve(formula, TerminationMode.MEASURE) == solve(formula, TerminationMode.MEASURE)

    def test_reveal_keeps_verdict(self, sweep):
        for params, formula in random_formulas(sweep, seed=11, n_range=(3, 12)):
            plain = solve(formula, TerminationMode.UST)
            revealed = solve(formula, TerminationMode.UST, reveal=True)
            assert plain.result is revealed.result, params
            if revealed.model is not None:
                assert verify_model(formula, model_of(revealed, formula.num_vars)), params
