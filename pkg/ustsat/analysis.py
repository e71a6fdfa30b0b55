"""
Polarity analysis of clause sets

Clause polarity and unipolarity, the constructive model of a unipolar set,
inverters (variable sets whose literals get flipped), and the skewness
p(S) together with the hidden skewness revealed by the inverter
rho_S = {v | pos(v, S) > neg(v, S)}.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .cnf import Clause, Formula
from .errors import BipolarSetError, EmptyClauseError, InverterError, PartialModelError
from .schemas import Counting, SkewnessReport

log = logging.getLogger(__name__)


class ClausePolarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    MIXED = "mixed"


class Unipolarity(str, Enum):
    BIPOLAR = "bipolar"
    NO_POSITIVE = "noPositive"
    NO_NEGATIVE = "noNegative"
    BOTH = "both"

    @property
    def is_unipolar(self) -> bool:
        return self is not Unipolarity.BIPOLAR


@dataclass(frozen=True)
class Inverter:
    variables: FrozenSet[int] = frozenset()

    @classmethod
    def of(cls, variables: Iterable[int]) -> "Inverter":
        return cls(frozenset(variables))

    def __contains__(self, var: int) -> bool:
        return var in self.variables

    def __len__(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class Model:
    """Total truth assignment; values[v - 1] is the value of variable v"""

    values: Tuple[bool, ...]

    @classmethod
    def constant(cls, num_vars: int, value: bool) -> "Model":
        return cls((value,) * num_vars)

    @classmethod
    def from_literals(cls, literals: Iterable[int], num_vars: int) -> "Model":
        values: List[Optional[bool]] = [None] * num_vars
        for lit in literals:
            var = abs(lit)
            if not 1 <= var <= num_vars:
                raise PartialModelError(f"literal {lit} outside 1..{num_vars}")
            values[var - 1] = lit > 0
        missing = [index + 1 for index, value in enumerate(values) if value is None]
        if missing:
            raise PartialModelError(f"model leaves {len(missing)} variables unassigned, first v{missing[0]}")
        return cls(tuple(values))

    @property
    def num_vars(self) -> int:
        return len(self.values)

    def __getitem__(self, var: int) -> bool:
        return self.values[var - 1]

    def is_true(self, lit: int) -> bool:
        return self.values[lit - 1] if lit > 0 else not self.values[-lit - 1]

    def literals(self) -> List[int]:
        return [var if value else -var for var, value in enumerate(self.values, start=1)]


@dataclass(frozen=True)
class Verification:
    satisfied: bool
    clause_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.satisfied


# ==================== Polarity ====================

def clause_polarity(clause: Clause) -> ClausePolarity:
    if not clause:
        raise EmptyClauseError("an empty clause is neither positive nor negative")
    has_pos = has_neg = False
    for lit in clause:
        if lit > 0:
            has_pos = True
        else:
            has_neg = True
    if has_pos and has_neg:
        return ClausePolarity.MIXED
    return ClausePolarity.POSITIVE if has_pos else ClausePolarity.NEGATIVE


def is_unipolar(formula: Formula) -> Unipolarity:
    """Classify a clause set; empty clauses carry no polarity and are skipped"""
    positive = negative = False
    for clause in formula.clauses:
        if not clause:
            continue
        polarity = clause_polarity(clause)
        if polarity is ClausePolarity.POSITIVE:
            positive = True
        elif polarity is ClausePolarity.NEGATIVE:
            negative = True
        if positive and negative:
            return Unipolarity.BIPOLAR
    if positive:
        return Unipolarity.NO_NEGATIVE
    if negative:
        return Unipolarity.NO_POSITIVE
    return Unipolarity.BOTH


def unipolar_model(formula: Formula, side: Optional[Unipolarity] = None) -> Model:
    """All variables false when positive clauses are absent, true when negative ones are"""
    if formula.has_empty_clause:
        raise EmptyClauseError("a clause set holding an empty clause has no model")
    actual = is_unipolar(formula)
    if actual is Unipolarity.BIPOLAR:
        raise BipolarSetError("clause set holds both positive and negative clauses")
    if side is None or side is Unipolarity.BOTH:
        side = actual
    elif actual is not Unipolarity.BOTH and side is not actual:
        raise BipolarSetError(f"clause set is {actual.value}, not {side.value}")
    return Model.constant(formula.num_vars, side is Unipolarity.NO_NEGATIVE)


def verify_model(formula: Formula, model: Model) -> Verification:
    if model.num_vars < formula.num_vars:
        raise PartialModelError(
            f"model covers {model.num_vars} of {formula.num_vars} variables"
        )
    for index, clause in enumerate(formula.clauses):
        if not any(model.is_true(lit) for lit in clause):
            return Verification(False, index)
    return Verification(True)


# ==================== Inverters ====================

def _check_inverter(formula: Formula, theta: Inverter) -> None:
    for var in theta.variables:
        if not 1 <= var <= formula.num_vars:
            raise InverterError(f"inverter variable {var} outside 1..{formula.num_vars}")


def _flip_clauses(clauses: Sequence[Clause], flip: FrozenSet[int]) -> Tuple[Clause, ...]:
    return tuple(tuple(-lit if abs(lit) in flip else lit for lit in clause) for clause in clauses)


def apply_inverter(formula: Formula, theta: Inverter) -> Formula:
    """Flip every literal over a variable of theta; raw counts swap with them"""
    _check_inverter(formula, theta)
    if not theta.variables:
        return formula
    flip = theta.variables
    raw_pos = list(formula.raw_pos)
    raw_neg = list(formula.raw_neg)
    for var in flip:
        raw_pos[var], raw_neg[var] = raw_neg[var], raw_pos[var]
    return replace(
        formula,
        clauses=_flip_clauses(formula.clauses, flip),
        raw_clauses=_flip_clauses(formula.raw_clauses, flip),
        raw_pos=tuple(raw_pos),
        raw_neg=tuple(raw_neg),
    )


def invert_model(model: Model, theta: Inverter) -> Model:
    return Model(tuple(
        not value if var in theta.variables else value
        for var, value in enumerate(model.values, start=1)
    ))


# ==================== Skewness ====================

def occurrence_counts(formula: Formula, counting: Counting = Counting.RAW) -> Tuple[Sequence[int], Sequence[int]]:
    """pos(v, S) and neg(v, S) indexed by variable (index 0 unused)"""
    if counting is Counting.RAW:
        return formula.raw_pos, formula.raw_neg
    pos = [0] * (formula.num_vars + 1)
    neg = [0] * (formula.num_vars + 1)
    for clause in formula.clauses:
        for lit in clause:
            if lit > 0:
                pos[lit] += 1
            else:
                neg[-lit] += 1
    return pos, neg


def rho(formula: Formula, counting: Counting = Counting.RAW) -> Inverter:
    pos, neg = occurrence_counts(formula, counting)
    return Inverter.of(v for v in range(1, formula.num_vars + 1) if pos[v] > neg[v])


def reveal(formula: Formula, counting: Counting = Counting.RAW) -> Tuple[Formula, Inverter]:
    """Apply rho_S, exposing the hidden skewness of formula"""
    theta = rho(formula, counting)
    return apply_inverter(formula, theta), theta


def skewness(formula: Formula, counting: Counting = Counting.RAW) -> SkewnessReport:
    pos, neg = occurrence_counts(formula, counting)
    per_variable: Dict[int, Tuple[int, int]] = {}
    rho_vars = []
    poslit = neglit = hidden_poslit = 0
    for v in range(1, formula.num_vars + 1):
        pv, nv = pos[v], neg[v]
        poslit += pv
        neglit += nv
        if pv > nv:
            rho_vars.append(v)
            hidden_poslit += nv
        else:
            hidden_poslit += pv
        if pv or nv:
            per_variable[v] = (pv, nv)

    if poslit + neglit == 0:
        log.warning("clause set has no literal occurrences; p and hp reported as 0")

    inverted = apply_inverter(formula, Inverter.of(rho_vars))
    return SkewnessReport(
        n=formula.num_vars,
        m=formula.num_clauses,
        clauses_header=formula.header_clauses,
        tautologies_dropped=formula.tautologies_dropped,
        counting=counting,
        poslit=poslit,
        neglit=neglit,
        hidden_poslit=hidden_poslit,
        rho=rho_vars,
        initially_unipolar=is_unipolar(formula).is_unipolar,
        unipolar_after_rho=is_unipolar(inverted).is_unipolar,
        per_variable=per_variable,
    )


def ust_advised(report: SkewnessReport, threshold: float) -> bool:
    """UST pays for its book-keeping on clearly skewed sets"""
    return min(report.p, report.hp) < threshold


TABLE_HEADER = f"{'instance':<40} {'n':>9} {'m':>10} {'p(S)':>7} {'hp(S)':>7} {'|rho|':>8} {'unipolar':>9}"


def format_table_row(name: str, report: SkewnessReport, decimals: int = 3) -> str:
    unipolar = "initial" if report.initially_unipolar else ("rho" if report.unipolar_after_rho else "no")
    return (
        f"{name:<40} {report.n:>9} {report.m:>10} "
        f"{report.p:>7.{decimals}f} {report.hp:>7.{decimals}f} {report.rho_size:>8} {unipolar:>9}"
    )
