"""Exhaustive 2^n reference solver for small formulas"""
from typing import Optional

import numpy as np

from .analysis import Model
from .cnf import Formula
from .errors import FormulaError

MAX_ORACLE_VARS = 22


def brute_force(formula: Formula) -> Optional[Model]:
    """Smallest satisfying assignment in binary order (bit v-1 is variable v), or None"""
    n = formula.num_vars
    if n > MAX_ORACLE_VARS:
        raise FormulaError(f"exhaustive search is limited to {MAX_ORACLE_VARS} variables, got {n}")

    assignments = np.arange(1 << n, dtype=np.uint32)
    bits = [None] + [((assignments >> (v - 1)) & 1).astype(bool) for v in range(1, n + 1)]
    alive = np.ones(1 << n, dtype=bool)
    for clause in formula.clauses:
        satisfied = np.zeros(1 << n, dtype=bool)
        for lit in clause:
            satisfied |= bits[lit] if lit > 0 else ~bits[-lit]
        alive &= satisfied
        if not alive.any():
            return None

    first = int(np.flatnonzero(alive)[0])
    return Model(tuple(bool((first >> (v - 1)) & 1) for v in range(1, n + 1)))


def is_satisfiable(formula: Formula) -> bool:
    return brute_force(formula) is not None
