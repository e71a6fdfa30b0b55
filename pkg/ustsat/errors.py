"""
Error types for the UST toolkit

Every error carries a human-readable detail and the exit code the CLI
reports for it.
"""
from typing import Optional


class UstError(Exception):
    """Base error; the CLI turns it into a diagnostic and exit code 1"""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DimacsError(UstError):
    """Malformed DIMACS input, located by line and token offset"""

    def __init__(self, detail: str, line: Optional[int] = None, offset: Optional[int] = None):
        self.line = line
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            detail = f"{', '.join(where)}: {detail}"
        super().__init__(detail)


class InverterError(UstError):
    """Inverter names a variable outside 1..n"""


class BipolarSetError(UstError):
    """A unipolar-only operation was given a bipolar clause set"""


class PartialModelError(UstError):
    """A model does not assign every variable 1..n"""


class EmptyClauseError(UstError):
    """An empty clause has no polarity; callers treat it as a conflict"""


class SolverInvariantError(UstError):
    """Incremental counters disagree with a from-scratch recount"""


class FormulaError(UstError):
    """Clause data that no CNF formula over 1..n can hold"""
