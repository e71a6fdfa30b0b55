"""
CNF data model and DIMACS reading/writing

Literals use the DIMACS convention: variable v is the integer v when
unnegated and -v when negated. A Formula is immutable once built and keeps
two views of its literals: the normalized clauses the solver works on, and
the per-variable occurrence counts of the file as it was read.
"""
import bz2
import gzip
import logging
import lzma
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import DimacsError, FormulaError

log = logging.getLogger(__name__)

Clause = Tuple[int, ...]

_TOKEN = re.compile(r"\S+")
_OPENERS = {".gz": gzip.open, ".bz2": bz2.open, ".xz": lzma.open, ".lzma": lzma.open}


def normalize_clause(literals: Iterable[int]) -> Tuple[Optional[Clause], int]:
    """Drop repeated literals, keeping first-occurrence order.

    Returns (clause, duplicates removed); clause is None for a tautology.
    """
    literals = tuple(literals)
    seen = dict.fromkeys(literals)
    for lit in seen:
        if -lit in seen:
            return None, 0
    return tuple(seen), len(literals) - len(seen)


@dataclass(frozen=True)
class Formula:
    """A normalized clause set over variables 1..num_vars"""

    num_vars: int
    clauses: Tuple[Clause, ...]
    # Occurrence counts per variable as read, index 0 unused
    raw_pos: Tuple[int, ...]
    raw_neg: Tuple[int, ...]
    header_clauses: Optional[int] = None
    tautologies_dropped: int = 0
    duplicates_removed: int = 0
    comments: Tuple[str, ...] = field(default=(), compare=False)
    # Clauses as read, before normalization
    raw_clauses: Tuple[Clause, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def from_clauses(
        cls,
        num_vars: int,
        clauses: Iterable[Sequence[int]],
        *,
        header_clauses: Optional[int] = None,
        comments: Sequence[str] = (),
    ) -> "Formula":
        """Validate and normalize raw clauses into a Formula"""
        if num_vars < 0:
            raise FormulaError(f"variable count must be non-negative, got {num_vars}")

        raw_pos = [0] * (num_vars + 1)
        raw_neg = [0] * (num_vars + 1)
        kept = []
        read = []
        tautologies = 0
        duplicates = 0

        for index, literals in enumerate(clauses):
            literals = tuple(literals)
            read.append(literals)
            for lit in literals:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > num_vars:
                    raise FormulaError(
                        f"clause {index}: literal {lit!r} is not in ±1..{num_vars}"
                    )
                if lit > 0:
                    raw_pos[lit] += 1
                else:
                    raw_neg[-lit] += 1
            clause, removed = normalize_clause(literals)
            if clause is None:
                tautologies += 1
                continue
            duplicates += removed
            kept.append(clause)

        return cls(
            num_vars=num_vars,
            clauses=tuple(kept),
            raw_clauses=tuple(read),
            raw_pos=tuple(raw_pos),
            raw_neg=tuple(raw_neg),
            header_clauses=header_clauses,
            tautologies_dropped=tautologies,
            duplicates_removed=duplicates,
            comments=tuple(comments),
        )

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def raw_pos_lit(self) -> int:
        return sum(self.raw_pos)

    @property
    def raw_neg_lit(self) -> int:
        return sum(self.raw_neg)

    @property
    def has_empty_clause(self) -> bool:
        return any(not clause for clause in self.clauses)


# ==================== Reading ====================

def parse_dimacs(stream: Union[str, Iterable[str]]) -> Formula:
    """Parse DIMACS CNF text (a string or an iterable of lines).

    Comment lines start with `c`; a line starting with `%` ends the body
    (SATLIB files close with `%` and `0`). A bare `0` is an empty clause.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()

    num_vars: Optional[int] = None
    header_clauses: Optional[int] = None
    comments = []
    clauses = []
    current: list = []
    last_line = 0

    for line_no, line in enumerate(stream, start=1):
        last_line = line_no
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("c"):
            comments.append(stripped[1:].strip())
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            if num_vars is not None:
                raise DimacsError("duplicate problem line", line=line_no)
            num_vars, header_clauses = _parse_header(stripped, line_no)
            continue
        if num_vars is None:
            raise DimacsError("clause data before the `p cnf` header", line=line_no)

        for token_index, token in enumerate(stripped.split()):
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(
                    f"non-integer token {token!r}",
                    line=line_no,
                    offset=_column(line, token_index),
                ) from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(
                    f"literal {lit} exceeds the declared {num_vars} variables",
                    line=line_no,
                    offset=_column(line, token_index),
                )
            else:
                current.append(lit)

    if num_vars is None:
        raise DimacsError("missing `p cnf <n> <m>` header", line=last_line or None)
    if current:
        raise DimacsError("unterminated final clause (missing trailing 0)", line=last_line)

    if header_clauses != len(clauses):
        log.warning(
            "DIMACS header declares %d clauses but the body holds %d; using the body",
            header_clauses,
            len(clauses),
        )

    return Formula.from_clauses(
        num_vars, clauses, header_clauses=header_clauses, comments=comments
    )


def _parse_header(line: str, line_no: int) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
        raise DimacsError(f"malformed header {line!r}, expected `p cnf <n> <m>`", line=line_no)
    try:
        n, m = int(parts[2]), int(parts[3])
    except ValueError:
        raise DimacsError(f"non-integer counts in header {line!r}", line=line_no) from None
    if n < 0 or m < 0:
        raise DimacsError(f"negative counts in header {line!r}", line=line_no)
    return n, m


def _column(line: str, token_index: int) -> int:
    """1-based column of the token_index-th token of line"""
    for index, match in enumerate(_TOKEN.finditer(line)):
        if index == token_index:
            return match.start() + 1
    return 1


def load_formula(path: Union[str, Path]) -> Formula:
    """Read a DIMACS file; .gz, .bz2 and .xz files are decompressed"""
    path = Path(path)
    opener = _OPENERS.get(path.suffix, open)
    try:
        with opener(path, "rt", encoding="utf-8") as f:
            return parse_dimacs(f)
    except UnicodeDecodeError as exc:
        raise DimacsError(f"{path.name}: not valid UTF-8 text ({exc.reason})") from None


# ==================== Writing ====================

def write_dimacs(formula: Formula, comments: Sequence[str] = (), raw: bool = False) -> str:
    """Render formula as DIMACS text

    With raw, the clauses are written as read, repeated literals and
    tautologies included; otherwise the normalized clauses are.
    """
    clauses = formula.raw_clauses if raw else formula.clauses
    lines = [f"c {comment}".rstrip() for comment in comments]
    lines.append(f"p cnf {formula.num_vars} {len(clauses)}")
    for clause in clauses:
        lines.append(" ".join([str(lit) for lit in clause] + ["0"]))
    return "\n".join(lines) + "\n"


def save_formula(formula: Formula, path: Union[str, Path], comments: Sequence[str] = (), raw: bool = False) -> Path:
    path = Path(path)
    path.write_text(write_dimacs(formula, comments, raw), encoding="utf-8")
    return path
