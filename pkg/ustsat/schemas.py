from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

MAX_SEED = 2**64 - 1


class TerminationMode(str, Enum):
    UST = "ust"
    AST = "ast"
    MEASURE = "measure"


class Verdict(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    INDETERMINATE = "INDETERMINATE"


class Counting(str, Enum):
    RAW = "raw"
    NORMALIZED = "normalized"


class StepCount(str, Enum):
    """What N_U and N_A count: every assignment applied, or the trail depth"""
    ASSIGNMENTS = "assignments"
    TRAIL = "trail"


# Solver Schemas
class SolveStats(BaseModel):
    """Verdict and step counts of one solver run"""
    result: Verdict
    mode: TerminationMode
    n_u: Optional[int] = Field(None, description="Assignments made when the active set first became unipolar")
    n_a: Optional[int] = Field(None, description="Assignments made when every clause was satisfied")
    trail_u: Optional[int] = Field(None, description="Trail length when the active set first became unipolar")
    trail_a: Optional[int] = Field(None, description="Trail length when every clause was satisfied")
    remainder_pct: Optional[float] = Field(None, description="Percent of clauses still active at UST")
    conflicts: int = 0
    assignments: int = 0
    trail_length: int = 0
    unipolar_side: Optional[str] = None
    revealed: bool = False
    model: Optional[List[int]] = Field(None, description="Signed literals, one per variable")

    @computed_field
    @property
    def gain(self) -> Optional[float]:
        if self.n_u is None or self.n_a is None or self.n_u < 1:
            return None
        return self.n_a / self.n_u

    def record(self) -> Dict[str, Any]:
        """Machine-readable stats record (no model)"""
        return self.model_dump(
            mode="json",
            include={"result", "mode", "n_u", "n_a", "gain", "remainder_pct", "conflicts", "assignments", "trail_length"},
        )


# Analysis Schemas
class SkewnessReport(BaseModel):
    """Polarity statistics of a clause set and of its ρ-inverted image"""
    n: int
    m: int
    clauses_header: Optional[int] = None
    tautologies_dropped: int = 0
    counting: Counting = Counting.RAW
    poslit: int
    neglit: int
    hidden_poslit: int
    rho: List[int] = Field(default_factory=list)
    initially_unipolar: bool
    unipolar_after_rho: bool
    per_variable: Dict[int, Tuple[int, int]] = Field(default_factory=dict, exclude=True)

    @computed_field
    @property
    def empty(self) -> bool:
        return self.poslit + self.neglit == 0

    @property
    def p_exact(self) -> Fraction:
        total = self.poslit + self.neglit
        return Fraction(min(self.poslit, self.neglit), total) if total else Fraction(0)

    @property
    def hp_exact(self) -> Fraction:
        # inversion moves occurrences between polarities, the total is unchanged
        total = self.poslit + self.neglit
        hidden_neglit = total - self.hidden_poslit
        return Fraction(min(self.hidden_poslit, hidden_neglit), total) if total else Fraction(0)

    @computed_field
    @property
    def p(self) -> float:
        return float(self.p_exact)

    @computed_field
    @property
    def hp(self) -> float:
        return float(self.hp_exact)

    @computed_field
    @property
    def rho_size(self) -> int:
        return len(self.rho)

    def record(self, decimals: int = 3) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "poslit": self.poslit,
            "neglit": self.neglit,
            "p": round(self.p, decimals),
            "rho_size": self.rho_size,
            "hp": round(self.hp, decimals),
            "initially_unipolar": self.initially_unipolar,
        }


# Generator Schemas
class GenParams(BaseModel):
    """Fixed-width random k-SAT with literal polarity bias p"""
    n: int = Field(..., ge=1, description="Number of variables")
    r: Optional[float] = Field(None, gt=0, description="Clauses-to-variables ratio")
    m: Optional[int] = Field(None, ge=0, description="Explicit clause count")
    k: int = Field(3, ge=1, description="Literals per clause")
    p: float = Field(..., ge=0.0, le=1.0, description="Probability of an unnegated literal")
    seed: int = Field(0, ge=0, le=MAX_SEED)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_shape(self) -> "GenParams":
        if (self.r is None) == (self.m is None):
            raise ValueError("exactly one of r and m must be given")
        if self.k > self.n:
            raise ValueError(f"k={self.k} distinct variables cannot be drawn from n={self.n}")
        return self

    @property
    def num_clauses(self) -> int:
        if self.m is not None:
            return self.m
        scaled = Decimal(str(self.r)) * self.n
        return int(scaled.to_integral_value(rounding=ROUND_HALF_UP))

    def describe(self) -> str:
        ratio = f" r={self.r:g}" if self.r is not None else ""
        return f"ustsat-gen n={self.n} m={self.num_clauses}{ratio} k={self.k} p={self.p:g} seed={self.seed}"


# Bench Schemas
class GridSpec(BaseModel):
    """A (p, r) grid of random instances solved in measure mode"""
    n: int = Field(100, ge=3)
    k: int = Field(3, ge=1)
    count_per_cell: int = Field(200, ge=1)
    p_list: List[float]
    r_lists: List[List[float]]
    master_seed: int = Field(0, ge=0, le=MAX_SEED)
    budget: int = Field(1_000_000, ge=1)
    steps: StepCount = StepCount.ASSIGNMENTS

    @field_validator("p_list")
    @classmethod
    def validate_p_list(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("p_list cannot be empty")
        for p in v:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")
        return v

    @model_validator(mode="after")
    def check_rows(self) -> "GridSpec":
        if len(self.r_lists) != len(self.p_list):
            raise ValueError("r_lists needs one ratio list per probability")
        if any(not row for row in self.r_lists):
            raise ValueError("every p row needs at least one ratio")
        if self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}")
        return self

    def cells(self) -> List[Tuple[int, int, float, float]]:
        return [
            (p_index, r_index, p, r)
            for p_index, (p, row) in enumerate(zip(self.p_list, self.r_lists))
            for r_index, r in enumerate(row)
        ]


class InstanceRecord(BaseModel):
    """Audit record of one generated and solved bench instance"""
    p: float
    r: float
    p_index: int
    r_index: int
    instance_index: int
    seed: int
    verdict: Verdict
    n_u: Optional[int] = None
    n_a: Optional[int] = None
    trail_u: Optional[int] = None
    trail_a: Optional[int] = None
    remainder_pct: Optional[float] = None
    conflicts: int = 0
    assignments: int = 0

    model_config = ConfigDict(from_attributes=True)

    def steps(self, count: StepCount) -> Tuple[Optional[int], Optional[int]]:
        if count is StepCount.TRAIL:
            return self.trail_u, self.trail_a
        return self.n_u, self.n_a


class BenchRow(BaseModel):
    """Aggregates of one (p, r) cell"""
    p: float
    r: float
    mean_gain: Optional[float] = None
    mean_gain_ratio: Optional[float] = None
    mean_remainder_pct: Optional[float] = None
    sat: int = 0
    unsat: int = 0
    indet: int = 0
    init_unipolar: int = 0
    count: int
    n: int
    seed: int
    sum_n_u: int = 0
    sum_n_a: int = 0

    @model_validator(mode="after")
    def check_tallies(self) -> "BenchRow":
        if self.sat + self.unsat + self.indet != self.count:
            raise ValueError("sat + unsat + indet must equal count")
        return self


# CLI Schemas
class CliConfig(BaseModel):
    """Fully resolved command line, echoed to the log"""
    subcommand: str
    options: Dict[str, Any]
