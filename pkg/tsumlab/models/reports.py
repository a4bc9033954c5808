"""
Report models emitted by experiments and checks

Every report serializes big integers as decimal strings. Models with a
``csv_columns`` class variable can also be written as CSV rows, in exactly
that column order.
"""

from typing import ClassVar, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from .cellprobe import SolutionInfo
from .group import BigInt
from .instance import TsumInstance


class Report(BaseModel):
    """Base class for reports"""

    csv_columns: ClassVar[Tuple[str, ...]] = ()

    schema_version: int = 1

    def csv_row(self) -> Dict[str, object]:
        data = self.model_dump(mode="json")
        return {column: data.get(column) for column in self.csv_columns}


# Verification
class ViolationRecord(BaseModel):
    z: BigInt
    expected: bool
    got: bool
    reason: str


class VerifyReport(Report):
    group: str
    n: int
    solution: SolutionInfo
    queries_checked: int = 0
    violations: List[ViolationRecord] = Field(default_factory=list)
    max_probes: int = 0
    mean_probes: float = 0.0
    conjectures: Dict[str, str] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


class BenchRow(Report):
    csv_columns: ClassVar[Tuple[str, ...]] = (
        "solution", "group", "n", "instances", "S", "w", "T",
        "mean_probes", "max_probes", "violations", "seconds",
    )

    solution: str
    group: str
    n: int
    instances: int
    S: int
    w: int
    T: int
    mean_probes: float
    max_probes: int
    violations: int
    seconds: Optional[float] = None


# Butterfly reduction
class ButterflyViolation(BaseModel):
    s: int
    t: int
    has_witness: bool
    reachable: bool


class ButterflyEquivalenceReport(Report):
    B: int
    d: int
    mode: str
    n: int
    group_order: BigInt
    order_ratio: float
    queries_checked: int = 0
    violations: List[ButterflyViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class ButterflyAnalysis(Report):
    S: int
    w: int
    n: int
    B: float
    B_at_least_w_squared: bool
    depth_estimate: Optional[float] = None
    lower_bound_value: Optional[float] = None
    formula: str = "T = Omega(log n / log(S w / n))"


# Set disjointness reduction
class LsdDecision(Report):
    disjoint: bool
    direct_disjoint: bool
    answers: List[bool] = Field(default_factory=list)
    witness_group_violations: List[int] = Field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.disjoint == self.direct_disjoint and not self.witness_group_violations


class CommRound(BaseModel):
    step: int
    cells: int
    alice_bits: int
    bob_bits: int


class CommStats(Report):
    csv_columns: ClassVar[Tuple[str, ...]] = (
        "solution", "N", "B", "ell", "queries", "S", "w", "rounds",
        "alice_bits", "bob_bits", "reference_alice_bits", "verdict_disjoint", "consistent",
    )

    solution: str
    N: int
    B: int
    ell: int
    queries: int
    S: int
    w: int
    rounds: int = 0
    alice_bits: int = Field(default=0, ge=0)
    bob_bits: int = Field(default=0, ge=0)
    per_round: List[CommRound] = Field(default_factory=list)
    reference_alice_bits: float = 0.0
    verdict_disjoint: bool = True
    consistent: bool = True


# Adversarial distribution
class EntropyReport(Report):
    q_size: int
    realizations: int
    entropy_bits: float
    full_entropy: bool
    flagged: List[str] = Field(default_factory=list)


class IndependenceReport(Report):
    q_size: int
    realizations: int
    marginals: List[str] = Field(default_factory=list)
    uniform: bool
    independent: bool


# Bit-probe audit
class GirthReport(Report):
    nodes: int
    edges: int
    average_degree: float
    analytic_max_girth: Optional[int] = None
    measured_girth: Optional[int] = None
    consistent: bool = True


class RefutationVerdict(Report):
    kind: str
    queries: List[BigInt] = Field(default_factory=list)
    nodes: List[int] = Field(default_factory=list)
    rare_output: Optional[int] = None
    parity: Optional[int] = None
    n_param: int = 0


class RefutationOutcome(Report):
    status: str
    verdict: str
    Q: List[BigInt] = Field(default_factory=list)
    P: Optional[List[BigInt]] = None
    pattern: Optional[List[int]] = None
    instance: Optional[TsumInstance] = None
    query: Optional[BigInt] = None
    expected: Optional[bool] = None
    got: Optional[bool] = None
    patterns_total: int = 0
    patterns_achievable: int = 0

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"


# One-way function experiments
class OwfExperimentReport(Report):
    csv_columns: ClassVar[Tuple[str, ...]] = (
        "adversary", "N", "S", "w", "T", "success", "dtt_line", "hellman_line",
        "success_low", "success_high", "exact_success", "trials",
        "mean_advice_probes", "mean_oracle_calls", "group", "seed", "schema_version",
    )

    adversary: str
    N: int
    group: str
    seed: int
    S: int
    w: int
    T: int
    T_advice: int
    T_oracle: int
    trials: int
    successes: int
    success: float
    success_low: float
    success_high: float
    exact_success: Optional[str] = None
    dtt_line: float
    hellman_line: float
    mean_advice_probes: float
    mean_oracle_calls: float
    false_inversions: int = 0


# Encoded query lists written next to reduced instances
class EncodedQuery(BaseModel):
    label: str
    z: BigInt


class QueryList(Report):
    reduction: str
    group: str
    queries: List[EncodedQuery] = Field(default_factory=list)


# Command-level bundles
class AdversaryAudit(Report):
    entropy: EntropyReport
    independence: IndependenceReport

    @property
    def ok(self) -> bool:
        return self.entropy.full_entropy and self.independence.uniform and not self.entropy.flagged


class BitprobeAudit(Report):
    cells: int
    queries: int
    girth: Optional[GirthReport] = None
    verdict: RefutationVerdict
    outcome: Optional[RefutationOutcome] = None

    @property
    def ok(self) -> bool:
        """False when a refutation witness failed to refute"""
        if self.outcome is None or self.verdict.kind == "NotRefuted":
            return True
        return self.outcome.refuted
