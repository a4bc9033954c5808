"""
Solution registry
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import structlog

from ...exceptions import InvalidParameters
from ...models.cellprobe import Memory, ProbeTranscript
from ...models.instance import SumsetAnswer, TsumInstance
from ..cellprobe import run_query
from .base import CellProbeSolution
from .hellman import build_hellman_solution
from .scan import build_scan_solution
from .sumset_table import build_sumset_table

logger = structlog.get_logger()

SolutionFactory = Callable[..., CellProbeSolution]

SOLUTIONS: Dict[str, SolutionFactory] = {
    "sumset": lambda instance, w=None, seed=0: build_sumset_table(instance, w=w, witness=True),
    "sumset-decision": lambda instance, w=None, seed=0: build_sumset_table(instance, w=w, witness=False),
    "scan": lambda instance, w=None, seed=0: build_scan_solution(instance, w=w),
    "scan-fixed": lambda instance, w=None, seed=0: build_scan_solution(instance, w=w, fixed=True),
    "hellman": lambda instance, w=None, seed=0: build_hellman_solution(instance, w=w, seed=seed),
}

# Solutions whose answers carry a witness pair
WITNESS_SOLUTIONS = ("sumset", "scan", "scan-fixed", "hellman")


def available_solutions() -> List[str]:
    return list(SOLUTIONS)


def build_solution(name: str, instance: TsumInstance, w: Optional[int] = None, seed: int = 0) -> CellProbeSolution:
    try:
        factory = SOLUTIONS[name]
    except KeyError:
        raise InvalidParameters(f"unknown solution '{name}'", available=available_solutions())
    return factory(instance, w=w, seed=seed)


@dataclass
class PreparedSolution:
    """A solution together with the memory it built for one instance"""

    solution: CellProbeSolution
    memory: Memory

    def query(self, z: int) -> Tuple[SumsetAnswer, ProbeTranscript]:
        return run_query(self.solution, self.memory, z)


def prepare(name: str, instance: TsumInstance, w: Optional[int] = None, seed: int = 0) -> PreparedSolution:
    solution = build_solution(name, instance, w=w, seed=seed)
    memory = solution.preprocess(instance)
    logger.debug("Solution prepared", solution=name, S=solution.S, w=solution.w, T=solution.T)
    return PreparedSolution(solution=solution, memory=memory)
