import logging
import random
from dataclasses import dataclass

from src.core.errors import GeneratorError
from src.generators.cages import cage
from src.generators.hc_family import hc_rich_family
from src.generators.random_cubic import random_cubic
from src.graph.multigraph import WeightedMultigraph

logger = logging.getLogger(__name__)

KINDS = ("random", "cage", "hc")
COST_POLICIES = ("unit", "uniform")


@dataclass(frozen=True)
class CostPolicy:
    kind: str = "unit"
    lo: int = 1
    hi: int = 100

    def __post_init__(self):
        if self.kind not in COST_POLICIES:
            raise GeneratorError(f"unknown cost policy {self.kind!r}, expected one of {COST_POLICIES}")
        if self.kind == "uniform" and not 0 <= self.lo <= self.hi:
            raise GeneratorError(f"uniform costs need 0 <= lo <= hi, got {self.lo}..{self.hi}")

    def apply(self, graph: WeightedMultigraph, seed: int) -> WeightedMultigraph:
        if self.kind == "unit":
            for edge in graph.edges.values():
                edge.cost = 1
            return graph
        # separate stream so the costs do not disturb the topology draw
        rng = random.Random(f"{seed}:costs")
        for edge_id in sorted(graph.edges):
            graph.edges[edge_id].cost = rng.randint(self.lo, self.hi)
        return graph


@dataclass(frozen=True)
class GeneratorSpec:
    """One instance request: kind with its size (n, or girth for cages), seed and costs."""
    kind: str
    size: int
    seed: int = 0
    costs: CostPolicy = CostPolicy()

    @property
    def label(self) -> str:
        if self.kind == "cage":
            return f"cage-g{self.size}"
        if self.kind == "hc":
            return f"hc-n{self.size}"
        return f"random-n{self.size}-s{self.seed}"

    def build(self) -> WeightedMultigraph:
        if self.kind == "random":
            graph = random_cubic(self.size, self.seed)
        elif self.kind == "cage":
            graph = cage(self.size)
        elif self.kind == "hc":
            graph = hc_rich_family(self.size)
        else:
            raise GeneratorError(f"unknown generator kind {self.kind!r}, expected one of {KINDS}")
        return self.costs.apply(graph, self.seed)
