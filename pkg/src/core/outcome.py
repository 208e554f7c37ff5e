from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class Outcome:
    """
    Result of a solve, closure or oracle call.

    cost is None for NoTour; edges holds input-graph edge ids of the tour.
    """
    cost: Optional[int] = None
    edges: Tuple[int, ...] = ()

    @property
    def found(self) -> bool:
        return self.cost is not None

    @classmethod
    def no_tour(cls) -> "Outcome":
        return cls()

    @classmethod
    def tour(cls, cost: int, edges) -> "Outcome":
        return cls(cost=cost, edges=tuple(sorted(edges)))

    def better_than(self, other: "Outcome") -> bool:
        if not self.found:
            return False
        if not other.found:
            return True
        return (self.cost, self.edges) < (other.cost, other.edges)

    def describe(self) -> str:
        return f"cost {self.cost}" if self.found else "no tour"
