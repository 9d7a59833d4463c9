"""
Growing network state for the attachment simulator.

A GrowthState keeps every node's degree together with a Fenwick tree over
the nodes' modified degrees, so that drawing an attachment target and
updating a weight both take O(log n).
"""

import logging
from typing import Callable, List

import numpy as np

from core.exceptions import NumericalError
from networks.models.params import ModelParams

logger = logging.getLogger(__name__)


class ModifiedDegreeTree:
    """
    Fenwick (binary indexed) tree over nonnegative integer weights.

    Slots are 0-based for callers; the tree array is 1-based internally.
    """

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self._tree: List[int] = [0] * (self.capacity + 1)
        self._weights: List[int] = [0] * self.capacity
        self._total = 0
        self._top_bit = 1 << (self.capacity.bit_length() - 1) if self.capacity else 0

    @property
    def total(self) -> int:
        return self._total

    def weight(self, index: int) -> int:
        return self._weights[index]

    def add(self, index: int, delta: int):
        if not delta:
            return
        self._weights[index] += delta
        self._total += delta
        tree = self._tree
        position = index + 1
        size = self.capacity
        while position <= size:
            tree[position] += delta
            position += position & -position

    def set(self, index: int, weight: int):
        self.add(index, weight - self._weights[index])

    def prefix_sum(self, count: int) -> int:
        """Sum of the first `count` slots."""
        tree = self._tree
        total = 0
        position = count
        while position > 0:
            total += tree[position]
            position -= position & -position
        return total

    def find(self, target: int) -> int:
        """Smallest slot i with prefix_sum(i + 1) > target, for 0 ≤ target < total."""
        tree = self._tree
        size = self.capacity
        position = 0
        remaining = target
        mask = self._top_bit
        while mask:
            candidate = position + mask
            if candidate <= size and tree[candidate] <= remaining:
                position = candidate
                remaining -= tree[candidate]
            mask >>= 1
        return position


class GrowthState:
    """
    Degrees and attachment weights of a network under construction.

    Invariants:
        - total_weight equals Σ modified_degree(degree) over all nodes
        - no degree ever decreases
    """

    def __init__(self, params: ModelParams, capacity: int):
        self.params = params
        self.capacity = int(capacity)
        self.tree = ModifiedDegreeTree(self.capacity)
        self._degrees: List[int] = []
        self.edge_count = 0

    # Construction

    @classmethod
    def two_node_chain(cls, params: ModelParams, capacity: int) -> 'GrowthState':
        """The initial network: two nodes joined by one edge."""
        state = cls(params, capacity)
        first = state.add_node()
        second = state.add_node()
        state.connect(second, [first])
        return state

    @classmethod
    def isolated_nodes(cls, params: ModelParams, capacity: int, count: int) -> 'GrowthState':
        """`count` degree-0 nodes, each with attachment weight L."""
        state = cls(params, capacity)
        for _ in range(count):
            state.add_node()
        return state

    # Properties

    @property
    def node_count(self) -> int:
        return len(self._degrees)

    @property
    def total_weight(self) -> int:
        """S_n, the normalizer of the attachment probabilities."""
        return self.tree.total

    @property
    def degrees(self) -> np.ndarray:
        return np.asarray(self._degrees, dtype=np.int64)

    @property
    def effective_gamma(self) -> float:
        """S_n / n, the mean attachment weight per node."""
        if not self._degrees:
            return 0.0
        return self.total_weight / self.node_count

    def degree(self, index: int) -> int:
        return self._degrees[index]

    # Mutation

    def add_node(self, degree: int = 0) -> int:
        if self.node_count >= self.capacity:
            raise NumericalError(f"growth state is full ({self.capacity} nodes)")
        index = self.node_count
        self._degrees.append(degree)
        self.tree.set(index, self.params.modified_degree(degree))
        return index

    def increment_degree(self, index: int):
        """Add one to a node's degree and re-derive its weight."""
        old = self._degrees[index]
        new = old + 1
        self._degrees[index] = new
        delta = self.params.modified_degree(new) - self.params.modified_degree(old)
        if delta:
            self.tree.add(index, delta)

    def connect(self, newcomer: int, targets: List[int]):
        for target in targets:
            self.increment_degree(target)
            self.increment_degree(newcomer)
            self.edge_count += 1

    def sample_target(self, uniform: float) -> int:
        """Node i with probability k̂ᵢ / S_n, driven by one U[0, 1) draw."""
        total = self.tree.total
        if total <= 0:
            raise NumericalError("total attachment weight is zero")
        target = int(uniform * total)
        if target >= total:
            target = total - 1
        return self.tree.find(target)

    def sample_distinct_targets(self, count: int, next_uniform: Callable[[], float]) -> List[int]:
        """
        Draw `count` distinct nodes proportionally to weight.

        A chosen node's weight is zeroed until the draw completes, then
        restored. `count` is clamped to the current node count.
        """
        count = min(count, self.node_count)
        chosen: List[int] = []
        held: List[int] = []
        for _ in range(count):
            if self.tree.total <= 0:
                break
            index = self.sample_target(next_uniform())
            chosen.append(index)
            weight = self.tree.weight(index)
            held.append(weight)
            self.tree.add(index, -weight)
        for index, weight in zip(chosen, held):
            self.tree.add(index, weight)
        return chosen

    # Checks

    def check_consistency(self):
        """Recompute S_n and the degree sum from scratch; raise on mismatch."""
        expected = sum(self.params.modified_degree(d) for d in self._degrees)
        if expected != self.tree.total:
            raise NumericalError(
                f"weight index total {self.tree.total} != recomputed S_n {expected}"
            )
        if sum(self._degrees) != 2 * self.edge_count:
            raise NumericalError(
                f"degree sum {sum(self._degrees)} != 2 × edges ({self.edge_count})"
            )
        return True
