"""
Tests for the growth state and its weight index.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from core.exceptions import NumericalError
from networks.models import GrowthState, ModelParams, ModifiedDegreeTree
from networks.services import SimulationService
from networks.tests.factories import ModelParamsFactory


class TestModifiedDegreeTree:
    """Test the Fenwick tree over attachment weights."""

    @given(st.lists(st.integers(min_value=0, max_value=10), min_size=1, max_size=40))
    def test_prefix_sums(self, weights):
        tree = ModifiedDegreeTree(len(weights))
        for index, weight in enumerate(weights):
            tree.set(index, weight)
        cumulative = np.cumsum(weights)
        assert tree.total == cumulative[-1]
        for count in range(1, len(weights) + 1):
            assert tree.prefix_sum(count) == cumulative[count - 1]

    @given(st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=25))
    def test_find_inverts_prefix_sums(self, weights):
        tree = ModifiedDegreeTree(len(weights))
        for index, weight in enumerate(weights):
            tree.set(index, weight)
        cumulative = np.cumsum(weights)
        for target in range(tree.total):
            expected = int(np.searchsorted(cumulative, target, side='right'))
            assert tree.find(target) == expected

    def test_update_changes_total(self):
        tree = ModifiedDegreeTree(4)
        tree.set(2, 5)
        tree.add(2, 3)
        tree.set(0, 1)
        assert tree.weight(2) == 8
        assert tree.total == 9


class TestGrowthState:
    """Test GrowthState bookkeeping."""

    def test_two_node_chain(self):
        state = GrowthState.two_node_chain(ModelParamsFactory(), capacity=10)
        assert state.degrees.tolist() == [1, 1]
        assert state.edge_count == 1
        assert state.total_weight == 4
        assert state.check_consistency()

    def test_isolated_nodes_weigh_l(self):
        state = GrowthState.isolated_nodes(ModelParamsFactory(starting_degree=0), capacity=10, count=3)
        assert state.degrees.tolist() == [0, 0, 0]
        assert state.total_weight == 6

    def test_weight_follows_modified_degree(self):
        params = ModelParamsFactory(lower_bound=2, upper_bound=4)
        state = GrowthState(params, capacity=2)
        node = state.add_node()
        weights = []
        for _ in range(6):
            state.increment_degree(node)
            weights.append(state.tree.weight(node))
        assert weights == [2, 2, 3, 4, 4, 4]

    def test_capacity(self):
        state = GrowthState(ModelParamsFactory(), capacity=1)
        state.add_node()
        with pytest.raises(NumericalError):
            state.add_node()

    def test_effective_gamma(self):
        state = GrowthState.two_node_chain(ModelParamsFactory(), capacity=4)
        assert state.effective_gamma == 2.0

    def test_consistency_detects_corruption(self):
        state = GrowthState.two_node_chain(ModelParamsFactory(), capacity=4)
        state.tree.add(0, 1)
        with pytest.raises(NumericalError, match='recomputed'):
            state.check_consistency()


class TestAttachmentSampling:
    """Test target selection frequencies."""

    def _frequencies(self, state, draws=100_000, seed=7):
        rng = np.random.default_rng(seed)
        hits = np.zeros(state.node_count)
        for _ in range(draws):
            hits[SimulationService.sample_attachment_target(state, rng)] += 1
        return hits / draws

    def test_equal_weights(self):
        state = GrowthState.isolated_nodes(ModelParamsFactory(), capacity=2, count=2)
        frequencies = self._frequencies(state)
        assert frequencies[0] == pytest.approx(0.5, abs=0.01)

    def test_weight_ratio(self):
        params = ModelParams(lower_bound=1, lower_threshold=1, upper_threshold=10, upper_bound=10)
        state = GrowthState(params, capacity=2)
        state.add_node(degree=1)
        state.add_node(degree=3)
        frequencies = self._frequencies(state)
        assert frequencies[1] == pytest.approx(0.75, abs=0.01)

    def test_single_node(self):
        state = GrowthState.isolated_nodes(ModelParamsFactory(), capacity=1, count=1)
        assert self._frequencies(state, draws=100)[0] == 1.0

    def test_distinct_targets_restore_weights(self):
        state = GrowthState.isolated_nodes(ModelParamsFactory(), capacity=5, count=5)
        uniforms = iter([0.1, 0.1, 0.1])
        targets = state.sample_distinct_targets(3, uniforms.__next__)
        assert len(set(targets)) == 3
        assert state.total_weight == 10

    def test_distinct_targets_clamped_to_node_count(self):
        state = GrowthState.isolated_nodes(ModelParamsFactory(), capacity=2, count=2)
        uniforms = iter([0.3, 0.3, 0.3])
        assert sorted(state.sample_distinct_targets(3, uniforms.__next__)) == [0, 1]
