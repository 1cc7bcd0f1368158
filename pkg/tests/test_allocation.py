import random

import pytest

from clustersim.allocation import allocate_node, water_fill
from clustersim.domain import ResourceVector

from sim_helpers import water_fill_oracle


def _random_wf_input(rnd, n=None):
    n = n or rnd.randint(1, 8)
    budget = rnd.uniform(0, 30)
    weights = [rnd.uniform(0.1, 10) for _ in range(n)]
    caps = [rnd.uniform(0, 10) for _ in range(n)]
    return budget, weights, caps


class TestWaterFill:
    def test_single_proportional_round(self):
        # Expected values recomputed with the bisection oracle.
        assert water_fill(1.0, [5, 4], [3, 2]) == pytest.approx([5 / 9, 4 / 9])
        assert water_fill_oracle(1.0, [5, 4], [3, 2]) == pytest.approx(
            [5 / 9, 4 / 9], abs=1e-9)

    def test_cap_and_redistribute(self):
        assert water_fill(10.0, [1, 1], [2, 100]) == pytest.approx([2.0, 8.0])
        assert water_fill_oracle(10.0, [1, 1], [2, 100]) == pytest.approx(
            [2.0, 8.0], abs=1e-9)

    def test_zero_budget(self):
        assert water_fill(0.0, [1, 1], [5, 5]) == [0.0, 0.0]

    @pytest.mark.parametrize("budget,weights,caps", [
        (-1.0, [1], [1]),
        (1.0, [0.0], [1]),
        (1.0, [1], [-1.0]),
        (1.0, [1, 1], [1]),
    ])
    def test_invalid_input(self, budget, weights, caps):
        with pytest.raises(ValueError, match="invalid water-fill input"):
            water_fill(budget, weights, caps)

    def test_matches_oracle_on_random_inputs(self, rng):
        for _ in range(500):
            budget, weights, caps = _random_wf_input(rng)
            got = water_fill(budget, weights, caps)
            want = water_fill_oracle(budget, weights, caps)
            for g, w in zip(got, want):
                assert g == pytest.approx(w, abs=1e-6)
            assert sum(got) == pytest.approx(min(budget, sum(caps)), abs=1e-9)
            for g, c in zip(got, caps):
                assert g <= c + 1e-9

    def test_scale_invariance_of_weights(self, rng):
        for _ in range(200):
            budget, weights, caps = _random_wf_input(rng)
            k = rng.uniform(0.01, 100)
            base = water_fill(budget, weights, caps)
            scaled = water_fill(budget, [w * k for w in weights], caps)
            for a, b in zip(base, scaled):
                assert a == pytest.approx(b, abs=1e-9)

    def test_monotone_in_budget(self, rng):
        for _ in range(200):
            budget, weights, caps = _random_wf_input(rng)
            lo = water_fill(budget, weights, caps)
            hi = water_fill(budget + rng.uniform(0, 5), weights, caps)
            for a, b in zip(lo, hi):
                assert b >= a - 1e-9


def _rv(c, m=None):
    return ResourceVector(c, c if m is None else m)


class TestAllocateNodeExamples:
    CAP = _rv(10.0)

    def test_case1_demand_fits(self):
        res = allocate_node(self.CAP, [("A", _rv(5), _rv(6)),
                                       ("B", _rv(3), _rv(2))])
        assert res.allocations["A"].cpu == pytest.approx(6.0, abs=1e-6)
        assert res.allocations["B"].cpu == pytest.approx(2.0, abs=1e-6)

    def test_case2_guarantee_plus_wfs(self):
        # Guarantees 5 and 4; leftover 1 split 5:4 under caps 3 and 2.
        res = allocate_node(self.CAP, [("A", _rv(5), _rv(8)),
                                       ("B", _rv(4), _rv(6))])
        assert res.allocations["A"].cpu == pytest.approx(5 + 5 / 9, abs=1e-6)
        assert res.allocations["B"].cpu == pytest.approx(4 + 4 / 9, abs=1e-6)

    def test_case3_requests_oversubscribed(self):
        # Pass one splits 10 by weights 8:6; caps 8 and 5 not binding.
        res = allocate_node(self.CAP, [("A", _rv(8), _rv(12)),
                                       ("B", _rv(6), _rv(5))])
        assert res.allocations["A"].cpu == pytest.approx(10 * 8 / 14, abs=1e-6)
        assert res.allocations["B"].cpu == pytest.approx(10 * 6 / 14, abs=1e-6)

    def test_surplus_share_above_request(self):
        res = allocate_node(self.CAP, [("A", _rv(2), _rv(6)),
                                       ("B", _rv(3), _rv(2))])
        assert res.surplus_share["A"].cpu == pytest.approx(4.0)
        assert "B" not in res.surplus_share

    def test_degenerate_capacity(self):
        with pytest.raises(ValueError):
            allocate_node(ResourceVector(0, 1), [("A", _rv(1), _rv(1))])


def _random_node_tasks(rnd, case):
    """Random (capacity, tasks) steered into one of the three regimes."""
    cap = rnd.uniform(8, 64)
    n = rnd.randint(1, 8)
    if case == 1:
        dems = [rnd.uniform(0, cap / n) for _ in range(n)]
        reqs = [rnd.uniform(0, cap) for _ in range(n)]
    elif case == 2:
        reqs = [rnd.uniform(0, cap / n) for _ in range(n)]
        dems = [rnd.uniform(0, 2 * cap / n) for _ in range(n)]
        dems[rnd.randrange(n)] += cap   # force total demand above capacity
    else:
        reqs = [rnd.uniform(cap / n, 3 * cap / n) for _ in range(n)]
        dems = [rnd.uniform(0, 3 * cap / n) for _ in range(n)]
        reqs[rnd.randrange(n)] += cap
        dems[rnd.randrange(n)] += cap
    tasks = [(f"t{k}", _rv(reqs[k]), _rv(dems[k])) for k in range(n)]
    return ResourceVector(cap, cap), tasks


@pytest.mark.parametrize("case", [1, 2, 3])
def test_allocation_invariants_random(case):
    rnd = random.Random(1000 + case)
    for _ in range(1000):
        cap, tasks = _random_node_tasks(rnd, case)
        res = allocate_node(cap, tasks)
        total = sum(res.allocations[t[0]].cpu for t in tasks)
        total_d = sum(t[2].cpu for t in tasks)
        total_r = sum(t[1].cpu for t in tasks)
        # Conservation, with equality whenever demand saturates the node.
        assert total <= cap.cpu + 1e-9
        if total_d >= cap.cpu:
            assert total == pytest.approx(cap.cpu, abs=1e-9)
        for tid, req, dem in tasks:
            a = res.allocations[tid].cpu
            assert a <= dem.cpu + 1e-9          # never above demand
            if case == 1 or total_d <= cap.cpu:
                assert a == pytest.approx(dem.cpu, abs=1e-9)
            if total_r <= cap.cpu:              # request-backed guarantee
                assert a >= min(req.cpu, dem.cpu) - 1e-9
