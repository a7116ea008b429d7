import numpy as np
import pytest

from toposmooth import (
    TaskAssignment,
    TaskFailure,
    edt_bruteforce,
    edt_phase1_columns,
    nps_assign,
    run_phase,
    strided_partition,
    validate_assignment,
    worst_case_load,
)

from conftest import random_image


def bucket_loads(costs, assignment):
    return [sum(costs[i] for i in bucket) for bucket in assignment.buckets]


class TestNpsAssign:
    def test_dealt_example(self):
        costs = [5, 4, 3, 2, 1]
        a = nps_assign(costs, 2)
        assert [list(b) for b in a.buckets] == [[0, 2, 4], [1, 3]]
        loads = bucket_loads(costs, a)
        assert loads == [9, 6]
        # tight dealt bound: the heaviest bucket takes sorted ranks 0, P, 2P
        assert max(loads) <= 5 + 3 + 1
        # formal bound: sum of the m largest costs
        assert max(loads) <= worst_case_load(costs, 2) == 12

    def test_uniform_tasks_balance_exactly(self):
        a = nps_assign(np.ones(8), 4)
        assert sorted(len(b) for b in a.buckets) == [2, 2, 2, 2]

    def test_empty_task_set(self):
        a = nps_assign([], 3)
        assert all(len(b) == 0 for b in a.buckets)

    def test_zero_workers_rejected(self):
        with pytest.raises(ValueError):
            nps_assign([1.0], 0)

    def test_negative_costs_rejected(self):
        with pytest.raises(ValueError):
            nps_assign([1.0, -2.0], 2)

    def test_deterministic_on_ties(self):
        a = nps_assign([3, 3, 3, 3], 2)
        b = nps_assign([3, 3, 3, 3], 2)
        assert all(np.array_equal(x, y) for x, y in zip(a.buckets, b.buckets))
        assert [list(x) for x in a.buckets] == [[0, 2], [1, 3]]

    def test_partition_cap_and_bound_random(self, rng):
        for _ in range(150):
            n = int(rng.integers(0, 1001))
            workers = int(rng.integers(1, 65))
            costs = rng.uniform(0, 100, n)
            a = nps_assign(costs, workers)
            validate_assignment(a, n)
            cap = -(-n // workers)
            assert all(len(b) <= cap for b in a.buckets)
            if n:
                assert max(bucket_loads(costs, a)) <= worst_case_load(costs, workers) + 1e-9


class TestStridedPartition:
    def test_stride_pattern(self):
        a = strided_partition(5, 2)
        assert [list(b) for b in a.buckets] == [[0, 2, 4], [1, 3]]

    def test_more_workers_than_tasks(self):
        a = strided_partition(3, 8)
        sizes = [len(b) for b in a.buckets]
        assert sizes == [1, 1, 1, 0, 0, 0, 0, 0]

    def test_empty(self):
        a = strided_partition(0, 4)
        assert a.total() == 0

    def test_zero_workers_rejected(self):
        with pytest.raises(ValueError):
            strided_partition(4, 0)

    def test_balanced_within_one(self, rng):
        for _ in range(100):
            n = int(rng.integers(0, 1000))
            workers = int(rng.integers(1, 65))
            a = strided_partition(n, workers)
            validate_assignment(a, n)
            sizes = [len(b) for b in a.buckets]
            assert max(sizes) - min(sizes) <= 1


class TestValidateAssignment:
    def test_accepts_exact_cover(self):
        validate_assignment(TaskAssignment(2, (np.array([0, 2]), np.array([1]))), 3)

    def test_rejects_missing(self):
        with pytest.raises(ValueError):
            validate_assignment(TaskAssignment(1, (np.array([0, 1]),)), 3)

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError):
            validate_assignment(TaskAssignment(2, (np.array([0, 1]), np.array([1, 2]))), 3)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            validate_assignment(TaskAssignment(1, (np.array([0, 3]),)), 3)


class TestRunPhase:
    @pytest.mark.parametrize("workers", [1, 2, 4])
    def test_disjoint_writes_match_sequential(self, workers):
        out = np.zeros(100, np.int64)

        def body(i):
            out[i] = i * i

        run_phase(nps_assign(np.ones(100), workers), body)
        assert np.array_equal(out, np.arange(100, dtype=np.int64) ** 2)

    def test_failing_task_reports_smallest_index(self):
        # 6 fails in the even bucket, 3 in the odd bucket; the smaller
        # index must be reported regardless of completion order
        def body(i):
            if i in (6, 3):
                raise RuntimeError("boom")

        with pytest.raises(TaskFailure) as info:
            run_phase(strided_partition(10, 2), body)
        assert info.value.index == 3

    def test_phase1_through_run_phase_matches_direct(self, rng):
        img = random_image(rng, 20, 15, 0.3)
        a = strided_partition(15, 3)
        grid = edt_phase1_columns(img, a)
        direct = edt_phase1_columns(img, strided_partition(15, 1))
        assert np.array_equal(grid, direct)
        # and the full transform agrees with the definitional oracle
        from toposmooth import edt_phase2_rows

        out = edt_phase2_rows(grid, strided_partition(20, 2))
        assert np.array_equal(out, edt_bruteforce(img))
