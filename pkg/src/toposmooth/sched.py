"""Work distribution across a fixed pool of threads.

Two static partitioners are provided. `nps_assign` deals tasks in
descending cost order round-robin across workers, which caps every
bucket at ceil(|T|/|P|) tasks and bounds each bucket's load by the sum
of the m largest costs. `strided_partition` hands worker t the indices
t, t+P, t+2P, ... Phases run on a shared thread pool and return only
after every bucket finished; task bodies must write to disjoint regions,
which makes the observable result independent of worker count and of
completion order.
"""

from __future__ import annotations

import queue
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SCHEDULERS = ("nps", "strided", "system")


@dataclass(frozen=True)
class TaskAssignment:
    """A partition of task indices into one bucket per worker."""

    workers: int
    buckets: tuple

    def total(self) -> int:
        return sum(len(b) for b in self.buckets)


class TaskFailure(RuntimeError):
    """Raised when a task body raises; carries the failing task index."""

    def __init__(self, index, cause):
        super().__init__(f"task {index} failed: {cause!r}")
        self.index = index


def nps_assign(costs, workers: int) -> TaskAssignment:
    """Deal tasks to workers, heaviest first, round-robin.

    `costs` is one non-negative estimate per task. Sorting is stable and
    ties keep ascending task order, so the assignment is deterministic.
    With uniform costs this degenerates to plain strided dealing.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    costs = np.asarray(costs, dtype=np.float64)
    if costs.ndim != 1:
        raise ValueError("costs must be a flat sequence")
    if costs.size and (costs < 0).any():
        raise ValueError("costs must be non-negative")
    order = np.argsort(-costs, kind="stable")
    buckets = tuple(order[k::workers].astype(np.int64) for k in range(workers))
    return TaskAssignment(workers=workers, buckets=buckets)


def strided_partition(count: int, workers: int) -> TaskAssignment:
    """Worker t gets indices {t, t+workers, t+2*workers, ...} below count."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if count < 0:
        raise ValueError("count must be >= 0")
    buckets = tuple(np.arange(t, count, workers, dtype=np.int64) for t in range(workers))
    return TaskAssignment(workers=workers, buckets=buckets)


def validate_assignment(assignment: TaskAssignment, count: int) -> None:
    """Reject assignments that do not cover 0..count-1 exactly once."""
    seen = np.zeros(count, dtype=bool)
    total = 0
    for bucket in assignment.buckets:
        for i in np.asarray(bucket, dtype=np.int64):
            if i < 0 or i >= count:
                raise ValueError(f"task index {i} outside 0..{count - 1}")
            if seen[i]:
                raise ValueError(f"task index {i} assigned more than once")
            seen[i] = True
            total += 1
    if total != count:
        raise ValueError(f"assignment covers {total} of {count} tasks")


def worst_case_load(costs, workers: int) -> float:
    """Sum of the m largest costs, m = ceil(|T|/|P|): the per-worker load bound."""
    costs = np.asarray(costs, dtype=np.float64)
    if costs.size == 0:
        return 0.0
    m = -(-costs.size // workers)
    return float(np.sort(costs)[::-1][:m].sum())


class _PhasePool:
    """Persistent worker threads pulling from one shared queue, with a barrier.

    Lighter than a futures executor: a phase costs one queue put per group
    plus one event wait. Workers take groups dynamically, so pre-balanced
    buckets land one per worker while per-task dispatch (the "system"
    baseline) behaves like an ordinary unbalanced pool. Phases on one pool
    are serialized by a lock, so concurrent pipelines sharing a worker
    count stay correct (their phases interleave, never overlap). Task
    bodies must not dispatch nested phases.
    """

    def __init__(self, workers: int):
        self.workers = workers
        self.tasks = queue.SimpleQueue()
        self.phase_lock = threading.Lock()
        self.count_lock = threading.Lock()
        self.done = threading.Event()
        self.pending = 0
        self.failure = None
        for i in range(workers):
            t = threading.Thread(target=self._worker, daemon=True,
                                 name=f"toposmooth-{workers}-{i}")
            t.start()

    def _worker(self):
        while True:
            body, group, order = self.tasks.get()
            try:
                body(group)
            except BaseException as exc:  # re-raised from the dispatching thread
                with self.count_lock:
                    if self.failure is None or order < self.failure[0]:
                        self.failure = (order, exc)
            finally:
                with self.count_lock:
                    self.pending -= 1
                    if self.pending == 0:
                        self.done.set()

    def run(self, body, groups) -> None:
        with self.phase_lock:
            self.done.clear()
            self.failure = None
            with self.count_lock:
                self.pending = len(groups)
            for order, group in enumerate(groups):
                self.tasks.put((body, group, order))
            self.done.wait()
            if self.failure is not None:
                raise self.failure[1]


_pools: dict[int, _PhasePool] = {}
_pools_lock = threading.Lock()


def _pool(workers: int) -> _PhasePool:
    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = _PhasePool(workers)
            _pools[workers] = pool
        return pool


def run_groups(groups, body, workers: int) -> None:
    """Run body(index_array) once per group; return after all complete.

    With one worker the groups run in order on the calling thread, which
    is the exact sequential execution. Used as the barrier between
    dependent phases.
    """
    groups = [g for g in groups if len(g)]
    if workers <= 1 or len(groups) <= 1:
        for g in groups:
            body(np.asarray(g, dtype=np.int64))
        return
    _pool(workers).run(body, [np.asarray(g, dtype=np.int64) for g in groups])


@lru_cache(maxsize=64)
def _cached_groups(count: int, workers: int, scheduler: str):
    if scheduler == "nps":
        return nps_assign(np.ones(count), workers).buckets
    if scheduler == "strided":
        return strided_partition(count, workers).buckets
    if scheduler == "system":
        return tuple(np.array([i], dtype=np.int64) for i in range(count))
    raise ValueError(f"unknown scheduler {scheduler!r}; expected one of {SCHEDULERS}")


def make_groups(count: int, workers: int, scheduler: str = "nps"):
    """Index groups for a phase of `count` uniform tasks.

    "nps" and "strided" pre-balance into one bucket per worker; "system"
    emulates handing every task to the platform pool individually, with
    no balancing (the baseline the benchmark compares against). Groups are
    cached and must be treated as read-only.
    """
    return _cached_groups(int(count), int(workers), scheduler)


def run_phase(assignment: TaskAssignment, task_body) -> None:
    """Execute task_body(i) for every assigned index; barrier on completion.

    Bodies must write only to regions disjoint per index. A raising body
    aborts the phase with TaskFailure reporting the smallest failing
    index (deterministic regardless of worker interleaving).
    """
    failures = []
    failures_lock = threading.Lock()

    def run_bucket(indices):
        for i in indices:
            try:
                task_body(int(i))
            except Exception as exc:
                with failures_lock:
                    failures.append((int(i), exc))
                return

    run_groups(assignment.buckets, run_bucket, assignment.workers)
    if failures:
        index, cause = min(failures, key=lambda pair: pair[0])
        raise TaskFailure(index, cause) from cause
