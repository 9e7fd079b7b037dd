"""A small work-stealing pool for fire-and-forget recursive tasks.

Each worker owns a deque: it pushes and pops spawned tasks at the tail and,
when empty, steals from the head of another worker's deque. ``run`` returns
once every task (including tasks spawned by tasks) has finished. Tasks never
wait on each other, which is all backtracking enumeration needs.
"""

from __future__ import annotations

import random
import threading
from collections import deque
from typing import Any, Callable

Task = tuple[Callable[..., Any], tuple[Any, ...]]


class WorkStealingPool:
    def __init__(self, workers: int):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers
        self._deques: list[deque[Task]] = [deque() for _ in range(workers)]
        self._local = threading.local()
        lock = threading.Lock()
        self._cv = threading.Condition(lock)
        self._drained = threading.Condition(lock)
        self._pending = 0
        self._next = 0
        self._stopping = False
        self._error: BaseException | None = None
        self._threads: list[threading.Thread] = []
        self.steals = 0

    def spawn(self, fn: Callable[..., Any], *args: Any) -> None:
        me = getattr(self._local, "index", None)
        with self._cv:
            if me is None:
                me = self._next
                self._next = (self._next + 1) % self.workers
            self._pending += 1
            self._deques[me].append((fn, args))
            self._cv.notify()

    def run(self, fn: Callable[..., Any], *args: Any) -> None:
        """Run ``fn(*args)`` as the root task and block until the pool drains."""
        self._start()
        self.spawn(fn, *args)
        with self._cv:
            while self._pending:
                self._drained.wait()
        self._shutdown()
        if self._error is not None:
            err, self._error = self._error, None
            raise err

    def __enter__(self) -> "WorkStealingPool":
        return self

    def __exit__(self, *exc: object) -> None:
        self._shutdown()

    def _start(self) -> None:
        self._stopping = False
        self._threads = [
            threading.Thread(target=self._work, args=(i,), daemon=True, name=f"mce-worker-{i}")
            for i in range(self.workers)
        ]
        for t in self._threads:
            t.start()

    def _shutdown(self) -> None:
        with self._cv:
            self._stopping = True
            self._cv.notify_all()
        for t in self._threads:
            t.join()
        self._threads = []

    def _take(self, me: int, rng: random.Random) -> Task | None:
        try:
            return self._deques[me].pop()
        except IndexError:
            pass
        n = self.workers
        start = rng.randrange(n) if n > 1 else 0
        for k in range(n):
            victim = (start + k) % n
            if victim == me:
                continue
            try:
                task = self._deques[victim].popleft()
            except IndexError:
                continue
            self.steals += 1
            return task
        return None

    def _work(self, me: int) -> None:
        self._local.index = me
        rng = random.Random(me)
        while True:
            task = self._take(me, rng)
            if task is None:
                with self._cv:
                    # spawn appends under this lock, so a re-check here cannot miss work
                    task = self._take(me, rng)
                    if task is None:
                        if self._stopping:
                            return
                        self._cv.wait()
                        continue
            fn, args = task
            try:
                if self._error is None:
                    fn(*args)
            except BaseException as exc:  # propagated from run()
                if self._error is None:
                    self._error = exc
            finally:
                with self._cv:
                    self._pending -= 1
                    if self._pending == 0:
                        self._drained.notify_all()
