"""Consumers of enumerated maximal cliques.

Every sink accepts concurrent ``emit`` calls and stores cliques in canonical
form (ascending vertex ids). ``fork``/``merge`` let a worker process fill a
private sink whose contents are folded back into the caller's sink.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

Clique = tuple[int, ...]


def canonical(vertices: Iterable[int]) -> Clique:
    return tuple(sorted(vertices))


class CliqueSink:
    """Base class. Subclasses implement ``_accept`` (called under the sink lock)."""

    def __init__(self) -> None:
        self._lock = threading.Lock()

    def emit(self, clique: Iterable[int], owner: int | None = None) -> None:
        c = canonical(clique)
        with self._lock:
            self._accept(c, owner)

    def _accept(self, clique: Clique, owner: int | None) -> None:
        raise NotImplementedError

    def fork(self) -> "CliqueSink":
        """An empty sink of the same kind, for use in a worker."""
        raise NotImplementedError

    def merge(self, other: "CliqueSink") -> None:
        raise NotImplementedError

    def __getstate__(self) -> dict:
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._lock = threading.Lock()


class CountingSink(CliqueSink):
    """Counts cliques, their size histogram and (optionally) emissions per owner subproblem."""

    def __init__(self, track_owners: bool = False) -> None:
        super().__init__()
        self.count = 0
        self.histogram: Counter[int] = Counter()
        self.track_owners = track_owners
        self.owners: Counter[int] = Counter()

    def _accept(self, clique: Clique, owner: int | None) -> None:
        self.count += 1
        self.histogram[len(clique)] += 1
        if self.track_owners and owner is not None:
            self.owners[owner] += 1

    @property
    def max_size(self) -> int:
        return max(self.histogram, default=0)

    def fork(self) -> "CountingSink":
        return CountingSink(self.track_owners)

    def merge(self, other: CliqueSink) -> None:
        assert isinstance(other, CountingSink)
        with self._lock:
            self.count += other.count
            self.histogram.update(other.histogram)
            self.owners.update(other.owners)


class CollectingSink(CliqueSink):
    """Collects cliques as a multiset so duplicate emissions can be detected."""

    def __init__(self, track_owners: bool = False) -> None:
        super().__init__()
        self.multiset: Counter[Clique] = Counter()
        self.track_owners = track_owners
        self.owner_of: dict[Clique, list[int]] = {}

    def _accept(self, clique: Clique, owner: int | None) -> None:
        self.multiset[clique] += 1
        if self.track_owners:
            self.owner_of.setdefault(clique, []).append(owner)  # type: ignore[arg-type]

    @property
    def cliques(self) -> set[Clique]:
        return set(self.multiset)

    def duplicates(self) -> dict[Clique, int]:
        return {c: k for c, k in self.multiset.items() if k > 1}

    def __len__(self) -> int:
        return sum(self.multiset.values())

    def fork(self) -> "CollectingSink":
        return CollectingSink(self.track_owners)

    def merge(self, other: CliqueSink) -> None:
        assert isinstance(other, CollectingSink)
        with self._lock:
            self.multiset.update(other.multiset)
            for c, owners in other.owner_of.items():
                self.owner_of.setdefault(c, []).extend(owners)


class CallbackSink(CliqueSink):
    """Forwards each clique to ``callback``; not usable across processes."""

    def __init__(self, callback: Callable[[Clique], None]) -> None:
        super().__init__()
        self.callback = callback

    def _accept(self, clique: Clique, owner: int | None) -> None:
        self.callback(clique)

    def fork(self) -> "CollectingSink":
        return CollectingSink()

    def merge(self, other: CliqueSink) -> None:
        assert isinstance(other, CollectingSink)
        for c, k in sorted(other.multiset.items()):
            for _ in range(k):
                self.emit(c)


@dataclass
class EnumerationStats:
    clique_count: int
    max_clique_size: int
    max_degree: int
    histogram: dict[int, int]
    wall_time: float
    per_subproblem: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if sum(self.histogram.values()) != self.clique_count:
            raise ValueError("histogram total does not match clique count")

    @classmethod
    def from_sink(cls, sink: CountingSink, max_degree: int, wall_time: float) -> "EnumerationStats":
        return cls(
            clique_count=sink.count,
            max_clique_size=sink.max_size,
            max_degree=max_degree,
            histogram=dict(sorted(sink.histogram.items())),
            wall_time=wall_time,
            per_subproblem=dict(sink.owners),
        )
