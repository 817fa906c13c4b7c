"""Subset generation and small helpers shared by the sweep scheduler and stores."""

import itertools
import json
import os
import random
from collections.abc import Iterator
from typing import Any

from godan_idst.config import settings
from godan_idst.core.graphs import CayleyGraph
from godan_idst.core.permutations import Permutation

SUBSET_SIZE = 4


def exhaustive_subsets(
    graph: CayleyGraph, k: int = SUBSET_SIZE
) -> Iterator[tuple[Permutation, ...]]:
    """Every k-subset in lexicographic rank order."""
    return itertools.combinations(graph.vertices(), k)


def sampled_subsets(
    graph: CayleyGraph, count: int, seed: int, k: int = SUBSET_SIZE
) -> Iterator[tuple[Permutation, ...]]:
    """``count`` independent uniform k-subsets (repeats allowed), sorted by rank."""
    vertices = graph.vertices()
    rng = random.Random(seed)
    for _ in range(count):
        yield tuple(vertices[i] for i in sorted(rng.sample(range(len(vertices)), k)))


def resolve_jobs(jobs: int | None) -> int:
    """``jobs``, else ``SWEEP.JOBS``; 0 means all available cores."""
    value = settings.SWEEP.JOBS if jobs is None else jobs
    return value if value > 0 else os.cpu_count() or 1


def json_dumps(value: Any) -> str:
    """Serialize a value to compact JSON."""
    return json.dumps(value, default=str, separators=(",", ":"), sort_keys=True)
