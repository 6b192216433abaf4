"""Noncontextual 0/1-colorability of element-context hypergraphs.

An assignment is valid when every context contains exactly one element valued
1. Both deciders live here: the exhaustive scan over all 2^n assignments and
the counting (parity) obstruction that explains why the two measurement
families admit none.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

#: Exhaustive-search ceiling; 2^30 is the practical desk-scale bound.
MAX_ELEMENTS = 30

_CHUNK_BITS = 18


@dataclass(frozen=True)
class ContextHypergraph:
    """Abstract element-context incidence structure."""

    elements: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate element labels")
        pool = set(self.elements)
        for context in self.contexts:
            if len(set(context)) != len(context):
                raise ValueError(f"duplicate labels inside context {context!r}")
            unknown = [label for label in context if label not in pool]
            if unknown:
                raise ValueError(f"context references unknown labels {unknown!r}")

    @classmethod
    def from_contexts(cls, contexts) -> "ContextHypergraph":
        """Build from context label lists; elements in first-appearance order."""
        seen: list[str] = []
        for context in contexts:
            for label in context:
                if label not in seen:
                    seen.append(label)
        return cls(elements=tuple(seen), contexts=tuple(tuple(c) for c in contexts))

    def incidence_count(self, label: str) -> int:
        return sum(label in context for context in self.contexts)


@dataclass(frozen=True)
class ParityObstruction:
    """Certificate that no valid assignment exists, by incidence counting.

    When every element lies in exactly ``incidence_multiplicity`` = 2 contexts
    and ``context_count`` is odd, a valid assignment would need the per-context
    ones to total an odd number while every 1-valued element contributes an
    even number of incidences.
    """

    context_count: int
    incidence_multiplicity: int

    def to_dict(self) -> dict:
        return {
            "context_count": self.context_count,
            "incidence_multiplicity": self.incidence_multiplicity,
        }


@dataclass(frozen=True)
class ColorabilityVerdict:
    colorable: bool
    valid_count: int
    total_assignments: int
    witness: dict[str, int] | None
    obstruction: ParityObstruction | None

    def to_dict(self) -> dict:
        return {
            "colorable": self.colorable,
            "valid_count": self.valid_count,
            "total_assignments": self.total_assignments,
            "witness": self.witness,
            "obstruction": self.obstruction.to_dict() if self.obstruction else None,
        }


def parity_obstruction(h: ContextHypergraph) -> ParityObstruction | None:
    """The counting obstruction, or None when it does not apply."""
    if not h.contexts or len(h.contexts) % 2 == 0:
        return None
    if any(h.incidence_count(label) != 2 for label in h.elements):
        return None
    return ParityObstruction(context_count=len(h.contexts), incidence_multiplicity=2)


def _scan_chunk(args) -> tuple[int, int | None]:
    """Count valid assignments in [start, stop); return (count, first valid or None).

    Assignments are integers whose bit (n-1-j) is the value of the j-th label
    in sorted order, so integer order is lexicographic order over assignments.
    Validity per context: the masked bits form a power of two (exactly one 1).
    """
    masks, start, stop = args
    arr = np.arange(start, stop, dtype=np.uint64)
    ok = np.ones(arr.shape, dtype=bool)
    one = np.uint64(1)
    for mask in masks:
        masked = arr & np.uint64(mask)
        ok &= (masked != 0) & ((masked & (masked - one)) == 0)
    count = int(np.count_nonzero(ok))
    first = start + int(np.argmax(ok)) if count else None
    return count, first


def enumerate_assignments(h: ContextHypergraph, workers: int = 1) -> ColorabilityVerdict:
    """Exhaustively scan all 2^n assignments of the hypergraph.

    The scan shards the assignment space into fixed chunks; counts merge
    additively and the reported witness is the lexicographically smallest over
    element labels in sorted order, so the result does not depend on the
    worker count. Raises ValueError above the MAX_ELEMENTS ceiling.
    """
    n = len(h.elements)
    if n > MAX_ELEMENTS:
        raise ValueError(f"size limit: {n} elements exceeds the 2^{MAX_ELEMENTS} bound")

    order = sorted(h.elements)
    bit = {label: n - 1 - j for j, label in enumerate(order)}
    masks = tuple(sum(1 << bit[label] for label in context) for context in h.contexts)

    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)
    tasks = [(masks, start, min(start + chunk, total)) for start in range(0, total, chunk)]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk, tasks))
    else:
        results = [_scan_chunk(task) for task in tasks]

    valid_count = sum(count for count, _ in results)
    first = next((f for _, f in results if f is not None), None)
    witness = None
    if first is not None:
        witness = {label: (first >> bit[label]) & 1 for label in order}

    return ColorabilityVerdict(
        colorable=valid_count > 0,
        valid_count=valid_count,
        total_assignments=total,
        witness=witness,
        obstruction=parity_obstruction(h),
    )


def parse_hypergraph(text: str) -> ContextHypergraph:
    """Parse the one-context-per-line text format.

    Labels are comma-separated; blank lines and lines starting with '#' are
    skipped.
    """
    contexts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        labels = [part.strip() for part in stripped.split(",")]
        if any(not label for label in labels):
            raise ValueError(f"line {lineno}: empty label in context line {line!r}")
        contexts.append(tuple(labels))
    return ContextHypergraph.from_contexts(contexts)
