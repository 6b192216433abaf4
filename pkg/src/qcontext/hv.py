"""Noncontextual hidden-variable model for the dilated measurements.

A sample carries a discrete ancilla value (which antipodal pair fires) and a
uniform Bloch-sphere vector m driving the sphere-model outcome rule: projector
V along v takes value 1 exactly when (m + n).v > 0 for system direction n.
Monte Carlo aggregation checks the model against Born-rule statistics.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bloch import BlochVector, state_from_bloch
from .povm import PovmFamily, born_probability

#: Fixed Monte Carlo shard size; substreams derive from (seed, shard index)
#: alone, so reports are identical for any worker count.
SHARD_SIZE = 1 << 17

_VALID_SLOT_COUNTS = (2, 4)


@dataclass(frozen=True)
class HiddenVariable:
    """One sample: ancilla value lam in {0..N-1} plus sphere vector m."""

    lam: int
    m: BlochVector


def _unit_sphere(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform points on the unit sphere via normalized Gaussian triples."""
    points = rng.standard_normal((size, 3))
    norms = np.linalg.norm(points, axis=1, keepdims=True)
    # A zero Gaussian triple has probability zero but would divide by zero.
    norms[norms == 0] = 1.0
    return points / norms


def sample_hidden_variable(n_slots: int, rng: np.random.Generator) -> HiddenVariable:
    """Draw lam uniform over {0..n_slots-1} and m uniform on the sphere."""
    if n_slots not in _VALID_SLOT_COUNTS:
        raise ValueError(f"invalid slot count {n_slots}: expected one of {_VALID_SLOT_COUNTS}")
    lam = int(rng.integers(0, n_slots))
    m = _unit_sphere(rng, 1)[0]
    return HiddenVariable(lam=lam, m=BlochVector.from_array(m))


def bell_outcome(m: BlochVector, n: BlochVector, v: BlochVector) -> int:
    """Sphere-model value of the projector along v: 1 iff (m + n).v > 0.

    The measure-zero boundary (m + n).v = 0 returns 0; callers that track
    boundary incidence test the sign themselves.
    """
    s = (m.x + n.x) * v.x + (m.y + n.y) * v.y + (m.z + n.z) * v.z
    return 1 if s > 0 else 0


def _shard_plan(samples: int) -> list[int]:
    counts = []
    remaining = samples
    while remaining > 0:
        counts.append(min(SHARD_SIZE, remaining))
        remaining -= SHARD_SIZE
    return counts


def _shard_rng(seed: int, shard_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(shard_index,)))


def _marginal_shard(args) -> int:
    n_arr, v_arr, seed, shard_index, count = args
    rng = _shard_rng(seed, shard_index)
    m = _unit_sphere(rng, count)
    return int(np.count_nonzero((m + n_arr) @ v_arr > 0))


def bell_marginal_estimate(
    n: BlochVector, v: BlochVector, samples: int, seed: int, workers: int = 1
) -> float:
    """Monte Carlo estimate of P(outcome = 1); converges to (1 + n.v)/2."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tasks = [
        (n.as_array(), v.as_array(), seed, k, count)
        for k, count in enumerate(_shard_plan(samples))
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(_marginal_shard, tasks))
    else:
        hits = sum(_marginal_shard(task) for task in tasks)
    return hits / samples


def _povm_shard(args) -> tuple[np.ndarray, int]:
    plus_dirs, n_arr, n_slots, seed, shard_index, count = args
    rng = _shard_rng(seed, shard_index)
    lams = rng.integers(0, n_slots, size=count)
    m = _unit_sphere(rng, count)
    signed = np.einsum("ij,ij->i", m + n_arr, plus_dirs[lams])
    # Outcome 1 picks the "+" element of the slot pair; the boundary counts as 0.
    element_index = 2 * lams + (signed <= 0)
    counts = np.bincount(element_index, minlength=2 * n_slots)
    return counts, int(np.count_nonzero(signed == 0))


@dataclass(frozen=True)
class SimulationReport:
    """Aggregated outcome statistics for one context against Born values."""

    family: str
    context_index: int
    state: tuple[float, float, float]
    samples: int
    seed: int
    labels: tuple[str, ...]
    counts: tuple[int, ...]
    frequencies: tuple[float, ...]
    born: tuple[float, ...]
    z_scores: tuple[float, ...]
    boundary_count: int

    def frequencies_sum_to_one(self) -> bool:
        """Exact rational check that the per-element frequencies total 1."""
        return sum(Fraction(c, self.samples) for c in self.counts) == 1

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "context": self.context_index + 1,
            "state": list(self.state),
            "samples": self.samples,
            "seed": self.seed,
            "boundary_count": self.boundary_count,
            "rows": [
                {
                    "label": label,
                    "count": count,
                    "frequency": freq,
                    "born": born,
                    "zscore": z,
                }
                for label, count, freq, born, z in zip(
                    self.labels, self.counts, self.frequencies, self.born, self.z_scores
                )
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        lines = ["label,count,frequency,born,zscore"]
        for label, count, freq, born, z in zip(
            self.labels, self.counts, self.frequencies, self.born, self.z_scores
        ):
            lines.append(f"{label},{count},{freq!r},{born!r},{z!r}")
        return "\n".join(lines) + "\n"


def _z_score(freq: float, p: float, samples: int) -> float:
    if 0.0 < p < 1.0:
        return (freq - p) * math.sqrt(samples / (p * (1.0 - p)))
    return 0.0 if freq == p else math.inf


def simulate_povm(
    family: PovmFamily,
    context_index: int,
    n: BlochVector,
    samples: int,
    seed: int,
    workers: int = 1,
) -> SimulationReport:
    """Sample the two-stage model for one context and compare with Born values.

    Each sample draws a hidden variable for the context's pair count; the
    ancilla value selects the slot pair and the sphere rule on that pair's "+"
    direction selects the sign. Counts merge over fixed-size shards, making
    the report deterministic in (inputs, seed) for any worker count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pairs = family.context_pairs(context_index)
    n_slots = len(pairs)
    if n_slots not in _VALID_SLOT_COUNTS:
        raise ValueError(f"invalid context: {n_slots} pairs, expected one of {_VALID_SLOT_COUNTS}")

    plus_dirs = np.array([family.elements[plus].direction.as_array() for plus, _ in pairs])
    tasks = [
        (plus_dirs, n.as_array(), n_slots, seed, k, count)
        for k, count in enumerate(_shard_plan(samples))
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_povm_shard, tasks))
    else:
        results = [_povm_shard(task) for task in tasks]

    counts = np.zeros(2 * n_slots, dtype=np.int64)
    boundary = 0
    for shard_counts, shard_boundary in results:
        counts += shard_counts
        boundary += shard_boundary

    labels = family.contexts[context_index]
    state = state_from_bloch(n)
    born = tuple(born_probability(state, family.elements[label]) for label in labels)
    frequencies = tuple(int(c) / samples for c in counts)
    z_scores = tuple(
        _z_score(freq, p, samples) for freq, p in zip(frequencies, born)
    )

    return SimulationReport(
        family=family.name,
        context_index=context_index,
        state=(n.x, n.y, n.z),
        samples=samples,
        seed=seed,
        labels=tuple(labels),
        counts=tuple(int(c) for c in counts),
        frequencies=frequencies,
        born=born,
        z_scores=z_scores,
        boundary_count=boundary,
    )


def noncontextual_value_map(
    hv: HiddenVariable, family: PovmFamily, n: BlochVector
) -> tuple[dict[str, int], ...]:
    """Product value assignment over every context's extended outcomes.

    The ancilla value marks one slot per context and the sphere rule on that
    slot's pair picks the sign, so each context receives exactly one outcome
    valued 1 from a single hidden-variable sample.
    """
    assignments = []
    for context_index in range(len(family.contexts)):
        pairs = family.context_pairs(context_index)
        if not 0 <= hv.lam < len(pairs):
            raise ValueError(
                f"hidden variable lam={hv.lam} out of range for {len(pairs)} pairs"
            )
        plus, minus = pairs[hv.lam]
        outcome = bell_outcome(hv.m, n, family.elements[plus].direction)
        assignment = {label: 0 for label in family.contexts[context_index]}
        assignment[plus if outcome == 1 else minus] = 1
        assignments.append(assignment)
    return tuple(assignments)
