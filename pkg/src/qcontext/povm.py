"""The Cabello and Nakamura POVM families and Born-rule statistics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bloch import (
    ATOL,
    IDENTITY2,
    BlochVector,
    dodecahedron_vertices,
    hexagon_vertices,
    is_density_operator,
    projector_from_bloch,
)

#: Letters per measurement, one row per context, for the 5x8 construction.
CABELLO_CONTEXT_LETTERS = ("ACIJ", "ADGH", "BDFJ", "BEHI", "CEFG")
#: Letters per measurement for the 3x4 construction.
NAKAMURA_CONTEXT_LETTERS = ("AB", "AC", "BC")

Context = tuple[str, ...]


@dataclass(frozen=True)
class PovmElement:
    """Weighted rank-1 POVM element: operator = weight * (I + v.sigma)/2."""

    label: str
    weight: Fraction
    direction: BlochVector

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError(f"element {self.label!r} must have positive weight")

    @property
    def operator(self) -> np.ndarray:
        return float(self.weight) * projector_from_bloch(self.direction)


@dataclass(frozen=True)
class PovmFamily:
    """A labeled element pool plus the contexts (measurements) drawing on it.

    Element identity is the label: two contexts listing "B+" reference one
    element object, which is exactly the identification the dilation audit
    probes.
    """

    name: str
    elements: dict[str, PovmElement]
    contexts: tuple[Context, ...]

    def __post_init__(self):
        for context in self.contexts:
            if len(set(context)) != len(context):
                raise ValueError(f"duplicate labels inside context {context!r}")
            for label in context:
                if label not in self.elements:
                    raise KeyError(f"missing element: context references {label!r}")

    def element_contexts(self, label: str) -> tuple[int, ...]:
        """Indices of the contexts containing the given element."""
        if label not in self.elements:
            raise KeyError(f"missing element: {label!r}")
        return tuple(i for i, c in enumerate(self.contexts) if label in c)

    def context_pairs(self, context_index: int) -> tuple[tuple[str, str], ...]:
        """Antipodal (plus, minus) label pairs of one context, in slot order.

        Contexts list elements pairwise (X+, X-, Y+, Y-, ...); this validates
        the pairing geometrically and is the slot convention shared by the
        dilation builder and the hidden-variable sampler.
        """
        if not 0 <= context_index < len(self.contexts):
            raise ValueError(f"invalid context index {context_index}")
        context = self.contexts[context_index]
        if len(context) % 2 != 0:
            raise ValueError(f"invalid context: odd element count in {context!r}")
        pairs = []
        for k in range(0, len(context), 2):
            plus, minus = context[k], context[k + 1]
            dot = self.elements[plus].direction.dot(self.elements[minus].direction)
            if abs(dot + 1.0) > ATOL:
                raise ValueError(
                    f"invalid context: {plus!r}/{minus!r} are not an antipodal pair"
                )
            pairs.append((plus, minus))
        return tuple(pairs)

    def restrict(self, context_indices: Sequence[int]) -> "PovmFamily":
        """Sub-family keeping only the selected contexts and their elements."""
        kept = tuple(self.contexts[i] for i in context_indices)
        labels = {label for context in kept for label in context}
        return PovmFamily(
            name=f"{self.name}[{','.join(str(i) for i in context_indices)}]",
            elements={l: e for l, e in self.elements.items() if l in labels},
            contexts=kept,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "elements": [
                {
                    "label": e.label,
                    "weight": float(e.weight),
                    "direction": [e.direction.x, e.direction.y, e.direction.z],
                }
                for e in self.elements.values()
            ],
            "contexts": [list(c) for c in self.contexts],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PovmFamily":
        elements = {}
        for entry in doc["elements"]:
            label = entry["label"]
            elements[label] = PovmElement(
                label=label,
                weight=Fraction(str(entry["weight"])),
                direction=BlochVector.from_array(entry["direction"]),
            )
        return cls(
            name=doc["name"],
            elements=elements,
            contexts=tuple(tuple(c) for c in doc["contexts"]),
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "PovmFamily":
        return cls.from_dict(json.loads(text))


def _build_family(name, vertex_set, weight, context_letters) -> PovmFamily:
    elements = {}
    for letter in vertex_set.labels:
        for sign in "+-":
            label = f"{letter}{sign}"
            elements[label] = PovmElement(label, weight, vertex_set.direction(label))
    contexts = tuple(
        tuple(f"{letter}{sign}" for letter in row for sign in "+-")
        for row in context_letters
    )
    return PovmFamily(name=name, elements=elements, contexts=contexts)


def cabello_family() -> PovmFamily:
    """Twenty weight-1/4 elements on the dodecahedron, five 8-element contexts.

    Context k points at the vertices of inscribed cube k, so each context sums
    to the identity and every element sits in exactly two contexts.
    """
    return _build_family(
        "cabello", dodecahedron_vertices(), Fraction(1, 4), CABELLO_CONTEXT_LETTERS
    )


def nakamura_family() -> PovmFamily:
    """Six weight-1/2 elements on the hexagon, three 4-element contexts."""
    return _build_family(
        "nakamura", hexagon_vertices(), Fraction(1, 2), NAKAMURA_CONTEXT_LETTERS
    )


def check_completeness(context: Sequence[str], family: PovmFamily) -> float:
    """Max-norm residual of (sum of element operators - I) for one context.

    A valid measurement has residual <= 1e-12. Unknown labels raise KeyError.
    """
    total = -IDENTITY2.copy()
    for label in context:
        if label not in family.elements:
            raise KeyError(f"missing element: {label!r}")
        total = total + family.elements[label].operator
    return float(np.max(np.abs(total)))


def born_probability(state: np.ndarray, element: PovmElement) -> float:
    """trace(state * element.operator) = weight * (1 + n.v)/2, in [0, weight]."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (2, 2) or not is_density_operator(state):
        raise ValueError("invalid state: expected a 2x2 density operator")
    return float(np.trace(state @ element.operator).real)
