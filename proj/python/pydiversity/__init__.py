"""Exact diversity measures on finite pseudometric spaces.

Distances go in as anything ``fractions.Fraction`` accepts (ints, Fractions,
"p/q" strings) and come back as Fractions.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from . import _pydiversity as _core
from ._pydiversity import DepthLimitExceeded, InputError

__all__ = [
    "DepthLimitExceeded",
    "InputError",
    "Score",
    "audit",
    "average_orbits",
    "edge_orbits",
    "load_distance_csv",
    "phylo_diversity",
    "score",
    "equidistance_demo",
    "validate",
    "worked_examples",
]


class Score:
    __slots__ = ("value", "exact", "notes")

    def __init__(self, value: Fraction, exact: bool, notes: list[str]):
        self.value = value
        self.exact = exact
        self.notes = notes

    def __repr__(self) -> str:
        return f"Score({self.value}, exact={self.exact})"


def _cell(x) -> str:
    if isinstance(x, float):
        # shortest decimal repr; the core flags it inexact
        return repr(x)
    return str(Fraction(x))


def _rows(matrix: Sequence[Sequence]) -> list[list[str]]:
    return [[_cell(x) for x in row] for row in matrix]


def _labels(matrix: Sequence[Sequence], labels: Sequence[str] | None) -> list[str]:
    return list(labels) if labels is not None else [f"s{i + 1}" for i in range(len(matrix))]


def _fraction(pair) -> Fraction:
    num, den = pair
    return Fraction(int(num), int(den))


def score(matrix, measure: str = "d-merging", subset: Iterable[str] = (), labels=None) -> Score:
    """Score `subset` (all points when empty) of a full distance matrix."""
    has_float = any(isinstance(x, float) for row in matrix for x in row)
    value, exact, notes = _core.score(_labels(matrix, labels), _rows(matrix), measure, list(subset), has_float)
    return Score(_fraction(value), exact, list(notes))


def phylo_diversity(edges: Iterable[tuple[str, str, object]], subset: Iterable[str]) -> Fraction:
    """Weight of the smallest subtree connecting `subset`; edges are (u, v, weight)."""
    return _fraction(_core.phylo([(u, v, _cell(w)) for u, v, w in edges], list(subset)))


def validate(matrix, labels=None) -> list[tuple[str, tuple[int, ...], Fraction]]:
    """Pseudometric violations as (kind, witness indices, slack); empty when valid."""
    return [
        (kind, tuple(witness), Fraction(slack))
        for kind, witness, slack in _core.validate(_labels(matrix, labels), _rows(matrix))
    ]


def load_distance_csv(path, allow_float: bool = False) -> tuple[list[str], list[list[Fraction]]]:
    labels, rows = _core.load_distance_csv(str(path), allow_float)
    return list(labels), [[Fraction(x) for x in row] for row in rows]


def _graph_args(weighted, labeled):
    return [(u, v, _cell(w)) for u, v, w in weighted], [(u, v, str(label)) for u, v, label in labeled]


def edge_orbits(n: int, weighted, labeled) -> tuple[int, list[list[str]]]:
    """(automorphism count, orbits of labelled edges by label)."""
    group, orbits = _core.edge_orbits(n, *_graph_args(weighted, labeled))
    return group, [list(o) for o in orbits]


def average_orbits(matrix, weighted, labeled, labels=None) -> list[list[Fraction]]:
    rows = _core.average_orbits(_labels(matrix, labels), _rows(matrix), *_graph_args(weighted, labeled))
    return [[Fraction(x) for x in row] for row in rows]


def equidistance_demo(measure: str = "d-merging", max_k: int = 200) -> dict:
    return json.loads(_core.equidistance_demo(measure, max_k))


def audit(
    measure: str = "d-merging",
    axioms: str = "all",
    instances: int = 200,
    seed: int = 1,
    n_values: Sequence[int] = (3, 4, 5),
    continuity: bool = False,
) -> dict:
    """Run the axiom audit and return the JSON report as a dict."""
    return json.loads(_core.audit(measure, axioms, instances, seed, list(n_values), continuity))


def worked_examples(fixture_dir) -> list[dict]:
    return json.loads(_core.worked_examples(str(fixture_dir)))
