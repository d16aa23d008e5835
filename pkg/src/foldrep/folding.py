"""Folding a Fuchsian pants assembly into non-Fuchsian holonomies.

Each pants carries a label in {-1, 0, +1}: +1 keeps the geometric
representation, -1 reflects it (orientation-reversing conjugation), and
0 replaces it by the nongeometric representation with the same boundary
lengths.  Regluing with the same frame convention as the Fuchsian
assembly fixes the per-cuff translation freedom; any other choice
differs by twists along the cuffs.  The Euler class of the result is the
sum of the labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .pants import fold_pants, geometric_pants_rep, orientation_flip
from .surface import (
    FNCoordinates,
    _slot_matrix,
    assemble_core,
    naive_slot_frame,
    pants_boundary_lengths,
    seam_slot_frame,
    validate_decomposition,
)


class ExtremalClass(ValueError):
    """The requested Euler class belongs to the Fuchsian locus (or is
    outside the Milnor-Wood range) and cannot be realized by a fold."""


class BadLabel(ValueError):
    pass


@dataclass(frozen=True)
class Labeling:
    """A label in {-1, 0, +1} for every pants of a decomposition."""

    labels: dict

    def __post_init__(self):
        for p, v in self.labels.items():
            if v not in (-1, 0, 1):
                raise BadLabel(f"pants {p} has label {v}, not in "
                               f"{{-1, 0, 1}}")

    def label(self, p):
        if p not in self.labels:
            raise BadLabel(f"pants {p} has no label")
        return self.labels[p]

    def total(self):
        return sum(self.labels.values())

    def to_json(self):
        data = {"labels": {str(p): self.labels[p]
                           for p in sorted(self.labels)}}
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls({int(p): int(v) for p, v in data["labels"].items()})


@dataclass(frozen=True)
class Coloring:
    """A sign per plate of a pleated surface; adjacent plates of equal
    sign meet with bending angle 0, of opposite sign with angle pi."""

    signs: dict = field(default_factory=dict)

    def __post_init__(self):
        for plate, v in self.signs.items():
            if v not in (-1, 1):
                raise BadLabel(f"plate {plate} has sign {v}, not in "
                               f"{{-1, 1}}")


def bending_angle(c1, c2):
    """Bending angle between two colored plates: 0 for equal signs,
    pi for opposite signs."""
    for v in (c1, c2):
        if v not in (-1, 1):
            raise BadLabel(f"plate color {v} not in {{-1, 1}}")
    return (1 - c1 * c2) / 2 * math.pi


def prescribe_labeling(pd, k):
    """A labeling summing to k with at least one pants labeled 0.

    Requires |k| <= 2*genus - 3: the extremal classes +-(2*genus - 2)
    are exactly the Fuchsian ones and cannot be obtained by a fold that
    leaves a pants unlabeled by +-1.
    """
    genus = validate_decomposition(pd)
    if abs(k) >= 2 * genus - 2:
        raise ExtremalClass(
            f"|k| = {abs(k)} >= 2*genus - 2 = {2 * genus - 2}; only "
            f"non-extremal classes are realized by foldings")
    sign = 1 if k >= 0 else -1
    labels = {p: (sign if p < abs(k) else 0)
              for p in range(pd.num_pants)}
    return Labeling(labels)


def local_fold_rep(lengths, label):
    """The per-pants representation realizing one label."""
    tau = geometric_pants_rep(lengths)
    if label == 1:
        return tau
    if label == -1:
        return orientation_flip(tau)
    return fold_pants(tau)


def fold_surface(pd, fn, labels):
    """The Fuchsian assembly j and its folding rho along the labeling.

    rho is assembled from the per-pants label representations with the
    same gluing convention as j, so the two agree on every pants labeled
    +1 and have equal cuff lengths everywhere; the Euler class of rho is
    the sum of the labels.
    """
    if not isinstance(labels, Labeling):
        labels = Labeling(dict(labels))
    for p in range(pd.num_pants):
        labels.label(p)  # raises BadLabel on a missing pants

    local_j = [geometric_pants_rep(pants_boundary_lengths(pd, fn, p))
               for p in range(pd.num_pants)]
    local_rho = [local_fold_rep(pants_boundary_lengths(pd, fn, p),
                                labels.label(p))
                 for p in range(pd.num_pants)]

    # Folded and reflected pants lack the seam normalization (their
    # boundary axes need not be disjoint), but their normal forms are
    # mutually aligned with the geometric one in the naive axis frames;
    # carry over the geometric pants' seam correction so both sides of
    # every cuff use the same twist origin.
    frames = {}
    for p in range(pd.num_pants):
        if labels.label(p) == 1:
            continue  # identical local rep: the default seam frame applies
        for s in range(3):
            tau_slot = _slot_matrix(local_j[p], s)
            correction = (seam_slot_frame(local_j[p], s)
                          * naive_slot_frame(tau_slot).inverse())
            frames[(p, s)] = correction * naive_slot_frame(
                _slot_matrix(local_rho[p], s))

    def rebuild_j(fn2):
        return fold_surface(pd, fn2, labels)[0]

    def rebuild_rho(fn2):
        return fold_surface(pd, fn2, labels)[1]

    j = assemble_core(pd, fn, local_j, rebuild=rebuild_j)
    rho = assemble_core(pd, fn, local_rho, frames=frames,
                        rebuild=rebuild_rho)
    return j, rho
