"""The universal cover of PSL(2,R) via lifted boundary-circle maps.

The ideal boundary is parametrized with period 1 through the direction
angle: the boundary point u corresponds to the projective direction
(cos pi*t, sin pi*t) proportional to (u, 1), with t in [0, 1).  An
element of the universal cover is a base transform together with the
value of a chosen monotone degree-one lift at 0.  Central elements are
the integer deck translations x -> x + k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moebius import (
    INFINITY,
    IsometryClass,
    MoebiusTransform,
    NotHyperbolic,
    classify,
    fixed_points,
)

SUBDIVISION_STEPS = 64
IDENTITY_BASE_TOL = 1e-8
ROUNDING_SLACK = 0.1


class NotCentral(ValueError):
    """The base transform of a would-be central element is not the
    identity."""


class AmbiguousRounding(ArithmeticError):
    """A lift offset expected to be an integer is too far from one;
    signals accumulated numerical error rather than a wrong answer."""


class BoundaryNotHyperbolic(ValueError):
    """A boundary image that must be hyperbolic is not; carries the name
    of the offending generator word."""


class RelatorViolated(ValueError):
    """Generator images fail the surface group relator."""


def boundary_to_param(u):
    """Parameter in [0, 1) of a boundary point (real or INFINITY)."""
    if u == INFINITY:
        return 0.0
    return math.acos(u / math.hypot(u, 1.0)) / math.pi


def param_to_boundary(t):
    t = t - math.floor(t)
    s = math.sin(math.pi * t)
    if abs(s) < 1e-15:
        return INFINITY
    return math.cos(math.pi * t) / s


def circle_apply(g, t):
    """Image in [0, 1) of the parameter t under the boundary action."""
    c, s = math.cos(math.pi * t), math.sin(math.pi * t)
    m = g.mat
    v1 = m[0, 0] * c + m[0, 1] * s
    v2 = m[1, 0] * c + m[1, 1] * s
    theta = math.atan2(v2, v1)
    if theta < 0:
        theta += math.pi
    if theta >= math.pi:
        theta -= math.pi
    return theta / math.pi


def lift_circle_map(g, x):
    """Value at x of the canonical lift of g's boundary action, the one
    whose value at 0 lies in [0, 1).

    The branch is tracked by continuity along SUBDIVISION_STEPS steps of
    the parameter from 0 to frac(x).  Over a parameter interval shorter
    than a full turn the (injective, increasing) image advances by less
    than a full turn, so each increment is recovered unambiguously mod 1.
    """
    base = math.floor(x)
    frac = x - base
    prev = circle_apply(g, 0.0)
    total = prev
    for i in range(1, SUBDIVISION_STEPS + 1):
        cur = circle_apply(g, frac * i / SUBDIVISION_STEPS)
        delta = (cur - prev) % 1.0
        if delta > 1.0 - 1e-9:
            delta = 0.0  # rounding noise just below a full wrap
        total += delta
        prev = cur
    return base + total


class LiftedIsometry:
    """An element of the universal cover: a base transform plus the value
    offset = lift(0) of the chosen monotone degree-one lift."""

    __slots__ = ("base", "offset")

    def __init__(self, base, offset):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "offset", float(offset))

    def __setattr__(self, name, value):
        raise AttributeError("LiftedIsometry is immutable")

    def evaluate(self, x):
        """Value of this lift at x."""
        sigma0 = circle_apply(self.base, 0.0)
        return lift_circle_map(self.base, x) + (self.offset - sigma0)

    def deck_shift(self, k):
        """The same base composed with the deck translation by k."""
        return LiftedIsometry(self.base, self.offset + k)

    def __repr__(self):
        return f"LiftedIsometry({self.base!r}, offset={self.offset:.6f})"


@dataclass(frozen=True)
class CentralElement:
    """The deck translation x -> x + k."""

    k: int


def lift_in_unit_interval(g):
    """The lift of g whose value at 0 lies in [0, 1)."""
    return LiftedIsometry(g, circle_apply(g, 0.0))


def canonical_lift(g):
    """The lift of a hyperbolic g through its one-parameter subgroup:
    the unique lift whose circle map has fixed points."""
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolic(f"canonical lift needs a hyperbolic element, "
                            f"got {classify(g).value}")
    att, rep = fixed_points(g)
    base_lift = lift_in_unit_interval(g)
    shifts = []
    for u in (att, rep):
        t = boundary_to_param(u)
        shifts.append(base_lift.evaluate(t) - t)
    k = round(shifts[0])
    if abs(shifts[0] - k) > 0.45 or abs(shifts[1] - k) > 0.45:
        raise AmbiguousRounding(
            f"fixed-point deck shifts {shifts} do not agree on an integer")
    return base_lift.deck_shift(-k)


def lifted_compose(g_lift, h_lift):
    """Composition in the universal cover: evaluate g's lift at h's lift
    of 0, tracking the branch by continuity."""
    base = g_lift.base * h_lift.base
    offset = g_lift.evaluate(h_lift.offset)
    return LiftedIsometry(base, offset)


def lifted_inverse(g_lift):
    base_inv = g_lift.base.inverse()
    sigma_inv = lift_in_unit_interval(base_inv)
    shift = -sigma_inv.evaluate(g_lift.offset)
    return LiftedIsometry(base_inv, sigma_inv.offset + shift)


def central_integer(g_lift):
    """Recognize a central element and return its deck integer."""
    dev = float(np.max(np.abs(g_lift.base.mat - np.eye(2))))
    if dev > IDENTITY_BASE_TOL:
        raise NotCentral(f"base deviates from identity by {dev:.3g}")
    k = round(g_lift.offset)
    if abs(g_lift.offset - k) >= ROUNDING_SLACK:
        raise AmbiguousRounding(
            f"offset {g_lift.offset} is not within {ROUNDING_SLACK} "
            f"of an integer")
    return int(k)


# -- Euler classes ------------------------------------------------------


def _boundary_triple(rep):
    alpha, beta = rep.alpha, rep.beta
    gamma = (alpha * beta).inverse()
    for name, g in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if classify(g) is not IsometryClass.HYPERBOLIC:
            raise BoundaryNotHyperbolic(
                f"{name} is {classify(g).value}, not Hyperbolic")
    return alpha, beta, gamma


def euler_class_pants(rep):
    """Euler class of a pants representation via canonical lifts of the
    three boundary images; always in {-1, 0, 1}.

    The value is conjugation invariant, so the triple is first recentered
    (axis of alpha moved to the imaginary axis); representations placed
    far from the origin otherwise lose too many digits in the central
    identity check.
    """
    from .moebius import Geodesic, transform_to_imaginary_axis

    alpha, beta, _ = _boundary_triple(rep)
    att, rep_pt = fixed_points(alpha)
    h = transform_to_imaginary_axis(Geodesic(rep_pt, att))
    alpha = alpha.conjugate_by(h)
    beta = beta.conjugate_by(h)
    # recompute gamma from the recentered pair: inverting the product of
    # large-entry matrices loses digits that recentering cannot recover
    gamma = (alpha * beta).inverse()
    product = lifted_compose(
        lifted_compose(canonical_lift(alpha), canonical_lift(beta)),
        canonical_lift(gamma))
    return central_integer(product)


def euler_parity_pants(rep):
    """Euler class mod 2 via the sign of the product of positive-trace
    unit-determinant lifts: 0 if the product is +Id, 1 if -Id."""
    alpha, beta, gamma = _boundary_triple(rep)

    def pos_trace(mat):
        return mat if mat[0, 0] + mat[1, 1] > 0 else -mat

    product = (pos_trace(alpha.mat) @ pos_trace(beta.mat)
               @ pos_trace(gamma.mat))
    tr = product[0, 0] + product[1, 1]
    return 0 if tr > 0 else 1


def euler_class_commutator(images, genus):
    """Euler class of a closed-surface representation given images of the
    2*genus standard generators, via the lifted product of commutators.

    The result does not depend on the choice of lift of each image:
    commutators cancel deck translations exactly.
    """
    if len(images) != 2 * genus:
        raise ValueError(f"need {2 * genus} images, got {len(images)}")
    relator = MoebiusTransform.identity()
    for i in range(genus):
        a, b = images[2 * i], images[2 * i + 1]
        relator = relator * a * b * a.inverse() * b.inverse()
    if not relator.almost_equal(MoebiusTransform.identity(), 1e-8):
        dev = float(np.max(np.abs(relator.mat - np.eye(2))))
        raise RelatorViolated(
            f"product of commutators deviates from identity by {dev:.3g}")
    total = None
    for i in range(genus):
        a = lift_in_unit_interval(images[2 * i])
        b = lift_in_unit_interval(images[2 * i + 1])
        comm = lifted_compose(
            lifted_compose(a, b),
            lifted_compose(lifted_inverse(a), lifted_inverse(b)))
        total = comm if total is None else lifted_compose(total, comm)
    return central_integer(total)
