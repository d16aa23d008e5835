"""Representations of the pair-of-pants group with prescribed boundary
lengths: construction in normal form, classification, folding and
unfolding, abelianization.

The fundamental group is <alpha, beta, gamma | alpha beta gamma = 1>;
we store the images of alpha and beta and derive gamma = (alpha beta)^-1.
With (A, B, C) = (e^{a/2}, e^{b/2}, e^{c/2}) and a sign epsilon, the
normal form puts alpha = diag(A, 1/A) and beta = [[B+x, y], [z, 1/B-x]]
where x is pinned by the trace of gamma; representations with the same
boundary lengths are classified by epsilon and, on the degenerate locus
where one length is the sum of the other two, by which of y, z vanish.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .moebius import (
    Geodesic,
    IsometryClass,
    MoebiusTransform,
    classify,
    fixed_points,
    translation_length,
    transform_to_imaginary_axis,
)
from .univcover import BoundaryNotHyperbolic, euler_class_pants

DEGENERATE_TOL = 1e-9
COMMUTE_TOL = 1e-9
SHARED_FIXED_POINT_TOL = 1e-8


class NonPositiveLength(ValueError):
    pass


class InvalidBranch(ValueError):
    """A degenerate branch was requested off the degenerate locus, or the
    generic branch on it (where (nu-1, 1) collapses to a triangular
    form)."""


class NotGeometric(ValueError):
    pass


class AlreadyGeometric(ValueError):
    pass


class NotElementary(ValueError):
    pass


class PantsBranch(Enum):
    GENERIC = "Generic"
    UPPER = "Upper"
    LOWER = "Lower"
    DIAGONAL = "Diagonal"


class PantsClass(Enum):
    GEOMETRIC = "Geometric"
    NONGEOMETRIC_NONABELIAN_A = "NongeometricNonabelianA"
    NONGEOMETRIC_NONABELIAN_B = "NongeometricNonabelianB"
    ABELIAN = "Abelian"
    NONGEOMETRIC_GENERIC = "NongeometricGeneric"


@dataclass(frozen=True)
class BoundaryLengths:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name, v in (("a", self.a), ("b", self.b), ("c", self.c)):
            if not v > 0:
                raise NonPositiveLength(f"boundary length {name} = {v}")

    def as_tuple(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class PantsNormalForm:
    A: float
    B: float
    C: float
    epsilon: int
    x: float
    nu: float
    branch: PantsBranch

    def agrees_with(self, other, tol=1e-8):
        return (self.epsilon == other.epsilon
                and self.branch is other.branch
                and abs(self.A - other.A) <= tol
                and abs(self.B - other.B) <= tol
                and abs(self.C - other.C) <= tol)


class PantsRep:
    """Images of the two free generators; gamma is derived."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta):
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __setattr__(self, name, value):
        raise AttributeError("PantsRep is immutable")

    @property
    def gamma(self):
        return (self.alpha * self.beta).inverse()

    def conjugate_by(self, h):
        return PantsRep(self.alpha.conjugate_by(h), self.beta.conjugate_by(h))

    def to_json(self):
        return ('{"alpha": %s, "beta": %s}'
                % (self.alpha.to_json(), self.beta.to_json()))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls(MoebiusTransform.from_json(data["alpha"]),
                   MoebiusTransform.from_json(data["beta"]))


def _normal_form_x_nu(A, B, C, epsilon):
    x = (epsilon * (C + 1.0 / C) - A * B - 1.0 / (A * B)) / (A - 1.0 / A)
    nu = (B + x) * (1.0 / B - x)
    return x, nu


def build_pants_rep(lengths, epsilon, branch=PantsBranch.GENERIC):
    """The normal-form representation with the given boundary lengths,
    sign epsilon, and branch.

    Degenerate branches (Upper/Lower/Diagonal) exist only when epsilon is
    +1 and one boundary length is the sum of the other two; there the
    generic branch collapses and is rejected.
    """
    if not isinstance(lengths, BoundaryLengths):
        lengths = BoundaryLengths(*lengths)
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    A = math.exp(lengths.a / 2.0)
    B = math.exp(lengths.b / 2.0)
    C = math.exp(lengths.c / 2.0)
    x, nu = _normal_form_x_nu(A, B, C, epsilon)
    degenerate = abs(nu - 1.0) < DEGENERATE_TOL
    if branch is PantsBranch.GENERIC:
        if degenerate:
            raise InvalidBranch(
                "boundary lengths lie on the degenerate locus (one is the "
                "sum of the other two with epsilon = +1); the generic pair "
                "(nu-1, 1) collapses to a triangular form. Request an "
                "explicit Upper, Lower, or Diagonal branch.")
        y, z = nu - 1.0, 1.0
    else:
        if epsilon != 1 or not degenerate:
            raise InvalidBranch(
                f"branch {branch.value} requires epsilon = +1 and one "
                f"boundary length equal to the sum of the other two "
                f"(got nu - 1 = {nu - 1.0:.3g})")
        y, z = {
            PantsBranch.UPPER: (1.0, 0.0),
            PantsBranch.LOWER: (0.0, 1.0),
            PantsBranch.DIAGONAL: (0.0, 0.0),
        }[branch]
    alpha = MoebiusTransform(A, 0.0, 0.0, 1.0 / A)
    beta = MoebiusTransform(B + x, y, z, 1.0 / B - x)
    return PantsRep(alpha, beta)


def boundary_lengths(rep):
    """(translation length of alpha, of beta, of alpha*beta)."""
    values = []
    for name, g in (("alpha", rep.alpha), ("beta", rep.beta),
                    ("gamma", rep.gamma)):
        if classify(g) is not IsometryClass.HYPERBOLIC:
            raise BoundaryNotHyperbolic(
                f"{name} is {classify(g).value}, not Hyperbolic")
        values.append(translation_length(g))
    return BoundaryLengths(*values)


def normal_form(rep):
    """Conjugate into the normal form and report its invariants.

    Two representations are conjugate in PGL(2,R) exactly when their
    normal forms agree in (A, B, C, epsilon, branch).
    """
    lengths = boundary_lengths(rep)  # also checks hyperbolicity
    att, repel = fixed_points(rep.alpha)
    h = transform_to_imaginary_axis(Geodesic(repel, att))
    alpha = rep.alpha.conjugate_by(h)
    beta = rep.beta.conjugate_by(h)
    A = math.exp(lengths.a / 2.0)
    B = math.exp(lengths.b / 2.0)
    C = math.exp(lengths.c / 2.0)
    # both conjugated matrices have positive trace, so the raw product
    # trace determines the sign of the product of positive-trace lifts
    product_trace = float((alpha.mat @ beta.mat).trace())
    epsilon = 1 if product_trace > 0 else -1
    x = beta.mat[0, 0] - B
    nu = (B + x) * (1.0 / B - x)
    q, r = abs(beta.mat[0, 1]), abs(beta.mat[1, 0])
    if abs(nu - 1.0) >= DEGENERATE_TOL:
        branch = PantsBranch.GENERIC
    else:
        total = q + r
        if total < DEGENERATE_TOL:
            branch = PantsBranch.DIAGONAL
        elif r <= 1e-9 * total:
            branch = PantsBranch.UPPER
        elif q <= 1e-9 * total:
            branch = PantsBranch.LOWER
        else:
            raise InvalidBranch(
                "degenerate representation with both off-diagonal entries "
                "significant; cannot resolve the triangular branch "
                f"(|y| = {q:.3g}, |z| = {r:.3g})")
    return PantsNormalForm(A=A, B=B, C=C, epsilon=epsilon, x=x, nu=nu,
                           branch=branch)


def classify_pants_rep(rep):
    eu = euler_class_pants(rep)
    if eu != 0:
        return PantsClass.GEOMETRIC
    comm = (rep.alpha * rep.beta * rep.alpha.inverse()
            * rep.beta.inverse())
    if comm.almost_equal(MoebiusTransform.identity(), COMMUTE_TOL):
        return PantsClass.ABELIAN
    nf = normal_form(rep)
    if nf.branch is PantsBranch.UPPER:
        return PantsClass.NONGEOMETRIC_NONABELIAN_A
    if nf.branch is PantsBranch.LOWER:
        return PantsClass.NONGEOMETRIC_NONABELIAN_B
    return PantsClass.NONGEOMETRIC_GENERIC


def _on_degenerate_locus(lengths):
    A = math.exp(lengths.a / 2.0)
    B = math.exp(lengths.b / 2.0)
    C = math.exp(lengths.c / 2.0)
    _, nu = _normal_form_x_nu(A, B, C, +1)
    return abs(nu - 1.0) < DEGENERATE_TOL


def fold_pants(rep):
    """The nongeometric representation with the same boundary lengths."""
    if classify_pants_rep(rep) is not PantsClass.GEOMETRIC:
        raise NotGeometric("fold requires a geometric representation")
    lengths = boundary_lengths(rep)
    if _on_degenerate_locus(lengths):
        return build_pants_rep(lengths, +1, PantsBranch.UPPER)
    return build_pants_rep(lengths, +1, PantsBranch.GENERIC)


def unfold_pants(rep):
    """The geometric representation with the same boundary lengths."""
    if classify_pants_rep(rep) is PantsClass.GEOMETRIC:
        raise AlreadyGeometric("representation is already geometric")
    lengths = boundary_lengths(rep)
    return build_pants_rep(lengths, -1, PantsBranch.GENERIC)


def orientation_flip(rep):
    """Conjugate by the orientation-reversing reflection z -> -conj(z).

    The conjugated images are again in PSL(2,R); the Euler class changes
    sign.
    """

    def flip(g):
        m = g.mat
        return MoebiusTransform(m[0, 0], -m[0, 1], -m[1, 0], m[1, 1])

    return PantsRep(flip(rep.alpha), flip(rep.beta))


_GEOMETRIC_SIGN = None


def geometric_pants_rep(lengths):
    """The geometric representation normalized to Euler class +1.

    The sign of the normal-form build is a single global constant
    (the Euler class is locally constant on the connected parameter
    space), probed once and cached.
    """
    global _GEOMETRIC_SIGN
    rep = build_pants_rep(lengths, -1)
    if _GEOMETRIC_SIGN is None:
        _GEOMETRIC_SIGN = euler_class_pants(build_pants_rep((1.0, 1.0, 1.0),
                                                            -1))
    if _GEOMETRIC_SIGN == -1:
        rep = orientation_flip(rep)
    return rep


def _shared_boundary_fixed_point(rep):
    from .univcover import boundary_to_param, circle_apply

    candidates = []
    for g in (rep.alpha, rep.beta):
        if classify(g) is IsometryClass.HYPERBOLIC:
            candidates.extend(fixed_points(g))
    for u in candidates:
        t = boundary_to_param(u)
        ok = True
        for g in (rep.alpha, rep.beta):
            img = circle_apply(g, t)
            dist = abs(img - t) % 1.0
            dist = min(dist, 1.0 - dist)
            if dist > SHARED_FIXED_POINT_TOL:
                ok = False
                break
        if ok:
            return u
    raise NotElementary("alpha and beta share no boundary fixed point")


def abelianize(rep):
    """Project an elementary representation to its diagonal part.

    Conjugates the shared boundary fixed point to infinity (the preserved
    line becomes the imaginary axis), factors each image as a diagonal
    times an upper unipotent, and keeps the diagonal factors.
    """
    from .moebius import INFINITY

    xi = _shared_boundary_fixed_point(rep)
    if xi == INFINITY:
        h = MoebiusTransform.identity()
    else:
        h = MoebiusTransform(0.0, -1.0, 1.0, -xi)

    def diagonal_part(g):
        m = g.conjugate_by(h).mat
        return MoebiusTransform(m[0, 0], 0.0, 0.0, m[1, 1])

    return PantsRep(diagonal_part(rep.alpha), diagonal_part(rep.beta))
