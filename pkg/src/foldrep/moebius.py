"""Isometries of the hyperbolic plane as normalized 2x2 real matrices.

Everything lives in the upper half-plane model.  An isometry is a unit
determinant matrix up to sign; we pick a canonical sign so that equality
tests are meaningful.  The ideal boundary is the real line plus a single
tagged point at infinity (never a large float).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

DET_TOL = 1e-12
TRACE_ZERO_TOL = 1e-12
PARABOLIC_BAND = 1e-9
IDENTITY_TOL = 1e-9

INFINITY = float("inf")


class NotHyperbolic(ValueError):
    """Raised when an axis or canonical lift is requested for a
    non-hyperbolic element."""


class IsometryClass(Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


def _normalize(mat):
    mat = np.asarray(mat, dtype=float).reshape(2, 2)
    # the determinant of a near-unit matrix suffers heavy cancellation in
    # double precision when entries are large; extended precision keeps
    # the renormalized trace accurate to ~1e-12 relative
    ext = mat.astype(np.longdouble)
    det = ext[0, 0] * ext[1, 1] - ext[0, 1] * ext[1, 0]
    # For near-unit matrices with large entries, the measured determinant
    # is dominated by cancellation noise from entry rounding; rescaling by
    # it would corrupt the (well-conditioned) trace.  Only rescale when
    # the deviation exceeds that noise floor (below it the sign of the
    # measured value is meaningless too).
    scale = float(np.max(np.abs(mat)))
    noise = 64.0 * 2.3e-16 * max(1.0, scale * scale)
    if abs(float(det) - 1.0) > noise:
        if not det > 0:
            raise ValueError(f"matrix determinant {det} is not positive")
        ext = ext / np.sqrt(det)
    mat = ext.astype(float)
    tr = mat[0, 0] + mat[1, 1]
    if tr < -TRACE_ZERO_TOL:
        mat = -mat
    elif abs(tr) <= TRACE_ZERO_TOL:
        # trace-zero tie-break: first nonzero entry among (a, b, c) positive
        for entry in (mat[0, 0], mat[0, 1], mat[1, 0]):
            if entry != 0.0:
                if entry < 0:
                    mat = -mat
                break
    return mat


class MoebiusTransform:
    """An element of PSL(2,R), stored sign-normalized with det = 1.

    Immutable.  Acts on the upper half-plane by z -> (az+b)/(cz+d).
    """

    __slots__ = ("mat",)

    def __init__(self, a, b, c, d):
        mat = _normalize([[a, b], [c, d]])
        object.__setattr__(self, "mat", mat)
        mat.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusTransform is immutable")

    @classmethod
    def from_matrix(cls, mat):
        mat = np.asarray(mat, dtype=float)
        return cls(mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diagonal(cls, lam):
        """diag(lam, 1/lam) for lam > 0: translation along the imaginary
        axis by 2*log(lam)."""
        if lam <= 0:
            raise ValueError("diagonal entry must be positive")
        return cls(lam, 0.0, 0.0, 1.0 / lam)

    @classmethod
    def axis_translation(cls, length):
        """Translation by `length` along the imaginary axis, toward
        infinity for positive length."""
        return cls.diagonal(math.exp(length / 2.0))

    @property
    def a(self):
        return self.mat[0, 0]

    @property
    def b(self):
        return self.mat[0, 1]

    @property
    def c(self):
        return self.mat[1, 0]

    @property
    def d(self):
        return self.mat[1, 1]

    def trace(self):
        return self.mat[0, 0] + self.mat[1, 1]

    def inverse(self):
        return MoebiusTransform(self.mat[1, 1], -self.mat[0, 1],
                                -self.mat[1, 0], self.mat[0, 0])

    def __mul__(self, other):
        if not isinstance(other, MoebiusTransform):
            return NotImplemented
        return MoebiusTransform.from_matrix(self.mat @ other.mat)

    def conjugate_by(self, h):
        """h * self * h^-1."""
        return h * self * h.inverse()

    def almost_equal(self, other, tol=1e-9):
        """Entrywise comparison, scaled by the magnitude of the entries."""
        scale = max(1.0, float(np.max(np.abs(self.mat))),
                    float(np.max(np.abs(other.mat))))
        return bool(np.max(np.abs(self.mat - other.mat)) <= tol * scale)

    def __repr__(self):
        a, b = self.mat[0]
        c, d = self.mat[1]
        return f"MoebiusTransform([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"

    # -- boundary action ------------------------------------------------

    def boundary_apply(self, u):
        """Image of the ideal boundary point u (a real or INFINITY)."""
        a, b = self.mat[0]
        c, d = self.mat[1]
        if u == INFINITY:
            if abs(c) < 1e-300:
                return INFINITY
            return a / c
        denom = c * u + d
        if abs(denom) < 1e-300:
            return INFINITY
        return (a * u + b) / denom

    def to_json_dict(self):
        a, b = self.mat[0]
        c, d = self.mat[1]
        return {"m": [a, b, c, d]}

    def to_json(self):
        a, b = self.mat[0]
        c, d = self.mat[1]
        vals = ", ".join(format(v, ".17g") for v in (a, b, c, d))
        return '{"m": [%s]}' % vals

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        a, b, c, d = data["m"]
        return cls(a, b, c, d)


@dataclass(frozen=True)
class HPoint:
    """A point of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"HPoint requires y > 0, got y = {self.y}")

    def as_complex(self):
        return complex(self.x, self.y)


class Geodesic:
    """Unoriented complete geodesic, named by its two ideal endpoints.

    Endpoints are reals or INFINITY.  Equality ignores endpoint order.
    """

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        if p == q:
            raise ValueError("geodesic endpoints must be distinct")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("Geodesic is immutable")

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return {self.p, self.q} == {other.p, other.q}

    def __hash__(self):
        return hash(frozenset((self.p, self.q)))

    def __repr__(self):
        return f"Geodesic({self.p}, {self.q})"


# -- operations ---------------------------------------------------------


def compose(g, h):
    return g * h


def inverse(g):
    return g.inverse()


def classify(g):
    """Classify by the absolute trace of the unit-determinant lift.

    A band of width PARABOLIC_BAND around |trace| = 2 snaps to Parabolic
    so that nearly-unipotent elements do not acquire spurious tiny
    translation lengths.
    """
    if np.max(np.abs(g.mat - np.eye(2))) <= IDENTITY_TOL:
        return IsometryClass.IDENTITY
    tr = abs(g.trace())
    if abs(tr - 2.0) < PARABOLIC_BAND:
        return IsometryClass.PARABOLIC
    if tr > 2.0:
        return IsometryClass.HYPERBOLIC
    return IsometryClass.ELLIPTIC


def translation_length(g):
    """inf_x d(x, g.x): 2*arccosh(|tr|/2) for hyperbolic g, else 0."""
    if classify(g) is not IsometryClass.HYPERBOLIC:
        return 0.0
    return 2.0 * math.acosh(abs(g.trace()) / 2.0)


def trace_translation_length(tr):
    """Translation length from an absolute trace alone, with the same
    parabolic snapping band as classify().

    The trace of a long product can be computed far more accurately than
    the product's entries, so length computations should prefer this to
    translation_length on a fully multiplied-out matrix.
    """
    t = abs(tr)
    if t <= 2.0 + PARABOLIC_BAND:
        return 0.0
    return 2.0 * math.acosh(t / 2.0)


def fixed_points(g):
    """Ideal fixed points of a hyperbolic g as (attracting, repelling)."""
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolic(f"element is {classify(g).value}, not Hyperbolic")
    a, b = g.mat[0]
    c, d = g.mat[1]
    tr = a + d  # > 2 after sign normalization
    disc = math.sqrt(tr * tr - 4.0)
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-15 * scale:
        # fixes infinity; the finite fixed point solves (d - a) z = b
        finite = b / (d - a)
        if a > d:
            return INFINITY, finite
        return finite, INFINITY
    # roots of c z^2 + (d - a) z - b = 0; the eigenvalue at the fixed
    # point ((a - d) +- disc)/(2c) is (tr +- disc)/2, so "+" is attracting
    return (a - d + disc) / (2.0 * c), (a - d - disc) / (2.0 * c)


def axis(g):
    """The invariant geodesic of a hyperbolic element."""
    att, rep = fixed_points(g)
    return Geodesic(att, rep)


def apply(g, p):
    z = p.as_complex()
    a, b = g.mat[0]
    c, d = g.mat[1]
    w = (a * z + b) / (c * z + d)
    return HPoint(w.real, w.imag)


def distance(p, q):
    dx = p.x - q.x
    dy = p.y - q.y
    arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y)
    # guard against arg dipping below 1 by rounding
    return math.acosh(max(arg, 1.0))


def transform_to_imaginary_axis(geo):
    """A MoebiusTransform taking geo.p -> 0 and geo.q -> infinity."""
    u, v = geo.p, geo.q
    if u == INFINITY:
        return MoebiusTransform(0.0, 1.0, -1.0, v)
    if v == INFINITY:
        return MoebiusTransform(1.0, -u, 0.0, 1.0)
    if u > v:
        return MoebiusTransform(1.0, -u, 1.0, -v)
    return MoebiusTransform(-1.0, u, 1.0, -v)


def distance_to_geodesic(p, geo):
    """Distance from p to the geodesic, computed by mapping the geodesic
    to the imaginary axis, where sinh(dist) = |x| / y."""
    h = transform_to_imaginary_axis(geo)
    q = apply(h, p)
    return math.asinh(abs(q.x) / q.y)
