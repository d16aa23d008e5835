"""Pants decompositions, Fenchel-Nielsen assembly, and surface
representations.

A decomposition is a multigraph: nodes are pairs of pants, each with
three boundary slots, and cuffs are a perfect matching on slots.  The
holonomy is assembled as a graph of groups: a spanning tree fixes the
frames of the pants, and each non-tree cuff contributes an HNN letter.

Gluing convention: the frame of a boundary slot moves its holonomy axis
to the imaginary axis with attracting fixed point at infinity.  Across a
cuff the two boundary traversals are opposite, realized by z -> -1/z,
and the twist is a diagonal translation along the shared axis.  Any
other frame choice differs by a translation along the axis, i.e. by a
twist reparametrization, so the assembled class sweeps the full
Fenchel-Nielsen family.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .moebius import (
    INFINITY,
    PARABOLIC_BAND,
    Geodesic,
    IsometryClass,
    MoebiusTransform,
    classify,
    fixed_points,
    trace_translation_length,
    transform_to_imaginary_axis,
)
from .pants import PantsRep, geometric_pants_rep
from .univcover import (
    BoundaryNotHyperbolic,
    RelatorViolated,
    euler_class_pants,
)
from .words import free_reduce, word_to_string

RELATION_TOL = 1e-8

HALF_TURN = MoebiusTransform(0.0, -1.0, 1.0, 0.0)  # z -> -1/z


class UnmatchedSlot(ValueError):
    pass


class Disconnected(ValueError):
    pass


class BadCount(ValueError):
    pass


class BadIndex(ValueError):
    pass


class NotHyperbolicCuff(ValueError):
    pass


@dataclass(frozen=True)
class PantsDecomposition:
    """num_pants three-holed spheres; cuffs match the 3*num_pants slots
    in pairs.  A slot is (pants index, slot index in {0,1,2})."""

    num_pants: int
    cuffs: tuple

    @classmethod
    def from_cuff_list(cls, num_pants, cuffs):
        cuffs = tuple(
            (tuple(side_a), tuple(side_b)) for side_a, side_b in cuffs)
        return cls(num_pants, cuffs)

    def slots_of_pants(self, p):
        """cuff index owning each of the three slots of pants p."""
        owner = [None, None, None]
        for c, (sa, sb) in enumerate(self.cuffs):
            for (q, s) in (sa, sb):
                if q == p:
                    owner[s] = c
        return owner


def validate_decomposition(pd):
    """Check the matching, counts and connectivity; return the genus."""
    n = pd.num_pants
    if n < 2 or n % 2 != 0:
        raise BadCount(f"{n} pants cannot close up to a surface of "
                       f"genus >= 2")
    genus = n // 2 + 1
    if len(pd.cuffs) != 3 * genus - 3:
        raise BadCount(f"expected {3 * genus - 3} cuffs for genus {genus}, "
                       f"got {len(pd.cuffs)}")
    seen = {}
    for c, (sa, sb) in enumerate(pd.cuffs):
        for (p, s) in (sa, sb):
            if not (0 <= p < n and 0 <= s < 3):
                raise UnmatchedSlot(f"slot ({p}, {s}) out of range")
            if (p, s) in seen:
                raise UnmatchedSlot(f"slot ({p}, {s}) matched twice")
            seen[(p, s)] = c
    if len(seen) != 3 * n:
        missing = [(p, s) for p in range(n) for s in range(3)
                   if (p, s) not in seen]
        raise UnmatchedSlot(f"unmatched slots: {missing}")
    # connectivity of the adjacency multigraph
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (pa, _), (pb, _) in pd.cuffs:
        parent[find(pa)] = find(pb)
    if len({find(i) for i in range(n)}) != 1:
        raise Disconnected("adjacency multigraph is not connected")
    return genus


@dataclass(frozen=True)
class FNCoordinates:
    """Cuff lengths (positive) and twists (lengths along the cuff)."""

    lengths: dict
    twists: dict = field(default_factory=dict)

    def __post_init__(self):
        for c, v in self.lengths.items():
            if not v > 0:
                raise ValueError(f"cuff {c} has nonpositive length {v}")

    def twist(self, c):
        return self.twists.get(c, 0.0)

    @classmethod
    def uniform(cls, pd, length, twist=0.0):
        return cls({c: length for c in range(len(pd.cuffs))},
                   {c: twist for c in range(len(pd.cuffs))})


def _slot_word(p, s):
    """Boundary word of slot s of pants p in the global generators
    a_p = 2p+1, b_p = 2p+2 (1-based signed indices)."""
    a, b = 2 * p + 1, 2 * p + 2
    if s == 0:
        return (a,)
    if s == 1:
        return (b,)
    return (-b, -a)  # gamma = (alpha beta)^-1


def _slot_matrix(rep, s):
    if s == 0:
        return rep.alpha
    if s == 1:
        return rep.beta
    return rep.gamma


def naive_slot_frame(g):
    """Frame of a boundary holonomy: axis to the imaginary axis,
    attracting fixed point to infinity."""
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolicCuff(f"boundary holonomy is {classify(g).value}")
    att, rep_pt = fixed_points(g)
    return transform_to_imaginary_axis(Geodesic(rep_pt, att))


def seam_slot_frame(rep, s):
    """Slot frame pinned along the axis by the seam: the foot of the
    common perpendicular from this slot's axis to the next slot's axis
    is sent to i.

    The translation part of naive_slot_frame drifts with the boundary
    lengths, which silently changes the effective twist when comparing
    assemblies at different lengths; the seam foot is the standard
    geometric origin for the twist coordinate and scales consistently.
    """
    h = naive_slot_frame(_slot_matrix(rep, s))
    att, rep_pt = fixed_points(_slot_matrix(rep, (s + 1) % 3))
    u = h.boundary_apply(att)
    v = h.boundary_apply(rep_pt)
    if u == INFINITY or v == INFINITY or not u * v > 0:
        raise NotHyperbolicCuff(
            f"slot {s} and its successor have crossing or touching axes")
    foot = math.sqrt(u * v)
    return MoebiusTransform.diagonal(1.0 / math.sqrt(foot)) * h


class SurfaceRep:
    """A representation of the surface group assembled from pants.

    Generators: a_p, b_p per pants (in a common frame) and one letter
    per non-tree cuff.  Immutable after construction.

    Every generator image factors as G_l * M * G_r^-1, where G_p is the
    (possibly huge) placement conjugator of pants p and M has modest
    entries.  Traces of words are computed from the M factors and the
    tree-path transitions G_p^-1 * G_q, cancelling the conjugators
    algebraically; multiplying the placed images directly would lose the
    cancelled digits to rounding.
    """

    def __init__(self, pd, fn, genus, names, images, pants_reps,
                 cuff_words, tree_cuffs, local_reps, gen_factors,
                 tree_paths, rebuild=None):
        self.pd = pd
        self.fn = fn
        self.genus = genus
        self.names = list(names)
        self.images = list(images)
        self.pants_reps = list(pants_reps)
        self.cuff_words = list(cuff_words)
        self.tree_cuffs = frozenset(tree_cuffs)
        self.local_reps = list(local_reps)
        self.gen_factors = list(gen_factors)
        self.tree_paths = dict(tree_paths)
        self._transitions = {}
        self._rebuild = rebuild

    def _factor(self, letter):
        idx = abs(letter) - 1
        if letter == 0 or idx >= len(self.images):
            raise BadIndex(f"letter {letter} out of range for "
                           f"{len(self.images)} generators")
        left, mid, right = self.gen_factors[idx]
        if letter < 0:
            return right, mid.inverse(), left
        return left, mid, right

    def transition(self, p, q):
        """G_p^-1 * G_q as a product along the tree path from p to q
        (the shared prefix of the two root paths cancels exactly)."""
        cached = self._transitions.get((p, q))
        if cached is not None:
            return cached
        ids_p, mats_p = self.tree_paths[p]
        ids_q, mats_q = self.tree_paths[q]
        m = 0
        while (m < len(ids_p) and m < len(ids_q)
               and ids_p[m] == ids_q[m]):
            m += 1
        out = MoebiusTransform.identity()
        for a in reversed(mats_p[m - 1:]):
            out = out * a.inverse()
        for a in mats_q[m - 1:]:
            out = out * a
        self._transitions[(p, q)] = out
        return out

    def evaluate(self, word):
        out = MoebiusTransform.identity()
        for letter in word:
            idx = abs(letter) - 1
            if letter == 0 or idx >= len(self.images):
                raise BadIndex(f"letter {letter} out of range for "
                               f"{len(self.images)} generators")
            g = self.images[idx]
            out = out * (g if letter > 0 else g.inverse())
        return out

    def evaluate_trace(self, word):
        """Absolute trace of the word's image, via the telescoped
        modest-entry factorization (accurate independently of how far
        from the origin the pants are placed)."""
        if not word:
            return 2.0
        factors = [self._factor(letter) for letter in word]
        prod = factors[0][1]
        for i in range(1, len(factors)):
            prod = prod * self.transition(factors[i - 1][2],
                                          factors[i][0])
            prod = prod * factors[i][1]
        prod = prod * self.transition(factors[-1][2], factors[0][0])
        m = prod.mat
        return abs(float(m[0, 0] + m[1, 1]))

    def word_string(self, word):
        return word_to_string(word, self.names)

    def to_dump_dict(self):
        return {
            "genus": self.genus,
            "generators": self.names,
            "images": [g.to_json_dict() for g in self.images],
            "cuffWords": [self.word_string(w) for w in self.cuff_words],
        }


def evaluate_word(rep, word):
    return rep.evaluate(word)


def assemble_core(pd, fn, local_reps, frames=None, rebuild=None):
    """Glue placed pants reps into a SurfaceRep.

    frames: optional dict (pants, slot) -> MoebiusTransform overriding
    the naive slot frame (used to realize fold alignments).
    """
    genus = validate_decomposition(pd)
    if set(fn.lengths) != set(range(len(pd.cuffs))):
        raise ValueError("lengths must cover every cuff index")

    def frame(p, s):
        if frames is not None and (p, s) in frames:
            return frames[(p, s)]
        return seam_slot_frame(local_reps[p], s)

    # spanning tree by union-find in cuff index order
    parent = list(range(pd.num_pants))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    tree_cuffs = []
    for c, ((pa, _), (pb, _)) in enumerate(pd.cuffs):
        ra, rb = find(pa), find(pb)
        if ra != rb:
            parent[ra] = rb
            tree_cuffs.append(c)

    def relative_conjugator(par, chi, c):
        """A with A * Y_chi * A^-1 = Y_par^-1 in the raw pants frames.

        Verified here, where all factors have modest entries; the placed
        version is the same identity conjugated by the parent frame.
        """
        tw = MoebiusTransform.axis_translation(fn.twist(c))
        a = frame(*par).inverse() * tw * HALF_TURN * frame(*chi)
        y_par = _slot_matrix(local_reps[par[0]], par[1])
        y_chi = _slot_matrix(local_reps[chi[0]], chi[1])
        if not (a * y_chi * a.inverse()).almost_equal(y_par.inverse(),
                                                      RELATION_TOL):
            raise RelatorViolated(
                f"cuff {c} relation residue exceeds {RELATION_TOL}")
        return a

    conj = {0: MoebiusTransform.identity()}
    tree_paths = {0: ([0], [])}
    cuff_parent_side = {}  # cuff -> the slot whose word names the cuff
    pending = list(tree_cuffs)
    while pending:
        progressed = False
        for c in list(pending):
            (p1, s1), (p2, s2) = pd.cuffs[c]
            if p1 in conj and p2 not in conj:
                par, chi = (p1, s1), (p2, s2)
            elif p2 in conj and p1 not in conj:
                par, chi = (p2, s2), (p1, s1)
            else:
                continue
            a = relative_conjugator(par, chi, c)
            conj[chi[0]] = conj[par[0]] * a
            ids, mats = tree_paths[par[0]]
            tree_paths[chi[0]] = (ids + [chi[0]], mats + [a])
            cuff_parent_side[c] = par
            pending.remove(c)
            progressed = True
        if pending and not progressed:
            raise Disconnected("spanning tree does not reach every pants")

    # generator images: a_p, b_p then one letter per non-tree cuff
    names = []
    images = []
    pants_reps = []
    gen_factors = []
    for p in range(pd.num_pants):
        placed = local_reps[p].conjugate_by(conj[p])
        pants_reps.append(placed)
        names.extend([f"a{p}", f"b{p}"])
        images.extend([placed.alpha, placed.beta])
        gen_factors.extend([(p, local_reps[p].alpha, p),
                            (p, local_reps[p].beta, p)])
    for c, ((p1, s1), (p2, s2)) in enumerate(pd.cuffs):
        if c in cuff_parent_side:
            continue
        a = relative_conjugator((p1, s1), (p2, s2), c)
        letter = conj[p1] * a * conj[p2].inverse()
        names.append(f"t{c}")
        images.append(letter)
        gen_factors.append((p1, a, p2))
        cuff_parent_side[c] = (p1, s1)

    cuff_words = [_slot_word(*cuff_parent_side[c])
                  for c in range(len(pd.cuffs))]

    return SurfaceRep(pd, fn, genus, names, images, pants_reps,
                      cuff_words, tree_cuffs, local_reps, gen_factors,
                      tree_paths, rebuild=rebuild)


def pants_boundary_lengths(pd, fn, p):
    """(l0, l1, l2): FN length of the cuff owning each slot of pants p."""
    owner = pd.slots_of_pants(p)
    if None in owner:
        raise UnmatchedSlot(f"pants {p} has an unmatched slot")
    return tuple(fn.lengths[c] for c in owner)


def assemble_fuchsian(pd, fn):
    """Fuchsian holonomy with the given Fenchel-Nielsen coordinates."""
    local = [geometric_pants_rep(pants_boundary_lengths(pd, fn, p))
             for p in range(pd.num_pants)]

    def rebuild(fn2):
        return assemble_fuchsian(pd, fn2)

    return assemble_core(pd, fn, local, rebuild=rebuild)


def euler_class_surface(rep):
    """Euler class by additivity over the pants pieces.

    Computed from the raw (origin-centered) local reps, to which the
    placed pieces are conjugate; the class is conjugation invariant.
    """
    return sum(euler_class_pants(r) for r in rep.local_reps)


def cuff_holonomy(rep, c):
    return rep.evaluate(rep.cuff_words[c])


def cuff_length(rep, c):
    tr = rep.evaluate_trace(rep.cuff_words[c])
    if tr <= 2.0 + PARABOLIC_BAND:
        raise NotHyperbolicCuff(
            f"cuff {c} holonomy has absolute trace {tr:.6g}, "
            f"not hyperbolic")
    return trace_translation_length(tr)


def twist_cuff(rep, c, amount):
    """Earthquake along cuff c by `amount` (hyperbolic length units)."""
    if not (0 <= c < len(rep.pd.cuffs)):
        raise BadIndex(f"no cuff {c}")
    cuff_length(rep, c)  # raises NotHyperbolicCuff when degenerate
    if rep._rebuild is None:
        raise ValueError("representation does not carry rebuild data")
    twists = dict(rep.fn.twists)
    twists[c] = rep.fn.twist(c) + amount
    return rep._rebuild(FNCoordinates(dict(rep.fn.lengths), twists))


# -- canonical test decompositions -------------------------------------


def genus2_theta():
    """Two pants glued along all three slot pairs (the theta graph)."""
    return PantsDecomposition.from_cuff_list(
        2, [[(0, 0), (1, 0)], [(0, 1), (1, 1)], [(0, 2), (1, 2)]])


def genus3_ring():
    """Four pants in a ring, with two cross handles."""
    return PantsDecomposition.from_cuff_list(
        4, [[(0, 1), (1, 0)], [(1, 1), (2, 0)], [(2, 1), (3, 0)],
            [(3, 1), (0, 0)], [(0, 2), (2, 2)], [(1, 2), (3, 2)]])


def standard_generators_genus2(rep):
    """Images of a standard one-relator basis (x1, y1, x2, y2) with
    [x1,y1][x2,y2] = 1, for the theta-graph genus-2 decomposition.

    In the graph-of-groups generators a = a0, b = b0 and the letters
    s = t1, u = t2, the single relation rewrites as
    [s, s^-1 b s] [s^-1 b s a, b u] = 1.
    """
    pd = rep.pd
    if (rep.genus != 2 or pd.num_pants != 2
            or tuple(rep.tree_cuffs) != (0,)
            or pd.cuffs != (((0, 0), (1, 0)), ((0, 1), (1, 1)),
                            ((0, 2), (1, 2)))):
        raise ValueError("standard basis requires the theta-graph "
                        "genus-2 decomposition")
    a, b = 1, 2
    s = rep.names.index("t1") + 1
    u = rep.names.index("t2") + 1
    x1 = (s,)
    y1 = (-s, b, s)
    x2 = (-s, b, s, a)
    y2 = (b, u)
    return [rep.evaluate(free_reduce(w)) for w in (x1, y1, x2, y2)]


# -- JSON interfaces ----------------------------------------------------


def surface_to_json(pd, fn):
    data = {
        "pants": list(range(pd.num_pants)),
        "cuffs": [[list(sa), list(sb)] for sa, sb in pd.cuffs],
        "lengths": {str(c): fn.lengths[c] for c in sorted(fn.lengths)},
        "twists": {str(c): fn.twists[c] for c in sorted(fn.twists)},
    }
    return json.dumps(data, indent=2, sort_keys=True)


def surface_from_json(text):
    data = json.loads(text) if isinstance(text, str) else text
    pants = data["pants"]
    pd = PantsDecomposition.from_cuff_list(len(pants), data["cuffs"])
    lengths = {int(c): float(v) for c, v in data["lengths"].items()}
    twists = {int(c): float(v) for c, v in data.get("twists", {}).items()}
    return pd, FNCoordinates(lengths, twists)
