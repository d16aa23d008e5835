"""Surface-group representations into PSL(2,R): Fuchsian assembly from
Fenchel-Nielsen coordinates, folded (non-Fuchsian) representations with
prescribed Euler class, and numerical strict-domination certificates."""

__version__ = "0.1.0"

from .domination import (
    DominationCertificate,
    Verdict,
    cuff_lengthen,
    cuff_shrink,
    dominating_fuchsian,
    enumerate_words,
    ratio_spectrum,
    strictly_dominated_fold,
)
from .folding import Labeling, bending_angle, fold_surface, prescribe_labeling
from .moebius import Geodesic, HPoint, MoebiusTransform
from .pants import (
    PantsRep,
    build_pants_rep,
    classify_pants_rep,
    fold_pants,
    geometric_pants_rep,
    unfold_pants,
)
from .surface import (
    FNCoordinates,
    PantsDecomposition,
    assemble_fuchsian,
    cuff_length,
    euler_class_surface,
    genus2_theta,
    genus3_ring,
)
from .univcover import euler_class_commutator, euler_class_pants

__all__ = [
    "DominationCertificate",
    "FNCoordinates",
    "Geodesic",
    "HPoint",
    "Labeling",
    "MoebiusTransform",
    "PantsDecomposition",
    "PantsRep",
    "Verdict",
    "assemble_fuchsian",
    "bending_angle",
    "build_pants_rep",
    "classify_pants_rep",
    "cuff_length",
    "cuff_lengthen",
    "cuff_shrink",
    "dominating_fuchsian",
    "enumerate_words",
    "euler_class_commutator",
    "euler_class_pants",
    "euler_class_surface",
    "fold_pants",
    "fold_surface",
    "genus2_theta",
    "genus3_ring",
    "geometric_pants_rep",
    "prescribe_labeling",
    "ratio_spectrum",
    "strictly_dominated_fold",
    "unfold_pants",
]
