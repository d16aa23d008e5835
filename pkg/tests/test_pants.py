import math

import numpy as np
import pytest

from foldrep import pants as pn
from foldrep.moebius import MoebiusTransform
from foldrep.pants import (
    BoundaryLengths,
    InvalidBranch,
    NonPositiveLength,
    PantsBranch,
    PantsClass,
    PantsRep,
)
from foldrep.univcover import euler_class_pants, euler_parity_pants


def random_psl(rng):
    while True:
        m = rng.normal(size=(2, 2))
        if m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] > 0.01:
            return MoebiusTransform.from_matrix(m)


def random_lengths(rng):
    return tuple(rng.uniform(0.3, 3.0, size=3))


DEGENERATE = (2.0, 1.0, 1.0)  # a = b + c


class TestBuild:
    def test_round_trip_lengths_and_form(self):
        rng = np.random.default_rng(40)
        for _ in range(200):
            lengths = random_lengths(rng)
            eps = 1 if rng.random() < 0.5 else -1
            try:
                rep = pn.build_pants_rep(lengths, eps)
            except InvalidBranch:
                continue  # random triple landed on the degenerate locus
            got = pn.boundary_lengths(rep).as_tuple()
            for want, have in zip(lengths, got):
                assert abs(want - have) < 1e-8
            nf = pn.normal_form(rep)
            assert nf.epsilon == eps
            assert nf.branch is PantsBranch.GENERIC
            assert abs(nf.A - math.exp(lengths[0] / 2.0)) < 1e-8

    def test_normal_form_conjugation_invariant(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            lengths = random_lengths(rng)
            eps = 1 if rng.random() < 0.5 else -1
            try:
                rep = pn.build_pants_rep(lengths, eps)
            except InvalidBranch:
                continue
            h = random_psl(rng)
            assert pn.normal_form(rep.conjugate_by(h)).agrees_with(
                pn.normal_form(rep), 1e-7)

    def test_nonpositive_length_rejected(self):
        with pytest.raises(NonPositiveLength):
            pn.build_pants_rep((1.0, 0.0, 1.0), 1)
        with pytest.raises(NonPositiveLength):
            BoundaryLengths(1.0, -0.5, 1.0)

    def test_generic_branch_rejected_on_locus(self):
        with pytest.raises(InvalidBranch):
            pn.build_pants_rep(DEGENERATE, 1)

    def test_degenerate_branch_rejected_off_locus(self):
        with pytest.raises(InvalidBranch):
            pn.build_pants_rep((1.0, 1.0, 1.0), 1, PantsBranch.UPPER)

    def test_degenerate_branch_rejected_for_negative_epsilon(self):
        with pytest.raises(InvalidBranch):
            pn.build_pants_rep(DEGENERATE, -1, PantsBranch.DIAGONAL)

    def test_negative_epsilon_fine_on_locus(self):
        rep = pn.build_pants_rep(DEGENERATE, -1)
        got = pn.boundary_lengths(rep).as_tuple()
        for want, have in zip(DEGENERATE, got):
            assert abs(want - have) < 1e-9


class TestEuler:
    def test_positive_epsilon_euler_zero(self):
        rep = pn.build_pants_rep((1.0, 1.0, 1.0), 1)
        assert euler_class_pants(rep) == 0

    def test_negative_epsilon_euler_unit(self):
        rep = pn.build_pants_rep((1.0, 1.0, 1.0), -1)
        assert euler_class_pants(rep) in (-1, 1)

    def test_parity_law(self):
        # epsilon = (-1)^euler on random triples, both signs
        rng = np.random.default_rng(42)
        for _ in range(100):
            lengths = random_lengths(rng)
            eps = 1 if rng.random() < 0.5 else -1
            try:
                rep = pn.build_pants_rep(lengths, eps)
            except InvalidBranch:
                continue
            eu = euler_class_pants(rep)
            assert (-1) ** eu == eps
            assert euler_parity_pants(rep) == eu % 2

    def test_euler_conjugation_invariant(self):
        rng = np.random.default_rng(43)
        rep = pn.build_pants_rep((1.5, 0.8, 2.2), -1)
        eu = euler_class_pants(rep)
        for _ in range(20):
            assert euler_class_pants(rep.conjugate_by(random_psl(rng))) == eu


class TestClassify:
    def test_four_classes_on_locus(self):
        reps = {
            PantsClass.GEOMETRIC: pn.build_pants_rep(DEGENERATE, -1),
            PantsClass.NONGEOMETRIC_NONABELIAN_A:
                pn.build_pants_rep(DEGENERATE, 1, PantsBranch.UPPER),
            PantsClass.NONGEOMETRIC_NONABELIAN_B:
                pn.build_pants_rep(DEGENERATE, 1, PantsBranch.LOWER),
            PantsClass.ABELIAN:
                pn.build_pants_rep(DEGENERATE, 1, PantsBranch.DIAGONAL),
        }
        for want, rep in reps.items():
            assert pn.classify_pants_rep(rep) is want

    def test_two_classes_off_locus(self):
        geo = pn.build_pants_rep((1.0, 1.0, 1.0), -1)
        non = pn.build_pants_rep((1.0, 1.0, 1.0), 1)
        assert pn.classify_pants_rep(geo) is PantsClass.GEOMETRIC
        assert pn.classify_pants_rep(non) is PantsClass.NONGEOMETRIC_GENERIC

    def test_classification_conjugation_invariant(self):
        rng = np.random.default_rng(44)
        for branch in (PantsBranch.UPPER, PantsBranch.LOWER,
                       PantsBranch.DIAGONAL):
            rep = pn.build_pants_rep(DEGENERATE, 1, branch)
            cls = pn.classify_pants_rep(rep)
            for _ in range(10):
                h = random_psl(rng)
                assert pn.classify_pants_rep(rep.conjugate_by(h)) is cls

    def test_nonabelian_branches_do_not_commute(self):
        for branch in (PantsBranch.UPPER, PantsBranch.LOWER):
            rep = pn.build_pants_rep(DEGENERATE, 1, branch)
            comm = (rep.alpha * rep.beta * rep.alpha.inverse()
                    * rep.beta.inverse())
            dev = float(np.max(np.abs(comm.mat - np.eye(2))))
            assert dev > 1e-6


class TestFoldUnfold:
    def test_fold_preserves_lengths(self):
        rng = np.random.default_rng(45)
        for _ in range(50):
            lengths = random_lengths(rng)
            try:
                geo = pn.build_pants_rep(lengths, -1)
            except InvalidBranch:
                continue
            folded = pn.fold_pants(geo)
            assert pn.classify_pants_rep(folded) is not PantsClass.GEOMETRIC
            for want, have in zip(lengths,
                                  pn.boundary_lengths(folded).as_tuple()):
                assert abs(want - have) < 1e-8

    def test_unfold_inverts_fold(self):
        geo = pn.build_pants_rep((1.3, 0.9, 2.1), -1)
        back = pn.unfold_pants(pn.fold_pants(geo))
        assert pn.normal_form(back).agrees_with(pn.normal_form(geo), 1e-8)

    def test_fold_on_locus_gives_triangular(self):
        geo = pn.build_pants_rep(DEGENERATE, -1)
        folded = pn.fold_pants(geo)
        assert pn.classify_pants_rep(folded) is \
            PantsClass.NONGEOMETRIC_NONABELIAN_A

    def test_fold_rejects_nongeometric(self):
        with pytest.raises(pn.NotGeometric):
            pn.fold_pants(pn.build_pants_rep((1.0, 1.0, 1.0), 1))

    def test_unfold_rejects_geometric(self):
        with pytest.raises(pn.AlreadyGeometric):
            pn.unfold_pants(pn.build_pants_rep((1.0, 1.0, 1.0), -1))


class TestAbelianize:
    def test_upper_maps_to_diagonal_branch(self):
        upper = pn.build_pants_rep(DEGENERATE, 1, PantsBranch.UPPER)
        diag = pn.build_pants_rep(DEGENERATE, 1, PantsBranch.DIAGONAL)
        ab = pn.abelianize(upper)
        assert ab.alpha.almost_equal(diag.alpha, 1e-12)
        assert ab.beta.almost_equal(diag.beta, 1e-12)

    def test_lower_maps_to_diagonal_branch(self):
        lower = pn.build_pants_rep(DEGENERATE, 1, PantsBranch.LOWER)
        diag = pn.build_pants_rep(DEGENERATE, 1, PantsBranch.DIAGONAL)
        ab = pn.abelianize(lower)
        assert pn.normal_form(ab).agrees_with(pn.normal_form(diag), 1e-8)

    def test_result_commutes(self):
        rng = np.random.default_rng(46)
        rep = pn.build_pants_rep(DEGENERATE, 1, PantsBranch.UPPER)
        for _ in range(10):
            conj = rep.conjugate_by(random_psl(rng))
            ab = pn.abelianize(conj)
            comm = (ab.alpha * ab.beta * ab.alpha.inverse()
                    * ab.beta.inverse())
            assert comm.almost_equal(MoebiusTransform.identity(), 1e-8)
            # the alpha length survives abelianization
            assert abs(pn.boundary_lengths(ab).a - DEGENERATE[0]) < 1e-7

    def test_nonelementary_rejected(self):
        with pytest.raises(pn.NotElementary):
            pn.abelianize(pn.build_pants_rep((1.0, 1.0, 1.0), -1))


class TestJson:
    def test_round_trip(self):
        rep = pn.build_pants_rep((1.3, 0.9, 2.1), -1)
        back = PantsRep.from_json(rep.to_json())
        assert back.alpha.almost_equal(rep.alpha, 1e-15)
        assert back.beta.almost_equal(rep.beta, 1e-15)
