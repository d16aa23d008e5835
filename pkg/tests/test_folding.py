import itertools
import math

import numpy as np
import pytest

from foldrep.folding import (
    BadLabel,
    Coloring,
    ExtremalClass,
    Labeling,
    bending_angle,
    fold_surface,
    prescribe_labeling,
)
from foldrep.moebius import MoebiusTransform, trace_translation_length
from foldrep.surface import (
    FNCoordinates,
    cuff_length,
    euler_class_surface,
    genus2_theta,
    genus3_ring,
)


def theta_pair(labels, length=1.0, twists=None):
    pd = genus2_theta()
    fn = FNCoordinates({c: length for c in range(3)}, twists or {})
    return fold_surface(pd, fn, Labeling(dict(enumerate(labels))))


class TestBendingAngle:
    def test_equal_signs(self):
        assert bending_angle(1, 1) == 0
        assert bending_angle(-1, -1) == 0

    def test_opposite_signs(self):
        assert bending_angle(1, -1) == math.pi
        assert bending_angle(-1, 1) == math.pi

    def test_symmetry(self):
        for c1, c2 in itertools.product((-1, 1), repeat=2):
            assert bending_angle(c1, c2) == bending_angle(c2, c1)

    def test_bad_color(self):
        with pytest.raises(BadLabel):
            bending_angle(0, 1)
        with pytest.raises(BadLabel):
            bending_angle(1, 2)


class TestColoring:
    def test_valid(self):
        Coloring({"p0": 1, "p1": -1})

    def test_invalid(self):
        with pytest.raises(BadLabel):
            Coloring({"p0": 0})


class TestLabeling:
    def test_json_round_trip(self):
        lab = Labeling({0: 1, 1: -1, 2: 0, 3: 0})
        again = Labeling.from_json(lab.to_json())
        assert again.labels == lab.labels

    def test_invalid_value(self):
        with pytest.raises(BadLabel):
            Labeling({0: 2})

    def test_missing_pants_at_fold(self):
        pd = genus2_theta()
        fn = FNCoordinates({c: 1.0 for c in range(3)})
        with pytest.raises(BadLabel):
            fold_surface(pd, fn, Labeling({0: 1}))


class TestPrescribeLabeling:
    def test_genus2_zero(self):
        lab = prescribe_labeling(genus2_theta(), 0)
        assert lab.labels == {0: 0, 1: 0}

    def test_genus2_one(self):
        lab = prescribe_labeling(genus2_theta(), 1)
        assert lab.labels == {0: 1, 1: 0}
        assert lab.total() == 1

    def test_genus2_minus_one(self):
        lab = prescribe_labeling(genus2_theta(), -1)
        assert lab.total() == -1

    def test_genus2_extremal(self):
        for k in (2, -2, 5):
            with pytest.raises(ExtremalClass):
                prescribe_labeling(genus2_theta(), k)

    def test_genus3_range(self):
        pd = genus3_ring()
        for k in range(-3, 4):
            lab = prescribe_labeling(pd, k)
            assert lab.total() == k
            assert 0 in lab.labels.values()
        with pytest.raises(ExtremalClass):
            prescribe_labeling(pd, 4)


class TestFoldSurface:
    def test_all_plus_one_is_fuchsian(self):
        j, rho = theta_pair((1, 1))
        for g, h in zip(j.images, rho.images):
            assert bool(np.array_equal(g.mat, h.mat))
        assert euler_class_surface(rho) == 2

    def test_euler_prescription_genus2(self):
        pd = genus2_theta()
        fn = FNCoordinates({c: 1.0 for c in range(3)})
        for labels in itertools.product((-1, 0, 1), repeat=2):
            _, rho = fold_surface(pd, fn, Labeling(dict(enumerate(labels))))
            assert euler_class_surface(rho) == sum(labels), labels

    def test_euler_prescription_genus3(self):
        pd = genus3_ring()
        fn = FNCoordinates({c: 1.0 for c in range(6)})
        for labels in itertools.product((-1, 0, 1), repeat=4):
            _, rho = fold_surface(pd, fn, Labeling(dict(enumerate(labels))))
            assert euler_class_surface(rho) == sum(labels), labels

    def test_cuff_lengths_agree(self):
        j, rho = theta_pair((1, 0), twists={0: 0.3, 1: -0.6, 2: 1.1})
        for c in range(3):
            assert abs(cuff_length(rho, c) - cuff_length(j, c)) < 1e-9

    def test_cuff_lengths_agree_genus3(self):
        pd = genus3_ring()
        fn = FNCoordinates({c: 0.8 + 0.15 * c for c in range(6)},
                           {0: 0.2, 3: -0.4})
        j, rho = fold_surface(pd, fn, Labeling({0: 1, 1: 0, 2: -1, 3: 0}))
        for c in range(6):
            assert abs(cuff_length(rho, c) - cuff_length(j, c)) < 1e-9
        assert euler_class_surface(rho) == 0

    def test_mixed_signs_nonabelian(self):
        _, rho = theta_pair((1, -1))
        assert euler_class_surface(rho) == 0
        worst = 0.0
        for i, j_ in itertools.combinations(range(len(rho.images)), 2):
            a, b = rho.images[i], rho.images[j_]
            comm = a * b * a.inverse() * b.inverse()
            dev = float(np.max(np.abs(comm.mat - np.eye(2))))
            worst = max(worst, dev)
        assert worst >= 1e-6

    def test_folded_pants_nonabelian(self):
        _, rho = theta_pair((1, 0))
        a, b = rho.images[2], rho.images[3]  # the folded pants
        comm = a * b * a.inverse() * b.inverse()
        assert float(np.max(np.abs(comm.mat - np.eye(2)))) >= 1e-6


class TestDominationProbe:
    def probe(self, j, rho, max_len=4):
        gens = [1, 2, j.names.index("t1") + 1, j.names.index("t2") + 1]
        letters = [s * g for g in gens for s in (1, -1)]
        worst = 0.0
        for length in range(1, max_len + 1):
            for w in itertools.product(letters, repeat=length):
                if any(w[i] == -w[i + 1] for i in range(length - 1)):
                    continue
                if length >= 2 and w[0] == -w[-1]:
                    continue
                lam_j = trace_translation_length(j.evaluate_trace(w))
                lam_r = trace_translation_length(rho.evaluate_trace(w))
                if lam_j < 1e-9:
                    assert lam_r < 1e-6
                    continue
                worst = max(worst, lam_r / lam_j)
        return worst

    def test_non_strict_domination(self):
        for labels in ((1, 0), (1, -1), (0, 0)):
            j, rho = theta_pair(labels)
            worst = self.probe(j, rho)
            assert worst <= 1 + 1e-7
            # sup attained: the cuff words have ratio exactly 1
            assert worst >= 1 - 1e-7
