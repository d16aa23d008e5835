import itertools
import json

import numpy as np
import pytest

import foldrep.domination as dom
from foldrep.domination import (
    BadParameter,
    BudgetExceeded,
    DegenerateViolation,
    PresentationMismatch,
    TrivialFold,
    Verdict,
    WordList,
    cuff_lengthen,
    cuff_shrink,
    dominating_fuchsian,
    enumerate_words,
    probe_generating_letters,
    ratio_spectrum,
    reduced_word_count,
    strictly_dominated_fold,
)
from foldrep.folding import ExtremalClass, Labeling
from foldrep.surface import (
    FNCoordinates,
    assemble_fuchsian,
    cuff_length,
    genus2_theta,
    genus3_ring,
)
from foldrep.words import canonical_key, free_reduce, is_cyclically_reduced


def theta_fn(length=1.0):
    return FNCoordinates({c: length for c in range(3)})


def brute_force_classes(n, max_len):
    letters = [s * i for i in range(1, n + 1) for s in (1, -1)]
    seen = set()
    for length in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=length):
            if free_reduce(w) != w or not is_cyclically_reduced(w):
                continue
            seen.add(canonical_key(w))
    return seen


class TestEnumerateWords:
    def test_one_generator(self):
        wl = enumerate_words(1, 3)
        assert wl.words == ((1,), (1, 1), (1, 1, 1))

    def test_two_generators_len1(self):
        assert enumerate_words(2, 1).words == ((1,), (2,))

    def test_matches_brute_force(self):
        for n, max_len in ((2, 2), (2, 4), (3, 3)):
            wl = enumerate_words(n, max_len)
            classes = brute_force_classes(n, max_len)
            assert len(wl.words) == len(classes)
            assert {canonical_key(w) for w in wl.words} == classes

    def test_words_cyclically_reduced_and_distinct(self):
        wl = enumerate_words(3, 4)
        keys = set()
        for w in wl.words:
            assert free_reduce(w) == w
            assert is_cyclically_reduced(w)
            key = canonical_key(w)
            assert key not in keys
            keys.add(key)

    def test_deterministic_order(self):
        dom._WORD_CACHE.clear()
        first = enumerate_words(2, 5).words
        dom._WORD_CACHE.clear()
        assert enumerate_words(2, 5).words == first

    def test_budget_exceeded(self, monkeypatch):
        monkeypatch.setenv("FOLDREP_WORD_CAP", "100")
        dom._WORD_CACHE.clear()
        with pytest.raises(BudgetExceeded):
            enumerate_words(3, 5)
        monkeypatch.delenv("FOLDREP_WORD_CAP")
        dom._WORD_CACHE.clear()

    def test_bad_parameters(self):
        with pytest.raises(BadParameter):
            enumerate_words(0, 3)
        with pytest.raises(BadParameter):
            enumerate_words(2, 0)

    def test_count_formula_bounds_enumeration(self):
        wl = enumerate_words(2, 4)
        assert len(wl.words) <= reduced_word_count(2, 4)


class TestRatioSpectrum:
    def test_identity_pair(self):
        j = assemble_fuchsian(genus2_theta(), theta_fn())
        records, excluded = ratio_spectrum(
            j, j, enumerate_words(4, 4),
            generator_letters=probe_generating_letters(j))
        assert records
        for rec in records:
            assert abs(rec.ratio - 1.0) < 1e-12

    def test_presentation_mismatch(self):
        j = assemble_fuchsian(genus2_theta(), theta_fn())
        other = assemble_fuchsian(
            genus3_ring(), FNCoordinates({c: 1.0 for c in range(6)}))
        with pytest.raises(PresentationMismatch):
            ratio_spectrum(j, other, enumerate_words(2, 2))

    def test_degenerate_violation(self, monkeypatch):
        j = assemble_fuchsian(genus2_theta(), theta_fn())
        fake = iter([np.array([2.0]), np.array([10.0])])
        monkeypatch.setattr(dom, "_traces_by_length",
                            lambda rep, words: next(fake))
        with pytest.raises(DegenerateViolation):
            ratio_spectrum(j, j, [(1, -1)])

    def test_cuff_words_prepended(self):
        j = assemble_fuchsian(genus2_theta(), theta_fn())
        records, _ = ratio_spectrum(
            j, j, enumerate_words(4, 2),
            generator_letters=probe_generating_letters(j))
        cuffs = [tuple(w) for w in j.cuff_words]
        assert [rec.word for rec in records[:3]] == cuffs
        # no later record duplicates a cuff class
        cuff_keys = {canonical_key(w) for w in cuffs}
        for rec in records[3:]:
            assert canonical_key(rec.word) not in cuff_keys


class TestCuffScaling:
    def test_shrink_zero_identity(self):
        fn = theta_fn(1.3)
        out = cuff_shrink(fn, 0.0)
        assert out.lengths == fn.lengths
        assert out.twists == fn.twists

    def test_shrink_value(self):
        out = cuff_shrink(theta_fn(1.0), 0.05)
        for v in out.lengths.values():
            assert abs(v - 0.95) < 1e-15

    def test_lengthen_value(self):
        out = cuff_lengthen(FNCoordinates({0: 2.0, 1: 1.0, 2: 1.0}), 0.05)
        assert abs(out.lengths[0] - 2.0 / 0.95) < 1e-15

    def test_compose_identity(self):
        fn = theta_fn(1.7)
        out = cuff_shrink(cuff_lengthen(fn, 0.3), 0.3)
        for c, v in fn.lengths.items():
            assert abs(out.lengths[c] - v) < 1e-12

    def test_bad_parameter(self):
        for t in (-0.1, 1.0, 1.5):
            with pytest.raises(BadParameter):
                cuff_shrink(theta_fn(), t)
            with pytest.raises(BadParameter):
                cuff_lengthen(theta_fn(), t)

    def test_assembled_lengths_scale(self):
        fn = FNCoordinates({0: 0.8, 1: 1.2, 2: 2.0})
        t = 0.05
        rep = assemble_fuchsian(genus2_theta(), fn)
        shrunk = assemble_fuchsian(genus2_theta(), cuff_shrink(fn, t))
        for c in range(3):
            assert abs(cuff_length(shrunk, c)
                       - (1 - t) * cuff_length(rep, c)) < 1e-9


class TestProbeGenerators:
    def test_genus2_minimal(self):
        j = assemble_fuchsian(genus2_theta(), theta_fn())
        letters = probe_generating_letters(j)
        names = [j.names[i - 1] for i in letters]
        assert names == ["a0", "b0", "t1", "t2"]

    def test_genus3_generating(self):
        j = assemble_fuchsian(genus3_ring(),
                              FNCoordinates({c: 1.0 for c in range(6)}))
        letters = probe_generating_letters(j)
        # a surface group of genus 3 needs at least 6 generators
        assert len(letters) >= 6
        assert all(1 <= x <= len(j.names) for x in letters)


class TestStrictlyDominatedFold:
    def test_certifies_genus2(self):
        cert = strictly_dominated_fold(genus2_theta(), theta_fn(), 0,
                                       0.05, 5)
        assert cert.verdict is Verdict.STRICTLY_DOMINATED
        assert cert.euler_rho == 0
        assert cert.sup_ratio < 1 - 1e-9

    def test_zero_shrink_not_certified(self):
        cert = strictly_dominated_fold(genus2_theta(), theta_fn(), 0,
                                       0.0, 5)
        assert cert.verdict is Verdict.NOT_CERTIFIED
        assert abs(cert.sup_ratio - 1.0) < 1e-7
        assert cert.witness in [tuple(w) for w in
                                enumerate_witness_cuffs()]

    def test_extremal_class(self):
        with pytest.raises(ExtremalClass):
            strictly_dominated_fold(genus2_theta(), theta_fn(), 2,
                                    0.05, 4)

    def test_bad_t(self):
        with pytest.raises(BadParameter):
            strictly_dominated_fold(genus2_theta(), theta_fn(), 0,
                                    1.0, 4)

    def test_monotone_in_t(self):
        # at base length 3 the collar widening from shrinking cuffs never
        # overtakes the shortening of the cuff-parallel parts over this
        # range of t (at length 1 it does, past t = 0.05)
        sups = []
        for t in (0.01, 0.02, 0.05, 0.1):
            cert = strictly_dominated_fold(genus2_theta(), theta_fn(3.0),
                                           1, t, 4)
            sups.append(cert.sup_ratio)
        for a, b in zip(sups, sups[1:]):
            assert b <= a + 1e-9

    def test_cuff_exactness(self):
        t = 0.07
        cert = strictly_dominated_fold(genus2_theta(), theta_fn(), 1,
                                       t, 4)
        for rec in cert.records[:3]:
            assert abs(rec.ratio - (1 - t)) < 1e-9

    def test_soundness(self):
        cert = strictly_dominated_fold(genus2_theta(), theta_fn(), 1,
                                       0.05, 5)
        assert cert.verdict is Verdict.STRICTLY_DOMINATED
        for rec in cert.records:
            assert rec.ratio < 1 - 1e-9
        assert cert.sup_ratio == max(rec.ratio for rec in cert.records)

    def test_determinism(self):
        a = strictly_dominated_fold(genus2_theta(), theta_fn(), 1,
                                    0.05, 4)
        b = strictly_dominated_fold(genus2_theta(), theta_fn(), 1,
                                    0.05, 4)
        assert a.to_json() == b.to_json()
        assert a.to_csv() == b.to_csv()

    def test_json_schema(self):
        cert = strictly_dominated_fold(genus2_theta(), theta_fn(), 1,
                                       0.05, 3)
        data = json.loads(cert.to_json())
        assert set(data) == {"verdict", "supRatio", "witness", "t",
                             "maxWordLen", "eulerRho", "excludedWords"}
        assert data["eulerRho"] == 1
        assert data["maxWordLen"] == 3

    def test_csv_header(self):
        cert = strictly_dominated_fold(genus2_theta(), theta_fn(), 1,
                                       0.05, 2)
        lines = cert.to_csv().splitlines()
        assert lines[0] == "word,lambda_j,lambda_rho,ratio"
        assert len(lines) == len(cert.records) + 1


def enumerate_witness_cuffs():
    j = assemble_fuchsian(genus2_theta(), theta_fn())
    return [tuple(w) for w in j.cuff_words]


class TestDominatingFuchsian:
    def test_certifies(self):
        cert = dominating_fuchsian(genus2_theta(), theta_fn(),
                                   Labeling({0: 1, 1: 0}), 0.05, 5)
        assert cert.verdict is Verdict.STRICTLY_DOMINATED

    def test_zero_t_not_certified_at_cuff(self):
        cert = dominating_fuchsian(genus2_theta(), theta_fn(),
                                   Labeling({0: 1, 1: 0}), 0.0, 5)
        assert cert.verdict is Verdict.NOT_CERTIFIED
        assert abs(cert.sup_ratio - 1.0) < 1e-7
        assert cert.witness in enumerate_witness_cuffs()
        witness_rec = next(r for r in cert.records
                           if r.word == cert.witness)
        assert abs(witness_rec.ratio - 1.0) < 1e-9

    def test_all_plus_one_rejected(self):
        with pytest.raises(TrivialFold):
            dominating_fuchsian(genus2_theta(), theta_fn(),
                                Labeling({0: 1, 1: 1}), 0.05, 4)
        with pytest.raises(TrivialFold):
            dominating_fuchsian(genus2_theta(), theta_fn(),
                                Labeling({0: -1, 1: -1}), 0.05, 4)
