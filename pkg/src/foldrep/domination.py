"""Word enumeration, length-spectrum ratios, cuff scaling, and
domination certificates.

A certificate compares translation lengths of a candidate dominating
representation j and a dominated rho over every cyclically reduced word
up to a length budget, in a generating subset chosen to fit the
enumeration budget, with the cuff words always included.  It is a
finite numerical probe, not a proof: the verdict quantifies over the
enumerated words only.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .folding import fold_surface, prescribe_labeling
from .surface import FNCoordinates, assemble_fuchsian, euler_class_surface
from .words import canonical_key, word_to_string

DEFAULT_WORD_CAP = 10_000_000
DEGENERATE_J_TOL = 1e-9
DEGENERATE_RHO_TOL = 1e-6
STRICT_MARGIN = 1e-9
WITNESS_TIE_TOL = 1e-9
PARABOLIC_TRACE = 2.0 + 1e-9

_WORD_CACHE = {}


class BudgetExceeded(ValueError):
    pass


class PresentationMismatch(ValueError):
    pass


class DegenerateViolation(ValueError):
    """A word degenerate in j has nonzero length in rho; domination
    would fail there, which signals a broken assembly."""


class BadParameter(ValueError):
    pass


class TrivialFold(ValueError):
    """All labels equal +1 (or all -1): the fold is conjugate to a
    Fuchsian representation and certification is vacuous."""


class Verdict(Enum):
    STRICTLY_DOMINATED = "StrictlyDominated"
    NOT_CERTIFIED = "NotCertified"


def word_cap():
    raw = os.environ.get("FOLDREP_WORD_CAP")
    if raw is None:
        return DEFAULT_WORD_CAP
    return int(float(raw))


def reduced_word_count(num_generators, max_len):
    """Number of freely reduced nonempty words up to max_len; the
    enumeration budget metric (it bounds the working-set size)."""
    n2 = 2 * num_generators
    total = 0
    power = 1
    for _ in range(max_len):
        total += n2 * power
        power *= n2 - 1
    return total


@dataclass(frozen=True)
class WordList:
    """All cyclically reduced words up to max_len over num_generators
    free generators, deduplicated under cyclic rotation and inversion,
    in deterministic order (length, then canonical encoding)."""

    num_generators: int
    max_len: int
    words: tuple


def _codes_to_tuple(row):
    return tuple((int(c >> 1) + 1) * (-1 if (c & 1) else 1) for c in row)


def _enumerate_length(n2, length, prev):
    """Freely reduced words of the given length as a codes array,
    extending the freely reduced words of length - 1."""
    if prev is None:
        return np.arange(n2, dtype=np.uint8).reshape(-1, 1)
    count = prev.shape[0]
    ext = np.repeat(prev, n2, axis=0)
    new = np.tile(np.arange(n2, dtype=np.uint8), count)
    keep = new != (ext[:, -1] ^ 1)
    return np.concatenate([ext[keep], new[keep, None]], axis=1)


def _canonical_rows(arr, n2):
    """Deduplicate rows under rotation and inversion; return the sorted
    canonical representatives (least base-n2 encoding)."""
    length = arr.shape[1]
    weights = (np.uint64(n2)
               ** np.arange(length - 1, -1, -1, dtype=np.uint64))
    best = None
    ext = arr.astype(np.uint64)
    inv = ext[:, ::-1] ^ np.uint64(1)
    for variant in (ext, inv):
        for r in range(length):
            keys = np.roll(variant, -r, axis=1) @ weights
            best = keys if best is None else np.minimum(best, keys)
    uniq = np.unique(best)
    out = np.empty((uniq.shape[0], length), dtype=np.uint8)
    rem = uniq.copy()
    for t in range(length - 1, -1, -1):
        out[:, t] = (rem % n2).astype(np.uint8)
        rem //= n2
    return out


def enumerate_words(num_generators, max_len):
    """All cyclically reduced words up to max_len, deduplicated under
    rotation and inversion, deterministically ordered and cached."""
    if num_generators < 1 or max_len < 1:
        raise BadParameter(
            f"need num_generators >= 1 and max_len >= 1, got "
            f"({num_generators}, {max_len})")
    key = (num_generators, max_len)
    cached = _WORD_CACHE.get(key)
    if cached is not None:
        return cached
    cap = word_cap()
    budget = reduced_word_count(num_generators, max_len)
    if budget > cap:
        raise BudgetExceeded(
            f"{budget} freely reduced words up to length {max_len} over "
            f"{num_generators} generators exceeds the cap {cap}")
    n2 = 2 * num_generators
    words = []
    prev = None
    for length in range(1, max_len + 1):
        prev = _enumerate_length(n2, length, prev)
        arr = prev
        if length >= 2:
            arr = arr[arr[:, 0] != (arr[:, -1] ^ 1)]
        if arr.shape[0]:
            for row in _canonical_rows(arr, n2):
                words.append(_codes_to_tuple(row))
    result = WordList(num_generators, max_len, tuple(words))
    _WORD_CACHE[key] = result
    return result


# -- vectorized trace evaluation ----------------------------------------


def _trace_tables(rep):
    """Lookup tables over letter codes for batched telescoped products:
    start matrix per code, pair matrix transition*mid, closing
    transition."""
    count = len(rep.images)
    lefts, rights = [], []
    mids = np.empty((2 * count, 2, 2))
    for i in range(count):
        for bit, letter in ((0, i + 1), (1, -(i + 1))):
            left, mid, right = rep._factor(letter)
            lefts.append(left)
            rights.append(right)
            mids[2 * i + bit] = mid.mat
    pair = np.empty((2 * count, 2 * count, 2, 2))
    close = np.empty((2 * count, 2 * count, 2, 2))
    for p in range(2 * count):
        for c in range(2 * count):
            trans = rep.transition(rights[p], lefts[c]).mat
            close[p, c] = trans
            pair[p, c] = trans @ mids[c]
    return mids, pair, close


def _word_codes(word):
    return [2 * (abs(letter) - 1) + (1 if letter < 0 else 0)
            for letter in word]


def _batch_abs_traces(tables, codes):
    """|trace| per row of a codes array (all rows the same length)."""
    mids, pair, close = tables
    prod = mids[codes[:, 0]]
    for t in range(1, codes.shape[1]):
        prod = np.einsum("nij,njk->nik", prod,
                         pair[codes[:, t - 1], codes[:, t]])
    closing = close[codes[:, -1], codes[:, 0]]
    return np.abs(np.einsum("nij,nji->n", prod, closing))


def _traces_by_length(rep, rep_words, chunk=1_000_000):
    """|trace| for every word (a list of signed-letter tuples), grouped
    internally by length for vectorization."""
    tables = _trace_tables(rep)
    out = np.empty(len(rep_words))
    by_length = {}
    for i, word in enumerate(rep_words):
        by_length.setdefault(len(word), []).append(i)
    for length, indices in by_length.items():
        if length == 0:
            out[indices] = 2.0
            continue
        codes = np.array(
            [_word_codes(rep_words[i]) for i in indices], dtype=np.intp)
        traces = np.empty(len(indices))
        for lo in range(0, len(indices), chunk):
            hi = min(lo + chunk, len(indices))
            traces[lo:hi] = _batch_abs_traces(tables, codes[lo:hi])
        out[indices] = traces
    return out


def _lengths_from_traces(traces):
    lam = np.zeros_like(traces)
    big = traces > PARABOLIC_TRACE
    lam[big] = 2.0 * np.arccosh(traces[big] / 2.0)
    return lam


def spectrum_csv(records, names):
    """Delimited spectrum report: word, lambda_j, lambda_rho, ratio."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "lambda_j", "lambda_rho", "ratio"])
    for rec in records:
        writer.writerow([
            word_to_string(rec.word, names),
            format(rec.lam_j, ".17g"),
            format(rec.lam_rho, ".17g"),
            format(rec.ratio, ".17g"),
        ])
    return buf.getvalue()


@dataclass(frozen=True)
class SpectrumRecord:
    word: tuple
    lam_j: float
    lam_rho: float
    ratio: float


def _probe_words(j, words, generator_letters=None):
    """Translate a WordList over a probe alphabet into representation
    letters; prepend the cuff words, dropping short enumerated
    duplicates of them."""
    if generator_letters is None:
        generator_letters = list(range(1, words.num_generators + 1))
    if words.num_generators > len(generator_letters):
        raise PresentationMismatch(
            f"word list uses {words.num_generators} generators but only "
            f"{len(generator_letters)} probe letters are given")

    def translate(word):
        return tuple(
            generator_letters[abs(x) - 1] * (1 if x > 0 else -1)
            for x in word)

    cuff_words = [tuple(w) for w in j.cuff_words]
    cuff_keys = {canonical_key(w) for w in cuff_words}
    max_cuff_len = max(len(w) for w in cuff_words)
    out = list(cuff_words)
    for word in words.words:
        translated = translate(word)
        if (len(translated) <= max_cuff_len
                and canonical_key(translated) in cuff_keys):
            continue
        out.append(translated)
    return out


def ratio_spectrum(j, rho, words, generator_letters=None):
    """Per-word (lam_j, lam_rho, ratio) records over the word list (with
    cuff words prepended); words degenerate in j are excluded and
    counted, and must be degenerate in rho as well.

    Returns (records, excluded_count).
    """
    if j.names != rho.names:
        raise PresentationMismatch(
            "representations do not share a presentation")
    if isinstance(words, WordList):
        rep_words = _probe_words(j, words, generator_letters)
    else:
        rep_words = [tuple(w) for w in words]
    lam_j = _lengths_from_traces(_traces_by_length(j, rep_words))
    lam_rho = _lengths_from_traces(_traces_by_length(rho, rep_words))
    records = []
    excluded = 0
    for word, lj, lr in zip(rep_words, lam_j, lam_rho):
        if lj < DEGENERATE_J_TOL:
            if lr >= DEGENERATE_RHO_TOL:
                raise DegenerateViolation(
                    f"word {word} is degenerate in j (lam_j = {lj:.3g}) "
                    f"but has lam_rho = {lr:.3g}")
            excluded += 1
            continue
        records.append(SpectrumRecord(word, float(lj), float(lr),
                                      float(lr / lj)))
    return records, excluded


# -- cuff scaling -------------------------------------------------------


def _check_t(t):
    if not (0 <= t < 1):
        raise BadParameter(f"shrink parameter t = {t} outside [0, 1)")


def cuff_shrink(fn, t):
    """Scale every cuff length by (1 - t); twists unchanged."""
    _check_t(t)
    return FNCoordinates({c: v * (1.0 - t) for c, v in fn.lengths.items()},
                         dict(fn.twists))


def cuff_lengthen(fn, t):
    """Scale every cuff length by 1 / (1 - t); twists unchanged."""
    _check_t(t)
    return FNCoordinates({c: v / (1.0 - t) for c, v in fn.lengths.items()},
                         dict(fn.twists))


# -- probe generator selection ------------------------------------------


def probe_generating_letters(rep):
    """A generating subset of the graph-of-groups generators, obtained
    by eliminating one redundant pants generator per cuff relation when
    the relation permits it (acyclic dependencies only)."""
    from .surface import _slot_word

    eliminated = {}  # letter -> set of raw dependency letters
    for c, (side_a, side_b) in enumerate(rep.pd.cuffs):
        word_a, word_b = _slot_word(*side_a), _slot_word(*side_b)
        if tuple(rep.cuff_words[c]) == word_a:
            par_word, chi_word = word_a, word_b
        else:
            par_word, chi_word = word_b, word_a
        letters = [abs(x) for x in chi_word] + [abs(x) for x in par_word]
        if c not in rep.tree_cuffs:
            t_letter = rep.names.index(f"t{c}") + 1
            letters += [t_letter, t_letter]
        counts = {}
        for letter in letters:
            counts[letter] = counts.get(letter, 0) + 1

        def depends_on(letter, target, seen=None):
            if seen is None:
                seen = set()
            if letter in seen:
                return False
            seen.add(letter)
            return any(dep == target or depends_on(dep, target, seen)
                       for dep in eliminated.get(letter, ()))

        ordered = sorted(abs(x) for x in chi_word)
        ordered += sorted(abs(x) for x in par_word)
        for cand in ordered:
            if counts[cand] != 1 or cand in eliminated:
                continue
            if cand > 2 * rep.pd.num_pants:
                continue  # never eliminate an HNN letter
            others = [x for x in set(letters) if x != cand]
            if any(depends_on(other, cand) for other in others):
                continue
            eliminated[cand] = set(others)
            break
    return [i + 1 for i in range(len(rep.names))
            if i + 1 not in eliminated]


def _budgeted_probe_letters(rep, max_len):
    """The largest prefix of the probe generating letters whose
    enumeration fits the word cap."""
    letters = probe_generating_letters(rep)
    cap = word_cap()
    n = len(letters)
    while n > 1 and reduced_word_count(n, max_len) > cap:
        n -= 1
    return letters[:n]


# -- certificates -------------------------------------------------------


@dataclass(frozen=True)
class DominationCertificate:
    verdict: Verdict
    sup_ratio: float
    witness: tuple
    witness_string: str
    t: float
    max_word_len: int
    euler_rho: int
    excluded_words: int
    records: tuple
    names: tuple

    def to_json(self):
        data = {
            "verdict": self.verdict.value,
            "supRatio": self.sup_ratio,
            "witness": self.witness_string,
            "t": self.t,
            "maxWordLen": self.max_word_len,
            "eulerRho": self.euler_rho,
            "excludedWords": self.excluded_words,
        }
        return json.dumps(data, indent=2, sort_keys=True)

    def to_csv(self):
        return spectrum_csv(self.records, self.names)


def _certificate(j, rho, t, max_len, records, excluded):
    sup = max(rec.ratio for rec in records)
    witness = next(rec.word for rec in records
                   if rec.ratio >= sup - WITNESS_TIE_TOL)
    verdict = (Verdict.STRICTLY_DOMINATED if sup < 1.0 - STRICT_MARGIN
               else Verdict.NOT_CERTIFIED)
    return DominationCertificate(
        verdict=verdict,
        sup_ratio=float(sup),
        witness=witness,
        witness_string=word_to_string(witness, j.names),
        t=float(t),
        max_word_len=int(max_len),
        euler_rho=euler_class_surface(rho),
        excluded_words=int(excluded),
        records=tuple(records),
        names=tuple(j.names),
    )


def _certify_pair(j, rho, t, max_len):
    letters = _budgeted_probe_letters(j, max_len)
    words = enumerate_words(len(letters), max_len)
    records, excluded = ratio_spectrum(j, rho, words,
                                       generator_letters=letters)
    return _certificate(j, rho, t, max_len, records, excluded)


def strictly_dominated_fold(pd, fn, k, t, max_len):
    """Certificate that the Fuchsian assembly strictly dominates the
    Euler-class-k fold of its cuff-shrunk deformation."""
    _check_t(t)
    labels = prescribe_labeling(pd, k)
    j = assemble_fuchsian(pd, fn)
    _, rho = fold_surface(pd, cuff_shrink(fn, t), labels)
    return _certify_pair(j, rho, t, max_len)


def dominating_fuchsian(pd, fn, labels, t, max_len):
    """Certificate that the cuff-lengthened Fuchsian assembly strictly
    dominates the fold of the original coordinates."""
    _check_t(t)
    values = set(labels.labels.values())
    if values == {1} or values == {-1}:
        raise TrivialFold(
            "labels are all +1 or all -1; the fold is conjugate to a "
            "Fuchsian representation")
    _, rho = fold_surface(pd, fn, labels)
    j_prime = assemble_fuchsian(pd, cuff_lengthen(fn, t))
    return _certify_pair(j_prime, rho, t, max_len)
