"""Words in a free generating set, as tuples of signed 1-based indices.

The integer +i stands for generator i, -i for its inverse.  Canonical
keys identify words up to cyclic rotation and inversion, which is the
right equivalence for unoriented free homotopy classes of curves.
"""

from __future__ import annotations


def free_reduce(word):
    out = []
    for letter in word:
        if letter == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def inverse_word(word):
    return tuple(-letter for letter in reversed(word))


def is_cyclically_reduced(word):
    word = free_reduce(word)
    return len(word) < 2 or word[0] != -word[-1]


def cyclic_reduce(word):
    word = free_reduce(word)
    while len(word) >= 2 and word[0] == -word[-1]:
        word = word[1:-1]
    return word


def canonical_key(word):
    """Least rotation among the word and its inverse; words with the
    same key name the same unoriented curve class."""
    best = None
    for w in (word, inverse_word(word)):
        for r in range(len(w)):
            rot = w[r:] + w[:r]
            if best is None or rot < best:
                best = rot
    return best if best is not None else ()


def word_to_string(word, names):
    if not word:
        return "1"
    parts = []
    for letter in word:
        name = names[abs(letter) - 1]
        parts.append(name if letter > 0 else name + "^-1")
    return "*".join(parts)


def string_to_word(text, names):
    if text.strip() == "1":
        return ()
    index = {name: i + 1 for i, name in enumerate(names)}
    out = []
    for part in text.split("*"):
        part = part.strip()
        sign = 1
        if part.endswith("^-1"):
            sign = -1
            part = part[:-3]
        if part not in index:
            raise ValueError(f"unknown generator {part!r}")
        out.append(sign * index[part])
    return tuple(out)
