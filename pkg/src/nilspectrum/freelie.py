"""Free Lie ring on r generators, truncated by degree.

Basis elements are basic commutators (Hall words): a generator x1..xr, or a
bracket [u, v] of Hall words subject to the Hall admissibility condition.
Ordering is by degree first, then lexicographically on the bracket
structure.  Admissibility compares with the generator orientation reversed
(x1 heaviest), which is exactly the choice that makes the classical
left-normed basic commutator lists come out verbatim:

    degree 2, rank 2:  [x,y]
    degree 3, rank 2:  [[x,y],x], [[x,y],y]
    degree 4, rank 2:  [[[x,y],x],x], [[[x,y],y],x], [[[x,y],y],y]
    degree 2, rank 3:  [x,y], [x,z], [y,z]

Arbitrary brackets are rewritten into the basis with antisymmetry and the
Jacobi identity; the rewriting terminates because a non-admissible pair
either flips into an admissible one or strictly descends in the Hall order.

The degree-d layer functor sends a unimodular matrix a (acting on rows of
the abelianization) to its action on the degree-d basis, again row by row.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

from .intmat import Matrix, determinant


class NotUnimodularError(ValueError):
    """Raised when a matrix with |det| != 1 is handed to the Lie functor."""


_GENERATOR_NAMES = {1: "x", 2: "y", 3: "z"}
_NAME_TO_INDEX = {"x": 1, "y": 2, "z": 3}


class HallWord:
    """A generator or an admissible bracket pair of Hall words."""

    __slots__ = ("left", "right", "index", "degree", "key", "hall_key", "_hash")

    def __init__(self, left=None, right=None, index=None):
        if index is not None:
            self.left = None
            self.right = None
            self.index = index
            self.degree = 1
            self.key = (1, 0, index)
            self.hall_key = (1, 0, -index)
        else:
            self.left = left
            self.right = right
            self.index = None
            self.degree = left.degree + right.degree
            self.key = (self.degree, 1, left.key, right.key)
            self.hall_key = (self.degree, 1, left.hall_key, right.hall_key)
        self._hash = hash(self.key)

    @property
    def is_generator(self) -> bool:
        return self.index is not None

    def __eq__(self, other) -> bool:
        return isinstance(other, HallWord) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other) -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        if self.is_generator:
            return _GENERATOR_NAMES.get(self.index, f"x{self.index}")
        return f"[{self.left},{self.right}]"

    def __repr__(self) -> str:
        return f"HallWord({self})"


def generator(i: int) -> HallWord:
    assert i >= 1
    return HallWord(index=i)


def is_hall_pair(u: HallWord, v: HallWord) -> bool:
    """Admissibility of [u, v]: u above v, and u.right must not exceed v."""
    if u.hall_key <= v.hall_key:
        return False
    return u.is_generator or u.right.hall_key <= v.hall_key


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        else:
            p += 1
    if n > 1:
        result = -result
    return result


def witt_dimension(r: int, d: int) -> int:
    """Number of degree-d basis elements: (1/d) * sum mu(e) r^(d/e) over e | d."""
    if r < 1 or d < 1:
        raise ValueError("rank and degree must be positive")
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * r ** (d // e)
    assert total % d == 0
    return total // d


class HallBasis:
    """Canonically ordered degree-d slice of the Hall basis."""

    __slots__ = ("rank", "degree", "words", "position")

    def __init__(self, rank: int, degree: int, words: tuple):
        self.rank = rank
        self.degree = degree
        self.words = words
        self.position = {w: i for i, w in enumerate(words)}

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


@lru_cache(maxsize=None)
def _hall_words(rank: int, degree: int) -> tuple:
    if degree == 1:
        return tuple(generator(i) for i in range(1, rank + 1))
    found = []
    for left_degree in range(1, degree):
        for u in _hall_words(rank, left_degree):
            for v in _hall_words(rank, degree - left_degree):
                if is_hall_pair(u, v):
                    found.append(HallWord(u, v))
    found.sort(key=lambda w: w.key)
    return tuple(found)


@lru_cache(maxsize=None)
def hall_basis(rank: int, degree: int) -> HallBasis:
    if rank < 1 or degree < 1:
        raise ValueError("rank and degree must be positive")
    return HallBasis(rank, degree, _hall_words(rank, degree))


_PAIR_CACHE: dict = {}


def _pair_product(u: HallWord, v: HallWord) -> tuple:
    """[u, v] for Hall words u, v as a tuple of (basis word, coefficient)."""
    if u == v:
        return ()
    cached = _PAIR_CACHE.get((u, v))
    if cached is not None:
        return cached
    if u.hall_key < v.hall_key:
        result = tuple((w, -c) for w, c in _pair_product(v, u))
    elif is_hall_pair(u, v):
        result = ((HallWord(u, v), 1),)
    else:
        # u = [a, b] with b above v; Jacobi: [[a,b],v] = [[a,v],b] - [[b,v],a]
        a, b = u.left, u.right
        acc: dict = {}
        for w, c in _pair_product(a, v):
            for w2, c2 in _pair_product(w, b):
                acc[w2] = acc.get(w2, 0) + c * c2
        for w, c in _pair_product(b, v):
            for w2, c2 in _pair_product(w, a):
                acc[w2] = acc.get(w2, 0) - c * c2
        result = tuple((w, c) for w, c in acc.items() if c)
    _PAIR_CACHE[(u, v)] = result
    return result


def _bracket_elements(p: dict, q: dict) -> dict:
    acc: dict = {}
    for wu, cu in p.items():
        for wv, cv in q.items():
            coeff = cu * cv
            for w, c in _pair_product(wu, wv):
                acc[w] = acc.get(w, 0) + coeff * c
    return {w: c for w, c in acc.items() if c}


class LieVector:
    """Homogeneous Lie ring element in basis coordinates."""

    __slots__ = ("degree", "coords")

    def __init__(self, degree: int, coords: tuple):
        self.degree = degree
        self.coords = tuple(int(c) for c in coords)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LieVector)
            and self.degree == other.degree
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"LieVector(degree={self.degree}, coords={self.coords})"


def parse_bracket(text: str):
    """Parse a bracket expression like "[[x,y],x2]" into nested tuples.

    Generators are x1..xr; x, y, z alias x1, x2, x3.  Returns an int for a
    generator or a (left, right) pair of parsed subtrees.
    """
    text = "".join(text.split())
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of bracket expression")
        if text[pos] == "[":
            pos += 1
            left = parse()
            if pos >= len(text) or text[pos] != ",":
                raise ValueError("expected ',' in bracket expression")
            pos += 1
            right = parse()
            if pos >= len(text) or text[pos] != "]":
                raise ValueError("expected ']' in bracket expression")
            pos += 1
            return (left, right)
        start = pos
        while pos < len(text) and text[pos] not in ",]":
            pos += 1
        token = text[start:pos]
        if token in _NAME_TO_INDEX:
            return _NAME_TO_INDEX[token]
        if token.startswith("x") and token[1:].isdigit():
            return int(token[1:])
        raise ValueError(f"bad generator token {token!r}")

    tree = parse()
    if pos != len(text):
        raise ValueError("trailing junk in bracket expression")
    return tree


def _tree_degree(tree) -> int:
    if isinstance(tree, int):
        return 1
    return _tree_degree(tree[0]) + _tree_degree(tree[1])


def _tree_element(tree, rank: int) -> dict:
    if isinstance(tree, int):
        if not 1 <= tree <= rank:
            raise ValueError(f"generator index {tree} out of range for rank {rank}")
        return {generator(tree): 1}
    return _bracket_elements(
        _tree_element(tree[0], rank), _tree_element(tree[1], rank)
    )


def normalize_bracket(tree, rank: int, degree: int) -> LieVector:
    """Rewrite a bracket expression into degree-d basis coordinates.

    Accepts a text expression or a nested tuple tree over 1-based generator
    indices.  The tree must be homogeneous of the requested degree.
    """
    if isinstance(tree, str):
        tree = parse_bracket(tree)
    if _tree_degree(tree) != degree:
        raise ValueError("bracket expression does not have the requested degree")
    element = _tree_element(tree, rank)
    basis = hall_basis(rank, degree)
    coords = [0] * len(basis)
    for w, c in element.items():
        coords[basis.position[w]] = c
    return LieVector(degree, tuple(coords))


def induced_layer_matrix(a: Matrix, d: int) -> Matrix:
    """Degree-d Lie functor of a unimodular matrix, in basis coordinates.

    Row i of a is the image of the i-th generator in the abelianization;
    row k of the result is the image of the k-th degree-d basis element.
    """
    if not a.is_square:
        raise NotUnimodularError("layer matrices need a square matrix")
    if abs(determinant(a)) != 1:
        raise NotUnimodularError("layer matrices are defined for |det| = 1 only")
    if d < 1:
        raise ValueError("degree must be positive")
    rank = a.rows
    basis = hall_basis(rank, d)
    if not len(basis):
        raise ValueError(f"empty degree-{d} layer at rank {rank}")
    images = {
        generator(i + 1): {
            generator(j + 1): a.entries[i][j]
            for j in range(rank)
            if a.entries[i][j]
        }
        for i in range(rank)
    }

    def image(w: HallWord) -> dict:
        got = images.get(w)
        if got is None:
            got = _bracket_elements(image(w.left), image(w.right))
            images[w] = got
        return got

    rows = []
    for w in basis:
        coords = [0] * len(basis)
        for part, c in image(w).items():
            coords[basis.position[part]] = c
        rows.append(coords)
    return Matrix(rows)
