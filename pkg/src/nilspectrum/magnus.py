"""Truncated power-series route to the layer matrices.

Generators embed into the free associative ring of noncommuting polynomials
as x_i -> 1 + X_i, truncated above a degree cutoff.  A group word maps to a
unit; a basic commutator of weight d maps to 1 plus its Lie element in
degree d (everything strictly between vanishes).  Substituting lift words
for the generators and solving against the tensor expansions of the basis
therefore recovers the degree-d layer matrix along a route completely
independent of the bracket-rewriting one.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

from .freelie import HallWord, NotUnimodularError, hall_basis, witt_dimension
from .intmat import Matrix, determinant, hermite_form, solve_integer

# A group word is a sequence of (generator index, exponent +-1) letters.
GroupWord = Tuple[Tuple[int, int], ...]


class TruncatedSeries:
    """Integer polynomial in noncommuting variables, truncated by degree."""

    __slots__ = ("rank", "cutoff", "coeffs")

    def __init__(self, rank: int, cutoff: int, coeffs: Dict[tuple, int]):
        self.rank = rank
        self.cutoff = cutoff
        self.coeffs = {w: c for w, c in coeffs.items() if c and len(w) <= cutoff}

    def coefficient(self, word: tuple) -> int:
        return self.coeffs.get(tuple(word), 0)

    def homogeneous(self, degree: int) -> Dict[tuple, int]:
        return {w: c for w, c in self.coeffs.items() if len(w) == degree}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.rank == other.rank
            and self.cutoff == other.cutoff
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.cutoff, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        terms = sorted(self.coeffs.items(), key=lambda it: (len(it[0]), it[0]))
        return f"TruncatedSeries(rank={self.rank}, cutoff={self.cutoff}, {terms})"


def one(rank: int, cutoff: int) -> TruncatedSeries:
    return TruncatedSeries(rank, cutoff, {(): 1})


def unit_of_generator(i: int, rank: int, cutoff: int) -> TruncatedSeries:
    if not 1 <= i <= rank:
        raise ValueError(f"generator index {i} outside 1..{rank}")
    return TruncatedSeries(rank, cutoff, {(): 1, (i,): 1})


def multiply(u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    if u.rank != v.rank or u.cutoff != v.cutoff:
        raise ValueError("series rank/cutoff mismatch")
    cutoff = u.cutoff
    acc: Dict[tuple, int] = {}
    for w1, c1 in u.coeffs.items():
        room = cutoff - len(w1)
        for w2, c2 in v.coeffs.items():
            if len(w2) > room:
                continue
            w = w1 + w2
            acc[w] = acc.get(w, 0) + c1 * c2
    return TruncatedSeries(u.rank, cutoff, acc)


def invert(u: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a series with unit constant term, via the geometric series."""
    lead = u.coeffs.get((), 0)
    if lead not in (1, -1):
        raise ValueError("series is not invertible: constant term must be +-1")
    if lead == -1:
        flipped = invert(TruncatedSeries(u.rank, u.cutoff, {w: -c for w, c in u.coeffs.items()}))
        return TruncatedSeries(u.rank, u.cutoff, {w: -c for w, c in flipped.coeffs.items()})
    nilpotent = dict(u.coeffs)
    nilpotent.pop((), None)
    n = TruncatedSeries(u.rank, u.cutoff, nilpotent)
    total = one(u.rank, u.cutoff)
    power = one(u.rank, u.cutoff)
    sign = 1
    for _ in range(u.cutoff):
        power = multiply(power, n)
        if not power.coeffs:
            break
        sign = -sign
        total = TruncatedSeries(
            u.rank,
            u.cutoff,
            {
                w: total.coeffs.get(w, 0) + sign * power.coeffs.get(w, 0)
                for w in set(total.coeffs) | set(power.coeffs)
            },
        )
    return total


def inverse_word(word: GroupWord) -> GroupWord:
    return tuple((i, -e) for i, e in reversed(word))


def commutator_word(u: GroupWord, v: GroupWord) -> GroupWord:
    return inverse_word(u) + inverse_word(v) + tuple(u) + tuple(v)


def hall_group_word(w: HallWord) -> GroupWord:
    """The iterated group commutator spelling a basic commutator."""
    if w.is_generator:
        return ((w.index, 1),)
    return commutator_word(hall_group_word(w.left), hall_group_word(w.right))


def evaluate_group_word(word: Sequence[tuple], rank: int, cutoff: int) -> TruncatedSeries:
    """Homomorphic image of a group word among the units of the series ring."""
    result = one(rank, cutoff)
    for i, e in word:
        if e not in (1, -1):
            raise ValueError("letters must carry exponent +1 or -1")
        factor = unit_of_generator(i, rank, cutoff)
        if e == -1:
            factor = invert(factor)
        result = multiply(result, factor)
    return result


def lift_word(a: Matrix, i: int) -> GroupWord:
    """Canonical lift of the i-th generator image: letters in ascending j."""
    letters = []
    for j in range(a.cols):
        e = a.entries[i][j]
        sign = 1 if e > 0 else -1
        letters.extend([(j + 1, sign)] * abs(e))
    return tuple(letters)


@lru_cache(maxsize=None)
def _tensor_expansion(w: HallWord) -> tuple:
    """rho(w) in the free associative ring: rho([u,v]) = uv - vu."""
    if w.is_generator:
        return (((w.index,), 1),)
    left = dict(_tensor_expansion(w.left))
    right = dict(_tensor_expansion(w.right))
    acc: Dict[tuple, int] = {}
    for w1, c1 in left.items():
        for w2, c2 in right.items():
            acc[w1 + w2] = acc.get(w1 + w2, 0) + c1 * c2
            acc[w2 + w1] = acc.get(w2 + w1, 0) - c1 * c2
    return tuple((w_, c) for w_, c in acc.items() if c)


@lru_cache(maxsize=None)
def _layer_context(rank: int, degree: int):
    basis = hall_basis(rank, degree)
    monomials = tuple(itertools.product(range(1, rank + 1), repeat=degree))
    index = {m: k for k, m in enumerate(monomials)}
    rows = []
    for w in basis:
        row = [0] * len(monomials)
        for mono, c in _tensor_expansion(w):
            row[index[mono]] = c
        rows.append(row)
    expansions = Matrix(rows)
    return basis, monomials, index, expansions, hermite_form(expansions)


def layer_matrix_via_magnus(
    a: Matrix, d: int, lift_words: Optional[Dict[int, GroupWord]] = None
) -> Matrix:
    """Degree-d layer matrix computed through the series embedding.

    Optionally accepts replacement lift words, one per generator; any lifts
    with the right exponent sums give the same answer, which is the point of
    computing layers from the abelianization alone.
    """
    if not a.is_square:
        raise NotUnimodularError("layer matrices need a square matrix")
    if abs(determinant(a)) != 1:
        raise NotUnimodularError("layer matrices are defined for |det| = 1 only")
    rank = a.rows
    if witt_dimension(rank, d) == 0:
        raise ValueError(f"empty degree-{d} layer at rank {rank}")
    basis, monomials, index, expansions, hf = _layer_context(rank, d)
    if lift_words is None:
        lift_words = {i: lift_word(a, i - 1) for i in range(1, rank + 1)}
    gen_series = {
        i: evaluate_group_word(lift_words[i], rank, d) for i in range(1, rank + 1)
    }
    series: Dict[HallWord, TruncatedSeries] = {}
    inverses: Dict[HallWord, TruncatedSeries] = {}

    def image(w: HallWord) -> TruncatedSeries:
        got = series.get(w)
        if got is None:
            if w.is_generator:
                got = gen_series[w.index]
            else:
                su, sv = image(w.left), image(w.right)
                got = multiply(
                    multiply(multiply(inverse_of(w.left), inverse_of(w.right)), su),
                    sv,
                )
            series[w] = got
        return got

    def inverse_of(w: HallWord) -> TruncatedSeries:
        got = inverses.get(w)
        if got is None:
            got = invert(image(w))
            inverses[w] = got
        return got

    rows = []
    for w in basis:
        s = image(w)
        for mono, c in s.coeffs.items():
            if 0 < len(mono) < d and c:
                raise RuntimeError("lower-degree component failed to vanish")
        target = [0] * len(monomials)
        for mono, c in s.homogeneous(d).items():
            target[index[mono]] = c
        solved = solve_integer(expansions, target, hermite=hf)
        if solved is None:
            raise RuntimeError("layer component outside the basis expansion span")
        particular, _ = solved
        rows.append(particular)
    return Matrix(rows)
