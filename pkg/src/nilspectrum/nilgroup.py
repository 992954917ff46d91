"""Discrete Heisenberg group arithmetic and twisted conjugacy, by hand.

Elements are normal forms x^a y^b z^c with z = x^-1 y^-1 x y central; the
product rule keeps everything exact.  Twisted conjugacy under a lifted
automorphism reduces to one 2x2 integer linear system for the abelian part
plus a single divisibility condition on the center, so the class count can
be taken by brute-force partitioning of a finite box of representatives.
This route never touches the layer machinery and is the end-to-end check on
the product formula at rank 2, class 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .freelie import NotUnimodularError
from .intmat import Matrix, determinant, solve_integer


class DegenerateLayerError(ValueError):
    """Raised when det(a - identity) = 0 makes the class count infinite."""


@dataclass(frozen=True)
class Class2Element:
    """Normal form x^a y^b z^c."""

    a: int
    b: int
    c: int

    @classmethod
    def from_text(cls, text: str) -> "Class2Element":
        parts = [int(p.strip()) for p in text.strip().split(",")]
        if len(parts) != 3:
            raise ValueError("element text must have three comma-separated parts")
        return cls(*parts)

    def to_text(self) -> str:
        return f"{self.a},{self.b},{self.c}"


IDENTITY = Class2Element(0, 0, 0)


def multiply(u: Class2Element, v: Class2Element) -> Class2Element:
    # collecting y^b x^a' costs the commutator z^-(a'b)
    return Class2Element(u.a + v.a, u.b + v.b, u.c + v.c - v.a * u.b)


def inverse(u: Class2Element) -> Class2Element:
    return Class2Element(-u.a, -u.b, -u.c - u.a * u.b)


def power(u: Class2Element, n: int) -> Class2Element:
    if n < 0:
        return power(inverse(u), -n)
    result = IDENTITY
    square = u
    while n:
        if n & 1:
            result = multiply(result, square)
        square = multiply(square, square)
        n >>= 1
    return result


def commutator(u: Class2Element, v: Class2Element) -> Class2Element:
    return multiply(multiply(inverse(u), inverse(v)), multiply(u, v))


def _validate_unimodular_2x2(a: Matrix) -> int:
    if a.rows != 2 or a.cols != 2:
        raise NotUnimodularError("lifted automorphisms need a 2x2 matrix")
    det = determinant(a)
    if abs(det) != 1:
        raise NotUnimodularError("lifted automorphisms need |det| = 1")
    return det


def apply_lift(a: Matrix, u: Class2Element) -> Class2Element:
    """Image of u under the lift sending x, y to the rows of a and z to z^det."""
    det = _validate_unimodular_2x2(a)
    phi_x = Class2Element(a.entries[0][0], a.entries[0][1], 0)
    phi_y = Class2Element(a.entries[1][0], a.entries[1][1], 0)
    result = multiply(power(phi_x, u.a), power(phi_y, u.b))
    return multiply(result, Class2Element(0, 0, u.c * det))


@dataclass(frozen=True)
class TwistWitness:
    """An x with (x phi) g = f x, checked exactly on construction use."""

    x: Class2Element


def twisted_equivalent(a: Matrix, g: Class2Element, f: Class2Element):
    """Decide g ~ f under the lift of a; returns a TwistWitness or None.

    The abelianization forces (p, q) (a - identity) = (f - g)_ab, a
    nonsingular system; the center then asks for s with
    s (det a - 1) = w, where w is the center defect at s = 0 (det a = 1
    demands w = 0 outright).
    """
    det = _validate_unimodular_2x2(a)
    shifted = a - Matrix.identity(2)
    if determinant(shifted) == 0:
        raise DegenerateLayerError("det(a - identity) = 0: classes are not finite")
    target = (f.a - g.a, f.b - g.b)
    solved = solve_integer(shifted, target)
    if solved is None:
        return None
    (p, q), _ = solved
    base = Class2Element(p, q, 0)
    lhs = multiply(apply_lift(a, base), g)
    rhs = multiply(f, base)
    w = rhs.c - lhs.c
    scale = det - 1
    if scale == 0:
        if w != 0:
            return None
        s = 0
    else:
        if w % scale != 0:
            return None
        s = w // scale
    x = Class2Element(p, q, s)
    assert multiply(apply_lift(a, x), g) == multiply(f, x)
    return TwistWitness(x)


def count_twisted_classes(a: Matrix) -> int:
    """Partition a finite transversal box and count twisted classes.

    Needs det a = -1 and trace a != 0; representatives run over
    0 <= p, q < |det(a - identity)| and s in {0, 1}, since the abelian cosets
    have representatives below the Hermite pivots and the center has index
    |det a - 1| = 2.
    """
    det = _validate_unimodular_2x2(a)
    if det != -1:
        raise ValueError("class counting needs det a = -1")
    if a.trace() == 0:
        raise ValueError("class counting needs trace a != 0")
    shifted = a - Matrix.identity(2)
    box = abs(determinant(shifted))
    if box == 0:
        raise DegenerateLayerError("det(a - identity) = 0: classes are not finite")
    representatives: list = []
    for p in range(box):
        for q in range(box):
            for s in (0, 1):
                e = Class2Element(p, q, s)
                if not any(
                    twisted_equivalent(a, rep, e) for rep in representatives
                ):
                    representatives.append(e)
    return len(representatives)
