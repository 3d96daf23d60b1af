"""
Exact linear algebra over the rationals.

Vectors are lists of Fractions; matrices are lists of rows. Row reduction is
delegated to sympy's DomainMatrix over QQ.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def to_qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def domain_matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    return DomainMatrix([[to_qq(v) for v in row] for row in rows], (len(rows), ncols), QQ)


@dataclass(frozen=True)
class Echelon:
    """Reduced row echelon form of the rows of a matrix: a basis of its row space."""

    rows: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]
    ncols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Sequence) -> Vector:
        """v minus its component along the row space, zero on every pivot column."""
        out = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            c = out[p]
            if c:
                out = [a - c * b for a, b in zip(out, row)]
        return out

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of v in the echelon basis; v must lie in the row space."""
        if not self.contains(v):
            raise ValueError("vector is not in the row space")
        return [Fraction(v[p]) for p in self.pivots]

    def free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [c for c in range(self.ncols) if c not in piv]


def echelon(rows: Sequence[Sequence], ncols: int) -> Echelon:
    if not rows:
        return Echelon((), (), ncols)
    reduced, pivots = domain_matrix(rows, ncols).rref()
    table = reduced.to_list()
    kept = tuple(tuple(to_fraction(q) for q in table[r]) for r in range(len(pivots)))
    return Echelon(kept, tuple(pivots), ncols)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return echelon(rows, ncols).rank


def transpose(rows: Sequence[Sequence], ncols: int) -> Matrix:
    return [[Fraction(rows[r][c]) for r in range(len(rows))] for c in range(ncols)]


def apply(matrix: Sequence[Sequence], v: Sequence) -> Vector:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in matrix]


def nullspace(matrix: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {v : matrix v = 0}, one vector per free column."""
    ech = echelon(matrix, ncols)
    basis = []
    for free in ech.free_columns():
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(ech.rows, ech.pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def solve(matrix: Sequence[Sequence], b: Sequence, ncols: int) -> Vector | None:
    """One solution of matrix x = b (free variables set to zero), or None."""
    aug = [list(row) + [b[r]] for r, row in enumerate(matrix)]
    ech = echelon(aug, ncols + 1)
    if ncols in ech.pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(ech.rows, ech.pivots):
        x[p] = row[ncols]
    return x


def extend_basis(base: Sequence[Sequence], candidates: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Candidates, in order, that are independent of base and of the ones already taken."""
    taken: list[Vector] = []
    current = rank(list(base), ncols)
    for v in candidates:
        r = rank(list(base) + taken + [list(v)], ncols)
        if r > current:
            taken.append([Fraction(x) for x in v])
            current = r
    return taken
