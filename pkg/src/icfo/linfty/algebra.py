"""
Finite-type Lie n-algebras with exact rational structure constants.

L is graded in degrees 0..n-1 with a basis ordered by degree; l_k has degree
k - 2 and is stored on sorted basis tuples. Internally the brackets are
shifted to graded-symmetric brackets of degree -1 on L[1] (an element of
degree i in L has degree i + 1 there), where the Jacobi identities read

    sum_{i + j = N + 1} sum_{unshuffles s} eps(s) l_j(l_i(x_s1..x_si), x_s(i+1)..x_sN) = 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from icfo.linfty.graded import Monomial, decalage_sign, koszul_sort, sorted_tuples

logger = logging.getLogger(__name__)

Vec = dict[int, Fraction]
Bracket = dict[Monomial, Vec]


class JacobiError(ValueError):
    """Malformed structure constants for a Lie n-algebra."""


def vec_add(acc: dict[int, Fraction], v: Mapping[int, Fraction], c=1) -> None:
    for b, x in v.items():
        acc[b] = acc.get(b, Fraction(0)) + c * x


def vec_clean(v: Mapping[int, Fraction]) -> Vec:
    return {b: Fraction(x) for b, x in sorted(v.items()) if x}


@dataclass(frozen=True, eq=False)
class LieNAlgebra:
    n: int
    dims: tuple[int, ...]
    brackets: Mapping[int, Bracket] = field(default_factory=dict)
    names: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise JacobiError(f"a Lie n-algebra needs n >= 1, got {self.n}")
        if len(self.dims) != self.n or any(d < 0 for d in self.dims):
            raise JacobiError(f"dims must list {self.n} non-negative dimensions, got {list(self.dims)}")
        if self.names is not None and len(self.names) != self.size:
            raise JacobiError(f"{len(self.names)} basis names for a basis of size {self.size}")
        for k, table in self.brackets.items():
            if k < 1:
                raise JacobiError(f"bracket arity must be positive, got {k}")
            for inputs, out in table.items():
                self._check_entry(k, inputs, out)

    def _check_entry(self, k: int, inputs: Monomial, out: Mapping[int, Fraction]) -> None:
        if len(inputs) != k or any(not 0 <= b < self.size for b in inputs):
            raise JacobiError(f"l_{k} entry {list(inputs)} has bad indices")
        sign, ordered = koszul_sort(inputs, self.lparity, skew=True)
        if ordered != tuple(inputs) or sign == 0:
            raise JacobiError(f"l_{k} entry {list(inputs)} is not a sorted non-vanishing tuple")
        want = sum(self.degree(b) for b in inputs) + k - 2
        for b, c in out.items():
            if not 0 <= b < self.size:
                raise JacobiError(f"l_{k}{list(inputs)} has output index {b} out of range")
            if c and self.degree(b) != want:
                raise JacobiError(
                    f"l_{k}{list(inputs)} has output {b} in degree {self.degree(b)}, expected {want}"
                )

    def __repr__(self) -> str:
        return f"<LieNAlgebra {self.name or '?'} n={self.n} dims={list(self.dims)}>"

    @cached_property
    def size(self) -> int:
        return sum(self.dims)

    @cached_property
    def _degrees(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.dims) for _ in range(d))

    def degree(self, b: int) -> int:
        return self._degrees[b]

    def lparity(self, b: int) -> int:
        return self._degrees[b] % 2

    def vparity(self, b: int) -> int:
        return (self._degrees[b] + 1) % 2

    def basis_in_degree(self, i: int) -> range:
        start = sum(self.dims[:i])
        return range(start, start + (self.dims[i] if 0 <= i < self.n else 0))

    def label(self, b: int) -> str:
        return self.names[b] if self.names else f"x{b}"

    @property
    def max_arity(self) -> int:
        return self.n + 1

    # brackets
    def bracket(self, k: int, inputs: Sequence[int]) -> Vec:
        """l_k on basis elements in any order."""
        sign, key = koszul_sort(inputs, self.lparity, skew=True)
        if not sign:
            return {}
        out = self.brackets.get(k, {}).get(key)
        return {b: sign * c for b, c in out.items()} if out else {}

    @cached_property
    def shifted(self) -> dict[int, Bracket]:
        table: dict[int, Bracket] = {}
        for k, entries in self.brackets.items():
            for key, out in entries.items():
                s = decalage_sign([self.degree(b) for b in key])
                vec = vec_clean({b: s * c for b, c in out.items()})
                if vec:
                    table.setdefault(k, {})[key] = vec
        return table

    def shifted_bracket(self, k: int, inputs: Sequence[int]) -> Vec:
        """The graded-symmetric bracket on L[1], on basis elements in any order."""
        sign, key = koszul_sort(inputs, self.vparity)
        if not sign:
            return {}
        out = self.shifted.get(k, {}).get(key)
        return {b: sign * c for b, c in out.items()} if out else {}

    def evaluate(self, k: int, vectors: Sequence[Mapping[int, Fraction]]) -> Vec:
        """l_k extended multilinearly to vectors given as {basis: coefficient}."""
        acc: dict[int, Fraction] = {}

        def rec(pos: int, chosen: tuple[int, ...], coeff: Fraction) -> None:
            if pos == len(vectors):
                vec_add(acc, self.bracket(k, chosen), coeff)
                return
            for b, c in vectors[pos].items():
                if c:
                    rec(pos + 1, chosen + (b,), coeff * c)

        rec(0, (), Fraction(1))
        return vec_clean(acc)

    def differential(self, i: int) -> list[list[Fraction]]:
        """Matrix of l_1: L_i -> L_{i-1} (rows indexed by L_{i-1})."""
        rows = self.basis_in_degree(i - 1)
        cols = self.basis_in_degree(i)
        out = [[Fraction(0)] * len(cols) for _ in rows]
        for c, b in enumerate(cols):
            for r_b, x in self.bracket(1, (b,)).items():
                out[r_b - rows.start][c] = x
        return out


def from_entries(
    n: int,
    dims: Sequence[int],
    entries: Mapping[int, Iterable[tuple[Sequence[int], Mapping[int, object]]]],
    *,
    names: Sequence[str] | None = None,
    name: str = "",
) -> LieNAlgebra:
    """
    Build L from l_k values on basis tuples in any order; entries are
    normalized to sorted tuples with the graded skew-symmetry sign and summed.
    """
    degrees = [i for i, d in enumerate(dims) for _ in range(d)]
    parity = lambda b: degrees[b] % 2  # noqa: E731
    table: dict[int, dict[Monomial, dict[int, Fraction]]] = {}
    for k, rows in entries.items():
        for inputs, out in rows:
            if any(not 0 <= b < len(degrees) for b in inputs):
                raise JacobiError(f"l_{k} entry {list(inputs)} has bad indices")
            sign, key = koszul_sort(inputs, parity, skew=True)
            if not sign:
                if any(Fraction(c) for c in out.values()):
                    raise JacobiError(f"l_{k}{list(inputs)} must vanish by skew-symmetry")
                continue
            slot = table.setdefault(k, {}).setdefault(key, {})
            vec_add(slot, {b: Fraction(c) for b, c in out.items()}, sign)
    cleaned = {k: {key: vec_clean(v) for key, v in t.items() if vec_clean(v)} for k, t in table.items()}
    return LieNAlgebra(n, tuple(dims), cleaned, tuple(names) if names else None, name)


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    arity: int | None = None
    inputs: tuple[int, ...] | None = None
    value: Vec | None = None

    def describe(self, L: LieNAlgebra) -> dict | None:
        if self.ok:
            return None
        return {
            "arity": self.arity,
            "inputs": [L.label(b) for b in self.inputs],
            "value": {L.label(b): str(c) for b, c in self.value.items()},
        }


def jacobiator(L: LieNAlgebra, inputs: Sequence[int]) -> Vec:
    """The arity-N Jacobi expression on shifted basis elements."""
    N = len(inputs)
    acc: dict[int, Fraction] = {}
    for i in range(1, N + 1):
        j = N - i + 1
        if i not in L.shifted or j not in L.shifted:
            continue
        for S in combinations(range(N), i):
            rest = [p for p in range(N) if p not in S]
            swaps = sum(
                1 for p in rest for q in S if p < q and L.vparity(inputs[p]) and L.vparity(inputs[q])
            )
            eps = -1 if swaps % 2 else 1
            inner = L.shifted_bracket(i, [inputs[q] for q in S])
            for c, x in inner.items():
                outer = L.shifted_bracket(j, [c] + [inputs[p] for p in rest])
                vec_add(acc, outer, eps * x)
    return vec_clean(acc)


def check_jacobi(L: LieNAlgebra) -> JacobiReport:
    basis = list(range(L.size))
    for N in range(1, L.max_arity + 2):
        for inputs in sorted_tuples(basis, N, L.vparity):
            value = jacobiator(L, inputs)
            if value:
                logger.debug("Jacobi fails for %r at %s", L, inputs)
                return JacobiReport(False, N, tuple(inputs), value)
    return JacobiReport(True)
