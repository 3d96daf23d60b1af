"""
Polynomial differential forms with exact rational coefficients.

A chart has coordinates x_1..x_N; a form is a dict from sorted index tuples
I (for dx_I = dx_i1 ^ ... ^ dx_ik) to polynomials in a sympy sparse ring.
On the m-simplex the chart is t_1..t_m, with t_0 = 1 - sum t_i and
dt_0 = -sum dt_i eliminated. On the prism Delta[1] x Delta[m] it is
u, t_1..t_m.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from sympy import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from icfo.linfty.linalg import to_fraction, to_qq

logger = logging.getLogger(__name__)

DtKey = tuple[int, ...]
Exponents = tuple[int, ...]


class DegreeCapExceeded(ValueError):
    """A form's polynomial degree is above the configured cap."""


@lru_cache(maxsize=None)
def form_ring(nvars: int) -> PolyRing:
    # x0 is a placeholder so that a point still gets a ring
    R, *_ = ring(",".join(f"x{i}" for i in range(nvars + 1)), QQ)
    return R


def _merge_sign(left: DtKey, right: DtKey) -> tuple[int, DtKey]:
    if set(left) & set(right):
        return 0, ()
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


@dataclass(frozen=True, eq=False)
class PolyForm:
    nvars: int
    terms: Mapping[DtKey, PolyElement]

    def __post_init__(self) -> None:
        for key in self.terms:
            if list(key) != sorted(set(key)) or any(not 1 <= i <= self.nvars for i in key):
                raise ValueError(f"bad dx index set {list(key)} for a chart with {self.nvars} coordinates")

    @property
    def ring(self) -> PolyRing:
        return form_ring(self.nvars)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.nvars == other.nvars and dict(self.terms) == dict(other.terms)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PolyForm({self.describe()})"

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def is_homogeneous(self, p: int) -> bool:
        return all(len(k) == p for k in self.terms)

    @property
    def poly_degree(self) -> int:
        return max((sum(mono) for poly in self.terms.values() for mono in poly.itermonoms()), default=0)

    def items(self) -> Iterator[tuple[DtKey, Exponents, Fraction]]:
        for key in sorted(self.terms):
            poly = self.terms[key]
            for mono in sorted(poly.itermonoms()):
                yield key, tuple(mono[1:]), to_fraction(poly[mono])

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            dx = "^".join(f"dx{i}" for i in key)
            parts.append(f"({self.terms[key].as_expr()}){'*' + dx if dx else ''}")
        return " + ".join(parts)

    # algebra
    def _check_chart(self, other: "PolyForm") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"forms live on charts of sizes {self.nvars} and {other.nvars}")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check_chart(other)
        out = dict(self.terms)
        for key, poly in other.terms.items():
            out[key] = out.get(key, self.ring.zero) + poly
        return _normal(self.nvars, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.nvars, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        q = to_qq(c)
        return _normal(self.nvars, {k: p * q for k, p in self.terms.items()})

    def wedge(self, other: "PolyForm") -> "PolyForm":
        self._check_chart(other)
        out: dict[DtKey, PolyElement] = {}
        for k1, p1 in self.terms.items():
            for k2, p2 in other.terms.items():
                sign, key = _merge_sign(k1, k2)
                if sign:
                    out[key] = out.get(key, self.ring.zero) + p1 * p2 * sign
        return _normal(self.nvars, out)

    def d(self) -> "PolyForm":
        gens = self.ring.gens
        out: dict[DtKey, PolyElement] = {}
        for key, poly in self.terms.items():
            for j in range(1, self.nvars + 1):
                if j in key:
                    continue
                q = poly.diff(gens[j])
                if not q:
                    continue
                sign, new = _merge_sign((j,), key)
                out[new] = out.get(new, self.ring.zero) + q * sign
        return _normal(self.nvars, out)

    def pullback(self, images: Sequence["PolyForm"], *, nvars: int | None = None) -> "PolyForm":
        """
        Pull back along the polynomial map whose coordinate functions x_i are
        the 0-forms images[i - 1] on another chart.
        """
        if len(images) != self.nvars:
            raise ValueError(f"pullback needs {self.nvars} coordinate images, got {len(images)}")
        target = images[0].nvars if images else nvars
        if target is None:
            raise ValueError("pulling back a form on a point needs the target chart size")
        R = form_ring(target)
        funcs = []
        for img in images:
            if img.nvars != target or not img.is_homogeneous(0):
                raise ValueError("coordinate images must be 0-forms on one chart")
            funcs.append(img.terms.get((), R.zero))
        diffs = [PolyForm(target, {(): f} if f else {}).d() for f in funcs]
        out = zero_form(target)
        for key, poly in self.terms.items():
            coeff = _substitute(poly, funcs, R)
            if not coeff:
                continue
            acc = PolyForm(target, {(): coeff})
            for i in key:
                acc = acc.wedge(diffs[i - 1])
                if acc.is_zero():
                    break
            out = out + acc
        return out

    def check_cap(self, degcap: int, *, what: str = "form") -> None:
        if self.poly_degree > degcap:
            raise DegreeCapExceeded(f"{what} has polynomial degree {self.poly_degree} above degcap {degcap}")


def _normal(nvars: int, raw: Mapping[DtKey, PolyElement]) -> PolyForm:
    return PolyForm(nvars, {k: p for k, p in sorted(raw.items()) if p})


def _substitute(poly: PolyElement, funcs: Sequence[PolyElement], R: PolyRing) -> PolyElement:
    out = R.zero
    for mono, c in poly.items():
        term = R(c)
        for i, e in enumerate(mono[1:]):
            if e:
                term = term * funcs[i] ** e
        out = out + term
    return out


def zero_form(nvars: int) -> PolyForm:
    return PolyForm(nvars, {})


def constant(nvars: int, c) -> PolyForm:
    R = form_ring(nvars)
    return _normal(nvars, {(): R(to_qq(c))})


def variable(nvars: int, i: int) -> PolyForm:
    """The coordinate function x_i (1 <= i <= nvars)."""
    if not 1 <= i <= nvars:
        raise ValueError(f"coordinate {i} out of range for a chart with {nvars} coordinates")
    return PolyForm(nvars, {(): form_ring(nvars).gens[i]})


def barycentric(m: int, i: int) -> PolyForm:
    """t_i on the m-simplex, with t_0 = 1 - t_1 - ... - t_m."""
    if i == 0:
        out = constant(m, 1)
        for j in range(1, m + 1):
            out = out - variable(m, j)
        return out
    return variable(m, i)


def from_terms(nvars: int, terms: Mapping[Sequence[int], Mapping[Sequence[int], object]]) -> PolyForm:
    """Build a form from {dx indices: {exponent vector: coefficient}}."""
    R = form_ring(nvars)
    raw: dict[DtKey, PolyElement] = {}
    for key, coeffs in terms.items():
        key = tuple(key)
        if len(set(key)) != len(key):
            continue
        dt = tuple(sorted(key))
        inversions = sum(1 for a in range(len(key)) for b in range(a + 1, len(key)) if key[a] > key[b])
        sign = -1 if inversions % 2 else 1
        poly = R.zero
        for exps, c in coeffs.items():
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"exponent vector {list(exps)} does not fit {nvars} coordinates")
            poly = poly + R.from_dict({(0,) + tuple(int(e) for e in exps): to_qq(c)})
        raw[dt] = raw.get(dt, R.zero) + poly * sign
    return _normal(nvars, raw)


def monotone_images(theta: Sequence[int], m: int) -> list[PolyForm]:
    """
    Images of t_1..t_m under the affine map Delta[k] -> Delta[m] sending vertex
    j to vertex theta[j]; t_i pulls back to the sum of s_j over theta(j) = i.
    """
    k = len(theta) - 1
    if any(a > b for a, b in zip(theta, theta[1:])) or (theta and (theta[0] < 0 or theta[-1] > m)):
        raise ValueError(f"{tuple(theta)} is not a monotone map into [{m}]")
    images = []
    for i in range(1, m + 1):
        acc = zero_form(k)
        for j, t in enumerate(theta):
            if t == i:
                acc = acc + barycentric(k, j)
        images.append(acc)
    return images


def pullback_simplex(form: PolyForm, theta: Sequence[int]) -> PolyForm:
    """Pull a form on Delta[m] back along the operator theta: [k] -> [m]."""
    return form.pullback(monotone_images(theta, form.nvars), nvars=len(theta) - 1)


def coface(m: int, i: int) -> tuple[int, ...]:
    """delta^i: [m-1] -> [m], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(m))


def codegeneracy(m: int, i: int) -> tuple[int, ...]:
    """sigma^i: [m+1] -> [m], hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(m + 2))


def integrate_interval(form: PolyForm) -> Fraction:
    """Integral of a 1-form on Delta[1] from vertex 0 to vertex 1."""
    if form.nvars != 1 or not form.is_homogeneous(1):
        raise ValueError("integration over an edge needs a 1-form on Delta[1]")
    total = Fraction(0)
    for _, exps, c in form.items():
        total += c / (exps[0] + 1)
    return total
