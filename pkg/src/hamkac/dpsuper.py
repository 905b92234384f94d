"""The divided power Grassmann superalgebra Lambda(2,1;t) = O(2;t) (x) Lambda(1).

Monomials x1^(i1) x2^(i2) xi^j are keyed by the tuple (i1, i2, j) with
0 <= i1 < p^t1, 0 <= i2 < p^t2, j in {0, 1}.  Parity is j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .gfp import binom_mod_p, check_modulus

Mono = tuple[int, int, int]


@dataclass(frozen=True)
class Shape:
    p: int
    t1: int
    t2: int

    def __post_init__(self):
        check_modulus(self.p)
        if self.t1 < 1 or self.t2 < 1:
            raise ValueError("t1, t2 must be positive integers")

    @property
    def n1(self) -> int:
        return self.p ** self.t1

    @property
    def n2(self) -> int:
        return self.p ** self.t2

    def in_range(self, m: Mono) -> bool:
        i1, i2, j = m
        return 0 <= i1 < self.n1 and 0 <= i2 < self.n2 and j in (0, 1)

    def monomials(self) -> Iterator[Mono]:
        """All basis monomials in lexicographic (i1, i2, j) order."""
        for i1 in range(self.n1):
            for i2 in range(self.n2):
                for j in (0, 1):
                    yield (i1, i2, j)

    @property
    def dim(self) -> int:
        return 2 * self.n1 * self.n2

    def __str__(self):
        return "p=%d, t=(%d,%d)" % (self.p, self.t1, self.t2)


def degree(m: Mono) -> int:
    return m[0] + m[1] + m[2]


def parity(m: Mono) -> int:
    return m[2] & 1


@dataclass(frozen=True)
class SuperPoly:
    shape: Shape
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.shape.p
        clean = {}
        for m, c in self.terms.items():
            c %= p
            if c:
                if not self.shape.in_range(m):
                    raise ValueError("monomial %s out of range for %s" % (m, self.shape))
                clean[tuple(m)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def mono(cls, shape: Shape, i1: int, i2: int, j: int, c: int = 1) -> "SuperPoly":
        return cls(shape, {(i1, i2, j): c})

    @classmethod
    def one(cls, shape: Shape) -> "SuperPoly":
        return cls.mono(shape, 0, 0, 0)

    def is_zero(self) -> bool:
        return not self.terms

    @cached_property
    def parities(self) -> frozenset:
        return frozenset(parity(m) for m in self.terms)

    @property
    def parity(self) -> int:
        """Parity of a homogeneous element (0 for zero)."""
        ps = self.parities
        if len(ps) > 1:
            raise ValueError("element is not parity-homogeneous")
        return next(iter(ps), 0)

    def part(self, par: int) -> "SuperPoly":
        return SuperPoly(self.shape, {m: c for m, c in self.terms.items() if parity(m) == par})

    def __add__(self, other: "SuperPoly") -> "SuperPoly":
        _same_shape(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SuperPoly(self.shape, out)

    def scale(self, c: int) -> "SuperPoly":
        return SuperPoly(self.shape, {m: v * c for m, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "SuperPoly") -> "SuperPoly":
        return poly_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self.terms.items()))))

    def __str__(self):
        return format_poly(self)


def _same_shape(a: SuperPoly, b: SuperPoly):
    if a.shape != b.shape:
        raise ValueError("shape mismatch: %s vs %s" % (a.shape, b.shape))


def mono_mul(shape: Shape, a: Mono, b: Mono) -> tuple[Mono, int] | None:
    """Product of two basis monomials as (monomial, coefficient), or None if 0."""
    i1, i2, j = a[0] + b[0], a[1] + b[1], a[2] + b[2]
    if j > 1 or i1 >= shape.n1 or i2 >= shape.n2:
        return None
    p = shape.p
    c = binom_mod_p(i1, a[0], p) * binom_mod_p(i2, a[1], p) % p
    if c == 0:
        return None
    return (i1, i2, j), c


def poly_mul(a: SuperPoly, b: SuperPoly) -> SuperPoly:
    _same_shape(a, b)
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = mono_mul(a.shape, ma, mb)
            if r is not None:
                m, c = r
                out[m] = out.get(m, 0) + ca * cb * c
    return SuperPoly(a.shape, out)


def deriv_mono(k: int, m: Mono) -> Mono | None:
    """D_k on a basis monomial: the resulting monomial (coefficient 1) or None."""
    i1, i2, j = m
    if k == 1:
        return (i1 - 1, i2, j) if i1 > 0 else None
    if k == 2:
        return (i1, i2 - 1, j) if i2 > 0 else None
    if k == 3:
        # xi is the rightmost factor and the x's are even: no sign
        return (i1, i2, 0) if j == 1 else None
    raise ValueError("derivation index must be 1, 2 or 3")


def deriv(k: int, f: SuperPoly) -> SuperPoly:
    out = {}
    for m, c in f.terms.items():
        r = deriv_mono(k, m)
        if r is not None:
            out[r] = out.get(r, 0) + c
    return SuperPoly(f.shape, out)


DERIV_PARITY = {1: 0, 2: 0, 3: 1}


def format_mono(m: Mono) -> str:
    i1, i2, j = m
    parts = []
    if i1:
        parts.append("x1^(%d)" % i1)
    if i2:
        parts.append("x2^(%d)" % i2)
    if j:
        parts.append("xi")
    return " ".join(parts) or "1"


def format_poly(f: SuperPoly) -> str:
    """Debug form: sum of ``c*x1^(i1) x2^(i2) xi`` terms, lexicographic order."""
    if f.is_zero():
        return "0"
    return " + ".join("%d*%s" % (c, format_mono(m)) for m, c in sorted(f.terms.items()))
