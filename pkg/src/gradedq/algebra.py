"""Free graded-commutative polynomial algebras over the rationals.

Elements are stored in canonical form: a dict from monomials to nonzero
``Fraction`` coefficients.  A monomial is a dense tuple of exponents indexed
by generator ordinal, so the factor order is always the declaration order of
the generators.  Odd generators carry exponent 0 or 1.

The Koszul sign of a product of two canonical monomials is the parity of the
number of (odd, odd) transpositions needed to merge them; it is computed with
bitmasks over the odd generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import AlgebraMismatch, DuplicateName, Inhomogeneous, NegativeDegree

Scalar = Union[int, Fraction]

_ids = itertools.count()


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    ordinal: int

    @property
    def parity(self) -> int:
        return self.degree % 2


class GradedAlgebra:
    """A free graded-commutative algebra on named generators.

    Algebras compare by identity; every polynomial keeps a reference to the
    algebra it lives in and arithmetic between different algebras raises
    ``AlgebraMismatch``.
    """

    def __init__(self, gens: Iterable[tuple[str, int]], name: str | None = None):
        gens = list(gens)
        seen = set()
        out = []
        for i, (gname, deg) in enumerate(gens):
            if gname in seen:
                raise DuplicateName(f"generator {gname!r} declared twice")
            if int(deg) < 0:
                raise NegativeDegree(f"generator {gname!r} has degree {deg}")
            seen.add(gname)
            out.append(Generator(gname, int(deg), i))
        self.id = next(_ids)
        self.name = name or f"A{self.id}"
        self.generators: tuple[Generator, ...] = tuple(out)
        self.index = {g.name: g.ordinal for g in out}
        self.degrees = tuple(g.degree for g in out)
        self.odd = tuple(g.ordinal for g in out if g.parity)
        self._unit = (0,) * len(out)
        # set lazily by tangent.shift_tangent / tangent.TangentAlgebra
        self._tangent = None
        self.tangent_info = None

    def __repr__(self):
        gens = " ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedAlgebra({self.name} {{ {gens} }})"

    def __len__(self):
        return len(self.generators)

    def __contains__(self, name):
        return name in self.index

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self.index[name]]
        except KeyError:
            raise KeyError(f"{name!r} is not a generator of {self.name}") from None

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    # element constructors

    def gen(self, name: str) -> "Polynomial":
        i = self.generator(name).ordinal
        mono = list(self._unit)
        mono[i] = 1
        return Polynomial(self, {tuple(mono): Fraction(1)})

    __getitem__ = gen

    def gens(self) -> list["Polynomial"]:
        return [self.gen(g.name) for g in self.generators]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {self._unit: c} if c else {})

    def monomial(self, exps: Mapping[str, int], coeff: Scalar = 1) -> "Polynomial":
        mono = list(self._unit)
        for n, e in exps.items():
            g = self.generator(n)
            if e < 0:
                raise ValueError("negative exponent")
            if g.parity and e > 1:
                return self.zero()
            mono[g.ordinal] = e
        return Polynomial(self, {tuple(mono): Fraction(coeff)} if coeff else {})

    # monomial helpers

    def mono_degree(self, mono: tuple[int, ...]) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees) if e)

    def odd_mask(self, mono: tuple[int, ...]) -> int:
        m = 0
        for i in self.odd:
            if mono[i]:
                m |= 1 << i
        return m

    def mono_mul(self, a: tuple[int, ...], b: tuple[int, ...]):
        """Return ``(sign, a*b)`` for canonical monomials, or None if zero."""
        am = self.odd_mask(a)
        bm = self.odd_mask(b)
        if am & bm:
            return None
        parity = 0
        if am and bm:
            m = am
            while m:
                low = m & -m
                i = low.bit_length() - 1
                parity += bin(bm & (low - 1)).count("1")
                m ^= low
        sign = -1 if parity & 1 else 1
        return sign, tuple(x + y for x, y in zip(a, b))

    def mono_factors(self, mono: tuple[int, ...]) -> list[tuple[int, int]]:
        return [(i, e) for i, e in enumerate(mono) if e]

    def mono_str(self, mono: tuple[int, ...]) -> str:
        parts = []
        for i, e in enumerate(mono):
            if e:
                n = self.generators[i].name
                parts.append(n if e == 1 else f"{n}^{e}")
        return "*".join(parts)

    def sort_key(self, mono: tuple[int, ...]):
        flat = []
        for i, e in enumerate(mono):
            flat.extend([i] * e)
        return (self.mono_degree(mono), tuple(flat))


def make_algebra(gens: Iterable[tuple[str, int]], name: str | None = None) -> GradedAlgebra:
    return GradedAlgebra(gens, name)


def tensor(*algebras: GradedAlgebra, name: str | None = None) -> GradedAlgebra:
    """Free product algebra: generators of each factor in order."""
    gens = [(g.name, g.degree) for A in algebras for g in A.generators]
    return GradedAlgebra(gens, name or "(" + "*".join(A.name for A in algebras) + ")")


def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Polynomial:
    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[tuple[int, ...], Fraction]):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # structure

    def _check(self, other: "Polynomial"):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.const(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra.id, frozenset(self.terms.items())))
        return self._hash

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        A = self.algebra
        out: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                r = A.mono_mul(a, b)
                if r is None:
                    continue
                s, m = r
                out[m] = out.get(m, 0) + s * ca * cb
        return Polynomial(A, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.algebra.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return self.algebra.zero()
        return Polynomial(self.algebra, {m: c * v for m, v in self.terms.items()})

    # grading

    def degrees(self) -> set[int]:
        return {self.algebra.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial."""
        ds = self.degrees()
        if len(ds) != 1:
            raise Inhomogeneous(f"{self} has degrees {sorted(ds)}")
        return ds.pop()

    def homogeneous_component(self, k: int) -> "Polynomial":
        A = self.algebra
        return Polynomial(A, {m: c for m, c in self.terms.items() if A.mono_degree(m) == k})

    def constant_term(self) -> Fraction:
        return self.terms.get(self.algebra._unit, Fraction(0))

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        mono = self.algebra.monomial(exps)
        if not mono.terms:
            return Fraction(0)
        (m,) = mono.terms
        return self.terms.get(m, Fraction(0))

    def support(self) -> set[str]:
        names = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    names.add(self.algebra.generators[i].name)
        return names

    def monomials(self) -> Iterator[tuple[Fraction, tuple[int, ...]]]:
        for m in sorted(self.terms, key=self.algebra.sort_key):
            yield self.terms[m], m

    def single_terms(self) -> Iterator["Polynomial"]:
        for c, m in self.monomials():
            yield Polynomial(self.algebra, {m: c})

    # text

    def __str__(self):
        if not self.terms:
            return "0"
        A = self.algebra
        out = []
        for c, m in self.monomials():
            body = A.mono_str(m)
            neg = c < 0
            a = -c if neg else c
            if not body:
                t = _fmt_coeff(a)
            elif a == 1:
                t = body
            else:
                t = _fmt_coeff(a) + "*" + body
            if not out:
                out.append("-" + t if neg else t)
            else:
                out.append((" - " if neg else " + ") + t)
        return "".join(out)

    def __repr__(self):
        return f"<{self.algebra.name}: {self}>"


# functional surface


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def scale(p: Polynomial, c: Scalar) -> Polynomial:
    return p.scale(c)


def degree_of(p: Polynomial) -> int:
    return p.degree()


def is_homogeneous(p: Polynomial) -> bool:
    return p.is_homogeneous()


def homogeneous_component(p: Polynomial, k: int) -> Polynomial:
    return p.homogeneous_component(k)


def normalize(p: Polynomial) -> Polynomial:
    """Re-canonicalize by rebuilding every term through multiplication."""
    A = p.algebra
    out = A.zero()
    for c, m in p.monomials():
        t = A.const(c)
        for i, e in enumerate(m):
            for _ in range(e):
                t = t * A.gen(A.generators[i].name)
        out = out + t
    return out


def embed(p: Polynomial, target: GradedAlgebra) -> Polynomial:
    """Map ``p`` into ``target`` by generator name (inclusion of a subalgebra)."""
    src = p.algebra
    if src is target:
        return p
    idx = []
    for g in src.generators:
        j = target.index.get(g.name)
        if j is None:
            if any(m[g.ordinal] for m in p.terms):
                raise AlgebraMismatch(f"{g.name!r} not in {target.name}")
            idx.append(None)
            continue
        if target.degrees[j] != g.degree:
            raise AlgebraMismatch(f"{g.name!r} has different degree in {target.name}")
        idx.append(j)
    out = {}
    unit = list(target._unit)
    for m, c in p.terms.items():
        tm = list(unit)
        for i, e in enumerate(m):
            if e:
                tm[idx[i]] = e
        # relative order of the retained generators must be preserved
        out[tuple(tm)] = c
    q = Polynomial(target, out)
    if not _order_preserving(src, target, idx):
        return normalize_from(p, target)
    return q


def _order_preserving(src, target, idx) -> bool:
    last = -1
    for j in idx:
        if j is None:
            continue
        if j < last:
            return False
        last = j
    return True


def normalize_from(p: Polynomial, target: GradedAlgebra) -> Polynomial:
    out = target.zero()
    src = p.algebra
    for c, m in p.monomials():
        t = target.const(c)
        for i, e in enumerate(m):
            for _ in range(e):
                t = t * target.gen(src.generators[i].name)
        out = out + t
    return out
