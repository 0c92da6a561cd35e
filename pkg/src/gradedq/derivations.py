"""Graded derivations and algebra morphisms, stored by their generator images.

Both are maps of function algebras ``src -> dst``.  For an
``AlgebraMorphism`` this is the pullback, so the geometric map runs the other
way: a morphism with ``src = fiber`` and ``dst = base`` is a gauge field
``base -> fiber``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .algebra import GradedAlgebra, Polynomial, Scalar, embed
from .certificates import Certificate, failed, passed
from .errors import AlgebraMismatch, DegreeMismatch, EvenDegree


def _images_for(src: GradedAlgebra, dst: GradedAlgebra, images: Mapping[str, Polynomial]):
    out = []
    for name in images:
        if name not in src.index:
            raise AlgebraMismatch(f"{name!r} is not a generator of {src.name}")
    for g in src.generators:
        img = images.get(g.name)
        if img is None:
            img = dst.zero()
        elif isinstance(img, (int, Fraction)):
            img = dst.const(img)
        elif img.algebra is not dst:
            raise AlgebraMismatch(f"image of {g.name} lives in {img.algebra.name}, expected {dst.name}")
        out.append(img)
    return tuple(out)


class AlgebraMorphism:
    """Degree-preserving algebra map ``src -> dst`` fixed on generators."""

    def __init__(self, src: GradedAlgebra, dst: GradedAlgebra,
                 images: Mapping[str, Polynomial], name: str | None = None):
        self.src = src
        self.dst = dst
        self.name = name or "phi"
        self.images = _images_for(src, dst, images)
        for g, img in zip(src.generators, self.images):
            if img and (not img.is_homogeneous() or img.degree() != g.degree):
                raise DegreeMismatch(
                    f"{self.name}: image of {g.name} must have degree {g.degree}, got {img}")
        self._cache: dict = {}

    def image(self, name: str) -> Polynomial:
        return self.images[self.src.index[name]]

    def as_dict(self) -> dict[str, Polynomial]:
        return {g.name: img for g, img in zip(self.src.generators, self.images)}

    def _mono(self, mono):
        r = self._cache.get(mono)
        if r is None:
            r = self.dst.one()
            for i, e in enumerate(mono):
                if e:
                    r = r * (self.images[i] ** e)
            self._cache[mono] = r
        return r

    def __call__(self, p: Polynomial) -> Polynomial:
        if p.algebra is not self.src:
            raise AlgebraMismatch(f"{self.name} expects {self.src.name}, got {p.algebra.name}")
        out = self.dst.zero()
        for m, c in p.terms.items():
            out = out + self._mono(m).scale(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return self.src is other.src and self.dst is other.dst and self.images == other.images

    __hash__ = None

    def __repr__(self):
        body = "; ".join(f"{g.name} -> {img}" for g, img in zip(self.src.generators, self.images))
        return f"AlgebraMorphism({self.name}: {self.src.name} -> {self.dst.name} {{ {body} }})"


def apply_morphism(phi: AlgebraMorphism, p: Polynomial) -> Polynomial:
    return phi(p)


def identity_morphism(A: GradedAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(A, A, {g.name: A.gen(g.name) for g in A.generators}, name="id")


def compose(phi: AlgebraMorphism, psi: AlgebraMorphism) -> AlgebraMorphism:
    """Pullback composite: ``compose(phi, psi)(p) == psi(phi(p))``."""
    if phi.dst is not psi.src:
        raise AlgebraMismatch("compose: phi.dst must be psi.src")
    return AlgebraMorphism(phi.src, psi.dst,
                           {g.name: psi(img) for g, img in zip(phi.src.generators, phi.images)},
                           name=f"{psi.name}.{phi.name}")


def inclusion(sub: GradedAlgebra, big: GradedAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(sub, big, {g.name: big.gen(g.name) for g in sub.generators},
                           name=f"incl_{sub.name}")


class Derivation:
    """Graded derivation of ``degree`` from ``src`` to ``dst``.

    Without ``along`` this is an ordinary derivation (``src is dst``).  With
    ``along = phi`` it is a derivation covering ``phi``:
    ``D(gh) = D(g) phi(h) + (-1)^{deg D deg g} phi(g) D(h)``.
    """

    def __init__(self, src: GradedAlgebra, degree: int, images: Mapping[str, Polynomial],
                 along: AlgebraMorphism | None = None, dst: GradedAlgebra | None = None,
                 name: str | None = None):
        if along is not None:
            if along.src is not src:
                raise AlgebraMismatch("derivation along phi must start at phi.src")
            dst = along.dst
        else:
            if dst is not None and dst is not src:
                raise AlgebraMismatch("a derivation without `along` maps an algebra to itself")
            dst = src
        self.src = src
        self.dst = dst
        self.degree = int(degree)
        self.along = along
        self.name = name or "D"
        self.images = _images_for(src, dst, images)
        for g, img in zip(src.generators, self.images):
            if img and (not img.is_homogeneous() or img.degree() != g.degree + self.degree):
                raise DegreeMismatch(
                    f"{self.name}: image of {g.name} must have degree "
                    f"{g.degree + self.degree}, got {img}")
        self._cache: dict = {}

    # access

    def image(self, name: str) -> Polynomial:
        return self.images[self.src.index[name]]

    def as_dict(self) -> dict[str, Polynomial]:
        return {g.name: img for g, img in zip(self.src.generators, self.images)}

    def is_zero(self) -> bool:
        return not any(self.images)

    @property
    def parity(self) -> int:
        return self.degree % 2

    # application

    def _pull(self, mono):
        if self.along is None:
            return Polynomial(self.dst, {mono: Fraction(1)})
        return self.along._mono(mono)

    def _mono(self, mono):
        r = self._cache.get(mono)
        if r is not None:
            return r
        A = self.src
        r = self.dst.zero()
        n = len(mono)
        zero = (0,) * n
        for i, e in enumerate(mono):
            if not e:
                continue
            img = self.images[i]
            if not img:
                continue
            prefix = mono[:i] + zero[i:]
            suffix = zero[: i + 1] + mono[i + 1:]
            sign = -1 if (self.degree * A.mono_degree(prefix)) % 2 else 1
            rest = list(zero)
            rest[i] = e - 1
            mid = self._pull(tuple(rest)).scale(e) if e > 1 else None
            t = self._pull(prefix)
            if mid is not None:
                t = t * mid
            t = t * img * self._pull(suffix)
            r = r + t.scale(sign)
        self._cache[mono] = r
        return r

    def __call__(self, p: Polynomial) -> Polynomial:
        if p.algebra is not self.src:
            raise AlgebraMismatch(f"{self.name} expects {self.src.name}, got {p.algebra.name}")
        out = self.dst.zero()
        for m, c in p.terms.items():
            out = out + self._mono(m).scale(c)
        return out

    # linear structure

    def _same_shape(self, other: "Derivation"):
        if self.src is not other.src or self.dst is not other.dst or self.along != other.along:
            raise AlgebraMismatch("derivations act between different algebras")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._same_shape(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise DegreeMismatch("cannot add derivations of different degree")
        return Derivation(self.src, self.degree,
                          {g.name: a + b for g, a, b in zip(self.src.generators, self.images, other.images)},
                          along=self.along, dst=None if self.along else self.dst, name=self.name)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "Derivation":
        return Derivation(self.src, self.degree,
                          {g.name: img.scale(c) for g, img in zip(self.src.generators, self.images)},
                          along=self.along, name=self.name)

    def __rmul__(self, h):
        """``h * D`` for a scalar or a homogeneous polynomial ``h`` in ``dst``."""
        if isinstance(h, (int, Fraction)):
            return self.scale(h)
        if isinstance(h, Polynomial):
            if h.algebra is not self.dst:
                raise AlgebraMismatch("coefficient must live in the derivation's target")
            if not h:
                return zero_derivation(self.src, self.degree, along=self.along)
            return Derivation(self.src, self.degree + h.degree(),
                              {g.name: h * img for g, img in zip(self.src.generators, self.images)},
                              along=self.along, name=self.name)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.src is not other.src or self.dst is not other.dst:
            return False
        if self.along != other.along:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.images == other.images

    __hash__ = None

    def with_name(self, name: str) -> "Derivation":
        d = Derivation(self.src, self.degree, self.as_dict(), along=self.along, name=name)
        return d

    def __repr__(self):
        body = "; ".join(f"{g.name} -> {img}" for g, img in zip(self.src.generators, self.images) if img)
        return f"Derivation({self.name} deg {self.degree} on {self.src.name} {{ {body} }})"


def apply_derivation(D: Derivation, p: Polynomial) -> Polynomial:
    return D(p)


def zero_derivation(A: GradedAlgebra, degree: int = 0, along: AlgebraMorphism | None = None) -> Derivation:
    return Derivation(A, degree, {}, along=along, name="0")


def coordinate_field(A: GradedAlgebra, name: str, coeff: Polynomial | Scalar = 1) -> Derivation:
    """``coeff * d/d(name)``; degree ``deg(coeff) - deg(name)``."""
    g = A.generator(name)
    if not isinstance(coeff, Polynomial):
        coeff = A.const(coeff)
    deg = (coeff.degree() if coeff else 0) - g.degree
    return Derivation(A, deg, {name: coeff}, name=f"d/d{name}")


def euler_field(A: GradedAlgebra) -> Derivation:
    """The grading operator: ``g -> deg(g) g``."""
    return Derivation(A, 0, {g.name: A.gen(g.name).scale(g.degree) for g in A.generators},
                      name="euler")


def extend(D: Derivation, big: GradedAlgebra) -> Derivation:
    """Extend a derivation of a subalgebra by zero on the remaining generators."""
    if D.along is not None:
        raise AlgebraMismatch("only plain derivations can be extended")
    images = {g.name: embed(img, big) for g, img in zip(D.src.generators, D.images)}
    return Derivation(big, D.degree, images, name=D.name)


def commutator(X: Derivation, Y: Derivation) -> Derivation:
    """Graded commutator ``X Y - (-1)^{|X||Y|} Y X``."""
    if X.along is not None or Y.along is not None:
        raise AlgebraMismatch("commutator needs derivations without `along`")
    if X.src is not Y.src:
        raise AlgebraMismatch(f"{X.src.name} vs {Y.src.name}")
    A = X.src
    s = -1 if (X.degree * Y.degree) % 2 else 1
    images = {}
    for g, xg, yg in zip(A.generators, X.images, Y.images):
        images[g.name] = X(yg) - Y(xg).scale(s)
    return Derivation(A, X.degree + Y.degree, images, name=f"[{X.name},{Y.name}]")


def compose_apply(ops, p: Polynomial) -> Polynomial:
    """Apply operators right-to-left: ``compose_apply([A, B], p) == A(B(p))``."""
    for op in reversed(ops):
        p = op(p)
    return p


def check_nilpotent(Q: Derivation) -> Certificate:
    """Certify ``Q^2 = 0`` by checking ``Q(Q(g)) = 0`` on every generator.

    Sufficient because for odd ``Q`` the square ``Q^2 = [Q,Q]/2`` is itself a
    derivation.
    """
    if Q.along is not None:
        raise AlgebraMismatch("nilpotency is defined for derivations without `along`")
    if Q.degree % 2 == 0:
        raise EvenDegree(f"{Q.name} has even degree {Q.degree}")
    for g, img in zip(Q.src.generators, Q.images):
        r = Q(img)
        if r:
            return failed("nilpotent", f"{Q.name}^2({g.name})", r)
    return passed("nilpotent")


def ad(Q: Derivation, X: Derivation) -> Derivation:
    return commutator(Q, X)


def derived_bracket(X: Derivation, Y: Derivation, Q: Derivation) -> Derivation:
    """Derived bracket ``[X,Y]_Q = (-1)^{|X|+1} [[Q,X],Y] = [[X,Q],Y]``."""
    b = commutator(commutator(Q, X), Y)
    if (X.degree + 1) % 2:
        b = -b
    return b.with_name(f"[{X.name},{Y.name}]_{Q.name}")


def field_strength(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation) -> Derivation:
    """``F = Q1 phi* - phi* Q2``: a degree-one derivation along ``phi``.

    ``Q1`` acts on ``phi.dst`` (the source manifold), ``Q2`` on ``phi.src``.
    """
    if Q1.src is not phi.dst or Q2.src is not phi.src:
        raise AlgebraMismatch("field_strength: Q1 must act on phi.dst and Q2 on phi.src")
    if Q1.degree != Q2.degree:
        raise DegreeMismatch("Q1 and Q2 must have equal degree")
    images = {g.name: Q1(img) - phi(q2g)
              for g, img, q2g in zip(phi.src.generators, phi.images, Q2.images)}
    return Derivation(phi.src, Q1.degree, images, along=phi, name=f"F[{phi.name}]")


def is_q_morphism(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation) -> Certificate:
    F = field_strength(phi, Q1, Q2)
    for g, img in zip(phi.src.generators, F.images):
        if img:
            return failed("q-morphism", g.name, img)
    return passed("q-morphism")


def variation_of_section(phi: AlgebraMorphism, X: Derivation) -> Derivation:
    """``(delta_X phi)* = phi* X`` for a degree-zero derivation ``X`` of ``phi.src``."""
    if X.src is not phi.src or X.along is not None:
        raise AlgebraMismatch("variation_of_section: X must be a derivation of phi.src")
    if X.degree != 0 and not X.is_zero():
        raise DegreeMismatch("variation_of_section needs a degree-0 derivation")
    return Derivation(phi.src, 0, {g.name: phi(img) for g, img in zip(phi.src.generators, X.images)},
                      along=phi, name=f"delta[{phi.name}]")
