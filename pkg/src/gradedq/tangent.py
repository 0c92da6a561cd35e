"""The shifted tangent bundle T[1]M as a bigraded algebra of differential forms.

For every base generator ``q`` of degree k the full algebra carries ``q``
(degree k, form-order 0) and ``d:q`` (degree k+1, form-order 1), interleaved
in base order.  All operators below are ``Derivation`` objects on the full
algebra, so they compose with the rest of the kernel.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import GradedAlgebra, Polynomial, embed
from .certificates import Certificate, failed, passed
from .derivations import (AlgebraMorphism, Derivation, check_nilpotent, commutator,
                          field_strength)
from .errors import (AlgebraMismatch, ConstantObstruction, EvenDegree,
                     NotAffineBase, NotClosed, NotLocallyNilpotent, NotNilpotent)

D_PREFIX = "d:"

# Sign of the contraction flow in the twisted description of f*:
#   f* = Q1-pullback o lift(phi)* o exp(FLOW_SIGN * iota_{Q2}).
# Fixed by agreement with f*(dq) = Q1(phi* q) - phi*(Q2 q); see flow_sign().
FLOW_SIGN = -1


def d_name(name: str) -> str:
    return D_PREFIX + name


class TangentAlgebra:
    def __init__(self, base: GradedAlgebra):
        self.base = base
        # T[1] of a tangent algebra would reuse the names d:x; pick a fresh prefix then
        self.prefix = D_PREFIX
        k = 1
        while any(self.prefix + g.name in base.index for g in base.generators):
            self.prefix = f"d{k}:"
            k += 1
        gens = []
        self.bidegree: dict[str, tuple[int, int]] = {}
        for g in base.generators:
            gens.append((g.name, g.degree))
            gens.append((self.dname(g.name), g.degree + 1))
            self.bidegree[g.name] = (g.degree, 0)
            self.bidegree[self.dname(g.name)] = (g.degree, 1)
        self.full = GradedAlgebra(gens, name=f"T[1]{base.name}")
        self.full.tangent_info = self
        self._order = tuple(self.bidegree[g.name][1] for g in self.full.generators)
        F = self.full
        self.d = Derivation(F, 1, {g.name: F.gen(self.dname(g.name)) for g in base.generators}, name="d")

    def __repr__(self):
        return f"TangentAlgebra({self.base.name})"

    def lift(self, p: Polynomial) -> Polynomial:
        """Base function viewed as a 0-form."""
        if p.algebra is self.full:
            return p
        if p.algebra is not self.base:
            raise AlgebraMismatch(f"expected {self.base.name}, got {p.algebra.name}")
        return embed(p, self.full)

    def restrict(self, p: Polynomial) -> Polynomial:
        """The form-order-0 polynomial ``p`` as a base function."""
        if self.form_orders(p) - {0}:
            raise AlgebraMismatch(f"{p} is not a 0-form")
        return embed_down(p, self.base)

    def mono_order(self, mono) -> int:
        return sum(e * o for e, o in zip(mono, self._order) if e)

    def form_orders(self, p: Polynomial) -> set[int]:
        return {self.mono_order(m) for m in p.terms}

    def order_component(self, p: Polynomial, k: int) -> Polynomial:
        return Polynomial(self.full, {m: c for m, c in p.terms.items() if self.mono_order(m) == k})

    def dgen(self, name: str) -> Polynomial:
        return self.full.gen(self.dname(name))

    def dname(self, name: str) -> str:
        return self.prefix + name


def embed_down(p: Polynomial, target: GradedAlgebra) -> Polynomial:
    return embed(p, target)


def shift_tangent(M: GradedAlgebra) -> TangentAlgebra:
    """T[1]M; cached so repeated calls return the same algebra object."""
    if M._tangent is None:
        M._tangent = TangentAlgebra(M)
    return M._tangent


def tangent_of(A: GradedAlgebra) -> TangentAlgebra:
    """The TangentAlgebra whose full algebra is ``A``."""
    if A.tangent_info is None:
        raise AlgebraMismatch(f"{A.name} is not a tangent algebra")
    return A.tangent_info


def contraction(X: Derivation, T: TangentAlgebra | None = None) -> Derivation:
    """``iota_X``: degree ``|X|-1``, ``q -> 0`` and ``dq -> X(q)``."""
    if X.along is not None:
        raise AlgebraMismatch("contraction needs a derivation of the base")
    T = T or shift_tangent(X.src)
    if T.base is not X.src:
        raise AlgebraMismatch("X does not act on the tangent algebra's base")
    images = {T.dname(g.name): T.lift(img) for g, img in zip(X.src.generators, X.images)}
    return Derivation(T.full, X.degree - 1, images, name=f"iota_{X.name}")


def lie_derivative(X: Derivation, T: TangentAlgebra | None = None) -> Derivation:
    """``L_X = [iota_X, d] = iota_X d + (-1)^{|X|} d iota_X``."""
    T = T or shift_tangent(X.src)
    L = commutator(contraction(X, T), T.d)
    return L.with_name(f"L_{X.name}")


def total_differential(Q: Derivation, T: TangentAlgebra | None = None) -> Derivation:
    """``Q_T = d + L_Q``; certified nilpotent."""
    if Q.degree % 2 == 0:
        raise EvenDegree(f"{Q.name} has even degree")
    T = T or shift_tangent(Q.src)
    QT = (T.d + lie_derivative(Q, T)).with_name(f"{Q.name}_T")
    cert = check_nilpotent(QT)
    if not cert:
        raise NotNilpotent(f"{QT.name} is not nilpotent: {cert.witness} = {cert.residual}")
    return QT


def lowers_form_order(V: Derivation) -> bool:
    T = V.src.tangent_info
    if T is None or V.dst is not V.src:
        return False
    for g, img in zip(V.src.generators, V.images):
        o = T.bidegree[g.name][1]
        if img and max(T.form_orders(img)) >= o:
            return False
    return True


def exp_contraction(V: Derivation, p: Polynomial, sign: int = 1) -> Polynomial:
    """``exp(sign * V) p = sum_k (sign V)^k p / k!`` for ``V`` lowering form-order."""
    if not lowers_form_order(V):
        raise NotLocallyNilpotent(f"{V.name} does not strictly lower form-order")
    total = p
    term = p
    k = 0
    while term:
        k += 1
        term = V(term).scale(Fraction(sign, k))
        total = total + term
    return total


def conjugate(V: Derivation, op, p: Polynomial, sign: int = 1) -> Polynomial:
    """``exp(sign V) op exp(-sign V)`` applied to ``p``."""
    return exp_contraction(V, op(exp_contraction(V, p, -sign)), sign)


def lift_morphism(phi: AlgebraMorphism) -> AlgebraMorphism:
    """Pullback along the tangent map: ``q -> phi*(q)``, ``dq -> d(phi*(q))``."""
    T2 = shift_tangent(phi.src)
    T1 = shift_tangent(phi.dst)
    images = {}
    for g, img in zip(phi.src.generators, phi.images):
        li = T1.lift(img)
        images[g.name] = li
        images[T2.dname(g.name)] = T1.d(li)
    return AlgebraMorphism(T2.full, T1.full, images, name=f"T{phi.name}")


def q_pullback(Q1: Derivation) -> AlgebraMorphism:
    """Pullback of ``Q1`` viewed as a map ``M1 -> T[1]M1``: ``q -> q, dq -> Q1(q)``."""
    T1 = shift_tangent(Q1.src)
    M = Q1.src
    images = {}
    for g, img in zip(M.generators, Q1.images):
        images[g.name] = M.gen(g.name)
        images[T1.dname(g.name)] = img
    return AlgebraMorphism(T1.full, M, images, name=f"{Q1.name}*")


def field_strength_morphism(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation) -> AlgebraMorphism:
    """``f*``: ``q -> phi*(q)``, ``dq -> F(q)``, extended multiplicatively."""
    F = field_strength(phi, Q1, Q2)
    T2 = shift_tangent(phi.src)
    images = {}
    for g, img, fimg in zip(phi.src.generators, phi.images, F.images):
        images[g.name] = img
        images[T2.dname(g.name)] = fimg
    return AlgebraMorphism(T2.full, phi.dst, images, name=f"f[{phi.name}]")


def twisted_field_strength(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation,
                           sign: int = FLOW_SIGN):
    """``f*`` rebuilt as ``Q1* o lift(phi)* o exp(sign * iota_{Q2})``; returns a callable."""
    T2 = shift_tangent(phi.src)
    iq = contraction(Q2, T2)
    lifted = lift_morphism(phi)
    q1 = q_pullback(Q1)

    def apply(alpha: Polynomial) -> Polynomial:
        return q1(lifted(exp_contraction(iq, alpha, sign)))

    return apply


def flow_sign(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation) -> int | None:
    """The sign(s) for which the twisted construction matches ``f*`` on generators.

    Returns the unique agreeing sign, ``0`` if both agree (e.g. ``Q2 = 0``),
    or ``None`` if neither does.
    """
    f = field_strength_morphism(phi, Q1, Q2)
    T2 = shift_tangent(phi.src)
    ok = []
    for s in (1, -1):
        tw = twisted_field_strength(phi, Q1, Q2, s)
        if all(tw(g) == f(g) for g in T2.full.gens()):
            ok.append(s)
    if len(ok) == 2:
        return 0
    return ok[0] if ok else None


def check_twist(Q: Derivation) -> Certificate:
    """``d + L_Q == exp(iota_Q) d exp(-iota_Q)`` on every generator of T[1]M."""
    T = shift_tangent(Q.src)
    QT = T.d + lie_derivative(Q, T)
    iq = contraction(Q, T)
    for g in T.full.generators:
        x = T.full.gen(g.name)
        lhs = QT(x)
        rhs = conjugate(iq, T.d, x)
        if lhs != rhs:
            return failed("twist", g.name, lhs - rhs)
    return passed("twist")


def radial_field(M: GradedAlgebra) -> Derivation:
    """``E = sum q d/dq`` (coordinate scaling)."""
    return Derivation(M, 0, {g.name: M.gen(g.name) for g in M.generators}, name="E")


def poincare_primitive(T: TangentAlgebra, omega: Polynomial) -> Polynomial:
    """A primitive ``eta`` with ``d eta = omega`` for a closed polynomial form.

    Uses the radial homotopy: on the component of total polynomial weight w
    (coordinate exponents plus form-order), ``eta_w = iota_E(omega_w) / w``.
    Requires every base generator to have degree 0.
    """
    if omega.algebra is not T.full:
        raise AlgebraMismatch("omega must live on the tangent algebra")
    if any(g.degree for g in T.base.generators):
        raise NotAffineBase("poincare_primitive needs a base of degree-0 coordinates")
    if T.d(omega):
        raise NotClosed(f"d({omega}) != 0")
    if omega.constant_term():
        raise ConstantObstruction("a nonzero constant is closed but not exact")
    iE = contraction(radial_field(T.base), T)
    by_weight: dict[int, dict] = {}
    for m, c in omega.terms.items():
        by_weight.setdefault(sum(m), {})[m] = c
    eta = T.full.zero()
    for w, terms in by_weight.items():
        eta = eta + iE(Polynomial(T.full, terms)).scale(Fraction(1, w))
    if T.d(eta) != omega:
        raise NotClosed(f"{omega} is not exact")
    return eta


def chain_residuals(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation) -> dict[str, Polynomial]:
    """``Q1 f*(g) - f*(Q_T g)`` for every generator ``g`` of T[1](phi.src)."""
    f = field_strength_morphism(phi, Q1, Q2)
    T2 = shift_tangent(phi.src)
    QT = T2.d + lie_derivative(Q2, T2)
    return {g.name: Q1(f.image(g.name)) - f(QT.image(g.name)) for g in T2.full.generators}


def check_chain(phi: AlgebraMorphism, Q1: Derivation, Q2: Derivation) -> Certificate:
    """The chain property ``Q1 o f* == f* o Q_T``, certified on generators.

    Both sides are derivations along ``f*``, so agreement on generators is
    agreement everywhere.
    """
    res = chain_residuals(phi, Q1, Q2)
    for name, r in res.items():
        if r:
            return failed("chain", name, r)
    return passed("chain", generators=len(res))
