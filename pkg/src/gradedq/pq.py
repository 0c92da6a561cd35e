"""Symplectic Q-manifolds of positive degree and AKSZ integrands.

A symplectic form is a constant-coefficient 2-form on T[1]S.  Everything is
derived from the stored polynomial: the pairing matrix, the Hamiltonian
vector fields (through ``iota_{X_h} omega = (-1)^{q+1} dh``) and hence the
sign of every Poisson bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .algebra import GradedAlgebra, Polynomial
from .certificates import Certificate, failed, passed
from .derivations import AlgebraMorphism, Derivation, coordinate_field, euler_field
from .errors import (AlgebraMismatch, BaseNotTangent, DegreeMismatch, MasterEquationFailed,
                     NotClosed, NotClosedInternal, NotCompatible, NotHomogeneous, SingularPairing)
from .tangent import (contraction, d_name, field_strength_morphism, lie_derivative,
                      shift_tangent, total_differential)


def right_coefficients(p: Polynomial, names: Sequence[str]) -> list[Polynomial]:
    """Write a polynomial linear in the generators ``names`` as ``sum_j R_j * g_j``.

    Each ``R_j`` sits to the left of ``g_j``; the Koszul sign of moving ``g_j``
    to the far right is absorbed into ``R_j``.
    """
    A = p.algebra
    idx = [A.index[n] for n in names]
    out = [dict() for _ in names]
    for m, c in p.terms.items():
        hits = [k for k, i in enumerate(idx) if m[i]]
        if len(hits) != 1 or m[idx[hits[0]]] != 1:
            raise NotHomogeneous(f"{A.mono_str(m)} is not linear in {list(names)}")
        k = hits[0]
        rest = list(m)
        rest[idx[k]] = 0
        rest = tuple(rest)
        g = tuple(int(j == idx[k]) for j in range(len(m)))
        sign, prod = A.mono_mul(rest, g)
        assert prod == m
        out[k][rest] = out[k].get(rest, 0) + sign * c
    return [Polynomial(A, t) for t in out]


class SymplecticStructure:
    """Constant symplectic form of degree ``p >= 1`` on the fiber algebra ``S``.

    ``pairing[i][j]`` is the constant with ``iota_{d/dq^i} omega =
    sum_j pairing[i][j] dq^j``.
    """

    def __init__(self, S: GradedAlgebra, p: int, omega: Polynomial, name: str = "omega"):
        if p < 1:
            raise DegreeMismatch("symplectic degree must be positive")
        self.S = S
        self.p = p
        self.name = name
        self.T = shift_tangent(S)
        if omega.algebra is not self.T.full:
            raise AlgebraMismatch("omega must be a form on T[1]S")
        self.omega = omega
        if not omega:
            raise SingularPairing("omega = 0")
        if self.T.form_orders(omega) != {1 * 2}:
            raise NotHomogeneous("omega must be a 2-form")
        if not omega.is_homogeneous() or omega.degree() != p + 2:
            raise NotHomogeneous(f"omega must have degree {p} (total degree {p + 2})")
        dnames = [d_name(n) for n in S.names()]
        if omega.support() - set(dnames):
            raise NotHomogeneous("only constant-coefficient symplectic forms are supported")
        self.names = S.names()
        self.dnames = dnames
        self.pairing = []
        for n in self.names:
            row = right_coefficients(contraction(coordinate_field(S, n), self.T)(omega), dnames)
            self.pairing.append([r.constant_term() for r in row])
        self.inverse = linalg.inverse(self.pairing)
        if self.inverse is None:
            raise SingularPairing("the pairing matrix is singular")
        if self.T.d(omega):
            raise NotClosed("omega is not closed")
        xi = euler_field(S)
        if lie_derivative(xi, self.T)(omega) != omega.scale(p):
            raise NotHomogeneous(f"L_xi omega != {p} omega")

    @classmethod
    def darboux(cls, S: GradedAlgebra, p: int, pairs: Iterable[tuple[str, str]], name="omega"):
        """``(a, b) -> d:a d:b``; ``(a, a) -> 1/2 d:a^2`` for even ``d:a``."""
        T = shift_tangent(S)
        w = T.full.zero()
        for a, b in pairs:
            if a == b:
                w = w + (T.dgen(a) * T.dgen(a)).scale(Fraction(1, 2))
            else:
                w = w + T.dgen(a) * T.dgen(b)
        return cls(S, p, w, name)

    def euler(self) -> Derivation:
        return euler_field(self.S)

    def hamiltonian_vf(self, h: Polynomial) -> Derivation:
        """The unique ``X_h`` with ``iota_{X_h} omega = (-1)^{q+1} dh``."""
        if h.algebra is not self.S:
            raise AlgebraMismatch("h must be a function on S")
        if not h:
            return Derivation(self.S, -self.p, {}, name="X_0")
        q = h.degree()
        dh = self.T.d(self.T.lift(h))
        if q % 2 == 0:
            dh = -dh
        R = [self.T.restrict(r) for r in right_coefficients(dh, self.dnames)]
        images = {}
        for i, n in enumerate(self.names):
            x = self.S.zero()
            for j, r in enumerate(R):
                c = self.inverse[j][i]
                if c and r:
                    x = x + r.scale(c)
            images[n] = x
        X = Derivation(self.S, q - self.p, images, name=f"X[{h}]")
        if contraction(X, self.T)(self.omega) != dh:
            raise NotClosedInternal("Hamiltonian vector field fails back-substitution")
        return X

    def poisson_bracket(self, h1: Polynomial, h2: Polynomial) -> Polynomial:
        """``{h1, h2} = X_{h1}(h2)``."""
        return self.hamiltonian_vf(h1)(h2)

    def bracket_table(self) -> dict[tuple[str, str], Polynomial]:
        gens = self.S.gens()
        return {(a, b): self.poisson_bracket(ga, gb)
                for a, ga in zip(self.names, gens) for b, gb in zip(self.names, gens)}

    def liouville(self) -> Polynomial:
        """``alpha = (1/p) iota_xi omega``; checked ``d alpha = omega``."""
        alpha = contraction(self.euler(), self.T)(self.omega).scale(Fraction(1, self.p))
        if self.T.d(alpha) != self.omega:
            raise NotClosed("d(alpha) != omega")
        return alpha

    def master_equation(self, H: Polynomial) -> Certificate:
        r = self.poisson_bracket(H, H)
        if r:
            return failed("master-equation", "{H,H}", r)
        return passed("master-equation")


@dataclass
class HamiltonianData:
    structure: SymplecticStructure
    Q: Derivation
    hamiltonian: Polynomial
    alpha: Polynomial
    alpha_hat: Polynomial


def hamiltonian_of_Q(ws: SymplecticStructure, Q: Derivation) -> Polynomial:
    """``H = (p/(p+1)) (-1)^p iota_Q alpha`` with every identity certified."""
    if Q.src is not ws.S:
        raise AlgebraMismatch("Q must act on S")
    p = ws.p
    T = ws.T
    if lie_derivative(Q, T)(ws.omega):
        raise NotCompatible(f"L_Q omega = {lie_derivative(Q, T)(ws.omega)}")
    alpha = ws.liouville()
    iQ = contraction(Q, T)
    H = T.restrict(iQ(alpha)).scale(Fraction(p * (-1) ** p, p + 1))
    lhs = iQ(ws.omega)
    rhs = T.d(T.lift(H)).scale((-1) ** p)
    if lhs != rhs:
        raise NotClosedInternal(f"iota_Q omega != (-1)^p dH: {lhs} vs {rhs}")
    cert = ws.master_equation(H)
    if not cert:
        raise MasterEquationFailed(f"{{H,H}} = {cert.residual}")
    if H and ws.hamiltonian_vf(H) != Q:
        raise NotClosedInternal("X_H != Q")
    return H


def q_from_hamiltonian(ws: SymplecticStructure, H: Polynomial) -> Derivation:
    """``Q = X_H``; the master equation is not assumed."""
    if H.is_homogeneous() and H and H.degree() != ws.p + 1:
        raise DegreeMismatch(f"a Hamiltonian for Q has degree {ws.p + 1}")
    return ws.hamiltonian_vf(H).with_name("Q")


def alpha_hat(ws: SymplecticStructure, Q: Derivation) -> HamiltonianData:
    """``alpha + ((-1)^p / p) H`` with ``omega == Q_T(alpha_hat)`` checked."""
    H = hamiltonian_of_Q(ws, Q)
    alpha = ws.liouville()
    ah = alpha + ws.T.lift(H).scale(Fraction((-1) ** ws.p, ws.p))
    QT = total_differential(Q, ws.T)
    if QT(ah) != ws.omega:
        raise NotClosedInternal(f"Q_T(alpha_hat) = {QT(ah)} != omega")
    return HamiltonianData(ws, Q, H, alpha, ah)


@dataclass
class AKSZResult:
    lagrangian: Polynomial
    lagrangian_formula: Polynomial
    pullback_omega: Polynomial
    data: HamiltonianData


def aksz_integrand(ws: SymplecticStructure, Q: Derivation, phi: AlgebraMorphism) -> AKSZResult:
    """``L = f*(alpha_hat)`` on a base ``T[1]Sigma``; certifies ``f*(omega) = d L``.

    The Lagrangian is recomputed as ``sum phi*(a_i) d(phi* q^i) + (-1)^{p+1}
    phi*(H)`` for ``alpha = sum a_i dq^i`` and the two must agree.
    """
    base = phi.dst
    TB = base.tangent_info
    if TB is None or any(g.degree for g in TB.base.generators):
        raise BaseNotTangent(f"{base.name} is not T[1] of an even coordinate algebra")
    if phi.src is not ws.S:
        raise AlgebraMismatch("phi must pull back functions on S")
    data = alpha_hat(ws, Q)
    f = field_strength_morphism(phi, TB.d, Q)
    L = f(data.alpha_hat)
    fw = f(ws.omega)
    if fw != TB.d(L):
        raise NotClosedInternal(f"f*(omega) != d f*(alpha_hat): {fw} vs {TB.d(L)}")
    coeffs = right_coefficients(data.alpha, ws.dnames)
    formula = phi(data.hamiltonian).scale((-1) ** (ws.p + 1))
    for n, a in zip(ws.names, coeffs):
        if a:
            formula = formula + phi(ws.T.restrict(a)) * TB.d(phi.image(n))
    if formula != L:
        raise NotClosedInternal(f"AKSZ routes disagree: {L} vs {formula}")
    return AKSZResult(L, formula, fw, data)


def cotangent_poisson(n: int, pi: Sequence[Sequence[Polynomial | int]] | None = None,
                      xs: Sequence[str] | None = None, ps: Sequence[str] | None = None):
    """``T*[1]R^n`` with Darboux pairs ``(x_i, p_i)`` and ``H = 1/2 pi^{ij} p_i p_j``.

    ``pi`` entries may be constants or polynomials in the ``x`` (built
    against the returned algebra through a callable); returns ``(ws, H)``.
    """
    from .algebra import make_algebra

    xs = list(xs or [f"x{i + 1}" for i in range(n)])
    ps = list(ps or [f"p{i + 1}" for i in range(n)])
    S = make_algebra([(x, 0) for x in xs] + [(p, 1) for p in ps], name=f"T*[1]R{n}")
    ws = SymplecticStructure.darboux(S, 1, zip(xs, ps))
    if pi is None:
        return ws, S.zero()
    if callable(pi):
        pi = pi(S)
    H = S.zero()
    for i in range(n):
        for j in range(n):
            c = pi[i][j]
            if not isinstance(c, Polynomial):
                c = S.const(c)
            if c:
                H = H + c * S.gen(ps[i]) * S.gen(ps[j])
    return ws, H.scale(Fraction(1, 2))
