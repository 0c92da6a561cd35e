"""Lie algebra actions, action algebroids, Weil and Cartan models, WZ gauging."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import GradedAlgebra, Polynomial, embed, tensor
from .certificates import Certificate, combine, failed, passed
from .charclasses import TrivialBundle, gauge_variation, is_basic
from .derivations import (AlgebraMorphism, Derivation, check_nilpotent, commutator,
                          coordinate_field, extend, zero_derivation)
from .errors import (AlgebraMismatch, BaseNotTangent, ConjugationFailed, GradedError,
                     NotClosedInternal, NotEquivariantlyClosed, NotHomomorphism, NotInvariant)
from .lie import StructureConstants, chevalley_eilenberg, lie_algebra_coordinates
from .tangent import (NotNilpotent, conjugate, contraction, d_name, field_strength_morphism,
                      lie_derivative, poincare_primitive, shift_tangent, total_differential)


class LieAction:
    """``rho: g -> D(M)`` given on a basis by degree-0 vector fields of ``M``."""

    def __init__(self, sc: StructureConstants, M: GradedAlgebra, rho: Sequence[Derivation],
                 xi_names: Sequence[str] | None = None, name: str = "rho", check: bool = True):
        if len(rho) != sc.dim:
            raise AlgebraMismatch("need one vector field per basis element")
        if any(g.degree for g in M.generators):
            raise AlgebraMismatch("M must have degree-0 coordinates")
        for r in rho:
            if r.src is not M or r.along is not None or (r.degree and not r.is_zero()):
                raise AlgebraMismatch("rho_a must be degree-0 vector fields on M")
        self.sc = sc
        self.M = M
        self.rho = [Derivation(M, 0, r.as_dict(), name=f"rho{a + 1}") for a, r in enumerate(rho)]
        self.name = name
        self.xi_names = list(xi_names) if xi_names else [f"xi{a + 1}" for a in range(sc.dim)]
        if check:
            cert = self.homomorphism_check()
            if not cert:
                raise NotHomomorphism(f"{cert.witness}: {cert.residual}")

    def homomorphism_check(self) -> Certificate:
        """``[rho_b, rho_c] == C^a_{bc} rho_a`` on all basis pairs."""
        n = self.sc.dim
        for b in range(n):
            for c in range(b + 1, n):
                lhs = commutator(self.rho[b], self.rho[c])
                rhs = zero_derivation(self.M, 0)
                for a in range(n):
                    v = self.sc.C[a][b][c]
                    if v:
                        rhs = rhs + self.rho[a].scale(v)
                if lhs != rhs:
                    bad = next(g for g, l, r in zip(self.M.names(), lhs.images, rhs.images) if l != r)
                    return failed("homomorphism", f"[rho{b + 1},rho{c + 1}]({bad})",
                                  lhs.image(bad) - rhs.image(bad))
        return passed("homomorphism")

    def vector_field(self, eps: Sequence) -> Derivation:
        """``rho(eps) = eps^a rho_a`` for constant components."""
        out = zero_derivation(self.M, 0)
        for a, e in enumerate(eps):
            if e:
                out = out + self.rho[a].scale(e)
        return out


class ActionAlgebroid:
    """``E[1] = M x g[1]`` with ``Q = xi^a rho_a + Q_CE``."""

    def __init__(self, act: LieAction):
        cert = act.homomorphism_check()
        if not cert:
            raise NotHomomorphism(f"{cert.witness}: {cert.residual}")
        self.act = act
        sc = act.sc
        self.g1 = lie_algebra_coordinates(sc, names=act.xi_names)
        self.E = tensor(act.M, self.g1, name=f"{act.M.name}x{self.g1.name}")
        E = self.E
        self.xi = [E.gen(n) for n in act.xi_names]
        self.Q_CE = extend(chevalley_eilenberg(sc, self.g1), E).with_name("Q_CE")
        rho = zero_derivation(E, 1)
        for x, r in zip(self.xi, act.rho):
            rho = rho + x * extend(r, E)
        self.rho = rho.with_name("rho")
        self.Q = (self.rho + self.Q_CE).with_name("Q")
        cert = check_nilpotent(self.Q)
        if not cert:
            raise NotNilpotent(f"{cert.witness} = {cert.residual}")
        self.T = shift_tangent(E)
        self.Q_C = total_differential(self.Q, self.T).with_name("Q_C")
        self.Q_W = total_differential(self.Q_CE, self.T).with_name("Q_W")
        self.iota_rho = contraction(self.rho, self.T)

    def eps_field(self, eps: Sequence) -> Derivation:
        """``eps = eps^a d/dxi^a`` as a degree -1 vector field on E[1]."""
        out = zero_derivation(self.E, -1)
        for n, e in zip(self.act.xi_names, eps):
            if e:
                out = out + coordinate_field(self.E, n).scale(e)
        return out

    def holonomy(self) -> list[Derivation]:
        return [coordinate_field(self.E, n) for n in self.act.xi_names]

    def i_epsilon(self, eps: Sequence) -> Derivation:
        """``L_eps + iota_{rho(eps)}`` on T[1]E[1]."""
        L = lie_derivative(self.eps_field(eps), self.T)
        i = contraction(extend(self.act.vector_field(eps), self.E), self.T)
        return (L + i).with_name("i_eps")

    def diagonal_action(self, eps: Sequence) -> Derivation:
        """Lie derivative of ``rho(eps)`` plus the coadjoint action on ``xi``."""
        sc = self.act.sc
        n = sc.dim
        images = {}
        for a in range(n):
            img = self.E.zero()
            for b in range(n):
                if not eps[b]:
                    continue
                for c in range(n):
                    v = sc.C[a][b][c]
                    if v:
                        img = img + self.xi[c].scale(-v * Fraction(eps[b]))
            images[self.act.xi_names[a]] = img
        V = extend(self.act.vector_field(eps), self.E) + Derivation(self.E, 0, images)
        return lie_derivative(V, self.T).with_name("Z_eps")


def action_algebroid(act: LieAction) -> ActionAlgebroid:
    return ActionAlgebroid(act)


def _operator_check(check: str, T, lhs, rhs) -> Certificate:
    for g in T.full.generators:
        x = T.full.gen(g.name)
        a, b = lhs(x), rhs(x)
        if a != b:
            return failed(check, g.name, a - b)
    return passed(check)


def weil_cartan_conjugation(alg: ActionAlgebroid, raise_on_fail: bool = True) -> Certificate:
    """``Q_W == exp(-iota_rho) Q_C exp(iota_rho)`` on every generator of T[1]E[1].

    Also certifies, for each basis element ``e``, that conjugation takes
    ``L_e`` to ``i_e`` and ``L_{[Q,e]}`` to ``[Q_W, i_e]``, and that
    ``L_{[Q,e]} == [Q_W, i_e]``.
    """
    T = alg.T
    ir = alg.iota_rho
    certs = [_operator_check("Q_W-conjugation", T, alg.Q_W,
                             lambda p: conjugate(ir, alg.Q_C, p, sign=-1))]
    n = alg.act.sc.dim
    for a in range(n):
        e = [int(a == b) for b in range(n)]
        eps = alg.eps_field(e)
        L = lie_derivative(eps, T)
        ie = alg.i_epsilon(e)
        LQ = lie_derivative(commutator(alg.Q, eps), T)
        adw = commutator(alg.Q_W, ie)
        certs.append(_operator_check(f"L_e{a + 1}-conjugation", T, ie,
                                     lambda p, L=L: conjugate(ir, L, p, sign=-1)))
        certs.append(_operator_check(f"L_adQ(e{a + 1})-conjugation", T, adw,
                                     lambda p, LQ=LQ: conjugate(ir, LQ, p, sign=-1)))
        certs.append(_operator_check(f"L_adQ(e{a + 1})=ad_QW(i_e{a + 1})", T, LQ, adw))
        certs.append(_operator_check(f"diagonal-action(e{a + 1})", T, adw, alg.diagonal_action(e)))
    cert = combine("weil-cartan", certs)
    if raise_on_fail and not cert:
        bad = next(c for c in certs if not c)
        raise ConjugationFailed(f"{bad.check} fails on {bad.witness}: {bad.residual}")
    return cert


@dataclass
class CartanReport:
    basic: Certificate
    in_cartan_span: bool
    closed: bool

    @property
    def passed(self) -> bool:
        return self.basic.passed


def cartan_basic_check(alg: ActionAlgebroid, eta: Polynomial) -> CartanReport:
    """Basicity for ``G = {d/dxi^a}``, plus membership in ``S(g*) (x) Omega(M)``
    (no undifferentiated ``xi``) and ``Q_C``-closedness."""
    cert = is_basic(eta, alg.holonomy(), alg.Q)
    span = not (eta.support() & set(alg.act.xi_names))
    return CartanReport(cert, span, not alg.Q_C(eta))


@dataclass
class WZReport:
    variation: Polynomial
    variation_formula: Polynomial
    closed: Certificate
    gauge_invariant: Certificate
    primitive: Polynomial | None
    difference: Polynomial
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)


def wz_gauging_check(alg: ActionAlgebroid, H: Polynomial, H_hat: Polynomial,
                     phi: AlgebraMorphism, eps: Sequence[Polynomial]) -> WZReport:
    """Gauging of the WZ term of ``H`` by an equivariantly closed extension ``H_hat``.

    ``phi`` maps E[1] into a base ``T[1]N``; its restriction to ``M`` is the
    matter field ``phi_0``.  ``eps`` are the gauge parameters ``eps^a`` (base
    functions).  The four parts: (i) the non-invariance of ``f_0*(H)`` under
    ``X = eps^a rho_a``, computed as a variation of ``f_0*`` and by the
    explicit formula; (ii) ``d f*(H_hat) = 0``; (iii) gauge invariance of
    ``f*(H_hat)``; (iv) a primitive of ``f*(H_hat) - f_0*(H)``.
    """
    act = alg.act
    M = act.M
    TM = shift_tangent(M)
    base = phi.dst
    TB = base.tangent_info
    if TB is None:
        raise BaseNotTangent(f"{base.name} is not a tangent algebra")
    dN = TB.d
    if H.algebra is not TM.full or H_hat.algebra is not alg.T.full:
        raise AlgebraMismatch("H lives on T[1]M and H_hat on T[1]E[1]")
    if TM.d(H):
        raise NotInvariant(f"d H = {TM.d(H)}")
    for a, r in enumerate(act.rho):
        if lie_derivative(r, TM)(H):
            raise NotInvariant(f"L_rho{a + 1} H != 0")
    rep = cartan_basic_check(alg, H_hat)
    if not rep.basic:
        raise NotEquivariantlyClosed(f"H_hat is not basic: {rep.basic.witness}")
    if not rep.closed:
        raise NotEquivariantlyClosed(f"Q_C(H_hat) = {alg.Q_C(H_hat)}")
    restricted = _restrict_to_matter(alg, H_hat)
    if restricted != H:
        raise NotEquivariantlyClosed(f"H_hat restricts to {restricted}, not H")

    phi0 = AlgebraMorphism(M, base, {n: phi.image(n) for n in M.names()}, name="phi0")
    f0 = field_strength_morphism(phi0, dN, zero_derivation(M, 1))
    eps = [e if isinstance(e, Polynomial) else base.const(e) for e in eps]

    # (i) variation of f0* along X = eps^a rho_a, as a derivation along f0*
    images = {}
    for n in M.names():
        v = base.zero()
        for e, r in zip(eps, act.rho):
            v = v + e * phi0(r.image(n))
        images[n] = v
        images[d_name(n)] = dN(v)
    delta = Derivation(TM.full, 0, images, along=f0, name="delta_X f0")
    variation = delta(H)
    formula = base.zero()
    for e, r in zip(eps, act.rho):
        formula = formula + dN(e) * f0(contraction(r, TM)(H)) + e * f0(lie_derivative(r, TM)(H))
    if variation != formula:
        raise NotClosedInternal(f"WZ variation routes disagree: {variation} vs {formula}")

    # (ii) closedness
    f = field_strength_morphism(phi, dN, alg.Q)
    fH = f(H_hat)
    r = dN(fH)
    closed = passed("closed") if not r else failed("closed", "d f*(H_hat)", r)

    # (iii) gauge invariance under Y = eps^a d/dxi^a
    bundle = TrivialBundle(base, alg.E, dN, alg.Q)
    Y = bundle.vertical([(e, c) for e, c in zip(eps, alg.holonomy())])
    ra, rb = gauge_variation(bundle, phi, H_hat, Y)
    if ra != rb:
        raise NotClosedInternal(f"gauge variation routes disagree: {ra} vs {rb}")
    inv = passed("gauge-invariance") if not ra else failed("gauge-invariance", "delta f*(H_hat)", ra)

    # (iv) exactness
    diff = fH - f0(H)
    primitive = None
    certs = [closed, inv]
    if all(g.degree == 0 for g in TB.base.generators):
        try:
            primitive = poincare_primitive(TB, diff) if diff else base.zero()
            certs.append(passed("exact", primitive=primitive))
        except GradedError as exc:
            certs.append(failed("exact", "poincare_primitive", str(exc)))
    return WZReport(variation, formula, closed, inv, primitive, diff, certs)


def _restrict_to_matter(alg: ActionAlgebroid, p: Polynomial) -> Polynomial:
    """Set ``xi`` and ``d:xi`` to zero."""
    TM = shift_tangent(alg.act.M)
    drop = set(alg.act.xi_names) | {d_name(n) for n in alg.act.xi_names}
    A = p.algebra
    idx = [A.index[n] for n in drop]
    keep = Polynomial(A, {m: c for m, c in p.terms.items() if not any(m[i] for i in idx)})
    return embed(keep, TM.full)
