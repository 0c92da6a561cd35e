"""Basic forms, characteristic forms of gauge fields, transgression, and the
characteristic map of Lie algebra extensions.

Bundles are trivial products ``base x fiber``.  A gauge field is given by its
fiber part: an ``AlgebraMorphism`` from the fiber algebra to the base algebra.
For a form on the fiber, the field strength of the full section of the
product restricts to the field strength of this morphism, so
``char(omega) = f*(omega)`` with ``f*`` built from ``(phi, Q_base, Q_fiber)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .algebra import GradedAlgebra, Polynomial, embed, make_algebra, tensor
from .certificates import Certificate, failed, passed
from .derivations import (AlgebraMorphism, Derivation, commutator, coordinate_field, extend,
                          zero_derivation)
from .errors import (AlgebraMismatch, DegreeMismatch, NotBasic, NotClosedInternal, NotIdeal,
                     NotSplitting, NotSymmetric, NotVertical)
from .lie import StructureConstants, chevalley_eilenberg, lie_algebra_coordinates
from .tangent import (TangentAlgebra, d_name, field_strength_morphism, lie_derivative,
                      shift_tangent, total_differential)


class HolonomyGenerators:
    """A finite list of negative-degree derivations on a fiber algebra."""

    def __init__(self, fiber: GradedAlgebra, gens: Iterable[Derivation]):
        self.fiber = fiber
        self.gens = list(gens)
        for e in self.gens:
            if e.src is not fiber or e.along is not None:
                raise AlgebraMismatch(f"{e.name} is not a vector field on {fiber.name}")
            if e.degree > -1:
                raise DegreeMismatch(f"holonomy generator {e.name} has degree {e.degree} >= 0")

    @classmethod
    def coordinate(cls, fiber: GradedAlgebra, min_degree: int = 1) -> "HolonomyGenerators":
        """``d/dq`` for every generator of degree >= ``min_degree``."""
        return cls(fiber, [coordinate_field(fiber, g.name) for g in fiber.generators
                           if g.degree >= min_degree])

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def closure_warnings(self, Q: Derivation) -> list[str]:
        """Brackets among the generators that leave their rational span.

        Only the given finite set is quantified over; a warning does not make
        any check fail.
        """
        from .derivations import derived_bracket

        names = [g.name for g in self.fiber.generators]

        def vec(D):
            out = []
            for n in names:
                img = D.image(n)
                out.append(img)
            return out

        basis_polys = [vec(e) for e in self.gens]
        warnings = []
        for (i, X), (j, Y) in itertools.product(enumerate(self.gens), repeat=2):
            for label, B in (("commutator", commutator(X, Y)), ("derived", derived_bracket(X, Y, Q))):
                if B.is_zero():
                    continue
                if not _in_span(basis_polys, vec(B)):
                    warnings.append(f"{label} bracket of generators {i} and {j} leaves the span")
        return warnings


def _in_span(basis: list[list[Polynomial]], target: list[Polynomial]) -> bool:
    keys = set()
    for v in basis + [target]:
        for k, p in enumerate(v):
            for m in p.terms:
                keys.add((k, m))
    keys = sorted(keys)

    def flat(v):
        return [v[k].terms.get(m, Fraction(0)) for k, m in keys]

    return linalg.solve_combination([flat(b) for b in basis], flat(target)) is not None


class InvariantPolynomial:
    """Fully symmetric rational tensor ``Phi_{a_1...a_p}`` on a basis of size ``dim``."""

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple[int, ...], Fraction] | None = None):
        self.dim = dim
        self.degree = degree
        self.coeffs: dict[tuple[int, ...], Fraction] = {}
        for idx, v in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or not all(0 <= i < dim for i in idx):
                raise ValueError(f"bad index {idx}")
            key = tuple(sorted(idx))
            v = Fraction(v)
            if key in self.coeffs and self.coeffs[key] != v:
                raise NotSymmetric(f"Phi{idx} = {v} disagrees with Phi{key} = {self.coeffs[key]}")
            if v:
                self.coeffs[key] = v

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "InvariantPolynomial":
        n = len(rows)
        for i in range(n):
            for j in range(n):
                if Fraction(rows[i][j]) != Fraction(rows[j][i]):
                    raise NotSymmetric(f"entry ({i},{j}) differs from ({j},{i})")
        return cls(n, 2, {(i, j): rows[i][j] for i in range(n) for j in range(n)})

    @classmethod
    def identity(cls, n: int) -> "InvariantPolynomial":
        return cls(n, 2, {(i, i): 1 for i in range(n)})

    @classmethod
    def linear(cls, values: Sequence) -> "InvariantPolynomial":
        return cls(len(values), 1, {(i,): v for i, v in enumerate(values)})

    def __getitem__(self, idx) -> Fraction:
        return self.coeffs.get(tuple(sorted(idx)), Fraction(0))

    def evaluate(self, vectors: Sequence[Sequence]) -> Fraction:
        """``Phi(v_1, ..., v_p)`` by multilinearity."""
        total = Fraction(0)
        for idx in itertools.product(range(self.dim), repeat=self.degree):
            c = self[idx]
            if not c:
                continue
            prod = c
            for v, i in zip(vectors, idx):
                prod *= v[i]
                if not prod:
                    break
            total += prod
        return total

    def ad_invariance_defects(self, action: Sequence[Sequence[Sequence]]) -> list[tuple]:
        """Violations of ``sum_s Phi(..., X h_{a_s}, ...) = 0`` for each operator X.

        ``action[i][a]`` is the image of basis vector ``a`` under operator ``i``.
        """
        bad = []
        n = self.dim
        basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for k, X in enumerate(action):
            for idx in itertools.combinations_with_replacement(range(n), self.degree):
                s = Fraction(0)
                for pos in range(self.degree):
                    vecs = [basis[i] for i in idx]
                    vecs[pos] = X[idx[pos]]
                    s += self.evaluate(vecs)
                if s:
                    bad.append((k, idx, s))
        return bad

    def is_ad_invariant(self, sc: StructureConstants) -> bool:
        n = sc.dim
        action = [[sc.bracket(sc.basis(i), sc.basis(a)) for a in range(n)] for i in range(n)]
        return not self.ad_invariance_defects(action)


def invariant_to_basic_form(Phi: InvariantPolynomial, T: TangentAlgebra,
                            names: Sequence[str] | None = None) -> Polynomial:
    """``(1/p!) Phi_{a_1..a_p} d q^{a_1} ... d q^{a_p}`` on ``T``."""
    names = list(names) if names is not None else [g.name for g in T.base.generators][: Phi.dim]
    if len(names) != Phi.dim:
        raise AlgebraMismatch("need one coordinate per index")
    dq = [T.dgen(n) for n in names]
    out = T.full.zero()
    for idx in itertools.product(range(Phi.dim), repeat=Phi.degree):
        c = Phi[idx]
        if not c:
            continue
        t = T.full.const(c)
        for i in idx:
            t = t * dq[i]
        out = out + t
    return out.scale(Fraction(1, math.factorial(Phi.degree)))


def is_basic(omega: Polynomial, G: Iterable[Derivation], Q: Derivation) -> Certificate:
    """``L_eps omega = 0`` and ``L_{[Q,eps]} omega = 0`` for every ``eps`` in ``G``."""
    T = shift_tangent(Q.src)
    if omega.algebra is not T.full:
        raise AlgebraMismatch("omega must be a form on the fiber")
    for i, eps in enumerate(G):
        r = lie_derivative(eps, T)(omega)
        if r:
            return failed("basic", f"L_{eps.name} (generator {i})", r)
        r = lie_derivative(commutator(Q, eps), T)(omega)
        if r:
            return failed("basic", f"L_ad_Q({eps.name}) (generator {i})", r)
    return passed("basic")


def _default_holonomy(fiber: GradedAlgebra, holonomy):
    if holonomy is None:
        return HolonomyGenerators.coordinate(fiber)
    if isinstance(holonomy, HolonomyGenerators):
        return holonomy
    return HolonomyGenerators(fiber, holonomy)


def char_form(phi: AlgebraMorphism, Q_base: Derivation, Q_fiber: Derivation, omega: Polynomial,
              holonomy=None, check_basic: bool = True) -> Polynomial:
    """``f*(omega)`` for a basic fiber form; asserted ``Q_base``-closed.

    ``holonomy`` defaults to the coordinate fields of positive-degree fiber
    generators.
    """
    if check_basic:
        cert = is_basic(omega, _default_holonomy(phi.src, holonomy), Q_fiber)
        if not cert:
            raise NotBasic(f"{cert.witness}: {cert.residual}")
    f = field_strength_morphism(phi, Q_base, Q_fiber)
    c = f(omega)
    r = Q_base(c)
    if r:
        raise NotClosedInternal(f"Q_base(char) = {r}")
    return c


class TrivialBundle:
    """``base x fiber`` with ``Q = Q_base + Q_fiber``.

    Forms along the fiber live on ``vforms = base (x) T[1]fiber``.  This is
    the quotient of forms on the total space by the ideal generated by base
    differentials: ``f*`` kills that ideal because the section is the identity
    on the base, and ``L_X`` preserves it for vertical gauge generators.
    """

    def __init__(self, base: GradedAlgebra, fiber: GradedAlgebra, Q_base: Derivation,
                 Q_fiber: Derivation):
        self.base = base
        self.fiber = fiber
        self.Q_base = Q_base
        self.Q_fiber = Q_fiber
        self.total = tensor(base, fiber, name=f"{base.name}x{fiber.name}")
        self.Q = (extend(Q_base, self.total) + extend(Q_fiber, self.total)).with_name("Q")
        self.Tf = shift_tangent(fiber)
        self.vforms = tensor(base, self.Tf.full, name=f"{base.name}xT[1]{fiber.name}")
        V = self.vforms
        self.d_v = Derivation(V, 1, {g.name: V.gen(d_name(g.name)) for g in fiber.generators},
                              name="d_v")

    def section(self, phi: AlgebraMorphism) -> AlgebraMorphism:
        """Full section of the projection, from the fiber part ``phi``."""
        if phi.src is not self.fiber or phi.dst is not self.base:
            raise AlgebraMismatch("phi must map fiber functions to base functions")
        images = {g.name: self.base.gen(g.name) for g in self.base.generators}
        images.update(phi.as_dict())
        return AlgebraMorphism(self.total, self.base, images, name=f"s[{phi.name}]")

    def vertical(self, terms: Iterable[tuple[Polynomial, Derivation]]) -> Derivation:
        """``Y = sum_j b^j eps_j`` with base coefficients ``b^j``."""
        Y = None
        for b, eps in terms:
            if eps.src is not self.fiber:
                raise AlgebraMismatch("eps must be a fiber vector field")
            D = embed(b, self.total) * extend(eps, self.total)
            Y = D if Y is None else Y + D
        return Y if Y is not None else zero_derivation(self.total, -1)

    def extend_form(self, omega: Polynomial) -> Polynomial:
        return embed(omega, self.vforms)

    def lie_derivative(self, X: Derivation) -> Derivation:
        """``L_X = [iota_X, d_v]`` on ``vforms`` for a vector field on the total space."""
        V = self.vforms
        images = {d_name(g.name): embed(X.image(g.name), V) for g in self.fiber.generators}
        iota = Derivation(V, X.degree - 1, images, name=f"iota_{X.name}")
        return commutator(iota, self.d_v).with_name(f"L_{X.name}")

    def pullback(self, phi: AlgebraMorphism) -> AlgebraMorphism:
        """``f*`` on ``vforms``: identity on the base, ``q -> phi*q``, ``dq -> F(q)``."""
        f = field_strength_morphism(phi, self.Q_base, self.Q_fiber)
        images = {g.name: self.base.gen(g.name) for g in self.base.generators}
        for g in self.Tf.full.generators:
            images[g.name] = f.image(g.name)
        return AlgebraMorphism(self.vforms, self.base, images, name=f.name)


def gauge_variation(bundle: TrivialBundle, phi: AlgebraMorphism, omega: Polynomial,
                    Y: Derivation) -> tuple[Polynomial, Polynomial]:
    """Variation of ``f*(omega)`` under ``X = [Q, Y]``, by two routes.

    Returns ``(f*(L_X omega'), delta_X f* (omega'))``: the first applies the
    Lie derivative before pulling back, the second varies ``f*`` itself as a
    derivation along ``f*`` fixed on generators.
    """
    if Y.src is not bundle.total:
        raise AlgebraMismatch("Y must act on the bundle's total space")
    for g in bundle.base.generators:
        if Y.image(g.name):
            raise NotVertical(f"Y({g.name}) = {Y.image(g.name)}")
        for p in Y.images:
            if p.support() & set(bundle.fiber.names()):
                raise NotVertical("coefficients of Y must be base functions")
    if not Y.is_zero() and Y.degree != -1:
        raise DegreeMismatch("gauge generators Y have degree -1")
    s = bundle.section(phi)
    X = commutator(bundle.Q, Y)
    f = bundle.pullback(phi)
    w = bundle.extend_form(omega)
    route_a = f(bundle.lie_derivative(X)(w))
    images = {g.name: bundle.base.zero() for g in bundle.base.generators}
    for g in bundle.fiber.generators:
        v = s(X.image(g.name))
        images[g.name] = v
        images[d_name(g.name)] = bundle.Q_base(v) - s(X(bundle.Q.image(g.name)))
    delta = Derivation(bundle.vforms, 0, images, along=f, name="delta_X f")
    route_b = delta(w)
    return route_a, route_b


def gauge_variation_check(phi: AlgebraMorphism, Q_base: Derivation, Q_fiber: Derivation,
                          omega: Polynomial, terms: Iterable[tuple[Polynomial, Derivation]],
                          bundle: TrivialBundle | None = None) -> Certificate:
    """PASS iff the infinitesimal gauge variation of ``f*(omega)`` vanishes."""
    bundle = bundle or TrivialBundle(phi.dst, phi.src, Q_base, Q_fiber)
    Y = bundle.vertical(terms)
    a, b = gauge_variation(bundle, phi, omega, Y)
    if a != b:
        raise NotClosedInternal(f"variation routes disagree: {a} vs {b}")
    if a:
        return failed("gauge-invariance", "delta_X f*(omega)", a, variation=a)
    return passed("gauge-invariance", variation=a)


def exact_class_check(phi: AlgebraMorphism, Q_base: Derivation, Q_fiber: Derivation,
                      eta: Polynomial) -> Certificate:
    """For ``omega = Q_T(eta)``: ``f*(omega) == Q_base(f*(eta))``."""
    QT = total_differential(Q_fiber)
    f = field_strength_morphism(phi, Q_base, Q_fiber)
    lhs = f(QT(eta))
    rhs = Q_base(f(eta))
    if lhs != rhs:
        return failed("trivial-class", "f*(Q_T eta) - Q_base f*(eta)", lhs - rhs)
    return passed("trivial-class", char=lhs)


# transgression


@dataclass
class Transgression:
    difference: Polynomial
    primitive: Polynomial
    beta: Polynomial
    beta_formula: Polynomial | None
    char0: Polynomial
    char1: Polynomial
    extended: GradedAlgebra = field(repr=False, default=None)


def _fresh(base: GradedAlgebra, stem: str) -> str:
    name = stem
    while name in base.index or d_name(name) in base.index:
        name += "_"
    return name


def transgress(phi0: AlgebraMorphism, phi1: AlgebraMorphism, Q_base: Derivation,
               Q_fiber: Derivation, omega: Polynomial,
               path: Callable | None = None, holonomy=None) -> Transgression:
    """Chern-Simons type transgression between two gauge fields.

    Works on ``base x T[1]I`` with even ``t`` and odd ``dt``.  ``path(t, A0,
    A1)`` may override the default linear interpolation; it receives the
    polynomial ``t`` and the embedded images and must return the image.
    """
    if phi0.src is not phi1.src or phi0.dst is not phi1.dst:
        raise AlgebraMismatch("gauge fields live on different bundles")
    fiber, base = phi0.src, phi0.dst
    cert = is_basic(omega, _default_holonomy(fiber, holonomy), Q_fiber)
    if not cert:
        raise NotBasic(f"{cert.witness}: {cert.residual}")
    tname = _fresh(base, "t")
    TI = shift_tangent(make_algebra([(tname, 0)], name="I"))
    ext = tensor(base, TI.full, name=f"{base.name}xT[1]I")
    t = ext.gen(tname)
    dt = ext.gen(d_name(tname))
    Qb = extend(Q_base, ext)
    Qext = (Qb + extend(TI.d, ext)).with_name("Q~")

    images = {}
    for g, a0, a1 in zip(fiber.generators, phi0.images, phi1.images):
        e0, e1 = embed(a0, ext), embed(a1, ext)
        images[g.name] = path(t, e0, e1) if path else (1 - t) * e0 + t * e1
    At = AlgebraMorphism(fiber, ext, images, name="A(t)")

    full = field_strength_morphism(At, Qext, Q_fiber)(omega)
    beta = coordinate_field(ext, d_name(tname))(full)
    char_t = full - dt * beta
    if Qb(char_t):
        raise NotClosedInternal("char(t) is not Q_base-closed")
    dt_t = coordinate_field(ext, tname)
    if dt_t(char_t) != Qb(beta):
        raise NotClosedInternal("d/dt char(t) != Q_base(beta)")

    beta_formula = None
    T = shift_tangent(fiber)
    if all(T.bidegree[fiber_gen][1] == 1 for fiber_gen in omega.support()):
        ft = field_strength_morphism(At, Qb, Q_fiber)
        beta_formula = ext.zero()
        for g in fiber.generators:
            dw = coordinate_field(T.full, d_name(g.name))(omega)
            if dw:
                beta_formula = beta_formula + dt_t(At.image(g.name)) * ft(dw)
        if beta_formula != beta:
            raise NotClosedInternal(f"transgression formula disagrees: {beta_formula} vs {beta}")

    at = {tname: None}
    char0 = _substitute_t(char_t, base, tname, 0)
    char1 = _substitute_t(char_t, base, tname, 1)
    primitive = _integrate_t(beta, base, tname)
    difference = char1 - char0
    if difference != Q_base(primitive):
        raise NotClosedInternal("char(1) - char(0) != Q_base(primitive)")
    del at
    return Transgression(difference, primitive, beta, beta_formula, char0, char1, ext)


def _strip_t(p: Polynomial, base: GradedAlgebra, tname: str, weight) -> Polynomial:
    ext = p.algebra
    it = ext.index[tname]
    idt = ext.index[d_name(tname)]
    out = {}
    for m, c in p.terms.items():
        if m[idt]:
            continue
        w = weight(m[it])
        if not w:
            continue
        mm = list(m)
        mm[it] = 0
        mm = tuple(mm)
        out[mm] = out.get(mm, 0) + c * w
    return embed(Polynomial(ext, out), base)


def _substitute_t(p, base, tname, value):
    return _strip_t(p, base, tname, lambda n: Fraction(value) ** n)


def _integrate_t(p, base, tname):
    return _strip_t(p, base, tname, lambda n: Fraction(1, n + 1))


def chern_simons_form(phi: AlgebraMorphism, Q_base: Derivation, sc: StructureConstants,
                      kappa: Sequence[Sequence]) -> Polynomial:
    """``kappa(A, dA) + 1/3 kappa(A, [A, A])`` for ``A^a = phi*(xi^a)``."""
    A = list(phi.images)
    n = sc.dim
    out = phi.dst.zero()
    dA = [Q_base(a) for a in A]
    brk = []
    for a in range(n):
        s = phi.dst.zero()
        for b in range(n):
            for c in range(n):
                v = sc.C[a][b][c]
                if v:
                    s = s + (A[b] * A[c]).scale(v)
        brk.append(s)
    for a in range(n):
        for b in range(n):
            k = Fraction(kappa[a][b])
            if k:
                out = out + (A[a] * dA[b]).scale(k) + (A[a] * brk[b]).scale(k / 3)
    return out


# Lie algebra extensions


@dataclass
class LecomteResult:
    cochain: Polynomial
    cochain_direct: Polynomial
    g0: StructureConstants
    curvature_h: list[Polynomial]
    invariant: bool
    closed: Certificate


def lecomte_char(sc: StructureConstants, ideal: Sequence[Sequence], splitting: Sequence[Sequence],
                 Phi: InvariantPolynomial) -> LecomteResult:
    """Characteristic cochain of ``0 -> h -> g -> g0 -> 0`` for a linear splitting.

    ``ideal`` lists basis vectors of ``h`` and ``splitting`` lists the images
    ``sigma(e0_k)`` of a basis of ``g0``, both in coordinates of ``g``.  The
    quotient ``g0`` is identified with ``sigma(g0)`` and ``h`` is projected
    out along it.
    """
    n = sc.dim
    k = len(ideal)
    m = len(splitting)
    if k + m != n:
        raise NotSplitting(f"dim h + dim g0 = {k + m} != dim g = {n}")
    cols = [[Fraction(x) for x in v] for v in list(ideal) + list(splitting)]
    B = [[cols[j][i] for j in range(n)] for i in range(n)]
    Binv = linalg.inverse(B)
    if Binv is None:
        raise NotSplitting("h and sigma(g0) do not span g")
    proj_h = Binv[:k]
    proj_0 = Binv[k:]

    def coords(M, v):
        return [sum((M[r][i] * v[i] for i in range(n)), Fraction(0)) for r in range(len(M))]

    for i in range(n):
        for hv in ideal:
            br = sc.bracket(sc.basis(i), [Fraction(x) for x in hv])
            if any(coords(proj_0, br)):
                raise NotIdeal(f"[e{i + 1}, h] leaves h")
    sig = [[Fraction(x) for x in v] for v in splitting]
    g0 = StructureConstants(m, name=f"{sc.name}/h")
    for l in range(m):
        for r in range(l + 1, m):
            for a, v in enumerate(coords(proj_0, sc.bracket(sig[l], sig[r]))):
                if v:
                    g0.set(a, l, r, v)

    G = lie_algebra_coordinates(sc, prefix="xi", name=f"{sc.name}[1]")
    G0 = lie_algebra_coordinates(g0, prefix="eta", name=f"{g0.name}[1]")
    Qg = chevalley_eilenberg(sc, G)
    Q0 = chevalley_eilenberg(g0, G0)
    eta = G0.gens()
    images = {}
    for i, gname in enumerate(G.names()):
        img = G0.zero()
        for l in range(m):
            if sig[l][i]:
                img = img + eta[l].scale(sig[l][i])
        images[gname] = img
    phi = AlgebraMorphism(G, G0, images, name="sigma")
    f = field_strength_morphism(phi, Q0, Qg)

    T = shift_tangent(G)
    dxi = [T.dgen(nm) for nm in G.names()]
    dzeta = []
    for a in range(k):
        z = T.full.zero()
        for i in range(n):
            if proj_h[a][i]:
                z = z + dxi[i].scale(proj_h[a][i])
        dzeta.append(z)
    omega = T.full.zero()
    for idx in itertools.product(range(k), repeat=Phi.degree):
        c = Phi[idx]
        if c:
            t = T.full.const(c)
            for a in idx:
                t = t * dzeta[a]
            omega = omega + t
    omega = omega.scale(Fraction(1, math.factorial(Phi.degree)))
    cochain = f(omega)

    # independent route: curvature of sigma from brackets,
    # K(l, r) = sigma([e0_l, e0_r]) - [sigma e0_l, sigma e0_r],  F_h = -1/2 K_h eta eta
    Fh = [G0.zero() for _ in range(k)]
    for l in range(m):
        for r in range(m):
            if l == r:
                continue
            br0 = g0.bracket(g0.basis(l), g0.basis(r))
            sv = [sum((sig[s][i] * br0[s] for s in range(m)), Fraction(0)) for i in range(n)]
            K = [a - b for a, b in zip(sv, sc.bracket(sig[l], sig[r]))]
            Kh = coords(proj_h, K)
            for a in range(k):
                if Kh[a]:
                    Fh[a] = Fh[a] + (eta[l] * eta[r]).scale(Fraction(-1, 2) * Kh[a])
    direct = G0.zero()
    for idx in itertools.product(range(k), repeat=Phi.degree):
        c = Phi[idx]
        if c:
            t = G0.const(c)
            for a in idx:
                t = t * Fh[a]
            direct = direct + t
    direct = direct.scale(Fraction(1, math.factorial(Phi.degree)))
    if direct != cochain:
        raise NotClosedInternal(f"Lecomte routes disagree: {cochain} vs {direct}")

    action = []
    for i in range(n):
        action.append([coords(proj_h, sc.bracket(sc.basis(i), [Fraction(x) for x in hv])) for hv in ideal])
    invariant = not Phi.ad_invariance_defects(action)
    r = Q0(cochain)
    closed = passed("Q_g0-closed") if not r else failed("Q_g0-closed", "Q_g0(cochain)", r)
    if invariant and not closed:
        raise NotClosedInternal(f"invariant Phi gave a non-closed cochain: {r}")
    return LecomteResult(cochain, direct, g0, Fh, invariant, closed)
