from fractions import Fraction

import pytest

from gradedq.algebra import embed, make_algebra
from gradedq.derivations import AlgebraMorphism, Derivation, check_nilpotent
from gradedq.equivariant import (ActionAlgebroid, LieAction, cartan_basic_check,
                                 weil_cartan_conjugation, wz_gauging_check)
from gradedq.errors import NotEquivariantlyClosed, NotHomomorphism, NotNilpotent
from gradedq.lie import StructureConstants, su2
from gradedq.tangent import check_twist, shift_tangent

R2 = make_algebra([("x", 0), ("y", 0)], name="R2")
x, y = R2.gens()
N = make_algebra([("u", 0), ("v", 0), ("w", 0)], name="N")
TN = shift_tangent(N)
u, v, w = (TN.full.gen(n) for n in "uvw")
du, dv, dw = (TN.dgen(n) for n in "uvw")


@pytest.fixture(scope="module")
def so2():
    act = LieAction(StructureConstants(1, name="so2"), R2, [Derivation(R2, 0, {"x": -y, "y": x})],
                    xi_names=["xi"])
    return ActionAlgebroid(act)


def h_hat(alg, s=-1):
    T = alg.T
    X, Y = T.full.gen("x"), T.full.gen("y")
    return T.dgen("x") * T.dgen("y") + (T.dgen("xi") * (X * X + Y * Y)).scale(Fraction(s, 2))


def test_so2_algebroid(so2):
    assert so2.act.homomorphism_check()
    assert [str(i) for i in so2.Q.images] == ["-y*xi", "x*xi", "0"]
    assert check_nilpotent(so2.Q)
    assert check_twist(so2.Q)
    assert weil_cartan_conjugation(so2)


def test_su2_linear_action_conjugation():
    R3 = make_algebra([("a1", 0), ("a2", 0), ("a3", 0)], name="R3")
    a1, a2, a3 = R3.gens()
    sc = su2()
    # rho_b = -C^c_{bd} a^d d/da^c: the sign turns the left action into a homomorphism
    rho = []
    for b in range(3):
        img = {}
        for c in range(3):
            val = R3.zero()
            for d, ad in enumerate((a1, a2, a3)):
                val = val - ad.scale(sc.C[c][b][d])
            img[f"a{c + 1}"] = val
        rho.append(Derivation(R3, 0, img))
    alg = ActionAlgebroid(LieAction(sc, R3, rho))
    assert weil_cartan_conjugation(alg)
    assert check_twist(alg.Q)
    with pytest.raises(NotHomomorphism):
        LieAction(sc, R3, [r.scale(-1) for r in rho])
    T = alg.T
    kappa = sum((T.dgen(f"xi{i}") * T.dgen(f"xi{i}") for i in (1, 2, 3)), T.full.zero())
    rep = cartan_basic_check(alg, kappa)
    assert rep.basic and rep.closed and rep.in_cartan_span


def test_mutations_break_nilpotency():
    # Jacobi fails, rho = 0 is trivially a homomorphism
    bad = StructureConstants(3, {(2, 0, 1): 1, (0, 1, 2): 1, (1, 2, 0): 1, (0, 0, 1): 1})
    M = make_algebra([("t", 0)])
    with pytest.raises(NotNilpotent):
        ActionAlgebroid(LieAction(bad, M, [Derivation(M, 0, {})] * 3))
    # rho not a homomorphism for su(2)
    R2b = make_algebra([("p", 0), ("q", 0)])
    p, q = R2b.gens()
    rho = [Derivation(R2b, 0, {"p": q}), Derivation(R2b, 0, {"q": p}), Derivation(R2b, 0, {})]
    act = LieAction(su2(), R2b, rho, check=False)
    assert not act.homomorphism_check()
    with pytest.raises(NotHomomorphism):
        ActionAlgebroid(act)


def test_equivariant_extension_sign(so2):
    good = cartan_basic_check(so2, h_hat(so2, -1))
    assert good.basic and good.closed and good.in_cartan_span
    assert not cartan_basic_check(so2, h_hat(so2, 1)).closed
    assert not cartan_basic_check(so2, embed(x, so2.T.full)).basic
    one = cartan_basic_check(so2, so2.T.full.one())
    assert one.basic and one.closed


def matter_variation_oracle(phi0, eps):
    """d/dt f0*(dx dy) along x -> X + t eps rho(x), from the flowed components."""
    X, Y = phi0["x"], phi0["y"]
    vx, vy = eps * (-Y), eps * X
    return TN.d(vx) * TN.d(Y) + TN.d(X) * TN.d(vy)


def formula_oracle(phi0, eps):
    """d eps ^ X*(iota_rho H) + eps X*(L_rho H) with iota_rho(dx dy) = -y dy - x dx and L_rho H = 0."""
    X, Y = phi0["x"], phi0["y"]
    return TN.d(eps) * (-(Y * TN.d(Y)) - X * TN.d(X))


@pytest.mark.parametrize("xi_image,eps", [
    (u * dv + w * du, u * w),
    (u * u * du, v + 2),
    (TN.full.zero(), u),
], ids=["general", "a(u)du", "matter-only"])
def test_wz_gauging(so2, xi_image, eps):
    phi = AlgebraMorphism(so2.E, TN.full, {"x": u * v, "y": w + u, "xi": xi_image})
    H = shift_tangent(R2).dgen("x") * shift_tangent(R2).dgen("y")
    r = wz_gauging_check(so2, H, h_hat(so2), phi, [eps])
    phi0 = {"x": u * v, "y": w + u}
    assert r.variation == r.variation_formula
    assert r.variation == matter_variation_oracle(phi0, eps) == formula_oracle(phi0, eps)
    assert r.variation
    assert r.passed
    assert TN.d(r.primitive) == r.difference


def test_wz_requires_moment_map(so2):
    phi = AlgebraMorphism(so2.E, TN.full, {"x": u, "y": v, "xi": du})
    H = shift_tangent(R2).dgen("x") * shift_tangent(R2).dgen("y")
    with pytest.raises(NotEquivariantlyClosed):
        wz_gauging_check(so2, H, embed(H, so2.T.full), phi, [u])


def test_trivial_action_reduces_to_pullback():
    M = make_algebra([("x", 0), ("y", 0)], name="M")
    act = LieAction(StructureConstants(1), M, [Derivation(M, 0, {})], xi_names=["c"])
    alg = ActionAlgebroid(act)
    H = shift_tangent(M).dgen("x") * shift_tangent(M).dgen("y")
    Hh = embed(H, alg.T.full)
    phi = AlgebraMorphism(alg.E, TN.full, {"x": u * w, "y": v, "c": dw})
    r = wz_gauging_check(alg, H, Hh, phi, [u])
    assert r.passed and not r.variation and not r.difference
