import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import jacobi_oracle, random_table
from gradedq.derivations import check_nilpotent
from gradedq.errors import GradedError
from gradedq.lie import (StructureConstants, abelian, chevalley_eilenberg, direct_sum, heisenberg,
                         jacobi_violations, lie_algebra_coordinates, parse_structure_constants,
                         rescale, su2)


def nilpotent(sc):
    G = lie_algebra_coordinates(sc)
    return check_nilpotent(chevalley_eilenberg(sc, G)).passed


def test_su2_images():
    sc = su2()
    G = lie_algebra_coordinates(sc)
    Q = chevalley_eilenberg(sc, G)
    assert [str(i) for i in Q.images] == ["-xi2*xi3", "xi1*xi3", "-xi1*xi2"]


@pytest.mark.parametrize("sc", [su2(), heisenberg(), abelian(4), rescale(su2(), [2, 3, 5]),
                                rescale(su2(), [1, Fraction(1, 2), -1]), direct_sum(su2(), heisenberg())],
                         ids=["su2", "heis", "abelian", "so3-a", "so3-b", "sum"])
def test_lie_algebras_are_nilpotent(sc):
    assert jacobi_oracle(sc.C, sc.dim)
    assert not jacobi_violations(sc)
    assert nilpotent(sc)


def test_rescaling_keeps_sign_pattern():
    r = rescale(su2(), [2, 3, 5])
    # [e1', e2'] = 2*3 e3 = (6/5) e3'
    assert r.C[2][0][1] == Fraction(6, 5)


def test_random_tables_agree_with_oracle():
    rng = random.Random(20240601)
    seen = {True: 0, False: 0}
    for _ in range(20):
        sc = random_table(rng, rng.choice([3, 4]))
        expect = jacobi_oracle(sc.C, sc.dim)
        seen[expect] += 1
        assert nilpotent(sc) == expect
        assert (not jacobi_violations(sc)) == expect
    assert seen[False] > 0


@settings(max_examples=60, deadline=None, database=None)
@given(st.integers(0, 2**32), st.sampled_from([2, 3, 4]), st.floats(0.1, 0.9))
def test_nilpotency_iff_jacobi(seed, n, density):
    sc = random_table(random.Random(seed), n, density)
    assert nilpotent(sc) == jacobi_oracle(sc.C, sc.dim)


def test_mutated_su2_fails():
    sc = StructureConstants(3, {(2, 0, 1): 1, (0, 1, 2): 1, (1, 2, 0): 1, (0, 0, 1): 1})
    assert not jacobi_oracle(sc.C, 3)
    G = lie_algebra_coordinates(sc)
    cert = check_nilpotent(chevalley_eilenberg(sc, G))
    assert not cert
    assert cert.witness.endswith("(xi2)")
    assert str(cert.residual) == "-xi1*xi2*xi3"


def test_sign_flips_of_su2_remain_lie():
    # every sign choice on the cyclic entries is a rescaling of su(2) or sl(2)
    for signs in [(1, 1, -1), (1, -1, -1), (-1, -1, -1)]:
        sc = StructureConstants(3, {(2, 0, 1): signs[0], (0, 1, 2): signs[1], (1, 2, 0): signs[2]})
        assert jacobi_oracle(sc.C, 3)
        assert nilpotent(sc)


def test_structure_constant_errors():
    sc = StructureConstants(2)
    with pytest.raises(GradedError):
        sc.set(0, 1, 1, 1)
    sc.set(0, 0, 1, 1)
    with pytest.raises(GradedError):
        sc.set(0, 1, 0, 1)


def test_parse_structure_constants_roundtrip():
    sc = su2()
    again = parse_structure_constants(sc.to_text(), 3)
    assert again == sc
    text = "# comment\nC 3 1 2 1/2\n"
    p = parse_structure_constants(text, 3)
    assert p.C[2][0][1] == Fraction(1, 2) and p.C[2][1][0] == Fraction(-1, 2)
