"""Shared fixtures: small algebras, connections and random tables."""

from __future__ import annotations

import random
from fractions import Fraction

from gradedq.algebra import make_algebra
from gradedq.charclasses import InvariantPolynomial, invariant_to_basic_form
from gradedq.derivations import AlgebraMorphism, Derivation
from gradedq.lie import StructureConstants, chevalley_eilenberg, lie_algebra_coordinates, su2
from gradedq.tangent import shift_tangent

PROFILES = {
    "even": [("x", 0), ("y", 0), ("z", 2)],
    "odd": [("a", 1), ("b", 1), ("c", 1), ("e", 3)],
    "mixed": [("x", 0), ("a", 1), ("y", 2), ("b", 1), ("c", 3)],
}


def koszul_sort(word, degrees):
    """Sort a word of generator indices by adjacent swaps.

    Returns ``(sign, exponents)``, or ``None`` if an odd generator repeats.
    """
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                if degrees[w[j]] % 2 and degrees[w[j + 1]] % 2:
                    sign = -sign
                w[j], w[j + 1] = w[j + 1], w[j]
    exps = [0] * len(degrees)
    for g in w:
        exps[g] += 1
        if degrees[g] % 2 and exps[g] > 1:
            return None
    return sign, tuple(exps)


def oracle_poly(terms, degrees):
    """Canonical dict for a list of ``(coeff, word)`` pairs."""
    out = {}
    for c, word in terms:
        r = koszul_sort(word, degrees)
        if r is None:
            continue
        s, m = r
        out[m] = out.get(m, 0) + s * c
    return {m: c for m, c in out.items() if c}


def kernel_poly(A, terms):
    """Build the same element by multiplying generators in word order."""
    out = A.zero()
    for c, word in terms:
        t = A.const(c)
        for g in word:
            t = t * A.gen(A.generators[g].name)
        out = out + t
    return out


def r4():
    R4 = make_algebra([(n, 0) for n in "xyzw"], name="R4")
    return shift_tangent(R4)


def su2_setup():
    sc = su2()
    G = lie_algebra_coordinates(sc, name="su2")
    Q = chevalley_eilenberg(sc, G)
    return sc, G, Q


def su2_connection(T, G):
    """The polynomial su(2) connection used throughout the suites."""
    x, y, z, w = (T.full.gen(n) for n in "xyzw")
    dx, dy, dz, dw = (T.dgen(n) for n in "xyzw")
    return AlgebraMorphism(G, T.full, {"xi1": x * dy, "xi2": y * dz, "xi3": z * dw + x * dx})


def bianchi_oracle(sc, A, d):
    """``F = dA + 1/2 [A,A]`` and ``dF + [A,F]`` from the structure constants alone."""
    n = sc.dim
    F = []
    for a in range(n):
        f = d(A[a])
        for b in range(n):
            for c in range(n):
                if sc.C[a][b][c]:
                    f = f + (A[b] * A[c]).scale(Fraction(sc.C[a][b][c], 2))
        F.append(f)
    B = []
    for a in range(n):
        r = d(F[a])
        for b in range(n):
            for c in range(n):
                if sc.C[a][b][c]:
                    r = r + (A[b] * F[c]).scale(sc.C[a][b][c])
        B.append(r)
    return F, B


def killing_form(G):
    return invariant_to_basic_form(InvariantPolynomial.identity(3), shift_tangent(G))


def random_table(rng: random.Random, n: int, density: float = 0.4, values=(-2, -1, 1, 2)):
    """A random antisymmetric table with small integer entries."""
    sc = StructureConstants(n, name="rand")
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                if rng.random() < density:
                    sc.set(a, b, c, Fraction(rng.choice(values)))
    return sc


def jacobi_oracle(C, n):
    """Triple loop over basis triples using nested brackets of basis vectors."""

    def br(x, y):
        return [sum(C[a][b][c] * x[b] * y[c] for b in range(n) for c in range(n)) for a in range(n)]

    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = basis[i], basis[j], basis[k]
                s = [p + q + r for p, q, r in zip(br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))]
                if any(s):
                    return False
    return True


def derivation_zero(A, degree=1):
    return Derivation(A, degree, {})
