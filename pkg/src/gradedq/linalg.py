"""Exact rational linear algebra on lists of Fractions, backed by sympy."""

from __future__ import annotations

from fractions import Fraction

import sympy


def _to_sympy(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction)
                          else sympy.Rational(x) for x in row] for row in rows])


def _from_sympy(M) -> list[list[Fraction]]:
    return [[Fraction(int(M[i, j].p), int(M[i, j].q)) for j in range(M.cols)] for i in range(M.rows)]


def rank(rows) -> int:
    if not rows:
        return 0
    return _to_sympy(rows).rank()


def inverse(rows) -> list[list[Fraction]] | None:
    """Inverse of a square matrix, or None if singular."""
    M = _to_sympy(rows)
    if M.rows == 0:
        return []
    if M.det() == 0:
        return None
    return _from_sympy(M.inv())


def solve_combination(vectors, target) -> list[Fraction] | None:
    """Coefficients c with ``sum c_i vectors[i] == target``, or None."""
    if not vectors:
        return [] if not any(target) else None
    A = _to_sympy(vectors).T
    b = _to_sympy([target]).T
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    return [Fraction(int(sol[i].p), int(sol[i].q)) for i in range(sol.rows)]


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
            for i in range(len(A))]
