"""Lie algebra structure constants and the Chevalley-Eilenberg differential.

Convention: ``[e_b, e_c] = C^a_{bc} e_a`` and
``Q_CE(xi^a) = -1/2 C^a_{bc} xi^b xi^c``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import GradedAlgebra, make_algebra
from .derivations import Derivation
from .errors import GradedError


class StructureConstants:
    """Exact table ``C[a][b][c] = C^a_{bc}`` (0-based), antisymmetric in b, c."""

    def __init__(self, dim: int, entries: Mapping[tuple[int, int, int], Fraction] | None = None,
                 name: str = "g"):
        self.dim = dim
        self.name = name
        self.C = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (a, b, c), v in (entries or {}).items():
            self.set(a, b, c, v)

    def set(self, a: int, b: int, c: int, value) -> None:
        """Set ``C^a_{bc}``; the ``(c, b)`` entry is completed by antisymmetry."""
        value = Fraction(value)
        if b == c and value:
            raise GradedError(f"C^{a}_{{{b}{c}}} must vanish by antisymmetry")
        old = self.C[a][c][b]
        if old and old != -value:
            raise GradedError(f"inconsistent antisymmetric entries for C^{a}_({b},{c})")
        self.C[a][b][c] = value
        self.C[a][c][b] = -value

    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        n = self.dim
        out = [Fraction(0)] * n
        for b in range(n):
            if not x[b]:
                continue
            for c in range(n):
                if not y[c]:
                    continue
                for a in range(n):
                    v = self.C[a][b][c]
                    if v:
                        out[a] += v * x[b] * y[c]
        return out

    def basis(self, i: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def entries(self) -> dict[tuple[int, int, int], Fraction]:
        n = self.dim
        return {(a, b, c): self.C[a][b][c]
                for a in range(n) for b in range(n) for c in range(b + 1, n) if self.C[a][b][c]}

    def __eq__(self, other):
        return isinstance(other, StructureConstants) and self.dim == other.dim and self.C == other.C

    def __repr__(self):
        return f"StructureConstants({self.name}, dim={self.dim}, {self.entries()})"

    def to_text(self) -> str:
        lines = []
        for (a, b, c), v in sorted(self.entries().items()):
            vs = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            lines.append(f"C {a + 1} {b + 1} {c + 1} {vs}")
        return "\n".join(lines) + ("\n" if lines else "")


def parse_structure_constants(text: str, dim: int | None = None, name: str = "g") -> StructureConstants:
    """Parse lines ``C a b c value`` (1-based indices); ``#`` starts a comment.

    The dimension is the largest index seen unless given explicitly.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5 or parts[0] != "C":
            raise GradedError(f"line {lineno}: expected `C a b c value`, got {raw!r}")
        try:
            a, b, c = (int(x) for x in parts[1:4])
            v = Fraction(parts[4])
        except ValueError as exc:
            raise GradedError(f"line {lineno}: {exc}") from None
        if min(a, b, c) < 1:
            raise GradedError(f"line {lineno}: indices are 1-based")
        rows.append((a - 1, b - 1, c - 1, v))
    n = dim if dim is not None else max([max(r[:3]) + 1 for r in rows], default=0)
    sc = StructureConstants(n, name=name)
    for a, b, c, v in rows:
        if max(a, b, c) >= n:
            raise GradedError(f"index out of range for dimension {n}")
        sc.set(a, b, c, v)
    return sc


def jacobi_violations(sc: StructureConstants) -> list[tuple[int, int, int, int, Fraction]]:
    """Independent triple-loop Jacobi oracle.

    Returns every ``(a, b, c, e, value)`` with
    ``sum_d C^d_{bc} C^a_{de} + C^d_{ce} C^a_{db} + C^d_{eb} C^a_{dc} != 0``.
    """
    n = sc.dim
    C = sc.C
    bad = []
    for b, c, e in itertools.combinations(range(n), 3):
        for a in range(n):
            s = Fraction(0)
            for d in range(n):
                s += C[d][b][c] * C[a][d][e] + C[d][c][e] * C[a][d][b] + C[d][e][b] * C[a][d][c]
            if s:
                bad.append((a, b, c, e, s))
    return bad


def satisfies_jacobi(sc: StructureConstants) -> bool:
    return not jacobi_violations(sc)


def lie_algebra_coordinates(sc: StructureConstants, prefix: str = "xi", names: Iterable[str] | None = None,
                            name: str | None = None) -> GradedAlgebra:
    """The algebra of functions on g[1]: one degree-1 generator per basis vector."""
    names = list(names) if names is not None else [f"{prefix}{i + 1}" for i in range(sc.dim)]
    return make_algebra([(n, 1) for n in names], name=name or f"{sc.name}[1]")


def chevalley_eilenberg(sc: StructureConstants, A: GradedAlgebra, names: Sequence[str] | None = None,
                        name: str = "Q_CE") -> Derivation:
    """``Q(xi^a) = -1/2 C^a_{bc} xi^b xi^c`` on the generators ``names`` of ``A``.

    Generators of ``A`` not listed are sent to zero (trivial extension).
    """
    names = list(names) if names is not None else [g.name for g in A.generators][: sc.dim]
    if len(names) != sc.dim:
        raise GradedError("need one generator per basis vector")
    xs = [A.gen(n) for n in names]
    images = {}
    n = sc.dim
    half = Fraction(-1, 2)
    for a in range(n):
        img = A.zero()
        for b in range(n):
            for c in range(n):
                v = sc.C[a][b][c]
                if v:
                    img = img + (xs[b] * xs[c]).scale(half * v)
        images[names[a]] = img
    return Derivation(A, 1, images, name=name)


# common algebras


def su2() -> StructureConstants:
    """``[e1,e2]=e3`` and cyclic (epsilon tensor)."""
    return StructureConstants(3, {(2, 0, 1): 1, (0, 1, 2): 1, (1, 2, 0): 1}, name="su2")


def heisenberg() -> StructureConstants:
    """``[e1,e2]=e3``, e3 central."""
    return StructureConstants(3, {(2, 0, 1): 1}, name="heis3")


def abelian(n: int) -> StructureConstants:
    return StructureConstants(n, name=f"R{n}")


def rescale(sc: StructureConstants, factors: Sequence) -> StructureConstants:
    """Structure constants in the rescaled basis ``e'_i = s_i e_i``."""
    n = sc.dim
    s = [Fraction(x) for x in factors]
    out = StructureConstants(n, name=sc.name + "'")
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                v = sc.C[a][b][c]
                if v:
                    out.set(a, b, c, v * s[b] * s[c] / s[a])
    return out


def direct_sum(*algs: StructureConstants) -> StructureConstants:
    n = sum(g.dim for g in algs)
    out = StructureConstants(n, name="+".join(g.name for g in algs))
    off = 0
    for g in algs:
        for (a, b, c), v in g.entries().items():
            out.set(a + off, b + off, c + off, v)
        off += g.dim
    return out
