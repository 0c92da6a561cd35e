"""Syntax tree of gq scripts.

Source positions are carried for diagnostics but excluded from equality, so
two parses of equivalent layouts compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# expressions


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Name:
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    pos: tuple = _pos()


Expr = Union[Num, Name, Call, Neg, BinOp, Pow]


def names_in(e: Expr) -> list[tuple[str, tuple]]:
    """Identifiers referenced by an expression, with positions (calls included)."""
    if isinstance(e, Name):
        return [(e.name, e.pos)]
    if isinstance(e, Call):
        return [(e.func, e.pos)] + names_in(e.arg)
    if isinstance(e, Neg):
        return names_in(e.operand)
    if isinstance(e, BinOp):
        return names_in(e.left) + names_in(e.right)
    if isinstance(e, Pow):
        return names_in(e.base)
    return []


# declarations


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    gens: tuple[tuple[str, int], ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class TensorDecl:
    name: str
    factors: tuple[str, ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class TangentDecl:
    name: str
    base: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class StructureDecl:
    name: str
    dim: int
    entries: tuple[tuple[int, int, int, Expr], ...] = ()
    file: Optional[str] = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class ChevalleyDecl:
    name: str
    algebra: str
    structure: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class DerivationDecl:
    name: str
    algebra: str
    degree: int
    images: tuple[tuple[str, Expr], ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class MorphismDecl:
    name: str
    src: str
    dst: str
    images: tuple[tuple[str, Expr], ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class PolyDecl:
    keyword: str  # poly | form
    name: str
    algebra: str
    expr: Expr
    pos: tuple = _pos()


@dataclass(frozen=True)
class SymplecticDecl:
    name: str
    algebra: str
    degree: int
    pairs: tuple[tuple[str, str], ...] = ()
    expr: Optional[Expr] = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class QFieldDecl:
    name: str
    symplectic: str
    hamiltonian: Expr
    pos: tuple = _pos()


@dataclass(frozen=True)
class ActionDecl:
    name: str
    structure: str
    manifold: str
    fields: tuple[tuple[int, tuple[tuple[str, Expr], ...]], ...]
    xi: tuple[str, ...] = ()
    pos: tuple = _pos()


@dataclass(frozen=True)
class AlgebroidDecl:
    name: str
    q: str
    action: str
    pos: tuple = _pos()


# commands


@dataclass(frozen=True)
class Command:
    """A verification command.

    ``verb`` is the command word(s) (``check nilpotent``, ``char``, ...),
    ``args`` its positional operands: names, expressions or nested tuples
    of rationals, and ``options`` keyword clauses (``with``, ``holonomy``,
    ``ideal`` ...).
    """

    verb: str
    args: tuple = ()
    options: tuple[tuple[str, object], ...] = ()
    bind: Optional[str] = None
    expect_fail: bool = False
    pos: tuple = _pos()

    def option(self, key, default=None):
        for k, v in self.options:
            if k == key:
                return v
        return default


Statement = Union[AlgebraDecl, TensorDecl, TangentDecl, StructureDecl, ChevalleyDecl,
                  DerivationDecl, MorphismDecl, PolyDecl, SymplecticDecl, QFieldDecl,
                  ActionDecl, AlgebroidDecl, Command]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]
