"""Canonical text for scripts; ``parse(format_script(s)) == s``."""

from __future__ import annotations

from fractions import Fraction

from . import ast as A
from .parser import COMMANDS

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e) -> int:
    if isinstance(e, A.BinOp):
        return _PREC[e.op]
    if isinstance(e, A.Neg):
        return 3
    if isinstance(e, A.Pow):
        return 4
    return 5


def format_expr(e) -> str:
    if isinstance(e, A.Num):
        return str(e.value)
    if isinstance(e, A.Name):
        if e.name.startswith("d:"):
            return f"d({e.name[2:]})"
        return e.name
    if isinstance(e, A.Call):
        return f"{e.func}({format_expr(e.arg)})"
    if isinstance(e, A.Neg):
        inner = format_expr(e.operand)
        if _prec(e.operand) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, A.Pow):
        b = format_expr(e.base)
        if _prec(e.base) < 5:
            b = f"({b})"
        return f"{b}^{e.exponent}"
    if isinstance(e, A.BinOp):
        p = _PREC[e.op]
        left = format_expr(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = format_expr(e.right)
        # left-associative: equal precedence on the right needs parentheses
        if _prec(e.right) <= p and not (isinstance(e.right, A.Neg) and p == 2):
            right = f"({right})"
        sep = " " if p == 1 else ""
        return f"{left}{sep}{e.op}{sep}{right}"
    raise TypeError(e)


def _rat(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _vec(v) -> str:
    return "(" + " ".join(_rat(x) for x in v) + ")"


def _images(images) -> str:
    if not images:
        return "{ }"
    return "{\n" + "".join(f"  {g} -> {format_expr(e)}\n" for g, e in images) + "}"


def format_statement(s) -> str:
    if isinstance(s, A.AlgebraDecl):
        return f"algebra {s.name} {{ " + " ".join(f"{g}:{k}" for g, k in s.gens) + (" }" if s.gens else "}")
    if isinstance(s, A.TensorDecl):
        return f"tensor {s.name} = " + ", ".join(s.factors)
    if isinstance(s, A.TangentDecl):
        return f"tangent {s.name} of {s.base}"
    if isinstance(s, A.StructureDecl):
        head = f"structure {s.name} dim {s.dim}"
        if s.file is not None:
            return f'{head} file "{s.file}"'
        if not s.entries:
            return head + " { }"
        body = "".join(f"  C {a} {b} {c} {format_expr(v)}\n" for a, b, c, v in s.entries)
        return head + " {\n" + body + "}"
    if isinstance(s, A.ChevalleyDecl):
        return f"chevalley {s.name} on {s.algebra} using {s.structure}"
    if isinstance(s, A.DerivationDecl):
        return f"derivation {s.name} on {s.algebra} degree {s.degree} " + _images(s.images)
    if isinstance(s, A.MorphismDecl):
        return f"morphism {s.name} : {s.src} -> {s.dst} " + _images(s.images)
    if isinstance(s, A.PolyDecl):
        return f"{s.keyword} {s.name} on {s.algebra} = {format_expr(s.expr)}"
    if isinstance(s, A.SymplecticDecl):
        head = f"symplectic {s.name} on {s.algebra} degree {s.degree}"
        if s.expr is not None:
            return f"{head} = {format_expr(s.expr)}"
        return head + " pairs { " + " ".join(f"({a}, {b})" for a, b in s.pairs) + " }"
    if isinstance(s, A.QFieldDecl):
        return f"qfield {s.name} from {s.symplectic} hamiltonian {format_expr(s.hamiltonian)}"
    if isinstance(s, A.ActionDecl):
        head = f"action {s.name} algebra {s.structure} on {s.manifold}"
        if s.xi:
            head += " xi (" + ", ".join(s.xi) + ")"
        lines = []
        for k, comps in s.fields:
            inner = ", ".join(f"{g}: {format_expr(e)}" for g, e in comps)
            lines.append(f"  e{k} -> [{inner}]\n")
        return head + " {\n" + "".join(lines) + "}"
    if isinstance(s, A.AlgebroidDecl):
        return f"algebroid {s.name} {s.q} from {s.action}"
    if isinstance(s, A.Command):
        return format_command(s)
    raise TypeError(s)


def format_command(c: A.Command) -> str:
    parts = [c.verb]
    args = iter(c.args)
    for item in COMMANDS[c.verb]:
        if item == "N":
            parts.append(next(args))
        elif item == "E":
            parts.append(format_expr(next(args)))
        elif item == "W":
            items = []
            for k, e in c.option("with"):
                items.append(f"{k}: {format_expr(e)}" if k is not None else format_expr(e))
            parts.append("with [" + ", ".join(items) + "]")
        elif item == "H":
            h = c.option("holonomy")
            if h is not None:
                parts.append("holonomy (" + ", ".join(h) + ")")
        elif item == "L":
            parts.append("ideal " + " ".join(_vec(v) for v in c.option("ideal")))
            parts.append("splitting " + " ".join(_vec(v) for v in c.option("splitting")))
            if c.option("linear") is not None:
                parts.append("invariant linear " + _vec(c.option("linear")))
            else:
                parts.append("invariant matrix (" + " ".join(_vec(v) for v in c.option("matrix")) + ")")
        elif item == "on":
            if c.option("on") is not None:
                parts.append(f"on {c.option('on')}")
        else:
            parts.append(item)
    if c.bind:
        parts.append(f"as {c.bind}")
    if c.expect_fail:
        parts.append("expect fail")
    return " ".join(parts)


def format_script(script: A.Script) -> str:
    out = []
    prev_cmd = None
    for s in script.statements:
        is_cmd = isinstance(s, A.Command)
        if prev_cmd is not None and is_cmd != prev_cmd:
            out.append("")
        out.append(format_statement(s))
        prev_cmd = is_cmd
    return "\n".join(out) + ("\n" if out else "")
