"""Name resolution, kernel object construction and command execution."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .. import charclasses as cc
from .. import equivariant as eq
from .. import pq
from ..algebra import GradedAlgebra, Polynomial, embed, make_algebra, tensor
from ..certificates import Certificate
from ..derivations import AlgebraMorphism, Derivation, check_nilpotent, coordinate_field
from ..errors import GradedError, SemanticError
from ..lie import (StructureConstants, chevalley_eilenberg, jacobi_violations,
                   parse_structure_constants)
from ..tangent import check_chain, check_twist, field_strength, shift_tangent
from . import ast as A
from .printer import format_command

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"


@dataclass
class Binding:
    kind: str  # algebra structure derivation morphism poly symplectic action algebroid
    value: Any
    pos: tuple


@dataclass
class Record:
    command: str
    line: int
    status: str
    witness: str | None = None
    residual: str | None = None
    outputs: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    error: str | None = None
    expected: str | None = None
    timing_ms: float | None = None

    def to_dict(self, timing: bool = True) -> dict:
        d = {"command": self.command, "line": self.line, "status": self.status}
        for k in ("witness", "residual", "error", "expected"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        if self.outputs:
            d["outputs"] = dict(self.outputs)
        if self.data:
            d["data"] = dict(self.data)
        if timing and self.timing_ms is not None:
            d["timing_ms"] = round(self.timing_ms, 3)
        return d


def _sem(msg, pos, kind="SemanticError"):
    return SemanticError(msg, pos[0], pos[1], kind)


class Session:
    """Elaborates statements in order; commands run when ``execute`` is set."""

    def __init__(self, base_dir: Path | str = ".", execute: bool = True):
        self.env: dict[str, Binding] = {}
        self.base_dir = Path(base_dir)
        self.execute = execute
        self.records: list[Record] = []

    # environment

    def bind(self, name, kind, value, pos):
        if name in self.env:
            old = self.env[name].pos
            raise _sem(f"{name!r} already declared at line {old[0]}", pos, "DuplicateName")
        self.env[name] = Binding(kind, value, pos)

    def lookup(self, name, kinds, pos):
        b = self.env.get(name)
        if b is None:
            raise _sem(f"unknown name {name!r}", pos, "UnknownName")
        if isinstance(kinds, str):
            kinds = (kinds,)
        if b.kind not in kinds and b.kind != "deferred":
            art = "an" if b.kind[0] in "aeiou" else "a"
            raise _sem(f"{name!r} is {art} {b.kind}, expected {' or '.join(kinds)}", pos, "KindMismatch")
        return b.value

    # expressions

    def evaluate(self, e, ctx: GradedAlgebra | None):
        """Evaluate to a Polynomial in ``ctx`` (or a Fraction when constant)."""
        if isinstance(e, A.Num):
            return Fraction(e.value)
        if isinstance(e, A.Name):
            if ctx is not None and e.name in ctx.index:
                return ctx.gen(e.name)
            b = self.env.get(e.name)
            if b is not None and b.kind in ("poly", "deferred"):
                if b.kind == "deferred":
                    raise _Deferred()
                return self._coerce(b.value, ctx, e.pos)
            if e.name.startswith("d:") and e.name[2:] in self.env:
                return self.evaluate(A.Call("d", A.Name(e.name[2:], e.pos), e.pos), ctx)
            if e.name.startswith("d:") and (ctx is None or ctx.tangent_info is None):
                raise _sem(f"{e.name.replace('d:', 'd(', 1)}) used outside a tangent algebra",
                           e.pos, "NotTangent")
            where = f" in algebra {ctx.name}" if ctx is not None else ""
            raise _sem(f"unknown name {e.name!r}{where}", e.pos, "UnknownName")
        if isinstance(e, A.Call):
            b = self.env.get(e.func)
            if b is None and e.func == "d":
                if ctx is None or ctx.tangent_info is None:
                    raise _sem("d(...) used outside a tangent algebra", e.pos, "NotTangent")
                return ctx.tangent_info.d(self._poly(self.evaluate(e.arg, ctx), ctx))
            if b is None:
                raise _sem(f"unknown name {e.func!r}", e.pos, "UnknownName")
            if b.kind == "derivation":
                D = b.value
                arg = self._poly(self.evaluate(e.arg, D.src), D.src)
                return self._coerce(D(arg), ctx, e.pos)
            if b.kind == "morphism":
                phi = b.value
                arg = self._poly(self.evaluate(e.arg, phi.src), phi.src)
                return self._coerce(phi(arg), ctx, e.pos)
            raise _sem(f"{e.func!r} is a {b.kind}, not applicable", e.pos, "KindMismatch")
        if isinstance(e, A.Neg):
            return -self.evaluate(e.operand, ctx)
        if isinstance(e, A.Pow):
            return self.evaluate(e.base, ctx) ** e.exponent
        if isinstance(e, A.BinOp):
            left = self.evaluate(e.left, ctx)
            right = self.evaluate(e.right, ctx)
            if isinstance(left, Polynomial) and isinstance(right, Polynomial) \
                    and left.algebra is not right.algebra:
                raise _sem(f"operands live in {left.algebra.name} and {right.algebra.name}",
                           e.pos, "AlgebraMismatch")
            if e.op == "+":
                return left + right
            if e.op == "-":
                return left - right
            if e.op == "*":
                return left * right
            if isinstance(right, Polynomial):
                raise _sem("division by a polynomial", e.pos, "NotRational")
            if right == 0:
                raise _sem("division by zero", e.pos, "ZeroDivision")
            return left / right
        raise TypeError(e)

    def _coerce(self, p, ctx, pos):
        if ctx is None or not isinstance(p, Polynomial) or p.algebra is ctx:
            return p
        try:
            return embed(p, ctx)
        except GradedError:
            raise _sem(f"value in {p.algebra.name} used in {ctx.name}", pos, "AlgebraMismatch") from None

    @staticmethod
    def _poly(v, alg):
        return v if isinstance(v, Polynomial) else alg.const(v)

    def poly(self, e, alg):
        return self._poly(self.evaluate(e, alg), alg)

    def infer_algebra(self, *exprs):
        for e in exprs:
            for name, pos in A.names_in(e):
                b = self.env.get(name)
                if b is None:
                    continue
                if b.kind == "poly":
                    return b.value.algebra
                if b.kind == "deferred":
                    raise _Deferred()
                if b.kind == "derivation":
                    return b.value.dst
                if b.kind == "morphism":
                    return b.value.dst
        return None

    # statements

    def run_script(self, script: A.Script):
        for s in script.statements:
            self.statement(s)
        return self.records

    def statement(self, s):
        if isinstance(s, A.Command):
            return self.command(s)
        try:
            getattr(self, "decl_" + type(s).__name__)(s)
        except SemanticError:
            raise
        except _Deferred:
            raise _sem("declaration depends on a command result; run the script to evaluate it",
                       s.pos, "Deferred") from None
        except GradedError as exc:
            raise _sem(str(exc), s.pos, type(exc).__name__) from None

    def decl_AlgebraDecl(self, s):
        self.bind(s.name, "algebra", make_algebra(s.gens, name=s.name), s.pos)

    def decl_TensorDecl(self, s):
        algs = [self.lookup(f, "algebra", s.pos) for f in s.factors]
        self.bind(s.name, "algebra", tensor(*algs, name=s.name), s.pos)

    def decl_TangentDecl(self, s):
        base = self.lookup(s.base, "algebra", s.pos)
        self.bind(s.name, "algebra", shift_tangent(base).full, s.pos)

    def decl_StructureDecl(self, s):
        if s.file is not None:
            path = self.base_dir / s.file
            try:
                text = path.read_text()
            except OSError as exc:
                raise _sem(f"cannot read {s.file}: {exc.strerror}", s.pos, "FileError") from None
            sc = parse_structure_constants(text, s.dim, name=s.name)
        else:
            sc = StructureConstants(s.dim, name=s.name)
            for a, b, c, v in s.entries:
                if not all(1 <= i <= s.dim for i in (a, b, c)):
                    raise _sem(f"index out of range in C {a} {b} {c}", s.pos, "IndexError")
                val = self.evaluate(v, None)
                if isinstance(val, Polynomial):
                    raise _sem("structure constants must be rational", s.pos, "NotRational")
                sc.set(a - 1, b - 1, c - 1, val)
        self.bind(s.name, "structure", sc, s.pos)

    def decl_ChevalleyDecl(self, s):
        alg = self.lookup(s.algebra, "algebra", s.pos)
        sc = self.lookup(s.structure, "structure", s.pos)
        odd = [g.name for g in alg.generators if g.degree == 1][: sc.dim]
        self.bind(s.name, "derivation", chevalley_eilenberg(sc, alg, odd, name=s.name), s.pos)

    def _image_map(self, images, src, dst, pos):
        out = {}
        for g, e in images:
            if g not in src.index:
                raise _sem(f"{g!r} is not a generator of {src.name}", pos, "UnknownName")
            if g in out:
                raise _sem(f"image of {g!r} given twice", pos, "DuplicateName")
            out[g] = self.poly(e, dst)
        return out

    def decl_DerivationDecl(self, s):
        alg = self.lookup(s.algebra, "algebra", s.pos)
        images = self._image_map(s.images, alg, alg, s.pos)
        self.bind(s.name, "derivation", Derivation(alg, s.degree, images, name=s.name), s.pos)

    def decl_MorphismDecl(self, s):
        src = self.lookup(s.src, "algebra", s.pos)
        dst = self.lookup(s.dst, "algebra", s.pos)
        images = self._image_map(s.images, src, dst, s.pos)
        self.bind(s.name, "morphism", AlgebraMorphism(src, dst, images, name=s.name), s.pos)

    def decl_PolyDecl(self, s):
        alg = self.lookup(s.algebra, "algebra", s.pos)
        self.bind(s.name, "poly", self.poly(s.expr, alg), s.pos)

    def decl_SymplecticDecl(self, s):
        S = self.lookup(s.algebra, "algebra", s.pos)
        if s.expr is not None:
            w = pq.SymplecticStructure(S, s.degree, self.poly(s.expr, shift_tangent(S).full), s.name)
        else:
            for a, b in s.pairs:
                for g in (a, b):
                    if g not in S.index:
                        raise _sem(f"{g!r} is not a generator of {S.name}", s.pos, "UnknownName")
            w = pq.SymplecticStructure.darboux(S, s.degree, s.pairs, s.name)
        self.bind(s.name, "symplectic", w, s.pos)

    def decl_QFieldDecl(self, s):
        w = self.lookup(s.symplectic, "symplectic", s.pos)
        H = self.poly(s.hamiltonian, w.S)
        self.bind(s.name, "derivation", pq.q_from_hamiltonian(w, H).with_name(s.name), s.pos)

    def decl_ActionDecl(self, s):
        sc = self.lookup(s.structure, "structure", s.pos)
        M = self.lookup(s.manifold, "algebra", s.pos)
        fields = [None] * sc.dim
        for k, comps in s.fields:
            if not 1 <= k <= sc.dim:
                raise _sem(f"e{k} is not a basis element of {s.structure}", s.pos, "IndexError")
            if fields[k - 1] is not None:
                raise _sem(f"e{k} given twice", s.pos, "DuplicateName")
            fields[k - 1] = Derivation(M, 0, self._image_map(comps, M, M, s.pos), name=f"rho{k}")
        for k in range(sc.dim):
            if fields[k] is None:
                fields[k] = Derivation(M, 0, {}, name=f"rho{k + 1}")
        xi = list(s.xi) or None
        if xi is not None and len(xi) != sc.dim:
            raise _sem("need one xi name per basis element", s.pos, "AlgebraMismatch")
        act = eq.LieAction(sc, M, fields, xi_names=xi, name=s.name, check=False)
        self.bind(s.name, "action", act, s.pos)

    def decl_AlgebroidDecl(self, s):
        act = self.lookup(s.action, "action", s.pos)
        alg = eq.ActionAlgebroid(act)
        alg.E.name = s.name
        self.bind(s.name, "algebra", alg.E, s.pos)
        self.bind(s.q, "derivation", alg.Q.with_name(s.q), s.pos)
        self.algebroids = getattr(self, "algebroids", {})
        self.algebroids[s.name] = alg

    # commands

    def command(self, c: A.Command):
        text = format_command(c)
        rec = Record(text, c.pos[0], PASS)
        handler = getattr(self, "cmd_" + c.verb.replace(" ", "_"))
        if not self.execute:
            self._static_check(c)
            if c.bind:
                self.bind(c.bind, "deferred", None, c.pos)
            return None
        t0 = time.perf_counter()
        try:
            out = handler(c, rec)
        except SemanticError:
            raise
        except GradedError as exc:
            rec.status = ERROR
            rec.error = f"{type(exc).__name__}: {exc}"
            out = None
        rec.timing_ms = (time.perf_counter() - t0) * 1000
        if c.expect_fail and rec.status != ERROR:
            rec.expected = FAIL
            if rec.status == FAIL:
                rec.status = PASS
            else:
                rec.status = FAIL
                rec.witness = rec.witness or "expected failure did not occur"
        if c.bind:
            if out is None:
                raise _sem(f"{c.verb} produced no value to bind", c.pos, "NoValue")
            self.bind(c.bind, "poly", out, c.pos)
        self.records.append(rec)
        return rec

    def _static_check(self, c: A.Command):
        kinds = _ARG_KINDS.get(c.verb, ())
        for arg, kind in zip(c.args, kinds):
            if kind and isinstance(arg, str) and not (arg == "d" and kind == "derivation"):
                self.lookup(arg, kind, c.pos)
        for arg in c.args:
            if not isinstance(arg, str):
                for name, pos in A.names_in(arg):
                    bare = name[2:] if name.startswith("d:") else name
                    if name != "d" and bare not in self.env and not self._is_generator_anywhere(name):
                        raise _sem(f"unknown name {name!r}", pos, "UnknownName")
        if c.option("on") is not None:
            self.lookup(c.option("on"), "algebra", c.pos)

    def _is_generator_anywhere(self, name):
        return any(b.kind == "algebra" and name in b.value.index for b in self.env.values())

    @staticmethod
    def _apply_cert(rec: Record, cert: Certificate):
        rec.status = PASS if cert.passed else FAIL
        if not cert.passed:
            rec.witness = cert.witness
            rec.residual = None if cert.residual is None else str(cert.residual)

    def _names(self, c, kinds):
        out = []
        for a, k in zip(c.args, kinds):
            if a == "d" and k == "derivation" and "d" not in self.env:
                out.append(_DE_RHAM)
            else:
                out.append(self.lookup(a, k, c.pos))
        # `d` stands for the de Rham differential of the base the gauge field maps into
        for i, v in enumerate(out):
            if v is _DE_RHAM:
                phi = next((x for x in out if isinstance(x, AlgebraMorphism)), None)
                if phi is None or phi.dst.tangent_info is None:
                    raise _sem("`d` needs a gauge field into a tangent algebra", c.pos, "NotTangent")
                out[i] = phi.dst.tangent_info.d
        return out

    def cmd_check_nilpotent(self, c, rec):
        (Q,) = self._names(c, ["derivation"])
        self._apply_cert(rec, check_nilpotent(Q))

    def cmd_check_jacobi(self, c, rec):
        (sc,) = self._names(c, ["structure"])
        bad = jacobi_violations(sc)
        rec.data["violations"] = len(bad)
        if bad:
            a, b, cc_, e, v = bad[0]
            rec.status = FAIL
            rec.witness = f"Jacobi(e{b + 1},e{cc_ + 1},e{e + 1}) component {a + 1}"
            rec.residual = str(v)

    def cmd_check_homomorphism(self, c, rec):
        (act,) = self._names(c, ["action"])
        self._apply_cert(rec, act.homomorphism_check())

    def cmd_check_twist(self, c, rec):
        (Q,) = self._names(c, ["derivation"])
        self._apply_cert(rec, check_twist(Q))

    def cmd_check_chain(self, c, rec):
        phi, Q1, Q2 = self._names(c, ["morphism", "derivation", "derivation"])
        self._apply_cert(rec, check_chain(phi, Q1, Q2))
        F = field_strength(phi, Q1, Q2)
        for g, img in zip(phi.src.generators, F.images):
            rec.outputs[f"F({g.name})"] = str(img)

    def cmd_check_basic(self, c, rec):
        w, Q = self._names(c, ["poly", "derivation"])
        hol = c.option("holonomy")
        G = None if hol is None else [self.lookup(h, "derivation", c.pos) for h in hol]
        if G is None:
            G = cc.HolonomyGenerators.coordinate(Q.src)
        self._apply_cert(rec, cc.is_basic(w, G, Q))

    def cmd_check_master(self, c, rec):
        w = self.lookup(c.args[0], "symplectic", c.pos)
        H = self.poly(c.args[1], w.S)
        r = w.poisson_bracket(H, H)
        rec.outputs["{H,H}"] = str(r)
        if r:
            rec.status, rec.witness, rec.residual = FAIL, "{H,H}", str(r)

    def _ctx(self, c, *exprs):
        on = c.option("on")
        if on is not None:
            return self.lookup(on, "algebra", c.pos)
        alg = self.infer_algebra(*exprs)
        if alg is None:
            raise _sem("cannot infer the algebra; add `on <algebra>`", c.pos, "AlgebraMismatch")
        return alg

    def cmd_check_equal(self, c, rec):
        alg = self._ctx(c, *c.args)
        a, b = (self.poly(e, alg) for e in c.args)
        if a != b:
            rec.status, rec.witness, rec.residual = FAIL, "lhs - rhs", str(a - b)
        return a

    def cmd_check_zero(self, c, rec):
        alg = self._ctx(c, *c.args)
        a = self.poly(c.args[0], alg)
        if a:
            rec.status, rec.witness, rec.residual = FAIL, "value", str(a)
        return a

    def cmd_eval(self, c, rec):
        alg = self._ctx(c, *c.args)
        v = self.poly(c.args[0], alg)
        rec.outputs["value"] = str(v)
        return v

    def cmd_char(self, c, rec):
        phi, Q1, Q2, w = self._names(c, ["morphism", "derivation", "derivation", "poly"])
        cert = cc.is_basic(w, cc.HolonomyGenerators.coordinate(phi.src), Q2)
        if not cert:
            self._apply_cert(rec, cert)
            return None
        v = cc.char_form(phi, Q1, Q2, w, check_basic=False)
        rec.outputs["char"] = str(v)
        rec.data["normalization"] = "1/p!"
        return v

    def cmd_gauge(self, c, rec):
        phi, Q1, Q2, w = self._names(c, ["morphism", "derivation", "derivation", "poly"])
        terms = []
        for key, e in c.option("with"):
            if key is None or key not in phi.src.index:
                raise _sem(f"gauge parameters are keyed by generators of {phi.src.name}", c.pos,
                           "UnknownName")
            terms.append((self.poly(e, phi.dst), coordinate_field(phi.src, key)))
        cert = cc.gauge_variation_check(phi, Q1, Q2, w, terms)
        rec.outputs["variation"] = str(cert.data["variation"])
        self._apply_cert(rec, cert)
        return cert.data["variation"]

    def cmd_transgress(self, c, rec):
        p0, p1, Q1, Q2, w = self._names(c, ["morphism", "morphism", "derivation", "derivation", "poly"])
        t = cc.transgress(p0, p1, Q1, Q2, w)
        rec.outputs["difference"] = str(t.difference)
        rec.outputs["primitive"] = str(t.primitive)
        rec.outputs["beta"] = str(t.beta)
        rec.data["beta_formula_checked"] = t.beta_formula is not None
        return t.primitive

    def cmd_aksz(self, c, rec):
        w, Q, phi = self._names(c, ["symplectic", "derivation", "morphism"])
        r = pq.aksz_integrand(w, Q, phi)
        rec.outputs["hamiltonian"] = str(r.data.hamiltonian)
        rec.outputs["alpha_hat"] = str(r.data.alpha_hat)
        rec.outputs["lagrangian"] = str(r.lagrangian)
        rec.outputs["f*omega"] = str(r.pullback_omega)
        rec.data["certified"] = "d alpha = omega, L_euler omega = p omega, {H,H} = 0, omega = Q_T(alpha_hat), f*omega = d L"
        return r.lagrangian

    def cmd_lecomte(self, c, rec):
        (sc,) = self._names(c, ["structure"])
        if c.option("linear") is not None:
            Phi = cc.InvariantPolynomial.linear(c.option("linear"))
        else:
            Phi = cc.InvariantPolynomial.from_matrix(c.option("matrix"))
        r = cc.lecomte_char(sc, c.option("ideal"), c.option("splitting"), Phi)
        rec.outputs["cochain"] = str(r.cochain)
        rec.data["invariant"] = r.invariant
        self._apply_cert(rec, r.closed)
        return r.cochain

    def _algebroid(self, name, pos):
        self.lookup(name, "algebra", pos)
        alg = getattr(self, "algebroids", {}).get(name)
        if alg is None:
            raise _sem(f"{name!r} is not an action algebroid", pos, "KindMismatch")
        return alg

    def cmd_equivariant_conjugation(self, c, rec):
        alg = self._algebroid(c.args[0], c.pos)
        self._apply_cert(rec, eq.weil_cartan_conjugation(alg, raise_on_fail=False))

    def cmd_equivariant_basic(self, c, rec):
        alg = self._algebroid(c.args[0], c.pos)
        eta = self.poly(c.args[1], alg.T.full)
        r = eq.cartan_basic_check(alg, eta)
        rec.data["cartan_span"] = r.in_cartan_span
        rec.data["Q_C_closed"] = r.closed
        self._apply_cert(rec, r.basic)
        if r.basic and not r.closed:
            rec.status, rec.witness, rec.residual = FAIL, "Q_C(eta)", str(alg.Q_C(eta))

    def cmd_equivariant_wz(self, c, rec):
        alg = self._algebroid(c.args[0], c.pos)
        H = self.lookup(c.args[1], "poly", c.pos)
        Hh = self.lookup(c.args[2], "poly", c.pos)
        phi = self.lookup(c.args[3], "morphism", c.pos)
        eps = []
        for key, e in c.option("with"):
            if key is not None:
                raise _sem("WZ gauge parameters are positional", c.pos, "SyntaxUse")
            eps.append(self.poly(e, phi.dst))
        TM = shift_tangent(alg.act.M)
        r = eq.wz_gauging_check(alg, embed(H, TM.full), embed(Hh, alg.T.full), phi, eps)
        rec.outputs["variation"] = str(r.variation)
        rec.outputs["difference"] = str(r.difference)
        if r.primitive is not None:
            rec.outputs["primitive"] = str(r.primitive)
        for cert in r.certificates:
            rec.data[cert.check] = cert.status
            if not cert.passed and rec.status == PASS:
                self._apply_cert(rec, cert)
        return r.difference


_DE_RHAM = object()


class _Deferred(Exception):
    """Raised in check mode when a value depends on a command result."""


_ARG_KINDS = {
    "check nilpotent": ["derivation"],
    "check jacobi": ["structure"],
    "check homomorphism": ["action"],
    "check twist": ["derivation"],
    "check chain": ["morphism", "derivation", "derivation"],
    "check basic": ["poly", "derivation"],
    "check master": ["symplectic"],
    "char": ["morphism", "derivation", "derivation", "poly"],
    "gauge": ["morphism", "derivation", "derivation", "poly"],
    "transgress": ["morphism", "morphism", "derivation", "derivation", "poly"],
    "aksz": ["symplectic", "derivation", "morphism"],
    "lecomte": ["structure"],
    "equivariant conjugation": ["algebra"],
    "equivariant basic": ["algebra"],
    "equivariant wz": ["algebra", "poly", "poly", "morphism"],
}
