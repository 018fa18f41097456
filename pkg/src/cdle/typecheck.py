"""Bidirectional type and kind checking.

Introductions check, eliminations infer, and a conversion check mediates
the mode switch.  Conversion on types is structural congruence after
type-level beta-normalization, comparing embedded terms by beta-eta
equality of their erasures (with top-level definitions expanded).
Definition unfolding during type conversion is on demand: a defined head
is only unfolded when the spines cannot be matched directly.

The equality constructs follow the usual reading:

* ``β`` checks against ``t1 ≃ t2`` when both sides are scope-valid and
  their erasures are beta-eta equal.  (Equality *formation* additionally
  requires both sides to synthesize a type; rewritten goals produced by
  ρ are not re-kinded, which is what makes normal-form sides usable.)
* ``ρ q - t`` with ``q : t1 ≃ t2`` replaces occurrences of ``t1`` by
  ``t2`` in the visible classifier: in checking mode the expected type
  is rewritten before checking ``t``; in synthesis mode the type
  synthesized for ``t`` is rewritten.  Occurrences are matched on the
  beta-eta-normal erasure of each embedded term, so matches up to
  definitional equality are found (this is required for the usual
  inductive equality proofs to go through).
* ``φ q - t1 {t2}`` checks against ``T`` when ``t1`` does, ``q`` proves
  ``t1 ≃ t2`` (by erasure comparison on both sides), and ``t2`` is
  scope-valid; the construct erases to ``|t2|``.

A checker instance is single-threaded; distinct instances may share a
fully-checked prelude context since all syntax values are immutable.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from . import pretty as pp
from .erasure import erase
from .reduction import Fuel, FuelExhaustedError, beta_eta_eq, normalize
from .syntax import (
    All,
    AllK,
    App,
    Beta,
    Context,
    DeferredArg,
    Defn,
    EApp,
    ELam,
    Eq,
    Iota,
    IotaPair,
    Kind,
    KPi,
    KPiK,
    Lam,
    PApp,
    Phi,
    Pi,
    PLam,
    Proj,
    PureTerm,
    PVar,
    Rho,
    Span,
    Star,
    Sym,
    TAppE,
    TAppT,
    TLam,
    TVar,
    Term,
    TermBind,
    Type,
    TypeBind,
    Var,
    de_bruijn,
    free_vars,
    fresh_name,
    subst1,
    substitute_many,
    term_free_names,
)


class ErrorCode(enum.Enum):
    UnboundName = "UnboundName"
    KindMismatch = "KindMismatch"
    TypeMismatch = "TypeMismatch"
    ErasedVarOccursFree = "ErasedVarOccursFree"
    IntersectionErasureMismatch = "IntersectionErasureMismatch"
    RhoNoOccurrence = "RhoNoOccurrence"
    PhiEqMismatch = "PhiEqMismatch"
    EqSidesUntypeable = "EqSidesUntypeable"
    NotAFunction = "NotAFunction"
    NotAnIntersection = "NotAnIntersection"
    FuelExhausted = "FuelExhausted"


class CheckError(Exception):
    def __init__(self, code: ErrorCode, message: str, span: Optional[Span] = None):
        super().__init__(f"{code.value}: {message}" + (f" at {span}" if span else ""))
        self.code = code
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Judgement:
    """A judgement ``Γ ⊢ subject : classifier`` (mode 'check') or
    ``Γ ⊢ subject ⇒ ?`` (mode 'infer')."""

    context: Context
    subject: Union[Term, Type]
    mode: str  # "check" | "infer"
    classifier: Optional[Union[Type, Kind]] = None

    def __post_init__(self):
        assert (self.classifier is not None) == (self.mode == "check")


def _canon_msg(s: str) -> str:
    """Replace fresh-name counters by per-message sequential ids so error
    messages are byte-identical across runs."""
    seen: dict[str, str] = {}

    def sub(m):
        tok = m.group(0)
        if tok not in seen:
            seen[tok] = f"%{len(seen) + 1}"
        return seen[tok]

    return re.sub(r"%q?\d+", sub, s)


class Checker:
    def __init__(self, fuel: Fuel = Fuel()):
        self.fuel = fuel
        self.ctx = Context()
        self.pure_env: dict[str, PureTerm] = {}

    # ------------------------------------------------------------------
    # erasure pipeline
    # ------------------------------------------------------------------

    def pure_of(self, t: Term) -> PureTerm:
        """Erasure of ``t`` with top-level definitions expanded."""
        return substitute_many(erase(t), self.pure_env)

    def nf_of(self, t: Term) -> PureTerm:
        out = normalize(self.pure_of(t), self.fuel)
        if out.fuel_exhausted:
            raise CheckError(ErrorCode.FuelExhausted, "normalization ran out of fuel")
        return out.result

    def terms_conv(self, a: Term, b: Term) -> bool:
        try:
            return beta_eta_eq(self.pure_of(a), self.pure_of(b), self.fuel)
        except FuelExhaustedError:
            raise CheckError(ErrorCode.FuelExhausted, "conversion ran out of fuel")

    # ------------------------------------------------------------------
    # context helpers
    # ------------------------------------------------------------------

    def _term_type_of(self, name: str, span) -> Type:
        e = self.ctx.lookup(name)
        if isinstance(e, TermBind):
            return e.type
        if isinstance(e, Defn) and isinstance(e.classifier, Type):
            return e.classifier
        if e is None:
            raise CheckError(ErrorCode.UnboundName, f"unbound name {name!r}", span)
        raise CheckError(ErrorCode.UnboundName, f"{name!r} is not a term", span)

    def _type_kind_of(self, name: str, span) -> Kind:
        e = self.ctx.lookup(name)
        if isinstance(e, TypeBind):
            return e.kind
        if isinstance(e, Defn) and isinstance(e.classifier, Kind):
            return e.classifier
        if e is None:
            raise CheckError(ErrorCode.UnboundName, f"unbound type name {name!r}", span)
        raise CheckError(ErrorCode.UnboundName, f"{name!r} is not a type", span)

    def _with(self, entry):
        """Run a block with an extended context (restores afterwards)."""
        return _CtxGuard(self, entry)

    def scope_check(self, t: Union[Term, Type], span=None) -> None:
        for n in sorted(term_free_names(t)):
            if n not in self.ctx:
                raise CheckError(ErrorCode.UnboundName, f"unbound name {n!r}", span)

    # ------------------------------------------------------------------
    # type-level computation
    # ------------------------------------------------------------------

    def whnf_beta(self, T: Type) -> Type:
        """Contract type-level beta redexes at the head (no unfolding)."""
        while True:
            if isinstance(T, TAppT):
                f = self.whnf_beta(T.fn)
                if isinstance(f, TLam):
                    T = subst1(f.body, f.name, T.arg)
                    continue
                return TAppT(f, T.arg, T.span) if f is not T.fn else T
            if isinstance(T, TAppE):
                f = self.whnf_beta(T.fn)
                if isinstance(f, TLam):
                    T = subst1(f.body, f.name, T.arg)
                    continue
                return TAppE(f, T.arg, T.span) if f is not T.fn else T
            return T

    def _unfold_head(self, T: Type) -> Optional[Type]:
        """Unfold a defined head name once; None if nothing to unfold."""
        head = T
        while isinstance(head, (TAppT, TAppE)):
            head = head.fn
        if not isinstance(head, TVar):
            return None
        e = self.ctx.lookup(head.name)
        if isinstance(e, Defn) and isinstance(e.classifier, Kind) and e.body is not None:
            return self._replace_head(T, e.body)
        return None

    def _replace_head(self, T: Type, new_head: Type) -> Type:
        if isinstance(T, TAppT):
            return TAppT(self._replace_head(T.fn, new_head), T.arg, T.span)
        if isinstance(T, TAppE):
            return TAppE(self._replace_head(T.fn, new_head), T.arg, T.span)
        return new_head

    def whnf_type(self, T: Type) -> Type:
        """Head normal form with definition unfolding: used when checking
        needs the goal's head constructor."""
        while True:
            T = self.whnf_beta(T)
            unfolded = self._unfold_head(T)
            if unfolded is None:
                return T
            T = unfolded

    # ------------------------------------------------------------------
    # conversion
    # ------------------------------------------------------------------

    def types_conv(self, A: Type, B: Type) -> bool:
        return self._conv(A, B)

    def _conv(self, A: Type, B: Type) -> bool:
        A = self.whnf_beta(A)
        B = self.whnf_beta(B)
        if A is B:
            return True

        # spine fast path: same defined (or bound) head, matching args
        ha, sa = self._spine(A)
        hb, sb = self._spine(B)
        if isinstance(ha, TVar) and isinstance(hb, TVar):
            if ha.name == hb.name and len(sa) == len(sb):
                if all(self._arg_conv(x, y) for x, y in zip(sa, sb)):
                    return True
            ua, ub = self._unfold_head(A), self._unfold_head(B)
            if ua is None and ub is None:
                return False
            return self._conv(ua if ua is not None else A, ub if ub is not None else B)
        if isinstance(ha, TVar):
            ua = self._unfold_head(A)
            return ua is not None and self._conv(ua, B)
        if isinstance(hb, TVar):
            ub = self._unfold_head(B)
            return ub is not None and self._conv(A, ub)

        if isinstance(A, Pi) and isinstance(B, Pi):
            return self._conv_binder(A, B, term_binder=True)
        if isinstance(A, All) and isinstance(B, All):
            return self._conv_binder(A, B, term_binder=True)
        if isinstance(A, AllK) and isinstance(B, AllK):
            if not self.kinds_conv(A.dom, B.dom):
                return False
            z = fresh_name(A.name)
            return self._conv(subst1(A.cod, A.name, TVar(z)), subst1(B.cod, B.name, TVar(z)))
        if isinstance(A, Iota) and isinstance(B, Iota):
            if not self._conv(A.fst, B.fst):
                return False
            z = fresh_name(A.name)
            return self._conv(subst1(A.snd, A.name, Var(z)), subst1(B.snd, B.name, Var(z)))
        if isinstance(A, Eq) and isinstance(B, Eq):
            return self.terms_conv(A.lhs, B.lhs) and self.terms_conv(A.rhs, B.rhs)
        if isinstance(A, TLam) and isinstance(B, TLam):
            z = fresh_name(A.name)
            # binder sort does not affect conversion; rename consistently
            if isinstance(A.ann, Kind) or isinstance(B.ann, Kind):
                return self._conv(subst1(A.body, A.name, TVar(z)), subst1(B.body, B.name, TVar(z)))
            return self._conv(subst1(A.body, A.name, Var(z)), subst1(B.body, B.name, Var(z)))
        return False

    def _conv_binder(self, A, B, term_binder: bool) -> bool:
        if not self._conv(A.dom, B.dom):
            return False
        z = fresh_name(A.name)
        v = Var(z)
        return self._conv(subst1(A.cod, A.name, v), subst1(B.cod, B.name, v))

    def _spine(self, T: Type):
        args = []
        while isinstance(T, (TAppT, TAppE)):
            args.append(T.arg)
            T = T.fn
        return T, list(reversed(args))

    def _arg_conv(self, x, y) -> bool:
        if isinstance(x, Type) and isinstance(y, Type):
            return self._conv(x, y)
        if isinstance(x, Term) and isinstance(y, Term):
            return self.terms_conv(x, y)
        return False

    def kinds_conv(self, k1: Kind, k2: Kind) -> bool:
        if isinstance(k1, Star) and isinstance(k2, Star):
            return True
        if isinstance(k1, KPi) and isinstance(k2, KPi):
            if not self._conv(k1.dom, k2.dom):
                return False
            z = fresh_name(k1.name)
            return self.kinds_conv(subst1(k1.cod, k1.name, Var(z)), subst1(k2.cod, k2.name, Var(z)))
        if isinstance(k1, KPiK) and isinstance(k2, KPiK):
            if not self.kinds_conv(k1.dom, k2.dom):
                return False
            z = fresh_name(k1.name)
            return self.kinds_conv(subst1(k1.cod, k1.name, TVar(z)), subst1(k2.cod, k2.name, TVar(z)))
        return False

    # ------------------------------------------------------------------
    # kinds
    # ------------------------------------------------------------------

    def kind_wf(self, k: Kind) -> None:
        if isinstance(k, Star):
            return
        if isinstance(k, KPi):
            dk = self.infer_kind(k.dom)
            if not isinstance(dk, Star):
                raise CheckError(ErrorCode.KindMismatch, "kind domain must be a ★-kinded type", k.span)
            with self._with(TermBind(k.name, k.dom)):
                self.kind_wf(k.cod)
            return
        if isinstance(k, KPiK):
            self.kind_wf(k.dom)
            with self._with(TypeBind(k.name, k.dom)):
                self.kind_wf(k.cod)
            return
        raise CheckError(ErrorCode.KindMismatch, f"malformed kind {k!r}")

    def infer_kind(self, T: Type) -> Kind:
        match T:
            case TVar(name=n, span=sp):
                return self._type_kind_of(n, sp)
            case Pi(name=n, dom=d, cod=c, span=sp) | All(name=n, dom=d, cod=c, span=sp):
                dk = self.infer_kind(d)
                if not isinstance(dk, Star):
                    raise CheckError(ErrorCode.KindMismatch, "product domain must be ★-kinded", sp)
                with self._with(TermBind(n, d, erased=isinstance(T, All))):
                    ck = self.infer_kind(c)
                if not isinstance(ck, Star):
                    raise CheckError(ErrorCode.KindMismatch, "product codomain must be ★-kinded", sp)
                return Star()
            case AllK(name=n, dom=d, cod=c, span=sp):
                self.kind_wf(d)
                with self._with(TypeBind(n, d)):
                    ck = self.infer_kind(c)
                if not isinstance(ck, Star):
                    raise CheckError(ErrorCode.KindMismatch, "∀ codomain must be ★-kinded", sp)
                return Star()
            case Iota(name=n, fst=f, snd=s, span=sp):
                fk = self.infer_kind(f)
                if not isinstance(fk, Star):
                    raise CheckError(ErrorCode.KindMismatch, "ι first component must be ★-kinded", sp)
                with self._with(TermBind(n, f)):
                    sk = self.infer_kind(s)
                if not isinstance(sk, Star):
                    raise CheckError(ErrorCode.KindMismatch, "ι second component must be ★-kinded", sp)
                return Star()
            case Eq(lhs=a, rhs=b, span=sp):
                for side in (a, b):
                    try:
                        self.infer_term(side)
                    except CheckError as e:
                        if e.code == ErrorCode.UnboundName:
                            raise
                        raise CheckError(
                            ErrorCode.EqSidesUntypeable,
                            f"equality side {pp.pretty(side)} is not typeable: {e.message}",
                            sp,
                        )
                return Star()
            case TLam(name=n, body=b, ann=ann, span=sp):
                if ann is None:
                    raise CheckError(
                        ErrorCode.KindMismatch,
                        "cannot infer the kind of an unannotated type-level λ",
                        sp,
                    )
                if isinstance(ann, Kind):
                    self.kind_wf(ann)
                    with self._with(TypeBind(n, ann)):
                        bk = self.infer_kind(b)
                    return KPiK(n, ann, bk)
                dk = self.infer_kind(ann)
                if not isinstance(dk, Star):
                    raise CheckError(ErrorCode.KindMismatch, "λ binder annotation must be ★-kinded", sp)
                with self._with(TermBind(n, ann)):
                    bk = self.infer_kind(b)
                return KPi(n, ann, bk)
            case TAppT(fn=f, arg=a, span=sp):
                fk = self.infer_kind(f)
                if not isinstance(fk, KPiK):
                    raise CheckError(
                        ErrorCode.NotAFunction,
                        f"type {pp.pretty(f)} of kind {pp.pretty(fk)} cannot take a type argument",
                        sp,
                    )
                self.check_type(a, fk.dom)
                return _subst_kind(fk.cod, fk.name, a)
            case TAppE(fn=f, arg=a, span=sp):
                fk = self.infer_kind(f)
                if not isinstance(fk, KPi):
                    raise CheckError(
                        ErrorCode.NotAFunction,
                        f"type {pp.pretty(f)} of kind {pp.pretty(fk)} cannot take a term argument",
                        sp,
                    )
                self.check_term(a, fk.dom)
                return _subst_kind(fk.cod, fk.name, a)
        raise CheckError(ErrorCode.KindMismatch, f"malformed type {T!r}")

    def check_type(self, T: Type, k: Kind) -> None:
        if isinstance(T, TLam) and T.ann is None:
            if isinstance(k, KPi):
                with self._with(TermBind(T.name, k.dom)):
                    self.check_type(T.body, _subst_kind(k.cod, k.name, Var(T.name)))
                return
            if isinstance(k, KPiK):
                with self._with(TypeBind(T.name, k.dom)):
                    self.check_type(T.body, _subst_kind(k.cod, k.name, TVar(T.name)))
                return
            raise CheckError(ErrorCode.KindMismatch, "type-level λ against a non-Π kind", T.span)
        if isinstance(T, TLam) and T.ann is not None:
            inferred = self.infer_kind(T)
            if not self.kinds_conv(inferred, k):
                raise CheckError(
                    ErrorCode.KindMismatch,
                    _canon_msg(f"expected kind {pp.pretty(k)}, found {pp.pretty(inferred)}"),
                    T.span,
                )
            return
        inferred = self.infer_kind(T)
        if not self.kinds_conv(inferred, k):
            raise CheckError(
                ErrorCode.KindMismatch,
                _canon_msg(f"expected kind {pp.pretty(k)}, found {pp.pretty(inferred)}"),
                T.span,
            )

    # ------------------------------------------------------------------
    # terms: inference
    # ------------------------------------------------------------------

    def infer_term(self, t: Term) -> Type:
        match t:
            case Var(name=n, span=sp):
                return self._term_type_of(n, sp)
            case App(fn=f, arg=a, span=sp):
                Tf = self.whnf_type(self.infer_term(f))
                if isinstance(Tf, (All, AllK)):
                    raise CheckError(
                        ErrorCode.NotAFunction,
                        "implicit function applied explicitly; instantiate with -arg",
                        sp,
                    )
                if not isinstance(Tf, Pi):
                    raise CheckError(
                        ErrorCode.NotAFunction,
                        _canon_msg(f"cannot apply a term of type {pp.pretty(Tf)}"),
                        sp,
                    )
                self.check_term(a, Tf.dom)
                return subst1(Tf.cod, Tf.name, a)
            case EApp(fn=f, arg=a, span=sp):
                Tf = self.whnf_type(self.infer_term(f))
                if isinstance(Tf, All):
                    arg_t = self._resolve_term_arg(a, sp)
                    self.check_term(arg_t, Tf.dom)
                    return subst1(Tf.cod, Tf.name, arg_t)
                if isinstance(Tf, AllK):
                    arg_T = self._resolve_type_arg(a, sp)
                    self.check_type(arg_T, Tf.dom)
                    return subst1(Tf.cod, Tf.name, arg_T)
                raise CheckError(
                    ErrorCode.NotAFunction,
                    _canon_msg(f"-argument given to a term of type {pp.pretty(Tf)}"),
                    sp,
                )
            case Proj(subj=s, idx=i, span=sp):
                Ts = self.whnf_type(self.infer_term(s))
                if not isinstance(Ts, Iota):
                    raise CheckError(
                        ErrorCode.NotAnIntersection,
                        _canon_msg(f"projection from a term of type {pp.pretty(Ts)}"),
                        sp,
                    )
                if i == 1:
                    return Ts.fst
                return subst1(Ts.snd, Ts.name, Proj(s, 1))
            case Sym(proof=q, span=sp):
                Tq = self.whnf_type(self.infer_term(q))
                if not isinstance(Tq, Eq):
                    raise CheckError(ErrorCode.TypeMismatch, "ς expects an equality proof", sp)
                return Eq(Tq.rhs, Tq.lhs)
            case Rho(proof=q, body=b, guide=g, span=sp):
                s1, s2 = self._eq_sides(q, sp)
                T = self.infer_term(b)
                return self._rho_rewrite(s1, s2, T, g, sp)
            case Phi(proof=q, main=m, target=tg, span=sp):
                T = self.infer_term(m)
                self._phi_conditions(q, m, tg, sp)
                return T
            case Lam(name=n, body=b, ann=ann, span=sp):
                if ann is None:
                    raise CheckError(
                        ErrorCode.TypeMismatch, "cannot infer the type of an unannotated λ", sp
                    )
                self.check_type(ann, Star())
                with self._with(TermBind(n, ann)):
                    Tb = self.infer_term(b)
                return Pi(n, ann, Tb)
            case ELam(span=sp):
                raise CheckError(ErrorCode.TypeMismatch, "cannot infer the type of a Λ", sp)
            case Beta(span=sp):
                raise CheckError(ErrorCode.TypeMismatch, "β requires a checking context", sp)
            case IotaPair(span=sp):
                raise CheckError(
                    ErrorCode.TypeMismatch, "[t1, t2] requires a checking context", sp
                )
        raise CheckError(ErrorCode.TypeMismatch, f"cannot infer {t!r}")

    def _eq_sides(self, q: Term, sp) -> tuple[Term, Term]:
        Tq = self.whnf_type(self.infer_term(q))
        if not isinstance(Tq, Eq):
            raise CheckError(
                ErrorCode.TypeMismatch,
                _canon_msg(f"expected an equality proof, found {pp.pretty(Tq)}"),
                sp,
            )
        return Tq.lhs, Tq.rhs

    def _resolve_term_arg(self, a, sp) -> Term:
        if isinstance(a, DeferredArg):
            return a.expr
        if isinstance(a, Term):
            return a
        demoted = _try_demote_type(a)
        if demoted is not None:
            return demoted
        raise CheckError(ErrorCode.TypeMismatch, "expected an erased term argument, found a type", sp)

    def _resolve_type_arg(self, a, sp) -> Type:
        if isinstance(a, DeferredArg):
            promoted = _try_promote_term(a.expr)
            if promoted is None:
                raise CheckError(ErrorCode.TypeMismatch, "erased argument is not a type", sp)
            return promoted
        if isinstance(a, Type):
            return a
        promoted = _try_promote_term(a)
        if promoted is None:
            raise CheckError(ErrorCode.TypeMismatch, "expected an erased type argument, found a term", sp)
        return promoted

    def _phi_conditions(self, q: Term, main: Term, target: Term, sp) -> None:
        s1, s2 = self._eq_sides(q, sp)
        self.scope_check(target, sp)
        if not self.terms_conv(s1, main):
            raise CheckError(
                ErrorCode.PhiEqMismatch,
                _canon_msg(
                    f"φ left side mismatch: proof equates {pp.pretty(s1)}, term is {pp.pretty(main)}"
                ),
                sp,
            )
        if not self.terms_conv(s2, target):
            raise CheckError(
                ErrorCode.PhiEqMismatch,
                _canon_msg(
                    f"φ right side mismatch: proof equates {pp.pretty(s2)}, braces hold {pp.pretty(target)}"
                ),
                sp,
            )

    # ------------------------------------------------------------------
    # terms: checking
    # ------------------------------------------------------------------

    def check_term(self, t: Term, T: Type) -> None:
        match t:
            case Lam(name=n, body=b, ann=ann, span=sp):
                W = self.whnf_type(T)
                if not isinstance(W, Pi):
                    raise CheckError(
                        ErrorCode.TypeMismatch,
                        _canon_msg(f"λ checked against non-function type {pp.pretty(W)}"),
                        sp,
                    )
                if ann is not None and not self.types_conv(ann, W.dom):
                    raise CheckError(
                        ErrorCode.TypeMismatch,
                        _canon_msg(
                            f"λ annotation {pp.pretty(ann)} does not match domain {pp.pretty(W.dom)}"
                        ),
                        sp,
                    )
                with self._with(TermBind(n, W.dom)):
                    self.check_term(b, subst1(W.cod, W.name, Var(n)))
                return
            case ELam(name=n, body=b, ann=ann, span=sp):
                W = self.whnf_type(T)
                if isinstance(W, All):
                    if ann is not None and (not isinstance(ann, Type) or not self.types_conv(ann, W.dom)):
                        raise CheckError(ErrorCode.TypeMismatch, "Λ annotation mismatch", sp)
                    with self._with(TermBind(n, W.dom, erased=True)):
                        self.check_term(b, subst1(W.cod, W.name, Var(n)))
                    if n in free_vars(erase(b)):
                        raise CheckError(
                            ErrorCode.ErasedVarOccursFree,
                            f"erased variable {n!r} occurs in the erasure of its body",
                            sp,
                        )
                    return
                if isinstance(W, AllK):
                    if ann is not None and (not isinstance(ann, Kind) or not self.kinds_conv(ann, W.dom)):
                        raise CheckError(ErrorCode.TypeMismatch, "Λ kind annotation mismatch", sp)
                    with self._with(TypeBind(n, W.dom)):
                        self.check_term(b, subst1(W.cod, W.name, TVar(n)))
                    return
                raise CheckError(
                    ErrorCode.TypeMismatch,
                    _canon_msg(f"Λ checked against non-implicit type {pp.pretty(W)}"),
                    sp,
                )
            case IotaPair(fst=t1, snd=t2, span=sp):
                W = self.whnf_type(T)
                if not isinstance(W, Iota):
                    raise CheckError(
                        ErrorCode.TypeMismatch,
                        _canon_msg(f"[t1, t2] checked against non-ι type {pp.pretty(W)}"),
                        sp,
                    )
                self.check_term(t1, W.fst)
                self.check_term(t2, subst1(W.snd, W.name, t1))
                if not self.terms_conv(t1, t2):
                    raise CheckError(
                        ErrorCode.IntersectionErasureMismatch,
                        "the two components of an intersection must share one erasure",
                        sp,
                    )
                return
            case Beta(span=sp):
                W = self.whnf_type(T)
                if not isinstance(W, Eq):
                    raise CheckError(
                        ErrorCode.TypeMismatch,
                        _canon_msg(f"β checked against non-equality type {pp.pretty(W)}"),
                        sp,
                    )
                self.scope_check(W.lhs, sp)
                self.scope_check(W.rhs, sp)
                if not self.terms_conv(W.lhs, W.rhs):
                    raise CheckError(
                        ErrorCode.TypeMismatch,
                        _canon_msg(
                            f"β requires βη-equal erasures: {pp.pretty(W.lhs)} vs {pp.pretty(W.rhs)}"
                        ),
                        sp,
                    )
                return
            case Phi(proof=q, main=m, target=tg, span=sp):
                self.check_term(m, T)
                self._phi_conditions(q, m, tg, sp)
                return
            case Rho(proof=q, body=b, guide=g, span=sp):
                s1, s2 = self._eq_sides(q, sp)
                G = self._rho_rewrite(s1, s2, T, g, sp)
                self.check_term(b, G)
                return
            case _:
                inferred = self.infer_term(t)
                if not self.types_conv(inferred, T):
                    raise CheckError(
                        ErrorCode.TypeMismatch,
                        _canon_msg(
                            f"expected {pp.pretty(T)}, found {pp.pretty(inferred)}"
                        ),
                        getattr(t, "span", None),
                    )

    # ------------------------------------------------------------------
    # rho rewriting
    # ------------------------------------------------------------------

    def _rho_rewrite(self, s1: Term, s2: Term, target: Type, guide, sp) -> Type:
        if guide is not None:
            hole, template = guide
            src = subst1(template, hole, s1)
            if not self.types_conv(src, target):
                raise CheckError(
                    ErrorCode.TypeMismatch,
                    _canon_msg(
                        f"ρ guide instantiated with the left side gives {pp.pretty(src)}, "
                        f"which does not match {pp.pretty(target)}"
                    ),
                    sp,
                )
            return subst1(template, hole, s2)

        p1 = normalize(self.pure_of(s1), self.fuel)
        if p1.fuel_exhausted:
            raise CheckError(ErrorCode.FuelExhausted, "ρ pattern ran out of fuel")
        p2 = normalize(self.pure_of(s2), self.fuel)
        if p2.fuel_exhausted:
            raise CheckError(ErrorCode.FuelExhausted, "ρ replacement ran out of fuel")
        counter = [0]
        out = self._rw_type(target, p1.result, p2.result, counter)
        if counter[0] == 0:
            raise CheckError(
                ErrorCode.RhoNoOccurrence,
                _canon_msg(f"no occurrence of {pp.pretty(p1.result)} in {pp.pretty(target)}"),
                sp,
            )
        return out

    def _rw_type(self, T: Type, pat: PureTerm, rep: PureTerm, counter) -> Type:
        avoid = free_vars(pat) | free_vars(rep)

        def go_ty(T: Type) -> Type:
            T = self.whnf_beta(T)
            match T:
                case TVar():
                    return T
                case Pi(name=n, dom=d, cod=c, span=sp):
                    n, c = _freshen_if(n, c, avoid)
                    return Pi(n, go_ty(d), go_ty(c), sp)
                case All(name=n, dom=d, cod=c, span=sp):
                    n, c = _freshen_if(n, c, avoid)
                    return All(n, go_ty(d), go_ty(c), sp)
                case AllK(name=n, dom=d, cod=c, span=sp):
                    n, c = _freshen_if(n, c, avoid)
                    return AllK(n, d, go_ty(c), sp)
                case Iota(name=n, fst=f, snd=s, span=sp):
                    n, s = _freshen_if(n, s, avoid)
                    return Iota(n, go_ty(f), go_ty(s), sp)
                case TLam(name=n, body=b, ann=a, span=sp):
                    n, b = _freshen_if(n, b, avoid)
                    return TLam(n, go_ty(b), a, sp)
                case Eq(lhs=a, rhs=b, span=sp):
                    return Eq(go_tm(a), go_tm(b), sp)
                case TAppT(fn=f, arg=a, span=sp):
                    return TAppT(go_ty(f), go_ty(a), sp)
                case TAppE(fn=f, arg=a, span=sp):
                    return TAppE(go_ty(f), go_tm(a), sp)
            return T

        def go_tm(e: Term) -> Term:
            nf = normalize(self.pure_of(e), self.fuel)
            if nf.fuel_exhausted:
                raise CheckError(ErrorCode.FuelExhausted, "ρ target term ran out of fuel")
            rewritten, n = _replace_pure(nf.result, pat, rep)
            if n == 0:
                return e
            counter[0] += n
            return _inject_pure(rewritten)

        return go_ty(T)


# ---------------------------------------------------------------------------
# pure-term occurrence replacement
# ---------------------------------------------------------------------------


def _replace_pure(t: PureTerm, pat: PureTerm, rep: PureTerm) -> tuple[PureTerm, int]:
    """Replace maximal alpha-matches of ``pat`` inside ``t`` by ``rep``.

    Binders of ``t`` are freshened first so the open pattern's free
    variables can only match genuinely free positions.
    """
    t = _freshen_binders(t, free_vars(pat) | free_vars(rep))
    pat_key = de_bruijn(pat)
    count = [0]

    def go(x: PureTerm) -> PureTerm:
        if de_bruijn(x) == pat_key:
            count[0] += 1
            return rep
        if isinstance(x, PLam):
            return PLam(x.name, go(x.body))
        if isinstance(x, PApp):
            return PApp(go(x.fn), go(x.arg))
        return x

    out = go(t)
    return out, count[0]


def _freshen_binders(t: PureTerm, avoid: frozenset[str]) -> PureTerm:
    def go(x: PureTerm, env: dict[str, str]) -> PureTerm:
        if isinstance(x, PVar):
            return PVar(env.get(x.name, x.name))
        if isinstance(x, PApp):
            return PApp(go(x.fn, env), go(x.arg, env))
        assert isinstance(x, PLam)
        if x.name in avoid:
            nn = fresh_name(x.name)
            env2 = dict(env)
            env2[x.name] = nn
            return PLam(nn, go(x.body, env2))
        env2 = {k: v for k, v in env.items() if k != x.name}
        return PLam(x.name, go(x.body, env2))

    return go(t, {})


def _inject_pure(t: PureTerm) -> Term:
    if isinstance(t, PVar):
        return Var(t.name)
    if isinstance(t, PLam):
        return Lam(t.name, _inject_pure(t.body))
    assert isinstance(t, PApp)
    return App(_inject_pure(t.fn), _inject_pure(t.arg))


def _freshen_if(name: str, under, avoid):
    if name in avoid:
        nn = fresh_name(name)
        return nn, subst1(under, name, Var(nn))
    return name, under


def _subst_kind(k: Kind, name: str, value) -> Kind:
    return subst1(k, name, value)


def _try_demote_type(ty: Type) -> Optional[Term]:
    if isinstance(ty, TVar):
        return Var(ty.name, ty.span)
    if isinstance(ty, TAppE):
        fn = _try_demote_type(ty.fn)
        return None if fn is None else App(fn, ty.arg, ty.span)
    return None


def _try_promote_term(t: Term) -> Optional[Type]:
    if isinstance(t, Var):
        return TVar(t.name, t.span)
    if isinstance(t, App):
        fn = _try_promote_term(t.fn)
        return None if fn is None else TAppE(fn, t.arg, t.span)
    if isinstance(t, Lam):
        body = _try_promote_term(t.body)
        return None if body is None else TLam(t.name, body, t.ann, t.span)
    return None


class _CtxGuard:
    def __init__(self, checker: Checker, entry):
        self.checker = checker
        self.entry = entry
        self.saved = None

    def __enter__(self):
        self.saved = self.checker.ctx
        self.checker.ctx = self.checker.ctx.extend(self.entry)
        return self

    def __exit__(self, *exc):
        self.checker.ctx = self.saved
        return False


# ---------------------------------------------------------------------------
# module checking
# ---------------------------------------------------------------------------


@dataclass
class DefResult:
    name: str
    file: str
    ok: bool
    code: Optional[str] = None
    message: str = ""
    span: Optional[Span] = None

    def line(self) -> str:
        if self.ok:
            return f"{self.name}: OK"
        return f"{self.name}: ERROR[{self.code}] {self.message}"


@dataclass
class CheckReport:
    results: list[DefResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def render(self) -> str:
        lines = [r.line() for r in self.results]
        n_ok = sum(r.ok for r in self.results)
        lines.append(f"-- {n_ok}/{len(self.results)} definitions checked")
        return "\n".join(lines)


class ModuleError(Exception):
    pass


def check_defs(defs, checker: Optional[Checker] = None) -> tuple[Checker, CheckReport]:
    """Check an ordered list of (file, RawDef) pairs, extending the
    context with each definition; a failed definition is recorded and its
    declared classifier still enters the context."""
    ck = checker or Checker()
    report = CheckReport()
    for file, d in defs:
        if d.name in ck.ctx:
            raise ModuleError(f"{file}: duplicate top-level name {d.name!r}")
        try:
            _check_one(ck, d)
            report.results.append(DefResult(d.name, file, True, span=d.span))
        except CheckError as e:
            report.results.append(
                DefResult(d.name, file, False, e.code.value, _canon_msg(e.message), e.span or d.span)
            )
            ck.ctx = ck.ctx.extend(Defn(d.name, d.classifier, None, d.span))
    return ck, report


def _check_one(ck: Checker, d) -> None:
    if isinstance(d.classifier, Kind):
        ck.kind_wf(d.classifier)
        if d.body is not None:
            if not isinstance(d.body, Type):
                raise CheckError(ErrorCode.KindMismatch, "a kind-classified definition needs a type body", d.span)
            ck.check_type(d.body, d.classifier)
        ck.ctx = ck.ctx.extend(Defn(d.name, d.classifier, d.body, d.span))
        return
    k = ck.infer_kind(d.classifier)
    if not isinstance(k, Star):
        raise CheckError(
            ErrorCode.KindMismatch,
            _canon_msg(f"classifier of {d.name} has kind {pp.pretty(k)}, expected ★"),
            d.span,
        )
    if d.body is not None:
        if not isinstance(d.body, Term):
            raise CheckError(ErrorCode.TypeMismatch, "a type-classified definition needs a term body", d.span)
        ck.check_term(d.body, d.classifier)
        ck.pure_env[d.name] = substitute_many(erase(d.body), ck.pure_env)
    ck.ctx = ck.ctx.extend(Defn(d.name, d.classifier, d.body, d.span))
