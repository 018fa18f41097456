"""Kernel syntax: pure terms, annotated terms, types, kinds, and contexts.

Pure terms are exactly untyped lambda terms (variables, abstractions,
applications) with named binders.  Annotated terms add the erased binders,
the equality constructs (reflexivity, rewrite, cast, symmetry), and
intersection introduction/projection; classifiers are split into a type
layer and a kind layer.

All syntax values are immutable after construction and safe to share
between checker instances.  Alpha-equivalence, free variables, and
capture-avoiding substitution are implemented iteratively where the
input can be deep (spines of a few thousand applications occur in the
cost harness), so none of the kernel operations are recursion-limited.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class Span:
    """Source position, for error reporting only (never compared)."""

    file: str = "<none>"
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


# ---------------------------------------------------------------------------
# Pure terms
# ---------------------------------------------------------------------------


class PureTerm:
    """Base class for untyped lambda terms (no constants of any kind)."""

    __slots__ = ()


@dataclass(frozen=True)
class PVar(PureTerm):
    name: str

    def __repr__(self) -> str:
        return f"PVar({self.name!r})"


@dataclass(frozen=True)
class PLam(PureTerm):
    name: str
    body: PureTerm

    def __repr__(self) -> str:
        return f"PLam({self.name!r}, {self.body!r})"


@dataclass(frozen=True)
class PApp(PureTerm):
    fn: PureTerm
    arg: PureTerm

    def __repr__(self) -> str:
        return f"PApp({self.fn!r}, {self.arg!r})"


_fresh_counter = itertools.count(1)


def fresh_name(hint: str = "x") -> str:
    """A globally fresh variable name derived from ``hint``."""
    base = hint.rstrip("0123456789")
    if not base:
        base = "x"
    return f"{base}%{next(_fresh_counter)}"


def pure_subterms(t: PureTerm) -> Iterator[PureTerm]:
    """All subterms of ``t``, iteratively (pre-order)."""
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, PLam):
            stack.append(cur.body)
        elif isinstance(cur, PApp):
            stack.append(cur.arg)
            stack.append(cur.fn)


def pure_size(t: PureTerm) -> int:
    return sum(1 for _ in pure_subterms(t))


def free_vars(t: PureTerm) -> frozenset[str]:
    """Exactly the variables occurring free in ``t``."""
    out: set[str] = set()
    # (term, bound-set) pairs; bound sets share structure via frozenset
    stack: list[tuple[PureTerm, frozenset[str]]] = [(t, frozenset())]
    while stack:
        cur, bound = stack.pop()
        if isinstance(cur, PVar):
            if cur.name not in bound:
                out.add(cur.name)
        elif isinstance(cur, PLam):
            stack.append((cur.body, bound | {cur.name}))
        elif isinstance(cur, PApp):
            stack.append((cur.fn, bound))
            stack.append((cur.arg, bound))
    return frozenset(out)


def de_bruijn(t: PureTerm) -> tuple:
    """Encode ``t`` as a nested tuple with de Bruijn indices.

    Free variables keep their names, so the encoding is a canonical
    alpha-invariant (and hashable) form; it doubles as a cache key in the
    reduction engine.
    """
    VAR, LAM, APP = 0, 1, 2
    # post-order iterative build
    out: list = []
    stack: list[tuple[PureTerm, tuple[str, ...], bool]] = [(t, (), False)]
    while stack:
        cur, env, done = stack.pop()
        if isinstance(cur, PVar):
            if cur.name in env:
                # distance from the binder: innermost binder is index 0
                depth = len(env) - 1 - max(i for i, n in enumerate(env) if n == cur.name)
                out.append((VAR, depth))
            else:
                out.append((VAR, cur.name))
        elif isinstance(cur, PLam):
            if done:
                body = out.pop()
                out.append((LAM, body))
            else:
                stack.append((cur, env, True))
                stack.append((cur.body, env + (cur.name,), False))
        elif isinstance(cur, PApp):
            if done:
                arg = out.pop()
                fn = out.pop()
                out.append((APP, fn, arg))
            else:
                stack.append((cur, env, True))
                stack.append((cur.arg, env, False))
                stack.append((cur.fn, env, False))
    return out[0]


def alpha_eq(a: PureTerm, b: PureTerm) -> bool:
    """True iff ``a`` and ``b`` are identical up to renaming of bound
    variables.  An equivalence relation on well-scoped terms."""
    return de_bruijn(a) == de_bruijn(b)


def substitute(body: PureTerm, name: str, value: PureTerm) -> PureTerm:
    """Capture-avoiding substitution ``body[name := value]``.

    Binders in ``body`` that would capture a free variable of ``value``
    are renamed with globally fresh names.
    """
    value_fvs = free_vars(value)

    # Iterative rewrite with an explicit continuation stack.  Frames:
    #   ("go", term, env)   -- env maps names to replacement terms
    #   ("lam", name)       -- rebuild a lambda
    #   ("app",)            -- rebuild an application
    results: list[PureTerm] = []
    work: list[tuple] = [("go", body, {name: value})]
    while work:
        frame = work.pop()
        tag = frame[0]
        if tag == "go":
            _, t, env = frame
            if isinstance(t, PVar):
                results.append(env.get(t.name, t))
            elif isinstance(t, PApp):
                work.append(("app",))
                work.append(("go", t.arg, env))
                work.append(("go", t.fn, env))
            else:
                assert isinstance(t, PLam)
                if t.name in env and len(env) == 1:
                    # substitution shadowed entirely
                    results.append(t)
                    continue
                env2 = {k: v for k, v in env.items() if k != t.name}
                if not env2:
                    results.append(t)
                    continue
                binder = t.name
                body2 = t.body
                if binder in value_fvs:
                    binder = fresh_name(t.name)
                    env2 = dict(env2)
                    env2[t.name] = PVar(binder)
                work.append(("lam", binder))
                work.append(("go", body2, env2))
        elif tag == "lam":
            results.append(PLam(frame[1], results.pop()))
        else:  # "app"
            arg = results.pop()
            fn = results.pop()
            results.append(PApp(fn, arg))
    return results[0]


def substitute_many(t: PureTerm, env: dict[str, PureTerm]) -> PureTerm:
    """Simultaneous substitution of several closed (or capture-safe)
    terms; used to expand top-level definition names in erasures."""
    if not env:
        return t
    all_fvs: frozenset[str] = frozenset().union(*(free_vars(v) for v in env.values()))
    results: list[PureTerm] = []
    work: list[tuple] = [("go", t, env)]
    while work:
        frame = work.pop()
        tag = frame[0]
        if tag == "go":
            _, cur, cenv = frame
            if isinstance(cur, PVar):
                results.append(cenv.get(cur.name, cur))
            elif isinstance(cur, PApp):
                work.append(("app",))
                work.append(("go", cur.arg, cenv))
                work.append(("go", cur.fn, cenv))
            else:
                assert isinstance(cur, PLam)
                cenv2 = {k: v for k, v in cenv.items() if k != cur.name}
                if not cenv2:
                    results.append(cur)
                    continue
                binder = cur.name
                if binder in all_fvs:
                    binder2 = fresh_name(binder)
                    cenv2 = dict(cenv2)
                    cenv2[cur.name] = PVar(binder2)
                    binder = binder2
                work.append(("lam", binder))
                work.append(("go", cur.body, cenv2))
        elif tag == "lam":
            results.append(PLam(frame[1], results.pop()))
        else:
            arg = results.pop()
            fn = results.pop()
            results.append(PApp(fn, arg))
    return results[0]


# ---------------------------------------------------------------------------
# Annotated terms
# ---------------------------------------------------------------------------


class Term:
    """Base class for annotated terms."""

    __slots__ = ()


class Type:
    """Base class for type expressions."""

    __slots__ = ()


class Kind:
    """Base class for kind expressions."""

    __slots__ = ()


Classifier = Union[Type, Kind]


def _span_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Term):
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Lam(Term):
    """Explicit abstraction; annotation optional (checking mode fills it)."""

    name: str
    body: Term
    ann: Optional[Type] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class ELam(Term):
    """Erased abstraction; binds a term or a type variable, which is
    resolved against the expected implicit product when checking."""

    name: str
    body: Term
    ann: Optional[Classifier] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class EApp(Term):
    """Erased application ``t -a``.

    The argument carries a discriminator: a Term, a Type, or a
    DeferredArg (a bare name or name-application whose sort is resolved
    from the head's classifier during checking).
    """

    fn: Term
    arg: Union[Term, Type, "DeferredArg"]
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class DeferredArg:
    """Erased-argument surface form whose term/type sort is not decidable
    at parse time (a name, or a juxtaposed application of names)."""

    expr: Term  # var/app skeleton; promoted to a type when required
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Beta(Term):
    """Reflexivity introduction for the heterogeneous equality type."""

    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Rho(Term):
    """Rewrite: ``ρ q - t``, with an optional ``{x . T}`` guide naming a
    hole and a template type."""

    proof: Term
    body: Term
    guide: Optional[tuple[str, Type]] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Phi(Term):
    """Cast: ``φ q - t1 {t2}`` erases to ``|t2|``."""

    proof: Term
    main: Term
    target: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Sym(Term):
    """Equality symmetry ``ς q``."""

    proof: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class IotaPair(Term):
    """Intersection introduction ``[t1, t2]``."""

    fst: Term
    snd: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Proj(Term):
    """Intersection projection ``t.1`` / ``t.2``."""

    subj: Term
    idx: int  # 1 or 2
    span: Optional[Span] = _span_field()


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TVar(Type):
    name: str
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Pi(Type):
    """Explicit product over a term: ``Π x : T. T'``; a domain name of
    ``_`` marks the non-dependent arrow sugar ``T ➔ T'``."""

    name: str
    dom: Type
    cod: Type
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class All(Type):
    """Implicit product over a term: ``∀ x : T. T'`` (sugar ``T ➾ T'``)."""

    name: str
    dom: Type
    cod: Type
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class AllK(Type):
    """Impredicative quantification over a type: ``∀ X : κ. T``."""

    name: str
    dom: Kind
    cod: Type
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Iota(Type):
    """Dependent intersection ``ι x : T. T'``."""

    name: str
    fst: Type
    snd: Type
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class Eq(Type):
    """Heterogeneous equality ``t1 ≃ t2`` between typed terms."""

    lhs: Term
    rhs: Term
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TLam(Type):
    """Type-level abstraction over a term or type variable; the binder
    sort follows the annotation (or the kind it is checked against)."""

    name: str
    body: Type
    ann: Optional[Classifier] = None
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TAppT(Type):
    """Application of a type to a type (written ``T · T'``)."""

    fn: Type
    arg: Type
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class TAppE(Type):
    """Application of a type to a term (juxtaposition)."""

    fn: Type
    arg: Term
    span: Optional[Span] = _span_field()


# ---------------------------------------------------------------------------
# Kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Star(Kind):
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class KPi(Kind):
    """Kind depending on a term: ``Π x : T. κ`` (sugar ``T ➔ κ``)."""

    name: str
    dom: Type
    cod: Kind
    span: Optional[Span] = _span_field()


@dataclass(frozen=True)
class KPiK(Kind):
    """Kind depending on a type: ``Π X : κ. κ'`` (sugar ``κ ➔ κ'``)."""

    name: str
    dom: Kind
    cod: Kind
    span: Optional[Span] = _span_field()


# ---------------------------------------------------------------------------
# Contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TermBind:
    name: str
    type: Type
    erased: bool = False


@dataclass(frozen=True)
class TypeBind:
    name: str
    kind: Kind


@dataclass(frozen=True)
class Defn:
    """Top-level definition; ``body`` is None for parameters (classifier
    assumed, nothing to unfold)."""

    name: str
    classifier: Classifier
    body: Optional[Union[Term, Type]]
    span: Optional[Span] = _span_field()


Entry = Union[TermBind, TypeBind, Defn]


class Context:
    """Ordered telescope of bindings and definitions.

    Lookup returns the rightmost entry for a name.  Contexts are
    persistent: ``extend`` returns a new context sharing the spine, so a
    fully-checked prelude can be shared between concurrent checkers.
    """

    __slots__ = ("_entries", "_index")

    def __init__(self, entries: tuple[Entry, ...] = (), index: Optional[dict[str, Entry]] = None):
        self._entries = entries
        if index is None:
            index = {}
            for e in entries:
                index[e.name] = e
        self._index = index

    def extend(self, entry: Entry) -> "Context":
        idx = dict(self._index)
        idx[entry.name] = entry
        return Context(self._entries + (entry,), idx)

    def lookup(self, name: str) -> Optional[Entry]:
        return self._index.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def entries(self) -> tuple[Entry, ...]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)


# ---------------------------------------------------------------------------
# Traversals and substitution over annotated syntax
# ---------------------------------------------------------------------------


def _is_syntax(x) -> bool:
    return isinstance(x, (Term, Type, Kind))


_BINDERS = {Lam, ELam, Pi, All, AllK, Iota, TLam, KPi, KPiK}


def term_free_names(x: Union[Term, Type, Kind, DeferredArg]) -> frozenset[str]:
    """Free names (term and type alike) of an annotated syntax value."""
    out: set[str] = set()
    stack: list[tuple[object, frozenset[str]]] = [(x, frozenset())]
    while stack:
        cur, bound = stack.pop()
        if isinstance(cur, DeferredArg):
            stack.append((cur.expr, bound))
            continue
        if isinstance(cur, (Var, TVar)):
            if cur.name not in bound:
                out.add(cur.name)
            continue
        if isinstance(cur, (Beta, Star)):
            continue
        cls = type(cur)
        if cls in (Lam, ELam):
            if cur.ann is not None:
                stack.append((cur.ann, bound))
            stack.append((cur.body, bound | {cur.name}))
        elif cls is TLam:
            if cur.ann is not None:
                stack.append((cur.ann, bound))
            stack.append((cur.body, bound | {cur.name}))
        elif cls in (Pi, All, AllK):
            stack.append((cur.dom, bound))
            stack.append((cur.cod, bound | {cur.name}))
        elif cls is Iota:
            stack.append((cur.fst, bound))
            stack.append((cur.snd, bound | {cur.name}))
        elif cls in (KPi, KPiK):
            stack.append((cur.dom, bound))
            stack.append((cur.cod, bound | {cur.name}))
        elif cls is App:
            stack.append((cur.fn, bound))
            stack.append((cur.arg, bound))
        elif cls is EApp:
            stack.append((cur.fn, bound))
            stack.append((cur.arg, bound))
        elif cls is Rho:
            stack.append((cur.proof, bound))
            if cur.guide is not None:
                stack.append((cur.guide[1], bound | {cur.guide[0]}))
            stack.append((cur.body, bound))
        elif cls is Phi:
            stack.append((cur.proof, bound))
            stack.append((cur.main, bound))
            stack.append((cur.target, bound))
        elif cls is Sym:
            stack.append((cur.proof, bound))
        elif cls is IotaPair:
            stack.append((cur.fst, bound))
            stack.append((cur.snd, bound))
        elif cls is Proj:
            stack.append((cur.subj, bound))
        elif cls is Eq:
            stack.append((cur.lhs, bound))
            stack.append((cur.rhs, bound))
        elif cls in (TAppT, TAppE):
            stack.append((cur.fn, bound))
            stack.append((cur.arg, bound))
        else:  # pragma: no cover
            raise TypeError(f"unknown syntax node {cls.__name__}")
    return frozenset(out)


def subst_syntax(x, env: dict[str, Union[Term, Type]]):
    """Capture-avoiding simultaneous substitution over annotated syntax.

    ``env`` maps names to replacement Terms or Types; a Var hit by a Type
    replacement (or TVar by a Term) indicates a sort error upstream and
    raises.  Recursive: annotated syntax stays shallow (unlike erasures).
    """
    if not env:
        return x
    fvs: set[str] = set()
    for v in env.values():
        fvs |= term_free_names(v)

    def go(cur, env):
        if not env:
            return cur
        if isinstance(cur, DeferredArg):
            # a type replacement hitting the skeleton resolves its sort
            hit_types = {
                k for k, v in env.items() if isinstance(v, Type) and not isinstance(v, TVar)
            }
            skel_names = term_free_names(cur.expr)
            if any(k in skel_names for k in hit_types):
                return go(promote_skeleton(cur.expr), env)
            return DeferredArg(go(cur.expr, env), cur.span)
        cls = type(cur)
        if cls is Var:
            rep = env.get(cur.name)
            if rep is None:
                return cur
            if isinstance(rep, TVar):
                # sort-ambiguous occurrence renamed by a type variable
                return Var(rep.name, cur.span)
            if isinstance(rep, Type):
                raise TypeError(f"type used at term position: {cur.name}")
            return rep
        if cls is TVar:
            rep = env.get(cur.name)
            if rep is None:
                return cur
            if isinstance(rep, Term):
                # a deferred name resolved as a term but used in type position
                if isinstance(rep, Var):
                    return TVar(rep.name, cur.span)
                raise TypeError(f"term used at type position: {cur.name}")
            return rep
        if cls in (Beta, Star):
            return cur
        if cls is Lam:
            ann = go(cur.ann, env) if cur.ann is not None else None
            n, b = _under_shared(cur.name, cur.body, env, fvs, go)
            return Lam(n, b, ann, cur.span)
        if cls is ELam:
            ann = go(cur.ann, env) if cur.ann is not None else None
            n, b = _under_shared(cur.name, cur.body, env, fvs, go)
            return ELam(n, b, ann, cur.span)
        if cls is TLam:
            ann = go(cur.ann, env) if cur.ann is not None else None
            n, b = _under_shared(cur.name, cur.body, env, fvs, go)
            return TLam(n, b, ann, cur.span)
        if cls is App:
            return App(go(cur.fn, env), go(cur.arg, env), cur.span)
        if cls is EApp:
            return EApp(go(cur.fn, env), go(cur.arg, env), cur.span)
        if cls is Rho:
            guide = cur.guide
            if guide is not None:
                gn, gt = guide
                gn2, gt2 = _under_shared(gn, gt, env, fvs, go)
                guide = (gn2, gt2)
            return Rho(go(cur.proof, env), go(cur.body, env), guide, cur.span)
        if cls is Phi:
            return Phi(go(cur.proof, env), go(cur.main, env), go(cur.target, env), cur.span)
        if cls is Sym:
            return Sym(go(cur.proof, env), cur.span)
        if cls is IotaPair:
            return IotaPair(go(cur.fst, env), go(cur.snd, env), cur.span)
        if cls is Proj:
            return Proj(go(cur.subj, env), cur.idx, cur.span)
        if cls is Pi:
            d = go(cur.dom, env)
            n, c = _under_shared(cur.name, cur.cod, env, fvs, go)
            return Pi(n, d, c, cur.span)
        if cls is All:
            d = go(cur.dom, env)
            n, c = _under_shared(cur.name, cur.cod, env, fvs, go)
            return All(n, d, c, cur.span)
        if cls is AllK:
            d = go(cur.dom, env)
            n, c = _under_shared(cur.name, cur.cod, env, fvs, go)
            return AllK(n, d, c, cur.span)
        if cls is Iota:
            d = go(cur.fst, env)
            n, c = _under_shared(cur.name, cur.snd, env, fvs, go)
            return Iota(n, d, c, cur.span)
        if cls is Eq:
            return Eq(go(cur.lhs, env), go(cur.rhs, env), cur.span)
        if cls is TAppT:
            return TAppT(go(cur.fn, env), go(cur.arg, env), cur.span)
        if cls is TAppE:
            return TAppE(go(cur.fn, env), go(cur.arg, env), cur.span)
        if cls is KPi:
            d = go(cur.dom, env)
            n, c = _under_shared(cur.name, cur.cod, env, fvs, go)
            return KPi(n, d, c, cur.span)
        if cls is KPiK:
            d = go(cur.dom, env)
            n, c = _under_shared(cur.name, cur.cod, env, fvs, go)
            return KPiK(n, d, c, cur.span)
        raise TypeError(f"unknown syntax node {cls.__name__}")  # pragma: no cover

    return go(x, env)


def _under_shared(binder: str, sub, env, fvs, go):
    env2 = {k: v for k, v in env.items() if k != binder}
    if not env2:
        return binder, sub
    if binder in fvs:
        fresh = fresh_name(binder)
        env2[binder] = Var(fresh)
        return fresh, go(sub, env2)
    return binder, go(sub, env2)


def subst1(x, name: str, value: Union[Term, Type]):
    """Single-variable substitution over annotated syntax."""
    return subst_syntax(x, {name: value})


def syntax_alpha_eq(a, b) -> bool:
    """Alpha-equivalence of annotated syntax values (terms, types, kinds).

    Binder names are compared positionally; a deferred erased argument is
    compared through its skeleton.  Non-dependent products with distinct
    unused binder names are equal (this is what makes the arrow resugaring
    of the printer round-trip).
    """

    def go(x, y, envx: dict, envy: dict) -> bool:
        if isinstance(x, DeferredArg):
            x = x.expr
        if isinstance(y, DeferredArg):
            y = y.expr
        cx, cy = type(x), type(y)
        if cx is not cy:
            return False
        if cx in (Var, TVar):
            nx = envx.get(x.name, ("free", x.name))
            ny = envy.get(y.name, ("free", y.name))
            return nx == ny
        if cx in (Beta, Star):
            return True
        if cx in (Lam, ELam, TLam):
            if (x.ann is None) != (y.ann is None):
                return False
            if x.ann is not None and not go(x.ann, y.ann, envx, envy):
                return False
            return _go_bound(x.name, x.body, y.name, y.body, envx, envy, go)
        if cx in (Pi, All, AllK):
            return go(x.dom, y.dom, envx, envy) and _go_bound(
                x.name, x.cod, y.name, y.cod, envx, envy, go
            )
        if cx is Iota:
            return go(x.fst, y.fst, envx, envy) and _go_bound(
                x.name, x.snd, y.name, y.snd, envx, envy, go
            )
        if cx in (KPi, KPiK):
            return go(x.dom, y.dom, envx, envy) and _go_bound(
                x.name, x.cod, y.name, y.cod, envx, envy, go
            )
        if cx in (App, EApp, TAppT, TAppE):
            return go(x.fn, y.fn, envx, envy) and go(x.arg, y.arg, envx, envy)
        if cx is Rho:
            if (x.guide is None) != (y.guide is None):
                return False
            if x.guide is not None:
                if not _go_bound(x.guide[0], x.guide[1], y.guide[0], y.guide[1], envx, envy, go):
                    return False
            return go(x.proof, y.proof, envx, envy) and go(x.body, y.body, envx, envy)
        if cx is Phi:
            return (
                go(x.proof, y.proof, envx, envy)
                and go(x.main, y.main, envx, envy)
                and go(x.target, y.target, envx, envy)
            )
        if cx is Sym:
            return go(x.proof, y.proof, envx, envy)
        if cx is IotaPair:
            return go(x.fst, y.fst, envx, envy) and go(x.snd, y.snd, envx, envy)
        if cx is Proj:
            return x.idx == y.idx and go(x.subj, y.subj, envx, envy)
        if cx is Eq:
            return go(x.lhs, y.lhs, envx, envy) and go(x.rhs, y.rhs, envx, envy)
        raise TypeError(f"unknown node {cx.__name__}")  # pragma: no cover

    depth = [0]

    def _go_bound(nx, bx, ny, by, envx, envy, go):
        depth[0] += 1
        tag = ("bound", depth[0])
        ex = dict(envx)
        ex[nx] = tag
        ey = dict(envy)
        ey[ny] = tag
        return go(bx, by, ex, ey)

    return go(a, b, {}, {})


def promote_skeleton(t: Term) -> Type:
    """Reinterpret a sort-ambiguous var/application/λ skeleton as a type
    (juxtaposed application arguments stay terms)."""
    if isinstance(t, Var):
        return TVar(t.name, t.span)
    if isinstance(t, App):
        return TAppE(promote_skeleton(t.fn), t.arg, t.span)
    if isinstance(t, Lam):
        return TLam(t.name, promote_skeleton(t.body), t.ann, t.span)
    raise TypeError(f"not a promotable skeleton: {t!r}")
