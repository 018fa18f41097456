"""Erasure from annotated terms to pure untyped lambda terms.

The function is total, purely syntactic, and never consults typing:

    |x|              = x
    |λ x. t|         = λ x. |t|
    |Λ x. t|         = |t|
    |t t'|           = |t| |t'|
    |t -a|           = |t|
    |β|              = λ x. x
    |ρ q - t|        = |t|
    |φ q - t1 {t2}|  = |t2|
    |ς q|            = |q|
    |[t1, t2]|       = |t1|
    |t.1| = |t.2|    = |t|

ς is a proof-level symmetry combinator and must not add computational
content, so it erases to its argument.  Erased binders and erased
arguments leave no trace; the checker separately enforces that an
erased binder never occurs free in its body's erasure.
"""

from __future__ import annotations

from .syntax import (
    App,
    Beta,
    ELam,
    EApp,
    IotaPair,
    Lam,
    PApp,
    PLam,
    PVar,
    Phi,
    Proj,
    PureTerm,
    Rho,
    Sym,
    Term,
    Var,
)


def erase(t: Term) -> PureTerm:
    """Erase an annotated term to its underlying pure term."""
    out: list[PureTerm] = []
    # frames: ("go", term) | ("lam", name) | ("app",)
    work: list[tuple] = [("go", t)]
    while work:
        frame = work.pop()
        if frame[0] == "lam":
            out.append(PLam(frame[1], out.pop()))
            continue
        if frame[0] == "app":
            arg = out.pop()
            fn = out.pop()
            out.append(PApp(fn, arg))
            continue
        cur = frame[1]
        match cur:
            case Var(name=n):
                out.append(PVar(n))
            case Lam(name=n, body=b):
                work.append(("lam", n))
                work.append(("go", b))
            case ELam(body=b):
                work.append(("go", b))
            case App(fn=f, arg=a):
                work.append(("app",))
                work.append(("go", a))
                work.append(("go", f))
            case EApp(fn=f):
                work.append(("go", f))
            case Beta():
                out.append(PLam("x", PVar("x")))
            case Rho(body=b):
                work.append(("go", b))
            case Phi(target=t2):
                work.append(("go", t2))
            case Sym(proof=q):
                work.append(("go", q))
            case IotaPair(fst=t1):
                work.append(("go", t1))
            case Proj(subj=s):
                work.append(("go", s))
            case _:
                raise TypeError(f"cannot erase {type(cur).__name__}")
    return out[0]
