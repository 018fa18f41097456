"""Surface syntax: parse/pretty round-trips, lexer alias invariance, and
positioned parse errors."""

import random

import pytest

from cdle.pretty import pretty
from cdle.surface import ParseError, parse_classifier, parse_module, parse_term, parse_type_expr
from cdle.syntax import Kind, Term, Type, syntax_alpha_eq
from gen import gen_kind, gen_term, gen_type


def reparse(x):
    text = pretty(x)
    if isinstance(x, Kind):
        return parse_classifier(text)
    if isinstance(x, Type):
        return parse_type_expr(text)
    return parse_term(text)


def test_roundtrip_corpus(corpus_defs):
    for path, d in corpus_defs:
        c2 = parse_classifier(pretty(d.classifier))
        assert syntax_alpha_eq(d.classifier, c2), f"{d.name} classifier roundtrip ({path})"
        if d.body is None:
            continue
        if isinstance(d.body, Type):
            b2 = parse_type_expr(pretty(d.body))
        else:
            b2 = parse_term(pretty(d.body))
        assert syntax_alpha_eq(d.body, b2), f"{d.name} body roundtrip ({path})"


def test_roundtrip_random_syntax_500():
    rng = random.Random(2026)
    done = 0
    for i in range(500):
        kind = i % 3
        if kind == 0:
            x = gen_term(rng, 4)
        elif kind == 1:
            x = gen_type(rng, 4)
        else:
            x = gen_kind(rng, 3)
        y = reparse(x)
        assert syntax_alpha_eq(x, y), f"roundtrip failed for {pretty(x)!r}"
        done += 1
    assert done == 500


def test_ascii_alias_invariance_corpus(corpus_defs):
    """Replacing every Unicode token by its ASCII alias yields an
    identical AST."""
    for _, d in corpus_defs:
        uni = parse_classifier(pretty(d.classifier))
        asc = parse_classifier(pretty(d.classifier, ascii_only=True))
        assert uni == asc, f"{d.name} classifier alias mismatch"
        if d.body is None:
            continue
        if isinstance(d.body, Type):
            uni_b = parse_type_expr(pretty(d.body))
            asc_b = parse_type_expr(pretty(d.body, ascii_only=True))
        else:
            uni_b = parse_term(pretty(d.body))
            asc_b = parse_term(pretty(d.body, ascii_only=True))
        assert uni_b == asc_b, f"{d.name} body alias mismatch"


def test_ascii_alias_invariance_random():
    rng = random.Random(77)
    for _ in range(200):
        x = gen_term(rng, 4)
        assert parse_term(pretty(x)) == parse_term(pretty(x, ascii_only=True))


def test_module_shape_and_multibinders():
    mod = parse_module(
        """
import base.
K ◂ ∀ A : ★. ∀ B : ★. A ➔ B ➔ A = Λ A, B. λ x, y. x.
""",
        "<m>",
    )
    assert mod.imports == ["base"]
    assert [d.name for d in mod.defs] == ["K"]
    # multi-binders desugar to nested binders
    alt = parse_module(
        "import base.\nK ◂ ∀ A : ★. ∀ B : ★. A ➔ B ➔ A = Λ A. Λ B. λ x. λ y. x.\n",
        "<m2>",
    )
    assert syntax_alpha_eq(mod.defs[0].body, alt.defs[0].body)
    assert syntax_alpha_eq(mod.defs[0].classifier, alt.defs[0].classifier)


def test_shared_classifier_binder_group():
    a = parse_type_expr("Π xs, ys : T. xs ≃ ys")
    b = parse_type_expr("Π xs : T. Π ys : T. xs ≃ ys")
    assert syntax_alpha_eq(a, b)


def test_missing_terminator_is_positioned_error():
    with pytest.raises(ParseError) as exc:
        parse_module("x ◂ T = λ y. y", "<m>")
    assert "<m>" in str(exc.value)


def test_parse_error_reports_expected_set():
    with pytest.raises(ParseError) as exc:
        parse_module("x ◂ = λ y. y.", "<m>")
    assert "expected" in str(exc.value) or "unexpected" in str(exc.value)


def test_comments_run_to_end_of_line():
    mod = parse_module("x ◂ T = λ y. y. // goal comment ≃ with symbols\n", "<m>")
    assert mod.defs[0].name == "x"


def test_erased_application_forms():
    t = parse_term("f -X a -(g b) -(List · A) -β")
    assert pretty(t)  # printable
    t2 = parse_term(pretty(t))
    assert syntax_alpha_eq(t, t2)


def test_guided_rho_syntax_roundtrip():
    t = parse_term("ρ q { h . Vec · A h } - x")
    assert t.guide is not None and t.guide[0] == "h"
    assert syntax_alpha_eq(t, parse_term(pretty(t)))


def test_arrow_resugaring():
    ty = parse_type_expr("Π x : A. B")
    assert pretty(ty) == "A ➔ B"
    ty2 = parse_type_expr("∀ x : A. B")
    assert pretty(ty2) == "A ➾ B"
    dep = parse_type_expr("Π x : A. B x")
    assert pretty(dep).startswith("Π x")
