"""Term representation: parsing, printing, reduction, subterms, replacement."""

import pytest
from hypothesis import given, settings

from lambdalex.errors import (
    NotApplicableError,
    ReductionLimitError,
    TermSyntaxError,
    UnboundVariableError,
)
from lambdalex.terms import (
    Abstraction,
    Application,
    Atom,
    Constant,
    Variable,
    alpha_eq,
    apply,
    canonical,
    free_vars,
    normalize,
    parse_term,
    print_term,
    replace,
    replace_at,
    substitute,
    subterms,
)
from lambdalex.typesys import Signature

from generators import random_term, term_strategy


def p(text):
    return parse_term(text)


class TestParse:
    def test_table1_give_me(self):
        t = p(r"\x. answer(A, x@A)")
        assert t == Abstraction(
            Variable("x"),
            Atom("answer", (Constant("A"), Application(Variable("x"), Constant("A")))),
        )

    def test_identity(self):
        assert p(r"\x. x") == Abstraction(Variable("x"), Variable("x"))

    def test_application_left_associative(self):
        t = p(r"\v. v@Texas@river")
        assert t == Abstraction(
            Variable("v"),
            Application(
                Application(Variable("v"), Constant("Texas")), Constant("river")
            ),
        )

    def test_parenthesized_argument(self):
        t = p(r"f@(g@x)")
        assert t == Application(
            Constant("f"), Application(Constant("g"), Constant("x"))
        )

    def test_bound_head_application_sugar(self):
        # a bound identifier applied like an atom is an @ chain
        assert p(r"\x. x(a,b)") == p(r"\x. x@a@b")

    def test_numeric_and_braced_constants(self):
        t = p("pt(-5,-23)")
        assert t == Atom("pt", (Constant("-5"), Constant("-23")))
        assert p("{3}") == Constant("{3}")

    def test_syntax_error_reports_position(self):
        with pytest.raises(TermSyntaxError) as err:
            p(r"\x.")
        assert err.value.position is not None

    def test_trailing_input_rejected(self):
        with pytest.raises(TermSyntaxError):
            p("a b")

    def test_strict_mode_rejects_undeclared_lowercase(self):
        sig = Signature({})
        with pytest.raises(UnboundVariableError):
            parse_term("river", sig=sig, strict=True)

    def test_strict_mode_allows_corpus_constants(self):
        # upper-case initial means corpus variable/constant
        t = parse_term("Texas", sig=Signature({}), strict=True)
        assert t == Constant("Texas")


class TestPrintRoundTrip:
    @pytest.mark.parametrize(
        "text",
        [
            r"\x.answer(A,x@A)",
            r"\x.\y.largest(y,x@y)",
            r"(\x.x)@state(a)",
            r"\v.v@Texas@river",
            r"f@(g@h)",
            r"p(\x.q(x),c)",
        ],
    )
    def test_examples(self, text):
        t = p(text)
        assert alpha_eq(parse_term(print_term(t)), t)

    def test_seeded_random_terms(self):
        for seed in range(200):
            t = random_term(seed)
            assert alpha_eq(parse_term(print_term(t)), t)

    @given(term_strategy())
    @settings(max_examples=150, deadline=None)
    def test_property(self, t):
        assert alpha_eq(parse_term(print_term(t)), t)


class TestAlphaEq:
    def test_binder_renaming(self):
        assert alpha_eq(p(r"\x.state(x)"), p(r"\y.state(y)"))

    def test_distinct_constants(self):
        assert not alpha_eq(p(r"\x.state(x)"), p(r"\x.city(x)"))

    def test_reflexive_on_table1_formula(self):
        t = p("answer(A,largest(A,state(A)))")
        assert alpha_eq(t, t)

    def test_free_variables_not_renamed(self):
        assert not alpha_eq(p(r"\x.f(x,y)"), p(r"\x.f(x,z)"))


class TestApply:
    def test_table1_row2(self):
        out = apply(p(r"\x.\y.largest(y,x@y)"), p(r"\z.state(z)"))
        assert alpha_eq(out, p(r"\y.largest(y,state(y))"))

    def test_table1_final(self):
        out = apply(p(r"\x.answer(A,x@A)"), p(r"\y.largest(y,state(y))"))
        assert alpha_eq(out, p("answer(A,largest(A,state(A)))"))

    def test_identity(self):
        t = p("in(river,Texas)")
        assert alpha_eq(apply(p(r"\x.x"), t), t)

    def test_normal_form_is_alpha_stable(self):
        out = apply(p(r"\x.\y.largest(y,x@y)"), p(r"\z.state(z)"))
        assert alpha_eq(normalize(out), out)

    def test_constant_functor_rejected(self):
        with pytest.raises(NotApplicableError):
            apply(p("Texas"), p("river"))

    def test_step_bound(self):
        omega = Abstraction(
            Variable("x"), Application(Variable("x"), Variable("x"))
        )
        with pytest.raises(ReductionLimitError):
            normalize(Application(omega, omega), max_steps=50)

    def test_capture_avoidance(self):
        # (\x.\y.x) @ y must not capture the free y
        out = apply(p(r"\x.\y.f(x)"), Variable("y"))
        assert alpha_eq(out, Abstraction(Variable("z"), Atom("f", (Variable("y"),))))
        assert "y" in free_vars(out)

    def test_substitution_safety_random(self):
        for seed in range(300):
            f = random_term(seed, force_abstraction=True)
            g = random_term(seed + 10_000)
            before = free_vars(Application(f, g))
            try:
                out = normalize(Application(f, g), max_steps=500)
            except ReductionLimitError:
                continue
            # reduction can drop free variables but never invent them
            assert free_vars(out) <= before

    def test_confluence_normal_vs_innermost(self):
        for seed in range(300):
            f = random_term(seed, force_abstraction=True)
            g = random_term(seed + 20_000)
            t = Application(f, g)
            try:
                a = normalize(t, max_steps=500, strategy="normal")
                b = normalize(t, max_steps=500, strategy="innermost")
            except ReductionLimitError:
                continue
            assert alpha_eq(a, b)


class TestSubterms:
    def test_illustration(self):
        got = [print_term(occ.term) for occ in subterms(p("in(river,Texas)"))]
        assert got == ["in(river,Texas)", "river", "Texas"]

    def test_identity(self):
        got = [print_term(occ.term) for occ in subterms(p(r"\x.x"))]
        assert got == ["\\x.x", "x"]

    def test_table1_positions(self):
        # derived by hand: A occurs at arg 0, inside largest, inside state
        occs = {print_term(o.term): o.positions for o in subterms(p("answer(A,largest(A,state(A)))"))}
        assert occs["A"] == [(0,), (1, 0), (1, 1, 0)]
        assert occs["largest(A,state(A))"] == [(1,)]
        assert occs["state(A)"] == [(1, 1)]

    def test_deterministic_shape_on_alpha_equivalent_inputs(self):
        a = subterms(p(r"\x.f(x,g(x))"))
        b = subterms(p(r"\y.f(y,g(y))"))
        assert [o.positions for o in a] == [o.positions for o in b]


class TestReplace:
    def test_single_occurrence(self):
        out = replace(
            p("answer(A,largest(A,state(A)))"),
            [p("largest(A,state(A))")],
            [Variable("v")],
        )
        assert out == p(r"\q.answer(A,q)").body.args[1] or print_term(out) == "answer(A,v)"

    def test_illustration_simultaneous(self):
        out = replace(
            p("in(river,Texas)"),
            [p("river"), p("Texas")],
            [Variable("v2"), Variable("v1")],
        )
        assert print_term(out) == "in(v2,v1)"

    def test_empty_lists(self):
        t = p("state(a)")
        assert replace(t, [], []) is t

    def test_all_appearances(self):
        out = replace(p("largest(A,state(A))"), [p("A")], [Variable("v")])
        assert print_term(out) == "largest(v,state(v))"

    def test_closed_patterns_match_up_to_alpha(self):
        h = p(r"f(\x.g(x),c)")
        out = replace(h, [p(r"\y.g(y)")], [Constant("d")])
        assert print_term(out) == "f(d,c)"

    def test_open_patterns_match_literally(self):
        h = p(r"\y.largest(y,state(y))")
        pattern = h.body.args[1]  # state(y), open
        out = replace(h, [pattern], [Application(Variable("w"), Variable("y"))])
        assert print_term(out) == "\\y.largest(y,w@y)"

    def test_inverse_replace_roundtrip(self):
        for seed in range(100):
            h = random_term(seed)
            occ = subterms(h)[-1]
            v = Variable("vfresh")
            if "vfresh" in free_vars(h):
                continue
            abstracted = replace(h, [occ.term], [v])
            back = replace(abstracted, [v], [occ.term])
            assert alpha_eq(back, h)

    def test_replace_at_targets_one_position(self):
        h = p("f(a,g(a))")
        out = replace_at(h, (1, 0), Constant("b"))
        assert print_term(out) == "f(a,g(b))"


class TestSubstitute:
    def test_shadowing(self):
        t = p(r"\x.f(x)")
        assert substitute(t, "x", Constant("c")) == t

    def test_capture_renames_binder(self):
        t = Abstraction(Variable("y"), Application(Variable("x"), Variable("y")))
        out = substitute(t, "x", Variable("y"))
        assert alpha_eq(out, Abstraction(Variable("z"), Application(Variable("y"), Variable("z"))))
