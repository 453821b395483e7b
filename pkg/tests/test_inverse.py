"""Inverse application operators: the published cases, mirror, soundness."""

from lambdalex.terms import alpha_eq, apply, normalize, Application, parse_term, print_term
from lambdalex.inverse import inverse_l, inverse_r, verify_inverse

from generators import random_inverse_pair, random_mismatched_pair


def p(text):
    return parse_term(text)


class TestInverseR:
    def test_illustration_case3(self):
        # worked example: H = in(river,Texas), G = \v.v@Texas@river
        res = inverse_r(p("in(river,Texas)"), p(r"\v. v@Texas@river"))
        assert res
        assert any(alpha_eq(f, p(r"\v1.\v2.in(v2,v1)")) for f in res.candidates)
        idx = next(
            i for i, f in enumerate(res.candidates)
            if alpha_eq(f, p(r"\v1.\v2.in(v2,v1)"))
        )
        assert res.cases[idx] == "case3"

    def test_table1_root(self):
        res = inverse_r(
            p("answer(A,largest(A,state(A)))"), p(r"\x.answer(A,x@A)")
        )
        assert any(
            alpha_eq(f, p(r"\y.largest(y,state(y))")) for f in res.candidates
        )

    def test_identity_gives_trivial(self):
        h = p("in(river,Texas)")
        res = inverse_r(h, p(r"\x.x"))
        assert res.candidates and alpha_eq(res.candidates[0], h)
        assert res.cases[0] == "trivial"

    def test_case1_delegates_left(self):
        # g = \v.v@john: F must satisfy F@john = h
        res = inverse_r(p("fly(john)"), p(r"\v.v@john"))
        assert any(alpha_eq(f, p(r"\v.fly(v)")) for f in res.candidates)

    def test_null_is_empty_list(self):
        res = inverse_r(p("fly(john)"), p("swim(mary)"))
        assert not res
        assert res.candidates == []

    def test_every_candidate_is_verified(self):
        h = p("answer(A,largest(A,state(A)))")
        g = p(r"\x.answer(A,x@A)")
        res = inverse_r(h, g)
        for f in res.candidates:
            assert verify_inverse(h, g, f, "right")

    def test_deterministic_ordering(self):
        h = p("f(a,g(a,b))")
        g = p(r"\v.f(v,g(v,b))")
        r1 = inverse_r(h, g)
        r2 = inverse_r(h, g)
        assert [print_term(f) for f in r1.candidates] == [
            print_term(f) for f in r2.candidates
        ]
        assert r1.cases == r2.cases


class TestInverseL:
    def test_give_me_step(self):
        # derived: apply(F, \y.largest(y,state(y))) must give the Table-1 root
        h = p("answer(A,largest(A,state(A)))")
        g = p(r"\y.largest(y,state(y))")
        res = inverse_l(h, g)
        assert any(alpha_eq(f, p(r"\x.answer(A,x@A)")) for f in res.candidates)
        for f in res.candidates:
            assert alpha_eq(apply(f, g), h)

    def test_largest_from_state(self):
        # derived: the missing-modifier step of the Table-1 narrative
        h = p(r"\y.largest(y,state(y))")
        g = p(r"\z.state(z)")
        res = inverse_l(h, g)
        assert any(alpha_eq(f, p(r"\x.\y.largest(y,x@y)")) for f in res.candidates)

    def test_case1_prime_constant(self):
        res = inverse_l(p("fly(john)"), p("john"))
        assert any(alpha_eq(f, p(r"\v.fly(v)")) for f in res.candidates)
        assert "case1" in res.cases

    def test_identity_solution(self):
        t = p("fly(john)")
        res = inverse_l(t, t)
        assert alpha_eq(res.candidates[0], p(r"\v.v"))
        assert res.cases[0] == "trivial"

    def test_case3_prime_shape(self):
        h = p("state(texas)")
        g = p(r"\v.v@(\z.state(z))")
        res = inverse_l(h, g)
        assert res
        for f in res.candidates:
            assert alpha_eq(apply(f, g), h)


class TestVerify:
    def test_illustration_true(self):
        assert verify_inverse(
            p("in(river,Texas)"),
            p(r"\v.v@Texas@river"),
            p(r"\v1.\v2.in(v2,v1)"),
            "right",
        )

    def test_swapped_arguments_false(self):
        # derived: reduction gives in(Texas,river), not h
        assert not verify_inverse(
            p("in(river,Texas)"),
            p(r"\v.v@Texas@river"),
            p(r"\v1.\v2.in(v1,v2)"),
            "right",
        )

    def test_trivial_true(self):
        t = p("state(a)")
        assert verify_inverse(t, p(r"\x.x"), t, "right")

    def test_nonterminating_candidate_is_false(self):
        omega = p(r"\x.x@x")
        assert not verify_inverse(p("f(a)"), omega, omega, "right")


class TestSoundnessAndReconstruction:
    N = 400  # the acceptance suite runs the full >= 1000

    def test_soundness_on_matched_pairs(self):
        for seed in range(self.N):
            h, g, direction = random_inverse_pair(seed)
            res = inverse_r(h, g) if direction == "right" else inverse_l(h, g)
            for f in res.candidates:
                assert verify_inverse(h, g, f, direction), (
                    print_term(h),
                    print_term(g),
                    print_term(f),
                )

    def test_soundness_on_mismatched_pairs(self):
        for seed in range(self.N):
            h, g, direction = random_mismatched_pair(seed)
            res = inverse_r(h, g) if direction == "right" else inverse_l(h, g)
            for f in res.candidates:
                assert verify_inverse(h, g, f, direction)

    def test_reconstruction_on_case_shaped_pairs(self):
        for seed in range(self.N):
            h, g, direction = random_inverse_pair(seed)
            res = inverse_r(h, g) if direction == "right" else inverse_l(h, g)
            assert res, "no candidate for seed %d: h=%s g=%s" % (
                seed,
                print_term(h),
                print_term(g),
            )
            ok = False
            for f in res.candidates:
                out = (
                    normalize(Application(g, f))
                    if direction == "right"
                    else normalize(Application(f, g))
                )
                if alpha_eq(out, h):
                    ok = True
                    break
            assert ok
