"""Seeded random term generators shared by the test modules.

``random_term`` grows arbitrary small terms for round-trip and reduction
properties.  ``random_inverse_pair`` draws (H, G, direction) instances whose
shapes match the inverse-operator case families, so reconstruction is
expected to succeed; pattern subterms use a reserved constant pool to keep
their occurrences unambiguous inside the surrounding context.
"""

import random

from hypothesis import strategies as st

from lambdalex.terms import (
    Abstraction,
    Application,
    Atom,
    Constant,
    Variable,
    normalize,
    substitute,
)

CONSTANTS = ["a", "b", "c", "Texas", "river", "john"]
PREDICATES = ["f", "g", "in", "state", "largest", "rel"]
RESERVED = ["uniq", "mark", "probe"]  # only pattern subterms use these
BINDERS = ["x", "y", "z", "u", "v"]


def random_term(seed, force_abstraction=False, max_depth=4):
    rng = random.Random(seed)

    def build(depth, bound):
        options = ["const"]
        if bound:
            options.append("var")
        if depth < max_depth:
            options += ["lam", "app", "atom", "atom"]
        kind = rng.choice(options)
        if kind == "var":
            return Variable(rng.choice(sorted(bound)))
        if kind == "const":
            return Constant(rng.choice(CONSTANTS))
        if kind == "lam":
            name = "%s%d" % (rng.choice(BINDERS), len(bound))
            return Abstraction(Variable(name), build(depth + 1, bound | {name}))
        if kind == "app":
            return Application(build(depth + 1, bound), build(depth + 1, bound))
        args = tuple(
            build(depth + 1, bound) for _ in range(rng.randint(1, 3))
        )
        return Atom(rng.choice(PREDICATES), args)

    if force_abstraction:
        name = rng.choice(BINDERS)
        return Abstraction(Variable(name), build(1, frozenset((name,))))
    return build(0, frozenset())


def term_strategy():
    return st.integers(min_value=0, max_value=10**9).map(random_term)


def _random_formula(rng, depth=0, extra=()):
    """A closed atom tree, the shape gold corpus terms take."""
    args = []
    for _ in range(rng.randint(1, 3)):
        roll = rng.random()
        if extra and roll < 0.3:
            args.append(extra[rng.randrange(len(extra))])
        elif depth < 2 and roll < 0.55:
            args.append(_random_formula(rng, depth + 1, extra))
        else:
            args.append(Constant(rng.choice(CONSTANTS)))
    return Atom(rng.choice(PREDICATES), tuple(args))


def _reserved_subterm(rng):
    name = "%s%d" % (rng.choice(RESERVED), rng.randrange(4))
    if rng.random() < 0.5:
        return Constant(name)
    return Atom(name, (Constant(rng.choice(CONSTANTS)),))


def _context_with_holes(rng, hole, n_holes):
    """A closed formula containing ``hole`` at n_holes argument positions."""
    body = _random_formula(rng, extra=(hole,) * 2)
    # guarantee at least the requested number of occurrences
    args = (hole,) * n_holes + (body,)
    return Atom("ctx", args)


def random_inverse_pair(seed):
    """(h, g, direction) with shapes drawn from the case families."""
    rng = random.Random(seed)
    direction = rng.choice(["right", "left"])
    case = rng.choice(["case1", "case2", "case3"])
    j = _reserved_subterm(rng)

    if direction == "right":
        if case == "case1":
            # g = \v.v@J, h = body[u := J]
            body = _context_with_holes(rng, Variable("u"), rng.randint(1, 2))
            h = substitute(body, "u", j)
            g = Abstraction(Variable("v"), Application(Variable("v"), j))
        elif case == "case2":
            # g = \v.h(J:v)
            gbody = _context_with_holes(rng, Variable("v"), rng.randint(1, 2))
            h = substitute(gbody, "v", j)
            g = Abstraction(Variable("v"), gbody)
        else:
            # g = \w.h(Jatom : w@X1@..@Xs); h and g share one context
            s = rng.randint(1, 2)
            xs = [Constant("%s%d" % (rng.choice(RESERVED), 10 + i)) for i in range(s)]
            jatom = Atom("core", tuple(xs) + (Constant(rng.choice(CONSTANTS)),))
            spine = Variable("w")
            for x in xs:
                spine = Application(spine, x)
            ctx = _context_with_holes(rng, Variable("hole"), 1)
            h = substitute(ctx, "hole", jatom)
            g = Abstraction(Variable("w"), substitute(ctx, "hole", spine))
        return h, g, "right"

    if case == "case1":
        # g occurs in h; F abstracts it
        ctx = _context_with_holes(rng, Variable("hole"), rng.randint(1, 2))
        h = substitute(ctx, "hole", j)
        g = j
    elif case == "case2":
        # g = \v1..vs. Jatom(X:v); h contains Jatom
        s = rng.randint(1, 2)
        xs = [Constant("%s%d" % (rng.choice(RESERVED), 10 + i)) for i in range(s)]
        jatom = Atom("core", tuple(xs) + (Constant(rng.choice(CONSTANTS)),))
        ctx = _context_with_holes(rng, Variable("hole"), 1)
        h = substitute(ctx, "hole", jatom)
        body = jatom
        names = ["v%d" % (i + 1) for i in range(s)]
        for x, n in zip(xs, names):
            body = substitute_const(body, x.name, Variable(n))
        g = body
        for n in reversed(names):
            g = Abstraction(Variable(n), g)
    else:
        # g = \v.v@J with F = \u.u@X; h = body[u := J]
        body = _context_with_holes(rng, Variable("u"), rng.randint(1, 2))
        h = substitute(body, "u", j)
        g = Abstraction(Variable("v"), Application(Variable("v"), j))
    return h, g, "left"


def substitute_const(t, name, value):
    """Replace a constant by a term (plain rewriting, used by the generator)."""
    if isinstance(t, Constant):
        return value if t.name == name else t
    if isinstance(t, Variable):
        return t
    if isinstance(t, Abstraction):
        return Abstraction(t.var, substitute_const(t.body, name, value))
    if isinstance(t, Application):
        return Application(
            substitute_const(t.functor, name, value),
            substitute_const(t.argument, name, value),
        )
    return Atom(
        t.predicate, tuple(substitute_const(a, name, value) for a in t.args)
    )


def random_mismatched_pair(seed):
    """Independent draws; soundness must hold even when no F can exist."""
    h, _, direction = random_inverse_pair(seed)
    _, g, _ = random_inverse_pair(seed + 500_000)
    return h, g, direction
