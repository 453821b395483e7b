"""Inverse application: given H and G, find F with G@F = H or F@G = H.

``inverse_r(h, g)`` returns the F candidates for ``g@F = h`` and
``inverse_l(h, g)`` those for ``F@g = h``.  Candidate construction follows
three case families (plus the trivial identity case); every candidate is
checked by beta-reduction before it is returned, so the result is sound by
construction.  An empty candidate list is the "null" outcome.

Case construction leans on the replacement operator: abstracting a subterm J
out of H at all of its occurrences (single-occurrence variants are attempted
when the all-occurrence form does not match), and abstracting chosen subterms
of an atomic formula into an application spine ``w@X1@...@Xs``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import LambdaLexError
from .terms import (
    Abstraction,
    Application,
    Atom,
    Term,
    Variable,
    alpha_eq,
    all_names,
    apply,
    canonical,
    free_vars,
    fresh_name,
    replace,
    replace_at,
    substitute,
    subterms,
)

log = logging.getLogger(__name__)

IDENTITY = Abstraction(Variable("x"), Variable("x"))


@dataclass
class InverseResult:
    """Verified candidates, in deterministic construction order."""

    candidates: list = field(default_factory=list)
    direction: str = "right"
    cases: list = field(default_factory=list)

    def __bool__(self):
        return bool(self.candidates)

    def pairs(self):
        return list(zip(self.candidates, self.cases))

    def add(self, term, case, seen):
        key = canonical(term)
        if key in seen:
            return
        seen.add(key)
        self.candidates.append(term)
        self.cases.append(case)


def verify_inverse(h: Term, g: Term, f: Term, direction: str = "right") -> bool:
    """True iff the directed application beta-normalizes to (alpha-eq) h."""
    try:
        result = apply(g, f) if direction == "right" else apply(f, g)
    except LambdaLexError as exc:
        log.debug("verification failed for %s / %s: %s", g, f, exc)
        return False
    return alpha_eq(result, h)


def _contains(t, pattern):
    """Does ``pattern`` occur in ``t`` under replace-matching rules?"""
    pc = canonical(pattern) if not free_vars(pattern) else None
    for occ in subterms(t):
        if pc is not None:
            if canonical(occ.term) == pc:
                return True
        elif occ.term == pattern:
            return True
    return False


def _identity_shaped(g):
    return isinstance(g, Abstraction) and g.body == g.var


def _unwrap_binders(g):
    binders = []
    body = g
    while isinstance(body, Abstraction):
        binders.append(body.var.name)
        body = body.body
    return binders, body


def _spine(t):
    """(head, [args]) of a left-nested application chain."""
    args = []
    while isinstance(t, Application):
        args.append(t.argument)
        t = t.functor
    args.reverse()
    return t, args


def _var_arg_lists(body, name):
    """Argument lists of every application spine headed by Variable(name).

    Returns None when the variable also occurs bare or inside one of its own
    argument lists - shapes the spine-abstraction cases cannot produce.
    """
    lists = []
    ok = [True]

    def walk(t, in_head_position):
        if isinstance(t, Variable):
            if t.name == name and not in_head_position:
                ok[0] = False
            return
        if isinstance(t, Application):
            head, args = _spine(t)
            if isinstance(head, Variable) and head.name == name:
                if any(name in free_vars(a) for a in args):
                    ok[0] = False
                lists.append(args)
                for a in args:
                    walk(a, False)
                return
            walk(t.functor, True)
            walk(t.argument, False)
            return
        if isinstance(t, Abstraction):
            if t.var.name != name:
                walk(t.body, False)
            return
        if isinstance(t, Atom):
            for a in t.args:
                walk(a, False)

    walk(body, False)
    if not ok[0]:
        return None
    distinct = []
    seen = set()
    for args in lists:
        key = tuple(canonical(a) for a in args)
        if key not in seen:
            seen.add(key)
            distinct.append(args)
    return distinct


def _abstraction_chain(names, body):
    for n in reversed(names):
        body = Abstraction(Variable(n), body)
    return body


def _apply_chain(head, args):
    for a in args:
        head = Application(head, a)
    return head


def _abstract_subterm_variants(h, j, positions, avoid):
    """All candidate lambda-abstractions of ``j`` out of ``h``.

    Yields (binder name, abstracted body): the all-occurrence form first,
    then each single occurrence when there are several.
    """
    v = fresh_name("v", avoid)
    yield v, replace(h, [j], [Variable(v)])
    if len(positions) > 1:
        for pos in positions:
            yield v, replace_at(h, pos, Variable(v))


def _case2_subterm_matches(h, g, occs):
    """Subterms J of h with lambda v.h(J:v) alpha-equal to g."""
    if not isinstance(g, Abstraction):
        return
    avoid = all_names(h) | all_names(g)
    for occ in occs:
        for v, body in _abstract_subterm_variants(h, occ.term, occ.positions, avoid):
            if alpha_eq(Abstraction(Variable(v), body), g):
                yield occ.term
                break


def _atom_occurrences(occs):
    # open occurrences (vars bound above in h) are allowed: the replacement
    # cases rely on intentional capture, and verification rejects leaks.
    return [occ for occ in occs if isinstance(occ.term, Atom)]


def _case3_candidates(h, g, occs):
    """F = lambda v1..vs. Jatom(X1..Xs : v1..vs) for g = lambda w.h(Jatom : w@X1..@Xs)."""
    if not isinstance(g, Abstraction):
        return
    w = g.var.name
    arg_lists = _var_arg_lists(g.body, w)
    if not arg_lists:
        return
    avoid = all_names(h) | all_names(g)
    for occ in _atom_occurrences(occs):
        jatom = occ.term
        for args in arg_lists:
            if not args or not all(_contains(jatom, x) for x in args):
                continue
            wf = fresh_name("w", avoid)
            inner = _apply_chain(Variable(wf), args)
            matched = False
            for cand in _outer_replace_variants(h, jatom, occ.positions, inner, wf):
                if alpha_eq(cand, g):
                    matched = True
                    break
            if not matched:
                continue
            binders = []
            taken = set(avoid)
            for i in range(len(args)):
                name = fresh_name("v%d" % (i + 1), taken)
                binders.append(name)
                taken.add(name)
            body = replace(jatom, args, [Variable(b) for b in binders])
            yield _abstraction_chain(binders, body)


def _outer_replace_variants(h, jatom, positions, inner, binder):
    yield Abstraction(Variable(binder), replace(h, [jatom], [inner]))
    if len(positions) > 1:
        for pos in positions:
            yield Abstraction(Variable(binder), replace_at(h, pos, inner))


def _match_binder_args(body, jatom, binders):
    """Propose which subterm of ``jatom`` each binder stands for.

    Walks ``body`` (from g) and ``jatom`` in lockstep; a binder variable in
    ``body`` may stand for any subterm on the atom side, consistently.  The
    caller re-checks the proposal by reconstruction, so this only has to be
    complete enough, not airtight.
    """
    binderset = set(binders)
    mapping: dict = {}

    def walk(b, j):
        if isinstance(b, Variable) and b.name in binderset:
            if b.name in mapping:
                prev = mapping[b.name]
                if prev == j:
                    return True
                return not free_vars(prev) and alpha_eq(prev, j)
            mapping[b.name] = j
            return True
        if isinstance(b, Variable):
            return isinstance(j, Variable) and j.name == b.name
        if type(b) is not type(j):
            return False
        if isinstance(b, Atom):
            return (
                b.predicate == j.predicate
                and len(b.args) == len(j.args)
                and all(walk(x, y) for x, y in zip(b.args, j.args))
            )
        if isinstance(b, Application):
            return walk(b.functor, j.functor) and walk(b.argument, j.argument)
        if isinstance(b, Abstraction):
            if b.var.name == j.var.name:
                return walk(b.body, j.body)
            return walk(substitute(b.body, b.var.name, Variable(j.var.name)), j.body)
        return b == j

    if not walk(body, jatom):
        return None
    if set(mapping) != binderset:
        return None
    return [mapping[b] for b in binders]


def _case2_mirror_candidates(h, g, occs):
    """F = lambda w.h(Jatom : w@X1..@Xs) for g = lambda v1..vs. Jatom(X1..Xs : v1..vs)."""
    binders, body = _unwrap_binders(g)
    if not binders:
        return
    avoid = all_names(h) | all_names(g)
    for occ in _atom_occurrences(occs):
        jatom = occ.term
        if not isinstance(body, Atom) or body.predicate != jatom.predicate:
            continue
        args = _match_binder_args(body, jatom, binders)
        if args is None:
            continue
        # reconstruction check: the proposal must rebuild g exactly
        fresh = []
        taken = set(avoid)
        for i in range(len(binders)):
            name = fresh_name("u%d" % (i + 1), taken)
            fresh.append(name)
            taken.add(name)
        rebuilt = _abstraction_chain(
            fresh, replace(jatom, args, [Variable(n) for n in fresh])
        )
        if not alpha_eq(rebuilt, g):
            continue
        wf = fresh_name("w", avoid)
        inner = _apply_chain(Variable(wf), args)
        for cand in _outer_replace_variants(h, jatom, occ.positions, inner, wf):
            yield cand


def inverse_r(h: Term, g: Term) -> InverseResult:
    """All verified F with ``g@F`` beta-equal to ``h``."""
    result = InverseResult(direction="right")
    seen: set = set()

    def consider(f, case):
        if verify_inverse(h, g, f, "right"):
            result.add(f, case, seen)

    if _identity_shaped(g):
        consider(h, "trivial")

    occs = subterms(h)

    # case 1: g = \v.v@J delegates to the left inverse against J
    if isinstance(g, Abstraction):
        body = g.body
        if (
            isinstance(body, Application)
            and body.functor == g.var
            and g.var.name not in free_vars(body.argument)
        ):
            for f, _ in inverse_l(h, body.argument).pairs():
                consider(f, "case1")

    # case 2: some subterm J of h satisfies g = \v.h(J:v), then F = J
    for j in _case2_subterm_matches(h, g, occs):
        consider(j, "case2")

    # case 3: g = \w.h(J(J1..Jm) : w@Jp@..@Jq), F abstracts those subterms
    for f in _case3_candidates(h, g, occs):
        consider(f, "case3")

    return result


def inverse_l(h: Term, g: Term) -> InverseResult:
    """All verified F with ``F@g`` beta-equal to ``h``."""
    result = InverseResult(direction="left")
    seen: set = set()

    def consider(f, case):
        if verify_inverse(h, g, f, "left"):
            result.add(f, case, seen)

    if alpha_eq(g, h):
        v = fresh_name("v", all_names(h))
        consider(Abstraction(Variable(v), Variable(v)), "trivial")

    occs = subterms(h)

    # case 1': g occurs in h, F abstracts it out
    if _contains(h, g):
        avoid = all_names(h) | all_names(g)
        positions = [
            p
            for occ in occs
            if (occ.term == g or (not free_vars(g) and alpha_eq(occ.term, g)))
            for p in occ.positions
        ]
        for v, body in _abstract_subterm_variants(h, g, positions, avoid):
            consider(Abstraction(Variable(v), body), "case1")

    # case 2': g abstracts subterms of an atom occurrence in h
    for f in _case2_mirror_candidates(h, g, occs):
        consider(f, "case2")

    # case 3': g = \v.v@J; F = \u.u@X with X a left inverse of h against J
    if isinstance(g, Abstraction):
        body = g.body
        if (
            isinstance(body, Application)
            and body.functor == g.var
            and g.var.name not in free_vars(body.argument)
        ):
            u = fresh_name("u", all_names(h) | all_names(g))
            for x, _ in inverse_l(h, body.argument).pairs():
                consider(Abstraction(Variable(u), Application(Variable(u), x)), "case3")

    return result
