"""Lambda-calculus terms and the operations the rest of the system builds on.

Terms are immutable trees with five node kinds: variables, constants,
abstractions, applications and atomic formulas.  Identifiers that are not
bound by an enclosing ``\\x.`` parse as constants; corpus variables such as
``A`` in ``answer(A, ...)`` are therefore ordinary upper-case constants, never
lambda-bound.

Concrete syntax: ``\\x.`` for abstraction, ``@`` for explicit application
(left-associative), ``f(a,b)`` for atomic formulas.  ``print -> parse``
round-trips up to alpha-equivalence.

All functions here are pure; terms can be shared freely across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    NotApplicableError,
    ReductionLimitError,
    TermSyntaxError,
    UnboundVariableError,
)

DEFAULT_STEP_BOUND = 10_000


@dataclass(frozen=True, slots=True)
class Term:
    def __str__(self):
        return print_term(self)


# _canon caches the term's alpha-normal printed form; it never takes part in
# equality or hashing and is filled in lazily by canonical().

@dataclass(frozen=True, slots=True)
class Variable(Term):
    name: str
    ty: object = field(default=None, compare=False, repr=False)
    _canon: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Constant(Term):
    name: str
    ty: object = field(default=None, compare=False, repr=False)
    _canon: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Abstraction(Term):
    var: Variable
    body: Term
    ty: object = field(default=None, compare=False, repr=False)
    _canon: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Application(Term):
    functor: Term
    argument: Term
    ty: object = field(default=None, compare=False, repr=False)
    _canon: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Atom(Term):
    predicate: str
    args: tuple
    ty: object = field(default=None, compare=False, repr=False)
    _canon: object = field(default=None, compare=False, repr=False)


def lam(name: str, body: Term) -> Abstraction:
    """Shorthand constructor: ``lam('x', body)``."""
    return Abstraction(Variable(name), body)


# ---------------------------------------------------------------------------
# Printing

def print_term(t: Term) -> str:
    if isinstance(t, (Variable, Constant)):
        return t.name
    if isinstance(t, Abstraction):
        return "\\%s.%s" % (t.var.name, print_term(t.body))
    if isinstance(t, Application):
        f = print_term(t.functor)
        if isinstance(t.functor, Abstraction):
            f = "(%s)" % f
        a = print_term(t.argument)
        if isinstance(t.argument, (Abstraction, Application)):
            a = "(%s)" % a
        return "%s@%s" % (f, a)
    if isinstance(t, Atom):
        return "%s(%s)" % (t.predicate, ",".join(print_term(a) for a in t.args))
    raise TypeError("not a term: %r" % (t,))


def canonical(t: Term) -> str:
    """Alpha-normal printed form: bound variables renamed to #0, #1, ...

    Two terms are alpha-equivalent iff their canonical strings are equal;
    ``#`` cannot appear in a parsed identifier, so renamed binders never
    collide with free names.  The result is cached on the (immutable) term.
    """
    cached = t._canon
    if cached is not None:
        return cached
    out = []

    def walk(t, env):
        if not env and t._canon is not None:
            out.append(t._canon)
            return
        if isinstance(t, Variable):
            out.append(env.get(t.name, t.name))
        elif isinstance(t, Constant):
            out.append(t.name)
        elif isinstance(t, Abstraction):
            fresh = "#%d" % len(env)
            out.append("\\%s." % fresh)
            walk(t.body, {**env, t.var.name: fresh})
        elif isinstance(t, Application):
            if isinstance(t.functor, Abstraction):
                out.append("(")
                walk(t.functor, env)
                out.append(")")
            else:
                walk(t.functor, env)
            out.append("@")
            if isinstance(t.argument, (Abstraction, Application)):
                out.append("(")
                walk(t.argument, env)
                out.append(")")
            else:
                walk(t.argument, env)
        elif isinstance(t, Atom):
            out.append(t.predicate)
            out.append("(")
            for i, a in enumerate(t.args):
                if i:
                    out.append(",")
                walk(a, env)
            out.append(")")
        else:
            raise TypeError("not a term: %r" % (t,))

    walk(t, {})
    result = "".join(out)
    object.__setattr__(t, "_canon", result)
    return result


def alpha_eq(a: Term, b: Term) -> bool:
    """True iff the terms are identical up to renaming of bound variables."""
    return canonical(a) == canonical(b)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<ident>[A-Za-z_][A-Za-z0-9_'-]*|-?\d+(?:\.\d+)?|\{[^{}]*\})"
    r"|(?P<punct>[\\.@(),])"
    r")"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise TermSyntaxError("unexpected character %r" % text[pos], pos)
            break
        if m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append((m.group("punct"), m.group("punct"), m.start("punct")))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _TermParser:
    def __init__(self, text, sig=None, strict=False):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.strict = strict

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise TermSyntaxError("expected %r, found %r" % (kind, tok[1]), tok[2])
        return tok

    def parse(self):
        t = self.term(frozenset())
        tok = self.peek()
        if tok[0] != "eof":
            raise TermSyntaxError("trailing input %r" % tok[1], tok[2])
        return t

    def term(self, bound):
        if self.peek()[0] == "\\":
            self.next()
            name = self.expect("ident")[1]
            self.expect(".")
            body = self.term(bound | {name})
            return Abstraction(Variable(name), body)
        return self.appchain(bound)

    def appchain(self, bound):
        t = self.primary(bound)
        while self.peek()[0] == "@":
            self.next()
            t = Application(t, self.primary(bound))
        return t

    def primary(self, bound):
        tok = self.next()
        if tok[0] == "(":
            t = self.term(bound)
            self.expect(")")
            return t
        if tok[0] == "\\":
            self.i -= 1
            return self.term(bound)
        if tok[0] != "ident":
            raise TermSyntaxError("unexpected %r" % tok[1], tok[2])
        name = tok[1]
        if self.peek()[0] == "(":
            self.next()
            args = [self.term(bound)]
            while self.peek()[0] == ",":
                self.next()
                args.append(self.term(bound))
            self.expect(")")
            if name in bound:
                # a bound identifier applied to arguments is sugar for @
                t: Term = Variable(name)
                for a in args:
                    t = Application(t, a)
                return t
            return Atom(name, tuple(args))
        if name in bound:
            return Variable(name)
        return self.leaf_constant(name, tok[2])

    def leaf_constant(self, name, pos):
        if self.strict and not name[0].isupper():
            if self.sig is None or not self.sig.declares(name):
                raise UnboundVariableError(
                    "%r is neither bound nor a declared constant (position %d)"
                    % (name, pos)
                )
        ty = self.sig.lookup(name) if self.sig is not None else None
        return Constant(name, ty=ty)


def parse_term(text: str, sig=None, strict: bool = False) -> Term:
    """Parse concrete term syntax.

    ``sig`` optionally supplies types for constants.  With ``strict=True``,
    a lower-case identifier that is neither lambda-bound nor declared in the
    signature raises UnboundVariableError (upper-case initials are always
    accepted as corpus constants).
    """
    return _TermParser(text, sig=sig, strict=strict).parse()


# ---------------------------------------------------------------------------
# Free variables and substitution

def free_vars(t: Term) -> frozenset:
    if isinstance(t, Variable):
        return frozenset((t.name,))
    if isinstance(t, Constant):
        return frozenset()
    if isinstance(t, Abstraction):
        return free_vars(t.body) - {t.var.name}
    if isinstance(t, Application):
        return free_vars(t.functor) | free_vars(t.argument)
    if isinstance(t, Atom):
        out = frozenset()
        for a in t.args:
            out |= free_vars(a)
        return out
    raise TypeError("not a term: %r" % (t,))


def all_names(t: Term) -> frozenset:
    """Every variable or constant name occurring anywhere in ``t``."""
    if isinstance(t, (Variable, Constant)):
        return frozenset((t.name,))
    if isinstance(t, Abstraction):
        return all_names(t.body) | {t.var.name}
    if isinstance(t, Application):
        return all_names(t.functor) | all_names(t.argument)
    if isinstance(t, Atom):
        out = frozenset()
        for a in t.args:
            out |= all_names(a)
        return out
    raise TypeError("not a term: %r" % (t,))


def fresh_name(base: str, avoid) -> str:
    """Deterministic fresh name: the base itself, then stem1, stem2, ..."""
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while "%s%d" % (stem, i) in avoid:
        i += 1
    return "%s%d" % (stem, i)


def substitute(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding substitution of ``value`` for free ``name`` in ``t``."""
    if isinstance(t, Variable):
        return value if t.name == name else t
    if isinstance(t, Constant):
        return t
    if isinstance(t, Application):
        return Application(
            substitute(t.functor, name, value), substitute(t.argument, name, value)
        )
    if isinstance(t, Atom):
        return Atom(t.predicate, tuple(substitute(a, name, value) for a in t.args))
    if isinstance(t, Abstraction):
        if t.var.name == name:
            return t
        if name not in free_vars(t.body):
            return t
        if t.var.name in free_vars(value):
            avoid = free_vars(value) | all_names(t.body) | {name}
            renamed = fresh_name(t.var.name, avoid)
            body = substitute(t.body, t.var.name, Variable(renamed))
            return Abstraction(
                Variable(renamed), substitute(body, name, value)
            )
        return Abstraction(t.var, substitute(t.body, name, value))
    raise TypeError("not a term: %r" % (t,))


# ---------------------------------------------------------------------------
# Beta-reduction

def _step_normal(t):
    """One leftmost-outermost beta step, or None if t is in normal form."""
    if isinstance(t, Application):
        if isinstance(t.functor, Abstraction):
            return substitute(t.functor.body, t.functor.var.name, t.argument)
        r = _step_normal(t.functor)
        if r is not None:
            return Application(r, t.argument)
        r = _step_normal(t.argument)
        if r is not None:
            return Application(t.functor, r)
        return None
    if isinstance(t, Abstraction):
        r = _step_normal(t.body)
        return None if r is None else Abstraction(t.var, r)
    if isinstance(t, Atom):
        for i, a in enumerate(t.args):
            r = _step_normal(a)
            if r is not None:
                args = list(t.args)
                args[i] = r
                return Atom(t.predicate, tuple(args))
        return None
    return None


def _step_innermost(t):
    """One leftmost-innermost beta step, or None if t is in normal form."""
    if isinstance(t, Application):
        r = _step_innermost(t.functor)
        if r is not None:
            return Application(r, t.argument)
        r = _step_innermost(t.argument)
        if r is not None:
            return Application(t.functor, r)
        if isinstance(t.functor, Abstraction):
            return substitute(t.functor.body, t.functor.var.name, t.argument)
        return None
    if isinstance(t, Abstraction):
        r = _step_innermost(t.body)
        return None if r is None else Abstraction(t.var, r)
    if isinstance(t, Atom):
        for i, a in enumerate(t.args):
            r = _step_innermost(a)
            if r is not None:
                args = list(t.args)
                args[i] = r
                return Atom(t.predicate, tuple(args))
        return None
    return None


def normalize(t: Term, max_steps: int = DEFAULT_STEP_BOUND, strategy: str = "normal") -> Term:
    """Beta-normal form, or ReductionLimitError after ``max_steps`` steps."""
    step = _step_normal if strategy == "normal" else _step_innermost
    for _ in range(max_steps):
        r = step(t)
        if r is None:
            return t
        t = r
    raise ReductionLimitError(
        "no normal form within %d steps: %s" % (max_steps, print_term(t)[:200])
    )


def apply(f: Term, g: Term, sig=None, max_steps: int = DEFAULT_STEP_BOUND) -> Term:
    """Beta-normal form of ``f@g``.

    Raises NotApplicableError when ``f`` can never consume an argument
    (a constant or an atomic formula), TypeConflictError when a signature is
    supplied and the application does not type-check, and
    ReductionLimitError past the step bound.
    """
    if isinstance(f, (Constant, Atom)):
        raise NotApplicableError("cannot apply %s to an argument" % print_term(f))
    if sig is not None:
        from .typesys import infer_type  # local import, avoids a cycle

        infer_type(Application(f, g), sig)
    return normalize(Application(f, g), max_steps=max_steps)


# ---------------------------------------------------------------------------
# Subterm enumeration and the replacement operator

@dataclass
class SubtermOccurrence:
    term: Term
    positions: list  # paths; each path is a tuple of child indices


def _children(t):
    if isinstance(t, Abstraction):
        return (t.body,)
    if isinstance(t, Application):
        return (t.functor, t.argument)
    if isinstance(t, Atom):
        return t.args
    return ()


def subterm_at(t: Term, path: tuple) -> Term:
    for i in path:
        t = _children(t)[i]
    return t


def replace_at(t: Term, path: tuple, value: Term) -> Term:
    """Rebuild ``t`` with the node at ``path`` replaced by ``value``."""
    if not path:
        return value
    i, rest = path[0], path[1:]
    kids = list(_children(t))
    kids[i] = replace_at(kids[i], rest, value)
    if isinstance(t, Abstraction):
        return Abstraction(t.var, kids[0])
    if isinstance(t, Application):
        return Application(kids[0], kids[1])
    if isinstance(t, Atom):
        return Atom(t.predicate, tuple(kids))
    raise TypeError("no child at %r in %r" % (path, t))


def subterms(t: Term) -> list:
    """All subterms in leftmost-outermost (preorder) order.

    Structurally identical occurrences are grouped: each list element pairs
    the subterm with every path at which it occurs.  The root is included;
    atom predicate names are not subterms.
    """
    order: dict = {}

    def walk(node, path):
        occ = order.get(node)
        if occ is None:
            order[node] = SubtermOccurrence(node, [path])
        else:
            occ.positions.append(path)
        for i, child in enumerate(_children(node)):
            walk(child, path + (i,))

    walk(t, ())
    return list(order.values())


def replace(h: Term, a_list, b_list) -> Term:
    """The replacement operator: each appearance of a_i in h becomes b_i.

    Replacement is simultaneous (matches are judged against the original
    pairs only, and replaced nodes are not re-visited).  Closed patterns
    match up to alpha-equivalence; patterns with free variables match
    literally, so intentional capture under binders is possible - the inverse
    operators depend on that.
    """
    if len(a_list) != len(b_list):
        raise ValueError("replacement lists differ in length")
    if not a_list:
        return h
    pairs = []
    for a, b in zip(a_list, b_list):
        closed = not free_vars(a)
        pairs.append((a, b, canonical(a) if closed else None))

    def walk(node):
        for a, b, acanon in pairs:
            if acanon is not None:
                if canonical(node) == acanon:
                    return b
            elif node == a:
                return b
        if isinstance(node, Abstraction):
            return Abstraction(node.var, walk(node.body))
        if isinstance(node, Application):
            return Application(walk(node.functor), walk(node.argument))
        if isinstance(node, Atom):
            return Atom(node.predicate, tuple(walk(a) for a in node.args))
        return node

    return walk(h)


def has_stuck_application(t: Term) -> bool:
    """True when some application can never reduce (atom or constant head).

    Meaning-language terms never keep ``@`` in normal form: a formula applied
    to an argument is semantic garbage, and compositions producing one are
    rejected by the chart and the learner.
    """
    if isinstance(t, Application):
        head = t.functor
        while isinstance(head, Application):
            head = head.functor
        if isinstance(head, (Atom, Constant)):
            return True
        return has_stuck_application(t.functor) or has_stuck_application(t.argument)
    if isinstance(t, Abstraction):
        return has_stuck_application(t.body)
    if isinstance(t, Atom):
        return any(has_stuck_application(a) for a in t.args)
    return False


def constant_names(t: Term) -> frozenset:
    """Constant and predicate names occurring in ``t``."""
    if isinstance(t, Constant):
        return frozenset((t.name,))
    if isinstance(t, Variable):
        return frozenset()
    if isinstance(t, Atom):
        out = frozenset((t.predicate,))
        for a in t.args:
            out |= constant_names(a)
        return out
    out = frozenset()
    for c in _children(t):
        out |= constant_names(c)
    return out
