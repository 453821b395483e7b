"""Simple types for terms: base types ``e``/``t``/``i``, function types, and
principal-type inference by unification.

The formal languages we target never spell out types, so constants default to
fresh type variables and atomic formulas to ``... -> t``.  A signature file
(``name <TAB> type`` per line) pins down whatever the corpus author cares
about; a ``*`` type acts as a dynamic wildcard that unifies with anything.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TermSyntaxError, TypeConflictError
from .terms import Abstraction, Application, Atom, Constant, Term, Variable, print_term

BASE_TYPES = ("e", "t", "i")


@dataclass(frozen=True, slots=True)
class BaseType:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class FnType:
    arg: object
    result: object

    def __str__(self):
        a = str(self.arg)
        if isinstance(self.arg, FnType):
            a = "(%s)" % a
        return "%s->%s" % (a, self.result)


@dataclass(frozen=True, slots=True)
class TypeVar:
    index: int

    def __str__(self):
        # a, b, ..., z, a1, b1, ...
        letter = chr(ord("a") + self.index % 26)
        round_ = self.index // 26
        return letter if round_ == 0 else "%s%d" % (letter, round_)


@dataclass(frozen=True, slots=True)
class AnyType:
    """Dynamic wildcard; unifies with every type."""

    def __str__(self):
        return "*"


ENTITY = BaseType("e")
TRUTH = BaseType("t")
NUMERIC = BaseType("i")
ANY = AnyType()


def parse_type(text: str):
    """``e``, ``t``, ``i``, ``*`` and right-associative ``->`` arrows."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def atom():
        nonlocal pos
        skip_ws()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            t = arrow()
            skip_ws()
            if pos >= len(text) or text[pos] != ")":
                raise TermSyntaxError("unclosed ( in type", pos)
            pos += 1
            return t
        if pos < len(text) and text[pos] == "*":
            pos += 1
            return ANY
        for name in BASE_TYPES:
            if text.startswith(name, pos):
                pos += len(name)
                return BaseType(name)
        raise TermSyntaxError("expected a type", pos)

    def arrow():
        nonlocal pos
        left = atom()
        skip_ws()
        if text.startswith("->", pos):
            pos += 2
            return FnType(left, arrow())
        return left

    t = arrow()
    skip_ws()
    if pos != len(text):
        raise TermSyntaxError("trailing input in type", pos)
    return t


class Signature:
    """Maps constant and predicate names to types.

    ``default`` is used for unlisted names; None means "invent a fresh type
    variable", which keeps inference principal.
    """

    def __init__(self, types=None, default=None):
        self.types = dict(types or {})
        self.default = default

    def declares(self, name):
        return name in self.types

    def lookup(self, name):
        return self.types.get(name, self.default)

    @classmethod
    def from_text(cls, text):
        types = {}
        default = None
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise TermSyntaxError(
                    "signature line %d: expected 'name<TAB>type'" % lineno
                )
            name, ty = parts
            if name == "*":
                default = parse_type(ty)
            else:
                types[name] = parse_type(ty)
        return cls(types, default)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def _resolve(ty, subst):
    while isinstance(ty, TypeVar) and ty in subst:
        ty = subst[ty]
    return ty


def _occurs(var, ty, subst):
    ty = _resolve(ty, subst)
    if ty == var:
        return True
    if isinstance(ty, FnType):
        return _occurs(var, ty.arg, subst) or _occurs(var, ty.result, subst)
    return False


def _unify(a, b, subst, where):
    a = _resolve(a, subst)
    b = _resolve(b, subst)
    if isinstance(a, AnyType) or isinstance(b, AnyType):
        return
    if a == b:
        return
    if isinstance(a, TypeVar):
        if _occurs(a, b, subst):
            raise TypeConflictError("recursive type %s = %s" % (a, b), where)
        subst[a] = b
        return
    if isinstance(b, TypeVar):
        _unify(b, a, subst, where)
        return
    if isinstance(a, FnType) and isinstance(b, FnType):
        _unify(a.arg, b.arg, subst, where)
        _unify(a.result, b.result, subst, where)
        return
    raise TypeConflictError("cannot unify %s with %s" % (a, b), where)


def _walk(ty, subst):
    ty = _resolve(ty, subst)
    if isinstance(ty, FnType):
        return FnType(_walk(ty.arg, subst), _walk(ty.result, subst))
    return ty


def infer_type(t: Term, sig: Signature | None = None):
    """Principal type of ``t`` under ``sig`` (fresh variables when absent).

    Raises TypeConflictError naming the offending subterm.
    """
    sig = sig or Signature()
    dynamic = isinstance(sig.default, AnyType)
    subst: dict = {}
    counter = [0]
    consts: dict = {}

    def fresh():
        counter[0] += 1
        return TypeVar(counter[0] - 1)

    def const_type(name):
        declared = sig.lookup(name)
        if declared is not None:
            return declared
        if name not in consts:
            consts[name] = fresh()
        return consts[name]

    def infer(node, env):
        if isinstance(node, Variable):
            if node.name not in env:
                # free variable of an open term
                if node.name not in consts:
                    consts[node.name] = fresh()
                return consts[node.name]
            return env[node.name]
        if isinstance(node, Constant):
            return const_type(node.name)
        if isinstance(node, Abstraction):
            a = ANY if dynamic else fresh()
            r = infer(node.body, {**env, node.var.name: a})
            return FnType(a, r)
        if isinstance(node, Application):
            tf = infer(node.functor, env)
            ta = infer(node.argument, env)
            r = fresh()
            _unify(tf, FnType(ta, r), subst, print_term(node))
            return r
        if isinstance(node, Atom):
            tp = sig.lookup(node.predicate)
            if tp is None:
                tp = TRUTH
                for _ in node.args:
                    tp = FnType(fresh(), tp)
                # reuse one invented type per predicate name
                tp = consts.setdefault("()" + node.predicate, tp)
            for a in node.args:
                ta = infer(a, env)
                tp_res = _resolve(tp, subst)
                if isinstance(tp_res, AnyType):
                    tp = ANY
                    continue
                if not isinstance(tp_res, FnType):
                    v1, v2 = fresh(), fresh()
                    _unify(tp_res, FnType(v1, v2), subst, print_term(node))
                    tp_res = FnType(v1, v2)
                _unify(tp_res.arg, ta, subst, print_term(node))
                tp = tp_res.result
            final = _resolve(tp, subst)
            if not isinstance(final, AnyType):
                _unify(final, TRUTH, subst, print_term(node))
            return TRUTH
        raise TypeError("not a term: %r" % (node,))

    result = _walk(infer(t, {}), subst)
    return _canonical_vars(result)


def _canonical_vars(ty):
    """Renumber the type variables that survive inference as a, b, c, ..."""
    mapping: dict = {}

    def walk(ty):
        if isinstance(ty, TypeVar):
            if ty not in mapping:
                mapping[ty] = TypeVar(len(mapping))
            return mapping[ty]
        if isinstance(ty, FnType):
            return FnType(walk(ty.arg), walk(ty.result))
        return ty

    return walk(ty)
