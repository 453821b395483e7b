"""CCG categories, combinatory rules, and externally produced derivations.

Categories are atomic (S, NP, N, PP, CONJ, optionally tagged ``S[dcl]``) or
slash-combined; ``X/Y`` seeks Y to the right, ``X\\Y`` to the left.  Slash
notation is left-associative, so ``S\\NP/NP`` is ``(S\\NP)/NP``.

Semantic composition follows one rule: the term of the slash (functor)
category is applied to the other child's term, for forward and backward
application alike.  Harmonic composition is available behind a RuleSet flag
and is off by default.

External derivations arrive as s-expressions ``(fa CAT child child)`` /
``(ba ...)`` / ``(fc ...)`` / ``(bc ...)`` with leaves ``(leaf "WORD" CAT)``;
multi-token words use ``_``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import CategorySyntaxError, DerivationFormatError, LambdaLexError
from .terms import (
    Abstraction,
    Application,
    Variable,
    all_names,
    apply,
    fresh_name,
    normalize,
)

ATOMIC_NAMES = ("S", "NP", "N", "PP", "CONJ")


@dataclass(frozen=True, slots=True)
class Atomic:
    name: str
    feature: str | None = None

    def __str__(self):
        return self.name if self.feature is None else "%s[%s]" % (self.name, self.feature)


@dataclass(frozen=True, slots=True)
class Slash:
    result: object
    direction: str  # '/' or '\\'
    argument: object

    def __str__(self):
        arg = str(self.argument)
        if isinstance(self.argument, Slash):
            arg = "(%s)" % arg
        return "%s%s%s" % (self.result, self.direction, arg)


Category = (Atomic, Slash)

_CAT_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Z]+)(?:\[(?P<feature>[^\]]*)\])?|(?P<punct>[/\\()]))")


def parse_category(text: str):
    """Parse slash notation; left-associative, parentheses allowed."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _CAT_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise CategorySyntaxError(
                    "unexpected character %r in category %r" % (text[pos], text)
                )
            break
        if m.group("name"):
            if m.group("name") not in ATOMIC_NAMES:
                raise CategorySyntaxError(
                    "unknown atomic category %r in %r" % (m.group("name"), text)
                )
            tokens.append(("atom", Atomic(m.group("name"), m.group("feature"))))
        else:
            tokens.append((m.group("punct"), None))
        pos = m.end()
    tokens.append(("end", None))

    idx = [0]

    def peek():
        return tokens[idx[0]][0]

    def part():
        kind, value = tokens[idx[0]]
        idx[0] += 1
        if kind == "atom":
            return value
        if kind == "(":
            inner = cat()
            if peek() != ")":
                raise CategorySyntaxError("unclosed ( in category %r" % text)
            idx[0] += 1
            return inner
        raise CategorySyntaxError("malformed category %r" % text)

    def cat():
        left = part()
        while peek() in ("/", "\\"):
            direction = peek()
            idx[0] += 1
            left = Slash(left, direction, part())
        return left

    result = cat()
    if peek() != "end":
        raise CategorySyntaxError("trailing input in category %r" % text)
    return result


RULE_NAMES = ("lex", "fwd_app", "bwd_app", "fwd_comp", "bwd_comp")


@dataclass(frozen=True)
class RuleSet:
    """Which combinators the parser may use; applications are always on."""

    composition: bool = False


@dataclass
class DerivationNode:
    """A node of a syntactic (and optionally semantic) parse tree."""

    category: object
    rule: str
    children: tuple = ()
    word: str | None = None
    semantics: object = None
    entry: object = None  # lexicon entry backing a leaf, when chart-built
    start: int = 0
    end: int = 0
    weight: float = 0.0

    @property
    def is_leaf(self):
        return self.rule == "lex"

    def leaves(self):
        if self.is_leaf:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def __str__(self):
        if self.is_leaf:
            return '(leaf "%s" %s)' % (self.word, self.category)
        short = {"fwd_app": "fa", "bwd_app": "ba", "fwd_comp": "fc", "bwd_comp": "bc"}
        return "(%s %s %s)" % (
            short[self.rule],
            self.category,
            " ".join(str(c) for c in self.children),
        )


def leaf(word: str, category, semantics=None, entry=None, start=0):
    return DerivationNode(
        category=category,
        rule="lex",
        word=word,
        semantics=semantics,
        entry=entry,
        start=start,
        end=start + 1,
        weight=entry.weight if entry is not None else 0.0,
    )


def _b_combinator(f, g, x=None):
    """Composition semantics \\x. f@(g@x), normalized."""
    if x is None:
        x = fresh_name("x", all_names(f) | all_names(g))
    return normalize(
        Abstraction(Variable(x), Application(f, Application(g, Variable(x))))
    )


def _semantics_of(functor_sem, argument_sem):
    if functor_sem is None or argument_sem is None:
        return None
    try:
        return apply(functor_sem, argument_sem)
    except LambdaLexError:
        return None


def combine(left: DerivationNode, right: DerivationNode, rules: RuleSet) -> list:
    """All parents licensed by the enabled rules for two adjacent nodes."""
    if left.end != right.start:
        return []
    out = []

    def child(category, rule, semantics):
        out.append(
            DerivationNode(
                category=category,
                rule=rule,
                children=(left, right),
                semantics=semantics,
                start=left.start,
                end=right.end,
                weight=left.weight + right.weight,
            )
        )

    lc, rc = left.category, right.category
    # forward application: X/Y Y => X
    if isinstance(lc, Slash) and lc.direction == "/" and lc.argument == rc:
        child(lc.result, "fwd_app", _semantics_of(left.semantics, right.semantics))
    # backward application: Y X\Y => X  (the slash side is the functor)
    if isinstance(rc, Slash) and rc.direction == "\\" and rc.argument == lc:
        child(rc.result, "bwd_app", _semantics_of(right.semantics, left.semantics))
    if rules.composition:
        # forward harmonic: X/Y Y/Z => X/Z
        if (
            isinstance(lc, Slash)
            and lc.direction == "/"
            and isinstance(rc, Slash)
            and rc.direction == "/"
            and lc.argument == rc.result
        ):
            sem = None
            if left.semantics is not None and right.semantics is not None:
                try:
                    sem = _b_combinator(left.semantics, right.semantics)
                except LambdaLexError:
                    sem = None
            child(Slash(lc.result, "/", rc.argument), "fwd_comp", sem)
        # backward harmonic: Y\Z X\Y => X\Z
        if (
            isinstance(lc, Slash)
            and lc.direction == "\\"
            and isinstance(rc, Slash)
            and rc.direction == "\\"
            and rc.argument == lc.result
        ):
            sem = None
            if left.semantics is not None and right.semantics is not None:
                try:
                    sem = _b_combinator(right.semantics, left.semantics)
                except LambdaLexError:
                    sem = None
            child(Slash(rc.result, "\\", lc.argument), "bwd_comp", sem)
    return out


# ---------------------------------------------------------------------------
# External derivation format

_SHORT_RULES = {"fa": "fwd_app", "ba": "bwd_app", "fc": "fwd_comp", "bc": "bwd_comp"}


class _DerivationReader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise DerivationFormatError("%s (at offset %d)" % (message, self.pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error("expected %r" % ch)
        self.pos += 1

    def word(self):
        self.skip_ws()
        m = re.match(r"[^\s()\"]+", self.text[self.pos :])
        if not m:
            self.error("expected a word")
        self.pos += m.end()
        return m.group()

    def quoted(self):
        self.skip_ws()
        m = re.match(r'"([^"]*)"', self.text[self.pos :])
        if not m:
            self.error("expected a quoted word")
        self.pos += m.end()
        return m.group(1)

    def category_text(self):
        """Category = the longest run of non-space chars with balanced parens.

        Stops at whitespace or at a ``)`` that would unbalance the category,
        so ``(N\\N)/NP`` reads as one unit inside the node's parentheses.
        """
        self.skip_ws()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace() and depth == 0:
                break
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            self.pos += 1
        if self.pos == start:
            self.error("expected a category")
        return self.text[start : self.pos]

    def node(self, next_leaf):
        self.expect("(")
        rule = self.word()
        if rule == "leaf":
            word = self.quoted()
            category = parse_category(self.category_text())
            self.expect(")")
            index = next_leaf[0]
            next_leaf[0] += 1
            return DerivationNode(
                category=category,
                rule="lex",
                word=word.lower(),
                start=index,
                end=index + 1,
            )
        if rule not in _SHORT_RULES:
            self.error("unknown rule %r" % rule)
        category = parse_category(self.category_text())
        children = []
        while True:
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == "(":
                children.append(self.node(next_leaf))
            else:
                break
        self.expect(")")
        if len(children) != 2:
            self.error("rule %r needs exactly 2 children, got %d" % (rule, len(children)))
        left, right = children
        if left.end != right.start:
            raise DerivationFormatError(
                "span mismatch: %d..%d then %d..%d"
                % (left.start, left.end, right.start, right.end)
            )
        return DerivationNode(
            category=category,
            rule=_SHORT_RULES[rule],
            children=(left, right),
            start=left.start,
            end=right.end,
        )


def load_derivation(text: str) -> DerivationNode:
    """Read one derivation s-expression.  Semantics are left absent."""
    reader = _DerivationReader(text)
    tree = reader.node([0])
    reader.skip_ws()
    if reader.pos != len(reader.text):
        reader.error("trailing input after derivation")
    return tree
