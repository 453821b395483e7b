"""The learned dictionary and its generalization machinery.

A lexicon entry is the triple (word, category, semantics) plus a real weight,
one coordinate of the model's parameter vector.  Triples are unique (up to
alpha-equivalence of the semantics); re-adding an existing triple keeps the
old weight, so lexical generation behaves as set union.

Generalization borrows a same-category word's semantics and renames the
constant the source word is "involved in" (IDENTIFY) to the new word's stem
(REPLACE).  Words that stand for nothing in the gold form can receive the
trivial semantics ``\\x.x`` at a deliberately low weight.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ccg import parse_category
from .errors import CorpusFormatError
from .terms import (
    Abstraction,
    Application,
    Atom,
    Constant,
    Term,
    Variable,
    canonical,
    constant_names,
    parse_term,
    print_term,
)

DEFAULT_INITIAL_WEIGHT = 0.1
TRIVIAL_WEIGHT = 0.01

TRIVIAL_SEM = Abstraction(Variable("x"), Variable("x"))

ORIGINS = ("initial", "inverse", "generalized", "trivial")

_PUNCT = ".,!?;:'\""

# "est"/"er" stay attached so superlative constants keep their surface form
_SUFFIXES = ("ing", "ed", "s", "es")


def surface_form(word: str) -> str:
    """Lower-case with trailing punctuation stripped."""
    return word.lower().rstrip(_PUNCT)


def stem(word: str) -> str:
    """Lower-case, strip trailing punctuation, strip one known suffix."""
    w = surface_form(word)
    for suffix in _SUFFIXES:
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            return w[: -len(suffix)]
    return w


@dataclass(eq=False)
class LexiconEntry:
    word: str
    category: object
    semantics: Term
    weight: float
    origin: str = "initial"

    def key(self):
        return (self.word, str(self.category), canonical(self.semantics))

    def line(self):
        return "%s\t%s\t%s\t%r\t%s" % (
            self.word,
            self.category,
            print_term(self.semantics),
            self.weight,
            self.origin,
        )


class Lexicon:
    """An ordered set of entries with word and category indexes."""

    def __init__(self, entries=None):
        self.entries: list = []
        self.version = 0  # bumped on every successful add
        self._keys: dict = {}
        self._by_word: dict = {}
        self._by_cat: dict = {}
        for e in entries or []:
            self.add_entry(e)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, key):
        return key in self._keys

    def add_entry(self, entry: LexiconEntry):
        """Add unless the triple exists; returns the stored entry."""
        entry.word = entry.word.lower()
        key = entry.key()
        if key in self._keys:
            return self._keys[key]
        self._keys[key] = entry
        self.entries.append(entry)
        self.version += 1
        self._by_word.setdefault(entry.word, []).append(entry)
        self._by_cat.setdefault(str(entry.category), []).append(entry)
        return entry

    def add(self, word, category, semantics, weight, origin):
        entry = LexiconEntry(word, category, semantics, weight, origin)
        before = len(self.entries)
        stored = self.add_entry(entry)
        return stored, len(self.entries) > before

    def for_word(self, word):
        return list(self._by_word.get(word.lower(), ()))

    def for_category(self, category):
        return list(self._by_cat.get(str(category), ()))

    def has_word(self, word):
        return word.lower() in self._by_word

    def has_semantics_for(self, word, category):
        cat = str(category)
        return any(str(e.category) == cat for e in self.for_word(word))

    def copy(self):
        out = Lexicon()
        for e in self.entries:
            out.add_entry(
                LexiconEntry(e.word, e.category, e.semantics, e.weight, e.origin)
            )
        return out

    def save(self, path, header=None):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps(header))

    def dumps(self, header=None):
        lines = []
        if header is not None:
            lines.append("# %s" % header)
        lines.extend(e.line() for e in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lex = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise CorpusFormatError(
                    "lexicon line needs 5 tab-separated fields", line=lineno
                )
            word, cat, term, weight, origin = parts
            if origin not in ORIGINS:
                raise CorpusFormatError("unknown origin %r" % origin, line=lineno)
            lex.add(
                word, parse_category(cat), parse_term(term), float(weight), origin
            )
        return lex

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


# ---------------------------------------------------------------------------
# IDENTIFY / REPLACE / GENERALIZE

def identify(word: str, semantics: Term) -> list:
    """Positions of constants/predicates in ``semantics`` named like ``word``,
    comparing both the surface form and the stem.

    Each position is ``(path, kind)`` with kind "const" or "pred".
    """
    targets = {stem(word), surface_form(word)}
    found = []

    def walk(t, path):
        if isinstance(t, Constant) and t.name.lower() in targets:
            found.append((path, "const"))
        elif isinstance(t, Atom):
            if t.predicate.lower() in targets:
                found.append((path, "pred"))
            for i, a in enumerate(t.args):
                walk(a, path + (i,))
        elif isinstance(t, Abstraction):
            walk(t.body, path + (0,))
        elif isinstance(t, Application):
            walk(t.functor, path + (0,))
            walk(t.argument, path + (1,))

    walk(semantics, ())
    return found


def rename_at(semantics: Term, positions, new_name: str) -> Term:
    """REPLACE: rewrite the names at identified positions to ``new_name``."""
    targets = {(path, kind) for path, kind in positions}

    def walk(t, path):
        if isinstance(t, Constant):
            return Constant(new_name) if (path, "const") in targets else t
        if isinstance(t, Atom):
            pred = new_name if (path, "pred") in targets else t.predicate
            return Atom(
                pred, tuple(walk(a, path + (i,)) for i, a in enumerate(t.args))
            )
        if isinstance(t, Abstraction):
            return Abstraction(t.var, walk(t.body, path + (0,)))
        if isinstance(t, Application):
            return Application(
                walk(t.functor, path + (0,)), walk(t.argument, path + (1,))
            )
        return t

    return walk(semantics, ())


def generalize_d(lex: Lexicon, alpha, weight=DEFAULT_INITIAL_WEIGHT) -> Lexicon:
    """On-demand generalization for ``alpha = (word, category)``.

    Every same-category entry whose own word is involved in its semantics
    donates a renamed copy.  Existing entries are never changed.
    """
    word, category = alpha
    cat_str = str(category)
    # the renamed constant carries the word's surface form; suffix-stripped
    # stems only steer matching, never the written name
    new_name = surface_form(word)
    for source in list(lex.for_category(cat_str)):
        positions = identify(source.word, source.semantics)
        if not positions:
            continue
        sem = rename_at(source.semantics, positions, new_name)
        lex.add(word, category, sem, weight, "generalized")
    return lex


def generalize_all(lex: Lexicon) -> Lexicon:
    """GENERALIZE(L, L): generalize every word against every same-category entry.

    Returns a new lexicon; idempotent as a set of triples.
    """
    out = lex.copy()
    pairs = []
    seen = set()
    for e in lex.entries:
        key = (e.word, str(e.category))
        if key not in seen:
            seen.add(key)
            pairs.append((e.word, e.category))
    for word, category in pairs:
        generalize_d(out, (word, category))
    return out


def assign_trivial(tokens, gold: Term, lex: Lexicon, weight=TRIVIAL_WEIGHT) -> Lexicon:
    """Give ``\\x.x`` to tokens that stand for nothing in the gold term.

    ``tokens`` are (word, category) pairs from the current derivation; a
    token is skipped when its stem names a constant/predicate of ``gold`` or
    when the lexicon already has semantics for that word and category.
    """
    gold_names = {n.lower() for n in constant_names(gold)}
    for word, category in tokens:
        if stem(word) in gold_names or surface_form(word) in gold_names:
            continue
        if lex.has_semantics_for(word, category):
            continue
        lex.add(word, category, TRIVIAL_SEM, weight, "trivial")
    return lex


def merge_multiwords(tokens, lex: Lexicon, max_span: int = 3) -> list:
    """Join adjacent tokens that form a known multiword entry (``give me`` ->
    ``give_me``), longest match first."""
    out = []
    i = 0
    lowered = [t.lower() for t in tokens]
    while i < len(lowered):
        merged = None
        for span in range(min(max_span, len(lowered) - i), 1, -1):
            candidate = "_".join(lowered[i : i + span])
            if lex.has_word(candidate):
                merged = candidate
                i += span
                break
        if merged is None:
            merged = lowered[i]
            i += 1
        out.append(merged)
    return out
