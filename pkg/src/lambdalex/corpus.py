"""Corpus ingestion for the two supported dialects.

File format: UTF-8, blocks separated by blank lines.  Each block is a
sentence line, a semantic-representation line, and optionally a third line
``deriv: <s-expression>`` attaching an externally produced derivation.
GEOQUERY-style SRs are Prolog-like functor terms; CLANG-style SRs are
s-expressions.  Both load into the same term language.

Per-block errors are logged with their line numbers and loading continues.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace as dc_replace
from importlib import resources

from .ccg import DerivationNode, load_derivation
from .errors import CorpusFormatError, LambdaLexError
from .terms import Application, Atom, Constant, Term, parse_term

log = logging.getLogger(__name__)

DIALECTS = ("geo", "clang")


@dataclass
class CorpusExample:
    id: int
    sentence: list
    gold: Term
    dialect: str
    derivation: DerivationNode | None = None
    raw_sentence: str = ""


# ---------------------------------------------------------------------------
# CLANG s-expressions <-> terms

_SEXP_TOKEN = re.compile(r"\s*(?:(?P<open>\()|(?P<close>\))|(?P<str>\"[^\"]*\")|(?P<atom>[^\s()\"]+))")


def _sexp_read(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if not m:
            break
        if m.group("open"):
            tokens.append("(")
        elif m.group("close"):
            tokens.append(")")
        elif m.group("str") is not None:
            tokens.append(("atom", m.group("str")[1:-1]))
        else:
            tokens.append(("atom", m.group("atom")))
        pos = m.end()
    idx = [0]

    def node():
        if idx[0] >= len(tokens):
            raise CorpusFormatError("unexpected end of s-expression")
        tok = tokens[idx[0]]
        idx[0] += 1
        if tok == "(":
            items = []
            while idx[0] < len(tokens) and tokens[idx[0]] != ")":
                items.append(node())
            if idx[0] >= len(tokens):
                raise CorpusFormatError("unclosed ( in s-expression")
            idx[0] += 1
            return items
        if tok == ")":
            raise CorpusFormatError("unexpected ) in s-expression")
        return tok[1]

    out = node()
    if idx[0] != len(tokens):
        raise CorpusFormatError("trailing input after s-expression")
    return out


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_'-]*$")


def _sexp_to_term(node) -> Term:
    if isinstance(node, str):
        return Constant(node)
    if not node:
        raise CorpusFormatError("empty () in CLANG expression")
    head, rest = node[0], node[1:]
    if isinstance(head, str) and _IDENT.match(head):
        return Atom(head, tuple(_sexp_to_term(a) for a in rest))
    # headless block: left-associated application chain
    term = _sexp_to_term(head)
    for item in rest:
        term = Application(term, _sexp_to_term(item))
    return term


def clang_to_term(text: str) -> Term:
    """Read one CLANG s-expression into a term."""
    return _sexp_to_term(_sexp_read(text))


def term_to_clang(t: Term) -> str:
    """Print a term back in CLANG s-expression syntax."""
    if isinstance(t, Constant):
        return t.name
    if isinstance(t, Atom):
        parts = [t.predicate] + [term_to_clang(a) for a in t.args]
        return "(%s)" % " ".join(parts)
    if isinstance(t, Application):
        spine = []
        while isinstance(t, Application):
            spine.append(t.argument)
            t = t.functor
        spine.append(t)
        spine.reverse()
        return "(%s)" % " ".join(term_to_clang(x) for x in spine)
    raise CorpusFormatError("term has no CLANG syntax: %s" % t)


# ---------------------------------------------------------------------------
# Loading

def _merge_tokens_for_derivation(tokens, derivation):
    """Fuse sentence tokens so they line up with the derivation's leaves.

    A leaf word like ``give_me`` consumes as many raw tokens as it has
    underscore-joined parts.
    """
    merged = []
    i = 0
    for lf in derivation.leaves():
        parts = lf.word.split("_")
        take = len(parts)
        candidate = "_".join(t.lower() for t in tokens[i : i + take])
        if candidate == lf.word:
            merged.append(candidate)
            i += take
            continue
        if tokens[i : i + 1] and tokens[i].lower() == lf.word:
            merged.append(lf.word)
            i += 1
            continue
        raise CorpusFormatError(
            "derivation leaf %r does not match sentence tokens %r"
            % (lf.word, tokens[i : i + take])
        )
    if i != len(tokens):
        raise CorpusFormatError(
            "derivation covers %d tokens but the sentence has %d" % (i, len(tokens))
        )
    return merged


def _parse_gold(text, dialect):
    if dialect == "clang":
        return clang_to_term(text)
    return parse_term(text)


def load_corpus_text(text: str, dialect: str = "geo"):
    """Parse corpus text; bad blocks are logged and skipped."""
    if dialect not in DIALECTS:
        raise CorpusFormatError("unknown dialect %r" % dialect)
    examples = []
    block: list = []

    def flush(end_line):
        if not block:
            return
        start_line = end_line - len(block)
        try:
            examples.append(_read_block(block, start_line, dialect, len(examples) + 1))
        except (CorpusFormatError, LambdaLexError) as exc:
            log.warning("skipping corpus block at line %d: %s", start_line, exc)
        block.clear()

    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            flush(lineno)
        elif not stripped.startswith("#"):
            block.append(stripped)
    flush(lineno + 1)
    return examples


def _read_block(block, start_line, dialect, example_id):
    if len(block) < 2 or len(block) > 3:
        raise CorpusFormatError(
            "block needs sentence, SR and optional deriv lines", line=start_line
        )
    sentence_line, gold_line = block[0], block[1]
    derivation = None
    if len(block) == 3:
        if not block[2].startswith("deriv:"):
            raise CorpusFormatError(
                "third block line must start with 'deriv:'", line=start_line + 2
            )
        derivation = load_derivation(block[2][len("deriv:"):].strip())
    try:
        gold = _parse_gold(gold_line, dialect)
    except LambdaLexError as exc:
        raise CorpusFormatError(str(exc), line=start_line + 1)
    tokens = [t.lower() for t in sentence_line.split()]
    if derivation is not None:
        tokens = _merge_tokens_for_derivation(sentence_line.split(), derivation)
    return CorpusExample(
        id=example_id,
        sentence=tokens,
        gold=gold,
        dialect=dialect,
        derivation=derivation,
        raw_sentence=sentence_line,
    )


def load_corpus(path, dialect: str = "geo"):
    with open(path, encoding="utf-8") as fh:
        return load_corpus_text(fh.read(), dialect)


def bundled_text(name: str) -> str:
    """Contents of a file shipped in the package's data directory."""
    return resources.files("lambdalex.data").joinpath(name).read_text("utf-8")


def load_mini_corpus():
    """The bundled 40-pair GEOQUERY-style corpus with derivations."""
    return load_corpus_text(bundled_text("mini_geo.txt"), "geo")


def mini_initial_lexicon():
    """The documented initial dictionary for the mini corpus."""
    from .lexicon import Lexicon

    return Lexicon.loads(bundled_text("mini_geo_init.lex"))


def attach_derivations(examples, text):
    """Merge a derivations file (``<id><TAB><s-expression>`` lines) onto a corpus."""
    table = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t", 1)
        if len(parts) != 2:
            raise CorpusFormatError("expected 'id<TAB>derivation'", line=lineno)
        table[int(parts[0])] = load_derivation(parts[1])
    out = []
    for ex in examples:
        deriv = table.get(ex.id, ex.derivation)
        if deriv is not None and deriv is not ex.derivation:
            tokens = _merge_tokens_for_derivation(ex.raw_sentence.split(), deriv)
            out.append(dc_replace(ex, derivation=deriv, sentence=tokens))
        else:
            out.append(ex)
    return out


# ---------------------------------------------------------------------------
# CLANG sentence preprocessing

_COORD = re.compile(r"\(\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*\)")
_NUMBER = re.compile(r"-?\d+(?:\.\d+)?$")
_WORD = re.compile(r"[A-Za-z][A-Za-z_-]*$")


def preprocess_clang(ex: CorpusExample) -> CorpusExample:
    """Fuse coordinate pairs into ``pt_x_y`` tokens and ``word NUMBER``
    compounds into ``word_NUMBER``; the gold term is untouched."""
    text = " ".join(ex.sentence)
    text = _COORD.sub(lambda m: " pt_%s_%s " % (m.group(1), m.group(2)), text)
    tokens = text.split()
    fused = []
    for tok in tokens:
        if (
            fused
            and _NUMBER.match(tok)
            and _WORD.match(fused[-1])
        ):
            fused[-1] = "%s_%s" % (fused[-1], tok)
        else:
            fused.append(tok)
    return dc_replace(ex, sentence=fused)
