"""Packed CKY chart over a lexicon.

Cells are keyed by (category, alpha-normal semantics); each key retains up to
``beam`` highest-weight derivations, so distinct derivations of one reading
survive for the probability model to sum over.  An item's weight is the sum
of its leaf entries' weights.
"""

from __future__ import annotations

from .ccg import RuleSet, combine, leaf
from .errors import NoParseError
from .terms import canonical

DEFAULT_BEAM = 16


class Chart:
    def __init__(self, n, tokens):
        self.n = n
        self.tokens = tokens
        self.cells = {}  # (i, j) -> {key: [DerivationNode, ...]}

    def cell(self, i, j):
        return self.cells.setdefault((i, j), {})

    def items(self, i, j):
        out = []
        for nodes in self.cells.get((i, j), {}).values():
            out.extend(nodes)
        return out

    def full_items(self):
        return self.items(0, self.n)

    def semantic_items(self):
        """Full-span items that carry a reading: the (L, T) candidates."""
        return [n for n in self.full_items() if n.semantics is not None]

    def keys(self, i, j):
        return list(self.cells.get((i, j), {}).keys())


def _item_key(node):
    sem = canonical(node.semantics) if node.semantics is not None else None
    return (str(node.category), sem)


def _prune(cell, beam):
    for key, nodes in cell.items():
        if len(nodes) > beam:
            nodes.sort(key=lambda n: -n.weight)
            del nodes[beam:]


def cky_parse(tokens, lexicon, rules: RuleSet = RuleSet(), beam: int = DEFAULT_BEAM) -> Chart:
    """Parse ``tokens`` (already lower-cased/merged) into a packed chart.

    Raises NoParseError when a token has no lexical entry or the full span
    stays empty.
    """
    n = len(tokens)
    if n == 0:
        raise NoParseError("empty sentence")
    chart = Chart(n, tokens)
    for i, tok in enumerate(tokens):
        entries = lexicon.for_word(tok)
        if not entries:
            raise NoParseError("no lexical entry for %r" % tok)
        cell = chart.cell(i, i + 1)
        for e in entries:
            node = leaf(tok, e.category, e.semantics, entry=e, start=i)
            cell.setdefault(_item_key(node), []).append(node)
        _prune(cell, beam)
    for span in range(2, n + 1):
        for i in range(0, n - span + 1):
            j = i + span
            cell = chart.cell(i, j)
            for mid in range(i + 1, j):
                for left in chart.items(i, mid):
                    for right in chart.items(mid, j):
                        for parent in combine(left, right, rules):
                            cell.setdefault(_item_key(parent), []).append(parent)
            _prune(cell, beam)
    if not chart.items(0, n):
        raise NoParseError("no full-span parse for: %s" % " ".join(tokens))
    return chart
