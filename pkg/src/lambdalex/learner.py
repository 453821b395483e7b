"""Log-linear PCCG model and the two-step training loop.

The probability of a joint reading/derivation for a sentence is a softmax
over the chart's full-span semantic items, with one feature per lexicon
entry counting how often the entry is used in the derivation.  Parsing picks
the reading whose derivations carry the most probability mass.

Training alternates lexical generation (inverse application plus on-demand
generalization plus trivial assignment, sweeping the corpus several times)
with per-example stochastic gradient ascent on the conditional
log-likelihood, and finally generalizes the learned lexicon exhaustively.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .ccg import RuleSet
from .chart import DEFAULT_BEAM, cky_parse
from .errors import LambdaLexError, NoParseError
from .lexicon import (
    DEFAULT_INITIAL_WEIGHT,
    TRIVIAL_WEIGHT,
    Lexicon,
    assign_trivial,
    generalize_all,
    generalize_d,
    merge_multiwords,
)
from .inverse import inverse_l, inverse_r
from .terms import Term, alpha_eq, apply, canonical, free_vars, print_term


@dataclass
class TrainConfig:
    epochs: int = 50          # T
    passes: int = 3           # n: corpus sweeps per lexical-generation step
    beam: int = DEFAULT_BEAM
    alpha0: float = 0.1       # learning-rate schedule alpha0 / (1 + c*k)
    decay_c: float = 0.001
    seed: int = 0
    initial_weight: float = DEFAULT_INITIAL_WEIGHT
    trivial_weight: float = TRIVIAL_WEIGHT
    composition: bool = False
    max_candidates: int = 4   # inverse candidates explored per node
    max_known: int = 3        # readings considered per node during generation
    solve_budget: int = 400   # propagation calls per sentence

    def learning_rate(self, k):
        return self.alpha0 / (1.0 + self.decay_c * k)

    def header(self):
        return json.dumps(
            {
                "epochs": self.epochs,
                "passes": self.passes,
                "beam": self.beam,
                "alpha0": self.alpha0,
                "decay_c": self.decay_c,
                "seed": self.seed,
                "initial_weight": self.initial_weight,
                "trivial_weight": self.trivial_weight,
                "composition": self.composition,
            },
            sort_keys=True,
        )


@dataclass
class Model:
    lexicon: Lexicon
    rules: RuleSet = field(default_factory=RuleSet)
    beam: int = DEFAULT_BEAM

    def tokens_for(self, sentence):
        words = sentence.split() if isinstance(sentence, str) else list(sentence)
        return merge_multiwords(words, self.lexicon)

    def chart(self, sentence):
        return cky_parse(self.tokens_for(sentence), self.lexicon, self.rules, self.beam)


def _logsumexp(xs):
    m = max(xs)
    return m + math.log(sum(math.exp(x - m) for x in xs))


def feature_vector(l: Term, t, s=None, lexicon: Lexicon | None = None) -> dict:
    """Entry -> use count over the leaves of derivation ``t``.

    Chart-built leaves carry their entry; external derivations fall back to a
    lexicon lookup by (word, category, semantics).
    """
    counts: dict = {}
    for lf in t.leaves():
        entry = lf.entry
        if entry is None and lexicon is not None:
            for e in lexicon.for_word(lf.word):
                if str(e.category) == str(lf.category) and (
                    lf.semantics is None or alpha_eq(e.semantics, lf.semantics)
                ):
                    entry = e
                    break
        if entry is None:
            raise NoParseError(
                "no lexicon entry backs leaf %r:%s" % (lf.word, lf.category)
            )
        counts[entry] = counts.get(entry, 0) + 1
    return counts


def parse_probability(l: Term, t, s, model: Model) -> float:
    """Softmax probability of derivation ``t`` with reading ``l`` for ``s``."""
    chart = model.chart(s)
    items = chart.semantic_items()
    if not items:
        raise NoParseError("no semantic full-span item")
    lse = _logsumexp([n.weight for n in items])
    return math.exp(t.weight - lse)


def chart_distribution(chart):
    """(item, probability) for every full-span semantic item; sums to 1."""
    items = chart.semantic_items()
    if not items:
        raise NoParseError("no semantic full-span item")
    lse = _logsumexp([n.weight for n in items])
    return [(n, math.exp(n.weight - lse)) for n in items]


def best_parse(s, model: Model):
    """argmax over readings of the summed derivation probabilities.

    Returns (term, probability); ties break on the lexicographically
    smallest canonical term string.
    """
    chart = model.chart(s)
    dist = chart_distribution(chart)
    groups: dict = {}
    for node, p in dist:
        key = canonical(node.semantics)
        rep, total = groups.get(key, (node.semantics, 0.0))
        groups[key] = (rep, total + p)
    best_key = min(groups, key=lambda k: (-groups[k][1], k))
    rep, total = groups[best_key]
    return rep, total


def update_theta(model: Model, batch, k: int, cfg: TrainConfig):
    """One stochastic-gradient pass over ``batch`` of (sentence, gold) pairs.

    Per example: weight_j += eta_k * (E[f_j | gold readings] - E[f_j]), with
    expectations under the chart softmax.  Examples with no parse, or whose
    gold reading is unreachable, are skipped and counted.  Returns
    (next step index, stats dict); the objective is the conditional
    log-likelihood measured before each update.
    """
    skipped = 0
    updated = 0
    objective = 0.0
    for sentence, gold in batch:
        try:
            chart = model.chart(sentence)
        except NoParseError:
            skipped += 1
            continue
        items = chart.semantic_items()
        if not items:
            skipped += 1
            continue
        gold_key = canonical(gold)
        gold_items = [n for n in items if canonical(n.semantics) == gold_key]
        if not gold_items:
            skipped += 1
            continue
        lse_all = _logsumexp([n.weight for n in items])
        lse_gold = _logsumexp([n.weight for n in gold_items])
        objective += lse_gold - lse_all
        grad: dict = {}
        for n in gold_items:
            p = math.exp(n.weight - lse_gold)
            for entry, count in feature_vector(None, n).items():
                grad[entry] = grad.get(entry, 0.0) + p * count
        for n in items:
            p = math.exp(n.weight - lse_all)
            for entry, count in feature_vector(None, n).items():
                grad[entry] = grad.get(entry, 0.0) - p * count
        eta = cfg.learning_rate(k)
        for entry, g in grad.items():
            entry.weight += eta * g
        k += 1
        updated += 1
    return k, {"updated": updated, "skipped": skipped, "objective": objective}


# ---------------------------------------------------------------------------
# Step 1: lexical generation

def _functor_argument(node):
    """(functor child, argument child) for an application node, else None."""
    if node.rule == "fwd_app":
        return node.children[0], node.children[1]
    if node.rule == "bwd_app":
        return node.children[1], node.children[0]
    return None


def _known_readings(node, lex, cfg):
    """Terms derivable for ``node`` from current entries, best weights first."""
    if node.is_leaf:
        entries = [
            e
            for e in lex.for_word(node.word)
            if str(e.category) == str(node.category)
        ]
        entries.sort(key=lambda e: -e.weight)
        out = []
        seen = set()
        for e in entries:
            key = canonical(e.semantics)
            if key not in seen:
                seen.add(key)
                out.append(e.semantics)
            if len(out) >= cfg.max_known:
                break
        return out
    pair = _functor_argument(node)
    if pair is None:
        return []
    functor, argument = pair
    out = []
    seen = set()
    for f in _known_readings(functor, lex, cfg):
        for a in _known_readings(argument, lex, cfg):
            try:
                r = apply(f, a)
            except LambdaLexError:
                continue
            key = canonical(r)
            if key not in seen:
                seen.add(key)
                out.append(r)
            if len(out) >= cfg.max_known:
                return out
    return out


def _solve(node, target, lex, cfg, budget, seen):
    """Push a target reading down the tree, learning entries at the leaves.

    Both directions are always explored: a junk reading that happens to
    compose to the target must not mask the compositional split.
    """
    key = (id(node), canonical(target))
    if key in seen or budget[0] <= 0:
        return 0
    seen.add(key)
    budget[0] -= 1
    if node.is_leaf:
        if free_vars(target):
            return 0
        _, added = lex.add(
            node.word, node.category, target, cfg.initial_weight, "inverse"
        )
        return 1 if added else 0
    pair = _functor_argument(node)
    if pair is None:
        return 0
    functor, argument = pair
    f_known = _known_readings(functor, lex, cfg)
    a_known = _known_readings(argument, lex, cfg)
    added = 0
    for f in f_known:
        for cand in inverse_r(target, f).candidates[: cfg.max_candidates]:
            added += _solve(argument, cand, lex, cfg, budget, seen)
    for a in a_known:
        for cand in inverse_l(target, a).candidates[: cfg.max_candidates]:
            added += _solve(functor, cand, lex, cfg, budget, seen)
    return added


def _syntax_trees(example, model: Model, cfg: TrainConfig):
    """The example's own derivation when present, else top chart trees."""
    if example.derivation is not None:
        return [example.derivation]
    try:
        chart = model.chart(example.sentence)
    except NoParseError:
        return []
    items = sorted(chart.full_items(), key=lambda n: -n.weight)
    return items[: cfg.max_known]


def process_example(example, model: Model, cfg: TrainConfig) -> int:
    """Generalize, propagate inverses, fall back to trivial; returns entries added."""
    trees = _syntax_trees(example, model, cfg)
    if not trees:
        return -1
    lex = model.lexicon
    total = 0
    for _ in range(3):
        round_added = 0
        for tree in trees:
            for lf in tree.leaves():
                if not lex.has_semantics_for(lf.word, lf.category):
                    before = len(lex)
                    generalize_d(lex, (lf.word, lf.category), cfg.initial_weight)
                    round_added += len(lex) - before
            budget = [cfg.solve_budget]
            round_added += _solve(tree, example.gold, lex, cfg, budget, set())
            before = len(lex)
            assign_trivial(
                [(l.word, l.category) for l in tree.leaves()],
                example.gold,
                lex,
                cfg.trivial_weight,
            )
            round_added += len(lex) - before
        total += round_added
        if round_added == 0:
            break
    return total


def lexical_generation_pass(examples, model: Model, cfg: TrainConfig, state=None):
    """Step 1: sweep the corpus up to ``cfg.passes`` times, stopping early
    once a sweep learns nothing new.

    ``state`` (example id -> lexicon version at last exploration) lets later
    epochs skip sentences no new lexical knowledge could affect; any addition
    bumps the version and reopens every sentence.
    """
    added = 0
    skipped = 0
    sweeps = 0
    for _ in range(max(1, cfg.passes)):
        sweeps += 1
        sweep_added = 0
        for ex in examples:
            if state is not None and state.get(id(ex)) == model.lexicon.version:
                continue
            before = model.lexicon.version
            n = process_example(ex, model, cfg)
            if state is not None and model.lexicon.version == before:
                state[id(ex)] = before
            if n < 0:
                skipped += 1
            else:
                sweep_added += n
        added += sweep_added
        if sweep_added == 0:
            break
    return {"added": added, "skipped_sentences": skipped, "sweeps": sweeps}


def train(examples, l0: Lexicon, cfg: TrainConfig, metrics_stream=None):
    """The full two-step loop; returns (generalized lexicon, model over it)."""
    lex = l0.copy()
    model = Model(
        lexicon=lex, rules=RuleSet(composition=cfg.composition), beam=cfg.beam
    )
    pairs = [(ex.sentence, ex.gold) for ex in examples]
    k = 0
    gen_state: dict = {}
    for epoch in range(1, cfg.epochs + 1):
        gen = lexical_generation_pass(examples, model, cfg, state=gen_state)
        k, upd = update_theta(model, pairs, k, cfg)
        if metrics_stream is not None:
            record = {
                "epoch": epoch,
                "lexicon_size": len(lex),
                "entries_added": gen["added"],
                "generation_sweeps": gen["sweeps"],
                "sentences_skipped": gen["skipped_sentences"],
                "examples_updated": upd["updated"],
                "examples_skipped": upd["skipped"],
                "objective": round(upd["objective"], 10),
            }
            metrics_stream.write(json.dumps(record, sort_keys=True) + "\n")
    final = generalize_all(model.lexicon)
    return final, Model(
        lexicon=final, rules=RuleSet(composition=cfg.composition), beam=cfg.beam
    )


def save_checkpoint(path, lexicon: Lexicon, cfg: TrainConfig):
    lexicon.save(path, header="config %s" % cfg.header())


def load_checkpoint(path):
    """Returns (lexicon, config dict or None)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    config = None
    first = text.splitlines()[0] if text else ""
    if first.startswith("# config "):
        config = json.loads(first[len("# config "):])
    return Lexicon.loads(text), config
