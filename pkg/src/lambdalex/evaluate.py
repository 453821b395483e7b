"""Scoring: SR matching rules, precision/recall/F-measure, cross-validation.

An SR is correct when it matches the gold SR exactly, except that arguments
of commutative predicates (configurable, default ``and``/``or``) may appear
in any order, and optionally ``definec``/``definer`` heads compare equal.
Precision is the percentage of returned SRs that are correct, recall the
percentage of test examples whose SR was returned correctly, F their
harmonic mean.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import LambdaLexError, NoParseError
from .learner import Model, TrainConfig, best_parse, train
from .terms import Abstraction, Application, Atom, Constant, Term, Variable

DEFAULT_COMMUTATIVE = frozenset({"and", "or"})
_DEFINE_HEADS = frozenset({"definec", "definer"})


@dataclass(frozen=True)
class MatchOptions:
    commutative: frozenset = DEFAULT_COMMUTATIVE
    unify_define: bool = False

    @classmethod
    def from_heads_file(cls, path, unify_define=False):
        with open(path, encoding="utf-8") as fh:
            heads = {
                line.strip()
                for line in fh
                if line.strip() and not line.startswith("#")
            }
        return cls(commutative=frozenset(heads), unify_define=unify_define)


@dataclass
class EvalReport:
    precision: float
    recall: float
    f_measure: float
    returned: int
    correct: int
    total: int

    @classmethod
    def from_counts(cls, returned, correct, total):
        precision = 100.0 * correct / returned if returned else 0.0
        recall = 100.0 * correct / total if total else 0.0
        return cls(precision, recall, f_measure(precision, recall), returned, correct, total)

    def row(self, label=""):
        return "%-12s %9.2f %9.2f %9.2f   (%d/%d returned, %d total)" % (
            label,
            self.precision,
            self.recall,
            self.f_measure,
            self.correct,
            self.returned,
            self.total,
        )


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean; 0 when both components are 0."""
    if precision + recall <= 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _head(name, opts):
    if opts.unify_define and name in _DEFINE_HEADS:
        return "definec"
    return name


def match_sr(predicted: Term, gold: Term, opts: MatchOptions = MatchOptions()) -> bool:
    """Recursive equality up to bound-variable renaming and commutative-argument order."""

    def walk(a, b, ra, rb):
        if isinstance(a, Variable) and isinstance(b, Variable):
            return ra.get(a.name, a.name) == rb.get(b.name, b.name)
        if isinstance(a, Constant) and isinstance(b, Constant):
            return a.name == b.name
        if isinstance(a, Abstraction) and isinstance(b, Abstraction):
            marker = "#%d" % len(ra)
            return walk(
                a.body, b.body, {**ra, a.var.name: marker}, {**rb, b.var.name: marker}
            )
        if isinstance(a, Application) and isinstance(b, Application):
            return walk(a.functor, b.functor, ra, rb) and walk(
                a.argument, b.argument, ra, rb
            )
        if isinstance(a, Atom) and isinstance(b, Atom):
            if _head(a.predicate, opts) != _head(b.predicate, opts):
                return False
            if len(a.args) != len(b.args):
                return False
            if a.predicate in opts.commutative:
                return _multiset_match(list(a.args), list(b.args), ra, rb)
            return all(walk(x, y, ra, rb) for x, y in zip(a.args, b.args))
        return False

    def _multiset_match(xs, ys, ra, rb):
        if not xs:
            return True
        x, rest = xs[0], xs[1:]
        for i, y in enumerate(ys):
            if walk(x, y, ra, rb) and _multiset_match(rest, ys[:i] + ys[i + 1 :], ra, rb):
                return True
        return False

    return walk(predicted, gold, {}, {})


def evaluate(model: Model, test, opts: MatchOptions = MatchOptions()) -> EvalReport:
    """Parse each test example with the model and score against its gold SR."""
    returned = 0
    correct = 0
    for ex in test:
        try:
            predicted, _ = best_parse(ex.sentence, model)
        except (NoParseError, LambdaLexError):
            continue
        returned += 1
        if match_sr(predicted, ex.gold, opts):
            correct += 1
    return EvalReport.from_counts(returned, correct, len(test))


def cross_validate(
    corpus,
    folds: int,
    seed: int,
    cfg: TrainConfig,
    initial_lexicon,
    opts: MatchOptions = MatchOptions(),
    split_mode: bool = False,
    metrics_stream=None,
):
    """Seeded k-fold (or repeated 50/50 split) training and evaluation.

    Returns (per-fold reports, aggregate).  The aggregate macro-averages
    precision and recall over folds and recomputes F from those means;
    its counts are the fold sums.
    """
    if not split_mode and len(corpus) < folds:
        raise ValueError("corpus smaller than fold count")
    rng = random.Random(seed)
    order = list(corpus)
    rng.shuffle(order)
    partitions = []
    if split_mode:
        for _ in range(folds):
            half = len(order) // 2
            partitions.append((order[:half], order[half:]))
            rng.shuffle(order)
    else:
        for i in range(folds):
            test = order[i::folds]
            training = [ex for j, ex in enumerate(order) if j % folds != i]
            partitions.append((training, test))
    reports = []
    for fold, (training, test) in enumerate(partitions):
        _, model = train(training, initial_lexicon, cfg, metrics_stream=metrics_stream)
        report = evaluate(model, test, opts)
        reports.append(report)
    mean_p = sum(r.precision for r in reports) / len(reports)
    mean_r = sum(r.recall for r in reports) / len(reports)
    aggregate = EvalReport(
        precision=mean_p,
        recall=mean_r,
        f_measure=f_measure(mean_p, mean_r),
        returned=sum(r.returned for r in reports),
        correct=sum(r.correct for r in reports),
        total=sum(r.total for r in reports),
    )
    return reports, aggregate
