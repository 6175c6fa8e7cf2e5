"""Lexicon learning: entry induction, templates, and weight estimation.

Induction abstracts the subject and patient constants out of an
annotated consequence, giving an action entry that reproduces the
annotation when the triplet is parsed.  Weight estimation is full-batch
gradient ascent on the conditional log-likelihood of the annotations,
with the per-entry usage counts of a derivation as its only features.
"""

from __future__ import annotations

import math
import re
import warnings
from collections import defaultdict
from dataclasses import dataclass

from .errors import (DegenerateCorpusError, InductionFailureError,
                     NoParseError, SkippedSampleWarning, UnknownTokenError)
from .chart import parse_all
from .grammar import (AP, Backward, Forward, N, NP, LexEntry, Lexicon,
                      apply_argument)
from .syntax import parse_term
from .terms import Const, Lam, Term, alpha_eq, canonical, inverse_lambda

OBJECT_TOKEN_RE = re.compile(r"object_[0-9]+\Z", re.IGNORECASE)
ACTION_CATEGORY = Forward(Backward(AP, NP), NP)
DEFAULT_UNKNOWN_WEIGHT = -1.0


@dataclass(frozen=True)
class TrainingSample:
    """A detector triplet and its annotated consequence expression."""

    tokens: tuple[str, str, str]
    gold: Term

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))


@dataclass(frozen=True)
class TrainConfig:
    iterations: int = 100
    learning_rate: float = 0.1
    l2: float = 0.0
    step_budget: int = 10_000
    seed: int = 0


def inject_templates(tokens, lexicon: Lexicon,
                     unknown_weight: float = DEFAULT_UNKNOWN_WEIGHT) -> Lexicon:
    """Cover unknown tokens with fallback entries.

    Segment identifiers such as ``Object_007`` become nouns denoting a
    fresh constant; any other unknown token is assumed to name an action
    and receives a two-argument entry with no stated consequence, at a
    penalty weight so known entries win when both apply.  Running the
    injection twice adds nothing new.
    """
    fresh = []
    for token in dict.fromkeys(tokens):
        if lexicon.has_token(token):
            continue
        if OBJECT_TOKEN_RE.fullmatch(token):
            fresh.append(LexEntry(token, N, Const(token.lower()),
                                  0.0, "template"))
        else:
            semantics = parse_term(f"\\x.\\y.{token.lower()}(x,y)")
            fresh.append(LexEntry(token, ACTION_CATEGORY, semantics,
                                  unknown_weight, "template"))
    return lexicon.with_entries(fresh) if fresh else lexicon


def _noun_constant(token: str, lexicon: Lexicon) -> Const:
    for entry in lexicon.lookup(token):
        if entry.category == N and isinstance(entry.semantics, Const):
            return entry.semantics
    raise InductionFailureError(f"no noun entry for token {token!r}")


def induce_entries(sample: TrainingSample, lexicon: Lexicon) -> list[LexEntry]:
    """Candidate action entries for one sample, minus known duplicates.

    The subject constant is abstracted first and the patient second, so
    the patient argument consumed through ``/NP`` fills the inner binder
    and reapplying patient then subject round-trips to the annotation.
    """
    if len(sample.tokens) != 3:
        raise InductionFailureError(
            f"expected a triplet, got {len(sample.tokens)} tokens")
    subject_tok, action_tok, patient_tok = sample.tokens
    subject = _noun_constant(subject_tok, lexicon)
    patient = _noun_constant(patient_tok, lexicon)
    outer = inverse_lambda(sample.gold, subject)
    candidate = Lam(outer.param, inverse_lambda(outer.body, patient))
    rebuilt = apply_argument(apply_argument(candidate, patient), subject)
    if not alpha_eq(rebuilt, sample.gold):
        raise InductionFailureError(
            f"candidate for {action_tok!r} does not reproduce the annotation: "
            f"{rebuilt} vs {sample.gold}")
    entry = LexEntry(action_tok, ACTION_CATEGORY, candidate, 0.0, "learned")
    known = {e.key for e in lexicon.lookup(action_tok)}
    return [] if entry.key in known else [entry]


def induce_corpus_entries(corpus, lexicon: Lexicon) -> Lexicon:
    """Run induction over a whole corpus, skipping failed samples."""
    for sample in corpus:
        try:
            new = induce_entries(sample, lexicon)
        except InductionFailureError as exc:
            warnings.warn(f"skipping {' '.join(sample.tokens)}: {exc}",
                          SkippedSampleWarning, stacklevel=2)
            continue
        if new:
            lexicon = lexicon.with_entries(new)
    return lexicon


def _prepare(corpus, lexicon: Lexicon, budget: int | None = None):
    """Parse each sample once; charts do not depend on weights."""
    prepared = []
    for sample in corpus:
        try:
            derivations = parse_all(sample.tokens, lexicon, budget)
        except (UnknownTokenError, NoParseError) as exc:
            warnings.warn(f"skipping {' '.join(sample.tokens)}: {exc}",
                          SkippedSampleWarning, stacklevel=3)
            continue
        target = canonical(sample.gold)
        rows = [(dict(d.feature_counts()), canonical(d.semantics) == target)
                for d in derivations]
        if not any(gold for _, gold in rows):
            warnings.warn(
                f"skipping {' '.join(sample.tokens)}: no derivation matches "
                f"the annotation", SkippedSampleWarning, stacklevel=3)
            continue
        prepared.append(rows)
    return prepared


def _log_mass(rows, theta) -> tuple[float, float]:
    """(log sum over all derivations, log sum over matching ones)."""
    scores = [sum(theta[k] * c for k, c in counts.items()) for counts, _ in rows]
    top = max(scores)
    total = top + math.log(math.fsum(math.exp(s - top) for s in scores))
    gold_scores = [s for s, (_, gold) in zip(scores, rows) if gold]
    gtop = max(gold_scores)
    gold = gtop + math.log(math.fsum(math.exp(s - gtop) for s in gold_scores))
    return total, gold


def log_likelihood(corpus, lexicon: Lexicon, budget: int | None = None) -> float:
    """Sum over samples of log P(annotation | tokens); skips unusable ones."""
    theta = defaultdict(float, {e.key: e.weight for e in lexicon})
    total = 0.0
    for rows in _prepare(corpus, lexicon, budget):
        all_mass, gold_mass = _log_mass(rows, theta)
        total += gold_mass - all_mass
    return total


def train(corpus, lexicon: Lexicon, config: TrainConfig = TrainConfig()) -> Lexicon:
    """Batch gradient ascent on the conditional log-likelihood.

    The gradient of each entry weight is the expected usage count under
    derivations matching the annotation minus the expectation under all
    derivations, less the l2 pull toward zero.  Returns the lexicon with
    updated weights; everything else is untouched.
    """
    prepared = _prepare(corpus, lexicon, config.step_budget)
    if not prepared:
        raise DegenerateCorpusError("no training sample could be parsed "
                                    "to its annotation")
    theta = {e.key: e.weight for e in lexicon}
    for _ in range(config.iterations):
        grad = defaultdict(float)
        for rows in prepared:
            scores = [sum(theta.get(k, 0.0) * c for k, c in counts.items())
                      for counts, _ in rows]
            _accumulate(grad, rows, scores, gold_only=True, sign=1.0)
            _accumulate(grad, rows, scores, gold_only=False, sign=-1.0)
        for key in theta:
            theta[key] += config.learning_rate * (grad[key]
                                                  - config.l2 * theta[key])
    return lexicon.with_weights(theta)


def _accumulate(grad, rows, scores, gold_only: bool, sign: float) -> None:
    pool = [(counts, s) for (counts, gold), s in zip(rows, scores)
            if gold or not gold_only]
    top = max(s for _, s in pool)
    norm = math.fsum(math.exp(s - top) for _, s in pool)
    for counts, s in pool:
        p = math.exp(s - top) / norm
        for key, count in counts.items():
            grad[key] += sign * p * count
