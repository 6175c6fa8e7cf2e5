"""File formats: lexicons, corpora, event sequences, rules, gold labels.

All files are UTF-8 text with LF line endings and ``#`` comments.  One
line holds one record:

    lexicon   Token := CATEGORY : TERM [@ weight]
    corpus    subject action patient<TAB>consequence-expression
    sequence  Subject Action Patient
    gold      literal, e.g. on_top(object_007,object_009)
    rules     axiom <name>: lit & lit ... => head

Loaders attach the file path and 1-based line number to any error and
audit predicate arities, rejecting a name used with two different
argument counts in the same file.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ArityConflictError, SourceSyntaxError
from .grammar import LexEntry, Lexicon, parse_category
from .learning import TrainingSample
from .reasoning import AxiomRule, Literal, parse_axiom, parse_literal
from .syntax import parse_term
from .terms import Pred, Term, beta_reduce, free_vars, render, replace_constant

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class SequenceFile:
    """An ordered run of detector triplets from one observation."""

    name: str
    triplets: tuple[tuple[str, str, str], ...]


@dataclass(frozen=True)
class GoldConsequences:
    """Reference final consequences for one sequence."""

    name: str
    literals: tuple[Literal, ...]


def data_path(name: str) -> Path:
    """Path of a sample file shipped inside the package."""
    return Path(str(resources.files(__package__).joinpath("data", name)))


class _ArityAudit:
    def __init__(self, path):
        self.path = path
        self.seen: dict[str, tuple[int, int]] = {}

    def observe_term(self, term: Term, line: int) -> None:
        stack = [term]
        while stack:
            node = stack.pop()
            if isinstance(node, Pred):
                self._check(node.name, len(node.args), line)
            for attr in ("args", "fun", "arg", "left", "right", "body"):
                child = getattr(node, attr, None)
                if isinstance(child, Term):
                    stack.append(child)
                elif isinstance(child, tuple):
                    stack.extend(child)

    def observe_literal(self, literal: Literal, line: int) -> None:
        self._check(literal.predicate, len(literal.args), line)

    def _check(self, name: str, arity: int, line: int) -> None:
        before = self.seen.setdefault(name, (arity, line))
        if before[0] != arity:
            raise ArityConflictError(
                f"{self.path}, line {line}: predicate {name!r} used with "
                f"{arity} arguments but with {before[0]} on line {before[1]}")


def _records(path) -> list[tuple[int, str]]:
    text = Path(path).read_text(encoding="utf-8")
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def load_lexicon(path) -> Lexicon:
    """Read a lexicon; duplicate entries merge with a warning."""
    audit = _ArityAudit(path)
    entries = []
    for number, line in _records(path):
        try:
            entries.append(_parse_lexicon_line(line))
        except SourceSyntaxError as exc:
            raise SourceSyntaxError(str(exc), line=number, path=str(path)) from None
        audit.observe_term(entries[-1].semantics, number)
    return Lexicon().with_entries(entries, warn_duplicates=True)


def _parse_lexicon_line(line: str) -> LexEntry:
    token, sep, rest = line.partition(":=")
    if not sep:
        raise SourceSyntaxError(f"missing ':=' in {line!r}")
    token = token.strip()
    if not _TOKEN_RE.fullmatch(token):
        raise SourceSyntaxError(f"bad token {token!r}")
    category_text, sep, term_text = rest.partition(":")
    if not sep:
        raise SourceSyntaxError(f"missing ':' between category and term in {line!r}")
    weight = 0.0
    term_text, sep, weight_text = term_text.partition("@")
    if sep:
        try:
            weight = float(weight_text.strip())
        except ValueError:
            raise SourceSyntaxError(f"bad weight {weight_text.strip()!r}") from None
    category = parse_category(category_text.strip())
    semantics = beta_reduce(parse_term(term_text.strip()))
    return LexEntry(token, category, semantics, weight)


def save_lexicon(lexicon: Lexicon, path) -> None:
    lines = [f"{e.token} := {e.category} : {render(e.semantics)} @ {e.weight!r}"
             for e in lexicon]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_corpus(path) -> list[TrainingSample]:
    """Read annotated triplets; annotations must be closed expressions."""
    audit = _ArityAudit(path)
    samples = []
    for number, line in _records(path):
        tokens_text, sep, term_text = line.partition("\t")
        if not sep:
            raise SourceSyntaxError("missing tab between tokens and annotation",
                                    line=number, path=str(path))
        tokens = tuple(tokens_text.split())
        if len(tokens) != 3:
            raise SourceSyntaxError(
                f"expected 'subject action patient', got {tokens_text!r}",
                line=number, path=str(path))
        try:
            gold = beta_reduce(parse_term(term_text.strip()))
        except SourceSyntaxError as exc:
            raise SourceSyntaxError(str(exc), line=number, path=str(path)) from None
        stray = free_vars(gold)
        if stray:
            raise SourceSyntaxError(
                f"annotation has free variables: {', '.join(sorted(stray))}",
                line=number, path=str(path))
        audit.observe_term(gold, number)
        samples.append(TrainingSample(tokens, gold))
    return samples


def save_corpus(samples, path, header: str | None = None) -> None:
    lines = [f"# {header}"] if header else []
    lines += [f"{' '.join(s.tokens)}\t{render(s.gold)}" for s in samples]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_sequence(path) -> SequenceFile:
    triplets = []
    for number, line in _records(path):
        tokens = tuple(line.split())
        if len(tokens) != 3:
            raise SourceSyntaxError(
                f"expected 'Subject Action Patient', got {line!r}",
                line=number, path=str(path))
        triplets.append(tokens)
    return SequenceFile(Path(path).stem, tuple(triplets))


def load_gold(path) -> GoldConsequences:
    audit = _ArityAudit(path)
    literals = []
    for number, line in _records(path):
        try:
            literal = parse_literal(line)
        except SourceSyntaxError as exc:
            raise SourceSyntaxError(str(exc), line=number, path=str(path)) from None
        audit.observe_literal(literal, number)
        if literal not in literals:
            literals.append(literal)
    return GoldConsequences(Path(path).stem, tuple(literals))


def load_axioms(path) -> list[AxiomRule]:
    audit = _ArityAudit(path)
    rules = []
    for number, line in _records(path):
        try:
            rule = parse_axiom(line)
        except SourceSyntaxError as exc:
            raise SourceSyntaxError(str(exc), line=number, path=str(path)) from None
        for literal in rule.body + (rule.head,):
            audit.observe_literal(literal, number)
        rules.append(rule)
    return rules


def synthesize_corpus(base, objects, replicas: int = 15,
                      seed: int = 0) -> list[TrainingSample]:
    """Replicate each base sample with fresh object constants.

    The first replica keeps the original pairing; the rest draw distinct
    subject and patient names from ``objects`` with a seeded generator,
    so the output is reproducible byte for byte.
    """
    rng = random.Random(seed)
    pool = [name for name in objects]
    out: list[TrainingSample] = []
    for sample in base:
        subject_tok, action_tok, patient_tok = sample.tokens
        for replica in range(replicas):
            if replica == 0:
                out.append(sample)
                continue
            subject, patient = rng.sample(pool, 2)
            gold = _swap_pair(sample.gold, subject_tok.lower(), subject,
                              patient_tok.lower(), patient)
            out.append(TrainingSample((subject, action_tok, patient), gold))
    return out


def _swap_pair(term: Term, old_subject: str, new_subject: str,
               old_patient: str, new_patient: str) -> Term:
    # two-phase rename so a new name colliding with an old one is safe
    term = replace_constant(term, old_subject, "tmp_subject_slot")
    term = replace_constant(term, old_patient, "tmp_patient_slot")
    term = replace_constant(term, "tmp_subject_slot", new_subject)
    return replace_constant(term, "tmp_patient_slot", new_patient)
