"""IBM Model 1 lexical translation table trained with EM, plus Viterbi alignment."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..corpus import InputError, ParallelCorpus, SentencePair

NULL = "<null>"
FLOOR_PROB = 1e-9


@dataclass
class TranslationTable:
    """Lexical probabilities t(target | source), keyed ``(target, source)``.

    ``history`` holds the corpus log-likelihood after initialisation and after
    each EM iteration.
    """

    t: dict[tuple[str, str], float]
    use_null: bool = False
    history: list[float] = field(default_factory=list)

    def prob(self, target: str, source: str) -> float:
        return self.t.get((target, source), FLOOR_PROB)

    def source_totals(self) -> dict[str, float]:
        totals: dict[str, float] = defaultdict(float)
        for (_, s), p in self.t.items():
            totals[s] += p
        return dict(totals)

    def dump(self) -> str:
        rows = sorted(self.t.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        return "".join(f"{s}\t{tw}\t{p!r}\n" for (tw, s), p in rows)


def _source_words(source: Sequence[str], use_null: bool) -> Sequence[str]:
    return (NULL, *source) if use_null else source


def corpus_log_likelihood(table: TranslationTable, corpus: ParallelCorpus) -> float:
    """Σ over pairs and target words of log( (1/l) Σ_source t(target|source) ).

    ``l`` counts the NULL word when the table uses one.
    """
    total = 0.0
    for pair in corpus.pairs:
        src = _source_words(pair.source, table.use_null)
        log_l = math.log(len(src))
        for tw in pair.target:
            total += math.log(sum(table.prob(tw, s) for s in src)) - log_l
    return total


def train_model1(corpus: ParallelCorpus, iterations: int = 5, use_null: bool = False,
                 callback: Callable[[int, TranslationTable], None] | None = None) -> TranslationTable:
    """Run ``iterations`` EM steps starting from a per-source uniform table.

    The initial table spreads each source word's mass uniformly over the
    target words it co-occurs with. ``callback(i, table)`` is invoked after
    initialisation (i=0) and after every iteration.
    """
    if not corpus.pairs:
        raise InputError("cannot train Model 1 on an empty corpus")
    if iterations < 0:
        raise InputError("iterations must be >= 0")

    cooc: dict[str, set[str]] = defaultdict(set)
    for pair in corpus.pairs:
        tgt = set(pair.target)
        for s in _source_words(pair.source, use_null):
            cooc[s].update(tgt)
    t = {}
    for s in sorted(cooc):
        p = 1.0 / len(cooc[s])
        for tw in sorted(cooc[s]):
            t[(tw, s)] = p
    table = TranslationTable(t, use_null)
    table.history.append(corpus_log_likelihood(table, corpus))
    if callback:
        callback(0, table)

    for it in range(1, iterations + 1):
        counts: dict[tuple[str, str], float] = defaultdict(float)
        totals: dict[str, float] = defaultdict(float)
        for pair in corpus.pairs:
            src = _source_words(pair.source, use_null)
            for tw in pair.target:
                probs = [t[(tw, s)] for s in src]
                z = sum(probs)
                for s, p in zip(src, probs):
                    c = p / z
                    counts[(tw, s)] += c
                    totals[s] += c
        t = {key: c / totals[key[1]] for key, c in counts.items()}
        table = TranslationTable(t, use_null, table.history)
        table.history.append(corpus_log_likelihood(table, corpus))
        if callback:
            callback(it, table)
    return table


@dataclass(frozen=True)
class Alignment:
    links: frozenset[tuple[int, int]]  # (source_index, target_index)

    def flipped(self) -> "Alignment":
        return Alignment(frozenset((j, i) for i, j in self.links))

    def __and__(self, other: "Alignment") -> "Alignment":
        return Alignment(self.links & other.links)


def viterbi_align(table: TranslationTable, pair: SentencePair) -> Alignment:
    """Link each target word to its most probable source word.

    Ties go to the leftmost source position. With a NULL-aware table a target
    word stays unlinked when NULL is strictly more probable than every real
    source word.
    """
    links = set()
    for j, tw in enumerate(pair.target):
        best_i, best_p = -1, -1.0
        for i, s in enumerate(pair.source):
            p = table.prob(tw, s)
            if p > best_p:
                best_i, best_p = i, p
        if table.use_null and table.prob(tw, NULL) > best_p:
            continue
        links.add((best_i, j))
    return Alignment(frozenset(links))


def reversed_corpus(corpus: ParallelCorpus) -> ParallelCorpus:
    return ParallelCorpus([SentencePair(p.target, p.source) for p in corpus.pairs])
