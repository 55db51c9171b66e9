"""Corpus BLEU, dictionary hit rate and vocabulary-size reports."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import (
    BilingualDictionary,
    InputError,
    ParallelCorpus,
    Sentence,
    build_vocabulary,
    find_phrase,
    format_sentence,
)


@dataclass
class EvalSet:
    sources: list[Sentence]
    references: list[list[Sentence]]
    hypotheses: list[Sentence]

    def __post_init__(self):
        if not len(self.sources) == len(self.references) == len(self.hypotheses):
            raise InputError("sources, references and hypotheses differ in length")
        if any(not refs for refs in self.references):
            raise InputError("every source needs at least one reference")

    def __len__(self) -> int:
        return len(self.hypotheses)

    @classmethod
    def from_parallel(cls, corpus: ParallelCorpus) -> "EvalSet":
        """Treat a corpus's targets as both hypotheses and references."""
        return cls([p.source for p in corpus.pairs], [[p.target] for p in corpus.pairs],
                   [p.target for p in corpus.pairs])


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass
class BleuStats:
    matches: list[int]
    totals: list[int]
    hyp_len: int = 0
    ref_len: int = 0

    def __add__(self, other: "BleuStats") -> "BleuStats":
        return BleuStats([a + b for a, b in zip(self.matches, other.matches)],
                         [a + b for a, b in zip(self.totals, other.totals)],
                         self.hyp_len + other.hyp_len, self.ref_len + other.ref_len)


def sentence_stats(hyp: Sequence[str], refs: Sequence[Sequence[str]], max_order: int = 4,
                   case_insensitive: bool = True) -> BleuStats:
    if case_insensitive:
        hyp = [t.lower() for t in hyp]
        refs = [[t.lower() for t in r] for r in refs]
    matches, totals = [], []
    for n in range(1, max_order + 1):
        hyp_counts = _ngrams(hyp, n)
        max_ref: Counter = Counter()
        for r in refs:
            max_ref |= _ngrams(r, n)
        matches.append(sum(min(c, max_ref[g]) for g, c in hyp_counts.items()))
        totals.append(max(len(hyp) - n + 1, 0))
    # closest reference length, shorter one on ties
    ref_len = min((abs(len(r) - len(hyp)), len(r)) for r in refs)[1]
    return BleuStats(matches, totals, len(hyp), ref_len)


def bleu_from_stats(stats: BleuStats) -> float:
    """Geometric mean of precisions over orders with any candidate n-grams, times BP."""
    if stats.hyp_len == 0:
        return 0.0
    logs = []
    for m, t in zip(stats.matches, stats.totals):
        if t == 0:
            continue
        if m == 0:
            return 0.0
        logs.append(math.log(m / t))
    bp = math.exp(min(0.0, 1.0 - stats.ref_len / stats.hyp_len))
    return bp * math.exp(sum(logs) / len(logs))


def bleu(eval_set: EvalSet, max_order: int = 4, case_insensitive: bool = True) -> float:
    """Corpus-level BLEU in [0, 1], unsmoothed."""
    if len(eval_set) == 0:
        raise InputError("BLEU needs at least one hypothesis")
    total = BleuStats([0] * max_order, [0] * max_order)
    for hyp, refs in zip(eval_set.hypotheses, eval_set.references):
        total = total + sentence_stats(hyp, refs, max_order, case_insensitive)
    return bleu_from_stats(total)


def sentence_bleu(hyp: Sequence[str], refs: Sequence[Sequence[str]], max_order: int = 4,
                  case_insensitive: bool = True) -> float:
    """Add-one smoothed sentence BLEU, for debugging individual outputs."""
    stats = sentence_stats(hyp, refs, max_order, case_insensitive)
    if stats.hyp_len == 0:
        return 0.0
    logs = [math.log((m + 1) / (t + 1)) for m, t in zip(stats.matches, stats.totals)]
    bp = math.exp(min(0.0, 1.0 - stats.ref_len / stats.hyp_len))
    return bp * math.exp(sum(logs) / len(logs))


@dataclass(frozen=True)
class HitRow:
    source_phrase: Sentence
    targets: tuple[Sentence, ...]
    sentences: int  # eval sentences containing the source phrase
    hit_sentences: int
    hit: bool


@dataclass
class HitReport:
    covered_entries: int
    hits: int
    rows: list[HitRow] = field(default_factory=list)
    strict: bool = False

    @property
    def rate(self) -> float | None:
        """None when no entry is covered (the rate is undefined, not zero)."""
        return self.hits / self.covered_entries if self.covered_entries else None

    def render(self) -> str:
        rate = "undefined" if self.rate is None else f"{self.rate:.4f}"
        mode = "all occurrences" if self.strict else "at least once"
        lines = [
            f"# hit rate ({mode}; target phrase may appear anywhere in the hypothesis)",
            f"# covered\t{self.covered_entries}\thits\t{self.hits}\trate\t{rate}",
            "source\ttargets\tsentences\thit_sentences\thit",
        ]
        for r in self.rows:
            targets = " | ".join(format_sentence(t) for t in r.targets)
            lines.append(f"{format_sentence(r.source_phrase)}\t{targets}\t{r.sentences}\t"
                         f"{r.hit_sentences}\t{int(r.hit)}")
        return "\n".join(lines) + "\n"


def hit_rate(dic: BilingualDictionary, eval_set: EvalSet, strict: bool = False) -> HitReport:
    """Fraction of covered dictionary source phrases whose translation shows up.

    Entries are grouped by source phrase. A source phrase is covered when it
    occurs contiguously in some eval source; it is a hit when a hypothesis
    for such a sentence contains any of its dictionary targets
    (case-insensitive). With ``strict`` every such hypothesis must.
    """
    hyps = [tuple(t.lower() for t in h) for h in eval_set.hypotheses]
    report = HitReport(0, 0, strict=strict)
    for src, targets in dic.by_source.items():
        idxs = [i for i, s in enumerate(eval_set.sources) if find_phrase(s, src) >= 0]
        if not idxs:
            continue
        lowered = [tuple(t.lower() for t in tgt) for tgt in targets]
        good = sum(1 for i in idxs if any(find_phrase(hyps[i], t) >= 0 for t in lowered))
        hit = good == len(idxs) if strict else good > 0
        report.covered_entries += 1
        report.hits += hit
        report.rows.append(HitRow(src, tuple(targets), len(idxs), good, hit))
    return report


@dataclass(frozen=True)
class VocabRow:
    name: str
    source_size: int
    target_size: int


def vocab_report(corpora: Mapping[str, ParallelCorpus], thresholds: tuple[int, int]) -> list[VocabRow]:
    u_src, u_tgt = thresholds
    return [VocabRow(name,
                     len(build_vocabulary(c.sources(), u_src)),
                     len(build_vocabulary(c.targets(), u_tgt)))
            for name, c in corpora.items()]


def render_vocab_report(rows: Sequence[VocabRow]) -> str:
    lines = ["corpus\t|V_src|\t|V_tgt|"]
    lines.extend(f"{r.name}\t{r.source_size}\t{r.target_size}" for r in rows)
    return "\n".join(lines) + "\n"
