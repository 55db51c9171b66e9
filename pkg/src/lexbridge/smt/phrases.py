"""Phrase-pair extraction, relative-frequency scoring and dictionary rule injection."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from ..corpus import BilingualDictionary, InputError, Sentence, SentencePair, tokenize_line
from .model1 import Alignment

PhrasePair = tuple[Sentence, Sentence]


def extract_phrases(pair: SentencePair, forward: Alignment, backward: Alignment,
                    max_len: int) -> set[PhrasePair]:
    """Phrase pairs consistent with the intersection of both alignments.

    Both alignments use ``(source_index, target_index)`` links. Phrase
    boundaries must be aligned words on both sides: unaligned words may sit
    inside a phrase but are never absorbed at its edges. Each source span
    therefore yields at most one phrase pair.
    """
    links = forward.links & backward.links
    if not links:
        return set()
    by_source: dict[int, list[int]] = {}
    by_target: dict[int, list[int]] = {}
    for i, j in links:
        by_source.setdefault(i, []).append(j)
        by_target.setdefault(j, []).append(i)

    src, tgt = pair.source, pair.target
    out = set()
    for s1 in range(len(src)):
        if s1 not in by_source:
            continue
        for s2 in range(s1, min(len(src), s1 + max_len)):
            if s2 not in by_source:
                continue
            tpos = [j for i in range(s1, s2 + 1) for j in by_source.get(i, ())]
            if not tpos:
                continue
            t1, t2 = min(tpos), max(tpos)
            if t2 - t1 + 1 > max_len:
                continue
            if any(not s1 <= i <= s2 for j in range(t1, t2 + 1) for i in by_target.get(j, ())):
                continue
            out.add((tuple(src[s1:s2 + 1]), tuple(tgt[t1:t2 + 1])))
    return out


@dataclass
class PhraseTable:
    """``rules[source_phrase][target_phrase] = log_prob``.

    Rules listed in ``dictionary_rules`` were injected from a lexicon and may
    exceed ``max_phrase_len``.
    """

    rules: dict[Sentence, dict[Sentence, float]] = field(default_factory=dict)
    max_phrase_len: int = 3
    dictionary_rules: set[PhrasePair] = field(default_factory=set)

    def options(self, source_phrase: Sentence) -> dict[Sentence, float]:
        return self.rules.get(source_phrase, {})

    def add(self, source: Sentence, target: Sentence, log_prob: float) -> None:
        if log_prob > 0:
            raise ValueError(f"log prob must be <= 0, got {log_prob}")
        opts = self.rules.setdefault(source, {})
        if target not in opts or log_prob > opts[target]:
            opts[target] = log_prob

    @property
    def longest_source(self) -> int:
        return max((len(s) for s in self.rules), default=0)

    def __len__(self) -> int:
        return sum(len(v) for v in self.rules.values())

    def __contains__(self, rule: PhrasePair) -> bool:
        return rule[1] in self.rules.get(rule[0], {})

    def copy(self) -> "PhraseTable":
        return PhraseTable({s: dict(o) for s, o in self.rules.items()},
                           self.max_phrase_len, set(self.dictionary_rules))

    def dump(self) -> str:
        """One ``src ||| tgt ||| logprob`` rule per line, sorted by source then target.

        Dictionary rules get a fourth ``||| dic`` field. ``repr`` keeps floats bit-exact.
        """
        lines = [f"# max_phrase_len {self.max_phrase_len}\n"]
        for src in sorted(self.rules):
            for tgt in sorted(self.rules[src]):
                line = f"{' '.join(src)} ||| {' '.join(tgt)} ||| {self.rules[src][tgt]!r}"
                if (src, tgt) in self.dictionary_rules:
                    line += " ||| dic"
                lines.append(line + "\n")
        return "".join(lines)

    @classmethod
    def load(cls, text: str) -> "PhraseTable":
        table = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line:
                continue
            if line.startswith("# max_phrase_len "):
                table.max_phrase_len = int(line.split()[-1])
                continue
            fields = line.split(" ||| ")
            if len(fields) not in (3, 4):
                raise InputError(f"phrase table line {lineno}: expected 'src ||| tgt ||| logprob'")
            src, tgt = tokenize_line(fields[0]), tokenize_line(fields[1])
            table.rules.setdefault(src, {})[tgt] = float(fields[2])
            if len(fields) == 4 and fields[3] == "dic":
                table.dictionary_rules.add((src, tgt))
        return table


def score_phrase_table(extracted: Iterable[PhrasePair] | Counter, max_phrase_len: int = 3) -> PhraseTable:
    """Relative frequency count(s, t) / count(s, ·), stored as natural log."""
    counts = extracted if isinstance(extracted, Counter) else Counter(extracted)
    per_source: Counter = Counter()
    for (src, _), c in counts.items():
        per_source[src] += c
    table = PhraseTable(max_phrase_len=max_phrase_len)
    for (src, tgt), c in sorted(counts.items()):
        table.add(src, tgt, math.log(c / per_source[src]))
    return table


def merge_dictionary(table: PhraseTable, dic: BilingualDictionary, floor_prob: float = 1.0) -> PhraseTable:
    """Return a copy of ``table`` where every lexicon entry scores at least ``log(floor_prob)``."""
    if not 0.0 < floor_prob <= 1.0:
        raise InputError("floor_prob must be in (0, 1]")
    merged = table.copy()
    floor = math.log(floor_prob)
    for entry in dic.entries:
        merged.add(entry.source_phrase, entry.target_phrase, floor)
        merged.dictionary_rules.add((entry.source_phrase, entry.target_phrase))
    return merged
