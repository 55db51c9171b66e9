"""Count-based n-gram language model scored with stupid backoff."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..corpus import InputError

BOS = "<s>"
EOS = "</s>"


@dataclass
class NGramLM:
    """n-gram counts over padded sentences.

    Every real token and the end token is a predicted position; the k-gram
    ending at each predicted position is counted for k = 1..order, so begin
    pads only ever occur in histories. ``context_counts[h]`` is the number of
    counted n-grams with history ``h``.
    """

    order: int
    backoff_factor: float = 0.4
    counts: list[Counter] = field(default_factory=list)  # counts[k-1]: k-grams
    context_counts: Counter = field(default_factory=Counter)

    def __post_init__(self):
        if self.order < 1:
            raise InputError("LM order must be >= 1")
        if not 0.0 < self.backoff_factor < 1.0:
            raise InputError("backoff factor must be in (0, 1)")
        if not self.counts:
            self.counts = [Counter() for _ in range(self.order)]

    def add_sentence(self, sentence: Sequence[str]) -> None:
        padded = [BOS] * (self.order - 1) + list(sentence) + [EOS]
        for i in range(self.order - 1, len(padded)):
            for k in range(1, self.order + 1):
                gram = tuple(padded[i - k + 1:i + 1])
                self.counts[k - 1][gram] += 1
                self.context_counts[gram[:-1]] += 1

    @property
    def vocab_size(self) -> int:
        return len(self.counts[0])

    @property
    def unseen_prob(self) -> float:
        return 1.0 / (self.vocab_size + 1)

    def initial_state(self) -> tuple[str, ...]:
        return (BOS,) * (self.order - 1)

    def prob(self, word: str, history: Sequence[str] = ()) -> float:
        """Stupid-backoff score of ``word`` after ``history``.

        Uses the longest history suffix whose extension by ``word`` was seen;
        each step down multiplies by the backoff factor. A word never seen at
        all scores ``factor**steps / (|V| + 1)``.
        """
        hist = tuple(history)[-(self.order - 1):] if self.order > 1 else ()
        penalty = 1.0
        for k in range(len(hist), -1, -1):
            h = hist[len(hist) - k:]
            c = self.counts[k].get(h + (word,), 0)
            if c:
                return penalty * c / self.context_counts[h]
            penalty *= self.backoff_factor
        return penalty / self.backoff_factor * self.unseen_prob

    def score(self, state: tuple[str, ...], word: str) -> tuple[tuple[str, ...], float]:
        """Advance ``state`` by ``word``; returns (new_state, log score)."""
        lp = math.log(self.prob(word, state))
        if self.order == 1:
            return state, lp
        return (state + (word,))[-(self.order - 1):], lp

    def sentence_logprob(self, sentence: Sequence[str]) -> float:
        state = self.initial_state()
        total = 0.0
        for w in (*sentence, EOS):
            state, lp = self.score(state, w)
            total += lp
        return total

    def dump(self) -> str:
        """Per-order blocks of ``ngram<TAB>count``."""
        lines = [f"# order {self.order}\n", f"# backoff {self.backoff_factor!r}\n"]
        for k, block in enumerate(self.counts, 1):
            lines.append(f"\\{k}-grams\n")
            for gram in sorted(block):
                lines.append(f"{' '.join(gram)}\t{block[gram]}\n")
        return "".join(lines)

    @classmethod
    def load(cls, text: str) -> "NGramLM":
        lines = text.splitlines()
        try:
            order = int(lines[0].split()[-1])
            backoff = float(lines[1].split()[-1])
        except (IndexError, ValueError):
            raise InputError("LM dump: missing '# order' / '# backoff' header") from None
        lm = cls(order, backoff)
        k = 0
        for lineno, line in enumerate(lines[2:], 3):
            if line.startswith("\\") and line.endswith("-grams"):
                k = int(line[1:-len("-grams")])
                continue
            if not line:
                continue
            gram_text, _, count = line.rpartition("\t")
            gram = tuple(gram_text.split())
            if len(gram) != k:
                raise InputError(f"LM dump line {lineno}: {len(gram)}-gram in the {k}-gram block")
            lm.counts[k - 1][gram] = int(count)
            lm.context_counts[gram[:-1]] += int(count)
        return lm


def train_lm(sentences: Iterable[Sequence[str]], order: int = 3, backoff_factor: float = 0.4) -> NGramLM:
    lm = NGramLM(order, backoff_factor)
    for sent in sentences:
        lm.add_sentence(sent)
    return lm
