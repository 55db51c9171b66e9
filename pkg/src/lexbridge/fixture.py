"""Seeded synthetic data set for tests and demos.

A 200-word source language translates word for word (monotone) into a
200-word target language, with word frequencies following a Zipf curve.
Twenty rare source words never occur in the bitext; they appear only in the
dictionary and in the monolingual corpus, each in a fixed number of
sentences so that K sweeps have a visible effect.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import BilingualDictionary, LexiconEntry, MonolingualCorpus, ParallelCorpus, Sentence, SentencePair

# Monolingual occurrences of each rare word; includes one word with no match.
RARE_MATCHES = (2, 5, 8, 10, 12, 15, 20, 25, 30, 35, 40, 45, 50, 3, 7, 18, 28, 42, 60, 0)


@dataclass
class Fixture:
    bitext: ParallelCorpus
    dictionary: BilingualDictionary
    monolingual: MonolingualCorpus
    heldout: ParallelCorpus  # one sentence per rare word, with its reference
    rare: list[LexiconEntry]

    def write(self, directory: str | Path, mode: str = "pseudo-mixed-dic", k: int = 10) -> Path:
        """Write corpus files plus a ready-to-run ``config.json``; returns the config path."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)

        def lines(sents):
            return "".join(" ".join(s) + "\n" for s in sents)

        (d / "bitext.src").write_text(lines(self.bitext.sources()), encoding="utf-8")
        (d / "bitext.tgt").write_text(lines(self.bitext.targets()), encoding="utf-8")
        (d / "dictionary.tsv").write_text(self.dictionary.dump(), encoding="utf-8")
        (d / "mono.src").write_text(lines(self.monolingual.sentences), encoding="utf-8")
        (d / "heldout.src").write_text(lines(self.heldout.sources()), encoding="utf-8")
        (d / "heldout.ref").write_text(lines(self.heldout.targets()), encoding="utf-8")
        config = {
            "mode": mode,
            "paths": {
                "bitext_source": "bitext.src",
                "bitext_target": "bitext.tgt",
                "dictionary": "dictionary.tsv",
                "monolingual": "mono.src",
                "output_dir": "out",
            },
            "thresholds": {"source": 5, "target": 5},
            "K": k,
        }
        path = d / "config.json"
        path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
        return path


def src_word(i: int) -> str:
    return f"s{i:03d}"


def tgt_word(i: int) -> str:
    return f"t{i:03d}"


def make_fixture(seed: int = 0, n_words: int = 200, n_pairs: int = 2000, n_mono: int = 5000,
                 rare_matches: tuple[int, ...] = RARE_MATCHES, n_common_entries: int = 10,
                 zipf: float = 1.1) -> Fixture:
    rng = random.Random(seed)
    weights = [1.0 / (r + 1) ** zipf for r in range(n_words)]
    ranks = list(range(n_words))

    def sentence_ids(lo=3, hi=9):
        return rng.choices(ranks, weights, k=rng.randint(lo, hi))

    def pair_from(ids) -> SentencePair:
        return SentencePair(tuple(src_word(i) for i in ids), tuple(tgt_word(i) for i in ids))

    bitext = ParallelCorpus([pair_from(sentence_ids()) for _ in range(n_pairs)])

    rare = [LexiconEntry((f"r{i:02d}",), (f"x{i:02d}",)) for i in range(len(rare_matches))]
    common = [LexiconEntry((src_word(i),), (tgt_word(i),)) for i in range(n_common_entries)]
    dictionary = BilingualDictionary(common[: n_common_entries // 2] + rare + common[n_common_entries // 2:])

    mono: list[list[str]] = [[src_word(i) for i in sentence_ids(3, 12)] for _ in range(n_mono)]
    if sum(rare_matches) > n_mono:
        raise ValueError("not enough monolingual sentences for the requested rare matches")
    hosts = rng.sample(range(n_mono), sum(rare_matches))
    pos = 0
    for entry, m in zip(rare, rare_matches):
        for sid in hosts[pos:pos + m]:
            sent = mono[sid]
            sent[rng.randrange(len(sent))] = entry.source_phrase[0]
        pos += m
    monolingual = MonolingualCorpus([tuple(s) for s in mono])

    heldout = []
    for entry in rare:
        ids = sentence_ids(4, 8)
        at = rng.randrange(len(ids))
        src: Sentence = tuple(entry.source_phrase[0] if j == at else src_word(i) for j, i in enumerate(ids))
        tgt: Sentence = tuple(entry.target_phrase[0] if j == at else tgt_word(i) for j, i in enumerate(ids))
        heldout.append(SentencePair(src, tgt))

    return Fixture(bitext, dictionary, monolingual, ParallelCorpus(heldout), rare)
