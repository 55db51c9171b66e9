"""In-memory inverted index over a monolingual corpus.

Retrieval returns sentences containing a phrase as a contiguous token
sequence. By default the shortest matches win (ties by id); a seeded uniform
sample is available as ``policy="sample"``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import InputError, MonolingualCorpus, Sentence, find_phrase, format_sentence, tokenize_line

FORMAT_HEADER = "#lexbridge-monoindex"
FORMAT_VERSION = 1
POLICIES = ("shortest", "sample")


@dataclass
class InvertedIndex:
    store: MonolingualCorpus = field(default_factory=MonolingualCorpus)
    postings: dict[str, list[int]] = field(default_factory=dict)

    @property
    def sentence_lengths(self) -> list[int]:
        return [len(s) for s in self.store.sentences]

    def add(self, sentence: Sentence) -> int:
        sid = len(self.store.sentences)
        self.store.sentences.append(sentence)
        for tok in dict.fromkeys(sentence):
            self.postings.setdefault(tok, []).append(sid)
        return sid

    def candidates(self, phrase: Sequence[str]) -> list[int]:
        """Ids of sentences containing every token of ``phrase`` (ascending)."""
        lists = [self.postings.get(tok) for tok in dict.fromkeys(phrase)]
        if not lists or any(p is None for p in lists):
            return []
        lists.sort(key=len)
        result = lists[0]
        for other in lists[1:]:
            other_set = set(other)
            result = [sid for sid in result if sid in other_set]
        return list(result)

    def matches(self, phrase: Sequence[str], max_len: int | None = None) -> list[int]:
        phrase = tuple(phrase)
        sents = self.store.sentences
        return [sid for sid in self.candidates(phrase)
                if (max_len is None or len(sents[sid]) <= max_len) and find_phrase(sents[sid], phrase) >= 0]

    def serialize(self) -> str:
        """Line format::

            #lexbridge-monoindex<TAB>1<TAB><num sentences><TAB><num terms>
            <length><TAB><sentence>          (one line per sentence id)
            <term><TAB><id> <id> ...         (one line per term, sorted)
        """
        lines = [f"{FORMAT_HEADER}\t{FORMAT_VERSION}\t{len(self.store)}\t{len(self.postings)}\n"]
        lines.extend(f"{len(s)}\t{format_sentence(s)}\n" for s in self.store.sentences)
        for term in sorted(self.postings):
            lines.append(f"{term}\t{' '.join(map(str, self.postings[term]))}\n")
        return "".join(lines)

    @classmethod
    def deserialize(cls, text: str) -> "InvertedIndex":
        lines = text.split("\n")
        header = lines[0].split("\t")
        if len(header) != 4 or header[0] != FORMAT_HEADER:
            raise InputError("not a lexbridge index file")
        if int(header[1]) != FORMAT_VERSION:
            raise InputError(f"unsupported index version {header[1]}")
        n_sents, n_terms = int(header[2]), int(header[3])
        if len(lines) < 1 + n_sents + n_terms:
            raise InputError("truncated index file")
        index = cls()
        for lineno in range(1, n_sents + 1):
            length, _, text_ = lines[lineno].partition("\t")
            sent = tokenize_line(text_)
            if len(sent) != int(length):
                raise InputError(f"index line {lineno + 1}: length mismatch")
            index.store.sentences.append(sent)
        for line in lines[1 + n_sents:1 + n_sents + n_terms]:
            term, _, ids = line.partition("\t")
            index.postings[term] = [int(x) for x in ids.split()]
        return index


def build_index(corpus: MonolingualCorpus | Iterable[Sentence]) -> InvertedIndex:
    """Single streaming pass; ``corpus`` may be any iterable of sentences."""
    index = InvertedIndex()
    sentences = corpus.sentences if isinstance(corpus, MonolingualCorpus) else corpus
    for sent in sentences:
        index.add(tuple(sent))
    return index


def merge_indexes(shards: Sequence[InvertedIndex]) -> InvertedIndex:
    """Concatenate shard indexes in the given order, renumbering ids."""
    merged = InvertedIndex()
    for shard in shards:
        offset = len(merged.store)
        merged.store.sentences.extend(shard.store.sentences)
        for term, ids in shard.postings.items():
            merged.postings.setdefault(term, []).extend(i + offset for i in ids)
    return merged


def retrieve(index: InvertedIndex, phrase: Sequence[str], k: int, max_len: int = 50,
             policy: str = "shortest", seed: int = 0) -> list[int]:
    """Up to ``k`` ids of sentences (≤ ``max_len`` tokens) containing ``phrase``.

    ``shortest`` ranks by ascending length, then id. ``sample`` draws a
    uniform sample seeded by ``seed`` and the phrase, returned in id order.
    """
    if k < 0:
        raise InputError("k must be >= 0")
    if policy not in POLICIES:
        raise InputError(f"unknown selection policy {policy!r}")
    if k == 0 or not phrase:
        return []
    found = index.matches(phrase, max_len)
    if policy == "shortest":
        sents = index.store.sentences
        found.sort(key=lambda sid: (len(sents[sid]), sid))
        return found[:k]
    if len(found) <= k:
        return found
    rng = random.Random(f"{seed}\t{format_sentence(phrase)}")
    return sorted(rng.sample(found, k))
