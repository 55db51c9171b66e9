"""Corpus ingestion, frequency-thresholded vocabularies and dictionary filtering.

Sentences are plain tuples of token strings. Input text is expected to be
tokenized already (one sentence per line, tokens separated by whitespace).
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

Sentence = tuple[str, ...]


class InputError(ValueError):
    """Malformed user-supplied data (files, tokens, config values)."""


class AlignmentError(InputError):
    """Parallel streams that do not line up."""


def check_token(token: str) -> str:
    if not token:
        raise InputError("empty token")
    if any(ch.isspace() for ch in token):
        raise InputError(f"token contains whitespace: {token!r}")
    return token


def make_sentence(tokens: Iterable[str]) -> Sentence:
    return tuple(check_token(t) for t in tokens)


def tokenize_line(line: str) -> Sentence:
    return tuple(line.split())


def format_sentence(sentence: Sequence[str]) -> str:
    return " ".join(sentence)


@dataclass(frozen=True)
class SentencePair:
    source: Sentence
    target: Sentence

    def __post_init__(self):
        if not self.source or not self.target:
            raise InputError("sentence pair with an empty side")


@dataclass
class ParallelCorpus:
    pairs: list[SentencePair] = field(default_factory=list)
    dropped: int = 0
    skipped_empty: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def sources(self) -> Iterator[Sentence]:
        return (p.source for p in self.pairs)

    def targets(self) -> Iterator[Sentence]:
        return (p.target for p in self.pairs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Sequence[str], Sequence[str]]]) -> "ParallelCorpus":
        return cls([SentencePair(make_sentence(s), make_sentence(t)) for s, t in pairs])


@dataclass
class MonolingualCorpus:
    """Sentences with dense ids ``0..M-1`` assigned in ingestion order."""

    sentences: list[Sentence] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.sentences)

    def __getitem__(self, sid: int) -> Sentence:
        return self.sentences[sid]

    @property
    def ids(self) -> range:
        return range(len(self.sentences))


def ingest_parallel(source_lines: Iterable[str], target_lines: Iterable[str],
                    max_len: int | None = None) -> ParallelCorpus:
    """Read two line-aligned, pre-tokenized streams into a corpus.

    Pairs where either side exceeds ``max_len`` tokens are dropped and counted
    in ``corpus.dropped``. Pairs with an empty side are skipped and counted in
    ``corpus.skipped_empty``.
    """
    if max_len is not None and max_len < 1:
        raise InputError("max_len must be a positive integer")
    corpus = ParallelCorpus()
    src_iter, tgt_iter = iter(source_lines), iter(target_lines)
    lineno = 0
    sentinel = object()
    while True:
        s_line = next(src_iter, sentinel)
        t_line = next(tgt_iter, sentinel)
        if s_line is sentinel and t_line is sentinel:
            break
        lineno += 1
        if s_line is sentinel or t_line is sentinel:
            raise AlignmentError(f"unequal line counts: streams diverge at line {lineno}")
        src, tgt = tokenize_line(s_line), tokenize_line(t_line)
        if not src or not tgt:
            corpus.skipped_empty += 1
            logger.warning("skipping empty line %d", lineno)
            continue
        if max_len is not None and (len(src) > max_len or len(tgt) > max_len):
            corpus.dropped += 1
            continue
        corpus.pairs.append(SentencePair(src, tgt))
    if corpus.dropped:
        logger.info("dropped %d pairs longer than %d tokens", corpus.dropped, max_len)
    return corpus


def ingest_monolingual(lines: Iterable[str]) -> MonolingualCorpus:
    """Empty lines are skipped, so ids stay dense."""
    corpus = MonolingualCorpus()
    for line in lines:
        sent = tokenize_line(line)
        if sent:
            corpus.sentences.append(sent)
    return corpus


@dataclass(frozen=True)
class Vocabulary:
    counts: dict[str, int]
    threshold: int
    kept: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.kept

    def __len__(self) -> int:
        return len(self.kept)

    @property
    def total_tokens(self) -> int:
        return sum(self.counts.values())

    def dump(self) -> str:
        """``word<TAB>count`` lines, descending count then lexicographic."""
        rows = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return "".join(f"{w}\t{c}\n" for w, c in rows)

    @classmethod
    def load(cls, text: str, threshold: int) -> "Vocabulary":
        counts = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line:
                continue
            try:
                word, count = line.split("\t")
                counts[check_token(word)] = int(count)
            except ValueError as exc:
                raise InputError(f"vocabulary line {lineno}: {exc}") from None
        return vocabulary_from_counts(counts, threshold)


def vocabulary_from_counts(counts: dict[str, int], threshold: int) -> Vocabulary:
    if threshold < 1:
        raise InputError("threshold must be >= 1")
    kept = frozenset(w for w, c in counts.items() if c >= threshold)
    return Vocabulary(dict(counts), threshold, kept)


def build_vocabulary(sentences: Iterable[Sequence[str]], threshold: int) -> Vocabulary:
    """Count tokens and keep every word seen at least ``threshold`` times."""
    if threshold < 1:
        raise InputError("threshold must be >= 1")
    counts: Counter[str] = Counter()
    for sent in sentences:
        counts.update(sent)
    return vocabulary_from_counts(dict(counts), threshold)


def merge_counts(shards: Iterable[dict[str, int]]) -> dict[str, int]:
    # Counter addition is order-independent, so sharded counting merges deterministically.
    total: Counter[str] = Counter()
    for shard in shards:
        total.update(shard)
    return dict(total)


def is_oov(word: str, vocab: Vocabulary) -> bool:
    check_token(word)
    return word not in vocab.kept


@dataclass(frozen=True)
class LexiconEntry:
    source_phrase: Sentence
    target_phrase: Sentence

    def __post_init__(self):
        if not self.source_phrase or not self.target_phrase:
            raise InputError("lexicon entry with an empty side")

    def __str__(self) -> str:
        return f"{format_sentence(self.source_phrase)}\t{format_sentence(self.target_phrase)}"


class BilingualDictionary:
    """Lexicon entries in insertion order, exact duplicates removed."""

    def __init__(self, entries: Iterable[LexiconEntry] = ()):
        self.entries: list[LexiconEntry] = []
        self.by_source: dict[Sentence, list[Sentence]] = {}
        seen = set()
        for entry in entries:
            if entry in seen:
                continue
            seen.add(entry)
            self.entries.append(entry)
            self.by_source.setdefault(entry.source_phrase, []).append(entry.target_phrase)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, BilingualDictionary) and self.entries == other.entries

    def __repr__(self) -> str:
        return f"BilingualDictionary({len(self.entries)} entries)"

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str | Sequence[str], str | Sequence[str]]]) -> "BilingualDictionary":
        def phrase(p):
            return make_sentence(p.split() if isinstance(p, str) else p)
        return cls(LexiconEntry(phrase(s), phrase(t)) for s, t in pairs)

    def dump(self) -> str:
        return "".join(f"{e}\n" for e in self.entries)


def read_dictionary(lines: Iterable[str]) -> BilingualDictionary:
    """Parse ``source_phrase<TAB>target_phrase`` lines; blank lines are ignored."""
    entries = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputError(f"dictionary line {lineno}: expected 2 tab-separated fields, got {len(parts)}")
        src, tgt = tokenize_line(parts[0]), tokenize_line(parts[1])
        if not src or not tgt:
            raise InputError(f"dictionary line {lineno}: empty phrase")
        entries.append(LexiconEntry(src, tgt))
    return BilingualDictionary(entries)


def filter_dictionary(dic: BilingualDictionary, source_vocab: Vocabulary) -> BilingualDictionary:
    """Keep entries whose source phrase has at least one out-of-vocabulary token."""
    return BilingualDictionary(
        e for e in dic.entries if any(tok not in source_vocab.kept for tok in e.source_phrase)
    )


def contains_phrase(sentence: Sequence[str], phrase: Sequence[str]) -> bool:
    return find_phrase(sentence, phrase) >= 0


def find_phrase(sentence: Sequence[str], phrase: Sequence[str], start: int = 0) -> int:
    """Index of the first contiguous occurrence of ``phrase`` at or after ``start``, else -1."""
    n = len(phrase)
    if n == 0:
        return start if start <= len(sentence) else -1
    first = phrase[0]
    for i in range(start, len(sentence) - n + 1):
        if sentence[i] == first and tuple(sentence[i:i + n]) == tuple(phrase):
            return i
    return -1
