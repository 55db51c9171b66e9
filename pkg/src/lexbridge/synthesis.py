"""Pseudo sentence-pair synthesis from a dictionary and monolingual text.

For every lexicon entry, up to K monolingual sentences containing the
source phrase are retrieved and translated with a small phrase-based
system that knows the dictionary. If the translation misses the target
phrase, the sentence is decoded again with the entry's rule forced onto
every occurrence of its source phrase.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .corpus import (
    BilingualDictionary,
    InputError,
    LexiconEntry,
    ParallelCorpus,
    Sentence,
    SentencePair,
    build_vocabulary,
    find_phrase,
    format_sentence,
)
from .mixed_wc import DEFAULT_SCHEME, MarkerScheme, transform_training_data
from .monoindex import InvertedIndex, retrieve
from .smt.phrases import merge_dictionary
from .smt.translator import SMTConfig, Translator, train_smt

logger = logging.getLogger(__name__)


def dictionary_pairs(dic: BilingualDictionary) -> ParallelCorpus:
    return ParallelCorpus([SentencePair(e.source_phrase, e.target_phrase) for e in dic.entries])


def build_pbmt(bitext: ParallelCorpus, dic: BilingualDictionary | None,
               config: SMTConfig = SMTConfig()) -> Translator:
    """Train on bitext plus dictionary-as-pairs, then force-insert the dictionary rules.

    The LM only sees the bitext targets.
    """
    if not bitext.pairs:
        raise InputError("build_pbmt needs a non-empty bitext")
    dic = dic or BilingualDictionary()
    training = ParallelCorpus(bitext.pairs + dictionary_pairs(dic).pairs)
    translator = train_smt(training, config, lm_corpus=bitext)
    if len(dic):
        translator.phrase_table = merge_dictionary(translator.phrase_table, dic, config.floor_prob)
    return translator


@dataclass(frozen=True)
class PseudoPair:
    source: Sentence
    target: Sentence
    entry: LexiconEntry
    mono_id: int
    forced: bool = False

    @property
    def complete(self) -> bool:
        return (find_phrase(self.source, self.entry.source_phrase) >= 0
                and find_phrase(self.target, self.entry.target_phrase) >= 0)


@dataclass(frozen=True)
class EntryDiagnostics:
    entry: LexiconEntry
    retrieved: int
    forced: int
    missing_target: int  # only non-zero when forcing is disabled


@dataclass
class PseudoCorpus:
    pairs: list[PseudoPair] = field(default_factory=list)
    diagnostics: list[EntryDiagnostics] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def per_entry_counts(self) -> dict[LexiconEntry, int]:
        counts: dict[LexiconEntry, int] = {}
        for p in self.pairs:
            counts[p.entry] = counts.get(p.entry, 0) + 1
        return counts

    @property
    def zero_match_entries(self) -> list[LexiconEntry]:
        return [d.entry for d in self.diagnostics if d.retrieved == 0]

    def as_parallel(self) -> ParallelCorpus:
        return ParallelCorpus([SentencePair(p.source, p.target) for p in self.pairs])

    def provenance(self) -> str:
        """``pair_index<TAB>entry_source<TAB>entry_target<TAB>mono_id<TAB>forced`` lines."""
        return "".join(
            f"{i}\t{format_sentence(p.entry.source_phrase)}\t{format_sentence(p.entry.target_phrase)}"
            f"\t{p.mono_id}\t{int(p.forced)}\n"
            for i, p in enumerate(self.pairs))


def _synthesize_entry(entry: LexiconEntry, index: InvertedIndex, pbmt: Translator, k: int,
                      max_len: int, policy: str, seed: int, force: bool
                      ) -> tuple[list[PseudoPair], EntryDiagnostics]:
    ids = retrieve(index, entry.source_phrase, k, max_len, policy, seed)
    pairs, forced, missing = [], 0, 0
    for sid in ids:
        source = index.store[sid]
        result = pbmt.translate(source)
        was_forced = False
        if find_phrase(result.output, entry.target_phrase) < 0:
            if force:
                result = pbmt.translate(source, {entry.source_phrase: entry.target_phrase})
                was_forced = True
                forced += 1
            else:
                missing += 1
        pairs.append(PseudoPair(source, result.output, entry, sid, was_forced))
    return pairs, EntryDiagnostics(entry, len(ids), forced, missing)


def synthesize(dic: BilingualDictionary, index: InvertedIndex, pbmt: Translator, k: int,
               max_len: int = 50, policy: str = "shortest", seed: int = 0,
               force: bool = True, threads: int = 1) -> PseudoCorpus:
    """Emit up to ``k`` pseudo pairs per lexicon entry, in dictionary order.

    ``force=False`` reproduces translation without the dictionary guarantee
    (the plain pseudo setting); pairs may then lack the target phrase.
    """
    if k < 0:
        raise InputError("k must be >= 0")

    def work(entry):
        return _synthesize_entry(entry, index, pbmt, k, max_len, policy, seed, force)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, dic.entries))
    else:
        results = [work(e) for e in dic.entries]

    corpus = PseudoCorpus()
    for pairs, diag in results:
        corpus.pairs.extend(pairs)
        corpus.diagnostics.append(diag)
        if diag.retrieved == 0:
            logger.info("no monolingual match", extra={"stage": "synthesize", "entry": str(diag.entry),
                                                     "event": "zero_match"})
    return corpus


@dataclass(frozen=True)
class MixedSpec:
    """Re-run the mixed word/character transform over a combined corpus."""

    u_src: int
    u_tgt: int
    scheme: MarkerScheme = DEFAULT_SCHEME
    dictionary: BilingualDictionary | None = None
    include_dic: bool = False


def combine(bitext: ParallelCorpus, pseudo: PseudoCorpus | ParallelCorpus | Iterable[SentencePair],
            mixed: MixedSpec | None = None) -> ParallelCorpus:
    """Bitext followed by the pseudo pairs, optionally mixed-transformed.

    With ``mixed``, vocabularies are recomputed over the concatenation.
    """
    if isinstance(pseudo, PseudoCorpus):
        extra = pseudo.as_parallel().pairs
    elif isinstance(pseudo, ParallelCorpus):
        extra = pseudo.pairs
    else:
        extra = list(pseudo)
    out = ParallelCorpus(list(bitext.pairs) + list(extra))
    if mixed is None:
        return out
    src_vocab = build_vocabulary(out.sources(), mixed.u_src)
    tgt_vocab = build_vocabulary(out.targets(), mixed.u_tgt)
    return transform_training_data(out, mixed.dictionary, src_vocab, tgt_vocab,
                                   mixed.include_dic, mixed.scheme)
