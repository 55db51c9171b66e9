"""Turn rare bilingual-dictionary entries into MT training data.

Two transforms are provided: mixed word/character relabeling of rare words,
and synthesis of pseudo sentence pairs by translating retrieved monolingual
sentences with a small dictionary-aware phrase-based system.
"""

from .corpus import (
    BilingualDictionary,
    LexiconEntry,
    MonolingualCorpus,
    ParallelCorpus,
    SentencePair,
    Vocabulary,
    build_vocabulary,
    filter_dictionary,
    ingest_parallel,
    is_oov,
)
from .evaluation import EvalSet, bleu, hit_rate, vocab_report
from .mixed_wc import MarkerScheme, relabel_sentence, relabel_word, restore, transform_training_data
from .monoindex import InvertedIndex, build_index, retrieve
from .synthesis import MixedSpec, PseudoCorpus, build_pbmt, combine, synthesize

__version__ = "0.1.0"
