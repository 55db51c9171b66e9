"""Miniature phrase-based translator used to synthesize pseudo sentence pairs."""

from .decoder import DecoderConfig, Translation, decode, forced_spans
from .lm import NGramLM, train_lm
from .model1 import Alignment, TranslationTable, corpus_log_likelihood, train_model1, viterbi_align
from .phrases import PhraseTable, extract_phrases, merge_dictionary, score_phrase_table
from .translator import SMTConfig, Translator, train_smt

__all__ = [
    "Alignment", "DecoderConfig", "NGramLM", "PhraseTable", "SMTConfig", "Translation",
    "TranslationTable", "Translator", "corpus_log_likelihood", "decode", "extract_phrases",
    "forced_spans", "merge_dictionary", "score_phrase_table", "train_lm", "train_model1",
    "train_smt", "viterbi_align",
]
