"""The trained translator bundle: phrase table + LM + decoder settings."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from ..corpus import InputError, ParallelCorpus, Sentence
from .decoder import DecoderConfig, Translation, decode
from .lm import NGramLM, train_lm
from .model1 import TranslationTable, reversed_corpus, train_model1, viterbi_align
from .phrases import PhraseTable, extract_phrases, score_phrase_table


@dataclass(frozen=True)
class SMTConfig:
    iterations: int = 5
    use_null: bool = True
    max_phrase_len: int = 3
    order: int = 3
    alpha: float = 0.4
    floor_prob: float = 1.0
    beam: int = 10
    tm_weight: float = 1.0
    lm_weight: float = 1.0
    word_penalty: float = 0.0
    copy_oov: bool = True

    def decoder_config(self) -> DecoderConfig:
        return DecoderConfig(self.beam, self.tm_weight, self.lm_weight, self.word_penalty, self.copy_oov)


@dataclass
class Translator:
    phrase_table: PhraseTable
    lm: NGramLM
    config: SMTConfig = field(default_factory=SMTConfig)
    forward: TranslationTable | None = None
    backward: TranslationTable | None = None

    def translate(self, source: Sequence[str],
                  constraints: Mapping[Sentence, Sentence] | None = None) -> Translation:
        return decode(source, self.phrase_table, self.lm, self.config.decoder_config(), constraints)

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "phrase_table.txt").write_text(self.phrase_table.dump(), encoding="utf-8")
        (directory / "lm.txt").write_text(self.lm.dump(), encoding="utf-8")
        (directory / "config.json").write_text(
            json.dumps(asdict(self.config), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        if self.forward is not None:
            (directory / "model1.fwd.tsv").write_text(self.forward.dump(), encoding="utf-8")
        if self.backward is not None:
            (directory / "model1.bwd.tsv").write_text(self.backward.dump(), encoding="utf-8")

    @classmethod
    def load(cls, directory: str | Path) -> "Translator":
        directory = Path(directory)
        try:
            table = PhraseTable.load((directory / "phrase_table.txt").read_text(encoding="utf-8"))
            lm = NGramLM.load((directory / "lm.txt").read_text(encoding="utf-8"))
            cfg = SMTConfig(**json.loads((directory / "config.json").read_text(encoding="utf-8")))
        except FileNotFoundError as exc:
            raise InputError(f"incomplete translator directory: {exc.filename}") from None
        return cls(table, lm, cfg)


def train_smt(corpus: ParallelCorpus, config: SMTConfig = SMTConfig(),
              lm_corpus: ParallelCorpus | None = None) -> Translator:
    """Model 1 both ways, intersected Viterbi alignments, phrase extraction, LM.

    The LM is trained on the target side of ``lm_corpus`` (defaults to ``corpus``).
    """
    if not corpus.pairs:
        raise InputError("cannot train a translator on an empty corpus")
    forward = train_model1(corpus, config.iterations, config.use_null)
    backward = train_model1(reversed_corpus(corpus), config.iterations, config.use_null)
    extracted: Counter = Counter()
    for pair in corpus.pairs:
        fwd = viterbi_align(forward, pair)
        bwd = viterbi_align(backward, type(pair)(pair.target, pair.source)).flipped()
        extracted.update(extract_phrases(pair, fwd, bwd, config.max_phrase_len))
    table = score_phrase_table(extracted, config.max_phrase_len)
    lm = train_lm((lm_corpus or corpus).targets(), config.order, config.alpha)
    return Translator(table, lm, config, forward, backward)


def validate_smt_config(cfg: SMTConfig) -> list[str]:
    errors = []
    if cfg.iterations < 0:
        errors.append("iterations: must be >= 0")
    if cfg.max_phrase_len < 1:
        errors.append("max_phrase_len: must be >= 1")
    if cfg.order < 1:
        errors.append("order: must be >= 1")
    if not 0.0 < cfg.alpha < 1.0:
        errors.append("alpha: must be in (0, 1)")
    if not 0.0 < cfg.floor_prob <= 1.0:
        errors.append("floor_prob: must be in (0, 1]")
    if cfg.beam < 1:
        errors.append("beam: must be >= 1")
    for name in ("tm_weight", "lm_weight", "word_penalty"):
        if not math.isfinite(getattr(cfg, name)):
            errors.append(f"{name}: must be finite")
    return errors
