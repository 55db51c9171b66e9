"""Monotone phrase-based beam search.

Hypotheses are grouped into stacks by the number of source words covered.
Expanding a hypothesis translates the next source span with one phrase
option; the score of a derivation is

    λ_tm·Σ log p(t|s) + λ_lm·Σ log p_lm + word_penalty·|output|

with the LM also scoring the end-of-sentence token. Hypotheses sharing a
position and LM state are recombined (equal scores are all kept so that the
lexicographic tie-break stays exact).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..corpus import InputError, Sentence, find_phrase, format_sentence
from .lm import EOS, NGramLM
from .phrases import PhraseTable


@dataclass(frozen=True)
class DecoderConfig:
    beam_size: int | None = 10  # None: no pruning
    tm_weight: float = 1.0
    lm_weight: float = 1.0
    word_penalty: float = 0.0
    copy_oov: bool = True

    def __post_init__(self):
        if self.beam_size is not None and self.beam_size < 1:
            raise InputError("beam_size must be >= 1")


@dataclass(frozen=True)
class Step:
    source: Sentence
    target: Sentence
    tm_logprob: float
    forced: bool = False


@dataclass(frozen=True)
class Translation:
    output: Sentence
    score: float
    steps: tuple[Step, ...]

    @property
    def text(self) -> str:
        return format_sentence(self.output)


@dataclass(frozen=True)
class _Hyp:
    score: float
    state: tuple[str, ...]
    output: Sentence
    steps: tuple[Step, ...]

    @property
    def key(self):
        return (-self.score, format_sentence(self.output))


def forced_spans(source: Sequence[str], constraints: Mapping[Sentence, Sentence]) -> dict[int, tuple[int, Sentence]]:
    """Map span start -> (span end, forced target) for every constrained phrase.

    Occurrences are claimed greedily left to right without overlap; longer
    constraint phrases win at the same start position.
    """
    hits: list[tuple[int, int, Sentence]] = []
    for phrase, target in constraints.items():
        i = find_phrase(source, phrase)
        while i >= 0:
            hits.append((i, i + len(phrase), target))
            i = find_phrase(source, phrase, i + 1)
    hits.sort(key=lambda h: (h[0], -(h[1] - h[0])))
    spans, covered_to = {}, 0
    for start, end, target in hits:
        if start >= covered_to:
            spans[start] = (end, target)
            covered_to = end
    return spans


def phrase_options(source: Sequence[str], table: PhraseTable, cfg: DecoderConfig,
                   constraints: Mapping[Sentence, Sentence] | None = None
                   ) -> dict[int, list[tuple[int, Step]]]:
    """All translation steps available from each source position: start -> [(end, step)]."""
    n = len(source)
    spans = forced_spans(source, constraints) if constraints else {}
    inside = {i for s, (e, _) in spans.items() for i in range(s + 1, e)}
    blocked = set(inside) | set(spans)
    max_len = max(table.longest_source, 1)
    options: dict[int, list[tuple[int, Step]]] = {}
    for i in range(n):
        if i in inside:
            continue
        opts = []
        if i in spans:
            end, target = spans[i]
            src = tuple(source[i:end])
            lp = table.options(src).get(target, 0.0)
            opts.append((end, Step(src, target, lp, forced=True)))
        else:
            for j in range(i + 1, min(n, i + max_len) + 1):
                if j > i + 1 and any(k in blocked for k in range(i + 1, j)):
                    break
                src = tuple(source[i:j])
                for tgt, lp in sorted(table.options(src).items()):
                    opts.append((j, Step(src, tgt, lp)))
            if not table.options((source[i],)):
                tgt = (source[i],) if cfg.copy_oov else ()
                opts.append((i + 1, Step((source[i],), tgt, 0.0)))
        options[i] = opts
    return options


def step_score(step: Step, state: tuple[str, ...], lm: NGramLM, cfg: DecoderConfig,
               final: bool) -> tuple[float, tuple[str, ...]]:
    lm_total = 0.0
    for w in step.target:
        state, lp = lm.score(state, w)
        lm_total += lp
    if final:
        state, lp = lm.score(state, EOS)
        lm_total += lp
    return (cfg.tm_weight * step.tm_logprob + cfg.lm_weight * lm_total
            + cfg.word_penalty * len(step.target)), state


def decode(source: Sequence[str], table: PhraseTable, lm: NGramLM,
           cfg: DecoderConfig = DecoderConfig(),
           constraints: Mapping[Sentence, Sentence] | None = None) -> Translation:
    """Best monotone translation of ``source``.

    ``constraints`` maps source phrases to the only target allowed for spans
    matching them. Score ties are broken by the lexicographically smaller
    output string.
    """
    source = tuple(source)
    n = len(source)
    options = phrase_options(source, table, cfg, constraints)
    stacks: list[dict[tuple, list[_Hyp]]] = [dict() for _ in range(n + 1)]
    start = _Hyp(0.0, lm.initial_state(), (), ())
    stacks[0][(start.state,)] = [start]
    if n == 0:
        score, _ = step_score(Step((), (), 0.0), start.state, lm, cfg, final=True)
        return Translation((), score, ())

    for i in range(n):
        hyps = _prune([h for group in stacks[i].values() for h in group], cfg.beam_size)
        for hyp in hyps:
            for end, step in options.get(i, ()):
                delta, state = step_score(step, hyp.state, lm, cfg, final=end == n)
                new = _Hyp(hyp.score + delta, state, hyp.output + step.target, hyp.steps + (step,))
                _recombine(stacks[end], new)

    finals = [h for group in stacks[n].values() for h in group]
    best = min(finals, key=lambda h: h.key)
    return Translation(best.output, best.score, best.steps)


def _recombine(stack: dict[tuple, list[_Hyp]], hyp: _Hyp) -> None:
    key = (hyp.state,)
    group = stack.get(key)
    if group is None or hyp.score > group[0].score:
        stack[key] = [hyp]
    elif hyp.score == group[0].score:
        if all(h.output != hyp.output for h in group):
            group.append(hyp)


def _prune(hyps: list[_Hyp], beam_size: int | None) -> list[_Hyp]:
    hyps.sort(key=lambda h: h.key)
    return hyps if beam_size is None else hyps[:beam_size]


def contains_target(translation: Translation, phrase: Sentence) -> bool:
    return find_phrase(translation.output, phrase) >= 0

