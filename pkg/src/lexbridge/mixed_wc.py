"""Mixed word/character relabeling.

Frequent words pass through unchanged. Rare words are spelled out as
characters, each carrying a positional marker::

    oak -> ⟨B⟩o ⟨M⟩a ⟨E⟩k

A one-character rare word becomes a single begin-marked token. ``restore``
inverts the transform and tolerates malformed runs, which is what decoder
output tends to contain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import (
    BilingualDictionary,
    InputError,
    ParallelCorpus,
    Sentence,
    SentencePair,
    Vocabulary,
    check_token,
)


class MarkerCollisionError(InputError):
    def __init__(self, token: str, marker: str, line: int | None = None, side: str | None = None):
        self.token, self.marker, self.line, self.side = token, marker, line, side
        where = ""
        if line is not None:
            where = f"line {line}" + (f" ({side})" if side else "") + ": "
        super().__init__(f"{where}token {token!r} contains reserved marker {marker!r}")


@dataclass(frozen=True)
class MarkerScheme:
    begin: str = "⟨B⟩"
    middle: str = "⟨M⟩"
    end: str = "⟨E⟩"

    def __post_init__(self):
        markers = self.markers
        if any(not m or any(ch.isspace() for ch in m) for m in markers):
            raise InputError("markers must be non-empty and contain no whitespace")
        for a in markers:
            for b in markers:
                if a is not b and b.startswith(a):
                    raise InputError(f"marker {a!r} is a prefix of {b!r}")

    @property
    def markers(self) -> tuple[str, str, str]:
        return (self.begin, self.middle, self.end)

    def check(self, token: str) -> None:
        for m in self.markers:
            if m in token:
                raise MarkerCollisionError(token, m)

    def split(self, token: str) -> tuple[str | None, str]:
        """Return ``(marker, rest)``; marker is None for a plain token."""
        for m in self.markers:
            if token.startswith(m) and len(token) > len(m):
                return m, token[len(m):]
        return None, token


DEFAULT_SCHEME = MarkerScheme()


def relabel_word(word: str, scheme: MarkerScheme = DEFAULT_SCHEME) -> list[str]:
    check_token(word)
    scheme.check(word)
    chars = list(word)  # code points
    if len(chars) == 1:
        return [scheme.begin + chars[0]]
    out = [scheme.begin + chars[0]]
    out.extend(scheme.middle + ch for ch in chars[1:-1])
    out.append(scheme.end + chars[-1])
    return out


def relabel_sentence(sentence: Sequence[str], vocab: Vocabulary,
                     scheme: MarkerScheme = DEFAULT_SCHEME) -> Sentence:
    out: list[str] = []
    for tok in sentence:
        scheme.check(tok)
        if tok in vocab.kept:
            out.append(tok)
        else:
            out.extend(relabel_word(tok, scheme))
    return tuple(out)


@dataclass(frozen=True)
class Restored:
    sentence: Sentence
    repairs: int


def restore(tokens: Sequence[str], scheme: MarkerScheme = DEFAULT_SCHEME) -> Restored:
    """Concatenate marked runs back into words.

    Repair rules for malformed input (each counted once):

    * an ``M`` or ``E`` token with no open run becomes a standalone word;
    * a run that has middle characters but is interrupted before its ``E``
      token (by a plain token, a new ``B`` token or the end of input) is
      emitted as the word spelled so far.

    A lone ``B`` token followed by anything other than ``M``/``E`` is a
    complete one-character word and is not a repair.
    """
    out: list[str] = []
    repairs = 0
    run: list[str] | None = None

    def close_open_run():
        nonlocal run, repairs
        if run is not None:
            if len(run) > 1:
                repairs += 1
            out.append("".join(run))
            run = None

    for tok in tokens:
        marker, rest = scheme.split(tok)
        if marker is None:
            close_open_run()
            out.append(tok)
        elif marker == scheme.begin:
            close_open_run()
            run = [rest]
        elif run is None:
            repairs += 1
            out.append(rest)
        elif marker == scheme.middle:
            run.append(rest)
        else:
            run.append(rest)
            out.append("".join(run))
            run = None
    close_open_run()
    return Restored(tuple(out), repairs)


def is_well_formed(tokens: Sequence[str], scheme: MarkerScheme = DEFAULT_SCHEME) -> bool:
    """True iff every marked token sits in a run ``B M* E`` or is a lone ``B``."""
    state = "plain"  # plain | open (after B) | middle (after B M+)
    for tok in tokens:
        marker, _ = scheme.split(tok)
        if marker is None or marker == scheme.begin:
            if state == "middle":
                return False
            state = "plain" if marker is None else "open"
        elif marker == scheme.middle:
            if state == "plain":
                return False
            state = "middle"
        else:
            if state == "plain":
                return False
            state = "plain"
    return state != "middle"


def plain_tokens(tokens: Iterable[str], scheme: MarkerScheme = DEFAULT_SCHEME) -> list[str]:
    return [t for t in tokens if scheme.split(t)[0] is None]


def transform_training_data(corpus: ParallelCorpus, dic: BilingualDictionary | None,
                            src_vocab: Vocabulary, tgt_vocab: Vocabulary,
                            include_dic: bool = False,
                            scheme: MarkerScheme = DEFAULT_SCHEME) -> ParallelCorpus:
    """Relabel both sides of every pair; optionally append the lexicon as extra pairs.

    Marker collisions are re-raised with the 1-based line number (pairs first,
    then dictionary entries continuing the count).
    """
    out = ParallelCorpus()
    rows = [(p.source, p.target) for p in corpus.pairs]
    if include_dic and dic is not None:
        rows.extend((e.source_phrase, e.target_phrase) for e in dic.entries)
    for lineno, (src, tgt) in enumerate(rows, 1):
        side = "source"
        try:
            new_src = relabel_sentence(src, src_vocab, scheme)
            side = "target"
            new_tgt = relabel_sentence(tgt, tgt_vocab, scheme)
        except MarkerCollisionError as exc:
            raise MarkerCollisionError(exc.token, exc.marker, lineno, side) from None
        out.pairs.append(SentencePair(new_src, new_tgt))
    return out
