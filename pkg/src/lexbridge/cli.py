"""Command-line entry point: ``lexbridge <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import load_config
from .corpus import (
    InputError,
    build_vocabulary,
    filter_dictionary,
    format_sentence,
    ingest_monolingual,
    ingest_parallel,
    read_dictionary,
    tokenize_line,
)
from .evaluation import EvalSet, bleu, hit_rate
from .fixture import make_fixture
from .mixed_wc import MarkerScheme, restore, transform_training_data
from .monoindex import InvertedIndex, build_index, retrieve
from .pipeline import InvariantError, StageError, run_pipeline, write_corpus
from .smt.translator import SMTConfig, Translator
from .synthesis import MixedSpec, build_pbmt, combine, synthesize

log = logging.getLogger("lexbridge")


def _lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.readlines()


def _sentences(path: str) -> list[tuple[str, ...]]:
    return [tokenize_line(line) for line in _lines(path)]


def _scheme(args) -> MarkerScheme:
    return MarkerScheme(args.begin_marker, args.middle_marker, args.end_marker)


def cmd_vocab(args) -> None:
    vocab = build_vocabulary(_sentences(args.input), args.threshold)
    text = vocab.dump()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    log.info("vocab: %d kept of %d types (u=%d)", len(vocab), len(vocab.counts), args.threshold)


def cmd_mixedwc(args) -> None:
    scheme = _scheme(args)
    if args.restore:
        repairs = 0
        out = []
        for sent in _sentences(args.source):
            r = restore(sent, scheme)
            repairs += r.repairs
            out.append(format_sentence(r.sentence) + "\n")
        sys.stdout.writelines(out)
        log.info("restore: %d malformed runs repaired", repairs)
        return
    if not args.target or not args.output_prefix:
        raise InputError("--target and --output-prefix are required unless --restore is given")
    corpus = ingest_parallel(_lines(args.source), _lines(args.target))
    src_vocab = build_vocabulary(corpus.sources(), args.u_src)
    tgt_vocab = build_vocabulary(corpus.targets(), args.u_tgt)
    dic = None
    if args.dictionary:
        dic = filter_dictionary(read_dictionary(_lines(args.dictionary)), src_vocab)
    out = transform_training_data(corpus, dic, src_vocab, tgt_vocab, args.include_dic, scheme)
    write_corpus(Path(args.output_prefix), out)


def cmd_index(args) -> None:
    index = build_index(ingest_monolingual(_lines(args.input)))
    Path(args.output).write_text(index.serialize(), encoding="utf-8")
    log.info("index: %d sentences, %d terms", len(index.store), len(index.postings))


def _load_index(path: str) -> InvertedIndex:
    return InvertedIndex.deserialize(Path(path).read_text(encoding="utf-8"))


def cmd_retrieve(args) -> None:
    index = _load_index(args.index)
    phrase = tokenize_line(args.phrase)
    for sid in retrieve(index, phrase, args.k, args.max_len, args.policy, args.seed):
        print(f"{sid}\t{format_sentence(index.store[sid])}")


def _smt_config(args) -> SMTConfig:
    return SMTConfig(iterations=args.iterations, max_phrase_len=args.max_phrase_len, order=args.order,
                     alpha=args.alpha, floor_prob=args.floor_prob, beam=args.beam)


def cmd_train_smt(args) -> None:
    bitext = ingest_parallel(_lines(args.source), _lines(args.target), args.max_len)
    dic = read_dictionary(_lines(args.dictionary)) if args.dictionary else None
    pbmt = build_pbmt(bitext, dic, _smt_config(args))
    pbmt.save(args.output)
    log.info("train-smt: %d phrase rules", len(pbmt.phrase_table))


def cmd_decode(args) -> None:
    pbmt = Translator.load(args.model)
    if args.beam is not None:
        pbmt.config = SMTConfig(**{**pbmt.config.__dict__, "beam": args.beam})
    for sent in _sentences(args.input):
        print(pbmt.translate(sent).text)


def cmd_synthesize(args) -> None:
    pbmt = Translator.load(args.model)
    index = _load_index(args.index)
    dic = read_dictionary(_lines(args.dictionary))
    pseudo = synthesize(dic, index, pbmt, args.k, args.max_len, args.policy, args.seed,
                        force=not args.no_force, threads=args.threads)
    prefix = Path(args.output_prefix)
    write_corpus(prefix, pseudo.as_parallel())
    prefix.with_name(prefix.name + ".provenance.tsv").write_text(pseudo.provenance(), encoding="utf-8")
    for entry in pseudo.zero_match_entries:
        log.warning("no monolingual sentence contains %r", format_sentence(entry.source_phrase))
    log.info("synthesize: %d pseudo pairs", len(pseudo))


def cmd_combine(args) -> None:
    bitext = ingest_parallel(_lines(args.bitext_source), _lines(args.bitext_target))
    pseudo = ingest_parallel(_lines(args.pseudo_source), _lines(args.pseudo_target))
    spec = MixedSpec(args.u_src, args.u_tgt, _scheme(args)) if args.mixed else None
    out = combine(bitext, pseudo, spec)
    write_corpus(Path(args.output_prefix), out)


def _eval_set(sources: str | None, hyp: str, refs: list[str]) -> EvalSet:
    hyps = _sentences(hyp)
    ref_sets = [_sentences(r) for r in refs]
    if any(len(r) != len(hyps) for r in ref_sets):
        raise InputError("reference files must be line-aligned with the hypotheses")
    srcs = _sentences(sources) if sources else [()] * len(hyps)
    if len(srcs) != len(hyps):
        raise InputError("source file must be line-aligned with the hypotheses")
    return EvalSet(srcs, [list(rs) for rs in zip(*ref_sets)] if ref_sets else [[h] for h in hyps], hyps)


def cmd_bleu(args) -> None:
    score = bleu(_eval_set(None, args.hyp, args.ref), args.max_order, not args.case_sensitive)
    print(f"BLEU\t{100 * score:.2f}")


def cmd_hitrate(args) -> None:
    dic = read_dictionary(_lines(args.dictionary))
    report = hit_rate(dic, _eval_set(args.source, args.hyp, args.ref or []), strict=args.strict)
    sys.stdout.write(report.render())


def cmd_run(args) -> None:
    cfg = load_config(args.config, args.set)
    if args.threads is not None:
        cfg = type(cfg)(**{**cfg.__dict__, "threads": args.threads})
    summary = run_pipeline(cfg)
    json.dump(summary, sys.stdout, indent=2, ensure_ascii=False, sort_keys=True)
    sys.stdout.write("\n")


def cmd_fixture(args) -> None:
    fx = make_fixture(args.seed)
    path = fx.write(args.output, args.mode, args.k)
    print(path)


def _add_marker_args(p) -> None:
    default = MarkerScheme()
    p.add_argument("--begin-marker", default=default.begin)
    p.add_argument("--middle-marker", default=default.middle)
    p.add_argument("--end-marker", default=default.end)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexbridge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab", help="count tokens and dump a vocabulary")
    p.add_argument("--input", required=True)
    p.add_argument("-u", "--threshold", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("mixedwc", help="mixed word/character transform (or --restore)")
    p.add_argument("--source", required=True)
    p.add_argument("--target")
    p.add_argument("--u-src", type=int, default=10)
    p.add_argument("--u-tgt", type=int, default=8)
    p.add_argument("--dictionary")
    p.add_argument("--include-dic", action="store_true")
    p.add_argument("--output-prefix")
    p.add_argument("--restore", action="store_true", help="restore words from marked text on --source")
    _add_marker_args(p)
    p.set_defaults(func=cmd_mixedwc)

    p = sub.add_parser("index", help="build an inverted index over monolingual text")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("retrieve", help="query an index for sentences containing a phrase")
    p.add_argument("--index", required=True)
    p.add_argument("--phrase", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--max-len", type=int, default=50)
    p.add_argument("--policy", choices=("shortest", "sample"), default="shortest")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_retrieve)

    def smt_args(p):
        d = SMTConfig()
        p.add_argument("--iterations", type=int, default=d.iterations)
        p.add_argument("--max-phrase-len", type=int, default=d.max_phrase_len)
        p.add_argument("--order", type=int, default=d.order)
        p.add_argument("--alpha", type=float, default=d.alpha)
        p.add_argument("--floor-prob", type=float, default=d.floor_prob)
        p.add_argument("--beam", type=int, default=d.beam)

    p = sub.add_parser("train-smt", help="train the phrase-based translator")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--dictionary")
    p.add_argument("--max-len", type=int, default=50)
    p.add_argument("--output", required=True)
    smt_args(p)
    p.set_defaults(func=cmd_train_smt)

    p = sub.add_parser("decode", help="translate sentences with a trained translator")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--beam", type=int)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("synthesize", help="synthesize pseudo sentence pairs")
    p.add_argument("--model", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--dictionary", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--max-len", type=int, default=50)
    p.add_argument("--policy", choices=("shortest", "sample"), default="shortest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-force", action="store_true", help="do not re-decode with the dictionary rule forced")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output-prefix", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("combine", help="append pseudo pairs to the bitext")
    p.add_argument("--bitext-source", required=True)
    p.add_argument("--bitext-target", required=True)
    p.add_argument("--pseudo-source", required=True)
    p.add_argument("--pseudo-target", required=True)
    p.add_argument("--mixed", action="store_true")
    p.add_argument("--u-src", type=int, default=10)
    p.add_argument("--u-tgt", type=int, default=8)
    p.add_argument("--output-prefix", required=True)
    _add_marker_args(p)
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("bleu", help="case-insensitive corpus BLEU")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True, action="append", help="repeat for multiple references")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--case-sensitive", action="store_true")
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser("hitrate", help="dictionary hit rate of system output")
    p.add_argument("--dictionary", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", action="append")
    p.add_argument("--strict", action="store_true", help="every occurrence must be translated")
    p.set_defaults(func=cmd_hitrate)

    p = sub.add_parser("run", help="run the full pipeline from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key, e.g. --set K=20 --set smt.beam=5")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fixture", help="write the synthetic demo data set and a config")
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default="pseudo-mixed-dic")
    p.add_argument("-k", type=int, default=10)
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc.cause, InvariantError) else 1
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
