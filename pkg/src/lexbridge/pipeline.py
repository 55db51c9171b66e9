"""End-to-end run: vocabularies, filtering, synthesis, combination, reports.

Every artifact is written deterministically (sorted keys, no timestamps) so
two runs of the same config produce identical output trees.
"""

from __future__ import annotations

import json
import os
import logging
from contextlib import contextmanager
from pathlib import Path

from .config import PipelineConfig
from .corpus import (
    BilingualDictionary,
    InputError,
    ParallelCorpus,
    build_vocabulary,
    filter_dictionary,
    format_sentence,
    ingest_monolingual,
    ingest_parallel,
    read_dictionary,
)
from .evaluation import EvalSet, hit_rate, render_vocab_report, vocab_report
from .mixed_wc import transform_training_data
from .monoindex import build_index
from .synthesis import MixedSpec, PseudoCorpus, build_pbmt, combine, synthesize

logger = logging.getLogger(__name__)


class InvariantError(RuntimeError):
    """An internal guarantee was violated; signals a bug rather than bad input."""


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        self.stage, self.cause = stage, cause
        super().__init__(f"stage {stage!r} failed: {cause}")


class EventLog:
    """Structured records ``{stage, event, entry?, counts}`` kept in emission order."""

    def __init__(self):
        self.records: list[dict] = []

    def emit(self, stage: str, event: str, entry: str | None = None, **counts) -> None:
        record = {"stage": stage, "event": event}
        if entry is not None:
            record["entry"] = entry
        if counts:
            record["counts"] = counts
        self.records.append(record)
        logger.info("%s %s", stage, event, extra={"record": record})

    def dumps(self) -> str:
        return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in self.records)


def write_lines(path: Path, sentences) -> None:
    path.write_text("".join(format_sentence(s) + "\n" for s in sentences), encoding="utf-8")


def write_corpus(prefix: Path, corpus: ParallelCorpus) -> None:
    write_lines(prefix.with_name(prefix.name + ".src"), corpus.sources())
    write_lines(prefix.with_name(prefix.name + ".tgt"), corpus.targets())


@contextmanager
def stage(name: str):
    try:
        yield
    except (StageError, InvariantError):
        raise
    except (InputError, OSError, UnicodeDecodeError) as exc:
        raise StageError(name, exc) from exc


def _read_text(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.readlines()


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every stage for ``cfg.mode`` and return the summary (also written as summary.json)."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    events = EventLog()

    with stage("ingest"):
        bitext = ingest_parallel(_read_text(cfg.bitext_source), _read_text(cfg.bitext_target), cfg.max_len)
        if not bitext.pairs:
            raise InputError(f"{cfg.bitext_source}: no usable sentence pairs")
        events.emit("ingest", "bitext", pairs=len(bitext), dropped=bitext.dropped,
                    skipped_empty=bitext.skipped_empty)
        dic = read_dictionary(_read_text(cfg.dictionary)) if cfg.dictionary else BilingualDictionary()
        events.emit("ingest", "dictionary", entries=len(dic))

    with stage("vocab"):
        src_vocab = build_vocabulary(bitext.sources(), cfg.u_src)
        tgt_vocab = build_vocabulary(bitext.targets(), cfg.u_tgt)
        (out / "vocab.src.tsv").write_text(src_vocab.dump(), encoding="utf-8")
        (out / "vocab.tgt.tsv").write_text(tgt_vocab.dump(), encoding="utf-8")
        events.emit("vocab", "built", source=len(src_vocab), target=len(tgt_vocab))

    with stage("filter"):
        rare = filter_dictionary(dic, src_vocab)
        (out / "dictionary.filtered.tsv").write_text(rare.dump(), encoding="utf-8")
        events.emit("filter", "filtered", kept=len(rare), dropped=len(dic) - len(rare))

    # paths are echoed relative to the output directory so the tree is relocatable
    echoed = {k: (os.path.relpath(v, out) if v else v) for k, v in cfg.to_dict()["paths"].items()}
    summary: dict = {"config": {**cfg.to_dict(), "paths": {**echoed, "output_dir": "."}}}
    variants = {"baseline": bitext}
    pseudo: PseudoCorpus | None = None

    if not cfg.pseudo:
        with stage("mixedwc"):
            combined = transform_training_data(bitext, rare, src_vocab, tgt_vocab,
                                               include_dic=cfg.use_dic, scheme=cfg.markers)
            events.emit("mixedwc", "transformed", pairs=len(combined))
    else:
        with stage("index"):
            index = build_index(ingest_monolingual(_read_text(cfg.monolingual)))
            (out / "index.txt").write_text(index.serialize(), encoding="utf-8")
            events.emit("index", "built", sentences=len(index.store), terms=len(index.postings))
        with stage("train-smt"):
            pbmt = build_pbmt(bitext, rare if cfg.use_dic else None, cfg.smt)
            pbmt.save(out / "pbmt")
            events.emit("train-smt", "trained", rules=len(pbmt.phrase_table))
        with stage("synthesize"):
            pseudo = synthesize(rare, index, pbmt, cfg.K, cfg.max_len, cfg.policy, cfg.seed,
                                force=cfg.use_dic, threads=cfg.threads)
            for diag in pseudo.diagnostics:
                events.emit("synthesize", "zero_match" if diag.retrieved == 0 else "entry",
                            entry=str(diag.entry), retrieved=diag.retrieved, forced=diag.forced,
                            missing_target=diag.missing_target)
            _check_pseudo(pseudo, cfg)
            write_corpus(out / "pseudo", pseudo.as_parallel())
            (out / "pseudo.provenance.tsv").write_text(pseudo.provenance(), encoding="utf-8")
            variants["pseudo"] = combine(bitext, pseudo)
        with stage("combine"):
            spec = MixedSpec(cfg.u_src, cfg.u_tgt, cfg.markers) if cfg.mixed else None
            combined = combine(bitext, pseudo, spec)
            events.emit("combine", "combined", pairs=len(combined))

    write_corpus(out / "combined", combined)
    variants[cfg.mode] = combined

    with stage("report"):
        rows = vocab_report(variants, (cfg.u_src, cfg.u_tgt))
        (out / "report.vocab.tsv").write_text(render_vocab_report(rows), encoding="utf-8")
        summary["vocab_report"] = [{"corpus": r.name, "source": r.source_size, "target": r.target_size}
                                   for r in rows]
        summary["counts"] = {"bitext": len(bitext), "dictionary": len(dic), "filtered": len(rare),
                             "combined": len(combined)}
        if pseudo is not None:
            report = hit_rate(rare, EvalSet.from_parallel(pseudo.as_parallel()))
            (out / "report.hitrate.tsv").write_text(report.render(), encoding="utf-8")
            summary["counts"]["pseudo"] = len(pseudo)
            summary["pseudo_hit_rate"] = report.rate
            summary["synthesis"] = [
                {"entry": str(d.entry), "retrieved": d.retrieved, "forced": d.forced,
                 "missing_target": d.missing_target}
                for d in pseudo.diagnostics]
            summary["zero_match_entries"] = [str(e) for e in pseudo.zero_match_entries]

    (out / "events.jsonl").write_text(events.dumps(), encoding="utf-8")
    (out / "summary.json").write_text(json.dumps(summary, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
                                      encoding="utf-8")
    return summary


def _check_pseudo(pseudo: PseudoCorpus, cfg: PipelineConfig) -> None:
    for entry, count in pseudo.per_entry_counts.items():
        if count > cfg.K:
            raise InvariantError(f"entry {entry} produced {count} pairs with K={cfg.K}")
    if cfg.use_dic:
        bad = [i for i, p in enumerate(pseudo.pairs) if not p.complete]
        if bad:
            raise InvariantError(f"pseudo pairs missing the lexicon entry: {bad[:10]}")
