import json
from pathlib import Path

import pytest

from lexbridge.cli import main
from lexbridge.config import MODES, ConfigError, load_config, validate_config
from lexbridge.corpus import (
    build_vocabulary,
    filter_dictionary,
    format_sentence,
    ingest_parallel,
    read_dictionary,
)
from lexbridge.fixture import make_fixture
from lexbridge.mixed_wc import transform_training_data


@pytest.fixture(scope="module")
def small(tmp_path_factory):
    d = tmp_path_factory.mktemp("fx")
    make_fixture(seed=3, n_pairs=300, n_mono=800).write(d, k=3)
    return d


def config_text(small, **changes):
    raw = json.loads((small / "config.json").read_text())
    raw.update(changes)
    return json.dumps(raw)


def run(small, tmp_path, **changes):
    raw = json.loads(config_text(small, **changes))
    raw["paths"] = {k: str(small / v) if k != "output_dir" else str(tmp_path / "out")
                    for k, v in raw["paths"].items()}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return path, tmp_path / "out"


def read(path):
    return Path(path).read_text(encoding="utf-8")


def test_defaults_filled(small):
    cfg = validate_config(config_text(small), small)
    assert (cfg.max_len, cfg.smt.beam, cfg.threads, cfg.policy) == (50, 10, 1, "shortest")
    assert (cfg.u_src, cfg.u_tgt, cfg.K) == (5, 5, 3)
    assert cfg.bitext_source == str(small / "bitext.src")


def test_negative_k_named(small):
    with pytest.raises(ConfigError) as err:
        validate_config(config_text(small, K=-1), small)
    assert err.value.errors == ["K: must be an integer >= 0"]


def test_missing_dictionary_in_dic_mode(small):
    raw = json.loads(config_text(small))
    del raw["paths"]["dictionary"]
    with pytest.raises(ConfigError) as err:
        validate_config(json.dumps(raw), small)
    assert any(e.startswith("paths.dictionary") for e in err.value.errors)
    raw["mode"] = "mixed"
    raw["paths"].pop("monolingual")
    assert validate_config(json.dumps(raw), small).dictionary is None


def test_errors_aggregated(small):
    raw = json.loads(config_text(small, K="ten", mode="fancy", bogus=1))
    raw["smt"] = {"beam": 0, "alpha": 2}
    raw["paths"]["monolingual"] = "missing.txt"
    with pytest.raises(ConfigError) as err:
        validate_config(json.dumps(raw), small)
    keys = {e.split(":")[0] for e in err.value.errors}
    assert {"K", "mode", "bogus", "smt.beam", "smt.alpha", "paths.monolingual"} <= keys


def test_bad_json_and_overrides(small):
    with pytest.raises(ConfigError):
        validate_config("{", small)
    cfg = validate_config(config_text(small), small, ["K=7", "smt.beam=4", "selection.policy=sample"])
    assert (cfg.K, cfg.smt.beam, cfg.policy) == (7, 4, "sample")


def test_mode_algebra(small):
    flags = {}
    for mode in MODES:
        cfg = validate_config(config_text(small, mode=mode), small)
        flags[mode] = (cfg.pseudo, cfg.mixed, cfg.use_dic)
    assert flags["mixed"] == (False, True, False)
    assert flags["pseudo-dic"] == (True, False, True)
    assert flags["pseudo-mixed-dic"] == (True, True, True)


def test_mixed_mode_is_transformed_bitext(small, tmp_path):
    path, out = run(small, tmp_path, mode="mixed")
    assert main(["run", "--config", str(path)]) == 0
    cfg = load_config(path)
    bitext = ingest_parallel(read(cfg.bitext_source).splitlines(), read(cfg.bitext_target).splitlines())
    sv, tv = build_vocabulary(bitext.sources(), 5), build_vocabulary(bitext.targets(), 5)
    rare = filter_dictionary(read_dictionary(read(cfg.dictionary).splitlines()), sv)
    expected = transform_training_data(bitext, rare, sv, tv)
    assert read(out / "combined.src") == "".join(format_sentence(s) + "\n" for s in expected.sources())
    assert not (out / "pseudo.src").exists()


def test_pseudo_dic_k0_is_bitext(small, tmp_path):
    path, out = run(small, tmp_path, mode="pseudo-dic", K=0)
    assert main(["run", "--config", str(path)]) == 0
    assert read(out / "combined.src") == read(small / "bitext.src")
    assert read(out / "combined.tgt") == read(small / "bitext.tgt")
    assert read(out / "pseudo.src") == ""


def test_pseudo_mixed_dic_run_outputs(small, tmp_path):
    path, out = run(small, tmp_path)
    assert main(["run", "--config", str(path)]) == 0
    summary = json.loads(read(out / "summary.json"))
    assert summary["pseudo_hit_rate"] == 1.0
    assert summary["config"]["paths"]["output_dir"] == "."
    for name in ("index.txt", "pbmt/phrase_table.txt", "pseudo.provenance.tsv", "report.vocab.tsv",
                 "report.hitrate.tsv", "events.jsonl", "vocab.src.tsv", "dictionary.filtered.tsv"):
        assert (out / name).exists(), name
    events = [json.loads(line) for line in read(out / "events.jsonl").splitlines()]
    assert {e["stage"] for e in events} >= {"ingest", "vocab", "filter", "index", "synthesize", "combine"}
    assert any(e["event"] == "zero_match" for e in events)


def test_exit_code_input_error(small, tmp_path, capsys):
    path, _ = run(small, tmp_path, K=-3)
    assert main(["run", "--config", str(path)]) == 1
    assert "K:" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 1


def test_exit_code_misaligned_bitext(small, tmp_path, capsys):
    path, _ = run(small, tmp_path)
    raw = json.loads(read(path))
    short = tmp_path / "short.tgt"
    short.write_text("t001\n")
    raw["paths"]["bitext_target"] = str(short)
    path.write_text(json.dumps(raw))
    assert main(["run", "--config", str(path)]) == 1
    assert "line" in capsys.readouterr().err


def test_exit_code_invariant(small, tmp_path, monkeypatch):
    from lexbridge import pipeline
    path, _ = run(small, tmp_path)

    def broken(*a, **kw):
        raise pipeline.InvariantError("boom")
    monkeypatch.setattr(pipeline, "_check_pseudo", broken)
    assert main(["run", "--config", str(path)]) == 2


def test_subcommands(tmp_path, capsys):
    d = tmp_path / "fx"
    assert main(["fixture", "--output", str(d), "-k", "2"]) == 0
    capsys.readouterr()

    assert main(["vocab", "--input", str(d / "bitext.src"), "-u", "5", "--output", str(tmp_path / "v.tsv")]) == 0
    assert read(tmp_path / "v.tsv").split("\t")[0] == "s000"

    assert main(["index", "--input", str(d / "mono.src"), "--output", str(tmp_path / "idx")]) == 0
    assert main(["retrieve", "--index", str(tmp_path / "idx"), "--phrase", "r00", "-k", "3"]) == 0
    hits = capsys.readouterr().out.splitlines()
    assert 0 < len(hits) <= 3 and all("r00" in h.split("\t")[1].split() for h in hits)

    model = tmp_path / "model"
    assert main(["train-smt", "--source", str(d / "bitext.src"), "--target", str(d / "bitext.tgt"),
                 "--dictionary", str(d / "dictionary.tsv"), "--output", str(model), "--iterations", "3"]) == 0
    assert main(["decode", "--model", str(model), "--input", str(d / "heldout.src")]) == 0
    hyp = tmp_path / "hyp.txt"
    hyp.write_text(capsys.readouterr().out)

    assert main(["bleu", "--hyp", str(hyp), "--ref", str(d / "heldout.ref")]) == 0
    score = float(capsys.readouterr().out.split()[-1])
    assert 0.0 <= score <= 100.0
    assert main(["hitrate", "--dictionary", str(d / "dictionary.tsv"), "--source", str(d / "heldout.src"),
                 "--hyp", str(hyp)]) == 0
    assert "# covered" in capsys.readouterr().out

    assert main(["synthesize", "--model", str(model), "--index", str(tmp_path / "idx"),
                 "--dictionary", str(d / "dictionary.tsv"), "-k", "2",
                 "--output-prefix", str(tmp_path / "ps")]) == 0
    assert main(["combine", "--bitext-source", str(d / "bitext.src"), "--bitext-target", str(d / "bitext.tgt"),
                 "--pseudo-source", str(tmp_path / "ps.src"), "--pseudo-target", str(tmp_path / "ps.tgt"),
                 "--mixed", "--output-prefix", str(tmp_path / "comb")]) == 0
    n_bitext = len(read(d / "bitext.src").splitlines())
    assert len(read(tmp_path / "comb.src").splitlines()) == n_bitext + len(read(tmp_path / "ps.src").splitlines())

    assert main(["mixedwc", "--source", str(tmp_path / "comb.src"), "--restore",
                 "--output-prefix", str(tmp_path / "restored")]) == 0
