import pytest

from lexbridge.corpus import BilingualDictionary, InputError, ParallelCorpus, is_oov
from lexbridge.fixture import make_fixture
from lexbridge.mixed_wc import is_well_formed
from lexbridge.monoindex import build_index
from lexbridge.smt.translator import SMTConfig
from lexbridge.synthesis import MixedSpec, PseudoCorpus, build_pbmt, combine, synthesize


def toks(s):
    return tuple(s.split())


def corpus(*pairs):
    return ParallelCorpus.from_pairs([(toks(s), toks(t)) for s, t in pairs])


BITEXT = corpus(("x", "X"), ("y", "Y"), ("x y", "X Y"), ("y x", "Y X"))
DIC = BilingualDictionary.from_pairs([("q", "Q")])


@pytest.fixture(scope="module")
def pbmt():
    return build_pbmt(BITEXT, DIC)


def test_toy_synthesis(pbmt):
    index = build_index([toks("x q"), toks("q y"), toks("x y")])
    pseudo = synthesize(DIC, index, pbmt, k=10)
    assert [(p.source, p.target) for p in pseudo.pairs] == [(toks("x q"), toks("X Q")), (toks("q y"), toks("Q Y"))]
    assert all(p.complete for p in pseudo.pairs)
    assert [p.mono_id for p in pseudo.pairs] == [0, 1]


def test_k_zero_gives_nothing(pbmt):
    index = build_index([toks("x q")])
    pseudo = synthesize(DIC, index, pbmt, k=0)
    assert len(pseudo) == 0
    with pytest.raises(InputError):
        synthesize(DIC, index, pbmt, k=-1)


def test_zero_match_entry_reported(pbmt):
    index = build_index([toks("x y")])
    pseudo = synthesize(DIC, index, pbmt, k=3)
    assert len(pseudo) == 0
    assert pseudo.zero_match_entries == list(DIC.entries)


def test_dictionary_rule_in_table(pbmt):
    assert (toks("q"), toks("Q")) in pbmt.phrase_table
    assert pbmt.phrase_table.rules[toks("q")][toks("Q")] == 0.0


def test_no_dictionary_means_no_rule():
    plain = build_pbmt(BITEXT, None)
    assert toks("q") not in plain.phrase_table.rules


def test_lm_sees_only_bitext():
    dic = BilingualDictionary.from_pairs([("q", "ZZZ")])
    assert build_pbmt(BITEXT, dic).lm.counts[0].get(("ZZZ",), 0) == 0


def test_empty_bitext_rejected():
    with pytest.raises(InputError):
        build_pbmt(ParallelCorpus(), DIC)


def test_forcing_recovers_entry():
    # the bitext teaches q -> R strongly; the dictionary says q -> Q at a low floor
    bitext = corpus(*[("q", "R")] * 5, ("x", "X"))
    pbmt = build_pbmt(bitext, DIC, SMTConfig(floor_prob=0.01))
    index = build_index([toks("x q")])
    forced = synthesize(DIC, index, pbmt, k=5)
    assert forced.pairs[0].target == toks("X Q") and forced.pairs[0].forced
    assert forced.diagnostics[0].forced == 1
    unforced = synthesize(DIC, index, pbmt, k=5, force=False)
    assert unforced.pairs[0].target == toks("X R")
    assert not unforced.pairs[0].complete
    assert unforced.diagnostics[0].missing_target == 1


def test_provenance_lines(pbmt):
    index = build_index([toks("x q")])
    assert synthesize(DIC, index, pbmt, k=1).provenance() == "0\tq\tQ\t0\t0\n"


def test_combine_appends():
    pseudo = corpus(("q", "Q"))
    out = combine(BITEXT, pseudo)
    assert out.pairs == BITEXT.pairs + pseudo.pairs
    assert combine(BITEXT, PseudoCorpus()).pairs == BITEXT.pairs


def test_combine_mixed_uses_joint_vocabulary():
    pseudo = corpus(*[("q x", "Q X")] * 2)
    out = combine(BITEXT, pseudo, MixedSpec(u_src=3, u_tgt=3))
    # x occurs 3 times in the bitext and 2 more in pseudo: kept; q (2) is split
    assert out.pairs[-1].source == ("⟨B⟩q", "x")
    assert all(is_well_formed(p.source) and is_well_formed(p.target) for p in out.pairs)


def test_fixture_end_to_end_threads_deterministic():
    fx = make_fixture(seed=1, n_pairs=400, n_mono=1500)
    from lexbridge.corpus import build_vocabulary, filter_dictionary
    vocab = build_vocabulary(fx.bitext.sources(), 5)
    rare = filter_dictionary(fx.dictionary, vocab)
    assert all(is_oov(e.source_phrase[0], vocab) for e in rare.entries)
    pbmt = build_pbmt(fx.bitext, rare)
    index = build_index(fx.monolingual)
    one = synthesize(rare, index, pbmt, k=4)
    four = synthesize(rare, index, pbmt, k=4, threads=4)
    assert one.pairs == four.pairs
    assert all(p.complete for p in one.pairs)
    assert all(c <= 4 for c in one.per_entry_counts.values())
