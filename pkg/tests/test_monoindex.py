import random

import pytest

from lexbridge.corpus import InputError, MonolingualCorpus
from lexbridge.monoindex import InvertedIndex, build_index, merge_indexes, retrieve
from oracles import linear_scan_retrieve


def toks(s):
    return tuple(s.split())


SENTS = [toks(s) for s in ["a b c", "x a b", "a c b", "a b", "b a"]]


def test_contiguous_matches_shortest_first():
    index = build_index(SENTS)
    assert retrieve(index, toks("a b"), 10) == [3, 0, 1]


def test_k_limits_results():
    assert retrieve(build_index(SENTS), toks("a b"), 2) == [3, 0]


def test_max_len_filter():
    assert retrieve(build_index(SENTS), toks("a b"), 10, max_len=2) == [3]


def test_k_zero_and_unknown_term():
    index = build_index(SENTS)
    assert retrieve(index, toks("a"), 0) == []
    assert retrieve(index, toks("zz"), 5) == []


def test_repeated_tokens_posted_once():
    index = build_index([toks("a a a"), toks("b")])
    assert index.postings["a"] == [0]
    assert retrieve(index, toks("a a"), 5) == [0]


def test_bad_arguments():
    index = build_index(SENTS)
    with pytest.raises(InputError):
        retrieve(index, toks("a"), -1)
    with pytest.raises(InputError):
        retrieve(index, toks("a"), 1, policy="longest")


def test_agrees_with_linear_scan():
    rng = random.Random(2)
    vocab = [f"w{i}" for i in range(15)]
    sents = [tuple(rng.choices(vocab, k=rng.randint(1, 12))) for _ in range(400)]
    index = build_index(MonolingualCorpus(sents))
    for _ in range(200):
        phrase = tuple(rng.choices(vocab, k=rng.randint(1, 3)))
        k, max_len = rng.randint(0, 20), rng.randint(1, 12)
        assert retrieve(index, phrase, k, max_len) == linear_scan_retrieve(sents, phrase, k, max_len)


def test_serialize_roundtrip_and_determinism():
    index = build_index(SENTS + [toks("ü ⟨x⟩ 字")])
    text = index.serialize()
    assert text == build_index(SENTS + [toks("ü ⟨x⟩ 字")]).serialize()
    assert text.startswith("#lexbridge-monoindex\t1\t6\t")
    loaded = InvertedIndex.deserialize(text)
    assert loaded.store.sentences == index.store.sentences
    assert loaded.postings == index.postings
    assert retrieve(loaded, toks("a b"), 10) == retrieve(index, toks("a b"), 10)


def test_deserialize_rejects_garbage():
    with pytest.raises(InputError):
        InvertedIndex.deserialize("hello\n")
    with pytest.raises(InputError):
        InvertedIndex.deserialize("#lexbridge-monoindex\t2\t0\t0\n")
    with pytest.raises(InputError):
        InvertedIndex.deserialize("#lexbridge-monoindex\t1\t5\t0\n1\ta\n")


def test_sample_policy_seeded():
    sents = [toks("a")] * 50
    index = build_index(sents)
    first = retrieve(index, toks("a"), 5, policy="sample", seed=3)
    assert first == retrieve(index, toks("a"), 5, policy="sample", seed=3)
    assert first == sorted(first) and len(set(first)) == 5
    assert first != retrieve(index, toks("a"), 5, policy="sample", seed=4)
    assert retrieve(index, toks("a"), 100, policy="sample") == list(range(50))


def test_merge_indexes_renumbers():
    left, right = build_index(SENTS[:2]), build_index(SENTS[2:])
    merged = merge_indexes([left, right])
    whole = build_index(SENTS)
    assert merged.postings == whole.postings
    assert merged.serialize() == whole.serialize()
