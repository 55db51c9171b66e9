"""Slow, obviously-correct reference computations used to check the fast paths.

Nothing here imports the code paths it checks; only plain data types and
the LM probability lookup are shared.
"""

import itertools
import math
from collections import defaultdict


def brute_force_model1(pairs, iterations, use_null=False):
    """Model 1 EM by explicit enumeration of every alignment vector.

    ``pairs`` is a list of (source_tokens, target_tokens). Returns the table
    {(target, source): prob} and the per-iteration log-likelihoods.
    """
    def src_words(src):
        return ["<null>", *src] if use_null else list(src)

    cooc = defaultdict(set)
    for src, tgt in pairs:
        for s in src_words(src):
            cooc[s].update(tgt)
    t = {(tw, s): 1.0 / len(cooc[s]) for s in cooc for tw in cooc[s]}

    def loglik(t):
        total = 0.0
        for src, tgt in pairs:
            sw = src_words(src)
            # P(f|e) = Σ_a Π_j t(f_j|e_a_j) / l^m, summed explicitly
            p = sum(math.prod(t[(tw, sw[a])] for tw, a in zip(tgt, align))
                    for align in itertools.product(range(len(sw)), repeat=len(tgt)))
            total += math.log(p) - len(tgt) * math.log(len(sw))
        return total

    history = [loglik(t)]
    for _ in range(iterations):
        counts = defaultdict(float)
        for src, tgt in pairs:
            sw = src_words(src)
            aligns = list(itertools.product(range(len(sw)), repeat=len(tgt)))
            weights = [math.prod(t[(tw, sw[a])] for tw, a in zip(tgt, al)) for al in aligns]
            z = sum(weights)
            for al, w in zip(aligns, weights):
                for tw, a in zip(tgt, al):
                    counts[(tw, sw[a])] += w / z
        totals = defaultdict(float)
        for (tw, s), c in counts.items():
            totals[s] += c
        t = {(tw, s): c / totals[s] for (tw, s), c in counts.items()}
        history.append(loglik(t))
    return t, history


def enumerate_derivations(source, rules, copy_oov=True):
    """Every monotone segmentation of ``source`` with every rule choice.

    ``rules`` maps source phrase tuples to {target tuple: log prob}. A token
    without a single-word rule may also be copied (or dropped when copying
    is off) at log prob 0. Yields lists of (target, log_prob) steps.
    """
    n = len(source)
    longest = max((len(k) for k in rules), default=1)

    def rec(i):
        if i == n:
            yield []
            return
        choices = []
        for j in range(i + 1, min(n, i + longest) + 1):
            for tgt, lp in rules.get(tuple(source[i:j]), {}).items():
                choices.append((j, tgt, lp))
        if (source[i],) not in rules or not rules[(source[i],)]:
            choices.append((i + 1, (source[i],) if copy_oov else (), 0.0))
        for j, tgt, lp in choices:
            for rest in rec(j):
                yield [(tgt, lp)] + rest

    yield from rec(0)


def score_derivation(steps, lm, tm_weight=1.0, lm_weight=1.0, word_penalty=0.0):
    """Left-to-right score of a derivation, same arithmetic order as a step-wise search."""
    history = ["<s>"] * (lm.order - 1)
    score = 0.0
    for idx, (tgt, lp) in enumerate(steps):
        lm_total = 0.0
        words = list(tgt) + (["</s>"] if idx == len(steps) - 1 else [])
        for w in words:
            ctx = tuple(history[-(lm.order - 1):]) if lm.order > 1 else ()
            lm_total += math.log(lm.prob(w, ctx))
            history.append(w)
        score += tm_weight * lp + lm_weight * lm_total + word_penalty * len(tgt)
    return score


def exhaustive_best(source, rules, lm, **weights):
    """(best score, lexicographically smallest best output string)."""
    best = None
    for steps in enumerate_derivations(source, rules, weights.pop("copy_oov", True)):
        score = score_derivation(steps, lm, **weights)
        out = " ".join(w for tgt, _ in steps for w in tgt)
        key = (-score, out)
        if best is None or key < best:
            best = key
    return -best[0], best[1]


def linear_scan_retrieve(sentences, phrase, k, max_len):
    """Shortest-first retrieval by scanning every sentence's padded text."""
    needle = " " + " ".join(phrase) + " "
    found = [i for i, s in enumerate(sentences)
             if len(s) <= max_len and needle in " " + " ".join(s) + " "]
    found.sort(key=lambda i: (len(sentences[i]), i))
    return found[:k]
