#!/usr/bin/env python3
"""Independent reference implementations of the translation metrics.

This oracle is deliberately separate from the C++ library: it computes
BLEU-1..4, ROUGE-L, METEOR (exact+stem stages, no synonym stage), chrF and
TER from the canonical algorithm definitions, and freezes the results for the
committed fixture into metrics_expected.json. The C++ suite must agree with
these numbers within 1e-4.

Usage: metrics_oracle.py FIXTURE_TSV OUT_JSON
FIXTURE_TSV columns: hypothesis<TAB>reference
"""

import json
import math
import sys
from collections import Counter

# ---------------------------------------------------------------- stemming

VOWELS = "aeiou"


def _cons(word, i):
    ch = word[i]
    if ch in VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _cons(word, i - 1)
    return True


def _measure(stem):
    # number of VC sequences
    form = "".join("c" if _cons(stem, i) else "v" for i in range(len(stem)))
    m = 0
    prev = None
    for ch in form:
        if prev == "v" and ch == "c":
            m += 1
        prev = ch
    return m


def _has_vowel(stem):
    return any(not _cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(word):
    return len(word) >= 2 and word[-1] == word[-2] and _cons(word, len(word) - 1)


def _cvc(word):
    if len(word) < 3:
        return False
    if not _cons(word, len(word) - 3) or _cons(word, len(word) - 2) or not _cons(word, len(word) - 1):
        return False
    return word[-1] not in "wxy"


def porter_stem(word):
    """Classic Porter (1980) stemmer, steps 1a-5b."""
    if len(word) <= 2:
        return word
    w = word

    # step 1a
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies"):
        w = w[:-2]
    elif w.endswith("ss"):
        pass
    elif w.endswith("s"):
        w = w[:-1]

    # step 1b
    flag_1b = False
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            w = w[:-1]
    elif w.endswith("ed"):
        if _has_vowel(w[:-2]):
            w = w[:-2]
            flag_1b = True
    elif w.endswith("ing"):
        if _has_vowel(w[:-3]):
            w = w[:-3]
            flag_1b = True
    if flag_1b:
        if w.endswith(("at", "bl", "iz")):
            w += "e"
        elif _ends_double_cons(w) and not w.endswith(("l", "s", "z")):
            w = w[:-1]
        elif _measure(w) == 1 and _cvc(w):
            w += "e"

    # step 1c
    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    # step 2
    step2 = [("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
             ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
             ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
             ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
             ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")]
    for suf, rep in step2:
        if w.endswith(suf):
            if _measure(w[: -len(suf)]) > 0:
                w = w[: -len(suf)] + rep
            break

    # step 3
    step3 = [("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
             ("ical", "ic"), ("ful", ""), ("ness", "")]
    for suf, rep in step3:
        if w.endswith(suf):
            if _measure(w[: -len(suf)]) > 0:
                w = w[: -len(suf)] + rep
            break

    # step 4
    step4 = ["al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
             "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize"]
    for suf in sorted(step4, key=len, reverse=True):
        if w.endswith(suf):
            stem = w[: -len(suf)]
            if _measure(stem) > 1:
                if suf == "ion" and not stem.endswith(("s", "t")):
                    continue
                w = stem
            break

    # step 5a
    if w.endswith("e"):
        stem = w[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _cvc(stem)):
            w = stem
    # step 5b
    if _measure(w) > 1 and _ends_double_cons(w) and w.endswith("l"):
        w = w[:-1]
    return w


# ---------------------------------------------------------------- BLEU


def ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hyps, refs, max_n):
    match = [0] * max_n
    total = [0] * max_n
    hyp_len = ref_len = 0
    for h, r in zip(hyps, refs):
        hyp_len += len(h)
        ref_len += len(r)
        for n in range(1, max_n + 1):
            hn = ngrams(h, n)
            rn = ngrams(r, n)
            total[n - 1] += sum(hn.values())
            match[n - 1] += sum(min(c, rn[g]) for g, c in hn.items())
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(max_n):
        if total[n] == 0 or match[n] == 0:
            return 0.0
        log_sum += math.log(match[n] / total[n]) / max_n
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * math.exp(log_sum)


# ---------------------------------------------------------------- ROUGE-L


def lcs_len(a, b):
    dp = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            dp[i][j] = dp[i - 1][j - 1] + 1 if a[i - 1] == b[j - 1] else max(dp[i - 1][j], dp[i][j - 1])
    return dp[len(a)][len(b)]


def rouge_l(hyps, refs):
    """Mean sentence-level LCS F1."""
    scores = []
    for h, r in zip(hyps, refs):
        if not h or not r:
            scores.append(0.0)
            continue
        lcs = lcs_len(h, r)
        if lcs == 0:
            scores.append(0.0)
            continue
        p = lcs / len(h)
        rr = lcs / len(r)
        scores.append(2 * p * rr / (p + rr))
    return sum(scores) / len(scores)


# ---------------------------------------------------------------- METEOR


def meteor_align(h, r):
    """Greedy staged alignment: exact first, then Porter-stem matches."""
    pairs = []
    used_h = [False] * len(h)
    used_r = [False] * len(r)
    for i in range(len(h)):
        for j in range(len(r)):
            if not used_r[j] and h[i] == r[j]:
                pairs.append((i, j))
                used_h[i] = True
                used_r[j] = True
                break
    hs = [porter_stem(t.lower()) for t in h]
    rs = [porter_stem(t.lower()) for t in r]
    for i in range(len(h)):
        if used_h[i]:
            continue
        for j in range(len(r)):
            if not used_r[j] and hs[i] == rs[j]:
                pairs.append((i, j))
                used_h[i] = True
                used_r[j] = True
                break
    return sorted(pairs)


def meteor_sentence(h, r):
    pairs = meteor_align(h, r)
    m = len(pairs)
    if m == 0 or not h or not r:
        return 0.0
    p = m / len(h)
    rr = m / len(r)
    fmean = 10 * p * rr / (rr + 9 * p)
    chunks = 1
    for k in range(1, m):
        if not (pairs[k][0] == pairs[k - 1][0] + 1 and pairs[k][1] == pairs[k - 1][1] + 1):
            chunks += 1
    penalty = 0.5 * (chunks / m) ** 3
    return fmean * (1.0 - penalty)


def meteor(hyps, refs):
    return sum(meteor_sentence(h, r) for h, r in zip(hyps, refs)) / len(hyps)


# ---------------------------------------------------------------- chrF


def chrf(hyps, refs, char_n=6, beta=2.0):
    """Corpus chrF: whitespace removed, per-order counts aggregated over the
    corpus, precision/recall macro-averaged over effective orders."""
    match = [0] * char_n
    hyp_total = [0] * char_n
    ref_total = [0] * char_n
    for h, r in zip(hyps, refs):
        hs = "".join(h)
        rs = "".join(r)
        for n in range(1, char_n + 1):
            hn = Counter(hs[i:i + n] for i in range(len(hs) - n + 1))
            rn = Counter(rs[i:i + n] for i in range(len(rs) - n + 1))
            hyp_total[n - 1] += sum(hn.values())
            ref_total[n - 1] += sum(rn.values())
            match[n - 1] += sum(min(c, rn[g]) for g, c in hn.items())
    precs, recs = [], []
    for n in range(char_n):
        if hyp_total[n] + ref_total[n] == 0:
            continue
        precs.append(match[n] / hyp_total[n] if hyp_total[n] else 0.0)
        recs.append(match[n] / ref_total[n] if ref_total[n] else 0.0)
    if not precs:
        return 0.0
    p = sum(precs) / len(precs)
    r = sum(recs) / len(recs)
    if p == 0.0 and r == 0.0:
        return 0.0
    b2 = beta * beta
    denom = b2 * p + r
    return (1 + b2) * p * r / denom if denom > 0 else 0.0


# ---------------------------------------------------------------- TER

MAX_SHIFT_SIZE = 10


def edit_distance(h, r):
    prev = list(range(len(r) + 1))
    for i in range(1, len(h) + 1):
        cur = [i] + [0] * len(r)
        for j in range(1, len(r) + 1):
            cost = 0 if h[i - 1] == r[j - 1] else 1
            cur[j] = min(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[len(r)]


def _contains(ref, span):
    n = len(span)
    return any(ref[j:j + n] == span for j in range(len(ref) - n + 1))


def ter_edits(h, r):
    """Greedy shift search: apply the single shift with the largest strict
    edit-distance reduction (first in scan order on ties) until none helps."""
    h = list(h)
    shifts = 0
    base = edit_distance(h, r)
    while True:
        best = None
        best_dist = base
        for i in range(len(h)):
            for l in range(1, min(MAX_SHIFT_SIZE, len(h) - i) + 1):
                span = h[i:i + l]
                if not _contains(r, span):
                    continue
                removed = h[:i] + h[i + l:]
                for p in range(len(removed) + 1):
                    if p == i:
                        continue
                    cand = removed[:p] + span + removed[p:]
                    d = edit_distance(cand, r)
                    if d < best_dist:
                        best_dist = d
                        best = cand
        if best is None:
            break
        h = best
        base = best_dist
        shifts += 1
    return shifts + base


def ter(hyps, refs):
    edits = sum(ter_edits(h, r) for h, r in zip(hyps, refs))
    ref_len = sum(len(r) for r in refs)
    if ref_len == 0:
        return 0.0
    return edits / ref_len


# ---------------------------------------------------------------- main


def main():
    fixture, out = sys.argv[1], sys.argv[2]
    hyps, refs = [], []
    with open(fixture, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            h, r = line.split("\t")
            hyps.append(h.split())
            refs.append(r.split())
    assert len(hyps) == 20, f"fixture must hold 20 pairs, got {len(hyps)}"
    report = {
        "bleu1": corpus_bleu(hyps, refs, 1),
        "bleu2": corpus_bleu(hyps, refs, 2),
        "bleu3": corpus_bleu(hyps, refs, 3),
        "bleu4": corpus_bleu(hyps, refs, 4),
        "rouge_l": rouge_l(hyps, refs),
        "meteor": meteor(hyps, refs),
        "chrf": chrf(hyps, refs),
        "ter": ter(hyps, refs),
    }
    with open(out, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    for k, v in sorted(report.items()):
        print(f"{k}: {v:.6f}")

    # spot values used directly in unit tests
    print("meteor single identical token:", meteor_sentence(["GIVE"], ["GIVE"]))
    print("meteor 4-token identical:", meteor_sentence("A B C D".split(), "A B C D".split()))
    print("bleu1 kid-play-park:", corpus_bleu([["KID", "PLAY", "PARK"]], [["KID", "PLAY", "fs-P-A-R-K"]], 1))
    print("rouge abcd-acbd:", rouge_l([["A", "B", "C", "D"]], [["A", "C", "B", "D"]]))
    print("ter 1-sub-in-4:", ter([["A", "B", "C", "D"]], [["A", "B", "X", "D"]]))
    print("ter shift example:", ter_edits("a b c d".split(), "b c d a".split()))


if __name__ == "__main__":
    main()
