#pragma once

// Translation-quality metrics over whitespace-tokenized gloss corpora:
// corpus BLEU-1..4, ROUGE-L, METEOR (exact + Porter-stem stages, no synonym
// stage), chrF, TER with greedy block shifts, and per-flag precision/recall.
// Tokens are case-significant; no lowercasing happens at tokenization time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slgen/common.hpp"

namespace slgen::metrics {

using Tokens = std::vector<std::string>;

struct MetricReport {
  double bleu1 = 0, bleu2 = 0, bleu3 = 0, bleu4 = 0;
  double rouge_l = 0, meteor = 0, chrf = 0, ter = 0;
};

struct LinguisticFlags {
  bool ynq = false;
  bool whq = false;
  bool conditional = false;
  bool negation = false;
  bool operator==(const LinguisticFlags&) const = default;
};

namespace detail {

inline void check_corpus(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref) {
  if (hyp.size() != ref.size())
    fail(Errc::LengthMismatch, "hypothesis and reference corpora differ in size");
  if (hyp.empty()) fail(Errc::LengthMismatch, "empty corpus");
}

inline std::map<std::vector<std::string_view>, int> ngram_counts(const Tokens& toks, size_t n) {
  std::map<std::vector<std::string_view>, int> counts;
  if (toks.size() < n) return counts;
  for (size_t i = 0; i + n <= toks.size(); ++i) {
    std::vector<std::string_view> g(toks.begin() + i, toks.begin() + i + n);
    ++counts[g];
  }
  return counts;
}

}  // namespace detail

// ------------------------------------------------------------------- BLEU

inline double bleu(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref, int max_n) {
  detail::check_corpus(hyp, ref);
  if (max_n < 1 || max_n > 4) fail(Errc::ConfigError, "bleu max_n must be 1..4");
  std::array<long long, 4> match{}, total{};
  long long hyp_len = 0, ref_len = 0;
  for (size_t k = 0; k < hyp.size(); ++k) {
    hyp_len += static_cast<long long>(hyp[k].size());
    ref_len += static_cast<long long>(ref[k].size());
    for (int n = 1; n <= max_n; ++n) {
      auto hn = detail::ngram_counts(hyp[k], n);
      auto rn = detail::ngram_counts(ref[k], n);
      for (const auto& [g, c] : hn) {
        total[n - 1] += c;
        auto it = rn.find(g);
        if (it != rn.end()) match[n - 1] += std::min(c, it->second);
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < max_n; ++n) {
    if (total[n] == 0 || match[n] == 0) return 0.0;
    log_sum += std::log(double(match[n]) / double(total[n])) / max_n;
  }
  double bp = hyp_len > ref_len ? 1.0 : std::exp(1.0 - double(ref_len) / double(hyp_len));
  return bp * std::exp(log_sum);
}

// ---------------------------------------------------------------- ROUGE-L

inline size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Mean sentence-level LCS F1.
inline double rouge_l(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref) {
  detail::check_corpus(hyp, ref);
  double sum = 0.0;
  for (size_t k = 0; k < hyp.size(); ++k) {
    if (hyp[k].empty() || ref[k].empty()) continue;
    double lcs = double(lcs_length(hyp[k], ref[k]));
    if (lcs == 0) continue;
    double p = lcs / double(hyp[k].size());
    double r = lcs / double(ref[k].size());
    sum += 2 * p * r / (p + r);
  }
  return sum / double(hyp.size());
}

// ----------------------------------------------------------------- Porter

namespace porter {

inline bool is_cons(const std::string& w, size_t i) {
  char c = w[i];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
  if (c == 'y') return i == 0 || !is_cons(w, i - 1);
  return true;
}

inline int measure(const std::string& w) {
  int m = 0;
  char prev = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    char cur = is_cons(w, i) ? 'c' : 'v';
    if (prev == 'v' && cur == 'c') ++m;
    prev = cur;
  }
  return m;
}

inline bool has_vowel(const std::string& w) {
  for (size_t i = 0; i < w.size(); ++i)
    if (!is_cons(w, i)) return true;
  return false;
}

inline bool ends_double_cons(const std::string& w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_cons(w, w.size() - 1);
}

inline bool cvc(const std::string& w) {
  if (w.size() < 3) return false;
  if (!is_cons(w, w.size() - 3) || is_cons(w, w.size() - 2) || !is_cons(w, w.size() - 1)) return false;
  char last = w.back();
  return last != 'w' && last != 'x' && last != 'y';
}

inline std::string stem(std::string w) {
  if (w.size() <= 2) return w;
  auto ends = [&](std::string_view suf) { return str::ends_with(w, suf); };
  auto chop = [&](size_t n) { w.resize(w.size() - n); };

  // step 1a
  if (ends("sses")) chop(2);
  else if (ends("ies")) chop(2);
  else if (ends("ss")) {}
  else if (ends("s")) chop(1);

  // step 1b
  bool flag_1b = false;
  if (ends("eed")) {
    if (measure(w.substr(0, w.size() - 3)) > 0) chop(1);
  } else if (ends("ed")) {
    if (has_vowel(w.substr(0, w.size() - 2))) { chop(2); flag_1b = true; }
  } else if (ends("ing")) {
    if (has_vowel(w.substr(0, w.size() - 3))) { chop(3); flag_1b = true; }
  }
  if (flag_1b) {
    if (ends("at") || ends("bl") || ends("iz")) w += 'e';
    else if (ends_double_cons(w) && !(ends("l") || ends("s") || ends("z"))) chop(1);
    else if (measure(w) == 1 && cvc(w)) w += 'e';
  }

  // step 1c
  if (ends("y") && has_vowel(w.substr(0, w.size() - 1))) w[w.size() - 1] = 'i';

  // step 2
  static const std::pair<const char*, const char*> step2[] = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"}};
  for (const auto& [suf, rep] : step2) {
    if (ends(suf)) {
      std::string stem_part = w.substr(0, w.size() - std::string_view(suf).size());
      if (measure(stem_part) > 0) w = stem_part + rep;
      break;
    }
  }

  // step 3
  static const std::pair<const char*, const char*> step3[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
  for (const auto& [suf, rep] : step3) {
    if (ends(suf)) {
      std::string stem_part = w.substr(0, w.size() - std::string_view(suf).size());
      if (measure(stem_part) > 0) w = stem_part + rep;
      break;
    }
  }

  // step 4, longest suffix first
  static const char* step4[] = {"ement", "ance", "ence", "able", "ible", "ment",
                                "ant",  "ent",  "ion",  "ism",  "ate",  "iti",
                                "ous",  "ive",  "ize",  "al",   "er",   "ic",  "ou"};
  for (const char* suf : step4) {
    if (ends(suf)) {
      std::string stem_part = w.substr(0, w.size() - std::string_view(suf).size());
      if (measure(stem_part) > 1) {
        if (std::string_view(suf) == "ion" && !(str::ends_with(stem_part, "s") || str::ends_with(stem_part, "t")))
          continue;
        w = stem_part;
      }
      break;
    }
  }

  // step 5a
  if (ends("e")) {
    std::string stem_part = w.substr(0, w.size() - 1);
    int m = measure(stem_part);
    if (m > 1 || (m == 1 && !cvc(stem_part))) w = stem_part;
  }
  // step 5b
  if (measure(w) > 1 && ends_double_cons(w) && w.back() == 'l') w.pop_back();
  return w;
}

}  // namespace porter

// ----------------------------------------------------------------- METEOR

namespace detail {

struct MeteorAlignment {
  std::vector<std::pair<size_t, size_t>> pairs;  // (hyp index, ref index), sorted
};

// Greedy staged alignment: exact matches first, then Porter-stem matches on
// the lowercased remainder. First unmatched reference candidate wins.
inline MeteorAlignment meteor_align(const Tokens& h, const Tokens& r) {
  MeteorAlignment out;
  std::vector<bool> used_h(h.size(), false), used_r(r.size(), false);
  for (size_t i = 0; i < h.size(); ++i) {
    for (size_t j = 0; j < r.size(); ++j) {
      if (!used_r[j] && h[i] == r[j]) {
        out.pairs.emplace_back(i, j);
        used_h[i] = used_r[j] = true;
        break;
      }
    }
  }
  std::vector<std::string> hs(h.size()), rs(r.size());
  for (size_t i = 0; i < h.size(); ++i) hs[i] = porter::stem(str::lower(h[i]));
  for (size_t j = 0; j < r.size(); ++j) rs[j] = porter::stem(str::lower(r[j]));
  for (size_t i = 0; i < h.size(); ++i) {
    if (used_h[i]) continue;
    for (size_t j = 0; j < r.size(); ++j) {
      if (!used_r[j] && hs[i] == rs[j]) {
        out.pairs.emplace_back(i, j);
        used_h[i] = used_r[j] = true;
        break;
      }
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

inline double meteor_sentence(const Tokens& h, const Tokens& r) {
  if (h.empty() || r.empty()) return 0.0;
  auto align = meteor_align(h, r);
  double m = double(align.pairs.size());
  if (m == 0) return 0.0;
  double p = m / double(h.size());
  double rec = m / double(r.size());
  double fmean = 10 * p * rec / (rec + 9 * p);
  size_t chunks = 1;
  for (size_t k = 1; k < align.pairs.size(); ++k) {
    if (!(align.pairs[k].first == align.pairs[k - 1].first + 1 &&
          align.pairs[k].second == align.pairs[k - 1].second + 1))
      ++chunks;
  }
  double frag = double(chunks) / m;
  double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

}  // namespace detail

inline double meteor(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref) {
  detail::check_corpus(hyp, ref);
  double sum = 0.0;
  for (size_t k = 0; k < hyp.size(); ++k) sum += detail::meteor_sentence(hyp[k], ref[k]);
  return sum / double(hyp.size());
}

// ------------------------------------------------------------------- chrF

// Character n-gram F_beta; whitespace removed, counts aggregated across the
// corpus per order, precision/recall macro-averaged over effective orders.
inline double chrf(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref, int char_n = 6,
                   double beta = 2.0) {
  detail::check_corpus(hyp, ref);
  if (char_n < 1) fail(Errc::ConfigError, "chrf char_n must be >= 1");
  std::vector<long long> match(char_n, 0), hyp_total(char_n, 0), ref_total(char_n, 0);
  for (size_t k = 0; k < hyp.size(); ++k) {
    std::string hs = str::join(hyp[k], "");
    std::string rs = str::join(ref[k], "");
    for (int n = 1; n <= char_n; ++n) {
      std::map<std::string_view, int> hn, rn;
      for (size_t i = 0; i + n <= hs.size(); ++i) ++hn[std::string_view(hs).substr(i, n)];
      for (size_t i = 0; i + n <= rs.size(); ++i) ++rn[std::string_view(rs).substr(i, n)];
      for (const auto& [g, c] : hn) {
        hyp_total[n - 1] += c;
        auto it = rn.find(g);
        if (it != rn.end()) match[n - 1] += std::min(c, it->second);
      }
      for (const auto& [g, c] : rn) ref_total[n - 1] += c;
    }
  }
  double psum = 0, rsum = 0;
  int orders = 0;
  for (int n = 0; n < char_n; ++n) {
    if (hyp_total[n] + ref_total[n] == 0) continue;
    ++orders;
    psum += hyp_total[n] ? double(match[n]) / double(hyp_total[n]) : 0.0;
    rsum += ref_total[n] ? double(match[n]) / double(ref_total[n]) : 0.0;
  }
  if (orders == 0) return 0.0;
  double p = psum / orders, r = rsum / orders;
  double b2 = beta * beta;
  double denom = b2 * p + r;
  return denom > 0 ? (1 + b2) * p * r / denom : 0.0;
}

// -------------------------------------------------------------------- TER

namespace detail {

inline int word_edit_distance(const Tokens& h, const Tokens& r) {
  std::vector<int> prev(r.size() + 1), cur(r.size() + 1);
  for (size_t j = 0; j <= r.size(); ++j) prev[j] = int(j);
  for (size_t i = 1; i <= h.size(); ++i) {
    cur[0] = int(i);
    for (size_t j = 1; j <= r.size(); ++j) {
      int cost = h[i - 1] == r[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[r.size()];
}

inline bool contains_span(const Tokens& ref, const Tokens& span) {
  if (span.size() > ref.size()) return false;
  for (size_t j = 0; j + span.size() <= ref.size(); ++j)
    if (std::equal(span.begin(), span.end(), ref.begin() + j)) return true;
  return false;
}

constexpr size_t kMaxShiftSize = 10;

// Greedy shift search: apply the single block shift with the largest strict
// reduction in word edit distance (first found in scan order on ties), one
// edit each, until no shift helps. Returns shifts + residual edit distance.
inline int ter_edits(Tokens h, const Tokens& r) {
  int shifts = 0;
  int base = word_edit_distance(h, r);
  while (true) {
    std::optional<Tokens> best;
    int best_dist = base;
    for (size_t i = 0; i < h.size(); ++i) {
      for (size_t l = 1; l <= std::min(kMaxShiftSize, h.size() - i); ++l) {
        Tokens span(h.begin() + i, h.begin() + i + l);
        if (!contains_span(r, span)) continue;
        Tokens removed;
        removed.reserve(h.size() - l);
        removed.insert(removed.end(), h.begin(), h.begin() + i);
        removed.insert(removed.end(), h.begin() + i + l, h.end());
        for (size_t p = 0; p <= removed.size(); ++p) {
          if (p == i) continue;
          Tokens cand;
          cand.reserve(h.size());
          cand.insert(cand.end(), removed.begin(), removed.begin() + p);
          cand.insert(cand.end(), span.begin(), span.end());
          cand.insert(cand.end(), removed.begin() + p, removed.end());
          int d = word_edit_distance(cand, r);
          if (d < best_dist) {
            best_dist = d;
            best = std::move(cand);
          }
        }
      }
    }
    if (!best) break;
    h = std::move(*best);
    base = best_dist;
    ++shifts;
  }
  return shifts + base;
}

}  // namespace detail

inline double ter(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref) {
  detail::check_corpus(hyp, ref);
  long long edits = 0, ref_len = 0;
  for (size_t k = 0; k < hyp.size(); ++k) {
    edits += detail::ter_edits(hyp[k], ref[k]);
    ref_len += static_cast<long long>(ref[k].size());
  }
  if (ref_len == 0) return 0.0;
  return double(edits) / double(ref_len);
}

// ------------------------------------------------------------ full report

inline MetricReport score_corpus(const std::vector<Tokens>& hyp, const std::vector<Tokens>& ref) {
  MetricReport rep;
  rep.bleu1 = bleu(hyp, ref, 1);
  rep.bleu2 = bleu(hyp, ref, 2);
  rep.bleu3 = bleu(hyp, ref, 3);
  rep.bleu4 = bleu(hyp, ref, 4);
  rep.rouge_l = rouge_l(hyp, ref);
  rep.meteor = meteor(hyp, ref);
  rep.chrf = chrf(hyp, ref);
  rep.ter = ter(hyp, ref);
  return rep;
}

inline std::vector<Tokens> tokenize_corpus(const std::vector<std::string>& lines) {
  std::vector<Tokens> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(str::split_ws(l));
  return out;
}

// ------------------------------------------------------------ flag scores

struct FlagCounts {
  int tp = 0, fp = 0, fn = 0;
  std::optional<double> precision() const {
    if (tp + fp == 0) return std::nullopt;
    return double(tp) / double(tp + fp);
  }
  std::optional<double> recall() const {
    if (tp + fn == 0) return std::nullopt;
    return double(tp) / double(tp + fn);
  }
};

struct FlagScores {
  FlagCounts ynq, whq, conditional, negation;
};

inline FlagScores flag_scores(const std::vector<LinguisticFlags>& pred,
                              const std::vector<LinguisticFlags>& gold) {
  if (pred.size() != gold.size()) fail(Errc::LengthMismatch, "flag corpora differ in size");
  FlagScores s;
  auto tally = [](FlagCounts& c, bool p, bool g) {
    if (p && g) ++c.tp;
    else if (p && !g) ++c.fp;
    else if (!p && g) ++c.fn;
  };
  for (size_t k = 0; k < pred.size(); ++k) {
    tally(s.ynq, pred[k].ynq, gold[k].ynq);
    tally(s.whq, pred[k].whq, gold[k].whq);
    tally(s.conditional, pred[k].conditional, gold[k].conditional);
    tally(s.negation, pred[k].negation, gold[k].negation);
  }
  return s;
}

}  // namespace slgen::metrics
