#pragma once

// ASL gloss grammar: tokenizer, parser, canonicalizer, and the word->gloss
// lexicon. The surface syntax follows the annotation conventions used by the
// sign dictionary: fs- fingerspelling, ns- name signs, # loan signs, +
// compounds, i:GLOSS:j verb agreement, IX-/POSS-/SELF- pronoun families,
// lowercase aspect suffixes, and QMwg.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slgen/common.hpp"

namespace slgen::gloss {

enum class TokenKind { Lexical, Fingerspelled, NameSign, LoanSign, Compound, QuestionMark };

inline const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Lexical: return "Lexical";
    case TokenKind::Fingerspelled: return "Fingerspelled";
    case TokenKind::NameSign: return "NameSign";
    case TokenKind::LoanSign: return "LoanSign";
    case TokenKind::Compound: return "Compound";
    case TokenKind::QuestionMark: return "QuestionMark";
  }
  return "?";
}

struct Agreement {
  std::string subject_locus;  // empty when absent
  std::string object_locus;
  // Non-empty when the object rides as a hyphen suffix with plural motion,
  // as in 1p:GIVE-3p-arc; selects the suffix render style.
  std::string object_plurality;
};

struct GlossToken {
  std::string raw;  // original surface form, always preserved
  TokenKind kind = TokenKind::Lexical;
  std::string base;                 // canonical label (GIVE, IX-loc, ...)
  std::vector<std::string> letters; // Fingerspelled only, one char each
  std::vector<GlossToken> parts;    // Compound only
  std::optional<Agreement> agreement;
  std::string person;      // 1p / 2p / 3p for the IX/POSS/SELF family
  std::string plurality;   // pl-2, pl-arc, arc, ...
  std::string aspect;      // continuative, distributive, recip, ...
  std::string locus;       // trailing :i style locus
  std::vector<std::string> referents;  // x/y lists or recip i,j pairs
  char referent_sep = '/';
  std::string quoted;      // free-text adverbial, verbatim without quotes
  bool question_wiggle = false;  // -QMwg suffix on a fingerspelled token
  // Meaning-preserving decorations captured at parse time and dropped by
  // normalization: trailing '+', (1h)/(2h), alt.
  int repetition = 0;
  std::string hands_marker;
  bool alternating = false;
};

struct GlossSentence {
  std::vector<GlossToken> tokens;
  std::string source_english;
};

namespace detail {

inline bool is_locus_id(std::string_view s) {
  if (s == "1p" || s == "2p" || s == "3p") return true;
  return s.size() == 1 && s[0] >= 'a' && s[0] <= 'z';
}

inline bool is_person(std::string_view s) { return s == "1p" || s == "2p" || s == "3p"; }

inline bool is_canonical_locus(std::string_view s) {
  return s == "i" || s == "j" || s == "1p" || s == "2p" || s == "3p";
}

inline bool all_lower_alpha(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < 'a' || c > 'z') return false;
  return true;
}

inline bool is_letter_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Whitespace tokenizer that keeps double-quoted spans intact, so adverbials
// like IX-loc"under table" survive as one token.
inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quotes = false;
  for (char c : s) {
    if (c == '"') {
      in_quotes = !in_quotes;
      cur.push_back(c);
    } else if (!in_quotes && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// The pronoun/possessive/reflexive/adverbial family. Longest prefix wins.
inline std::optional<std::string> ix_family_prefix(std::string_view t) {
  static const char* prefixes[] = {"THUMB-IX-loc", "THUMB-IX-dir", "THUMB-IX", "IX-loc",
                                   "IX-dir",       "IX",           "POSS",     "SELF"};
  for (const char* p : prefixes) {
    std::string_view pv(p);
    if (t == pv) return std::string(pv);
    if (str::starts_with(t, pv)) {
      char next = t[pv.size()];
      if (next == '-' || next == ':' || next == '"') return std::string(pv);
    }
  }
  return std::nullopt;
}

inline GlossToken parse_token(const std::string& tok);

// Core after stripping agreement colons: BASE[-aspect][-obj-person[-arc|-pl-N]]
inline void parse_core(GlossToken& t, std::string core) {
  // Embedded object agreement suffix: GIVE-3p-arc / GIVE-3p-pl-2
  for (const char* person : {"-1p-", "-2p-", "-3p-"}) {
    size_t pos = core.rfind(person);
    if (pos == std::string::npos) continue;
    std::string tail = core.substr(pos + 4);  // after "-Np-"
    if (tail == "arc" || str::starts_with(tail, "pl-")) {
      if (!t.agreement) t.agreement = Agreement{};
      t.agreement->object_locus = core.substr(pos + 1, 2);
      t.agreement->object_plurality = tail;
      core = core.substr(0, pos);
      break;
    }
  }
  // Trailing all-lowercase hyphen segment is an aspect/inflection marker.
  size_t dash = core.rfind('-');
  if (dash != std::string::npos && dash > 0) {
    std::string tail = core.substr(dash + 1);
    if (all_lower_alpha(tail) && tail != "loc" && tail != "dir") {
      t.aspect = tail;
      core = core.substr(0, dash);
    }
  }
  t.base = core;
}

inline void parse_locus_tail(GlossToken& t, const std::string& tail) {
  // :i / :x/y / :i,j
  if (tail.find('/') != std::string::npos) {
    t.referents = str::split(tail, '/');
    t.referent_sep = '/';
  } else if (tail.find(',') != std::string::npos) {
    t.referents = str::split(tail, ',');
    t.referent_sep = ',';
  } else {
    t.locus = tail;
  }
}

inline GlossToken parse_ix_family(const std::string& tok, const std::string& prefix) {
  GlossToken t;
  t.raw = tok;
  t.kind = TokenKind::Lexical;
  t.base = prefix;
  std::string rest = tok.substr(prefix.size());
  // Quoted free-text adverbial: stored verbatim, base stays the prefix.
  if (!rest.empty() && rest.front() == '"') {
    if (rest.size() < 2 || rest.back() != '"')
      fail(Errc::MalformedToken, "unterminated quote in '" + tok + "'");
    t.quoted = rest.substr(1, rest.size() - 2);
    return t;
  }
  std::string head = rest, tail;
  size_t colon = rest.find(':');
  if (colon != std::string::npos) {
    head = rest.substr(0, colon);
    tail = rest.substr(colon + 1);
    if (tail.empty()) fail(Errc::MalformedToken, "trailing colon in '" + tok + "'");
  }
  if (!head.empty()) {
    if (head.front() != '-') fail(Errc::MalformedToken, "bad suffix in '" + tok + "'");
    auto segs = str::split(head.substr(1), '-');
    size_t i = 0;
    if (i < segs.size() && is_person(segs[i])) t.person = segs[i++];
    if (i < segs.size()) {
      if (segs[i] == "pl" && i + 1 < segs.size()) {
        t.plurality = "pl-" + segs[i + 1];
        i += 2;
      } else if (segs[i] == "arc") {
        t.plurality = "arc";
        ++i;
      }
    }
    if (i != segs.size()) {
      // Unknown decoration; keep the whole token as an opaque lexical label.
      t.person.clear();
      t.plurality.clear();
      t.base = tok.substr(0, tok.size() - tail.size() - (tail.empty() ? 0 : 1));
    }
  }
  if (!tail.empty()) parse_locus_tail(t, tail);
  return t;
}

inline GlossToken parse_fingerspelled(const std::string& tok) {
  GlossToken t;
  t.raw = tok;
  t.kind = TokenKind::Fingerspelled;
  t.base = "fs";
  std::string rest = tok.substr(3);
  size_t colon = rest.find(':');
  if (colon != std::string::npos) {
    std::string tail = rest.substr(colon + 1);
    if (tail.empty()) fail(Errc::MalformedToken, "trailing colon in '" + tok + "'");
    t.locus = tail;
    rest = rest.substr(0, colon);
  }
  if (str::ends_with(rest, "-QMwg")) {
    t.question_wiggle = true;
    rest = rest.substr(0, rest.size() - 5);
  }
  for (const auto& seg : str::split(rest, '-')) {
    if (seg.empty()) continue;
    // Multi-char segments (fs-JOHN) expand one letter per character.
    for (char c : seg) {
      char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!is_letter_char(u)) fail(Errc::MalformedToken, "bad fingerspelling letter in '" + tok + "'");
      t.letters.emplace_back(1, u);
    }
  }
  if (t.letters.empty()) fail(Errc::MalformedToken, "empty fingerspelling '" + tok + "'");
  return t;
}

inline GlossToken parse_token(const std::string& tok) {
  GlossToken t;
  t.raw = tok;
  std::string body = tok;

  // Meaning-preserving decorations: (1h)/(2h) prefix, alt. prefix, trailing +
  for (const char* h : {"(1h)", "(2h)"}) {
    if (str::starts_with(body, h)) {
      t.hands_marker = h;
      body = body.substr(4);
      break;
    }
  }
  if (str::starts_with(body, "alt.")) {
    t.alternating = true;
    body = body.substr(4);
  }
  while (body.size() > 1 && body.back() == '+') {
    ++t.repetition;
    body.pop_back();
  }
  if (body.empty()) fail(Errc::MalformedToken, "empty token after decorations: '" + tok + "'");

  if (body == "QMwg") {
    t.kind = TokenKind::QuestionMark;
    t.base = "QMwg";
    return t;
  }
  if (body.front() == '#') {
    t.kind = TokenKind::LoanSign;
    t.base = body.substr(1);
    if (t.base.empty()) fail(Errc::MalformedToken, "empty loan sign '" + tok + "'");
    return t;
  }
  if (str::starts_with(body, "ns-")) {
    t.kind = TokenKind::NameSign;
    std::string rest = body.substr(3);
    size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      std::string tail = rest.substr(colon + 1);
      if (tail.empty()) fail(Errc::MalformedToken, "trailing colon in '" + tok + "'");
      t.locus = tail;
      rest = rest.substr(0, colon);
    }
    if (rest.empty()) fail(Errc::MalformedToken, "empty name sign '" + tok + "'");
    t.base = rest;
    return t;
  }
  if (str::starts_with(body, "fs-")) {
    GlossToken f = parse_fingerspelled(body);
    f.raw = tok;
    f.repetition = t.repetition;
    f.hands_marker = t.hands_marker;
    f.alternating = t.alternating;
    return f;
  }
  // Compound: interior '+' between nonempty sides.
  if (body.find('+') != std::string::npos && body.front() != '+') {
    auto sides = str::split(body, '+');
    bool ok = sides.size() >= 2;
    for (const auto& s : sides)
      if (s.empty()) ok = false;
    if (ok) {
      GlossToken c;
      c.raw = tok;
      c.kind = TokenKind::Compound;
      c.repetition = t.repetition;
      c.hands_marker = t.hands_marker;
      c.alternating = t.alternating;
      for (const auto& s : sides) c.parts.push_back(parse_token(s));
      return c;
    }
  }
  if (auto prefix = ix_family_prefix(body)) {
    GlossToken x = parse_ix_family(body, *prefix);
    x.raw = tok;
    x.repetition = t.repetition;
    x.hands_marker = t.hands_marker;
    x.alternating = t.alternating;
    return x;
  }

  // Agreement verb forms around ':'.
  auto segs = str::split(body, ':');
  if (segs.size() > 3) fail(Errc::MalformedToken, "too many colons in '" + tok + "'");
  if (segs.size() == 3) {
    if (segs[0].empty() || segs[1].empty() || segs[2].empty())
      fail(Errc::MalformedToken, "bad agreement syntax in '" + tok + "'");
    t.agreement = Agreement{segs[0], segs[2], ""};
    parse_core(t, segs[1]);
    if (t.agreement && !t.agreement->object_plurality.empty())
      fail(Errc::MalformedToken, "conflicting object agreement in '" + tok + "'");
    t.kind = TokenKind::Lexical;
    return t;
  }
  if (segs.size() == 2) {
    if (segs[0].empty() || segs[1].empty())
      fail(Errc::MalformedToken, "bad agreement syntax in '" + tok + "'");
    if (is_locus_id(segs[0])) {
      // subject:CORE, with any object folded into the core suffix
      t.agreement = Agreement{segs[0], "", ""};
      GlossToken inner;
      parse_core(inner, segs[1]);
      t.base = inner.base;
      t.aspect = inner.aspect;
      if (inner.agreement) {
        t.agreement->object_locus = inner.agreement->object_locus;
        t.agreement->object_plurality = inner.agreement->object_plurality;
      }
      t.kind = TokenKind::Lexical;
      return t;
    }
    // CORE:tail — object agreement, recip pair, or referent list
    parse_core(t, segs[0]);
    if (segs[1].find('/') != std::string::npos || segs[1].find(',') != std::string::npos) {
      parse_locus_tail(t, segs[1]);
    } else if (is_locus_id(segs[1])) {
      if (!t.agreement) t.agreement = Agreement{};
      t.agreement->object_locus = segs[1];
    } else {
      t.locus = segs[1];
    }
    t.kind = TokenKind::Lexical;
    return t;
  }
  parse_core(t, body);
  t.kind = TokenKind::Lexical;
  return t;
}

}  // namespace detail

// Canonical surface form rebuilt from token structure. Decorations captured
// at parse time (repetition, hand markers, alt.) are not re-emitted.
inline std::string render(const GlossToken& t) {
  switch (t.kind) {
    case TokenKind::QuestionMark:
      return "QMwg";
    case TokenKind::LoanSign:
      return "#" + t.base;
    case TokenKind::NameSign: {
      std::string s = "ns-" + t.base;
      if (!t.locus.empty()) s += ":" + t.locus;
      return s;
    }
    case TokenKind::Fingerspelled: {
      std::string s = "fs-" + str::join(t.letters, "-");
      if (t.question_wiggle) s += "-QMwg";
      if (!t.locus.empty()) s += ":" + t.locus;
      return s;
    }
    case TokenKind::Compound: {
      std::vector<std::string> parts;
      for (const auto& p : t.parts) parts.push_back(render(p));
      return str::join(parts, "+");
    }
    case TokenKind::Lexical: {
      std::string s;
      if (t.agreement && !t.agreement->subject_locus.empty()) s += t.agreement->subject_locus + ":";
      s += t.base;
      if (!t.aspect.empty()) s += "-" + t.aspect;
      if (!t.person.empty()) s += "-" + t.person;
      if (!t.plurality.empty()) s += "-" + t.plurality;
      if (t.agreement && !t.agreement->object_locus.empty()) {
        if (!t.agreement->object_plurality.empty())
          s += "-" + t.agreement->object_locus + "-" + t.agreement->object_plurality;
        else
          s += ":" + t.agreement->object_locus;
      }
      if (!t.quoted.empty()) s += "\"" + t.quoted + "\"";
      if (!t.referents.empty()) s += ":" + str::join(t.referents, std::string(1, t.referent_sep));
      if (!t.locus.empty() && t.referents.empty()) s += ":" + t.locus;
      return s;
    }
  }
  return t.raw;
}

inline std::string render(const GlossSentence& g) {
  std::vector<std::string> toks;
  toks.reserve(g.tokens.size());
  for (const auto& t : g.tokens) toks.push_back(render(t));
  return str::join(toks, " ");
}

inline GlossSentence parse_gloss(std::string_view s) {
  auto toks = detail::tokenize(s);
  if (toks.empty()) fail(Errc::EmptyInput, "blank gloss string");
  GlossSentence out;
  for (const auto& tok : toks) out.tokens.push_back(detail::parse_token(tok));
  return out;
}

// Canonicalization: expand fs- words to letters, drop repetition/hand/alt
// decorations, and map loci outside {i, j, 1p, 2p, 3p} onto the closed set
// (subject side -> i, object side -> j).
inline GlossToken canonicalize(GlossToken t) {
  t.repetition = 0;
  t.hands_marker.clear();
  t.alternating = false;
  if (t.agreement) {
    if (!t.agreement->subject_locus.empty() && !detail::is_canonical_locus(t.agreement->subject_locus))
      t.agreement->subject_locus = "i";
    if (!t.agreement->object_locus.empty() && !detail::is_canonical_locus(t.agreement->object_locus))
      t.agreement->object_locus = "j";
  }
  for (auto& p : t.parts) p = canonicalize(std::move(p));
  t.raw = render(t);
  return t;
}

inline std::string normalize_gloss(std::string_view s) {
  GlossSentence g = parse_gloss(s);
  std::vector<std::string> toks;
  toks.reserve(g.tokens.size());
  for (auto& t : g.tokens) toks.push_back(render(canonicalize(std::move(t))));
  return str::join(toks, " ");
}

// Classifier glosses (DCL/LCL/SCL/BCL/BPCL/ICL/PCL/CL prefixes) have no clips
// in the dictionary and are rejected at build time.
inline bool is_classifier_gloss(std::string_view g) {
  static const char* prefixes[] = {"BPCL", "DCL", "LCL", "SCL", "BCL", "ICL", "PCL", "CL"};
  for (const char* p : prefixes) {
    std::string_view pv(p);
    if (str::starts_with(g, pv)) {
      if (g.size() == pv.size()) return true;
      char next = g[pv.size()];
      if (next == ':' || next == '-' || next == '"') return true;
    }
  }
  return false;
}

inline std::string fingerspell_word(std::string_view word) {
  std::vector<std::string> letters;
  for (char c : word) {
    char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (detail::is_letter_char(u)) letters.emplace_back(1, u);
  }
  if (letters.empty()) fail(Errc::EmptyInput, "no spellable letters in '" + std::string(word) + "'");
  return "fs-" + str::join(letters, "-");
}

struct Lexicon {
  std::map<std::string, std::vector<std::string>> word_to_glosses;
  std::map<std::string, std::vector<std::string>> gloss_to_clips;
  std::vector<std::string> classifier_warnings;

  bool has_gloss_clips(const std::string& g) const {
    auto it = gloss_to_clips.find(g);
    return it != gloss_to_clips.end() && !it->second.empty();
  }
};

// Fingerspelling fallback guarantees a non-empty result for any word.
inline std::vector<std::string> lookup(const Lexicon& lex, std::string_view word) {
  if (str::trim(word).empty()) fail(Errc::EmptyInput, "empty lookup word");
  auto it = lex.word_to_glosses.find(str::lower(str::trim(word)));
  if (it != lex.word_to_glosses.end() && !it->second.empty()) return it->second;
  return {fingerspell_word(word)};
}

inline Lexicon build_lexicon(const std::vector<std::pair<std::string, std::string>>& entries) {
  if (entries.empty()) fail(Errc::EmptyInput, "no lexicon entries");
  Lexicon lex;
  for (size_t idx = 0; idx < entries.size(); ++idx) {
    const auto& [word, raw_gloss] = entries[idx];
    std::string key = str::lower(str::trim(word));
    if (key.empty()) fail(Errc::MalformedToken, "empty word at entry " + std::to_string(idx));
    if (is_classifier_gloss(str::trim(raw_gloss))) {
      lex.classifier_warnings.push_back(std::string(str::trim(raw_gloss)));
      continue;
    }
    std::string norm;
    try {
      norm = normalize_gloss(raw_gloss);
    } catch (const Error& e) {
      fail(e.code(), "entry " + std::to_string(idx) + " ('" + word + "'): " + e.what());
    }
    auto& variants = lex.word_to_glosses[key];
    if (std::find(variants.begin(), variants.end(), norm) == variants.end())
      variants.push_back(norm);
  }
  if (lex.word_to_glosses.empty())
    fail(Errc::EmptyInput, "all lexicon entries were rejected");
  return lex;
}

// TSV format: one `word<TAB>gloss` pair per line, UTF-8, '#' comments.
inline std::vector<std::pair<std::string, std::string>> parse_lexicon_tsv(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  size_t lineno = 0;
  for (const auto& line : str::split(text, '\n')) {
    ++lineno;
    auto t = str::trim(line);
    if (t.empty() || t.front() == '#') continue;
    size_t tab = t.find('\t');
    if (tab == std::string_view::npos)
      fail(Errc::DataError, "lexicon line " + std::to_string(lineno) + " has no tab separator");
    std::string word(str::trim(t.substr(0, tab)));
    std::string g(str::trim(t.substr(tab + 1)));
    if (word.empty() || g.empty())
      fail(Errc::DataError, "lexicon line " + std::to_string(lineno) + " has an empty field");
    entries.emplace_back(word, g);
  }
  return entries;
}

inline std::string to_lexicon_tsv(const Lexicon& lex) {
  std::string out;
  for (const auto& [word, variants] : lex.word_to_glosses)
    for (const auto& g : variants) out += word + "\t" + g + "\n";
  return out;
}

}  // namespace slgen::gloss
