#include "gazsl/text/porter.hpp"

#include <array>

namespace gazsl::text {
namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// A 'y' is a consonant at the start of a word or after a vowel.
bool is_consonant(std::string_view w, std::size_t i) {
  if (is_vowel_letter(w[i])) return false;
  if (w[i] != 'y') return true;
  return i == 0 ? true : !is_consonant(w, i - 1);
}

// m in [C](VC){m}[V].
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    const bool cons = is_consonant(stem, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant and the last letter is not w, x or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
  const char last = w[n - 1];
  return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

using Condition = bool (*)(std::string_view stem);

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Condition condition;  // nullptr: unconditional
};

bool m_gt0(std::string_view s) { return measure(s) > 0; }
bool m_gt1(std::string_view s) { return measure(s) > 1; }
bool m_gt1_s_or_t(std::string_view s) { return measure(s) > 1 && (s.back() == 's' || s.back() == 't'); }

// The first rule whose suffix matches decides: it fires if its condition
// holds, otherwise the word is returned unchanged.
template <std::size_t N>
std::string apply_rules(const std::string& w, const std::array<Rule, N>& rules) {
  for (const Rule& r : rules) {
    if (!ends_with(w, r.suffix)) continue;
    std::string stem = w.substr(0, w.size() - r.suffix.size());
    if (r.condition == nullptr || r.condition(stem)) return stem + std::string(r.replacement);
    return w;
  }
  return w;
}

std::string step1a(const std::string& w) {
  static constexpr std::array<Rule, 4> rules{{
      {"sses", "ss", nullptr},
      {"ies", "i", nullptr},
      {"ss", "ss", nullptr},
      {"s", "", nullptr},
  }};
  return apply_rules(w, rules);
}

std::string step1b(const std::string& w) {
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    return measure(stem) > 0 ? stem + "ee" : w;
  }
  std::string stem;
  bool stripped = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      std::string candidate = w.substr(0, w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = std::move(candidate);
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return w;

  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string step1c(const std::string& w) {
  if (ends_with(w, "y")) {
    std::string stem = w.substr(0, w.size() - 1);
    if (contains_vowel(stem)) return stem + "i";
  }
  return w;
}

std::string step2(const std::string& w) {
  static constexpr std::array<Rule, 20> rules{{
      {"ational", "ate", m_gt0}, {"tional", "tion", m_gt0}, {"enci", "ence", m_gt0},
      {"anci", "ance", m_gt0},   {"izer", "ize", m_gt0},    {"abli", "able", m_gt0},
      {"alli", "al", m_gt0},     {"entli", "ent", m_gt0},   {"eli", "e", m_gt0},
      {"ousli", "ous", m_gt0},   {"ization", "ize", m_gt0}, {"ation", "ate", m_gt0},
      {"ator", "ate", m_gt0},    {"alism", "al", m_gt0},    {"iveness", "ive", m_gt0},
      {"fulness", "ful", m_gt0}, {"ousness", "ous", m_gt0}, {"aliti", "al", m_gt0},
      {"iviti", "ive", m_gt0},   {"biliti", "ble", m_gt0},
  }};
  return apply_rules(w, rules);
}

std::string step3(const std::string& w) {
  static constexpr std::array<Rule, 7> rules{{
      {"icate", "ic", m_gt0},
      {"ative", "", m_gt0},
      {"alize", "al", m_gt0},
      {"iciti", "ic", m_gt0},
      {"ical", "ic", m_gt0},
      {"ful", "", m_gt0},
      {"ness", "", m_gt0},
  }};
  return apply_rules(w, rules);
}

std::string step4(const std::string& w) {
  static constexpr std::array<Rule, 19> rules{{
      {"al", "", m_gt1},    {"ance", "", m_gt1},  {"ence", "", m_gt1}, {"er", "", m_gt1},
      {"ic", "", m_gt1},    {"able", "", m_gt1},  {"ible", "", m_gt1}, {"ant", "", m_gt1},
      {"ement", "", m_gt1}, {"ment", "", m_gt1},  {"ent", "", m_gt1},  {"ion", "", m_gt1_s_or_t},
      {"ou", "", m_gt1},    {"ism", "", m_gt1},   {"ate", "", m_gt1},  {"iti", "", m_gt1},
      {"ous", "", m_gt1},   {"ive", "", m_gt1},   {"ize", "", m_gt1},
  }};
  return apply_rules(w, rules);
}

std::string step5a(const std::string& w) {
  if (!ends_with(w, "e")) return w;
  std::string stem = w.substr(0, w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) return stem;
  return w;
}

std::string step5b(const std::string& w) {
  if (ends_with(w, "ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) return w.substr(0, w.size() - 1);
  return w;
}

}  // namespace

std::string porter_stem(std::string_view term) {
  std::string w(term);
  if (w.empty()) return w;
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace gazsl::text
