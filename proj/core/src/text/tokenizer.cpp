#include "gazsl/text/tokenizer.hpp"

#include <locale.h>
#include <wctype.h>

namespace gazsl::text {
namespace {

// Decodes one code point starting at s[i]; returns 0 bytes consumed on invalid input.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    cp = b0 & 0x1F;
    len = 2;
  } else if ((b0 & 0xF0) == 0xE0) {
    cp = b0 & 0x0F;
    len = 3;
  } else if ((b0 & 0xF8) == 0xF0) {
    cp = b0 & 0x07;
    len = 4;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Letter classification uses the C.UTF-8 locale's tables when present and
// falls back to ASCII plus Latin-1 letters otherwise.
class LetterTable {
 public:
  LetterTable() : loc_(newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0))) {}
  ~LetterTable() {
    if (loc_ != static_cast<locale_t>(0)) freelocale(loc_);
  }
  LetterTable(const LetterTable&) = delete;
  LetterTable& operator=(const LetterTable&) = delete;

  bool is_letter(char32_t cp) const {
    if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    if (loc_ != static_cast<locale_t>(0)) return iswalpha_l(static_cast<wint_t>(cp), loc_) != 0;
    return cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
  }

  char32_t lower(char32_t cp) const {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
    if (loc_ != static_cast<locale_t>(0)) return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc_));
    return (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) ? cp + 32 : cp;
  }

 private:
  locale_t loc_;
};

const LetterTable& letters() {
  static const LetterTable table;
  return table;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text) {
  const LetterTable& table = letters();
  std::vector<std::string> terms;
  std::string current;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    char32_t cp = 0;
    std::size_t len = decode_utf8(raw_text, i, cp);
    if (len != 0 && table.is_letter(cp)) {
      append_utf8(current, table.lower(cp));
    } else {
      if (len == 0) len = 1;
      if (!current.empty()) terms.push_back(std::move(current));
      current.clear();
    }
    i += len;
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return terms;
}

}  // namespace gazsl::text
