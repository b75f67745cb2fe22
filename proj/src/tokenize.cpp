#include <algorithm>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "newsframe/corpus.hpp"

namespace newsframe {

namespace {

// English stopwords, sorted. Contractions appear without apostrophes because the
// tokenizer joins "don't" into "dont".
constexpr std::string_view kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "ain", "all", "also", "am", "an", "and",
    "any", "are", "aren", "arent", "as", "at", "be", "because", "been", "before", "being",
    "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn", "couldnt", "d",
    "did", "didn", "didnt", "do", "does", "doesn", "doesnt", "doing", "don", "dont", "down",
    "during", "each", "few", "for", "from", "further", "had", "hadn", "hadnt", "has", "hasn",
    "hasnt", "have", "haven", "havent", "having", "he", "her", "here", "heres", "hers", "herself",
    "hes", "him", "himself", "his", "how", "hows", "i", "if", "im", "in", "into", "is", "isn",
    "isnt", "it", "itd", "itll", "its", "itself", "ive", "just", "ll", "m", "ma", "me", "mightn",
    "mightnt", "more", "most", "mustn", "mustnt", "my", "myself", "needn", "neednt", "no", "nor",
    "not", "now", "o", "of", "off", "on", "once", "only", "or", "other", "our", "ours",
    "ourselves", "out", "over", "own", "re", "s", "said", "same", "shan", "shant", "she", "shes",
    "should", "shouldn", "shouldnt", "shouldve", "so", "some", "such", "t", "than", "that",
    "thatll", "thats", "the", "their", "theirs", "them", "themselves", "then", "there", "theres",
    "these", "they", "theyd", "theyll", "theyre", "theyve", "this", "those", "through", "to",
    "too", "under", "until", "up", "ve", "very", "was", "wasn", "wasnt", "we", "were", "weren",
    "werent", "weve", "what", "whats", "when", "whens", "where", "wheres", "which", "while",
    "who", "whom", "whos", "why", "whys", "will", "with", "wont", "would", "wouldn", "wouldnt",
    "y", "you", "youd", "youll", "your", "youre", "yours", "yourself", "yourselves", "youve",
};

enum class CharClass { Word, Apostrophe, SentenceEnd, Space, Other };

struct Decoded {
  char32_t cp;
  std::size_t len;
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) {
    int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0)
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
  }
  return {0xFFFD, 1};  // invalid byte: treated as a separator
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

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9'))
      return CharClass::Word;
    if (cp == '\'') return CharClass::Apostrophe;
    if (cp == '.' || cp == '!' || cp == '?') return CharClass::SentenceEnd;
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v')
      return CharClass::Space;
    return CharClass::Other;
  }
  if (cp == 0x2019 || cp == 0x02BC) return CharClass::Apostrophe;
  if (cp == 0xA0 || cp == 0x2028 || cp == 0x2029 || (cp >= 0x2000 && cp <= 0x200B) ||
      cp == 0x3000)
    return CharClass::Space;
  // Latin-1 punctuation and symbols, general punctuation, symbol blocks,
  // CJK punctuation, fullwidth ASCII punctuation, replacement char.
  if ((cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 || (cp >= 0x2000 && cp <= 0x2BFF) ||
      (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
      (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) || cp == 0xFFFD)
    return CharClass::Other;
  return CharClass::Word;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return cp | 1U;
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp & 1U) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

}  // namespace

bool is_stopword(std::string_view token) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords), token);
}

std::vector<Sentence> tokenize_sentences(std::string_view text) {
  std::vector<Sentence> sentences(1);
  std::string word;

  auto flush_word = [&] {
    if (!word.empty() && !is_stopword(word)) sentences.back().push_back(word);
    word.clear();
  };
  auto end_sentence = [&] {
    flush_word();
    if (!sentences.back().empty()) sentences.emplace_back();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const Decoded d = decode_utf8(text, i);
    const CharClass cls = classify(d.cp);
    const std::size_t next = i + d.len;

    switch (cls) {
      case CharClass::Word:
        append_utf8(word, to_lower(d.cp));
        break;
      case CharClass::Apostrophe: {
        if (word.empty()) break;
        if (next < text.size()) {
          const Decoded n1 = decode_utf8(text, next);
          if (classify(n1.cp) == CharClass::Word) {
            const bool is_s = (n1.cp == 's' || n1.cp == 'S');
            const std::size_t after = next + n1.len;
            const bool s_ends_word =
                after >= text.size() || classify(decode_utf8(text, after).cp) != CharClass::Word;
            if (is_s && s_ends_word) {
              flush_word();  // possessive: drop the 's
              i = after;
              continue;
            }
            break;  // inner apostrophe: join ("don't" -> "dont")
          }
        }
        flush_word();
        break;
      }
      case CharClass::SentenceEnd: {
        const bool boundary =
            next >= text.size() || classify(decode_utf8(text, next).cp) != CharClass::Word;
        if (boundary) {
          end_sentence();
        } else {
          flush_word();
        }
        break;
      }
      case CharClass::Space:
      case CharClass::Other:
        flush_word();
        break;
    }
    i = next;
  }
  flush_word();
  if (sentences.back().empty()) sentences.pop_back();
  return sentences;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& s : tokenize_sentences(text)) {
    for (auto& t : s) out.push_back(std::move(t));
  }
  return out;
}

std::vector<Sentence> article_sentences(const Article& a) {
  auto sentences = tokenize_sentences(a.title);
  for (auto& s : tokenize_sentences(a.body)) sentences.push_back(std::move(s));
  return sentences;
}

std::vector<NGram> extract_ngrams(std::span<const std::string> tokens, const NgramOrders& orders) {
  std::vector<NGram> out;
  if (orders.unigrams()) {
    for (const auto& t : tokens) out.push_back(NGram{t});
  }
  if (orders.bigrams() && tokens.size() >= 2) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) out.push_back(NGram{tokens[i], tokens[i + 1]});
  }
  return out;
}

std::vector<NGram> extract_ngrams(std::span<const Sentence> sentences, const NgramOrders& orders) {
  std::vector<NGram> out;
  if (orders.unigrams()) {
    for (const auto& s : sentences)
      for (const auto& t : s) out.push_back(NGram{t});
  }
  if (orders.bigrams()) {
    for (const auto& s : sentences)
      for (std::size_t i = 0; i + 1 < s.size(); ++i) out.push_back(NGram{s[i], s[i + 1]});
  }
  return out;
}

}  // namespace newsframe
