#include "mcorder/sequence.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mcorder/error.h"

namespace mcorder {

namespace {

void CheckAlphabet(int alphabet_size) {
  if (alphabet_size < 2) {
    throw InvalidArgument("alphabet size must be >= 2, got " +
                          std::to_string(alphabet_size));
  }
}

}  // namespace

std::uint64_t WordSpaceSize(int alphabet_size, int length) {
  CheckAlphabet(alphabet_size);
  if (length < 0) throw InvalidArgument("negative word length");
  std::uint64_t size = 1;
  const std::uint64_t limit = std::uint64_t{1} << 62;
  for (int i = 0; i < length; ++i) {
    if (size > limit / static_cast<std::uint64_t>(alphabet_size)) {
      throw InvalidArgument("word space " + std::to_string(alphabet_size) +
                            "^" + std::to_string(length) +
                            " does not fit in a 64-bit code");
    }
    size *= static_cast<std::uint64_t>(alphabet_size);
  }
  return size;
}

Word Word::FromSymbols(std::span<const Symbol> symbols, int alphabet_size) {
  WordSpaceSize(alphabet_size, static_cast<int>(symbols.size()));
  Word w;
  w.alphabet_size_ = alphabet_size;
  w.symbols_.assign(symbols.begin(), symbols.end());
  for (Symbol s : symbols) {
    if (s < 0 || s >= alphabet_size) {
      throw InvalidArgument("symbol " + std::to_string(s) +
                            " outside alphabet of size " +
                            std::to_string(alphabet_size));
    }
    w.code_ = w.code_ * static_cast<std::uint64_t>(alphabet_size) +
              static_cast<std::uint64_t>(s);
  }
  return w;
}

Word Word::FromCode(std::uint64_t code, int length, int alphabet_size) {
  const std::uint64_t space = WordSpaceSize(alphabet_size, length);
  if (code >= space) {
    throw InvalidArgument("code " + std::to_string(code) +
                          " out of range for length " + std::to_string(length));
  }
  Word w;
  w.alphabet_size_ = alphabet_size;
  w.code_ = code;
  w.symbols_.resize(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    w.symbols_[static_cast<std::size_t>(i)] =
        static_cast<Symbol>(code % static_cast<std::uint64_t>(alphabet_size));
    code /= static_cast<std::uint64_t>(alphabet_size);
  }
  return w;
}

Sample::Sample(std::vector<Symbol> symbols, int alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  CheckAlphabet(alphabet_size);
  if (symbols_.empty()) throw InvalidArgument("sample must be non-empty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] < 0 || symbols_[i] >= alphabet_size) {
      throw InvalidArgument("symbol at position " + std::to_string(i) +
                            " outside alphabet of size " +
                            std::to_string(alphabet_size));
    }
  }
}

Sample Sample::FromOneBased(std::span<const int> symbols, int alphabet_size) {
  std::vector<Symbol> zero_based(symbols.size());
  std::transform(symbols.begin(), symbols.end(), zero_based.begin(),
                 [](int s) { return s - 1; });
  return Sample(std::move(zero_based), alphabet_size);
}

std::uint64_t Sample::Checksum() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(alphabet_size_));
  for (Symbol s : symbols_) mix(static_cast<std::uint64_t>(s));
  return h;
}

Sample Sample::Relabeled(std::span<const Symbol> permutation) const {
  if (permutation.size() != static_cast<std::size_t>(alphabet_size_)) {
    throw InvalidArgument("relabeling must cover the whole alphabet");
  }
  std::vector<Symbol> out(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    out[i] = permutation[static_cast<std::size_t>(symbols_[i])];
  }
  return Sample(std::move(out), alphabet_size_);
}

CountTable::CountTable(int word_length, int alphabet_size,
                       std::uint64_t window_count,
                       std::map<std::uint64_t, std::uint64_t> counts)
    : word_length_(word_length),
      alphabet_size_(alphabet_size),
      window_count_(window_count),
      counts_(std::move(counts)) {}

std::uint64_t CountTable::CountOfCode(std::uint64_t code) const {
  auto it = counts_.find(code);
  return it == counts_.end() ? 0 : it->second;
}

CountTable CountWords(const Sample& sample, int word_length) {
  const std::size_t n = sample.size();
  if (word_length < 0 || static_cast<std::size_t>(word_length) > n) {
    throw InvalidArgument("word length l=" + std::to_string(word_length) +
                          " must lie in [0, n] with n=" + std::to_string(n));
  }
  const int m = sample.alphabet_size();
  std::map<std::uint64_t, std::uint64_t> counts;
  if (word_length == 0) {
    counts[0] = n;
    return CountTable(0, m, n, std::move(counts));
  }
  const std::uint64_t space = WordSpaceSize(m, word_length);
  const auto l = static_cast<std::size_t>(word_length);
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    code = (code * static_cast<std::uint64_t>(m) +
            static_cast<std::uint64_t>(sample[i])) %
           space;
    if (i + 1 >= l) ++counts[code];
  }
  return CountTable(word_length, m, n - l + 1, std::move(counts));
}

std::uint64_t CountOf(const CountTable& table, const Word& word) {
  if (word.length() != table.word_length()) {
    throw InvalidArgument("word of length " + std::to_string(word.length()) +
                          " queried in a table of length " +
                          std::to_string(table.word_length()));
  }
  return table.CountOfCode(word.code());
}

std::vector<std::pair<Word, std::uint64_t>> PositiveContexts(
    const CountTable& table) {
  std::vector<std::pair<Word, std::uint64_t>> out;
  out.reserve(table.counts().size());
  for (const auto& [code, count] : table.counts()) {
    if (count == 0) continue;
    out.emplace_back(
        Word::FromCode(code, table.word_length(), table.alphabet_size()),
        count);
  }
  return out;
}

Sample ReadSample(std::istream& in) {
  std::vector<int> symbols;
  int declared = 0;
  std::string token;
  std::size_t index = 0;
  while (in >> token) {
    if (index == 0 && token.rfind("m=", 0) == 0) {
      const char* first = token.data() + 2;
      const char* last = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(first, last, declared);
      if (ec != std::errc() || ptr != last || declared < 2) {
        throw ParseError("bad alphabet header '" + token + "' at token 0", 0);
      }
      ++index;
      continue;
    }
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError("non-integer token '" + token + "' at token index " +
                           std::to_string(index),
                       index);
    }
    if (value < 1 || (declared > 0 && value > declared)) {
      throw ParseError("symbol " + std::to_string(value) + " at token index " +
                           std::to_string(index) + " outside alphabet 1.." +
                           (declared > 0 ? std::to_string(declared) : "m"),
                       index);
    }
    symbols.push_back(value);
    ++index;
  }
  if (symbols.empty()) throw ParseError("sample contains no symbols", index);
  int m = declared;
  if (m == 0) m = std::max(2, *std::max_element(symbols.begin(), symbols.end()));
  return Sample::FromOneBased(symbols, m);
}

Sample ReadSampleFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open sample file '" + path + "'");
  return ReadSample(in);
}

void WriteSample(std::ostream& out, const Sample& sample) {
  out << "m=" << sample.alphabet_size() << '\n';
  std::size_t col = 0;
  for (Symbol s : sample.symbols()) {
    out << (s + 1);
    out << (++col % 40 == 0 ? '\n' : ' ');
  }
  if (col % 40 != 0) out << '\n';
}

}  // namespace mcorder
