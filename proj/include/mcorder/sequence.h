#ifndef MCORDER_SEQUENCE_H_
#define MCORDER_SEQUENCE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcorder {

// A state of the chain. Internally 0-based; every user-facing reader and
// writer shifts to 1-based.
using Symbol = int;

// A fixed-length word over {0..m-1} together with its base-m code. The first
// symbol is the most significant digit, so codes order words
// lexicographically.
class Word {
 public:
  Word() = default;

  static Word FromSymbols(std::span<const Symbol> symbols, int alphabet_size);
  static Word FromCode(std::uint64_t code, int length, int alphabet_size);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::uint64_t code() const { return code_; }
  int length() const { return static_cast<int>(symbols_.size()); }
  int alphabet_size() const { return alphabet_size_; }

  friend bool operator==(const Word& a, const Word& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.symbols_ == b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
  std::uint64_t code_ = 0;
  int alphabet_size_ = 0;
};

// m^length, throwing InvalidArgument if the result does not fit in 63 bits.
std::uint64_t WordSpaceSize(int alphabet_size, int length);

// A sample X_1..X_n over the alphabet {0..m-1}, m >= 2.
class Sample {
 public:
  Sample(std::vector<Symbol> symbols, int alphabet_size);

  // Builds a sample from 1-based symbols, as written in sample files.
  static Sample FromOneBased(std::span<const int> symbols, int alphabet_size);

  std::span<const Symbol> symbols() const { return symbols_; }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::size_t size() const { return symbols_.size(); }
  int alphabet_size() const { return alphabet_size_; }

  // FNV-1a over the symbol stream and alphabet size.
  std::uint64_t Checksum() const;

  // Applies a relabeling symbol -> permutation[symbol].
  Sample Relabeled(std::span<const Symbol> permutation) const;

 private:
  std::vector<Symbol> symbols_;
  int alphabet_size_;
};

// Sliding-window occurrence counts N(w | X_1^n) for every word of one length.
// Immutable once built.
class CountTable {
 public:
  CountTable(int word_length, int alphabet_size, std::uint64_t window_count,
             std::map<std::uint64_t, std::uint64_t> counts);

  int word_length() const { return word_length_; }
  int alphabet_size() const { return alphabet_size_; }
  std::uint64_t window_count() const { return window_count_; }

  // Keyed by Word::code(); absent keys have count zero.
  const std::map<std::uint64_t, std::uint64_t>& counts() const {
    return counts_;
  }

  std::uint64_t CountOfCode(std::uint64_t code) const;

 private:
  int word_length_;
  int alphabet_size_;
  std::uint64_t window_count_;
  std::map<std::uint64_t, std::uint64_t> counts_;
};

// Counts all windows of length `word_length`. The length-0 table holds the
// single entry N(.) = n.
CountTable CountWords(const Sample& sample, int word_length);

// N(w); InvalidArgument when the word length differs from the table's.
std::uint64_t CountOf(const CountTable& table, const Word& word);

// Words with a positive count, ascending by code.
std::vector<std::pair<Word, std::uint64_t>> PositiveContexts(
    const CountTable& table);

// Sample file format: whitespace-separated 1-based integer symbols, with an
// optional leading `m=<alphabet_size>` header. Without a header the alphabet
// size is the largest symbol seen (at least 2). Throws ParseError carrying the
// token index on any malformed or out-of-range token, or on empty input.
Sample ReadSample(std::istream& in);
Sample ReadSampleFile(const std::string& path);
void WriteSample(std::ostream& out, const Sample& sample);

}  // namespace mcorder

#endif  // MCORDER_SEQUENCE_H_
