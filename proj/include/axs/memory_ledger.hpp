#pragma once

#include <cstdint>

namespace axs {

// Word-level accounting of live sketch state. Every sketch allocation and
// release is routed through one of these so experiments can report peak
// working-set size in machine words.
class MemoryLedger {
 public:
  void allocate(std::uint64_t words) {
    words_live_ += words;
    if (words_live_ > words_peak_) words_peak_ = words_live_;
  }

  void release(std::uint64_t words) {
    words_live_ = words <= words_live_ ? words_live_ - words : 0;
  }

  std::uint64_t words_live() const { return words_live_; }
  std::uint64_t words_peak() const { return words_peak_; }

 private:
  std::uint64_t words_live_ = 0;
  std::uint64_t words_peak_ = 0;
};

}  // namespace axs
