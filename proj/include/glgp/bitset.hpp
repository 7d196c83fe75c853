#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace glgp {

/// Fixed-width bitset over vertex ids, sized at construction.
class VertexBits {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    VertexBits() = default;
    explicit VertexBits(std::size_t nbits, bool value = false)
        : nbits_(nbits), words_(word_count(nbits), value ? ~Word{0} : Word{0}) {
        trim();
    }

    static constexpr std::size_t word_count(std::size_t nbits) {
        return (nbits + kWordBits - 1) / kWordBits;
    }

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
    void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
    void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool none() const {
        for (Word w : words_)
            if (w) return false;
        return true;
    }

    VertexBits& operator&=(const VertexBits& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    VertexBits& operator|=(const VertexBits& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    VertexBits& and_not(const VertexBits& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend VertexBits operator&(VertexBits a, const VertexBits& b) { return a &= b; }

    bool operator==(const VertexBits&) const = default;

    /// Calls fn(i) for each set bit in increasing order.
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            Word w = words_[k];
            while (w) {
                const auto b = static_cast<std::size_t>(std::countr_zero(w));
                fn(k * kWordBits + b);
                w &= w - 1;
            }
        }
    }

    std::span<const Word> words() const { return words_; }
    std::span<Word> words() { return words_; }

private:
    void trim() {
        if (nbits_ % kWordBits && !words_.empty())
            words_.back() &= (Word{1} << (nbits_ % kWordBits)) - 1;
    }

    std::size_t nbits_ = 0;
    std::vector<Word> words_;
};

} // namespace glgp
