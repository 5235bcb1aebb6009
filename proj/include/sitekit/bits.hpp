#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace sitekit {

/// Fixed-width bit vector used for sieves and subset enumeration.
/// Comparison is lexicographic on the words, which gives one fixed,
/// reproducible ordering for everything that iterates over bit sets.
class Bits {
public:
    Bits() = default;
    explicit Bits(int n) : words_((n + 63) / 64, 0), n_(n) {}

    int size() const { return n_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void set_all() {
        for (auto& w : words_) w = ~std::uint64_t{0};
        trim();
    }
    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

    /// First set bit at position >= from, or -1.
    int next(int from = 0) const {
        for (int i = from; i < n_;) {
            std::uint64_t w = words_[i >> 6] >> (i & 63);
            if (w) return i + __builtin_ctzll(w);
            i = ((i >> 6) + 1) << 6;
        }
        return -1;
    }

    bool operator==(const Bits& o) const = default;
    std::strong_ordering operator<=>(const Bits& o) const {
        if (auto c = n_ <=> o.n_; c != 0) return c;
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (auto c = words_[i] <=> o.words_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

private:
    void trim() {
        if (n_ & 63) words_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    }
    std::vector<std::uint64_t> words_;
    int n_ = 0;
};

}  // namespace sitekit
