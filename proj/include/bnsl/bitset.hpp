#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>

namespace bnsl {

// Fixed-capacity set of variable ids backed by 64-bit words. The default
// build uses a single word (up to 64 variables); configure BNSL_SET_WORDS
// at build time for wider instances. Subset and intersection tests are the
// innermost operations of the whole solver, so everything here stays
// branch-light and inlinable.
template <unsigned Words>
class FixedBitset {
    static_assert(Words >= 1);

public:
    static constexpr unsigned kWords = Words;
    static constexpr unsigned kCapacity = 64u * Words;

    constexpr FixedBitset() : words_{} {}

    static constexpr FixedBitset singleton(unsigned v) {
        FixedBitset s;
        s.insert(v);
        return s;
    }

    // {0, 1, ..., n-1}
    static constexpr FixedBitset firstN(unsigned n) {
        FixedBitset s;
        for (unsigned w = 0; w < Words && n > 0; ++w) {
            if (n >= 64) {
                s.words_[w] = ~uint64_t{0};
                n -= 64;
            } else {
                s.words_[w] = (uint64_t{1} << n) - 1;
                n = 0;
            }
        }
        return s;
    }

    constexpr bool contains(unsigned v) const {
        return (words_[v >> 6] >> (v & 63)) & uint64_t{1};
    }
    constexpr void insert(unsigned v) { words_[v >> 6] |= uint64_t{1} << (v & 63); }
    constexpr void erase(unsigned v) { words_[v >> 6] &= ~(uint64_t{1} << (v & 63)); }

    constexpr bool empty() const {
        uint64_t acc = 0;
        for (unsigned w = 0; w < Words; ++w) acc |= words_[w];
        return acc == 0;
    }

    constexpr unsigned count() const {
        unsigned c = 0;
        for (unsigned w = 0; w < Words; ++w) c += std::popcount(words_[w]);
        return c;
    }

    constexpr bool subsetOf(const FixedBitset& o) const {
        uint64_t stray = 0;
        for (unsigned w = 0; w < Words; ++w) stray |= words_[w] & ~o.words_[w];
        return stray == 0;
    }

    constexpr bool intersects(const FixedBitset& o) const {
        uint64_t hit = 0;
        for (unsigned w = 0; w < Words; ++w) hit |= words_[w] & o.words_[w];
        return hit != 0;
    }

    // Smallest member; undefined on empty sets.
    constexpr unsigned lowest() const {
        for (unsigned w = 0; w < Words; ++w)
            if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
        return kCapacity;
    }

    // Largest member; undefined on empty sets.
    constexpr unsigned highest() const {
        for (unsigned w = Words; w-- > 0;)
            if (words_[w]) return w * 64 + 63 - std::countl_zero(words_[w]);
        return kCapacity;
    }

    constexpr FixedBitset operator&(const FixedBitset& o) const {
        FixedBitset r;
        for (unsigned w = 0; w < Words; ++w) r.words_[w] = words_[w] & o.words_[w];
        return r;
    }
    constexpr FixedBitset operator|(const FixedBitset& o) const {
        FixedBitset r;
        for (unsigned w = 0; w < Words; ++w) r.words_[w] = words_[w] | o.words_[w];
        return r;
    }
    // Set difference.
    constexpr FixedBitset operator-(const FixedBitset& o) const {
        FixedBitset r;
        for (unsigned w = 0; w < Words; ++w) r.words_[w] = words_[w] & ~o.words_[w];
        return r;
    }
    constexpr FixedBitset& operator&=(const FixedBitset& o) {
        for (unsigned w = 0; w < Words; ++w) words_[w] &= o.words_[w];
        return *this;
    }
    constexpr FixedBitset& operator|=(const FixedBitset& o) {
        for (unsigned w = 0; w < Words; ++w) words_[w] |= o.words_[w];
        return *this;
    }
    constexpr FixedBitset& operator-=(const FixedBitset& o) {
        for (unsigned w = 0; w < Words; ++w) words_[w] &= ~o.words_[w];
        return *this;
    }

    constexpr bool operator==(const FixedBitset& o) const {
        for (unsigned w = 0; w < Words; ++w)
            if (words_[w] != o.words_[w]) return false;
        return true;
    }
    constexpr bool operator!=(const FixedBitset& o) const { return !(*this == o); }

    // Numeric order of the whole bit pattern, used as a deterministic
    // tie-break when scores are equal.
    constexpr bool numericLess(const FixedBitset& o) const {
        for (unsigned w = Words; w-- > 0;) {
            if (words_[w] != o.words_[w]) return words_[w] < o.words_[w];
        }
        return false;
    }

    size_t hash() const {
        uint64_t h = 0x9e3779b97f4a7c15ull;
        for (unsigned w = 0; w < Words; ++w) {
            h ^= words_[w] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }

    // Iteration over members in ascending order.
    class iterator {
    public:
        iterator(const FixedBitset* s, unsigned word) : set_(s), word_(word), bits_(0) {
            if (set_) {
                while (word_ < Words && (bits_ = set_->words_[word_]) == 0) ++word_;
            }
        }
        unsigned operator*() const { return word_ * 64 + std::countr_zero(bits_); }
        iterator& operator++() {
            bits_ &= bits_ - 1;
            while (bits_ == 0 && ++word_ < Words) bits_ = set_->words_[word_];
            return *this;
        }
        bool operator!=(const iterator& o) const {
            return word_ != o.word_ || bits_ != o.bits_;
        }

    private:
        const FixedBitset* set_;
        unsigned word_;
        uint64_t bits_;
    };

    iterator begin() const { return iterator(this, 0); }
    iterator end() const { return iterator(nullptr, Words); }

    std::string toString() const {
        std::string s = "{";
        bool first = true;
        for (unsigned v : *this) {
            if (!first) s += ",";
            s += std::to_string(v);
            first = false;
        }
        s += "}";
        return s;
    }

private:
    std::array<uint64_t, Words> words_;
};

#ifndef BNSL_SET_WORDS
#define BNSL_SET_WORDS 1
#endif

using VarSet = FixedBitset<BNSL_SET_WORDS>;

struct VarSetHash {
    size_t operator()(const VarSet& s) const { return s.hash(); }
};

}  // namespace bnsl
