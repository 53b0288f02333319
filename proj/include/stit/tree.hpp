#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stit/errors.hpp"

namespace stit {

// A node address in the binary division tree: a finite word over {-, +}.
// The empty word is the root.  Words are packed into a 64-bit integer with
// the first symbol in the most significant used bit ('-' = 0, '+' = 1), so
// equal-length comparison is plain integer comparison.
//
// Ordering is word order: shorter words first, ties broken lexicographically
// with '-' < '+'.
class TreeWord {
public:
    TreeWord() = default;

    static TreeWord from_string(std::string_view s) {
        TreeWord w;
        for (char c : s) {
            if (c == '-') {
                w = w.child_minus();
            } else if (c == '+') {
                w = w.child_plus();
            } else {
                throw ConfigError("label: invalid character '" + std::string(1, c) +
                                  "' (expected '-' or '+')");
            }
        }
        return w;
    }

    std::string str() const {
        std::string s(len_, '-');
        for (std::uint32_t i = 0; i < len_; ++i) {
            if (bits_ >> (len_ - 1 - i) & 1u) s[i] = '+';
        }
        return s;
    }

    bool is_root() const { return len_ == 0; }
    int level() const { return static_cast<int>(len_); }

    TreeWord child_minus() const { return append(0); }
    TreeWord child_plus() const { return append(1); }
    TreeWord child(bool plus) const { return append(plus ? 1 : 0); }

    TreeWord parent() const {
        if (len_ == 0) throw OutOfRange("parent of root word");
        return TreeWord(bits_ >> 1, len_ - 1);
    }

    bool ends_plus() const {
        if (len_ == 0) throw OutOfRange("last symbol of root word");
        return (bits_ & 1u) != 0;
    }

    friend bool operator==(const TreeWord&, const TreeWord&) = default;
    friend std::strong_ordering operator<=>(const TreeWord& a, const TreeWord& b) {
        if (a.len_ != b.len_) return a.len_ <=> b.len_;
        return a.bits_ <=> b.bits_;
    }

private:
    TreeWord(std::uint64_t bits, std::uint32_t len) : bits_(bits), len_(len) {}

    TreeWord append(std::uint64_t bit) const {
        if (len_ >= 63) throw TooLarge("tree word deeper than 63 levels");
        return TreeWord((bits_ << 1) | bit, len_ + 1);
    }

    std::uint64_t bits_ = 0;
    std::uint32_t len_ = 0;
};

// A division history recorded as a (2k+1)-tuple of words: the root followed
// by k child pairs.  Pair l consists of (w-, w+) where w is a leaf of the
// tuple truncated before pair l.  The construction rules make the entries
// distinct and give exactly k+1 leaves.
class TreeTuple {
public:
    TreeTuple() : entries_{TreeWord{}} {}

    explicit TreeTuple(std::vector<TreeWord> entries);

    // Number of divisions k.
    int depth() const { return static_cast<int>((entries_.size() - 1) / 2); }

    const std::vector<TreeWord>& entries() const { return entries_; }

    // Words with no child in the tuple, sorted in word order; size depth()+1.
    std::vector<TreeWord> leaves() const;

    // Truncation to the first s divisions.
    TreeTuple prefix(int s) const;

    // Appends the child pair of `leaf`; throws NotALeaf otherwise.
    TreeTuple extend(const TreeWord& leaf) const;

    // The word divided by pair s (0-based), i.e. the parent of entry 2s+1.
    TreeWord divided_at(int s) const;

    static bool is_valid(const std::vector<TreeWord>& entries);

    friend bool operator==(const TreeTuple&, const TreeTuple&) = default;

private:
    struct Unchecked {};
    TreeTuple(std::vector<TreeWord> entries, Unchecked) : entries_(std::move(entries)) {}

    std::vector<TreeWord> entries_;
};

// All depth-k tuples; there are exactly k! of them.  Guarded at k <= 8
// (8! tuples) to keep memory bounded.
std::vector<TreeTuple> enumerate_theta(int k);

// Rebuilds the tuple realized by dividing the given leaves in order.
TreeTuple tuple_from_divisions(const std::vector<TreeWord>& divided);

}  // namespace stit
