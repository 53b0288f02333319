#include "stit/tree.hpp"

#include <algorithm>

namespace stit {

TreeTuple::TreeTuple(std::vector<TreeWord> entries) : entries_(std::move(entries)) {
    if (!is_valid(entries_)) {
        throw InvalidTuple("tuple violates the division-pair structure");
    }
}

bool TreeTuple::is_valid(const std::vector<TreeWord>& entries) {
    if (entries.empty() || entries.size() % 2 == 0) return false;
    if (!entries[0].is_root()) return false;
    std::size_t k = (entries.size() - 1) / 2;
    for (std::size_t l = 1; l <= k; ++l) {
        const TreeWord& a = entries[2 * l - 1];
        const TreeWord& b = entries[2 * l];
        if (a.is_root() || b.is_root()) return false;
        if (a.ends_plus() || !b.ends_plus()) return false;
        if (a.parent() != b.parent()) return false;
        // Parent must appear among the earlier entries and still be a leaf
        // there, i.e. its children must not already be present.
        const TreeWord w = a.parent();
        bool found = false;
        for (std::size_t j = 0; j < 2 * l - 1; ++j) {
            if (entries[j] == w) found = true;
            if (entries[j] == a || entries[j] == b) return false;
        }
        if (!found) return false;
    }
    return true;
}

std::vector<TreeWord> TreeTuple::leaves() const {
    std::vector<TreeWord> out;
    for (const TreeWord& w : entries_) {
        bool divided = false;
        const TreeWord minus = w.child_minus();
        for (const TreeWord& e : entries_) {
            if (e == minus) {
                divided = true;
                break;
            }
        }
        if (!divided) out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

TreeTuple TreeTuple::prefix(int s) const {
    if (s < 0 || s > depth()) throw OutOfRange("prefix depth out of range");
    std::vector<TreeWord> sub(entries_.begin(), entries_.begin() + (2 * s + 1));
    return TreeTuple(std::move(sub), Unchecked{});
}

TreeTuple TreeTuple::extend(const TreeWord& leaf) const {
    const std::vector<TreeWord> ls = leaves();
    if (std::find(ls.begin(), ls.end(), leaf) == ls.end()) {
        throw NotALeaf("extend: word '" + leaf.str() + "' is not a leaf");
    }
    std::vector<TreeWord> next = entries_;
    next.push_back(leaf.child_minus());
    next.push_back(leaf.child_plus());
    return TreeTuple(std::move(next), Unchecked{});
}

TreeWord TreeTuple::divided_at(int s) const {
    if (s < 0 || s >= depth()) throw OutOfRange("division index out of range");
    return entries_[2 * s + 1].parent();
}

std::vector<TreeTuple> enumerate_theta(int k) {
    if (k < 0) throw OutOfRange("negative tuple depth");
    if (k > 8) throw TooLarge("enumerate_theta limited to depth 8");
    std::vector<TreeTuple> frontier{TreeTuple{}};
    for (int l = 0; l < k; ++l) {
        std::vector<TreeTuple> next;
        next.reserve(frontier.size() * (l + 1));
        for (const TreeTuple& t : frontier) {
            for (const TreeWord& leaf : t.leaves()) {
                next.push_back(t.extend(leaf));
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

TreeTuple tuple_from_divisions(const std::vector<TreeWord>& divided) {
    TreeTuple t;
    for (const TreeWord& w : divided) t = t.extend(w);
    return t;
}

}  // namespace stit
