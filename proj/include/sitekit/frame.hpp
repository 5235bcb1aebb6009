#pragma once

#include <optional>

#include "sitekit/bits.hpp"
#include "sitekit/category.hpp"

namespace sitekit {

/// A finite bounded lattice with explicit order and meet/join tables.
/// Distributivity (= being a finite frame) is a *law* checked by
/// validate_frame, not a construction invariant, so non-examples load.
class FiniteFrame {
public:
    FiniteFrame() = default;

    /// Derives meet/join tables from the order; throws InputError when some
    /// pair has no greatest lower or least upper bound.
    static FiniteFrame from_order(std::string name, std::vector<std::string> elements,
                                  const std::vector<std::pair<std::string, std::string>>& le);
    static FiniteFrame from_tables(std::string name, std::vector<std::string> elements,
                                   std::vector<std::vector<bool>> le,
                                   std::vector<std::vector<int>> meet,
                                   std::vector<std::vector<int>> join, int bottom, int top);

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const std::string& element_id(int e) const { return elements_[e]; }
    int element_index(const std::string& id) const;

    bool le(int a, int b) const { return le_[a][b]; }
    int meet(int a, int b) const { return meet_[a][b]; }
    int join(int a, int b) const { return join_[a][b]; }
    int top() const { return top_; }
    int bottom() const { return bottom_; }

    int join_of(const Bits& elems) const;  // empty set -> bottom
    int meet_of(const Bits& elems) const;  // empty set -> top

    /// The underlying poset as a category (arrows le_<a>_<b>).
    CatPtr as_category() const;

private:
    std::string name_;
    std::vector<std::string> elements_;
    std::vector<std::vector<bool>> le_;
    std::vector<std::vector<int>> meet_, join_;
    int top_ = -1, bottom_ = -1;
};

/// Lattice laws, bounds and binary distributivity over all triples
/// (which gives the finite n-ary form by induction).
VerificationReport validate_frame(const FiniteFrame& f);

/// Backtracking search for an order/meet/join-preserving bijection; the
/// first hit in lexicographic order, so results are reproducible.
std::optional<std::vector<int>> find_frame_isomorphism(const FiniteFrame& a, const FiniteFrame& b);

/// Reads a poset category (e.g. a bundle preorder) back as a lattice.
/// Throws InputError when the category is not a poset with finite
/// meets/joins. Preorders with isomorphic distinct elements are rejected.
FiniteFrame frame_from_poset(const FinCategory& c);

}  // namespace sitekit
