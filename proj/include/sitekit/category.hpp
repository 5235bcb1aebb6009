#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sitekit/report.hpp"

namespace sitekit {

class FinCategory;
using CatPtr = std::shared_ptr<const FinCategory>;

struct ArrowDecl {
    std::string id, src, tgt;
};

/// A finite category given by explicit tables. Objects and arrows are
/// sorted by identifier at construction, so every index-based iteration
/// in the toolkit follows one reproducible (lexicographic) order.
///
/// compose(g, f) means "g after f" and is defined exactly on composable
/// pairs; a missing entry on a composable pair is an input error, while a
/// *wrong* entry is a law failure reported by validate_category.
class FinCategory {
public:
    static CatPtr make(std::string name,
                       std::vector<std::string> objects,
                       std::vector<ArrowDecl> arrows,
                       const std::map<std::string, std::string>& identities,
                       const std::map<std::pair<std::string, std::string>, std::string>& compose);

    /// Preorder category from a relation; the reflexive-transitive closure
    /// is taken, arrows are named le_<src>_<tgt>.
    static CatPtr preorder(std::string name,
                           std::vector<std::string> elements,
                           const std::vector<std::pair<std::string, std::string>>& le);

    const std::string& name() const { return name_; }

    int object_count() const { return static_cast<int>(objects_.size()); }
    int arrow_count() const { return static_cast<int>(arrow_ids_.size()); }

    const std::string& object_id(int o) const { return objects_[o]; }
    const std::string& arrow_id(int a) const { return arrow_ids_[a]; }

    int object_index(const std::string& id) const;  // -1 if absent
    int arrow_index(const std::string& id) const;

    int src(int a) const { return src_[a]; }
    int tgt(int a) const { return tgt_[a]; }
    int identity(int o) const { return identity_[o]; }
    bool is_identity(int a) const { return identity_[src_[a]] == a && src_[a] == tgt_[a]; }

    bool composable(int g, int f) const { return src_[g] == tgt_[f]; }
    /// g∘f for a composable pair; -1 if the table has no entry.
    int compose(int g, int f) const { return table_[static_cast<std::size_t>(g) * arrow_ids_.size() + f]; }

    /// Arrow indices with target o, in index (= identifier) order.
    const std::vector<int>& arrows_into(int o) const { return into_[o]; }
    const std::vector<int>& arrows_from(int o) const { return from_[o]; }
    /// Position of arrow a within arrows_into(tgt(a)); -1 for foreign arrows.
    int into_position(int a) const { return into_pos_[a]; }

    /// All arrows x -> y, in index order.
    std::vector<int> hom(int x, int y) const;

    bool is_preorder() const;
    /// Smallest object that is terminal, if any.
    std::optional<int> terminal_object() const;

private:
    friend VerificationReport validate_category(const FinCategory&);

    std::string name_;
    std::vector<std::string> objects_;
    std::vector<std::string> arrow_ids_;
    std::vector<int> src_, tgt_, identity_;
    std::vector<int> table_;  // dense arrow_count x arrow_count, -1 = undefined
    std::vector<std::vector<int>> into_, from_;
    std::vector<int> into_pos_;
    std::map<std::string, int> object_lookup_, arrow_lookup_;
};

/// Checks the category laws exhaustively: source/target of composites,
/// identity laws, associativity over all composable triples.
VerificationReport validate_category(const FinCategory& c);

}  // namespace sitekit
