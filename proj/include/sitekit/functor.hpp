#pragma once

#include <map>
#include <string>
#include <vector>

#include "sitekit/category.hpp"

namespace sitekit {

/// A functor between finite categories, stored as total index maps.
class FinFunctor {
public:
    FinFunctor() = default;
    FinFunctor(std::string name, CatPtr src, CatPtr dst,
               std::vector<int> object_map, std::vector<int> arrow_map);

    /// Builds from identifier maps; missing arrow entries are derived when
    /// the target is a preorder (at most one candidate), otherwise error.
    static FinFunctor from_ids(std::string name, CatPtr src, CatPtr dst,
                               const std::map<std::string, std::string>& object_map,
                               const std::map<std::string, std::string>& arrow_map);

    static FinFunctor identity(CatPtr c);
    static FinFunctor compose(const FinFunctor& g, const FinFunctor& f);  // g after f
    /// The unique functor into a one-object category.
    static FinFunctor collapse(CatPtr src, CatPtr one);

    const std::string& name() const { return name_; }
    const CatPtr& source() const { return src_; }
    const CatPtr& target() const { return dst_; }

    int on_object(int o) const { return omap_[o]; }
    int on_arrow(int a) const { return amap_[a]; }

    bool operator==(const FinFunctor& o) const {
        return src_ == o.src_ && dst_ == o.dst_ && omap_ == o.omap_ && amap_ == o.amap_;
    }

private:
    std::string name_;
    CatPtr src_, dst_;
    std::vector<int> omap_, amap_;
};

/// Functor laws checked exhaustively: endpoint preservation, identities,
/// composition. Failures carry the witness arrow (pair).
VerificationReport check_functor(const FinFunctor& f);

}  // namespace sitekit
