#pragma once

#include <utility>
#include <vector>

#include "sitekit/functor.hpp"

namespace sitekit {

/// The comma category (p ↓ c): objects are pairs (d, u : p(d) -> c),
/// arrows (d, u) -> (d', u') are arrows g : d -> d' with u' ∘ p(g) = u.
/// Object identifiers are "<d>@<u>", arrow identifiers "<g>@<u>".
struct CommaCategory {
    CatPtr category;
    FinFunctor projection;                           // to p.source()
    std::vector<std::pair<int, int>> object_decode;  // (object of p.source, arrow of p.target)
    std::vector<int> arrow_decode;                   // arrow of p.source

    int object_of(int d, int u) const;  // -1 if absent
};

CommaCategory build_comma(const FinFunctor& p, int c);

}  // namespace sitekit
