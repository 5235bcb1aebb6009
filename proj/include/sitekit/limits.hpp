#pragma once

#include <optional>
#include <vector>

#include "sitekit/functor.hpp"

namespace sitekit {

/// A cone over a diagram: apex object with one leg per shape object.
struct Cone {
    int apex;
    std::vector<int> legs;
};

struct LimitCone {
    FinFunctor diagram;
    Cone cone;
};

/// All commuting cones over the diagram, apexes and legs in index order.
std::vector<Cone> enumerate_cones(const FinFunctor& diagram);

/// True iff every cone factors through this one by exactly one mediating arrow.
bool is_limit(const FinFunctor& diagram, const Cone& cone);

/// Limit by enumeration: returns the universal cone with the smallest apex
/// (first in identifier order), or nullopt when no cone is universal.
std::optional<LimitCone> compute_limit(const FinFunctor& diagram);

/// Convenience shapes on a category c.
std::optional<Cone> terminal_cone(const CatPtr& c);
std::optional<Cone> pullback_cone(const CatPtr& c, int f, int g);  // cospan f: x->z, g: y->z
std::optional<Cone> product_cone(const CatPtr& c, int x, int y);

/// Diagram builders (shape categories are constructed internally).
FinFunctor empty_diagram(const CatPtr& c);
FinFunctor cospan_diagram(const CatPtr& c, int f, int g);
FinFunctor discrete_pair_diagram(const CatPtr& c, int x, int y);
FinFunctor parallel_pair_diagram(const CatPtr& c, int f, int g);  // f, g parallel

}  // namespace sitekit
