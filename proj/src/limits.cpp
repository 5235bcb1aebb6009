#include "sitekit/limits.hpp"

namespace sitekit {

namespace {

CatPtr empty_shape() {
    static CatPtr c = FinCategory::make("shape.empty", {}, {}, {}, {});
    return c;
}

CatPtr cospan_shape() {
    static CatPtr c = FinCategory::make(
        "shape.cospan", {"l", "m", "r"},
        {{"u", "l", "m"}, {"v", "r", "m"}, {"1l", "l", "l"}, {"1m", "m", "m"}, {"1r", "r", "r"}},
        {{"l", "1l"}, {"m", "1m"}, {"r", "1r"}}, {});
    return c;
}

CatPtr pair_shape() {
    static CatPtr c = FinCategory::make("shape.pair", {"l", "r"},
                                        {{"1l", "l", "l"}, {"1r", "r", "r"}},
                                        {{"l", "1l"}, {"r", "1r"}}, {});
    return c;
}

CatPtr parallel_shape() {
    static CatPtr c = FinCategory::make(
        "shape.parallel", {"a", "b"},
        {{"u", "a", "b"}, {"v", "a", "b"}, {"1a", "a", "a"}, {"1b", "b", "b"}},
        {{"a", "1a"}, {"b", "1b"}}, {});
    return c;
}

}  // namespace

FinFunctor empty_diagram(const CatPtr& c) {
    return FinFunctor("d.empty", empty_shape(), c, {}, {});
}

FinFunctor cospan_diagram(const CatPtr& c, int f, int g) {
    if (c->tgt(f) != c->tgt(g)) throw InputError("cospan legs must share a codomain");
    auto shape = cospan_shape();
    std::vector<int> omap(3), amap(5);
    omap[shape->object_index("l")] = c->src(f);
    omap[shape->object_index("m")] = c->tgt(f);
    omap[shape->object_index("r")] = c->src(g);
    amap[shape->arrow_index("u")] = f;
    amap[shape->arrow_index("v")] = g;
    amap[shape->arrow_index("1l")] = c->identity(c->src(f));
    amap[shape->arrow_index("1m")] = c->identity(c->tgt(f));
    amap[shape->arrow_index("1r")] = c->identity(c->src(g));
    return FinFunctor("d.cospan", shape, c, std::move(omap), std::move(amap));
}

FinFunctor discrete_pair_diagram(const CatPtr& c, int x, int y) {
    auto shape = pair_shape();
    std::vector<int> omap(2), amap(2);
    omap[shape->object_index("l")] = x;
    omap[shape->object_index("r")] = y;
    amap[shape->arrow_index("1l")] = c->identity(x);
    amap[shape->arrow_index("1r")] = c->identity(y);
    return FinFunctor("d.pair", shape, c, std::move(omap), std::move(amap));
}

FinFunctor parallel_pair_diagram(const CatPtr& c, int f, int g) {
    if (c->src(f) != c->src(g) || c->tgt(f) != c->tgt(g))
        throw InputError("parallel pair must share endpoints");
    auto shape = parallel_shape();
    std::vector<int> omap(2), amap(4);
    omap[shape->object_index("a")] = c->src(f);
    omap[shape->object_index("b")] = c->tgt(f);
    amap[shape->arrow_index("u")] = f;
    amap[shape->arrow_index("v")] = g;
    amap[shape->arrow_index("1a")] = c->identity(c->src(f));
    amap[shape->arrow_index("1b")] = c->identity(c->tgt(f));
    return FinFunctor("d.parallel", shape, c, std::move(omap), std::move(amap));
}

std::vector<Cone> enumerate_cones(const FinFunctor& diagram) {
    const auto& shape = *diagram.source();
    const auto& c = *diagram.target();
    std::vector<Cone> cones;

    const int k = shape.object_count();
    for (int apex = 0; apex < c.object_count(); ++apex) {
        std::vector<std::vector<int>> choices(k);
        bool feasible = true;
        for (int i = 0; i < k && feasible; ++i) {
            choices[i] = c.hom(apex, diagram.on_object(i));
            feasible = !choices[i].empty();
        }
        if (!feasible) continue;

        std::vector<int> pick(k, 0);
        while (true) {
            Cone cone{apex, {}};
            cone.legs.resize(k);
            for (int i = 0; i < k; ++i) cone.legs[i] = choices[i][pick[i]];
            bool commutes = true;
            for (int a = 0; a < shape.arrow_count() && commutes; ++a)
                commutes = c.compose(diagram.on_arrow(a), cone.legs[shape.src(a)]) == cone.legs[shape.tgt(a)];
            if (commutes) cones.push_back(std::move(cone));

            int i = k - 1;
            for (; i >= 0; --i) {
                if (++pick[i] < static_cast<int>(choices[i].size())) break;
                pick[i] = 0;
            }
            if (i < 0) break;
        }
    }
    return cones;
}

namespace {

// Mediating arrows from `other` into `cone`.
int mediating_count(const FinFunctor& diagram, const Cone& cone, const Cone& other) {
    const auto& c = *diagram.target();
    int count = 0;
    for (int m : c.hom(other.apex, cone.apex)) {
        bool ok = true;
        for (std::size_t i = 0; i < cone.legs.size() && ok; ++i)
            ok = c.compose(cone.legs[i], m) == other.legs[i];
        if (ok) ++count;
    }
    return count;
}

}  // namespace

bool is_limit(const FinFunctor& diagram, const Cone& cone) {
    for (const auto& other : enumerate_cones(diagram))
        if (mediating_count(diagram, cone, other) != 1) return false;
    return true;
}

std::optional<LimitCone> compute_limit(const FinFunctor& diagram) {
    auto cones = enumerate_cones(diagram);
    for (const auto& cone : cones) {
        bool universal = true;
        for (const auto& other : cones) {
            if (mediating_count(diagram, cone, other) != 1) {
                universal = false;
                break;
            }
        }
        if (universal) return LimitCone{diagram, cone};
    }
    return std::nullopt;
}

std::optional<Cone> terminal_cone(const CatPtr& c) {
    auto lim = compute_limit(empty_diagram(c));
    if (!lim) return std::nullopt;
    return lim->cone;
}

std::optional<Cone> pullback_cone(const CatPtr& c, int f, int g) {
    auto lim = compute_limit(cospan_diagram(c, f, g));
    if (!lim) return std::nullopt;
    return lim->cone;
}

std::optional<Cone> product_cone(const CatPtr& c, int x, int y) {
    auto lim = compute_limit(discrete_pair_diagram(c, x, y));
    if (!lim) return std::nullopt;
    return lim->cone;
}

}  // namespace sitekit
