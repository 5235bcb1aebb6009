#include "sitekit/comma.hpp"

#include <map>

namespace sitekit {

CommaCategory build_comma(const FinFunctor& p, int c) {
    const auto& src = *p.source();
    const auto& dst = *p.target();
    if (c < 0 || c >= dst.object_count()) throw InputError("build_comma: object out of range");

    std::vector<std::string> objects;
    std::map<std::string, std::pair<int, int>> obj_data;
    auto object_name = [&](int d, int u) { return src.object_id(d) + "@" + dst.arrow_id(u); };
    for (int d = 0; d < src.object_count(); ++d)
        for (int u : dst.hom(p.on_object(d), c)) {
            objects.push_back(object_name(d, u));
            obj_data[object_name(d, u)] = {d, u};
        }

    // An arrow (d, u) -> (d', u') is g : d -> d' with u' ∘ p(g) = u; the pair
    // (g, u') determines it, and determines u as the composite.
    std::vector<ArrowDecl> arrows;
    std::map<std::string, std::string> identities;
    std::map<std::string, std::pair<int, int>> arr_data;  // id -> (g, u')
    for (int g = 0; g < src.arrow_count(); ++g)
        for (int u2 : dst.hom(p.on_object(src.tgt(g)), c)) {
            int u = dst.compose(u2, p.on_arrow(g));
            std::string id = src.arrow_id(g) + "@" + dst.arrow_id(u2);
            arrows.push_back({id, object_name(src.src(g), u), object_name(src.tgt(g), u2)});
            arr_data[id] = {g, u2};
            if (src.is_identity(g)) identities[object_name(src.tgt(g), u2)] = id;
        }

    std::map<std::pair<std::string, std::string>, std::string> compose;
    for (const auto& [gid, gdata] : arr_data)
        for (const auto& [fid, fdata] : arr_data) {
            auto [g, gu2] = gdata;
            auto [f, fu2] = fdata;
            if (!src.composable(g, f)) continue;
            if (dst.compose(gu2, p.on_arrow(g)) != fu2) continue;
            compose[{gid, fid}] = src.arrow_id(src.compose(g, f)) + "@" + dst.arrow_id(gu2);
        }

    CommaCategory result;
    result.category =
        FinCategory::make(src.name() + "/" + dst.object_id(c), objects, arrows, identities, compose);
    const auto& cat = *result.category;
    result.object_decode.resize(cat.object_count());
    result.arrow_decode.resize(cat.arrow_count());
    std::vector<int> omap(cat.object_count()), amap(cat.arrow_count());
    for (int o = 0; o < cat.object_count(); ++o) {
        result.object_decode[o] = obj_data.at(cat.object_id(o));
        omap[o] = result.object_decode[o].first;
    }
    for (int a = 0; a < cat.arrow_count(); ++a) {
        result.arrow_decode[a] = arr_data.at(cat.arrow_id(a)).first;
        amap[a] = result.arrow_decode[a];
    }
    result.projection =
        FinFunctor("pi." + cat.name(), result.category, p.source(), std::move(omap), std::move(amap));
    return result;
}

int CommaCategory::object_of(int d, int u) const {
    for (int o = 0; o < category->object_count(); ++o)
        if (object_decode[o] == std::make_pair(d, u)) return o;
    return -1;
}

}  // namespace sitekit
