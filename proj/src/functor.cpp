#include "sitekit/functor.hpp"

namespace sitekit {

FinFunctor::FinFunctor(std::string name, CatPtr src, CatPtr dst,
                       std::vector<int> object_map, std::vector<int> arrow_map)
    : name_(std::move(name)), src_(std::move(src)), dst_(std::move(dst)),
      omap_(std::move(object_map)), amap_(std::move(arrow_map)) {
    if (static_cast<int>(omap_.size()) != src_->object_count() ||
        static_cast<int>(amap_.size()) != src_->arrow_count())
        throw InputError(name_ + ": object/arrow map is not total");
    for (int o : omap_)
        if (o < 0 || o >= dst_->object_count()) throw InputError(name_ + ": object map out of range");
    for (int a : amap_)
        if (a < 0 || a >= dst_->arrow_count()) throw InputError(name_ + ": arrow map out of range");
}

FinFunctor FinFunctor::from_ids(std::string name, CatPtr src, CatPtr dst,
                                const std::map<std::string, std::string>& object_map,
                                const std::map<std::string, std::string>& arrow_map) {
    std::vector<int> omap(src->object_count(), -1);
    for (const auto& [a, b] : object_map) {
        int i = src->object_index(a), j = dst->object_index(b);
        if (i < 0) throw InputError(name + ": unknown source object '" + a + "'");
        if (j < 0) throw InputError(name + ": unknown target object '" + b + "'");
        omap[i] = j;
    }
    for (int i = 0; i < src->object_count(); ++i)
        if (omap[i] < 0)
            throw InputError(name + ": object map is not total, missing '" + src->object_id(i) + "'");

    std::vector<int> amap(src->arrow_count(), -1);
    for (const auto& [a, b] : arrow_map) {
        int i = src->arrow_index(a), j = dst->arrow_index(b);
        if (i < 0) throw InputError(name + ": unknown source arrow '" + a + "'");
        if (j < 0) throw InputError(name + ": unknown target arrow '" + b + "'");
        amap[i] = j;
    }
    for (int i = 0; i < src->arrow_count(); ++i) {
        if (amap[i] >= 0) continue;
        if (src->is_identity(i)) {
            amap[i] = dst->identity(omap[src->src(i)]);
            continue;
        }
        auto candidates = dst->hom(omap[src->src(i)], omap[src->tgt(i)]);
        if (candidates.size() == 1) {
            amap[i] = candidates[0];
        } else {
            throw InputError(name + ": arrow map entry for '" + src->arrow_id(i) +
                             "' is missing and not derivable");
        }
    }
    return FinFunctor(std::move(name), std::move(src), std::move(dst), std::move(omap), std::move(amap));
}

FinFunctor FinFunctor::identity(CatPtr c) {
    std::vector<int> omap(c->object_count()), amap(c->arrow_count());
    for (int i = 0; i < c->object_count(); ++i) omap[i] = i;
    for (int i = 0; i < c->arrow_count(); ++i) amap[i] = i;
    return FinFunctor("1_" + c->name(), c, c, std::move(omap), std::move(amap));
}

FinFunctor FinFunctor::compose(const FinFunctor& g, const FinFunctor& f) {
    if (f.target() != g.source()) throw InputError("functor composition endpoint mismatch");
    std::vector<int> omap(f.source()->object_count()), amap(f.source()->arrow_count());
    for (std::size_t i = 0; i < omap.size(); ++i) omap[i] = g.on_object(f.on_object(static_cast<int>(i)));
    for (std::size_t i = 0; i < amap.size(); ++i) amap[i] = g.on_arrow(f.on_arrow(static_cast<int>(i)));
    return FinFunctor(g.name() + "." + f.name(), f.source(), g.target(), std::move(omap), std::move(amap));
}

FinFunctor FinFunctor::collapse(CatPtr src, CatPtr one) {
    if (one->object_count() != 1 || one->arrow_count() != 1)
        throw InputError("collapse target is not the one-object one-arrow category");
    std::vector<int> omap(src->object_count(), 0), amap(src->arrow_count(), 0);
    return FinFunctor("!" + src->name(), std::move(src), std::move(one), std::move(omap), std::move(amap));
}

VerificationReport check_functor(const FinFunctor& f) {
    VerificationReport report;
    const auto& c = *f.source();
    const auto& d = *f.target();

    auto& endpoints = report.add("functor-endpoints", "arrow images have the mapped source and target");
    for (int a = 0; a < c.arrow_count(); ++a) {
        int fa = f.on_arrow(a);
        if (d.src(fa) != f.on_object(c.src(a)) || d.tgt(fa) != f.on_object(c.tgt(a))) {
            endpoints.status = Status::Fail;
            endpoints.witnesses.push_back(Witness{}.with("arrow", c.arrow_id(a)).with("image", d.arrow_id(fa)));
            break;
        }
    }

    auto& ids = report.add("functor-identities", "identities map to identities");
    for (int o = 0; o < c.object_count(); ++o) {
        if (f.on_arrow(c.identity(o)) != d.identity(f.on_object(o))) {
            ids.status = Status::Fail;
            ids.witnesses.push_back(Witness{}.with("object", c.object_id(o)));
            break;
        }
    }

    auto& comp = report.add("functor-composition", "F(g∘f) = F(g)∘F(f)");
    for (int g = 0; g < c.arrow_count() && comp.status == Status::Pass; ++g)
        for (int a = 0; a < c.arrow_count(); ++a) {
            if (!c.composable(g, a)) continue;
            if (endpoints.status == Status::Fail) {
                comp.status = Status::Skipped;
                comp.note = "endpoint preservation failed, composites not well-typed";
                break;
            }
            if (f.on_arrow(c.compose(g, a)) != d.compose(f.on_arrow(g), f.on_arrow(a))) {
                comp.status = Status::Fail;
                comp.witnesses.push_back(Witness{}.with("g", c.arrow_id(g)).with("f", c.arrow_id(a)));
                break;
            }
        }

    return report;
}

}  // namespace sitekit
