#include "sitekit/grothendieck.hpp"

#include <set>

namespace sitekit {

GrothTotal GrothTotal::build(const IndexedCat& d) {
    GrothTotal g;
    g.indexed_ = d;
    const auto& b = *d.base();

    std::vector<std::string> objects;
    std::map<std::string, std::pair<int, int>> obj_data;
    auto oname = [&](int c, int x) { return b.object_id(c) + "@" + d.fibre(c)->object_id(x); };
    for (int c = 0; c < b.object_count(); ++c)
        for (int x = 0; x < d.fibre(c)->object_count(); ++x) {
            objects.push_back(oname(c, x));
            obj_data[objects.back()] = {c, x};
        }

    // An arrow (c', x') -> (c, x) is a pair (f : c' -> c, α : x' -> T_f(x));
    // the full data is (f, α, x) since T_f may identify distinct x.
    // Identifier "<f>@<α>", with "#<x>" appended when disambiguation is needed.
    struct ArrowData {
        int f, alpha, tgt_x;
    };
    std::vector<ArrowDecl> arrows;
    std::map<std::string, std::string> identities;
    std::map<std::string, ArrowData> arr_data;
    // (f, alpha, x) -> identifier
    std::map<std::tuple<int, int, int>, std::string> arrow_id_of;
    for (int f = 0; f < b.arrow_count(); ++f) {
        const auto& fib_src = *d.fibre(b.src(f));
        const auto& t = d.transition(f);
        for (int x = 0; x < d.fibre(b.tgt(f))->object_count(); ++x) {
            int tx = t.on_object(x);
            for (int xp = 0; xp < fib_src.object_count(); ++xp)
                for (int alpha : fib_src.hom(xp, tx)) {
                    std::string id = b.arrow_id(f) + "@" + fib_src.arrow_id(alpha);
                    if (arr_data.count(id)) id += "#" + d.fibre(b.tgt(f))->object_id(x);
                    arrows.push_back({id, oname(b.src(f), xp), oname(b.tgt(f), x)});
                    arr_data[id] = {f, alpha, x};
                    arrow_id_of[{f, alpha, x}] = id;
                    if (b.is_identity(f) && fib_src.is_identity(alpha))
                        identities[oname(b.src(f), xp)] = id;
                }
        }
    }

    // composite (f, α, x) ∘ (g, β, x_mid) = (f∘g, T_g(α)∘β, x)
    std::map<std::pair<std::string, std::string>, std::string> compose;
    for (const auto& [vid, v] : arr_data)
        for (const auto& [uid, u] : arr_data) {
            if (!b.composable(v.f, u.f)) continue;
            // source object of v is (src v.f, src v.alpha); target of u is (tgt u.f, u.tgt_x)
            if (d.fibre(b.src(v.f))->src(v.alpha) != u.tgt_x) continue;
            const auto& fib = *d.fibre(b.src(u.f));
            int second = fib.compose(d.transition(u.f).on_arrow(v.alpha), u.alpha);
            compose[{vid, uid}] = arrow_id_of.at({b.compose(v.f, u.f), second, v.tgt_x});
        }

    g.total_ = FinCategory::make("G(" + d.name() + ")", objects, arrows, identities, compose);

    const auto& cat = *g.total_;
    g.obj_decode_.resize(cat.object_count());
    g.arr_decode_.resize(cat.arrow_count());
    std::vector<int> omap(cat.object_count()), amap(cat.arrow_count());
    g.obj_index_.assign(b.object_count(), {});
    for (int c = 0; c < b.object_count(); ++c)
        g.obj_index_[c].assign(d.fibre(c)->object_count(), -1);
    for (int o = 0; o < cat.object_count(); ++o) {
        g.obj_decode_[o] = obj_data.at(cat.object_id(o));
        omap[o] = g.obj_decode_[o].first;
        g.obj_index_[g.obj_decode_[o].first][g.obj_decode_[o].second] = o;
    }
    for (int a = 0; a < cat.arrow_count(); ++a) {
        const auto& data = arr_data.at(cat.arrow_id(a));
        g.arr_decode_[a] = {data.f, data.alpha};
        amap[a] = data.f;
    }
    g.projection_ = FinFunctor("p_" + d.name(), g.total_, d.base(), std::move(omap), std::move(amap));
    return g;
}

GrothTotal grothendieck_construction(const IndexedCat& d) { return GrothTotal::build(d); }

int GrothTotal::object_of(int base_obj, int fibre_obj) const {
    return obj_index_[base_obj][fibre_obj];
}

int GrothTotal::arrow_of(int base_arrow, int fibre_arrow) const {
    for (int a = 0; a < total_->arrow_count(); ++a)
        if (arr_decode_[a] == std::make_pair(base_arrow, fibre_arrow)) return a;
    return -1;
}

bool GrothTotal::vertical(int arrow) const {
    return indexed_.base()->is_identity(arr_decode_[arrow].first);
}

bool GrothTotal::cartesian(int arrow) const {
    const auto& cat = *total_;
    int f = projection_.on_arrow(arrow);
    const auto& b = *indexed_.base();
    int src = cat.src(arrow);
    for (int g = 0; g < cat.arrow_count(); ++g) {
        if (cat.tgt(g) != cat.tgt(arrow)) continue;
        int pg = projection_.on_arrow(g);
        for (int h = 0; h < b.arrow_count(); ++h) {
            if (b.tgt(h) != b.src(f) || b.src(h) != b.src(pg)) continue;
            if (b.compose(f, h) != pg) continue;
            int count = 0;
            for (int cand = 0; cand < cat.arrow_count(); ++cand) {
                if (cat.src(cand) != cat.src(g) || cat.tgt(cand) != src) continue;
                if (projection_.on_arrow(cand) != h) continue;
                if (cat.compose(arrow, cand) == g) ++count;
            }
            if (count != 1) return false;
        }
    }
    return true;
}

int GrothTotal::cartesian_lift(int base_arrow, int fibre_obj_at_tgt) const {
    const auto& t = indexed_.transition(base_arrow);
    int xs = t.on_object(fibre_obj_at_tgt);
    int alpha = indexed_.fibre(indexed_.base()->src(base_arrow))->identity(xs);
    for (int a = 0; a < total_->arrow_count(); ++a)
        if (arr_decode_[a] == std::make_pair(base_arrow, alpha) &&
            decode_object(total_->tgt(a)).second == fibre_obj_at_tgt)
            return a;
    return -1;
}

GrothendieckTopology giraud_topology(const GrothTotal& g, const GrothendieckTopology& j,
                                     const Guards& guards) {
    if (j.base() != g.indexed().base())
        throw InputError("giraud_topology: base topology lives on a different category");
    const auto& cat = *g.total();
    const auto& b = *j.base();

    Coverage coverage;
    bool sampled = false;
    for (int o = 0; o < cat.object_count(); ++o) {
        auto [c, x] = g.decode_object(o);
        (void)x;
        for (const auto& bits : sieve_pool(j.ops(), c, guards, &sampled)) {
            Sieve s{c, bits};
            if (!j.covers(s)) continue;
            // lift: all total arrows into (c, x) lying over an arrow of s
            std::vector<int> lifted;
            for (int a : cat.arrows_into(o)) {
                int f = g.projection().on_arrow(a);
                if (s.bits.test(b.into_position(f))) lifted.push_back(a);
            }
            coverage.families.push_back({o, lifted});
        }
    }
    auto out = generate_topology(g.total(), coverage, guards);
    out.rename("giraud(" + j.name() + ")");
    return out;
}

TauResult tau_and_adjunction(const GrothTotal& g) {
    TauResult out;
    const auto& d = g.indexed();
    const auto& b = *d.base();
    const auto& cat = *g.total();

    std::vector<int> terminal(b.object_count(), -1);
    for (int c = 0; c < b.object_count(); ++c) {
        auto t = d.fibre(c)->terminal_object();
        if (!t)
            throw PreconditionError("tau: fibre over '" + b.object_id(c) +
                                    "' has no terminal object");
        terminal[c] = *t;
    }
    for (int f = 0; f < b.arrow_count(); ++f) {
        int image = d.transition(f).on_object(terminal[b.tgt(f)]);
        const auto& fib = *d.fibre(b.src(f));
        for (int x = 0; x < fib.object_count(); ++x)
            if (fib.hom(x, image).size() != 1)
                throw PreconditionError("tau: transition along '" + b.arrow_id(f) +
                                        "' does not preserve the terminal object");
    }

    std::vector<int> omap(b.object_count()), amap(b.arrow_count());
    for (int c = 0; c < b.object_count(); ++c) omap[c] = g.object_of(c, terminal[c]);
    for (int f = 0; f < b.arrow_count(); ++f) {
        const auto& fib = *d.fibre(b.src(f));
        int bang = fib.hom(terminal[b.src(f)], d.transition(f).on_object(terminal[b.tgt(f)]))[0];
        int a = -1;
        for (int cand = 0; cand < cat.arrow_count(); ++cand)
            if (g.decode_arrow(cand) == std::make_pair(f, bang) &&
                g.decode_object(cat.tgt(cand)).second == terminal[b.tgt(f)] &&
                cat.src(cand) == omap[b.src(f)]) {
                a = cand;
                break;
            }
        amap[f] = a;
    }
    out.tau = FinFunctor("tau_" + d.name(), d.base(), g.total(), std::move(omap), std::move(amap));

    auto functor_laws = check_functor(out.tau);
    for (auto& check : functor_laws.checks) check.name = "tau." + check.name;
    out.report.merge(functor_laws);

    auto& adjunction = out.report.add(
        "tau-adjunction", "arrows (Y,V) -> (X,1) correspond bijectively to base arrows Y -> X");
    for (int o = 0; o < cat.object_count() && adjunction.status == Status::Pass; ++o)
        for (int x = 0; x < b.object_count(); ++x) {
            std::size_t upstairs = cat.hom(o, out.tau.on_object(x)).size();
            std::size_t downstairs = b.hom(g.decode_object(o).first, x).size();
            if (upstairs != downstairs) {
                adjunction.status = Status::Fail;
                adjunction.witnesses.push_back(Witness{}
                                                   .with("object", cat.object_id(o))
                                                   .with("base-object", b.object_id(x))
                                                   .with("upstairs", std::to_string(upstairs))
                                                   .with("downstairs", std::to_string(downstairs)));
                break;
            }
        }

    auto& natural = out.report.add("tau-adjunction-natural",
                                   "the bijection is the projection's action on hom-sets");
    for (int o = 0; o < cat.object_count() && natural.status == Status::Pass; ++o)
        for (int x = 0; x < b.object_count(); ++x) {
            std::set<int> images;
            for (int a : cat.hom(o, out.tau.on_object(x))) images.insert(g.projection().on_arrow(a));
            if (images.size() != b.hom(g.decode_object(o).first, x).size()) {
                natural.status = Status::Fail;
                natural.witnesses.push_back(Witness{}
                                                .with("object", cat.object_id(o))
                                                .with("base-object", b.object_id(x)));
                break;
            }
        }

    return out;
}

FibMorphism fib_morphism_from_fibre_maps(const GrothTotal& src, const GrothTotal& dst,
                                         const std::vector<std::vector<int>>& object_maps,
                                         std::string name) {
    if (dst.indexed().base() != src.indexed().base())
        throw InputError(name + ": fibration morphisms need a common base");
    const auto& sc = *src.total();
    std::vector<int> omap(sc.object_count()), amap(sc.arrow_count());
    for (int o = 0; o < sc.object_count(); ++o) {
        auto [c, x] = src.decode_object(o);
        omap[o] = dst.object_of(c, object_maps[c][x]);
    }
    for (int a = 0; a < sc.arrow_count(); ++a) {
        auto [f, alpha] = src.decode_arrow(a);
        auto [tc, tx] = src.decode_object(sc.tgt(a));
        auto [scc, sx] = src.decode_object(sc.src(a));
        (void)alpha;
        const auto& dfib = *dst.indexed().fibre(scc);
        auto hom = dfib.hom(object_maps[scc][sx],
                            dst.indexed().transition(f).on_object(object_maps[tc][tx]));
        if (hom.size() != 1)
            throw InputError(name + ": fibre maps do not induce a unique image arrow; "
                                    "give the total functor explicitly");
        int target_obj = dst.object_of(tc, object_maps[tc][tx]);
        int found = -1;
        for (int cand = 0; cand < dst.total()->arrow_count(); ++cand)
            if (dst.decode_arrow(cand) == std::make_pair(f, hom[0]) &&
                dst.total()->tgt(cand) == target_obj) {
                found = cand;
                break;
            }
        if (found < 0) throw InputError(name + ": image arrow not found in the target total");
        amap[a] = found;
    }
    FibMorphism m;
    m.source = &src;
    m.target = &dst;
    m.functor = FinFunctor(std::move(name), src.total(), dst.total(), std::move(omap), std::move(amap));
    return m;
}

namespace {

bool fibrewise_cartesian(const GrothTotal& side) {
    const auto& d = side.indexed();
    const auto& b = *d.base();
    for (int c = 0; c < b.object_count(); ++c) {
        const auto& fib = d.fibre(c);
        if (!terminal_cone(fib)) return false;
        for (int f = 0; f < fib->arrow_count(); ++f)
            for (int h = 0; h < fib->arrow_count(); ++h) {
                if (fib->tgt(f) != fib->tgt(h)) continue;
                if (!pullback_cone(fib, f, h)) return false;
            }
    }
    // transitions preserve terminal objects and pullbacks
    for (int f = 0; f < b.arrow_count(); ++f) {
        const auto& t = d.transition(f);
        const auto& from = d.fibre(b.tgt(f));
        auto term = terminal_cone(from);
        if (!is_limit(empty_diagram(t.target()), Cone{t.on_object(term->apex), {}})) return false;
        for (int u = 0; u < from->arrow_count(); ++u)
            for (int v = 0; v < from->arrow_count(); ++v) {
                if (from->tgt(u) != from->tgt(v)) continue;
                auto pb = pullback_cone(from, u, v);
                Cone image{t.on_object(pb->apex),
                           {t.on_arrow(pb->legs[0]), t.on_arrow(pb->legs[1]), t.on_arrow(pb->legs[2])}};
                if (!is_limit(cospan_diagram(t.target(), t.on_arrow(u), t.on_arrow(v)), image))
                    return false;
            }
    }
    return true;
}

}  // namespace

VerificationReport fibration_morphism_report(const FibMorphism& m) {
    VerificationReport report;
    const auto& src = *m.source;
    const auto& dst = *m.target;
    const auto& sc = *src.total();

    report.merge(check_functor(m.functor));

    auto& over = report.add("fibration-over-base", "the morphism commutes with the projections");
    for (int o = 0; o < sc.object_count(); ++o)
        if (dst.projection().on_object(m.functor.on_object(o)) != src.projection().on_object(o)) {
            over.status = Status::Fail;
            over.witnesses.push_back(Witness{}.with("object", sc.object_id(o)));
            break;
        }
    for (int a = 0; a < sc.arrow_count() && over.status == Status::Pass; ++a)
        if (dst.projection().on_arrow(m.functor.on_arrow(a)) != src.projection().on_arrow(a)) {
            over.status = Status::Fail;
            over.witnesses.push_back(Witness{}.with("arrow", sc.arrow_id(a)));
            break;
        }

    auto& cart = report.add("fibration-cartesian", "cartesian arrows map to cartesian arrows");
    for (int a = 0; a < sc.arrow_count(); ++a)
        if (src.cartesian(a) && !dst.cartesian(m.functor.on_arrow(a))) {
            cart.status = Status::Fail;
            cart.witnesses.push_back(Witness{}.with("arrow", sc.arrow_id(a)));
            break;
        }

    auto& limits = report.add("fibration-limit-preservation",
                              "the total functor preserves the terminal object and pullbacks");
    if (!fibrewise_cartesian(src) || !fibrewise_cartesian(dst)) {
        limits.status = Status::Skipped;
        limits.note = "sides are not fibrewise cartesian with limit-preserving transitions";
        return report;
    }

    if (auto terminal_src = terminal_cone(src.total())) {
        if (!is_limit(empty_diagram(dst.total()), Cone{m.functor.on_object(terminal_src->apex), {}})) {
            limits.status = Status::Fail;
            limits.witnesses.push_back(
                Witness{}.with("kind", "terminal").with("object", sc.object_id(terminal_src->apex)));
        }
    }
    for (int f = 0; f < sc.arrow_count() && limits.status == Status::Pass; ++f)
        for (int g = 0; g < sc.arrow_count(); ++g) {
            if (sc.tgt(f) != sc.tgt(g)) continue;
            auto pb = compute_limit(cospan_diagram(src.total(), f, g));
            if (!pb) continue;
            Cone image{m.functor.on_object(pb->cone.apex),
                       {m.functor.on_arrow(pb->cone.legs[0]), m.functor.on_arrow(pb->cone.legs[1]),
                        m.functor.on_arrow(pb->cone.legs[2])}};
            if (!is_limit(cospan_diagram(dst.total(), m.functor.on_arrow(f), m.functor.on_arrow(g)),
                          image)) {
                limits.status = Status::Fail;
                limits.witnesses.push_back(
                    Witness{}.with("kind", "pullback").with("f", sc.arrow_id(f)).with("g", sc.arrow_id(g)));
                break;
            }
        }

    return report;
}

}  // namespace sitekit
