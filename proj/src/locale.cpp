#include "sitekit/locale.hpp"

namespace sitekit {

std::vector<int> InternalLocaleCandidate::computed_exists(int base_arrow) const {
    const auto& f_src = fibres[base->src(base_arrow)];
    const auto& f_tgt = fibres[base->tgt(base_arrow)];
    const auto& t = transitions[base_arrow];
    std::vector<int> out(f_src.size(), -1);
    for (int x = 0; x < f_src.size(); ++x) {
        for (int y = 0; y < f_tgt.size(); ++y) {
            if (!f_src.le(x, t[y])) continue;
            bool least = true;
            for (int y2 = 0; y2 < f_tgt.size() && least; ++y2)
                if (f_src.le(x, t[y2]) && !f_tgt.le(y, y2)) least = false;
            if (least) {
                out[x] = y;
                break;
            }
        }
    }
    return out;
}

std::vector<int> InternalLocaleCandidate::exists_table(int base_arrow) const {
    if (exists) return (*exists)[base_arrow];
    return computed_exists(base_arrow);
}

ExistentialSite InternalLocaleCandidate::as_existential_site() const {
    const auto& b = *base;
    std::vector<CatPtr> fibre_cats;
    std::vector<GrothendieckTopology> fibre_topologies;
    for (int c = 0; c < b.object_count(); ++c) {
        fibre_cats.push_back(fibres[c].as_category());
        fibre_topologies.push_back(GrothendieckTopology::canonical(fibre_cats.back()));
        fibre_topologies.back().rename("canonical(" + fibres[c].name() + ")");
    }
    std::vector<FinFunctor> trans;
    for (int f = 0; f < b.arrow_count(); ++f) {
        const auto& src_cat = fibre_cats[b.src(f)];
        const auto& tgt_cat = fibre_cats[b.tgt(f)];
        const auto& table = transitions[f];
        std::vector<int> omap(tgt_cat->object_count()), amap(tgt_cat->arrow_count());
        for (int y = 0; y < tgt_cat->object_count(); ++y) omap[y] = table[y];
        for (int a = 0; a < tgt_cat->arrow_count(); ++a) {
            auto hom = src_cat->hom(table[tgt_cat->src(a)], table[tgt_cat->tgt(a)]);
            if (hom.empty())
                throw InputError(name + ": transition along '" + b.arrow_id(f) +
                                 "' is not monotone");
            amap[a] = hom[0];
        }
        trans.emplace_back("T_" + b.arrow_id(f), tgt_cat, src_cat, std::move(omap), std::move(amap));
    }
    IndexedCat indexed(name, base, std::move(fibre_cats), std::move(trans));
    auto total = grothendieck_construction(indexed);

    std::vector<std::vector<int>> tables;
    for (int f = 0; f < b.arrow_count(); ++f) {
        auto table = exists_table(f);
        for (int& v : table)
            if (v < 0)
                throw PreconditionError(name + ": transition along '" + b.arrow_id(f) +
                                        "' has no left adjoint");
        tables.push_back(std::move(table));
    }
    return existential_site_from_tables(total, std::move(fibre_topologies), tables);
}

PshPtr InternalLocaleCandidate::underlying_presheaf() const {
    const auto& b = *base;
    std::vector<std::vector<std::string>> sections(b.object_count());
    for (int c = 0; c < b.object_count(); ++c)
        for (int e = 0; e < fibres[c].size(); ++e) sections[c].push_back(fibres[c].element_id(e));
    std::vector<std::vector<int>> restrictions(b.arrow_count());
    for (int f = 0; f < b.arrow_count(); ++f) restrictions[f] = transitions[f];
    // section sort inside make() keeps indices: element ids are already sorted
    return FinPresheaf::make("U(" + name + ")", base, std::move(sections), std::move(restrictions));
}

InternalLocaleReport internal_locale_report(const InternalLocaleCandidate& l, const Guards& guards) {
    InternalLocaleReport out;
    const auto& b = *l.base;

    // (i) frames, frame homomorphisms, functoriality, left adjoints
    {
        auto& frames = out.report.add("frames", "every fibre is a finite frame");
        out.frames_and_homs = true;
        for (int c = 0; c < b.object_count(); ++c) {
            auto sub = validate_frame(l.fibres[c]);
            if (!sub.ok()) {
                frames.status = Status::Fail;
                frames.witnesses.push_back(Witness{}.with("fibre", b.object_id(c)));
                out.frames_and_homs = false;
                break;
            }
        }

        auto& homs = out.report.add("frame-homomorphisms",
                                    "transitions preserve finite meets and joins");
        for (int f = 0; f < b.arrow_count() && homs.status == Status::Pass; ++f) {
            const auto& fs = l.fibres[b.src(f)];
            const auto& ft = l.fibres[b.tgt(f)];
            const auto& t = l.transitions[f];
            if (t[ft.top()] != fs.top() || t[ft.bottom()] != fs.bottom()) {
                homs.status = Status::Fail;
                homs.witnesses.push_back(Witness{}.with("arrow", b.arrow_id(f)).with("at", "bounds"));
                out.frames_and_homs = false;
                break;
            }
            for (int x = 0; x < ft.size() && homs.status == Status::Pass; ++x)
                for (int y = 0; y < ft.size(); ++y) {
                    if (t[ft.meet(x, y)] != fs.meet(t[x], t[y]) ||
                        t[ft.join(x, y)] != fs.join(t[x], t[y])) {
                        homs.status = Status::Fail;
                        homs.witnesses.push_back(Witness{}
                                                     .with("arrow", b.arrow_id(f))
                                                     .with("x", ft.element_id(x))
                                                     .with("y", ft.element_id(y)));
                        out.frames_and_homs = false;
                        break;
                    }
                }
        }

        auto& functorial = out.report.add("transition-functoriality",
                                          "transition tables compose contravariantly");
        for (int c = 0; c < b.object_count(); ++c) {
            const auto& t = l.transitions[b.identity(c)];
            for (int x = 0; x < l.fibres[c].size(); ++x)
                if (t[x] != x) {
                    functorial.status = Status::Fail;
                    functorial.witnesses.push_back(Witness{}.with("object", b.object_id(c)));
                    out.frames_and_homs = false;
                    break;
                }
        }
        for (int g = 0; g < b.arrow_count() && functorial.status == Status::Pass; ++g)
            for (int f = 0; f < b.arrow_count(); ++f) {
                if (!b.composable(g, f)) continue;
                const auto& tg = l.transitions[g];
                const auto& tf = l.transitions[f];
                const auto& tgf = l.transitions[b.compose(g, f)];
                for (int x = 0; x < l.fibres[b.tgt(g)].size(); ++x)
                    if (tgf[x] != tf[tg[x]]) {
                        functorial.status = Status::Fail;
                        functorial.witnesses.push_back(
                            Witness{}.with("g", b.arrow_id(g)).with("f", b.arrow_id(f)));
                        out.frames_and_homs = false;
                        break;
                    }
                if (functorial.status != Status::Pass) break;
            }

        auto& adjoints = out.report.add("left-adjoints",
                                        "each transition admits a left adjoint matching the table");
        for (int f = 0; f < b.arrow_count() && adjoints.status == Status::Pass; ++f) {
            auto canonical = l.computed_exists(f);
            auto table = l.exists_table(f);
            for (int x = 0; x < static_cast<int>(table.size()); ++x) {
                if (canonical[x] < 0 || table[x] != canonical[x]) {
                    adjoints.status = Status::Fail;
                    adjoints.witnesses.push_back(
                        Witness{}
                            .with("arrow", b.arrow_id(f))
                            .with("element", l.fibres[b.src(f)].element_id(x)));
                    out.frames_and_homs = false;
                    break;
                }
            }
        }
    }

    // (ii) sheaf condition for the underlying presheaf
    {
        auto sheaf = sheaf_report(l.base_topology, *l.underlying_presheaf(), guards);
        out.report.merge(sheaf.report);
        out.sheaf = sheaf.sheaf;
    }

    // (iii) Beck-Chevalley over the existing pullbacks of the base
    {
        auto& bc = out.report.add("beck-chevalley",
                                  "∃ commutes with transitions across pullback squares");
        out.beck_chevalley = true;
        for (int c = 0; c < b.arrow_count(); ++c)
            for (int dd = 0; dd < b.arrow_count(); ++dd) {
                if (b.tgt(c) != b.tgt(dd)) continue;
                auto pb = pullback_cone(l.base, c, dd);
                if (!pb) continue;
                int a = pb->legs[0], bb = pb->legs[2];  // legs to src(c) and src(dd)
                auto exists_c = l.exists_table(c);
                auto exists_b = l.exists_table(bb);
                const auto& td = l.transitions[dd];
                const auto& ta = l.transitions[a];
                for (int x = 0; x < l.fibres[b.src(c)].size(); ++x) {
                    if (exists_c[x] < 0 || exists_b[ta[x]] < 0) continue;
                    if (td[exists_c[x]] != exists_b[ta[x]]) {
                        out.beck_chevalley = false;
                        if (bc.status == Status::Pass) {
                            bc.status = Status::Fail;
                            bc.witnesses.push_back(
                                Witness{}
                                    .with("c", b.arrow_id(c))
                                    .with("d", b.arrow_id(dd))
                                    .with("l", l.fibres[b.src(c)].element_id(x)));
                        }
                    }
                }
            }
    }

    // (iv) Frobenius reciprocity, the equality form
    {
        auto& fr = out.report.add("frobenius-reciprocity", "∃_a(L(a)(l') ∧ l) = ∃_a(l) ∧ l'");
        out.frobenius = true;
        for (int f = 0; f < b.arrow_count(); ++f) {
            const auto& fs = l.fibres[b.src(f)];
            const auto& ft = l.fibres[b.tgt(f)];
            auto exists_f = l.exists_table(f);
            const auto& t = l.transitions[f];
            for (int x = 0; x < fs.size(); ++x)
                for (int y = 0; y < ft.size(); ++y) {
                    int lhs = exists_f[fs.meet(t[y], x)];
                    int rhs = ft.meet(exists_f[x], y);
                    if (lhs != rhs) {
                        out.frobenius = false;
                        if (fr.status == Status::Pass) {
                            fr.status = Status::Fail;
                            fr.witnesses.push_back(Witness{}
                                                       .with("arrow", b.arrow_id(f))
                                                       .with("l", fs.element_id(x))
                                                       .with("l'", ft.element_id(y)));
                        }
                    }
                }
        }
    }

    // span form of Beck-Chevalley
    {
        auto& span = out.report.add("span-beck-chevalley",
                                    "the transported image is the join over commuting spans");
        out.span_beck_chevalley = true;
        for (int c = 0; c < b.arrow_count(); ++c)
            for (int dd = 0; dd < b.arrow_count(); ++dd) {
                if (b.tgt(c) != b.tgt(dd)) continue;
                int V = b.src(c), W = b.src(dd);
                auto exists_c = l.exists_table(c);
                const auto& td = l.transitions[dd];
                for (int x = 0; x < l.fibres[V].size(); ++x) {
                    if (exists_c[x] < 0) continue;
                    int lhs = td[exists_c[x]];
                    int acc = l.fibres[W].bottom();
                    for (int a = 0; a < b.arrow_count(); ++a) {
                        if (b.tgt(a) != V) continue;
                        for (int bb = 0; bb < b.arrow_count(); ++bb) {
                            if (b.tgt(bb) != W || b.src(bb) != b.src(a)) continue;
                            if (b.compose(c, a) != b.compose(dd, bb)) continue;
                            auto exists_b = l.exists_table(bb);
                            int term = exists_b[l.transitions[a][x]];
                            if (term >= 0) acc = l.fibres[W].join(acc, term);
                        }
                    }
                    if (acc != lhs) {
                        out.span_beck_chevalley = false;
                        if (span.status == Status::Pass) {
                            span.status = Status::Fail;
                            span.witnesses.push_back(
                                Witness{}
                                    .with("c", b.arrow_id(c))
                                    .with("d", b.arrow_id(dd))
                                    .with("l", l.fibres[V].element_id(x)));
                        }
                    }
                }
            }
    }

    // desk-scale equivalence with the relative conditions
    {
        auto& equiv = out.report.add(
            "locale-equivalence",
            "pullback and equality forms agree with the relative span forms");
        bool cartesian = terminal_cone(l.base).has_value();
        for (int f = 0; f < b.arrow_count() && cartesian; ++f)
            for (int g = 0; g < b.arrow_count() && cartesian; ++g) {
                if (b.tgt(f) != b.tgt(g)) continue;
                cartesian = pullback_cone(l.base, f, g).has_value();
            }
        if (!cartesian || !out.frames_and_homs) {
            equiv.status = Status::Skipped;
            equiv.note = !cartesian ? "base is not cartesian" : "frame hypotheses do not hold";
        } else {
            auto site = l.as_existential_site();
            bool hyp = site.validate().ok();
            if (!hyp) {
                equiv.status = Status::Skipped;
                equiv.note = "fibred-site hypotheses do not hold";
            } else {
                auto bc = check_relative_bc(site, guards);
                auto fr = check_relative_frobenius(site, guards);
                bool rel = bc.find("relative-bc")->status == Status::Pass &&
                           fr.find("relative-frobenius")->status == Status::Pass;
                bool abs = out.beck_chevalley && out.frobenius;
                if (rel != abs) {
                    equiv.status = Status::Fail;
                    equiv.note = "toolkit bug: the absolute and relative conditions disagree";
                }
            }
        }
    }

    return out;
}

}  // namespace sitekit
