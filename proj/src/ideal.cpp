#include "sitekit/ideal.hpp"

#include <algorithm>

#include "sitekit/site_maps.hpp"

namespace sitekit {

namespace {

// covering sieves per object, as domain subsets of the preorder
std::vector<std::vector<Bits>> cover_domains(const CatPtr& p, const GrothendieckTopology& k,
                                             const Guards& guards) {
    std::vector<std::vector<Bits>> out(p->object_count());
    for (int c = 0; c < p->object_count(); ++c) {
        const auto& into = p->arrows_into(c);
        for (const auto& bits : k.ops().enumerate(c, guards.sieve_enumeration)) {
            if (!k.covers(Sieve{c, bits})) continue;
            Bits domains(p->object_count());
            for (int i = Bits(bits).next(); i >= 0; i = bits.next(i + 1))
                domains.set(p->src(into[i]));
            out[c].push_back(domains);
        }
    }
    return out;
}

bool is_ideal(const CatPtr& p, const std::vector<std::vector<Bits>>& covers, const Bits& subset) {
    // down-closed
    for (int x = subset.next(); x >= 0; x = subset.next(x + 1))
        for (int y = 0; y < p->object_count(); ++y)
            if (!p->hom(y, x).empty() && !subset.test(y)) return false;
    // closed under the declared covers
    for (int c = 0; c < p->object_count(); ++c) {
        if (subset.test(c)) continue;
        for (const auto& domains : covers[c])
            if (domains.subset_of(subset)) return false;
    }
    return true;
}

Bits ideal_closure(const CatPtr& p, const std::vector<std::vector<Bits>>& covers, Bits subset) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = subset.next(); x >= 0; x = subset.next(x + 1))
            for (int y = 0; y < p->object_count(); ++y)
                if (!p->hom(y, x).empty() && !subset.test(y)) {
                    subset.set(y);
                    changed = true;
                }
        for (int c = 0; c < p->object_count(); ++c) {
            if (subset.test(c)) continue;
            for (const auto& domains : covers[c])
                if (domains.subset_of(subset)) {
                    subset.set(c);
                    changed = true;
                    break;
                }
        }
    }
    return subset;
}

FiniteFrame frame_of_subsets(const std::string& name, const std::vector<Bits>& elems) {
    const int n = static_cast<int>(elems.size());
    std::vector<std::string> names(n);
    const std::size_t width = std::to_string(n > 1 ? n - 1 : 0).size();
    for (int i = 0; i < n; ++i) {
        std::string digits = std::to_string(i);
        names[i] = "i" + std::string(width - digits.size(), '0') + digits;
    }
    std::vector<std::pair<std::string, std::string>> le;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (elems[i].subset_of(elems[j])) le.emplace_back(names[i], names[j]);
    return FiniteFrame::from_order(name, names, le);
}

}  // namespace

FrameOfIdeals ideal_completion(const CatPtr& preorder, const GrothendieckTopology& k,
                               const Guards& guards) {
    if (!preorder->is_preorder())
        throw InputError("ideal_completion: '" + preorder->name() + "' is not a preorder");
    if (k.base() != preorder) throw InputError("ideal_completion: topology on the wrong category");
    const int n = preorder->object_count();
    auto covers = cover_domains(preorder, k, guards);

    FrameOfIdeals out;
    std::set<Bits> ideals;
    if (n <= guards.preorder_ideals) {
        out.exhaustive = true;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Bits subset(n);
            for (int i = 0; i < n; ++i)
                if (mask & (std::uint64_t{1} << i)) subset.set(i);
            if (is_ideal(preorder, covers, subset)) ideals.insert(subset);
        }
    } else {
        out.exhaustive = false;
        // closures of principal downsets, saturated under joins
        std::vector<Bits> elems;
        auto push = [&](const Bits& b) {
            if (ideals.insert(b).second) elems.push_back(b);
        };
        push(ideal_closure(preorder, covers, Bits(n)));
        for (int c = 0; c < n; ++c) {
            Bits b(n);
            b.set(c);
            push(ideal_closure(preorder, covers, b));
        }
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) push(ideal_closure(preorder, covers, elems[i] | elems[j]));
    }

    out.decode.assign(ideals.begin(), ideals.end());
    out.frame = frame_of_subsets("ideals(" + preorder->name() + ")", out.decode);
    out.canonical_map.resize(n);
    for (int c = 0; c < n; ++c) {
        Bits b(n);
        b.set(c);
        Bits closed = ideal_closure(preorder, covers, b);
        int idx = static_cast<int>(
            std::lower_bound(out.decode.begin(), out.decode.end(), closed) - out.decode.begin());
        if (idx >= static_cast<int>(out.decode.size()) || !(out.decode[idx] == closed))
            throw InputError("ideal_completion: closure of a point escaped the element set");
        out.canonical_map[c] = idx;
    }
    return out;
}

FibredCompletionResult fibred_ideal_completion(const FibredPreorderSite& p, const Guards& guards) {
    FibredCompletionResult out;
    const auto& d = p.indexed;
    const auto& b = *d.base();
    if (!d.preorder_fibres())
        throw PreconditionError("fibred_ideal_completion: fibres must be preorders");

    // precondition: the total topology contains the lifted base covers,
    // i.e. the projection is a comorphism of sites
    {
        auto comorphism = comorphism_report(p.total.projection(), p.total_topology,
                                            p.base_topology, guards);
        if (!comorphism.cover_lifting)
            throw PreconditionError(
                "fibred_ideal_completion: the total topology does not contain the lifted covers");
        auto& pre = out.report.add("giraud-containment-precondition",
                                   "the total topology contains the lifted base covers");
        pre.status = Status::Pass;
    }

    // fibres of the completion
    std::vector<PshPtr> homs;
    for (int c = 0; c < b.object_count(); ++c) {
        homs.push_back(hom_presheaf(p.total.projection(), c));
        out.frames.push_back(closed_subobject_frame(p.total_topology, homs.back(), guards));
    }

    InternalLocaleCandidate locale;
    locale.name = "completion(" + d.name() + ")";
    locale.base = d.base();
    locale.base_topology = p.base_topology;
    for (int c = 0; c < b.object_count(); ++c) locale.fibres.push_back(out.frames[c].frame);

    auto& closure_check = out.report.add(
        "transition-closure", "pullbacks and direct images of closed subobjects stay closed");

    // transitions: pullback along postcomposition with f : c -> c'
    locale.transitions.resize(b.arrow_count());
    std::vector<std::vector<int>> exists_tables(b.arrow_count());
    const auto& total_cat = *p.total.total();
    for (int f = 0; f < b.arrow_count(); ++f) {
        int c = b.src(f), cp = b.tgt(f);
        const auto& from = out.frames[cp];
        const auto& to = out.frames[c];
        locale.transitions[f].resize(from.frame.size());
        for (int e = 0; e < from.frame.size(); ++e) {
            const auto& sub = from.decode[e];
            Subpresheaf pulled = empty_subpresheaf(homs[c]);
            for (int o = 0; o < total_cat.object_count(); ++o)
                for (int sidx = 0; sidx < homs[c]->section_count(o); ++sidx) {
                    int g = b.arrow_index(homs[c]->section_id(o, sidx));
                    int fg = b.compose(f, g);
                    int up = homs[cp]->section_index(o, b.arrow_id(fg));
                    if (up >= 0 && sub.sections[o].test(up)) pulled.sections[o].set(sidx);
                }
            int idx = to.index_of(pulled);
            if (idx < 0) {
                if (closure_check.status == Status::Pass) {
                    closure_check.status = Status::Fail;
                    closure_check.witnesses.push_back(Witness{}
                                                          .with("arrow", b.arrow_id(f))
                                                          .with("element", from.frame.element_id(e)));
                }
                idx = to.frame.bottom();
            }
            locale.transitions[f][e] = idx;
        }

        // ∃ by closure of the direct image
        exists_tables[f].resize(to.frame.size());
        for (int e = 0; e < to.frame.size(); ++e) {
            const auto& sub = to.decode[e];
            Subpresheaf image = empty_subpresheaf(homs[cp]);
            for (int o = 0; o < total_cat.object_count(); ++o)
                for (int sidx = sub.sections[o].next(); sidx >= 0; sidx = sub.sections[o].next(sidx + 1)) {
                    int g = b.arrow_index(homs[c]->section_id(o, sidx));
                    int up = homs[cp]->section_index(o, b.arrow_id(b.compose(f, g)));
                    if (up >= 0) image.sections[o].set(up);
                }
            Subpresheaf closed = close_subpresheaf(p.total_topology, image);
            int idx = from.index_of(closed);
            if (idx < 0) {
                if (closure_check.status == Status::Pass) {
                    closure_check.status = Status::Fail;
                    closure_check.witnesses.push_back(Witness{}
                                                          .with("arrow", b.arrow_id(f))
                                                          .with("element", to.frame.element_id(e)));
                }
                idx = from.frame.top();
            }
            exists_tables[f][e] = idx;
        }
    }
    locale.exists = exists_tables;

    // the unit: x at c goes to the closure of { g : c' -> c | x' ≤ T_g(x) }
    out.unit.resize(b.object_count());
    for (int c = 0; c < b.object_count(); ++c) {
        const auto& fib = *d.fibre(c);
        out.unit[c].resize(fib.object_count());
        for (int x = 0; x < fib.object_count(); ++x) {
            Subpresheaf sub = empty_subpresheaf(homs[c]);
            for (int o = 0; o < total_cat.object_count(); ++o) {
                auto [cp, xp] = p.total.decode_object(o);
                for (int sidx = 0; sidx < homs[c]->section_count(o); ++sidx) {
                    int g = b.arrow_index(homs[c]->section_id(o, sidx));
                    (void)cp;
                    int tx = d.transition(g).on_object(x);
                    if (!d.fibre(b.src(g))->hom(xp, tx).empty()) sub.sections[o].set(sidx);
                }
            }
            Subpresheaf closed = close_subpresheaf(p.total_topology, sub);
            int idx = out.frames[c].index_of(closed);
            if (idx < 0) throw InputError("fibred_ideal_completion: unit escaped the closed elements");
            out.unit[c][x] = idx;
        }
    }

    // unit properties
    auto& monotone = out.report.add("unit-monotone", "the unit preserves the fibre order");
    for (int c = 0; c < b.object_count() && monotone.status == Status::Pass; ++c) {
        const auto& fib = *d.fibre(c);
        for (int x = 0; x < fib.object_count() && monotone.status == Status::Pass; ++x)
            for (int y = 0; y < fib.object_count(); ++y)
                if (!fib.hom(x, y).empty() &&
                    !locale.fibres[c].le(out.unit[c][x], out.unit[c][y])) {
                    monotone.status = Status::Fail;
                    monotone.witnesses.push_back(Witness{}
                                                     .with("object", b.object_id(c))
                                                     .with("x", fib.object_id(x))
                                                     .with("y", fib.object_id(y)));
                    break;
                }
    }
    auto& natural = out.report.add("unit-natural", "the unit commutes with the transitions");
    for (int f = 0; f < b.arrow_count() && natural.status == Status::Pass; ++f) {
        int c = b.src(f), cp = b.tgt(f);
        const auto& fibp = *d.fibre(cp);
        for (int x = 0; x < fibp.object_count(); ++x) {
            int lhs = locale.transitions[f][out.unit[cp][x]];
            int rhs = out.unit[c][d.transition(f).on_object(x)];
            if (lhs != rhs) {
                natural.status = Status::Fail;
                natural.witnesses.push_back(
                    Witness{}.with("arrow", b.arrow_id(f)).with("x", fibp.object_id(x)));
                break;
            }
        }
    }
    auto& iso = out.report.add("unit-isomorphism",
                               "the unit is an isomorphism of indexed frames (informative)");
    out.unit_isomorphism = true;
    for (int c = 0; c < b.object_count() && out.unit_isomorphism; ++c) {
        const auto& fib = *d.fibre(c);
        if (fib.object_count() != locale.fibres[c].size()) out.unit_isomorphism = false;
        std::set<int> image;
        for (int x = 0; x < fib.object_count(); ++x) image.insert(out.unit[c][x]);
        if (static_cast<int>(image.size()) != locale.fibres[c].size()) out.unit_isomorphism = false;
        for (int x = 0; x < fib.object_count() && out.unit_isomorphism; ++x)
            for (int y = 0; y < fib.object_count(); ++y)
                if (locale.fibres[c].le(out.unit[c][x], out.unit[c][y]) && fib.hom(x, y).empty())
                    out.unit_isomorphism = false;
    }
    if (!out.unit_isomorphism) {
        iso.status = Status::Fail;
        iso.note = "the unit is not bijective/order-reflecting on some fibre";
    }

    // the construction never reads the base topology; assert that a rerun
    // against the trivial base topology yields the same frames
    auto& independent = out.report.add("base-topology-independence",
                                       "the completion depends only on the total topology");
    {
        bool same = true;
        for (int c = 0; c < b.object_count() && same; ++c) {
            auto again = closed_subobject_frame(p.total_topology, homs[c], guards);
            same = again.decode.size() == out.frames[c].decode.size();
            for (std::size_t i = 0; same && i < again.decode.size(); ++i)
                same = again.decode[i].sections == out.frames[c].decode[i].sections;
        }
        if (!same) independent.status = Status::Fail;
    }

    // the completion is an internal locale for the base site
    auto locale_report = internal_locale_report(locale, guards);
    out.report.merge(locale_report.report);

    out.locale = std::move(locale);
    return out;
}

namespace {

// enumerate frame homomorphisms h : a -> b extending as backtracking;
// calls sink(h) for each complete homomorphism, returns false when the
// budget is exhausted
bool enumerate_frame_homs(const FiniteFrame& a, const FiniteFrame& b, long long& budget,
                          const std::function<bool(const std::vector<int>&)>& keep,
                          const std::function<void(const std::vector<int>&)>& sink) {
    std::vector<int> h(a.size(), -1);
    std::vector<int> order(a.size());
    for (int i = 0; i < a.size(); ++i) order[i] = i;
    // assign in identifier order; check laws on the assigned prefix
    std::function<bool(int)> go = [&](int depth) -> bool {
        if (--budget < 0) return false;
        if (depth == a.size()) {
            // the prefix checks prune; the complete map is verified in full
            if (h[a.top()] != b.top() || h[a.bottom()] != b.bottom()) return true;
            for (int x = 0; x < a.size(); ++x)
                for (int y = 0; y < a.size(); ++y) {
                    if (h[a.meet(x, y)] != b.meet(h[x], h[y])) return true;
                    if (h[a.join(x, y)] != b.join(h[x], h[y])) return true;
                }
            if (keep(h)) sink(h);
            return true;
        }
        int x = order[depth];
        for (int img = 0; img < b.size(); ++img) {
            h[x] = img;
            bool ok = true;
            if (x == a.top() && img != b.top()) ok = false;
            if (x == a.bottom() && img != b.bottom()) ok = false;
            for (int prev = 0; prev < depth && ok; ++prev) {
                int y = order[prev];
                if (a.le(x, y) && !b.le(img, h[y])) ok = false;
                if (a.le(y, x) && !b.le(h[y], img)) ok = false;
                int m = a.meet(x, y), j = a.join(x, y);
                if (h[m] >= 0 && h[m] != b.meet(img, h[y])) ok = false;
                if (h[j] >= 0 && h[j] != b.join(img, h[y])) ok = false;
            }
            if (ok && !go(depth + 1)) return false;
        }
        h[x] = -1;
        return true;
    };
    return go(0);
}

}  // namespace

VerificationReport universal_property_probe(const FibredPreorderSite& p,
                                            const InternalLocaleCandidate& target,
                                            const std::vector<std::vector<int>>& m,
                                            const Guards& guards) {
    VerificationReport report;
    const auto& b = *p.indexed.base();

    auto target_report = internal_locale_report(target, guards);
    if (!target_report.internal_locale())
        throw PreconditionError("universal_property_probe: the target is not an internal locale");

    auto completion = fibred_ideal_completion(p, guards);
    const auto& L = completion.locale;

    auto& factor = report.add("unique-factorization",
                              "exactly one indexed frame homomorphism factors the morphism "
                              "through the unit");

    // collect fibrewise frame homomorphism candidates compatible with m
    std::vector<std::vector<std::vector<int>>> candidates(b.object_count());
    long long budget = guards.functor_search;
    for (int c = 0; c < b.object_count(); ++c) {
        const auto& fib = *p.indexed.fibre(c);
        bool complete = enumerate_frame_homs(
            L.fibres[c], target.fibres[c], budget,
            [&](const std::vector<int>& h) {
                for (int x = 0; x < fib.object_count(); ++x)
                    if (h[completion.unit[c][x]] != m[c][x]) return false;
                return true;
            },
            [&](const std::vector<int>& h) { candidates[c].push_back(h); });
        if (!complete) {
            factor.status = Status::Inconclusive;
            factor.note = "frame-homomorphism enumeration exceeded the search budget";
            return report;
        }
    }

    // combine fibrewise candidates under naturality
    long long combos = 1;
    for (int c = 0; c < b.object_count(); ++c) {
        combos *= static_cast<long long>(candidates[c].size());
        if (combos > guards.functor_search) {
            factor.status = Status::Inconclusive;
            factor.note = "too many fibrewise candidates to combine";
            return report;
        }
    }
    int found = 0;
    std::vector<int> pick(b.object_count(), 0);
    if (combos > 0)
        while (true) {
            bool natural = true;
            for (int f = 0; f < b.arrow_count() && natural; ++f) {
                int c = b.src(f), cp = b.tgt(f);
                const auto& hc = candidates[c][pick[c]];
                const auto& hcp = candidates[cp][pick[cp]];
                for (int e = 0; e < L.fibres[cp].size(); ++e)
                    if (hc[L.transitions[f][e]] != target.transitions[f][hcp[e]]) {
                        natural = false;
                        break;
                    }
            }
            if (natural) ++found;
            int i = b.object_count() - 1;
            for (; i >= 0; --i) {
                if (++pick[i] < static_cast<int>(candidates[i].size())) break;
                pick[i] = 0;
            }
            if (i < 0) break;
        }

    if (found == 0) {
        factor.status = Status::Fail;
        factor.note = "no factorization";
    } else if (found > 1) {
        factor.status = Status::Fail;
        factor.note = "factorization is not unique (" + std::to_string(found) + " found)";
    }
    return report;
}

}  // namespace sitekit
