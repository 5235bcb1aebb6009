#include "sitekit/presheaf.hpp"

#include <algorithm>

namespace sitekit {

PshPtr FinPresheaf::make(std::string name, CatPtr base,
                         std::vector<std::vector<std::string>> sections,
                         std::vector<std::vector<int>> restrictions) {
    auto p = std::make_shared<FinPresheaf>();
    p->name_ = std::move(name);
    p->base_ = std::move(base);
    const auto& c = *p->base_;
    if (static_cast<int>(sections.size()) != c.object_count() ||
        static_cast<int>(restrictions.size()) != c.arrow_count())
        throw InputError(p->name_ + ": section/restriction tables are not total");
    for (auto& s : sections) std::sort(s.begin(), s.end());
    p->sections_ = std::move(sections);
    p->restrictions_ = std::move(restrictions);
    for (int a = 0; a < c.arrow_count(); ++a) {
        const auto& r = p->restrictions_[a];
        if (static_cast<int>(r.size()) != p->section_count(c.tgt(a)))
            throw InputError(p->name_ + ": restriction along '" + c.arrow_id(a) + "' is not total");
        for (int v : r)
            if (v < 0 || v >= p->section_count(c.src(a)))
                throw InputError(p->name_ + ": restriction along '" + c.arrow_id(a) +
                                 "' maps outside the section set");
    }
    return p;
}

int FinPresheaf::total_sections() const {
    int n = 0;
    for (const auto& s : sections_) n += static_cast<int>(s.size());
    return n;
}

int FinPresheaf::section_index(int obj, const std::string& id) const {
    const auto& v = sections_[obj];
    auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it == v.end() || *it != id) return -1;
    return static_cast<int>(it - v.begin());
}

VerificationReport validate_presheaf(const FinPresheaf& p) {
    VerificationReport report;
    const auto& c = *p.base();

    auto& ids = report.add("presheaf-identities", "identity arrows restrict identically");
    for (int o = 0; o < c.object_count() && ids.status == Status::Pass; ++o) {
        int id = c.identity(o);
        for (int s = 0; s < p.section_count(o); ++s)
            if (p.restrict(id, s) != s) {
                ids.status = Status::Fail;
                ids.witnesses.push_back(
                    Witness{}.with("object", c.object_id(o)).with("section", p.section_id(o, s)));
                break;
            }
    }

    auto& comp = report.add("presheaf-composition", "restriction respects composition");
    for (int g = 0; g < c.arrow_count() && comp.status == Status::Pass; ++g)
        for (int f = 0; f < c.arrow_count() && comp.status == Status::Pass; ++f) {
            if (!c.composable(g, f)) continue;
            int gf = c.compose(g, f);
            for (int s = 0; s < p.section_count(c.tgt(g)); ++s)
                if (p.restrict(gf, s) != p.restrict(f, p.restrict(g, s))) {
                    comp.status = Status::Fail;
                    comp.witnesses.push_back(Witness{}
                                                 .with("g", c.arrow_id(g))
                                                 .with("f", c.arrow_id(f))
                                                 .with("section", p.section_id(c.tgt(g), s)));
                    break;
                }
        }

    return report;
}

PshPtr hom_presheaf(const FinFunctor& p, int c) {
    const auto& src = *p.source();
    const auto& dst = *p.target();
    if (c < 0 || c >= dst.object_count()) throw InputError("hom_presheaf: object out of range");

    std::vector<std::vector<std::string>> sections(src.object_count());
    std::vector<std::vector<int>> sec_arrows(src.object_count());
    for (int d = 0; d < src.object_count(); ++d) {
        for (int u : dst.hom(p.on_object(d), c)) {
            sections[d].push_back(dst.arrow_id(u));
            sec_arrows[d].push_back(u);
        }
        // keep identifiers and indices aligned after the sort in make()
        std::sort(sec_arrows[d].begin(), sec_arrows[d].end(), [&](int a, int b) {
            return dst.arrow_id(a) < dst.arrow_id(b);
        });
    }

    std::vector<std::vector<int>> restrictions(src.arrow_count());
    for (int g = 0; g < src.arrow_count(); ++g) {
        int tgt = src.tgt(g), from = src.src(g);
        restrictions[g].resize(sec_arrows[tgt].size());
        for (std::size_t i = 0; i < sec_arrows[tgt].size(); ++i) {
            int composite = dst.compose(sec_arrows[tgt][i], p.on_arrow(g));
            const auto& at = sec_arrows[from];
            int pos = -1;
            for (std::size_t jj = 0; jj < at.size(); ++jj)
                if (at[jj] == composite) pos = static_cast<int>(jj);
            restrictions[g][i] = pos;
        }
    }
    return FinPresheaf::make("hom(" + p.name() + ",-," + dst.object_id(c) + ")", p.source(),
                             std::move(sections), std::move(restrictions));
}

Subpresheaf full_subpresheaf(const PshPtr& p) {
    Subpresheaf s{p, {}};
    for (int o = 0; o < p->base()->object_count(); ++o) {
        Bits b(p->section_count(o));
        b.set_all();
        s.sections.push_back(b);
    }
    return s;
}

Subpresheaf empty_subpresheaf(const PshPtr& p) {
    Subpresheaf s{p, {}};
    for (int o = 0; o < p->base()->object_count(); ++o) s.sections.emplace_back(p->section_count(o));
    return s;
}

bool is_subpresheaf(const Subpresheaf& s) {
    const auto& c = *s.ambient->base();
    for (int a = 0; a < c.arrow_count(); ++a)
        for (int x = s.sections[c.tgt(a)].next(); x >= 0; x = s.sections[c.tgt(a)].next(x + 1))
            if (!s.sections[c.src(a)].test(s.ambient->restrict(a, x))) return false;
    return true;
}

void saturate_subpresheaf(Subpresheaf& s) {
    const auto& c = *s.ambient->base();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < c.arrow_count(); ++a)
            for (int x = s.sections[c.tgt(a)].next(); x >= 0; x = s.sections[c.tgt(a)].next(x + 1)) {
                int y = s.ambient->restrict(a, x);
                if (!s.sections[c.src(a)].test(y)) {
                    s.sections[c.src(a)].set(y);
                    changed = true;
                }
            }
    }
}

Subpresheaf close_subpresheaf(const GrothendieckTopology& k, const Subpresheaf& s) {
    if (k.base() != s.ambient->base())
        throw InputError("close_subpresheaf: topology base differs from the presheaf base");
    const auto& c = *k.base();
    const auto& ops = k.ops();
    Subpresheaf out = s;
    for (int d = 0; d < c.object_count(); ++d) {
        const auto& into = c.arrows_into(d);
        for (int x = 0; x < s.ambient->section_count(d); ++x) {
            if (out.sections[d].test(x)) continue;
            Sieve agree = ops.empty(d);
            for (std::size_t i = 0; i < into.size(); ++i)
                if (s.sections[c.src(into[i])].test(s.ambient->restrict(into[i], x)))
                    agree.bits.set(static_cast<int>(i));
            if (k.covers(agree)) out.sections[d].set(x);
        }
    }
    return out;
}

int ClosedSubobjectFrame::index_of(const Subpresheaf& s) const {
    for (std::size_t i = 0; i < decode.size(); ++i)
        if (decode[i].sections == s.sections) return static_cast<int>(i);
    return -1;
}

ClosedSubobjectFrame closed_subobject_frame(const GrothendieckTopology& k, const PshPtr& p,
                                            const Guards& guards) {
    const auto& c = *p->base();
    std::set<std::vector<Bits>> closed;

    bool exhaustive = p->total_sections() <= guards.subpresheaf_sections;
    if (exhaustive) {
        // all restriction-closed families, grown one section at a time
        std::set<std::vector<Bits>> seen;
        std::vector<Subpresheaf> queue{empty_subpresheaf(p)};
        seen.insert(queue[0].sections);
        while (!queue.empty()) {
            Subpresheaf cur = queue.back();
            queue.pop_back();
            if (close_subpresheaf(k, cur).sections == cur.sections) closed.insert(cur.sections);
            for (int o = 0; o < c.object_count(); ++o)
                for (int x = 0; x < p->section_count(o); ++x) {
                    if (cur.sections[o].test(x)) continue;
                    Subpresheaf next = cur;
                    next.sections[o].set(x);
                    saturate_subpresheaf(next);
                    if (seen.insert(next.sections).second) queue.push_back(next);
                }
        }
    } else {
        // generator mode: closures of point-generated subobjects, saturated
        // under binary joins; reaches every closed subobject since each one
        // is the join of the closures of its points
        std::vector<Subpresheaf> elems;
        auto push = [&](const Subpresheaf& s) {
            if (closed.insert(s.sections).second) elems.push_back(s);
        };
        push(close_subpresheaf(k, empty_subpresheaf(p)));
        for (int o = 0; o < c.object_count(); ++o)
            for (int x = 0; x < p->section_count(o); ++x) {
                Subpresheaf s = empty_subpresheaf(p);
                s.sections[o].set(x);
                saturate_subpresheaf(s);
                push(close_subpresheaf(k, s));
            }
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                Subpresheaf u = elems[i];
                for (int o = 0; o < c.object_count(); ++o) u.sections[o] |= elems[j].sections[o];
                push(close_subpresheaf(k, u));
            }
    }

    ClosedSubobjectFrame out;
    out.exhaustive = exhaustive;
    for (const auto& sections : closed) out.decode.push_back(Subpresheaf{p, sections});

    const int n = static_cast<int>(out.decode.size());
    std::vector<std::string> names(n);
    std::vector<std::pair<std::string, std::string>> le;
    auto subset = [&](int i, int j) {
        for (int o = 0; o < c.object_count(); ++o)
            if (!out.decode[i].sections[o].subset_of(out.decode[j].sections[o])) return false;
        return true;
    };
    for (int i = 0; i < n; ++i) {
        names[i] = "s";
        for (char ch : std::to_string(n - 1)) (void)ch, names[i] += "0";
        std::string digits = std::to_string(i);
        names[i].replace(names[i].size() - digits.size(), digits.size(), digits);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (subset(i, j)) le.emplace_back(names[i], names[j]);
    out.frame = FiniteFrame::from_order("clsub(" + p->name() + ")", names, le);
    return out;
}

SheafReport sheaf_report(const GrothendieckTopology& j, const FinPresheaf& p, const Guards& guards) {
    SheafReport out;
    out.separated = true;
    out.sheaf = true;
    auto& sep = out.report.add("separated", "matching families have at most one amalgamation");
    auto& shf = out.report.add("sheaf", "matching families have exactly one amalgamation");
    const auto& c = *p.base();
    const auto& ops = j.ops();

    bool sampled = false;
    long long budget = guards.functor_search;
    for (int x = 0; x < c.object_count(); ++x) {
        const auto& into = c.arrows_into(x);
        for (const auto& bits : sieve_pool(ops, x, guards, &sampled)) {
            Sieve s{x, bits};
            if (!j.covers(s)) continue;

            std::vector<int> members;  // arrow indices in the sieve
            for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1)) members.push_back(into[i]);
            std::vector<int> pos_of(c.arrow_count(), -1);
            for (std::size_t i = 0; i < members.size(); ++i) pos_of[members[i]] = static_cast<int>(i);

            // backtracking enumeration of matching families
            std::vector<int> family(members.size(), -1);
            std::vector<std::size_t> stack{0};
            auto consistent = [&](std::size_t idx) {
                int f = members[idx];
                for (int g : c.arrows_into(c.src(f))) {
                    int h = c.compose(f, g);
                    int hp = pos_of[h];
                    if (hp >= 0 && family[hp] >= 0 &&
                        p.restrict(g, family[idx]) != family[hp] && static_cast<std::size_t>(hp) != idx)
                        return false;
                    if (static_cast<std::size_t>(hp) == idx && p.restrict(g, family[idx]) != family[idx])
                        return false;
                }
                for (std::size_t k = 0; k < members.size(); ++k) {
                    if (family[k] < 0 || k == idx) continue;
                    for (int g : c.arrows_into(c.src(members[k])))
                        if (c.compose(members[k], g) == f &&
                            p.restrict(g, family[k]) != family[idx])
                            return false;
                }
                return true;
            };

            std::size_t depth = 0;
            std::vector<int> trial(members.size(), 0);
            bool done = members.empty();
            bool empty_checked = false;
            while (!done || !empty_checked) {
                if (members.empty()) {
                    empty_checked = true;
                    // the empty family matches; amalgamations are all sections
                    int amalgamations = p.section_count(x);
                    if (amalgamations > 1 && out.separated) {
                        out.separated = false;
                        sep.status = Status::Fail;
                        sep.witnesses.push_back(Witness{}
                                                    .with("object", c.object_id(x))
                                                    .with("sieve", ops.render(s))
                                                    .with("amalgamations", std::to_string(amalgamations)));
                    }
                    if (amalgamations != 1 && out.sheaf) {
                        out.sheaf = false;
                        shf.status = Status::Fail;
                        shf.witnesses.push_back(Witness{}
                                                    .with("object", c.object_id(x))
                                                    .with("sieve", ops.render(s))
                                                    .with("amalgamations", std::to_string(amalgamations)));
                    }
                    break;
                }
                if (--budget < 0) {
                    sep.status = Status::Inconclusive;
                    shf.status = Status::Inconclusive;
                    sep.note = shf.note = "matching-family enumeration exceeded the search budget";
                    return out;
                }
                if (trial[depth] >= p.section_count(c.src(members[depth]))) {
                    family[depth] = -1;
                    trial[depth] = 0;
                    if (depth == 0) break;
                    --depth;
                    ++trial[depth];
                    continue;
                }
                family[depth] = trial[depth];
                if (!consistent(depth)) {
                    ++trial[depth];
                    continue;
                }
                if (depth + 1 < members.size()) {
                    ++depth;
                    continue;
                }

                // complete matching family: count amalgamations
                int amalgamations = 0;
                for (int sec = 0; sec < p.section_count(x); ++sec) {
                    bool ok = true;
                    for (std::size_t i = 0; i < members.size() && ok; ++i)
                        ok = p.restrict(members[i], sec) == family[i];
                    if (ok) ++amalgamations;
                }
                if (amalgamations > 1 && out.separated) {
                    out.separated = false;
                    sep.status = Status::Fail;
                    sep.witnesses.push_back(Witness{}
                                                .with("object", c.object_id(x))
                                                .with("sieve", ops.render(s)));
                }
                if (amalgamations != 1 && out.sheaf) {
                    out.sheaf = false;
                    shf.status = Status::Fail;
                    shf.witnesses.push_back(Witness{}
                                                .with("object", c.object_id(x))
                                                .with("sieve", ops.render(s))
                                                .with("amalgamations", std::to_string(amalgamations)));
                }
                ++trial[depth];
            }
        }
    }

    if (sampled) {
        if (sep.status == Status::Pass) sep.status = Status::Sampled;
        if (shf.status == Status::Pass) shf.status = Status::Sampled;
    }
    return out;
}

}  // namespace sitekit
