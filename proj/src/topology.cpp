#include "sitekit/topology.hpp"

#include <algorithm>

#include "sitekit/rng.hpp"

namespace sitekit {

SieveOps::SieveOps(CatPtr cat) : cat_(std::move(cat)) {
    const auto& c = *cat_;
    precomp_.resize(c.object_count());
    for (int x = 0; x < c.object_count(); ++x) {
        const auto& into = c.arrows_into(x);
        precomp_[x].resize(into.size());
        for (std::size_t i = 0; i < into.size(); ++i) {
            int f = into[i];
            const auto& into_src = c.arrows_into(c.src(f));
            precomp_[x][i].resize(into_src.size());
            for (std::size_t j = 0; j < into_src.size(); ++j) {
                int composite = c.compose(f, into_src[j]);
                precomp_[x][i][j] = composite < 0 ? -1 : c.into_position(composite);
            }
        }
    }
}

Sieve SieveOps::empty(int obj) const {
    return Sieve{obj, Bits(static_cast<int>(cat_->arrows_into(obj).size()))};
}

Sieve SieveOps::maximal(int obj) const {
    Sieve s = empty(obj);
    s.bits.set_all();
    return s;
}

Sieve SieveOps::generated(int obj, const std::vector<int>& arrows) const {
    Sieve s = empty(obj);
    for (int a : arrows) {
        if (cat_->tgt(a) != obj) throw InputError("generated: arrow does not point into the object");
        s.bits.set(cat_->into_position(a));
    }
    saturate(s);
    return s;
}

bool SieveOps::is_sieve(const Sieve& s) const {
    const auto& pre = precomp_[s.obj];
    for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1))
        for (int pos : pre[i])
            if (pos >= 0 && !s.bits.test(pos)) return false;
    return true;
}

void SieveOps::saturate(Sieve& s) const {
    const auto& pre = precomp_[s.obj];
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1))
            for (int pos : pre[i])
                if (pos >= 0 && !s.bits.test(pos)) {
                    s.bits.set(pos);
                    changed = true;
                }
    }
}

Sieve SieveOps::pullback(const Sieve& s, int f) const {
    if (cat_->tgt(f) != s.obj) throw InputError("pullback: arrow does not point into the sieve's object");
    int d = cat_->src(f);
    Sieve r = empty(d);
    const auto& comp = precomp_[s.obj][cat_->into_position(f)];
    for (std::size_t j = 0; j < comp.size(); ++j)
        if (comp[j] >= 0 && s.bits.test(comp[j])) r.bits.set(static_cast<int>(j));
    return r;
}

std::vector<Bits> SieveOps::enumerate(int obj, int guard) const {
    const int n = static_cast<int>(cat_->arrows_into(obj).size());
    if (n > guard)
        throw GuardError("sieve-enumeration", "object '" + cat_->object_id(obj) + "' has " +
                                                  std::to_string(n) + " incoming arrows (guard " +
                                                  std::to_string(guard) + ")");
    std::set<Bits> seen;
    std::vector<Bits> queue{Bits(n)};
    seen.insert(queue[0]);
    while (!queue.empty()) {
        Bits cur = queue.back();
        queue.pop_back();
        for (int i = 0; i < n; ++i) {
            if (cur.test(i)) continue;
            Sieve s{obj, cur};
            s.bits.set(i);
            saturate(s);
            if (seen.insert(s.bits).second) queue.push_back(s.bits);
        }
    }
    return {seen.begin(), seen.end()};
}

std::string SieveOps::render(const Sieve& s) const {
    std::string out = "{";
    const auto& into = cat_->arrows_into(s.obj);
    bool first = true;
    for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1)) {
        if (!first) out += ", ";
        out += cat_->arrow_id(into[i]);
        first = false;
    }
    return out + "}";
}

GrothendieckTopology GrothendieckTopology::trivial(CatPtr cat, std::string name) {
    auto ops = std::make_shared<SieveOps>(cat);
    std::vector<std::set<Bits>> covers(cat->object_count());
    for (int x = 0; x < cat->object_count(); ++x) covers[x].insert(ops->maximal(x).bits);
    GrothendieckTopology j;
    j.name_ = std::move(name);
    j.ops_ = std::move(ops);
    j.mode_ = Mode::Enumerated;
    j.covers_ = std::make_shared<std::vector<std::vector<Bits>>>(cat->object_count());
    for (int x = 0; x < cat->object_count(); ++x)
        (*j.covers_)[x] = {covers[x].begin(), covers[x].end()};
    return j;
}

GrothendieckTopology GrothendieckTopology::enumerated(CatPtr cat, std::string name,
                                                      std::vector<std::set<Bits>> covers) {
    GrothendieckTopology j;
    j.name_ = std::move(name);
    j.ops_ = std::make_shared<SieveOps>(std::move(cat));
    j.mode_ = Mode::Enumerated;
    const auto& c = *j.ops_->category();
    if (static_cast<int>(covers.size()) != c.object_count())
        throw InputError(j.name_ + ": covering table must list every object");
    j.covers_ = std::make_shared<std::vector<std::vector<Bits>>>(c.object_count());
    for (int x = 0; x < c.object_count(); ++x) {
        for (const auto& bits : covers[x])
            if (!j.ops_->is_sieve(Sieve{x, bits}))
                throw InputError(j.name_ + ": declared covering set on '" + c.object_id(x) +
                                 "' is not a sieve");
        (*j.covers_)[x] = {covers[x].begin(), covers[x].end()};
    }
    return j;
}

GrothendieckTopology GrothendieckTopology::predicate(
    CatPtr cat, std::string name, std::function<bool(const SieveOps&, const Sieve&)> fn) {
    GrothendieckTopology j;
    j.name_ = std::move(name);
    j.ops_ = std::make_shared<SieveOps>(std::move(cat));
    j.mode_ = Mode::Predicate;
    j.pred_ = std::make_shared<PredicateData>();
    j.pred_->fn = std::move(fn);
    return j;
}

GrothendieckTopology GrothendieckTopology::lazy_generated(CatPtr cat, std::string name,
                                                          const Coverage& coverage) {
    GrothendieckTopology j;
    j.name_ = std::move(name);
    j.ops_ = std::make_shared<SieveOps>(std::move(cat));
    j.mode_ = Mode::Lazy;
    j.lazy_ = std::make_shared<LazyData>();
    const auto& c = *j.ops_->category();

    // Saturate generators under pullback: pullbacks of saturated generators
    // are again of the form (f∘g)*(gen), so one sweep over all arrows closes.
    std::vector<std::set<Sieve>> sat(c.object_count());
    for (const auto& [obj, family] : coverage.families) {
        Sieve gen = j.ops_->generated(obj, family);
        sat[obj].insert(gen);
        for (int f : c.arrows_into(obj)) sat[c.src(f)].insert(j.ops_->pullback(gen, f));
    }
    j.lazy_->saturated_generators.resize(c.object_count());
    for (int x = 0; x < c.object_count(); ++x)
        j.lazy_->saturated_generators[x] = {sat[x].begin(), sat[x].end()};
    return j;
}

GrothendieckTopology GrothendieckTopology::canonical(CatPtr preorder_cat) {
    if (!preorder_cat->is_preorder())
        throw InputError("canonical topology: base '" + preorder_cat->name() + "' is not a preorder");
    return predicate(std::move(preorder_cat), "canonical", [](const SieveOps& ops, const Sieve& s) {
        // covers iff the object is a least upper bound of the sieve's domains
        const auto& c = *ops.category();
        const auto& into = c.arrows_into(s.obj);
        for (int u = 0; u < c.object_count(); ++u) {
            bool upper = true;
            for (int i = s.bits.next(); i >= 0 && upper; i = s.bits.next(i + 1))
                upper = !c.hom(c.src(into[i]), u).empty();
            if (upper && c.hom(s.obj, u).empty()) return false;
        }
        return true;
    });
}

bool GrothendieckTopology::covers(const Sieve& s) const {
    switch (mode_) {
        case Mode::Enumerated: {
            const auto& list = (*covers_)[s.obj];
            return std::binary_search(list.begin(), list.end(), s.bits);
        }
        case Mode::Predicate: {
            auto key = std::make_pair(s.obj, s.bits);
            auto it = pred_->memo.find(key);
            if (it != pred_->memo.end()) return it->second;
            bool r = pred_->fn(*ops_, s);
            pred_->memo.emplace(std::move(key), r);
            return r;
        }
        case Mode::Lazy: {
            bool used_assumption = false;
            return lazy_covers(s, used_assumption);
        }
    }
    return false;
}

bool GrothendieckTopology::lazy_covers(const Sieve& s, bool& used_assumption) const {
    auto key = std::make_pair(s.obj, s.bits);
    if (auto it = lazy_->memo.find(key); it != lazy_->memo.end()) return it->second;
    if (lazy_->visiting.count(key)) {
        used_assumption = true;  // least-fixpoint: assume false on cycles
        return false;
    }
    if (s.bits == ops_->maximal(s.obj).bits) {
        lazy_->memo.emplace(key, true);
        return true;
    }
    lazy_->visiting.insert(key);
    bool result = false;
    bool my_assumption = false;
    for (const auto& gen : lazy_->saturated_generators[s.obj]) {
        bool all = true;
        const auto& into = ops_->category()->arrows_into(s.obj);
        for (int i = gen.bits.next(); i >= 0 && all; i = gen.bits.next(i + 1))
            all = lazy_covers(ops_->pullback(s, into[i]), my_assumption);
        if (all) {
            result = true;
            break;
        }
    }
    lazy_->visiting.erase(key);
    if (result) {
        lazy_->memo.emplace(key, true);
    } else if (!my_assumption) {
        lazy_->memo.emplace(key, false);  // conclusively false
    } else {
        used_assumption = true;
    }
    return result;
}

bool GrothendieckTopology::covers_family(int obj, const std::vector<int>& arrows) const {
    return covers(ops_->generated(obj, arrows));
}

const std::vector<Bits>& GrothendieckTopology::covering_sieves(int obj) const {
    if (mode_ != Mode::Enumerated)
        throw InputError("covering_sieves: topology '" + name_ + "' is not enumerated");
    return (*covers_)[obj];
}

GrothendieckTopology generate_topology(CatPtr cat, const Coverage& coverage, const Guards& guards) {
    auto ops = std::make_shared<SieveOps>(cat);

    bool within_guard = true;
    for (int x = 0; x < cat->object_count(); ++x)
        if (static_cast<int>(cat->arrows_into(x).size()) > guards.sieve_enumeration) within_guard = false;

    if (!within_guard) return GrothendieckTopology::lazy_generated(cat, "generated(lazy)", coverage);

    const auto& c = *cat;
    std::vector<std::vector<Bits>> sieves(c.object_count());
    std::vector<std::vector<bool>> covering(c.object_count());
    for (int x = 0; x < c.object_count(); ++x) {
        sieves[x] = ops->enumerate(x, guards.sieve_enumeration);
        covering[x].assign(sieves[x].size(), false);
    }
    auto index_of = [&](int x, const Bits& b) {
        const auto& v = sieves[x];
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), b) - v.begin());
    };
    auto mark = [&](int x, const Bits& b) -> bool {
        int i = index_of(x, b);
        if (covering[x][i]) return false;
        covering[x][i] = true;
        return true;
    };

    for (int x = 0; x < c.object_count(); ++x) mark(x, ops->maximal(x).bits);
    for (const auto& [obj, family] : coverage.families) mark(obj, ops->generated(obj, family).bits);

    bool changed = true;
    while (changed) {
        changed = false;
        // pullback stability
        for (int x = 0; x < c.object_count(); ++x) {
            const auto& into = c.arrows_into(x);
            for (std::size_t si = 0; si < sieves[x].size(); ++si) {
                if (!covering[x][si]) continue;
                Sieve s{x, sieves[x][si]};
                for (int f : into) {
                    Sieve pb = ops->pullback(s, f);
                    if (mark(c.src(f), pb.bits)) changed = true;
                }
            }
        }
        // local character
        for (int x = 0; x < c.object_count(); ++x) {
            const auto& into = c.arrows_into(x);
            for (std::size_t si = 0; si < sieves[x].size(); ++si) {
                if (covering[x][si]) continue;
                Sieve s{x, sieves[x][si]};
                Bits locally(static_cast<int>(into.size()));
                for (std::size_t i = 0; i < into.size(); ++i) {
                    Sieve pb = ops->pullback(s, into[i]);
                    int pi = index_of(c.src(into[i]), pb.bits);
                    if (covering[c.src(into[i])][pi]) locally.set(static_cast<int>(i));
                }
                for (std::size_t ri = 0; ri < sieves[x].size(); ++ri) {
                    if (!covering[x][ri]) continue;
                    if (sieves[x][ri].subset_of(locally)) {
                        covering[x][si] = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    std::vector<std::set<Bits>> result(c.object_count());
    for (int x = 0; x < c.object_count(); ++x)
        for (std::size_t si = 0; si < sieves[x].size(); ++si)
            if (covering[x][si]) result[x].insert(sieves[x][si]);
    auto j = GrothendieckTopology::enumerated(cat, "generated", std::move(result));
    return j;
}

Sieve close_sieve(const GrothendieckTopology& j, const Sieve& s) {
    const auto& ops = j.ops();
    const auto& c = *j.base();
    if (!ops.is_sieve(s)) throw InputError("close_sieve: input is not a sieve");
    const auto& into = c.arrows_into(s.obj);
    Sieve r = ops.empty(s.obj);
    for (std::size_t i = 0; i < into.size(); ++i)
        if (j.covers(ops.pullback(s, into[i]))) r.bits.set(static_cast<int>(i));
    return r;
}

VerificationReport validate_topology(const GrothendieckTopology& j, const Guards& guards) {
    VerificationReport report;
    const auto& ops = j.ops();
    const auto& c = *j.base();

    auto& maximality = report.add("topology-maximality", "the maximal sieve covers every object");
    auto& stability = report.add("topology-stability", "pullbacks of covering sieves cover");
    auto& transitivity = report.add("topology-transitivity", "locally covering sieves cover");

    bool sampled = false;
    for (int x = 0; x < c.object_count(); ++x) {
        std::vector<Bits> pool;
        const auto& into = c.arrows_into(x);
        if (static_cast<int>(into.size()) <= guards.sieve_enumeration) {
            pool = ops.enumerate(x, guards.sieve_enumeration);
        } else {
            sampled = true;
            Rng rng(guards.seed ^ (0x9e3779b97f4a7c15ull * (x + 1)));
            std::set<Bits> samples;
            samples.insert(ops.maximal(x).bits);
            samples.insert(ops.empty(x).bits);
            for (int t = 0; t < guards.sample_budget; ++t) {
                Sieve s = ops.empty(x);
                for (int i = 0; i < s.bits.size(); ++i)
                    if (rng.next() & 1) s.bits.set(i);
                ops.saturate(s);
                samples.insert(s.bits);
            }
            pool.assign(samples.begin(), samples.end());
        }

        if (!j.covers(ops.maximal(x))) {
            maximality.status = Status::Fail;
            maximality.witnesses.push_back(Witness{}.with("object", c.object_id(x)));
        }

        std::vector<bool> is_covering(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) is_covering[i] = j.covers(Sieve{x, pool[i]});

        for (std::size_t si = 0; si < pool.size(); ++si) {
            Sieve s{x, pool[si]};
            if (is_covering[si]) {
                if (stability.status != Status::Pass) continue;
                for (int f : into) {
                    if (!j.covers(ops.pullback(s, f))) {
                        stability.status = Status::Fail;
                        stability.witnesses.push_back(Witness{}
                                                          .with("object", c.object_id(x))
                                                          .with("sieve", ops.render(s))
                                                          .with("arrow", c.arrow_id(f)));
                        break;
                    }
                }
            } else {
                if (transitivity.status != Status::Pass) continue;
                Bits locally(static_cast<int>(into.size()));
                for (std::size_t i = 0; i < into.size(); ++i)
                    if (j.covers(ops.pullback(s, into[i]))) locally.set(static_cast<int>(i));
                for (std::size_t ri = 0; ri < pool.size(); ++ri) {
                    if (!is_covering[ri]) continue;
                    if (pool[ri].subset_of(locally)) {
                        transitivity.status = Status::Fail;
                        transitivity.witnesses.push_back(Witness{}
                                                             .with("object", c.object_id(x))
                                                             .with("sieve", ops.render(s))
                                                             .with("refining", ops.render(Sieve{x, pool[ri]})));
                        break;
                    }
                }
            }
        }
    }

    if (sampled)
        for (auto& check : report.checks)
            if (check.status == Status::Pass) {
                check.status = Status::Sampled;
                check.note = "sieve-enumeration guard exceeded, sampled sieves only";
            }
    return report;
}

GrothendieckTopology materialize(const GrothendieckTopology& j, int guard) {
    if (j.mode() == GrothendieckTopology::Mode::Enumerated) return j;
    const auto& c = *j.base();
    const auto& ops = j.ops();
    std::vector<std::set<Bits>> covers(c.object_count());
    for (int x = 0; x < c.object_count(); ++x)
        for (const auto& bits : ops.enumerate(x, guard))
            if (j.covers(Sieve{x, bits})) covers[x].insert(bits);
    return GrothendieckTopology::enumerated(j.base(), j.name() + "(materialized)", std::move(covers));
}

std::vector<Bits> sieve_pool(const SieveOps& ops, int obj, const Guards& guards, bool* sampled) {
    const auto& c = *ops.category();
    if (static_cast<int>(c.arrows_into(obj).size()) <= guards.sieve_enumeration)
        return ops.enumerate(obj, guards.sieve_enumeration);
    if (sampled) *sampled = true;
    Rng rng(guards.seed ^ (0xd1b54a32d192ed03ull * (obj + 1)));
    std::set<Bits> samples;
    samples.insert(ops.maximal(obj).bits);
    samples.insert(ops.empty(obj).bits);
    for (int t = 0; t < guards.sample_budget; ++t) {
        Sieve s = ops.empty(obj);
        for (int i = 0; i < s.bits.size(); ++i)
            if (rng.next() & 1) s.bits.set(i);
        ops.saturate(s);
        samples.insert(s.bits);
    }
    return {samples.begin(), samples.end()};
}

bool topology_contained(const GrothendieckTopology& a, const GrothendieckTopology& b, int guard) {
    if (a.base() != b.base()) throw InputError("topology_contained: different base categories");
    const auto& c = *a.base();
    for (int x = 0; x < c.object_count(); ++x)
        for (const auto& bits : a.ops().enumerate(x, guard)) {
            Sieve s{x, bits};
            if (a.covers(s) && !b.covers(s)) return false;
        }
    return true;
}

}  // namespace sitekit
