#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sitekit/bits.hpp"
#include "sitekit/category.hpp"

namespace sitekit {

/// A sieve on an object: a precomposition-closed set of arrows into it,
/// stored as a bitset over the fixed per-object arrow ordering
/// (lexicographic by arrow identifier).
struct Sieve {
    int obj = -1;
    Bits bits;

    bool operator==(const Sieve&) const = default;
    auto operator<=>(const Sieve&) const = default;
};

/// Precomposition tables for sieve arithmetic on one category.
class SieveOps {
public:
    explicit SieveOps(CatPtr cat);

    const CatPtr& category() const { return cat_; }

    Sieve empty(int obj) const;
    Sieve maximal(int obj) const;
    /// Sieve generated by the given arrows (arrow indices with target obj).
    Sieve generated(int obj, const std::vector<int>& arrows) const;

    bool is_sieve(const Sieve& s) const;
    /// Closes s under precomposition, in place.
    void saturate(Sieve& s) const;
    /// f*(s) for an arrow f with target s.obj; the result lives on src(f).
    Sieve pullback(const Sieve& s, int f) const;

    /// Every sieve on obj, sorted; throws GuardError("sieve-enumeration")
    /// when more than `guard` arrows point into obj.
    std::vector<Bits> enumerate(int obj, int guard) const;

    std::string render(const Sieve& s) const;  // "{f, g}" for witnesses

private:
    CatPtr cat_;
    // precomp_[x][i][j] = position in arrows_into(x) of into(x)[i] ∘ into(src into(x)[i])[j]
    std::vector<std::vector<std::vector<int>>> precomp_;
};

using OpsPtr = std::shared_ptr<const SieveOps>;

/// Per-object families of arrows used to generate a topology.
struct Coverage {
    // (object, generating family of arrows into it)
    std::vector<std::pair<int, std::vector<int>>> families;
};

/// A Grothendieck topology, in one of three representations:
///  - Enumerated: covering sieves listed per object (canonical form);
///  - Lazy: generated from a coverage, membership decided on demand;
///  - Predicate: an arbitrary covering oracle (used for derived topologies).
class GrothendieckTopology {
public:
    GrothendieckTopology() = default;  // empty; assign before use

    enum class Mode { Enumerated, Lazy, Predicate };

    static GrothendieckTopology trivial(CatPtr cat, std::string name = "trivial");
    static GrothendieckTopology enumerated(CatPtr cat, std::string name,
                                           std::vector<std::set<Bits>> covers);
    static GrothendieckTopology predicate(CatPtr cat, std::string name,
                                          std::function<bool(const SieveOps&, const Sieve&)> fn);
    /// Lazy generated topology: membership decided by the least-fixpoint
    /// refinement rule over the pullback-saturated generator sieves.
    static GrothendieckTopology lazy_generated(CatPtr cat, std::string name,
                                               const Coverage& coverage);
    /// The canonical topology of a preorder: a sieve covers x iff x is a
    /// least upper bound of the sieve's domains. (A topology for frames;
    /// validate_topology gives the verdict elsewhere.)
    static GrothendieckTopology canonical(CatPtr preorder_cat);

    const CatPtr& base() const { return ops_->category(); }
    const SieveOps& ops() const { return *ops_; }
    const OpsPtr& ops_ptr() const { return ops_; }
    Mode mode() const { return mode_; }
    const std::string& name() const { return name_; }
    void rename(std::string n) { name_ = std::move(n); }

    bool covers(const Sieve& s) const;
    bool covers_family(int obj, const std::vector<int>& arrows) const;

    /// Enumerated mode only: the covering sieves on an object, sorted.
    const std::vector<Bits>& covering_sieves(int obj) const;

private:

    struct LazyData {
        std::vector<std::vector<Sieve>> saturated_generators;  // per object
        mutable std::map<std::pair<int, Bits>, bool> memo;
        mutable std::set<std::pair<int, Bits>> visiting;
    };
    struct PredicateData {
        std::function<bool(const SieveOps&, const Sieve&)> fn;
        mutable std::map<std::pair<int, Bits>, bool> memo;
    };

    bool lazy_covers(const Sieve& s, bool& used_assumption) const;

    std::string name_;
    OpsPtr ops_;
    Mode mode_ = Mode::Enumerated;
    std::shared_ptr<std::vector<std::vector<Bits>>> covers_;
    std::shared_ptr<LazyData> lazy_;
    std::shared_ptr<PredicateData> pred_;
};

/// Size guards with the documented defaults.
struct Guards {
    int sieve_enumeration = 20;
    int subpresheaf_sections = 16;
    int preorder_ideals = 14;
    long long functor_search = 1'000'000;
    int sample_budget = 200;
    std::uint64_t seed = 1;
};

/// Least topology containing the coverage: enumerated fixpoint when every
/// object is within the sieve-enumeration guard, lazy fallback otherwise.
GrothendieckTopology generate_topology(CatPtr cat, const Coverage& coverage,
                                       const Guards& guards = {});

/// {f into cod(s) | f*(s) covering}: extensive, monotone, idempotent.
Sieve close_sieve(const GrothendieckTopology& j, const Sieve& s);

/// The three topology axioms, exhaustively within the guard, sampled beyond.
VerificationReport validate_topology(const GrothendieckTopology& j, const Guards& guards = {});

/// Materializes any topology as an enumerated one (guard applies).
GrothendieckTopology materialize(const GrothendieckTopology& j, int guard);

/// True when every covering sieve of `a` covers in `b` (same base).
/// Exhaustive within the guard; only meaningful for enumerable bases.
bool topology_contained(const GrothendieckTopology& a, const GrothendieckTopology& b, int guard);

/// All sieves on obj when within the guard; otherwise `sample_budget`
/// random closures plus the empty and maximal sieves, with *sampled set.
std::vector<Bits> sieve_pool(const SieveOps& ops, int obj, const Guards& guards, bool* sampled);

}  // namespace sitekit
