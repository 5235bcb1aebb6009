#pragma once

#include "sitekit/frame.hpp"
#include "sitekit/functor.hpp"
#include "sitekit/topology.hpp"

namespace sitekit {

class FinPresheaf;
using PshPtr = std::shared_ptr<const FinPresheaf>;

/// A finite presheaf: a set of sections per object, a restriction map per
/// arrow (contravariant: an arrow f : a -> b restricts P(b) -> P(a)).
class FinPresheaf {
public:
    static PshPtr make(std::string name, CatPtr base,
                       std::vector<std::vector<std::string>> sections,
                       std::vector<std::vector<int>> restrictions);

    const std::string& name() const { return name_; }
    const CatPtr& base() const { return base_; }

    int section_count(int obj) const { return static_cast<int>(sections_[obj].size()); }
    int total_sections() const;
    const std::string& section_id(int obj, int s) const { return sections_[obj][s]; }
    int section_index(int obj, const std::string& id) const;

    /// P(f)(s) for f : a -> b and s a section index at b; result is at a.
    int restrict(int arrow, int section) const { return restrictions_[arrow][section]; }

private:
    std::string name_;
    CatPtr base_;
    std::vector<std::vector<std::string>> sections_;
    std::vector<std::vector<int>> restrictions_;
};

VerificationReport validate_presheaf(const FinPresheaf& p);

/// Hom_target(p(-), c) as a presheaf on the source of p; sections at d are
/// target arrows p(d) -> c (named by their arrow identifiers), restriction
/// is precomposition with p(g).
PshPtr hom_presheaf(const FinFunctor& p, int c);

/// A subpresheaf: per-object section subsets, closed under restriction.
struct Subpresheaf {
    PshPtr ambient;
    std::vector<Bits> sections;  // per object

    bool operator==(const Subpresheaf& o) const { return sections == o.sections; }
    auto operator<=>(const Subpresheaf& o) const { return sections <=> o.sections; }
};

Subpresheaf full_subpresheaf(const PshPtr& p);
Subpresheaf empty_subpresheaf(const PshPtr& p);
bool is_subpresheaf(const Subpresheaf& s);
/// Closes the section sets under restriction, in place.
void saturate_subpresheaf(Subpresheaf& s);

/// K-closure: a section at d joins when its agreement sieve covers.
Subpresheaf close_subpresheaf(const GrothendieckTopology& k, const Subpresheaf& s);

/// The frame of k-closed subpresheaves of p, with element decoding.
/// Exhaustive when the total section count fits the guard, otherwise the
/// generator mode: closures of single-section subpresheaves saturated
/// under binary joins (reaches every closed subobject, as closed
/// subobjects are joins of closures of points).
struct ClosedSubobjectFrame {
    FiniteFrame frame;
    std::vector<Subpresheaf> decode;
    bool exhaustive = true;

    int index_of(const Subpresheaf& s) const;
};

ClosedSubobjectFrame closed_subobject_frame(const GrothendieckTopology& k, const PshPtr& p,
                                            const Guards& guards = {});

/// Separatedness and the sheaf condition, by exhaustive matching-family
/// enumeration over every covering sieve.
struct SheafReport {
    VerificationReport report;
    bool separated = false;
    bool sheaf = false;
};

SheafReport sheaf_report(const GrothendieckTopology& j, const FinPresheaf& p,
                         const Guards& guards = {});

}  // namespace sitekit
