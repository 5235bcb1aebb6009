#pragma once

#include <optional>

#include "sitekit/grothendieck.hpp"
#include "sitekit/site_maps.hpp"

namespace sitekit {

/// Left-adjoint data for one base arrow f : a -> b, against the transition
/// T_f : fibre(b) -> fibre(a). Units and counits are stored, not re-derived,
/// so all transposes are deterministic.
struct Adjoint {
    FinFunctor exists;          // fibre(a) -> fibre(b)
    std::vector<int> unit;      // per x in fibre(a): x -> T_f(∃_f(x)), arrow of fibre(a)
    std::vector<int> counit;    // per y in fibre(b): ∃_f(T_f(y)) -> y, arrow of fibre(b)
};

/// A fibred site with chosen left adjoints: fibre topologies per base
/// object and adjoint data per base arrow. The data may be broken on
/// purpose (mutated fixtures); validate() reports whether the fibred-site
/// and adjunction invariants actually hold.
class ExistentialSite {
public:
    ExistentialSite() = default;
    ExistentialSite(GrothTotal total, std::vector<GrothendieckTopology> fibre_topologies,
                    std::vector<Adjoint> adjoints);

    const GrothTotal& total() const { return total_; }
    const IndexedCat& indexed() const { return total_.indexed(); }
    const CatPtr& base() const { return total_.indexed().base(); }
    const GrothendieckTopology& fibre_topology(int obj) const { return fibre_topologies_[obj]; }
    const Adjoint& adjoint(int base_arrow) const { return adjoints_[base_arrow]; }

    /// Transpose of α : x' -> T_f(y) along ∃_f ⊣ T_f, an arrow
    /// ∃_f(x') -> y of fibre(tgt f); -1 when it does not exist
    /// (possible only for broken adjoint data).
    int transpose(int base_arrow, int alpha, int y) const;

    /// Transpose of a total arrow into (E, l): an arrow of fibre(E) into l.
    int transpose_total(int total_arrow) const;

    /// Fibred-site invariants: cover-preserving transitions and genuine
    /// adjunctions (hom bijections; triangle identities for general fibres).
    VerificationReport validate() const;

private:
    GrothTotal total_;
    std::vector<GrothendieckTopology> fibre_topologies_;
    std::vector<Adjoint> adjoints_;
};

/// Left adjoints by universal-arrow search: the least element of
/// {y | x ≤ T_f(y)} for preorder fibres, an initial object of (x ↓ T_f)
/// in general. Fails with the non-adjointable element as witness.
struct AdjointSearchResult {
    std::optional<ExistentialSite> site;
    VerificationReport report;
};
AdjointSearchResult compute_adjoints(const GrothTotal& total,
                                     std::vector<GrothendieckTopology> fibre_topologies,
                                     const Guards& guards = {});

/// Builds an ExistentialSite from explicit ∃ object tables (e.g. from a
/// bundle); arrow actions are derived (preorder fibres), units/counits are
/// taken canonically when they exist.
ExistentialSite existential_site_from_tables(const GrothTotal& total,
                                             std::vector<GrothendieckTopology> fibre_topologies,
                                             const std::vector<std::vector<int>>& exists_tables);

/// Relative Beck-Chevalley: for every cospan (c : V -> Z, d : W -> Z) and
/// every l in fibre(V), the transposes over commuting spans cover
/// T_d(∃_c(l)) in fibre(W). Cartesian instances are cross-checked against
/// the single-arrow pullback form, and the two verdicts must agree.
VerificationReport check_relative_bc(const ExistentialSite& s, const Guards& guards = {});

/// Relative Frobenius: for every f : E -> E', l in fibre(E) and
/// α : l' -> ∃_f(l), the transposes over commuting spans cover l'.
/// Frame fibres are cross-checked against the equality form
/// ∃_f(T_f(l') ∧ l) = ∃_f(l) ∧ l'.
VerificationReport check_relative_frobenius(const ExistentialSite& s, const Guards& guards = {});

/// The existential covering rule as a predicate topology on the total
/// category: a sieve covers (E, l) iff its transposes generate a covering
/// sieve of fibre(E) on l.
GrothendieckTopology existential_covering(const ExistentialSite& s);

/// Builds the existential topology, validates the axioms, and asserts the
/// biconditional: the axioms hold iff relative BC and relative Frobenius
/// both pass (asserted when the fibred-site hypotheses hold; a mismatch is
/// reported as a toolkit bug).
struct ExtTopologyResult {
    GrothendieckTopology topology;
    VerificationReport report;
    bool axioms_pass = false;
    bool bc_pass = false;
    bool frobenius_pass = false;
};
ExtTopologyResult existential_topology(const ExistentialSite& s, const Guards& guards = {});

/// Derived predicates of the site against a base topology j, with the
/// reflection implications asserted.
struct ExistentialSiteReport {
    VerificationReport report;
    bool open = false;
    bool j_reflecting = false;
    bool reflecting_linearization = false;
    bool prestack = false;
    bool giraud_contained = false;
};
ExistentialSiteReport existential_site_report(const ExistentialSite& s,
                                              const GrothendieckTopology& j,
                                              const Guards& guards = {});

/// Morphism of existential sites over a common base: fibrewise morphisms
/// of sites, ∃-squares commuting (up to isomorphism), and the induced
/// total functor a morphism of sites between the existential topologies.
VerificationReport check_existential_morphism(const ExistentialSite& a, const ExistentialSite& b,
                                              const std::vector<std::vector<int>>& fibre_maps,
                                              const Guards& guards = {});

/// The vertical/cocartesian generation property: the topology generated by
/// fibre-covering vertical families plus singleton unit-arrow lifts equals
/// the existential topology; optionally also checks containment of the
/// lifted base covers along cocartesian arrows (pass j for that part).
VerificationReport check_coorthogonal_generation(const ExistentialSite& s,
                                                 const GrothendieckTopology& ext,
                                                 const GrothendieckTopology* j = nullptr,
                                                 const Guards& guards = {});

/// Cocartesian-then-vertical factorization of a total arrow.
struct CocartVerticalFactorization {
    int cocartesian = -1;
    int vertical = -1;
    VerificationReport report;
};
CocartVerticalFactorization factor_cocartesian_vertical(const ExistentialSite& s, int total_arrow);

bool is_cocartesian(const ExistentialSite& s, int total_arrow);

}  // namespace sitekit
