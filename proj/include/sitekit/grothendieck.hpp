#pragma once

#include "sitekit/indexed.hpp"
#include "sitekit/limits.hpp"
#include "sitekit/topology.hpp"

namespace sitekit {

/// The total category of an indexed category: objects (c, x) with x in
/// fibre(c), arrows (f, α) : (c', x') -> (c, x) with f : c' -> c in the base
/// and α : x' -> transition(f)(x) in fibre(c'). Identifiers are "<c>@<x>"
/// and "<f>@<α>".
class GrothTotal {
public:
    GrothTotal() = default;

    static GrothTotal build(const IndexedCat& d);

    const IndexedCat& indexed() const { return indexed_; }
    const CatPtr& total() const { return total_; }
    const FinFunctor& projection() const { return projection_; }

    int object_of(int base_obj, int fibre_obj) const;
    int arrow_of(int base_arrow, int fibre_arrow) const;
    std::pair<int, int> decode_object(int o) const { return obj_decode_[o]; }
    /// (base arrow f, fibre arrow α over the source's base object)
    std::pair<int, int> decode_arrow(int a) const { return arr_decode_[a]; }

    bool vertical(int arrow) const;
    /// Cartesian universal property, checked by enumeration.
    bool cartesian(int arrow) const;
    /// The canonical cartesian lift (f, 1) : (src f, T_f(x)) -> (tgt f, x).
    int cartesian_lift(int base_arrow, int fibre_obj_at_tgt) const;

private:
    IndexedCat indexed_;
    CatPtr total_;
    FinFunctor projection_;
    std::vector<std::pair<int, int>> obj_decode_;
    std::vector<std::pair<int, int>> arr_decode_;
    std::vector<std::vector<int>> obj_index_;  // [base obj][fibre obj] -> total obj
};

GrothTotal grothendieck_construction(const IndexedCat& d);

/// The smallest topology on the total category making the projection a
/// comorphism of sites to (base, j): generated by the lifts of j-covers.
GrothendieckTopology giraud_topology(const GrothTotal& g, const GrothendieckTopology& j,
                                     const Guards& guards = {});

/// The projection's right adjoint X -> (X, 1) when every fibre has a
/// terminal preserved by the transitions; verified by hom counting.
struct TauResult {
    FinFunctor tau;
    VerificationReport report;
};
TauResult tau_and_adjunction(const GrothTotal& g);

/// A morphism of fibrations: a functor between totals expected to commute
/// with the projections and preserve cartesian arrows.
struct FibMorphism {
    const GrothTotal* source = nullptr;
    const GrothTotal* target = nullptr;
    FinFunctor functor;
};

/// Builds the total-level functor from fibrewise object maps
/// (preorder fibres; fibre arrow maps are derived).
FibMorphism fib_morphism_from_fibre_maps(const GrothTotal& src, const GrothTotal& dst,
                                         const std::vector<std::vector<int>>& object_maps,
                                         std::string name);

/// Projection-commutation and cartesian-arrow preservation; when both sides
/// are fibrewise cartesian with limit-preserving transitions, additionally
/// checks preservation of the terminal object and of all existing pullbacks.
VerificationReport fibration_morphism_report(const FibMorphism& b);

}  // namespace sitekit
