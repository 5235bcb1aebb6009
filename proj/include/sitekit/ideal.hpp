#pragma once

#include "sitekit/locale.hpp"

namespace sitekit {

/// The frame of topology-respecting ideals of a preorder: down-closed
/// subsets closed under the declared covers, ordered by inclusion.
struct FrameOfIdeals {
    FiniteFrame frame;
    std::vector<Bits> decode;        // element -> subset of the preorder's objects
    std::vector<int> canonical_map;  // object -> frame element (closure of its downset)
    bool exhaustive = true;
};

FrameOfIdeals ideal_completion(const CatPtr& preorder, const GrothendieckTopology& k,
                               const Guards& guards = {});

/// A fibred preorder site: preorder fibres over a base site, with a
/// topology on the total category containing the lifted base covers.
struct FibredPreorderSite {
    IndexedCat indexed;
    GrothTotal total;
    GrothendieckTopology base_topology;   // on the base
    GrothendieckTopology total_topology;  // on the total category
};

/// The completion of a fibred preorder site into a frame-valued candidate:
/// fibre at c is the frame of closed subobjects of the arrows-to-c
/// presheaf on the total category, with transitions by pullback along
/// postcomposition and ∃ by closure of the direct image; the unit sends x
/// at c to the closure of { g : c' -> c | x' ≤ T_g(x) }.
struct FibredCompletionResult {
    InternalLocaleCandidate locale;
    std::vector<ClosedSubobjectFrame> frames;  // per base object, with decodings
    std::vector<std::vector<int>> unit;        // per base object: fibre element -> locale element
    VerificationReport report;
    bool unit_isomorphism = false;
};

FibredCompletionResult fibred_ideal_completion(const FibredPreorderSite& p,
                                               const Guards& guards = {});

/// Probes the completion's universal property: exactly one indexed frame
/// homomorphism h with h ∘ unit = m. Enumerates fibrewise frame
/// homomorphisms within the search budget; never a false pass.
VerificationReport universal_property_probe(const FibredPreorderSite& p,
                                            const InternalLocaleCandidate& target,
                                            const std::vector<std::vector<int>>& m,
                                            const Guards& guards = {});

}  // namespace sitekit
