#pragma once

#include "sitekit/existential.hpp"
#include "sitekit/frame.hpp"
#include "sitekit/presheaf.hpp"

namespace sitekit {

/// A frame-valued candidate on a base site, awaiting verification of the
/// internal-locale conditions. Transition and ∃ tables are element maps;
/// frame element indices coincide with the fibre category object indices.
struct InternalLocaleCandidate {
    std::string name;
    CatPtr base;
    GrothendieckTopology base_topology;
    std::vector<FiniteFrame> fibres;                       // per base object
    std::vector<std::vector<int>> transitions;             // per base arrow: fibre(tgt) -> fibre(src)
    std::optional<std::vector<std::vector<int>>> exists;   // per base arrow: fibre(src) -> fibre(tgt)

    /// Left adjoint of a transition computed from the tables:
    /// min { y | x <= T_f(y) }, or -1 when the minimum does not exist.
    std::vector<int> computed_exists(int base_arrow) const;
    const std::vector<int>& transition(int base_arrow) const { return transitions[base_arrow]; }
    std::vector<int> exists_table(int base_arrow) const;

    /// The same data as a fibred site: fibres as poset categories with
    /// their canonical topologies, ∃ from the stored or computed tables.
    ExistentialSite as_existential_site() const;

    /// The underlying set-valued presheaf (sections = frame elements).
    PshPtr underlying_presheaf() const;
};

struct InternalLocaleReport {
    VerificationReport report;
    bool frames_and_homs = false;
    bool sheaf = false;
    bool beck_chevalley = false;  // pullback form
    bool frobenius = false;       // equality form
    bool span_beck_chevalley = false;

    bool internal_locale() const {
        return frames_and_homs && sheaf && beck_chevalley && frobenius;
    }
};

/// All internal-locale conditions, plus the desk-scale equivalence: on
/// cartesian bases with genuine hypotheses, the pullback/equality forms
/// must agree with the relative span forms; a discrepancy is a toolkit bug.
InternalLocaleReport internal_locale_report(const InternalLocaleCandidate& l,
                                            const Guards& guards = {});

}  // namespace sitekit
