#pragma once

#include "sitekit/functor.hpp"
#include "sitekit/topology.hpp"

namespace sitekit {

/// Morphism-of-sites side predicates for F : (C, J) -> (D, K).
/// "Morphism of sites" is operationalized as cover-preserving +
/// covering-flat; covering-flatness is checked through the local
/// factorization criterion for the empty, binary-discrete and
/// parallel-pair diagram shapes.
struct SiteFunctorReport {
    VerificationReport report;
    bool cover_preserving = false;
    bool covering_flat = false;
    bool dense = false;     // w.r.t. K, image generates covers
    bool full = false;      // local form, w.r.t. J
    bool faithful = false;  // local (sieve-of-agreement) form, w.r.t. J

    bool morphism_of_sites() const { return cover_preserving && covering_flat; }
};

SiteFunctorReport site_morphism_report(const FinFunctor& f, const GrothendieckTopology& j,
                                       const GrothendieckTopology& k, const Guards& guards = {});

/// Comorphism side predicates for F : (D, K) -> (C, J).
struct ComorphismReport {
    VerificationReport report;
    bool cover_lifting = false;
    bool cover_reflecting = false;
    bool closed_sieve_lifting = false;
    bool open_criterion = false;
};

ComorphismReport comorphism_report(const FinFunctor& f, const GrothendieckTopology& k,
                                   const GrothendieckTopology& j, const Guards& guards = {});

/// Just the cover-preservation flag of F : (C, J) -> (D, K).
bool cover_preserving(const FinFunctor& f, const GrothendieckTopology& j,
                      const GrothendieckTopology& k, const Guards& guards, Witness* witness);

/// The topology induced on A by K along q : A -> B: a sieve covers iff the
/// sieve generated by its image covers.
GrothendieckTopology induced_topology(const FinFunctor& q, const GrothendieckTopology& k,
                                      std::string name);

}  // namespace sitekit
