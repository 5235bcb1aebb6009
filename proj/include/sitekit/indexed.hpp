#pragma once

#include "sitekit/functor.hpp"

namespace sitekit {

/// A strict indexed category: fibres per base object, a transition functor
/// per base arrow, contravariant and composing on the nose.
class IndexedCat {
public:
    IndexedCat() = default;
    IndexedCat(std::string name, CatPtr base, std::vector<CatPtr> fibres,
               std::vector<FinFunctor> transitions);

    const std::string& name() const { return name_; }
    const CatPtr& base() const { return base_; }
    const CatPtr& fibre(int obj) const { return fibres_[obj]; }
    /// Transition along a base arrow f : a -> b, a functor fibre(b) -> fibre(a).
    const FinFunctor& transition(int arrow) const { return transitions_[arrow]; }

    /// Strictness: transition(id) = id, transition(g∘f) = transition(f)∘transition(g).
    VerificationReport validate() const;

    bool preorder_fibres() const;

private:
    std::string name_;
    CatPtr base_;
    std::vector<CatPtr> fibres_;
    std::vector<FinFunctor> transitions_;
};

}  // namespace sitekit
