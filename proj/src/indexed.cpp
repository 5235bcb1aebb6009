#include "sitekit/indexed.hpp"

namespace sitekit {

IndexedCat::IndexedCat(std::string name, CatPtr base, std::vector<CatPtr> fibres,
                       std::vector<FinFunctor> transitions)
    : name_(std::move(name)), base_(std::move(base)), fibres_(std::move(fibres)),
      transitions_(std::move(transitions)) {
    if (static_cast<int>(fibres_.size()) != base_->object_count())
        throw InputError(name_ + ": one fibre per base object required");
    if (static_cast<int>(transitions_.size()) != base_->arrow_count())
        throw InputError(name_ + ": one transition per base arrow required");
    for (int a = 0; a < base_->arrow_count(); ++a) {
        const auto& t = transitions_[a];
        if (t.source() != fibres_[base_->tgt(a)] || t.target() != fibres_[base_->src(a)])
            throw InputError(name_ + ": transition along '" + base_->arrow_id(a) +
                             "' has wrong endpoints (contravariance: fibre(tgt) -> fibre(src))");
    }
}

VerificationReport IndexedCat::validate() const {
    VerificationReport report;
    const auto& b = *base_;

    for (int o = 0; o < b.object_count(); ++o) {
        auto sub = validate_category(*fibres_[o]);
        for (auto& check : sub.checks) check.name = "fibre(" + b.object_id(o) + ")." + check.name;
        report.merge(sub);
    }
    for (int a = 0; a < b.arrow_count(); ++a) {
        auto sub = check_functor(transitions_[a]);
        for (auto& check : sub.checks) check.name = "transition(" + b.arrow_id(a) + ")." + check.name;
        report.merge(sub);
    }

    auto& ident = report.add("indexed-identity", "transitions along identities are identities");
    for (int o = 0; o < b.object_count(); ++o)
        if (!(transitions_[b.identity(o)] == FinFunctor::identity(fibres_[o]))) {
            ident.status = Status::Fail;
            ident.witnesses.push_back(Witness{}.with("object", b.object_id(o)));
            break;
        }

    auto& strict = report.add("indexed-composition",
                              "transition(g∘f) = transition(f)∘transition(g), on the nose");
    for (int g = 0; g < b.arrow_count() && strict.status == Status::Pass; ++g)
        for (int f = 0; f < b.arrow_count(); ++f) {
            if (!b.composable(g, f)) continue;
            auto composite = FinFunctor::compose(transitions_[f], transitions_[g]);
            if (!(transitions_[b.compose(g, f)] == composite)) {
                strict.status = Status::Fail;
                strict.witnesses.push_back(
                    Witness{}.with("g", b.arrow_id(g)).with("f", b.arrow_id(f)));
                break;
            }
        }

    return report;
}

bool IndexedCat::preorder_fibres() const {
    for (const auto& f : fibres_)
        if (!f->is_preorder()) return false;
    return true;
}

}  // namespace sitekit
