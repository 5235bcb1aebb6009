#include "sitekit/existential.hpp"

#include <algorithm>

#include "sitekit/frame.hpp"

namespace sitekit {

ExistentialSite::ExistentialSite(GrothTotal total,
                                 std::vector<GrothendieckTopology> fibre_topologies,
                                 std::vector<Adjoint> adjoints)
    : total_(std::move(total)), fibre_topologies_(std::move(fibre_topologies)),
      adjoints_(std::move(adjoints)) {
    const auto& d = total_.indexed();
    const auto& b = *d.base();
    if (static_cast<int>(fibre_topologies_.size()) != b.object_count())
        throw InputError("existential site: one fibre topology per base object required");
    for (int c = 0; c < b.object_count(); ++c)
        if (fibre_topologies_[c].base() != d.fibre(c))
            throw InputError("existential site: fibre topology over '" + b.object_id(c) +
                             "' lives on the wrong category");
    if (static_cast<int>(adjoints_.size()) != b.arrow_count())
        throw InputError("existential site: one adjoint per base arrow required");
}

int ExistentialSite::transpose(int base_arrow, int alpha, int y) const {
    const auto& d = indexed();
    const auto& b = *base();
    const auto& fib_src = *d.fibre(b.src(base_arrow));
    const auto& fib_tgt = *d.fibre(b.tgt(base_arrow));
    const auto& adj = adjoints_[base_arrow];
    int ex = adj.exists.on_object(fib_src.src(alpha));
    if (fib_tgt.is_preorder()) {
        auto hom = fib_tgt.hom(ex, y);
        return hom.empty() ? -1 : hom[0];
    }
    if (adj.counit[y] < 0) return -1;
    int mapped = adj.exists.on_arrow(alpha);  // ∃_f(x') -> ∃_f(T_f(y))
    return fib_tgt.compose(adj.counit[y], mapped);
}

int ExistentialSite::transpose_total(int total_arrow) const {
    auto [f, alpha] = total_.decode_arrow(total_arrow);
    int l = total_.decode_object(total_.total()->tgt(total_arrow)).second;
    return transpose(f, alpha, l);
}

VerificationReport ExistentialSite::validate() const {
    VerificationReport report;
    const auto& d = indexed();
    const auto& b = *base();

    auto& fibred = report.add("fibred-site", "transitions are cover-preserving fibre to fibre");
    for (int f = 0; f < b.arrow_count(); ++f) {
        Witness w;
        if (!cover_preserving(d.transition(f), fibre_topologies_[b.tgt(f)],
                              fibre_topologies_[b.src(f)], Guards{}, &w)) {
            fibred.status = Status::Fail;
            fibred.witnesses.push_back(w.with("transition", b.arrow_id(f)));
            break;
        }
    }

    auto& adjunction = report.add(
        "adjunction", "Hom(∃_f(x), y) is in bijection with Hom(x, T_f(y)) for every f, x, y");
    for (int f = 0; f < b.arrow_count() && adjunction.status == Status::Pass; ++f) {
        const auto& fib_src = *d.fibre(b.src(f));
        const auto& fib_tgt = *d.fibre(b.tgt(f));
        const auto& adj = adjoints_[f];
        for (int x = 0; x < fib_src.object_count() && adjunction.status == Status::Pass; ++x)
            for (int y = 0; y < fib_tgt.object_count(); ++y) {
                std::size_t up = fib_tgt.hom(adj.exists.on_object(x), y).size();
                std::size_t down = fib_src.hom(x, d.transition(f).on_object(y)).size();
                if (up != down) {
                    adjunction.status = Status::Fail;
                    adjunction.witnesses.push_back(Witness{}
                                                       .with("arrow", b.arrow_id(f))
                                                       .with("x", fib_src.object_id(x))
                                                       .with("y", fib_tgt.object_id(y)));
                    break;
                }
            }
    }

    auto& triangles = report.add("adjunction-triangles", "the unit/counit triangle identities hold");
    for (int f = 0; f < b.arrow_count() && triangles.status == Status::Pass; ++f) {
        const auto& fib_src = *d.fibre(b.src(f));
        const auto& fib_tgt = *d.fibre(b.tgt(f));
        if (fib_src.is_preorder() && fib_tgt.is_preorder()) {
            // order form: x ≤ T_f(∃_f(x)) and ∃_f(T_f(y)) ≤ y
            const auto& adj = adjoints_[f];
            const auto& t = d.transition(f);
            for (int x = 0; x < fib_src.object_count(); ++x)
                if (fib_src.hom(x, t.on_object(adj.exists.on_object(x))).empty()) {
                    triangles.status = Status::Fail;
                    triangles.witnesses.push_back(
                        Witness{}.with("arrow", b.arrow_id(f)).with("unit-at", fib_src.object_id(x)));
                    break;
                }
            for (int y = 0; y < fib_tgt.object_count() && triangles.status == Status::Pass; ++y)
                if (fib_tgt.hom(adj.exists.on_object(t.on_object(y)), y).empty()) {
                    triangles.status = Status::Fail;
                    triangles.witnesses.push_back(
                        Witness{}.with("arrow", b.arrow_id(f)).with("counit-at", fib_tgt.object_id(y)));
                    break;
                }
            continue;
        }
        const auto& adj = adjoints_[f];
        const auto& t = d.transition(f);
        for (int x = 0; x < fib_src.object_count(); ++x) {
            if (adj.unit[x] < 0) {
                triangles.status = Status::Fail;
                triangles.witnesses.push_back(
                    Witness{}.with("arrow", b.arrow_id(f)).with("unit-at", fib_src.object_id(x)));
                break;
            }
            int lhs = fib_tgt.compose(adj.counit[adj.exists.on_object(x)], adj.exists.on_arrow(adj.unit[x]));
            if (lhs != fib_tgt.identity(adj.exists.on_object(x))) {
                triangles.status = Status::Fail;
                triangles.witnesses.push_back(
                    Witness{}.with("arrow", b.arrow_id(f)).with("triangle-at", fib_src.object_id(x)));
                break;
            }
        }
        for (int y = 0; y < fib_tgt.object_count() && triangles.status == Status::Pass; ++y) {
            if (adj.counit[y] < 0) {
                triangles.status = Status::Fail;
                triangles.witnesses.push_back(
                    Witness{}.with("arrow", b.arrow_id(f)).with("counit-at", fib_tgt.object_id(y)));
                break;
            }
            int ty = t.on_object(y);
            int lhs = fib_src.compose(t.on_arrow(adj.counit[y]), adj.unit[ty]);
            if (lhs != fib_src.identity(ty)) {
                triangles.status = Status::Fail;
                triangles.witnesses.push_back(
                    Witness{}.with("arrow", b.arrow_id(f)).with("cotriangle-at", fib_tgt.object_id(y)));
                break;
            }
        }
    }

    return report;
}

AdjointSearchResult compute_adjoints(const GrothTotal& total,
                                     std::vector<GrothendieckTopology> fibre_topologies,
                                     const Guards& guards) {
    AdjointSearchResult out;
    const auto& d = total.indexed();
    const auto& b = *d.base();
    auto& search = out.report.add("adjoint-search", "every transition has a left adjoint");

    std::vector<Adjoint> adjoints(b.arrow_count());
    long long budget = guards.functor_search;
    for (int f = 0; f < b.arrow_count(); ++f) {
        const auto& fib_src = *d.fibre(b.src(f));  // fibre over source of f
        const auto& fib_tgt = *d.fibre(b.tgt(f));
        const auto& t = d.transition(f);

        if (b.is_identity(f)) {
            Adjoint adj;
            adj.exists = FinFunctor::identity(d.fibre(b.src(f)));
            adj.unit.resize(fib_src.object_count());
            adj.counit.resize(fib_src.object_count());
            for (int x = 0; x < fib_src.object_count(); ++x) {
                adj.unit[x] = fib_src.identity(x);
                adj.counit[x] = fib_src.identity(x);
            }
            adjoints[f] = std::move(adj);
            continue;
        }

        // universal arrow (x ↓ T_f) per object x of fibre(src f)
        std::vector<int> eobj(fib_src.object_count(), -1);
        std::vector<int> unit(fib_src.object_count(), -1);
        bool failed = false;
        for (int x = 0; x < fib_src.object_count() && !failed; ++x) {
            for (int y = 0; y < fib_tgt.object_count() && eobj[x] < 0; ++y)
                for (int u : fib_src.hom(x, t.on_object(y))) {
                    if (--budget < 0) {
                        search.status = Status::Inconclusive;
                        search.note = "adjoint search exceeded the functor-search budget";
                        return out;
                    }
                    bool initial = true;
                    for (int y2 = 0; y2 < fib_tgt.object_count() && initial; ++y2)
                        for (int u2 : fib_src.hom(x, t.on_object(y2))) {
                            int count = 0;
                            for (int h : fib_tgt.hom(y, y2))
                                if (fib_src.compose(t.on_arrow(h), u) == u2) ++count;
                            if (count != 1) {
                                initial = false;
                                break;
                            }
                        }
                    if (initial) {
                        eobj[x] = y;
                        unit[x] = u;
                        break;
                    }
                }
            if (eobj[x] < 0) {
                search.status = Status::Fail;
                search.witnesses.push_back(Witness{}
                                               .with("arrow", b.arrow_id(f))
                                               .with("element", fib_src.object_id(x)));
                failed = true;
            }
        }
        if (failed) return out;

        // arrow action and counit through the universal property
        std::vector<int> earr(fib_src.arrow_count(), -1);
        for (int alpha = 0; alpha < fib_src.arrow_count(); ++alpha) {
            int x1 = fib_src.src(alpha), x2 = fib_src.tgt(alpha);
            int want = fib_src.compose(unit[x2], alpha);  // x1 -> T(∃x2)
            for (int h : fib_tgt.hom(eobj[x1], eobj[x2]))
                if (fib_src.compose(t.on_arrow(h), unit[x1]) == want) {
                    earr[alpha] = h;
                    break;
                }
            if (earr[alpha] < 0) {
                search.status = Status::Fail;
                search.witnesses.push_back(Witness{}
                                               .with("arrow", b.arrow_id(f))
                                               .with("fibre-arrow", fib_src.arrow_id(alpha)));
                return out;
            }
        }
        std::vector<int> counit(fib_tgt.object_count(), -1);
        for (int y = 0; y < fib_tgt.object_count(); ++y) {
            int ty = t.on_object(y);
            for (int h : fib_tgt.hom(eobj[ty], y))
                if (fib_src.compose(t.on_arrow(h), unit[ty]) == fib_src.identity(ty)) {
                    counit[y] = h;
                    break;
                }
            if (counit[y] < 0) {
                search.status = Status::Fail;
                search.witnesses.push_back(
                    Witness{}.with("arrow", b.arrow_id(f)).with("element", fib_tgt.object_id(y)));
                return out;
            }
        }

        Adjoint adj;
        adj.exists = FinFunctor("exists_" + b.arrow_id(f), d.fibre(b.src(f)), d.fibre(b.tgt(f)),
                                std::move(eobj), std::move(earr));
        adj.unit = std::move(unit);
        adj.counit = std::move(counit);
        adjoints[f] = std::move(adj);
    }

    out.site = ExistentialSite(total, std::move(fibre_topologies), std::move(adjoints));
    return out;
}

ExistentialSite existential_site_from_tables(const GrothTotal& total,
                                             std::vector<GrothendieckTopology> fibre_topologies,
                                             const std::vector<std::vector<int>>& exists_tables) {
    const auto& d = total.indexed();
    const auto& b = *d.base();
    std::vector<Adjoint> adjoints(b.arrow_count());
    for (int f = 0; f < b.arrow_count(); ++f) {
        const auto& fib_src = *d.fibre(b.src(f));
        const auto& fib_tgt = *d.fibre(b.tgt(f));
        if (!fib_src.is_preorder() || !fib_tgt.is_preorder())
            throw InputError("explicit ∃ tables are supported for preorder fibres only");
        const auto& table = exists_tables[f];
        if (static_cast<int>(table.size()) != fib_src.object_count())
            throw InputError("∃ table along '" + b.arrow_id(f) + "' is not total");
        std::vector<int> earr(fib_src.arrow_count(), -1);
        for (int alpha = 0; alpha < fib_src.arrow_count(); ++alpha) {
            auto hom = fib_tgt.hom(table[fib_src.src(alpha)], table[fib_src.tgt(alpha)]);
            if (hom.empty())
                throw InputError("∃ table along '" + b.arrow_id(f) + "' is not monotone at '" +
                                 fib_src.arrow_id(alpha) + "'");
            earr[alpha] = hom[0];
        }
        Adjoint adj;
        adj.exists = FinFunctor("exists_" + b.arrow_id(f), d.fibre(b.src(f)), d.fibre(b.tgt(f)),
                                table, std::move(earr));
        const auto& t = d.transition(f);
        adj.unit.assign(fib_src.object_count(), -1);
        adj.counit.assign(fib_tgt.object_count(), -1);
        for (int x = 0; x < fib_src.object_count(); ++x) {
            auto hom = fib_src.hom(x, t.on_object(table[x]));
            if (!hom.empty()) adj.unit[x] = hom[0];
        }
        for (int y = 0; y < fib_tgt.object_count(); ++y) {
            auto hom = fib_tgt.hom(table[t.on_object(y)], y);
            if (!hom.empty()) adj.counit[y] = hom[0];
        }
        adjoints[f] = std::move(adj);
    }
    return ExistentialSite(total, std::move(fibre_topologies), std::move(adjoints));
}

namespace {

// Sieve on `target` of fibre(c) generated by a set of fibre arrows (may be empty).
Sieve fibre_sieve(const ExistentialSite& s, int c, int target, const std::vector<int>& arrows) {
    return s.fibre_topology(c).ops().generated(target, arrows);
}

bool hypotheses_hold(const ExistentialSite& s) { return s.validate().ok(); }

}  // namespace

VerificationReport check_relative_bc(const ExistentialSite& s, const Guards& guards) {
    (void)guards;
    VerificationReport report;
    const auto& d = s.indexed();
    const auto& b = *s.base();

    auto& bc = report.add("relative-bc",
                          "transposes over commuting spans cover the transported image");
    auto& agree = report.add("relative-bc-cartesian-agreement",
                             "the span family covers iff the pullback single arrow covers");
    bool cartesian_applicable = hypotheses_hold(s);
    bool agreement_checked = false;

    for (int c = 0; c < b.arrow_count(); ++c)
        for (int dd = 0; dd < b.arrow_count(); ++dd) {
            if (b.tgt(c) != b.tgt(dd)) continue;
            int V = b.src(c), W = b.src(dd);
            const auto& fib_v = *d.fibre(V);
            const auto& fib_w = *d.fibre(W);
            const auto& exists_c = s.adjoint(c).exists;
            for (int l = 0; l < fib_v.object_count(); ++l) {
                int target = d.transition(dd).on_object(exists_c.on_object(l));  // T_d(∃_c l) in fibre(W)

                std::vector<int> members;
                for (int a = 0; a < b.arrow_count(); ++a) {
                    if (b.tgt(a) != V) continue;
                    for (int bb = 0; bb < b.arrow_count(); ++bb) {
                        if (b.tgt(bb) != W || b.src(bb) != b.src(a)) continue;
                        if (b.compose(c, a) != b.compose(dd, bb)) continue;
                        int U = b.src(a);
                        const auto& fib_u = *d.fibre(U);
                        int tal = d.transition(a).on_object(l);  // T_a(l) in fibre(U)
                        if (fib_u.is_preorder() && fib_w.is_preorder()) {
                            // the transpose of T_a(η_c(l)) exists iff ∃_b(T_a l) ≤ target
                            int eb = s.adjoint(bb).exists.on_object(tal);
                            auto hom = fib_w.hom(eb, target);
                            if (!hom.empty()) members.push_back(hom[0]);
                        } else {
                            // χ = T_a(η_c(l)) : T_a(l) -> T_a(T_c(∃_c l)) = T_b(T_d(∃_c l))
                            int eta = s.adjoint(c).unit[l];
                            if (eta < 0) continue;
                            int chi = d.transition(a).on_arrow(eta);
                            int m = s.transpose(bb, chi, target);
                            if (m >= 0) members.push_back(m);
                        }
                    }
                }

                Sieve family = fibre_sieve(s, W, target, members);
                bool family_covers = s.fibre_topology(W).covers(family);
                if (!family_covers && bc.status == Status::Pass) {
                    bc.status = Status::Fail;
                    bc.witnesses.push_back(Witness{}
                                               .with("c", b.arrow_id(c))
                                               .with("d", b.arrow_id(dd))
                                               .with("l", fib_v.object_id(l)));
                }

                if (cartesian_applicable && !fib_w.is_preorder()) continue;
                if (cartesian_applicable) {
                    auto pb = pullback_cone(s.base(), c, dd);
                    if (!pb) continue;
                    agreement_checked = true;
                    int a0 = pb->legs[0], b0 = pb->legs[2];  // legs: to src c, to tgt, to src d
                    int tal = d.transition(a0).on_object(l);
                    int eb = s.adjoint(b0).exists.on_object(tal);
                    auto hom = fib_w.hom(eb, target);
                    bool single_covers =
                        !hom.empty() &&
                        s.fibre_topology(W).covers(fibre_sieve(s, W, target, {hom[0]}));
                    if (single_covers != family_covers && agree.status == Status::Pass) {
                        agree.status = Status::Fail;
                        agree.witnesses.push_back(Witness{}
                                                      .with("c", b.arrow_id(c))
                                                      .with("d", b.arrow_id(dd))
                                                      .with("l", fib_v.object_id(l)));
                    }
                }
            }
        }

    if (!cartesian_applicable) {
        agree.status = Status::Skipped;
        agree.note = "adjunction or fibred-site hypotheses do not hold";
    } else if (!agreement_checked && agree.status == Status::Pass) {
        agree.status = Status::Skipped;
        agree.note = "no cospan has a pullback in the base";
    }
    return report;
}

VerificationReport check_relative_frobenius(const ExistentialSite& s, const Guards& guards) {
    (void)guards;
    VerificationReport report;
    const auto& d = s.indexed();
    const auto& b = *s.base();

    auto& fr = report.add("relative-frobenius",
                          "arrows into an ∃-image are locally representable by ∃-images");
    auto& eq = report.add("frobenius-equality", "∃_f(T_f(l') ∧ l) = ∃_f(l) ∧ l' for frame fibres");
    bool equality_checked = false;

    for (int f = 0; f < b.arrow_count(); ++f) {
        int E = b.src(f), Ep = b.tgt(f);
        const auto& fib_e = *d.fibre(E);
        const auto& fib_ep = *d.fibre(Ep);
        const auto& t = d.transition(f);
        const auto& exists_f = s.adjoint(f).exists;

        for (int l = 0; l < fib_e.object_count(); ++l) {
            int el = exists_f.on_object(l);
            for (int lp = 0; lp < fib_ep.object_count(); ++lp)
                for (int alpha : fib_ep.hom(lp, el)) {
                    std::vector<int> members;
                    for (int m = 0; m < fib_e.object_count(); ++m)
                        for (int rho : fib_e.hom(m, l))
                            for (int delta : fib_e.hom(m, t.on_object(lp))) {
                                if (fib_e.is_preorder() && fib_ep.is_preorder()) {
                                    // rectangle commutes automatically; member is the
                                    // transpose of δ when it exists
                                    auto hom = fib_ep.hom(exists_f.on_object(m), lp);
                                    if (!hom.empty()) members.push_back(hom[0]);
                                } else {
                                    int eta = s.adjoint(f).unit[l];
                                    if (eta < 0) continue;
                                    // rectangle: T_f(α) ∘ δ = η_f(l) ∘ ρ
                                    if (fib_e.compose(t.on_arrow(alpha), delta) !=
                                        fib_e.compose(eta, rho))
                                        continue;
                                    int tr = s.transpose(f, delta, lp);
                                    if (tr >= 0) members.push_back(tr);
                                }
                            }
                    Sieve family = fibre_sieve(s, Ep, lp, members);
                    if (!s.fibre_topology(Ep).covers(family) && fr.status == Status::Pass) {
                        fr.status = Status::Fail;
                        fr.witnesses.push_back(Witness{}
                                                   .with("f", b.arrow_id(f))
                                                   .with("l", fib_e.object_id(l))
                                                   .with("alpha-src", fib_ep.object_id(lp)));
                    }
                }
        }

        // frame-fibre cross-check: the equality form quantified over all l, l'
        if (fib_e.is_preorder() && fib_ep.is_preorder()) {
            FiniteFrame fe, fep;
            bool frames = true;
            try {
                fe = frame_from_poset(fib_e);
                fep = frame_from_poset(fib_ep);
            } catch (const InputError&) {
                frames = false;
            }
            if (frames && validate_frame(fe).ok() && validate_frame(fep).ok()) {
                equality_checked = true;
                // frame element indices coincide with fibre object indices
                // (both orderings are lexicographic on the identifiers)
                for (int l = 0; l < fib_e.object_count() && eq.status == Status::Pass; ++l)
                    for (int lp = 0; lp < fib_ep.object_count(); ++lp) {
                        int tlp = t.on_object(lp);
                        int lhs = exists_f.on_object(fe.meet(tlp, l));
                        int rhs = fep.meet(exists_f.on_object(l), lp);
                        if (lhs != rhs) {
                            eq.status = Status::Fail;
                            eq.witnesses.push_back(Witness{}
                                                       .with("f", b.arrow_id(f))
                                                       .with("l", fib_e.object_id(l))
                                                       .with("l'", fib_ep.object_id(lp)));
                            break;
                        }
                    }
            }
        }
    }

    if (!equality_checked && eq.status == Status::Pass) {
        eq.status = Status::Skipped;
        eq.note = "fibres are not frames";
    } else if (eq.status != Status::Skipped) {
        // the equality form and the span form must agree for frame fibres
        bool span_ok = fr.status == Status::Pass;
        bool eq_ok = eq.status == Status::Pass;
        auto& agree = report.add("relative-frobenius-agreement",
                                 "the span form and the equality form give the same verdict");
        if (!hypotheses_hold(s)) {
            agree.status = Status::Skipped;
            agree.note = "adjunction or fibred-site hypotheses do not hold";
        } else if (span_ok != eq_ok) {
            agree.status = Status::Fail;
            agree.note = "toolkit bug: the two routes disagree";
        }
    }
    return report;
}

GrothendieckTopology existential_covering(const ExistentialSite& s) {
    ExistentialSite copy = s;
    return GrothendieckTopology::predicate(
        s.total().total(), "existential", [copy](const SieveOps& ops, const Sieve& sv) {
            const auto& cat = *ops.category();
            int E = copy.total().decode_object(sv.obj).first;
            int l = copy.total().decode_object(sv.obj).second;
            std::vector<int> members;
            const auto& into = cat.arrows_into(sv.obj);
            for (int i = sv.bits.next(); i >= 0; i = sv.bits.next(i + 1)) {
                int tr = copy.transpose_total(into[i]);
                if (tr >= 0) members.push_back(tr);
            }
            return copy.fibre_topology(E).covers(
                copy.fibre_topology(E).ops().generated(l, members));
        });
}

ExtTopologyResult existential_topology(const ExistentialSite& s, const Guards& guards) {
    ExtTopologyResult out;
    out.topology = existential_covering(s);

    auto validation = validate_topology(out.topology, guards);
    out.axioms_pass = validation.ok();
    out.report.merge(validation);

    auto bc = check_relative_bc(s, guards);
    out.bc_pass = bc.find("relative-bc")->status == Status::Pass;
    out.report.merge(bc);
    auto fr = check_relative_frobenius(s, guards);
    out.frobenius_pass = fr.find("relative-frobenius")->status == Status::Pass;
    out.report.merge(fr);

    auto& bicond = out.report.add(
        "existential-biconditional",
        "the covering rule is a topology iff relative BC and relative Frobenius hold");
    if (!hypotheses_hold(s)) {
        bicond.status = Status::Skipped;
        bicond.note = "fibred-site or adjunction hypotheses do not hold";
    } else if (!validation.exhaustive()) {
        bicond.status = Status::Inconclusive;
        bicond.note = "topology validation was sampled";
    } else if (out.axioms_pass != (out.bc_pass && out.frobenius_pass)) {
        bicond.status = Status::Fail;
        bicond.note = "toolkit bug: axiom validation disagrees with the relative conditions";
    }
    return out;
}

namespace {

// -1 when the closed sieve is not generated by a single arrow;
// otherwise the smallest generating arrow.
int principal_generator(const SieveOps& ops, const Sieve& s) {
    const auto& c = *ops.category();
    const auto& into = c.arrows_into(s.obj);
    for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1))
        if (ops.generated(s.obj, {into[i]}).bits == s.bits) return into[i];
    return -1;
}

}  // namespace

ExistentialSiteReport existential_site_report(const ExistentialSite& s,
                                              const GrothendieckTopology& j,
                                              const Guards& guards) {
    ExistentialSiteReport out;
    const auto& d = s.indexed();
    const auto& b = *s.base();
    if (j.base() != d.base())
        throw InputError("existential_site_report: base topology on the wrong category");

    bool sampled = false;

    {
        auto& check = out.report.add("open", "every ∃_f is cover-preserving");
        out.open = true;
        for (int f = 0; f < b.arrow_count(); ++f) {
            Witness w;
            if (!cover_preserving(s.adjoint(f).exists, s.fibre_topology(b.src(f)),
                                  s.fibre_topology(b.tgt(f)), guards, &w)) {
                out.open = false;
                check.status = Status::Fail;
                check.witnesses.push_back(w.with("arrow", b.arrow_id(f)));
                break;
            }
        }
    }

    {
        auto& check = out.report.add(
            "prestack", "the fibre order is reflected along covering sieves of the base");
        if (!d.preorder_fibres()) {
            check.status = Status::Skipped;
            check.note = "descent for general fibres is not checked";
        } else {
            out.prestack = true;
            for (int c = 0; c < b.object_count() && out.prestack; ++c) {
                const auto& fib = *d.fibre(c);
                for (const auto& bits : sieve_pool(j.ops(), c, guards, &sampled)) {
                    Sieve cover{c, bits};
                    if (!j.covers(cover)) continue;
                    const auto& into = b.arrows_into(c);
                    for (int x = 0; x < fib.object_count() && out.prestack; ++x)
                        for (int y = 0; y < fib.object_count(); ++y) {
                            if (!fib.hom(x, y).empty()) continue;
                            bool locally = true;
                            for (int i = cover.bits.next(); i >= 0 && locally;
                                 i = cover.bits.next(i + 1)) {
                                const auto& t = d.transition(into[i]);
                                locally = !d.fibre(b.src(into[i]))
                                               ->hom(t.on_object(x), t.on_object(y))
                                               .empty();
                            }
                            if (locally) {
                                out.prestack = false;
                                check.status = Status::Fail;
                                check.witnesses.push_back(Witness{}
                                                              .with("object", b.object_id(c))
                                                              .with("sieve", j.ops().render(cover))
                                                              .with("x", fib.object_id(x))
                                                              .with("y", fib.object_id(y)));
                                break;
                            }
                        }
                }
            }
        }
    }

    {
        auto& check = out.report.add("reflecting-linearization",
                                     "closed fibre sieves are principal and transitions "
                                     "preserve the generators");
        out.reflecting_linearization = true;
        for (int c = 0; c < b.object_count() && out.reflecting_linearization; ++c) {
            const auto& kc = s.fibre_topology(c);
            const auto& fib = *d.fibre(c);
            for (int y = 0; y < fib.object_count() && out.reflecting_linearization; ++y)
                for (const auto& bits : sieve_pool(kc.ops(), y, guards, &sampled)) {
                    Sieve sv{y, bits};
                    Sieve closed = close_sieve(kc, sv);
                    if (closed.bits != sv.bits) continue;
                    if (principal_generator(kc.ops(), sv) < 0) {
                        out.reflecting_linearization = false;
                        check.status = Status::Fail;
                        check.witnesses.push_back(Witness{}
                                                      .with("fibre", b.object_id(c))
                                                      .with("object", fib.object_id(y))
                                                      .with("closed-sieve", kc.ops().render(sv)));
                        break;
                    }
                }
        }
        // generator preservation along transitions (preorder fibres: compare
        // domains up to isomorphism)
        for (int f = 0; f < b.arrow_count() && out.reflecting_linearization; ++f) {
            const auto& from = *d.fibre(b.tgt(f));
            const auto& to = *d.fibre(b.src(f));
            if (!from.is_preorder() || !to.is_preorder()) {
                check.status = Status::Inconclusive;
                check.note = "generator preservation checked for preorder fibres only";
                break;
            }
            const auto& kfrom = s.fibre_topology(b.tgt(f));
            const auto& kto = s.fibre_topology(b.src(f));
            const auto& t = d.transition(f);
            for (int y = 0; y < from.object_count() && out.reflecting_linearization; ++y)
                for (const auto& bits : sieve_pool(kfrom.ops(), y, guards, &sampled)) {
                    Sieve sv{y, bits};
                    int gen = principal_generator(kfrom.ops(), close_sieve(kfrom, sv));
                    if (gen < 0) continue;  // already reported above
                    // image sieve on T_f(y)
                    std::vector<int> image;
                    const auto& into = from.arrows_into(y);
                    for (int i = sv.bits.next(); i >= 0; i = sv.bits.next(i + 1))
                        image.push_back(t.on_arrow(into[i]));
                    Sieve img = kto.ops().generated(t.on_object(y), image);
                    int igen = principal_generator(kto.ops(), close_sieve(kto, img));
                    if (igen < 0) {
                        out.reflecting_linearization = false;
                        check.status = Status::Fail;
                        check.witnesses.push_back(Witness{}
                                                      .with("transition", b.arrow_id(f))
                                                      .with("object", from.object_id(y)));
                        break;
                    }
                    int want = t.on_object(from.src(gen));
                    int got = to.src(igen);
                    if (to.hom(want, got).empty() || to.hom(got, want).empty()) {
                        out.reflecting_linearization = false;
                        check.status = Status::Fail;
                        check.witnesses.push_back(Witness{}
                                                      .with("transition", b.arrow_id(f))
                                                      .with("object", from.object_id(y))
                                                      .with("generator", from.arrow_id(gen)));
                        break;
                    }
                }
        }
    }

    {
        auto& check = out.report.add(
            "j-reflecting", "fibre families covering locally along a base cover are covering");
        out.j_reflecting = true;
        for (int c = 0; c < b.object_count() && out.j_reflecting; ++c) {
            const auto& fib = *d.fibre(c);
            const auto& kc = s.fibre_topology(c);
            std::vector<Bits> base_covers;
            for (const auto& bits : sieve_pool(j.ops(), c, guards, &sampled))
                if (j.covers(Sieve{c, bits})) base_covers.push_back(bits);
            const auto& into = b.arrows_into(c);
            for (int y = 0; y < fib.object_count() && out.j_reflecting; ++y)
                for (const auto& tbits : sieve_pool(kc.ops(), y, guards, &sampled)) {
                    Sieve t{y, tbits};
                    if (kc.covers(t)) continue;
                    for (const auto& sbits : base_covers) {
                        bool locally = true;
                        for (int i = sbits.next(); i >= 0 && locally; i = sbits.next(i + 1)) {
                            const auto& tr = d.transition(into[i]);
                            std::vector<int> image;
                            const auto& finto = fib.arrows_into(y);
                            for (int q = t.bits.next(); q >= 0; q = t.bits.next(q + 1))
                                image.push_back(tr.on_arrow(finto[q]));
                            const auto& kdom = s.fibre_topology(b.src(into[i]));
                            locally = kdom.covers(kdom.ops().generated(tr.on_object(y), image));
                        }
                        if (locally) {
                            out.j_reflecting = false;
                            check.status = Status::Fail;
                            check.witnesses.push_back(Witness{}
                                                          .with("object", b.object_id(c))
                                                          .with("fibre-object", fib.object_id(y))
                                                          .with("family", kc.ops().render(t)));
                            break;
                        }
                    }
                }
        }
    }

    {
        auto& check = out.report.add("giraud-contained",
                                     "lifts of base covers are existential covers");
        out.giraud_contained = true;
        auto ext = existential_covering(s);
        const auto& cat = *s.total().total();
        for (int o = 0; o < cat.object_count() && out.giraud_contained; ++o) {
            auto [c, x] = s.total().decode_object(o);
            (void)x;
            for (const auto& bits : sieve_pool(j.ops(), c, guards, &sampled)) {
                Sieve cover{c, bits};
                if (!j.covers(cover)) continue;
                Sieve lifted = ext.ops().empty(o);
                const auto& into = cat.arrows_into(o);
                for (std::size_t i = 0; i < into.size(); ++i) {
                    int f = s.total().projection().on_arrow(into[i]);
                    if (cover.bits.test(b.into_position(f))) lifted.bits.set(static_cast<int>(i));
                }
                if (!ext.covers(lifted)) {
                    out.giraud_contained = false;
                    check.status = Status::Fail;
                    check.witnesses.push_back(Witness{}
                                                  .with("object", cat.object_id(o))
                                                  .with("base-sieve", j.ops().render(cover)));
                    break;
                }
            }
        }
    }

    bool hyp = hypotheses_hold(s);
    {
        auto& impl = out.report.add(
            "reflection-implication",
            "prestack with a reflecting linearization implies the reflection property");
        const auto* prestack = out.report.find("prestack");
        if (prestack->status == Status::Skipped)
            impl.status = Status::Skipped;
        else if (out.prestack && out.reflecting_linearization && !out.j_reflecting) {
            impl.status = Status::Fail;
            impl.note = "toolkit bug: implication violated";
        }
    }
    {
        auto& impl = out.report.add("containment-implication",
                                    "the reflection property implies Giraud containment");
        if (!hyp)
            impl.status = Status::Skipped;
        else if (out.j_reflecting && !out.giraud_contained) {
            impl.status = Status::Fail;
            impl.note = "toolkit bug: implication violated";
        }
    }

    if (sampled)
        for (auto& check : out.report.checks)
            if (check.status == Status::Pass) check.status = Status::Sampled;
    return out;
}

VerificationReport check_existential_morphism(const ExistentialSite& a, const ExistentialSite& b,
                                              const std::vector<std::vector<int>>& fibre_maps,
                                              const Guards& guards) {
    VerificationReport report;
    if (a.base() != b.base())
        throw InputError("check_existential_morphism: sites live over different bases");
    const auto& base = *a.base();

    auto m = fib_morphism_from_fibre_maps(a.total(), b.total(), fibre_maps, "alpha");
    auto fib_report = fibration_morphism_report(m);
    report.merge(fib_report);

    auto& fibrewise = report.add("fibrewise-morphism-of-sites",
                                 "each component is cover-preserving and covering-flat");
    for (int c = 0; c < base.object_count(); ++c) {
        const auto& src = a.indexed().fibre(c);
        const auto& dst = b.indexed().fibre(c);
        std::vector<int> amap(src->arrow_count());
        bool derivable = true;
        for (int ar = 0; ar < src->arrow_count() && derivable; ++ar) {
            auto hom = dst->hom(fibre_maps[c][src->src(ar)], fibre_maps[c][src->tgt(ar)]);
            if (hom.size() == 1)
                amap[ar] = hom[0];
            else
                derivable = false;
        }
        if (!derivable) {
            fibrewise.status = Status::Inconclusive;
            fibrewise.note = "component arrow action not derivable (non-preorder fibre)";
            break;
        }
        FinFunctor component("alpha_" + base.object_id(c), src, dst, fibre_maps[c], amap);
        auto sm = site_morphism_report(component, a.fibre_topology(c), b.fibre_topology(c), guards);
        if (!sm.morphism_of_sites()) {
            fibrewise.status = Status::Fail;
            Witness w;
            w.with("fibre", base.object_id(c));
            if (!sm.cover_preserving) w.with("failed", "cover-preserving");
            else w.with("failed", "covering-flat");
            fibrewise.witnesses.push_back(w);
            break;
        }
    }

    auto& squares = report.add("exists-squares",
                               "α commutes with the left adjoints up to isomorphism");
    for (int f = 0; f < base.arrow_count() && squares.status == Status::Pass; ++f) {
        const auto& src_fib = *a.indexed().fibre(base.src(f));
        const auto& dst_fib = *b.indexed().fibre(base.tgt(f));
        if (!src_fib.is_preorder() || !dst_fib.is_preorder()) {
            squares.status = Status::Inconclusive;
            squares.note = "checked for preorder fibres only";
            break;
        }
        for (int x = 0; x < src_fib.object_count(); ++x) {
            int lhs = fibre_maps[base.tgt(f)][a.adjoint(f).exists.on_object(x)];
            int rhs = b.adjoint(f).exists.on_object(fibre_maps[base.src(f)][x]);
            if (dst_fib.hom(lhs, rhs).empty() || dst_fib.hom(rhs, lhs).empty()) {
                squares.status = Status::Fail;
                squares.witnesses.push_back(Witness{}
                                                .with("arrow", base.arrow_id(f))
                                                .with("element", src_fib.object_id(x)));
                break;
            }
        }
    }

    {
        auto& total_level = report.add(
            "total-morphism-of-sites",
            "the induced total functor is a morphism of sites for the existential topologies");
        auto ext_a = existential_covering(a);
        auto ext_b = existential_covering(b);
        auto sm = site_morphism_report(m.functor, ext_a, ext_b, guards);
        if (!sm.morphism_of_sites()) {
            total_level.status = Status::Fail;
            total_level.note = sm.cover_preserving ? "covering-flat failed" : "cover-preserving failed";
        }
    }

    return report;
}

bool is_cocartesian(const ExistentialSite& s, int total_arrow) {
    // cocartesian over e iff the transpose of the vertical part is an iso
    int tr = s.transpose_total(total_arrow);
    if (tr < 0) return false;
    auto [tc, tl] = s.total().decode_object(s.total().total()->tgt(total_arrow));
    (void)tl;
    const auto& fib = *s.indexed().fibre(tc);
    int src = fib.src(tr), dst = fib.tgt(tr);
    for (int inv : fib.hom(dst, src))
        if (fib.compose(tr, inv) == fib.identity(dst) && fib.compose(inv, tr) == fib.identity(src))
            return true;
    return false;
}

CocartVerticalFactorization factor_cocartesian_vertical(const ExistentialSite& s, int total_arrow) {
    CocartVerticalFactorization out;
    const auto& g = s.total();
    const auto& cat = *g.total();
    auto [e, alpha] = g.decode_arrow(total_arrow);
    auto [E, l] = g.decode_object(cat.tgt(total_arrow));
    auto [Ep, lp] = g.decode_object(cat.src(total_arrow));
    (void)Ep;
    const auto& fib_tgt = *s.indexed().fibre(E);

    int el = s.adjoint(e).exists.on_object(lp);
    int unit = s.adjoint(e).unit[lp];
    auto& check = out.report.add("factorization", "the two parts compose to the arrow");
    if (unit < 0) {
        check.status = Status::Fail;
        check.note = "unit missing (broken adjoint data)";
        return out;
    }
    // cocartesian part (e, η_e(l')) : (E', l') -> (E, ∃_e(l'))
    for (int cand = 0; cand < cat.arrow_count(); ++cand)
        if (g.decode_arrow(cand) == std::make_pair(e, unit) &&
            g.decode_object(cat.tgt(cand)).second == el && cat.src(cand) == cat.src(total_arrow)) {
            out.cocartesian = cand;
            break;
        }
    // vertical part (1_E, ᾱ) : (E, ∃_e(l')) -> (E, l)
    int tr = s.transpose(e, alpha, l);
    if (tr < 0 || out.cocartesian < 0) {
        check.status = Status::Fail;
        check.note = "transpose missing (broken adjoint data)";
        return out;
    }
    int idE = s.base()->identity(E);
    for (int cand = 0; cand < cat.arrow_count(); ++cand)
        if (g.decode_arrow(cand) == std::make_pair(idE, tr) &&
            g.decode_object(cat.tgt(cand)).second == l) {
            out.vertical = cand;
            break;
        }
    if (out.vertical < 0) {
        check.status = Status::Fail;
        check.note = "vertical part not found";
        return out;
    }
    if (cat.compose(out.vertical, out.cocartesian) != total_arrow) {
        check.status = Status::Fail;
        check.witnesses.push_back(Witness{}.with("arrow", cat.arrow_id(total_arrow)));
    }

    auto& cocart = out.report.add("cocartesian-part", "the first factor is cocartesian");
    if (!is_cocartesian(s, out.cocartesian)) {
        // the unit arrow is cocartesian only for genuine adjoints
        cocart.status = Status::Fail;
        cocart.witnesses.push_back(Witness{}.with("arrow", cat.arrow_id(out.cocartesian)));
    }
    (void)fib_tgt;
    return out;
}

VerificationReport check_coorthogonal_generation(const ExistentialSite& s,
                                                 const GrothendieckTopology& ext,
                                                 const GrothendieckTopology* j,
                                                 const Guards& guards) {
    VerificationReport report;
    const auto& g = s.total();
    const auto& cat = *g.total();
    const auto& b = *s.base();

    // generators: fibre-covering vertical families and singleton unit lifts
    Coverage coverage;
    bool sampled = false;
    for (int o = 0; o < cat.object_count(); ++o) {
        auto [E, l] = g.decode_object(o);
        const auto& kc = s.fibre_topology(E);
        const auto& fib = *s.indexed().fibre(E);
        const auto& finto = fib.arrows_into(l);
        for (const auto& bits : sieve_pool(kc.ops(), l, guards, &sampled)) {
            Sieve t{l, bits};
            if (!kc.covers(t)) continue;
            std::vector<int> vertical;
            for (int a : cat.arrows_into(o)) {
                if (!g.vertical(a)) continue;
                int alpha = g.decode_arrow(a).second;
                int pos = -1;
                for (std::size_t q = 0; q < finto.size(); ++q)
                    if (finto[q] == alpha) pos = static_cast<int>(q);
                if (pos >= 0 && t.bits.test(pos)) vertical.push_back(a);
            }
            coverage.families.push_back({o, vertical});
        }
    }
    for (int e = 0; e < b.arrow_count(); ++e) {
        const auto& fib_src = *s.indexed().fibre(b.src(e));
        for (int lp = 0; lp < fib_src.object_count(); ++lp) {
            int unit = s.adjoint(e).unit[lp];
            if (unit < 0) continue;
            int el = s.adjoint(e).exists.on_object(lp);
            int target = g.object_of(b.tgt(e), el);
            for (int cand : cat.arrows_into(target))
                if (g.decode_arrow(cand) == std::make_pair(e, unit) &&
                    g.decode_object(cat.src(cand)).second == lp) {
                    coverage.families.push_back({target, {cand}});
                    break;
                }
        }
    }

    auto generated = generate_topology(g.total(), coverage, guards);

    auto& equal = report.add("coorthogonal-generation",
                             "vertical and unit-lift families generate the existential topology");
    for (int o = 0; o < cat.object_count() && equal.status == Status::Pass; ++o) {
        bool pool_sampled = false;
        for (const auto& bits : sieve_pool(ext.ops(), o, guards, &pool_sampled)) {
            Sieve sv{o, bits};
            bool lhs = generated.covers(Sieve{o, bits});
            bool rhs = ext.covers(sv);
            if (lhs != rhs) {
                equal.status = Status::Fail;
                equal.witnesses.push_back(Witness{}
                                              .with("object", cat.object_id(o))
                                              .with("sieve", ext.ops().render(sv))
                                              .with("generated", lhs ? "yes" : "no")
                                              .with("existential", rhs ? "yes" : "no"));
                break;
            }
        }
        if (pool_sampled && equal.status == Status::Pass) equal.status = Status::Sampled;
    }

    auto& cogiraud = report.add("co-giraud-contained",
                                "cocartesian lifts of base covers are existential covers");
    if (!j) {
        cogiraud.status = Status::Skipped;
        cogiraud.note = "no base topology supplied";
    } else {
        for (int o = 0; o < cat.object_count() && cogiraud.status == Status::Pass; ++o) {
            auto [E, l] = g.decode_object(o);
            (void)l;
            for (const auto& bits : sieve_pool(j->ops(), E, guards, &sampled)) {
                Sieve cover{E, bits};
                if (!j->covers(cover)) continue;
                std::vector<int> lifts;
                for (int a : cat.arrows_into(o)) {
                    int f = g.projection().on_arrow(a);
                    if (cover.bits.test(b.into_position(f)) && is_cocartesian(s, a))
                        lifts.push_back(a);
                }
                if (!ext.covers(ext.ops().generated(o, lifts))) {
                    cogiraud.status = Status::Fail;
                    cogiraud.witnesses.push_back(Witness{}
                                                     .with("object", cat.object_id(o))
                                                     .with("base-sieve", j->ops().render(cover)));
                    break;
                }
            }
        }
    }
    return report;
}

}  // namespace sitekit
