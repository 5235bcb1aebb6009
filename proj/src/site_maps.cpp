#include "sitekit/site_maps.hpp"

namespace sitekit {

namespace {

std::vector<int> sieve_arrows(const FinCategory& c, const Sieve& s) {
    std::vector<int> arrows;
    const auto& into = c.arrows_into(s.obj);
    for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1)) arrows.push_back(into[i]);
    return arrows;
}

Sieve image_sieve(const FinFunctor& f, const GrothendieckTopology& k, const Sieve& s) {
    const auto& c = *f.source();
    std::vector<int> image;
    for (int a : sieve_arrows(c, s)) image.push_back(f.on_arrow(a));
    return k.ops().generated(f.on_object(s.obj), image);
}

}  // namespace

bool cover_preserving(const FinFunctor& f, const GrothendieckTopology& j,
                      const GrothendieckTopology& k, const Guards& guards, Witness* witness) {
    const auto& c = *f.source();
    for (int x = 0; x < c.object_count(); ++x) {
        bool sampled = false;
        for (const auto& bits : sieve_pool(j.ops(), x, guards, &sampled)) {
            Sieve s{x, bits};
            if (!j.covers(s)) continue;
            if (!k.covers(image_sieve(f, k, s))) {
                if (witness)
                    witness->with("object", c.object_id(x)).with("sieve", j.ops().render(s));
                return false;
            }
        }
    }
    return true;
}

SiteFunctorReport site_morphism_report(const FinFunctor& f, const GrothendieckTopology& j,
                                       const GrothendieckTopology& k, const Guards& guards) {
    if (f.source() != j.base() || f.target() != k.base())
        throw InputError("site_morphism_report: functor endpoints do not match the topologies");
    SiteFunctorReport out;
    const auto& c = *f.source();
    const auto& d = *f.target();
    const auto& kops = k.ops();
    const auto& jops = j.ops();

    {
        auto& check = out.report.add("cover-preserving", "images of covering sieves generate covers");
        Witness w;
        out.cover_preserving = cover_preserving(f, j, k, guards, &w);
        if (!out.cover_preserving) {
            check.status = Status::Fail;
            check.witnesses.push_back(w);
        }
    }

    {
        auto& check = out.report.add(
            "covering-flat", "cones over finite diagrams factor locally through image cones");
        out.covering_flat = true;

        // empty shape: every object is locally below the image of F
        for (int dd = 0; dd < d.object_count() && out.covering_flat; ++dd) {
            std::vector<int> qualifying;
            for (int g : d.arrows_into(dd)) {
                bool ok = false;
                for (int cc = 0; cc < c.object_count() && !ok; ++cc)
                    ok = !d.hom(d.src(g), f.on_object(cc)).empty();
                if (ok) qualifying.push_back(g);
            }
            if (!k.covers(kops.generated(dd, qualifying))) {
                out.covering_flat = false;
                check.status = Status::Fail;
                check.witnesses.push_back(
                    Witness{}.with("shape", "empty").with("object", d.object_id(dd)));
            }
        }

        // binary-discrete shape
        for (int c1 = 0; c1 < c.object_count() && out.covering_flat; ++c1)
            for (int c2 = c1; c2 < c.object_count() && out.covering_flat; ++c2)
                for (int dd = 0; dd < d.object_count() && out.covering_flat; ++dd)
                    for (int u1 : d.hom(dd, f.on_object(c1)))
                        for (int u2 : d.hom(dd, f.on_object(c2))) {
                            std::vector<int> qualifying;
                            for (int g : d.arrows_into(dd)) {
                                bool ok = false;
                                for (int cc = 0; cc < c.object_count() && !ok; ++cc)
                                    for (int v1 : c.hom(cc, c1)) {
                                        if (ok) break;
                                        for (int v2 : c.hom(cc, c2)) {
                                            if (ok) break;
                                            for (int w : d.hom(d.src(g), f.on_object(cc)))
                                                if (d.compose(f.on_arrow(v1), w) == d.compose(u1, g) &&
                                                    d.compose(f.on_arrow(v2), w) == d.compose(u2, g)) {
                                                    ok = true;
                                                    break;
                                                }
                                        }
                                    }
                                if (ok) qualifying.push_back(g);
                            }
                            if (!k.covers(kops.generated(dd, qualifying))) {
                                out.covering_flat = false;
                                check.status = Status::Fail;
                                check.witnesses.push_back(Witness{}
                                                              .with("shape", "binary")
                                                              .with("object", d.object_id(dd))
                                                              .with("legs", c.object_id(c1) + "," + c.object_id(c2)));
                                break;
                            }
                        }

        // parallel-pair shape
        for (int v1 = 0; v1 < c.arrow_count() && out.covering_flat; ++v1)
            for (int v2 = 0; v2 < c.arrow_count() && out.covering_flat; ++v2) {
                if (c.src(v1) != c.src(v2) || c.tgt(v1) != c.tgt(v2)) continue;
                for (int dd = 0; dd < d.object_count() && out.covering_flat; ++dd)
                    for (int t : d.hom(dd, f.on_object(c.src(v1)))) {
                        if (d.compose(f.on_arrow(v1), t) != d.compose(f.on_arrow(v2), t)) continue;
                        std::vector<int> qualifying;
                        for (int g : d.arrows_into(dd)) {
                            bool ok = false;
                            for (int cc = 0; cc < c.object_count() && !ok; ++cc)
                                for (int w : c.hom(cc, c.src(v1))) {
                                    if (ok) break;
                                    if (c.compose(v1, w) != c.compose(v2, w)) continue;
                                    for (int s : d.hom(d.src(g), f.on_object(cc)))
                                        if (d.compose(f.on_arrow(w), s) == d.compose(t, g)) {
                                            ok = true;
                                            break;
                                        }
                                }
                            if (ok) qualifying.push_back(g);
                        }
                        if (!k.covers(kops.generated(dd, qualifying))) {
                            out.covering_flat = false;
                            check.status = Status::Fail;
                            check.witnesses.push_back(Witness{}
                                                          .with("shape", "parallel")
                                                          .with("object", d.object_id(dd))
                                                          .with("pair", c.arrow_id(v1) + "," + c.arrow_id(v2)));
                            break;
                        }
                    }
            }
    }

    {
        auto& check = out.report.add("dense", "every object admits a cover by arrows from the image");
        out.dense = true;
        for (int dd = 0; dd < d.object_count(); ++dd) {
            std::vector<int> from_image;
            for (int g : d.arrows_into(dd))
                for (int cc = 0; cc < c.object_count(); ++cc)
                    if (d.src(g) == f.on_object(cc)) {
                        from_image.push_back(g);
                        break;
                    }
            if (!k.covers(kops.generated(dd, from_image))) {
                out.dense = false;
                check.status = Status::Fail;
                check.witnesses.push_back(Witness{}.with("object", d.object_id(dd)));
                break;
            }
        }
    }

    {
        auto& check = out.report.add("full", "arrows between images are locally in the image");
        out.full = true;
        for (int c1 = 0; c1 < c.object_count() && out.full; ++c1)
            for (int c2 = 0; c2 < c.object_count() && out.full; ++c2)
                for (int h : d.hom(f.on_object(c1), f.on_object(c2))) {
                    std::vector<int> qualifying;
                    for (int u : c.arrows_into(c1)) {
                        bool ok = false;
                        for (int w : c.hom(c.src(u), c2))
                            if (f.on_arrow(w) == d.compose(h, f.on_arrow(u))) {
                                ok = true;
                                break;
                            }
                        if (ok) qualifying.push_back(u);
                    }
                    if (!j.covers(jops.generated(c1, qualifying))) {
                        out.full = false;
                        check.status = Status::Fail;
                        check.witnesses.push_back(Witness{}
                                                      .with("source", c.object_id(c1))
                                                      .with("target", c.object_id(c2))
                                                      .with("arrow", d.arrow_id(h)));
                        break;
                    }
                }
    }

    {
        auto& check = out.report.add("faithful", "arrows identified by F agree on a covering sieve");
        out.faithful = true;
        for (int x = 0; x < c.arrow_count() && out.faithful; ++x)
            for (int y = 0; y < c.arrow_count(); ++y) {
                if (x == y || c.src(x) != c.src(y) || c.tgt(x) != c.tgt(y)) continue;
                if (f.on_arrow(x) != f.on_arrow(y)) continue;
                std::vector<int> agreeing;
                for (int u : c.arrows_into(c.src(x)))
                    if (c.compose(x, u) == c.compose(y, u)) agreeing.push_back(u);
                if (!j.covers(jops.generated(c.src(x), agreeing))) {
                    out.faithful = false;
                    check.status = Status::Fail;
                    check.witnesses.push_back(
                        Witness{}.with("x", c.arrow_id(x)).with("y", c.arrow_id(y)));
                    break;
                }
            }
    }

    return out;
}

ComorphismReport comorphism_report(const FinFunctor& f, const GrothendieckTopology& k,
                                   const GrothendieckTopology& j, const Guards& guards) {
    if (f.source() != k.base() || f.target() != j.base())
        throw InputError("comorphism_report: functor endpoints do not match the topologies");
    ComorphismReport out;
    const auto& d = *f.source();
    const auto& c = *f.target();
    const auto& kops = k.ops();
    const auto& jops = j.ops();

    {
        auto& check = out.report.add("cover-lifting", "covers of images lift to covers");
        out.cover_lifting = true;
        bool sampled = false;
        for (int dd = 0; dd < d.object_count() && out.cover_lifting; ++dd) {
            int fd = f.on_object(dd);
            for (const auto& bits : sieve_pool(jops, fd, guards, &sampled)) {
                Sieve s{fd, bits};
                if (!j.covers(s)) continue;
                Sieve lifted = kops.empty(dd);
                const auto& into = d.arrows_into(dd);
                for (std::size_t i = 0; i < into.size(); ++i) {
                    int img = f.on_arrow(into[i]);
                    if (s.bits.test(jops.category()->into_position(img))) lifted.bits.set(static_cast<int>(i));
                }
                if (!k.covers(lifted)) {
                    out.cover_lifting = false;
                    check.status = Status::Fail;
                    check.witnesses.push_back(Witness{}
                                                  .with("object", d.object_id(dd))
                                                  .with("sieve", jops.render(s)));
                    break;
                }
            }
        }
        if (sampled && check.status == Status::Pass) check.status = Status::Sampled;
    }

    {
        auto& check = out.report.add("cover-reflecting", "families sent to covers are covers");
        out.cover_reflecting = true;
        bool sampled = false;
        for (int dd = 0; dd < d.object_count() && out.cover_reflecting; ++dd) {
            for (const auto& bits : sieve_pool(kops, dd, guards, &sampled)) {
                Sieve r{dd, bits};
                if (k.covers(r)) continue;
                if (j.covers(image_sieve(f, j, r))) {
                    out.cover_reflecting = false;
                    check.status = Status::Fail;
                    check.witnesses.push_back(Witness{}
                                                  .with("object", d.object_id(dd))
                                                  .with("family", kops.render(r)));
                    break;
                }
            }
        }
        if (sampled && check.status == Status::Pass) check.status = Status::Sampled;
    }

    {
        auto& check = out.report.add("closed-sieve-lifting",
                                     "closed sieves on images are closures of image sieves");
        out.closed_sieve_lifting = true;
        bool sampled = false;
        for (int dd = 0; dd < d.object_count() && out.closed_sieve_lifting; ++dd) {
            int fd = f.on_object(dd);
            for (const auto& bits : sieve_pool(jops, fd, guards, &sampled)) {
                Sieve s{fd, bits};
                if (close_sieve(j, s).bits != s.bits) continue;  // only j-closed sieves
                // largest candidate: arrows of dd whose image lies in s
                Sieve lifted = kops.empty(dd);
                const auto& into = d.arrows_into(dd);
                for (std::size_t i = 0; i < into.size(); ++i) {
                    int img = f.on_arrow(into[i]);
                    if (s.bits.test(c.into_position(img))) lifted.bits.set(static_cast<int>(i));
                }
                Sieve back = close_sieve(j, image_sieve(f, j, lifted));
                if (back.bits != s.bits) {
                    out.closed_sieve_lifting = false;
                    check.status = Status::Fail;
                    check.witnesses.push_back(Witness{}
                                                  .with("object", d.object_id(dd))
                                                  .with("closed-sieve", jops.render(s)));
                    break;
                }
            }
        }
        if (sampled && check.status == Status::Pass) check.status = Status::Sampled;
    }

    {
        auto& check = out.report.add(
            "open-criterion", "cover-preserving and arrows into images lift along a cover");
        Witness w;
        out.open_criterion = cover_preserving(f, k, j, guards, &w);
        if (!out.open_criterion) {
            check.status = Status::Fail;
            check.witnesses.push_back(w);
        }
        for (int dd = 0; dd < d.object_count() && out.open_criterion; ++dd)
            for (int alpha = 0; alpha < c.arrow_count(); ++alpha) {
                if (c.tgt(alpha) != f.on_object(dd)) continue;
                int cc = c.src(alpha);
                std::vector<int> qualifying;
                for (int h : c.arrows_into(cc)) {
                    bool ok = false;
                    for (int g : d.arrows_into(dd))
                        if (c.compose(alpha, h) == f.on_arrow(g)) {
                            ok = true;
                            break;
                        }
                    if (ok) qualifying.push_back(h);
                }
                if (!j.covers(jops.generated(cc, qualifying))) {
                    out.open_criterion = false;
                    check.status = Status::Fail;
                    check.witnesses.push_back(Witness{}
                                                  .with("object", d.object_id(dd))
                                                  .with("arrow", c.arrow_id(alpha)));
                    break;
                }
            }
    }

    return out;
}

GrothendieckTopology induced_topology(const FinFunctor& q, const GrothendieckTopology& k,
                                      std::string name) {
    if (q.target() != k.base()) throw InputError("induced_topology: endpoint mismatch");
    return GrothendieckTopology::predicate(
        q.source(), std::move(name), [q, k](const SieveOps& ops, const Sieve& s) {
            const auto& a = *ops.category();
            std::vector<int> image;
            const auto& into = a.arrows_into(s.obj);
            for (int i = s.bits.next(); i >= 0; i = s.bits.next(i + 1))
                image.push_back(q.on_arrow(into[i]));
            return k.covers(k.ops().generated(q.on_object(s.obj), image));
        });
}

}  // namespace sitekit
