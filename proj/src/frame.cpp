#include "sitekit/frame.hpp"

#include <algorithm>

namespace sitekit {

namespace {

// glb/lub of a pair from an order matrix; -1 when absent or ambiguous.
int bound_of(const std::vector<std::vector<bool>>& le, int a, int b, bool lower) {
    const int n = static_cast<int>(le.size());
    std::vector<int> bounds;
    for (int x = 0; x < n; ++x) {
        bool ok = lower ? (le[x][a] && le[x][b]) : (le[a][x] && le[b][x]);
        if (ok) bounds.push_back(x);
    }
    for (int x : bounds) {
        bool extreme = true;
        for (int y : bounds)
            if (lower ? !le[y][x] : !le[x][y]) {
                extreme = false;
                break;
            }
        if (extreme) return x;
    }
    return -1;
}

}  // namespace

FiniteFrame FiniteFrame::from_order(std::string name, std::vector<std::string> elements,
                                    const std::vector<std::pair<std::string, std::string>>& le) {
    std::sort(elements.begin(), elements.end());
    const int n = static_cast<int>(elements.size());
    if (n == 0) throw InputError(name + ": a lattice needs at least one element");
    std::map<std::string, int> idx;
    for (int i = 0; i < n; ++i) {
        if (idx.count(elements[i])) throw InputError(name + ": duplicate element '" + elements[i] + "'");
        idx[elements[i]] = i;
    }
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) rel[i][i] = true;
    for (const auto& [a, b] : le) {
        auto ia = idx.find(a), ib = idx.find(b);
        if (ia == idx.end() || ib == idx.end())
            throw InputError(name + ": le relation references unknown element");
        rel[ia->second][ib->second] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (rel[i][k])
                for (int j = 0; j < n; ++j)
                    if (rel[k][j]) rel[i][j] = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rel[i][j] && rel[j][i])
                throw InputError(name + ": order is not antisymmetric ('" + elements[i] + "', '" +
                                 elements[j] + "')");

    std::vector<std::vector<int>> meet(n, std::vector<int>(n)), join(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            meet[a][b] = bound_of(rel, a, b, true);
            join[a][b] = bound_of(rel, a, b, false);
            if (meet[a][b] < 0)
                throw InputError(name + ": elements '" + elements[a] + "', '" + elements[b] +
                                 "' have no meet");
            if (join[a][b] < 0)
                throw InputError(name + ": elements '" + elements[a] + "', '" + elements[b] +
                                 "' have no join");
        }
    int bottom = 0, top = 0;
    for (int a = 0; a < n; ++a) {
        bottom = meet[bottom][a];
        top = join[top][a];
    }
    return from_tables(std::move(name), std::move(elements), std::move(rel), std::move(meet),
                       std::move(join), bottom, top);
}

FiniteFrame FiniteFrame::from_tables(std::string name, std::vector<std::string> elements,
                                     std::vector<std::vector<bool>> le,
                                     std::vector<std::vector<int>> meet,
                                     std::vector<std::vector<int>> join, int bottom, int top) {
    FiniteFrame f;
    f.name_ = std::move(name);
    f.elements_ = std::move(elements);
    f.le_ = std::move(le);
    f.meet_ = std::move(meet);
    f.join_ = std::move(join);
    f.bottom_ = bottom;
    f.top_ = top;
    return f;
}

int FiniteFrame::element_index(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
        if (elements_[i] == id) return i;
    return -1;
}

int FiniteFrame::join_of(const Bits& elems) const {
    int acc = bottom_;
    for (int i = elems.next(); i >= 0; i = elems.next(i + 1)) acc = join_[acc][i];
    return acc;
}

int FiniteFrame::meet_of(const Bits& elems) const {
    int acc = top_;
    for (int i = elems.next(); i >= 0; i = elems.next(i + 1)) acc = meet_[acc][i];
    return acc;
}

CatPtr FiniteFrame::as_category() const {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b)
            if (le_[a][b]) pairs.emplace_back(elements_[a], elements_[b]);
    return FinCategory::preorder(name_, elements_, pairs);
}

VerificationReport validate_frame(const FiniteFrame& f) {
    VerificationReport report;
    const int n = f.size();

    auto& order = report.add("frame-order", "the order is reflexive, transitive and antisymmetric");
    for (int a = 0; a < n && order.status == Status::Pass; ++a) {
        if (!f.le(a, a)) {
            order.status = Status::Fail;
            order.witnesses.push_back(Witness{}.with("element", f.element_id(a)));
        }
        for (int b = 0; b < n && order.status == Status::Pass; ++b) {
            if (a != b && f.le(a, b) && f.le(b, a)) {
                order.status = Status::Fail;
                order.witnesses.push_back(
                    Witness{}.with("a", f.element_id(a)).with("b", f.element_id(b)));
            }
            for (int c = 0; c < n; ++c)
                if (f.le(a, b) && f.le(b, c) && !f.le(a, c)) {
                    order.status = Status::Fail;
                    order.witnesses.push_back(Witness{}
                                                  .with("a", f.element_id(a))
                                                  .with("b", f.element_id(b))
                                                  .with("c", f.element_id(c)));
                    break;
                }
        }
    }

    auto& bounds = report.add("frame-bounds", "top and bottom bound every element");
    for (int a = 0; a < n; ++a)
        if (!f.le(f.bottom(), a) || !f.le(a, f.top())) {
            bounds.status = Status::Fail;
            bounds.witnesses.push_back(Witness{}.with("element", f.element_id(a)));
            break;
        }

    auto& lattice = report.add("frame-lattice", "meet and join are greatest lower / least upper bounds");
    for (int a = 0; a < n && lattice.status == Status::Pass; ++a)
        for (int b = 0; b < n && lattice.status == Status::Pass; ++b) {
            int m = f.meet(a, b), j = f.join(a, b);
            bool ok = f.le(m, a) && f.le(m, b) && f.le(a, j) && f.le(b, j);
            for (int x = 0; x < n && ok; ++x) {
                if (f.le(x, a) && f.le(x, b) && !f.le(x, m)) ok = false;
                if (f.le(a, x) && f.le(b, x) && !f.le(j, x)) ok = false;
            }
            if (!ok) {
                lattice.status = Status::Fail;
                lattice.witnesses.push_back(
                    Witness{}.with("a", f.element_id(a)).with("b", f.element_id(b)));
            }
        }

    auto& dist = report.add("frame-distributivity", "binary meet distributes over binary join");
    for (int a = 0; a < n && dist.status == Status::Pass; ++a)
        for (int b = 0; b < n && dist.status == Status::Pass; ++b)
            for (int c = 0; c < n; ++c)
                if (f.meet(a, f.join(b, c)) != f.join(f.meet(a, b), f.meet(a, c))) {
                    dist.status = Status::Fail;
                    dist.witnesses.push_back(Witness{}
                                                 .with("a", f.element_id(a))
                                                 .with("b", f.element_id(b))
                                                 .with("c", f.element_id(c)));
                    break;
                }

    return report;
}

namespace {

bool extend_iso(const FiniteFrame& a, const FiniteFrame& b, std::vector<int>& map,
                std::vector<bool>& used, int next) {
    const int n = a.size();
    if (next == n) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (a.le(x, y) != b.le(map[x], map[y])) return false;
                if (map[a.meet(x, y)] != b.meet(map[x], map[y])) return false;
                if (map[a.join(x, y)] != b.join(map[x], map[y])) return false;
            }
        return true;
    }
    for (int img = 0; img < n; ++img) {
        if (used[img]) continue;
        bool consistent = true;
        for (int prev = 0; prev < next && consistent; ++prev) {
            if (a.le(prev, next) != b.le(map[prev], img)) consistent = false;
            if (a.le(next, prev) != b.le(img, map[prev])) consistent = false;
        }
        if (!consistent) continue;
        map[next] = img;
        used[img] = true;
        if (extend_iso(a, b, map, used, next + 1)) return true;
        used[img] = false;
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> find_frame_isomorphism(const FiniteFrame& a, const FiniteFrame& b) {
    if (a.size() != b.size()) return std::nullopt;
    std::vector<int> map(a.size(), -1);
    std::vector<bool> used(a.size(), false);
    if (extend_iso(a, b, map, used, 0)) return map;
    return std::nullopt;
}

FiniteFrame frame_from_poset(const FinCategory& c) {
    if (!c.is_preorder()) throw InputError(c.name() + ": not a preorder");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int a = 0; a < c.object_count(); ++a)
        for (int b = 0; b < c.object_count(); ++b)
            if (!c.hom(a, b).empty()) pairs.emplace_back(c.object_id(a), c.object_id(b));
    std::vector<std::string> elems;
    for (int i = 0; i < c.object_count(); ++i) elems.push_back(c.object_id(i));
    return FiniteFrame::from_order(c.name(), std::move(elems), pairs);
}

}  // namespace sitekit
