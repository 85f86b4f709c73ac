#include "causaltope/cover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ct {

SpaceRef share(HistorySpace space) {
    return std::make_shared<const HistorySpace>(std::move(space));
}

namespace {

bool same_space(const SpaceRef& a, const SpaceRef& b) {
    return a == b || (a && b && *a == *b);
}

std::vector<std::uint32_t> maximal_members(const HistorySpace& parent,
                                           const std::vector<std::uint32_t>& members) {
    const auto& hist = parent.histories();
    std::vector<std::uint32_t> out;
    for (auto i : members) {
        bool maximal = true;
        for (auto j : members)
            if (hist[i].lt(hist[j])) {
                maximal = false;
                break;
            }
        if (maximal) out.push_back(i);
    }
    return out;
}

}  // namespace

Lowerset::Lowerset(SpaceRef parent, std::vector<std::uint32_t> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
    if (!parent_) throw std::invalid_argument("a lowerset needs a parent space");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    const auto& hist = parent_->histories();
    for (auto i : members_)
        if (i >= hist.size()) throw std::out_of_range("lowerset member index out of range");
    for (std::uint32_t j = 0; j < hist.size(); ++j) {
        if (std::binary_search(members_.begin(), members_.end(), j)) continue;
        for (auto i : members_)
            if (hist[j].lt(hist[i]))
                throw std::invalid_argument("lowerset is not down-closed: misses " +
                                            ct::to_string(hist[j]));
    }
    std::string key;
    for (auto i : maximal_members(*parent_, members_)) {
        if (!key.empty()) key += " | ";
        key += ct::to_string(hist[i]);
    }
    key_ = std::move(key);
}

Lowerset Lowerset::down_closure(SpaceRef parent, const std::vector<PartialFunction>& generators) {
    std::vector<std::uint32_t> members;
    const auto& hist = parent->histories();
    for (std::uint32_t i = 0; i < hist.size(); ++i)
        for (const auto& g : generators)
            if (hist[i].leq(g)) {
                members.push_back(i);
                break;
            }
    return Lowerset(std::move(parent), std::move(members));
}

Lowerset Lowerset::whole(SpaceRef parent) {
    std::vector<std::uint32_t> members(parent->size());
    std::iota(members.begin(), members.end(), 0);
    return Lowerset(std::move(parent), std::move(members));
}

bool Lowerset::contains(std::uint32_t index) const {
    return std::binary_search(members_.begin(), members_.end(), index);
}

bool Lowerset::contains(const PartialFunction& h) const {
    if (!parent_->contains(h)) return false;
    return contains(static_cast<std::uint32_t>(parent_->index_of(h)));
}

std::vector<PartialFunction> Lowerset::histories() const {
    std::vector<PartialFunction> out;
    out.reserve(members_.size());
    for (auto i : members_) out.push_back(parent_->histories()[i]);
    return out;
}

std::vector<PartialFunction> Lowerset::maxima() const {
    std::vector<PartialFunction> out;
    for (auto i : maximal_members(*parent_, members_)) out.push_back(parent_->histories()[i]);
    return out;
}

std::vector<PartialFunction> Lowerset::closure() const { return ext_closure(histories()); }

std::vector<EventId> Lowerset::events() const {
    std::set<EventId> seen;
    for (auto i : members_)
        for (const auto& [event, value] : parent_->histories()[i].entries()) seen.insert(event);
    return {seen.begin(), seen.end()};
}

bool Lowerset::subset_of(const Lowerset& other) const {
    if (!same_space(parent_, other.parent_)) return false;
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
}

Lowerset Lowerset::intersection(const Lowerset& other) const {
    if (!same_space(parent_, other.parent_))
        throw std::invalid_argument("lowersets belong to different spaces");
    std::vector<std::uint32_t> common;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                          other.members_.end(), std::back_inserter(common));
    return Lowerset(parent_, std::move(common));
}

std::string Lowerset::to_string() const {
    std::string out = "{";
    bool first = true;
    for (auto i : members_) {
        if (!first) out += "; ";
        first = false;
        out += ct::to_string(parent_->histories()[i]);
    }
    return out + "}";
}

bool operator==(const Lowerset& a, const Lowerset& b) {
    return same_space(a.parent_, b.parent_) && a.members_ == b.members_;
}

namespace {

// All down-closed subsets of `pool`, visited via a linear extension so each
// subset appears exactly once; throws past `cap`.
std::vector<Lowerset> enumerate_within(const SpaceRef& parent,
                                       const std::vector<std::uint32_t>& pool, std::size_t cap) {
    const auto& hist = parent->histories();
    std::vector<std::uint32_t> order = pool;
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return hist[a].size() < hist[b].size();
    });
    const std::size_t n = order.size();
    std::vector<std::vector<std::size_t>> preds(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (hist[order[j]].lt(hist[order[i]])) preds[i].push_back(j);
    std::vector<Lowerset> out;
    std::vector<char> in(n, 0);
    std::vector<std::uint32_t> current;
    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (i == n) {
            if (current.empty()) return;
            if (out.size() >= cap)
                throw std::runtime_error("more than " + std::to_string(cap) +
                                         " lowersets; raise the cap to enumerate them");
            out.emplace_back(parent, current);
            return;
        }
        dfs(i + 1);
        bool closed = true;
        for (auto p : preds[i])
            if (!in[p]) {
                closed = false;
                break;
            }
        if (closed) {
            in[i] = 1;
            current.push_back(order[i]);
            dfs(i + 1);
            current.pop_back();
            in[i] = 0;
        }
    };
    dfs(0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Lowerset> enumerate_lowersets(const SpaceRef& parent, std::size_t cap) {
    std::vector<std::uint32_t> pool(parent->size());
    std::iota(pool.begin(), pool.end(), 0);
    return enumerate_within(parent, pool, cap);
}

std::vector<Lowerset> enumerate_sub_lowersets(const Lowerset& within, std::size_t cap) {
    return enumerate_within(within.parent_ref(), within.members(), cap);
}

Cover::Cover(SpaceRef parent, std::vector<Lowerset> contexts)
    : parent_(std::move(parent)), contexts_(std::move(contexts)) {
    if (!parent_) throw std::invalid_argument("a cover needs a parent space");
    if (contexts_.empty()) throw std::invalid_argument("a cover needs at least one context");
    for (const auto& c : contexts_) {
        if (!same_space(c.parent_ref(), parent_))
            throw std::invalid_argument("cover context belongs to a different space");
        if (c.empty()) throw std::invalid_argument("cover contexts must be nonempty");
    }
    std::sort(contexts_.begin(), contexts_.end());
    for (std::size_t i = 0; i < contexts_.size(); ++i)
        for (std::size_t j = i + 1; j < contexts_.size(); ++j)
            if (contexts_[i].subset_of(contexts_[j]) || contexts_[j].subset_of(contexts_[i]))
                throw std::invalid_argument("cover contexts must form an antichain");
    std::vector<char> covered(parent_->size(), 0);
    for (const auto& c : contexts_)
        for (auto i : c.members()) covered[i] = 1;
    for (std::size_t i = 0; i < covered.size(); ++i)
        if (!covered[i])
            throw std::invalid_argument("contexts do not cover the space: " +
                                        ct::to_string(parent_->histories()[i]) + " is missing");
}

Cover Cover::standard(SpaceRef parent) {
    std::vector<Lowerset> ctxs;
    for (const auto& k : parent->max_ext()) ctxs.push_back(Lowerset::down_closure(parent, {k}));
    std::sort(ctxs.begin(), ctxs.end());
    ctxs.erase(std::unique(ctxs.begin(), ctxs.end()), ctxs.end());
    return Cover(std::move(parent), std::move(ctxs));
}

Cover Cover::fully_solipsistic(SpaceRef parent) {
    std::vector<Lowerset> ctxs;
    for (const auto& h : Lowerset::whole(parent).maxima())
        ctxs.push_back(Lowerset::down_closure(parent, {h}));
    return Cover(std::move(parent), std::move(ctxs));
}

Cover Cover::classical(SpaceRef parent) {
    std::vector<Lowerset> ctxs{Lowerset::whole(parent)};
    return Cover(std::move(parent), std::move(ctxs));
}

bool Cover::refines(const Cover& coarser) const {
    if (!same_space(parent_, coarser.parent_))
        throw std::invalid_argument("covers belong to different spaces");
    for (const auto& v : contexts_) {
        bool inside = false;
        for (const auto& u : coarser.contexts_)
            if (v.subset_of(u)) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    return true;
}

bool Cover::is_solipsistic() const { return !refines(Cover::standard(parent_)); }

std::string Cover::to_string() const {
    std::string out;
    for (const auto& c : contexts_) {
        if (!out.empty()) out += " ";
        out += c.to_string();
    }
    return out;
}

bool operator==(const Cover& a, const Cover& b) {
    if (!same_space(a.parent_, b.parent_)) return false;
    if (a.contexts_.size() != b.contexts_.size()) return false;
    for (std::size_t i = 0; i < a.contexts_.size(); ++i)
        if (a.contexts_[i].members() != b.contexts_[i].members()) return false;
    return true;
}

bool operator<(const Cover& a, const Cover& b) {
    const std::size_t n = std::min(a.contexts_.size(), b.contexts_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.contexts_[i].key() < b.contexts_[i].key()) return true;
        if (b.contexts_[i].key() < a.contexts_[i].key()) return false;
    }
    return a.contexts_.size() < b.contexts_.size();
}

std::vector<Cover> enumerate_covers(const SpaceRef& parent, std::size_t lowerset_cap) {
    if (parent->size() > 64)
        throw std::runtime_error("cover enumeration supports at most 64 histories");
    auto ls = enumerate_lowersets(parent, lowerset_cap);
    const std::size_t n = parent->size();
    const std::uint64_t full = (n == 64) ? ~0ull : ((1ull << n) - 1);
    std::vector<std::uint64_t> mask(ls.size(), 0);
    for (std::size_t i = 0; i < ls.size(); ++i)
        for (auto m : ls[i].members()) mask[i] |= 1ull << m;
    std::vector<std::uint64_t> suffix(ls.size() + 1, 0);
    for (std::size_t i = ls.size(); i-- > 0;) suffix[i] = suffix[i + 1] | mask[i];
    std::vector<Cover> out;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, std::uint64_t)> dfs = [&](std::size_t i,
                                                              std::uint64_t covered) {
        if (i == ls.size()) {
            if (covered == full) {
                std::vector<Lowerset> ctxs;
                ctxs.reserve(chosen.size());
                for (auto c : chosen) ctxs.push_back(ls[c]);
                out.emplace_back(parent, std::move(ctxs));
            }
            return;
        }
        if ((covered | suffix[i]) != full) return;
        dfs(i + 1, covered);
        const std::uint64_t m = mask[i];
        for (auto c : chosen) {
            const std::uint64_t o = mask[c];
            if ((m & o) == m || (m & o) == o) return;
        }
        chosen.push_back(i);
        dfs(i + 1, covered | m);
        chosen.pop_back();
    };
    dfs(0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<TipClass> tip_classes(const Lowerset& context) {
    const auto& parent = context.parent();
    const auto& hist = parent.histories();
    std::map<EventId, std::vector<std::uint32_t>> tipped;
    for (auto i : context.members())
        for (const auto& event : parent.tips(hist[i])) tipped[event].push_back(i);
    if (tipped.size() != context.events().size())
        throw std::logic_error("context has an event without a tip history");
    std::vector<TipClass> out;
    for (auto& [event, members] : tipped) {
        std::vector<std::size_t> root(members.size());
        std::iota(root.begin(), root.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (root[x] != x) x = root[x] = root[root[x]];
            return x;
        };
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                if (pf_compatible(hist[members[a]], hist[members[b]])) root[find(a)] = find(b);
        std::map<std::size_t, std::vector<std::uint32_t>> groups;
        for (std::size_t a = 0; a < members.size(); ++a) groups[find(a)].push_back(members[a]);
        for (auto& [r, group] : groups)
            out.push_back(TipClass{event, group, ct::to_string(hist[group.front()])});
    }
    std::sort(out.begin(), out.end(), [](const TipClass& a, const TipClass& b) {
        return std::tie(a.event, a.id) < std::tie(b.event, b.id);
    });
    return out;
}

std::vector<std::size_t> class_inclusion_map(const Lowerset& inner, const Lowerset& outer) {
    if (!inner.subset_of(outer))
        throw std::invalid_argument("the inner lowerset must be contained in the outer one");
    auto inner_classes = tip_classes(inner);
    auto outer_classes = tip_classes(outer);
    std::map<std::pair<EventId, std::uint32_t>, std::size_t> where;
    for (std::size_t pos = 0; pos < outer_classes.size(); ++pos)
        for (auto m : outer_classes[pos].members)
            where[{outer_classes[pos].event, m}] = pos;
    std::vector<std::size_t> out;
    out.reserve(inner_classes.size());
    for (const auto& cls : inner_classes) {
        auto it = where.find({cls.event, cls.members.front()});
        if (it == where.end())
            throw std::logic_error("tip class of the inner lowerset lost in the outer one");
        out.push_back(it->second);
    }
    return out;
}

Lowerset induce_lowerset(const Lowerset& l, const SpaceRef& finer) {
    const auto& src = l.parent();
    if (finer->events() != src.events() || finer->inputs() != src.inputs())
        throw std::invalid_argument("inducing a lowerset requires matching events and inputs");
    if (!space_leq(*finer, src))
        throw std::invalid_argument("the target space must refine the lowerset's space");
    return Lowerset::down_closure(finer, l.histories());
}

InducedCover induce_cover(const Cover& c, const SpaceRef& finer) {
    std::vector<Lowerset> induced;
    induced.reserve(c.size());
    for (const auto& ctx : c.contexts()) induced.push_back(induce_lowerset(ctx, finer));
    std::vector<Lowerset> maxima;
    for (std::size_t i = 0; i < induced.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < induced.size() && maximal; ++j)
            if (induced[i].subset_of(induced[j]) && induced[i].members() != induced[j].members())
                maximal = false;
        if (maximal) maxima.push_back(induced[i]);
    }
    std::sort(maxima.begin(), maxima.end());
    maxima.erase(std::unique(maxima.begin(), maxima.end()), maxima.end());
    Cover cover(finer, std::move(maxima));
    std::vector<std::size_t> host;
    host.reserve(induced.size());
    for (const auto& l : induced) {
        std::size_t pos = cover.size();
        for (std::size_t j = 0; j < cover.size(); ++j)
            if (l.subset_of(cover.contexts()[j])) {
                pos = j;
                break;
            }
        if (pos == cover.size()) throw std::logic_error("induced lowerset escaped the induced cover");
        host.push_back(pos);
    }
    return InducedCover{std::move(cover), std::move(induced), std::move(host)};
}

std::vector<std::size_t> induced_class_map(const Lowerset& coarse, const Lowerset& induced) {
    const auto& src = coarse.parent();
    const auto& dst = induced.parent();
    auto src_classes = tip_classes(coarse);
    auto dst_classes = tip_classes(induced);
    std::vector<std::size_t> out;
    out.reserve(src_classes.size());
    for (const auto& cls : src_classes) {
        const auto& h = src.histories()[cls.members.front()];
        std::size_t found = dst_classes.size();
        for (std::size_t pos = 0; pos < dst_classes.size(); ++pos) {
            if (dst_classes[pos].event != cls.event) continue;
            for (auto m : dst_classes[pos].members)
                if (dst.histories()[m].leq(h)) {
                    if (found != dst_classes.size() && found != pos)
                        throw std::logic_error("induced tip class is ambiguous");
                    found = pos;
                    break;
                }
        }
        if (found == dst_classes.size())
            throw std::logic_error("no induced tip class below " + ct::to_string(h));
        out.push_back(found);
    }
    return out;
}

}  // namespace ct
