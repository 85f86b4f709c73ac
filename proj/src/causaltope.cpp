#include "causaltope/causaltope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace ct {

namespace {

// One independent unit of equation generation: a shared lowerset and the
// cover positions that contain it, in cover order.  Pairwise mode emits one
// unit per overlapping context pair; full mode one unit per distinct shared
// lowerset.
struct Block {
    Lowerset mu;
    std::vector<std::size_t> contexts;
};

bool is_standard_cover(const Cover& cover) {
    const Cover standard = Cover::standard(cover.parent_ref());
    if (standard.size() != cover.size()) return false;
    for (std::size_t i = 0; i < cover.size(); ++i)
        if (standard.contexts()[i].key() != cover.contexts()[i].key()) return false;
    return true;
}

// Is mu exactly the set of parent histories lying below h?
bool is_principal(const Lowerset& mu, const PartialFunction& h) {
    const auto& histories = mu.parent().histories();
    std::vector<std::uint32_t> below;
    for (std::uint32_t i = 0; i < histories.size(); ++i)
        if (histories[i].leq(h)) below.push_back(i);
    return below == mu.members();
}

// "<inputs> -> <outputs> @i~j" with one character position per event in
// sorted order and underscores for events absent from the lowerset; only
// meaningful when the lowerset is the restriction of a single extended
// history and has at most one slot per event.
std::optional<std::string> succinct_stem(const Lowerset& mu, const ContextLayout& mu_layout) {
    auto join = pf_join_all(mu.maxima());
    if (!join || !is_principal(mu, *join)) return std::nullopt;
    std::map<EventId, std::size_t> slot_of;
    for (std::size_t s = 0; s < mu_layout.slot_count(); ++s)
        if (!slot_of.emplace(mu_layout.slots()[s].cls.event, s).second) return std::nullopt;
    std::string in;
    for (const auto& event : mu.parent().events())
        in += join->defined_at(event) ? std::to_string(join->at(event)) : "_";
    return in;
}

std::string succinct_label(const std::string& stem, const Lowerset& mu,
                           const ContextLayout& mu_layout, const std::vector<Output>& values,
                           std::size_t ci, std::size_t cj) {
    std::map<EventId, std::size_t> slot_of;
    for (std::size_t s = 0; s < mu_layout.slot_count(); ++s)
        slot_of.emplace(mu_layout.slots()[s].cls.event, s);
    std::string out;
    for (const auto& event : mu.parent().events()) {
        auto it = slot_of.find(event);
        out += it == slot_of.end() ? "_" : std::to_string(values[it->second]);
    }
    return stem + " -> " + out + " @" + std::to_string(ci) + "~" + std::to_string(cj);
}

std::string explicit_label(const Lowerset& mu, const std::vector<Output>& values, std::size_t ci,
                           std::size_t cj) {
    std::string out;
    for (Output v : values) out += std::to_string(v);
    return "{" + mu.key() + "} -> " + out + " @" + std::to_string(ci) + "~" + std::to_string(cj);
}

// Rows equating, for every consecutive context pair of the block, the
// marginal distributions over the block's lowerset.
std::vector<EquationRow> emit_block(const CoordinateIndex& index, const Block& block,
                                    bool standard) {
    const ContextLayout mu_layout(block.mu, index.outputs());
    const auto stem = standard ? succinct_stem(block.mu, mu_layout) : std::nullopt;
    std::vector<EquationRow> rows;
    for (std::size_t p = 0; p + 1 < block.contexts.size(); ++p) {
        const std::size_t ci = block.contexts[p];
        const std::size_t cj = block.contexts[p + 1];
        std::vector<EquationRow> pair_rows(mu_layout.size());
        for (std::size_t o = 0; o < mu_layout.size(); ++o) {
            const auto values = mu_layout.values_at(o);
            pair_rows[o].label = stem ? succinct_label(*stem, block.mu, mu_layout, values, ci, cj)
                                      : explicit_label(block.mu, values, ci, cj);
        }
        for (int side = 0; side < 2; ++side) {
            const std::size_t c = side == 0 ? ci : cj;
            const Rational sign = side == 0 ? 1 : -1;
            const ContextLayout& layout = index.contexts()[c];
            const auto inclusion = class_inclusion_map(block.mu, layout.context());
            std::vector<Output> values(mu_layout.slot_count());
            for (std::size_t t = 0; t < layout.size(); ++t) {
                for (std::size_t s = 0; s < mu_layout.slot_count(); ++s)
                    values[s] = layout.value_of(t, inclusion[s]);
                pair_rows[mu_layout.index_of(values)]
                    .coefficients[static_cast<std::uint32_t>(index.coordinate(c, t))] += sign;
            }
        }
        for (auto& row : pair_rows) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Block> collect_blocks(const CoordinateIndex& index, CausalityMode mode) {
    const auto& contexts = index.cover().contexts();
    std::vector<Block> blocks;
    if (mode == CausalityMode::pairwise) {
        for (std::size_t i = 0; i < contexts.size(); ++i)
            for (std::size_t j = i + 1; j < contexts.size(); ++j) {
                Lowerset shared = contexts[i].intersection(contexts[j]);
                if (shared.empty()) continue;
                blocks.push_back(Block{std::move(shared), {i, j}});
            }
        return blocks;
    }
    std::map<std::string, Lowerset> shared_lowersets;
    for (std::size_t i = 0; i < contexts.size(); ++i)
        for (std::size_t j = i + 1; j < contexts.size(); ++j) {
            Lowerset shared = contexts[i].intersection(contexts[j]);
            if (shared.empty()) continue;
            for (auto& mu : enumerate_sub_lowersets(shared))
                shared_lowersets.emplace(mu.key(), std::move(mu));
        }
    for (auto& [key, mu] : shared_lowersets) {
        Block block{std::move(mu), {}};
        for (std::size_t c = 0; c < contexts.size(); ++c)
            if (block.mu.subset_of(contexts[c])) block.contexts.push_back(c);
        blocks.push_back(std::move(block));
    }
    return blocks;
}

EquationSystem generate(const CoordinateIndex& index, CausalityMode mode, bool parallel) {
    const bool standard = is_standard_cover(index.cover());
    const auto blocks = collect_blocks(index, mode);
    std::vector<std::vector<EquationRow>> chunks(blocks.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long b = 0; b < static_cast<long>(blocks.size()); ++b)
        chunks[b] = emit_block(index, blocks[b], standard);
    EquationSystem system(index.size());
    for (auto& chunk : chunks)
        for (auto& row : chunk) system.add(std::move(row));
    return system;
}

}  // namespace

EquationSystem causality_equations(const CoordinateIndex& index, CausalityMode mode) {
    return generate(index, mode, true);
}

EquationSystem causality_equations_serial(const CoordinateIndex& index, CausalityMode mode) {
    return generate(index, mode, false);
}

EquationSystem qnorm_equations(const CoordinateIndex& index) {
    EquationSystem system(index.size());
    for (std::size_t c = 0; c + 1 < index.contexts().size(); ++c) {
        EquationRow row;
        row.label = "quasi-norm @" + std::to_string(c) + "~" + std::to_string(c + 1);
        for (std::size_t t = 0; t < index.contexts()[c].size(); ++t)
            row.coefficients[static_cast<std::uint32_t>(index.coordinate(c, t))] = 1;
        for (std::size_t t = 0; t < index.contexts()[c + 1].size(); ++t)
            row.coefficients[static_cast<std::uint32_t>(index.coordinate(c + 1, t))] = -1;
        system.add(std::move(row));
    }
    return system;
}

EquationSystem norm_rows(const CoordinateIndex& index) {
    EquationSystem system(index.size());
    for (std::size_t c = 0; c < index.contexts().size(); ++c) {
        EquationRow row;
        row.label = "norm @" + std::to_string(c);
        row.rhs = 1;
        for (std::size_t t = 0; t < index.contexts()[c].size(); ++t)
            row.coefficients[static_cast<std::uint32_t>(index.coordinate(c, t))] = 1;
        system.add(std::move(row));
    }
    return system;
}

std::vector<Rational> profile_vector(const CoordinateIndex& index,
                                     const std::vector<std::size_t>& profile) {
    if (profile.size() != index.contexts().size())
        throw std::invalid_argument("one joint output per context expected");
    std::vector<Rational> u(index.size(), Rational(0));
    for (std::size_t c = 0; c < profile.size(); ++c) {
        if (profile[c] >= index.contexts()[c].size())
            throw std::out_of_range("joint output index out of range");
        u[index.coordinate(c, profile[c])] = 1;
    }
    return u;
}

Causaltope::Causaltope(Cover cover, OutputFamily outputs, CausalityMode mode)
    : index_(std::move(cover), std::move(outputs)),
      caus_(causality_equations(index_, mode)),
      qnorm_(qnorm_equations(index_)) {}

Causaltope Causaltope::standard(const SpaceRef& space, const OutputFamily& outputs,
                                CausalityMode mode) {
    return Causaltope(Cover::standard(space), outputs, mode);
}

Causaltope Causaltope::solipsistic(const SpaceRef& space, const OutputFamily& outputs,
                                   CausalityMode mode) {
    return Causaltope(Cover::fully_solipsistic(space), outputs, mode);
}

Causaltope::Causaltope(CoordinateIndex index, EquationSystem caus, EquationSystem qnorm)
    : index_(std::move(index)), caus_(std::move(caus)), qnorm_(std::move(qnorm)) {}

const EquationSystem& Causaltope::reduced() const {
    if (!reduced_) {
        RrefBuilder builder(index_.size());
        builder.absorb_all(caus_);
        builder.absorb_all(qnorm_);
        reduced_ = builder.reduced();
    }
    return *reduced_;
}

bool Causaltope::contains(const std::vector<Rational>& u) const {
    if (u.size() != index_.size()) return false;
    for (const auto& x : u)
        if (x < 0) return false;
    const EquationSystem norms = norm_rows(index_);
    for (const auto& row : norms.rows())
        if (residual(row, u) != 0) return false;
    for (const auto& row : caus_.rows())
        if (residual(row, u) != 0) return false;
    return true;
}

bool Causaltope::contains(const std::vector<double>& u, double tolerance) const {
    if (u.size() != index_.size()) return false;
    for (double x : u)
        if (x < -tolerance) return false;
    const EquationSystem norms = norm_rows(index_);
    for (const auto& row : norms.rows())
        if (std::abs(residual(row, u)) > tolerance) return false;
    for (const auto& row : caus_.rows())
        if (std::abs(residual(row, u)) > tolerance) return false;
    return true;
}

namespace {

std::string alignment_key(const Lowerset& context) {
    if (auto join = pf_join_all(context.maxima())) return "J:" + to_string(*join);
    return "K:" + context.key();
}

// Column translation sending the second index's coordinates onto the first's:
// contexts are matched by the join of their maxima, slots positionally by
// event and alphabet.
std::vector<std::uint32_t> align_columns(const CoordinateIndex& a, const CoordinateIndex& b) {
    if (a.size() != b.size() || a.contexts().size() != b.contexts().size())
        throw std::invalid_argument("causaltopes live over different coordinates");
    std::map<std::string, std::size_t> a_position;
    for (std::size_t ca = 0; ca < a.contexts().size(); ++ca)
        if (!a_position.emplace(alignment_key(a.contexts()[ca].context()), ca).second)
            throw std::invalid_argument("ambiguous context alignment");
    std::vector<std::uint32_t> map(b.size());
    for (std::size_t cb = 0; cb < b.contexts().size(); ++cb) {
        auto it = a_position.find(alignment_key(b.contexts()[cb].context()));
        if (it == a_position.end())
            throw std::invalid_argument("contexts do not align between the causaltopes");
        const ContextLayout& la = a.contexts()[it->second];
        const ContextLayout& lb = b.contexts()[cb];
        if (la.slot_count() != lb.slot_count() || la.size() != lb.size())
            throw std::invalid_argument("context shapes do not align between the causaltopes");
        for (std::size_t s = 0; s < la.slot_count(); ++s)
            if (la.slots()[s].cls.event != lb.slots()[s].cls.event ||
                la.slots()[s].alphabet != lb.slots()[s].alphabet)
                throw std::invalid_argument("context slots do not align between the causaltopes");
        for (std::size_t t = 0; t < lb.size(); ++t)
            map[b.coordinate(cb, t)] = static_cast<std::uint32_t>(a.coordinate(it->second, t));
    }
    return map;
}

EquationSystem translate(const EquationSystem& system, const std::vector<std::uint32_t>& map,
                         std::size_t width) {
    EquationSystem out(width);
    for (const auto& row : system.rows()) {
        EquationRow moved;
        moved.label = row.label;
        moved.rhs = row.rhs;
        for (const auto& [col, coeff] : row.coefficients) moved.coefficients[map[col]] = coeff;
        out.add(std::move(moved));
    }
    return out;
}

}  // namespace

TopeOrder compare(const Causaltope& a, const Causaltope& b) {
    const auto map = align_columns(a.index(), b.index());
    RrefBuilder ra(a.index().size());
    ra.absorb_all(a.causality());
    ra.absorb_all(a.quasi_norm());
    const EquationSystem b_caus = translate(b.causality(), map, a.index().size());
    const EquationSystem b_qnorm = translate(b.quasi_norm(), map, a.index().size());
    RrefBuilder rb(a.index().size());
    rb.absorb_all(b_caus);
    rb.absorb_all(b_qnorm);
    RrefBuilder ru = ra;
    ru.absorb_all(b_caus);
    ru.absorb_all(b_qnorm);
    const bool b_implied = ru.rank() == ra.rank();   // solutions of a within solutions of b
    const bool a_implied = ru.rank() == rb.rank();
    if (a_implied && b_implied) return TopeOrder::equal;
    if (b_implied) return TopeOrder::subset;
    if (a_implied) return TopeOrder::superset;
    return TopeOrder::incomparable;
}

Causaltope intersect(const Causaltope& a, const Causaltope& b) {
    const auto map = align_columns(a.index(), b.index());
    EquationSystem caus(a.index().size());
    caus.append(a.causality(), "L:");
    caus.append(translate(b.causality(), map, a.index().size()), "R:");
    return Causaltope(a.index(), std::move(caus), a.quasi_norm());
}

EquationSystem causality_onto(const Causaltope& onto, const Causaltope& from) {
    const auto map = align_columns(onto.index(), from.index());
    return translate(from.causality(), map, onto.index().size());
}

Embedding::Embedding(const Cover& ambient, const OutputFamily& outputs, const SpaceRef& finer)
    : Embedding(induce_cover(ambient, finer), ambient, outputs) {}

Embedding::Embedding(const InducedCover& induced, const Cover& ambient,
                     const OutputFamily& outputs)
    : domain_(induced.cover, outputs), codomain_(ambient, outputs) {
    terms_.assign(codomain_.size(), {});
    for (std::size_t c = 0; c < codomain_.contexts().size(); ++c) {
        const ContextLayout& ambient_layout = codomain_.contexts()[c];
        const Lowerset& restriction = induced.induced[c];
        const std::size_t host = induced.host_context[c];
        const ContextLayout& host_layout = domain_.contexts()[host];
        const ContextLayout restriction_layout(restriction, outputs);
        const auto collapse = induced_class_map(ambient_layout.context(), restriction);
        const auto inclusion = class_inclusion_map(restriction, host_layout.context());
        // Domain coordinates of the host block, bucketed by the joint output
        // they restrict to on the induced lowerset.
        std::vector<std::vector<std::uint32_t>> buckets(restriction_layout.size());
        std::vector<Output> values(restriction_layout.slot_count());
        for (std::size_t t = 0; t < host_layout.size(); ++t) {
            for (std::size_t s = 0; s < restriction_layout.slot_count(); ++s)
                values[s] = host_layout.value_of(t, inclusion[s]);
            buckets[restriction_layout.index_of(values)].push_back(
                static_cast<std::uint32_t>(domain_.coordinate(host, t)));
        }
        std::vector<char> assigned(restriction_layout.slot_count());
        for (std::size_t o = 0; o < ambient_layout.size(); ++o) {
            std::fill(assigned.begin(), assigned.end(), 0);
            bool consistent = true;
            for (std::size_t s = 0; s < ambient_layout.slot_count() && consistent; ++s) {
                const std::size_t target = collapse[s];
                const Output v = ambient_layout.value_of(o, s);
                if (assigned[target] && values[target] != v)
                    consistent = false;
                else {
                    values[target] = v;
                    assigned[target] = 1;
                }
            }
            if (!consistent) continue;
            for (char flag : assigned)
                if (!flag) throw std::logic_error("tip class of the restriction left unassigned");
            terms_[codomain_.coordinate(c, o)] = buckets[restriction_layout.index_of(values)];
        }
    }
}

namespace {

template <typename Scalar>
std::vector<Scalar> apply_terms(const std::vector<std::vector<std::uint32_t>>& terms,
                                const std::vector<Scalar>& v, std::size_t domain_size) {
    if (v.size() != domain_size)
        throw std::invalid_argument("vector does not match the domain coordinates");
    std::vector<Scalar> out(terms.size(), Scalar(0));
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::uint32_t t : terms[i]) out[i] += v[t];
    return out;
}

}  // namespace

std::vector<Rational> Embedding::apply(const std::vector<Rational>& v) const {
    return apply_terms(terms_, v, domain_.size());
}

std::vector<double> Embedding::apply(const std::vector<double>& v) const {
    return apply_terms(terms_, v, domain_.size());
}

}  // namespace ct
