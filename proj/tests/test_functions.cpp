// Unit tests for causal functions: enumeration, extension, consistency,
// separability and deterministic tables.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "causaltope/causal_function.hpp"
#include "causaltope/causal_order.hpp"
#include "causaltope/compose.hpp"
#include "causaltope/coordinates.hpp"
#include "causaltope/cover.hpp"
#include "causaltope/history_space.hpp"
#include "causaltope/partial_function.hpp"

using namespace ct;

namespace {

HistorySpace chain_space(const std::vector<std::vector<EventId>>& levels) {
    InputFamily f;
    for (const auto& level : levels)
        for (const auto& e : level) f[e] = {0, 1};
    return space_from_order(CausalOrder::chain(levels), f);
}

SpaceRef fan_space() { return share(chain_space({{"A"}, {"B", "C"}})); }

// The controlled swap: A outputs its own input; when A reads 0 the totals
// copy B and C, when A reads 1 they exchange them.
CausalFunction make_cswap(const SpaceRef& fan) {
    auto whole = Lowerset::whole(fan);
    auto outputs = binary_outputs({"A", "B", "C"});
    std::vector<Output> values;
    for (const auto& cls : tip_classes(whole)) {
        const auto& h = fan->histories()[cls.members.front()];
        if (cls.event == "A") {
            values.push_back(h.at("A"));
        } else {
            EventId other = cls.event == "B" ? "C" : "B";
            values.push_back(h.at("A") == 0 ? h.at(cls.event) : h.at(other));
        }
    }
    return CausalFunction(whole, outputs, std::move(values));
}

CausalFunction function_at(const Lowerset& context, const OutputFamily& outputs,
                           std::uint64_t rank) {
    std::vector<Output> values;
    auto classes = tip_classes(context);
    std::vector<std::size_t> radix;
    for (const auto& cls : classes) radix.push_back(outputs.at(cls.event).size());
    values.resize(classes.size());
    for (std::size_t s = classes.size(); s-- > 0;) {
        values[s] = outputs.at(classes[s].event)[rank % radix[s]];
        rank /= radix[s];
    }
    return CausalFunction(context, outputs, std::move(values));
}

}  // namespace

TEST_CASE("causal functions hold one value per tip class") {
    auto ab = share(chain_space({{"A"}, {"B"}}));
    auto whole = Lowerset::whole(ab);
    auto outputs = binary_outputs({"A", "B"});
    REQUIRE(tip_classes(whole).size() == 6);  // 2 first-event classes + 4 totals

    // The identity function copies inputs to outputs.
    std::vector<Output> values;
    for (const auto& cls : tip_classes(whole))
        values.push_back(ab->histories()[cls.members.front()].at(cls.event));
    CausalFunction identity(whole, outputs, values);
    CHECK(identity.value_at("A", parse_partial_function("A:1")) == 1);
    CHECK(identity.value_at("B", parse_partial_function("A:0,B:1")) == 1);
    CHECK(identity.extended_output(parse_partial_function("A:0,B:1")) ==
          parse_partial_function("A:0,B:1"));
    CHECK(identity.extended_output(parse_partial_function("A:1")) ==
          parse_partial_function("A:1"));

    // Wrong arity and out-of-alphabet values are rejected.
    CHECK_THROWS_AS(CausalFunction(whole, outputs, {0, 1}), std::invalid_argument);
    values[0] = 7;
    CHECK_THROWS_AS(CausalFunction(whole, outputs, values), std::invalid_argument);

    CHECK(identity.to_string().substr(0, 12) == "{\"(A,A:0)\":0");
}

TEST_CASE("enumeration is canonical mixed radix and matches the free count") {
    auto ternary = share(HistorySpace::from_histories({parse_partial_function("A:0"),
                                                       parse_partial_function("A:1"),
                                                       parse_partial_function("A:2")}));
    auto whole = Lowerset::whole(ternary);
    auto outputs = binary_outputs({"A"});
    CHECK(causal_function_count(whole, outputs) == 8);
    auto fns = enumerate_causal_functions(whole, outputs);
    REQUIRE(fns.size() == 8);
    CHECK(fns[0].values() == std::vector<Output>{0, 0, 0});
    CHECK(fns[1].values() == std::vector<Output>{0, 0, 1});
    CHECK(fns[2].values() == std::vector<Output>{0, 1, 0});
    CHECK(fns[7].values() == std::vector<Output>{1, 1, 1});
    for (std::uint64_t r = 0; r < 8; ++r) CHECK(fns[r] == function_at(whole, outputs, r));

    // A single-history space supports exactly two binary functions.
    auto single = share(HistorySpace::from_histories({parse_partial_function("A:0")}));
    CHECK(enumerate_causal_functions(Lowerset::whole(single), binary_outputs({"A"})).size() == 2);

    // The free-product count on the three-event fan.
    auto fan = fan_space();
    auto fan_whole = Lowerset::whole(fan);
    auto fan_outputs = binary_outputs({"A", "B", "C"});
    CHECK(causal_function_count(fan_whole, fan_outputs) == 262144);
    std::size_t seen = 0;
    for_each_causal_function(fan_whole, fan_outputs, [&](const CausalFunction&) {
        ++seen;
        return true;
    });
    CHECK(seen == 262144);
    CHECK_THROWS_AS(
        for_each_causal_function(fan_whole, fan_outputs,
                                 [](const CausalFunction&) { return true; }, {}, 1000),
        std::runtime_error);

    // Each of the four causal completions is free on its fourteen histories.
    for (const auto& completion : causal_completions(*fan).completions) {
        auto finer = share(completion);
        CHECK(causal_function_count(Lowerset::whole(finer), fan_outputs) == 16384);
    }
}

TEST_CASE("support filtering prunes exactly") {
    auto ab = share(chain_space({{"A"}, {"B"}}));
    auto whole = Lowerset::whole(ab);
    auto outputs = binary_outputs({"A", "B"});
    auto all = enumerate_causal_functions(whole, outputs);
    REQUIRE(all.size() == 64);

    // Accept a random target set via its prefix filter and check that
    // branch-and-bound enumeration returns exactly the target.
    std::mt19937 rng(7);
    for (int round = 0; round < 5; ++round) {
        std::set<std::vector<Output>> target;
        for (const auto& f : all)
            if (rng() % 3 == 0) target.insert(f.values());
        SupportFilter filter = [&](const std::vector<Output>& prefix) {
            for (const auto& full : target)
                if (std::equal(prefix.begin(), prefix.end(), full.begin())) return true;
            return false;
        };
        auto got = enumerate_causal_functions(whole, outputs, filter);
        std::set<std::vector<Output>> seen;
        for (const auto& f : got) seen.insert(f.values());
        CHECK(seen == target);
    }

    // Pinning the first slot halves the fan enumeration.
    auto fan = fan_space();
    std::size_t seen = 0;
    for_each_causal_function(
        Lowerset::whole(fan), binary_outputs({"A", "B", "C"}),
        [&](const CausalFunction&) {
            ++seen;
            return true;
        },
        [](const std::vector<Output>& prefix) { return prefix[0] == 0; });
    CHECK(seen == 131072);
}

TEST_CASE("extension and collapse are mutually inverse") {
    auto fan = fan_space();
    auto whole = Lowerset::whole(fan);
    auto outputs = binary_outputs({"A", "B", "C"});
    auto cswap = make_cswap(fan);
    CHECK(cswap.extended_output(parse_partial_function("A:1,B:0,C:1")) ==
          parse_partial_function("A:1,B:1,C:0"));
    CHECK(cswap.extended_output(parse_partial_function("A:0,B:0,C:1")) ==
          parse_partial_function("A:0,B:0,C:1"));

    auto ext = extend(cswap);
    CHECK(ext.table().size() == fan->ext().size());
    CHECK(is_consistent(ext.table()));
    CHECK(collapse(ext, whole, outputs) == cswap);

    // Random functions on assorted lowersets round-trip as well.
    std::mt19937 rng(11);
    auto theta = share(HistorySpace::from_histories(
        {parse_partial_function("A:0"), parse_partial_function("A:1"),
         parse_partial_function("B:0"), parse_partial_function("A:0,B:1"),
         parse_partial_function("A:1,B:1")}));
    for (const auto& parent : {fan, theta}) {
        auto out = binary_outputs(parent->events());
        for (const auto& context : enumerate_lowersets(parent)) {
            auto count = causal_function_count(context, out).get_ui();
            for (int round = 0; round < 3; ++round) {
                auto f = function_at(context, out, rng() % count);
                auto table = extend(f).table();
                CHECK(is_consistent(table));
                CHECK(collapse(ExtendedCausalFunction(table), context, out) == f);
            }
        }
    }

    // Breaking one entry of a consistent table is detected.
    auto broken = ext.table();
    broken[parse_partial_function("A:1")] = parse_partial_function("A:0");
    CHECK(!is_consistent(broken));
    // Entries must assign outputs exactly on their key's domain.
    broken[parse_partial_function("A:1")] = parse_partial_function("A:1,B:0");
    CHECK_THROWS_AS(is_consistent(broken), std::invalid_argument);
}

TEST_CASE("the controlled swap is inseparable with a checkable witness") {
    auto fan = fan_space();
    auto cswap = make_cswap(fan);
    auto completions = causal_completions(*fan).completions;
    REQUIRE(completions.size() == 4);

    auto result = is_separable(cswap, completions);
    CHECK(!result.separable);

    auto witness = find_inseparability_witness(cswap, completions);
    REQUIRE(witness.has_value());
    CHECK(check_witness(cswap, *witness, completions));
    // The first witness in canonical order sits at the exchanging branch: the
    // exchange only shows once B and C receive different inputs, and dropping
    // A never lands inside a refinement's closure (A always comes first), so
    // only B and C need clashes.
    CHECK(witness->k == parse_partial_function("A:1,B:0,C:0"));
    CHECK(witness->dropped == std::vector<EventId>{"B", "C"});
    REQUIRE(witness->clashing.size() == 2);
    CHECK(witness->clashing[0] == parse_partial_function("A:1,B:1,C:0"));
    CHECK(witness->clashing[1] == parse_partial_function("A:1,B:0,C:1"));
    CHECK(witness->disagreeing == std::vector<EventId>{"C", "B"});

    // Tampered copies of the witness fail the check.
    auto bad = *witness;
    bad.disagreeing[0] = bad.dropped[0];
    CHECK(!check_witness(cswap, bad, completions));
    bad = *witness;
    bad.clashing[0] = parse_partial_function("A:0");
    CHECK(!check_witness(cswap, bad, completions));
    bad = *witness;
    bad.dropped = {"A", "B", "C"};
    bad.clashing.push_back(bad.clashing[0]);
    bad.disagreeing.push_back("B");
    CHECK(!check_witness(cswap, bad, completions));

    // A function read off a fixed total order is separable.
    auto chain_abc = chain_space({{"A"}, {"B"}, {"C"}});
    auto whole = Lowerset::whole(fan);
    auto outputs = binary_outputs({"A", "B", "C"});
    std::map<PartialFunction, PartialFunction> table;
    for (const auto& k : whole.closure()) {
        PartialFunction::Entries out;
        for (const auto& [event, value] : k.entries()) out[event] = 0;
        table[k] = PartialFunction(std::move(out));
    }
    auto constant = collapse(ExtendedCausalFunction(table), whole, outputs);
    auto verdict = is_separable(constant, completions);
    CHECK(verdict.separable);
    CHECK(find_inseparability_witness(constant, completions) == std::nullopt);

    // The plain exchange (B reports C's input and vice versa, ignoring A) is
    // inseparable, and its witnesses likewise only need clashes at B and C:
    // its outputs never depend on A at all.
    std::vector<Output> swap_values;
    for (const auto& cls : tip_classes(whole)) {
        const auto& h = fan->histories()[cls.members.front()];
        if (cls.event == "A")
            swap_values.push_back(h.at("A"));
        else
            swap_values.push_back(h.at(cls.event == "B" ? "C" : "B"));
    }
    CausalFunction swap_fn(whole, outputs, swap_values);
    CHECK(!is_separable(swap_fn, completions).separable);
    auto swap_witness = find_inseparability_witness(swap_fn, completions);
    REQUIRE(swap_witness.has_value());
    CHECK(check_witness(swap_fn, *swap_witness, completions));
    CHECK(swap_witness->dropped == std::vector<EventId>{"B", "C"});

    // Refinements that are not causally complete refinements are rejected.
    CHECK_THROWS_AS(is_separable(cswap, {chain_space({{"A"}, {"B"}})}), std::invalid_argument);
}

TEST_CASE("separability agrees with the brute-force restriction oracle") {
    auto fan = fan_space();
    auto whole = Lowerset::whole(fan);
    auto outputs = binary_outputs({"A", "B", "C"});
    auto completions = causal_completions(*fan).completions;
    REQUIRE(completions.size() == 4);

    // Restrict every causal function of every completion to the fan: the
    // separable functions are exactly the images.
    auto slots = tip_classes(whole);
    std::set<std::vector<Output>> separable;
    for (const auto& completion : completions) {
        auto finer = share(completion);
        for_each_causal_function(Lowerset::whole(finer), outputs, [&](const CausalFunction& f) {
            std::vector<Output> restricted;
            restricted.reserve(slots.size());
            for (const auto& cls : slots)
                restricted.push_back(
                    f.extended_output(fan->histories()[cls.members.front()]).at(cls.event));
            separable.insert(std::move(restricted));
            return true;
        });
    }
    CHECK(separable.size() == 50176);
    CHECK(262144 - separable.size() == 211968);

    // Sampled agreement between the restriction oracle, the constraint
    // propagation and the witness search.
    std::mt19937 rng(23);
    for (int round = 0; round < 400; ++round) {
        auto f = function_at(whole, outputs, rng() % 262144);
        bool oracle = separable.count(f.values()) != 0;
        CHECK(is_separable(f, completions).separable == oracle);
        auto witness = find_inseparability_witness(f, completions);
        CHECK(witness.has_value() == !oracle);
        if (witness) CHECK(check_witness(f, *witness, completions));
    }
}

TEST_CASE("coordinate layouts index joint outputs in mixed radix") {
    auto ab = share(chain_space({{"A"}, {"B"}}));
    auto cover = Cover::standard(ab);
    CoordinateIndex coords(cover, binary_outputs({"A", "B"}));
    REQUIRE(coords.contexts().size() == 4);
    CHECK(coords.size() == 16);  // four contexts, two slots of two values each
    CHECK(coords.offset(2) == 8);
    const auto& layout = coords.contexts()[0];
    CHECK(layout.slot_count() == 2);
    CHECK(layout.size() == 4);
    CHECK(layout.index_of({1, 0}) == 2);
    CHECK(layout.values_at(2) == std::vector<Output>{1, 0});
    CHECK(layout.value_of(2, 0) == 1);
    CHECK_THROWS_AS(layout.index_of({5, 0}), std::invalid_argument);

    // Ternary outputs at one event, binary at the other.
    OutputFamily mixed{{"A", {0, 1, 2}}, {"B", {0, 1}}};
    CoordinateIndex wide(cover, mixed);
    CHECK(wide.size() == 4 * 6);
    CHECK(wide.contexts()[0].index_of({2, 1}) == 5);

    // Deterministic profiles: constant zero lands in column zero everywhere;
    // the identity lands at its own output tuple.
    auto whole = Lowerset::whole(ab);
    auto outputs = binary_outputs({"A", "B"});
    auto constant = function_at(whole, outputs, 0);
    CHECK(deterministic_profile(constant, coords) ==
          std::vector<std::size_t>{0, 0, 0, 0});
    std::vector<Output> values;
    for (const auto& cls : tip_classes(whole))
        values.push_back(ab->histories()[cls.members.front()].at(cls.event));
    CausalFunction identity(whole, outputs, values);
    // Contexts sorted by key: A:0,B:0 | A:0,B:1 | A:1,B:0 | A:1,B:1.
    CHECK(deterministic_profile(identity, coords) == std::vector<std::size_t>{0, 1, 2, 3});
}
