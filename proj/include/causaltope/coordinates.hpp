#pragma once
// Joint-output coordinates over a cover.  Each context contributes one slot
// per tip class; its joint outputs are indexed in mixed radix with the last
// slot fastest, and context blocks are concatenated in cover order.  Causal
// distributions, equation systems and deterministic tables all address their
// coordinates through this layout.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causaltope/cover.hpp"

namespace ct {

using Output = int;
using OutputFamily = std::map<EventId, std::vector<Output>>;

// {0,1} at every listed event.
OutputFamily binary_outputs(const std::vector<EventId>& events);
// The same alphabet as the inputs at every event.
OutputFamily outputs_like(const InputFamily& inputs);

// One output slot of a context: a tip class with its output alphabet.
struct Slot {
    TipClass cls;
    std::vector<Output> alphabet;
};

// Mixed-radix layout of one context's joint outputs.
class ContextLayout {
public:
    ContextLayout(Lowerset context, const OutputFamily& outputs);

    const Lowerset& context() const { return context_; }
    const std::vector<Slot>& slots() const { return slots_; }
    std::size_t slot_count() const { return slots_.size(); }
    // Number of joint outputs.
    std::size_t size() const { return size_; }

    // Position of a slot's value inside its alphabet; throws when absent.
    std::size_t position(std::size_t slot, Output value) const;
    std::size_t index_of(const std::vector<Output>& values) const;
    std::vector<Output> values_at(std::size_t index) const;
    Output value_of(std::size_t index, std::size_t slot) const;

private:
    Lowerset context_;
    std::vector<Slot> slots_;
    std::vector<std::size_t> stride_;
    std::size_t size_;
};

// Layout of a whole cover: one block per context, in cover order.
class CoordinateIndex {
public:
    CoordinateIndex(Cover cover, OutputFamily outputs);

    const Cover& cover() const { return cover_; }
    const OutputFamily& outputs() const { return outputs_; }
    const std::vector<ContextLayout>& contexts() const { return contexts_; }
    std::size_t size() const { return total_; }
    std::size_t offset(std::size_t context) const { return offset_[context]; }
    // Global coordinate of a joint output inside a context block.
    std::size_t coordinate(std::size_t context, std::size_t joint_index) const {
        return offset_[context] + joint_index;
    }

private:
    Cover cover_;
    OutputFamily outputs_;
    std::vector<ContextLayout> contexts_;
    std::vector<std::size_t> offset_;
    std::size_t total_;
};

}  // namespace ct
