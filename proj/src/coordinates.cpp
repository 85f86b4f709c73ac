#include "causaltope/coordinates.hpp"

#include <algorithm>
#include <stdexcept>

namespace ct {

OutputFamily binary_outputs(const std::vector<EventId>& events) {
    OutputFamily f;
    for (const auto& e : events) f[e] = {0, 1};
    return f;
}

OutputFamily outputs_like(const InputFamily& inputs) {
    OutputFamily f;
    for (const auto& [event, alphabet] : inputs) f[event] = alphabet;
    return f;
}

ContextLayout::ContextLayout(Lowerset context, const OutputFamily& outputs)
    : context_(std::move(context)) {
    for (auto& cls : tip_classes(context_)) {
        auto it = outputs.find(cls.event);
        if (it == outputs.end() || it->second.empty())
            throw std::invalid_argument("no output alphabet for event " + cls.event);
        slots_.push_back(Slot{std::move(cls), it->second});
    }
    stride_.assign(slots_.size(), 1);
    size_ = 1;
    for (std::size_t s = slots_.size(); s-- > 0;) {
        stride_[s] = size_;
        size_ *= slots_[s].alphabet.size();
    }
}

std::size_t ContextLayout::position(std::size_t slot, Output value) const {
    const auto& alphabet = slots_[slot].alphabet;
    auto it = std::find(alphabet.begin(), alphabet.end(), value);
    if (it == alphabet.end())
        throw std::invalid_argument("output value outside the slot's alphabet");
    return static_cast<std::size_t>(it - alphabet.begin());
}

std::size_t ContextLayout::index_of(const std::vector<Output>& values) const {
    if (values.size() != slots_.size())
        throw std::invalid_argument("one output value per slot expected");
    std::size_t index = 0;
    for (std::size_t s = 0; s < slots_.size(); ++s) index += stride_[s] * position(s, values[s]);
    return index;
}

std::vector<Output> ContextLayout::values_at(std::size_t index) const {
    if (index >= size_) throw std::out_of_range("joint output index out of range");
    std::vector<Output> values(slots_.size());
    for (std::size_t s = 0; s < slots_.size(); ++s)
        values[s] = slots_[s].alphabet[(index / stride_[s]) % slots_[s].alphabet.size()];
    return values;
}

Output ContextLayout::value_of(std::size_t index, std::size_t slot) const {
    if (index >= size_) throw std::out_of_range("joint output index out of range");
    return slots_[slot].alphabet[(index / stride_[slot]) % slots_[slot].alphabet.size()];
}

CoordinateIndex::CoordinateIndex(Cover cover, OutputFamily outputs)
    : cover_(std::move(cover)), outputs_(std::move(outputs)), total_(0) {
    for (const auto& context : cover_.contexts()) {
        contexts_.emplace_back(context, outputs_);
        offset_.push_back(total_);
        total_ += contexts_.back().size();
    }
}

}  // namespace ct
