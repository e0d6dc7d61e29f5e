#include "safectrl/replay.hpp"

#include <stdexcept>
#include <unordered_set>

namespace safectrl {

void ReplayBuffer::push(Transition t) {
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(t));
    } else {
        storage_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count,
                                                    std::mt19937_64& rng) const {
    if (count > storage_.size())
        throw std::invalid_argument("replay sample larger than buffer");
    // Floyd's sampling: O(count) distinct indices
    std::unordered_set<std::size_t> chosen;
    std::vector<const Transition*> out;
    out.reserve(count);
    const std::size_t n = storage_.size();
    for (std::size_t j = n - count; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> dist(0, j);
        std::size_t pick = dist(rng);
        if (!chosen.insert(pick).second) pick = j, chosen.insert(j);
        out.push_back(&storage_[pick]);
    }
    return out;
}

}  // namespace safectrl
