#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "safectrl/encoder.hpp"

namespace safectrl {

struct Transition {
    std::array<float, StateVector36::kSize> state{};
    int action = 0;
    float reward = 0.0f;
    std::array<float, StateVector36::kSize> next_state{};
    bool done = false;
};

/// FIFO experience store with uniform sampling (no duplicate slots within a
/// batch).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 100'000) : capacity_(capacity) {}

    void push(Transition t);

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }

    /// Samples `count` distinct slots. Throws std::invalid_argument when
    /// count exceeds the current size.
    std::vector<const Transition*> sample(std::size_t count, std::mt19937_64& rng) const;

private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace safectrl
