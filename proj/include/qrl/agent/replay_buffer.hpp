#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl::agent {

struct Transition {
    std::array<double, 4> state{};
    int action = 0;
    double reward = 0.0;
    std::array<double, 4> next_state{};
    bool terminal = false;  // environment ended the episode for real
    bool truncated = false; // step cap cut it off
};

// Fixed-capacity ring; once full, each push evicts the oldest transition.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
        data_.reserve(capacity);
    }

    void push(const Transition& t) {
        if (data_.size() < capacity_) {
            data_.push_back(t);
        } else {
            data_[head_] = t;
            head_ = (head_ + 1) % capacity_;
        }
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }

    // logical index 0 is the oldest stored transition
    const Transition& at(std::size_t i) const {
        if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
        return data_[(head_ + i) % data_.size()];
    }

    // uniform without replacement within the batch
    std::vector<Transition> sample(std::size_t batch, Rng& rng) const {
        if (batch > data_.size())
            throw std::invalid_argument("ReplayBuffer::sample: batch exceeds stored transitions");
        std::unordered_set<int> picked;
        picked.reserve(batch * 2);
        std::vector<Transition> out;
        out.reserve(batch);
        while (out.size() < batch) {
            const int idx = rng.uniform_int(static_cast<int>(data_.size()));
            if (picked.insert(idx).second) out.push_back(data_[idx]);
        }
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> data_;
};

} // namespace qrl::agent
