#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "uamcap/airspace.hpp"
#include "uamcap/vec2.hpp"

namespace uam {

struct Transition {
    std::array<double, kObservationDim> state{};
    Vec2 action;
    double reward = 0.0;
    std::array<double, kObservationDim> next_state{};
    bool terminal = false;
};

/// Bounded FIFO of transitions; once full, every push evicts the oldest
/// entry. Storage grows on demand up to the capacity, so an oversized
/// capacity costs nothing until filled.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);

    /// n draws uniform with replacement into out (cleared first).
    /// Throws std::invalid_argument when fewer than n transitions are stored.
    void sample(std::size_t n, std::mt19937_64& rng, std::vector<Transition>& out) const;

    /// i = 0 is the oldest stored transition.
    const Transition& at(std::size_t i) const;

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t total_pushed() const { return total_pushed_; }

  private:
    std::vector<Transition> storage_;
    std::size_t capacity_;
    std::size_t next_ = 0;  // write cursor once storage_ is full
    std::uint64_t total_pushed_ = 0;
};

}  // namespace uam
