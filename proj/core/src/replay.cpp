#include "uamcap/replay.hpp"

#include <stdexcept>

#include "uamcap/rng.hpp"

namespace uam {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
    if (storage_.size() < capacity_) {
        storage_.push_back(t);
    } else {
        storage_[next_] = t;
        next_ = (next_ + 1) % capacity_;
    }
    ++total_pushed_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= storage_.size()) throw std::out_of_range("ReplayBuffer::at");
    if (storage_.size() < capacity_) return storage_[i];
    return storage_[(next_ + i) % capacity_];
}

void ReplayBuffer::sample(std::size_t n, std::mt19937_64& rng, std::vector<Transition>& out) const {
    if (storage_.size() < n) {
        throw std::invalid_argument("ReplayBuffer::sample: fewer stored transitions than requested");
    }
    out.clear();
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(storage_[uniform_index(rng, storage_.size())]);
    }
}

}  // namespace uam
