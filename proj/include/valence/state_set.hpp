#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace valence {

// Fixed-universe bitset over control states.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : bits_((universe + 63) / 64, 0) {}

    void insert(std::size_t s) { bits_[s >> 6] |= std::uint64_t{1} << (s & 63); }
    bool contains(std::size_t s) const { return (bits_[s >> 6] >> (s & 63)) & 1u; }
    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool subset_of(const StateSet& o) const {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~o.bits_[i]) return false;
        return true;
    }
    StateSet& operator|=(const StateSet& o) {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
        return *this;
    }
    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            for (auto w = bits_[i]; w; w &= w - 1) out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        return out;
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;
    friend bool operator<(const StateSet& a, const StateSet& b) { return a.bits_ < b.bits_; }

private:
    std::vector<std::uint64_t> bits_;
};

// Every set of `older` contains some set of `newer`.
inline bool dominates(const std::vector<StateSet>& newer, const std::vector<StateSet>& older) {
    for (const auto& o : older) {
        bool covered = false;
        for (const auto& n : newer)
            if (n.subset_of(o)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

}  // namespace valence
