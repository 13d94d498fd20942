#include "secoda/frequency_table.hpp"

#include <algorithm>
#include <bit>
#include <thread>
#include <utility>

namespace secoda {

namespace {

std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

FrequencyTable::FrequencyTable(std::size_t expected_distinct) {
    const auto capacity = std::bit_ceil(std::max<std::size_t>(16, expected_distinct * 2));
    keys_.assign(capacity, kEmpty);
    counts_.assign(capacity, 0);
    mask_ = capacity - 1;
}

std::size_t FrequencyTable::slot_for(std::uint64_t code) const {
    auto slot = static_cast<std::size_t>(mix(code)) & mask_;
    while (keys_[slot] != kEmpty && keys_[slot] != code) slot = (slot + 1) & mask_;
    return slot;
}

void FrequencyTable::add(std::uint64_t code, std::uint32_t count) {
    auto slot = slot_for(code);
    if (keys_[slot] == kEmpty) {
        // Keep the load factor at or below 1/2.
        if ((size_ + 1) * 2 > keys_.size()) {
            grow();
            slot = slot_for(code);
        }
        keys_[slot] = code;
        ++size_;
    }
    counts_[slot] += count;
}

std::uint32_t FrequencyTable::count(std::uint64_t code) const {
    const auto slot = slot_for(code);
    return keys_[slot] == kEmpty ? 0 : counts_[slot];
}

void FrequencyTable::merge(const FrequencyTable& other) {
    for (std::size_t i = 0; i < other.keys_.size(); ++i) {
        if (other.keys_[i] != kEmpty) add(other.keys_[i], other.counts_[i]);
    }
}

void FrequencyTable::grow() {
    auto old_keys = std::exchange(keys_, std::vector<std::uint64_t>(keys_.size() * 2, kEmpty));
    auto old_counts = std::exchange(counts_, std::vector<std::uint32_t>(counts_.size() * 2, 0));
    mask_ = keys_.size() - 1;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
        if (old_keys[i] == kEmpty) continue;
        const auto slot = slot_for(old_keys[i]);
        keys_[slot] = old_keys[i];
        counts_[slot] = old_counts[i];
    }
}

namespace {

// More chunks than this only adds thread start-up cost.
constexpr std::size_t kMaxPartitions = 256;

}  // namespace

std::vector<std::uint32_t> count_codes(std::span<const std::uint64_t> codes, std::size_t partitions) {
    const std::size_t n = codes.size();
    partitions = std::clamp<std::size_t>(partitions, 1, std::clamp<std::size_t>(n, 1, kMaxPartitions));

    FrequencyTable merged(std::min<std::size_t>(n, 1024));
    if (partitions == 1) {
        for (const auto code : codes) merged.add(code);
    } else {
        std::vector<FrequencyTable> tables;
        tables.reserve(partitions);
        for (std::size_t p = 0; p < partitions; ++p) tables.emplace_back(1024);
        {
            std::vector<std::jthread> workers;
            workers.reserve(partitions);
            for (std::size_t p = 0; p < partitions; ++p) {
                const auto begin = n * p / partitions;
                const auto end = n * (p + 1) / partitions;
                workers.emplace_back([&tables, codes, p, begin, end] {
                    for (auto i = begin; i < end; ++i) tables[p].add(codes[i]);
                });
            }
        }
        for (const auto& table : tables) merged.merge(table);
    }

    std::vector<std::uint32_t> frequencies(n);
    for (std::size_t i = 0; i < n; ++i) frequencies[i] = merged.count(codes[i]);
    return frequencies;
}

}  // namespace secoda
