#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace secoda {

// Open-addressing hash table counting 64-bit constellation codes. Capacity
// grows with the number of distinct codes, not with the number of cases.
class FrequencyTable {
public:
    static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

    explicit FrequencyTable(std::size_t expected_distinct = 16);

    // `code` must differ from kEmpty.
    void add(std::uint64_t code, std::uint32_t count = 1);
    std::uint32_t count(std::uint64_t code) const;
    void merge(const FrequencyTable& other);

    std::size_t distinct() const { return size_; }

private:
    std::size_t slot_for(std::uint64_t code) const;
    void grow();

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> counts_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
};

// Per-code multiplicities of `codes`, looked up back per element. Chunks are
// counted concurrently when partitions > 1 and merged in chunk order.
std::vector<std::uint32_t> count_codes(std::span<const std::uint64_t> codes, std::size_t partitions);

}  // namespace secoda
