#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace secoda {

// Deterministic random source for the dataset generators.
//
// The raw stream is std::mt19937_64, which the standard fully specifies. The
// derived draws are implemented here rather than through <random>
// distributions so that a seed yields the same numbers on every standard
// library:
//   uniform()  top 53 bits of one raw draw times 2^-53, in [0, 1)
//   normal()   Box-Muller, cosine branch, two uniforms per draw
//   index(n)   rejection sampling on the raw stream, in [0, n)
//   shuffle()  Fisher-Yates from the back using index()
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    std::uint64_t index(std::uint64_t n);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(index(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace secoda
