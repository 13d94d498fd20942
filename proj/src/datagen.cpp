#include "secoda/datagen.hpp"

#include "secoda/error.hpp"
#include "secoda/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace secoda {
namespace {

constexpr std::array<std::string_view, 5> kNames{"classcircle", "mountain", "noisymix", "sword", "helix"};
constexpr std::array<std::size_t, 5> kSizes{422, 943, 3867, 7024, 1410};

// Coordinates are stored at micro-unit resolution to keep the files readable.
double tidy(double v) { return std::round(v * 1e6) / 1e6 + 0.0; }

// Collects rows, then emits them in shuffled order so that planted cases do
// not sit at predictable positions.
class TableBuilder {
public:
    TableBuilder(std::vector<std::string> numeric, std::vector<std::string> categorical)
        : numeric_names_(std::move(numeric)),
          categorical_names_(std::move(categorical)),
          numbers_(numeric_names_.size()),
          tokens_(categorical_names_.size()) {}

    void add(std::initializer_list<double> nums, std::initializer_list<std::string_view> cats,
             AnomalyLabel label = AnomalyLabel::Normal) {
        if (nums.size() != numbers_.size() || cats.size() != tokens_.size()) {
            throw std::logic_error("row shape does not match the table");
        }
        std::size_t c = 0;
        for (const double v : nums) numbers_[c++].push_back(tidy(v));
        c = 0;
        for (const auto t : cats) tokens_[c++].emplace_back(std::string(t));
        labels_.push_back(label);
    }

    std::size_t size() const { return labels_.size(); }
    double number(std::size_t row, std::size_t column) const { return numbers_[column][row]; }
    const std::string& token(std::size_t row, std::size_t column) const { return *tokens_[column][row]; }

    LabeledDataset finish(Rng& rng, std::size_t expected) {
        if (size() != expected) {
            throw std::logic_error(fmt::format("recipe produced {} cases, expected {}", size(), expected));
        }
        std::vector<std::size_t> order(size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span(order));

        std::vector<Column> columns;
        for (std::size_t c = 0; c < numbers_.size(); ++c) {
            std::vector<double> values(size());
            for (std::size_t r = 0; r < size(); ++r) values[r] = numbers_[c][order[r]];
            columns.push_back(Column::numeric(numeric_names_[c], std::move(values)));
        }
        for (std::size_t c = 0; c < tokens_.size(); ++c) {
            std::vector<std::optional<std::string>> cells(size());
            for (std::size_t r = 0; r < size(); ++r) cells[r] = tokens_[c][order[r]];
            columns.push_back(Column::categorical(categorical_names_[c], cells));
        }
        std::vector<AnomalyLabel> labels(size());
        for (std::size_t r = 0; r < size(); ++r) labels[r] = labels_[order[r]];
        return LabeledDataset(Dataset(std::move(columns)), std::move(labels));
    }

private:
    std::vector<std::string> numeric_names_;
    std::vector<std::string> categorical_names_;
    std::vector<std::vector<double>> numbers_;
    std::vector<std::vector<std::optional<std::string>>> tokens_;
    std::vector<AnomalyLabel> labels_;
};

// Row of the normal case with the largest value in `column`.
std::size_t argmax(const TableBuilder& table, std::size_t column, std::size_t skip = SIZE_MAX) {
    std::size_t best = SIZE_MAX;
    for (std::size_t r = 0; r < table.size(); ++r) {
        if (r == skip) continue;
        if (best == SIZE_MAX || table.number(r, column) > table.number(best, column)) best = r;
    }
    return best;
}

// Gaussian mountain over (x1, x2) with height x3. Both Type I plants sit far
// out on x1 but copy x2/x3 from the outermost normals, so only their x1 value
// is unusual. The Type IV plant has unremarkable x1/x2/x3 values taken one at
// a time, but floats high above the slope where it stands.
LabeledDataset mountain(Rng& rng) {
    constexpr std::size_t n = 943;
    TableBuilder t({"x1", "x2", "x3"}, {});
    for (std::size_t i = 0; i < n - 3; ++i) {
        const double x1 = rng.normal();
        const double x2 = rng.normal();
        const double x3 = 10.0 * std::exp(-(x1 * x1 + x2 * x2) / 2.0) + rng.normal(0.0, 0.25);
        t.add({x1, x2, x3}, {});
    }
    const std::size_t edge = argmax(t, 0);
    const std::size_t next = argmax(t, 0, edge);
    const double top = t.number(edge, 0);
    const double far_x1 = top + 2.5;
    const double mid_x1 = top + 1.25;
    t.add({far_x1, t.number(edge, 1) + rng.normal(0.0, 0.01), t.number(edge, 2) + rng.normal(0.0, 0.01)}, {},
          AnomalyLabel::TypeI);
    t.add({mid_x1, t.number(next, 1) + rng.normal(0.0, 0.01), t.number(next, 2) + rng.normal(0.0, 0.01)}, {},
          AnomalyLabel::TypeI);
    const double sy = rng.uniform() < 0.5 ? -1.0 : 1.0;
    t.add({rng.uniform(1.55, 1.75), sy * rng.uniform(1.4, 1.7), rng.uniform(8.3, 9.0)}, {}, AnomalyLabel::TypeIV);
    return t.finish(rng, n);
}

// Ring of radius 10. Red only ever comes as a triangle; circles are blue or
// green.
LabeledDataset classcircle(Rng& rng) {
    constexpr std::size_t n = 422;
    TableBuilder t({"x", "y"}, {"color", "shape"});
    auto ring = [&rng](double& x, double& y) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double radius = rng.normal(10.0, 0.4);
        x = radius * std::cos(angle);
        y = radius * std::sin(angle);
    };
    struct Kind {
        std::string_view color, shape;
        double cumulative;
    };
    constexpr std::array<Kind, 5> kinds{{{"red", "triangle", 0.30},
                                         {"blue", "circle", 0.55},
                                         {"blue", "triangle", 0.70},
                                         {"green", "circle", 0.90},
                                         {"green", "triangle", 1.00}}};
    double x = 0.0, y = 0.0;
    for (std::size_t i = 0; i < n - 3; ++i) {
        ring(x, y);
        const double u = rng.uniform();
        const auto kind = std::find_if(kinds.begin(), kinds.end() - 1, [u](const Kind& k) { return u < k.cumulative; });
        t.add({x, y}, {kind->color, kind->shape});
    }
    ring(x, y);
    t.add({x, y}, {"blue", "square"}, AnomalyLabel::TypeII);
    t.add({rng.uniform(19.0, 21.0), rng.normal(0.0, 1.0)}, {"green", "star"}, AnomalyLabel::TypeIII);
    ring(x, y);
    t.add({x, y}, {"red", "circle"}, AnomalyLabel::TypeV);
    return t.finish(rng, n);
}

// Green handle and crossguard, red blade, a few scattered points coloured by
// region. Type VI plants are red points inside the crossguard, above or below
// the blade's band.
LabeledDataset sword(Rng& rng) {
    constexpr std::size_t n = 7024;
    constexpr std::size_t handle = 1000;
    constexpr std::size_t guard = 3000;
    constexpr std::size_t scattered = 30;
    constexpr std::size_t type_vi = 6;
    constexpr std::size_t purple = 5;
    constexpr std::size_t blade = n - handle - guard - scattered - type_vi - purple - 2;
    TableBuilder t({"x", "y"}, {"color"});
    for (std::size_t i = 0; i < handle; ++i) t.add({rng.uniform(0.0, 14.0), rng.normal(800.0, 4.0)}, {"green"});
    for (std::size_t i = 0; i < guard; ++i) t.add({rng.uniform(14.0, 20.0), rng.uniform(700.0, 900.0)}, {"green"});
    for (std::size_t i = 0; i < blade; ++i) t.add({rng.uniform(20.0, 100.0), rng.normal(800.0, 6.0)}, {"red"});
    for (std::size_t i = 0; i < scattered; ++i) {
        const double y = rng.uniform(700.0, 900.0);
        if (i % 3 == 0) {
            t.add({rng.uniform(0.0, 14.0), y}, {"green"});
        } else {
            t.add({rng.uniform(20.0, 100.0), y}, {"red"});
        }
    }
    t.add({rng.uniform(55.0, 65.0), rng.normal(800.0, 3.0)}, {"yellow"}, AnomalyLabel::TypeII);
    t.add({rng.uniform(115.0, 125.0), rng.normal(800.0, 3.0)}, {"blue"}, AnomalyLabel::TypeIII);
    for (std::size_t i = 0; i < type_vi; ++i) {
        const double y = i % 2 == 0 ? rng.uniform(705.0, 745.0) : rng.uniform(855.0, 895.0);
        t.add({rng.uniform(14.3, 16.5), y}, {"red"}, AnomalyLabel::TypeVI);
    }
    const double cx = rng.uniform(40.0, 80.0);
    for (std::size_t i = 0; i < purple; ++i) {
        t.add({cx + rng.uniform(-1.0, 1.0), rng.uniform(799.6, 800.4)}, {"purple"}, AnomalyLabel::TypeII);
    }
    return t.finish(rng, n);
}

// Helix of radius 1 and 4.5 turns over z in [0, 10], coloured in six z bands.
LabeledDataset helix(Rng& rng) {
    constexpr std::size_t n = 1410;
    constexpr double height = 10.0;
    constexpr double span = 9.0 * std::numbers::pi;
    constexpr std::array<std::string_view, 6> colors{"red", "orange", "yellow", "green", "blue", "violet"};
    auto band = [](double z) {
        const auto b = static_cast<std::size_t>(std::floor(z / height * 6.0));
        return std::min<std::size_t>(b, 5);
    };
    TableBuilder t({"x", "y", "z"}, {"color"});
    auto curve = [&](double angle, std::size_t color_shift, AnomalyLabel label) {
        const double z = angle / span * height + rng.normal(0.0, 0.02);
        const double x = std::cos(angle) + rng.normal(0.0, 0.02);
        const double y = std::sin(angle) + rng.normal(0.0, 0.02);
        t.add({x, y, z}, {colors[(band(std::clamp(z, 0.0, height)) + color_shift) % 6]}, label);
    };
    for (std::size_t i = 0; i < n - 7; ++i) curve(rng.uniform(0.0, span), 0, AnomalyLabel::Normal);

    const std::size_t right = argmax(t, 0);
    const std::size_t top = argmax(t, 2);
    t.add({3.0, t.number(right, 1) + rng.normal(0.0, 0.005), t.number(right, 2) + rng.normal(0.0, 0.005)},
          {t.token(right, 0)}, AnomalyLabel::TypeI);
    t.add({t.number(top, 0) + rng.normal(0.0, 0.005), t.number(top, 1) + rng.normal(0.0, 0.005), 14.0},
          {t.token(top, 0)}, AnomalyLabel::TypeI);
    for (int i = 0; i < 2; ++i) {
        const double z = rng.uniform(1.0, 9.0);
        t.add({rng.normal(0.0, 0.05), rng.normal(0.0, 0.05), z}, {colors[band(z)]}, AnomalyLabel::TypeIV);
    }
    for (int i = 0; i < 3; ++i) curve(rng.uniform(0.05 * span, 0.95 * span), 3, AnomalyLabel::TypeVI);
    return t.finish(rng, n);
}

}  // namespace

LabeledDataset generate_noisymix(std::size_t n, std::uint64_t seed) {
    if (n < 1000) throw ParameterError("noisymix needs at least 1000 cases");
    Rng rng(seed);
    struct Cluster {
        std::array<double, 3> center;
        std::string_view color, shape;
    };
    constexpr std::array<Cluster, 4> clusters{{{{-3.0, -3.0, -3.0}, "red", "circle"},
                                               {{3.0, 3.0, -3.0}, "green", "square"},
                                               {{3.0, -3.0, 3.0}, "blue", "triangle"},
                                               {{-3.0, 3.0, 3.0}, "orange", "diamond"}}};
    constexpr std::size_t type_ii = 2;
    constexpr std::size_t type_vi = 5;
    const std::size_t noise = n / 200;
    const std::size_t clustered = n - noise - type_ii - type_vi;

    TableBuilder t({"x", "y", "z"}, {"color", "shape"});
    auto point = [&rng](const Cluster& c) {
        return std::array<double, 3>{rng.normal(c.center[0], 1.0), rng.normal(c.center[1], 1.0),
                                     rng.normal(c.center[2], 1.0)};
    };
    for (std::size_t i = 0; i < clustered; ++i) {
        const auto& c = clusters[rng.index(clusters.size())];
        const auto p = point(c);
        // One case in six borrows another cluster's shape.
        std::string_view shape = c.shape;
        if (rng.uniform() < 1.0 / 6.0) shape = clusters[rng.index(clusters.size())].shape;
        t.add({p[0], p[1], p[2]}, {c.color, shape});
    }
    for (std::size_t i = 0; i < noise; ++i) {
        const std::array<double, 3> p{rng.uniform(-7.0, 7.0), rng.uniform(-7.0, 7.0), rng.uniform(-7.0, 7.0)};
        const auto nearest = std::min_element(clusters.begin(), clusters.end(), [&p](const Cluster& a, const Cluster& b) {
            double da = 0.0, db = 0.0;
            for (int k = 0; k < 3; ++k) {
                da += (p[k] - a.center[k]) * (p[k] - a.center[k]);
                db += (p[k] - b.center[k]) * (p[k] - b.center[k]);
            }
            return da < db;
        });
        t.add({p[0], p[1], p[2]}, {nearest->color, nearest->shape});
    }
    {
        const auto p = point(clusters[0]);
        t.add({p[0], p[1], p[2]}, {"white", clusters[0].shape}, AnomalyLabel::TypeII);
        const auto q = point(clusters[1]);
        t.add({q[0], q[1], q[2]}, {clusters[1].color, "star"}, AnomalyLabel::TypeII);
    }
    for (std::size_t i = 0; i < type_vi; ++i) {
        const auto& home = clusters[i % clusters.size()];
        const auto& other = clusters[(i + 1 + i / clusters.size()) % clusters.size()];
        const auto p = point(home);
        t.add({p[0], p[1], p[2]}, {other.color, home.shape}, AnomalyLabel::TypeVI);
    }
    return t.finish(rng, n);
}

std::span<const std::string_view> dataset_names() { return kNames; }

std::size_t dataset_size(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return kSizes[i];
    }
    if (name == "polis") throw ParameterError("dataset unavailable: polis is a real-world set and cannot be generated");
    throw ParameterError(fmt::format("unknown dataset '{}'", name));
}

LabeledDataset generate(const GenSpec& spec) {
    const std::size_t n = dataset_size(spec.name);
    if (spec.name == "noisymix") return generate_noisymix(n, spec.seed);
    Rng rng(spec.seed);
    if (spec.name == "mountain") return mountain(rng);
    if (spec.name == "classcircle") return classcircle(rng);
    if (spec.name == "sword") return sword(rng);
    return helix(rng);
}

std::string default_file_name(const GenSpec& spec) { return fmt::format("{}_{}.csv", spec.name, spec.seed); }

}  // namespace secoda
