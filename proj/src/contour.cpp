#include "asrsim/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

namespace asrsim {

namespace {

struct Segment {
    std::size_t a;  // edge keys
    std::size_t b;
};

class EdgeIndex {
public:
    explicit EdgeIndex(const ScalarField& f) : f_(f) {}

    // horizontal edge from (row, col) to (row, col + 1)
    std::size_t horizontal(std::size_t row, std::size_t col) const { return 2 * (row * f_.cols() + col); }
    // vertical edge from (row, col) to (row + 1, col)
    std::size_t vertical(std::size_t row, std::size_t col) const { return 2 * (row * f_.cols() + col) + 1; }

    Point crossing(std::size_t key, double level) const
    {
        const std::size_t node = key / 2;
        const std::size_t row = node / f_.cols();
        const std::size_t col = node % f_.cols();
        const bool is_vertical = key % 2 == 1;
        const std::size_t row2 = is_vertical ? row + 1 : row;
        const std::size_t col2 = is_vertical ? col : col + 1;
        const double va = f_.at(row, col);
        const double vb = f_.at(row2, col2);
        const double t = (level - va) / (vb - va);
        const Point pa{f_.xs[col], f_.ys[row]};
        const Point pb{f_.xs[col2], f_.ys[row2]};
        return {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
    }

private:
    const ScalarField& f_;
};

}  // namespace

std::vector<Polyline> marching_squares(const ScalarField& field, double level)
{
    std::vector<Polyline> lines;
    if (field.rows() < 2 || field.cols() < 2 || !std::isfinite(level)) return lines;

    const EdgeIndex edges(field);
    std::vector<Segment> segments;

    for (std::size_t r = 0; r + 1 < field.rows(); ++r) {
        for (std::size_t c = 0; c + 1 < field.cols(); ++c) {
            // corners counter-clockwise from (r, c)
            const std::array<double, 4> v{field.at(r, c), field.at(r, c + 1), field.at(r + 1, c + 1),
                                          field.at(r + 1, c)};
            if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); })) continue;
            std::array<bool, 4> above;
            for (int i = 0; i < 4; ++i) above[i] = v[i] >= level;
            // side i joins corner i and corner i+1
            const std::array<std::size_t, 4> side{edges.horizontal(r, c), edges.vertical(r, c + 1),
                                                  edges.horizontal(r + 1, c), edges.vertical(r, c)};
            std::array<int, 4> crossed{};
            int n = 0;
            for (int i = 0; i < 4; ++i) {
                if (above[i] != above[(i + 1) % 4]) crossed[n++] = i;
            }
            if (n == 2) {
                segments.push_back({side[crossed[0]], side[crossed[1]]});
            } else if (n == 4) {
                const bool center_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                // cut off the two corners on the side opposite to the centre
                for (int i = 0; i < 4; ++i) {
                    if (above[i] != center_above) {
                        segments.push_back({side[(i + 3) % 4], side[i]});
                    }
                }
            }
        }
    }

    std::unordered_map<std::size_t, std::array<std::size_t, 2>> at_edge;
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (std::size_t key : {segments[s].a, segments[s].b}) {
            auto [it, inserted] = at_edge.try_emplace(key, std::array<std::size_t, 2>{none, none});
            auto& slots = it->second;
            (slots[0] == none ? slots[0] : slots[1]) = s;
        }
    }

    std::vector<bool> used(segments.size(), false);
    auto other_segment = [&](std::size_t key, std::size_t current) {
        const auto& slots = at_edge.at(key);
        const std::size_t cand = slots[0] == current ? slots[1] : slots[0];
        return (cand != none && !used[cand]) ? cand : none;
    };
    auto far_end = [&](std::size_t s, std::size_t key) {
        return segments[s].a == key ? segments[s].b : segments[s].a;
    };

    for (std::size_t start = 0; start < segments.size(); ++start) {
        if (used[start]) continue;
        used[start] = true;
        std::vector<std::size_t> keys{segments[start].a, segments[start].b};

        std::size_t seg = start;
        for (std::size_t next; (next = other_segment(keys.back(), seg)) != none; seg = next) {
            used[next] = true;
            keys.push_back(far_end(next, keys.back()));
        }
        const bool closed = keys.back() == keys.front() && keys.size() > 2;
        if (!closed) {
            std::vector<std::size_t> head;
            seg = start;
            std::size_t key = keys.front();
            for (std::size_t next; (next = other_segment(key, seg)) != none; seg = next) {
                used[next] = true;
                key = far_end(next, key);
                head.push_back(key);
            }
            keys.insert(keys.begin(), head.rbegin(), head.rend());
        }

        Polyline line;
        line.reserve(keys.size());
        for (std::size_t key : keys) line.push_back(edges.crossing(key, level));
        lines.push_back(std::move(line));
    }
    return lines;
}

std::optional<double> bilinear(const ScalarField& field, double x, double y)
{
    if (field.rows() < 2 || field.cols() < 2) return std::nullopt;
    auto locate = [](const std::vector<double>& axis, double v) -> std::optional<std::size_t> {
        if (v < axis.front() || v > axis.back()) return std::nullopt;
        auto it = std::upper_bound(axis.begin(), axis.end(), v);
        std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
        return std::min(i, axis.size() - 2);
    };
    const auto c0 = locate(field.xs, x);
    const auto r0 = locate(field.ys, y);
    if (!c0 || !r0) return std::nullopt;

    // A point on a grid line belongs to both neighbouring cells; use whichever
    // is unmasked.
    std::array<std::size_t, 2> cs{*c0, *c0};
    std::array<std::size_t, 2> rs{*r0, *r0};
    if (*c0 > 0 && x == field.xs[*c0]) cs[1] = *c0 - 1;
    if (*c0 + 2 < field.cols() && x == field.xs[*c0 + 1]) cs[1] = *c0 + 1;
    if (*r0 > 0 && y == field.ys[*r0]) rs[1] = *r0 - 1;
    if (*r0 + 2 < field.rows() && y == field.ys[*r0 + 1]) rs[1] = *r0 + 1;

    for (std::size_t r : rs) {
        for (std::size_t c : cs) {
            const double v00 = field.at(r, c), v01 = field.at(r, c + 1);
            const double v10 = field.at(r + 1, c), v11 = field.at(r + 1, c + 1);
            if (std::isnan(v00) || std::isnan(v01) || std::isnan(v10) || std::isnan(v11)) continue;
            const double tx = (x - field.xs[c]) / (field.xs[c + 1] - field.xs[c]);
            const double ty = (y - field.ys[r]) / (field.ys[r + 1] - field.ys[r]);
            return (1 - ty) * ((1 - tx) * v00 + tx * v01) + ty * ((1 - tx) * v10 + tx * v11);
        }
    }
    return std::nullopt;
}

}  // namespace asrsim
