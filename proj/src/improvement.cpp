#include "bmtsp/improvement.hpp"

#include <algorithm>
#include <string>

namespace bmtsp {

namespace {

void require(bool condition, const char* what) {
    if (!condition) throw ContractViolation(what);
}

const Tour& tour_ref(const Solution& s, int index) {
    require(index >= 0 && index < static_cast<int>(s.tours.size()), "tour index out of range");
    return s.tours[static_cast<std::size_t>(index)];
}

Tour& tour_ref(Solution& s, int index) {
    require(index >= 0 && index < static_cast<int>(s.tours.size()), "tour index out of range");
    return s.tours[static_cast<std::size_t>(index)];
}

// Unchecked variant of city_at for the scan loops.
inline CityId at(const Tour& t, int pos) noexcept {
    return (pos <= 0 || pos > t.size()) ? kDepot : t.cities[static_cast<std::size_t>(pos - 1)];
}

// Scans sub-tour relocations of length 2..eta in the order m, j, p, l, q.
// The internal chain of the segment appears with opposite signs in the
// removal gain and the insertion cost, so only the four boundary edges and
// the broken gap edge are evaluated.
template <class Visit>
void scan_subtour_relocations(const Solution& s, const Instance& inst, int eta, Visit&& visit) {
    const int k = static_cast<int>(s.tours.size());
    const int m_min = inst.min_cities();
    const int m_max = inst.max_cities();
    for (int m = 2; m <= eta; ++m) {
        for (int j = 0; j < k; ++j) {
            const Tour& tj = s.tours[static_cast<std::size_t>(j)];
            const int mj = tj.size();
            if (mj - m < m_min) continue;
            for (int p = 1; p <= mj - m + 1; ++p) {
                const CityId prev = at(tj, p - 1);
                const CityId first = at(tj, p);
                const CityId last = at(tj, p + m - 1);
                const CityId next = at(tj, p + m);
                const double base = inst.distance(prev, next) - inst.distance(prev, first) -
                                    inst.distance(last, next);
                for (int l = 0; l < k; ++l) {
                    if (l == j) continue;
                    const Tour& tl = s.tours[static_cast<std::size_t>(l)];
                    const int ml = tl.size();
                    if (ml + m > m_max) continue;
                    for (int q = 0; q <= ml; ++q) {
                        const CityId a = at(tl, q);
                        const CityId b = at(tl, q + 1);
                        const double fwd = inst.distance(a, first) + inst.distance(last, b);
                        const double bwd = inst.distance(a, last) + inst.distance(first, b);
                        const bool forward = fwd <= bwd;
                        const double delta = base + (forward ? fwd : bwd) - inst.distance(a, b);
                        visit(Move{MoveKind::subtour_relocation, j, p, m, l, q,
                                   forward ? Direction::forward : Direction::backward, delta});
                    }
                }
            }
        }
    }
}

// Order j, p, l, q. For l == j the gap indexes the tour with the vertex
// already removed, and the gap it came from is skipped.
template <class Visit>
void scan_vertex_relocations(const Solution& s, const Instance& inst, Visit&& visit) {
    const int k = static_cast<int>(s.tours.size());
    const int m_min = inst.min_cities();
    const int m_max = inst.max_cities();
    for (int j = 0; j < k; ++j) {
        const Tour& tj = s.tours[static_cast<std::size_t>(j)];
        const int mj = tj.size();
        for (int p = 1; p <= mj; ++p) {
            const CityId prev = at(tj, p - 1);
            const CityId v = at(tj, p);
            const CityId next = at(tj, p + 1);
            const double removal = inst.distance(prev, next) - inst.distance(prev, v) -
                                   inst.distance(v, next);
            for (int l = 0; l < k; ++l) {
                if (l == j) {
                    auto reduced = [&](int i) { return i < p ? at(tj, i) : at(tj, i + 1); };
                    for (int q = 0; q <= mj - 1; ++q) {
                        if (q == p - 1) continue;
                        const CityId a = reduced(q);
                        const CityId b = (q + 1 > mj - 1) ? kDepot : reduced(q + 1);
                        const double delta = removal + inst.distance(a, v) + inst.distance(v, b) -
                                             inst.distance(a, b);
                        visit(Move{MoveKind::vertex_relocation, j, p, 1, l, q, Direction::forward,
                                   delta});
                    }
                    continue;
                }
                const Tour& tl = s.tours[static_cast<std::size_t>(l)];
                const int ml = tl.size();
                if (mj <= m_min || ml >= m_max) continue;
                for (int q = 0; q <= ml; ++q) {
                    const CityId a = at(tl, q);
                    const CityId b = at(tl, q + 1);
                    const double delta = removal + inst.distance(a, v) + inst.distance(v, b) -
                                         inst.distance(a, b);
                    visit(Move{MoveKind::vertex_relocation, j, p, 1, l, q, Direction::forward, delta});
                }
            }
        }
    }
}

template <class Visit>
void scan_vertex_swaps(const Solution& s, const Instance& inst, Visit&& visit) {
    const int k = static_cast<int>(s.tours.size());
    for (int j = 0; j + 1 < k; ++j) {
        const Tour& tj = s.tours[static_cast<std::size_t>(j)];
        for (int p = 1; p <= tj.size(); ++p) {
            const CityId prev_v = at(tj, p - 1);
            const CityId v = at(tj, p);
            const CityId next_v = at(tj, p + 1);
            const double out_v = inst.distance(prev_v, v) + inst.distance(v, next_v);
            for (int l = j + 1; l < k; ++l) {
                const Tour& tl = s.tours[static_cast<std::size_t>(l)];
                for (int q = 1; q <= tl.size(); ++q) {
                    const CityId prev_u = at(tl, q - 1);
                    const CityId u = at(tl, q);
                    const CityId next_u = at(tl, q + 1);
                    const double delta = inst.distance(prev_v, u) + inst.distance(u, next_v) - out_v +
                                         inst.distance(prev_u, v) + inst.distance(v, next_u) -
                                         inst.distance(prev_u, u) - inst.distance(u, next_u);
                    visit(Move{MoveKind::vertex_swap, j, p, 1, l, q, Direction::forward, delta});
                }
            }
        }
    }
}

// Keeps the first strictly smallest gain in scan order.
struct BestMove {
    std::optional<Move> move;
    void operator()(const Move& candidate) {
        if (!move || candidate.gain < move->gain) move = candidate;
    }
    bool improving() const { return move && move->gain < -kImprovementEpsilon; }
};

void polish(Solution& s, const Move& move, const Instance& inst) {
    auto& src = s.tours[static_cast<std::size_t>(move.source_tour)];
    src = two_opt(std::move(src), inst);
    if (move.target_tour != move.source_tour) {
        auto& dst = s.tours[static_cast<std::size_t>(move.target_tour)];
        dst = two_opt(std::move(dst), inst);
    }
    refresh_cost(s, inst);
}

}  // namespace

CityId city_at(const Tour& t, int pos, const Instance& inst) {
    require(pos >= 0 && pos <= t.size() + 1, "position out of range");
    return (pos == 0 || pos == t.size() + 1) ? inst.depot() : t.cities[static_cast<std::size_t>(pos - 1)];
}

double removal_gain(const Solution& s, int j, int p, int m, const Instance& inst) {
    const Tour& t = tour_ref(s, j);
    require(m >= 1 && p >= 1 && p + m - 1 <= t.size(), "removal_gain: segment out of range");
    double gain = inst.distance(city_at(t, p - 1, inst), city_at(t, p + m, inst)) -
                  inst.distance(city_at(t, p - 1, inst), city_at(t, p, inst));
    for (int i = 0; i <= m - 2; ++i) {
        gain -= inst.distance(city_at(t, p + i, inst), city_at(t, p + i + 1, inst));
    }
    return gain - inst.distance(city_at(t, p + m - 1, inst), city_at(t, p + m, inst));
}

double insertion_cost(const Solution& s, std::span<const CityId> subtour, int l, int q,
                      Direction direction, const Instance& inst) {
    const Tour& t = tour_ref(s, l);
    require(q >= 0 && q <= t.size(), "insertion_cost: gap out of range");
    require(!subtour.empty(), "insertion_cost: empty sub-tour");
    const CityId a = city_at(t, q, inst);
    const CityId b = city_at(t, q + 1, inst);
    double chain = 0.0;
    for (std::size_t i = 0; i + 1 < subtour.size(); ++i) chain += inst.distance(subtour[i], subtour[i + 1]);
    const CityId head = direction == Direction::forward ? subtour.front() : subtour.back();
    const CityId tail = direction == Direction::forward ? subtour.back() : subtour.front();
    return inst.distance(a, head) + chain + inst.distance(tail, b) - inst.distance(a, b);
}

Direction choose_direction(const Solution& s, int j, int p, int m, int l, int q, const Instance& inst) {
    const Tour& tj = tour_ref(s, j);
    const Tour& tl = tour_ref(s, l);
    require(m >= 1 && p >= 1 && p + m - 1 <= tj.size(), "choose_direction: segment out of range");
    require(q >= 0 && q <= tl.size(), "choose_direction: gap out of range");
    const CityId a = city_at(tl, q, inst);
    const CityId b = city_at(tl, q + 1, inst);
    const CityId first = city_at(tj, p, inst);
    const CityId last = city_at(tj, p + m - 1, inst);
    const double fwd = inst.distance(a, first) + inst.distance(last, b);
    const double bwd = inst.distance(a, last) + inst.distance(first, b);
    return fwd <= bwd ? Direction::forward : Direction::backward;
}

int eta_max(const Solution& s, const Instance& inst) {
    if (s.tours.empty()) return 0;
    int removable = 0;
    int receivable = 0;
    for (const Tour& t : s.tours) {
        removable = std::max(removable, t.size() - inst.min_cities());
        receivable = std::max(receivable, inst.max_cities() - t.size());
    }
    return std::max(0, std::min(removable, receivable));
}

void apply_move(Solution& s, const Move& move, const Instance& inst) {
    Tour& src = tour_ref(s, move.source_tour);
    Tour& dst = tour_ref(s, move.target_tour);
    const auto p = static_cast<std::ptrdiff_t>(move.source_pos);

    switch (move.kind) {
        case MoveKind::subtour_relocation: {
            require(move.source_tour != move.target_tour, "sub-tour relocation needs two tours");
            require(move.length >= 1 && p >= 1 && p + move.length - 1 <= src.size(),
                    "apply_move: segment out of range");
            require(move.target_gap >= 0 && move.target_gap <= dst.size(), "apply_move: gap out of range");
            auto first = src.cities.begin() + (p - 1);
            auto last = first + move.length;
            std::vector<CityId> segment(first, last);
            src.cities.erase(first, last);
            if (move.direction == Direction::backward) std::reverse(segment.begin(), segment.end());
            dst.cities.insert(dst.cities.begin() + move.target_gap, segment.begin(), segment.end());
            break;
        }
        case MoveKind::vertex_relocation: {
            require(p >= 1 && p <= src.size(), "apply_move: position out of range");
            const CityId v = src.cities[static_cast<std::size_t>(p - 1)];
            src.cities.erase(src.cities.begin() + (p - 1));
            require(move.target_gap >= 0 && move.target_gap <= dst.size(), "apply_move: gap out of range");
            dst.cities.insert(dst.cities.begin() + move.target_gap, v);
            break;
        }
        case MoveKind::vertex_swap: {
            require(move.source_tour != move.target_tour, "swap needs two tours");
            require(p >= 1 && p <= src.size() && move.target_gap >= 1 && move.target_gap <= dst.size(),
                    "apply_move: position out of range");
            std::swap(src.cities[static_cast<std::size_t>(p - 1)],
                      dst.cities[static_cast<std::size_t>(move.target_gap - 1)]);
            break;
        }
    }
    refresh_cost(s, inst);
}

std::vector<Move> enumerate_subtour_relocations(const Solution& s, const Instance& inst) {
    std::vector<Move> moves;
    scan_subtour_relocations(s, inst, eta_max(s, inst), [&](const Move& m) { moves.push_back(m); });
    return moves;
}

std::vector<Move> enumerate_vertex_relocations(const Solution& s, const Instance& inst) {
    std::vector<Move> moves;
    scan_vertex_relocations(s, inst, [&](const Move& m) { moves.push_back(m); });
    return moves;
}

std::vector<Move> enumerate_vertex_swaps(const Solution& s, const Instance& inst) {
    std::vector<Move> moves;
    scan_vertex_swaps(s, inst, [&](const Move& m) { moves.push_back(m); });
    return moves;
}

SubtourRelocationResult relocate_subtours(Solution s, const Instance& inst, const SearchControl& control) {
    SubtourRelocationResult result{std::move(s)};
    for (;;) {
        if (control.expired()) {
            result.interrupted = true;
            break;
        }
        const int eta = eta_max(result.solution, inst);
        if (eta < 2) break;
        BestMove best;
        scan_subtour_relocations(result.solution, inst, eta, [&best](const Move& m) { best(m); });
        if (!best.improving()) break;
        apply_move(result.solution, *best.move, inst);
        polish(result.solution, *best.move, inst);
        ++result.moves_applied;
    }
    return result;
}

StepResult relocate_a_vertex(Solution s, const Instance& inst) {
    BestMove best;
    scan_vertex_relocations(s, inst, [&best](const Move& m) { best(m); });
    if (!best.improving()) return {std::move(s), 0.0};
    apply_move(s, *best.move, inst);
    polish(s, *best.move, inst);
    return {std::move(s), best.move->gain};
}

StepResult swap_vertices(Solution s, const Instance& inst) {
    BestMove best;
    scan_vertex_swaps(s, inst, [&best](const Move& m) { best(m); });
    if (!best.improving()) return {std::move(s), 0.0};
    apply_move(s, *best.move, inst);
    polish(s, *best.move, inst);
    return {std::move(s), best.move->gain};
}

namespace detail {

double literal_swap_gain(const Solution& s, int j, int p, int l, int q, const Instance& inst) {
    const Tour& tj = tour_ref(s, j);
    const Tour& tl = tour_ref(s, l);
    require(p >= 1 && p <= tj.size() && q >= 1 && q <= tl.size(), "swap position out of range");
    const CityId v = tj.cities[static_cast<std::size_t>(p - 1)];
    const CityId u = tl.cities[static_cast<std::size_t>(q - 1)];
    const CityId single_v[] = {v};
    const CityId single_u[] = {u};
    return removal_gain(s, j, p, 1, inst) + insertion_cost(s, single_v, l, q, Direction::forward, inst) +
           removal_gain(s, l, q, 1, inst) + insertion_cost(s, single_u, j, p, Direction::forward, inst);
}

double swap_gain(const Solution& s, int j, int p, int l, int q, const Instance& inst) {
    const Tour& tj = tour_ref(s, j);
    const Tour& tl = tour_ref(s, l);
    require(j != l, "swap needs two tours");
    require(p >= 1 && p <= tj.size() && q >= 1 && q <= tl.size(), "swap position out of range");
    const CityId v = at(tj, p);
    const CityId u = at(tl, q);
    return inst.distance(at(tj, p - 1), u) + inst.distance(u, at(tj, p + 1)) -
           inst.distance(at(tj, p - 1), v) - inst.distance(v, at(tj, p + 1)) +
           inst.distance(at(tl, q - 1), v) + inst.distance(v, at(tl, q + 1)) -
           inst.distance(at(tl, q - 1), u) - inst.distance(u, at(tl, q + 1));
}

}  // namespace detail

}  // namespace bmtsp
