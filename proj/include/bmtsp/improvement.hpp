#pragma once

/// @file improvement.hpp
/// Phase 3 neighbourhoods: sub-tour relocation between tours, single vertex
/// relocation (within or across tours) and vertex swaps between tours.
///
/// Indexing: tours are addressed by 0-based index into Solution::tours.
/// Positions inside a tour are 1-based, with position 0 and position
/// size()+1 both denoting the depot, so a segment (p, m) covers positions
/// p..p+m-1 and its neighbours are p-1 and p+m. Gap q (0 <= q <= size())
/// is the edge between positions q and q+1.
///
/// Gains are signed cost changes: negative means the solution gets cheaper.

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include "bmtsp/construction.hpp"
#include "bmtsp/model.hpp"

namespace bmtsp {

enum class MoveKind { subtour_relocation, vertex_relocation, vertex_swap };

enum class Direction : int { forward = 1, backward = -1 };

struct Move {
    MoveKind kind = MoveKind::vertex_relocation;
    int source_tour = 0;   // j
    int source_pos = 1;    // p
    int length = 1;        // m
    int target_tour = 0;   // l
    int target_gap = 0;    // q; for swaps, the partner's position
    Direction direction = Direction::forward;
    double gain = 0.0;
};

/// City at `pos` of tour `t`, the depot for 0 and size()+1.
CityId city_at(const Tour& t, int pos, const Instance& inst);

/// Cost change of cutting positions p..p+m-1 out of tour j and joining its
/// neighbours. Throws ContractViolation for out-of-range indices.
double removal_gain(const Solution& s, int j, int p, int m, const Instance& inst);

/// Cost change of splicing `subtour` into gap q of tour l, traversed in
/// `direction`. Throws ContractViolation for an out-of-range gap.
double insertion_cost(const Solution& s, std::span<const CityId> subtour, int l, int q,
                      Direction direction, const Instance& inst);

/// Forward unless reversed entry/exit edges are strictly shorter.
Direction choose_direction(const Solution& s, int j, int p, int m, int l, int q,
                           const Instance& inst);

/// min(max_j(m_j - m_min), max_l(m_max - m_l)), floored at 0.
int eta_max(const Solution& s, const Instance& inst);

/// Applies a move exactly as described (no 2-opt) and refreshes the cost
/// cache. For vertex relocation within one tour, target_gap indexes the
/// tour after the vertex has been removed.
void apply_move(Solution& s, const Move& move, const Instance& inst);

/// Every candidate the corresponding procedure scans on `s`, in scan order,
/// each with its predicted gain.
std::vector<Move> enumerate_subtour_relocations(const Solution& s, const Instance& inst);
std::vector<Move> enumerate_vertex_relocations(const Solution& s, const Instance& inst);
std::vector<Move> enumerate_vertex_swaps(const Solution& s, const Instance& inst);

/// Optional wall-clock limit, polled between moves.
struct SearchControl {
    std::optional<std::chrono::steady_clock::time_point> deadline;

    bool expired() const {
        return deadline && std::chrono::steady_clock::now() >= *deadline;
    }
};

struct SubtourRelocationResult {
    Solution solution;
    int moves_applied = 0;
    bool interrupted = false;
};

/// Repeatedly applies the best improving sub-tour relocation (length 2..eta_max)
/// followed by 2-opt on both touched tours, until none improves by more than
/// kImprovementEpsilon.
SubtourRelocationResult relocate_subtours(Solution s, const Instance& inst,
                                          const SearchControl& control = {});

struct StepResult {
    Solution solution;
    double gain = 0.0;  // gain of the applied move, 0 when nothing was applied
};

/// One best-improvement vertex relocation pass.
StepResult relocate_a_vertex(Solution s, const Instance& inst);

/// One best-improvement pass over vertex swaps between distinct tours.
StepResult swap_vertices(Solution s, const Instance& inst);

namespace detail {

/// Swap gain computed by summing the four removal/insertion terms on the
/// unmodified solution, the way the textbook formula reads. It disagrees
/// with the true exchange delta whenever the insertion edge touches the
/// vertex that leaves. Kept for tests that document the difference.
double literal_swap_gain(const Solution& s, int j, int p, int l, int q, const Instance& inst);

/// True cost change of exchanging position p of tour j with position q of tour l.
double swap_gain(const Solution& s, int j, int p, int l, int q, const Instance& inst);

}  // namespace detail

}  // namespace bmtsp
