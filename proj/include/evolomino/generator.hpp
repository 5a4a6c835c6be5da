#pragma once

// Stochastic instance construction: biased-random-walk arrows, recursive
// block placement with backtracking, then greedy clue/shading reduction that
// keeps the committed solution unique (certified by solver probes).

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "evolomino/grid.hpp"
#include "evolomino/model.hpp"
#include "evolomino/rules.hpp"
#include "evolomino/solver.hpp"

namespace evolomino {

struct GenParams {
    double target_fill = 0.55;   // fraction of cells covered by arrows + blocks
    int max_tries = 64;          // failed arrow attempts before giving up
    int min_arrow = 3;
    double p_stop_arrow = 0.35;  // per-step stop probability of the walk
    int min_blocks = 2;
    double p_stop_blocks = 0.5;  // stop probability of the block chain / first-block growth
    double straight_bias = 3.0;  // walk weight of continuing straight
    uint64_t seed = 1;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All randomness flows through this wrapper. mt19937_64 has a pinned stream,
// and the derived draws below avoid the library distributions, which are not
// reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Unbiased integer in [0, n).
    uint64_t bounded(uint64_t n) {
        for (;;) {
            uint64_t x = engine_();
            uint64_t r = x % n;
            if (x - r <= UINT64_MAX - (n - 1)) return r;
        }
    }

    // Uniform real strictly inside (0, 1).
    double real01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

    bool bernoulli(double p) { return real01() < p; }

private:
    std::mt19937_64 engine_;
};

template <typename T>
void fisher_yates(std::vector<T>& items, Rng& rng) {
    for (size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rng.bounded(i)]);
}

// Weighted random permutation without replacement: key u^(1/w) per item,
// sorted descending, so heavier items tend to come first.
template <typename T>
std::vector<T> weighted_shuffle(const std::vector<T>& items, const std::vector<double>& weights,
                                Rng& rng) {
    if (items.size() != weights.size())
        throw std::invalid_argument("weighted_shuffle: length mismatch");
    std::vector<std::pair<double, size_t>> keyed(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        if (weights[i] <= 0) throw std::invalid_argument("weighted_shuffle: weight <= 0");
        keyed[i] = {std::pow(rng.real01(), 1.0 / weights[i]), i};
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<T> out;
    out.reserve(items.size());
    for (auto& [key, idx] : keyed) out.push_back(items[idx]);
    return out;
}

// Mutable working board of the generator. Comparable so tests can check that
// failed attempts restore the exact prior state.
struct GenBoard {
    struct Cell {
        int arrow = -1;         // arrow id occupying the cell
        int block_arrow = -1;   // arrow id of the block square here
        int block_ordinal = 0;
        bool shaded = false;
        bool operator==(const Cell&) const = default;
    };

    int rows = 0, cols = 0;
    std::vector<Cell> cells;
    std::vector<Arrow> arrows;
    std::vector<Block> blocks;

    GenBoard() = default;
    GenBoard(int m, int n) : rows(m), cols(n), cells(m * n) {}

    int index(Coord c) const { return (c.row - 1) * cols + c.col - 1; }
    bool in_bounds(Coord c) const {
        return c.row >= 1 && c.row <= rows && c.col >= 1 && c.col <= cols;
    }
    Cell& at(Coord c) { return cells[index(c)]; }
    const Cell& at(Coord c) const { return cells[index(c)]; }
    bool free(Coord c) const {
        const Cell& cell = at(c);
        return cell.arrow < 0 && cell.block_arrow < 0 && !cell.shaded;
    }
    double fill_ratio() const {
        int occupied = 0;
        for (const Cell& c : cells) occupied += (c.arrow >= 0 || c.block_arrow >= 0);
        return static_cast<double>(occupied) / static_cast<double>(rows * cols);
    }

    bool operator==(const GenBoard& o) const {
        if (rows != o.rows || cols != o.cols || cells != o.cells ||
            arrows.size() != o.arrows.size() || blocks.size() != o.blocks.size())
            return false;
        for (size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].id != o.arrows[i].id || arrows[i].path != o.arrows[i].path)
                return false;
        for (size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].cells != o.blocks[i].cells || blocks[i].anchor != o.blocks[i].anchor ||
                blocks[i].arrow_id != o.blocks[i].arrow_id ||
                blocks[i].ordinal != o.blocks[i].ordinal)
                return false;
        return true;
    }
};

inline constexpr Translation kDirs[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

namespace detail {

// A walk step to `next` is legal when the cell is free and not orthogonally
// adjacent to an earlier cell of the tentative path (arrow id `tid`), so
// arrows never curl onto themselves.
inline bool step_legal(const GenBoard& b, int tid, Coord from, Coord next) {
    if (!b.in_bounds(next) || !b.free(next)) return false;
    for (Translation d : kDirs) {
        Coord nb = next + d;
        if (!b.in_bounds(nb) || nb == from) continue;
        if (b.at(nb).arrow == tid) return false;
    }
    return true;
}

}  // namespace detail

// Next walk direction: sampled among the directions whose next cell is legal,
// weighting the current direction by straight_bias and each turn by 1.
// Empty optional signals that the walk is stuck.
inline std::optional<int> get_next_dir(Coord c, int dir, const GenBoard& b, int tid,
                                       const GenParams& params, Rng& rng) {
    int legal[4], count = 0;
    double total = 0;
    for (int d = 0; d < 4; ++d) {
        if (!detail::step_legal(b, tid, c, c + kDirs[d])) continue;
        legal[count++] = d;
        total += d == dir ? params.straight_bias : 1.0;
    }
    if (count == 0) return std::nullopt;
    double u = rng.real01() * total;
    for (int i = 0; i < count; ++i) {
        u -= legal[i] == dir ? params.straight_bias : 1.0;
        if (u <= 0) return legal[i];
    }
    return legal[count - 1];
}

// One-square extensions of a block, clipped to the board.
inline std::vector<std::vector<Coord>> get_evolutions(int rows, int cols,
                                                      const std::vector<Coord>& block) {
    std::set<Coord> in(block.begin(), block.end());
    std::set<Coord> candidates;
    for (Coord c : block)
        for (Translation d : kDirs) {
            Coord nb = c + d;
            if (nb.row >= 1 && nb.row <= rows && nb.col >= 1 && nb.col <= cols && !in.count(nb))
                candidates.insert(nb);
        }
    std::vector<std::vector<Coord>> out;
    for (Coord c : candidates) {
        std::vector<Coord> shape = block;
        shape.push_back(c);
        std::sort(shape.begin(), shape.end());
        out.push_back(std::move(shape));
    }
    return out;
}

namespace detail {

inline std::vector<Coord> grow_random_polyomino(const GenBoard& b, Coord seed, int size,
                                                Rng& rng) {
    std::vector<Coord> cells{seed};
    std::set<Coord> in{seed};
    for (int step = 1; step < size; ++step) {
        std::vector<Coord> cand;
        for (Coord c : cells)
            for (Translation d : kDirs) {
                Coord nb = c + d;
                if (b.in_bounds(nb) && !in.count(nb) && b.free(nb)) cand.push_back(nb);
            }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        if (cand.empty()) break;
        Coord pick = cand[rng.bounded(cand.size())];
        cells.push_back(pick);
        in.insert(pick);
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

// Anchor candidates: strictly increasing path indices, not adjacent on the
// path to the previous anchor, leaving room for the blocks still required.
inline std::vector<int> get_valid_indices(const std::vector<Coord>& path, int last_idx,
                                          int placed, const GenParams& params) {
    std::vector<int> out;
    int start = placed == 0 ? 0 : last_idx + 2;
    int len = static_cast<int>(path.size());
    for (int j = start; j < len; ++j)
        if (len - j >= 2 * (params.min_blocks - placed) - 1) out.push_back(j);
    return out;
}

inline bool can_place(const GenBoard& b, const std::vector<Coord>& cells, Coord anchor,
                      int tid) {
    for (Coord c : cells) {
        if (!b.in_bounds(c)) return false;
        if (c == anchor) {
            if (b.at(c).arrow != tid || b.at(c).block_arrow >= 0) return false;
        } else if (!b.free(c)) {
            return false;
        }
    }
    std::set<Coord> in(cells.begin(), cells.end());
    for (Coord c : cells)
        for (Translation d : kDirs) {
            Coord nb = c + d;
            if (!b.in_bounds(nb) || in.count(nb)) continue;
            if (b.at(nb).block_arrow >= 0) return false;
        }
    return true;
}

inline void mark_block(GenBoard& b, const std::vector<Coord>& cells, int tid, int ordinal) {
    for (Coord c : cells) {
        b.at(c).block_arrow = tid;
        b.at(c).block_ordinal = ordinal;
    }
}

inline void unmark_block(GenBoard& b, const std::vector<Coord>& cells) {
    for (Coord c : cells) {
        b.at(c).block_arrow = -1;
        b.at(c).block_ordinal = 0;
    }
}

}  // namespace detail

// Recursive block placement along a tentative arrow path. On success the
// blocks are marked on the board and appended to `blocks`; on failure the
// board is left exactly as found.
inline bool place_blocks(GenBoard& b, const std::vector<Coord>& path,
                         std::vector<Block>& blocks, int last_idx, const GenParams& params,
                         Rng& rng) {
    if (static_cast<int>(blocks.size()) >= params.min_blocks &&
        rng.bernoulli(params.p_stop_blocks))
        return true;
    const int tid = b.arrows.empty() ? 0 : b.arrows.back().id + 1;

    auto cands = detail::get_valid_indices(path, last_idx, static_cast<int>(blocks.size()),
                                           params);
    std::vector<double> weights;
    weights.reserve(cands.size());
    for (int j : cands) weights.push_back(static_cast<double>(path.size() - j));

    for (int j : weighted_shuffle(cands, weights, rng)) {
        std::vector<std::vector<Coord>> shapes;
        if (blocks.empty()) {
            int size = 1;
            while (size < b.rows * b.cols && !rng.bernoulli(params.p_stop_blocks)) ++size;
            shapes.push_back(detail::grow_random_polyomino(b, path[j], size, rng));
        } else {
            shapes = get_evolutions(b.rows, b.cols, blocks.back().cells);
        }
        fisher_yates(shapes, rng);
        for (const auto& shape : shapes) {
            std::vector<Coord> anchors = shape;
            fisher_yates(anchors, rng);
            for (Coord anchor : anchors) {
                Translation shift = path[j] - anchor;
                std::vector<Coord> cells;
                cells.reserve(shape.size());
                for (Coord c : shape) cells.push_back(c + shift);
                std::sort(cells.begin(), cells.end());
                if (!detail::can_place(b, cells, path[j], tid)) continue;
                int ordinal = static_cast<int>(blocks.size()) + 1;
                detail::mark_block(b, cells, tid, ordinal);
                blocks.push_back({cells, path[j], tid, ordinal});
                if (place_blocks(b, path, blocks, j, params, rng)) return true;
                blocks.pop_back();
                detail::unmark_block(b, cells);
            }
        }
    }
    return false;
}

// One arrow attempt: biased random walk, then block placement. `fail` leaves
// the board byte-identical to the state at entry.
inline bool try_add_arrow(GenBoard& b, const GenParams& params, Rng& rng) {
    GenBoard snapshot = b;
    const int tid = static_cast<int>(b.arrows.size());

    Coord c{static_cast<int>(rng.bounded(b.rows)) + 1, static_cast<int>(rng.bounded(b.cols)) + 1};
    if (!b.free(c)) return false;
    b.at(c).arrow = tid;
    std::vector<Coord> path{c};

    int legal[4], count = 0;
    for (int d = 0; d < 4; ++d)
        if (detail::step_legal(b, tid, c, c + kDirs[d])) legal[count++] = d;
    if (count > 0) {
        int dir = legal[rng.bounded(count)];
        for (;;) {
            c = c + kDirs[dir];
            b.at(c).arrow = tid;
            path.push_back(c);
            auto next = get_next_dir(c, dir, b, tid, params, rng);
            if (!next) break;
            if (rng.bernoulli(params.p_stop_arrow)) break;
            dir = *next;
        }
    }
    if (static_cast<int>(path.size()) < params.min_arrow) {
        b = snapshot;
        return false;
    }

    std::vector<Block> blocks;
    if (!place_blocks(b, path, blocks, 0, params, rng)) {
        b = snapshot;
        return false;
    }
    b.arrows.push_back({tid, path});
    for (Block& blk : blocks) b.blocks.push_back(std::move(blk));
    return true;
}

struct GenOutcome {
    Puzzle puzzle;
    SolutionGrid solution;
    double fill = 0;        // arrow + block cells over board size
    int probes = 0;         // uniqueness probes spent while carving
    int givens = 0;
    int shaded = 0;
    int attempts = 1;       // construction attempts consumed
};

namespace detail {

inline Puzzle board_to_puzzle(const GenBoard& b, const std::vector<uint8_t>& given_clue,
                              const std::vector<uint8_t>& shaded_clue) {
    Puzzle p;
    p.rows = b.rows;
    p.cols = b.cols;
    p.cells.assign(b.rows * b.cols, CellState::Empty);
    for (int i = 0; i < b.rows * b.cols; ++i) {
        if (shaded_clue[i]) p.cells[i] = CellState::Shaded;
        if (given_clue[i]) p.cells[i] = CellState::GivenSquare;
    }
    p.arrows = b.arrows;
    return p;
}

}  // namespace detail

// Greedy clue reduction: shade everything free, then visit all cells in
// Fisher-Yates order and drop each shaded or square clue whose removal keeps
// the committed solution unique. Probes that time out count as "alternative
// may exist" and the clue is kept.
inline std::optional<Puzzle> carve_to_unique(const GenBoard& b, Rng& rng,
                                             const BuildOptions& model_opts,
                                             const SolveLimits& probe_limits, int& probes) {
    const int ncells = b.rows * b.cols;
    SolutionGrid sol(b.rows, b.cols);
    for (int r = 1; r <= b.rows; ++r)
        for (int c = 1; c <= b.cols; ++c)
            if (b.at({r, c}).block_arrow >= 0) sol.set({r, c}, true);

    std::vector<uint8_t> given_clue(ncells, 0), shaded_clue(ncells, 0);
    for (int i = 0; i < ncells; ++i) {
        const GenBoard::Cell& cell = b.cells[i];
        if (cell.block_arrow >= 0)
            given_clue[i] = 1;
        else if (cell.arrow < 0)
            shaded_clue[i] = 1;  // shade all free cells
    }

    ++probes;
    if (is_unique(build_model(detail::board_to_puzzle(b, given_clue, shaded_clue), model_opts),
                  sol, probe_limits) != Uniqueness::Unique)
        return std::nullopt;

    std::vector<int> order(ncells);
    for (int i = 0; i < ncells; ++i) order[i] = i;
    fisher_yates(order, rng);

    for (int i : order) {
        uint8_t* slot = nullptr;
        if (shaded_clue[i])
            slot = &shaded_clue[i];
        else if (given_clue[i])
            slot = &given_clue[i];
        else
            continue;
        *slot = 0;
        ++probes;
        Uniqueness u =
            is_unique(build_model(detail::board_to_puzzle(b, given_clue, shaded_clue), model_opts),
                      sol, probe_limits);
        if (u != Uniqueness::Unique) *slot = 1;  // revert
    }
    return detail::board_to_puzzle(b, given_clue, shaded_clue);
}

// Full generation pipeline. Deterministic for a fixed seed; throws
// GenerationError when the try budget never yields a usable board.
inline GenOutcome generate(int rows, int cols, const GenParams& params,
                           const BuildOptions& model_opts = {},
                           const SolveLimits& probe_limits = {}) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("generate: board must be at least 2x2");
    if (params.min_blocks < 2) throw std::invalid_argument("generate: min_blocks must be >= 2");
    if (params.min_arrow < 3) throw std::invalid_argument("generate: min_arrow must be >= 3");

    Rng rng(params.seed);
    // Failed attempts roll themselves back; persistent failure escalates,
    // first undoing the latest committed arrow, then resetting the board.
    const int reset_every = std::max(1, (params.max_tries + 3) / 4);
    const int undo_every = std::max(2, reset_every / 4);
    constexpr int kMaxAttempts = 4;

    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        GenBoard board(rows, cols);
        std::vector<GenBoard> committed;  // states before each successful arrow
        int tries = 0, consecutive_failures = 0;
        while (board.fill_ratio() < params.target_fill && tries < params.max_tries) {
            GenBoard before = board;
            if (try_add_arrow(board, params, rng)) {
                committed.push_back(std::move(before));
                consecutive_failures = 0;
                continue;
            }
            ++tries;
            ++consecutive_failures;
            if (consecutive_failures % reset_every == 0) {
                board = GenBoard(rows, cols);
                committed.clear();
            } else if (consecutive_failures % undo_every == 0 && !committed.empty()) {
                board = std::move(committed.back());  // undo the last arrow
                committed.pop_back();
            }
        }
        if (board.arrows.empty()) continue;

        GenOutcome out;
        out.attempts = attempt;
        out.fill = board.fill_ratio();
        auto carved = carve_to_unique(board, rng, model_opts, probe_limits, out.probes);
        if (!carved) continue;
        out.puzzle = *carved;

        SolutionGrid sol(rows, cols);
        for (int r = 1; r <= rows; ++r)
            for (int c = 1; c <= cols; ++c)
                if (board.at({r, c}).block_arrow >= 0) sol.set({r, c}, true);
        out.solution = sol;

        if (!verify(out.puzzle, sol).empty()) continue;
        ++out.probes;
        if (is_unique(build_model(out.puzzle, model_opts), sol, probe_limits) !=
            Uniqueness::Unique)
            continue;

        for (CellState s : out.puzzle.cells) {
            out.givens += s == CellState::GivenSquare;
            out.shaded += s == CellState::Shaded;
        }
        return out;
    }
    throw GenerationError("generation failed: no arrow could be committed within the budget");
}

}  // namespace evolomino
