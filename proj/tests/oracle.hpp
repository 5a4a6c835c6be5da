#pragma once

// Test-only brute-force oracle: enumerates every square assignment on a board
// and keeps the ones accepted by the rule-level verifier. Deliberately
// independent of the ILP model and the search code it is used to check.

#include <cstdint>
#include <vector>

#include "evolomino/grid.hpp"
#include "evolomino/rules.hpp"

namespace evotest {

// All rule-valid solutions of `p`, by exhaustive enumeration over the cells
// that are not already forced (shaded cells stay empty, givens stay squares).
inline std::vector<evolomino::SolutionGrid> brute_force_solutions(const evolomino::Puzzle& p) {
    using namespace evolomino;
    std::vector<Coord> free;
    for (int r = 1; r <= p.rows; ++r)
        for (int c = 1; c <= p.cols; ++c)
            if (p.at({r, c}) == CellState::Empty) free.push_back({r, c});
    if (free.size() > 25) throw std::invalid_argument("board too large for brute force");

    std::vector<SolutionGrid> out;
    for (uint64_t bits = 0; bits < (uint64_t{1} << free.size()); ++bits) {
        SolutionGrid s(p.rows, p.cols);
        for (int r = 1; r <= p.rows; ++r)
            for (int c = 1; c <= p.cols; ++c)
                if (p.at({r, c}) == CellState::GivenSquare) s.set({r, c}, true);
        for (size_t i = 0; i < free.size(); ++i)
            if (bits & (uint64_t{1} << i)) s.set(free[i], true);
        if (verify(p, s).empty()) out.push_back(std::move(s));
    }
    return out;
}

// Every directed self-avoiding orthogonal path with min_len..max_len cells on
// an m x n board (both orientations of the same cells count separately, as an
// arrow's head matters).
inline std::vector<std::vector<evolomino::Coord>> all_paths(int m, int n, int min_len,
                                                            int max_len) {
    using evolomino::Coord;
    std::vector<std::vector<Coord>> out;
    std::vector<Coord> cur;
    std::vector<uint8_t> used(m * n, 0);
    auto idx = [&](Coord c) { return (c.row - 1) * n + c.col - 1; };

    auto dfs = [&](auto&& self, Coord c) -> void {
        cur.push_back(c);
        used[idx(c)] = 1;
        if (static_cast<int>(cur.size()) >= min_len) out.push_back(cur);
        if (static_cast<int>(cur.size()) < max_len) {
            for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
                Coord nb{c.row + dr, c.col + dc};
                if (nb.row < 1 || nb.row > m || nb.col < 1 || nb.col > n) continue;
                if (used[idx(nb)]) continue;
                self(self, nb);
            }
        }
        used[idx(c)] = 0;
        cur.pop_back();
    };
    for (int r = 1; r <= m; ++r)
        for (int c = 1; c <= n; ++c) dfs(dfs, {r, c});
    return out;
}

}  // namespace evotest
