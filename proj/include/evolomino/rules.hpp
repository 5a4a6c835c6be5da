#pragma once

// Direct rule-level verifier. This is the independent oracle for the ILP
// pipeline: it checks the five puzzle rules on a solution grid without any
// reference to the model, its regions, or its variables.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evolomino/grid.hpp"

namespace evolomino {

struct Block {
    std::vector<Coord> cells;  // sorted, orthogonally connected
    Coord anchor;              // the unique cell on an arrow path
    int arrow_id = -1;
    int ordinal = 0;           // 1-based position along the arrow
};

enum class Rule {
    SquareOnShaded,
    GivenMissing,
    BlockWithoutAnchor,
    BlockWithMultipleAnchors,
    ArrowTooFewBlocks,
    ConsecutiveArrowSquares,
    BadSizeProgression,
    BadShapeProgression,
};

inline const char* rule_name(Rule r) {
    switch (r) {
        case Rule::SquareOnShaded: return "SquareOnShaded";
        case Rule::GivenMissing: return "GivenMissing";
        case Rule::BlockWithoutAnchor: return "BlockWithoutAnchor";
        case Rule::BlockWithMultipleAnchors: return "BlockWithMultipleAnchors";
        case Rule::ArrowTooFewBlocks: return "ArrowTooFewBlocks";
        case Rule::ConsecutiveArrowSquares: return "ConsecutiveArrowSquares";
        case Rule::BadSizeProgression: return "BadSizeProgression";
        case Rule::BadShapeProgression: return "BadShapeProgression";
    }
    return "?";
}

struct Violation {
    Rule rule;
    std::string detail;
    std::vector<Coord> cells;
};

inline std::string to_string(const Violation& v) {
    std::string s = std::string(rule_name(v.rule)) + ": " + v.detail;
    for (Coord c : v.cells)
        s += " (" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
    return s;
}

namespace detail {

inline void check_dimensions(const Puzzle& p, const SolutionGrid& s) {
    if (p.rows != s.rows || p.cols != s.cols)
        throw std::invalid_argument("solution dimensions do not match puzzle");
}

// Connected components of the squares, in scan order of their smallest cell.
inline std::vector<std::vector<Coord>> square_components(const Puzzle& p,
                                                         const SolutionGrid& s) {
    std::vector<uint8_t> seen(p.cell_count(), 0);
    auto idx = [&](Coord c) { return (c.row - 1) * p.cols + c.col - 1; };
    std::vector<std::vector<Coord>> comps;
    for (int r = 1; r <= p.rows; ++r) {
        for (int c = 1; c <= p.cols; ++c) {
            Coord start{r, c};
            if (!s.at(start) || seen[idx(start)]) continue;
            std::vector<Coord> comp, stack{start};
            seen[idx(start)] = 1;
            while (!stack.empty()) {
                Coord cur = stack.back();
                stack.pop_back();
                comp.push_back(cur);
                for (Coord nb : neighbors(p, cur)) {
                    if (s.at(nb) && !seen[idx(nb)]) {
                        seen[idx(nb)] = 1;
                        stack.push_back(nb);
                    }
                }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
    }
    return comps;
}

}  // namespace detail

// Partition the squares into blocks. Components lacking exactly one on-arrow
// square (or sitting on shaded cells) are reported as violations instead.
inline std::variant<std::vector<Block>, std::vector<Violation>> extract_blocks(
    const Puzzle& p, const SolutionGrid& s) {
    detail::check_dimensions(p, s);
    std::vector<Violation> violations;

    for (int r = 1; r <= p.rows; ++r)
        for (int c = 1; c <= p.cols; ++c)
            if (s.at({r, c}) && p.at({r, c}) == CellState::Shaded)
                violations.push_back({Rule::SquareOnShaded, "square on shaded cell", {{r, c}}});

    // path position of each on-arrow cell: (arrow id, index along path)
    std::map<Coord, std::pair<int, int>> path_pos;
    for (const Arrow& a : p.arrows)
        for (size_t i = 0; i < a.path.size(); ++i)
            path_pos[a.path[i]] = {a.id, static_cast<int>(i)};

    struct Pending {
        std::vector<Coord> cells;
        Coord anchor;
        int arrow_id;
        int path_index;
    };
    std::vector<Pending> pending;
    for (auto& comp : detail::square_components(p, s)) {
        std::vector<Coord> anchors;
        for (Coord c : comp)
            if (path_pos.count(c)) anchors.push_back(c);
        if (anchors.empty()) {
            violations.push_back(
                {Rule::BlockWithoutAnchor, "block contains no on-arrow square", comp});
        } else if (anchors.size() > 1) {
            violations.push_back(
                {Rule::BlockWithMultipleAnchors, "block contains several on-arrow squares",
                 anchors});
        } else {
            auto [aid, pidx] = path_pos[anchors[0]];
            pending.push_back({comp, anchors[0], aid, pidx});
        }
    }
    if (!violations.empty()) return violations;

    std::vector<Block> blocks;
    for (const Arrow& a : p.arrows) {
        std::vector<Pending*> mine;
        for (auto& b : pending)
            if (b.arrow_id == a.id) mine.push_back(&b);
        std::sort(mine.begin(), mine.end(),
                  [](const Pending* x, const Pending* y) { return x->path_index < y->path_index; });
        int ord = 1;
        for (Pending* b : mine)
            blocks.push_back({b->cells, b->anchor, b->arrow_id, ord++});
    }
    return blocks;
}

// True iff `next` is `prev` grown by one square without rotation or flip:
// same shape translated somewhere inside `next`, plus exactly one extra cell.
inline bool check_evolution(const Block& prev, const Block& next) {
    if (next.cells.size() != prev.cells.size() + 1) return false;
    std::set<Coord> target(next.cells.begin(), next.cells.end());
    Coord base = *std::min_element(prev.cells.begin(), prev.cells.end());
    for (Coord cand : next.cells) {
        Translation t = cand - base;
        bool all = true;
        for (Coord c : prev.cells)
            if (!target.count(c + t)) { all = false; break; }
        if (all) return true;
    }
    return false;
}

// Full rule check; collects every violation rather than stopping at the first.
inline std::vector<Violation> verify(const Puzzle& p, const SolutionGrid& s) {
    detail::check_dimensions(p, s);
    std::vector<Violation> violations;

    for (int r = 1; r <= p.rows; ++r) {
        for (int c = 1; c <= p.cols; ++c) {
            Coord rc{r, c};
            if (p.at(rc) == CellState::GivenSquare && !s.at(rc))
                violations.push_back({Rule::GivenMissing, "given square missing", {rc}});
        }
    }

    for (const Arrow& a : p.arrows)
        for (size_t i = 0; i + 1 < a.path.size(); ++i)
            if (s.at(a.path[i]) && s.at(a.path[i + 1]))
                violations.push_back({Rule::ConsecutiveArrowSquares,
                                      "consecutive squares on arrow " + std::to_string(a.id),
                                      {a.path[i], a.path[i + 1]}});

    auto extracted = extract_blocks(p, s);
    if (std::holds_alternative<std::vector<Violation>>(extracted)) {
        auto& more = std::get<std::vector<Violation>>(extracted);
        violations.insert(violations.end(), more.begin(), more.end());
        return violations;
    }

    const auto& blocks = std::get<std::vector<Block>>(extracted);
    for (const Arrow& a : p.arrows) {
        std::vector<const Block*> mine;
        for (const Block& b : blocks)
            if (b.arrow_id == a.id) mine.push_back(&b);
        if (mine.size() < 2) {
            violations.push_back({Rule::ArrowTooFewBlocks,
                                  "arrow " + std::to_string(a.id) + " passes through " +
                                      std::to_string(mine.size()) + " block(s)",
                                  a.path});
            continue;
        }
        for (size_t k = 1; k < mine.size(); ++k) {
            const Block& prev = *mine[k - 1];
            const Block& next = *mine[k];
            if (next.cells.size() != prev.cells.size() + 1) {
                violations.push_back({Rule::BadSizeProgression,
                                      "arrow " + std::to_string(a.id) + " block " +
                                          std::to_string(next.ordinal) + " has size " +
                                          std::to_string(next.cells.size()) + ", expected " +
                                          std::to_string(prev.cells.size() + 1),
                                      {next.anchor}});
            } else if (!check_evolution(prev, next)) {
                violations.push_back({Rule::BadShapeProgression,
                                      "arrow " + std::to_string(a.id) + " block " +
                                          std::to_string(next.ordinal) +
                                          " is not a translated copy plus one square",
                                      {next.anchor}});
            }
        }
    }
    return violations;
}

inline bool verify_ok(const Puzzle& p, const SolutionGrid& s) { return verify(p, s).empty(); }

}  // namespace evolomino
