#pragma once

// Board representation, puzzle/solution file I/O, and the derived cell sets
// (regions, admissible translations, arrow order helpers) consumed by the
// model builder and the generator.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evolomino {

struct Coord {
    int row = 0;  // 1..m, top row = 1
    int col = 0;  // 1..n, left col = 1
    auto operator<=>(const Coord&) const = default;
};

struct Translation {
    int drow = 0;
    int dcol = 0;
    auto operator<=>(const Translation&) const = default;
};

inline Coord operator+(Coord c, Translation t) { return {c.row + t.drow, c.col + t.dcol}; }
inline Translation operator-(Coord a, Coord b) { return {a.row - b.row, a.col - b.col}; }

// Shifts excluded from the admissible translation set: zero and the four
// orthogonal unit shifts (they would make consecutive blocks overlap or touch).
inline bool forbidden_shift(Translation t) {
    return (t.drow == 0 && t.dcol == 0) ||
           (std::abs(t.drow) + std::abs(t.dcol) == 1);
}

enum class CellState : uint8_t { Empty, Shaded, GivenSquare };

struct Arrow {
    int id = 0;
    std::vector<Coord> path;  // tail first, head last; length >= 3

    bool contains(Coord c) const {
        return std::find(path.begin(), path.end(), c) != path.end();
    }
};

struct Puzzle {
    int rows = 0;
    int cols = 0;
    std::vector<CellState> cells;  // row-major
    std::vector<Arrow> arrows;

    bool in_bounds(Coord c) const {
        return c.row >= 1 && c.row <= rows && c.col >= 1 && c.col <= cols;
    }
    CellState at(Coord c) const { return cells[(c.row - 1) * cols + c.col - 1]; }
    CellState& at(Coord c) { return cells[(c.row - 1) * cols + c.col - 1]; }
    int cell_count() const { return rows * cols; }

    // Arrow id occupying the cell, or -1.
    int arrow_at(Coord c) const {
        for (const Arrow& a : arrows)
            if (a.contains(c)) return a.id;
        return -1;
    }

    bool operator==(const Puzzle& o) const {
        if (rows != o.rows || cols != o.cols || cells != o.cells ||
            arrows.size() != o.arrows.size())
            return false;
        for (size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].id != o.arrows[i].id || arrows[i].path != o.arrows[i].path)
                return false;
        return true;
    }
};

struct SolutionGrid {
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> square;  // row-major booleans

    SolutionGrid() = default;
    SolutionGrid(int m, int n) : rows(m), cols(n), square(m * n, 0) {}

    bool at(Coord c) const { return square[(c.row - 1) * cols + c.col - 1] != 0; }
    void set(Coord c, bool v) { square[(c.row - 1) * cols + c.col - 1] = v ? 1 : 0; }
    int count() const { return static_cast<int>(std::count(square.begin(), square.end(), 1)); }
    bool operator==(const SolutionGrid&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

inline std::vector<Coord> neighbors(const Puzzle& p, Coord i) {
    std::vector<Coord> out;
    out.reserve(4);
    for (Translation d : {Translation{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
        Coord c = i + d;
        if (p.in_bounds(c)) out.push_back(c);
    }
    return out;
}

inline int max_blocks(const Arrow& a) {
    return (static_cast<int>(a.path.size()) + 1) / 2;
}

inline std::optional<Coord> next_on_arrow(const Arrow& a, Coord i) {
    auto it = std::find(a.path.begin(), a.path.end(), i);
    if (it == a.path.end()) throw std::invalid_argument("next_on_arrow: cell not on arrow path");
    ++it;
    if (it == a.path.end()) return std::nullopt;
    return *it;
}

inline std::vector<Coord> preceding_on_arrow(const Arrow& a, Coord i) {
    auto it = std::find(a.path.begin(), a.path.end(), i);
    if (it == a.path.end())
        throw std::invalid_argument("preceding_on_arrow: cell not on arrow path");
    return std::vector<Coord>(a.path.begin(), it);
}

// Cells that may belong to a block anchored on arrow `a`: BFS from the arrow's
// own path, never entering shaded cells or cells of other arrows. With
// `prune_foreign_given_adjacent` (the default) the wave additionally avoids
// cells orthogonally adjacent to a given square that sits on a *different*
// arrow's path; such a cell can only hold squares of that other arrow's block.
inline std::set<Coord> region(const Puzzle& p, const Arrow& a,
                              bool prune_foreign_given_adjacent = true) {
    std::vector<uint8_t> blocked(p.cell_count(), 0);
    auto idx = [&](Coord c) { return (c.row - 1) * p.cols + c.col - 1; };
    for (const Arrow& other : p.arrows) {
        if (other.id == a.id) continue;
        for (Coord c : other.path) blocked[idx(c)] = 1;
    }
    for (int r = 1; r <= p.rows; ++r)
        for (int c = 1; c <= p.cols; ++c)
            if (p.at({r, c}) == CellState::Shaded) blocked[idx({r, c})] = 1;
    if (prune_foreign_given_adjacent) {
        for (int r = 1; r <= p.rows; ++r) {
            for (int c = 1; c <= p.cols; ++c) {
                Coord g{r, c};
                if (p.at(g) != CellState::GivenSquare) continue;
                int owner = p.arrow_at(g);
                if (owner < 0 || owner == a.id) continue;
                for (Coord nb : neighbors(p, g)) blocked[idx(nb)] = 1;
            }
        }
    }

    std::set<Coord> reg(a.path.begin(), a.path.end());
    std::deque<Coord> queue(a.path.begin(), a.path.end());
    while (!queue.empty()) {
        Coord cur = queue.front();
        queue.pop_front();
        for (Coord nb : neighbors(p, cur)) {
            if (blocked[idx(nb)] || reg.count(nb)) continue;
            reg.insert(nb);
            queue.push_back(nb);
        }
    }
    return reg;
}

// Admissible shifts of a block square from cell `i` along arrow `a`: targets
// on the board, inside region(p, a), and not a forbidden (zero/unit) shift.
inline std::set<Translation> translations_from(const Puzzle& p, const Arrow& a, Coord i,
                                               const std::set<Coord>& reg) {
    std::set<Translation> out;
    for (Coord target : reg) {
        Translation t = target - i;
        if (!forbidden_shift(t)) out.insert(t);
    }
    return out;
}

inline std::set<Translation> translations_from(const Puzzle& p, const Arrow& a, Coord i,
                                               bool prune_foreign_given_adjacent = true) {
    return translations_from(p, a, i, region(p, a, prune_foreign_given_adjacent));
}

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') cur.pop_back();
        lines.push_back(cur);
    }
    return lines;
}

inline bool orthogonally_adjacent(Coord a, Coord b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
}

}  // namespace detail

inline Puzzle parse_puzzle(const std::string& text) {
    auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0] != "evolomino v1")
        throw ParseError(1, "expected header 'evolomino v1'");
    if (lines.size() < 2) throw ParseError(2, "missing dimensions line");

    Puzzle p;
    {
        std::istringstream in(lines[1]);
        std::string kw1, kw2;
        if (!(in >> kw1 >> p.rows >> kw2 >> p.cols) || kw1 != "rows" || kw2 != "cols" ||
            p.rows < 1 || p.cols < 1)
            throw ParseError(2, "malformed dimensions, expected 'rows <m> cols <n>'");
        std::string rest;
        if (in >> rest) throw ParseError(2, "trailing content after dimensions");
    }
    if (lines.size() < 3 || lines[2] != "grid:") throw ParseError(3, "expected 'grid:'");
    if (lines.size() < static_cast<size_t>(3 + p.rows))
        throw ParseError(static_cast<int>(lines.size()) + 1, "grid has fewer rows than declared");

    p.cells.assign(p.rows * p.cols, CellState::Empty);
    for (int r = 0; r < p.rows; ++r) {
        const std::string& row = lines[3 + r];
        int lineno = 4 + r;
        if (static_cast<int>(row.size()) != p.cols)
            throw ParseError(lineno, "grid row has wrong width");
        for (int c = 0; c < p.cols; ++c) {
            switch (row[c]) {
                case '.': p.cells[r * p.cols + c] = CellState::Empty; break;
                case '#': p.cells[r * p.cols + c] = CellState::Shaded; break;
                case 'O': p.cells[r * p.cols + c] = CellState::GivenSquare; break;
                default: throw ParseError(lineno, "invalid grid character");
            }
        }
    }

    std::set<Coord> used;
    for (size_t li = 3 + p.rows; li < lines.size(); ++li) {
        int lineno = static_cast<int>(li) + 1;
        const std::string& line = lines[li];
        if (line.empty() && li + 1 == lines.size()) break;  // tolerate trailing blank
        if (line.rfind("arrow:", 0) != 0) throw ParseError(lineno, "expected 'arrow:' line");

        Arrow a;
        a.id = static_cast<int>(p.arrows.size());
        std::istringstream in(line.substr(6));
        std::string tok;
        while (in >> tok) {
            size_t comma = tok.find(',');
            int r = 0, c = 0;
            try {
                if (comma == std::string::npos) throw std::invalid_argument("no comma");
                size_t used_r = 0, used_c = 0;
                r = std::stoi(tok.substr(0, comma), &used_r);
                c = std::stoi(tok.substr(comma + 1), &used_c);
                if (used_r != comma || used_c != tok.size() - comma - 1)
                    throw std::invalid_argument("junk");
            } catch (const std::exception&) {
                throw ParseError(lineno, "malformed arrow coordinate '" + tok + "'");
            }
            Coord cell{r, c};
            if (!p.in_bounds(cell)) throw ParseError(lineno, "arrow coordinate off the board");
            a.path.push_back(cell);
        }
        if (a.path.size() < 3) throw ParseError(lineno, "arrow length < 3");
        for (size_t i = 0; i < a.path.size(); ++i) {
            if (p.at(a.path[i]) == CellState::Shaded)
                throw ParseError(lineno, "arrow over shaded cell");
            if (i > 0 && !detail::orthogonally_adjacent(a.path[i - 1], a.path[i]))
                throw ParseError(lineno, "non-contiguous arrow path");
            for (size_t j = 0; j < i; ++j)
                if (a.path[j] == a.path[i]) throw ParseError(lineno, "arrow revisits a cell");
            if (used.count(a.path[i])) throw ParseError(lineno, "overlapping arrows");
        }
        for (Coord cell : a.path) used.insert(cell);
        p.arrows.push_back(std::move(a));
    }
    return p;
}

inline std::string serialize_puzzle(const Puzzle& p) {
    std::ostringstream out;
    out << "evolomino v1\n";
    out << "rows " << p.rows << " cols " << p.cols << "\n";
    out << "grid:\n";
    for (int r = 1; r <= p.rows; ++r) {
        for (int c = 1; c <= p.cols; ++c) {
            switch (p.at({r, c})) {
                case CellState::Empty: out << '.'; break;
                case CellState::Shaded: out << '#'; break;
                case CellState::GivenSquare: out << 'O'; break;
            }
        }
        out << '\n';
    }
    for (const Arrow& a : p.arrows) {
        out << "arrow:";
        for (Coord c : a.path) out << ' ' << c.row << ',' << c.col;
        out << '\n';
    }
    return out.str();
}

inline SolutionGrid parse_solution(const std::string& text) {
    auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0] != "evolomino v1")
        throw ParseError(1, "expected header 'evolomino v1'");
    int rows = 0, cols = 0;
    {
        if (lines.size() < 2) throw ParseError(2, "missing dimensions line");
        std::istringstream in(lines[1]);
        std::string kw1, kw2;
        if (!(in >> kw1 >> rows >> kw2 >> cols) || kw1 != "rows" || kw2 != "cols" ||
            rows < 1 || cols < 1)
            throw ParseError(2, "malformed dimensions, expected 'rows <m> cols <n>'");
    }
    if (lines.size() < 3 || lines[2] != "grid:") throw ParseError(3, "expected 'grid:'");
    if (lines.size() < static_cast<size_t>(3 + rows))
        throw ParseError(static_cast<int>(lines.size()) + 1, "grid has fewer rows than declared");
    SolutionGrid s(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const std::string& row = lines[3 + r];
        int lineno = 4 + r;
        if (static_cast<int>(row.size()) != cols)
            throw ParseError(lineno, "grid row has wrong width");
        for (int c = 0; c < cols; ++c) {
            switch (row[c]) {
                case '*': s.square[r * cols + c] = 1; break;
                case '.':
                case '#': s.square[r * cols + c] = 0; break;
                default: throw ParseError(lineno, "invalid solution character");
            }
        }
    }
    return s;
}

inline std::string serialize_solution(const Puzzle& p, const SolutionGrid& s) {
    std::ostringstream out;
    out << "evolomino v1\n";
    out << "rows " << p.rows << " cols " << p.cols << "\n";
    out << "grid:\n";
    for (int r = 1; r <= p.rows; ++r) {
        for (int c = 1; c <= p.cols; ++c) {
            Coord rc{r, c};
            if (s.at(rc))
                out << '*';
            else if (p.at(rc) == CellState::Shaded)
                out << '#';
            else
                out << '.';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace evolomino
