#pragma once

// Depth-first integer feasibility search over an IlpModel: bounds-consistency
// propagation on the linear rows, branching restricted to the binary
// variables, and a deterministic completion step that derives block sizes,
// flow supplies and flows once all binaries are fixed. Enumeration and
// uniqueness certification are built on exclusion cuts.

#include <chrono>
#include <cstdint>
#include <vector>

#include "evolomino/model.hpp"
#include "evolomino/rules.hpp"

namespace evolomino {

struct SolveLimits {
    double time_limit_seconds = 0;  // 0 = no limit
    uint64_t node_cap = 0;          // 0 = no limit
};

enum class SolveStatus { Feasible, Infeasible, TimedOut };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Feasible: return "Feasible";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::TimedOut: return "TimedOut";
    }
    return "?";
}

struct SolveStats {
    uint64_t nodes = 0;
    uint64_t propagation_rounds = 0;
    double millis = 0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Infeasible;
    SolutionGrid solution;               // populated when Feasible
    std::vector<int64_t> assignment;     // full variable assignment when Feasible
    SolveStats stats;
};

namespace detail {

inline int64_t div_floor(int64_t a, int64_t b) {
    int64_t q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline int64_t div_ceil(int64_t a, int64_t b) { return -div_floor(-a, b); }

class Search {
public:
    explicit Search(const IlpModel& m) : m_(m) {
        const int nv = static_cast<int>(m.vars.size());
        lo_.resize(nv);
        hi_.resize(nv);
        for (int v = 0; v < nv; ++v) {
            lo_[v] = m.vars[v].lower;
            hi_[v] = m.vars[v].upper;
        }

        rows_ = m.constraints;
        add_implied_cuts();
        occ_.resize(nv);
        for (size_t ci = 0; ci < rows_.size(); ++ci)
            for (auto [coef, var] : rows_[ci].terms) occ_[var].push_back((int)ci);

        region_adjacency_.resize(m.arrows.size());
        for (size_t ai = 0; ai < m.arrows.size(); ++ai) {
            const ArrowLayout& lay = m.arrows[ai];
            auto& adj = region_adjacency_[ai];
            adj.resize(lay.region_cells.size());
            for (size_t ri = 0; ri < lay.region_cells.size(); ++ri)
                for (Coord nb : neighbors(m.puzzle, lay.region_cells[ri])) {
                    int rj = lay.region_index[m.cell_index(nb)];
                    if (rj >= 0) adj[ri].push_back(rj);
                }
        }

        // Base branch order: x, y, b, t; most-constrained first inside a
        // family; lexicographic (arrow, block, row, col) as the tie break.
        // During search, conflict activity overrides this order (vars from
        // recently failing rows first); the base order breaks activity ties,
        // so runs stay deterministic.
        for (int v = 0; v < nv; ++v)
            if (m.vars[v].binary) branch_order_.push_back(v);
        auto family_rank = [](VarFamily f) {
            switch (f) {
                case VarFamily::CellX: return 0;
                case VarFamily::BlockY: return 1;
                case VarFamily::ActB: return 2;
                case VarFamily::TransT: return 3;
                default: return 4;
            }
        };
        std::sort(branch_order_.begin(), branch_order_.end(), [&](int a, int b) {
            const VarRef& ra = m.vars[a].ref;
            const VarRef& rb = m.vars[b].ref;
            int fa = family_rank(ra.family), fb = family_rank(rb.family);
            if (fa != fb) return fa < fb;
            size_t oa = occ_[a].size(), ob = occ_[b].size();
            if (oa != ob) return oa > ob;
            auto key = [](const VarRef& r) {
                return std::tuple(r.arrow, r.block, r.cell.row, r.cell.col, r.trans.drow,
                                  r.trans.dcol);
            };
            return key(ra) < key(rb);
        });

        rank_.assign(nv, 0);
        for (size_t i = 0; i < branch_order_.size(); ++i) rank_[branch_order_[i]] = (int)i;
        activity_.assign(nv, 0.0);
        in_queue_.assign(rows_.size(), 0);
    }

    SolveOutcome run(const SolveLimits& limits) {
        limits_ = limits;
        start_ = std::chrono::steady_clock::now();
        SolveOutcome out;

        enqueue_all();
        bool ok = propagate() && dfs();
        out.stats = stats_;
        out.stats.millis = elapsed_ms();
        if (ok) {
            out.status = SolveStatus::Feasible;
            out.assignment.assign(lo_.begin(), lo_.end());
            for (int v : completion_overrides_) out.assignment[v] = override_value_[v];
            out.solution = extract_solution(out.assignment);
        } else {
            out.status = aborted_ ? SolveStatus::TimedOut : SolveStatus::Infeasible;
        }
        return out;
    }

private:
    struct TrailEntry {
        int var;
        int64_t lo, hi;
    };

    const IlpModel& m_;
    std::vector<LinearConstraint> rows_;  // model rows plus implied cuts
    SolveLimits limits_;
    std::chrono::steady_clock::time_point start_;
    SolveStats stats_;
    bool aborted_ = false;

    // Redundant aggregates that the row-by-row bounds propagation cannot see
    // on its own. Each is implied by the model, so neither the solution set
    // nor the post-solve check changes; they only prune the search earlier.
    void add_implied_cuts() {
        // Total square count equals the summed block sizes (C1 + C9).
        {
            std::vector<std::pair<int, int>> terms;
            for (int x : m_.x_of) terms.emplace_back(1, x);
            for (const ArrowLayout& lay : m_.arrows)
                for (int k = 0; k < lay.blocks; ++k) terms.emplace_back(-1, lay.n[k]);
            rows_.push_back({std::move(terms), Sense::EQ, 0, Tag::FIX});
        }
        for (const ArrowLayout& lay : m_.arrows) {
            // Squares on the path are exactly the activated blocks (C1 + C4).
            std::vector<std::pair<int, int>> terms;
            for (size_t pi = 0; pi < lay.supply[0].size(); ++pi) {
                Coord cell = m_.vars[lay.supply[0][pi]].ref.cell;
                terms.emplace_back(1, m_.x_of[m_.cell_index(cell)]);
            }
            for (int k = 0; k < lay.blocks; ++k) terms.emplace_back(-1, lay.b[k]);
            rows_.push_back({std::move(terms), Sense::EQ, 0, Tag::FIX});
            // The k-th active block has at least k cells (C4, C5, C9, C10).
            for (int k = 0; k < lay.blocks; ++k)
                rows_.push_back(
                    {{{1, lay.n[k]}, {-(k + 1), lay.b[k]}}, Sense::GE, 0, Tag::FIX});
            // An arrow's blocks all live inside its region (C1 + C9).
            std::vector<std::pair<int, int>> cap;
            for (int k = 0; k < lay.blocks; ++k) cap.emplace_back(1, lay.n[k]);
            for (Coord cell : lay.region_cells)
                cap.emplace_back(-1, m_.x_of[m_.cell_index(cell)]);
            rows_.push_back({std::move(cap), Sense::LE, 0, Tag::FIX});
        }
    }

    std::vector<int64_t> lo_, hi_;
    std::vector<std::vector<int>> occ_;
    std::vector<std::vector<std::vector<int>>> region_adjacency_;  // [arrow][region idx]
    std::vector<double> activity_;
    std::vector<int> rank_;  // position in the base branch order
    double bump_ = 1.0;

    void bump_var(int var) {
        activity_[var] += bump_;
        if (activity_[var] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            bump_ *= 1e-100;
        }
    }
    void after_conflict() { bump_ *= 1.0 / 0.95; }
    std::vector<int> branch_order_;
    std::vector<TrailEntry> trail_;
    std::vector<int> queue_;
    std::vector<uint8_t> in_queue_;
    std::vector<int> completion_overrides_;
    std::vector<int64_t> override_value_;

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }
    bool out_of_budget() {
        if (limits_.node_cap && stats_.nodes >= limits_.node_cap) return true;
        if (limits_.time_limit_seconds > 0 && elapsed_ms() > limits_.time_limit_seconds * 1000.0)
            return true;
        return false;
    }

    void enqueue(int ci) {
        if (!in_queue_[ci]) {
            in_queue_[ci] = 1;
            queue_.push_back(ci);
        }
    }
    void enqueue_all() {
        for (size_t ci = 0; ci < rows_.size(); ++ci) enqueue((int)ci);
    }
    void enqueue_watchers(int var) {
        for (int ci : occ_[var]) enqueue(ci);
    }

    bool tighten(int var, int64_t nlo, int64_t nhi) {
        if (nlo <= lo_[var] && nhi >= hi_[var]) return true;
        trail_.push_back({var, lo_[var], hi_[var]});
        if (nlo > lo_[var]) lo_[var] = nlo;
        if (nhi < hi_[var]) hi_[var] = nhi;
        if (lo_[var] > hi_[var]) return false;
        enqueue_watchers(var);
        return true;
    }

    void undo_to(size_t mark) {
        while (trail_.size() > mark) {
            TrailEntry e = trail_.back();
            trail_.pop_back();
            lo_[e.var] = e.lo;
            hi_[e.var] = e.hi;
        }
        queue_.clear();
        std::fill(in_queue_.begin(), in_queue_.end(), 0);
    }

    // Bounds consistency on one row; false on wipe-out.
    bool propagate_row(const LinearConstraint& row) {
        int64_t min_act = 0, max_act = 0;
        for (auto [coef, var] : row.terms) {
            if (coef > 0) {
                min_act += (int64_t)coef * lo_[var];
                max_act += (int64_t)coef * hi_[var];
            } else {
                min_act += (int64_t)coef * hi_[var];
                max_act += (int64_t)coef * lo_[var];
            }
        }
        if (row.sense != Sense::GE) {  // LE or EQ: sum <= rhs
            if (min_act > row.rhs) return false;
            for (auto [coef, var] : row.terms) {
                int64_t contrib = coef > 0 ? (int64_t)coef * lo_[var] : (int64_t)coef * hi_[var];
                int64_t bound = row.rhs - (min_act - contrib);
                if (coef > 0) {
                    if (!tighten(var, lo_[var], div_floor(bound, coef))) return false;
                } else {
                    if (!tighten(var, div_ceil(bound, coef), hi_[var])) return false;
                }
            }
        }
        if (row.sense != Sense::LE) {  // GE or EQ: sum >= rhs
            if (max_act < row.rhs) return false;
            for (auto [coef, var] : row.terms) {
                int64_t contrib = coef > 0 ? (int64_t)coef * hi_[var] : (int64_t)coef * lo_[var];
                int64_t bound = row.rhs - (max_act - contrib);
                if (coef > 0) {
                    if (!tighten(var, div_ceil(bound, coef), hi_[var])) return false;
                } else {
                    if (!tighten(var, lo_[var], div_floor(bound, coef))) return false;
                }
            }
        }
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            int ci = queue_.back();
            queue_.pop_back();
            in_queue_[ci] = 0;
            ++stats_.propagation_rounds;
            if (!propagate_row(rows_[ci])) {
                for (auto [coef, var] : rows_[ci].terms) bump_var(var);
                after_conflict();
                queue_.clear();
                std::fill(in_queue_.begin(), in_queue_.end(), 0);
                return false;
            }
        }
        return fully_assigned_blocks_connected();
    }

    // Connectivity-aware pruning over partial domains. For every block that
    // is known to be active, the cells already fixed into it must be joinable
    // through cells still available to it, and the enclosing component must
    // leave room for the block's size lower bound and for an anchor cell.
    bool fully_assigned_blocks_connected() {
        for (size_t ai = 0; ai < m_.arrows.size(); ++ai) {
            const ArrowLayout& lay = m_.arrows[ai];
            const auto& adj = region_adjacency_[ai];
            const size_t n = lay.region_cells.size();
            std::vector<uint8_t> allowed(n), seen(n);
            std::vector<int> stack;
            for (int k = 0; k < lay.blocks; ++k) {
                if (lo_[lay.b[k]] != 1) continue;
                int64_t need = std::max<int64_t>(lo_[lay.n[k]], 1);
                int first_fixed = -1, fixed_count = 0;
                for (size_t ri = 0; ri < n; ++ri) {
                    allowed[ri] = hi_[lay.y[k][ri]] == 1;
                    seen[ri] = 0;
                    if (lo_[lay.y[k][ri]] == 1) {
                        if (first_fixed < 0) first_fixed = (int)ri;
                        ++fixed_count;
                    }
                }
                auto component = [&](int start) {
                    stack.assign(1, start);
                    seen[start] = 1;
                    int size = 0;
                    bool has_path_cell = false;
                    while (!stack.empty()) {
                        int ri = stack.back();
                        stack.pop_back();
                        ++size;
                        if (lay.path_index[m_.cell_index(lay.region_cells[ri])] >= 0)
                            has_path_cell = true;
                        for (int rj : adj[ri])
                            if (allowed[rj] && !seen[rj]) {
                                seen[rj] = 1;
                                stack.push_back(rj);
                            }
                    }
                    return std::pair(size, has_path_cell);
                };
                auto fail_block = [&]() {
                    for (int v : lay.y[k]) bump_var(v);
                    bump_var(lay.b[k]);
                    after_conflict();
                    return false;
                };
                if (first_fixed >= 0) {
                    auto [size, has_path] = component(first_fixed);
                    if (size < need) return fail_block();
                    if (!has_path) return fail_block();
                    int reached_fixed = 0;
                    for (size_t ri = 0; ri < n; ++ri)
                        reached_fixed += seen[ri] && lo_[lay.y[k][ri]] == 1;
                    if (reached_fixed != fixed_count) return fail_block();
                } else {
                    // No cell fixed yet: some available component must still
                    // host an anchor and `need` cells.
                    bool viable = false;
                    for (size_t ri = 0; ri < n && !viable; ++ri) {
                        if (!allowed[ri] || seen[ri]) continue;
                        auto [size, has_path] = component((int)ri);
                        viable = has_path && size >= need;
                    }
                    if (!viable) return fail_block();
                }
            }
        }
        return true;
    }

    bool dfs() {
        if (out_of_budget()) {
            aborted_ = true;
            return false;
        }
        int var = -1;
        for (int v : branch_order_) {
            if (lo_[v] == hi_[v]) continue;
            if (var < 0 || activity_[v] > activity_[var] ||
                (activity_[v] == activity_[var] && rank_[v] < rank_[var]))
                var = v;
        }
        if (var < 0) return try_complete();

        const bool ones_first = m_.vars[var].ref.family == VarFamily::ActB;
        for (int attempt = 0; attempt < 2; ++attempt) {
            int64_t value = ones_first ? 1 - attempt : attempt;
            ++stats_.nodes;
            size_t mark = trail_.size();
            if (tighten(var, value, value) && propagate() && dfs()) return true;
            if (aborted_) return false;
            undo_to(mark);
        }
        return false;
    }

    // All binaries fixed: derive N by C9, supplies by C14 at the anchor, and
    // flows by routing one unit to every block cell along a spanning tree.
    bool try_complete() {
        completion_overrides_.clear();
        override_value_.assign(m_.vars.size(), 0);
        auto set_value = [&](int var, int64_t value) {
            completion_overrides_.push_back(var);
            override_value_[var] = value;
        };

        for (const ArrowLayout& lay : m_.arrows) {
            for (int k = 0; k < lay.blocks; ++k) {
                std::vector<int> cells;
                for (size_t ri = 0; ri < lay.region_cells.size(); ++ri)
                    if (lo_[lay.y[k][ri]] == 1) cells.push_back((int)ri);
                const int64_t size = (int64_t)cells.size();
                set_value(lay.n[k], size);
                for (size_t fp = 0; fp < lay.flow_pairs.size(); ++fp)
                    set_value(lay.flow[k][fp], 0);
                for (size_t pi = 0; pi < lay.supply[k].size(); ++pi)
                    set_value(lay.supply[k][pi], 0);
                if (lo_[lay.b[k]] == 0) {
                    if (size != 0) return false;
                    continue;
                }
                // anchor: the unique on-path block cell
                int anchor_ri = -1;
                for (int ri : cells)
                    if (lay.path_index[m_.cell_index(lay.region_cells[ri])] >= 0) {
                        if (anchor_ri >= 0) return false;
                        anchor_ri = ri;
                    }
                if (anchor_ri < 0) return false;
                int anchor_path = lay.path_index[m_.cell_index(lay.region_cells[anchor_ri])];
                set_value(lay.supply[k][anchor_path], size);

                // spanning tree rooted at the anchor
                std::vector<uint8_t> inb(lay.region_cells.size(), 0);
                for (int ri : cells) inb[ri] = 1;
                std::vector<int> parent(lay.region_cells.size(), -2), order;
                parent[anchor_ri] = -1;
                order.push_back(anchor_ri);
                for (size_t head = 0; head < order.size(); ++head) {
                    Coord c = lay.region_cells[order[head]];
                    for (Coord nb : neighbors(m_.puzzle, c)) {
                        int rj = lay.region_index[m_.cell_index(nb)];
                        if (rj < 0 || !inb[rj] || parent[rj] != -2) continue;
                        parent[rj] = order[head];
                        order.push_back(rj);
                    }
                }
                if (order.size() != cells.size()) return false;  // disconnected
                std::vector<int64_t> subtree(lay.region_cells.size(), 0);
                for (size_t i = order.size(); i-- > 0;) {
                    int ri = order[i];
                    subtree[ri] += 1;
                    if (parent[ri] >= 0) {
                        subtree[parent[ri]] += subtree[ri];
                        Coord from = lay.region_cells[parent[ri]];
                        Coord to = lay.region_cells[ri];
                        int fp = lay.flow_pair_at[m_.cell_index(from) * m_.puzzle.cell_count() +
                                                  m_.cell_index(to)];
                        if (fp < 0) return false;
                        set_value(lay.flow[k][fp], subtree[ri]);
                    }
                }
            }
        }

        // Re-check every row and bound against the completed assignment.
        std::vector<int64_t> full(lo_.begin(), lo_.end());
        for (int v : completion_overrides_) full[v] = override_value_[v];
        return check_assignment(m_, full);
    }

    SolutionGrid extract_solution(const std::vector<int64_t>& assignment) const {
        SolutionGrid s(m_.puzzle.rows, m_.puzzle.cols);
        for (int r = 1; r <= m_.puzzle.rows; ++r)
            for (int c = 1; c <= m_.puzzle.cols; ++c)
                s.set({r, c}, assignment[m_.x_of[m_.cell_index({r, c})]] == 1);
        return s;
    }

public:
    // Plain term-by-term evaluation, used as the post-solve soundness check.
    static bool check_assignment(const IlpModel& m, const std::vector<int64_t>& a) {
        for (size_t v = 0; v < m.vars.size(); ++v)
            if (a[v] < m.vars[v].lower || a[v] > m.vars[v].upper) return false;
        for (const LinearConstraint& row : m.constraints) {
            int64_t sum = 0;
            for (auto [coef, var] : row.terms) sum += (int64_t)coef * a[var];
            switch (row.sense) {
                case Sense::LE: if (sum > row.rhs) return false; break;
                case Sense::EQ: if (sum != row.rhs) return false; break;
                case Sense::GE: if (sum < row.rhs) return false; break;
            }
        }
        return true;
    }
};

}  // namespace detail

inline bool check_assignment(const IlpModel& m, const std::vector<int64_t>& a) {
    return detail::Search::check_assignment(m, a);
}

inline SolveOutcome solve(const IlpModel& m, const SolveLimits& limits = {}) {
    detail::Search search(m);
    return search.run(limits);
}

struct EnumerateResult {
    std::vector<SolutionGrid> solutions;
    bool exhausted = false;  // proved that no further solution exists
    bool truncated = false;  // hit a time or node limit mid-stream
    SolveStats total;
};

inline EnumerateResult enumerate(const IlpModel& m, int cap, const SolveLimits& limits = {}) {
    EnumerateResult out;
    IlpModel current = m;
    while (cap <= 0 || static_cast<int>(out.solutions.size()) < cap) {
        SolveOutcome o = solve(current, limits);
        out.total.nodes += o.stats.nodes;
        out.total.propagation_rounds += o.stats.propagation_rounds;
        out.total.millis += o.stats.millis;
        if (o.status == SolveStatus::Feasible) {
            out.solutions.push_back(o.solution);
            current = add_exclusion(current, o.solution);
        } else if (o.status == SolveStatus::Infeasible) {
            out.exhausted = true;
            break;
        } else {
            out.truncated = true;
            break;
        }
    }
    return out;
}

enum class Uniqueness { Unique, NotUnique, Unknown };

// True uniqueness certificate: the model with `s` excluded must be infeasible.
inline Uniqueness is_unique(const IlpModel& m, const SolutionGrid& s,
                            const SolveLimits& limits = {}) {
    SolveOutcome o = solve(add_exclusion(m, s), limits);
    switch (o.status) {
        case SolveStatus::Infeasible: return Uniqueness::Unique;
        case SolveStatus::Feasible: return Uniqueness::NotUnique;
        default: return Uniqueness::Unknown;
    }
}

}  // namespace evolomino
