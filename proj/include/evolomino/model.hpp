#pragma once

// Compilation of a puzzle into an integer linear feasibility model: variable
// catalog, tagged constraint families, exclusion cuts, size accounting, and
// LP-format export.

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "evolomino/grid.hpp"

namespace evolomino {

enum class VarFamily : uint8_t { CellX, BlockY, ActB, SizeN, SupplyF, FlowF, TransT };
inline constexpr int kVarFamilyCount = 7;

inline const char* var_family_name(VarFamily f) {
    switch (f) {
        case VarFamily::CellX: return "CellX";
        case VarFamily::BlockY: return "BlockY";
        case VarFamily::ActB: return "ActB";
        case VarFamily::SizeN: return "SizeN";
        case VarFamily::SupplyF: return "SupplyF";
        case VarFamily::FlowF: return "FlowF";
        case VarFamily::TransT: return "TransT";
    }
    return "?";
}

struct VarRef {
    VarFamily family = VarFamily::CellX;
    int arrow = -1;        // a
    int block = 0;         // k, 1-based
    Coord cell{};          // i (also the flow source cell)
    Coord cell2{};         // j, flow target
    Translation trans{};   // translation index for TransT
};

struct VarInfo {
    VarRef ref;
    int lower = 0;
    int upper = 1;
    bool binary = true;
};

enum class Tag : uint8_t {
    C1, C2, C3, C4, C5, C6, C7, C8, C9, C10, C11, C12, C13, C14, C14B,
    C15, C16, C17, C18, C19, C20, EXCL, FIX,
};
inline constexpr int kTagCount = 23;

inline const char* tag_name(Tag t) {
    static const char* names[] = {"C1",  "C2",  "C3",  "C4",  "C5",  "C6",  "C7",  "C8",
                                  "C9",  "C10", "C11", "C12", "C13", "C14", "C14B",
                                  "C15", "C16", "C17", "C18", "C19", "C20", "EXCL", "FIX"};
    return names[static_cast<int>(t)];
}

enum class Sense : uint8_t { LE, EQ, GE };

struct LinearConstraint {
    std::vector<std::pair<int, int>> terms;  // (coefficient, variable index)
    Sense sense = Sense::LE;
    int rhs = 0;
    Tag tag = Tag::C1;
};

struct BuildOptions {
    // Region pruning around given squares on foreign arrow paths (the default
    // wave refinement); disable for the bare BFS described in prose.
    bool prune_region_by_foreign_givens = true;
    // Instantiate flow variables between two cells that are both on the
    // arrow's own path. They occur in no balance equation; kept by default so
    // model sizes line up with the published accounting.
    bool include_arrow_pair_flows = true;
    // Per-arrow big-M constants instead of the board size.
    bool tight_big_m = false;
};

// Per-arrow index tables kept by the model so the search can map variables
// back to blocks, flow edges and translations.
struct ArrowLayout {
    std::vector<Coord> region_cells;              // sorted
    std::vector<int> region_index;                // dense cell idx -> region idx or -1
    std::vector<int> path_index;                  // dense cell idx -> path idx or -1
    int blocks = 0;                               // K_a
    std::vector<std::pair<Coord, Coord>> flow_pairs;
    std::vector<Translation> translations;        // union of per-cell T^a_i, sorted
    std::vector<std::vector<int>> cell_trans;     // region idx -> indices into translations

    std::vector<std::vector<int>> y;              // [k-1][region idx] -> var
    std::vector<int> b;                           // [k-1] -> var
    std::vector<int> n;                           // [k-1] -> var
    std::vector<std::vector<int>> supply;         // [k-1][path idx] -> var
    std::vector<std::vector<int>> flow;           // [k-1][pair idx] -> var
    std::vector<std::vector<int>> t;              // [k-2][trans idx] -> var
    std::vector<int> flow_pair_at;                // cell idx * ncells + cell idx -> pair idx or -1
};

struct IlpModel {
    Puzzle puzzle;
    BuildOptions options;
    int big_m = 0;
    std::vector<VarInfo> vars;
    std::vector<LinearConstraint> constraints;
    std::vector<int> x_of;                        // cell idx -> var
    std::vector<ArrowLayout> arrows;

    int cell_index(Coord c) const { return (c.row - 1) * puzzle.cols + c.col - 1; }
};

inline IlpModel build_model(const Puzzle& p, const BuildOptions& opts = {}) {
    IlpModel m;
    m.puzzle = p;
    m.options = opts;
    m.big_m = p.cell_count();
    const int ncells = p.cell_count();

    auto add_var = [&](VarRef ref, int lo, int hi, bool binary) {
        m.vars.push_back({ref, lo, hi, binary});
        return static_cast<int>(m.vars.size()) - 1;
    };

    m.x_of.resize(ncells);
    for (int r = 1; r <= p.rows; ++r)
        for (int c = 1; c <= p.cols; ++c)
            m.x_of[m.cell_index({r, c})] =
                add_var({VarFamily::CellX, -1, 0, {r, c}}, 0, 1, true);

    m.arrows.resize(p.arrows.size());
    for (const Arrow& a : p.arrows) {
        ArrowLayout& lay = m.arrows[a.id];
        auto reg = region(p, a, opts.prune_region_by_foreign_givens);
        lay.region_cells.assign(reg.begin(), reg.end());
        lay.region_index.assign(ncells, -1);
        for (size_t i = 0; i < lay.region_cells.size(); ++i)
            lay.region_index[m.cell_index(lay.region_cells[i])] = static_cast<int>(i);
        lay.path_index.assign(ncells, -1);
        for (size_t i = 0; i < a.path.size(); ++i)
            lay.path_index[m.cell_index(a.path[i])] = static_cast<int>(i);
        lay.blocks = max_blocks(a);

        lay.flow_pair_at.assign(ncells * ncells, -1);
        for (Coord i : lay.region_cells) {
            for (Coord j : neighbors(p, i)) {
                if (!reg.count(j)) continue;
                bool both_on_path =
                    lay.path_index[m.cell_index(i)] >= 0 && lay.path_index[m.cell_index(j)] >= 0;
                if (both_on_path && !opts.include_arrow_pair_flows) continue;
                lay.flow_pair_at[m.cell_index(i) * ncells + m.cell_index(j)] =
                    static_cast<int>(lay.flow_pairs.size());
                lay.flow_pairs.emplace_back(i, j);
            }
        }

        std::set<Translation> tset;
        lay.cell_trans.resize(lay.region_cells.size());
        for (Coord i : lay.region_cells)
            for (Translation t : translations_from(p, a, i, reg)) tset.insert(t);
        lay.translations.assign(tset.begin(), tset.end());
        std::map<Translation, int> tindex;
        for (size_t i = 0; i < lay.translations.size(); ++i) tindex[lay.translations[i]] = (int)i;
        for (size_t ri = 0; ri < lay.region_cells.size(); ++ri)
            for (Translation t : translations_from(p, a, lay.region_cells[ri], reg))
                lay.cell_trans[ri].push_back(tindex[t]);

        const int region_size = static_cast<int>(lay.region_cells.size());
        lay.y.resize(lay.blocks);
        lay.b.resize(lay.blocks);
        lay.n.resize(lay.blocks);
        lay.supply.resize(lay.blocks);
        lay.flow.resize(lay.blocks);
        lay.t.resize(lay.blocks > 1 ? lay.blocks - 1 : 0);
        for (int k = 1; k <= lay.blocks; ++k) {
            for (Coord i : lay.region_cells)
                lay.y[k - 1].push_back(add_var({VarFamily::BlockY, a.id, k, i}, 0, 1, true));
            int blo = k <= 2 ? 1 : 0;  // every arrow hosts at least two blocks
            lay.b[k - 1] = add_var({VarFamily::ActB, a.id, k}, blo, 1, true);
            lay.n[k - 1] = add_var({VarFamily::SizeN, a.id, k}, 0, region_size, false);
            for (Coord i : a.path)
                lay.supply[k - 1].push_back(
                    add_var({VarFamily::SupplyF, a.id, k, i}, 0,
                            opts.tight_big_m ? region_size : m.big_m, false));
            for (auto& [i, j] : lay.flow_pairs)
                lay.flow[k - 1].push_back(
                    add_var({VarFamily::FlowF, a.id, k, i, j}, 0,
                            opts.tight_big_m ? region_size : m.big_m, false));
            if (k >= 2)
                for (Translation t : lay.translations)
                    lay.t[k - 2].push_back(
                        add_var({VarFamily::TransT, a.id, k, {}, {}, t}, 0, 1, true));
        }
    }

    auto add_row = [&](Tag tag, Sense sense, int rhs, std::vector<std::pair<int, int>> terms) {
        m.constraints.push_back({std::move(terms), sense, rhs, tag});
    };

    // C7/C8: two orthogonally adjacent cells cannot belong to different
    // blocks. One row per unordered cell pair and ordered block pair;
    // horizontal pairs are C7, vertical pairs C8.
    auto emit_adjacent = [&](Coord i, Coord j, Tag tag) {
        int ci = m.cell_index(i), cj = m.cell_index(j);
        for (const ArrowLayout& la : m.arrows) {
            int ri = la.region_index[ci];
            if (ri < 0) continue;
            for (int ka = 0; ka < la.blocks; ++ka) {
                for (const ArrowLayout& lb : m.arrows) {
                    int rj = lb.region_index[cj];
                    if (rj < 0) continue;
                    for (int kb = 0; kb < lb.blocks; ++kb) {
                        if (&la == &lb && ka == kb) continue;
                        add_row(tag, Sense::LE, 1, {{1, la.y[ka][ri]}, {1, lb.y[kb][rj]}});
                    }
                }
            }
        }
    };
    for (int r = 1; r <= p.rows; ++r) {
        for (int c = 1; c <= p.cols; ++c) {
            if (c + 1 <= p.cols) emit_adjacent({r, c}, {r, c + 1}, Tag::C7);
            if (r + 1 <= p.rows) emit_adjacent({r, c}, {r + 1, c}, Tag::C8);
        }
    }

    // C1: every square belongs to exactly one block.
    std::vector<int> no_region_cells;
    for (int ci = 0; ci < ncells; ++ci) {
        std::vector<std::pair<int, int>> terms;
        for (const ArrowLayout& lay : m.arrows) {
            int ri = lay.region_index[ci];
            if (ri < 0) continue;
            for (int k = 0; k < lay.blocks; ++k) terms.emplace_back(1, lay.y[k][ri]);
        }
        if (terms.empty()) {
            no_region_cells.push_back(ci);  // x fixed to zero below
            continue;
        }
        terms.emplace_back(-1, m.x_of[ci]);
        add_row(Tag::C1, Sense::EQ, 0, std::move(terms));
    }

    for (const Arrow& a : p.arrows) {
        ArrowLayout& lay = m.arrows[a.id];
        const int K = lay.blocks;
        const int region_size = static_cast<int>(lay.region_cells.size());
        const int m_act = opts.tight_big_m ? region_size : m.big_m;
        const int m_size = opts.tight_big_m ? region_size + 1 : m.big_m;

        // C2: no two consecutive squares along the arrow.
        for (size_t i = 0; i + 1 < a.path.size(); ++i)
            add_row(Tag::C2, Sense::LE, 1,
                    {{1, m.x_of[m.cell_index(a.path[i])]},
                     {1, m.x_of[m.cell_index(a.path[i + 1])]}});

        // C3: inactive blocks are empty.
        for (int k = 0; k < K; ++k) {
            std::vector<std::pair<int, int>> terms;
            for (int ri = 0; ri < region_size; ++ri) terms.emplace_back(1, lay.y[k][ri]);
            terms.emplace_back(-m_act, lay.b[k]);
            add_row(Tag::C3, Sense::LE, 0, std::move(terms));
        }

        // C4: an active block has exactly one square on the arrow.
        for (int k = 0; k < K; ++k) {
            std::vector<std::pair<int, int>> terms;
            for (size_t pi = 0; pi < a.path.size(); ++pi)
                terms.emplace_back(1, lay.y[k][lay.region_index[m.cell_index(a.path[pi])]]);
            terms.emplace_back(-1, lay.b[k]);
            add_row(Tag::C4, Sense::EQ, 0, std::move(terms));
        }

        // C5: activation in order.
        for (int k = 1; k < K; ++k)
            add_row(Tag::C5, Sense::LE, 0, {{1, lay.b[k]}, {-1, lay.b[k - 1]}});

        // C6: block order follows the arrow direction.
        for (size_t pi = 0; pi < a.path.size(); ++pi) {
            int ri = lay.region_index[m.cell_index(a.path[pi])];
            for (int k = 1; k < K; ++k) {
                std::vector<std::pair<int, int>> terms;
                for (size_t pj = 0; pj < pi; ++pj)
                    terms.emplace_back(1, lay.y[k][lay.region_index[m.cell_index(a.path[pj])]]);
                terms.emplace_back(1, lay.y[k - 1][ri]);
                add_row(Tag::C6, Sense::LE, 1, std::move(terms));
            }
        }

        // C9: block size definition.
        for (int k = 0; k < K; ++k) {
            std::vector<std::pair<int, int>> terms{{1, lay.n[k]}};
            for (int ri = 0; ri < region_size; ++ri) terms.emplace_back(-1, lay.y[k][ri]);
            add_row(Tag::C9, Sense::EQ, 0, std::move(terms));
        }

        // C10/C11: each next block grows by exactly one square.
        for (int k = 1; k < K; ++k) {
            add_row(Tag::C10, Sense::GE, 1 - m_size,
                    {{1, lay.n[k]}, {-1, lay.n[k - 1]}, {-m_size, lay.b[k]}});
            add_row(Tag::C11, Sense::LE, 1 + m_size,
                    {{1, lay.n[k]}, {-1, lay.n[k - 1]}, {m_size, lay.b[k]}});
        }

        // C12: flow conservation at consumer cells (one unit stays).
        for (int k = 0; k < K; ++k) {
            for (int ri = 0; ri < region_size; ++ri) {
                Coord i = lay.region_cells[ri];
                if (lay.path_index[m.cell_index(i)] >= 0) continue;
                std::vector<std::pair<int, int>> terms;
                for (Coord j : neighbors(p, i)) {
                    int in_pair = lay.flow_pair_at[m.cell_index(j) * ncells + m.cell_index(i)];
                    int out_pair = lay.flow_pair_at[m.cell_index(i) * ncells + m.cell_index(j)];
                    if (in_pair >= 0) terms.emplace_back(1, lay.flow[k][in_pair]);
                    if (out_pair >= 0) terms.emplace_back(-1, lay.flow[k][out_pair]);
                }
                terms.emplace_back(-1, lay.y[k][ri]);
                add_row(Tag::C12, Sense::EQ, 0, std::move(terms));
            }
        }

        // C13: flow conservation at arrow cells, which may act as the source.
        for (int k = 0; k < K; ++k) {
            for (size_t pi = 0; pi < a.path.size(); ++pi) {
                Coord i = a.path[pi];
                std::vector<std::pair<int, int>> terms;
                for (Coord j : neighbors(p, i)) {
                    if (lay.path_index[m.cell_index(j)] >= 0) continue;
                    int in_pair = lay.flow_pair_at[m.cell_index(j) * ncells + m.cell_index(i)];
                    int out_pair = lay.flow_pair_at[m.cell_index(i) * ncells + m.cell_index(j)];
                    if (in_pair >= 0) terms.emplace_back(1, lay.flow[k][in_pair]);
                    if (out_pair >= 0) terms.emplace_back(-1, lay.flow[k][out_pair]);
                }
                terms.emplace_back(-1, lay.y[k][lay.region_index[m.cell_index(i)]]);
                terms.emplace_back(1, lay.supply[k][pi]);
                add_row(Tag::C13, Sense::EQ, 0, std::move(terms));
            }
        }

        // C14: total generated flow equals the block size.
        for (int k = 0; k < K; ++k) {
            std::vector<std::pair<int, int>> terms;
            for (size_t pi = 0; pi < a.path.size(); ++pi)
                terms.emplace_back(1, lay.supply[k][pi]);
            terms.emplace_back(-1, lay.n[k]);
            add_row(Tag::C14, Sense::EQ, 0, std::move(terms));
        }

        // C14B: only a source inside the block generates flow.
        for (int k = 0; k < K; ++k)
            for (size_t pi = 0; pi < a.path.size(); ++pi)
                add_row(Tag::C14B, Sense::LE, 0,
                        {{1, lay.supply[k][pi]},
                         {-m_act, lay.y[k][lay.region_index[m.cell_index(a.path[pi])]]}});

        // C15/C16: flow only leaves and enters cells of the block.
        for (int k = 0; k < K; ++k) {
            for (size_t fp = 0; fp < lay.flow_pairs.size(); ++fp) {
                auto [i, j] = lay.flow_pairs[fp];
                add_row(Tag::C15, Sense::LE, 0,
                        {{1, lay.flow[k][fp]},
                         {-m_act, lay.y[k][lay.region_index[m.cell_index(i)]]}});
                add_row(Tag::C16, Sense::LE, 0,
                        {{1, lay.flow[k][fp]},
                         {-m_act, lay.y[k][lay.region_index[m.cell_index(j)]]}});
            }
        }
        // C17 (flow nonnegativity) is realized as variable lower bounds.

        // C18: exactly one translation per activated follow-up block.
        for (int k = 2; k <= K; ++k) {
            std::vector<std::pair<int, int>> terms;
            for (size_t ti = 0; ti < lay.translations.size(); ++ti)
                terms.emplace_back(1, lay.t[k - 2][ti]);
            terms.emplace_back(-1, lay.b[k - 1]);
            add_row(Tag::C18, Sense::EQ, 0, std::move(terms));
        }

        // C19: every square of the previous block must have a translation.
        for (int k = 2; k <= K; ++k) {
            for (int ri = 0; ri < region_size; ++ri) {
                std::vector<std::pair<int, int>> terms;
                for (int ti : lay.cell_trans[ri]) terms.emplace_back(1, lay.t[k - 2][ti]);
                terms.emplace_back(-1, lay.y[k - 2][ri]);
                terms.emplace_back(-1, lay.b[k - 1]);
                add_row(Tag::C19, Sense::GE, -1, std::move(terms));
            }
        }

        // C20: the chosen translation maps each square of block k-1 into k.
        for (int k = 2; k <= K; ++k) {
            for (int ri = 0; ri < region_size; ++ri) {
                Coord i = lay.region_cells[ri];
                for (int ti : lay.cell_trans[ri]) {
                    Coord target = i + lay.translations[ti];
                    int tri = lay.region_index[m.cell_index(target)];
                    add_row(Tag::C20, Sense::GE, -1,
                            {{1, lay.y[k - 1][tri]},
                             {-1, lay.y[k - 2][ri]},
                             {-1, lay.t[k - 2][ti]}});
                }
            }
        }
    }

    // FIX: encode the printed grid and the two mandatory blocks per arrow.
    auto fix_var = [&](int var, int value, Tag tag = Tag::FIX) {
        m.vars[var].lower = value;
        m.vars[var].upper = value;
        add_row(tag, Sense::EQ, value, {{1, var}});
    };
    for (int r = 1; r <= p.rows; ++r) {
        for (int c = 1; c <= p.cols; ++c) {
            Coord rc{r, c};
            if (p.at(rc) == CellState::Shaded) fix_var(m.x_of[m.cell_index(rc)], 0);
            if (p.at(rc) == CellState::GivenSquare) fix_var(m.x_of[m.cell_index(rc)], 1);
        }
    }
    for (int ci : no_region_cells) {
        if (p.at({ci / p.cols + 1, ci % p.cols + 1}) == CellState::Shaded) continue;  // done
        fix_var(m.x_of[ci], 0);
    }
    for (ArrowLayout& lay : m.arrows) {
        fix_var(lay.b[0], 1);
        fix_var(lay.b[1], 1);
    }
    return m;
}

// Forbid one specific square grid: sum of |x_i - s_i| >= 1, linearized.
inline IlpModel add_exclusion(const IlpModel& base, const SolutionGrid& s) {
    IlpModel m = base;
    std::vector<std::pair<int, int>> terms;
    int ones = 0;
    for (int r = 1; r <= m.puzzle.rows; ++r) {
        for (int c = 1; c <= m.puzzle.cols; ++c) {
            int var = m.x_of[m.cell_index({r, c})];
            if (s.at({r, c})) {
                terms.emplace_back(-1, var);
                ++ones;
            } else {
                terms.emplace_back(1, var);
            }
        }
    }
    m.constraints.push_back({std::move(terms), Sense::GE, 1 - ones, Tag::EXCL});
    return m;
}

enum class StatsConvention { Structural, Paper };

struct ModelStats {
    StatsConvention convention = StatsConvention::Structural;
    std::array<int, kVarFamilyCount> vars_by_family{};
    std::array<int, kTagCount> rows_by_tag{};
    int var_total = 0;
    int constraint_total = 0;
};

// Size accounting. "Paper" additionally counts flow nonnegativity (C17) and
// the lower halves of the supply bounds as constraint rows; "structural"
// treats them as variable bounds.
inline ModelStats stats(const IlpModel& m,
                        StatsConvention convention = StatsConvention::Structural) {
    ModelStats st;
    st.convention = convention;
    for (const VarInfo& v : m.vars) ++st.vars_by_family[static_cast<int>(v.ref.family)];
    for (const LinearConstraint& c : m.constraints) ++st.rows_by_tag[static_cast<int>(c.tag)];
    if (convention == StatsConvention::Paper) {
        st.rows_by_tag[static_cast<int>(Tag::C17)] +=
            st.vars_by_family[static_cast<int>(VarFamily::FlowF)];
        st.rows_by_tag[static_cast<int>(Tag::C14B)] +=
            st.vars_by_family[static_cast<int>(VarFamily::SupplyF)];
    }
    for (int v : st.vars_by_family) st.var_total += v;
    for (int r : st.rows_by_tag) st.constraint_total += r;
    return st;
}

// Fixed-order table suitable for diffing.
inline std::string format_stats(const ModelStats& st) {
    std::ostringstream out;
    out << "convention "
        << (st.convention == StatsConvention::Paper ? "paper" : "structural") << "\n";
    out << "family vars\n";
    for (int f = 0; f < kVarFamilyCount; ++f)
        out << var_family_name(static_cast<VarFamily>(f)) << ' ' << st.vars_by_family[f] << "\n";
    out << "total " << st.var_total << "\n";
    out << "family constraints\n";
    for (int t = 0; t < kTagCount; ++t)
        out << tag_name(static_cast<Tag>(t)) << ' ' << st.rows_by_tag[t] << "\n";
    out << "total " << st.constraint_total << "\n";
    return out.str();
}

namespace detail {

inline std::string lp_int(int v, bool negative_as_m = true) {
    if (v < 0 && negative_as_m) return "m" + std::to_string(-v);
    return std::to_string(v);
}

inline std::string lp_var_name(const VarInfo& v) {
    const VarRef& r = v.ref;
    switch (r.family) {
        case VarFamily::CellX:
            return "x_" + std::to_string(r.cell.row) + "_" + std::to_string(r.cell.col);
        case VarFamily::BlockY:
            return "y_" + std::to_string(r.arrow) + "_" + std::to_string(r.block) + "_" +
                   std::to_string(r.cell.row) + "_" + std::to_string(r.cell.col);
        case VarFamily::ActB:
            return "b_" + std::to_string(r.arrow) + "_" + std::to_string(r.block);
        case VarFamily::SizeN:
            return "N_" + std::to_string(r.arrow) + "_" + std::to_string(r.block);
        case VarFamily::SupplyF:
            return "F_" + std::to_string(r.arrow) + "_" + std::to_string(r.block) + "_" +
                   std::to_string(r.cell.row) + "_" + std::to_string(r.cell.col);
        case VarFamily::FlowF:
            return "f_" + std::to_string(r.arrow) + "_" + std::to_string(r.block) + "_" +
                   std::to_string(r.cell.row) + "_" + std::to_string(r.cell.col) + "_" +
                   std::to_string(r.cell2.row) + "_" + std::to_string(r.cell2.col);
        case VarFamily::TransT:
            return "t_" + std::to_string(r.arrow) + "_" + std::to_string(r.block) + "_" +
                   lp_int(r.trans.drow) + "_" + lp_int(r.trans.dcol);
    }
    return "?";
}

}  // namespace detail

// CPLEX-style LP text: zero objective, rows in tag order, bounds for the
// integer variables, then the variable type sections.
inline std::string export_lp(const IlpModel& m) {
    std::ostringstream out;
    out << "\\ evolomino feasibility model\n";
    out << "Minimize\n obj:\n";
    out << "Subject To\n";

    std::vector<int> order(m.constraints.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return m.constraints[a].tag < m.constraints[b].tag;
    });

    std::array<int, kTagCount> counter{};
    for (int ci : order) {
        const LinearConstraint& row = m.constraints[ci];
        int n = counter[static_cast<int>(row.tag)]++;
        std::string line = " ";
        line += tag_name(row.tag);
        line += "_" + std::to_string(n) + ":";
        bool first = true;
        for (auto [coef, var] : row.terms) {
            std::string term;
            if (coef >= 0)
                term = (first ? " " : " + ") + std::to_string(coef);
            else
                term = " - " + std::to_string(-coef);
            term += " " + detail::lp_var_name(m.vars[var]);
            if (line.size() + term.size() > 200) {
                out << line << "\n";
                line = "   ";
            }
            line += term;
            first = false;
        }
        switch (row.sense) {
            case Sense::LE: line += " <= "; break;
            case Sense::EQ: line += " = "; break;
            case Sense::GE: line += " >= "; break;
        }
        line += std::to_string(row.rhs);
        out << line << "\n";
    }

    bool any_general = false;
    for (const VarInfo& v : m.vars)
        if (!v.binary) any_general = true;
    if (any_general) {
        out << "Bounds\n";
        for (const VarInfo& v : m.vars)
            if (!v.binary)
                out << " " << v.lower << " <= " << detail::lp_var_name(v) << " <= " << v.upper
                    << "\n";
    }
    bool any_binary = false;
    for (const VarInfo& v : m.vars)
        if (v.binary) any_binary = true;
    if (any_binary) {
        out << "Binaries\n";
        for (const VarInfo& v : m.vars)
            if (v.binary) out << " " << detail::lp_var_name(v) << "\n";
    }
    if (any_general) {
        out << "Generals\n";
        for (const VarInfo& v : m.vars)
            if (!v.binary) out << " " << detail::lp_var_name(v) << "\n";
    }
    out << "End\n";
    return out.str();
}

}  // namespace evolomino
