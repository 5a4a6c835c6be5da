#include <catch2/catch_amalgamated.hpp>

#include "evolomino/solver.hpp"
#include "oracle.hpp"
#include "testdata.hpp"

using namespace evolomino;
using evotest::make_puzzle;
using evotest::sample_puzzle;
using evotest::sample_solution;

TEST_CASE("the sample puzzle solves to exactly the published grid") {
    IlpModel m = build_model(sample_puzzle());
    SolveOutcome o = solve(m);
    REQUIRE(o.status == SolveStatus::Feasible);
    CHECK(o.solution == sample_solution());
    CHECK(verify(sample_puzzle(), o.solution).empty());
    CHECK(check_assignment(m, o.assignment));
}

TEST_CASE("the 2x3 single-arrow board solves to its unique solution") {
    Puzzle p = make_puzzle(2, 3, "...\n...\n", "arrow: 1,1 1,2 1,3\n");
    SolveOutcome o = solve(build_model(p));
    REQUIRE(o.status == SolveStatus::Feasible);
    SolutionGrid expected(2, 3);
    expected.set({1, 1}, true);
    expected.set({1, 3}, true);
    expected.set({2, 3}, true);
    CHECK(o.solution == expected);
}

TEST_CASE("a 1x3 board fully covered by its arrow is infeasible") {
    Puzzle p = make_puzzle(1, 3, "...\n", "arrow: 1,1 1,2 1,3\n");
    CHECK(evotest::brute_force_solutions(p).empty());
    CHECK(solve(build_model(p)).status == SolveStatus::Infeasible);
}

TEST_CASE("enumeration proves the sample solution unique") {
    IlpModel m = build_model(sample_puzzle());
    EnumerateResult r = enumerate(m, 10);
    CHECK(r.solutions.size() == 1);
    CHECK(r.exhausted);
    CHECK(!r.truncated);
    CHECK(r.solutions[0] == sample_solution());
    CHECK(is_unique(m, sample_solution()) == Uniqueness::Unique);
}

TEST_CASE("enumeration of an infeasible model is empty") {
    Puzzle p = make_puzzle(1, 3, "...\n", "arrow: 1,1 1,2 1,3\n");
    EnumerateResult r = enumerate(build_model(p), 10);
    CHECK(r.solutions.empty());
    CHECK(r.exhausted);
}

TEST_CASE("erasing both givens of the sample leaves eight solutions") {
    // Frozen after an exhaustive scan of all square grids on the 23 white
    // cells; the sample's clues are what pins the solution down.
    Puzzle p = sample_puzzle();
    for (CellState& c : p.cells)
        if (c == CellState::GivenSquare) c = CellState::Empty;
    IlpModel m = build_model(p);
    EnumerateResult r = enumerate(m, 50);
    CHECK(r.solutions.size() == 8);
    CHECK(r.exhausted);
    for (const SolutionGrid& s : r.solutions) CHECK(verify(p, s).empty());
    CHECK(is_unique(m, r.solutions[0]) == Uniqueness::NotUnique);
}

TEST_CASE("erased-givens enumeration agrees with brute force", "[.][slow]") {
    Puzzle p = sample_puzzle();
    for (CellState& c : p.cells)
        if (c == CellState::GivenSquare) c = CellState::Empty;
    auto oracle = evotest::brute_force_solutions(p);
    EnumerateResult r = enumerate(build_model(p), 0);
    REQUIRE(r.exhausted);
    std::set<std::vector<uint8_t>> a, b;
    for (auto& s : oracle) a.insert(s.square);
    for (auto& s : r.solutions) b.insert(s.square);
    CHECK(a == b);
}

TEST_CASE("an empty board without arrows has the all-false unique solution") {
    Puzzle p = make_puzzle(2, 2, "..\n..\n");
    IlpModel m = build_model(p);
    SolveOutcome o = solve(m);
    REQUIRE(o.status == SolveStatus::Feasible);
    CHECK(o.solution == SolutionGrid(2, 2));
    CHECK(is_unique(m, o.solution) == Uniqueness::Unique);
}

TEST_CASE("solver agrees with the rule-level oracle on small boards") {
    // Every single-arrow puzzle on boards of up to six cells.
    std::vector<std::pair<int, int>> shapes = {{1, 3}, {1, 4}, {1, 5}, {1, 6},
                                               {2, 2}, {2, 3}, {3, 2}, {6, 1}};
    int puzzles = 0, feasible = 0;
    for (auto [m, n] : shapes) {
        for (const auto& path : evotest::all_paths(m, n, 3, m * n)) {
            Puzzle p;
            p.rows = m;
            p.cols = n;
            p.cells.assign(m * n, CellState::Empty);
            p.arrows.push_back({0, path});
            auto expected = evotest::brute_force_solutions(p);
            EnumerateResult got = enumerate(build_model(p), 0);
            REQUIRE(got.exhausted);
            std::set<std::vector<uint8_t>> a, b;
            for (auto& s : expected) a.insert(s.square);
            for (auto& s : got.solutions) b.insert(s.square);
            CHECK(a == b);
            ++puzzles;
            feasible += !expected.empty();
        }
    }
    INFO(puzzles << " puzzles, " << feasible << " feasible");
    CHECK(puzzles > 100);
}

TEST_CASE("every oracle solution admits a full model completion") {
    // Pinning the cell variables to a verified grid must stay feasible:
    // propagation never cuts a value that belongs to a solution, and the
    // derived sizes/supplies/flows always complete it.
    std::vector<Puzzle> puzzles;
    puzzles.push_back(make_puzzle(2, 3, "...\n...\n", "arrow: 1,1 1,2 1,3\n"));
    puzzles.push_back(make_puzzle(2, 4, "....\n....\n", "arrow: 1,1 1,2 1,3 1,4\n"));
    puzzles.push_back(make_puzzle(2, 4, "....\n....\n", "arrow: 2,1 1,1 1,2\n"));
    puzzles.push_back(sample_puzzle());
    for (const Puzzle& p : puzzles) {
        std::vector<SolutionGrid> sols;
        if (p.rows * p.cols <= 8) {
            sols = evotest::brute_force_solutions(p);
        } else {
            sols.push_back(sample_solution());
        }
        IlpModel base = build_model(p);
        for (const SolutionGrid& s : sols) {
            IlpModel pinned = base;
            for (int r = 1; r <= p.rows; ++r)
                for (int c = 1; c <= p.cols; ++c)
                    pinned.constraints.push_back(
                        {{{1, pinned.x_of[pinned.cell_index({r, c})]}},
                         Sense::EQ,
                         s.at({r, c}) ? 1 : 0,
                         Tag::FIX});
            SolveOutcome o = solve(pinned);
            REQUIRE(o.status == SolveStatus::Feasible);
            CHECK(o.solution == s);
        }
    }
}

TEST_CASE("solving is deterministic") {
    IlpModel m = build_model(sample_puzzle());
    SolveOutcome a = solve(m);
    SolveOutcome b = solve(m);
    CHECK(a.status == b.status);
    CHECK(a.solution == b.solution);
    CHECK(a.stats.nodes == b.stats.nodes);
    CHECK(a.stats.propagation_rounds == b.stats.propagation_rounds);
}

TEST_CASE("node caps yield TimedOut, never a wrong verdict") {
    Puzzle p = sample_puzzle();
    for (CellState& c : p.cells)
        if (c == CellState::GivenSquare) c = CellState::Empty;
    SolveLimits limits;
    limits.node_cap = 1;
    SolveOutcome o = solve(build_model(p), limits);
    CHECK(o.status == SolveStatus::TimedOut);
}

TEST_CASE("enumerate reports truncation on timeout") {
    Puzzle p = sample_puzzle();
    for (CellState& c : p.cells)
        if (c == CellState::GivenSquare) c = CellState::Empty;
    SolveLimits limits;
    limits.node_cap = 1;
    EnumerateResult r = enumerate(build_model(p), 10, limits);
    CHECK(r.truncated);
    CHECK(!r.exhausted);
}

TEST_CASE("tight big-M constants do not change the solution set") {
    BuildOptions tight;
    tight.tight_big_m = true;
    std::vector<Puzzle> puzzles = {
        make_puzzle(2, 3, "...\n...\n", "arrow: 1,1 1,2 1,3\n"),
        make_puzzle(2, 4, "....\n....\n", "arrow: 1,1 1,2 1,3 1,4\n"),
        sample_puzzle(),
    };
    for (const Puzzle& p : puzzles) {
        EnumerateResult a = enumerate(build_model(p), 0);
        EnumerateResult b = enumerate(build_model(p, tight), 0);
        REQUIRE(a.exhausted);
        REQUIRE(b.exhausted);
        std::set<std::vector<uint8_t>> sa, sb;
        for (auto& s : a.solutions) sa.insert(s.square);
        for (auto& s : b.solutions) sb.insert(s.square);
        CHECK(sa == sb);
    }
}
