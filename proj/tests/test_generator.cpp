#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "evolomino/generator.hpp"

using namespace evolomino;

TEST_CASE("weighted_shuffle of a single item is the identity") {
    Rng rng(7);
    std::vector<int> one{42};
    CHECK(weighted_shuffle(one, {1.0}, rng) == one);
}

TEST_CASE("weighted_shuffle with equal weights is uniform") {
    Rng rng(11);
    std::vector<int> items{0, 1, 2, 3};
    std::vector<double> w(4, 1.0);
    std::map<std::vector<int>, int> counts;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) counts[weighted_shuffle(items, w, rng)]++;
    REQUIRE(counts.size() == 24);
    // chi-square against the uniform distribution over all 24 permutations;
    // 41.638 is the 0.99 quantile at 23 degrees of freedom.
    double expected = draws / 24.0, chi2 = 0;
    for (auto& [perm, n] : counts) chi2 += (n - expected) * (n - expected) / expected;
    CHECK(chi2 < 41.638);
}

TEST_CASE("weighted_shuffle puts heavy items first at the documented rate") {
    Rng rng(13);
    std::vector<int> items{0, 1};
    std::vector<double> w{1000.0, 1.0};
    int first = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) first += weighted_shuffle(items, w, rng)[0] == 0;
    double freq = double(first) / draws;
    CHECK(freq == Catch::Approx(1000.0 / 1001.0).margin(0.005));
}

TEST_CASE("fisher_yates is deterministic under a fixed seed") {
    std::vector<int> a{1, 2, 3, 4, 5, 6}, b = a;
    Rng r1(99), r2(99);
    fisher_yates(a, r1);
    fisher_yates(b, r2);
    CHECK(a == b);
}

namespace {

GenBoard walk_fixture() {
    // 3x3 with an incoming eastward walk at (2,2) whose north turn is taken
    // by a foreign arrow, leaving straight (east) and south as the options.
    GenBoard b(3, 3);
    b.at({2, 1}).arrow = 5;
    b.at({2, 2}).arrow = 5;
    b.at({1, 2}).arrow = 7;
    return b;
}

}  // namespace

TEST_CASE("get_next_dir prefers straight by the configured bias") {
    GenBoard b = walk_fixture();
    GenParams params;  // straight_bias = 3
    Rng rng(17);
    const int dir_east = 3;
    int straight = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        auto d = get_next_dir({2, 2}, dir_east, b, 5, params, rng);
        REQUIRE(d.has_value());
        straight += *d == dir_east;
    }
    CHECK(double(straight) / draws == Catch::Approx(0.75).margin(0.03));
}

TEST_CASE("get_next_dir takes the only legal turn with probability one") {
    GenBoard b = walk_fixture();
    b.at({2, 3}).arrow = 7;  // block straight as well
    GenParams params;
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        auto d = get_next_dir({2, 2}, 3, b, 5, params, rng);
        REQUIRE(d.has_value());
        CHECK(*d == 1);  // south
    }
}

TEST_CASE("get_next_dir signals stuck when nothing is free") {
    GenBoard b = walk_fixture();
    b.at({2, 3}).arrow = 7;
    b.at({3, 2}).arrow = 7;
    GenParams params;
    Rng rng(29);
    CHECK(!get_next_dir({2, 2}, 3, b, 5, params, rng).has_value());
}

TEST_CASE("get_evolutions lists one-cell extensions clipped to the board") {
    CHECK(get_evolutions(5, 5, {{3, 3}}).size() == 4);
    CHECK(get_evolutions(5, 5, {{2, 2}, {3, 2}}).size() == 6);
    CHECK(get_evolutions(5, 5, {{1, 1}}).size() == 2);
    for (const auto& shape : get_evolutions(5, 5, {{2, 2}, {3, 2}}))
        CHECK(shape.size() == 3);
}

TEST_CASE("try_add_arrow on a fully occupied board fails and changes nothing") {
    GenBoard b(3, 3);
    for (auto& c : b.cells) c.arrow = 0;
    GenBoard before = b;
    GenParams params;
    Rng rng(31);
    CHECK(!try_add_arrow(b, params, rng));
    CHECK(b == before);
}

TEST_CASE("failed arrow attempts leave the board byte-identical") {
    GenParams params;
    int failures = 0;
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        GenBoard b(3, 3);  // tight board: many attempts fail
        for (int i = 0; i < 6; ++i) {
            GenBoard before = b;
            if (!try_add_arrow(b, params, rng)) {
                CHECK(b == before);
                ++failures;
            }
        }
    }
    CHECK(failures > 20);
}

TEST_CASE("arrows cannot be placed on a one-row strip of three cells") {
    // The full-strip arrow leaves no room for a second block.
    GenParams params;
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        GenBoard b(1, 3);
        CHECK(!try_add_arrow(b, params, rng));
        CHECK(b == GenBoard(1, 3));
    }
}

TEST_CASE("successful placements satisfy the rules by construction") {
    GenParams params;
    int committed = 0;
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);
        GenBoard b(6, 6);
        for (int i = 0; i < 4; ++i) try_add_arrow(b, params, rng);
        if (b.arrows.empty()) continue;
        ++committed;

        // anchors strictly increasing and non-adjacent along each arrow
        for (const Arrow& a : b.arrows) {
            std::vector<const Block*> mine;
            for (const Block& blk : b.blocks)
                if (blk.arrow_id == a.id) mine.push_back(&blk);
            REQUIRE(mine.size() >= 2);
            int prev = -2;
            for (const Block* blk : mine) {
                auto it = std::find(a.path.begin(), a.path.end(), blk->anchor);
                REQUIRE(it != a.path.end());
                int idx = static_cast<int>(it - a.path.begin());
                CHECK(idx >= prev + 2);
                prev = idx;
            }
            for (size_t k = 1; k < mine.size(); ++k)
                CHECK(check_evolution(*mine[k - 1], *mine[k]));
        }

        // the committed layout verifies as a full solution
        Puzzle p;
        p.rows = b.rows;
        p.cols = b.cols;
        p.cells.assign(b.rows * b.cols, CellState::Empty);
        p.arrows = b.arrows;
        SolutionGrid s(b.rows, b.cols);
        for (int r = 1; r <= b.rows; ++r)
            for (int c = 1; c <= b.cols; ++c)
                if (b.at({r, c}).block_arrow >= 0) s.set({r, c}, true);
        CHECK(verify(p, s).empty());
    }
    CHECK(committed >= 20);
}

TEST_CASE("place_blocks fails when the path cannot host the required blocks") {
    GenParams params;
    params.min_blocks = 3;  // a three-cell path supports at most two anchors
    Rng rng(41);
    GenBoard b(5, 5);
    std::vector<Coord> path{{3, 1}, {3, 2}, {3, 3}};
    for (Coord c : path) b.at(c).arrow = 0;
    std::vector<Block> blocks;
    CHECK(!place_blocks(b, path, blocks, 0, params, rng));
    CHECK(blocks.empty());
}

TEST_CASE("generate is deterministic and meets its contract") {
    GenParams params;
    params.seed = 2024;
    GenOutcome a = generate(5, 5, params);
    GenOutcome b = generate(5, 5, params);
    CHECK(serialize_puzzle(a.puzzle) == serialize_puzzle(b.puzzle));
    CHECK(a.solution == b.solution);

    CHECK(verify(a.puzzle, a.solution).empty());
    CHECK(is_unique(build_model(a.puzzle), a.solution) == Uniqueness::Unique);
    CHECK(a.fill > 0);
    CHECK(a.fill <= 1.0);
    CHECK(a.probes > 0);
}

TEST_CASE("generate with a zero fill target fails cleanly") {
    GenParams params;
    params.target_fill = 0;
    params.seed = 3;
    CHECK_THROWS_AS(generate(5, 5, params), GenerationError);
}

TEST_CASE("generate rejects degenerate boards and parameters") {
    GenParams params;
    CHECK_THROWS_AS(generate(1, 5, params), std::invalid_argument);
    GenParams bad = params;
    bad.min_blocks = 1;
    CHECK_THROWS_AS(generate(5, 5, bad), std::invalid_argument);
}

TEST_CASE("generated puzzles round-trip through the file format") {
    for (uint64_t seed : {10ull, 11ull, 12ull}) {
        GenParams params;
        params.seed = seed;
        GenOutcome out = generate(5, 5, params);
        CHECK(parse_puzzle(serialize_puzzle(out.puzzle)) == out.puzzle);
    }
}
