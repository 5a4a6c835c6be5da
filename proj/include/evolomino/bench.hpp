#pragma once

// Batch solving over instance directories with quartile/IQR/Tukey-fence
// reporting, CSV output and a Table-style Markdown summary.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evolomino/model.hpp"
#include "evolomino/solver.hpp"

namespace evolomino {

struct BenchRecord {
    std::string id;
    int rows = 0, cols = 0;
    int vars = 0;
    int constraints = 0;
    std::string status;  // Feasible | Infeasible | TimedOut | Error
    double ms = 0;       // wall time around solve() only
    uint64_t nodes = 0;

    std::string size_label() const {
        return std::to_string(rows) + "x" + std::to_string(cols);
    }
    bool operator==(const BenchRecord&) const = default;
};

struct BenchRun {
    std::vector<BenchRecord> records;
    double build_ms_total = 0;  // model build time, reported apart from solve time
};

struct SizeSummary {
    std::string size;
    int count = 0;
    double q1 = 0, median = 0, q3 = 0;
    double fence_low = 0, fence_high = 0;
    double median_vars = 0, median_constraints = 0;
    std::vector<std::string> outliers;  // record ids outside the Tukey fences
};

namespace detail {

inline double median_sorted(const std::vector<double>& v, size_t lo, size_t hi) {
    size_t n = hi - lo;
    if (n % 2 == 1) return v[lo + n / 2];
    return (v[lo + n / 2 - 1] + v[lo + n / 2]) / 2.0;
}

}  // namespace detail

// Quartiles as medians of the lower/upper halves, the middle element being
// excluded from both halves for odd-sized samples.
struct Quartiles {
    double q1 = 0, median = 0, q3 = 0;
};

inline Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("quartiles: empty sample");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    Quartiles q;
    q.median = detail::median_sorted(values, 0, n);
    if (n == 1) {
        q.q1 = q.q3 = values[0];
        return q;
    }
    q.q1 = detail::median_sorted(values, 0, n / 2);
    q.q3 = detail::median_sorted(values, n % 2 == 0 ? n / 2 : n / 2 + 1, n);
    return q;
}

inline BenchRecord bench_one(const std::string& id, const Puzzle& p, const SolveLimits& limits,
                             double* build_ms = nullptr) {
    BenchRecord rec;
    rec.id = id;
    rec.rows = p.rows;
    rec.cols = p.cols;
    auto t0 = std::chrono::steady_clock::now();
    IlpModel m = build_model(p);
    auto t1 = std::chrono::steady_clock::now();
    if (build_ms) *build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    ModelStats st = stats(m);
    rec.vars = st.var_total;
    rec.constraints = st.constraint_total;
    SolveOutcome o = solve(m, limits);
    rec.status = to_string(o.status);
    rec.ms = o.stats.millis;
    rec.nodes = o.stats.nodes;
    return rec;
}

// One record per *.puzzle file, ordered by instance id. Unreadable or invalid
// files produce an Error record and the run continues.
inline BenchRun bench_run(const std::string& dir, const SolveLimits& limits, int jobs = 1) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".puzzle")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    BenchRun run;
    run.records.resize(files.size());
    std::vector<double> build_ms(files.size(), 0);
    std::atomic<size_t> cursor{0};

    auto worker = [&]() {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= files.size()) break;
            std::string id = files[i].stem().string();
            try {
                std::ifstream in(files[i]);
                std::stringstream buf;
                buf << in.rdbuf();
                Puzzle p = parse_puzzle(buf.str());
                run.records[i] = bench_one(id, p, limits, &build_ms[i]);
            } catch (const std::exception& e) {
                BenchRecord rec;
                rec.id = id;
                rec.status = "Error";
                run.records[i] = rec;
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (double ms : build_ms) run.build_ms_total += ms;
    return run;
}

// Group records by board size and summarize runtimes; Error records are
// skipped, empty groups dropped.
inline std::vector<SizeSummary> summarize(const std::vector<BenchRecord>& records) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const BenchRecord*>> groups;
    for (const BenchRecord& r : records) {
        if (r.status == "Error") continue;
        auto& g = groups[r.size_label()];
        if (g.empty()) order.push_back(r.size_label());
        g.push_back(&r);
    }
    std::vector<SizeSummary> out;
    for (const std::string& size : order) {
        const auto& g = groups[size];
        SizeSummary s;
        s.size = size;
        s.count = static_cast<int>(g.size());
        std::vector<double> times, vars, cons;
        for (const BenchRecord* r : g) {
            times.push_back(r->ms);
            vars.push_back(r->vars);
            cons.push_back(r->constraints);
        }
        Quartiles q = quartiles(times);
        s.q1 = q.q1;
        s.median = q.median;
        s.q3 = q.q3;
        double iqr = q.q3 - q.q1;
        s.fence_low = q.q1 - 1.5 * iqr;
        s.fence_high = q.q3 + 1.5 * iqr;
        s.median_vars = quartiles(vars).median;
        s.median_constraints = quartiles(cons).median;
        for (const BenchRecord* r : g)
            if (r->ms < s.fence_low || r->ms > s.fence_high) s.outliers.push_back(r->id);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << "id,size,vars,constraints,status,ms,nodes\n";
    for (const BenchRecord& r : records) {
        out << r.id << ',' << r.size_label() << ',' << r.vars << ',' << r.constraints << ','
            << r.status << ',' << r.ms << ',' << r.nodes << "\n";
    }
    return out.str();
}

inline std::vector<BenchRecord> from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "id,size,vars,constraints,status,ms,nodes")
        throw std::invalid_argument("bench csv: unexpected header");
    std::vector<BenchRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 7) throw std::invalid_argument("bench csv: malformed row");
        BenchRecord r;
        r.id = fields[0];
        size_t x = fields[1].find('x');
        r.rows = std::stoi(fields[1].substr(0, x));
        r.cols = std::stoi(fields[1].substr(x + 1));
        r.vars = std::stoi(fields[2]);
        r.constraints = std::stoi(fields[3]);
        r.status = fields[4];
        r.ms = std::stod(fields[5]);
        r.nodes = std::stoull(fields[6]);
        out.push_back(std::move(r));
    }
    return out;
}

// Markdown table mirroring the published column layout: size, model size
// medians, and runtime quartiles. Quartiles are medians of halves (middle
// element excluded for odd counts); fences are Q1/Q3 -/+ 1.5 IQR.
inline std::string to_markdown(const std::vector<SizeSummary>& summaries) {
    std::ostringstream out;
    out << "| Grid size | Variables (med.) | Constraints (med.) | Q1 (ms) | Median (ms) | Q3 (ms) | Outliers |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const SizeSummary& s : summaries) {
        out << "| " << s.size << " | " << s.median_vars << " | " << s.median_constraints
            << " | " << s.q1 << " | " << s.median << " | " << s.q3 << " | "
            << s.outliers.size() << " |\n";
    }
    return out.str();
}

}  // namespace evolomino
