// tracube command line: build compressed trajectory stores, query them,
// report sizes, sweep snapshot periods, verify against a brute-force
// reference, generate synthetic corpora and benchmark query latencies.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracube/tracube.hpp"

namespace {

using namespace tracube;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

struct cli_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// `build` accepts both the interchange event format and raw records;
// the header line decides.
dataset load_input(const std::string& path, bool interpolate, uint32_t gap_threshold,
                   const grid_config& grid) {
    std::ifstream in(path);
    if (!in) throw cli_error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw cli_error(path + ": empty input");
    in.seekg(0);
    if (!header.empty() && header.back() == '\r') header.pop_back();

    dataset ds;
    if (header == "id,instant,cx,cy,cz") {
        ds = read_events_csv(in);
    } else if (header == "id,t,x,y,z") {
        auto parsed = parse_csv(in);
        for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
        if (parsed.skipped > 0)
            std::cerr << "warning: skipped " << parsed.skipped << " malformed line(s)\n";
        ds = normalize(parsed.records, grid, gap_threshold);
    } else {
        throw cli_error(path + ": unrecognized header (expected id,instant,cx,cy,cz or id,t,x,y,z)");
    }
    if (interpolate) ds = interpolate_gaps(ds, gap_threshold);
    return ds;
}

box parse_box(const std::string& spec) {
    std::vector<int64_t> v;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
    if (v.size() != 6) throw cli_error("--box expects x1,y1,z1,x2,y2,z2");
    return box::of(v[0], v[1], v[2], v[3], v[4], v[5]);
}

size_t thread_budget() {
    if (const char* env = std::getenv("TRACUBE_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<size_t>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename Fn>
void parallel_for(size_t count, Fn&& fn) {
    size_t threads = std::min(thread_budget(), std::max<size_t>(count, 1));
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

json stats_to_json(const store_stats& s) {
    return json{{"total_bytes", s.total_bytes},
                {"header_bytes", s.header_bytes},
                {"snapshot_bytes", s.snapshot_bytes},
                {"log_bytes", s.log_bytes},
                {"rule_bytes", s.rule_bytes},
                {"d_bytes", s.d_bytes},
                {"p_bytes", s.p_bytes},
                {"baseline_bytes", s.baseline_bytes},
                {"ratio", s.ratio},
                {"objects", s.objects},
                {"instants", s.instants},
                {"events", s.events},
                {"snapshots", s.snapshots},
                {"rules", s.rules},
                {"appear_codewords", s.appear_codewords},
                {"reappear_codewords", s.reappear_codewords},
                {"vanish_codewords", s.vanish_codewords}};
}

void print_stats_text(const store_stats& s) {
    std::cout << "objects," << s.objects << "\n"
              << "instants," << s.instants << "\n"
              << "events," << s.events << "\n"
              << "snapshots," << s.snapshots << "\n"
              << "rules," << s.rules << "\n"
              << "codewords," << s.codewords() << "\n"
              << "header_bytes," << s.header_bytes << "\n"
              << "snapshot_bytes," << s.snapshot_bytes << "\n"
              << "log_bytes," << s.log_bytes << "\n"
              << "rule_bytes," << s.rule_bytes << "\n"
              << "d_bytes," << s.d_bytes << "\n"
              << "p_bytes," << s.p_bytes << "\n"
              << "total_bytes," << s.total_bytes << "\n"
              << "baseline_bytes," << s.baseline_bytes << "\n"
              << "ratio," << s.ratio << "\n";
}

// Query mixes mirroring the evaluation settings: cubic regions of side 20
// and 160, intervals of 50 and 400 instants.
struct suite_spec {
    int64_t extent;
    uint32_t interval;  // 0: time slice
};

suite_spec suite_by_name(const std::string& name) {
    if (name == "slice-small") return {20, 0};
    if (name == "slice-large") return {160, 0};
    if (name == "interval-small") return {20, 50};
    if (name == "interval-large") return {160, 400};
    throw cli_error("unknown suite " + name);
}

int cmd_gen(const gen_params& par, const std::string& out_path) {
    dataset ds = gen_synthetic(par);
    write_events_file(out_path, ds);
    std::cout << "objects," << ds.ids.size() << "\nevents," << ds.events.size() << "\ninstants,"
              << ds.instants << "\n";
    return exit_ok;
}

int cmd_build(const std::string& input, const std::string& out, const build_config& cfg,
              bool interpolate, uint32_t gap_threshold) {
    grid_config grid;
    grid.origin_x = cfg.grid.origin_x;
    grid.origin_y = cfg.grid.origin_y;
    grid.origin_z = cfg.grid.origin_z;
    grid.cell_size_x = cfg.grid.cell_size_x;
    grid.cell_size_y = cfg.grid.cell_size_y;
    grid.cell_size_z = cfg.grid.cell_size_z;
    grid.step_seconds = cfg.grid.step_seconds;
    if (cfg.side) grid.side = cfg.side;
    dataset ds = load_input(input, interpolate, gap_threshold, grid);
    store st = store::build(ds, cfg);
    st.save_file(out);
    auto s = st.stats();
    std::cout << "stored," << out << "\nbytes," << s.total_bytes << "\nratio," << s.ratio << "\n";
    return exit_ok;
}

int cmd_query(const std::string& store_path, const std::string& kind, const std::string& object,
              const std::string& box_spec, int64_t t, int64_t from, int64_t to) {
    store st = store::load_file(store_path);
    query_engine q(st);
    auto need = [&](bool cond, const char* msg) {
        if (!cond) throw cli_error(msg);
    };

    if (kind == "position") {
        need(!object.empty() && t >= 0, "query position needs --object and --t");
        auto id = st.dense_id(object);
        std::cout << "id,instant,cx,cy,cz\n";
        if (!id) return exit_ok;
        auto pos = q.position_of(*id, static_cast<uint32_t>(t));
        if (pos)
            std::cout << object << ',' << t << ',' << pos->x << ',' << pos->y << ',' << pos->z
                      << "\n";
        return exit_ok;
    }
    if (kind == "trajectory") {
        need(!object.empty() && from >= 0 && to >= from, "query trajectory needs --object/--from/--to");
        auto id = st.dense_id(object);
        std::cout << "id,instant,cx,cy,cz\n";
        if (!id) return exit_ok;
        auto tr = q.trajectory(*id, static_cast<uint32_t>(from), static_cast<uint32_t>(to));
        for (size_t i = 0; i < tr.size(); ++i) {
            if (tr[i])
                std::cout << object << ',' << from + i << ',' << tr[i]->x << ',' << tr[i]->y << ','
                          << tr[i]->z << "\n";
        }
        return exit_ok;
    }
    if (kind == "slice") {
        need(!box_spec.empty() && t >= 0, "query slice needs --box and --t");
        auto hits = q.time_slice(parse_box(box_spec), static_cast<uint32_t>(t));
        std::cout << "id,instant,cx,cy,cz\n";
        for (const auto& [o, c] : hits)
            std::cout << st.ids()[o] << ',' << t << ',' << c.x << ',' << c.y << ',' << c.z << "\n";
        return exit_ok;
    }
    if (kind == "interval") {
        need(!box_spec.empty() && from >= 0 && to >= from, "query interval needs --box/--from/--to");
        auto hits =
            q.time_interval(parse_box(box_spec), static_cast<uint32_t>(from), static_cast<uint32_t>(to));
        std::cout << "id\n";
        for (uint32_t o : hits) std::cout << st.ids()[o] << "\n";
        return exit_ok;
    }
    throw cli_error("unknown query kind " + kind);
}

int cmd_stats(const std::string& store_path, bool as_json) {
    store st = store::load_file(store_path);
    auto s = st.stats();
    if (as_json)
        std::cout << stats_to_json(s).dump(2) << "\n";
    else
        print_stats_text(s);
    return exit_ok;
}

int cmd_sweep(const std::string& input, const std::vector<uint32_t>& periods, build_config cfg,
              bool interpolate, uint32_t gap_threshold, bool as_json) {
    grid_config grid;
    if (cfg.side) grid.side = cfg.side;
    dataset ds = load_input(input, interpolate, gap_threshold, grid);
    json rows = json::array();
    std::cout << "period,total_bytes,baseline_bytes,ratio\n";
    for (uint32_t d : periods) {
        cfg.period = d;
        auto s = store::build(ds, cfg).stats();
        std::cout << d << ',' << s.total_bytes << ',' << s.baseline_bytes << ',' << s.ratio << "\n";
        rows.push_back({{"period", d}, {"total_bytes", s.total_bytes}, {"ratio", s.ratio}});
    }
    if (as_json) std::cout << rows.dump(2) << "\n";
    return exit_ok;
}

int cmd_verify(const std::string& input, const std::string& store_path, size_t queries,
               uint64_t seed) {
    dataset ds = load_input(input, false, 60, grid_config{});
    store st = store::load_file(store_path);
    oracle_store orc(ds);
    query_engine q(st);
    if (st.instants() == 0) throw cli_error("store covers no instants");
    const uint32_t side = st.side();
    const uint32_t t_max = st.instants() - 1;

    struct task {
        int kind;  // 0 position, 1 trajectory, 2 slice, 3 interval
        uint32_t o, t, t2;
        box r;
    };
    std::vector<task> tasks;
    synth_rng rng(seed);
    auto rand_box = [&](int64_t extent) {
        int64_t x = rng.uniform(0, side - 1), y = rng.uniform(0, side - 1),
                z = rng.uniform(0, side - 1);
        return box::of(x, y, z, x + extent - 1, y + extent - 1, z + extent - 1);
    };
    for (size_t i = 0; i < queries; ++i) {
        task tk;
        tk.kind = static_cast<int>(i % 4);
        tk.o = static_cast<uint32_t>(rng.uniform(0, std::max<int64_t>(0, st.object_count() - 1)));
        tk.t = static_cast<uint32_t>(rng.uniform(0, t_max));
        uint32_t len = (i % 8 < 4) ? 50 : 400;
        tk.t2 = std::min(t_max, tk.t + len);
        tk.r = rand_box((i % 8 < 4) ? 20 : 160);
        tasks.push_back(tk);
    }

    std::atomic<size_t> mismatches{0};
    parallel_for(tasks.size(), [&](size_t i) {
        const task& tk = tasks[i];
        bool ok = true;
        switch (tk.kind) {
            case 0: ok = q.position_of(tk.o, tk.t) == orc.position_of(tk.o, tk.t); break;
            case 1: ok = q.trajectory(tk.o, tk.t, tk.t2) == orc.trajectory(tk.o, tk.t, tk.t2); break;
            case 2: ok = q.time_slice(tk.r, tk.t) == orc.time_slice(tk.r, tk.t); break;
            default: ok = q.time_interval(tk.r, tk.t, tk.t2) == orc.time_interval(tk.r, tk.t, tk.t2);
        }
        if (!ok) ++mismatches;
    });
    std::cout << "queries," << tasks.size() << "\nmismatches," << mismatches.load() << "\n";
    return mismatches.load() == 0 ? exit_ok : exit_mismatch;
}

int cmd_bench(const std::string& store_path, const std::string& suite, size_t queries,
              uint64_t seed, bool as_json) {
    store st = store::load_file(store_path);
    query_engine q(st);
    if (st.instants() == 0) throw cli_error("store covers no instants");
    suite_spec spec = suite_by_name(suite);
    synth_rng rng(seed);
    const uint32_t side = st.side();
    const uint32_t t_max = st.instants() - 1;

    struct probe {
        box r;
        uint32_t t, t2;
    };
    std::vector<probe> probes(queries);
    for (auto& p : probes) {
        int64_t x = rng.uniform(0, side - 1), y = rng.uniform(0, side - 1),
                z = rng.uniform(0, side - 1);
        p.r = box::of(x, y, z, x + spec.extent - 1, y + spec.extent - 1, z + spec.extent - 1);
        p.t = static_cast<uint32_t>(rng.uniform(0, t_max));
        p.t2 = std::min(t_max, p.t + spec.interval);
    }

    std::vector<double> micros(queries);
    std::atomic<size_t> total_hits{0};
    parallel_for(queries, [&](size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        size_t n = spec.interval == 0 ? q.time_slice(probes[i].r, probes[i].t).size()
                                      : q.time_interval(probes[i].r, probes[i].t, probes[i].t2).size();
        auto t1 = std::chrono::steady_clock::now();
        micros[i] = std::chrono::duration<double, std::micro>(t1 - t0).count();
        total_hits += n;
    });
    std::sort(micros.begin(), micros.end());
    double mean = std::accumulate(micros.begin(), micros.end(), 0.0) / micros.size();
    auto pct = [&](double p) { return micros[std::min(queries - 1, static_cast<size_t>(p * queries))]; };
    if (as_json) {
        std::cout << json{{"suite", suite},        {"queries", queries},
                          {"mean_us", mean},       {"p50_us", pct(0.50)},
                          {"p95_us", pct(0.95)},   {"p99_us", pct(0.99)},
                          {"hits", total_hits.load()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "suite," << suite << "\nqueries," << queries << "\nmean_us," << mean
                  << "\np50_us," << pct(0.50) << "\np95_us," << pct(0.95) << "\np99_us,"
                  << pct(0.99) << "\nhits," << total_hits.load() << "\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tracube: compressed self-indexed 3D trajectory store"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic trajectory corpus");
    gen_params gp;
    std::string gen_out;
    gen->add_option("--objects", gp.objects, "number of moving objects");
    gen->add_option("--instants", gp.instants, "number of time instants");
    gen->add_option("--side", gp.side, "grid side in cells");
    gen->add_option("--seed", gp.seed, "random seed");
    gen->add_option("--segment-mean", gp.segment_mean, "mean constant-velocity segment length");
    gen->add_option("--gap-prob", gp.gap_prob, "gap probability at segment boundaries");
    gen->add_option("--gap-min", gp.gap_min, "minimum gap length (instants)");
    gen->add_option("--gap-max", gp.gap_max, "maximum gap length (instants)");
    gen->add_option("--speed-x", gp.speed_x, "max cells per instant on x");
    gen->add_option("--speed-y", gp.speed_y, "max cells per instant on y");
    gen->add_option("--speed-z", gp.speed_z, "max cells per instant on z");
    gen->add_option("--lifespan", gp.lifespan, "fraction of the timeline each object is active");
    gen->add_option("--out", gen_out, "output events csv")->required();

    // build
    auto* build = app.add_subcommand("build", "build a store from an events or raw csv");
    std::string build_in, build_out;
    build_config cfg;
    bool interpolate = false;
    uint32_t gap_threshold = 60;
    build->add_option("--input", build_in, "events csv (id,instant,cx,cy,cz) or raw csv (id,t,x,y,z)")
        ->required();
    build->add_option("--out", build_out, "output store file")->required();
    build->add_option("--period", cfg.period, "instants between snapshots");
    build->add_option("--k", cfg.k, "spatial subdivision base");
    build->add_option("--side", cfg.side, "grid side (0 = derive from data)");
    build->add_option("--chunk-width", cfg.chunk_width, "DAC chunk width in bits");
    build->add_option("--shortcut-step", cfg.shortcut_step, "permutation shortcut sampling");
    build->add_flag("--interpolate", interpolate, "fill long observation gaps before building");
    build->add_option("--gap-threshold", gap_threshold, "long-gap threshold in instants");
    build->add_option("--step-seconds", cfg.grid.step_seconds, "seconds between instants");
    build->add_option("--cell-x", cfg.grid.cell_size_x, "cell size on x (raw input)");
    build->add_option("--cell-y", cfg.grid.cell_size_y, "cell size on y (raw input)");
    build->add_option("--cell-z", cfg.grid.cell_size_z, "cell size on z (raw input)");

    // query
    auto* query = app.add_subcommand(
        "query",
        "run a query against a store; stdout CSV is id,instant,cx,cy,cz "
        "(interval: one id per line)");
    std::string q_store, q_kind, q_object, q_box;
    int64_t q_t = -1, q_from = -1, q_to = -1;
    query->add_option("kind", q_kind, "position|trajectory|slice|interval")->required();
    query->add_option("--store", q_store, "store file")->required();
    query->add_option("--object", q_object, "external object id");
    query->add_option("--box", q_box, "x1,y1,z1,x2,y2,z2");
    query->add_option("--t", q_t, "time instant");
    query->add_option("--from", q_from, "interval start instant");
    query->add_option("--to", q_to, "interval end instant");

    // stats
    auto* stats = app.add_subcommand(
        "stats", "component sizes and compression ratio as name,value CSV (or --json)");
    std::string stats_store;
    bool stats_json = false;
    stats->add_option("--store", stats_store, "store file")->required();
    stats->add_flag("--json", stats_json, "machine-readable output");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "compression ratio across snapshot periods");
    std::string sweep_in, sweep_periods = "120,240,360,720";
    bool sweep_json = false;
    bool sweep_interp = false;
    sweep->add_option("--input", sweep_in, "events csv")->required();
    sweep->add_option("--periods", sweep_periods, "comma-separated snapshot periods");
    sweep->add_flag("--interpolate", sweep_interp, "fill long gaps before building");
    sweep->add_flag("--json", sweep_json, "machine-readable output");

    // verify
    auto* verify = app.add_subcommand("verify", "replay randomized queries against the reference");
    std::string verify_in, verify_store;
    size_t verify_queries = 2000;
    uint64_t verify_seed = 1;
    verify->add_option("--input", verify_in, "events csv the store was built from")->required();
    verify->add_option("--store", verify_store, "store file")->required();
    verify->add_option("--queries", verify_queries, "number of randomized queries");
    verify->add_option("--seed", verify_seed, "random seed");

    // bench
    auto* bench = app.add_subcommand("bench", "latency of a query suite");
    std::string bench_store, bench_suite;
    size_t bench_queries = 1000;
    uint64_t bench_seed = 1;
    bool bench_json = false;
    bench->add_option("--store", bench_store, "store file")->required();
    bench->add_option("--suite", bench_suite, "slice-small|slice-large|interval-small|interval-large")
        ->required();
    bench->add_option("--queries", bench_queries, "number of queries");
    bench->add_option("--seed", bench_seed, "random seed");
    bench->add_flag("--json", bench_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gp, gen_out);
        if (build->parsed()) return cmd_build(build_in, build_out, cfg, interpolate, gap_threshold);
        if (query->parsed()) return cmd_query(q_store, q_kind, q_object, q_box, q_t, q_from, q_to);
        if (stats->parsed()) return cmd_stats(stats_store, stats_json);
        if (sweep->parsed()) {
            std::vector<uint32_t> periods;
            std::stringstream ss(sweep_periods);
            std::string item;
            while (std::getline(ss, item, ',')) periods.push_back(std::stoul(item));
            if (periods.empty()) throw cli_error("--periods is empty");
            return cmd_sweep(sweep_in, periods, cfg, sweep_interp, gap_threshold, sweep_json);
        }
        if (verify->parsed()) return cmd_verify(verify_in, verify_store, verify_queries, verify_seed);
        if (bench->parsed()) return cmd_bench(bench_store, bench_suite, bench_queries, bench_seed,
                                              bench_json);
    } catch (const cli_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const corrupt_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    return exit_usage;
}
