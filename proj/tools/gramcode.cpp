// Command-line front end: every library operation as a subcommand with
// deterministic seeding and optional JSON output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gramcode/adgmm.hpp"
#include "gramcode/audit.hpp"
#include "gramcode/costs.hpp"
#include "gramcode/csv.hpp"
#include "gramcode/degree_table.hpp"
#include "gramcode/exponents.hpp"
#include "gramcode/matdot.hpp"
#include "gramcode/scheme.hpp"
#include "gramcode/wire.hpp"

using nlohmann::json;
using namespace gramcode;

namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t default_modulus() {
    if (const char* env = std::getenv("GRAM_DEFAULT_Q")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidModulus(std::string("GRAM_DEFAULT_Q is not a number: ") + env);
        }
    }
    return kDefaultModulus;
}

std::vector<std::int64_t> parse_i64_list(const std::string& text) {
    std::vector<std::int64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stoll(item));
    return values;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> values;
    for (std::int64_t v : parse_i64_list(text)) values.push_back(static_cast<std::size_t>(v));
    return values;
}

std::string join_i64(const std::vector<std::int64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

json phi_json(const ExponentVector& phi) {
    json j = json::array();
    for (auto e : phi.exponents) j.push_back(e);
    return j;
}

json trace_json(const TaskTrace& trace) {
    return json{{"n_workers", trace.n_workers},
                {"recovery_threshold", trace.recovery_threshold},
                {"upload_elems", trace.upload_elems},
                {"download_elems", trace.download_elems},
                {"dropped", trace.dropped},
                {"wall_time_ms", trace.wall_time_ms}};
}

void print_trace_summary(const TaskTrace& trace) {
    std::cout << "workers: " << trace.n_workers << "\n"
              << "recovery threshold: " << trace.recovery_threshold << "\n"
              << "upload elements: " << trace.upload_elems << "\n"
              << "download elements: " << trace.download_elems << "\n";
    std::cout << "dropped:";
    for (auto d : trace.dropped) std::cout << ' ' << d;
    std::cout << "\n";
}

struct TableArgs {
    std::string phi;
    std::string gamma;
    std::optional<std::size_t> p;
    bool diff = false;
    bool as_json = false;
};

int cmd_table(const TableArgs& args) {
    auto phi_exps = parse_i64_list(args.phi);
    const std::size_t p = args.p.value_or(phi_exps.empty() ? 0 : phi_exps.size() - 1);
    ExponentVector phi(phi_exps, p);

    DegreeTable table;
    bool symmetric = args.gamma.empty();
    if (args.diff) {
        table = difference_table(phi);
    } else if (symmetric) {
        table = outer_sum(phi, phi);
    } else {
        ExponentVector gamma = ExponentVector::with_one_noise(parse_i64_list(args.gamma));
        table = outer_sum(phi, gamma);
    }

    json out{{"schema_version", kSchemaVersion}, {"phi", phi_json(phi)}, {"cells", table.cells}};
    std::string rendered = render_table(table, args.diff || !symmetric ? 0 : p);
    if (symmetric && !args.diff) {
        auto check = is_valid(phi, p);
        auto h = distinct_exponents(phi);
        out["valid"] = check.valid;
        out["distinct_count"] = h.size();
        if (check.collision)
            out["collision"] = {{"diag_index", check.collision->diag_index},
                                {"row", check.collision->row},
                                {"col", check.collision->col}};
        if (args.as_json) {
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        std::cout << rendered;
        std::cout << "valid: " << (check.valid ? "true" : "false") << "\n";
        if (check.collision)
            std::cout << "collision: 2*phi[" << check.collision->diag_index + 1 << "] appears at cell ("
                      << check.collision->row + 1 << ", " << check.collision->col + 1 << ")\n";
        std::cout << "|H|: " << h.size() << "\n";
        return 0;
    }
    if (args.as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << rendered;
    return 0;
}

struct SearchArgs {
    std::size_t p = 1;
    std::uint64_t budget = 100'000'000ULL;
    bool as_json = false;
};

int cmd_search(const SearchArgs& args) {
    auto res = search_min_max(args.p, args.budget);
    if (args.as_json) {
        json out{{"schema_version", kSchemaVersion},
                 {"phi", phi_json(res.phi)},
                 {"largest", res.largest},
                 {"distinct_count", res.distinct_count},
                 {"valid", true},
                 {"nodes_visited", res.nodes_visited}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "phi: " << join_i64(res.phi.exponents) << "\n"
              << "largest: " << res.largest << "\n"
              << "|H|: " << res.distinct_count << "\n"
              << "valid: true\n"
              << "nodes visited: " << res.nodes_visited << "\n";
    return 0;
}

struct ConstructArgs {
    std::size_t p = 1;
    std::string scheme = "doubling";
    unsigned base = 2;
    bool as_json = false;
};

int cmd_construct(const ConstructArgs& args) {
    ExponentVector phi;
    if (args.scheme == "trivial") {
        phi = construct_trivial(args.p);
    } else if (args.scheme == "doubling") {
        phi = construct_doubling(args.p, args.base);
    } else {
        throw InvalidScheme(args.scheme);
    }
    auto h = distinct_exponents(phi);
    const bool valid = is_valid(phi, args.p).valid;
    if (args.as_json) {
        json out{{"schema_version", kSchemaVersion},
                 {"phi", phi_json(phi)},
                 {"largest", phi.largest()},
                 {"distinct_count", h.size()},
                 {"valid", valid}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "phi: " << join_i64(phi.exponents) << "\n"
              << "largest: " << phi.largest() << "\n"
              << "|H|: " << h.size() << "\n"
              << "valid: " << (valid ? "true" : "false") << "\n";
    return 0;
}

struct RunArgs {
    std::string input;
    std::size_t p = 1;
    std::string scheme = "search";
    std::string phi;
    std::size_t workers = 0;
    std::size_t drop = 0;
    std::string drop_set;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> q;
    std::string mode = "subset-safe";
    std::string out;
    std::string trace_path;
    bool distributed = false;
    std::string endpoints;
    bool secure_rng = false;
    bool as_json = false;
};

int cmd_run(const RunArgs& args) {
    PrimeField field(args.q.value_or(default_modulus()));
    FieldMatrix a = load_field_csv_file(args.input, field);

    ExponentSchemeSpec spec;
    if (args.scheme == "explicit") {
        spec.kind = ExponentSchemeSpec::Kind::explicit_phi;
        spec.phi = ExponentVector::with_one_noise(parse_i64_list(args.phi));
    } else {
        spec = ExponentSchemeSpec::parse(args.scheme);
    }

    RunOptions opts;
    opts.workers = args.workers;
    opts.seed = args.seed;
    opts.secure_randomness = args.secure_rng;
    opts.drop_count = args.drop;
    if (!args.drop_set.empty()) opts.drop_set = parse_index_list(args.drop_set);
    if (args.mode == "subset-safe") {
        opts.mode = DecodeMode::subset_safe;
    } else if (args.mode == "interp") {
        opts.mode = DecodeMode::interpolation;
    } else {
        throw InvalidScheme(args.mode);
    }

    GramDispatcher dispatcher; // default in-process pool
    std::vector<wire::Endpoint> endpoints;
    if (args.distributed) {
        endpoints = wire::parse_endpoints(args.endpoints);
        dispatcher = [&endpoints](const std::vector<FieldMatrix>& shares, const PrimeField& f,
                                  const PoolConfig&, TaskTrace& trace) {
            return wire::dispatch_remote(endpoints, shares, f, trace);
        };
    }

    auto res = run_sdgmm(a, args.p, spec, opts, dispatcher);

    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw Error("cannot write " + args.out);
        save_field_csv(out, res.gram);
    }
    if (!args.trace_path.empty()) {
        std::ofstream out(args.trace_path);
        if (!out) throw Error("cannot write " + args.trace_path);
        out << trace_json(res.trace).dump(2) << "\n";
    }

    if (args.as_json) {
        json out{{"schema_version", kSchemaVersion},
                 {"q", field.modulus()},
                 {"p", args.p},
                 {"mode", to_string(opts.mode)},
                 {"phi", phi_json(res.instance.phi)},
                 {"recovery_threshold", res.instance.recovery_threshold},
                 {"workers", res.trace.n_workers},
                 {"upload_elems", res.trace.upload_elems},
                 {"download_elems", res.trace.download_elems},
                 {"dropped", res.trace.dropped}};
        if (args.out.empty()) {
            json rows = json::array();
            for (std::size_t i = 0; i < res.gram.rows(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < res.gram.cols(); ++j) row.push_back(res.gram.at(i, j));
                rows.push_back(row);
            }
            out["gram"] = rows;
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    print_trace_summary(res.trace);
    if (args.out.empty()) {
        std::cout << "gram:\n";
        save_field_csv(std::cout, res.gram);
    } else {
        std::cout << "gram written to " << args.out << "\n";
    }
    return 0;
}

struct MatDotArgs {
    std::string a_path, b_path;
    std::size_t p = 1;
    std::size_t workers = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> q;
    std::string out;
    bool as_json = false;
};

int cmd_matdot(const MatDotArgs& args) {
    PrimeField field(args.q.value_or(default_modulus()));
    FieldMatrix a = load_field_csv_file(args.a_path, field);
    FieldMatrix b = load_field_csv_file(args.b_path, field);
    auto res = matdot_run(a, b, args.p, args.workers, args.seed);
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw Error("cannot write " + args.out);
        save_field_csv(out, res.product);
    }
    if (args.as_json) {
        json out{{"schema_version", kSchemaVersion},
                 {"recovery_threshold", res.trace.recovery_threshold},
                 {"workers", res.trace.n_workers},
                 {"upload_elems", res.trace.upload_elems},
                 {"download_elems", res.trace.download_elems}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    print_trace_summary(res.trace);
    if (args.out.empty()) {
        std::cout << "product:\n";
        save_field_csv(std::cout, res.product);
    } else {
        std::cout << "product written to " << args.out << "\n";
    }
    return 0;
}

struct AdgmmArgs {
    std::string input;
    std::size_t p = 1;
    std::size_t workers = 0;
    std::string out;
    bool as_json = false;
};

int cmd_adgmm(const AdgmmArgs& args) {
    ComplexMatrix a = load_real_csv_file(args.input);
    auto res = adgmm_run(a, args.p, args.workers);
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw Error("cannot write " + args.out);
        save_real_csv(out, res.gram);
    }
    if (args.as_json) {
        json out{{"schema_version", kSchemaVersion},
                 {"recovery_threshold", res.trace.recovery_threshold},
                 {"workers", res.trace.n_workers},
                 {"upload_elems", res.trace.upload_elems},
                 {"download_elems", res.trace.download_elems}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    print_trace_summary(res.trace);
    if (args.out.empty()) {
        std::cout << "gram:\n";
        save_real_csv(std::cout, res.gram);
    } else {
        std::cout << "gram written to " << args.out << "\n";
    }
    return 0;
}

struct LstsqArgs {
    std::string input;
    std::string b_path;
    std::size_t p = 1;
    std::size_t workers = 0;
    bool as_json = false;
};

int cmd_lstsq(const LstsqArgs& args) {
    ComplexMatrix a = load_real_csv_file(args.input);
    std::vector<double> b = load_real_vector_file(args.b_path);
    auto beta = lstsq(a, b, args.p, args.workers);
    if (args.as_json) {
        json out{{"schema_version", kSchemaVersion}, {"beta", beta}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "beta:\n";
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (i) std::cout << ',';
        std::cout << beta[i];
    }
    std::cout << "\n";
    return 0;
}

struct AuditArgs {
    std::uint64_t q = 7;
    std::size_t t = 1;
    std::size_t p = 2;
    std::size_t chunk = 1;
    std::string phi;
    std::string pair;
    bool histogram = false;
    bool as_json = false;
};

int cmd_audit(const AuditArgs& args) {
    PrimeField field(args.q);
    ExponentVector phi = args.phi.empty() ? construct_doubling(args.p)
                                          : ExponentVector::with_one_noise(parse_i64_list(args.phi));

    json out{{"schema_version", kSchemaVersion}, {"q", args.q}, {"phi", phi_json(phi)}};

    if (!args.pair.empty()) {
        auto idx = parse_index_list(args.pair);
        if (idx.size() != 2) throw Error("--pair takes two comma-separated nonzero points");
        auto rep = collusion_leakage_demo(field, phi, idx[0], idx[1]);
        out["pair"] = {{"alpha_i", rep.alpha_i},
                       {"alpha_j", rep.alpha_j},
                       {"functional", rep.functional},
                       {"mi_single_bits", rep.mi_single_bits},
                       {"mi_pair_bits", rep.mi_pair_bits}};
        if (args.as_json) {
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        std::cout << "two-worker collusion at alpha = (" << rep.alpha_i << ", " << rep.alpha_j << ")\n";
        std::cout << "leaked functional coefficients:";
        for (auto c : rep.functional) std::cout << ' ' << c;
        std::cout << "\n";
        std::cout << "I(A; one share)  = " << rep.mi_single_bits << " bits\n";
        std::cout << "I(A; share pair) = " << rep.mi_pair_bits << " bits\n";
        std::cout << (rep.mi_pair_bits > 0 ? "LEAKS under collusion (as expected for X = 1)\n"
                                           : "no leakage detected\n");
        return 0;
    }

    // exhaustive single-share audit: every A, every nonzero point
    const std::size_t cells = args.p * args.t * args.chunk;
    const std::uint64_t a_states = detail::pow_u64_checked(args.q, cells, kAuditEnumerationBound);
    if (a_states > kAuditEnumerationBound) throw TooLarge("q^(p*t*chunk) exceeds the enumeration bound");

    bool all_uniform = true;
    std::uint64_t checked = 0;
    std::vector<std::uint32_t> first_histogram;
    for (std::uint64_t ai = 0; ai < a_states && all_uniform; ++ai) {
        FieldMatrix a(field, args.t, args.p * args.chunk);
        std::uint64_t rem = ai;
        for (std::size_t k = cells; k-- > 0;) {
            a.at(k / (args.p * args.chunk), k % (args.p * args.chunk)) = rem % args.q;
            rem /= args.q;
        }
        for (std::uint64_t alpha = 1; alpha < args.q; ++alpha) {
            auto rep = share_uniformity_check(field, args.t, args.chunk, phi, alpha, a);
            if (first_histogram.empty()) first_histogram = rep.histogram;
            all_uniform = all_uniform && rep.uniform;
            ++checked;
        }
    }
    out["uniform"] = all_uniform;
    out["cases_checked"] = checked;
    if (args.as_json) {
        if (args.histogram) out["histogram"] = first_histogram;
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "single-share uniformity: " << (all_uniform ? "PASS" : "FAIL") << " (" << checked
              << " (A, alpha) cases over F_" << args.q << ")\n";
    std::cout << "I(A; single share) = " << (all_uniform ? "0 (exact)" : "> 0") << "\n";
    if (args.histogram) {
        std::cout << "histogram (first case):";
        for (auto c : first_histogram) std::cout << ' ' << c;
        std::cout << "\n";
    }
    return 0;
}

struct CompareArgs {
    std::size_t p_max = 9;
    std::size_t t = 10;
    std::size_t s = 2520;
    std::string out;
    bool as_json = false;
};

int cmd_compare(const CompareArgs& args) {
    auto result = compare_table(args.p_max, args.t, args.s);
    const std::string csv = to_csv(result.rows);
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw Error("cannot write " + args.out);
        out << csv;
    }
    if (args.as_json) {
        json rows = json::array();
        for (const auto& row : result.rows)
            rows.push_back({{"scheme", row.scheme},
                            {"p", row.p},
                            {"partitions", row.partitions},
                            {"R", row.recovery_threshold},
                            {"upload_elems", row.upload_elems},
                            {"download_elems", row.download_elems},
                            {"straggler_tolerant", row.straggler_tolerant},
                            {"model_only", row.model_only}});
        json out{{"schema_version", kSchemaVersion},
                 {"rows", rows},
                 {"crossover",
                  {{"sdgmm_i_last_p_below_matdot", result.crossover.sdgmm_i_last_p_below_matdot},
                   {"sdgmm_ii_last_p_below_matdot", result.crossover.sdgmm_ii_last_p_below_matdot},
                   {"dft_lowest_from_p", result.crossover.dft_lowest_from_p},
                   {"dft_below_matdot_everywhere", result.crossover.dft_below_matdot_everywhere}}}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (args.out.empty()) std::cout << csv;
    else std::cout << "cost table written to " << args.out << "\n";
    std::cout << "sdgmm-i upload < matdot upload for p <= "
              << result.crossover.sdgmm_i_last_p_below_matdot << "\n";
    std::cout << "sdgmm-ii upload < matdot upload for p <= "
              << result.crossover.sdgmm_ii_last_p_below_matdot << "\n";
    std::cout << "dft upload lowest from p >= " << result.crossover.dft_lowest_from_p
              << " (cost model only; no straggler tolerance)\n";
    return 0;
}

struct ServeArgs {
    std::uint16_t port = 0;
    std::optional<std::uint64_t> q;
};

int cmd_serve(const ServeArgs& args) {
    if (args.q) (void)PrimeField(*args.q); // validate before listening
    wire::WorkerServer server(args.port);
    std::cout << "worker listening on port " << server.port() << std::endl;
    // serve until killed
    while (true) std::this_thread::sleep_for(std::chrono::seconds(3600));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed Gram matrix computation over prime fields and complex numbers"};
    app.require_subcommand(1);

    TableArgs table_args;
    auto* table = app.add_subcommand("table", "print a degree table and its validity");
    table->add_option("--phi", table_args.phi, "comma-separated exponents")->required();
    std::size_t table_p = 0;
    auto* table_p_opt = table->add_option("--p", table_p, "number of useful entries");
    table->add_option("--gamma", table_args.gamma, "column exponents (asymmetric table)");
    table->add_flag("--diff", table_args.diff, "difference table instead of sums");
    table->add_flag("--json", table_args.as_json, "structured output");

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "minimize the largest exponent (depth-first search)");
    search->add_option("--p", search_args.p, "partition count")->required();
    search->add_option("--budget", search_args.budget, "node budget");
    search->add_flag("--json", search_args.as_json, "structured output");

    ConstructArgs construct_args;
    auto* construct = app.add_subcommand("construct", "closed-form exponent constructions");
    construct->add_option("--p", construct_args.p, "partition count")->required();
    construct->add_option("--scheme", construct_args.scheme, "trivial|doubling")->required();
    construct->add_option("--base", construct_args.base, "doubling base (default 2)");
    construct->add_flag("--json", construct_args.as_json, "structured output");

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "secure distributed Gram computation of A A^T");
    run->add_option("--input", run_args.input, "matrix CSV")->required();
    run->add_option("--p", run_args.p, "partition count")->required();
    run->add_option("--scheme", run_args.scheme, "trivial|doubling|search|explicit");
    run->add_option("--phi", run_args.phi, "exponents for --scheme explicit");
    run->add_option("--workers", run_args.workers, "number of workers N")->required();
    run->add_option("--drop", run_args.drop, "simulate this many random stragglers");
    run->add_option("--drop-set", run_args.drop_set, "explicit straggler indices");
    run->add_option("--seed", run_args.seed, "randomness seed");
    run->add_option("--q", run_args.q, "field modulus (default 2^61 - 1 or GRAM_DEFAULT_Q)");
    run->add_option("--mode", run_args.mode, "subset-safe|interp");
    run->add_option("--out", run_args.out, "write the Gram matrix CSV here");
    run->add_option("--trace", run_args.trace_path, "write the task trace JSON here");
    run->add_flag("--distributed", run_args.distributed, "dispatch over TCP instead of in-process");
    run->add_option("--endpoints", run_args.endpoints, "host:port,... for --distributed");
    run->add_flag("--secure-rng", run_args.secure_rng, "draw noise from the OS entropy source");
    run->add_flag("--json", run_args.as_json, "structured output");

    MatDotArgs matdot_args;
    auto* matdot = app.add_subcommand("matdot", "secure MatDot product A * B (baseline)");
    matdot->add_option("--a", matdot_args.a_path, "left matrix CSV")->required();
    matdot->add_option("--b", matdot_args.b_path, "right matrix CSV")->required();
    matdot->add_option("--p", matdot_args.p, "partition count")->required();
    matdot->add_option("--workers", matdot_args.workers, "number of workers")->required();
    matdot->add_option("--seed", matdot_args.seed, "randomness seed");
    matdot->add_option("--q", matdot_args.q, "field modulus");
    matdot->add_option("--out", matdot_args.out, "write the product CSV here");
    matdot->add_flag("--json", matdot_args.as_json, "structured output");

    AdgmmArgs adgmm_args;
    auto* adgmm = app.add_subcommand("adgmm", "analog Gram computation over complex numbers");
    adgmm->add_option("--input", adgmm_args.input, "matrix CSV (decimal floats)")->required();
    adgmm->add_option("--p", adgmm_args.p, "partition count")->required();
    adgmm->add_option("--workers", adgmm_args.workers, "number of workers")->required();
    adgmm->add_option("--out", adgmm_args.out, "write the Gram matrix CSV here");
    adgmm->add_flag("--json", adgmm_args.as_json, "structured output");

    LstsqArgs lstsq_args;
    auto* lstsq = app.add_subcommand("lstsq", "least squares via the analog Gram scheme");
    lstsq->add_option("--input", lstsq_args.input, "matrix CSV")->required();
    lstsq->add_option("--b", lstsq_args.b_path, "right-hand side vector CSV")->required();
    lstsq->add_option("--p", lstsq_args.p, "partition count")->required();
    lstsq->add_option("--workers", lstsq_args.workers, "number of workers")->required();
    lstsq->add_flag("--json", lstsq_args.as_json, "structured output");

    AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "exhaustive security audit at toy sizes");
    audit->add_option("--q", audit_args.q, "small prime modulus");
    audit->add_option("--t", audit_args.t, "rows per share");
    audit->add_option("--p", audit_args.p, "partition count");
    audit->add_option("--chunk", audit_args.chunk, "columns per block");
    audit->add_option("--phi", audit_args.phi, "exponents (default: doubling construction)");
    audit->add_option("--pair", audit_args.pair, "two evaluation points for the collusion demo");
    audit->add_flag("--histogram", audit_args.histogram, "dump one share histogram");
    audit->add_flag("--json", audit_args.as_json, "structured output");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "cost comparison across schemes");
    compare->add_option("--p-max", compare_args.p_max, "largest p");
    compare->add_option("--t", compare_args.t, "matrix rows");
    compare->add_option("--s", compare_args.s, "matrix columns");
    compare->add_option("--out", compare_args.out, "write CSV here");
    compare->add_flag("--json", compare_args.as_json, "structured output");

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve-worker", "run a Gram worker server");
    serve->add_option("--port", serve_args.port, "TCP port (0 = ephemeral)");
    serve->add_option("--q", serve_args.q, "validate this modulus at startup");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*table) {
            if (table_p_opt->count()) table_args.p = table_p;
            return cmd_table(table_args);
        }
        if (*search) return cmd_search(search_args);
        if (*construct) return cmd_construct(construct_args);
        if (*run) return cmd_run(run_args);
        if (*matdot) return cmd_matdot(matdot_args);
        if (*adgmm) return cmd_adgmm(adgmm_args);
        if (*lstsq) return cmd_lstsq(lstsq_args);
        if (*audit) return cmd_audit(audit_args);
        if (*compare) return cmd_compare(compare_args);
        if (*serve) return cmd_serve(serve_args);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "best known valid vector (scheme I): " << join_i64(e.fallback.exponents) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
