#include "melscope/cli.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "melscope/distinguish.hpp"
#include "melscope/entropy.hpp"
#include "melscope/jsonout.hpp"
#include "melscope/linalg.hpp"
#include "melscope/teleport.hpp"
#include "melscope/weyl.hpp"

namespace melscope {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// argument parsing helpers

double parse_real_strict(const std::string& s) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("malformed number '" + s + "'");
    }
    if (pos != s.size()) throw UsageError("malformed number '" + s + "'");
    return v;
}

Complex parse_complex(const std::string& tok) {
    if (tok.empty()) throw UsageError("empty complex literal");
    size_t split = std::string::npos;
    for (size_t p = 1; p < tok.size(); ++p) {
        const char c = tok[p];
        if ((c == '+' || c == '-') && tok[p - 1] != 'e' && tok[p - 1] != 'E') split = p;
    }
    auto imag_of = [](std::string s) {
        s.pop_back();  // trailing i
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_real_strict(s);
    };
    if (tok.back() == 'i' || tok.back() == 'I') {
        if (split == std::string::npos) return Complex(0.0, imag_of(tok));
        return Complex(parse_real_strict(tok.substr(0, split)), imag_of(tok.substr(split)));
    }
    if (split != std::string::npos) throw UsageError("malformed complex literal '" + tok + "'");
    return Complex(parse_real_strict(tok), 0.0);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

BellIndex parse_index_entry(const std::string& entry, int d) {
    int n = -1, m = -1;
    const auto colon = entry.find(':');
    if (colon != std::string::npos) {
        try {
            n = std::stoi(entry.substr(0, colon));
            m = std::stoi(entry.substr(colon + 1));
        } catch (const std::exception&) {
            throw UsageError("malformed set entry '" + entry + "'");
        }
    } else {
        if (d > 9) throw UsageError("set entries need the n:m form when d > 9");
        if (entry.size() != 2 || !std::isdigit(static_cast<unsigned char>(entry[0])) ||
            !std::isdigit(static_cast<unsigned char>(entry[1])))
            throw UsageError("malformed set entry '" + entry + "' (expected two digits or n:m)");
        n = entry[0] - '0';
        m = entry[1] - '0';
    }
    if (n < 0 || n >= d || m < 0 || m >= d)
        throw UsageError("set entry '" + entry + "' out of range for d=" + std::to_string(d));
    return BellIndex(d, n, m);
}

std::vector<BellIndex> parse_set(const std::string& spec, int d) {
    std::vector<BellIndex> out;
    for (const auto& entry : split(spec, ','))
        out.push_back(parse_index_entry(entry, d));
    if (out.empty()) throw UsageError("empty set specification");
    return out;
}

// channel spec N,M (also accepts the n:m and two-digit forms)
BellIndex parse_channel(const std::string& spec, int d) {
    const auto parts = split(spec, ',');
    if (parts.size() == 1) return parse_index_entry(parts[0], d);
    if (parts.size() == 2) {
        int n = -1, m = -1;
        try {
            n = std::stoi(parts[0]);
            m = std::stoi(parts[1]);
        } catch (const std::exception&) {
            throw UsageError("malformed channel '" + spec + "'");
        }
        if (n < 0 || n >= d || m < 0 || m >= d)
            throw UsageError("channel '" + spec + "' out of range for d=" + std::to_string(d));
        return BellIndex(d, n, m);
    }
    throw UsageError("channel takes a single index pair");
}

StateVector parse_probe(const std::string& spec, int d) {
    if (spec == "zero") return StateVector::basis({d}, 0);
    if (spec == "uniform") {
        std::vector<Complex> a(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
        return StateVector::create({d}, std::move(a));
    }
    std::vector<Complex> amps;
    for (const auto& tok : split(spec, ',')) amps.push_back(parse_complex(tok));
    if (static_cast<int>(amps.size()) != d)
        throw UsageError("probe needs " + std::to_string(d) + " amplitudes");
    try {
        return StateVector::normalized({d}, std::move(amps));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad probe: ") + e.what());
    }
}

uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MELSCOPE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("MELSCOPE_SEED is not a valid integer");
        }
    }
    return SearchConfig{}.seed;
}

// ---------------------------------------------------------------------------
// JSON helpers

JsonValue json_complex(const Complex& c) {
    return JsonValue::array().push(JsonValue::number(c.real())).push(JsonValue::number(c.imag()));
}

JsonValue json_amplitudes(const std::vector<Complex>& amps) {
    JsonValue a = JsonValue::array();
    for (const auto& c : amps) a.push(json_complex(c));
    return a;
}

JsonValue json_matrix(const ComplexMatrix& m) {
    JsonValue rows = JsonValue::array();
    for (int r = 0; r < m.rows; ++r) {
        JsonValue row = JsonValue::array();
        for (int c = 0; c < m.cols; ++c) row.push(json_complex(m.at(r, c)));
        rows.push(std::move(row));
    }
    return rows;
}

JsonValue json_state(const StateVector& v) {
    JsonValue dims = JsonValue::array();
    for (int f : v.dims) dims.push(JsonValue::integer(f));
    return JsonValue::object().set("dims", std::move(dims)).set("amplitudes", json_amplitudes(v.amps));
}

JsonValue json_index_list(const std::vector<BellIndex>& set) {
    JsonValue a = JsonValue::array();
    for (const auto& b : set)
        a.push(JsonValue::array().push(JsonValue::integer(b.n)).push(JsonValue::integer(b.m)));
    return a;
}

JsonValue json_search_result(const ProbeSearchResult& res) {
    JsonValue r = JsonValue::object()
                      .set("status", JsonValue::str(to_string(res.status)))
                      .set("defect", JsonValue::number(res.defect))
                      .set("best_objective", JsonValue::number(res.best_objective))
                      .set("restarts_used", JsonValue::integer(res.restarts_used))
                      .set("seed", JsonValue::integer(static_cast<long long>(res.seed)));
    if (res.probe) r.set("probe", json_state(*res.probe));
    return r;
}

JsonValue json_config(const SearchConfig& cfg) {
    return JsonValue::object()
        .set("restarts", JsonValue::integer(cfg.restarts))
        .set("max_iterations", JsonValue::integer(cfg.max_iterations))
        .set("gradient_tolerance", JsonValue::number(cfg.gradient_tolerance))
        .set("feasibility_tolerance", JsonValue::number(cfg.feasibility_tolerance))
        .set("infeasibility_threshold", JsonValue::number(cfg.infeasibility_threshold))
        .set("seed", JsonValue::integer(static_cast<long long>(cfg.seed)));
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

std::string format17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string probe_summary(const std::optional<StateVector>& probe) {
    if (!probe) return "";
    std::string s;
    for (size_t i = 0; i < probe->amps.size(); ++i) {
        if (i) s += ';';
        s += format17(probe->amps[i].real()) + "/" + format17(probe->amps[i].imag());
    }
    return s;
}

std::string set_summary(const std::vector<BellIndex>& set) {
    std::string s;
    for (size_t i = 0; i < set.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(set[i].n) + ":" + std::to_string(set[i].m);
    }
    return s;
}

}  // namespace

DispatchResult dispatch(const std::vector<std::string>& argv) {
    CLI::App app{"canonical maximally entangled states: teleportation, probe search, entropy bounds"};
    app.require_subcommand(0, 1);

    // bell
    auto* bell_cmd = app.add_subcommand("bell", "emit canonical states and their operators");
    int bell_d = 2, bell_n = -1, bell_m = -1;
    bell_cmd->add_option("--d", bell_d, "dimension")->required();
    bell_cmd->add_option("--n", bell_n, "row index");
    bell_cmd->add_option("--m", bell_m, "shift index");

    // teleport
    auto* tele_cmd = app.add_subcommand("teleport", "branch table of the standard protocol");
    int tele_d = 2;
    std::string tele_channel, tele_probe;
    tele_cmd->add_option("--d", tele_d, "dimension")->required();
    tele_cmd->add_option("--channel", tele_channel, "channel index N,M")->required();
    tele_cmd->add_option("--probe", tele_probe, "probe spec: zero | uniform | amplitudes")->required();

    // two-copy
    auto* two_cmd = app.add_subcommand("two-copy", "two-copy discrimination recovery table");
    int two_d = 2;
    bool two_all = false;
    two_cmd->add_option("--d", two_d, "dimension")->required();
    two_cmd->add_flag("--all", two_all, "run every hidden index");

    // check-set / check-set-conjugated
    auto add_check_options = [](CLI::App* cmd, int& d, std::string& set, int& restarts,
                                std::optional<uint64_t>& seed) {
        cmd->add_option("--d", d, "dimension")->required();
        cmd->add_option("--set", set, "comma-separated indices (two digits or n:m)")->required();
        cmd->add_option("--restarts", restarts, "search restarts");
        cmd->add_option("--seed", seed, "search seed");
    };
    auto* check_cmd = app.add_subcommand("check-set", "probe feasibility search for a set");
    int check_d = 2, check_restarts = SearchConfig{}.restarts;
    std::string check_set;
    std::optional<uint64_t> check_seed;
    add_check_options(check_cmd, check_d, check_set, check_restarts, check_seed);

    auto* checkc_cmd =
        app.add_subcommand("check-set-conjugated", "outcome-conjugated feasibility search");
    int checkc_d = 2, checkc_restarts = SearchConfig{}.restarts;
    std::string checkc_set;
    std::optional<uint64_t> checkc_seed;
    add_check_options(checkc_cmd, checkc_d, checkc_set, checkc_restarts, checkc_seed);

    // census
    auto* census_cmd = app.add_subcommand("census", "classify all k-subsets of the family");
    int census_d = 2, census_k = 2;
    std::optional<long long> census_limit;
    std::string census_format = "json";
    std::optional<uint64_t> census_seed;
    census_cmd->add_option("--d", census_d, "dimension")->required();
    census_cmd->add_option("--k", census_k, "subset size")->required();
    census_cmd->add_option("--limit", census_limit, "cap on enumerated subsets");
    census_cmd->add_option("--format", census_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    census_cmd->add_option("--seed", census_seed, "search seed");

    // entropy-bound
    auto* ent_cmd = app.add_subcommand("entropy-bound", "relative-entropy bound for a set");
    int ent_d = 2;
    std::string ent_set;
    ent_cmd->add_option("--d", ent_d, "dimension")->required();
    ent_cmd->add_option("--set", ent_set, "comma-separated indices")->required();

    // canonicalize2
    auto* canon_cmd = app.add_subcommand("canonicalize2", "two-qubit local-unitary witnesses");
    double canon_theta = 0.0, canon_delta = 0.0;
    canon_cmd->add_option("--theta", canon_theta, "theta angle (radians)")->required();
    canon_cmd->add_option("--delta", canon_delta, "delta angle (radians)")->required();

    DispatchResult result;
    const auto t0 = std::chrono::steady_clock::now();

    try {
        std::vector<std::string> args(argv.rbegin(), argv.rend());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        result.output = app.help();
        result.exit_code = 0;
        return result;
    } catch (const CLI::ParseError& e) {
        result.diagnostics = std::string(e.what()) + "\n";
        result.exit_code = 2;
        return result;
    }

    if (app.get_subcommands().empty()) {
        result.diagnostics = "missing subcommand (see --help)\n";
        result.exit_code = 2;
        return result;
    }

    JsonValue envelope = JsonValue::object();
    JsonValue params = JsonValue::object();
    JsonValue payload = JsonValue::object();
    std::string command;
    uint64_t seed_used = SearchConfig{}.seed;
    bool raw_output = false;  // census csv bypasses the JSON envelope

    try {
        if (bell_cmd->parsed()) {
            command = "bell";
            if (bell_d < 2) throw UsageError("d must be >= 2");
            params.set("d", JsonValue::str(std::to_string(bell_d)));
            const bool have_n = bell_cmd->count("--n") > 0;
            const bool have_m = bell_cmd->count("--m") > 0;
            if (have_n != have_m) throw UsageError("--n and --m must be given together");
            if (have_n) {
                if (bell_n < 0 || bell_n >= bell_d || bell_m < 0 || bell_m >= bell_d)
                    throw UsageError("indices out of range");
                params.set("n", JsonValue::str(std::to_string(bell_n)));
                params.set("m", JsonValue::str(std::to_string(bell_m)));
                const BellIndex idx(bell_d, bell_n, bell_m);
                payload.set("d", JsonValue::integer(bell_d))
                    .set("n", JsonValue::integer(bell_n))
                    .set("m", JsonValue::integer(bell_m))
                    .set("state", json_state(bell_state(idx)))
                    .set("u", json_matrix(weyl_u(idx)))
                    .set("v", json_matrix(weyl_v(idx)));
            } else {
                JsonValue states = JsonValue::array();
                for (int n = 0; n < bell_d; ++n)
                    for (int m = 0; m < bell_d; ++m)
                        states.push(JsonValue::object()
                                        .set("n", JsonValue::integer(n))
                                        .set("m", JsonValue::integer(m))
                                        .set("amplitudes",
                                             json_amplitudes(bell_state(BellIndex(bell_d, n, m)).amps)));
                payload.set("d", JsonValue::integer(bell_d)).set("states", std::move(states));
            }
        } else if (tele_cmd->parsed()) {
            command = "teleport";
            if (tele_d < 2) throw UsageError("d must be >= 2");
            params.set("d", JsonValue::str(std::to_string(tele_d)));
            params.set("channel", JsonValue::str(tele_channel));
            params.set("probe", JsonValue::str(tele_probe));
            const BellIndex ch = parse_channel(tele_channel, tele_d);
            const StateVector probe = parse_probe(tele_probe, tele_d);
            const auto protocol = standard_protocol(tele_d);
            const auto branches = run_teleport(protocol, bell_state(ch), probe);
            JsonValue rows = JsonValue::array();
            for (const auto& b : branches)
                rows.push(JsonValue::object()
                              .set("outcome", JsonValue::integer(b.outcome))
                              .set("n", JsonValue::integer(b.outcome / tele_d))
                              .set("m", JsonValue::integer(b.outcome % tele_d))
                              .set("probability", JsonValue::number(b.probability))
                              .set("output", json_amplitudes(b.output.amps)));
            payload.set("d", JsonValue::integer(tele_d))
                .set("channel",
                     JsonValue::array().push(JsonValue::integer(ch.n)).push(JsonValue::integer(ch.m)))
                .set("probe", json_amplitudes(probe.amps))
                .set("branches", std::move(rows))
                .set("pure_output",
                     JsonValue::boolean(pure_output_check(protocol, bell_state(ch), probe)));
        } else if (two_cmd->parsed()) {
            command = "two-copy";
            if (two_d < 2) throw UsageError("d must be >= 2");
            params.set("d", JsonValue::str(std::to_string(two_d)));
            params.set("all", JsonValue::str(two_all ? "true" : "false"));
            std::vector<BellIndex> hidden;
            if (two_all) {
                for (int n = 0; n < two_d; ++n)
                    for (int m = 0; m < two_d; ++m) hidden.push_back(BellIndex(two_d, n, m));
            } else {
                hidden.push_back(BellIndex(two_d, 0, 0));
            }
            JsonValue rows = JsonValue::array();
            int recovered = 0;
            for (const auto& h : hidden) {
                const BellIndex got = two_copy_discriminate(two_d, h);
                const bool ok = got == h;
                recovered += ok ? 1 : 0;
                rows.push(JsonValue::object()
                              .set("n", JsonValue::integer(h.n))
                              .set("m", JsonValue::integer(h.m))
                              .set("recovered_n", JsonValue::integer(got.n))
                              .set("recovered_m", JsonValue::integer(got.m))
                              .set("ok", JsonValue::boolean(ok)));
            }
            payload.set("d", JsonValue::integer(two_d))
                .set("rows", std::move(rows))
                .set("recovered", JsonValue::integer(recovered))
                .set("total", JsonValue::integer(static_cast<long long>(hidden.size())));
        } else if (check_cmd->parsed() || checkc_cmd->parsed()) {
            const bool conjugated = checkc_cmd->parsed();
            command = conjugated ? "check-set-conjugated" : "check-set";
            const int d = conjugated ? checkc_d : check_d;
            const std::string& spec = conjugated ? checkc_set : check_set;
            const int restarts = conjugated ? checkc_restarts : check_restarts;
            const auto& seed_flag = conjugated ? checkc_seed : check_seed;
            if (d < 2) throw UsageError("d must be >= 2");
            seed_used = resolve_seed(seed_flag);
            SearchConfig cfg;
            cfg.restarts = restarts;
            cfg.seed = seed_used;
            params.set("d", JsonValue::str(std::to_string(d)));
            params.set("set", JsonValue::str(spec));
            params.set("restarts", JsonValue::str(std::to_string(restarts)));
            params.set("seed", JsonValue::str(std::to_string(seed_used)));
            const auto indices = parse_set(spec, d);
            if (indices.size() < 2) throw UsageError("--set needs at least two members");
            StateSet set = [&] {
                try {
                    return StateSet::from_indices(d, indices);
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }();
            const auto res = conjugated
                                 ? conjugated_probe_search(set, standard_protocol(d), cfg)
                                 : probe_search(set, cfg);
            payload.set("d", JsonValue::integer(d))
                .set("set", json_index_list(set.members))
                .set("config", json_config(cfg))
                .set("result", json_search_result(res));
            if (conjugated) payload.set("protocol", JsonValue::str("standard"));
        } else if (census_cmd->parsed()) {
            command = "census";
            if (census_d < 2) throw UsageError("d must be >= 2");
            if (census_k < 2 || census_k > census_d * census_d)
                throw UsageError("need 2 <= k <= d^2");
            seed_used = resolve_seed(census_seed);
            SearchConfig cfg;
            cfg.seed = seed_used;
            params.set("d", JsonValue::str(std::to_string(census_d)));
            params.set("k", JsonValue::str(std::to_string(census_k)));
            if (census_limit) params.set("limit", JsonValue::str(std::to_string(*census_limit)));
            params.set("format", JsonValue::str(census_format));
            params.set("seed", JsonValue::str(std::to_string(seed_used)));
            const auto report = classify_sets(census_d, census_k, cfg, census_limit);
            if (census_format == "csv") {
                std::string csv = "subset,status,defect,best_objective,probe\n";
                for (const auto& row : report.rows) {
                    csv += csv_quote(set_summary(row.subset));
                    csv += ',';
                    csv += to_string(row.status);
                    csv += ',';
                    csv += format17(row.defect);
                    csv += ',';
                    csv += format17(row.best_objective);
                    csv += ',';
                    csv += csv_quote(probe_summary(row.probe));
                    csv += '\n';
                }
                result.output = csv;
                raw_output = true;
            } else {
                JsonValue rows = JsonValue::array();
                for (const auto& row : report.rows) {
                    JsonValue r = JsonValue::object()
                                      .set("set", json_index_list(row.subset))
                                      .set("status", JsonValue::str(to_string(row.status)))
                                      .set("defect", JsonValue::number(row.defect))
                                      .set("best_objective", JsonValue::number(row.best_objective));
                    if (row.probe) r.set("probe", json_state(*row.probe));
                    rows.push(std::move(r));
                }
                payload.set("d", JsonValue::integer(census_d))
                    .set("k", JsonValue::integer(census_k))
                    .set("rows", std::move(rows))
                    .set("counters",
                         JsonValue::object()
                             .set("feasible_by_catalog", JsonValue::integer(report.feasible_by_catalog))
                             .set("feasible_by_search", JsonValue::integer(report.feasible_by_search))
                             .set("undecided", JsonValue::integer(report.undecided))
                             .set("total", JsonValue::integer(static_cast<long long>(report.rows.size()))));
            }
        } else if (ent_cmd->parsed()) {
            command = "entropy-bound";
            if (ent_d < 2) throw UsageError("d must be >= 2");
            params.set("d", JsonValue::str(std::to_string(ent_d)));
            params.set("set", JsonValue::str(ent_set));
            const auto set = parse_set(ent_set, ent_d);
            if (static_cast<int>(set.size()) != ent_d + 1)
                throw UsageError("--set needs exactly d+1 members");
            const auto out = entropy_bound_check(set);
            payload.set("d", JsonValue::integer(ent_d)).set("set", json_index_list(set));
            if (!out.infinite) payload.set("value", JsonValue::number(out.value));
            payload.set("bound", JsonValue::number(out.bound))
                .set("pass", JsonValue::boolean(out.pass))
                .set("infinite", JsonValue::boolean(out.infinite))
                .set("null_mass", JsonValue::number(out.null_mass));
        } else if (canon_cmd->parsed()) {
            command = "canonicalize2";
            params.set("theta", JsonValue::str(std::to_string(canon_theta)));
            params.set("delta", JsonValue::str(std::to_string(canon_delta)));
            const TwoQubitPair pair{canon_theta, canon_delta};
            const auto canon = two_qubit_canonicalize(pair);
            const auto targets = two_qubit_pair_states(pair);
            const ComplexMatrix local = kron(canon.u_alice, canon.v_bob);
            const BellIndex order[4] = {BellIndex(2, 0, 0), BellIndex(2, 0, 1), BellIndex(2, 1, 0),
                                        BellIndex(2, 1, 1)};
            double max_residual = 0.0;
            for (int i = 0; i < 4; ++i) {
                const StateVector mapped = apply(local, bell_state(order[i]));
                for (int a = 0; a < 4; ++a)
                    max_residual = std::max(
                        max_residual,
                        std::abs(targets[i].amps[a] - canon.phases[i] * mapped.amps[a]));
            }
            JsonValue phases = JsonValue::array();
            for (const auto& p : canon.phases) phases.push(json_complex(p));
            payload.set("theta", JsonValue::number(canon_theta))
                .set("delta", JsonValue::number(canon_delta))
                .set("u_alice", json_matrix(canon.u_alice))
                .set("v_bob", json_matrix(canon.v_bob))
                .set("phases", std::move(phases))
                .set("max_residual", JsonValue::number(max_residual));
        }
    } catch (const UsageError& e) {
        result.diagnostics = std::string(e.what()) + "\n";
        result.exit_code = 2;
        return result;
    } catch (const std::exception& e) {
        result.diagnostics = std::string(e.what()) + "\n";
        result.exit_code = 1;
        return result;
    }

    if (raw_output) {
        result.exit_code = 0;
        return result;
    }

    const auto t1 = std::chrono::steady_clock::now();
    const long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    envelope.set("command", JsonValue::str(command))
        .set("parameters", std::move(params))
        .set("status", JsonValue::str("ok"))
        .set("seed", JsonValue::integer(static_cast<long long>(seed_used)))
        .set("payload", std::move(payload))
        .set("elapsed_ms", JsonValue::integer(ms));
    result.output = envelope.dump() + "\n";
    result.exit_code = 0;
    return result;
}

}  // namespace melscope
