#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cond.hpp"
#include "enumeration.hpp"
#include "errors.hpp"
#include "mc.hpp"
#include "moments.hpp"
#include "multiset.hpp"
#include "murn.hpp"
#include "patterns.hpp"
#include "samplers.hpp"
#include "set_partition.hpp"
#include "stats.hpp"
#include "wdg.hpp"

namespace patternlab::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitLimit = 4;

inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline json count_json(const BigInt& count) {
    if (count.fits_slong_p()) return json(count.get_si());
    return json(count.get_str());
}

namespace detail {

struct OutputTarget {
    std::ostream* stream;
    std::unique_ptr<std::ofstream> file;
};

inline OutputTarget open_output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) return {&fallback, nullptr};
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw parse_error("cannot open output file: " + path);
    OutputTarget t{f.get(), std::move(f)};
    return t;
}

inline MPermBag parse_mperm_indicators(const std::string& text) {
    MPermBag bag;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw parse_error("bad indicator '" + item + "' (want pos:value)");
        try {
            bag.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw parse_error("bad indicator '" + item + "'");
        }
    }
    if (bag.empty()) throw parse_error("empty indicator list");
    return bag;
}

inline ArcBag parse_arc_indicators(const std::string& text) {
    ArcBag bag;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dash = item.find('-');
        if (dash == std::string::npos) throw parse_error("bad arc '" + item + "' (want i-j)");
        try {
            bag.push_back({std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1))});
        } catch (const std::exception&) {
            throw parse_error("bad arc '" + item + "'");
        }
    }
    if (bag.empty()) throw parse_error("empty indicator list");
    return bag;
}

inline std::vector<long> parse_sizes(const std::string& text) {
    std::vector<long> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            sizes.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw parse_error("bad size '" + item + "'");
        }
    }
    if (sizes.empty()) throw parse_error("empty size list");
    return sizes;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand bodies (each writes machine-readable output to `out`)
// ---------------------------------------------------------------------------

inline void cmd_count(const std::string& word, const std::string& pattern, std::ostream& out) {
    Word w = parse_word(word);
    PermPattern tau = PermPattern::parse(pattern);
    json j;
    j["count"] = count_json(count_perm_pattern(w, tau));
    out << j.dump() << "\n";
}

inline void cmd_count_arcs(const std::string& partition, const std::string& arcs, int len,
                           std::ostream& out) {
    SetPartition pi = SetPartition::parse(partition);
    ArcPattern pat = ArcPattern::parse(arcs, len);
    json j;
    j["count"] = count_json(count_arc_pattern(pi, pat));
    out << j.dump() << "\n";
}

inline void cmd_cumulant(const std::string& family, const std::string& multiset, int n, long m_cond,
                         const std::string& indicators, const std::string& order,
                         const std::string& oracle_kind, int order_cap, std::ostream& out) {
    json j;
    j["family"] = family;
    Rational kappa;
    auto check_order = [&](std::size_t bag_size) {
        if (order == "auto") return;
        try {
            if (std::stoul(order) != bag_size)
                throw std::domain_error("--order does not match the indicator count");
        } catch (const std::invalid_argument&) {
            throw parse_error("bad --order: '" + order + "' (want auto or an integer)");
        }
    };
    if (family == "mperm") {
        Multiset m = Multiset::parse(multiset);
        MPermBag bag = detail::parse_mperm_indicators(indicators);
        check_order(bag.size());
        j["multiset"] = m.str();
        json inds = json::array();
        for (const auto& x : bag) inds.push_back(indicator_str(x));
        j["indicators"] = inds;
        j["order"] = bag.size();
        if (oracle_kind == "brute") {
            MPermBruteMoments oracle(m);
            kappa = joint_cumulant<MPermIndicator>(oracle, bag, order_cap);
        } else {
            MPermExactMoments oracle(m);
            kappa = joint_cumulant<MPermIndicator>(oracle, bag, order_cap);
        }
    } else if (family == "setpart") {
        ArcBag bag = detail::parse_arc_indicators(indicators);
        check_order(bag.size());
        j["n"] = n;
        json inds = json::array();
        for (const auto& x : bag) inds.push_back(indicator_str(x));
        j["indicators"] = inds;
        j["order"] = bag.size();
        if (m_cond > 0) {
            j["conditional_m"] = m_cond;
            CondArcMoments oracle(n, m_cond);
            kappa = joint_cumulant<ArcIndicator>(oracle, bag, order_cap);
        } else {
            SetPartEnumMoments oracle(n);
            kappa = joint_cumulant<ArcIndicator>(oracle, bag, order_cap);
        }
    } else {
        throw parse_error("unknown family: " + family);
    }
    j["cumulant"] = rational_str(kappa);
    out << j.dump() << "\n";
}

inline void cmd_sample(const std::string& family, const std::string& multiset, int n, long reps,
                       std::uint64_t seed, double tail_tol, std::ostream& out) {
    if (reps < 1) throw std::domain_error("sample: need reps >= 1");
    if (family == "mperm") {
        Multiset m = Multiset::parse(multiset);
        for (long k = 0; k < reps; ++k) {
            Word w = sample_multiset_perm(m, derive_seed(seed, static_cast<std::uint64_t>(k)));
            json j;
            j["replica"] = k;
            j["word"] = word_str(w);
            out << j.dump() << "\n";
        }
    } else if (family == "setpart") {
        MUrnLaw law(n, tail_tol);
        for (long k = 0; k < reps; ++k) {
            StamDraw d = sample_stam(n, law, derive_seed(seed, static_cast<std::uint64_t>(k)));
            json j;
            j["replica"] = k;
            j["M"] = d.urn_count;
            j["empty_urns"] = d.empty_urns;
            j["partition"] = d.partition.str();
            out << j.dump() << "\n";
        }
    } else {
        throw parse_error("unknown family: " + family);
    }
}

inline json wdg_report_json(const std::string& family, const std::string& size_descr, int r) {
    json j;
    j["family"] = family;
    j["size"] = size_descr;
    j["r"] = r;
    return j;
}

inline void cmd_verify_wdg(const std::string& family, const std::string& multiset, int n, int order,
                           std::ostream& out) {
    json j;
    if (family == "mperm") {
        Multiset m = Multiset::parse(multiset);
        j = wdg_report_json(family, m.str(), order);
        auto graph = build_gM(m);
        MPermExactMoments oracle(m);
        auto psi = [&](const MPermBag& bag) { return psi_mperm(m, bag); };
        auto rep = estimate_Cr(mperm_vertices(m), graph, psi, oracle, order);
        j["bags_scanned"] = rep.bags_scanned;
        j["max_ratio"] = rational_str(rep.max_ratio);
        json arg = json::array();
        for (const auto& x : rep.argmax_bag) arg.push_back(indicator_str(x));
        j["argmax_bag"] = arg;
        json viol = json::array();
        for (const auto& bag : rep.violations) {
            json vb = json::array();
            for (const auto& x : bag) vb.push_back(indicator_str(x));
            viol.push_back(vb);
        }
        j["violations"] = viol;
    } else if (family == "setpart") {
        j = wdg_report_json(family, std::to_string(n), order);
        auto graph = build_gN(n);
        SetPartEnumMoments oracle(n);
        auto psi = [&](const ArcBag& bag) { return psi_setpart(n, bag); };
        auto rep = estimate_Cr(setpart_vertices(n), graph, psi, oracle, order);
        j["bags_scanned"] = rep.bags_scanned;
        j["max_ratio"] = rational_str(rep.max_ratio);
        json arg = json::array();
        for (const auto& x : rep.argmax_bag) arg.push_back(indicator_str(x));
        j["argmax_bag"] = arg;
        json viol = json::array();
        for (const auto& bag : rep.violations) {
            json vb = json::array();
            for (const auto& x : bag) vb.push_back(indicator_str(x));
            viol.push_back(vb);
        }
        j["violations"] = viol;
    } else {
        throw parse_error("unknown family: " + family);
    }
    out << j.dump() << "\n";
}

inline void cmd_cond_exp(int n, const std::string& arcs, int len, double tail_tol, bool exact,
                         const std::string& emit, std::ostream& out) {
    ArcPattern pat = ArcPattern::parse(arcs, len);
    MUrnLaw law(n, tail_tol);
    if (emit == "csv") {
        out << "m,P(M=m),E[Occ|m]\n";
        for (long m = 1; m <= law.m_max(); ++m) {
            out << m << "," << fmt17(static_cast<double>(law.weight(m))) << ",";
            if (exact)
                out << rational_str(cond_expectation_exact(n, m, pat));
            else
                out << fmt17(cond_expectation_f(n, m, pat));
            out << "\n";
        }
    } else {
        json rows = json::array();
        for (long m = 1; m <= law.m_max(); ++m) {
            json row;
            row["m"] = m;
            row["p"] = static_cast<double>(law.weight(m));
            if (exact)
                row["cond_exp"] = rational_str(cond_expectation_exact(n, m, pat));
            else
                row["cond_exp"] = cond_expectation_f(n, m, pat);
            rows.push_back(row);
        }
        json j;
        j["n"] = n;
        j["arcs"] = pat.str();
        j["rows"] = rows;
        out << j.dump() << "\n";
    }
}

inline void cmd_mc(const std::string& family, const std::string& pattern, const std::string& arcs,
                   int len, int letters, const std::string& sizes_text, long reps,
                   std::uint64_t seed, int threads, double tail_tol, const std::string& emit,
                   std::ostream& out) {
    auto sizes = detail::parse_sizes(sizes_text);
    struct Row {
        long size;
        double mean, variance, ks, k3, k4;
    };
    std::vector<Row> rows;
    for (long size : sizes) {
        McRun run;
        if (family == "mperm") {
            PermPattern tau = PermPattern::parse(pattern);
            Multiset m = balanced_multiset(size, letters);
            run = run_mc_mperm(m, tau, reps, seed, threads);
        } else if (family == "setpart") {
            ArcPattern pat = ArcPattern::parse(arcs, len);
            run = run_mc_setpart(static_cast<int>(size), pat, reps, seed, threads, tail_tol);
        } else {
            throw parse_error("unknown family: " + family);
        }
        auto ks = mc_ks(run);
        auto kstats = empirical_cumulants(run.standardized, 4);
        rows.push_back({size, run.mean, run.variance, ks, kstats[2], kstats[3]});
    }
    if (emit == "csv") {
        out << "size,mean,variance,ks,k3,k4\n";
        for (const auto& r : rows)
            out << r.size << "," << fmt17(r.mean) << "," << fmt17(r.variance) << "," << fmt17(r.ks)
                << "," << fmt17(r.k3) << "," << fmt17(r.k4) << "\n";
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            json jr;
            jr["size"] = r.size;
            jr["mean"] = r.mean;
            jr["variance"] = r.variance;
            jr["ks"] = r.ks;
            jr["k3"] = r.k3;
            jr["k4"] = r.k4;
            arr.push_back(jr);
        }
        out << arr.dump() << "\n";
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline void cmd_batch(const std::string& config_path, bool keep_going, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
    std::ifstream in(config_path);
    if (!in) throw parse_error("cannot open config: " + config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad config JSON: ") + e.what());
    }
    std::string outdir = cfg.value("output_dir", std::string("."));
    std::uint64_t master = cfg.value("master_seed", 0ULL);
    if (!cfg.contains("jobs") || !cfg["jobs"].is_array())
        throw parse_error("config needs a 'jobs' array");
    std::filesystem::create_directories(outdir);

    std::set<std::string> names;
    for (const auto& job : cfg["jobs"]) {
        std::string name = job.value("name", std::string());
        if (name.empty() || !names.insert(name).second)
            throw parse_error("job names must be present and unique");
        if (!job.contains("argv") || !job["argv"].is_array())
            throw parse_error("job '" + name + "' needs an 'argv' array");
    }

    json summary;
    summary["jobs"] = json::array();
    int failed = 0;
    std::uint64_t job_index = 0;
    for (const auto& job : cfg["jobs"]) {
        std::string name = job["name"];
        std::vector<std::string> argv;
        for (const auto& a : job["argv"]) argv.push_back(a.get<std::string>());
        bool has_seed = false, has_out = false;
        for (const auto& a : argv) {
            if (a == "--seed") has_seed = true;
            if (a == "--out") has_out = true;
        }
        bool seedable = !argv.empty() && (argv.front() == "sample" || argv.front() == "mc");
        if (!has_seed && seedable && cfg.contains("master_seed")) {
            argv.push_back("--seed");
            argv.push_back(std::to_string(derive_seed(master, job_index)));
        }
        std::string job_out = outdir + "/" + name + ".out";
        if (!has_out) {
            argv.push_back("--out");
            argv.push_back(job_out);
        }
        int code;
        {
            std::ostringstream sink;
            code = run_cli(argv, sink, err);
            // leftover stdout (jobs normally write to --out files)
            if (!sink.str().empty()) {
                std::ofstream extra(job_out, std::ios::app);
                extra << sink.str();
            }
        }
        json jr;
        jr["name"] = name;
        jr["exit_code"] = code;
        jr["status"] = (code == 0) ? "PASS" : "FAIL";
        jr["output"] = has_out ? "(job flag)" : job_out;
        summary["jobs"].push_back(jr);
        if (code != 0) {
            ++failed;
            if (!keep_going) break;
        }
        ++job_index;
    }
    summary["failed"] = failed;
    auto target = detail::open_output(out_path, out);
    (*target.stream) << summary.dump(2) << "\n";
    if (failed > 0) throw std::domain_error(std::to_string(failed) + " batch job(s) failed");
}

// ---------------------------------------------------------------------------
// Argument wiring
// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"patternlab: pattern statistics in multiset permutations and set partitions"};
    app.require_subcommand(1);

    // count
    auto* count = app.add_subcommand("count", "count permutation-pattern occurrences in a word");
    std::string count_word, count_pattern, count_out;
    count->add_option("--word", count_word, "word, e.g. 23112")->required();
    count->add_option("--pattern", count_pattern, "pattern, e.g. 21")->required();
    count->add_option("--out", count_out, "output path (default stdout)");

    // count-arcs
    auto* carcs = app.add_subcommand("count-arcs", "count arc-pattern occurrences in a set partition");
    std::string ca_partition, ca_arcs, ca_out;
    int ca_len = 0;
    carcs->add_option("--partition", ca_partition, "partition, e.g. {1,3,4}{2,5}")->required();
    carcs->add_option("--arcs", ca_arcs, "arc pattern, e.g. 1-3,2-4");
    carcs->add_option("--len", ca_len, "pattern length (default: max arc endpoint)");
    carcs->add_option("--out", ca_out, "output path");

    // cumulant
    auto* cum = app.add_subcommand("cumulant", "exact joint cumulant of an indicator bag");
    std::string cu_family = "mperm", cu_multiset, cu_indicators, cu_order = "auto",
                cu_oracle = "closed", cu_out;
    int cu_n = 0, cu_order_cap = kDefaultCumulantOrderCap;
    long cu_m = 0;
    cum->add_option("--family", cu_family, "mperm|setpart")->required();
    cum->add_option("--multiset", cu_multiset, "multiset, e.g. 1^2,2^2,3");
    cum->add_option("--n", cu_n, "ground-set size (setpart)");
    cum->add_option("--m", cu_m, "condition on M=m (setpart only; 0 = unconditional)");
    cum->add_option("--indicators", cu_indicators, "mperm: pos:val,...  setpart: i-j,...")->required();
    cum->add_option("--order", cu_order, "cumulant order: auto or the indicator count");
    cum->add_option("--oracle", cu_oracle, "closed|brute (mperm moment oracle)");
    cum->add_option("--order-cap", cu_order_cap, "cumulant order cap (default 6)");
    cum->add_option("--out", cu_out, "output path");

    // sample
    auto* sample = app.add_subcommand("sample", "draw uniform samples (JSON lines)");
    std::string sa_family, sa_multiset, sa_out;
    int sa_n = 0;
    long sa_reps = 1;
    std::uint64_t sa_seed = 0;
    double sa_tail = 1e-12;
    sample->add_option("--family", sa_family, "mperm|setpart")->required();
    sample->add_option("--multiset", sa_multiset, "multiset (mperm)");
    sample->add_option("--n", sa_n, "ground-set size (setpart)");
    sample->add_option("--reps", sa_reps, "number of draws");
    sample->add_option("--seed", sa_seed, "master seed");
    sample->add_option("--tail-tol", sa_tail, "urn-law tail tolerance");
    sample->add_option("--out", sa_out, "output path");

    // verify wdg
    auto* verify = app.add_subcommand("verify", "exact verification scans");
    verify->require_subcommand(1);
    auto* vwdg = verify->add_subcommand("wdg", "weighted-dependency-graph bound scan");
    std::string vw_family, vw_multiset, vw_report;
    int vw_n = 0, vw_order = 2;
    vwdg->add_option("--family", vw_family, "mperm|setpart")->required();
    vwdg->add_option("--multiset", vw_multiset, "multiset (mperm)");
    vwdg->add_option("--n", vw_n, "ground-set size (setpart)");
    vwdg->add_option("--order", vw_order, "bag size r (>= 2)");
    vwdg->add_option("--report", vw_report, "report path (default stdout)");
    std::string vw_out;
    vwdg->add_option("--out", vw_out, "alias of --report");

    // cond-exp
    auto* ce = app.add_subcommand("cond-exp", "conditional expectation E[Occ|M=m] over the urn law");
    std::string ce_arcs, ce_emit = "csv", ce_out;
    int ce_n = 0, ce_len = 0;
    double ce_tail = 1e-12;
    bool ce_exact = false;
    ce->add_option("--n", ce_n, "ground-set size")->required();
    ce->add_option("--arcs", ce_arcs, "arc pattern");
    ce->add_option("--len", ce_len, "pattern length");
    ce->add_option("--tail-tol", ce_tail, "urn-law tail tolerance");
    ce->add_option("--emit", ce_emit, "csv|json");
    ce->add_flag("--exact", ce_exact, "emit exact rationals p/q");
    ce->add_option("--out", ce_out, "output path");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo sample-count-standardize pipeline");
    std::string mc_family, mc_pattern, mc_arcs, mc_sizes, mc_emit = "csv", mc_out;
    int mc_len = 0, mc_letters = 2, mc_threads = 1;
    long mc_reps = 10000;
    std::uint64_t mc_seed = 0;
    double mc_tail = 1e-12;
    mc->add_option("--family", mc_family, "mperm|setpart")->required();
    mc->add_option("--pattern", mc_pattern, "permutation pattern (mperm)");
    mc->add_option("--arcs", mc_arcs, "arc pattern (setpart)");
    mc->add_option("--len", mc_len, "arc-pattern length");
    mc->add_option("--letters", mc_letters, "balanced-multiset letter count (mperm, default 2)");
    mc->add_option("--sizes", mc_sizes, "comma list of sizes, e.g. 50,100,200,400")->required();
    mc->add_option("--reps", mc_reps, "replicas per size");
    mc->add_option("--seed", mc_seed, "master seed");
    mc->add_option("--threads", mc_threads, "worker threads");
    mc->add_option("--tail-tol", mc_tail, "urn-law tail tolerance (setpart)");
    mc->add_option("--emit", mc_emit, "csv|json");
    mc->add_option("--out", mc_out, "output path");

    // batch
    auto* batch = app.add_subcommand("batch", "run a JSON experiment config");
    std::string ba_config, ba_out;
    bool ba_keep = false;
    batch->add_option("--config", ba_config, "config JSON path")->required();
    batch->add_flag("--keep-going", ba_keep, "continue past failures");
    batch->add_option("--out", ba_out, "summary path (default stdout)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (*count) {
            auto t = detail::open_output(count_out, out);
            cmd_count(count_word, count_pattern, *t.stream);
        } else if (*carcs) {
            auto t = detail::open_output(ca_out, out);
            cmd_count_arcs(ca_partition, ca_arcs, ca_len, *t.stream);
        } else if (*cum) {
            auto t = detail::open_output(cu_out, out);
            cmd_cumulant(cu_family, cu_multiset, cu_n, cu_m, cu_indicators, cu_order, cu_oracle,
                         cu_order_cap, *t.stream);
        } else if (*sample) {
            auto t = detail::open_output(sa_out, out);
            cmd_sample(sa_family, sa_multiset, sa_n, sa_reps, sa_seed, sa_tail, *t.stream);
        } else if (*vwdg) {
            std::string path = !vw_report.empty() ? vw_report : vw_out;
            auto t = detail::open_output(path, out);
            cmd_verify_wdg(vw_family, vw_multiset, vw_n, vw_order, *t.stream);
        } else if (*ce) {
            auto t = detail::open_output(ce_out, out);
            cmd_cond_exp(ce_n, ce_arcs, ce_len, ce_tail, ce_exact, ce_emit, *t.stream);
        } else if (*mc) {
            auto t = detail::open_output(mc_out, out);
            cmd_mc(mc_family, mc_pattern, mc_arcs, mc_len, mc_letters, mc_sizes, mc_reps, mc_seed,
                   mc_threads, mc_tail, mc_emit, *t.stream);
        } else if (*batch) {
            cmd_batch(ba_config, ba_keep, ba_out, out, err);
        }
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const size_limit_error& e) {
        err << "size-limit error: " << e.what() << "\n";
        return kExitLimit;
    } catch (const precision_error& e) {
        err << "precision error: " << e.what() << "\n";
        return kExitLimit;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}

inline int run_cli_argv(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace patternlab::cli
