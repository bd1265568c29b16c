// freeframe: construct, evaluate and numerically certify the cloned frame of
// the reduced free-group C*-algebra on finitely supported elements.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "freeframe/io.hpp"
#include "freeframe/verify.hpp"

namespace ff = freeframe;

namespace {

struct RunConfig {
    int radius = 8;
    double tol = 1e-8;
    std::uint64_t seed = ff::kDefaultSeed;
    unsigned threads = 1;
    std::string format = "csv";
    std::string output;
    bool pretty_identity = false;
    int max_radius = ff::kDefaultRadiusCap;

    void validate() const {
        if (radius < 0) throw ff::input_error("--radius must be nonnegative");
        if (!(tol > 0)) throw ff::input_error("--tol must be positive");
        if (threads < 1) throw ff::input_error("--threads must be >= 1");
        if (format != "csv" && format != "json") throw ff::input_error("--format must be csv or json");
    }

    std::string word_str(const ff::Word& w) const { return w.str(pretty_identity); }
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void emit(const RunConfig& cfg, const std::string& payload) {
    if (cfg.output.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ff::input_error("cannot open output file: " + cfg.output);
    out << payload;
}

// m-list / n-list tokens: plain decimal indices, or B<k> for the block-k
// boundary (e.g. B2 = 5038).
ff::uint128 parse_index_token(const std::string& tok) {
    if (!tok.empty() && (tok[0] == 'B' || tok[0] == 'b')) {
        int k = 0;
        try {
            k = std::stoi(tok.substr(1));
        } catch (...) {
            throw ff::input_error("bad boundary token: " + tok);
        }
        return ff::frame_boundary(k);
    }
    return ff::parse_uint128(tok);
}

std::vector<ff::uint128> parse_index_list(const std::string& list) {
    std::vector<ff::uint128> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(parse_index_token(tok));
    }
    if (out.empty()) throw ff::input_error("empty index list");
    return out;
}

std::string estimate_json(const ff::NormEstimate& e) {
    ff::json j{{"lower", e.lower}, {"upper", e.upper}, {"radius", e.radius}, {"iterations", e.iterations}};
    return j.dump() + "\n";
}

std::string estimate_csv(const ff::NormEstimate& e) {
    return "radius,lower,upper,iterations\n" + std::to_string(e.radius) + "," +
           ff::format_double(e.lower) + "," + ff::format_double(e.upper) + "," +
           std::to_string(e.iterations) + "\n";
}

int run_frame_table(const RunConfig& cfg, std::uint64_t max_n) {
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "n,k,p,j,word,a_n\n";
        for (std::uint64_t n = 1; n <= max_n; ++n) {
            ff::FrameIndex idx = ff::frame_decompose(n);
            ff::FrameTerm t = ff::frame_term(n);
            os << n << "," << idx.k << "," << ff::to_string(idx.p) << "," << idx.j << ","
               << csv_field(cfg.word_str(t.word)) << "," << ff::format_double(t.coefficient) << "\n";
        }
    } else {
        ff::json rows = ff::json::array();
        for (std::uint64_t n = 1; n <= max_n; ++n) {
            ff::FrameIndex idx = ff::frame_decompose(n);
            ff::FrameTerm t = ff::frame_term(n);
            rows.push_back({{"n", n},
                            {"k", idx.k},
                            {"p", ff::to_string(idx.p)},
                            {"j", idx.j},
                            {"word", cfg.word_str(t.word)},
                            {"a_n", t.coefficient}});
        }
        os << rows.dump() << "\n";
    }
    emit(cfg, os.str());
    return 0;
}

int run_reconstruct(const RunConfig& cfg, const std::string& file, const std::string& mlist) {
    ff::GroupAlgebraElement x = ff::scalar_element_from_json(ff::load_json_file(file));
    std::vector<ff::uint128> ms = parse_index_list(mlist);
    std::ostringstream os;
    ff::json rows = ff::json::array();
    if (cfg.format == "csv") os << "m,l1_error,norm_lower,norm_upper\n";
    for (ff::uint128 m : ms) {
        double l1w = 0;
        for (const auto& [w, c] : x.terms()) l1w += std::abs(c) * (1.0 - ff::partial_sum_weight(m, w));
        ff::NormEstimate e = ff::reconstruction_error(x, m, cfg.radius, cfg.tol, cfg.seed,
                                                      ff::kDefaultMaxIter, cfg.max_radius);
        if (cfg.format == "csv")
            os << ff::to_string(m) << "," << ff::format_double(l1w) << ","
               << ff::format_double(e.lower) << "," << ff::format_double(e.upper) << "\n";
        else
            rows.push_back({{"m", ff::to_string(m)},
                            {"l1_error", l1w},
                            {"norm_lower", e.lower},
                            {"norm_upper", e.upper}});
    }
    if (cfg.format == "json") os << rows.dump() << "\n";
    emit(cfg, os.str());
    return 0;
}

int run_norm(const RunConfig& cfg, const std::string& file, const std::string& radius_list) {
    ff::json j = ff::load_json_file(file);
    int level = j.value("level", 1);
    std::vector<int> radii;
    if (radius_list.empty()) {
        radii.push_back(cfg.radius);
    } else {
        std::stringstream ss(radius_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            int r = std::stoi(tok);
            if (r < 0) throw ff::input_error("radius must be nonnegative");
            radii.push_back(r);
        }
        if (radii.empty()) throw ff::input_error("empty radius list");
    }

    auto estimate_at = [&](int r) {
        if (level == 1)
            return ff::norm_interval(ff::scalar_element_from_json(j), r, cfg.tol, cfg.seed,
                                     ff::kDefaultMaxIter, cfg.max_radius);
        return ff::matrix_level_norm(ff::matrix_element_from_json(j), r, cfg.tol, cfg.seed,
                                     ff::kDefaultMaxIter, cfg.max_radius);
    };

    std::ostringstream os;
    if (radii.size() == 1 && radius_list.empty() && cfg.format == "json") {
        os << estimate_json(estimate_at(radii[0]));  // single interval document
    } else if (cfg.format == "json") {
        ff::json rows = ff::json::array();
        for (int r : radii) {
            ff::NormEstimate e = estimate_at(r);
            rows.push_back({{"radius", e.radius},
                            {"lower", e.lower},
                            {"upper", e.upper},
                            {"iterations", e.iterations}});
        }
        os << rows.dump() << "\n";
    } else {
        os << "radius,lower,upper,iterations\n";
        for (int r : radii) {
            ff::NormEstimate e = estimate_at(r);
            os << e.radius << "," << ff::format_double(e.lower) << "," << ff::format_double(e.upper)
               << "," << e.iterations << "\n";
        }
    }
    emit(cfg, os.str());
    return 0;
}

int run_params(const RunConfig& cfg, int k_max) {
    if (k_max < 1) throw ff::input_error("--k-max must be >= 1");
    std::ostringstream os;
    ff::json rows = ff::json::array();
    if (cfg.format == "csv") os << "k,t_k,m_k,tail,cb_defect,sup_bound\n";
    double running = 0;
    for (int k = 1; k <= k_max; ++k) {
        double t = 1.0 / std::sqrt(static_cast<double>(k));
        double tail = ff::tail_sum_closed_form(t, k);
        double defect = ff::cb_defect_upper(t, k);
        running = std::max(running, defect);
        double sup_bound = 1.0 + running;
        if (cfg.format == "csv")
            os << k << "," << ff::format_double(t) << "," << k << "," << ff::format_double(tail)
               << "," << ff::format_double(defect) << "," << ff::format_double(sup_bound) << "\n";
        else
            rows.push_back({{"k", k},
                            {"t_k", t},
                            {"m_k", k},
                            {"tail", tail},
                            {"cb_defect", defect},
                            {"sup_bound", sup_bound}});
    }
    if (cfg.format == "json") os << rows.dump() << "\n";
    emit(cfg, os.str());
    return 0;
}

int run_lebesgue(const RunConfig& cfg, int max_K) {
    if (max_K < 1) throw ff::input_error("--max-K must be >= 1");
    std::ostringstream os;
    ff::json rows = ff::json::array();
    if (cfg.format == "csv") os << "K,L_K\n";
    for (int K = 1; K <= max_K; ++K) {
        ff::LebesgueEstimate est = ff::lebesgue_constant(K);
        if (!est.converged) std::cerr << "warning: quadrature did not converge at K=" << K << "\n";
        if (cfg.format == "csv")
            os << K << "," << ff::format_double(est.value) << "\n";
        else
            rows.push_back({{"K", K}, {"L_K", est.value}});
    }
    if (cfg.format == "json") os << rows.dump() << "\n";
    emit(cfg, os.str());
    return 0;
}

int run_basis_norm(const RunConfig& cfg, const std::string& file, int level_flag, bool unconditional) {
    ff::CoefficientSequence u = ff::coefficient_sequence_from_json(ff::load_json_file(file));
    if (level_flag > 0 && level_flag != u.level)
        throw ff::input_error("--level disagrees with the level in the coefficients file");
    ff::NormEstimate e = unconditional
                             ? ff::unconditional_triple_norm(u, cfg.radius, cfg.tol, cfg.seed,
                                                             ff::kDefaultMaxIter, cfg.max_radius)
                             : ff::triple_norm(u, cfg.radius, cfg.tol, cfg.seed, ff::kDefaultMaxIter,
                                               cfg.max_radius);
    emit(cfg, cfg.format == "json" ? estimate_json(e) : estimate_csv(e));
    return 0;
}

int run_qt_check(const RunConfig& cfg, const std::string& file, const std::string& nlist) {
    ff::GroupAlgebraElement x = ff::scalar_element_from_json(ff::load_json_file(file));
    std::vector<ff::uint128> ns = parse_index_list(nlist);
    std::ostringstream os;
    ff::json rows = ff::json::array();
    if (cfg.format == "csv") os << "N,residual\n";
    for (ff::uint128 n : ns) {
        double res = ff::qt_identity_check(x, n);
        if (cfg.format == "csv")
            os << ff::to_string(n) << "," << ff::format_double(res) << "\n";
        else
            rows.push_back({{"N", ff::to_string(n)}, {"residual", res}});
    }
    if (cfg.format == "json") os << rows.dump() << "\n";
    emit(cfg, os.str());
    return 0;
}

int run_verify(const RunConfig& cfg, bool format_set) {
    ff::VerificationReport rep = ff::run_verification(cfg.seed, cfg.threads);
    if (cfg.format == "json") {
        ff::json rows = ff::json::array();
        for (const auto& r : rep.results)
            rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        emit(cfg, ff::json{{"criteria", rows}, {"pass", rep.all_pass}}.dump() + "\n");
    } else if (format_set) {
        std::ostringstream os;
        os << "id,pass,name,detail\n";
        for (const auto& r : rep.results)
            os << r.id << "," << (r.pass ? "true" : "false") << "," << csv_field(r.name) << ","
               << csv_field(r.detail) << "\n";
        emit(cfg, os.str());
    } else {
        emit(cfg, rep.text);
    }
    return rep.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());

    CLI::App app{"frame construction and certified norm estimation for the reduced free-group C*-algebra"};
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config");
    app.add_option("--radius", cfg.radius, "truncation ball radius");
    app.add_option("--tol", cfg.tol, "iteration tolerance");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--threads", cfg.threads, "worker threads")->envname("FREEFRAME_THREADS");
    app.add_option("--format", cfg.format, "output format: csv or json");
    app.add_option("--output", cfg.output, "write output to a file instead of stdout");
    app.add_option("--max-radius", cfg.max_radius, "enumeration capacity cap");
    app.add_flag("--pretty-identity", cfg.pretty_identity, "emit the identity word as 'e'");
    app.require_subcommand(1);

    std::uint64_t max_n = 10;
    auto* sc_table = app.add_subcommand("frame-table", "list frame terms (n, k, p, j, word, a_n)");
    sc_table->add_option("--max-n", max_n, "number of leading terms")->required();

    std::string element_file, m_list;
    auto* sc_rec = app.add_subcommand("reconstruct", "reconstruction error of partial sums");
    sc_rec->add_option("--element", element_file, "element JSON file")->required();
    sc_rec->add_option("--m-list", m_list, "comma-separated term counts (B<k> = block boundary)")->required();

    std::string norm_file, radius_list;
    auto* sc_norm = app.add_subcommand("norm", "certified norm interval of an element");
    sc_norm->add_option("--element", norm_file, "element JSON file")->required();
    sc_norm->add_option("--radius-list", radius_list, "comma-separated radii for a sweep");

    int k_max = 64;
    auto* sc_params = app.add_subcommand("params", "schedule table (k, t_k, m_k, tail, cb_defect, sup bound)");
    sc_params->add_option("--k-max", k_max, "largest block");

    int max_K = 16;
    auto* sc_leb = app.add_subcommand("lebesgue", "Lebesgue constants of the rearranged band sums");
    sc_leb->add_option("--max-K", max_K, "largest partial-sum order")->required();

    std::string coeffs_file;
    int level_flag = 0;
    bool unconditional = false;
    auto* sc_basis = app.add_subcommand("basis-norm", "prefix norm of a coefficient sequence");
    sc_basis->add_option("--coeffs", coeffs_file, "coefficient sequence JSON file")->required();
    sc_basis->add_option("--level", level_flag, "expected matrix level (checked against the file)");
    sc_basis->add_flag("--unconditional", unconditional, "max over subsets instead of prefixes");

    std::string qt_file, n_list;
    auto* sc_qt = app.add_subcommand("qt-check", "l1 residual of the truncated QT identity");
    sc_qt->add_option("--element", qt_file, "element JSON file")->required();
    sc_qt->add_option("--n-list", n_list, "comma-separated truncation lengths (B<k> = block boundary)")->required();

    auto* sc_verify = app.add_subcommand("verify", "run the full verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        bool format_set = app.count("--format") > 0;
        if (!format_set && (sc_norm->parsed() || sc_basis->parsed())) cfg.format = "json";
        cfg.validate();
        if (sc_table->parsed()) return run_frame_table(cfg, max_n);
        if (sc_rec->parsed()) return run_reconstruct(cfg, element_file, m_list);
        if (sc_norm->parsed()) return run_norm(cfg, norm_file, radius_list);
        if (sc_params->parsed()) return run_params(cfg, k_max);
        if (sc_leb->parsed()) return run_lebesgue(cfg, max_K);
        if (sc_basis->parsed()) return run_basis_norm(cfg, coeffs_file, level_flag, unconditional);
        if (sc_qt->parsed()) return run_qt_check(cfg, qt_file, n_list);
        if (sc_verify->parsed()) return run_verify(cfg, format_set);
        throw ff::input_error("no subcommand given");
    } catch (const ff::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const ff::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
