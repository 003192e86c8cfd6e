#include "repdyn/cli.hpp"

#include "repdyn/domination.hpp"
#include "repdyn/flowbundle.hpp"
#include "repdyn/spectrum.hpp"

#include <cmath>
#include <iostream>

namespace repdyn::cli {

namespace {

using ojson = nlohmann::ordered_json;

int thread_count(const RunConfig& config) { return config.threads > 0 ? config.threads : default_thread_count(); }

ojson number_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

ojson vector_json(const Vec& v) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_or_null(v[i]));
    return out;
}

// Rows of an n x d basis matrix.
ojson basis_json(const Subspace& s) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < s.basis().rows(); ++i) out.push_back(vector_json(s.basis().row(i).transpose()));
    return out;
}

ojson fit_json(const LineFit& f) {
    return ojson{{"slope", number_or_null(f.slope)},
                 {"intercept", number_or_null(f.intercept)},
                 {"slope_stderr", number_or_null(f.slope_stderr)},
                 {"slope_ci", ojson::array({number_or_null(f.slope_ci_low), number_or_null(f.slope_ci_high)})},
                 {"points", f.points}};
}

std::string join_indices(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
    return out;
}

LinearInput load_linear(const RunConfig& config) { return parse_linear_input(read_file(config.input)); }

}  // namespace

// --- dominate ----------------------------------------------------------------

Report cmd_dominate(const RunConfig& config) {
    const LinearInput input = load_linear(config);
    const auto& names = input.gens.names();
    const DominationReport rep =
        domination_scan(input.gens, config.k, config.max_length, config.policy, thread_count(config));

    Report out;
    out.command = "dominate";
    ojson& r = out.result;
    r["n"] = rep.n;
    r["k"] = rep.k;
    r["max_length"] = rep.max_length;
    r["policy"] = describe(rep.policy);
    r["verdict"] = std::string(to_string(rep.verdict));
    r["fitted_rate"] = rep.gap_fit ? number_or_null(rep.fitted_rate()) : ojson(nullptr);
    r["fitted_log_constant"] = rep.gap_fit ? number_or_null(rep.fitted_log_constant()) : ojson(nullptr);
    r["gap_fit"] = rep.gap_fit ? fit_json(*rep.gap_fit) : ojson(nullptr);
    r["top_fit"] = rep.top_fit ? fit_json(*rep.top_fit) : ojson(nullptr);
    r["bottom_fit"] = rep.bottom_fit ? fit_json(*rep.bottom_fit) : ojson(nullptr);
    r["partial_hyperbolicity_applicable"] = rep.partial_hyperbolicity_applicable;
    r["violating_word"] = rep.violating_word ? ojson(rep.violating_word->to_string(names)) : ojson(nullptr);
    r["first_violation_length"] = rep.first_violation_length;
    r["ill_conditioned_words"] = rep.ill_conditioned_words;
    r["truncated"] = rep.truncated;

    CsvTable table("dominate_spheres.csv", {"L", "words", "gap_min", "gap_mean", "logak_min", "lognk1_max", "gap_argmin"});
    ojson spheres = ojson::array();
    for (const auto& s : rep.spheres) {
        const std::string argmin = s.gap_argmin.to_string(names);
        spheres.push_back({{"L", s.length},
                           {"words", s.words},
                           {"gap_min", number_or_null(s.gap_min)},
                           {"gap_mean", number_or_null(s.gap_mean)},
                           {"logak_min", number_or_null(s.log_ak_min)},
                           {"lognk1_max", number_or_null(s.log_ank1_max)},
                           {"gap_argmin", argmin}});
        table.add_row({std::to_string(s.length), std::to_string(s.words), format_double(s.gap_min),
                       format_double(s.gap_mean), format_double(s.log_ak_min), format_double(s.log_ank1_max), argmin});
    }
    r["spheres"] = spheres;
    out.tables.push_back(std::move(table));

    switch (rep.verdict) {
        case Verdict::dominated:
        case Verdict::partially_hyperbolic: out.exit_code = kExitPass; break;
        case Verdict::refuted: out.exit_code = kExitFail; break;
        case Verdict::inconclusive: out.exit_code = kExitInconclusive; break;
    }
    return out;
}

// --- spectrum ----------------------------------------------------------------

Report cmd_spectrum(const RunConfig& config) {
    const LinearInput input = load_linear(config);
    const auto& names = input.gens.names();
    const int n = input.n;
    const ConeEstimate cone = sample_cone(input.gens, config.m_max, config.policy, thread_count(config));
    const ContainmentReport contain = containment_check(cone, config.k, config.tol.value_or(kZeroIndexRelTol));
    const InvolutionReport invol = involution_symmetry_check(cone);

    Report out;
    out.command = "spectrum";
    ojson& r = out.result;
    r["n"] = n;
    r["k"] = config.k;
    r["m_max"] = cone.m_max;
    r["requested_m_max"] = cone.requested_m_max;
    r["policy"] = describe(cone.policy);
    r["truncated"] = cone.truncated;
    r["samples"] = cone.samples.size();

    std::vector<std::string> header{"m", "word"};
    for (int i = 1; i <= n; ++i) header.push_back("v" + std::to_string(i));
    header.push_back("zero_indices");
    // Normalized Cartan projection of the same word, for comparison.
    for (int i = 1; i <= n; ++i) header.push_back("c" + std::to_string(i));
    CsvTable samples("spectrum_samples.csv", header);
    double jordan_cartan_gap = 0.0;
    for (const auto& s : cone.samples) {
        std::vector<std::string> row{std::to_string(s.m), s.word.to_string(names)};
        for (int i = 0; i < n; ++i) row.push_back(format_double(s.value[i]));
        row.push_back(join_indices(s.zeros.indices));
        const WordImage image = evaluate_pair(s.word, input.gens);
        const Vec c = cartan_projection(image.value, image.inverse).values() / s.m;
        jordan_cartan_gap = std::max(jordan_cartan_gap, (c - s.value.values()).cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i) row.push_back(format_double(c[i]));
        samples.add_row(std::move(row));
    }
    r["max_jordan_cartan_difference"] = number_or_null(jordan_cartan_gap);

    header = {"m", "vertex"};
    for (int i = 1; i <= n; ++i) header.push_back("v" + std::to_string(i));
    CsvTable vertices("spectrum_hull.csv", header);
    ojson hulls = ojson::array();
    for (const auto& h : cone.hulls) {
        ojson verts = ojson::array();
        for (std::size_t v = 0; v < h.polytope.vertices.size(); ++v) {
            const Vec& p = h.polytope.vertices[v];
            verts.push_back(vector_json(p));
            std::vector<std::string> row{std::to_string(h.m), std::to_string(v)};
            for (int i = 0; i < n; ++i) row.push_back(format_double(p[i]));
            vertices.add_row(std::move(row));
        }
        hulls.push_back({{"m", h.m}, {"affine_dim", h.polytope.affine_dim}, {"vertices", verts}});
    }
    r["hulls"] = hulls;
    ojson hd = ojson::array();
    for (double d : cone.hausdorff) hd.push_back(number_or_null(d));
    r["hausdorff"] = hd;

    ojson violators = ojson::array();
    for (std::size_t i : contain.violators) {
        const auto& s = cone.samples[i];
        violators.push_back(
            {{"m", s.m}, {"word", s.word.to_string(names)}, {"value", vector_json(s.value.values())},
             {"zero_indices", s.zeros.indices}});
    }
    r["containment"] = {{"pass", contain.pass},
                        {"window", ojson::array({contain.window_low, contain.window_high})},
                        {"tol", contain.tol},
                        {"nonzero_samples", contain.nonzero_samples},
                        {"c_hat", contain.c_hat ? number_or_null(*contain.c_hat) : ojson(nullptr)},
                        {"violators", violators}};
    ojson unmatched = ojson::array();
    for (std::size_t i : invol.unmatched) {
        const auto& s = cone.samples[i];
        unmatched.push_back({{"m", s.m}, {"word", s.word.to_string(names)}, {"value", vector_json(s.value.values())}});
    }
    r["involution"] = {{"pass", invol.pass},
                       {"paired_by_word", invol.paired_by_word},
                       {"paired_by_search", invol.paired_by_search},
                       {"unmatched", unmatched}};

    out.tables.push_back(std::move(samples));
    out.tables.push_back(std::move(vertices));
    out.exit_code = contain.pass && invol.pass ? kExitPass : kExitFail;
    return out;
}

// --- split -------------------------------------------------------------------

namespace {

FlowLineWindow make_line(const LineSpec& spec, int rank, int window) {
    if (spec.period) return FlowLineWindow::periodic(*spec.period, window);
    if (spec.forward) return FlowLineWindow::from_endpoints(*spec.backward, *spec.forward, window);
    return FlowLineWindow::random(rank, window, *spec.seed);
}

FlowLineWindow sub_window(const FlowLineWindow& line, int t) {
    std::vector<Letter> letters;
    for (int i = -t; i < t; ++i) letters.push_back(line.at(i));
    return FlowLineWindow(line.rank(), std::move(letters), t);
}

struct LineOutcome {
    ojson json;
    std::vector<std::vector<std::string>> rows;
    int exit_code = kExitPass;
};

bool rates_positive(const RateReport& r) {
    return r.a_plus > 0.0 && r.a_minus > 0.0 && r.a_prime_upper > 0.0 && r.a_prime_lower > 0.0;
}

LineOutcome analyze_line(const GeneratorSet& gens, const LineSpec& spec, int k, int window) {
    LineOutcome out;
    const FlowLineWindow line = make_line(spec, gens.rank(), window);
    ojson& j = out.json;
    j["name"] = spec.name;
    j["k"] = k;
    j["window"] = window;
    try {
        const CocycleTrajectory traj(gens, line);
        j["truncated"] = traj.truncated();
        const SplittingEstimate split = estimate_splitting(traj, k);
        const RateReport rates = measure_rates(traj, split);
        const bool ok = rates_positive(rates);
        j["status"] = ok ? "ok" : "fail";
        out.exit_code = ok ? kExitPass : kExitFail;
        j["residual"] = split.residual;
        j["independence_angle"] = split.independence_angle;
        j["a_plus"] = rates.a_plus;
        j["log_A_plus"] = rates.log_A_plus;
        j["a_minus"] = rates.a_minus;
        j["log_A_minus"] = rates.log_A_minus;
        j["a_prime_upper"] = rates.a_prime_upper;
        j["log_A_prime_upper"] = rates.log_A_prime_upper;
        j["a_prime_lower"] = rates.a_prime_lower;
        j["log_A_prime_lower"] = rates.log_A_prime_lower;
        j["zero_growth"] = rates.zero_growth;
        j["bases"] = {{"v_plus", basis_json(split.v_plus)},
                      {"v_zero", basis_json(split.v_zero)},
                      {"v_minus", basis_json(split.v_minus)}};

        // Splitting change between the window [-t, t] and the full window.
        for (const auto& p : rates.curve) {
            double residual = std::nan("");
            if (p.t >= 1 && p.t <= std::min(line.past(), line.future())) {
                try {
                    const CocycleTrajectory sub(gens, sub_window(line, p.t));
                    const SplittingEstimate s = estimate_splitting(sub, k);
                    residual = std::max({subspace_distance(s.v_plus, split.v_plus),
                                         subspace_distance(s.v_zero, split.v_zero),
                                         subspace_distance(s.v_minus, split.v_minus)});
                } catch (const DegenerateGapError&) {
                }
            }
            out.rows.push_back({spec.name, std::to_string(p.t), format_double(residual),
                                format_double(p.plus_backward), format_double(p.minus_forward),
                                format_double(p.zero_forward), format_double(p.upper_ratio),
                                format_double(p.lower_ratio)});
        }
    } catch (const DegenerateGapError& e) {
        j["status"] = "degenerate";
        j["error"] = e.what();
        j["degenerate_time"] = e.time;
        out.exit_code = kExitFail;
    }

    // Largest index with a valid splitting and positive rates.
    ojson valid = ojson::array();
    int maximal = 0;
    const int n = gens.dim();
    for (int kk = 1; 2 * kk < n; ++kk) {
        try {
            const CocycleTrajectory traj(gens, line);
            const SplittingEstimate s = estimate_splitting(traj, kk);
            if (rates_positive(measure_rates(traj, s))) {
                valid.push_back(kk);
                maximal = kk;
            }
        } catch (const DegenerateGapError&) {
        }
    }
    j["valid_indices"] = valid;
    j["maximal_index"] = maximal;
    return out;
}

}  // namespace

Report cmd_split(const RunConfig& config) {
    const LinearInput input = load_linear(config);
    const int n = input.n;
    if (config.k < 1 || 2 * config.k >= n) throw PreconditionError("split needs 1 <= k < n/2");
    if (config.window < 2) throw PreconditionError("split needs --window >= 2");

    std::vector<LineSpec> lines = input.lines;
    if (lines.empty()) {
        std::vector<Letter> letters;
        for (int i = 0; i < input.gens.rank(); ++i) letters.push_back(Letter::generator(i));
        lines.push_back(LineSpec{"default", Word(input.gens.rank(), letters), {}, {}, {}});
    }

    std::vector<LineOutcome> outcomes(lines.size());
    detail::run_partitions(static_cast<int>(lines.size()), thread_count(config), [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        outcomes[idx] = analyze_line(input.gens, lines[idx], config.k, config.window);
    });

    Report out;
    out.command = "split";
    out.result["n"] = n;
    out.result["k"] = config.k;
    out.result["window"] = config.window;
    CsvTable curves("split_curves.csv", {"line", "t", "residual", "log_plus_backward", "log_minus_forward",
                                         "log_zero_forward", "log_upper_ratio", "log_lower_ratio"});
    ojson line_json = ojson::array();
    out.exit_code = kExitPass;
    for (auto& o : outcomes) {
        line_json.push_back(o.json);
        for (auto& row : o.rows) curves.add_row(std::move(row));
        if (o.exit_code != kExitPass) out.exit_code = kExitFail;
    }
    out.result["lines"] = line_json;
    out.tables.push_back(std::move(curves));
    return out;
}

// --- affine ------------------------------------------------------------------

Report cmd_affine(const RunConfig& config) {
    const LinearInput input = load_linear(config);
    const auto& names = input.gens.names();
    const AffineGeneratorSet affine = input.affine();
    const int threads = thread_count(config);
    const double tol = config.tol.value_or(kNormOneDefaultTol);
    const HksReport hks = hks_test(affine, config.max_length, config.policy, threads);
    const NormOneReport unit = eigenvalue_norm_one_check(input.gens, config.max_length, tol, config.policy, threads);
    const BoundedSingularReport bounded = bounded_singular_check(input.gens, config.max_length, config.policy, threads);

    Report out;
    out.command = "affine";
    ojson& r = out.result;
    r["n"] = input.n;
    r["max_length"] = config.max_length;
    r["policy"] = describe(config.policy);
    r["note"] =
        "eigenvalue_norm_one tests min_i |log|lambda_i|| <= tol, i.e. some eigenvalue of modulus one; "
        "translations do not enter the determinant test";
    r["hks"] = {{"pass", hks.pass},
                {"threshold", kHksTol},
                {"max_normalized", number_or_null(hks.max_normalized)},
                {"worst_word", hks.worst_word ? ojson(hks.worst_word->to_string(names)) : ojson(nullptr)},
                {"truncated", hks.truncated}};
    r["eigenvalue_norm_one"] = {
        {"pass", unit.pass},
        {"tol", unit.tol},
        {"worst", number_or_null(unit.worst)},
        {"worst_word", unit.worst_word ? ojson(unit.worst_word->to_string(names)) : ojson(nullptr)},
        {"first_failure_length", unit.first_failure_length},
        {"truncated", unit.truncated}};
    r["bounded_singular"] = {{"pass", bounded.pass},
                             {"c_hat", number_or_null(bounded.c_hat)},
                             {"fit", bounded.fit ? fit_json(*bounded.fit) : ojson(nullptr)},
                             {"truncated", bounded.truncated}};

    CsvTable table("affine_spheres.csv",
                   {"L", "words", "hks_max_normalized", "min_abs_log_eigenvalue_max", "min_abs_log_singular_max"});
    auto lookup = [](const std::vector<SphereMaximum>& v, int l) -> std::string {
        for (const auto& s : v)
            if (s.length == l) return format_double(s.max);
        return "";
    };
    for (const auto& s : hks.spheres)
        table.add_row({std::to_string(s.length), std::to_string(s.words), format_double(s.max),
                       lookup(unit.spheres, s.length), lookup(bounded.spheres, s.length)});
    out.tables.push_back(std::move(table));
    out.exit_code = hks.pass ? kExitPass : kExitFail;
    return out;
}

// --- flowmetric --------------------------------------------------------------

Report cmd_flowmetric(const RunConfig& config) {
    const FlowMetricInput input = parse_flowmetric_input(read_file(config.input));
    const int t = config.window;
    if (t < 1) throw PreconditionError("flowmetric needs --window >= 1");
    std::vector<TreeGeodesic> geos;
    for (const auto& g : input.geodesics) {
        std::vector<Letter> fwd, bwd;
        for (int i = 0; i < t; ++i) {
            fwd.push_back(g.forward.at(static_cast<std::size_t>(i)));
            bwd.push_back(g.backward.at(static_cast<std::size_t>(i)));
        }
        geos.emplace_back(g.anchor, std::move(fwd), std::move(bwd));
    }

    Report out;
    out.command = "flowmetric";
    out.result["truncation"] = t;
    ojson names = ojson::array();
    for (const auto& g : input.geodesics) names.push_back(g.name);
    out.result["geodesics"] = names;
    CsvTable table("flowmetric_matrix.csv", {"i", "j", "name_i", "name_j", "value", "tail_bound"});
    ojson matrix = ojson::array();
    ojson tails = ojson::array();
    for (std::size_t i = 0; i < geos.size(); ++i) {
        ojson row = ojson::array(), tail_row = ojson::array();
        for (std::size_t j = 0; j < geos.size(); ++j) {
            const FlowMetricValue v = flow_metric(geos[i], geos[j], t);
            row.push_back(v.value);
            tail_row.push_back(v.tail_bound);
            table.add_row({std::to_string(i), std::to_string(j), input.geodesics[i].name, input.geodesics[j].name,
                           format_double(v.value), format_double(v.tail_bound)});
        }
        matrix.push_back(row);
        tails.push_back(tail_row);
    }
    out.result["matrix"] = matrix;
    out.result["tail_bounds"] = tails;
    out.tables.push_back(std::move(table));
    out.exit_code = kExitPass;
    return out;
}

// --- dispatch ----------------------------------------------------------------

int run(const RunConfig& config) {
    const std::string input_name = config.input.string();
    try {
        Report report;
        if (config.command == "dominate") report = cmd_dominate(config);
        else if (config.command == "spectrum") report = cmd_spectrum(config);
        else if (config.command == "split") report = cmd_split(config);
        else if (config.command == "affine") report = cmd_affine(config);
        else if (config.command == "flowmetric") report = cmd_flowmetric(config);
        else throw PreconditionError("unknown command \"" + config.command + "\"");
        const auto written = write_report(config, report);
        if (!config.quiet) {
            std::cout << report.command << ": exit " << report.exit_code;
            if (report.result.contains("verdict")) std::cout << " (" << report.result["verdict"].get<std::string>() << ")";
            std::cout << "\n";
            for (const auto& p : written) std::cout << "  wrote " << p.string() << "\n";
        }
        return report.exit_code;
    } catch (const InputError& e) {
        std::cerr << e.diagnostic(input_name) << "\n";
        return kExitUsage;
    } catch (const DegenerateGapError& e) {
        std::cerr << "repdyn: degenerate singular gap: " << e.what() << "\n";
        return kExitFail;
    } catch (const PreconditionError& e) {
        std::cerr << "repdyn: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SizeError& e) {
        std::cerr << "repdyn: " << e.what() << "\n";
        return kExitUsage;
    } catch (const WindowBoundsError& e) {
        std::cerr << "repdyn: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "repdyn: numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace repdyn::cli
