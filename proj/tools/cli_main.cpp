// Command-line front end: quoting, conversion between market representations,
// axiom checking, scoring, and level-set/surface grid export.
//
// Exit codes: 0 ok, 1 axiom failure, 2 domain/numeric error, 3 spec error.
// Machine output goes to stdout, diagnostics to stderr.

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "levelset/axioms.hpp"
#include "levelset/factory.hpp"
#include "levelset/market.hpp"
#include "levelset/rng.hpp"
#include "levelset/scoring.hpp"
#include "levelset/transforms.hpp"

namespace {

using levelset::Bundle;
using levelset::MarketSpec;
using nlohmann::ordered_json;

constexpr int kExitAxiomFailure = 1;
constexpr int kExitDomainError = 2;
constexpr int kExitSpecError = 3;

Bundle parse_csv_bundle(const std::string& text) {
    Bundle out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw levelset::SpecError("cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw levelset::SpecError("empty bundle");
    return out;
}

std::vector<double> parse_csv_doubles(const std::string& text) { return parse_csv_bundle(text); }

MarketSpec load_spec(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path);
        if (!in) throw levelset::SpecError("cannot open spec file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return levelset::market_spec_from_string(text);
}

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw levelset::SpecError("cannot open output file '" + out_path + "'");
    out << payload;
}

ordered_json quote_to_json(const levelset::Quote& q, bool valid, double residual) {
    ordered_json j;
    j["valid"] = valid;
    j["residual"] = residual;
    j["requested"] = q.requested;
    j["accepted_trade"] = q.accepted_trade;
    j["fee"] = q.fee;
    if (q.cash_leg)
        j["cash_leg"] = *q.cash_leg;
    else
        j["cash_leg"] = nullptr;
    j["pre_reserves"] = q.pre_reserves;
    j["post_reserves"] = q.post_reserves;
    j["pre_level"] = q.pre_level;
    j["post_level"] = q.post_level;
    return j;
}

levelset::Market build_market(const MarketSpec& spec) {
    levelset::MarketBuild build = levelset::make_market(spec);
    for (const std::string& w : build.warnings) std::cerr << "warning: " << w << "\n";
    return std::move(build.market);
}

// ---------------------------------------------------------------------------
// quote

int cmd_quote(const std::string& spec_path, const std::string& reserves_csv,
              const std::string& bundle_csv, double tol, const std::string& out_path) {
    MarketSpec spec = load_spec(spec_path);
    if (!reserves_csv.empty()) spec.initial_reserves = parse_csv_bundle(reserves_csv);
    levelset::validate(spec);
    levelset::Market market = build_market(spec);
    Bundle bundle = parse_csv_bundle(bundle_csv);
    if (static_cast<int>(bundle.size()) != spec.n)
        throw levelset::SpecError("bundle length does not match spec n");

    ordered_json j;
    if (spec.representation == levelset::Representation::Cost) {
        levelset::Quote quote = market.quote_securities(bundle);
        j = quote_to_json(quote, true, 0.0);
    } else {
        Bundle post = levelset::add(market.reserves(), bundle);
        double residual = market.potential().in_domain(post)
                              ? market.potential()(post) - market.level()
                              : std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(residual) && std::abs(residual) <= market.validation_tolerance()) {
            levelset::Quote quote = market.apply(bundle).second;
            j = quote_to_json(quote, true, residual);
            // Perspective markets expose the announced-level verification a
            // trader would run against the implicit potential.
            if (market.perspective_base()) {
                bool ok = levelset::verify_implicit_trade(
                    *market.perspective_base(), quote.pre_reserves, quote.accepted_trade,
                    quote.pre_level, quote.post_level, market.gamma(), tol);
                j["implicit_check"] = {{"alpha", quote.pre_level},
                                       {"alpha_prime", quote.post_level},
                                       {"tol", tol},
                                       {"accepted", ok}};
            }
        } else {
            levelset::Quote quote;
            quote.requested = bundle;
            quote.pre_reserves = market.reserves();
            quote.pre_level = market.level();
            quote.post_level = market.level();
            quote.post_reserves = market.reserves();
            j = quote_to_json(quote, false, residual);
        }
    }
    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// convert

struct Agreement {
    std::string reference;
    int points = 0;
    double max_abs_err = 0.0;
};

ordered_json agreement_json(const Agreement& a) {
    return {{"reference", a.reference}, {"points", a.points}, {"max_abs_err", a.max_abs_err}};
}

// On-level sample points of a potential, found along rays through 1 +
// direction noise.
std::vector<Bundle> sample_level_points(const levelset::PotentialFunction& phi, double level,
                                        int count, std::uint64_t seed) {
    levelset::Rng rng(seed);
    std::vector<Bundle> points;
    for (int t = 0; t < count; ++t) {
        Bundle direction(phi.n);
        for (double& d : direction) d = rng.log_uniform(0.3, 3.0);
        auto along = [&](double s) {
            Bundle x = levelset::scale(s, direction);
            try {
                return phi(x);
            } catch (const levelset::DomainError&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        try {
            double s = levelset::solve_monotone(along, level, 1e-6, 2.0,
                                                levelset::Direction::Increasing, {},
                                                {0.0, std::nullopt});
            points.push_back(levelset::scale(s, direction));
        } catch (const levelset::BracketError&) {
            continue;
        }
    }
    return points;
}

Agreement cost_agreement(const MarketSpec& source, const levelset::PotentialFunction& phi,
                         const levelset::CostFunction& converted) {
    Agreement agreement;
    levelset::Rng rng(20240901);
    auto [head, arg] = levelset::split_family(source.family);
    double level = converted.params.count("level") ? converted.params.at("level") : 0.0;

    if (head == "uniswap" && source.n == 2) {
        agreement.reference = "closed-form constant-product cost";
        levelset::CostFunction closed = levelset::uniswap_cost(level);
        for (int t = 0; t < 20; ++t) {
            Bundle q = rng.signed_bundle(2, 0.05, 3.0);
            agreement.max_abs_err =
                std::max(agreement.max_abs_err, std::abs(converted(q) - closed(q)));
            ++agreement.points;
        }
        return agreement;
    }
    if (head == "perspective-of" && arg.rfind("lmsr", 0) == 0) {
        agreement.reference = "liquidity-scaled lmsr cost";
        double b = source.param_or("b", 1.0);
        levelset::CostFunction base = levelset::lmsr(source.n, b);
        for (int t = 0; t < 20; ++t) {
            Bundle q = rng.signed_bundle(source.n, 0.05, 3.0);
            double scaled = level * base(levelset::scale(1.0 / level, q));
            agreement.max_abs_err =
                std::max(agreement.max_abs_err, std::abs(converted(q) - scaled));
            ++agreement.points;
        }
        return agreement;
    }

    agreement.reference = "level-set residual";
    for (const Bundle& x : sample_level_points(phi, level, 20, 20240902)) {
        agreement.max_abs_err =
            std::max(agreement.max_abs_err, std::abs(converted(levelset::negate(x))));
        ++agreement.points;
    }
    return agreement;
}

Agreement perspective_agreement(const MarketSpec& source,
                                const levelset::PotentialFunction& converted) {
    Agreement agreement;
    levelset::Rng rng(20240903);
    auto [head, arg] = levelset::split_family(source.family);
    (void)arg;

    if (head == "brier") {
        agreement.reference = "geometric-plus-arithmetic-mean closed form";
        for (int t = 0; t < 20; ++t) {
            Bundle q = rng.positive_bundle(2, 0.05, 5.0);
            double closed = std::sqrt(q[0] * q[1]) + 0.5 * (q[0] + q[1]);
            agreement.max_abs_err =
                std::max(agreement.max_abs_err, std::abs(converted(q) - closed));
            ++agreement.points;
        }
        return agreement;
    }
    if (head == "uniswap-cost") {
        agreement.reference = "scaled geometric mean closed form";
        double k = source.param("k");
        for (int t = 0; t < 20; ++t) {
            Bundle q = rng.positive_bundle(2, 0.05, 5.0);
            double closed = std::sqrt(q[0] * q[1]) / k;
            agreement.max_abs_err =
                std::max(agreement.max_abs_err, std::abs(converted(q) - closed));
            ++agreement.points;
        }
        return agreement;
    }
    if (head == "lmsr") {
        agreement.reference = "implicit level-set residual";
        double b = source.param("b");
        for (int t = 0; t < 20; ++t) {
            Bundle q = rng.positive_bundle(source.n, 0.05, 5.0);
            double alpha = converted(q);
            double sum = 0.0;
            for (double qi : q) sum += std::exp(-qi / (alpha * b));
            agreement.max_abs_err = std::max(agreement.max_abs_err, std::abs(sum - 1.0));
            ++agreement.points;
        }
        return agreement;
    }

    agreement.reference = "defining identity C(-q/phi(q)) = 0";
    levelset::CostFunction base = levelset::make_cost(source);
    for (int t = 0; t < 20; ++t) {
        Bundle q = rng.positive_bundle(source.n, 0.05, 5.0);
        double alpha = converted(q);
        agreement.max_abs_err = std::max(
            agreement.max_abs_err, std::abs(base(levelset::scale(-1.0 / alpha, q))));
        ++agreement.points;
    }
    return agreement;
}

int cmd_convert(const std::string& spec_path, const std::string& direction,
                const std::string& out_path) {
    MarketSpec source = load_spec(spec_path);
    ordered_json j;
    j["source_family"] = source.family;
    j["direction"] = direction;

    if (direction == "to-cost") {
        if (source.representation != levelset::Representation::Potential)
            throw levelset::SpecError("to-cost expects a potential-representation spec");
        levelset::PotentialFunction phi = levelset::make_potential(source);
        if (!phi.in_domain(source.initial_reserves))
            throw levelset::DomainError("initial reserves outside the family domain");
        levelset::CostFunction C = levelset::cost_from_potential(phi, source.initial_reserves);

        MarketSpec converted = source;
        converted.representation = levelset::Representation::Cost;
        converted.family = "from-potential:" + source.family;
        converted.params["level"] = C.params.at("level");
        j["spec"] = to_json(converted);
        j["agreement"] = agreement_json(cost_agreement(source, phi, C));
    } else if (direction == "to-potential") {
        if (source.representation != levelset::Representation::Cost)
            throw levelset::SpecError("to-potential expects a cost-representation spec");
        levelset::CostFunction C = levelset::make_cost(source);
        levelset::PotentialFunction phi = levelset::potential_from_cost(C);

        MarketSpec converted = source;
        converted.representation = levelset::Representation::Potential;
        converted.family = "from-cost:" + source.family;
        j["spec"] = to_json(converted);

        Agreement agreement;
        agreement.reference = "negation identity phi(q) = -C(-q)";
        levelset::Rng rng(20240904);
        for (int t = 0; t < 20; ++t) {
            Bundle q = rng.signed_bundle(source.n, 0.05, 5.0);
            agreement.max_abs_err =
                std::max(agreement.max_abs_err, std::abs(phi(q) + C(levelset::negate(q))));
            ++agreement.points;
        }
        j["agreement"] = agreement_json(agreement);
    } else if (direction == "to-perspective") {
        if (source.representation != levelset::Representation::Cost)
            throw levelset::SpecError("to-perspective expects a cost-representation spec");
        levelset::CostFunction C = levelset::make_cost(source);
        levelset::PotentialFunction phi =
            levelset::perspective_potential(C, source.param_or("shift", 0.0));

        MarketSpec converted = source;
        converted.representation = levelset::Representation::Potential;
        converted.family = "perspective-of:" + source.family;
        if (!levelset::is_strictly_positive(converted.initial_reserves)) {
            converted.initial_reserves = Bundle(source.n, 1.0);
            j["initial_reserves_reset"] = true;
        }
        j["spec"] = to_json(converted);
        j["agreement"] = agreement_json(perspective_agreement(source, phi));
    } else if (direction == "to-scoring") {
        levelset::ScoringRule rule = levelset::make_rule(source);
        j["rule"] = {{"family", rule.family}, {"params", rule.params}, {"n", rule.n}};
        ordered_json samples = ordered_json::array();
        for (double p1 : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            levelset::SimplexPoint p({p1, 1.0 - p1});
            samples.push_back({{"report", p.p},
                               {"scores", {rule(p, 0), rule(p, 1)}}});
        }
        j["samples"] = samples;

        Agreement agreement;
        if (levelset::split_family(source.family).first == "uniswap") {
            agreement.reference = "closed-form boosting-style rule";
            levelset::PotentialFunction phi = levelset::make_potential(source);
            double level = phi(source.initial_reserves);
            levelset::ScoringRule closed = levelset::uniswap_score(level);
            for (double p1 : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9}) {
                levelset::SimplexPoint p({p1, 1.0 - p1});
                for (int outcome = 0; outcome < 2; ++outcome) {
                    agreement.max_abs_err = std::max(agreement.max_abs_err,
                                                     std::abs(rule(p, outcome) - closed(p, outcome)));
                    ++agreement.points;
                }
            }
        } else {
            agreement.reference = "properness grid";
            levelset::PropernessReport prop = levelset::check_properness(rule, 20, 201, 7);
            agreement.points = prop.beliefs;
            agreement.max_abs_err = prop.max_cell_gap;
            if (!prop.proper) throw levelset::ToleranceError("derived rule failed properness grid");
        }
        j["agreement"] = agreement_json(agreement);
    } else {
        throw levelset::SpecError("unknown direction '" + direction +
                                  "' (to-cost|to-potential|to-perspective|to-scoring)");
    }

    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// grid

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;
};

AxisRange parse_range(const std::string& text) {
    AxisRange r;
    std::stringstream ss(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw levelset::SpecError("range must be lo:hi:steps");
    r.lo = std::stod(parts[0]);
    r.hi = std::stod(parts[1]);
    r.steps = std::stoi(parts[2]);
    if (r.steps < 2) throw levelset::SpecError("range needs at least 2 steps");
    if (!(r.lo < r.hi)) throw levelset::SpecError("range requires lo < hi");
    return r;
}

int cmd_grid(const std::string& spec_path, const std::string& mode, const std::string& xrange,
             const std::string& yrange, const std::string& levels_csv, int rays,
             const std::string& out_path) {
    MarketSpec spec = load_spec(spec_path);
    if (spec.n != 2) throw levelset::SpecError("grid export covers two-asset markets");
    levelset::PotentialFunction phi = spec.representation == levelset::Representation::Potential
                                          ? levelset::make_potential(spec)
                                          : levelset::potential_from_cost(levelset::make_cost(spec));

    std::ostringstream csv;
    csv.precision(12);

    if (mode == "surface") {
        AxisRange xr = parse_range(xrange);
        AxisRange yr = parse_range(yrange);
        if (phi.domain == levelset::Domain::PositiveOrthant && (xr.lo <= 0.0 || yr.lo <= 0.0))
            throw levelset::DomainError("surface range leaves the strictly positive orthant");
        csv << "q1,q2,phi\n";
        for (int i = 0; i < xr.steps; ++i) {
            double q1 = xr.lo + (xr.hi - xr.lo) * i / (xr.steps - 1);
            for (int j = 0; j < yr.steps; ++j) {
                double q2 = yr.lo + (yr.hi - yr.lo) * j / (yr.steps - 1);
                csv << q1 << "," << q2 << "," << phi({q1, q2}) << "\n";
            }
        }
    } else if (mode == "levels") {
        std::vector<double> levels = levels_csv.empty()
                                         ? std::vector<double>{0.2, 0.6, 1.0, 1.4, 1.8}
                                         : parse_csv_doubles(levels_csv);
        if (rays < 2) throw levelset::SpecError("levels mode needs at least 2 rays");
        csv << "level,ray,q1,q2\n";
        const double half_pi = 2.0 * std::atan(1.0);
        for (double level : levels) {
            for (int r = 0; r < rays; ++r) {
                double theta = half_pi * (r + 0.5) / rays;
                Bundle d{std::cos(theta), std::sin(theta)};
                auto along = [&](double t) {
                    try {
                        return phi(levelset::scale(t, d));
                    } catch (const levelset::DomainError&) {
                        return std::numeric_limits<double>::quiet_NaN();
                    }
                };
                double t = levelset::solve_monotone(along, level, 1e-9, 2.0,
                                                    levelset::Direction::Increasing, {},
                                                    {0.0, std::nullopt});
                csv << level << "," << r << "," << t * d[0] << "," << t * d[1] << "\n";
            }
        }
    } else {
        throw levelset::SpecError("unknown grid mode '" + mode + "' (surface|levels)");
    }

    write_output(out_path, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& spec_path, int trials, std::uint64_t seed, bool characterize,
              const std::string& out_path) {
    MarketSpec spec = load_spec(spec_path);
    levelset::Market market = build_market(spec);
    levelset::AxiomSuite suite = levelset::run_axiom_suite(market, trials, seed);

    ordered_json j = to_json(suite);
    bool failed = !suite.all_passed;
    if (characterize) {
        levelset::AxiomReport characterization =
            levelset::check_reserve_characterization(market.potential(), trials, seed + 100);
        j["reserve_characterization"] = to_json(characterization);
        failed = failed || characterization.failed();
    }
    write_output(out_path, j.dump(2) + "\n");
    return failed ? kExitAxiomFailure : 0;
}

// ---------------------------------------------------------------------------
// score

int cmd_score(const std::string& rule_name, double k, const std::string& report_csv, int outcome,
              const std::string& out_path) {
    levelset::ScoringRule rule = [&]() {
        if (rule_name == "brier") return levelset::brier(2);
        if (rule_name == "log") return levelset::log_score(2);
        if (rule_name == "uniswap") return levelset::uniswap_score(k);
        throw levelset::SpecError("unknown rule '" + rule_name + "' (brier|log|uniswap)");
    }();
    std::vector<double> probs = parse_csv_doubles(report_csv);
    levelset::SimplexPoint p(probs);
    if (outcome < 1 || outcome > p.n())
        throw levelset::SpecError("outcome index out of range (1-based)");
    double s = rule(p, outcome - 1);
    std::ostringstream os;
    os.precision(17);
    os << s << "\n";
    write_output(out_path, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-function market makers and cost-function prediction markets"};
    app.require_subcommand(1);

    std::string spec_path, reserves_csv, bundle_csv, out_path;
    std::string direction, mode = "surface", xrange, yrange, levels_csv;
    std::string rule_name, report_csv;
    double k = 1.0;
    int outcome = 1;
    int trials = 1000;
    int rays = 64;
    std::uint64_t seed = 42;
    bool characterize = false;
    double tol = 1e-9;

    CLI::App* quote = app.add_subcommand("quote", "Quote a trade bundle against a market spec");
    quote->add_option("--spec", spec_path, "Market spec path, or - for stdin")->required();
    quote->add_option("--reserves", reserves_csv, "Override initial reserves (CSV)");
    quote->add_option("--bundle", bundle_csv, "Trade bundle, net transfer to the market (CSV)")
        ->required();
    quote->add_option("--tol", tol, "Announced-level verification tolerance");
    quote->add_option("--out", out_path, "Output path (stdout default)");

    CLI::App* convert = app.add_subcommand("convert", "Convert a market between representations");
    convert->add_option("--spec", spec_path, "Market spec path, or - for stdin")->required();
    convert
        ->add_option("--direction", direction,
                     "to-cost | to-potential | to-perspective | to-scoring")
        ->required();
    convert->add_option("--out", out_path, "Output path (stdout default)");

    CLI::App* grid = app.add_subcommand("grid", "Export level-set polylines or a surface grid");
    grid->add_option("--spec", spec_path, "Market spec path, or - for stdin")->required();
    grid->add_option("--mode", mode, "surface | levels");
    grid->add_option("--x", xrange, "Asset-1 range lo:hi:steps (surface mode)");
    grid->add_option("--y", yrange, "Asset-2 range lo:hi:steps (surface mode)");
    grid->add_option("--levels", levels_csv, "Levels CSV (levels mode)");
    grid->add_option("--rays", rays, "Rays per level polyline (levels mode)");
    grid->add_option("--out", out_path, "Output path (stdout default)");

    CLI::App* check = app.add_subcommand("check", "Run the randomized axiom suite");
    check->add_option("--spec", spec_path, "Market spec path, or - for stdin")->required();
    check->add_option("--trials", trials, "Trials per axiom");
    check->add_option("--seed", seed, "Random seed");
    check->add_flag("--characterize", characterize,
                    "Also check the bounded-reserves characterization conditions");
    check->add_option("--out", out_path, "Output path (stdout default)");

    CLI::App* score = app.add_subcommand("score", "Evaluate a scoring rule");
    score->add_option("--rule", rule_name, "brier | log | uniswap")->required();
    score->add_option("--k", k, "Level parameter for the uniswap rule");
    score->add_option("--report", report_csv, "Probability report (CSV)")->required();
    score->add_option("--outcome", outcome, "Realized outcome (1-based)")->required();
    score->add_option("--out", out_path, "Output path (stdout default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitSpecError;
    }

    try {
        if (app.got_subcommand(quote))
            return cmd_quote(spec_path, reserves_csv, bundle_csv, tol, out_path);
        if (app.got_subcommand(convert)) return cmd_convert(spec_path, direction, out_path);
        if (app.got_subcommand(grid))
            return cmd_grid(spec_path, mode, xrange, yrange, levels_csv, rays, out_path);
        if (app.got_subcommand(check))
            return cmd_check(spec_path, trials, seed, characterize, out_path);
        if (app.got_subcommand(score)) return cmd_score(rule_name, k, report_csv, outcome, out_path);
    } catch (const levelset::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const levelset::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const levelset::BracketError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const levelset::ToleranceError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return 0;
}
