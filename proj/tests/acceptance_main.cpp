// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here; nothing is calibrated at runtime.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "levelset/axioms.hpp"
#include "levelset/conjugate.hpp"
#include "levelset/factory.hpp"
#include "levelset/rng.hpp"
#include "levelset/scoring.hpp"
#include "levelset/transforms.hpp"

using namespace levelset;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

Market market_of(const std::string& text) {
    return make_market(market_spec_from_string(text)).market;
}

MarketSpec mock_spec(Bundle q0) {
    MarketSpec spec;
    spec.n = 2;
    spec.family = "mock";
    spec.initial_reserves = std::move(q0);
    return spec;
}

// ---------------------------------------------------------------------------

bool criterion_cost_equivalence(std::string& detail) {
    Rng rng(1001);
    double worst = 0.0;
    for (double k : {0.5, 1.0, 6.0}) {
        CostFunction closed = uniswap_cost(k);
        CostFunction derived = cost_from_potential_level(uniswap(), k);
        for (int t = 0; t < 200; ++t) {
            Bundle q = rng.signed_bundle(2, 0.01, 8.0);
            worst = std::max(worst, std::abs(closed(q) - derived(q)));
        }
    }
    std::ostringstream os;
    os << "max |closed - derived| = " << worst << " (<= 1e-8)";
    detail = os.str();
    return worst <= 1e-8;
}

bool criterion_perspective_round_trip(std::string& detail) {
    Rng rng(1002);
    std::vector<std::pair<std::string, PotentialFunction>> families;
    families.push_back({"uniswap", uniswap()});
    families.push_back({"balancer", balancer({0.75, 0.25})});
    families.push_back({"perspective(lmsr)", perspective_potential(lmsr(2, 1.0))});
    families.push_back({"perspective(brier)", perspective_potential(brier_cost_n2())});

    double worst = 0.0;
    for (auto& [name, phi] : families) {
        CostFunction C = cost_from_potential_level(phi, 1.0);
        PotentialFunction back = perspective_potential(C);
        for (int t = 0; t < 100; ++t) {
            Bundle q = rng.positive_bundle(2, 0.1, 10.0);
            worst = std::max(worst, std::abs(back(q) - phi(q)));
        }
    }
    std::ostringstream os;
    os << "max round-trip error = " << worst << " (<= 1e-7)";
    detail = os.str();
    return worst <= 1e-7;
}

bool criterion_brier_chain(std::string& detail) {
    Rng rng(1003);
    CostFunction closed = brier_cost_n2();
    double worst_conj = 0.0;
    for (int t = 0; t < 100; ++t) {
        Bundle q = rng.signed_bundle(2, 0.01, 6.0);
        worst_conj = std::max(worst_conj,
                              std::abs(closed(q) - conjugate_on_simplex(brier_cost_generating, q)));
    }
    PotentialFunction hybrid = perspective_potential(closed);
    double worst_persp = 0.0;
    for (int t = 0; t < 100; ++t) {
        Bundle q = rng.positive_bundle(2, 0.05, 10.0);
        double reference = std::sqrt(q[0] * q[1]) + 0.5 * (q[0] + q[1]);
        worst_persp = std::max(worst_persp, std::abs(hybrid(q) - reference));
    }
    std::ostringstream os;
    os << "conjugate err " << worst_conj << " (<= 1e-5), hybrid err " << worst_persp
       << " (<= 1e-8)";
    detail = os.str();
    return worst_conj <= 1e-5 && worst_persp <= 1e-8;
}

bool criterion_lmsr_level_set(std::string& detail) {
    Rng rng(1004);
    PotentialFunction phi = perspective_potential(lmsr(2, 1.0));
    double worst_residual = 0.0, worst_homog = 0.0;
    for (int t = 0; t < 100; ++t) {
        Bundle q = rng.positive_bundle(2, 0.1, 10.0);
        double alpha = phi(q);
        double sum = std::exp(-q[0] / alpha) + std::exp(-q[1] / alpha);
        worst_residual = std::max(worst_residual, std::abs(sum - 1.0));

        double c = rng.log_uniform(0.1, 10.0);
        double scaled = phi(scale(c, q));
        worst_homog = std::max(worst_homog, std::abs(scaled - c * alpha) / (c * alpha));
    }
    std::ostringstream os;
    os << "level-set residual " << worst_residual << " (<= 1e-9), homogeneity " << worst_homog
       << " (<= 1e-9 relative)";
    detail = os.str();
    return worst_residual <= 1e-9 && worst_homog <= 1e-9;
}

bool criterion_scoring(std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    std::vector<std::pair<std::string, ScoringRule>> rules;
    rules.push_back({"brier", brier()});
    rules.push_back({"log", log_score()});
    rules.push_back({"uniswap(1)", uniswap_score(1.0)});
    rules.push_back({"uniswap(2)", uniswap_score(2.0)});
    rules.push_back({"cfmm(uniswap@1)", rule_from_cfmm(uniswap(), {1.0, 1.0})});
    double l = std::log(2.0);
    rules.push_back(
        {"cfmm(perspective-lmsr)", rule_from_cfmm(perspective_potential(lmsr(2, 1.0)), {l, l})});

    std::uint64_t seed = 1005;
    for (auto& [name, rule] : rules) {
        PropernessReport rep = check_properness(rule, 20, 201, seed++);
        if (!rep.proper) {
            ok = false;
            os << name << " improper (gap " << rep.max_cell_gap << " cells); ";
        }
    }

    ScoringRule S1 = uniswap_score(1.0);
    double uniform1 = S1(SimplexPoint({0.5, 0.5}), 0);
    double uniform2 = uniswap_score(2.0)(SimplexPoint({0.5, 0.5}), 1);
    double skew = S1(SimplexPoint({0.8, 0.2}), 0);
    if (std::abs(uniform1 + 1.0) > 1e-12 || std::abs(uniform2 + 2.0) > 1e-12 ||
        std::abs(skew + 0.5) > 1e-12) {
        ok = false;
        os << "closed-form values off (" << uniform1 << ", " << uniform2 << ", " << skew << "); ";
    }
    if (ok) os << "all rules proper on the 201-point grid; pinned values reproduced";
    detail = os.str();
    return ok;
}

bool criterion_axiom_suite(std::string& detail) {
    std::ostringstream os;
    bool ok = true;

    const std::vector<std::pair<std::string, std::string>> conforming = {
        {"uniswap",
         R"({"n":2,"representation":"potential","family":"uniswap","params":{},
             "initial_reserves":[4,9],"fee_gamma":1.0})"},
        {"balancer",
         R"({"n":2,"representation":"potential","family":"balancer",
             "params":{"pi1":0.75,"pi2":0.25},"initial_reserves":[16,1],"fee_gamma":1.0})"},
        {"curve",
         R"({"n":2,"representation":"potential","family":"curve","params":{},
             "initial_reserves":[1,1],"fee_gamma":1.0})"},
        {"perspective(lmsr)",
         R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
             "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":1.0})"},
        {"perspective(uniswap-cost)",
         R"({"n":2,"representation":"potential","family":"perspective-of:uniswap-cost",
             "params":{"k":1.0},"initial_reserves":[4,9],"fee_gamma":1.0})"},
    };
    for (auto& [name, text] : conforming) {
        AxiomSuite suite = run_axiom_suite(market_of(text), 1000, 7);
        if (!suite.all_passed) {
            ok = false;
            os << name << " failed an axiom; ";
        }
    }

    // negative controls
    PotentialFunction flat;
    flat.n = 2;
    flat.domain = Domain::PositiveOrthant;
    flat.family = "mock-flat";
    flat.value = [](const Bundle& q) {
        if (!is_strictly_positive(q)) throw DomainError("domain");
        return 1.0;
    };
    AxiomReport flat_rep = check_no_dominated(Market(mock_spec({1.0, 1.0}), flat), 300, 8);
    if (!flat_rep.failed() || flat_rep.counterexample.is_null()) {
        ok = false;
        os << "flat control produced no counterexample; ";
    }

    PotentialFunction convex;
    convex.n = 2;
    convex.domain = Domain::PositiveOrthant;
    convex.family = "mock-convex";
    convex.value = [](const Bundle& q) {
        if (!is_strictly_positive(q)) throw DomainError("domain");
        return q[0] * q[0] + q[1] * q[1];
    };
    AxiomReport convex_rep =
        check_demand_responsiveness(Market(mock_spec({1.0, 1.0}), convex), 500, 9);
    if (!convex_rep.failed() || convex_rep.counterexample.is_null()) {
        ok = false;
        os << "convex control produced no counterexample; ";
    }

    AxiomReport reserves_rep = check_bounded_reserves(
        market_of(R"({"n":2,"representation":"potential","family":"from-cost:lmsr",
                      "params":{"b":1.0},"initial_reserves":[0.1,0.1],"fee_gamma":1.0})"),
        1000, 10);
    if (!reserves_rep.failed()) {
        ok = false;
        os << "shift-invariant market kept its reserves; ";
    }

    if (ok)
        os << "5 families pass at 1000 trials; both controls fail with counterexamples; "
              "small-reserve softmax market loses reserves";
    detail = os.str();
    return ok;
}

bool criterion_fees(std::string& detail) {
    Rng rng(1007);
    std::ostringstream os;
    bool ok = true;
    double worst_membership = 0.0;

    for (const char* text :
         {R"({"n":2,"representation":"potential","family":"uniswap","params":{},
              "initial_reserves":[4,9],"fee_gamma":0.5})",
          R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
              "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":0.5})"}) {
        Market m = market_of(text);
        int executed = 0;
        while (executed < 500) {
            Bundle give(2, 0.0), want(2, 0.0);
            give[rng.uniform_int(0, 1)] = rng.log_uniform(1e-2, 1e1);
            want[rng.uniform_int(0, 1)] = rng.log_uniform(1e-2, 1e1);
            LiquidationResult res;
            try {
                res = m.liquidate(give, want);
            } catch (const BracketError&) {
                continue;
            } catch (const ToleranceError&) {
                continue;
            }
            auto [next, quote] = m.apply_combined(res.trade);
            ++executed;
            bool has_positive = false;
            for (std::size_t i = 0; i < quote.accepted_trade.size(); ++i)
                if (quote.accepted_trade[i] > 1e-12 * (1.0 + std::abs(quote.pre_reserves[i])))
                    has_positive = true;
            if (has_positive && !(quote.post_level > quote.pre_level)) {
                ok = false;
                os << "level did not grow at trade " << executed << "; ";
            }
            if (!is_strictly_positive(next.reserves())) {
                ok = false;
                os << "reserves left the positive orthant; ";
            }
            // the executed bundle must be a member of the discounted-form set
            Bundle executed_bundle = add(quote.accepted_trade, quote.fee);
            double residual = std::abs(m.level_residual(executed_bundle));
            worst_membership = std::max(worst_membership, residual);
            if (!(residual <= 1e-9 * (1.0 + std::abs(m.level())))) {
                ok = false;
                os << "discounted/fee-form membership disagree (" << residual << "); ";
            }
            if (min_element(next.reserves()) > 1e-3 && max_element(next.reserves()) < 1e4)
                m = next;
        }
    }
    if (ok)
        os << "500 fee trades per market: level strictly grows, reserves stay positive, "
           << "membership residual <= " << worst_membership;
    detail = os.str();
    return ok;
}

bool criterion_implicit_protocol(std::string& detail) {
    Rng rng(1008);
    Market m = market_of(
        R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
            "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":0.5})");
    CostFunction base = lmsr(2, 1.0);
    std::ostringstream os;
    bool ok = true;
    int executed = 0;
    while (executed < 50) {
        Bundle give(2, 0.0), want(2, 0.0);
        give[rng.uniform_int(0, 1)] = rng.log_uniform(1e-2, 1e1);
        want[rng.uniform_int(0, 1)] = rng.log_uniform(1e-2, 1e1);
        LiquidationResult res;
        try {
            res = m.liquidate(give, want);
        } catch (const BracketError&) {
            continue;
        } catch (const ToleranceError&) {
            continue;
        }
        auto [next, quote] = m.apply_combined(res.trade);
        ++executed;
        bool honest = verify_implicit_trade(base, quote.pre_reserves, quote.accepted_trade,
                                            quote.pre_level, quote.post_level, m.gamma(), 1e-9);
        bool tampered = verify_implicit_trade(base, quote.pre_reserves, quote.accepted_trade,
                                              quote.pre_level, quote.post_level + 1e-6,
                                              m.gamma(), 1e-9);
        if (!honest) {
            ok = false;
            os << "honest announcement rejected at trade " << executed << "; ";
        }
        if (tampered) {
            ok = false;
            os << "perturbed level accepted at trade " << executed << "; ";
        }
        if (min_element(next.reserves()) > 1e-3 && max_element(next.reserves()) < 1e4) m = next;
    }
    if (ok) os << "50 honest announcements accepted; +1e-6 perturbations rejected";
    detail = os.str();
    return ok;
}

int run_cli(const std::string& args, std::string* out = nullptr) {
    std::string cmd = std::string(LEVELSET_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    char buf[4096];
    std::string text;
    while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) text.append(buf, got);
    int status = pclose(pipe);
    if (out) *out = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool criterion_figures(std::string& detail) {
    std::ostringstream os;
    bool ok = true;

    std::string spec_path = "/tmp/levelset_acceptance_plmsr.json";
    {
        FILE* f = fopen(spec_path.c_str(), "w");
        fputs(R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
                  "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":1.0})",
              f);
        fclose(f);
    }
    std::string csv;
    if (run_cli("grid --spec " + spec_path + " --mode levels --levels 0.2,0.6,1.0,1.4,1.8 --rays 32",
                &csv) != 0) {
        detail = "levels export failed";
        return false;
    }
    std::map<double, std::vector<std::pair<double, double>>> polylines;
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        if (line.empty()) continue;
        double level, q1, q2;
        int ray;
        if (std::sscanf(line.c_str(), "%lf,%d,%lf,%lf", &level, &ray, &q1, &q2) != 4) continue;
        polylines[level].push_back({q1, q2});
    }
    double worst = 0.0;
    if (!polylines.count(1.0)) {
        ok = false;
        os << "level 1 polyline missing; ";
    } else {
        for (auto& [level, points] : polylines) {
            for (std::size_t i = 0; i < points.size(); ++i) {
                worst = std::max(worst,
                                 std::abs(points[i].first - level * polylines[1.0][i].first));
                worst = std::max(worst,
                                 std::abs(points[i].second - level * polylines[1.0][i].second));
            }
        }
        if (worst > 1e-6) {
            ok = false;
            os << "uniform-scaling violated by " << worst << "; ";
        }
    }

    const char* panels[] = {
        R"({"n":2,"representation":"potential","family":"perspective-of:uniswap-cost",
            "params":{"k":1.0},"initial_reserves":[1,1],"fee_gamma":1.0})",
        R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
            "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":1.0})",
        R"({"n":2,"representation":"potential","family":"perspective-of:brier",
            "params":{},"initial_reserves":[1,1],"fee_gamma":1.0})"};
    int panel_index = 0;
    for (const char* panel : panels) {
        std::string path = "/tmp/levelset_acceptance_panel" + std::to_string(panel_index++) +
                           ".json";
        FILE* f = fopen(path.c_str(), "w");
        fputs(panel, f);
        fclose(f);
        if (run_cli("grid --spec " + path + " --mode surface --x 0.05:3:50 --y 0.05:3:50") != 0) {
            ok = false;
            os << "surface panel " << panel_index << " failed; ";
        }
    }
    if (ok)
        os << "level polylines scale uniformly (err " << worst
           << " <= 1e-6); all three surface panels export on [0.05,3]^2";
    detail = os.str();
    return ok;
}

bool criterion_replay(std::string& detail) {
    Rng rng(1010);
    Market m = market_of(
        R"({"n":2,"representation":"potential","family":"perspective-of:lmsr",
            "params":{"b":1.0},"initial_reserves":[1,1],"fee_gamma":0.5})");
    Market original = m;
    std::vector<TradeRecord> records;
    int seq = 0;
    while (seq < 40) {
        Bundle give(2, 0.0), want(2, 0.0);
        give[rng.uniform_int(0, 1)] = rng.log_uniform(1e-2, 1e1);
        want[rng.uniform_int(0, 1)] = rng.log_uniform(1e-2, 1e1);
        try {
            auto res = m.liquidate(give, want);
            auto [next, quote] = m.apply_combined(res.trade);
            records.push_back(record_of(seq++, quote));
            m = next;
        } catch (const BracketError&) {
        } catch (const ToleranceError&) {
        }
        if (min_element(m.reserves()) <= 1e-3 || max_element(m.reserves()) >= 1e4) break;
    }
    std::string log_text = to_jsonl(records);
    auto [replayed_market, replayed] = replay(original, records_from_jsonl(log_text));
    bool ok = to_jsonl(replayed) == log_text && replayed_market.reserves() == m.reserves() &&
              replayed_market.level() == m.level();
    std::ostringstream os;
    os << records.size() << " trades replay to byte-identical records and bit-equal state";
    detail = ok ? os.str() : "replayed log differs";
    return ok;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1 constant-product cost equivalence", criterion_cost_equivalence},
        {"2 perspective round trip", criterion_perspective_round_trip},
        {"3 quadratic-score chain", criterion_brier_chain},
        {"4 perspective-lmsr level set", criterion_lmsr_level_set},
        {"5 scoring properness and pinned values", criterion_scoring},
        {"6 axiom suite with controls", criterion_axiom_suite},
        {"7 transaction fees", criterion_fees},
        {"8 announced-level protocol", criterion_implicit_protocol},
        {"9 figure reproduction", criterion_figures},
        {"10 replay determinism", criterion_replay},
    };

    int failures = 0;
    for (Criterion& criterion : criteria) {
        std::string info;
        bool passed = false;
        try {
            passed = criterion.run(info);
        } catch (const std::exception& e) {
            info = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %s: %s\n", passed ? "PASS" : "FAIL", criterion.name.c_str(),
                    info.c_str());
        std::fflush(stdout);
        if (!passed) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
