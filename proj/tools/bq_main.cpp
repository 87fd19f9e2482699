// bq: finite-section calculator for quantitative basis geometry.
//
// Verbs: norm, dualnorm, constants, profile, ca, certify-l1, certify-c0,
// harness, fixtures. Exit codes: 0 success, 1 harness violation, 2 input
// error, 3 budget or solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bq/bases.hpp"
#include "bq/convex.hpp"
#include "bq/embeddings.hpp"
#include "bq/errors.hpp"
#include "bq/harness.hpp"
#include "bq/quantities.hpp"
#include "bq/spaces.hpp"

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> parse_scalar_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw bq::InputError("bad scalar '" + item + "'");
    }
    if (out.empty()) throw bq::InputError("empty coefficient list");
    return out;
}

std::vector<double> read_scalar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bq::InputError("cannot open '" + path + "'");
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(std::stod(line));
    }
    if (out.empty()) throw bq::InputError("no scalars in '" + path + "'");
    return out;
}

std::vector<double> coefficients_from(const std::string& inline_list, const std::string& path) {
    if (!inline_list.empty() && !path.empty())
        throw bq::InputError("give either --coeffs or --file, not both");
    if (!inline_list.empty()) return parse_scalar_list(inline_list);
    if (!path.empty()) return read_scalar_file(path);
    throw bq::InputError("coefficients required (--coeffs or --file)");
}

nlohmann::ordered_json estimate_json(const bq::Estimate& e) {
    nlohmann::ordered_json j;
    j["value"] = e.value;
    j["direction"] = bq::to_string(e.direction);
    j["method"] = e.method;
    for (const auto& [k, v] : e.params) j["params"][k] = v;
    return j;
}

bq::Block parse_block(const std::string& text) {
    // start:end:c1,c2,...
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw bq::InputError("block must look like start:end:c1,c2,... got '" + text + "'");
    bq::Block b;
    b.start = std::stoi(text.substr(0, p1));
    b.end = std::stoi(text.substr(p1 + 1, p2 - p1 - 1));
    b.coeffs = bq::Coeffs(parse_scalar_list(text.substr(p2 + 1)));
    return b;
}

struct OutputMode {
    bool json = false;
    bool csv = false;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-section calculator for quantitative basis geometry"};
    app.require_subcommand(1);
    OutputMode mode;
    std::uint64_t seed = 0;
    app.add_flag("--json", mode.json, "machine-readable JSON output");
    app.add_flag("--csv", mode.csv, "CSV output where applicable");
    app.add_option("--seed", seed, "random seed for sampled searches (default 0)");

    std::string space_text, coeffs_text, file_text, functional_text, witness_name;
    std::string config_path, fixture_space, fixture_quantity;
    std::vector<std::string> block_texts;
    int horizon = 12;
    double bound = -1.0;
    long trials = 200;
    bool timings = false;

    CLI::App* norm_cmd = app.add_subcommand("norm", "norm of a coefficient vector");
    norm_cmd->add_option("space", space_text)->required();
    norm_cmd->add_option("--coeffs", coeffs_text, "comma-separated coefficients");
    norm_cmd->add_option("--file", file_text, "one scalar per line");

    CLI::App* dual_cmd = app.add_subcommand("dualnorm", "dual norm of a functional");
    dual_cmd->add_option("space", space_text)->required();
    dual_cmd->add_option("--coeffs", coeffs_text, "biorthogonal coordinates");
    dual_cmd->add_option("--file", file_text);

    CLI::App* const_cmd = app.add_subcommand("constants", "basis and unconditional constants");
    const_cmd->add_option("space", space_text)->required();

    CLI::App* profile_cmd = app.add_subcommand("profile", "tail-norm profile");
    profile_cmd->add_option("space", space_text)->required();
    profile_cmd->add_option("--witness", witness_name, "registered witness name");
    profile_cmd->add_option("--functional", functional_text, "biorthogonal coordinates");

    CLI::App* ca_cmd = app.add_subcommand("ca", "gap profile of a coefficient sequence");
    ca_cmd->add_option("space", space_text)->required();
    ca_cmd->add_option("--coeffs", coeffs_text, "coefficient sequence a_1,a_2,...");
    ca_cmd->add_option("--file", file_text);
    ca_cmd->add_option("--witness", witness_name, "registered witness name");
    ca_cmd->add_option("--horizon", horizon, "witness horizon (default 12)");
    ca_cmd->add_option("--check-bound", bound, "also run the block search against this bound");
    ca_cmd->add_option("--trials", trials, "random candidates for the block search");

    CLI::App* cert_l1 = app.add_subcommand("certify-l1", "absolute-sum-model block certificate");
    cert_l1->add_option("space", space_text)->required();
    cert_l1->add_option("--block", block_texts, "start:end:c1,c2,... (repeatable)")->required();
    cert_l1->add_option("--witness", functional_text, "separating functional coordinates")->required();

    CLI::App* cert_c0 = app.add_subcommand("certify-c0", "sup-model block certificate");
    cert_c0->add_option("space", space_text)->required();
    cert_c0->add_option("--block", block_texts, "start:end:c1,c2,... (repeatable)")->required();

    CLI::App* harness_cmd = app.add_subcommand("harness", "run the inequality suite");
    harness_cmd->add_option("--config", config_path, "JSON config (shipped default when absent)");
    harness_cmd->add_flag("--timings", timings, "include wall-clock timings in JSON output");

    CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "catalogued exact values");
    fixtures_cmd->add_option("--space", fixture_space, "filter by family");
    fixtures_cmd->add_option("--quantity", fixture_quantity, "filter by quantity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*norm_cmd) {
            const bq::SpaceDescriptor space = bq::SpaceDescriptor::parse(space_text);
            const bq::Coeffs x(coefficients_from(coeffs_text, file_text));
            const double v = bq::norm(space, x);
            if (mode.json) {
                nlohmann::ordered_json j{{"schema", 1}, {"space", space.to_string()},
                                         {"norm", v}, {"direction", "exact"}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << fmt(v) << "\n";
            }
            return 0;
        }

        if (*dual_cmd) {
            const bq::SpaceDescriptor space = bq::SpaceDescriptor::parse(space_text);
            const bq::Functional f(space, coefficients_from(coeffs_text, file_text));
            const bq::Interval enc = bq::dual_norm_enclosure(f);
            if (mode.json) {
                nlohmann::ordered_json j{{"schema", 1},
                                         {"space", space.to_string()},
                                         {"dual_norm", enc.mid()},
                                         {"enclosure", {enc.lo, enc.hi}},
                                         {"direction", enc.is_exact() ? "exact" : "enclosure"}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << fmt(enc.mid()) << "\n";
            }
            return 0;
        }

        if (*const_cmd) {
            const bq::SpaceDescriptor space = bq::SpaceDescriptor::parse(space_text);
            bq::BasisSection section(space);
            const bq::Estimate k = bq::basis_constant(section);
            const bq::Estimate ku = bq::unconditional_constant(section);
            if (mode.json) {
                nlohmann::ordered_json j{{"schema", 1}, {"space", space.to_string()}};
                j["K"] = estimate_json(k);
                j["Ku"] = estimate_json(ku);
                std::cout << j.dump(2) << "\n";
            } else if (mode.csv) {
                std::cout << "quantity,value,direction,method\n";
                std::cout << "K," << fmt(k.value) << ',' << bq::to_string(k.direction) << ','
                          << k.method << "\n";
                std::cout << "Ku," << fmt(ku.value) << ',' << bq::to_string(ku.direction) << ','
                          << ku.method << "\n";
            } else {
                std::cout << "K  = " << fmt(k.value) << "  (" << bq::to_string(k.direction)
                          << ", " << k.method << ")\n";
                std::cout << "Ku = " << fmt(ku.value) << "  (" << bq::to_string(ku.direction)
                          << ", " << ku.method << ")\n";
            }
            return 0;
        }

        if (*profile_cmd) {
            const bq::SpaceDescriptor space = bq::SpaceDescriptor::parse(space_text);
            bq::BasisSection section(space);
            bq::ShProfile result;
            std::string origin;
            if (!witness_name.empty()) {
                const bq::ShWitness w = bq::make_sh_witness(witness_name, space.dim);
                result = bq::sh_profile(section, w);
                origin = witness_name;
            } else if (!functional_text.empty()) {
                const bq::Functional f(space, parse_scalar_list(functional_text));
                result = bq::sh_profile(section, f);
                origin = "functional";
            } else {
                throw bq::InputError("profile needs --witness or --functional");
            }
            if (mode.json) {
                nlohmann::ordered_json j{{"schema", 1}, {"space", space.to_string()},
                                         {"origin", origin}};
                j["values"] = result.profile.values;
                j["summary"] = estimate_json(result.summary);
                std::cout << j.dump(2) << "\n";
            } else if (mode.csv) {
                std::cout << "n,tail_norm\n";
                for (size_t n = 0; n < result.profile.values.size(); ++n)
                    std::cout << n << ',' << fmt(result.profile.values[n]) << "\n";
            } else {
                for (size_t n = 0; n < result.profile.values.size(); ++n)
                    std::cout << "n=" << n << "  " << fmt(result.profile.values[n]) << "\n";
                std::cout << "summary " << fmt(result.summary.value) << "  ("
                          << bq::to_string(result.summary.direction) << ", "
                          << result.summary.method << ")\n";
            }
            return 0;
        }

        if (*ca_cmd) {
            const bq::SpaceDescriptor space = bq::SpaceDescriptor::parse(space_text);
            std::vector<double> coeffs;
            std::string origin = "coefficients";
            if (!witness_name.empty()) {
                const bq::WitnessSequence w = bq::make_bc_witness(witness_name, horizon);
                if (w.space.kind != space.kind)
                    throw bq::InputError("witness '" + witness_name + "' lives on " +
                                         w.space.to_string());
                coeffs = w.coefficients;
                origin = witness_name;
            } else {
                coeffs = coefficients_from(coeffs_text, file_text);
            }
            bq::WitnessSequence w;
            w.space = space;
            w.name = origin;
            w.coefficients = coeffs;
            w.periodic = !witness_name.empty();
            const std::vector<bq::Coeffs> sums = bq::partial_sums(w);
            const std::vector<double> profile = bq::gap_profile(space, sums);
            const bq::Estimate cert = bq::bc1_certificate(w);

            std::optional<bq::UpperCheckReport> check;
            if (bound >= 0.0) check = bq::bc1_upper_check(space, bound, trials, seed);

            if (mode.json) {
                nlohmann::ordered_json j{{"schema", 1}, {"space", space.to_string()},
                                         {"origin", origin}};
                j["gap_profile"] = profile;
                j["bc1_certificate"] = estimate_json(cert);
                if (check) {
                    j["upper_check"] = {{"bound", check->bound},
                                        {"refuted", check->refuted},
                                        {"best_value", check->best_value},
                                        {"trials", check->trials},
                                        {"note", check->note}};
                }
                std::cout << j.dump(2) << "\n";
            } else {
                for (size_t n = 0; n < profile.size(); ++n)
                    std::cout << "n=" << n + 1 << "  " << fmt(profile[n]) << "\n";
                std::cout << "bc1 certificate " << fmt(cert.value) << "  ("
                          << bq::to_string(cert.direction) << ", " << cert.method << ")\n";
                if (check)
                    std::cout << (check->refuted ? "refuted" : "not refuted") << " at bound "
                              << fmt(check->bound) << ": best block " << fmt(check->best_value)
                              << "  (" << check->note << ")\n";
            }
            return 0;
        }

        if (*cert_l1 || *cert_c0) {
            const bq::SpaceDescriptor space = bq::SpaceDescriptor::parse(space_text);
            bq::BlockSequence blocks;
            blocks.space = space;
            for (const std::string& text : block_texts) blocks.blocks.push_back(parse_block(text));
            bq::EmbeddingCertificate cert;
            if (*cert_l1) {
                const bq::Functional witness(space, parse_scalar_list(functional_text));
                cert = bq::build_l1_embedding(blocks, witness);
            } else {
                cert = bq::build_c0_embedding(blocks);
            }
            const bq::Estimate alpha = bq::alpha_lower_bound(cert);
            if (mode.json) {
                nlohmann::ordered_json j = nlohmann::ordered_json::parse(bq::certificate_json(cert));
                j["alpha"] = estimate_json(alpha);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "upper " << fmt(cert.upper.value) << "  ("
                          << bq::to_string(cert.upper.direction) << ")\n";
                std::cout << "lower " << fmt(cert.lower.value) << "  ("
                          << bq::to_string(cert.lower.direction) << ")\n";
                std::cout << "alpha lower bound " << fmt(alpha.value) << "  (" << alpha.method
                          << ")\n";
                std::cout << "analytic lower " << fmt(cert.analytic_lower)
                          << (cert.analytic_certified ? "  (certified)" : "  (recorded)") << "\n";
            }
            return 0;
        }

        if (*harness_cmd) {
            bq::SuiteConfig config;
            if (config_path.empty()) {
                config = bq::SuiteConfig::shipped_default();
            } else {
                std::ifstream in(config_path);
                if (!in) throw bq::InputError("cannot open config '" + config_path + "'");
                std::stringstream ss;
                ss << in.rdbuf();
                config = bq::SuiteConfig::parse(ss.str());
            }
            config.seed = seed;
            const bq::Report report = bq::run_suite(config);
            if (mode.json)
                std::cout << report.to_json(timings) << "\n";
            else if (mode.csv)
                std::cout << report.estimates_csv();
            else
                std::cout << report.to_text();
            return report.any_violated() ? 1 : 0;
        }

        if (*fixtures_cmd) {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const bq::FixtureRecord& rec : bq::fixtures()) {
                if (!fixture_space.empty() && rec.space != fixture_space) continue;
                if (!fixture_quantity.empty() && rec.quantity != fixture_quantity) continue;
                if (mode.json) {
                    nlohmann::ordered_json j{{"space", rec.space},
                                             {"quantity", rec.quantity},
                                             {"lo", rec.value.lo},
                                             {"hi", rec.value.hi},
                                             {"source", rec.source},
                                             {"verified_here", rec.verified_here}};
                    rows.push_back(j);
                } else {
                    std::cout << rec.space << "  " << rec.quantity << " = "
                              << (rec.value.is_exact()
                                      ? fmt(rec.value.lo)
                                      : "[" + fmt(rec.value.lo) + ", " + fmt(rec.value.hi) + "]")
                              << (rec.verified_here ? "" : "  [recorded, unverified]") << "  -- "
                              << rec.source << "\n";
                }
            }
            if (mode.json) std::cout << rows.dump(2) << "\n";
            return 0;
        }
    } catch (const bq::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const bq::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const bq::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
