#include "commands.hpp"

#include "tomobell/bell.hpp"
#include "tomobell/errors.hpp"
#include "tomobell/io.hpp"
#include "tomobell/reconstruction.hpp"
#include "tomobell/sampling.hpp"
#include "tomobell/tomography.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace tomobell::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// State selection shared by the subcommands.

struct StateOptions {
    std::string kind = "epr";
    std::string lambda;
    std::string s;
    std::string n;
    std::string r;
    std::string rho;
};

void add_state_options(CLI::App* cmd, StateOptions& o)
{
    cmd->add_option("--state", o.kind, "epr (alias squeezed), vacuum, fock-pair, pair-coherent, fock")
        ->check(CLI::IsMember({"epr", "squeezed", "vacuum", "fock-pair", "pair-coherent", "fock"}))
        ->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "squeezed vacuum lambda = tanh s; value, list a,b,c or range a:b:step");
    cmd->add_option("--s", o.s, "squeezed vacuum squeezing parameter (alternative to --lambda)");
    cmd->add_option("--n", o.n, "Fock pair excitation n >= 1");
    cmd->add_option("--r", o.r, "pair-coherent amplitude r > 0");
    cmd->add_option("--rho", o.rho, "two-mode density matrix JSON for --state fock");
}

struct LabeledState {
    std::string parameter; ///< column name of the swept parameter, empty for fixed states
    double value;
    TwoModeState state;
};

std::vector<LabeledState> resolve_states(const StateOptions& o)
{
    std::vector<LabeledState> out;
    if (o.kind == "epr" || o.kind == "squeezed") {
        if (!o.lambda.empty() && !o.s.empty()) throw ConfigError("give either --lambda or --s, not both");
        if (!o.s.empty()) {
            for (double s : parse_values(o.s)) out.push_back({"s", s, TwoModeState::squeezed_vacuum_from_s(s)});
        } else {
            for (double l : parse_values(o.lambda.empty() ? "0.54" : o.lambda))
                out.push_back({"lambda", l, TwoModeState::squeezed_vacuum(l)});
        }
    } else if (o.kind == "vacuum") {
        out.push_back({"lambda", 0.0, TwoModeState::squeezed_vacuum(0.0)});
    } else if (o.kind == "fock-pair") {
        for (double v : parse_values(o.n.empty() ? "1" : o.n)) {
            if (v != std::floor(v)) throw DomainError("Fock pair superposition: n must be an integer >= 1");
            out.push_back({"n", v, TwoModeState::fock_pair(static_cast<int>(v))});
        }
    } else if (o.kind == "pair-coherent") {
        for (double r : parse_values(o.r.empty() ? "1.05" : o.r)) out.push_back({"r", r, TwoModeState::pair_coherent(r)});
    } else {
        if (o.rho.empty()) throw ConfigError("--state fock needs --rho <density-matrix.json>");
        json j;
        try {
            j = json::parse(read_file(o.rho));
        } catch (const json::exception& e) {
            throw ConfigError("cannot parse " + o.rho + ": " + e.what());
        }
        out.push_back({"", 0.0, TwoModeState::explicit_fock(density_matrix_from_json(j))});
    }
    return out;
}

TwoModeState single_state(const StateOptions& o)
{
    auto states = resolve_states(o);
    if (states.size() != 1) throw ConfigError("this command takes a single state parameter, not a list or range");
    return states.front().state;
}

// ---------------------------------------------------------------------------
// Output helpers.

void emit(const std::string& path, const std::string& content, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

json angles_json(const BellAnglesQuadrature& a)
{
    return {{"theta1", a.theta1}, {"theta1p", a.theta1p}, {"theta2", a.theta2}, {"theta2p", a.theta2p}};
}

double lookup(const std::map<std::string, double>& m, const std::string& key, double fallback)
{
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

void check_keys(const std::map<std::string, double>& m, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : m) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) {
            std::string list;
            for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
            throw ConfigError("unknown angle key '" + key + "' (expected one of " + list + ")");
        }
    }
}

// Homodyne angles of the tomographic CHSH test.  The default is the setting used for the
// pair-coherent amplitude sweep: (theta1, theta2, theta1', theta2') = (pi/2, -pi/4, 0, -3pi/4).
BellAnglesQuadrature tomographic_angles(const std::string& text)
{
    BellAnglesQuadrature a{kPi / 2, 0.0, -kPi / 4, -3.0 * kPi / 4};
    if (text.empty()) return a;
    const auto m = parse_assignments(text);
    check_keys(m, {"theta1", "theta1p", "theta2", "theta2p"});
    return {lookup(m, "theta1", a.theta1), lookup(m, "theta1p", a.theta1p), lookup(m, "theta2", a.theta2),
            lookup(m, "theta2p", a.theta2p)};
}

struct PseudospinAngles {
    double tv, tup, tvp;
};

// Fixed angles of the pseudospin curves B(theta_u): the squeezed vacuum uses
// (pi/4, -pi/2, -pi/4), the other states (0, pi, pi/2).
PseudospinAngles pseudospin_angles(const TwoModeState& state, const std::string& text)
{
    PseudospinAngles a = std::holds_alternative<SqueezedVacuum>(state.variant())
                             ? PseudospinAngles{kPi / 4, -kPi / 2, -kPi / 4}
                             : PseudospinAngles{0.0, kPi, kPi / 2};
    if (text.empty()) return a;
    const auto m = parse_assignments(text);
    check_keys(m, {"tv", "tup", "tvp"});
    return {lookup(m, "tv", a.tv), lookup(m, "tup", a.tup), lookup(m, "tvp", a.tvp)};
}

json discrepancy_json(const PseudospinDiscrepancy& d)
{
    return {{"r", d.r},
            {"cutoff", d.cutoff},
            {"closed_form_xx", d.closed_form},
            {"fock_xx", d.fock},
            {"difference", d.difference},
            {"truncation_deficit", d.truncation_deficit},
            {"closed_form_exceeds_one", d.closed_form_exceeds_one},
            {"agree", d.agree},
            {"used", d.agree ? "closed_form" : "fock"}};
}

// x-x coefficient of the coplanar pseudospin correlation.  For the pair-coherent state the
// Bessel closed form is checked against the Fock sum and the Fock value is used when they disagree.
struct XxChoice {
    double xx;
    std::string source;
    std::optional<PseudospinDiscrepancy> report;
};

XxChoice choose_xx(const TwoModeState& state, const std::string& source, int cutoff)
{
    if (source == "fock") return {fock_xx(state, cutoff), "fock", std::nullopt};
    if (source == "closed") return {closed_form_xx(state), "closed_form", std::nullopt};
    if (const auto* pc = std::get_if<PairCoherent>(&state.variant())) {
        const auto d = pair_coherent_pseudospin_check(pc->r, cutoff);
        return {d.agree ? d.closed_form : d.fock, d.agree ? "closed_form" : "fock", d};
    }
    return {closed_form_xx(state), "closed_form", std::nullopt};
}

// Pseudospin correlation for any state: coplanar closed forms for benchmark states,
// the full correlation tensor for explicit Fock matrices.
CorrelationFunction pseudospin_correlation(const TwoModeState& state, const std::string& source, int cutoff,
                                           std::ostream& out)
{
    if (const auto* f = std::get_if<ExplicitFock>(&state.variant())) {
        Eigen::Matrix3d t;
        const Vec3 basis[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = correlation_pseudospin(*f->dm, basis[i], basis[j]);
        return [t](double tu, double tv) {
            return coplanar_direction(tu).dot(t * coplanar_direction(tv));
        };
    }
    const XxChoice c = choose_xx(state, source, cutoff);
    if (c.report) out << "# pseudospin check " << discrepancy_json(*c.report).dump() << '\n';
    const double xx = c.xx;
    return [xx](double tu, double tv) { return coplanar_correlation(xx, tu, tv); };
}

CorrelationFunction tomographic_correlation_fn(const TwoModeState& state)
{
    return [state](double t1, double t2) {
        if (std::holds_alternative<ExplicitFock>(state.variant())) {
            const auto& rho = *std::get<ExplicitFock>(state.variant()).dm;
            const JointDensity w = [&](double x1, double x2) { return tomogram_from_density(rho, x1, t1, x2, t2); };
            return correlation_tomographic(sign_binned_numeric(w, t1, t2));
        }
        return tomographic_correlation(state, t1, t2);
    };
}

// ---------------------------------------------------------------------------
// Subcommands.

void add_tomogram(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        std::string x1 = "-3:3:0.5", x2 = "-3:3:0.5", theta1 = "0", theta2 = "0", output = "-";
        bool check_radon = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("tomogram", "Evaluate the homodyne tomogram on an (X1, X2, theta1, theta2) grid");
    add_state_options(cmd, o->state);
    cmd->add_option("--x1", o->x1, "X1 values")->capture_default_str();
    cmd->add_option("--x2", o->x2, "X2 values")->capture_default_str();
    cmd->add_option("--theta1", o->theta1, "theta1 values")->capture_default_str();
    cmd->add_option("--theta2", o->theta2, "theta2 values")->capture_default_str();
    cmd->add_flag("--check-radon", o->check_radon, "also project the Wigner function numerically and compare");
    cmd->add_option("-o,--out", o->output, "CSV output path, - for stdout")->capture_default_str();
    cmd->callback([o, &out] {
        const TwoModeState state = single_state(o->state);
        const auto x1s = parse_values(o->x1), x2s = parse_values(o->x2);
        const auto t1s = parse_values(o->theta1), t2s = parse_values(o->theta2);
        std::vector<std::string> header{"X1", "X2", "theta1", "theta2", "w"};
        if (o->check_radon) header.push_back("w_radon");
        std::vector<std::vector<double>> rows;
        double max_diff = 0.0;
        for (double t1 : t1s)
            for (double t2 : t2s)
                for (double x1 : x1s)
                    for (double x2 : x2s) {
                        const double w = tomogram_closed_form(state, x1, t1, x2, t2);
                        std::vector<double> row{x1, x2, t1, t2, w};
                        if (o->check_radon) {
                            const double wr = radon_forward(state, x1, t1, x2, t2);
                            max_diff = std::max(max_diff, std::fabs(w - wr));
                            row.push_back(wr);
                        }
                        rows.push_back(std::move(row));
                    }
        emit(o->output, to_csv(header, rows), out);
        if (o->check_radon) {
            out << "max |closed - radon| = " << format_number(max_diff) << '\n';
            if (!(max_diff < 1e-6)) {
                throw AccuracyError("closed-form and Radon tomograms differ by " + format_number(max_diff) +
                                    " (tolerance 1e-6)");
            }
        }
    });
}

void add_probs(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        std::string theta_sum = "0:2*pi:pi/90", theta1, theta2, method = "closed", output = "-";
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("probs", "Sign-binned probabilities w++, w+-, w-+, w--");
    add_state_options(cmd, o->state);
    cmd->add_option("--theta-sum", o->theta_sum, "theta1 + theta2 values with theta2 = 0")->capture_default_str();
    cmd->add_option("--theta1", o->theta1, "theta1 values (with --theta2, replaces --theta-sum)");
    cmd->add_option("--theta2", o->theta2, "theta2 values");
    cmd->add_option("--method", o->method, "closed or numeric")
        ->check(CLI::IsMember({"closed", "numeric"}))
        ->capture_default_str();
    cmd->add_option("-o,--out", o->output, "CSV output path, - for stdout")->capture_default_str();
    cmd->callback([o, &out] {
        const auto states = resolve_states(o->state);
        std::vector<std::array<double, 2>> settings;
        if (o->theta1.empty() != o->theta2.empty()) throw ConfigError("--theta1 and --theta2 go together");
        if (!o->theta1.empty()) {
            for (double t1 : parse_values(o->theta1))
                for (double t2 : parse_values(o->theta2)) settings.push_back({t1, t2});
        } else {
            for (double t : parse_values(o->theta_sum)) settings.push_back({t, 0.0});
        }
        std::vector<std::string> header;
        if (!states.front().parameter.empty()) header.push_back(states.front().parameter);
        for (const char* c : {"theta1", "theta2", "w_pp", "w_pm", "w_mp", "w_mm"}) header.emplace_back(c);
        std::vector<std::vector<double>> rows;
        for (const auto& ls : states) {
            for (const auto& [t1, t2] : settings) {
                SignBinnedProbs p;
                if (o->method == "numeric" || !ls.state.is_benchmark()) {
                    const TwoModeState& st = ls.state;
                    p = sign_binned_numeric([&](double x1, double x2) { return tomogram_closed_form(st, x1, t1, x2, t2); },
                                            t1, t2);
                } else {
                    p = sign_binned_closed_form(ls.state, t1, t2);
                }
                std::vector<double> row;
                if (!ls.parameter.empty()) row.push_back(ls.value);
                for (double v : {t1, t2, p.w_pp, p.w_pm, p.w_mp, p.w_mm}) row.push_back(v);
                rows.push_back(std::move(row));
            }
        }
        emit(o->output, to_csv(header, rows), out);
    });
}

struct Interval {
    double lo, hi;
};

std::vector<Interval> violating_runs(const std::vector<double>& params, const std::vector<double>& b)
{
    std::vector<Interval> runs;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(b[i] > 2.0)) continue;
        if (!runs.empty() && i > 0 && b[i - 1] > 2.0) runs.back().hi = params[i];
        else runs.push_back({params[i], params[i]});
    }
    return runs;
}

void add_bell_scan(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        std::string mode = "tomographic", angles, source = "auto", output = "-", summary;
        int cutoff = kDefaultCutoff;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("bell-scan", "CHSH value at fixed angles over a sweep of the state parameter");
    add_state_options(cmd, o->state);
    cmd->add_option("--mode", o->mode, "tomographic (sign-binned B) or pseudospin (B of the pseudospin operators)")
        ->check(CLI::IsMember({"tomographic", "pseudospin"}))
        ->capture_default_str();
    cmd->add_option("--angles", o->angles,
                    "tomographic: theta1=..,theta1p=..,theta2=..,theta2p=..; pseudospin: tu=..,tup=..,tv=..,tvp=..");
    cmd->add_option("--source", o->source, "pseudospin x-x coefficient: auto, closed or fock")
        ->check(CLI::IsMember({"auto", "closed", "fock"}))
        ->capture_default_str();
    cmd->add_option("--cutoff", o->cutoff, "Fock cutoff for pseudospin sums")->capture_default_str();
    cmd->add_option("-o,--out", o->output, "CSV output path, - for stdout")->capture_default_str();
    cmd->add_option("--summary", o->summary, "JSON summary path (default: printed after the CSV)");
    cmd->callback([o, &out] {
        const auto states = resolve_states(o->state);
        std::vector<std::vector<double>> rows;
        std::vector<double> params, values;
        json checks = json::array();
        BellAnglesQuadrature best_angles{};
        double best = -1.0, best_param = 0.0;
        for (const auto& ls : states) {
            BellAnglesQuadrature a;
            double b;
            if (o->mode == "tomographic") {
                a = tomographic_angles(o->angles);
                b = chsh(tomographic_correlation_fn(ls.state), a);
            } else {
                std::map<std::string, double> m;
                if (!o->angles.empty()) {
                    m = parse_assignments(o->angles);
                    check_keys(m, {"tu", "tup", "tv", "tvp"});
                }
                const auto defaults = pseudospin_angles(ls.state, "");
                a = {lookup(m, "tu", kPi), lookup(m, "tup", defaults.tup), lookup(m, "tv", defaults.tv),
                     lookup(m, "tvp", defaults.tvp)};
                const XxChoice c = choose_xx(ls.state, o->source, o->cutoff);
                if (c.report) checks.push_back(discrepancy_json(*c.report));
                const double xx = c.xx;
                b = chsh([xx](double u, double v) { return coplanar_correlation(xx, u, v); }, a);
            }
            params.push_back(ls.value);
            values.push_back(b);
            rows.push_back({ls.value, a.theta1, a.theta1p, a.theta2, a.theta2p, b});
            if (b > best) {
                best = b;
                best_param = ls.value;
                best_angles = a;
            }
        }
        const std::string pname = states.front().parameter.empty() ? "parameter" : states.front().parameter;
        emit(o->output, to_csv({pname, "theta1", "theta1p", "theta2", "theta2p", "B"}, rows), out);
        json runs = json::array();
        for (const auto& r : violating_runs(params, values)) runs.push_back({r.lo, r.hi});
        json summary{{"max_B", best},
                     {"argmax_angles", angles_json(best_angles)},
                     {"argmax_parameter", {{pname, best_param}}},
                     {"method", o->mode},
                     {"violating_intervals", runs}};
        if (!checks.empty()) summary["pseudospin_checks"] = checks;
        emit(o->summary, summary.dump(2) + "\n", out);
    });
}

void add_pseudospin(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        std::string angles, theta_u = "0:2*pi:pi/180", source = "auto", output = "-";
        int cutoff = kDefaultCutoff;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("pseudospin", "Pseudospin CHSH value B as a function of theta_u");
    add_state_options(cmd, o->state);
    cmd->add_option("--angles", o->angles, "fixed angles tv=..,tup=..,tvp=..");
    cmd->add_option("--theta-u", o->theta_u, "theta_u values")->capture_default_str();
    cmd->add_option("--source", o->source, "x-x coefficient: auto, closed or fock")
        ->check(CLI::IsMember({"auto", "closed", "fock"}))
        ->capture_default_str();
    cmd->add_option("--cutoff", o->cutoff, "Fock cutoff (even)")->capture_default_str();
    cmd->add_option("-o,--out", o->output, "CSV output path, - for stdout")->capture_default_str();
    cmd->callback([o, &out] {
        const TwoModeState state = single_state(o->state);
        const auto a = pseudospin_angles(state, o->angles);
        const CorrelationFunction e = pseudospin_correlation(state, o->source, o->cutoff, out);
        std::vector<std::vector<double>> rows;
        for (double tu : parse_values(o->theta_u)) rows.push_back({tu, chsh(e, {tu, a.tup, a.tv, a.tvp})});
        emit(o->output, to_csv({"theta_u", "B"}, rows), out);
        const auto m = maximize_over_first_angle(e, a.tv, a.tup, a.tvp);
        out << "# max over theta_u: B = " << format_number(m.value) << " at theta_u = " << format_number(m.theta)
            << '\n';
    });
}

void add_optimize(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        std::string mode = "tomographic", source = "auto", output = "-";
        int grid = 24, starts = 4, cutoff = kDefaultCutoff;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("optimize", "Maximize the CHSH value over all four angles");
    add_state_options(cmd, o->state);
    cmd->add_option("--mode", o->mode, "tomographic or pseudospin")
        ->check(CLI::IsMember({"tomographic", "pseudospin"}))
        ->capture_default_str();
    cmd->add_option("--source", o->source, "pseudospin x-x coefficient: auto, closed or fock")
        ->check(CLI::IsMember({"auto", "closed", "fock"}))
        ->capture_default_str();
    cmd->add_option("--grid", o->grid, "grid points per angle")->capture_default_str();
    cmd->add_option("--starts", o->starts, "grid cells refined by Nelder-Mead")->capture_default_str();
    cmd->add_option("--cutoff", o->cutoff, "Fock cutoff for pseudospin sums")->capture_default_str();
    cmd->add_option("-o,--out", o->output, "JSON output path, - for stdout")->capture_default_str();
    cmd->callback([o, &out] {
        const TwoModeState state = single_state(o->state);
        std::ostringstream notes;
        const CorrelationFunction e = o->mode == "tomographic"
                                          ? tomographic_correlation_fn(state)
                                          : pseudospin_correlation(state, o->source, o->cutoff, notes);
        ChshOptimizerConfig cfg;
        cfg.grid = o->grid;
        cfg.starts = o->starts;
        const ChshMaximum m = maximize_chsh(e, cfg);
        json j{{"max_B", m.value},
               {"argmax_angles", angles_json(m.angles)},
               {"method", o->mode},
               {"grid_value", m.grid_value},
               {"state", state.describe()}};
        emit(o->output, j.dump(2) + "\n", out);
        out << notes.str();
    });
}

void add_sample(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        double theta1 = 0.0, theta2 = 0.0, inflation = 1.5;
        std::string theta1_s = "0", theta2_s = "0", output;
        std::size_t count = 10000;
        std::uint64_t seed = 1;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("sample", "Draw seeded homodyne outcome pairs (X1, X2)");
    add_state_options(cmd, o->state);
    cmd->add_option("--theta1", o->theta1_s, "theta1")->capture_default_str();
    cmd->add_option("--theta2", o->theta2_s, "theta2")->capture_default_str();
    cmd->add_option("--count", o->count, "number of pairs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o->seed, "64-bit seed")->capture_default_str();
    cmd->add_option("--inflation", o->inflation, "rejection envelope width factor")->capture_default_str();
    cmd->add_option("-o,--out", o->output, "CSV output path; a JSON sidecar is written next to it")->required();
    cmd->callback([o, &out] {
        const TwoModeState state = single_state(o->state);
        const double t1 = parse_angle(o->theta1_s), t2 = parse_angle(o->theta2_s);
        const SampleBatch batch = sample_state(state, t1, t2, o->count, o->seed, o->inflation);
        std::string csv = "X1,X2\n";
        for (const auto& p : batch.pairs) csv += format_number(p[0]) + "," + format_number(p[1]) + "\n";
        write_file_atomic(o->output, csv);
        const EstimatedProbs e = estimate_probs(batch);
        json side{{"state", batch.state},
                  {"angles", {{"theta1", t1}, {"theta2", t2}}},
                  {"seed", batch.seed},
                  {"count", batch.pairs.size()},
                  {"acceptance_rate", batch.acceptance_rate},
                  {"estimated",
                   {{"w_pp", e.probs.w_pp}, {"w_pm", e.probs.w_pm}, {"w_mp", e.probs.w_mp}, {"w_mm", e.probs.w_mm}}},
                  {"standard_errors", {{"w_pp", e.se_pp}, {"w_pm", e.se_pm}, {"w_mp", e.se_mp}, {"w_mm", e.se_mm}}}};
        write_file_atomic(o->output + ".json", side.dump(2) + "\n");
        out << side.dump(2) << '\n';
    });
}

void add_reconstruct(CLI::App& app, std::ostream& out)
{
    struct Opts {
        StateOptions state;
        std::string method = "kernel", input = "vacuum", q = "-3:3:0.1", p = "-3:3:0.1", output = "-";
        int cutoff = 6, source_cutoff = 40;
        double regularizer = 0.05;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("reconstruct", "Single-mode reconstruction from a homodyne tomogram (hbar = 1)");
    add_state_options(cmd, o->state);
    cmd->add_option("--method", o->method, "kernel (Fock matrix), wigner (inverse Fourier) or exact")
        ->check(CLI::IsMember({"kernel", "wigner", "exact"}))
        ->capture_default_str();
    cmd->add_option("--input", o->input, "vacuum, single-photon, or marginal (mode 1 of --state)")
        ->check(CLI::IsMember({"vacuum", "single-photon", "marginal"}))
        ->capture_default_str();
    cmd->add_option("--cutoff", o->cutoff, "reconstructed Fock cutoff (<= 10)")->capture_default_str();
    cmd->add_option("--source-cutoff", o->source_cutoff, "Fock cutoff of the marginal input")->capture_default_str();
    cmd->add_option("--regularizer", o->regularizer, "largest kernel regularizer eps")->capture_default_str();
    cmd->add_option("--q", o->q, "q grid for --method wigner")->capture_default_str();
    cmd->add_option("--p", o->p, "p grid for --method wigner")->capture_default_str();
    cmd->add_option("-o,--out", o->output, "output path, - for stdout")->capture_default_str();
    cmd->callback([o, &out] {
        std::optional<DensityMatrix> exact;
        SingleModeTomogram w;
        if (o->input == "vacuum") {
            w = [](double x, double) { return std::exp(-x * x) / kSqrtPi; };
        } else if (o->input == "single-photon") {
            w = [](double x, double) { return 2.0 / kSqrtPi * x * x * std::exp(-x * x); };
        } else {
            exact = reduce_to_mode1(density_matrix(single_state(o->state), o->source_cutoff));
            const DensityMatrix rho = *exact;
            w = [rho](double x, double t) { return single_mode_tomogram(rho, x, t); };
        }
        if (o->method == "exact") {
            if (!exact) {
                DensityMatrix::Sparse sp(o->cutoff, o->cutoff);
                sp.insert(o->input == "vacuum" ? 0 : 1, o->input == "vacuum" ? 0 : 1) = 1.0;
                exact = DensityMatrix(o->cutoff, 1, std::move(sp), 0.0);
            }
            emit(o->output, density_matrix_to_json(*exact).dump(2) + "\n", out);
        } else if (o->method == "kernel") {
            KernelConfig cfg;
            cfg.regularizer = o->regularizer;
            const auto r = kernel_reconstruct_density(w, o->cutoff, cfg);
            json j = density_matrix_to_json(r.rho);
            j["regularizers"] = r.regularizers;
            j["extrapolation_change"] = r.extrapolation_change;
            emit(o->output, j.dump(2) + "\n", out);
        } else {
            const auto samples = TomogramSamples::sample(w, 8.0, 321, 64);
            const auto g = inverse_fourier_wigner(samples, parse_values(o->q), parse_values(o->p));
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < g.q.size(); ++i)
                for (std::size_t j = 0; j < g.p.size(); ++j)
                    rows.push_back({g.q[i], g.p[j], g.values(static_cast<long>(i), static_cast<long>(j))});
            emit(o->output, to_csv({"q", "p", "W"}, rows), out);
            out << "# integral " << format_number(g.integral) << ", max imaginary residue "
                << format_number(g.max_imag_residue) << '\n';
        }
    });
}

void add_figures(CLI::App& app, std::ostream& out)
{
    struct Opts {
        std::string dir = "figures", r_sweep = "0.3:1.5:0.01";
        int theta_points = 361;
        int cutoff = kDefaultCutoff;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("figures", "Write the six figure datasets and a checksum manifest");
    cmd->add_option("--out-dir", o->dir, "output directory")->capture_default_str();
    cmd->add_option("--theta-points", o->theta_points, "points on each [0, 2 pi] angle axis")->capture_default_str();
    cmd->add_option("--r-sweep", o->r_sweep, "pair-coherent amplitudes for the B(r) curve")->capture_default_str();
    cmd->add_option("--cutoff", o->cutoff, "Fock cutoff for the pair-coherent pseudospin sum")->capture_default_str();
    cmd->callback([o, &out] {
        if (o->theta_points < 2) throw ConfigError("--theta-points must be >= 2");
        std::vector<double> angles(o->theta_points);
        for (int i = 0; i < o->theta_points; ++i) angles[i] = 2.0 * kPi * i / (o->theta_points - 1);
        const std::vector<double> lambdas{0.20, 0.54, 0.96};
        const std::vector<int> ns{1, 3, 5};
        json files = json::object();
        auto write = [&](const std::string& name, const std::string& csv) {
            write_file_atomic(std::filesystem::path(o->dir) / name, csv);
            files[name] = sha256_hex(csv);
        };
        const std::vector<std::string> prob_cols{"theta1", "theta2", "w_pp", "w_pm", "w_mp", "w_mm"};
        auto prob_rows = [&](const TwoModeState& s, double param, std::vector<std::vector<double>>& rows) {
            for (double t : angles) {
                const auto p = sign_binned_closed_form(s, t, 0.0);
                rows.push_back({param, t, 0.0, p.w_pp, p.w_pm, p.w_mp, p.w_mm});
            }
        };
        auto with_first = [](std::string first, std::vector<std::string> rest) {
            rest.insert(rest.begin(), std::move(first));
            return rest;
        };

        std::vector<std::vector<double>> rows;
        for (double l : lambdas) prob_rows(TwoModeState::squeezed_vacuum(l), l, rows);
        write("fig1a.csv", to_csv(with_first("lambda", prob_cols), rows));

        rows.clear();
        for (double l : lambdas) {
            const double xx = closed_form_xx(TwoModeState::squeezed_vacuum(l));
            auto e = [xx](double u, double v) { return coplanar_correlation(xx, u, v); };
            for (double tu : angles) rows.push_back({l, tu, chsh(e, {tu, -kPi / 2, kPi / 4, -kPi / 4})});
        }
        write("fig1b.csv", to_csv({"lambda", "theta_u", "B"}, rows));

        rows.clear();
        for (int n : ns) prob_rows(TwoModeState::fock_pair(n), n, rows);
        write("fig2a.csv", to_csv(with_first("n", prob_cols), rows));

        rows.clear();
        {
            const double xx = closed_form_xx(TwoModeState::fock_pair(1));
            auto e = [xx](double u, double v) { return coplanar_correlation(xx, u, v); };
            for (double tu : angles) rows.push_back({1.0, tu, chsh(e, {tu, kPi, 0.0, kPi / 2})});
        }
        write("fig2b.csv", to_csv({"n", "theta_u", "B"}, rows));

        rows.clear();
        const BellAnglesQuadrature fig3a{kPi / 2, 0.0, -kPi / 4, -3.0 * kPi / 4};
        std::vector<double> rs = parse_values(o->r_sweep), bs;
        for (double r : rs) {
            const double b = chsh(tomographic_correlation_fn(TwoModeState::pair_coherent(r)), fig3a);
            bs.push_back(b);
            rows.push_back({r, fig3a.theta1, fig3a.theta1p, fig3a.theta2, fig3a.theta2p, b});
        }
        write("fig3a.csv", to_csv({"r", "theta1", "theta1p", "theta2", "theta2p", "B"}, rows));

        rows.clear();
        const auto check = pair_coherent_pseudospin_check(1.05, o->cutoff);
        {
            const double xx = check.agree ? check.closed_form : check.fock;
            auto e = [xx](double u, double v) { return coplanar_correlation(xx, u, v); };
            for (double tu : angles) rows.push_back({1.05, tu, chsh(e, {tu, kPi, 0.0, kPi / 2})});
        }
        write("fig3b.csv", to_csv({"r", "theta_u", "B"}, rows));

        json runs = json::array();
        for (const auto& r : violating_runs(rs, bs)) runs.push_back({r.lo, r.hi});
        const json manifest{{"files", files},
                            {"config",
                             {{"out_dir", o->dir},
                              {"theta_points", o->theta_points},
                              {"r_sweep", o->r_sweep},
                              {"cutoff", o->cutoff},
                              {"lambdas", lambdas},
                              {"n", ns}}},
                            {"fig3a_violating_intervals", runs},
                            {"fig3b_pseudospin_check", discrepancy_json(check)}};
        write_file_atomic(std::filesystem::path(o->dir) / "manifest.json", manifest.dump(2) + "\n");
        out << manifest.dump(2) << '\n';
    });
}

} // namespace

void register_commands(CLI::App& app, std::ostream& out)
{
    add_tomogram(app, out);
    add_probs(app, out);
    add_bell_scan(app, out);
    add_pseudospin(app, out);
    add_optimize(app, out);
    add_sample(app, out);
    add_reconstruct(app, out);
    add_figures(app, out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tomographic and pseudospin Bell tests for two-mode continuous-variable states"};
    app.set_config("--config", "", "read options from a key = value file (flags override it)");
    app.require_subcommand(1);
    register_commands(app, out);
    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return 2;
    } catch (const DimensionError& e) {
        err << "dimension mismatch: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedStateError& e) {
        err << "unsupported: " << e.what() << '\n';
        return 2;
    } catch (const AccuracyError& e) {
        err << "accuracy failure: " << e.what() << '\n';
        return 3;
    } catch (const EnvelopeError& e) {
        err << "sampling envelope violated: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace tomobell::cli
