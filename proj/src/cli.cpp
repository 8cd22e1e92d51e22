#include "modop/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>

#include "modop/error.hpp"
#include "modop/gswindows.hpp"
#include "modop/io.hpp"
#include "modop/modspace.hpp"
#include "modop/parallel.hpp"
#include "modop/psido.hpp"
#include "modop/stft.hpp"
#include "modop/symbols.hpp"
#include "modop/verify.hpp"
#include "modop/weights.hpp"

namespace modop::cli {

namespace {

using json = nlohmann::ordered_json;
using Settings = std::map<std::string, std::string>;

struct Key {
    std::string name;
    std::string fallback;
    std::string help;
};

// Leaf subcommand: every key is a --flag, a config entry, or its default,
// in decreasing priority.
struct Command {
    CLI::App* app = nullptr;
    std::vector<Key> keys;
    std::map<std::string, std::string> given;
    std::function<int(const Settings&, std::ostream&, std::ostream&)> body;
};

const std::vector<Key> kCommonKeys{
    {"config", "", "flat key = value file supplying defaults for every flag"},
    {"seed", "0", "seed for randomized test functions"},
    {"threads", "1", "worker thread cap"},
};

void add_keys(Command& cmd, std::vector<Key> keys) {
    keys.insert(keys.end(), kCommonKeys.begin(), kCommonKeys.end());
    for (const auto& k : keys) cmd.app->add_option("--" + k.name, cmd.given[k.name], k.help);
    cmd.keys = std::move(keys);
}

Settings resolve(const Command& cmd) {
    Settings s;
    for (const auto& k : cmd.keys) s[k.name] = k.fallback;
    auto given = [&](const std::string& name) { return cmd.app->get_option("--" + name)->count() > 0; };
    if (given("config")) {
        for (const auto& [k, v] : io::load_config(cmd.given.at("config"))) {
            if (!s.contains(k)) throw InvalidArgument("config key '" + k + "' is not used by '" + cmd.app->get_name() + "'");
            s[k] = v;
        }
    }
    for (const auto& k : cmd.keys) {
        if (given(k.name)) s[k.name] = cmd.given.at(k.name);
    }
    return s;
}

double number(const Settings& s, const std::string& key) {
    const std::string& v = s.at(key);
    if (v == "inf") return kInf;
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidArgument("--" + key + ": '" + v + "' is not a number");
    }
}

int integer(const Settings& s, const std::string& key) {
    const double d = number(s, key);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw InvalidArgument("--" + key + ": expected an integer");
    return static_cast<int>(d);
}

const std::string& required(const Settings& s, const std::string& key) {
    const std::string& v = s.at(key);
    if (v.empty()) throw InvalidArgument("--" + key + " is required");
    return v;
}

std::vector<int> integer_list(const Settings& s, const std::string& key) {
    std::istringstream is(s.at(key));
    std::vector<int> out;
    std::string tok;
    while (is >> tok) {
        Settings one{{key, tok}};
        out.push_back(integer(one, key));
    }
    if (out.empty()) throw InvalidArgument("--" + key + " needs at least one value");
    return out;
}

Grid grid_of(const Settings& s) {
    return Grid::make(integer(s, "dim"), number(s, "half_width"), integer(s, "points"));
}

ClassMode mode_of(const Settings& s) {
    const std::string& m = s.at("mode");
    if (m == "some") return ClassMode::SomeR;
    if (m == "every") return ClassMode::EveryR;
    throw InvalidArgument("--mode must be 'some' or 'every'");
}

json point_json(const Point& p, int n) {
    json a = json::array();
    for (int i = 0; i < n; ++i) a.push_back(p[static_cast<std::size_t>(i)]);
    return a;
}

json moderation_json(const ModerationReport& r, int n) {
    return json{{"max_ratio", r.max_ratio},
                {"worst_x", point_json(r.worst_x, n)},
                {"worst_y", point_json(r.worst_y, n)},
                {"tested_constant", r.tested_constant},
                {"pass", r.passed}};
}

void emit(const json& j, const Settings& s, std::ostream& out) {
    const std::string& path = s.at("out");
    if (path.empty()) {
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write " + path);
    f << j.dump(2) << "\n";
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int cmd_stft(const Settings& s, std::ostream&, std::ostream&) {
    const SampledFunction f = io::load_function(required(s, "in"));
    const SampledFunction phi = parse_window(s.at("window"), f.grid);
    const std::string& format = s.at("format");
    if (format != "csv" && format != "binary") throw InvalidArgument("--format must be 'csv' or 'binary'");
    io::save_field(required(s, "out"), stft(f, phi), format == "binary");
    return kExitOk;
}

int cmd_apply(const Settings& s, std::ostream&, std::ostream& err) {
    const SampledFunction f = io::load_function(required(s, "in"));
    const Symbol a = parse_symbol(required(s, "symbol"), f.grid);
    const QuantizationParam A = QuantizationParam::scalar(number(s, "A"));
    const std::string& method = s.at("method");
    SampledFunction g;
    if (method == "fft") {
        g = apply(a, A, f);
    } else if (method == "direct") {
        const Symbol b = quantization_change(a, A, QuantizationParam::scalar(0.0));
        print_warnings(b.warnings, err);
        g = apply_kn(b, f, ApplyMethod::Direct);
    } else {
        throw InvalidArgument("--method must be 'fft' or 'direct'");
    }
    io::save_function(required(s, "out"), g);
    return kExitOk;
}

int cmd_norm(const Settings& s, std::ostream& out, std::ostream&) {
    const SampledFunction f = io::load_function(required(s, "in"));
    const SampledFunction phi = parse_window(s.at("window"), f.grid);
    out << io::format_double(mod_norm(f, phi, parse_weight(s.at("weight")), parse_space(s.at("space")))) << "\n";
    return kExitOk;
}

int cmd_quantize(const Settings& s, std::ostream&, std::ostream& err) {
    Symbol a;
    if (!s.at("in").empty()) {
        a = Symbol::from_field(io::load_field(s.at("in")), s.at("in"));
    } else {
        a = parse_symbol(required(s, "symbol"), grid_of(s));
    }
    const Symbol b = quantization_change(a, QuantizationParam::scalar(number(s, "A1")),
                                         QuantizationParam::scalar(number(s, "A2")));
    print_warnings(b.warnings, err);
    io::save_field(required(s, "out"), b.field, s.at("format") == "binary");
    return kExitOk;
}

int cmd_weights(const Settings& s, std::ostream& out, std::ostream&) {
    const Weight w = parse_weight(required(s, "weight"));
    const Grid base = grid_of(s);
    const std::string& check = s.at("check");
    const bool phase = s.at("layout") == "phase";
    if (!phase && s.at("layout") != "spatial") throw InvalidArgument("--layout must be 'phase' or 'spatial'");
    const Grid g = phase ? base.product(base.dual()) : base;
    const int n = g.dim();
    json j{{"check", check}, {"weight", w.describe()}};
    bool passed = false;
    if (check == "moderate") {
        const ModerationReport r = check_moderate(w, parse_weight(s.at("v")), g, number(s, "C"));
        j["report"] = moderation_json(r, n);
        passed = r.passed;
    } else if (check == "class") {
        const ClassReport r = check_class(w, number(s, "s"), number(s, "sigma"), number(s, "r"), g, mode_of(s),
                                          number(s, "C"), phase ? Layout::Phase : Layout::Spatial);
        json sweep = json::array();
        for (std::size_t i = 0; i < r.r_values.size(); ++i) {
            json e = moderation_json(r.per_r[i], n);
            e["r"] = r.r_values[i];
            sweep.push_back(e);
        }
        j["sweep"] = sweep;
        passed = r.passed;
    } else if (check == "smooth") {
        std::optional<double> width;
        std::optional<double> K;
        if (!s.at("width").empty()) width = number(s, "width");
        if (!s.at("K").empty()) K = number(s, "K");
        const SmoothEquivalent r = smooth_equivalent(w, g, width, K);
        j["ratio_min"] = r.ratio_min;
        j["ratio_max"] = r.ratio_max;
        j["worst"] = point_json(r.worst, n);
        passed = true;
    } else {
        throw InvalidArgument("--check must be 'moderate', 'class' or 'smooth'");
    }
    j["pass"] = passed;
    emit(j, s, out);
    return passed ? kExitOk : kExitFailed;
}

int cmd_verify_bound(const Settings& s, std::ostream& out, std::ostream& err) {
    std::vector<Grid> grids;
    for (int N : integer_list(s, "points")) grids.push_back(Grid::make(1, number(s, "half_width"), N));
    const Symbol a = parse_symbol(required(s, "symbol"), grids.front());
    std::vector<TestFunction> tests = default_testset();
    const int extra = integer(s, "random_tests");
    if (extra > 0) {
        const auto rnd = random_gaussians(extra, static_cast<std::uint64_t>(number(s, "seed")));
        tests.insert(tests.end(), rnd.begin(), rnd.end());
    }
    BoundOptions opts;
    opts.window = s.at("window");
    opts.drift_tolerance = number(s, "drift_tolerance");
    opts.s = number(s, "s");
    opts.sigma = number(s, "sigma");
    opts.mode = mode_of(s);
    const MixedNormSpec spec = parse_space(s.at("space"));
    const BoundReport r = empirical_bound(a, QuantizationParam::scalar(number(s, "A")), parse_weight(s.at("omega")),
                                          parse_weight(s.at("omega0")), spec, tests, grids, opts);
    print_warnings(r.warnings, err);

    json j;
    j["symbol"] = s.at("symbol");
    j["A"] = number(s, "A");
    j["omega"] = s.at("omega");
    j["omega0"] = s.at("omega0");
    j["space"] = describe(spec);
    j["window"] = opts.window;
    json grid_reports = json::array();
    for (std::size_t i = 0; i < grids.size(); ++i) {
        json ratios = json::array();
        for (const auto& e : r.ratios[i]) ratios.push_back(json{{"id", e.id}, {"ratio", e.ratio}});
        grid_reports.push_back(json{{"half_width", grids[i].axis(0).half_width},
                                    {"points", grids[i].axis(0).points},
                                    {"sup", r.sups[i]},
                                    {"ratios", ratios}});
    }
    j["grids"] = grid_reports;
    j["sup_ratio"] = r.sup_ratio;
    j["drift"] = r.drift;
    j["drift_tolerance"] = opts.drift_tolerance;
    j["hypotheses"] = json{{"evidence", to_string(r.evidence)},
                           {"mode", opts.mode == ClassMode::EveryR ? "every" : "some"},
                           {"verified", r.hypotheses_verified}};
    j["pass"] = r.passed;
    j["warnings"] = r.warnings;
    emit(j, s, out);
    if (!r.hypotheses_verified) return kExitFailed;
    return r.passed ? kExitOk : kExitFailed;
}

int cmd_verify_lemma(const Settings& s, std::ostream& out, std::ostream&) {
    const Grid g = Grid::make(1, number(s, "half_width"), integer(s, "points"));
    const Symbol a = parse_symbol(required(s, "symbol"), g);
    const Weight omega = parse_weight(s.at("omega"));
    const Weight v1 = parse_weight(s.at("v1"));
    const Weight v2 = parse_weight(s.at("v2"));
    const SampledFunction phi = parse_window(s.at("window"), g);
    const SampledFunction f = parse_window(s.at("f"), g);
    const double tol = number(s, "tolerance");

    std::ostringstream csv;
    csv << "quadrature_points,max_rel,l2_rel,max_abs\n";
    std::vector<double> residuals;
    for (int M : integer_list(s, "quadrature")) {
        KernelOptions o;
        o.x_stride = integer(s, "x_stride");
        o.xi_stride = integer(s, "xi_stride");
        o.quadrature_points = M;
        const IdentityResidual r = check_stft_identity(a, f, phi, omega, v1, v2, o);
        csv << M << "," << io::format_double(r.max_rel) << "," << io::format_double(r.l2_rel) << ","
            << io::format_double(r.max_abs) << "\n";
        residuals.push_back(r.max_rel);
    }
    bool passed = residuals.back() <= tol;
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        if (residuals[i - 1] > tol) passed = passed && residuals[i] <= 0.5 * residuals[i - 1];
    }
    if (s.at("out").empty()) {
        out << csv.str();
    } else {
        std::ofstream file(s.at("out"));
        if (!file) throw InvalidArgument("cannot write " + s.at("out"));
        file << csv.str();
    }
    return passed ? kExitOk : kExitFailed;
}

const std::vector<Key> kGridKeys{
    {"dim", "1", "grid dimension"},
    {"half_width", "10", "grid half-width L"},
    {"points", "256", "points per axis N"},
};

std::vector<Key> with_grid(std::vector<Key> keys) {
    keys.insert(keys.end(), kGridKeys.begin(), kGridKeys.end());
    return keys;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-frequency toolkit: STFT, modulation norms, pseudo-differential operators", "modop"};
    app.require_subcommand(1);
    bool dry_run = false;
    app.add_flag("--dry-run", dry_run, "print the resolved configuration and exit");

    std::vector<std::unique_ptr<Command>> commands;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::vector<Key> keys,
                    std::function<int(const Settings&, std::ostream&, std::ostream&)> body) {
        auto cmd = std::make_unique<Command>();
        cmd->app = parent->add_subcommand(name, help);
        cmd->app->add_flag("--dry-run", dry_run, "print the resolved configuration and exit");
        add_keys(*cmd, std::move(keys));
        cmd->body = std::move(body);
        commands.push_back(std::move(cmd));
    };

    leaf(&app, "stft", "short-time Fourier transform of a sampled function",
         {{"in", "", "function CSV"}, {"window", "gauss 0 1", "window expression"}, {"out", "", "output field"},
          {"format", "csv", "csv or binary"}},
         cmd_stft);
    leaf(&app, "apply", "apply Op_A(a) to a sampled function",
         {{"symbol", "", "symbol expression"}, {"A", "0", "quantization parameter"}, {"in", "", "function CSV"},
          {"out", "", "output CSV"}, {"method", "fft", "fft or direct"}},
         cmd_apply);
    leaf(&app, "norm", "modulation-space norm ||V_phi f omega||_B",
         {{"in", "", "function CSV"}, {"window", "gauss 0 1", "window expression"},
          {"space", "Lpq p=2 q=2", "mixed-norm space"}, {"weight", "one", "weight expression"}},
         cmd_norm);
    leaf(&app, "quantize", "change of quantization for a symbol",
         with_grid({{"symbol", "", "symbol expression"}, {"in", "", "sampled symbol field instead of --symbol"},
                    {"A1", "0", "source quantization"}, {"A2", "0.5", "target quantization"},
                    {"out", "", "output field"}, {"format", "csv", "csv or binary"}}),
         cmd_quantize);
    leaf(&app, "weights", "moderateness, class and smooth-equivalent checks",
         with_grid({{"check", "moderate", "moderate, class or smooth"},
                    {"weight", "", "weight expression"},
                    {"v", "one", "moderating weight"},
                    {"C", "2", "tested constant"},
                    {"s", "1", "spatial exponent"},
                    {"sigma", "1", "frequency exponent"},
                    {"r", "1", "rate for class checks"},
                    {"mode", "some", "some or every"},
                    {"layout", "phase", "phase (x, xi grid) or spatial"},
                    {"width", "", "mollifier width"},
                    {"K", "", "equivalence bound"},
                    {"out", "", "JSON report path (stdout if empty)"}}),
         cmd_weights);

    CLI::App* verify = app.add_subcommand("verify", "empirical operator bounds and kernel identity residuals");
    verify->require_subcommand(1);
    leaf(verify, "bound", "empirical operator bound between modulation spaces",
         {{"symbol", "", "symbol expression"},
          {"A", "0", "quantization parameter"},
          {"omega", "one", "target weight"},
          {"omega0", "one", "symbol weight"},
          {"space", "Lpq p=2 q=2", "mixed-norm space"},
          {"window", "gauss 0 1", "window expression"},
          {"half_width", "10", "grid half-width"},
          {"points", "128 256", "refinement point counts"},
          {"s", "1", "spatial Gevrey index"},
          {"sigma", "1", "frequency Gevrey index"},
          {"mode", "some", "some (Roumieu) or every (Beurling)"},
          {"drift_tolerance", "0.1", "allowed refinement drift"},
          {"random_tests", "0", "extra random Gaussians drawn with --seed"},
          {"out", "", "JSON report path (stdout if empty)"}},
         cmd_verify_bound);
    leaf(verify, "lemma32", "STFT identity residuals for the kernel H under quadrature refinement",
         {{"symbol", "gauss_sym 1 1", "symbol expression"},
          {"omega", "one", "weight omega"},
          {"v1", "one", "weight v1"},
          {"v2", "one", "weight v2"},
          {"window", "gauss 0 1", "window expression"},
          {"f", "gauss 0.5 1", "test function (window expression)"},
          {"half_width", "8", "grid half-width"},
          {"points", "128", "grid points"},
          {"x_stride", "4", "coarse x stride"},
          {"xi_stride", "2", "coarse xi stride"},
          {"quadrature", "32 64 128", "z quadrature sizes"},
          {"tolerance", "1e-4", "residual tolerance at the finest quadrature"},
          {"out", "", "CSV path (stdout if empty)"}},
         cmd_verify_lemma);

    if (!args.empty() && args[0].rfind('-', 0) != 0 && app.get_subcommand_no_throw(args[0]) == nullptr) {
        err << "usage error: unknown subcommand '" << args[0] << "'\n";
        return kExitUsage;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    for (const auto& cmd : commands) {
        if (!cmd->app->parsed()) continue;
        try {
            const Settings s = resolve(*cmd);
            if (dry_run) {
                for (const auto& [k, v] : s) out << k << " = " << v << "\n";
                return kExitOk;
            }
            set_thread_count(integer(s, "threads"));
            return cmd->body(s, out, err);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    err << "usage error: no subcommand given\n";
    return kExitUsage;
}

}  // namespace modop::cli
