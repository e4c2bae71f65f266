#include "commands.hpp"

#include "atomq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace atomq::cli {

namespace {

using namespace std::complex_literals;

[[noreturn]] void fail_key(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

// Documents may be given inline or as a path to a JSON file.
Json load_document(const std::string& key, const Json& value) {
    if (!value.is_string()) return value;
    const auto path = value.get<std::string>();
    std::ifstream in(path);
    if (!in) fail_key(key, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return io::parse(buf.str());
    } catch (const std::exception& e) {
        fail_key(key, path + ": " + e.what());
    }
}

template <class Fn>
auto interpret(const std::string& key, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail_key(key, e.what());
    }
}

double as_number(const std::string& key, const Json& v) {
    if (!v.is_number()) fail_key(key, "expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail_key(key, "expected a finite number");
    return x;
}

void row_complex(Json& row, const std::string& stem, Complex z) {
    row[stem + "_re"] = z.real();
    row[stem + "_im"] = z.imag();
}

} // namespace

// ---------------------------------------------------------------------------
// ConfigReader

ConfigReader::ConfigReader(const Json& config, std::vector<std::string> allowed_keys)
    : config_(config.is_null() ? Json::object() : config) {
    if (!config_.is_object()) throw ConfigError("config must be a JSON object");
    allowed_keys.emplace_back("seed");
    for (const auto& [key, value] : config_.items()) {
        if (std::find(allowed_keys.begin(), allowed_keys.end(), key) == allowed_keys.end()) {
            std::string known;
            for (const auto& k : allowed_keys) known += (known.empty() ? "" : ", ") + k;
            throw ConfigError("unknown config key '" + key + "' (expected one of: " + known + ")");
        }
    }
}

const Json& ConfigReader::pick(const std::string& key, const Json& fallback) {
    auto it = config_.find(key);
    return it == config_.end() ? fallback : *it;
}

double ConfigReader::number(const std::string& key, double fallback) {
    const double x = as_number(key, pick(key, Json(fallback)));
    resolved_[key] = x;
    return x;
}

std::vector<double> ConfigReader::numbers(const std::string& key, std::vector<double> fallback) {
    const Json fb = fallback;
    const Json& v = pick(key, fb);
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) out.push_back(as_number(key, x));
    } else {
        out.push_back(as_number(key, v));
    }
    if (out.empty()) fail_key(key, "list must not be empty");
    resolved_[key] = out;
    return out;
}

std::vector<std::size_t> ConfigReader::counts(const std::string& key, std::vector<std::size_t> fallback) {
    const Json fb = fallback;
    const Json& v = pick(key, fb);
    std::vector<std::size_t> out;
    const auto one = [&](const Json& x) {
        const double d = as_number(key, x);
        if (d < 1.0 || d != std::floor(d) || d > 9007199254740992.0) {
            fail_key(key, "expected positive integers, got " + x.dump());
        }
        out.push_back(static_cast<std::size_t>(d));
    };
    if (v.is_array()) {
        for (const auto& x : v) one(x);
    } else {
        one(v);
    }
    if (out.empty()) fail_key(key, "list must not be empty");
    resolved_[key] = out;
    return out;
}

Distribution ConfigReader::distribution(const std::string& key, const Json& fallback) {
    const Json doc = load_document(key, pick(key, fallback));
    auto d = interpret(key, [&] { return io::distribution_from_json(doc); });
    resolved_[key] = io::to_json(d);
    return d;
}

ConvolutionFamily ConfigReader::family(const std::string& key, const Json& fallback) {
    const Json doc = load_document(key, pick(key, fallback));
    auto f = interpret(key, [&] { return io::family_from_json(doc); });
    resolved_[key] = io::to_json(f);
    return f;
}

State ConfigReader::state(const std::string& key, const Json& fallback) {
    const Json doc = load_document(key, pick(key, fallback));
    auto s = interpret(key, [&] { return io::state_from_json(doc); });
    resolved_[key] = io::to_json(s);
    return s;
}

AtomicVector ConfigReader::vector(const std::string& key, const Json& fallback) {
    const Json doc = load_document(key, pick(key, fallback));
    auto u = interpret(key, [&] { return io::vector_from_json(doc); });
    resolved_[key] = io::to_json(u);
    return u;
}

std::vector<std::pair<std::string, AlgebraElement>> ConfigReader::named_elements(
    const std::string& key, const std::vector<std::pair<std::string, AlgebraElement>>& fallback) {
    std::vector<std::pair<std::string, AlgebraElement>> out;
    auto it = config_.find(key);
    if (it == config_.end()) {
        out = fallback;
    } else {
        const Json doc = load_document(key, *it);
        if (!doc.is_object() || doc.empty()) fail_key(key, "expected a non-empty object of name -> operator");
        for (const auto& [name, element] : doc.items()) {
            out.emplace_back(name, interpret(key + "." + name, [&] { return io::algebra_from_json(element); }));
        }
    }
    Json echo = Json::object();
    for (const auto& [name, A] : out) echo[name] = io::to_json(A);
    resolved_[key] = std::move(echo);
    return out;
}

Json ConfigReader::object(const std::string& key, const Json& fallback) {
    const Json doc = load_document(key, pick(key, fallback));
    if (!doc.is_object()) fail_key(key, "expected an object");
    resolved_[key] = doc;
    return doc;
}

// ---------------------------------------------------------------------------
// Shared defaults

std::vector<std::pair<std::string, AlgebraElement>> default_probes() {
    const auto combo = Complex{0.5, 0.0} * compose(AlgebraElement::multiplication(BoundedFunction::indicator(0.0, 1.0)),
                                                    AlgebraElement::shift(0.25)) +
                       Complex{0.0, 1.0} * AlgebraElement::multiplication(BoundedFunction::exponential(-0.5));
    return {
        {"identity", AlgebraElement::identity()},
        {"shift_0.5", AlgebraElement::shift(0.5)},
        {"indicator_-0.5_1", AlgebraElement::multiplication(BoundedFunction::indicator(-0.5, 1.0))},
        {"exp_0.75", AlgebraElement::multiplication(BoundedFunction::exponential(0.75))},
        {"combo", combo},
    };
}

State default_semigroup_state() {
    return MixedState::make({
        {0.6, PureState::normalized(AtomicVector::make({{0.0, 1.0}, {0.5, 1i}}))},
        {0.4, PureState::make(AtomicVector::unit(-1.0))},
    });
}

NormalState default_dephase_state() {
    Eigen::VectorXcd v(3);
    v << 1.0, 1.0, 1i;
    v /= std::sqrt(3.0);
    Eigen::MatrixXcd rho = v * v.adjoint();
    return NormalState::make({0.0, 1.0, 2.5}, std::move(rho));
}

// ---------------------------------------------------------------------------
// chernoff

Report run_chernoff(const Json& config, const RunOptions& opts) {
    ConfigReader cfg(config, {"distribution", "t", "n", "probes"});
    const auto d = cfg.distribution("distribution", Json{{"kind", "rademacher"}});
    const double t = cfg.number("t", 1.0);
    std::vector<std::size_t> default_n;
    for (std::size_t n = 10; n <= 10240; n *= 2) default_n.push_back(n);
    const auto ns = cfg.counts("n", default_n);
    const auto probes = cfg.numbers("probes", {0.5, 1.0, 2.0, 3.0});

    const auto mean = d.mean();
    const auto var = d.variance();
    if (!mean || !var) {
        throw ConfigError("chernoff: distribution '" + d.name() +
                          "' has no finite variance, so the walk has no Gaussian limit to compare against");
    }
    if (std::abs(*mean) > 1e-15) throw ConfigError("chernoff: distribution '" + d.name() + "' must have mean zero");
    if (*var <= 0.0) throw ConfigError("chernoff: distribution '" + d.name() + "' must have positive variance");
    if (t <= 0.0) fail_key("t", "must be positive");

    Report r;
    r.schema = "chernoff/1";
    r.command = "chernoff";
    r.seed = opts.seed;
    r.columns = {"n", "sup_error", "rate_estimate"};

    std::vector<double> errors;
    for (std::size_t n : ns) errors.push_back(chernoff_error(d, t, n, probes));
    for (std::size_t k = 0; k < ns.size(); ++k) {
        Json row{{"n", ns[k]}, {"sup_error", errors[k]}, {"rate_estimate", nullptr}};
        auto twice = std::find(ns.begin(), ns.end(), 2 * ns[k]);
        if (twice != ns.end()) {
            const double next = errors[static_cast<std::size_t>(twice - ns.begin())];
            if (errors[k] > 0.0 && next > 0.0) row["rate_estimate"] = std::log2(errors[k] / next);
        }
        r.add_row(std::move(row));
    }
    r.config = cfg.resolved();
    return r;
}

// ---------------------------------------------------------------------------
// cesaro

Report run_cesaro(const Json& config, const RunOptions& opts) {
    ConfigReader cfg(config, {"delta_p", "X", "gap_s", "steps"});
    const auto deltas = cfg.numbers("delta_p", {0.0, 1.0});
    const auto windows = cfg.numbers("X", {1e2, 1e3, 1e4});
    const double gap_s = cfg.number("gap_s", 1.0);
    const double steps = cfg.number("steps", 0.0);
    if (steps < 0.0 || steps != std::floor(steps)) fail_key("steps", "expected a non-negative integer (0 = automatic)");
    for (double X : windows) {
        if (X <= 0.0) fail_key("X", "windows must be positive");
    }

    Report r;
    r.schema = "cesaro/1";
    r.command = "cesaro";
    r.seed = opts.seed;
    r.columns = {"X",        "delta_p",      "numeric_re",       "numeric_im",     "kronecker",
                 "abs_error", "window_oracle", "quadrature_error", "modulation_gap", "gap_oracle"};

    // Finite-window mean of exp(i w x) over [-X, X].
    const auto window_mean = [](double w, double X) { return w == 0.0 ? 1.0 : std::sin(w * X) / (w * X); };

    for (double X : windows) {
        CesaroQuadratureConfig q{X, static_cast<std::size_t>(steps)};
        const auto gap = interpret("gap_s", [&] { return modulation_gap_numeric(gap_s, 0.0, q); });
        for (double dp : deltas) {
            const auto u = TrigPolynomial::exponential(0.0);
            const auto v = TrigPolynomial::exponential(dp);
            const Complex numeric = interpret("X", [&] { return cesaro_inner_numeric(u, v, q); });
            const Complex kron = cesaro_inner_analytic(u, v);
            const double oracle = window_mean(dp, X);
            Json row{{"X", X}, {"delta_p", dp}};
            row_complex(row, "numeric", numeric);
            row["kronecker"] = kron.real();
            row["abs_error"] = std::abs(numeric - kron);
            row["window_oracle"] = oracle;
            row["quadrature_error"] = std::abs(numeric - oracle);
            row["modulation_gap"] = gap;
            row["gap_oracle"] = 2.0 - 2.0 * window_mean(gap_s, X);
            r.add_row(std::move(row));
        }
    }
    r.config = cfg.resolved();
    return r;
}

// ---------------------------------------------------------------------------
// walk-decay

Report run_walk_decay(const Json& config, const RunOptions& opts) {
    ConfigReader cfg(config, {"distribution", "samples", "p", "chunk_size", "clt_band", "shift_tolerance"});
    const auto d = cfg.distribution("distribution", Json{{"kind", "gaussian"}, {"D", 1.0}});
    const auto sizes = cfg.counts("samples", {1000, 10000, 100000});
    const double p = cfg.number("p", 1.0);
    const double chunk_d = cfg.number("chunk_size", 4096.0);
    if (chunk_d < 1.0 || chunk_d != std::floor(chunk_d) || chunk_d > 1e9) fail_key("chunk_size", "expected a positive integer");
    const auto chunk = static_cast<std::size_t>(chunk_d);
    const double band = cfg.number("clt_band", 4.0);
    const double shift_tol = cfg.number("shift_tolerance", 0.0);

    Report r;
    r.schema = "walk-decay/1";
    r.command = "walk-decay";
    r.seed = opts.seed;
    r.columns = {"N",         "shift_overlap_abs", "shift_std_error", "shift_reference", "shift_abs_error",
                 "mod_mean_re", "mod_mean_im",     "chi_re",          "chi_im",          "mod_abs_error",
                 "mod_std_error", "mod_error_sqrt_n"};
    if (d.has_discrete_part()) {
        r.warnings.push_back("distribution '" + d.name() +
                             "' has atoms; shifted overlaps are not almost surely zero, compared against the exact "
                             "atomic sum instead");
    }

    const AtomicVector u = AtomicVector::unit(0.0);
    const AtomicVector v = AtomicVector::unit(0.0);
    const AtomicVector w = AtomicVector::unit(p);

    Complex shift_ref{};
    for (const auto& [a, prob] : d.discrete_atoms()) shift_ref += prob * inner(apply_shift(a, u), v);
    const Complex chi = d.chi(p);

    struct Partial {
        ComplexAccumulator shift;
        ComplexAccumulator mod;
    };
    for (std::size_t row_index = 0; row_index < sizes.size(); ++row_index) {
        const std::size_t N = sizes[row_index];
        const SeededRng base(opts.seed, row_index);
        const auto parts = run_partitioned<Partial>(N, chunk, opts.threads, [&](std::size_t c, std::size_t b, std::size_t e) {
            SeededRng rng = base.split(c);
            Partial acc;
            for (std::size_t k = b; k < e; ++k) {
                const double xi = d.sample(rng);
                acc.shift.add(inner(apply_shift(xi, u), v));
                acc.mod.add(inner(w, apply_mod(xi, w)));
            }
            return acc;
        });
        Partial total;
        for (const auto& part : parts) {
            total.shift.merge(part.shift);
            total.mod.merge(part.mod);
        }
        const auto se = total.shift.estimate();
        const auto me = total.mod.estimate();
        const double shift_err = std::abs(se.mean - shift_ref);
        const double mod_err = std::abs(me.mean - chi);
        const double root_n = std::sqrt(static_cast<double>(N));

        Json row{{"N", N},
                 {"shift_overlap_abs", std::abs(se.mean)},
                 {"shift_std_error", se.std_error},
                 {"shift_reference", std::abs(shift_ref)},
                 {"shift_abs_error", shift_err}};
        row_complex(row, "mod_mean", me.mean);
        row_complex(row, "chi", chi);
        row["mod_abs_error"] = mod_err;
        row["mod_std_error"] = me.std_error;
        row["mod_error_sqrt_n"] = mod_err * root_n;
        r.add_row(std::move(row));

        if (!(shift_err <= shift_tol + band * se.std_error)) r.passed = false;
        if (!(mod_err <= band / root_n)) r.passed = false;
    }
    r.config = cfg.resolved();
    return r;
}

// ---------------------------------------------------------------------------
// semigroup

Report run_semigroup(const Json& config, const RunOptions& opts) {
    ConfigReader cfg(config, {"family", "times", "state", "probes", "tolerance"});
    const auto fam = cfg.family("family", Json{{"kind", "gaussian"}, {"rate", 1.0}});
    const auto times = cfg.numbers("times", {0.0, 0.1, 0.5, 1.0, 2.0});
    const auto base = cfg.state("state", io::to_json(default_semigroup_state()));
    const auto probes = cfg.named_elements("probes", default_probes());
    const double tol = cfg.number("tolerance", 1e-10);
    for (double t : times) {
        if (t < 0.0) fail_key("times", "semigroup times must be non-negative");
    }

    Report r;
    r.schema = "semigroup/1";
    r.command = "semigroup";
    r.seed = opts.seed;
    r.columns = {"t", "s", "probe", "two_step_re", "two_step_im", "one_step_re", "one_step_im", "residual"};

    for (double t : times) {
        for (double s : times) {
            const State two = semigroup_T(fam, t, semigroup_T(fam, s, base));
            const State one = semigroup_T(fam, t + s, base);
            for (const auto& [name, A] : probes) {
                const Complex a = evaluate(two, A);
                const Complex b = evaluate(one, A);
                const double residual = std::abs(a - b);
                Json row{{"t", t}, {"s", s}, {"probe", name}};
                row_complex(row, "two_step", a);
                row_complex(row, "one_step", b);
                row["residual"] = residual;
                r.add_row(std::move(row));
                if (!(residual <= tol)) r.passed = false;
            }
        }
    }
    r.config = cfg.resolved();
    return r;
}

// ---------------------------------------------------------------------------
// dephase

Report run_dephase(const Json& config, const RunOptions& opts) {
    ConfigReader cfg(config, {"family", "times", "state", "tolerance"});
    const auto fam = cfg.family("family", Json{{"kind", "gaussian"}, {"rate", 1.0}});
    const auto times = cfg.numbers("times", {0.0, 0.5, 1.0, 2.0, 4.0});
    const auto state = cfg.state("state", io::to_json(State{default_dephase_state()}));
    const double tol = cfg.number("tolerance", 1e-12);
    if (!std::holds_alternative<NormalState>(state)) fail_key("state", "dephase needs a normal state (kind 'normal')");
    const auto& rho = std::get<NormalState>(state);
    for (double t : times) {
        if (t < 0.0) fail_key("times", "semigroup times must be non-negative");
    }

    Report r;
    r.schema = "dephase/1";
    r.command = "dephase";
    r.seed = opts.seed;
    r.columns = {"t", "j", "k", "delta_p", "magnitude", "factor", "chi_reference", "abs_error"};

    const auto m = static_cast<Eigen::Index>(rho.support.size());
    for (double t : times) {
        const NormalState out = semigroup_Phi(fam, t, rho);
        const Distribution law = fam.at(t);
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index k = j + 1; k < m; ++k) {
                const double dp = rho.support[static_cast<std::size_t>(j)] - rho.support[static_cast<std::size_t>(k)];
                const Complex chi = law.chi(dp);
                const Complex before = rho.matrix(j, k);
                const Complex after = out.matrix(j, k);
                const double err = std::abs(after - chi * before);
                Json row{{"t", t}, {"j", j}, {"k", k}, {"delta_p", dp}, {"magnitude", std::abs(after)}};
                row["factor"] = before == Complex{} ? Json(nullptr) : Json(std::abs(after) / std::abs(before));
                row["chi_reference"] = chi.real();
                row["abs_error"] = err;
                r.add_row(std::move(row));
                if (!(err <= tol)) r.passed = false;
            }
        }
    }
    r.config = cfg.resolved();
    return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"verify", "chernoff", "cesaro", "walk-decay", "semigroup", "dephase"};
    return names;
}

Report run_command(std::string_view command, const Json& config, const RunOptions& opts) {
    if (command == "verify") return run_verify(config, opts);
    if (command == "chernoff") return run_chernoff(config, opts);
    if (command == "cesaro") return run_cesaro(config, opts);
    if (command == "walk-decay") return run_walk_decay(config, opts);
    if (command == "semigroup") return run_semigroup(config, opts);
    if (command == "dephase") return run_dephase(config, opts);
    throw ConfigError("unknown command '" + std::string(command) + "'");
}

} // namespace atomq::cli
