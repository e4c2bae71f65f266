#include "atomq/json_io.hpp"

#include "atomq/errors.hpp"

#include <cmath>

namespace atomq::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

[[noreturn]] void schema_error(std::string_view path, const std::string& what) {
    throw ParseError("invalid document at '" + std::string(path.empty() ? "/" : path) + "': " + what);
}

const Json& member(const Json& j, const char* key, std::string_view path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(path, std::string("missing key '") + key + "'");
    return *it;
}

double number(const Json& j, const char* key, std::string_view path) {
    const Json& v = member(j, key, path);
    if (!v.is_number()) schema_error(std::string(path) + "/" + key, "expected a number");
    return v.get<double>();
}

const Json& array(const Json& j, const char* key, std::string_view path) {
    const Json& v = member(j, key, path);
    if (!v.is_array()) schema_error(std::string(path) + "/" + key, "expected an array");
    return v;
}

std::string text(const Json& j, const char* key, std::string_view path) {
    const Json& v = member(j, key, path);
    if (!v.is_string()) schema_error(std::string(path) + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::string at_index(std::string_view path, std::size_t i) { return std::string(path) + "/" + std::to_string(i); }

Json atoms_json(std::span<const Atom> atoms) {
    Json arr = Json::array();
    for (const Atom& a : atoms) arr.push_back(Json{{"p", a.p}, {"re", a.c.real()}, {"im", a.c.imag()}});
    return arr;
}

std::vector<std::pair<double, Complex>> atoms_from(const Json& arr, std::string_view path) {
    std::vector<std::pair<double, Complex>> pairs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = at_index(path, i);
        pairs.emplace_back(number(arr[i], "p", p), Complex{number(arr[i], "re", p), number(arr[i], "im", p)});
    }
    return pairs;
}

PureState pure_from(const Json& j, std::string_view path) {
    return PureState::make(vector_from_json(member(j, "vector", path)));
}

BaseState base_from(const Json& j, std::string_view path) {
    State s = state_from_json(j);
    return std::visit(overloaded{
                          [](PureState& p) -> BaseState { return std::move(p); },
                          [](NormalState& n) -> BaseState { return std::move(n); },
                          [](MixedState& m) -> BaseState { return std::move(m); },
                          [&](auto&) -> BaseState {
                              schema_error(path, "averaged base must be a pure, normal or mixed state");
                          },
                      },
                      s);
}

Json base_json(const BaseState& b) {
    return std::visit([](const auto& s) { return to_json(State{s}); }, b);
}

} // namespace

Json parse(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed JSON: " + std::string(e.what()), e.byte);
    }
}

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j, std::string_view path) {
    return {number(j, "re", path), number(j, "im", path)};
}

Json to_json(const AtomicVector& u) { return Json{{"atoms", atoms_json(u.atoms())}}; }

AtomicVector vector_from_json(const Json& j) {
    const auto pairs = atoms_from(array(j, "atoms", ""), "/atoms");
    return AtomicVector::make(pairs);
}

Json to_json(const TrigPolynomial& u) { return Json{{"terms", atoms_json(u.terms())}}; }

TrigPolynomial trig_from_json(const Json& j) {
    const auto pairs = atoms_from(array(j, "terms", ""), "/terms");
    return TrigPolynomial::make(pairs);
}

Json to_json(const Distribution& d) {
    return std::visit(overloaded{
                          [](const law::Gaussian& g) { return Json{{"kind", "gaussian"}, {"D", g.variance}}; },
                          [](const law::Cauchy& c) { return Json{{"kind", "cauchy"}, {"gamma", c.scale}}; },
                          [](const law::Rademacher&) { return Json{{"kind", "rademacher"}}; },
                          [](const law::Uniform& u) { return Json{{"kind", "uniform"}, {"a", u.a}, {"b", u.b}}; },
                          [](const law::PointMass& p) { return Json{{"kind", "point"}, {"a", p.a}}; },
                          [](const law::Mixture& m) {
                              Json comps = Json::array();
                              for (const auto& c : m.components) {
                                  comps.push_back(Json{{"weight", c.weight}, {"law", to_json(*c.law)}});
                              }
                              return Json{{"kind", "mixture"}, {"components", comps}};
                          },
                      },
                      d.kind());
}

namespace {

Distribution distribution_at(const Json& j, std::string_view path) {
    const std::string kind = text(j, "kind", path);
    if (kind == "gaussian") return Distribution::gaussian(number(j, "D", path));
    if (kind == "cauchy") return Distribution::cauchy(number(j, "gamma", path));
    if (kind == "rademacher") return Distribution::rademacher();
    if (kind == "uniform") return Distribution::uniform(number(j, "a", path), number(j, "b", path));
    if (kind == "point") return Distribution::point_mass(number(j, "a", path));
    if (kind == "mixture") {
        const Json& comps = array(j, "components", path);
        std::vector<std::pair<double, Distribution>> parts;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string p = at_index(std::string(path) + "/components", i);
            parts.emplace_back(number(comps[i], "weight", p), distribution_at(member(comps[i], "law", p), p + "/law"));
        }
        return Distribution::mixture(std::move(parts));
    }
    schema_error(path, "unknown distribution kind '" + kind + "'");
}

} // namespace

Distribution distribution_from_json(const Json& j) { return distribution_at(j, ""); }

Json to_json(const ConvolutionFamily& f) {
    return Json{{"kind", f.kind() == ConvolutionFamily::Kind::Gaussian ? "gaussian" : "cauchy"}, {"rate", f.rate()}};
}

ConvolutionFamily family_from_json(const Json& j) {
    const std::string kind = text(j, "kind", "");
    const double rate = j.contains("rate") ? number(j, "rate", "") : 1.0;
    if (kind == "gaussian") return ConvolutionFamily::gaussian(rate);
    if (kind == "cauchy") return ConvolutionFamily::cauchy(rate);
    schema_error("/kind", "family must be 'gaussian' or 'cauchy'");
}

Json to_json(const AlgebraElement& A) {
    Json terms = Json::array();
    for (const AlgebraTerm& t : A.terms()) {
        Json term = std::visit(
            overloaded{
                [&](const shape::Constant& c) { return Json{{"f", "one"}, {"a", t.shift}, {"coef", to_json(t.coef * c.value)}}; },
                [&](const shape::Interval& iv) {
                    return Json{{"f", "indicator"}, {"a", t.shift}, {"coef", to_json(t.coef * iv.value)},
                                {"lo", iv.lo}, {"hi", iv.hi}};
                },
                [&](const shape::Exponential& e) {
                    return Json{{"f", "exp"}, {"a", t.shift}, {"coef", to_json(t.coef * e.amplitude)}, {"k", e.k}};
                },
                [&](const shape::PointSet& ps) {
                    Json w = Json::array();
                    for (const auto& [x, v] : ps.values) w.push_back(Json{{"x", x}, {"re", v.real()}, {"im", v.imag()}});
                    return Json{{"f", t.f.id()}, {"a", t.shift}, {"coef", to_json(t.coef)}, {"weights", w}};
                },
                [&](std::monostate) -> Json {
                    throw UnsupportedError("function '" + t.f.id() + "' is a program-level callable and has no JSON form");
                },
            },
            t.f.shape());
        terms.push_back(std::move(term));
    }
    return Json{{"terms", terms}};
}

AlgebraElement algebra_from_json(const Json& j) {
    const Json& arr = array(j, "terms", "");
    std::vector<AlgebraTerm> terms;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const Json& t = arr[i];
        const std::string path = at_index("/terms", i);
        const std::string f = text(t, "f", path);
        const double a = t.contains("a") ? number(t, "a", path) : 0.0;
        const Complex coef = t.contains("coef") ? complex_from_json(member(t, "coef", path), path + "/coef") : Complex{1.0};
        if (f == "one") {
            terms.push_back({coef, BoundedFunction::one(), a});
        } else if (f == "indicator") {
            terms.push_back({coef, BoundedFunction::indicator(number(t, "lo", path), number(t, "hi", path)), a});
        } else if (f == "exp") {
            terms.push_back({coef, BoundedFunction::exponential(number(t, "k", path)), a});
        } else {
            if (!t.contains("weights")) schema_error(path, "function '" + f + "' needs tabulated 'weights'");
            const Json& w = array(t, "weights", path);
            std::map<double, Complex> values;
            for (std::size_t k = 0; k < w.size(); ++k) {
                const std::string wp = at_index(path + "/weights", k);
                values[number(w[k], "x", wp)] += Complex{number(w[k], "re", wp), number(w[k], "im", wp)};
            }
            terms.push_back({coef, BoundedFunction::point_set(std::move(values), f), a});
        }
    }
    return AlgebraElement(std::move(terms));
}

Json to_json(const State& s) {
    return std::visit(
        overloaded{
            [](const PureState& p) { return Json{{"kind", "pure"}, {"vector", to_json(p.u)}}; },
            [](const NormalState& n) {
                Json support = Json::array();
                for (double p : n.support) support.push_back(p);
                Json rows = Json::array();
                for (Eigen::Index j = 0; j < n.matrix.rows(); ++j) {
                    Json row = Json::array();
                    for (Eigen::Index k = 0; k < n.matrix.cols(); ++k) row.push_back(to_json(n.matrix(j, k)));
                    rows.push_back(std::move(row));
                }
                return Json{{"kind", "normal"}, {"support", support}, {"matrix", rows}};
            },
            [](const MixedState& m) {
                Json comps = Json::array();
                for (const auto& [w, p] : m.components) comps.push_back(Json{{"weight", w}, {"vector", to_json(p.u)}});
                return Json{{"kind", "mixed"}, {"components", comps}};
            },
            [](const AveragedState& a) {
                Json laws = Json::array();
                for (const Distribution& d : a.smoothing) laws.push_back(to_json(d));
                return Json{{"kind", "averaged"}, {"base", base_json(a.base)}, {"smoothing", laws}};
            },
            [](const ConvexState& c) {
                Json comps = Json::array();
                for (const auto& comp : c.components) {
                    comps.push_back(Json{{"weight", comp.weight}, {"state", to_json(*comp.state)}});
                }
                return Json{{"kind", "convex"}, {"components", comps}};
            },
        },
        s);
}

State state_from_json(const Json& j) {
    const std::string kind = text(j, "kind", "");
    if (kind == "pure") return pure_from(j, "");
    if (kind == "normal") {
        const Json& sup = array(j, "support", "");
        const Json& rows = array(j, "matrix", "");
        std::vector<double> support;
        for (std::size_t i = 0; i < sup.size(); ++i) {
            if (!sup[i].is_number()) schema_error(at_index("/support", i), "expected a number");
            support.push_back(sup[i].get<double>());
        }
        const auto m = static_cast<Eigen::Index>(support.size());
        if (static_cast<Eigen::Index>(rows.size()) != m) schema_error("/matrix", "row count must match the support");
        Eigen::MatrixXcd rho(m, m);
        for (Eigen::Index r = 0; r < m; ++r) {
            const Json& row = rows[static_cast<std::size_t>(r)];
            const std::string rp = at_index("/matrix", static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) schema_error(rp, "row length must match the support");
            for (Eigen::Index c = 0; c < m; ++c) {
                rho(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], at_index(rp, static_cast<std::size_t>(c)));
            }
        }
        return NormalState::make(std::move(support), std::move(rho));
    }
    if (kind == "mixed") {
        const Json& comps = array(j, "components", "");
        std::vector<std::pair<double, PureState>> parts;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string p = at_index("/components", i);
            parts.emplace_back(number(comps[i], "weight", p), pure_from(comps[i], p));
        }
        return MixedState::make(std::move(parts));
    }
    if (kind == "averaged") {
        AveragedState a{base_from(member(j, "base", ""), "/base"), {}};
        const Json& sm = member(j, "smoothing", "");
        if (sm.is_array()) {
            for (std::size_t i = 0; i < sm.size(); ++i) a.smoothing.push_back(distribution_at(sm[i], at_index("/smoothing", i)));
        } else {
            a.smoothing.push_back(distribution_at(sm, "/smoothing"));
        }
        return a;
    }
    if (kind == "convex") {
        const Json& comps = array(j, "components", "");
        std::vector<std::pair<double, State>> parts;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string p = at_index("/components", i);
            parts.emplace_back(number(comps[i], "weight", p), state_from_json(member(comps[i], "state", p)));
        }
        return ConvexState::make(std::move(parts));
    }
    schema_error("/kind", "unknown state kind '" + kind + "'");
}

} // namespace atomq::io
