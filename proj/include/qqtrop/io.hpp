#pragma once

// JSON ingestion and serialization of specs and exact values.

#include "qqtrop/systems.hpp"

#include "json.hpp"

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qqtrop {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline Rational rational_from_json(const json& j, const std::string& where)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw SpecError("malformed_scalar", where + ": " + e.what());
        }
    }
    throw SpecError("malformed_scalar", where + ": expected an integer or a \"num/den\" string");
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            ok = ok || it.key() == k;
        if (!ok)
            throw SpecError("unknown_key", where + it.key());
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
        throw SpecError("missing_key", where + key);
    return obj.at(key);
}

inline long integer_from_json(const json& j, const std::string& where)
{
    if (!j.is_number_integer())
        throw SpecError("malformed_integer", where + " must be an integer");
    return j.get<long>();
}

} // namespace detail

/// Integers, "num/den" strings or {"re": ..., "im": ...}.
inline Scalar scalar_from_json(const json& j, const std::string& where = "scalar")
{
    if (j.is_object()) {
        detail::reject_unknown(j, {"re", "im"}, where + ".");
        Rational re = j.contains("re") ? detail::rational_from_json(j.at("re"), where + ".re") : Rational(0);
        Rational im = j.contains("im") ? detail::rational_from_json(j.at("im"), where + ".im") : Rational(0);
        return Scalar(std::move(re), std::move(im));
    }
    return Scalar(detail::rational_from_json(j, where));
}

inline json to_json(const Scalar& s)
{
    if (s.is_real())
        return s.re().get_str();
    return json{{"re", s.re().get_str()}, {"im", s.im().get_str()}};
}

inline json to_json(const Rational& r) { return r.get_str(); }

/// Dense coefficients of s^offset .. s^order (through the last nonzero one when exact);
/// exact series carry "order": null.
inline json to_json(const Series& s)
{
    const long lo = std::min(0l, s.offset());
    const long hi = s.is_exact() ? s.offset() + static_cast<long>(s.coeffs().size()) - 1 : s.order();
    json c = json::array();
    for (long e = lo; e <= hi; ++e)
        c.push_back(to_json(s.coeff(e)));
    json out{{"N", s.ram_index()}};
    if (lo != 0)
        out["offset"] = lo;
    out["order"] = s.is_exact() ? json(nullptr) : json(s.order());
    out["coeffs"] = std::move(c);
    return out;
}

inline Series series_from_json(const json& j)
{
    const int N = static_cast<int>(detail::integer_from_json(detail::require(j, "N", "series."), "series.N"));
    const long lo = j.contains("offset") ? detail::integer_from_json(j.at("offset"), "series.offset") : 0;
    std::vector<Scalar> c;
    for (const auto& v : detail::require(j, "coeffs", "series."))
        c.push_back(scalar_from_json(v, "series.coeffs"));
    long order = Series::kExact;
    if (j.contains("order") && !j.at("order").is_null())
        order = detail::integer_from_json(j.at("order"), "series.order");
    return Series(N, lo, std::move(c), order);
}

template <class T>
json to_json_array(const std::vector<T>& v)
{
    json out = json::array();
    for (const auto& x : v)
        out.push_back(to_json(x));
    return out;
}

/// Parses and validates a spec document. Lambda may carry "coeffs" (d_1 .. d_deg), which must
/// match the shifts. Unknown keys are rejected.
inline ProblemSpec spec_from_json(const json& j, bool require_nonzero_origin = true)
{
    using namespace detail;
    if (!j.is_object())
        throw SpecError("malformed_spec", "top level must be an object");
    reject_unknown(j, {"format", "mode", "lambda", "m", "n", "q", "K", "N_max", "tropical"}, "");
    if (j.contains("format") && integer_from_json(j.at("format"), "format") != kFormatVersion)
        throw SpecError("unsupported_format", "format " + j.at("format").dump());

    ProblemSpec s;
    const json& mode = require(j, "mode", "");
    if (mode == "qq")
        s.mode = Mode::differential;
    else if (mode == "QQ")
        s.mode = Mode::difference;
    else
        throw SpecError("unknown_mode", mode.dump());

    const json& lam = require(j, "lambda", "");
    if (!lam.is_object())
        throw SpecError("malformed_spec", "lambda must be an object");
    reject_unknown(lam, {"shifts", "coeffs"}, "lambda.");
    std::vector<ShiftMultiplicity> shifts;
    for (const auto& e : require(lam, "shifts", "lambda.")) {
        if (!e.is_array() || e.size() != 2)
            throw SpecError("malformed_shift", "expected [shift, multiplicity], got " + e.dump());
        shifts.push_back({scalar_from_json(e[0], "lambda.shifts"),
                          static_cast<int>(integer_from_json(e[1], "multiplicity"))});
    }
    s.lambda = MasterData::from_shifts(shifts);
    if (lam.contains("coeffs")) {
        s.lambda.d.clear();
        for (const auto& c : lam.at("coeffs"))
            s.lambda.d.push_back(scalar_from_json(c, "lambda.coeffs"));
    }

    s.m = static_cast<int>(integer_from_json(require(j, "m", ""), "m"));
    s.n = static_cast<int>(integer_from_json(require(j, "n", ""), "n"));
    s.K = integer_from_json(require(j, "K", ""), "K");
    if (j.contains("N_max")) {
        s.N_max = static_cast<int>(integer_from_json(j.at("N_max"), "N_max"));
        if (s.N_max < 1)
            throw SpecError("invalid_N_max", "N_max must be positive");
    }
    if (s.mode == Mode::difference)
        s.q = scalar_from_json(require(j, "q", ""), "q");
    else if (j.contains("q"))
        throw SpecError("unknown_key", "q (differential mode has no q)");
    if (j.contains("tropical")) {
        const json& tr = j.at("tropical");
        if (!tr.is_object())
            throw SpecError("malformed_spec", "tropical must be an object");
        reject_unknown(tr, {"size_cap"}, "tropical.");
        if (tr.contains("size_cap"))
            s.size_cap = static_cast<int>(integer_from_json(tr.at("size_cap"), "tropical.size_cap"));
    }
    s.validate(require_nonzero_origin);
    return s;
}

/// Canonical echo: sorted shifts and derived coefficients, every field explicit.
inline json to_json(const ProblemSpec& s)
{
    json shifts = json::array();
    for (const auto& sm : s.lambda.shifts)
        shifts.push_back(json::array({to_json(sm.a), sm.mult}));
    json out{{"format", kFormatVersion}, {"mode", mode_name(s.mode)}};
    out["lambda"] = json{{"shifts", std::move(shifts)}, {"coeffs", to_json_array(s.lambda.d)}};
    out["m"] = s.m;
    out["n"] = s.n;
    if (s.mode == Mode::difference)
        out["q"] = to_json(s.q);
    out["K"] = s.K;
    if (s.N_max > 0)
        out["N_max"] = s.N_max;
    out["tropical"] = json{{"size_cap", s.size_cap}};
    return out;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SpecError("unreadable_file", path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError("malformed_json", e.what());
    }
}

} // namespace qqtrop
