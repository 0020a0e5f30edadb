#pragma once

// Orchestration: enumerate, lift, certify, Bethe-verify and tropical-check, with JSON reports.

#include "qqtrop/bethe.hpp"
#include "qqtrop/infinite.hpp"
#include "qqtrop/io.hpp"
#include "qqtrop/lifting.hpp"
#include "qqtrop/tropical.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace qqtrop {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int tropical_not_origin = 1;
inline constexpr int validation = 2;
inline constexpr int ramification = 3;
inline constexpr int certificate = 4;
} // namespace exit_code

struct Failure {
    std::optional<std::size_t> base;
    std::string code;
    std::string detail;
};

struct BranchOutcome {
    LiftedSolution lift;
    std::optional<BetheReport> bethe;
    std::optional<std::string> bethe_error; // reason code when the report could not be formed
};

struct BaseOutcome {
    InfiniteSolution base;
    Jacobian jacobian;
    std::vector<BranchOutcome> branches;
    std::optional<SearchDiagnostics> search; // degenerate bases
    std::vector<Failure> failures;
    double seconds = 0;
};

struct TropicalOutcome {
    std::string status; // "origin_only", "not_origin", "hypothesis_not_met", "skipped"
    std::string detail;
    std::optional<Prevariety> prevariety;
    std::optional<bool> lifts_inside; // every certified lift's valuation vector lies in the prevariety
    double seconds = 0;
};

struct SolveResult {
    ProblemSpec spec;
    std::vector<BaseOutcome> bases;
    TropicalOutcome tropical;
    std::vector<Failure> failures;
    int exit_code = exit_code::ok;
    double seconds = 0;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs tasks on up to `jobs` threads; each task writes only its own slot.
inline void run_parallel(std::vector<std::function<void()>>& tasks, int jobs)
{
    const std::size_t W = std::min<std::size_t>(std::max(1, jobs), tasks.size());
    if (W <= 1) {
        for (auto& t : tasks)
            t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < W; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
                tasks[i]();
        });
    for (auto& th : pool)
        th.join();
}

/// The message of a coded error without its "code: " prefix.
inline std::string detail_of(const std::string& code, const std::string& what)
{
    return what.rfind(code + ": ", 0) == 0 ? what.substr(code.size() + 2) : what;
}

inline BaseOutcome solve_base(const InfiniteSolution& sol, const ProblemSpec& spec, std::size_t index)
{
    const auto t0 = std::chrono::steady_clock::now();
    BaseOutcome out;
    out.base = sol;
    out.jacobian = jacobian_at_zero(sol, spec);
    std::vector<LiftedSolution> lifts;
    if (sol.tier == Tier::generic) {
        lifts.push_back(lift_newton(sol, spec));
    } else {
        BranchSearch bs = search_branches(sol, spec, spec.effective_N_max());
        out.search = bs.diagnostics;
        lifts = std::move(bs.branches);
        if (lifts.empty())
            out.failures.push_back({index, "ramification_bound_exceeded", bs.diagnostics.summary()});
    }
    try {
        for (auto& ls : lifts) {
            BranchOutcome b;
            b.lift = std::move(ls);
            if (!b.lift.cert.passes)
                out.failures.push_back({index, "certificate_failed",
                                        "residual valuation below " + b.lift.cert.bound.get_str()});
            try {
                b.bethe = bethe_report(b.lift, spec);
                if (b.bethe->emitted && !b.bethe->residuals.passes)
                    out.failures.push_back({index, "bethe_residual_below_bound",
                                            "bound " + b.bethe->residuals.bound.get_str()});
            } catch (const BetheError& e) {
                b.bethe_error = e.code;
                if (e.code != "undecidable_q_distinctness")
                    out.failures.push_back({index, e.code, detail_of(e.code, e.what())});
            }
            out.branches.push_back(std::move(b));
        }
    } catch (const LiftError& e) {
        out.failures.push_back({index, e.code, detail_of(e.code, e.what())});
    }
    out.seconds = seconds_since(t0);
    return out;
}

inline TropicalPoint valuation_vector(const LiftedSolution& ls)
{
    TropicalPoint w;
    for (const auto* v : {&ls.point.x, &ls.point.y})
        for (const auto& s : *v)
            w.push_back(s.valuation().value_or(Rational(s.order() + 1, ls.N)));
    return w;
}

} // namespace detail

/// Tropical check shared by `solve` and `tropical`. Theorem mode needs every d_k nonzero.
inline TropicalOutcome tropical_check(const ProblemSpec& spec, bool theorem_mode)
{
    const auto t0 = std::chrono::steady_clock::now();
    TropicalOutcome out;
    if (spec.size() > spec.size_cap) {
        out.status = "skipped";
        out.detail = "m + n = " + std::to_string(spec.size()) + " > " +
                     std::to_string(spec.size_cap);
        return out;
    }
    if (theorem_mode) {
        try {
            check_theorem_hypothesis(spec);
        } catch (const SpecError& e) {
            out.status = "hypothesis_not_met";
            out.detail = e.detail;
            return out;
        }
    }
    out.prevariety = prevariety(spec, theorem_mode);
    out.status = out.prevariety->is_origin_only ? "origin_only" : "not_origin";
    out.seconds = detail::seconds_since(t0);
    return out;
}

struct SolveOptions {
    int jobs = 1;
    bool tropical = true;
};

inline SolveResult solve(const ProblemSpec& spec, const SolveOptions& opt = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult r;
    r.spec = spec;
    const auto sols = enumerate_infinite_solutions(spec);
    r.bases.resize(sols.size());
    std::vector<std::function<void()>> tasks;
    if (opt.tropical)
        tasks.push_back([&] { r.tropical = tropical_check(spec, true); });
    else
        r.tropical = {"skipped", "disabled", std::nullopt, std::nullopt, 0};
    for (std::size_t i = 0; i < sols.size(); ++i)
        tasks.push_back([&, i] { r.bases[i] = detail::solve_base(sols[i], spec, i); });
    detail::run_parallel(tasks, opt.jobs);

    bool ramification = false, certificate = false;
    for (const auto& b : r.bases)
        for (const auto& f : b.failures) {
            r.failures.push_back(f);
            (f.code == "ramification_bound_exceeded" ? ramification : certificate) = true;
        }
    r.exit_code = ramification ? exit_code::ramification : certificate ? exit_code::certificate : exit_code::ok;

    if (r.tropical.prevariety) {
        bool inside = true;
        for (const auto& b : r.bases)
            for (const auto& br : b.branches)
                if (br.lift.cert.passes)
                    inside = inside && !exclusion_witness(spec, detail::valuation_vector(br.lift));
        r.tropical.lifts_inside = inside;
    }
    r.seconds = detail::seconds_since(t0);
    return r;
}

// ---- JSON views ----------------------------------------------------------------------------

inline json to_json(const Failure& f)
{
    json out;
    out["base"] = f.base ? json(*f.base) : json(nullptr);
    out["code"] = f.code;
    out["detail"] = f.detail;
    return out;
}

inline json to_json(const NondegeneracyFlags& f)
{
    json out{{"simple_zeros", f.simple_zeros}, {"disjoint_from_lambda", f.disjoint_from_lambda}};
    if (f.q_distinct) {
        out["q_distinct"] = *f.q_distinct;
        out["window"] = f.window;
    }
    out["collisions"] = f.collisions;
    out["passes"] = f.passes();
    return out;
}

/// Residual values are shown through s^order; beyond the lift's order they carry no information.
inline json to_json(const BetheReport& r, long order)
{
    json out{{"form", r.mode == Mode::differential ? "gaudin" : "xxz"}, {"twist", r.twist}};
    out["roots"] = to_json_array(r.roots);
    out["flags"] = to_json(r.flags);
    out["emitted"] = r.emitted;
    if (r.emitted) {
        json res = json::array();
        for (std::size_t i = 0; i < r.residuals.values.size(); ++i) {
            const auto& v = r.residuals.valuations[i];
            res.push_back(json{{"valuation", v ? to_json(*v) : json(nullptr)},
                               {"value", to_json(r.residuals.values[i].truncated(order))}});
        }
        out["residuals"] = std::move(res);
        out["bound"] = to_json(r.residuals.bound);
        out["passes"] = r.residuals.passes;
    }
    if (r.mode == Mode::difference) {
        json strings = json::array();
        std::size_t longest = 0;
        for (const auto& s : r.strings) {
            strings.push_back(json{{"top", to_json(s.top)}, {"length", s.length}});
            longest = std::max<std::size_t>(longest, static_cast<std::size_t>(s.length));
        }
        out["q_strings"] = std::move(strings);
        // Every Lambda splits into strings; all of length one means no q-string structure.
        out["q_string_shaped"] = longest > 1;
    }
    return out;
}

inline json to_json(const BranchOutcome& b, const ProblemSpec& spec)
{
    const auto& ls = b.lift;
    json out{{"N", ls.N}, {"K", ls.K}, {"method", ls.method}};
    out["x"] = to_json_array(ls.point.x);
    out["y"] = to_json_array(ls.point.y);
    if (spec.mode == Mode::difference)
        out["alpha"] = to_json(ls.alpha);
    out["certificate"] = json{{"valuation", ls.cert.valuation ? to_json(*ls.cert.valuation) : json(nullptr)},
                              {"identically_zero", ls.cert.identically_zero()},
                              {"bound", to_json(ls.cert.bound)},
                              {"passes", ls.cert.passes}};
    if (b.bethe)
        out["bethe"] = to_json(*b.bethe, ls.K + ls.N);
    else if (b.bethe_error)
        out["bethe"] = json{{"error", *b.bethe_error}};
    return out;
}

inline json to_json(const BaseOutcome& b, std::size_t index, const ProblemSpec& spec)
{
    json out{{"index", index}, {"tier", tier_name(b.base.tier)}, {"l", b.base.l}};
    out["split"] = to_json_array(b.base.split);
    out["x0"] = to_json_array(b.base.x0);
    out["y0"] = to_json_array(b.base.y0);
    if (spec.mode == Mode::difference)
        out["scaled_overlap"] = b.base.scaled_overlap;
    out["jacobian_rank"] = b.jacobian.rank;
    bool certified = !b.branches.empty();
    for (const auto& br : b.branches)
        certified = certified && br.lift.cert.passes;
    out["status"] = !b.failures.empty() ? b.failures.front().code : std::string("certified");
    out["certified"] = certified;
    out["branch_count"] = b.branches.size();
    // Minimum over branches; null when every residual vanishes identically.
    std::optional<Rational> v;
    for (const auto& br : b.branches)
        if (br.lift.cert.valuation && (!v || *br.lift.cert.valuation < *v))
            v = br.lift.cert.valuation;
    out["residual_valuation"] = v ? to_json(*v) : json(nullptr);
    json branches = json::array();
    for (const auto& br : b.branches)
        branches.push_back(to_json(br, spec));
    out["branches"] = std::move(branches);
    if (b.search)
        out["search"] = b.search->summary();
    json failures = json::array();
    for (const auto& f : b.failures)
        failures.push_back(to_json(f));
    out["failures"] = std::move(failures);
    return out;
}

inline json to_json(const TropicalCell& c)
{
    json lo = json::array(), hi = json::array();
    for (std::size_t i = 0; i < c.lower.size(); ++i) {
        lo.push_back(c.lower[i] ? to_json(*c.lower[i]) : json(nullptr));
        hi.push_back(c.upper[i] ? to_json(*c.upper[i]) : json(nullptr));
    }
    json out{{"dimension", c.dimension}, {"bounded", c.bounded}, {"lower", std::move(lo)},
             {"upper", std::move(hi)}, {"sample", to_json_array(c.sample)}};
    out["ray"] = c.ray ? to_json_array(*c.ray) : json(nullptr);
    out["tied"] = c.tied;
    return out;
}

/// A point together with the first index k whose hypersurface excludes it (null: none does).
inline json witness_json(const ProblemSpec& spec, const TropicalPoint& w)
{
    const auto k = exclusion_witness(spec, w);
    return json{{"point", to_json_array(w)}, {"excluded_by", k ? json(*k) : json(nullptr)}};
}

inline json to_json(const TropicalOutcome& t, const ProblemSpec& spec)
{
    json out{{"status", t.status}};
    if (!t.detail.empty())
        out["detail"] = t.detail;
    if (t.prevariety) {
        const auto& pv = *t.prevariety;
        out["theorem_mode"] = pv.theorem_mode;
        out["is_origin_only"] = pv.is_origin_only;
        out["points_bounded"] = pv.points_bounded;
        out["cell_count"] = pv.cells.size();
        json cells = json::array();
        for (const auto& c : pv.cells)
            cells.push_back(to_json(c));
        out["cells"] = std::move(cells);
        if (pv.nonzero_point)
            out["nonzero_point"] = witness_json(spec, *pv.nonzero_point);
        if (pv.ray_witness) {
            TropicalPoint far = pv.nonzero_point.value_or(TropicalPoint(pv.ray_witness->size(), Rational(0)));
            for (std::size_t j = 0; j < far.size(); ++j)
                far[j] += (*pv.ray_witness)[j];
            out["ray"] = json{{"direction", to_json_array(*pv.ray_witness)}, {"shifted", witness_json(spec, far)}};
        }
        out["search"] = json{{"nodes", pv.nodes}, {"lp_calls", pv.lp_calls}};
    }
    if (t.lifts_inside)
        out["lift_valuations_inside"] = *t.lifts_inside;
    return out;
}

inline json report_json(const SolveResult& r)
{
    json out{{"format", kFormatVersion}, {"tool", "qqtrop"}, {"version", kToolVersion}, {"command", "solve"}};
    out["spec"] = to_json(r.spec);
    if (r.spec.mode == Mode::difference)
        out["alpha"] = to_json(alpha_series(r.spec, 1, r.spec.K));
    json bases = json::array();
    std::size_t weight = 0;
    for (std::size_t i = 0; i < r.bases.size(); ++i) {
        bases.push_back(to_json(r.bases[i], i, r.spec));
        weight += r.bases[i].branches.size();
    }
    out["summary"] = json{{"bases", r.bases.size()}, {"branches", weight},
                          {"certified", std::count_if(r.bases.begin(), r.bases.end(), [](const auto& b) {
                               return b.failures.empty();
                           })}};
    out["bases"] = std::move(bases);
    out["tropical"] = to_json(r.tropical, r.spec);
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back(to_json(f));
    out["failures"] = std::move(failures);
    out["exit_code"] = r.exit_code;
    json per_base = json::array();
    for (const auto& b : r.bases)
        per_base.push_back(b.seconds);
    out["timing"] = json{{"total_seconds", r.seconds}, {"tropical_seconds", r.tropical.seconds},
                         {"base_seconds", std::move(per_base)}};
    return out;
}

inline json enumerate_json(const ProblemSpec& spec)
{
    json out{{"format", kFormatVersion}, {"tool", "qqtrop"}, {"version", kToolVersion}, {"command", "enumerate"}};
    out["spec"] = to_json(spec);
    json list = json::array();
    const auto sols = enumerate_infinite_solutions(spec);
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const auto& s = sols[i];
        json e{{"index", i}, {"tier", tier_name(s.tier)}, {"l", s.l}};
        e["split"] = to_json_array(s.split);
        e["x0"] = to_json_array(s.x0);
        e["y0"] = to_json_array(s.y0);
        if (spec.mode == Mode::difference)
            e["scaled_overlap"] = s.scaled_overlap;
        list.push_back(std::move(e));
    }
    out["count"] = sols.size();
    out["solutions"] = std::move(list);
    return out;
}

inline json tropical_json(const ProblemSpec& spec, const TropicalOutcome& t)
{
    json out{{"format", kFormatVersion}, {"tool", "qqtrop"}, {"version", kToolVersion}, {"command", "tropical"}};
    out["spec"] = to_json(spec);
    out["tropical"] = to_json(t, spec);
    out["timing"] = json{{"total_seconds", t.seconds}};
    return out;
}

inline json error_json(const std::string& command, const std::string& code, const std::string& detail)
{
    json out{{"format", kFormatVersion}, {"tool", "qqtrop"}, {"version", kToolVersion}, {"command", command}};
    out["error"] = json{{"code", code}, {"detail", detail}};
    return out;
}

} // namespace qqtrop
