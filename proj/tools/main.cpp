// Command-line surface over the library. Every command prints one report
// (JSON by default) built only from its inputs and explicit seeds, so an
// identical invocation reproduces its output byte for byte.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "solenoidal/atoms.hpp"
#include "solenoidal/fiber_measure.hpp"
#include "solenoidal/filters.hpp"
#include "solenoidal/json_io.hpp"
#include "solenoidal/laurent.hpp"
#include "solenoidal/msf.hpp"
#include "solenoidal/solenoid.hpp"
#include "solenoidal/tau.hpp"

using nlohmann::ordered_json;
using namespace solenoidal;

namespace {

// ---- input parsing --------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

int64_t parse_int(const std::string& s, const char* what) {
    try {
        size_t used = 0;
        int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": '" + s + "' is not an integer");
    }
}

std::vector<int64_t> parse_int_vector(const std::string& s, int dim, const char* what) {
    auto parts = split(s, ',');
    if (static_cast<int>(parts.size()) != dim)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(dim) +
                                    " comma-separated entries, got '" + s + "'");
    std::vector<int64_t> out;
    for (const auto& p : parts) out.push_back(parse_int(p, what));
    return out;
}

std::vector<Rat> parse_rat_vector(const std::string& s, int dim, const char* what) {
    auto parts = split(s, ',');
    if (static_cast<int>(parts.size()) != dim)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(dim) +
                                    " comma-separated components, got '" + s + "'");
    std::vector<Rat> out;
    for (const auto& p : parts) out.push_back(parse_rat(p));
    return out;
}

// --t accepts "p/q", integers, or decimals per component; reduced into [0,1)
TorusPoint parse_point(const std::string& s, int dim, bool exact) {
    auto r = parse_rat_vector(s, dim, "--t");
    for (auto& c : r) c = frac_mod1(c);
    if (exact) return TorusPoint::exact(std::move(r));
    std::vector<double> d;
    d.reserve(r.size());
    for (const auto& c : r) d.push_back(to_double(c));
    return TorusPoint::approx(std::move(d));
}

Digit parse_digit(const std::string& s, const DilationSpec& spec) {
    auto parts = split(s, ':');
    if (static_cast<int>(parts.size()) != spec.dim())
        throw std::invalid_argument("digit '" + s + "' needs " + std::to_string(spec.dim()) +
                                    " ':'-separated components");
    Digit d;
    for (size_t i = 0; i < parts.size(); ++i) {
        int64_t v = parse_int(parts[i], "digit");
        if (v < 0 || v >= spec.diag[i])
            throw std::invalid_argument("digit component " + parts[i] + " outside [0, " +
                                        std::to_string(spec.diag[i]) + ")");
        d.a.push_back(v);
    }
    return d;
}

// word syntax: digits comma-separated, digit components ':'-separated for
// d > 1, and ';' splits the prefix from a repeating period. "0,1;1" reads as
// prefix 0,1 followed by ones forever; ";0" is the all-zeros word.
DigitWord parse_word(const std::string& s, const DilationSpec& spec) {
    DigitWord w;
    auto semi = s.find(';');
    std::string head = s.substr(0, semi);
    std::string tail = semi == std::string::npos ? std::string() : s.substr(semi + 1);
    if (!head.empty())
        for (const auto& ds : split(head, ',')) w.prefix.push_back(parse_digit(ds, spec));
    if (!tail.empty())
        for (const auto& ds : split(tail, ',')) w.period.push_back(parse_digit(ds, spec));
    return w;
}

LaurentFilter load_filter(const std::string& src) {
    auto names = LaurentFilter::builtin_names();
    if (std::find(names.begin(), names.end(), src) != names.end())
        return LaurentFilter::builtin(src);
    std::ifstream probe(src);
    if (!probe.good()) {
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown filter '" + src + "' (built-ins: " + all +
                                    "; anything else is read as a JSON file path)");
    }
    return filter_from_json_file(src);
}

DilationSpec resolve_spec(const std::string& filter_src, const std::string& diag_str) {
    if (!diag_str.empty()) {
        std::vector<int64_t> dg;
        for (const auto& p : split(diag_str, ',')) dg.push_back(parse_int(p, "--diag"));
        return DilationSpec::make(dg);
    }
    if (!filter_src.empty()) return load_filter(filter_src).dilation();
    throw std::invalid_argument("pass --diag or --filter to fix the dilation");
}

std::optional<Rat> parse_norm(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_rat(s);
}

// ---- report rendering -----------------------------------------------------

ordered_json rat_json(const Rat& r) {
    return {{"num", numerator(r).str()}, {"den", denominator(r).str()}, {"float", to_double(r)}};
}

ordered_json ratc_json(const RatC& c) {
    return {{"re", rat_json(c.re)}, {"im", rat_json(c.im)}};
}

ordered_json point_json(const TorusPoint& t) {
    ordered_json a = ordered_json::array();
    if (t.is_exact())
        for (const auto& c : t.rat()) a.push_back(rat_json(c));
    else
        for (double c : t.dbl()) a.push_back(c);
    return a;
}

ordered_json word_json(const DigitWord& w) {
    ordered_json p = ordered_json::array(), q = ordered_json::array();
    for (const auto& d : w.prefix) p.push_back(d.a);
    for (const auto& d : w.period) q.push_back(d.a);
    return {{"prefix", p}, {"period", q}};
}

// float value plus num/den whenever the exact value reduced to a rational
ordered_json mass_json(const MassValue& m) {
    ordered_json j{{"float", m.value}};
    auto r = m.exact_rational();
    if (r && r->im == 0) {
        j["num"] = numerator(r->re).str();
        j["den"] = denominator(r->re).str();
    } else if (m.exact) {
        j["exact_rational"] = nullptr;  // exact but not a rational number
    }
    return j;
}

std::string digit_key(const Digit& d) {
    std::string s;
    for (size_t i = 0; i < d.a.size(); ++i) s += (i ? ":" : "") + std::to_string(d.a[i]);
    return s;
}

std::string num_str(double v) { return ordered_json(v).dump(); }

void render_human(const ordered_json& j, std::ostream& os, int indent = 0) {
    std::string pad(static_cast<size_t>(indent), ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool block =
                it->is_object() || (it->is_array() && !it->empty() && it->front().is_structured());
            if (block) {
                os << pad << it.key() << ":\n";
                render_human(*it, os, indent + 2);
            } else {
                os << pad << it.key() << ": " << it->dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& el : j) {
            os << pad << "[" << i++ << "]\n";
            render_human(el, os, indent + 2);
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

void emit(const ordered_json& j, const std::string& format,
          const std::vector<std::string>& csv_lines = {}) {
    if (format == "csv") {
        if (csv_lines.empty())
            throw std::invalid_argument(
                "csv output is only available for tabular reports (atoms scan, atoms classical)");
        for (const auto& l : csv_lines) std::cout << l << "\n";
    } else if (format == "human") {
        render_human(j, std::cout);
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

int finish(const ordered_json& j, const std::string& format, bool strict, bool pass,
           const std::vector<std::string>& csv_lines = {}) {
    emit(j, format, csv_lines);
    return (strict && !pass) ? 2 : 0;
}

// slot-per-index parallelism; callers reduce the slots in index order, so
// the report does not depend on the job count
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

// ---- filter check -----------------------------------------------------------

struct FilterCheckOpts {
    std::string filter, target, format = "json";
    int points = 500, grid = 256;
    uint64_t seed = 1;
    bool strict = false;
};

// exact preimage-sum constant: det * transfer(|m|^2) when that polynomial is
// constant; being a QMF is exactly this
std::optional<Rat> exact_preimage_constant(const LaurentFilter& f) {
    LaurentPoly s = f.mag2_poly().transfer(f.dilation().diag);
    if (s.term_count() == 0) return Rat(0);
    if (s.term_count() == 1 &&
        s.terms().begin()->first == std::vector<int64_t>(static_cast<size_t>(f.dim()), 0)) {
        RatC c = s.terms().begin()->second;
        if (c.im == 0) return c.re * f.det();
    }
    return std::nullopt;
}

int run_filter_check(const FilterCheckOpts& o) {
    auto f = load_filter(o.filter);
    std::optional<Rat> psum = f.is_exact() ? exact_preimage_constant(f) : std::nullopt;
    Rat target = !o.target.empty() ? parse_rat(o.target) : (psum ? *psum : Rat(f.det()));

    auto rep = qmf_report(f, o.points, o.seed, to_double(target));
    std::optional<bool> identity;
    if (f.is_exact()) identity = qmf_identity_exact(f, target);
    auto low = lowpass_report(f, o.grid);
    auto cb = coefficient_bound(f);

    bool pass = rep.max_residual < 1e-12 && identity.value_or(true);

    ordered_json out;
    out["command"] = "filter check";
    out["config"] = {{"filter", o.filter},
                     {"points", o.points},
                     {"seed", o.seed},
                     {"grid", o.grid},
                     {"target", o.target.empty() ? "auto" : o.target}};
    ordered_json fil{{"name", f.name()},
                     {"d", f.dim()},
                     {"diag", f.dilation().diag},
                     {"det", f.det()},
                     {"exact", f.is_exact()}};
    if (f.is_exact()) fil["K"] = f.K();
    out["filter"] = fil;
    out["qmf"] = {{"target", rat_json(target)},
                  {"preimage_sum_constant", psum ? rat_json(*psum) : ordered_json(nullptr)},
                  {"identity_exact", identity ? ordered_json(*identity) : ordered_json(nullptr)},
                  {"max_float_residual", rep.max_residual},
                  {"samples", rep.sample_count}};
    ordered_json zeros = ordered_json::array();
    for (size_t i = 0; i < low.zero_samples.size() && i < 4; ++i)
        zeros.push_back(low.zero_samples[i]);
    ordered_json lp{{"m_at_one", {{"re", low.m_at_one.real()}, {"im", low.m_at_one.imag()}}},
                    {"unit_normalized", low.unit_normalized},
                    {"cohen_min_abs", low.cohen_min_abs},
                    {"lipschitz_bound", low.lipschitz_bound},
                    {"zeros_found", low.zero_samples.size()},
                    {"zero_examples", zeros}};
    if (low.m_at_one_exact)
        lp["m_at_one_over_sqrtK"] = {{"re", low.m_at_one_exact->first},
                                     {"im", low.m_at_one_exact->second}};
    out["lowpass"] = lp;
    out["coefficient_bound"] = {
        {"float", cb.bound},
        {"bound_sq", cb.bound_sq ? rat_json(*cb.bound_sq) : ordered_json(nullptr)},
        {"bound_sq_is_exact", cb.bound_sq_is_exact}};
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

// ---- fiber ------------------------------------------------------------------

struct FiberMassOpts {
    std::string filter, t, word, norm, mode = "exact", format = "json";
    bool children = false, strict = false;
};

int run_fiber_mass(const FiberMassOpts& o) {
    auto f = load_filter(o.filter);
    bool exact = o.mode == "exact";
    if (exact && !f.is_exact())
        throw std::invalid_argument("exact mode needs an exact filter; pass --mode float");
    MassOptions mo{parse_norm(o.norm), exact};
    auto w = parse_word(o.word, f.dilation());
    if (w.has_period())
        throw std::invalid_argument("cylinder prefixes are finite; drop the ';period' part");
    CylinderSet c{parse_point(o.t, f.dim(), exact), w.prefix};
    auto m = cylinder_mass(f, c, mo);

    ordered_json out;
    out["command"] = "fiber mass";
    out["config"] = {{"filter", o.filter},
                     {"t", o.t},
                     {"word", o.word},
                     {"mode", o.mode},
                     {"norm", rat_json(mass_norm(f, mo))},
                     {"children", o.children}};
    out["base"] = point_json(c.base);
    out["depth"] = c.depth();
    out["mass"] = mass_json(m);
    out["envelope"] = mass_envelope(f, c.depth(), mo);

    bool pass = true;
    if (o.children) {
        auto kids = children_masses(f, c, mo);
        auto alphabet = digit_alphabet(f.dilation());
        ordered_json arr = ordered_json::array();
        for (size_t i = 0; i < kids.size(); ++i)
            arr.push_back({{"digit", alphabet[i].a}, {"mass", mass_json(kids[i])}});
        out["children"] = arr;
        if (exact) {
            bool ok = children_sum_to_parent_exact(f, c, mo);
            out["children_sum_exact"] = ok;
            pass = ok;
        }
    }
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

struct FiberSampleOpts {
    std::string filter, t, norm, mode = "exact", format = "json";
    int depth = 16, count = 1000, emit_words = 10;
    uint64_t seed = 1;
};

int run_fiber_sample(const FiberSampleOpts& o) {
    auto f = load_filter(o.filter);
    bool exact = o.mode == "exact" && f.is_exact();
    MassOptions mo{parse_norm(o.norm), false};
    TorusPoint t = parse_point(o.t, f.dim(), exact);
    auto alphabet = digit_alphabet(f.dilation());

    std::mt19937_64 rng(o.seed);
    std::vector<int> counts(alphabet.size(), 0);
    ordered_json words = ordered_json::array();
    int renormalized = 0;
    for (int i = 0; i < o.count; ++i) {
        auto s = sample_word(f, t, o.depth, rng, mo);
        renormalized += s.renormalized ? 1 : 0;
        auto first = std::find(alphabet.begin(), alphabet.end(), s.word.prefix.front());
        ++counts[static_cast<size_t>(first - alphabet.begin())];
        if (i < o.emit_words) {
            ordered_json ww = ordered_json::array();
            for (const auto& d : s.word.prefix) ww.push_back(d.a);
            words.push_back(ww);
        }
    }

    ordered_json freq;
    for (size_t i = 0; i < alphabet.size(); ++i) freq[digit_key(alphabet[i])] = counts[i];
    ordered_json out;
    out["command"] = "fiber sample";
    out["config"] = {{"filter", o.filter}, {"t", o.t},       {"depth", o.depth},
                     {"count", o.count},   {"seed", o.seed}, {"emit", o.emit_words},
                     {"mode", o.mode},     {"norm", rat_json(mass_norm(f, mo))}};
    out["first_digit_counts"] = freq;
    out["renormalized"] = renormalized;
    out["words"] = words;
    out["pass"] = true;
    return finish(out, o.format, false, true);
}

struct FiberEventOpts {
    std::string filter, t, digit, norm, expect, mode = "exact", format = "json";
    int pos = 0, samples = 20000, depth = 8;
    double nsigma = 4.0;
    uint64_t seed = 1;
    bool strict = false;
};

int run_fiber_event(const FiberEventOpts& o) {
    auto f = load_filter(o.filter);
    if (o.depth <= o.pos) throw std::invalid_argument("--depth must exceed --pos");
    bool exact = o.mode == "exact" && f.is_exact();
    MassOptions mo{parse_norm(o.norm), false};
    TorusPoint t = parse_point(o.t, f.dim(), exact);
    Digit want = parse_digit(o.digit, f.dilation());

    auto est = estimate_event(
        f, t, [&](const DigitWord& w) { return w.digit_at(o.pos) == want; }, o.samples, o.depth,
        o.seed, mo);

    ordered_json out;
    out["command"] = "fiber event";
    out["config"] = {{"filter", o.filter},   {"t", o.t},
                     {"pos", o.pos},         {"digit", o.digit},
                     {"samples", o.samples}, {"depth", o.depth},
                     {"seed", o.seed},       {"mode", o.mode},
                     {"norm", rat_json(mass_norm(f, mo))}};
    out["mean"] = est.mean;
    out["std_error"] = est.std_error;
    out["samples"] = est.samples;
    out["any_renormalized"] = est.any_renormalized;
    bool pass = true;
    if (!o.expect.empty()) {
        Rat expect = parse_rat(o.expect);
        double gap = std::abs(est.mean - to_double(expect));
        double sigmas = est.std_error > 0 ? gap / est.std_error : (gap > 0 ? 1e18 : 0.0);
        out["expect"] = rat_json(expect);
        out["sigma_distance"] = sigmas;
        pass = sigmas <= o.nsigma;
    }
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

// ---- atoms ------------------------------------------------------------------

struct AtomsScanOpts {
    std::string filter, norm, format = "json";
    int grid = 0, lmax = 3;
    double tol = 1e-9;
};

int run_atoms_scan(const AtomsScanOpts& o) {
    auto f = load_filter(o.filter);
    AtomOptions ao;
    ao.norm = parse_norm(o.norm);
    auto hits = find_Zm(f, o.grid, o.tol, ao);

    ordered_json out;
    out["command"] = "atoms scan";
    out["config"] = {{"filter", o.filter}, {"grid", o.grid}, {"tol", o.tol}, {"lmax", o.lmax}};
    ordered_json harr = ordered_json::array();
    std::vector<std::string> csv{"t,mag2,exact_confirmed"};
    for (const auto& h : hits) {
        harr.push_back(
            {{"t", point_json(h.t)}, {"mag2", h.mag2}, {"exact_confirmed", h.exact_confirmed}});
        std::string ts;
        if (h.t.is_exact())
            for (size_t i = 0; i < h.t.rat().size(); ++i)
                ts += (i ? ":" : "") + format_rat(h.t.rat()[i]);
        else
            for (size_t i = 0; i < h.t.dbl().size(); ++i)
                ts += (i ? ":" : "") + num_str(h.t.dbl()[i]);
        csv.push_back(ts + "," + num_str(h.mag2) + "," + (h.exact_confirmed ? "true" : "false"));
    }
    out["Zm_hits"] = harr;
    if (f.dim() == 1 && o.lmax > 0) {
        ordered_json cyc = ordered_json::array();
        for (const auto& c : candidate_cycle_rationals(f, o.lmax, ao)) {
            ordered_json in = ordered_json::array();
            for (const auto& r : c.in_Zm) in.push_back(rat_json(r));
            cyc.push_back({{"l", c.l}, {"candidates", c.rationals.size()}, {"in_Zm", in}});
        }
        out["cycles"] = cyc;
    } else if (f.dim() > 1) {
        out["cycles"] = nullptr;
        out["note"] = "cycle-candidate enumeration is d = 1 only";
    }
    out["pass"] = true;
    return finish(out, o.format, false, true, csv);
}

struct AtomsClassifyOpts {
    std::string filter, t, word, norm, format = "json";
    int terms = 64, window = 16;
    double floor = 1e-30;
};

int run_atoms_classify(const AtomsClassifyOpts& o) {
    auto f = load_filter(o.filter);
    AtomOptions ao;
    ao.norm = parse_norm(o.norm);
    ao.mass_floor = o.floor;
    auto w = parse_word(o.word, f.dilation());
    if (!w.resolvable(o.terms - 1))
        throw std::invalid_argument("word too short for --terms; extend it or add a ';period'");
    TorusPoint t = parse_point(o.t, f.dim(), f.is_exact());
    auto c = classify_atom(f, t, w, o.terms, o.window, ao);

    const char* verdict = c.verdict == AtomVerdict::ConvergesPositive ? "ConvergesPositive"
                          : c.verdict == AtomVerdict::DecaysToZero    ? "DecaysToZero"
                                                                      : "Inconclusive";
    ordered_json tail = ordered_json::array();
    size_t n = c.mass_partial_products.size();
    for (size_t i = n > 8 ? n - 8 : 0; i < n; ++i) tail.push_back(c.mass_partial_products[i]);

    ordered_json out;
    out["command"] = "atoms classify";
    out["config"] = {{"filter", o.filter}, {"t", o.t},
                     {"word", o.word},     {"terms", o.terms},
                     {"window", o.window}, {"floor", o.floor},
                     {"norm", rat_json(mass_norm(f, MassOptions{ao.norm, false}))}};
    out["verdict"] = verdict;
    out["reason"] = c.reason;
    out["factor_above_one"] = c.factor_above_one;
    out["partial_products_tail"] = tail;
    out["final_partial_product"] = c.mass_partial_products.back();
    out["pass"] = true;
    return finish(out, o.format, false, true);
}

struct AtomsClassicalOpts {
    std::string filter, t, norm, format = "json";
    int64_t krange = 10;
    int terms = 40;
    double total_tol = 5e-3;
    bool strict = false;
};

int run_atoms_classical(const AtomsClassicalOpts& o) {
    auto f = load_filter(o.filter);
    AtomOptions ao;
    ao.norm = parse_norm(o.norm);
    TorusPoint t = parse_point(o.t, f.dim(), f.is_exact());
    auto rows = classical_atom_decomposition(f, t, o.krange, o.terms, ao);

    double total = 0.0, route_gap = 0.0;
    ordered_json arr = ordered_json::array();
    std::vector<std::string> csv{"k,mass_from_word,mass_from_scaling"};
    for (const auto& r : rows) {
        total += r.mass_from_word;
        route_gap = std::max(route_gap, std::abs(r.mass_from_word - r.mass_from_scaling));
        arr.push_back({{"k", r.k},
                       {"mass_from_word", r.mass_from_word},
                       {"mass_from_scaling", r.mass_from_scaling}});
        std::string ks;
        for (size_t i = 0; i < r.k.size(); ++i) ks += (i ? ":" : "") + std::to_string(r.k[i]);
        csv.push_back(ks + "," + num_str(r.mass_from_word) + "," + num_str(r.mass_from_scaling));
    }
    bool pass = std::abs(total - 1.0) <= o.total_tol;

    ordered_json out;
    out["command"] = "atoms classical";
    out["config"] = {{"filter", o.filter},
                     {"t", o.t},
                     {"krange", o.krange},
                     {"terms", o.terms},
                     {"total_tol", o.total_tol}};
    out["atoms"] = arr;
    out["total_mass"] = total;
    out["total_gap"] = std::abs(total - 1.0);
    out["max_route_gap"] = route_gap;
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass, csv);
}

// ---- tau --------------------------------------------------------------------

ordered_json integral_json(const IntegralValue& v) {
    ordered_json j{{"value", {{"re", v.value.real()}, {"im", v.value.imag()}}},
                   {"exact", v.exact ? ratc_json(*v.exact) : ordered_json(nullptr)},
                   {"used_quadrature", v.used_quadrature}};
    if (!v.warning.empty()) j["warning"] = v.warning;
    return j;
}

struct TauIntegrateOpts {
    std::string filter, monomial, norm, form = "both", format = "json";
    int level = 1, grid = 256;
    double tol = 1e-9;
    bool no_quadrature = false, strict = false;
};

int run_tau_integrate(const TauIntegrateOpts& o) {
    auto f = load_filter(o.filter);
    std::vector<int64_t> v(static_cast<size_t>(f.dim()), 0);
    if (!o.monomial.empty()) v = parse_int_vector(o.monomial, f.dim(), "--monomial");
    auto test = LaurentPoly::monomial(v, RatC{Rat(1), Rat(0)});
    TauOptions to{parse_norm(o.norm), !o.no_quadrature, o.grid};

    ordered_json out;
    out["command"] = "tau integrate";
    out["config"] = {{"filter", o.filter},
                     {"monomial", v},
                     {"level", o.level},
                     {"form", o.form},
                     {"grid", o.grid},
                     {"quadrature", !o.no_quadrature},
                     {"norm", rat_json(mass_norm(f, MassOptions{to.norm, false}))}};

    std::optional<IntegralValue> push, pre;
    if (o.form == "push" || o.form == "both") push = integrate_pushforward(f, test, o.level, to);
    if (o.form == "preimage" || o.form == "both")
        pre = integrate_preimage_form(f, test, o.level, to);
    if (push) out["pushforward"] = integral_json(*push);
    if (pre) out["preimage"] = integral_json(*pre);

    bool pass = true;
    if (push && pre) {
        double gap = std::abs(push->value - pre->value);
        ordered_json agree{{"float_gap", gap}};
        if (push->exact && pre->exact) {
            bool eq = *push->exact == *pre->exact;
            agree["exact_equal"] = eq;
            pass = eq;
        } else {
            agree["exact_equal"] = nullptr;
            pass = gap < o.tol;
        }
        out["agreement"] = agree;
    }
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

struct TauRnOpts {
    std::string filter, monomial, norm, direction = "inverse", format = "json";
    int level = 1, grid = 256;
    double tol = -1.0;  // negative = per-direction default
    bool strict = false;
};

int run_tau_rn(const TauRnOpts& o) {
    auto f = load_filter(o.filter);
    std::vector<int64_t> v(static_cast<size_t>(f.dim()), 0);
    if (!o.monomial.empty()) v = parse_int_vector(o.monomial, f.dim(), "--monomial");
    auto test = LaurentPoly::monomial(v, RatC{Rat(1), Rat(0)});
    RnDirection dir = o.direction == "forward" ? RnDirection::Forward : RnDirection::Inverse;
    double tol = o.tol >= 0 ? o.tol : (dir == RnDirection::Forward ? 1e-6 : 1e-9);
    TauOptions to{parse_norm(o.norm), true, o.grid};

    auto rep = radon_nikodym_residual(f, test, o.level, dir, to);
    bool pass = rep.exact_residual ? rep.exact_residual->is_zero() : rep.residual < tol;

    ordered_json out;
    out["command"] = "tau rn-check";
    out["config"] = {{"filter", o.filter},
                     {"monomial", v},
                     {"level", o.level},
                     {"direction", o.direction},
                     {"grid", o.grid},
                     {"tol", tol},
                     {"norm", rat_json(mass_norm(f, MassOptions{to.norm, false}))}};
    out["lhs"] = {{"re", rep.lhs.real()}, {"im", rep.lhs.imag()}};
    out["rhs"] = {{"re", rep.rhs.real()}, {"im", rep.rhs.imag()}};
    out["residual"] = rep.residual;
    out["exact_residual"] =
        rep.exact_residual ? ratc_json(*rep.exact_residual) : ordered_json(nullptr);
    if (dir == RnDirection::Forward) {
        out["grid"] = rep.grid;
        out["excluded_points"] = rep.excluded_points;
    }
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

// ---- msf --------------------------------------------------------------------

struct MsfCheckOpts {
    std::string filter, set, format = "json";
    bool strict = false;
};

int run_msf_check(const MsfCheckOpts& o) {
    auto f = load_filter(o.filter);
    ordered_json out;
    out["command"] = "msf check";
    out["config"] = {{"filter", o.filter}, {"set", o.set}};

    bool pass = true;
    try {
        auto e = fibered_set_from_json_file(o.set, f.dilation());
        size_t words = 0, cylinders = 0;
        ordered_json boxes = ordered_json::array();
        for (const auto& r : e.regions) {
            words += r.fiber.words.size();
            cylinders += r.fiber.cylinders.size();
            ordered_json lo = ordered_json::array(), hi = ordered_json::array();
            for (const auto& c : r.box.lo) lo.push_back(rat_json(c));
            for (const auto& c : r.box.hi) hi.push_back(rat_json(c));
            boxes.push_back({{"lo", lo},
                             {"hi", hi},
                             {"words", r.fiber.words.size()},
                             {"cylinders", r.fiber.cylinders.size()}});
        }
        out["valid"] = true;
        out["regions"] = e.regions.size();
        out["total_words"] = words;
        out["total_cylinders"] = cylinders;
        out["boxes"] = boxes;
    } catch (const std::invalid_argument& ex) {
        out["valid"] = false;
        out["error"] = ex.what();
        pass = false;
    }
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

struct MsfShannonOpts {
    std::string format = "json";
    int samples = 256, depth = 30, jrange = 2, mc_samples = 4000, jobs = 1;
    double tol = 1e-4;
    uint64_t seed = 1;
    bool strict = false;
};

int run_msf_shannon(const MsfShannonOpts& o) {
    auto ex = shannon_example();
    auto pts = midpoint_samples(ex.filter.dim(), o.samples);
    std::vector<double> h(pts.size(), 0.0);
    parallel_for(static_cast<int>(pts.size()), o.jobs, [&](int i) {
        h[static_cast<size_t>(i)] =
            h_function(ex.filter, ex.E, ex.lambda, pts[static_cast<size_t>(i)], o.depth);
    });
    double max_dev = 0.0;
    for (double x : h) max_dev = std::max(max_dev, std::abs(x - 1.0));
    bool ortho_ok = max_dev < o.tol;

    auto dis = shift_disjointness_check(ex.filter, ex.E, o.jrange, o.mc_samples, o.depth, o.seed);
    bool dis_ok = dis.all_consistent_with_zero();
    bool pass = ortho_ok && dis_ok;

    ordered_json out;
    out["command"] = "msf shannon";
    out["config"] = {{"samples", o.samples}, {"depth", o.depth},
                     {"tol", o.tol},         {"jrange", o.jrange},
                     {"mc_samples", o.mc_samples}, {"seed", o.seed},
                     {"jobs", o.jobs}};
    out["orthonormality"] = {{"samples", o.samples},
                             {"max_deviation", max_dev},
                             {"tol", o.tol},
                             {"pass", ortho_ok}};
    ordered_json pairs = ordered_json::array();
    for (const auto& p : dis.pairs)
        pairs.push_back({{"j", p.j},
                         {"k", p.k},
                         {"mean", p.mean},
                         {"std_error", p.std_error},
                         {"hits", p.hits}});
    out["disjointness"] = {{"pairs", pairs},
                           {"samples", dis.samples},
                           {"seed", dis.seed},
                           {"consistent_with_zero", dis_ok}};
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

struct MsfFeasibilityOpts {
    std::string filter, norm, format = "json";
    int fibers = 16, depth = 48;
    uint64_t seed = 20260819;
};

int run_msf_feasibility(const MsfFeasibilityOpts& o) {
    auto f = load_filter(o.filter);
    AtomOptions ao;
    ao.norm = parse_norm(o.norm);
    auto v = msf_feasibility(f, o.fibers, o.depth, o.seed, ao);

    const char* verdict = v.verdict == MsfFeasibility::AtomlessNoMSF    ? "AtomlessNoMSF"
                          : v.verdict == MsfFeasibility::AtomicFeasible ? "AtomicFeasible"
                                                                        : "Unknown";
    ordered_json out;
    out["command"] = "msf feasibility";
    out["config"] = {{"filter", o.filter},
                     {"fibers", o.fibers},
                     {"depth", o.depth},
                     {"seed", o.seed},
                     {"norm", rat_json(mass_norm(f, MassOptions{ao.norm, false}))}};
    out["verdict"] = verdict;
    if (v.certificate) {
        ordered_json b{{"float", v.certificate->ratio}};
        if (v.certificate->ratio_exact) {
            b["num"] = numerator(*v.certificate->ratio_exact).str();
            b["den"] = denominator(*v.certificate->ratio_exact).str();
        }
        out["bound"] = b;
    } else {
        out["bound"] = nullptr;
    }
    ordered_json ws = ordered_json::array();
    for (const auto& w : v.witnesses)
        ws.push_back({{"t", point_json(w.t)}, {"k", w.k}, {"mass", w.mass}});
    out["witnesses"] = ws;
    out["note"] = v.note;
    out["pass"] = true;
    return finish(out, o.format, false, true);
}

// ---- solenoid ---------------------------------------------------------------

ordered_json coords_json(const SolenoidPoint& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : s.coords) arr.push_back(point_json(c));
    return arr;
}

struct SolThetaOpts {
    std::string filter, diag, t, word, format = "json";
    int depth = 6;
    bool strict = false;
};

int run_sol_theta(const SolThetaOpts& o) {
    auto spec = resolve_spec(o.filter, o.diag);
    ProductPoint p{parse_point(o.t, spec.dim(), true), parse_word(o.word, spec)};
    auto s = theta(p, spec, o.depth);
    double defect = compatibility_defect(s, spec);

    auto back = theta_inverse(s, spec);
    bool roundtrip = back.base == p.base;
    for (int j = 0; roundtrip && j < o.depth; ++j)
        roundtrip = back.word.digit_at(j) == p.word.digit_at(j);
    bool pass = defect == 0.0 && roundtrip;

    ordered_json out;
    out["command"] = "solenoid theta";
    out["config"] = {{"diag", spec.diag}, {"t", o.t}, {"word", o.word}, {"depth", o.depth}};
    out["levels"] = s.levels();
    out["coords"] = coords_json(s);
    out["compatibility_defect"] = defect;
    out["roundtrip_ok"] = roundtrip;
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

struct SolSigmaOpts {
    std::string filter, diag, t, word, format = "json";
    int count = 1;
    bool inverse = false;
};

int run_sol_sigma(const SolSigmaOpts& o) {
    auto spec = resolve_spec(o.filter, o.diag);
    ProductPoint p{parse_point(o.t, spec.dim(), true), parse_word(o.word, spec)};
    for (int i = 0; i < o.count; ++i)
        p = o.inverse ? shift_sigma_inverse(p, spec) : shift_sigma(p, spec);

    ordered_json out;
    out["command"] = "solenoid sigma";
    out["config"] = {{"diag", spec.diag},
                     {"t", o.t},
                     {"word", o.word},
                     {"count", o.count},
                     {"inverse", o.inverse}};
    out["base"] = point_json(p.base);
    out["word"] = word_json(p.word);
    out["pass"] = true;
    return finish(out, o.format, false, true);
}

struct SolWindOpts {
    std::string filter, diag, x, mode = "exact", format = "json";
    int depth = 6;
    bool strict = false;
};

int run_sol_wind(const SolWindOpts& o) {
    auto spec = resolve_spec(o.filter, o.diag);
    // the winding parameter is a point of R^d, deliberately not reduced mod 1
    auto xr = parse_rat_vector(o.x, spec.dim(), "--x");
    SolenoidPoint s;
    if (o.mode == "exact") {
        s = winding_line(xr, spec, o.depth);
    } else {
        std::vector<double> xd;
        xd.reserve(xr.size());
        for (const auto& c : xr) xd.push_back(to_double(c));
        s = winding_line_approx(xd, spec, o.depth);
    }
    double defect = compatibility_defect(s, spec);
    bool pass = o.mode == "exact" ? defect == 0.0 : defect < 1e-9;

    ordered_json out;
    out["command"] = "solenoid wind";
    out["config"] = {{"diag", spec.diag}, {"x", o.x}, {"depth", o.depth}, {"mode", o.mode}};
    out["levels"] = s.levels();
    out["coords"] = coords_json(s);
    out["compatibility_defect"] = defect;
    out["pass"] = pass;
    return finish(out, o.format, o.strict, pass);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"filter-induced probability measures on generalized solenoids"};
    app.require_subcommand(1);
    int rc = 0;

    auto add_format = [](CLI::App* sub, std::string& fmt) {
        sub->add_option("--format", fmt, "json | csv | human")
            ->check(CLI::IsMember({"json", "csv", "human"}));
    };
    auto add_mode = [](CLI::App* sub, std::string& mode) {
        sub->add_option("--mode", mode, "exact | float")
            ->check(CLI::IsMember({"exact", "float"}));
    };

    auto* filter = app.add_subcommand("filter", "filter diagnostics");
    filter->require_subcommand(1);
    FilterCheckOpts fc;
    auto* fcheck = filter->add_subcommand("check", "QMF identity and low-pass report");
    fcheck->add_option("--filter", fc.filter, "built-in name or JSON file")->required();
    fcheck->add_option("--points", fc.points, "float sample count");
    fcheck->add_option("--seed", fc.seed, "sampling seed");
    fcheck->add_option("--grid", fc.grid, "low-pass scan resolution");
    fcheck->add_option("--target", fc.target, "expected preimage-sum constant (rational)");
    fcheck->add_flag("--strict", fc.strict, "exit 2 when the check fails");
    add_format(fcheck, fc.format);
    fcheck->callback([&] { rc = run_filter_check(fc); });

    auto* fiber = app.add_subcommand("fiber", "fiber measures on the odometer");
    fiber->require_subcommand(1);
    FiberMassOpts fm;
    auto* fmass = fiber->add_subcommand("mass", "cylinder mass under nu_t");
    fmass->add_option("--filter", fm.filter)->required();
    fmass->add_option("--t", fm.t, "base point, e.g. 1/3 or 1/3,2/5")->required();
    fmass->add_option("--word", fm.word, "cylinder prefix, e.g. 0,1,1");
    fmass->add_option("--norm", fm.norm, "per-step normalization (default det)");
    fmass->add_flag("--children", fm.children, "include children masses and additivity");
    fmass->add_flag("--strict", fm.strict);
    add_mode(fmass, fm.mode);
    add_format(fmass, fm.format);
    fmass->callback([&] { rc = run_fiber_mass(fm); });

    FiberSampleOpts fs;
    auto* fsample = fiber->add_subcommand("sample", "draw digit words from nu_t");
    fsample->add_option("--filter", fs.filter)->required();
    fsample->add_option("--t", fs.t)->required();
    fsample->add_option("--depth", fs.depth)->check(CLI::PositiveNumber);
    fsample->add_option("--count", fs.count)->check(CLI::PositiveNumber);
    fsample->add_option("--seed", fs.seed);
    fsample->add_option("--emit", fs.emit_words, "words to include in the report");
    fsample->add_option("--norm", fs.norm);
    add_mode(fsample, fs.mode);
    add_format(fsample, fs.format);
    fsample->callback([&] { rc = run_fiber_sample(fs); });

    FiberEventOpts fe;
    auto* fevent = fiber->add_subcommand("event", "Monte Carlo digit-event probability");
    fevent->add_option("--filter", fe.filter)->required();
    fevent->add_option("--t", fe.t)->required();
    fevent->add_option("--digit", fe.digit, "digit value, e.g. 0 or 1:0")->required();
    fevent->add_option("--pos", fe.pos, "digit position")->check(CLI::NonNegativeNumber);
    fevent->add_option("--samples", fe.samples)->check(CLI::PositiveNumber);
    fevent->add_option("--depth", fe.depth)->check(CLI::PositiveNumber);
    fevent->add_option("--seed", fe.seed);
    fevent->add_option("--norm", fe.norm);
    fevent->add_option("--expect", fe.expect, "expected probability (rational)");
    fevent->add_option("--nsigma", fe.nsigma, "tolerance in standard errors");
    fevent->add_flag("--strict", fe.strict);
    add_mode(fevent, fe.mode);
    add_format(fevent, fe.format);
    fevent->callback([&] { rc = run_fiber_event(fe); });

    auto* atoms = app.add_subcommand("atoms", "atom detection and decomposition");
    atoms->require_subcommand(1);
    AtomsScanOpts as;
    auto* ascan = atoms->add_subcommand("scan", "peak set Z_m and cycle candidates");
    ascan->add_option("--filter", as.filter)->required();
    ascan->add_option("--grid", as.grid, "scan resolution (0 = auto)");
    ascan->add_option("--tol", as.tol);
    ascan->add_option("--lmax", as.lmax, "max cycle length (d = 1)");
    ascan->add_option("--norm", as.norm);
    add_format(ascan, as.format);
    ascan->callback([&] { rc = run_atoms_scan(as); });

    AtomsClassifyOpts ac;
    auto* aclassify = atoms->add_subcommand("classify", "partial-product atom classifier");
    aclassify->add_option("--filter", ac.filter)->required();
    aclassify->add_option("--t", ac.t)->required();
    aclassify->add_option("--word", ac.word, "digit word, e.g. 0,1;1")->required();
    aclassify->add_option("--terms", ac.terms)->check(CLI::PositiveNumber);
    aclassify->add_option("--window", ac.window)->check(CLI::PositiveNumber);
    aclassify->add_option("--floor", ac.floor, "mass floor for the decay verdict");
    aclassify->add_option("--norm", ac.norm);
    add_format(aclassify, ac.format);
    aclassify->callback([&] { rc = run_atoms_classify(ac); });

    AtomsClassicalOpts acl;
    auto* aclassical = atoms->add_subcommand("classical", "integer-lattice atom mass table");
    aclassical->add_option("--filter", acl.filter)->required();
    aclassical->add_option("--t", acl.t)->required();
    aclassical->add_option("--krange", acl.krange, "|k_i| <= krange")->check(CLI::PositiveNumber);
    aclassical->add_option("--terms", acl.terms)->check(CLI::PositiveNumber);
    aclassical->add_option("--total-tol", acl.total_tol, "allowed |total - 1|");
    aclassical->add_option("--norm", acl.norm);
    aclassical->add_flag("--strict", acl.strict);
    add_format(aclassical, acl.format);
    aclassical->callback([&] { rc = run_atoms_classical(acl); });

    auto* tau = app.add_subcommand("tau", "integration against the solenoid measure");
    tau->require_subcommand(1);
    TauIntegrateOpts ti;
    auto* tintegrate = tau->add_subcommand("integrate", "level-n integral of a trig monomial");
    tintegrate->add_option("--filter", ti.filter)->required();
    tintegrate->add_option("--monomial", ti.monomial, "exponent vector, e.g. 1 or 1,-1");
    tintegrate->add_option("--level", ti.level)->check(CLI::NonNegativeNumber);
    tintegrate->add_option("--form", ti.form, "push | preimage | both")
        ->check(CLI::IsMember({"push", "preimage", "both"}));
    tintegrate->add_option("--grid", ti.grid)->check(CLI::PositiveNumber);
    tintegrate->add_option("--tol", ti.tol, "float agreement tolerance");
    tintegrate->add_option("--norm", ti.norm);
    tintegrate->add_flag("--no-quadrature", ti.no_quadrature, "fail instead of falling back");
    tintegrate->add_flag("--strict", ti.strict);
    add_format(tintegrate, ti.format);
    tintegrate->callback([&] { rc = run_tau_integrate(ti); });

    TauRnOpts tr;
    auto* trn = tau->add_subcommand("rn-check", "level-shift quasi-invariance residual");
    trn->add_option("--filter", tr.filter)->required();
    trn->add_option("--monomial", tr.monomial);
    trn->add_option("--level", tr.level)->check(CLI::NonNegativeNumber);
    trn->add_option("--direction", tr.direction, "inverse | forward")
        ->check(CLI::IsMember({"inverse", "forward"}));
    trn->add_option("--grid", tr.grid)->check(CLI::PositiveNumber);
    trn->add_option("--tol", tr.tol, "residual tolerance (default by direction)");
    trn->add_option("--norm", tr.norm);
    trn->add_flag("--strict", tr.strict);
    add_format(trn, tr.format);
    trn->callback([&] { rc = run_tau_rn(tr); });

    auto* msf = app.add_subcommand("msf", "generalized MSF wavelet checks");
    msf->require_subcommand(1);
    MsfCheckOpts mc;
    auto* mcheck = msf->add_subcommand("check", "validate a fibered-set JSON file");
    mcheck->add_option("--filter", mc.filter)->required();
    mcheck->add_option("--set", mc.set, "fibered-set JSON file")->required();
    mcheck->add_flag("--strict", mc.strict);
    add_format(mcheck, mc.format);
    mcheck->callback([&] { rc = run_msf_check(mc); });

    MsfShannonOpts ms;
    auto* mshannon = msf->add_subcommand("shannon", "built-in Shannon wavelet-set suite");
    mshannon->add_option("--samples", ms.samples)->check(CLI::PositiveNumber);
    mshannon->add_option("--depth", ms.depth)->check(CLI::PositiveNumber);
    mshannon->add_option("--tol", ms.tol);
    mshannon->add_option("--jrange", ms.jrange)->check(CLI::PositiveNumber);
    mshannon->add_option("--mc-samples", ms.mc_samples)->check(CLI::PositiveNumber);
    mshannon->add_option("--seed", ms.seed);
    mshannon->add_option("--jobs", ms.jobs, "grid-scan workers")->check(CLI::PositiveNumber);
    mshannon->add_flag("--strict", ms.strict);
    add_format(mshannon, ms.format);
    mshannon->callback([&] { rc = run_msf_shannon(ms); });

    MsfFeasibilityOpts mf;
    auto* mfeas = msf->add_subcommand("feasibility", "atom-based MSF feasibility verdict");
    mfeas->add_option("--filter", mf.filter)->required();
    mfeas->add_option("--fibers", mf.fibers)->check(CLI::PositiveNumber);
    mfeas->add_option("--depth", mf.depth)->check(CLI::PositiveNumber);
    mfeas->add_option("--seed", mf.seed);
    mfeas->add_option("--norm", mf.norm);
    add_format(mfeas, mf.format);
    mfeas->callback([&] { rc = run_msf_feasibility(mf); });

    auto* sol = app.add_subcommand("solenoid", "inverse-limit coordinates");
    sol->require_subcommand(1);
    SolThetaOpts st;
    auto* stheta = sol->add_subcommand("theta", "embed (base, word) and round-trip");
    stheta->add_option("--filter", st.filter, "filter fixing the dilation");
    stheta->add_option("--diag", st.diag, "dilation diagonal, e.g. 2 or 2,3");
    stheta->add_option("--t", st.t)->required();
    stheta->add_option("--word", st.word);
    stheta->add_option("--depth", st.depth)->check(CLI::PositiveNumber);
    stheta->add_flag("--strict", st.strict);
    add_format(stheta, st.format);
    stheta->callback([&] { rc = run_sol_theta(st); });

    SolSigmaOpts ss;
    auto* ssigma = sol->add_subcommand("sigma", "apply the level shift");
    ssigma->add_option("--filter", ss.filter);
    ssigma->add_option("--diag", ss.diag);
    ssigma->add_option("--t", ss.t)->required();
    ssigma->add_option("--word", ss.word);
    ssigma->add_option("--count", ss.count)->check(CLI::NonNegativeNumber);
    ssigma->add_flag("--inverse", ss.inverse);
    add_format(ssigma, ss.format);
    ssigma->callback([&] { rc = run_sol_sigma(ss); });

    SolWindOpts sw;
    auto* swind = sol->add_subcommand("wind", "winding-line coordinates");
    swind->add_option("--filter", sw.filter);
    swind->add_option("--diag", sw.diag);
    swind->add_option("--x", sw.x, "unreduced parameter in R^d")->required();
    swind->add_option("--depth", sw.depth)->check(CLI::PositiveNumber);
    swind->add_flag("--strict", sw.strict);
    add_mode(swind, sw.mode);
    add_format(swind, sw.format);
    swind->callback([&] { rc = run_sol_wind(sw); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const TermCapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
