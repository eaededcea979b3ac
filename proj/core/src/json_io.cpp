#include "solenoidal/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace solenoidal {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Rat rat_from_json(const json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<int64_t>());
    throw std::runtime_error("rational values must be \"p/q\" strings or integers");
}

std::vector<int64_t> int_vector(const json& j, size_t d) {
    if (!j.is_array() || j.size() != d)
        throw std::runtime_error("expected an integer array of the dilation dimension");
    std::vector<int64_t> out;
    for (const auto& v : j) out.push_back(v.get<int64_t>());
    return out;
}

Digit digit_from_json(const json& j, size_t d) { return Digit{int_vector(j, d)}; }

}  // namespace

LaurentFilter filter_from_json_text(const std::string& text) {
    json j = json::parse(text);
    auto diag = j.at("diag").get<std::vector<int64_t>>();
    int d = j.at("d").get<int>();
    if (static_cast<size_t>(d) != diag.size())
        throw std::runtime_error("filter JSON: d does not match diag length");
    DilationSpec spec = DilationSpec::make(diag);

    bool any_exact = false, any_float = false;
    std::vector<LaurentFilter::Term> terms;
    for (const auto& tj : j.at("terms")) {
        LaurentFilter::Term term;
        term.exp = int_vector(tj.at("exp"), static_cast<size_t>(d));
        if (tj.contains("re_over_sqrtK") || tj.contains("im_over_sqrtK")) {
            any_exact = true;
            term.re_over_sqrtK = tj.value("re_over_sqrtK", int64_t{0});
            term.im_over_sqrtK = tj.value("im_over_sqrtK", int64_t{0});
        } else if (tj.contains("re") || tj.contains("im")) {
            any_float = true;
            term.approx = {tj.value("re", 0.0), tj.value("im", 0.0)};
        } else {
            throw std::runtime_error("filter JSON: term carries neither exact nor float "
                                     "coefficients");
        }
        terms.push_back(std::move(term));
    }
    if (any_exact && any_float)
        throw std::runtime_error("filter JSON: exact and float terms cannot be mixed");
    std::string name = j.value("name", std::string("custom"));
    if (any_float) return LaurentFilter::approx(spec, std::move(terms), name);
    int64_t K = j.at("K").get<int64_t>();
    return LaurentFilter::exact(spec, K, std::move(terms), name);
}

LaurentFilter filter_from_json_file(const std::string& path) {
    return filter_from_json_text(slurp(path));
}

std::string filter_to_json_text(const LaurentFilter& f) {
    json j;
    j["d"] = f.dim();
    j["diag"] = f.dilation().diag;
    j["name"] = f.name();
    json terms = json::array();
    for (const auto& t : f.filter_terms()) {
        json tj;
        tj["exp"] = t.exp;
        if (f.is_exact()) {
            tj["re_over_sqrtK"] = t.re_over_sqrtK;
            tj["im_over_sqrtK"] = t.im_over_sqrtK;
        } else {
            tj["re"] = t.approx.real();
            tj["im"] = t.approx.imag();
        }
        terms.push_back(tj);
    }
    j["terms"] = terms;
    if (f.is_exact()) j["K"] = f.K();
    return j.dump(2);
}

FiberedSet fibered_set_from_json_text(const std::string& text, const DilationSpec& spec) {
    json j = json::parse(text);
    FiberedSet out;
    const size_t d = spec.diag.size();
    for (const auto& rj : j.at("regions")) {
        FiberedRegion reg;
        const auto& box = rj.at("box");
        for (const auto& v : box.at("lo")) reg.box.lo.push_back(rat_from_json(v));
        for (const auto& v : box.at("hi")) reg.box.hi.push_back(rat_from_json(v));
        if (rj.contains("words")) {
            for (const auto& wj : rj.at("words")) {
                DigitWord w;
                if (wj.contains("prefix"))
                    for (const auto& dj : wj.at("prefix")) w.prefix.push_back(digit_from_json(dj, d));
                if (wj.contains("period"))
                    for (const auto& dj : wj.at("period")) w.period.push_back(digit_from_json(dj, d));
                reg.fiber.words.push_back(std::move(w));
            }
        }
        if (rj.contains("cylinders")) {
            for (const auto& cj : rj.at("cylinders")) {
                std::vector<Digit> cyl;
                for (const auto& dj : cj) cyl.push_back(digit_from_json(dj, d));
                reg.fiber.cylinders.push_back(std::move(cyl));
            }
        }
        out.regions.push_back(std::move(reg));
    }
    validate_fibered_set(out, spec);
    return out;
}

FiberedSet fibered_set_from_json_file(const std::string& path, const DilationSpec& spec) {
    return fibered_set_from_json_text(slurp(path), spec);
}

std::string fibered_set_to_json_text(const FiberedSet& e) {
    json j;
    json regions = json::array();
    for (const auto& reg : e.regions) {
        json rj;
        json lo = json::array(), hi = json::array();
        for (const auto& v : reg.box.lo) lo.push_back(format_rat(v));
        for (const auto& v : reg.box.hi) hi.push_back(format_rat(v));
        rj["box"] = {{"lo", lo}, {"hi", hi}};
        json words = json::array();
        for (const auto& w : reg.fiber.words) {
            json wj;
            json prefix = json::array(), period = json::array();
            for (const auto& a : w.prefix) prefix.push_back(a.a);
            for (const auto& a : w.period) period.push_back(a.a);
            wj["prefix"] = prefix;
            wj["period"] = period;
            words.push_back(wj);
        }
        rj["words"] = words;
        json cylinders = json::array();
        for (const auto& cyl : reg.fiber.cylinders) {
            json cj = json::array();
            for (const auto& a : cyl) cj.push_back(a.a);
            cylinders.push_back(cj);
        }
        rj["cylinders"] = cylinders;
        regions.push_back(rj);
    }
    j["regions"] = regions;
    return j.dump(2);
}

LambdaFunction lambda_from_json_text(const std::string& text) {
    json j = json::parse(text);
    LambdaFunction out;
    for (const auto& rj : j.at("rules")) {
        LambdaRule rule;
        std::string kind = rj.at("kind").get<std::string>();
        if (kind == "constant") {
            rule.kind = LambdaRule::Kind::Constant;
            rule.constant = {rj.value("re", 1.0), rj.value("im", 0.0)};
        } else if (kind == "inverse_scaling_shift") {
            rule.kind = LambdaRule::Kind::InverseScalingShift;
            for (const auto& v : rj.at("shift")) rule.shift.push_back(rat_from_json(v));
        } else {
            throw std::runtime_error("unknown lambda rule kind: " + kind);
        }
        out.rules.push_back(std::move(rule));
    }
    return out;
}

LambdaFunction lambda_from_json_file(const std::string& path) {
    return lambda_from_json_text(slurp(path));
}

std::string lambda_to_json_text(const LambdaFunction& l) {
    json j;
    json rules = json::array();
    for (const auto& rule : l.rules) {
        json rj;
        if (rule.kind == LambdaRule::Kind::Constant) {
            rj["kind"] = "constant";
            rj["re"] = rule.constant.real();
            rj["im"] = rule.constant.imag();
        } else {
            rj["kind"] = "inverse_scaling_shift";
            json shift = json::array();
            for (const auto& v : rule.shift) shift.push_back(format_rat(v));
            rj["shift"] = shift;
        }
        rules.push_back(rj);
    }
    j["rules"] = rules;
    return j.dump(2);
}

}  // namespace solenoidal
