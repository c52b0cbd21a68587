#include "nlsv/json_io.hpp"

#include <cstdio>
#include <set>
#include <stdexcept>

namespace nlsv {

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw std::invalid_argument(std::string(what) + ": unknown key '" + k + "'");
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json freq_to_json(Freq n) { return json::array({n.x, n.y}); }

Freq freq_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw std::invalid_argument("frequency must be [x, y] with integer entries");
    return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

json to_json(const AmplitudeField& f) {
    json e = json::array();
    for (const auto& [n, v] : f) e.push_back({{"n", freq_to_json(n)}, {"re", v.real()}, {"im", v.imag()}});
    return {{"frame", to_string(f.frame())}, {"entries", e}};
}

AmplitudeField field_from_json(const json& j) {
    only_keys(j, {"frame", "entries"}, "field");
    AmplitudeField f(frame_from_string(j.at("frame").get<std::string>()));
    for (const auto& e : j.at("entries")) {
        only_keys(e, {"n", "re", "im"}, "field entry");
        f.add(freq_from_json(e.at("n")), cd(e.at("re").get<double>(), e.at("im").get<double>()));
    }
    return f;
}

json to_json(const ConvPotential& v) {
    json c = json::array();
    for (const auto& [n, x] : v.coeffs()) c.push_back({{"n", freq_to_json(n)}, {"v", x}});
    return {{"s0", v.s0()}, {"hs0_norm", v.hs0_norm()}, {"decay_constant", v.decay_constant()}, {"coeffs", c}};
}

ConvPotential potential_from_json(const json& j) {
    only_keys(j, {"s0", "hs0_norm", "decay_constant", "coeffs"}, "potential");
    std::map<Freq, double> c;
    if (j.contains("coeffs"))
        for (const auto& e : j.at("coeffs")) {
            only_keys(e, {"n", "v"}, "potential coefficient");
            c[freq_from_json(e.at("n"))] = e.at("v").get<double>();
        }
    return ConvPotential(c, j.at("s0").get<double>(), j.at("hs0_norm").get<double>(),
                         j.at("decay_constant").get<double>());
}

ConvPotential potential_from_spec(const json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "zero") return ConvPotential::zero();
        if (s == "sample") return ConvPotential::sample_decaying();
        if (s == "inverse_square") return ConvPotential::inverse_square_tail();
        throw std::invalid_argument("unknown potential '" + s + "'");
    }
    return potential_from_json(j);
}

}  // namespace nlsv
