#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace twistlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

i64 parse_i64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        i64 r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw input_error("config: bad integer for '" + key + "': " + v);
    }
}

double parse_f64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw input_error("config: bad number for '" + key + "': " + v);
    }
}

// shortest representation that round-trips the double
std::string format_f64(double v) {
    char buf[64];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) return buf;
    }
    return buf;
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw input_error("config line " + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "a1") a1 = parse_i64(key, value);
    else if (key == "a2") a2 = parse_i64(key, value);
    else if (key == "a3") a3 = parse_i64(key, value);
    else if (key == "a4") a4 = parse_i64(key, value);
    else if (key == "a6") a6 = parse_i64(key, value);
    else if (key == "conductor") conductor = parse_i64(key, value);
    else if (key == "eps_e") {
        i64 e = parse_i64(key, value);
        if (e != 1 && e != -1) throw input_error("config: eps_e must be +-1");
        eps_e = int(e);
    } else if (key == "X") X = parse_f64(key, value);
    else if (key == "x_policy") {
        if (value == "paper") { x_policy = XPolicy::kPaper; }
        else if (value.rfind("power:", 0) == 0) {
            x_policy = XPolicy::kPower;
            x_param = parse_f64(key, value.substr(6));
        } else if (value.rfind("fixed:", 0) == 0) {
            x_policy = XPolicy::kFixed;
            x_param = parse_f64(key, value.substr(6));
        } else throw input_error("config: x_policy must be paper | power:t | fixed:x");
    } else if (key == "L_policy") {
        if (value == "logX") { L_policy = LPolicy::kLogX; }
        else if (value.rfind("paper:", 0) == 0) {
            L_policy = LPolicy::kPaper;
            L_param = parse_f64(key, value.substr(6));
        } else if (value.rfind("fixed:", 0) == 0) {
            L_policy = LPolicy::kFixed;
            L_param = parse_f64(key, value.substr(6));
        } else throw input_error("config: L_policy must be paper:delta | logX | fixed:L");
    } else if (key == "k_max") k_max = int(parse_i64(key, value));
    else if (key == "alpha") alpha = parse_f64(key, value);
    else if (key == "beta") beta = parse_f64(key, value);
    else if (key == "tail_eps") tail_eps = parse_f64(key, value);
    else if (key == "vanish_threshold") vanish_threshold = parse_f64(key, value);
    else if (key == "bad_prime_mode") {
        if (value == "euler") bad_prime_mode = BadPrimeMode::kEuler;
        else if (value == "exclude") bad_prime_mode = BadPrimeMode::kExclude;
        else throw input_error("config: bad_prime_mode must be euler | exclude");
    } else if (key == "normalization") {
        if (value == "per_d") normalization = Normalization::kPerD;
        else if (value == "per_X") normalization = Normalization::kPerX;
        else throw input_error("config: normalization must be per_d | per_X");
    } else if (key == "threads") threads = int(parse_i64(key, value));
    else if (key == "cache_path") cache_path = value;
    else if (key == "output_path") output_path = value;
    else if (key == "bsgs_threshold") bsgs_threshold = parse_i64(key, value);
    else if (key == "p_max") p_max = parse_i64(key, value);
    else if (key == "n_max") n_max = parse_i64(key, value);
    else if (key == "window") {
        if (value == "smooth") window_indicator = false;
        else if (value == "indicator") window_indicator = true;
        else throw input_error("config: window must be smooth | indicator");
    } else if (key == "ell_list") {
        ell_list.clear();
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) ell_list.push_back(parse_i64(key, item));
        }
        if (ell_list.empty()) throw input_error("config: empty ell_list");
    } else {
        throw input_error("config: unknown key '" + key + "'");
    }
}

std::string ExperimentConfig::get(const std::string& key) const {
    std::ostringstream os;
    if (key == "a1") os << a1;
    else if (key == "a2") os << a2;
    else if (key == "a3") os << a3;
    else if (key == "a4") os << a4;
    else if (key == "a6") os << a6;
    else if (key == "conductor") os << conductor;
    else if (key == "eps_e") os << eps_e;
    else if (key == "X") os << format_f64(X);
    else if (key == "x_policy") {
        if (x_policy == XPolicy::kPaper) os << "paper";
        else if (x_policy == XPolicy::kPower) os << "power:" << format_f64(x_param);
        else os << "fixed:" << format_f64(x_param);
    } else if (key == "L_policy") {
        if (L_policy == LPolicy::kLogX) os << "logX";
        else if (L_policy == LPolicy::kPaper) os << "paper:" << format_f64(L_param);
        else os << "fixed:" << format_f64(L_param);
    } else if (key == "k_max") os << k_max;
    else if (key == "alpha") os << format_f64(alpha);
    else if (key == "beta") os << format_f64(beta);
    else if (key == "tail_eps") os << format_f64(tail_eps);
    else if (key == "vanish_threshold") os << format_f64(vanish_threshold);
    else if (key == "bad_prime_mode")
        os << (bad_prime_mode == BadPrimeMode::kEuler ? "euler" : "exclude");
    else if (key == "normalization")
        os << (normalization == Normalization::kPerD ? "per_d" : "per_X");
    else if (key == "threads") os << threads;
    else if (key == "cache_path") os << cache_path;
    else if (key == "output_path") os << output_path;
    else if (key == "bsgs_threshold") os << bsgs_threshold;
    else if (key == "p_max") os << p_max;
    else if (key == "n_max") os << n_max;
    else if (key == "window") os << (window_indicator ? "indicator" : "smooth");
    else if (key == "ell_list") {
        for (size_t i = 0; i < ell_list.size(); ++i) os << (i ? "," : "") << ell_list[i];
    } else {
        throw input_error("config: unknown key '" + key + "'");
    }
    return os.str();
}

std::string ExperimentConfig::to_text() const {
    static const char* keys[] = {
        "a1", "a2", "a3", "a4", "a6", "conductor", "eps_e", "X", "x_policy",
        "L_policy", "k_max", "alpha", "beta", "tail_eps", "vanish_threshold",
        "bad_prime_mode", "normalization", "threads", "cache_path", "output_path",
        "bsgs_threshold", "p_max", "n_max", "window", "ell_list"};
    std::string out;
    for (const char* k : keys) out += std::string(k) + " = " + get(k) + "\n";
    return out;
}

void ExperimentConfig::validate() const {
    if (!(alpha < beta)) throw input_error("config: alpha < beta required");
    if (X < 20.0) throw input_error("config: X >= 20 required");
    if (!(tail_eps > 0.0) || tail_eps > 1e-4)
        throw input_error("config: tail_eps must lie in (0, 1e-4]");
    curve(); // validates discriminant, conductor, eps
}

CurveSpec ExperimentConfig::curve() const {
    return CurveSpec::make(a1, a2, a3, a4, a6, conductor, eps_e);
}

double ExperimentConfig::paper_x() const {
    return std::pow(X, 1.0 / std::log(std::log(std::log(X))));
}

double ExperimentConfig::resolve_x() const {
    double x = 3.0;
    switch (x_policy) {
        case XPolicy::kPaper: x = paper_x(); break;
        case XPolicy::kPower: x = std::pow(X, x_param); break;
        case XPolicy::kFixed: x = x_param; break;
    }
    return std::max(3.0, x);
}

double ExperimentConfig::resolve_L() const {
    double L = 1.0;
    switch (L_policy) {
        case LPolicy::kPaper: L = (2.0 - L_param / 2.0) * std::log(X); break;
        case LPolicy::kLogX: L = std::log(X); break;
        case LPolicy::kFixed: L = L_param; break;
    }
    return std::max(1.0, L);
}

} // namespace twistlab
