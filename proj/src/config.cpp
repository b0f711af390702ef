#include "linexp3/config.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace linexp3 {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

struct RawConfig {
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    std::string get(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end())
            throw ValidationError("missing required key '" + key + "'");
        return it->second.first;
    }
    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second.first;
    }
};

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("field '" + key + "': not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("field '" + key + "': not an integer: '" + value + "'");
    }
}

AutoParam parse_auto(const RawConfig& raw, const std::string& key) {
    AutoParam p;
    const std::string value = raw.get_or(key, "auto");
    if (value == "auto") return p;
    p.is_auto = false;
    p.value = parse_double(value, key);
    return p;
}

Vector parse_vector(const std::string& text, const std::string& key) {
    Vector v;
    for (const std::string& part : split(text, ','))
        v.push_back(parse_double(part, key));
    return v;
}

std::vector<Vector> parse_rows(const std::string& text, const std::string& key) {
    std::vector<Vector> rows;
    for (const std::string& part : split(text, ';'))
        rows.push_back(parse_vector(part, key));
    return rows;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ValidationError("field '" + key + "': expected true/false, got '" + value + "'");
}

const char* kKnownKeys[] = {
    "algorithm", "K", "d", "T", "seed", "replications", "eta", "gamma", "beta",
    "M", "mgr_mode", "output", "regret",
    "environment.kind", "environment.points", "environment.probs",
    "environment.radius", "environment.half_width",
    "adversary.kind", "adversary.theta", "adversary.segment_starts",
    "adversary.segment_thetas", "adversary.base", "adversary.amplitude",
    "adversary.period", "adversary.misspec", "adversary.epsilon",
    "adversary.directions", "adversary.frequency", "adversary.scale_to_bound",
};

ContextDistribution build_distribution(const RawConfig& raw, int d) {
    const std::string kind = raw.get("environment.kind");
    if (kind == "finite") {
        auto points = parse_rows(raw.get("environment.points"), "environment.points");
        auto probs = parse_vector(raw.get("environment.probs"), "environment.probs");
        for (const Vector& p : points)
            if (static_cast<int>(p.size()) != d)
                throw ValidationError("environment.points: dimension != d");
        return ContextDistribution::finite(std::move(points), std::move(probs));
    }
    if (kind == "sphere")
        return ContextDistribution::sphere(
            d, parse_double(raw.get("environment.radius"), "environment.radius"));
    if (kind == "cube")
        return ContextDistribution::cube(
            d, parse_double(raw.get("environment.half_width"), "environment.half_width"));
    throw ValidationError("environment.kind: unknown kind '" + kind + "'");
}

std::optional<MisspecSpec> build_misspec(const RawConfig& raw, int K, int d) {
    const std::string kind = raw.get_or("adversary.misspec", "none");
    if (kind == "none") return std::nullopt;
    MisspecSpec m;
    if (kind == "sign_bump")
        m.kind = MisspecSpec::Kind::SignBump;
    else if (kind == "cosine")
        m.kind = MisspecSpec::Kind::Cosine;
    else
        throw ValidationError("adversary.misspec: unknown kind '" + kind + "'");
    m.magnitude = parse_double(raw.get("adversary.epsilon"), "adversary.epsilon");
    m.directions = parse_rows(raw.get("adversary.directions"), "adversary.directions");
    if (static_cast<int>(m.directions.size()) != K)
        throw ValidationError("adversary.directions: need one row per arm");
    for (const Vector& v : m.directions)
        if (static_cast<int>(v.size()) != d)
            throw ValidationError("adversary.directions: dimension != d");
    if (m.kind == MisspecSpec::Kind::Cosine)
        m.frequency = parse_double(raw.get_or("adversary.frequency", "1"), "adversary.frequency");
    return m;
}

AdversarySpec build_adversary(const RawConfig& raw, int K, int d, int T) {
    const std::string kind = raw.get("adversary.kind");
    auto misspec = build_misspec(raw, K, d);
    auto check_block = [&](const std::vector<Vector>& block, const std::string& key) {
        if (static_cast<int>(block.size()) != K)
            throw ValidationError(key + ": need one row per arm");
        for (const Vector& v : block)
            if (static_cast<int>(v.size()) != d)
                throw ValidationError(key + ": dimension != d");
    };
    if (kind == "constant") {
        auto theta = parse_rows(raw.get("adversary.theta"), "adversary.theta");
        check_block(theta, "adversary.theta");
        return AdversarySpec::constant(std::move(theta), T, std::move(misspec));
    }
    if (kind == "piecewise") {
        std::vector<int> starts;
        for (const std::string& part :
             split(raw.get("adversary.segment_starts"), ','))
            starts.push_back(static_cast<int>(parse_int(part, "adversary.segment_starts")));
        std::vector<std::vector<Vector>> blocks;
        for (const std::string& seg :
             split(raw.get("adversary.segment_thetas"), '|')) {
            auto block = parse_rows(seg, "adversary.segment_thetas");
            check_block(block, "adversary.segment_thetas");
            blocks.push_back(std::move(block));
        }
        return AdversarySpec::piecewise(std::move(starts), std::move(blocks), T,
                                        std::move(misspec));
    }
    if (kind == "sinusoidal") {
        auto base = parse_rows(raw.get("adversary.base"), "adversary.base");
        check_block(base, "adversary.base");
        return AdversarySpec::sinusoidal(
            std::move(base),
            parse_double(raw.get("adversary.amplitude"), "adversary.amplitude"),
            parse_double(raw.get("adversary.period"), "adversary.period"), T,
            std::move(misspec));
    }
    throw ValidationError("adversary.kind: unknown kind '" + kind + "'");
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::RobustLinExp3: return "robust_linexp3";
        case Algorithm::RealLinExp3: return "real_linexp3";
        case Algorithm::FullInfo: return "fullinfo";
        case Algorithm::Counterfactual: return "counterfactual";
        case Algorithm::Uniform: return "uniform";
    }
    return "?";
}

ExperimentConfig parse_config(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
        bool known = false;
        for (const char* k : kKnownKeys)
            if (key == k) known = true;
        if (!known)
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (raw.entries.count(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        raw.entries[key] = {value, lineno};
    }

    ExperimentConfig cfg;
    const std::string alg = raw.get("algorithm");
    if (alg == "robust_linexp3")
        cfg.algorithm = Algorithm::RobustLinExp3;
    else if (alg == "real_linexp3")
        cfg.algorithm = Algorithm::RealLinExp3;
    else if (alg == "fullinfo")
        cfg.algorithm = Algorithm::FullInfo;
    else if (alg == "counterfactual")
        cfg.algorithm = Algorithm::Counterfactual;
    else if (alg == "uniform")
        cfg.algorithm = Algorithm::Uniform;
    else
        throw ValidationError("algorithm: unknown value '" + alg + "'");

    cfg.K = static_cast<int>(parse_int(raw.get("K"), "K"));
    cfg.d = static_cast<int>(parse_int(raw.get("d"), "d"));
    cfg.T = static_cast<int>(parse_int(raw.get("T"), "T"));
    if (cfg.K < 1) throw ValidationError("K: must be >= 1");
    if (cfg.d < 1) throw ValidationError("d: must be >= 1");
    if (cfg.T < 1) throw ValidationError("T: must be >= 1");
    cfg.seed = static_cast<std::uint64_t>(parse_int(raw.get_or("seed", "0"), "seed"));
    cfg.replications =
        static_cast<int>(parse_int(raw.get_or("replications", "8"), "replications"));
    if (cfg.replications < 1) throw ValidationError("replications: must be >= 1");

    cfg.eta = parse_auto(raw, "eta");
    cfg.gamma = parse_auto(raw, "gamma");
    cfg.beta = parse_auto(raw, "beta");
    cfg.M = parse_auto(raw, "M");

    const std::string mode = raw.get_or("mgr_mode", "fast");
    if (mode == "fast")
        cfg.mgr_mode = MgrMode::Fast;
    else if (mode == "naive")
        cfg.mgr_mode = MgrMode::Naive;
    else
        throw ValidationError("mgr_mode: expected naive or fast");

    const std::string regret = raw.get_or("regret", "monte_carlo");
    if (regret == "exact")
        cfg.exact_regret = true;
    else if (regret != "monte_carlo")
        throw ValidationError("regret: expected monte_carlo or exact");

    cfg.output = raw.get_or("output", "results.csv");

    cfg.distribution = build_distribution(raw, cfg.d);
    cfg.adversary = build_adversary(raw, cfg.K, cfg.d, cfg.T);
    if (parse_bool(raw.get_or("adversary.scale_to_bound", "true"),
                   "adversary.scale_to_bound"))
        cfg.adversary = cfg.adversary.scaled_to_bound(cfg.distribution.sigma());
    return cfg;
}

}  // namespace linexp3
