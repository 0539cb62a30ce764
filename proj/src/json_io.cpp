#include "lamlab/json_io.hpp"

#include <algorithm>
#include <cmath>

#include "lamlab/util.hpp"

namespace lamlab {

config_error::config_error(const std::string& msg, int line_, int column_)
    : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                         std::to_string(column_)),
      line(line_),
      column(column_) {}

json parse_config(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1, col = 1;
        const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        const size_t cut = msg.find(" at ");  // position is reported separately
        if (cut != std::string::npos) msg = msg.substr(0, cut);
        throw config_error(msg, line, col);
    }
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object()) throw std::invalid_argument(context + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("unknown key '" + key + "' in " + context);
}

std::string config_digest(const json& j) { return sha256_hex(j.dump()); }

namespace {

const json& need(const json& j, const std::string& key, const std::string& context) {
    const auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(context + " is missing '" + key + "'");
    return *it;
}

long long need_int(const json& j, const std::string& key, const std::string& context) {
    const json& v = need(j, key, context);
    if (!v.is_number_integer())
        throw std::invalid_argument(context + "." + key + " must be an integer");
    return v.get<long long>();
}

}  // namespace

Hamiltonian hamiltonian_from_json(const json& j, const std::string& context) {
    check_keys(j, {"spins", "period", "denom", "terms"}, context);
    Hamiltonian h;
    const json& spins = need(j, "spins", context);
    if (!spins.is_array() || spins.size() < 2)
        throw std::invalid_argument(context + ".spins must list at least two names");
    for (const auto& s : spins) h.spins.push_back(s.get<std::string>());
    h.period = j.contains("period") ? static_cast<int>(need_int(j, "period", context)) : 1;
    h.denom = j.contains("denom") ? need_int(j, "denom", context) : 0;
    const json& terms = need(j, "terms", context);
    if (!terms.is_array()) throw std::invalid_argument(context + ".terms must be an array");
    int tn = 0;
    for (const auto& tj : terms) {
        const std::string tctx = context + ".terms[" + std::to_string(tn++) + "]";
        check_keys(tj, {"pattern", "residue", "table"}, tctx);
        PatternPotential t;
        for (const auto& p : need(tj, "pattern", tctx)) t.pattern.push_back(p.get<int>());
        t.residue = tj.contains("residue") ? static_cast<int>(need_int(tj, "residue", tctx)) : 0;
        for (const auto& v : need(tj, "table", tctx)) t.table.push_back(v.get<double>());
        h.terms.push_back(std::move(t));
    }
    h.finalize();
    return h;
}

json hamiltonian_to_json(const Hamiltonian& h) {
    json j;
    j["spins"] = h.spins;
    j["period"] = h.period;
    j["denom"] = h.denom;
    j["terms"] = json::array();
    for (const auto& t : h.terms) {
        json tj;
        tj["pattern"] = t.pattern;
        tj["residue"] = t.residue;
        tj["table"] = t.table;
        j["terms"].push_back(std::move(tj));
    }
    return j;
}

HamiltonianFamily family_from_json(const json& j, const std::string& context) {
    check_keys(j, {"base", "perturbations", "mu"}, context);
    HamiltonianFamily f;
    f.base = hamiltonian_from_json(need(j, "base", context), context + ".base");
    if (j.contains("perturbations")) {
        int n = 0;
        for (const auto& pj : j.at("perturbations"))
            f.perturbations.push_back(hamiltonian_from_json(
                pj, context + ".perturbations[" + std::to_string(n++) + "]"));
    }
    if (j.contains("mu"))
        for (const auto& m : j.at("mu")) f.mu.push_back(m.get<double>());
    f.validate();
    return f;
}

json family_to_json(const HamiltonianFamily& f) {
    json j;
    j["base"] = hamiltonian_to_json(f.base);
    j["perturbations"] = json::array();
    for (const auto& p : f.perturbations) j["perturbations"].push_back(hamiltonian_to_json(p));
    j["mu"] = f.mu;
    return j;
}

Window window_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || (j.size() != 2 && j.size() != 4))
        throw std::invalid_argument(context + " must be [lo,hi] or [lo0,hi0,lo1,hi1]");
    std::vector<int> v;
    for (const auto& x : j) v.push_back(x.get<int>());
    Window w = v.size() == 2 ? Window(v[0], v[1]) : Window(v[0], v[1], v[2], v[3]);
    return w;
}

json window_to_json(const Window& w) {
    if (w.dim == 1) return json::array({w.lo[0], w.hi[0]});
    return json::array({w.lo[0], w.hi[0], w.lo[1], w.hi[1]});
}

Configuration configuration_from_json(const json& j, const LaminatedModel& m,
                                      const std::string& context) {
    check_keys(j, {"window", "exterior_q", "spins"}, context);
    const Window w = window_from_json(need(j, "window", context), context + ".window");
    const int q = static_cast<int>(need_int(j, "exterior_q", context));
    if (q < 0 || q >= m.ground_count())
        throw std::invalid_argument(context + ".exterior_q out of range");
    Configuration c = lift_ground(m, q, w);
    const json& spins = need(j, "spins", context);
    if (!spins.is_array() || static_cast<long long>(spins.size()) != w.volume())
        throw std::invalid_argument(context + ".spins must hold one value per window site");
    for (size_t idx = 0; idx < spins.size(); ++idx) {
        const long long v = spins[idx].get<long long>();
        if (v < 0 || v >= m.spin_count())
            throw std::invalid_argument(context + ".spins has an out-of-range value");
        c.spins[idx] = static_cast<spin_t>(v);
    }
    return c;
}

json configuration_to_json(const Configuration& c, int exterior_q) {
    json j;
    j["window"] = window_to_json(c.window);
    j["exterior_q"] = exterior_q;
    j["spins"] = json::array();
    for (spin_t s : c.spins) j["spins"].push_back(static_cast<int>(s));
    return j;
}

json block_model_to_json(const BlockModel& m) {
    json j;
    j["schema"] = "lamlab/block-model/v1";
    j["source"] = hamiltonian_to_json(m.source);
    j["block_size"] = m.block_size;
    j["blocks"] = m.blocks;
    j["phi1"] = m.phi1;
    j["phi2"] = m.phi2;
    if (m.exact()) {
        j["phi1_num"] = m.phi1_num;
        j["phi2_num"] = m.phi2_num;
    }
    return j;
}

BlockModel block_model_from_json(const json& j) {
    check_keys(j, {"schema", "source", "block_size", "blocks", "phi1", "phi2", "phi1_num",
                   "phi2_num"},
               "block model");
    if (need(j, "schema", "block model") != "lamlab/block-model/v1")
        throw std::invalid_argument("unsupported block model schema");
    BlockModel m;
    m.source = hamiltonian_from_json(need(j, "source", "block model"), "block model.source");
    m.block_size = static_cast<int>(need_int(j, "block_size", "block model"));
    m.blocks = need_int(j, "blocks", "block model");
    m.phi1 = need(j, "phi1", "block model").get<std::vector<double>>();
    m.phi2 = need(j, "phi2", "block model").get<std::vector<double>>();
    if (j.contains("phi1_num")) m.phi1_num = j.at("phi1_num").get<std::vector<long long>>();
    if (j.contains("phi2_num")) m.phi2_num = j.at("phi2_num").get<std::vector<long long>>();
    if (m.blocks <= 0 || m.phi1.size() != static_cast<size_t>(m.blocks) ||
        m.phi2.size() != static_cast<size_t>(m.blocks) * static_cast<size_t>(m.blocks))
        throw std::invalid_argument("block model tables have inconsistent sizes");
    return m;
}

namespace {

json cycle_to_json(const Cycle& c) {
    json j;
    j["vertices"] = c.vertices;
    j["mean"] = c.mean;
    return j;
}

}  // namespace

json ground_report_to_json(const GroundReport& r) {
    json j;
    j["schema"] = "lamlab/ground-report/v1";
    j["block_size"] = r.model.block_size;
    j["exact"] = r.exact;
    j["rounds"] = json::array();
    for (const auto& round : r.rounds) {
        json rj;
        rj["block_size"] = round.block_size;
        rj["min_mean"] = round.min_mean;
        rj["cycles"] = json::array();
        for (const auto& c : round.cycles) rj["cycles"].push_back(cycle_to_json(c));
        j["rounds"].push_back(std::move(rj));
    }
    j["ground_words"] = r.ground_words;
    j["ground_patterns"] = json::array();
    for (const auto& pat : r.ground_patterns) {
        json pj = json::array();
        for (spin_t s : pat) pj.push_back(static_cast<int>(s));
        j["ground_patterns"].push_back(std::move(pj));
    }
    j["min_mean"] = r.min_mean;
    j["shift"] = r.shift;
    if (r.exact) j["shift_exact"] = json::array({r.shift_exact.num, r.shift_exact.den});
    j["peierls_finite"] = r.peierls_finite;
    if (r.peierls_finite) {
        j["peierls_c"] = r.peierls_c;
        if (r.exact)
            j["peierls_exact"] = json::array({r.peierls_exact.num, r.peierls_exact.den});
    } else {
        j["peierls_c"] = nullptr;
    }
    return j;
}

json contour_to_json(const Contour& g) {
    json j;
    j["support"] = json::array();
    for (const auto& c : g.support) j["support"].push_back(json::array({c.i, c.k}));
    j["local_config"] = json::array();
    for (spin_t s : g.local_config) j["local_config"].push_back(static_cast<int>(s));
    j["exterior_q"] = g.exterior_q;
    j["interiors"] = json::object();
    for (const auto& [lab, cols] : g.interiors) {
        json cj = json::array();
        for (const auto& c : cols) cj.push_back(json::array({c.i, c.k}));
        j["interiors"][std::to_string(lab)] = std::move(cj);
    }
    j["n_b"] = g.n_b;
    j["n_c"] = g.n_c;
    j["n_d"] = g.n_d;
    j["norm"] = g.norm();
    j["volume"] = g.volume_total();
    j["diameter"] = g.diameter;
    j["external"] = g.external;
    return j;
}

json bound_audit_to_json(const BoundAudit& a) {
    json j;
    j["psi"] = a.psi.psi;
    j["psi_vertical"] = a.psi.psi_v;
    j["psi_horizontal"] = a.psi.psi_g;
    j["relative_energy"] = a.psi.h_rel;
    j["correction"] = a.psi.correction;
    j["n_b"] = a.n_b;
    j["n_c"] = a.n_c;
    j["n_d"] = a.n_d;
    j["norm"] = a.norm;
    j["variable_columns"] = a.variable_columns;
    j["differing_interfaces"] = a.differing_interfaces;
    j["rho"] = a.rho;
    j["u"] = a.u;
    j["v"] = a.v;
    j["layer_min_slack"] = a.layer_min_slack;
    j["layer_pass"] = a.layer_pass;
    j["horizontal_slack"] = a.horizontal_slack;
    j["horizontal_pass"] = a.horizontal_pass;
    j["vertical_slack"] = a.vertical_slack;
    j["vertical_pass"] = a.vertical_pass;
    j["vertical_sound_slack"] = a.vertical_sound_slack;
    j["vertical_sound_pass"] = a.vertical_sound_pass;
    j["combined_slack"] = a.combined_slack;
    j["combined_pass"] = a.combined_pass;
    j["decay_lhs"] = a.decay_lhs;
    j["decay_rhs"] = a.decay_rhs;
    j["decay_slack"] = a.decay_slack;
    j["decay_pass"] = a.decay_pass;
    return j;
}

json parameter_report_to_json(const ParameterReport& r) {
    json j;
    j["beta"] = r.beta;
    j["rho"] = r.rho;
    j["tau"] = r.tau;
    j["u"] = r.u;
    j["v"] = r.v;
    j["l_min"] = r.l_min;
    j["lambda0"] = r.lambda0;
    j["shrink"] = r.shrink;
    j["from_tau"] = r.from_tau;
    return j;
}

}  // namespace lamlab
