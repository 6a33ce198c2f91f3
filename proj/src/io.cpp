#include "chflow/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chflow {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    return out;
}

double parse_finite(const std::string& tok, const std::string& what) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw FormatError("bad " + what + ": '" + tok + "'");
    }
    if (used != tok.size()) throw FormatError("trailing characters in " + what + ": '" + tok + "'");
    if (!std::isfinite(v)) throw FormatError(what + " must be finite: '" + tok + "'");
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PeakonProfile read_profile(const std::string& path) {
    auto in = open_in(path);
    std::vector<PeakonNode> nodes;
    std::string line;
    double prev_x = -HUGE_VAL;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        PeakonNode n{0.0, 0.0, 0.0};
        bool has_x = false, has_p = false;
        while (ls >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                throw FormatError("profile: expected key=value, got '" + tok + "'");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "x") { n.x = parse_finite(val, "x"); has_x = true; }
            else if (key == "p") { n.p = parse_finite(val, "p"); has_p = true; }
            else if (key == "h") { n.h = parse_finite(val, "h"); }
            else throw FormatError("profile: unknown key '" + key + "'");
        }
        if (!has_x && !has_p) continue;  // blank/comment line
        if (!has_x || !has_p) throw FormatError("profile: node needs both x and p");
        if (!(n.x > prev_x)) throw FormatError("profile: nodes must be sorted by x");
        prev_x = n.x;
        nodes.push_back(n);
    }
    return PeakonProfile(std::move(nodes));
}

void write_profile(const std::string& path, const PeakonProfile& profile) {
    auto out = open_out(path);
    out << "# chflow profile\n";
    for (const auto& n : profile.nodes()) {
        out << "x=" << fmt17(n.x) << " p=" << fmt17(n.p);
        if (n.h != 0.0) out << " h=" << fmt17(n.h);
        out << "\n";
    }
}

SpectralMeasure read_measure(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    bool log_domain = false;
    std::vector<SpectralAtom> atoms;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            std::istringstream ls(line.substr(1));
            std::string word;
            if (ls >> word && word == "log") log_domain = true;
            continue;
        }
        std::istringstream ls(line);
        std::string t1, t2;
        if (!(ls >> t1)) continue;
        if (!(ls >> t2)) throw FormatError("measure: expected 'lambda gamma' per line");
        double lambda = parse_finite(t1, "lambda");
        double second = parse_finite(t2, log_domain ? "log_gamma" : "gamma");
        if (lambda == 0.0) throw FormatError("measure: lambda must be nonzero");
        double log_gamma;
        if (log_domain) {
            log_gamma = second;
        } else {
            if (!(second > 0.0)) throw NonPositiveWeight("measure: gamma must be positive");
            log_gamma = std::log(second);
        }
        atoms.push_back({lambda, log_gamma});
    }
    return SpectralMeasure(std::move(atoms));
}

void write_measure(const std::string& path, const SpectralMeasure& rho, bool log_domain) {
    auto out = open_out(path);
    if (log_domain) out << "# log\n";
    for (const auto& a : rho.atoms())
        out << fmt17(a.lambda) << " " << fmt17(log_domain ? a.log_gamma : a.gamma()) << "\n";
}

SampledString read_sampled_string(const std::string& path) {
    auto in = open_in(path);
    SampledString s;
    std::string line;
    enum { kGrid, kAtoms } section = kGrid;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t1;
        if (!(ls >> t1)) continue;
        if (t1 == "atoms") { section = kAtoms; continue; }
        if (t1 == "tail_bound") {
            std::string t2;
            if (!(ls >> t2)) throw FormatError("sampled string: tail_bound needs a value");
            s.tail_bound = parse_finite(t2, "tail_bound");
            continue;
        }
        std::string t2;
        if (!(ls >> t2)) throw FormatError("sampled string: expected two columns");
        double a = parse_finite(t1, "column 1"), b = parse_finite(t2, "column 2");
        if (section == kGrid) {
            s.grid.push_back(a);
            s.w_values.push_back(b);
        } else {
            s.upsilon_atoms.push_back({a, b});
        }
    }
    s.validate();
    return s;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,node,x,p,h\n";
    for (size_t i = 0; i < traj.times.size(); ++i)
        for (size_t k = 0; k < traj.states[i].size(); ++k) {
            const auto& n = traj.states[i].node(k);
            out << fmt17(traj.times[i]) << "," << k << "," << fmt17(n.x) << "," << fmt17(n.p)
                << "," << fmt17(n.h) << "\n";
        }
}

namespace {

nlohmann::json ledger_row_json(double t, const ConservedRecord& r) {
    nlohmann::json ep;
    for (const auto& [p, v] : r.Ep) ep[fmt17(p)] = v;
    return nlohmann::json{{"t", t},
                          {"lambda_set_hash", r.lambda_set_hash},
                          {"half_sum_lambda_minus2", r.half_sum_lambda_minus2},
                          {"mu_total", r.mu_total},
                          {"E", r.E},
                          {"Ep", ep},
                          {"omega_total", r.omega_total},
                          {"u_plus_ux_sup", r.u_plus_ux_sup},
                          {"in_D_plus", r.in_D_plus}};
}

}  // namespace

void write_trajectory_json(const std::string& path, const Trajectory& traj) {
    nlohmann::json out = nlohmann::json::array();
    for (size_t i = 0; i < traj.times.size(); ++i) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : traj.states[i].nodes())
            nodes.push_back({{"x", n.x}, {"p", n.p}, {"h", n.h}});
        out.push_back({{"t", traj.times[i]},
                       {"nodes", nodes},
                       {"collision_degenerate", static_cast<bool>(traj.collision_flags[i])}});
    }
    open_out(path) << out.dump(2) << "\n";
}

void write_ledger_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,lambda_set_hash,half_sum_lambda_minus2,mu_total,E,Ep_1.5,Ep_2,Ep_3,"
           "omega_total,u_plus_ux_sup,in_D_plus\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const auto& r = traj.ledger[i];
        out << fmt17(traj.times[i]) << "," << r.lambda_set_hash << ","
            << fmt17(r.half_sum_lambda_minus2) << "," << fmt17(r.mu_total) << "," << fmt17(r.E);
        for (double p : {1.5, 2.0, 3.0}) out << "," << fmt17(r.Ep.at(p));
        out << "," << fmt17(r.omega_total) << "," << fmt17(r.u_plus_ux_sup) << ","
            << (r.in_D_plus ? 1 : 0) << "\n";
    }
}

void write_ledger_json(const std::string& path, const Trajectory& traj) {
    nlohmann::json out = nlohmann::json::array();
    for (size_t i = 0; i < traj.times.size(); ++i)
        out.push_back(ledger_row_json(traj.times[i], traj.ledger[i]));
    open_out(path) << out.dump(2) << "\n";
}

void write_audit_csv(const std::string& path, const AuditTable& table) {
    auto out = open_out(path);
    out << "t,lambda_drift,mu_drift,omega_drift,E,E_corridor_ok,sup_inf,sup_corridor_ok\n";
    for (const auto& row : table.rows)
        out << fmt17(row.t) << "," << fmt17(row.lambda_drift) << "," << fmt17(row.mu_drift) << ","
            << fmt17(row.omega_drift) << "," << fmt17(row.E) << "," << (row.E_corridor_ok ? 1 : 0)
            << "," << fmt17(row.sup_inf) << "," << (row.sup_corridor_ok ? 1 : 0) << "\n";
}

void write_audit_json(const std::string& path, const AuditTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json ep;
        for (const auto& [p, v] : row.Ep) ep[fmt17(p)] = v;
        rows.push_back({{"t", row.t},
                        {"lambda_drift", row.lambda_drift},
                        {"mu_drift", row.mu_drift},
                        {"omega_drift", row.omega_drift},
                        {"E", row.E},
                        {"E_corridor_ok", row.E_corridor_ok},
                        {"sup_inf", row.sup_inf},
                        {"sup_corridor_ok", row.sup_corridor_ok},
                        {"Ep", ep}});
    }
    nlohmann::json out{{"in_D_plus", table.in_D_plus},
                       {"E0", table.E0},
                       {"max_lambda_drift", table.max_lambda_drift},
                       {"max_mu_drift", table.max_mu_drift},
                       {"max_omega_drift", table.max_omega_drift},
                       {"corridors_ok", table.corridors_ok},
                       {"pass", table.pass},
                       {"rows", rows}};
    open_out(path) << out.dump(2) << "\n";
}

}  // namespace chflow
