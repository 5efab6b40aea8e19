#include "dockmpc/scenario_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace dockmpc {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kNumCols = 49;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

double parse_num(const std::string& tok, int line_no) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError("empty numeric value", line_no);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw ParseError("malformed number '" + t + "'", line_no);
    }
    return v;
}

int parse_int(const std::string& tok, int line_no) {
    const double v = parse_num(tok, line_no);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ParseError("expected an integer, got '" + trim(tok) + "'", line_no);
    }
    return i;
}

std::uint64_t parse_uint(const std::string& tok, int line_no) {
    const std::string t = trim(tok);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ParseError("malformed unsigned integer '" + t + "'", line_no);
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(const std::string& value, std::size_t count, int line_no) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_num(tok, line_no));
    if (out.size() != count) {
        throw ParseError("expected " + std::to_string(count) + " comma-separated values", line_no);
    }
    return out;
}

Vec3 parse_vec3(const std::string& value, int line_no) {
    const auto v = parse_list(value, 3, line_no);
    return Vec3(v[0], v[1], v[2]);
}

Vec3 parse_vec3_deg(const std::string& value, int line_no) {
    Vec3 v = parse_vec3(value, line_no);
    return Vec3(deg2rad(v[0]), deg2rad(v[1]), deg2rad(v[2]));
}

VecX parse_vecn(const std::string& value, int n, int line_no) {
    const auto v = parse_list(value, static_cast<std::size_t>(n), line_no);
    return Eigen::Map<const VecX>(v.data(), n);
}

void apply_tuning_key(MpcTuning& t, const std::string& key, const std::string& value,
                      int line_no) {
    if (key == "Np") {
        t.Np = parse_int(value, line_no);
    } else if (key == "Nc") {
        t.Nc = parse_int(value, line_no);
    } else if (key == "Ts") {
        t.Ts = parse_num(value, line_no);
    } else if (key == "Q") {
        t.Q = parse_vecn(value, 6, line_no);
    } else if (key == "P") {
        t.P = parse_vecn(value, 3, line_no);
    } else if (key == "ws") {
        t.ws = parse_vec3(value, line_no);
    } else {
        throw ParseError("unknown key '" + key + "'", line_no);
    }
}

void apply_key(Scenario& sc, const std::string& section, const std::string& key,
               const std::string& value, int line_no) {
    if (section.empty()) {
        if (key == "name") {
            sc.name = value;
            return;
        }
        throw ParseError("unknown key '" + key + "' outside any section", line_no);
    }
    if (section == "orbit") {
        if (key == "a") sc.orbit.a = parse_num(value, line_no);
        else if (key == "e") sc.orbit.e = parse_num(value, line_no);
        else if (key == "f0_deg") sc.orbit.f0 = deg2rad(parse_num(value, line_no));
        else if (key == "mu") sc.orbit.mu = parse_num(value, line_no);
        else throw ParseError("unknown key '" + key + "' in [orbit]", line_no);
    } else if (section == "inertia") {
        if (key == "J") sc.inertia.J = parse_vec3(value, line_no);
        else if (key == "Jw") sc.inertia.Jw = parse_vec3(value, line_no);
        else throw ParseError("unknown key '" + key + "' in [inertia]", line_no);
    } else if (section == "target") {
        if (key == "mode") {
            const std::string v = trim(value);
            if (v == "constant") sc.target.mode = TargetMotion::Mode::Constant;
            else if (v == "sinusoidal") sc.target.mode = TargetMotion::Mode::Sinusoidal;
            else throw ParseError("target mode must be 'constant' or 'sinusoidal'", line_no);
        } else if (key == "omega") {
            sc.target.omega_const = parse_vec3(value, line_no);
        } else if (key == "amp") {
            sc.target.amp = parse_vec3(value, line_no);
        } else if (key == "periods") {
            sc.target.periods = parse_vec3(value, line_no);
        } else if (key == "initial_attitude_deg") {
            sc.target.initial_attitude = parse_vec3_deg(value, line_no);
        } else {
            throw ParseError("unknown key '" + key + "' in [target]", line_no);
        }
    } else if (section == "mpc.position") {
        apply_tuning_key(sc.tuning_p, key, value, line_no);
    } else if (section == "mpc.attitude") {
        apply_tuning_key(sc.tuning_a, key, value, line_no);
    } else if (section == "limits") {
        if (key == "umax_p") sc.limits.umax_p = parse_vec3(value, line_no);
        else if (key == "umax_a") sc.limits.umax_a = parse_vec3(value, line_no);
        else if (key == "r_safe") sc.limits.r_safe = parse_num(value, line_no);
        else if (key == "gamma_e_deg") sc.limits.gamma_e = deg2rad(parse_num(value, line_no));
        else if (key == "gamma_f_deg") sc.limits.gamma_f = deg2rad(parse_num(value, line_no));
        else throw ParseError("unknown key '" + key + "' in [limits]", line_no);
    } else if (section == "initial") {
        if (key == "rho") sc.x0_p.rho = parse_num(value, line_no);
        else if (key == "eps_deg") sc.x0_p.eps = deg2rad(parse_num(value, line_no));
        else if (key == "beta_deg") sc.x0_p.beta = deg2rad(parse_num(value, line_no));
        else if (key == "rho_dot") sc.x0_p.rho_dot = parse_num(value, line_no);
        else if (key == "rho_epsdot") sc.x0_p.rho_epsdot = parse_num(value, line_no);
        else if (key == "rho_betadot") sc.x0_p.rho_betadot = parse_num(value, line_no);
        else if (key == "att_deg") {
            const Vec3 v = parse_vec3_deg(value, line_no);
            sc.x0_a.phi = v[0];
            sc.x0_a.theta = v[1];
            sc.x0_a.psi = v[2];
        } else if (key == "w") {
            const Vec3 v = parse_vec3(value, line_no);
            sc.x0_a.w1 = v[0];
            sc.x0_a.w2 = v[1];
            sc.x0_a.w3 = v[2];
        } else {
            throw ParseError("unknown key '" + key + "' in [initial]", line_no);
        }
    } else if (section == "run") {
        if (key == "rho_d") sc.rho_d = parse_num(value, line_no);
        else if (key == "duration") sc.duration = parse_num(value, line_no);
        else if (key == "seed") sc.seed = parse_uint(value, line_no);
        else if (key == "conv_pos_threshold") sc.conv_pos_threshold = parse_num(value, line_no);
        else if (key == "conv_att_threshold_deg")
            sc.conv_att_threshold_deg = parse_num(value, line_no);
        else if (key == "mode") {
            const std::string v = trim(value);
            if (v == "standard") sc.mode = ControlMode::Standard;
            else if (v == "sampling") sc.mode = ControlMode::Sampling;
            else throw ParseError("run mode must be 'standard' or 'sampling'", line_no);
        } else {
            throw ParseError("unknown key '" + key + "' in [run]", line_no);
        }
    } else {
        throw ParseError("unknown section [" + section + "]", line_no);
    }
}

void pack_record(const StepRecord& s, double* v) {
    int i = 0;
    v[i++] = s.t;
    for (int j = 0; j < 6; ++j) v[i++] = s.x_p[j];
    for (int j = 0; j < 6; ++j) v[i++] = s.x_a[j];
    for (int j = 0; j < 6; ++j) v[i++] = s.xd_p[j];
    for (int j = 0; j < 6; ++j) v[i++] = s.xd_a[j];
    for (int j = 0; j < 3; ++j) v[i++] = s.u_p[j];
    for (int j = 0; j < 3; ++j) v[i++] = s.u_a[j];
    v[i++] = s.range_margin;
    v[i++] = s.cone_eps_margin;
    v[i++] = s.cone_beta_margin;
    v[i++] = s.fov_roll_margin;
    v[i++] = s.fov_pitch_margin;
    v[i++] = s.fov_yaw_margin;
    v[i++] = static_cast<double>(static_cast<int>(s.status_p));
    v[i++] = static_cast<double>(s.iters_p);
    v[i++] = static_cast<double>(s.relax_p);
    v[i++] = static_cast<double>(static_cast<int>(s.status_a));
    v[i++] = static_cast<double>(s.iters_a);
    v[i++] = static_cast<double>(s.relax_a);
    v[i++] = static_cast<double>(static_cast<int>(s.wrap_beta));
    v[i++] = static_cast<double>(static_cast<int>(s.wrap_psi));
    v[i++] = static_cast<double>(static_cast<int>(s.wrap_phi));
    v[i++] = s.carried_beta;
    v[i++] = s.carried_psi;
    v[i++] = s.carried_phi;
}

StepRecord unpack_record(const double* v, int line_no) {
    const auto branch = [&](double x) {
        const int b = static_cast<int>(x);
        if (static_cast<double>(b) != x || b < 0 || b > 4) {
            throw ParseError("invalid wrap branch value", line_no);
        }
        return static_cast<WrapBranch>(b);
    };
    const auto status = [&](double x) {
        const int q = static_cast<int>(x);
        if (static_cast<double>(q) != x || q < 0 || q > 3) {
            throw ParseError("invalid qp status value", line_no);
        }
        return static_cast<QpStatus>(q);
    };
    StepRecord s;
    int i = 0;
    s.t = v[i++];
    for (int j = 0; j < 6; ++j) s.x_p[j] = v[i++];
    for (int j = 0; j < 6; ++j) s.x_a[j] = v[i++];
    for (int j = 0; j < 6; ++j) s.xd_p[j] = v[i++];
    for (int j = 0; j < 6; ++j) s.xd_a[j] = v[i++];
    for (int j = 0; j < 3; ++j) s.u_p[j] = v[i++];
    for (int j = 0; j < 3; ++j) s.u_a[j] = v[i++];
    s.range_margin = v[i++];
    s.cone_eps_margin = v[i++];
    s.cone_beta_margin = v[i++];
    s.fov_roll_margin = v[i++];
    s.fov_pitch_margin = v[i++];
    s.fov_yaw_margin = v[i++];
    s.status_p = status(v[i++]);
    s.iters_p = static_cast<int>(v[i++]);
    s.relax_p = static_cast<int>(v[i++]);
    s.status_a = status(v[i++]);
    s.iters_a = static_cast<int>(v[i++]);
    s.relax_a = static_cast<int>(v[i++]);
    s.wrap_beta = branch(v[i++]);
    s.wrap_psi = branch(v[i++]);
    s.wrap_phi = branch(v[i++]);
    s.carried_beta = v[i++];
    s.carried_psi = v[i++];
    s.carried_phi = v[i++];
    return s;
}

std::string header_line() {
    const auto& cols = TrajectoryLog::csv_columns();
    std::string h;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i > 0) h += ',';
        h += cols[i];
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json channel_json(const ChannelMetrics& c) {
    return ordered_json{{"conv_time", c.conv_time},
                        {"overshoot", c.overshoot},
                        {"ss_rms", c.ss_rms}};
}

ordered_json metrics_json(const Metrics& m) {
    ordered_json j;
    j["rho"] = channel_json(m.rho);
    j["eps"] = channel_json(m.eps);
    j["beta"] = channel_json(m.beta);
    j["phi"] = channel_json(m.phi);
    j["theta"] = channel_json(m.theta);
    j["psi"] = channel_json(m.psi);
    j["conv_time_pos"] = m.conv_time_pos;
    j["conv_time_att"] = m.conv_time_att;
    j["lvlh_rms"] = m.lvlh_rms;
    j["att_peak_deg"] = m.att_peak_deg;
    j["min_rho"] = m.min_rho;
    j["peak_beta_dev_deg"] = m.peak_beta_dev_deg;
    j["transit_mae_eps_deg"] = m.transit_mae_eps_deg;
    j["transit_mae_beta_deg"] = m.transit_mae_beta_deg;
    for (int i = 0; i < kNumRowFamilies; ++i) {
        j[std::string("max_violation_") + row_family_name(static_cast<RowFamily>(i))] =
            m.max_violation[i];
    }
    j["cone_violations"] = m.cone_violations;
    j["fov_violations"] = m.fov_violations;
    j["cone_violations_unrelaxed"] = m.cone_violations_unrelaxed;
    j["fov_violations_unrelaxed"] = m.fov_violations_unrelaxed;
    j["relax_steps_p"] = m.relax_steps_p;
    j["relax_steps_a"] = m.relax_steps_a;
    j["wrap_resets"] = m.wrap_resets;
    j["max_carried_error_deg"] = m.max_carried_error_deg;
    return j;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);

    Scenario sc;
    sc.name = file_stem(path);
    sc.duration = 500.0;
    sc.limits.gamma_e = deg2rad(30.0);
    sc.limits.gamma_f = deg2rad(30.0);
    sc.tuning_p.Q = (VecX(6) << 1000.0, 30000.0, 30000.0, 1000.0, 3000.0, 3000.0).finished();
    sc.tuning_p.P = (VecX(3) << 100.0, 100.0, 100.0).finished();
    sc.tuning_a.Q = (VecX(6) << 30000.0, 30000.0, 30000.0, 3000.0, 3000.0, 3000.0).finished();
    sc.tuning_a.P = (VecX(3) << 100.0, 100.0, 100.0).finished();

    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key before '='", line_no);
        apply_key(sc, section, key, value, line_no);
    }
    sc.validate();
    return sc;
}

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory file: " + path);
    out << header_line() << '\n';
    double v[kNumCols];
    for (const auto& s : log.steps) {
        pack_record(s, v);
        for (int i = 0; i < kNumCols; ++i) {
            if (i > 0) out << ',';
            out << format_double(v[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed while writing trajectory file: " + path);
}

TrajectoryLog read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header line", 1);
    if (trim(line) != header_line()) throw ParseError("unexpected column header", 1);

    TrajectoryLog log;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        double v[kNumCols];
        std::stringstream ss(line);
        std::string tok;
        int i = 0;
        while (std::getline(ss, tok, ',')) {
            if (i >= kNumCols) throw ParseError("too many columns", line_no);
            v[i++] = parse_num(tok, line_no);
        }
        if (i != kNumCols) throw ParseError("too few columns", line_no);
        log.steps.push_back(unpack_record(v, line_no));
    }
    if (log.steps.size() >= 2) log.Ts = log.steps[1].t - log.steps[0].t;
    return log;
}

void write_trajectory_json(const TrajectoryLog& log, const std::string& path) {
    ordered_json j;
    j["scenario"] = log.scenario_name;
    j["Ts"] = log.Ts;
    j["columns"] = TrajectoryLog::csv_columns();
    ordered_json steps = ordered_json::array();
    double v[kNumCols];
    for (const auto& s : log.steps) {
        pack_record(s, v);
        ordered_json row = ordered_json::array();
        for (int i = 0; i < kNumCols; ++i) row.push_back(v[i]);
        steps.push_back(std::move(row));
    }
    j["steps"] = std::move(steps);

    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory file: " + path);
    out << j.dump(1) << '\n';
    if (!out) throw IoError("failed while writing trajectory file: " + path);
}

TrajectoryLog read_trajectory_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid trajectory JSON: ") + e.what(), 0);
    }
    try {
        TrajectoryLog log;
        log.scenario_name = j.at("scenario").get<std::string>();
        log.Ts = j.at("Ts").get<double>();
        if (j.at("columns").get<std::vector<std::string>>() != TrajectoryLog::csv_columns()) {
            throw ParseError("unexpected column list", 0);
        }
        int row_no = 0;
        for (const auto& row : j.at("steps")) {
            ++row_no;
            if (!row.is_array() || row.size() != kNumCols) {
                throw ParseError("trajectory row has wrong arity", row_no);
            }
            double v[kNumCols];
            for (int i = 0; i < kNumCols; ++i) v[i] = row[static_cast<std::size_t>(i)].get<double>();
            log.steps.push_back(unpack_record(v, row_no));
        }
        return log;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid trajectory JSON: ") + e.what(), 0);
    }
}

std::string metrics_to_json(const Metrics& m) { return metrics_json(m).dump(2); }

void write_metrics_json(const Metrics& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write metrics file: " + path);
    out << metrics_to_json(m) << '\n';
    if (!out) throw IoError("failed while writing metrics file: " + path);
}

std::string comparison_to_json(const ModeComparison& c) {
    ordered_json j;
    j["scenario"] = c.scenario_name;
    j["a"] = c.label_a;
    j["b"] = c.label_b;
    j["channels"] = {"rho", "eps", "beta", "phi", "theta", "psi"};
    const ChannelMetrics* ca[6] = {&c.metrics_a.rho, &c.metrics_a.eps, &c.metrics_a.beta,
                                   &c.metrics_a.phi, &c.metrics_a.theta, &c.metrics_a.psi};
    const ChannelMetrics* cb[6] = {&c.metrics_b.rho, &c.metrics_b.eps, &c.metrics_b.beta,
                                   &c.metrics_b.phi, &c.metrics_b.theta, &c.metrics_b.psi};
    ordered_json os_a = ordered_json::array(), os_b = ordered_json::array();
    ordered_json ct_a = ordered_json::array(), ct_b = ordered_json::array();
    ordered_json os_d = ordered_json::array(), ct_d = ordered_json::array();
    ordered_json me_a = ordered_json::array(), me_b = ordered_json::array();
    for (int ch = 0; ch < 6; ++ch) {
        os_a.push_back(ca[ch]->overshoot);
        os_b.push_back(cb[ch]->overshoot);
        os_d.push_back(c.overshoot_delta[ch]);
        ct_a.push_back(ca[ch]->conv_time);
        ct_b.push_back(cb[ch]->conv_time);
        ct_d.push_back(c.conv_time_delta[ch]);
        me_a.push_back(c.mean_abs_err_a[ch]);
        me_b.push_back(c.mean_abs_err_b[ch]);
    }
    j["overshoot_a"] = std::move(os_a);
    j["overshoot_b"] = std::move(os_b);
    j["overshoot_delta"] = std::move(os_d);
    j["conv_time_a"] = std::move(ct_a);
    j["conv_time_b"] = std::move(ct_b);
    j["conv_time_delta"] = std::move(ct_d);
    j["mean_abs_err_a"] = std::move(me_a);
    j["mean_abs_err_b"] = std::move(me_b);
    return j.dump(2);
}

bool compare_trajectory_files(const std::string& path_a, const std::string& path_b,
                              std::string* diff) {
    std::ifstream a(path_a, std::ios::binary), b(path_b, std::ios::binary);
    if (!a) throw IoError("cannot open trajectory file: " + path_a);
    if (!b) throw IoError("cannot open trajectory file: " + path_b);

    std::string la, lb;
    int line_no = 0;
    while (true) {
        const bool ga = static_cast<bool>(std::getline(a, la));
        const bool gb = static_cast<bool>(std::getline(b, lb));
        ++line_no;
        if (!ga && !gb) return true;
        if (ga != gb) {
            if (diff != nullptr) {
                *diff = "files differ in length at line " + std::to_string(line_no);
            }
            return false;
        }
        if (la != lb) {
            if (diff != nullptr) {
                *diff = "line " + std::to_string(line_no) + " differs:\n  a: " + la +
                        "\n  b: " + lb;
            }
            return false;
        }
    }
}

}  // namespace dockmpc
