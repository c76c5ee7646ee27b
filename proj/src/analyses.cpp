// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/analyses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mbtvlc/error.hpp"
#include "mbtvlc/parallel.hpp"
#include "mbtvlc/report.hpp"

namespace mbtvlc {

using json = nlohmann::ordered_json;

namespace {

std::string tag(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

json bandwidth_json(const Bandwidth& b)
{
    json j = {{"flat", b.flat}};
    j["hz"] = b.flat ? json(nullptr) : json(b.hz);
    return j;
}

std::string text(const json& j) { return j.dump(2) + "\n"; }

double aggregate(const UserLink& l)
{
    double s = 0.0;
    for (double r : l.rate_bps) {
        s += r;
    }
    return s;
}

std::string colors_text(const std::array<bool, 4>& granted)
{
    std::string s;
    for (Color c : kAllColors) {
        if (granted[static_cast<std::size_t>(c)]) {
            s += s.empty() ? "" : "+";
            s += color_name(c);
        }
    }
    return s;
}

}  // namespace

std::vector<IlluminationPlane> illumination_study(const System& sys, const IlluminationAnalysis& a)
{
    const auto fields = luminous_fields(all_branches(sys.units()), sys.scene());
    std::vector<IlluminationPlane> out;
    for (double z : a.planes_z) {
        IlluminationConfig cfg;
        cfg.spacing_m = a.spacing_m;
        cfg.plane_z = z;
        cfg.reflections = a.reflections;
        IlluminationPlane p;
        p.z = z;
        p.grid = illuminance_grid(fields, sys.scene(), cfg);
        p.compliance = compliance_check(p.grid, a.threshold_lux);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<SweepRow> sweep_study(const System& sys, const SweepAnalysis& a)
{
    std::vector<SweepRow> rows;
    for (ReceiverKind k : a.receivers) {
        for (double x : a.lines_x_m) {
            for (double y : a.y_m) {
                for (double r : a.bit_rates_bps) {
                    rows.push_back({k, x, y, r, {}});
                }
            }
        }
    }
    // select_best_tb parallelises internally; rows run in order.
    for (auto& row : rows) {
        row.result = select_best_tb(sys, row.receiver, {row.x, row.y, a.plane_z}, row.bit_rate);
    }
    return rows;
}

MultiuserStudy multiuser_study(const System& sys, const MultiuserAnalysis& a, std::uint64_t seed)
{
    MultiuserStudy s;
    s.positions_a = multiuser_positions(sys, a.reference, 1, a.plane_z);
    s.positions_b = multiuser_positions(sys, a.reference, 4, a.plane_z);
    s.a = run_multiuser(sys, s.positions_a, std::vector<int>(s.positions_a.size(), 4), seed, a.options);
    s.b = run_multiuser(sys, s.positions_b, std::vector<int>(s.positions_b.size(), 1), seed, a.options);

    s.worst_aggregate_a_bps = std::numeric_limits<double>::infinity();
    for (const auto& l : s.a.users) {
        s.worst_aggregate_a_bps = std::min(s.worst_aggregate_a_bps, aggregate(l));
    }
    s.worst_blue_b_bps = std::numeric_limits<double>::infinity();
    for (const auto& l : s.b.users) {
        s.total_b_bps += aggregate(l);
        if (l.granted[static_cast<std::size_t>(Color::Blue)]) {
            s.worst_blue_b_bps = std::min(s.worst_blue_b_bps, l.rate_bps[static_cast<std::size_t>(Color::Blue)]);
        }
    }
    if (std::isinf(s.worst_blue_b_bps)) {
        s.worst_blue_b_bps = 0.0;
    }
    s.fully_loaded_bps = static_cast<double>(sys.tb_count()) * s.worst_aggregate_a_bps;

    // The reference user is user 0; its TB and colours are fixed, only the
    // set of interfering TBs grows.
    const UserGrant& ref = s.a.state.users.at(0);
    const UserChannel ch = user_channel(sys, sys.site(ReceiverKind::NiAdr, s.positions_a[0]), ref.tb, a.options);
    const double r_g = sys.design(ReceiverKind::NiAdr).colors.green;
    s.reference_vs_load.resize(s.a.state.users.size());
    parallel_for(s.reference_vs_load.size(), [&](std::size_t i) {
        std::set<int> tbs;
        for (std::size_t u = 0; u <= i; ++u) {
            tbs.insert(s.a.state.users[u].tb);
        }
        const std::vector<int> active(tbs.begin(), tbs.end());
        const double ig = cci_green(ref.tb, ch.interferer_green_w, active, r_g, a.options.cci_form);
        Fig13Row& row = s.reference_vs_load[i];
        row.active_users = i + 1;
        row.active_tbs = active.size();
        for (Color c : ref.colors) {
            row.rate_bps[static_cast<std::size_t>(c)] = color_rate(sys, ch, ref.tb, c, ig, a.options);
        }
    });
    return s;
}

MobilityStudy mobility_study(const System& sys, const MobilityAnalysis& a, std::uint64_t seed)
{
    require(!a.rho.empty(), "mobility needs at least one utilisation value");
    MobilityStudy s;
    s.rho = a.rho;
    const auto ys = line_positions(a.capacity, a.entrance_y_m, a.step_m);
    const auto lo = std::min_element(a.rho.begin(), a.rho.end()) - a.rho.begin();
    const auto hi = std::max_element(a.rho.begin(), a.rho.end()) - a.rho.begin();
    std::vector<double> pooled;
    for (double x : a.lines_x_m) {
        MobilityLine line;
        line.x = x;
        line.ys = ys;
        line.sinr_db = mobility_sinr_line(sys, x, ys, a.options);
        for (double r : a.rho) {
            const OccupancyModel m{r, a.capacity};
            line.cdf_by_rho.push_back(sinr_cdf_line(line.sinr_db, &m));
        }
        const double mn = *std::min_element(line.sinr_db.begin(), line.sinr_db.end());
        line.entrance_gap_db = line.sinr_db.front() - mn;
        line.entrance_is_min = line.entrance_gap_db <= 1e-9 * std::max(1.0, std::abs(mn));
        line.dominance_holds = stochastically_dominates(line.cdf_by_rho[static_cast<std::size_t>(hi)],
                                                        line.cdf_by_rho[static_cast<std::size_t>(lo)]);
        if (line.entrance_is_min) {
            ++s.lines_checked;
            s.dominance_ok = s.dominance_ok && line.dominance_holds;
        }
        pooled.insert(pooled.end(), line.sinr_db.begin(), line.sinr_db.end());
        s.lines.push_back(std::move(line));
    }
    s.lines_uniform = empirical_cdf(pooled);
    s.random_sinr_db = random_positions_sinr(sys, a.random_samples, seed, a.options);
    s.random = empirical_cdf(s.random_sinr_db);
    s.ks = ks_distance(s.lines_uniform, s.random);
    return s;
}

namespace {

ResultFiles illumination_files(const System& sys, const Scenario& sc)
{
    ResultFiles files;
    const auto planes = illumination_study(sys, sc.illumination);
    json arr = json::array();
    for (const auto& p : planes) {
        std::ostringstream os;
        write_lux_csv(os, p.grid);
        files.emplace_back("lux_z" + tag(p.z) + ".csv", os.str());
        const auto& c = p.compliance;
        arr.push_back({{"plane_z", p.z},
                       {"min", c.min_lux},
                       {"max", c.max_lux},
                       {"pass", c.pass},
                       {"threshold_lux", c.threshold_lux},
                       {"violating_fraction", c.violating_fraction},
                       {"min_at", {c.min_x, c.min_y}}});
    }
    json j = {{"min", arr[0]["min"]}, {"max", arr[0]["max"]}, {"pass", arr[0]["pass"]}, {"planes", arr}};
    files.emplace_back("compliance.json", text(j));
    return files;
}

ResultFiles impulse_files(const System& sys, const Scenario& sc)
{
    ResultFiles files;
    json out = json::array();
    const auto& a = sc.impulse;
    for (ReceiverKind k : a.receivers) {
        const SingleUserResult best = select_best_tb(sys, k, a.position, a.bit_rate_bps);
        const Site site = sys.site(k, a.position);
        const auto tb = static_cast<std::size_t>(best.tb);
        const double pt = sys.tbs()[tb].total_power_w().total();
        json faces = json::array();
        for (std::size_t f = 0; f < site.apertures.size(); ++f) {
            const ImpulseResponse ir = sys.impulse(site, tb, f, pt);
            std::ostringstream os;
            write_binned_csv(os, bin_impulse_response(ir, a.bin_s));
            files.emplace_back("cir_" + receiver_name(k) + "_face" + std::to_string(f) + ".csv", os.str());
            json fj = {{"face", f}, {"received_w", ir.total_power()}};
            if (ir.total_power() > 0.0) {
                fj["mean_delay_s"] = mean_delay(ir);
                fj["delay_spread_s"] = delay_spread(ir);
                fj["bandwidth"] = bandwidth_json(bandwidth_3db(ir));
            }
            faces.push_back(fj);
        }
        out.push_back({{"receiver", receiver_name(k)},
                       {"position", {a.position.x, a.position.y, a.position.z}},
                       {"bit_rate_bps", a.bit_rate_bps},
                       {"tb", best.tb},
                       {"face", best.face},
                       {"received_w", best.received_w},
                       {"mean_delay_s", best.mean_delay_s},
                       {"delay_spread_s", best.delay_spread_s},
                       {"bandwidth", bandwidth_json(best.bandwidth)},
                       {"snr_db", best.link.snr_db},
                       {"ber", best.link.ber},
                       {"faces", faces}});
    }
    files.emplace_back("impulse.json", text(out));
    return files;
}

ResultFiles sweep_files(const System& sys, const Scenario& sc)
{
    CsvTable t({"receiver", "x_m", "y_m", "bit_rate_bps", "tb", "face", "mean_delay_s", "delay_spread_s",
                "bandwidth_hz", "bandwidth_flat", "snr_db", "ber"});
    for (const auto& r : sweep_study(sys, sc.sweep)) {
        const auto& b = r.result;
        t.add_row({receiver_name(r.receiver), sci(r.x), sci(r.y), sci(r.bit_rate), std::to_string(b.tb),
                   std::to_string(b.face), sci(b.mean_delay_s), sci(b.delay_spread_s),
                   b.bandwidth.flat ? "nan" : sci(b.bandwidth.hz), b.bandwidth.flat ? "1" : "0", sci(b.link.snr_db),
                   sci(b.link.ber)});
    }
    return {{"sweep.csv", t.str()}};
}

ResultFiles calibration_files(const System& sys, const Scenario& sc)
{
    const Calibration c = calibrate_detection_stats(sys, sc.calibration, sc.seed);
    const auto& st = c.stats;
    const auto& p = c.probabilities;
    json j = {{"samples", st.samples},
              {"tb_count", sys.tb_count()},
              {"m_ds", st.m_ds},
              {"s_ds", st.s_ds},
              {"m_us", st.m_us},
              {"s_us", st.s_us},
              {"degenerate", st.degenerate},
              {"sigma_t", c.sigma_t},
              {"threshold", p.threshold},
              {"p_cds", p.p_cds},
              {"p_fus", p.p_fus},
              {"p_cus", p.p_cus},
              {"p_cd", p.p_cd},
              {"p_wd", p.p_wd}};
    CsvTable t({"sample", "c_ds", "c_us"});
    for (std::size_t i = 0; i < c.c_ds.size(); ++i) {
        t.add_row({std::to_string(i), sci(c.c_ds[i]), sci(i < c.c_us.size() ? c.c_us[i] : 0.0)});
    }
    return {{"calibration.json", text(j)}, {"calibration_samples.csv", t.str()}};
}

void multiuser_scenario_files(ResultFiles& files, const std::string& label, const std::vector<Vec3>& pos,
                              const MultiuserResult& r)
{
    json users = json::array();
    for (const auto& g : r.state.users) {
        json colors = json::array();
        for (Color c : g.colors) {
            colors.push_back(std::string(color_name(c)));
        }
        users.push_back({{"user", g.user}, {"tb", g.tb}, {"rank", g.rank}, {"colors", colors}});
    }
    json j = {{"seed", r.state.seed},
              {"tb_count", r.state.tb_count},
              {"active_tbs", r.state.active_tbs()},
              {"users", users}};
    files.emplace_back("allocation_" + label + ".json", text(j));

    CsvTable t({"user", "x_m", "y_m", "z_m", "tb", "face", "tone_hz", "cnr_db", "cci_green_a2", "colors",
                "rate_red_bps", "rate_yellow_bps", "rate_green_bps", "rate_blue_bps", "sinr_red_db",
                "sinr_yellow_db", "sinr_green_db", "sinr_blue_db", "aggregate_bps"});
    for (std::size_t u = 0; u < r.users.size(); ++u) {
        const auto& l = r.users[u];
        std::vector<std::string> row = {std::to_string(u), sci(pos[u].x), sci(pos[u].y), sci(pos[u].z),
                                        std::to_string(l.tb), std::to_string(l.face), sci(l.tone_hz),
                                        sci(to_db(l.cnr)), sci(l.cci_green_a2), colors_text(l.granted)};
        for (std::size_t c = 0; c < 4; ++c) {
            row.push_back(sci(l.rate_bps[c]));
        }
        for (std::size_t c = 0; c < 4; ++c) {
            row.push_back(l.granted[c] ? sci(l.sinr_db[c]) : "nan");
        }
        row.push_back(sci(aggregate(l)));
        t.add_row(std::move(row));
    }
    files.emplace_back("users_" + label + ".csv", t.str());
}

ResultFiles multiuser_files(const System& sys, const Scenario& sc)
{
    const MultiuserStudy s = multiuser_study(sys, sc.multiuser, sc.seed);
    ResultFiles files;
    multiuser_scenario_files(files, "a", s.positions_a, s.a);
    multiuser_scenario_files(files, "b", s.positions_b, s.b);
    CsvTable t({"active_users", "active_tbs", "rate_red_bps", "rate_yellow_bps", "rate_green_bps", "rate_blue_bps",
                "aggregate_bps"});
    for (const auto& r : s.reference_vs_load) {
        const double sum = r.rate_bps[0] + r.rate_bps[1] + r.rate_bps[2] + r.rate_bps[3];
        t.add_row({std::to_string(r.active_users), std::to_string(r.active_tbs), sci(r.rate_bps[0]),
                   sci(r.rate_bps[1]), sci(r.rate_bps[2]), sci(r.rate_bps[3]), sci(sum)});
    }
    files.emplace_back("reference_rates.csv", t.str());
    json j = {{"users_a", s.a.users.size()},
              {"users_b", s.b.users.size()},
              {"worst_aggregate_a_bps", s.worst_aggregate_a_bps},
              {"worst_blue_b_bps", s.worst_blue_b_bps},
              {"total_b_bps", s.total_b_bps},
              {"fully_loaded_bps", s.fully_loaded_bps}};
    files.emplace_back("multiuser.json", text(j));
    return files;
}

ResultFiles mobility_files(const System& sys, const Scenario& sc)
{
    const MobilityStudy s = mobility_study(sys, sc.mobility, sc.seed);
    ResultFiles files;
    auto cdf_text = [](const Cdf& c) {
        std::ostringstream os;
        write_cdf_csv(os, c);
        return os.str();
    };
    CsvTable t({"x_m", "y_m", "state", "sinr_db"});
    json lines = json::array();
    for (const auto& l : s.lines) {
        for (std::size_t i = 0; i < l.ys.size(); ++i) {
            t.add_row({sci(l.x), sci(l.ys[i]), std::to_string(i), sci(l.sinr_db[i])});
        }
        for (std::size_t r = 0; r < s.rho.size(); ++r) {
            files.emplace_back("cdf_x" + tag(l.x) + "_rho" + tag(s.rho[r]) + ".csv", cdf_text(l.cdf_by_rho[r]));
        }
        lines.push_back({{"x_m", l.x},
                         {"entrance_gap_db", l.entrance_gap_db},
                         {"entrance_is_min", l.entrance_is_min},
                         {"high_rho_dominates_low_rho", l.dominance_holds}});
    }
    files.emplace_back("sinr_lines.csv", t.str());
    files.emplace_back("cdf_lines_uniform.csv", cdf_text(s.lines_uniform));
    files.emplace_back("cdf_random.csv", cdf_text(s.random));
    json j = {{"rho", s.rho},
              {"lines", lines},
              {"lines_checked", s.lines_checked},
              {"dominance_ok", s.dominance_ok},
              {"random_samples", s.random_sinr_db.size()},
              {"ks_random_vs_lines", s.ks}};
    files.emplace_back("mobility.json", text(j));
    return files;
}

}  // namespace

const std::vector<std::string>& subcommand_names()
{
    static const std::vector<std::string> names = {"illumination", "impulse", "sweep", "scm-calibrate",
                                                   "multiuser", "mobility"};
    return names;
}

ResultFiles run_subcommand(const std::string& name, const Scenario& scenario)
{
    const System sys(scenario.system);
    if (name == "illumination") {
        return illumination_files(sys, scenario);
    }
    if (name == "impulse") {
        return impulse_files(sys, scenario);
    }
    if (name == "sweep") {
        return sweep_files(sys, scenario);
    }
    if (name == "scm-calibrate") {
        return calibration_files(sys, scenario);
    }
    if (name == "multiuser") {
        return multiuser_files(sys, scenario);
    }
    if (name == "mobility") {
        return mobility_files(sys, scenario);
    }
    throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace mbtvlc
