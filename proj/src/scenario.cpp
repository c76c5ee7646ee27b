// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mbtvlc/error.hpp"

namespace mbtvlc {

using json = nlohmann::ordered_json;

namespace {

// Object reader that remembers which keys were consumed.
class Reader {
  public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    ~Reader() noexcept(false)
    {
        if (std::uncaught_exceptions() > 0) {
            return;
        }
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) {
                throw ConfigError(path_ + "." + k + ": unknown key");
            }
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    void get(const std::string& key, T& out)
    {
        if (!j_.contains(key)) {
            return;
        }
        seen_.insert(key);
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    void vec(const std::string& key, Vec3& out)
    {
        std::vector<double> v;
        get(key, v);
        if (j_.contains(key)) {
            if (v.size() != 3) {
                throw ConfigError(path_ + "." + key + ": expected [x, y, z]");
            }
            out = {v[0], v[1], v[2]};
        }
    }

    void vecs(const std::string& key, std::vector<Vec3>& out)
    {
        std::vector<std::vector<double>> v;
        get(key, v);
        if (!j_.contains(key)) {
            return;
        }
        out.clear();
        for (const auto& p : v) {
            if (p.size() != 3) {
                throw ConfigError(path_ + "." + key + ": expected [x, y, z] entries");
            }
            out.push_back({p[0], p[1], p[2]});
        }
    }

    void pairs(const std::string& key, std::vector<std::array<double, 2>>& out)
    {
        std::vector<std::vector<double>> v;
        get(key, v);
        if (!j_.contains(key)) {
            return;
        }
        out.clear();
        for (const auto& p : v) {
            if (p.size() != 2) {
                throw ConfigError(path_ + "." + key + ": expected [azimuth, elevation] entries");
            }
            out.push_back({p[0], p[1]});
        }
    }

    template <class Fn>
    void child(const std::string& key, Fn&& fn)
    {
        if (!j_.contains(key)) {
            return;
        }
        seen_.insert(key);
        Reader r(j_.at(key), path_ + "." + key);
        fn(r);
    }

    template <class E>
    void enumeration(const std::string& key, E& out, const std::vector<std::pair<std::string, E>>& names)
    {
        std::string s;
        get(key, s);
        if (!j_.contains(key)) {
            return;
        }
        for (const auto& [n, e] : names) {
            if (n == s) {
                out = e;
                return;
            }
        }
        throw ConfigError(path_ + "." + key + ": unknown value '" + s + "'");
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

const std::vector<std::pair<std::string, ReceiverKind>> kReceiverNames = {
    {"wfov", ReceiverKind::Wfov}, {"adr", ReceiverKind::Adr}, {"niadr", ReceiverKind::NiAdr}};
const std::vector<std::pair<std::string, CpcMode>> kCpcNames = {{"ideal", CpcMode::Ideal}, {"literal", CpcMode::Literal}};
const std::vector<std::pair<std::string, SecondTone>> kSecondNames = {{"same_face", SecondTone::SameFace},
                                                                      {"best_face", SecondTone::BestFace}};
const std::vector<std::pair<std::string, CciForm>> kCciNames = {{"mean_square", CciForm::MeanSquare},
                                                                {"literal", CciForm::Literal}};
const std::vector<std::pair<std::string, ColorScaling>> kScalingNames = {{"linear", ColorScaling::Linear},
                                                                         {"squared", ColorScaling::Squared}};
const std::vector<std::pair<std::string, SinrColor>> kSinrColorNames = {
    {"min", SinrColor::Min},     {"red", SinrColor::Red},   {"yellow", SinrColor::Yellow},
    {"green", SinrColor::Green}, {"blue", SinrColor::Blue}};

template <class E>
std::string name_of(E e, const std::vector<std::pair<std::string, E>>& names)
{
    for (const auto& [n, v] : names) {
        if (v == e) {
            return n;
        }
    }
    return "?";
}

void read_kinds(Reader& r, const std::string& key, std::vector<ReceiverKind>& out)
{
    std::vector<std::string> names;
    r.get(key, names);
    if (!r.has(key)) {
        return;
    }
    out.clear();
    for (const auto& n : names) {
        bool found = false;
        for (const auto& [s, k] : kReceiverNames) {
            if (s == n) {
                out.push_back(k);
                found = true;
            }
        }
        if (!found) {
            throw ConfigError("unknown receiver '" + n + "'");
        }
    }
}

void read_color_power(Reader& r, ColorPower& p)
{
    r.get("red", p.red);
    r.get("yellow", p.yellow);
    r.get("green", p.green);
    r.get("blue", p.blue);
}

void read_template(Reader& r, UnitTemplate& t)
{
    r.pairs("branch_angles_deg", t.branch_angles_deg);
    r.get("lambertian_order", t.lambertian_order);
    r.get("lds_per_branch", t.lds_per_branch);
    r.child("ld_power_w", [&](Reader& c) { read_color_power(c, t.ld_power_w); });
    r.get("ld_intensity_cd", t.ld_intensity_cd);
}

void read_design(Reader& r, ReceiverDesign& d)
{
    r.get("fov_deg", d.fov_deg);
    r.get("area_m2", d.area_m2);
    r.get("cpc_refractive_index", d.cpc.refractive_index);
    r.get("cpc_acceptance_deg", d.cpc.acceptance_deg);
    r.enumeration("cpc_mode", d.cpc.mode, kCpcNames);
    r.pairs("angles_deg", d.angles_deg);
    if (d.kind == ReceiverKind::NiAdr) {
        r.child("responsivity", [&](Reader& c) {
            c.get("red", d.colors.red);
            c.get("yellow", d.colors.yellow);
            c.get("green", d.colors.green);
            c.get("blue", d.colors.blue);
        });
    } else {
        r.get("responsivity", d.responsivity);
    }
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json vecs_json(const std::vector<Vec3>& v)
{
    json a = json::array();
    for (const auto& p : v) {
        a.push_back(vec_json(p));
    }
    return a;
}

json pairs_json(const std::vector<std::array<double, 2>>& v)
{
    json a = json::array();
    for (const auto& p : v) {
        a.push_back(json::array({p[0], p[1]}));
    }
    return a;
}

json color_json(const ColorPower& p)
{
    return {{"red", p.red}, {"yellow", p.yellow}, {"green", p.green}, {"blue", p.blue}};
}

json template_json(const UnitTemplate& t)
{
    return {{"branch_angles_deg", pairs_json(t.branch_angles_deg)},
            {"lambertian_order", t.lambertian_order},
            {"lds_per_branch", t.lds_per_branch},
            {"ld_power_w", color_json(t.ld_power_w)},
            {"ld_intensity_cd", t.ld_intensity_cd}};
}

json design_json(const ReceiverDesign& d)
{
    json j = {{"fov_deg", d.fov_deg},
              {"area_m2", d.area_m2},
              {"cpc_refractive_index", d.cpc.refractive_index},
              {"cpc_acceptance_deg", d.cpc.acceptance_deg},
              {"cpc_mode", name_of(d.cpc.mode, kCpcNames)},
              {"angles_deg", pairs_json(d.angles_deg)}};
    if (d.kind == ReceiverKind::NiAdr) {
        j["responsivity"] = {
            {"red", d.colors.red}, {"yellow", d.colors.yellow}, {"green", d.colors.green}, {"blue", d.colors.blue}};
    } else {
        j["responsivity"] = d.responsivity;
    }
    return j;
}

json kinds_json(const std::vector<ReceiverKind>& kinds)
{
    json a = json::array();
    for (auto k : kinds) {
        a.push_back(receiver_name(k));
    }
    return a;
}

void validate_scenario(const Scenario& s)
{
    build_room(s.system.room);
    require(s.system.discretization.first_order_edge_m > 0 && s.system.discretization.second_order_edge_m > 0,
            "element edges must be positive");
    require(!s.system.mbt_positions.empty(), "scenario needs at least one MBT unit");
    require(s.illumination.spacing_m > 0, "illumination spacing must be positive");
    require(!s.illumination.planes_z.empty(), "illumination needs at least one plane");
    require(s.impulse.bit_rate_bps > 0 && s.impulse.bin_s > 0, "impulse rate and bin must be positive");
    for (double r : s.sweep.bit_rates_bps) {
        require(r > 0, "sweep bit rates must be positive");
    }
    require(s.calibration.samples >= 2, "calibration needs at least two samples");
    require(s.multiuser.options.ber_target > 0 && s.multiuser.options.ber_target < 0.5, "BER target must lie in (0, 0.5)");
    require(s.mobility.capacity >= 1 && s.mobility.step_m > 0, "invalid mobility line");
    require(s.mobility.random_samples >= 1, "mobility needs at least one random position");
    require(s.mobility.options.aggregate_rate_bps > 0, "aggregate rate must be positive");
    for (double r : s.mobility.rho) {
        require(r >= 0, "utilisation must be non-negative");
    }
    for (auto k : s.impulse.receivers) {
        require(k != ReceiverKind::NiAdr, "impulse analysis uses the W-FOV receiver or the ADR");
    }
    for (auto k : s.sweep.receivers) {
        require(k != ReceiverKind::NiAdr, "sweep analysis uses the W-FOV receiver or the ADR");
    }
}

}  // namespace

std::string receiver_name(ReceiverKind kind) { return name_of(kind, kReceiverNames); }

Scenario parse_scenario(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    Scenario s;
    {
        Reader r(j, "scenario");
        r.get("name", s.name);
        r.get("seed", s.seed);
        r.child("room", [&](Reader& c) {
            c.get("length_m", s.system.room.length_m);
            c.get("width_m", s.system.room.width_m);
            c.get("height_m", s.system.room.height_m);
            c.child("reflectivity", [&](Reader& rr) {
                for (Surface surf : kAllSurfaces) {
                    rr.get(std::string(surface_name(surf)), s.system.room.reflectivity[static_cast<std::size_t>(surf)]);
                }
            });
        });
        r.child("discretization", [&](Reader& c) {
            c.get("first_order_edge_m", s.system.discretization.first_order_edge_m);
            c.get("second_order_edge_m", s.system.discretization.second_order_edge_m);
            std::vector<std::string> surfaces;
            c.get("surfaces", surfaces);
            if (c.has("surfaces")) {
                s.system.discretization.include.fill(false);
                for (const auto& n : surfaces) {
                    bool found = false;
                    for (Surface surf : kAllSurfaces) {
                        if (surface_name(surf) == n) {
                            s.system.discretization.include[static_cast<std::size_t>(surf)] = true;
                            found = true;
                        }
                    }
                    if (!found) {
                        throw ConfigError("unknown surface '" + n + "'");
                    }
                }
            }
        });
        r.child("light_units", [&](Reader& c) {
            c.child("mbt", [&](Reader& m) {
                m.vecs("positions", s.system.mbt_positions);
                read_template(m, s.system.mbt);
            });
            c.child("support", [&](Reader& m) {
                m.vecs("positions", s.system.support_positions);
                read_template(m, s.system.support);
            });
        });
        r.child("receivers", [&](Reader& c) {
            c.child("wfov", [&](Reader& d) { read_design(d, s.system.wfov); });
            c.child("adr", [&](Reader& d) { read_design(d, s.system.adr); });
            c.child("niadr", [&](Reader& d) { read_design(d, s.system.niadr); });
        });
        r.child("noise", [&](Reader& c) {
            c.get("electron_charge_c", s.system.noise.electron_charge);
            c.get("background_a_per_cm2", s.system.noise.background_a_per_cm2);
            c.get("preamp_a_per_rthz", s.system.noise.preamp_a_per_rthz);
            c.get("bandwidth_factor", s.system.noise.bandwidth_factor);
        });
        r.child("tones", [&](Reader& c) {
            c.get("start_hz", s.system.tones.start_hz);
            c.get("spacing_hz", s.system.tones.spacing_hz);
            c.get("bpf_bandwidth_hz", s.system.tones.bpf_bandwidth_hz);
            c.get("tb_count", s.system.tones.tb_count);
        });
        r.child("analysis", [&](Reader& a) {
            a.child("illumination", [&](Reader& c) {
                c.get("spacing_m", s.illumination.spacing_m);
                c.get("planes_z", s.illumination.planes_z);
                c.get("threshold_lux", s.illumination.threshold_lux);
                c.get("reflections", s.illumination.reflections);
            });
            a.child("impulse", [&](Reader& c) {
                read_kinds(c, "receivers", s.impulse.receivers);
                c.vec("position", s.impulse.position);
                c.get("bit_rate_bps", s.impulse.bit_rate_bps);
                c.get("bin_s", s.impulse.bin_s);
            });
            a.child("sweep", [&](Reader& c) {
                read_kinds(c, "receivers", s.sweep.receivers);
                c.get("lines_x_m", s.sweep.lines_x_m);
                c.get("y_m", s.sweep.y_m);
                c.get("bit_rates_bps", s.sweep.bit_rates_bps);
                c.get("plane_z", s.sweep.plane_z);
            });
            a.child("scm_calibration", [&](Reader& c) {
                c.get("samples", s.calibration.samples);
                c.get("plane_z", s.calibration.plane_z);
                c.enumeration("second_tone", s.calibration.second, kSecondNames);
                c.get("exclude_same_unit", s.calibration.exclude_same_unit);
            });
            a.child("multiuser", [&](Reader& c) {
                c.vec("reference", s.multiuser.reference);
                c.get("plane_z", s.multiuser.plane_z);
                c.get("los_cci", s.multiuser.options.los_cci);
                c.enumeration("cci_form", s.multiuser.options.cci_form, kCciNames);
                c.enumeration("color_scaling", s.multiuser.options.scaling, kScalingNames);
                c.get("ber_target", s.multiuser.options.ber_target);
            });
            a.child("mobility", [&](Reader& c) {
                c.get("lines_x_m", s.mobility.lines_x_m);
                c.get("entrance_y_m", s.mobility.entrance_y_m);
                c.get("step_m", s.mobility.step_m);
                c.get("capacity", s.mobility.capacity);
                c.get("rho", s.mobility.rho);
                c.get("random_samples", s.mobility.random_samples);
                c.get("aggregate_rate_bps", s.mobility.options.aggregate_rate_bps);
                c.enumeration("color", s.mobility.options.color, kSinrColorNames);
                c.get("all_tbs_active", s.mobility.options.all_tbs_active);
                c.get("plane_z", s.mobility.options.plane_z);
                c.get("los_cci", s.mobility.options.link.los_cci);
                c.enumeration("cci_form", s.mobility.options.link.cci_form, kCciNames);
                c.enumeration("color_scaling", s.mobility.options.link.scaling, kScalingNames);
            });
        });
    }
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read scenario " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario& s)
{
    const auto& p = s.system;
    json refl = json::object();
    for (Surface surf : kAllSurfaces) {
        refl[std::string(surface_name(surf))] = p.room.reflectivity[static_cast<std::size_t>(surf)];
    }
    json surfaces = json::array();
    for (Surface surf : kAllSurfaces) {
        if (p.discretization.include[static_cast<std::size_t>(surf)]) {
            surfaces.push_back(std::string(surface_name(surf)));
        }
    }
    json mbt = template_json(p.mbt);
    mbt["positions"] = vecs_json(p.mbt_positions);
    json support = template_json(p.support);
    support["positions"] = vecs_json(p.support_positions);

    json j = {
        {"name", s.name},
        {"seed", s.seed},
        {"room", {{"length_m", p.room.length_m}, {"width_m", p.room.width_m}, {"height_m", p.room.height_m},
                  {"reflectivity", refl}}},
        {"discretization", {{"first_order_edge_m", p.discretization.first_order_edge_m},
                            {"second_order_edge_m", p.discretization.second_order_edge_m},
                            {"surfaces", surfaces}}},
        {"light_units", {{"mbt", mbt}, {"support", support}}},
        {"receivers", {{"wfov", design_json(p.wfov)}, {"adr", design_json(p.adr)}, {"niadr", design_json(p.niadr)}}},
        {"noise", {{"electron_charge_c", p.noise.electron_charge},
                   {"background_a_per_cm2", p.noise.background_a_per_cm2},
                   {"preamp_a_per_rthz", p.noise.preamp_a_per_rthz},
                   {"bandwidth_factor", p.noise.bandwidth_factor}}},
        {"tones", {{"start_hz", p.tones.start_hz}, {"spacing_hz", p.tones.spacing_hz},
                   {"bpf_bandwidth_hz", p.tones.bpf_bandwidth_hz}, {"tb_count", p.tones.tb_count}}},
    };
    json a = json::object();
    a["illumination"] = {{"spacing_m", s.illumination.spacing_m},
                         {"planes_z", s.illumination.planes_z},
                         {"threshold_lux", s.illumination.threshold_lux},
                         {"reflections", s.illumination.reflections}};
    a["impulse"] = {{"receivers", kinds_json(s.impulse.receivers)},
                    {"position", vec_json(s.impulse.position)},
                    {"bit_rate_bps", s.impulse.bit_rate_bps},
                    {"bin_s", s.impulse.bin_s}};
    a["sweep"] = {{"receivers", kinds_json(s.sweep.receivers)},
                  {"lines_x_m", s.sweep.lines_x_m},
                  {"y_m", s.sweep.y_m},
                  {"bit_rates_bps", s.sweep.bit_rates_bps},
                  {"plane_z", s.sweep.plane_z}};
    a["scm_calibration"] = {{"samples", s.calibration.samples},
                            {"plane_z", s.calibration.plane_z},
                            {"second_tone", name_of(s.calibration.second, kSecondNames)},
                            {"exclude_same_unit", s.calibration.exclude_same_unit}};
    a["multiuser"] = {{"reference", vec_json(s.multiuser.reference)},
                      {"plane_z", s.multiuser.plane_z},
                      {"los_cci", s.multiuser.options.los_cci},
                      {"cci_form", name_of(s.multiuser.options.cci_form, kCciNames)},
                      {"color_scaling", name_of(s.multiuser.options.scaling, kScalingNames)},
                      {"ber_target", s.multiuser.options.ber_target}};
    a["mobility"] = {{"lines_x_m", s.mobility.lines_x_m},
                     {"entrance_y_m", s.mobility.entrance_y_m},
                     {"step_m", s.mobility.step_m},
                     {"capacity", s.mobility.capacity},
                     {"rho", s.mobility.rho},
                     {"random_samples", s.mobility.random_samples},
                     {"aggregate_rate_bps", s.mobility.options.aggregate_rate_bps},
                     {"color", name_of(s.mobility.options.color, kSinrColorNames)},
                     {"all_tbs_active", s.mobility.options.all_tbs_active},
                     {"plane_z", s.mobility.options.plane_z},
                     {"los_cci", s.mobility.options.link.los_cci},
                     {"cci_form", name_of(s.mobility.options.link.cci_form, kCciNames)},
                     {"color_scaling", name_of(s.mobility.options.link.scaling, kScalingNames)}};
    j["analysis"] = a;
    return j.dump(2) + "\n";
}

void make_coarse(Scenario& scenario)
{
    scenario.system.discretization.first_order_edge_m *= 4.0;
    scenario.system.discretization.second_order_edge_m *= 4.0;
}

Scenario single_user_scenario()
{
    Scenario s;
    s.name = "single_user";
    return s;
}

Scenario multiuser_scenario()
{
    Scenario s;
    s.name = "multiuser";
    return s;
}

std::vector<std::filesystem::path> emit_reference_scenarios(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::vector<std::filesystem::path> out;
    for (const auto& s : {single_user_scenario(), multiuser_scenario()}) {
        const auto path = dir / (s.name + ".json");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw ConfigError("cannot write " + path.string());
        }
        f << dump_scenario(s);
        if (!f) {
            throw ConfigError("cannot write " + path.string());
        }
        out.push_back(path);
    }
    return out;
}

}  // namespace mbtvlc
